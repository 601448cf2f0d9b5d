# Utils package for the graded Lie algebra workbench
