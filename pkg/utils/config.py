"""Environment-driven defaults, overridable from the command line"""

import os

from dotenv import load_dotenv

load_dotenv()

DEFAULT_MAX_DEGREE = int(os.getenv('KLA_MAX_DEGREE', '6'))
DEFAULT_FIELD = os.getenv('KLA_FIELD', 'rational')
DEFAULT_SEED = int(os.getenv('KLA_SEED', '0'))
EIGEN_TOL = float(os.getenv('KLA_EIGEN_TOL', '1e-12'))
EIGEN_MAX_ITER = int(os.getenv('KLA_EIGEN_MAX_ITER', '500'))
MAX_CANDIDATES = int(os.getenv('KLA_MAX_CANDIDATES', '64'))
LOG_LEVEL = os.getenv('KLA_LOG_LEVEL', 'WARNING')

# Graphs larger than this are refused by exact clique enumeration
MAX_CLIQUE_VERTICES = int(os.getenv('KLA_MAX_CLIQUE_VERTICES', '20'))
