"""The kla command line: output, JSON reports and exit codes"""

import json

import pytest

from cli import COMMANDS, main


def run_json(capsys, argv):
    code = main(argv + ['--json'])
    return code, json.loads(capsys.readouterr().out)


def test_every_command_is_registered():
    assert len(COMMANDS) == 32


def test_dims_prints_a_table(capsys, samples):
    assert main(['dims', str(samples / 'g4.lie'), '-N', '3']) == 0
    out = capsys.readouterr().out
    assert out.startswith('G4')
    assert 'free' in out


def test_betti_json_envelope(capsys, samples):
    code, report = run_json(capsys, ['betti', str(samples / 'g4.lie'), '-N', '4'])
    assert code == 0
    assert report['command'] == 'betti'
    assert report['config']['max_degree'] == 4
    assert report['result']['diagonal'] == [1, 4, 1, 0, 0]
    assert report['result']['quadratic']['text'] == 'PASS(4)'


def test_quadratic_check_fails_for_h1(capsys, samples):
    assert main(['quadratic-check', str(samples / 'h1.lie'), '-N', '4']) == 1
    assert 'FAIL(2,3,2)' in capsys.readouterr().out


def test_koszul_assertion_is_refuted(capsys):
    assert main(['betti', '--catalog', 'h2', '-N', '4', '--assert-koszul']) == 1
    assert 'Koszul assertion refuted' in capsys.readouterr().out


def test_bk_check_with_a_witness_file(capsys, samples):
    code, report = run_json(capsys, ['bk-check', str(samples / 'c4.graph'), '-N', '4',
                                     '--strategy', f"list:{samples / 'c4_witness.txt'}"])
    assert code == 1
    assert report['result']['passed'] is False
    entry = report['result']['subalgebras'][0]
    assert entry['verdict']['bidegree'] == [2, 3]


def test_bk_check_coordinate_subsets_pass(capsys, samples):
    assert main(['bk-check', str(samples / 'c4.graph'), '-N', '4']) == 0
    assert '10 subalgebras checked, 0 not quadratic' in capsys.readouterr().out


def test_droms(capsys, samples):
    assert main(['droms', str(samples / 'c4.graph')]) == 1
    assert capsys.readouterr().out == 'not Droms: induced square {a,b,c,d}\n'
    assert main(['droms', str(samples / 'p4.graph')]) == 1
    assert 'induced path' in capsys.readouterr().out


def test_chordal_and_decompose(capsys, samples):
    assert main(['chordal', str(samples / 'p4.graph')]) == 0
    capsys.readouterr()
    assert main(['chordal', str(samples / 'c4.graph')]) == 1
    assert 'chordless cycle' in capsys.readouterr().out
    assert main(['decompose', str(samples / 'c4.graph')]) == 1
    assert capsys.readouterr().out.startswith('non_decomposable')


def test_euler_from_graph_and_presentation(capsys, samples):
    code, report = run_json(capsys, ['euler', str(samples / 'c4.graph')])
    assert (code, report['result']['euler']) == (0, 1)
    code, report = run_json(capsys, ['euler', str(samples / 'g4.lie'), '-N', '4'])
    assert (code, report['result']['euler']) == (0, -2)


def test_eigenvalues(capsys, samples):
    assert main(['eigenvalues', '--poly', '1,4,1']) == 0
    capsys.readouterr()
    assert main(['eigenvalues', '--poly', '1,1,-2']) == 1
    assert 'nonpositive real eigenvalues' in capsys.readouterr().out
    code, report = run_json(capsys, ['eigenvalues', str(samples / 'k7_8k1.graph')])
    assert report['result']['polynomial'] == [1, 15, 21, 35, 35, 21, 7, 1]
    assert report['result']['provenance'] == 'clique'
    assert any(abs(re + 0.02463) < 1e-3 and abs(abs(im) - 0.80986) < 1e-3
               for re, im in report['result']['inverses'])


def test_omega_and_newton(capsys):
    assert main(['omega', '--b1', '4', '--b2', '1', '--n', '2']) == 0
    assert capsys.readouterr().out.strip().endswith('= 12')
    assert main(['omega', '--b1', '2', '--b2', '2', '--n', '2']) == 1
    capsys.readouterr()
    assert main(['newton', '--poly', '1,3,3,1']) == 0


def test_dual_and_froberg(capsys):
    code, report = run_json(capsys, ['dual', '--catalog', 'g4'])
    assert report['result']['dims'] == [1, 4, 1, 0, 0]
    assert main(['froberg', '--catalog', 'h2', '-N', '5']) == 1
    assert 'FirstDefect(4, 5)' in capsys.readouterr().out


def test_classify_one_relator(capsys, samples):
    assert main(['classify-1rel', str(samples / 'g4.lie')]) == 0
    assert 'G_4' in capsys.readouterr().out


def test_hnn_commands(capsys, samples):
    assert main(['hnn-decompose', str(samples / 'kosz2.lie'), '--x', 'x', '-N', '4']) == 0
    assert 'Hilbert series preserved to degree 4: True' in capsys.readouterr().out
    code, report = run_json(capsys, ['hnn-compose', '--catalog', 'free3', '-N', '4',
                                     '--derivation', 'x1=[x2,x3]', '--stable-letter', 't'])
    assert code == 0
    assert report['result']['ok'] is True


def test_hnn_decompose_defaults_to_the_last_generator(capsys, samples):
    code, report = run_json(capsys, ['hnn-decompose', str(samples / 'kosz2.lie'), '-N', '4'])
    assert code == 0
    assert report['result']['stable_letter'] == 'w'
    assert report['result']['hilbert_preserved'] is True


def test_field_override(capsys, samples):
    code, report = run_json(capsys, ['dims', str(samples / 'g4.lie'), '-N', '2', '--field', '3'])
    assert code == 0
    assert report['config']['field'] == 'gf(3)'
    assert report['result']['dims'] == [4, 5]


def test_plot_is_written(capsys, samples, tmp_path):
    target = tmp_path / 'dims.html'
    assert main(['dims', str(samples / 'g4.lie'), '-N', '3', '--plot', str(target)]) == 0
    assert target.exists()


@pytest.mark.parametrize('argv', [
    ['dims', '--catalog', 'nonsense'],
    ['dims', '--catalog', 'g4', '-N', '1'],
    ['dims', '--catalog', 'g4', '--field', '4'],
    ['dims', 'missing.lie'],
    ['dual', '--catalog', 'h1'],
])
def test_bad_input_exits_with_two(capsys, argv):
    assert main(argv) == 2
    assert 'error' in capsys.readouterr().err


def test_parse_errors_name_the_file(capsys, tmp_path):
    path = tmp_path / 'bad.lie'
    path.write_text("generators x, y\nrelations [x,q]\n")
    assert main(['dims', str(path)]) == 2
    assert 'bad.lie' in capsys.readouterr().err


def test_unknown_command_is_an_argparse_error():
    with pytest.raises(SystemExit) as info:
        main(['frobnicate'])
    assert info.value.code == 2


def test_unexpected_failures_exit_with_two(capsys, monkeypatch):
    def broken(config):
        raise RuntimeError('boom')

    monkeypatch.setitem(COMMANDS, 'dims', broken)
    assert main(['dims', '--catalog', 'g4']) == 2
    assert 'error: RuntimeError: boom' in capsys.readouterr().err
