import io
import json
import math

import pandas as pd
import pytest

from cli import RunConfig, main, parse_dist_spec, ratio_grid, render, run
from core import ValidationError
from minimax import phase_curve, plateau_alpha

MSE_KEYS = [
    'm', 'n', 'mse', 'e_gt_sq', 'e_cross', 'e_mm_sq', 'mse_thm1', 'mse_thm2',
    'gap_exact_thm1', 'gap_exact_thm2', 'gap_thm1_thm2',
]
WORST_CASE_KEYS = [
    'm', 'n', 'alpha', 'w', 'c', 'regime', 'mse_leading',
    'uniform_support', 'atom_weight', 'total_support',
]


def run_json(capsys, *argv):
    assert main([*argv, '--format', 'json']) == 0
    return json.loads(capsys.readouterr().out)


def exit_code(argv):
    try:
        return main(argv)
    except SystemExit as e:
        return e.code


# mse

def test_mse_hand_case(capsys):
    report = run_json(capsys, 'mse', '--dist', 'uniform:2', '--n', '2')
    assert list(report) == MSE_KEYS
    assert report['mse'] == pytest.approx(0.625, abs=1e-12)
    assert report['mse_thm1'] == pytest.approx(0.375, abs=1e-12)
    assert report['gap_exact_thm1'] == pytest.approx(0.25, abs=1e-12)


def test_mse_point_mass(capsys):
    report = run_json(capsys, 'mse', '--dist', '1.0', '--n', '5')
    assert report['mse'] == 0.0
    assert report['mse_thm1'] == 0.0
    # the poissonized formula keeps an e^-n remainder
    assert report['mse_thm2'] == pytest.approx((6 * math.exp(-5) - math.exp(-10)) / 5, rel=1e-9)


def test_mse_optional_columns(capsys):
    report = run_json(capsys, 'mse', '--dist', '0.5,0.3,0.2', '--n', '4', '--oracle', '--occupancy')
    assert report['mse_oracle'] == pytest.approx(report['mse'], abs=1e-11)
    assert 'mse_occupancy' in report


def test_mse_single_draw_has_no_first_moment_formula(capsys):
    report = run_json(capsys, 'mse', '--dist', 'uniform:3', '--n', '1')
    assert report['mse_thm1'] is None
    assert report['gap_exact_thm1'] is None


def test_mse_oracle_guard(capsys):
    assert main(['mse', '--dist', 'uniform:100', '--n', '100', '--oracle']) == 1
    assert 'instance too large for oracle' in capsys.readouterr().err


def test_mse_csv_is_one_row(capsys):
    assert main(['mse', '--dist', 'uniform:2', '--n', '2']) == 0
    header, row = capsys.readouterr().out.splitlines()
    assert header.split(',') == MSE_KEYS
    assert dict(zip(header.split(','), row.split(',')))['mse'] == '0.625'


@pytest.mark.parametrize('spec', ['uniform:x', 'zipf:3', 'nonsense', '0.5,-0.5', '', 'dirac-uniform:3:2'])
def test_mse_bad_distribution_is_usage_error(spec, capsys):
    assert main(['mse', '--dist', spec, '--n', '3']) == 2
    assert capsys.readouterr().err.startswith('error:')


def test_distribution_file(tmp_path, capsys):
    path = tmp_path / 'dist.txt'
    path.write_text('# three symbols\n0.5\n0.25  # middle\n\n0.25\n', encoding='utf-8')
    report = run_json(capsys, 'mse', '--dist', str(path), '--n', '3')
    assert report['m'] == 3


def test_distribution_file_must_sum_to_one(tmp_path):
    path = tmp_path / 'dist.txt'
    path.write_text('0.5\n0.6\n', encoding='utf-8')
    with pytest.raises(ValidationError):
        parse_dist_spec(str(path))


@pytest.mark.parametrize('spec, m', [('uniform:4', 4), ('dirac-uniform:4:0.5', 5), ('zipf:6:1.1', 6), ('2,1,1', 3)])
def test_parse_dist_spec(spec, m):
    assert parse_dist_spec(spec).m == m


# worst-case

def test_worst_case_plateau(capsys):
    report = run_json(capsys, 'worst-case', '--n', '100', '--m', 'inf')
    assert list(report) == WORST_CASE_KEYS
    assert report['m'] == 'inf'
    assert report['regime'] == 'Plateau'
    assert report['alpha'] == pytest.approx(0.6080, abs=1e-4)
    assert report['c'] == pytest.approx(0.852605502, abs=1e-9)
    assert report['w'] == 1
    assert report['atom_weight'] == 0


def test_worst_case_constrained(capsys):
    report = run_json(capsys, 'worst-case', '--n', '100', '--m', '50')
    assert report['m'] == 50
    assert report['regime'] == 'Constrained'
    assert report['w'] == pytest.approx(0.5 * report['c'], rel=1e-10)
    assert report['total_support'] == report['uniform_support'] + 1


@pytest.mark.parametrize('argv', [
    ['worst-case', '--n', '1', '--m', '5'],
    ['worst-case', '--n', '100', '--m', 'lots'],
    ['worst-case', '--n', '100', '--m', '1'],
])
def test_worst_case_usage_errors(argv):
    assert exit_code(argv) == 2


# phase-curve

def test_phase_curve_csv(capsys):
    assert main(['phase-curve', '--start', '0.1', '--stop', '2.0', '--step', '0.1']) == 0
    text = capsys.readouterr().out
    assert text.startswith('b,mse\n')
    assert '\r' not in text
    table = pd.read_csv(io.StringIO(text))
    assert len(table) == 20
    assert table['b'].is_monotonic_increasing
    plateau = table.loc[table['b'] >= 1.2, 'mse']
    assert len(plateau) == 9
    assert (plateau - plateau_alpha()).abs().max() <= 1e-9
    assert f"{plateau.iloc[0]:.5f}" == '0.60804'


def test_phase_curve_round_trip(capsys):
    ratios = '0.05,1.173,0.5,2.0'
    assert main(['phase-curve', '--ratios', ratios]) == 0
    table = pd.read_csv(io.StringIO(capsys.readouterr().out))
    expected = phase_curve(sorted(float(b) for b in ratios.split(',')), 1000)
    assert table['b'].tolist() == [b for b, _ in expected]
    for parsed, (_, alpha) in zip(table['mse'], expected):
        assert parsed == pytest.approx(alpha, rel=1e-11)
    assert table.loc[table['b'] == 1.173, 'mse'].iloc[0] == pytest.approx(0.608, abs=1e-3)


def test_phase_curve_json(capsys):
    report = run_json(capsys, 'phase-curve', '--ratios', '0.5,1.5')
    assert [row['b'] for row in report['rows']] == [0.5, 1.5]


@pytest.mark.parametrize('argv', [
    ['phase-curve', '--start', '2.0', '--stop', '1.0', '--step', '0.1'],
    ['phase-curve', '--start', '0.1', '--stop', '1.0', '--step', '0'],
    ['phase-curve', '--ratios', ','],
    ['phase-curve', '--ratios', '0.5', '--n-ref', '0'],
    ['phase-curve', '--ratios', '0.5', '--n-ref', '1'],
    ['phase-curve'],
])
def test_phase_curve_usage_errors(argv):
    assert exit_code(argv) == 2


def test_ratio_grid_avoids_drift():
    grid = ratio_grid(RunConfig(subcommand='phase-curve', start=0.05, stop=2.0, step=0.05))
    assert len(grid) == 40
    assert grid[-1] == 2.0
    assert 1.15 in grid


def test_output_file(tmp_path, capsys):
    target = tmp_path / 'gt_risk.csv'
    assert main(['phase-curve', '--ratios', '1.0,2.0', '--output', str(target)]) == 0
    assert capsys.readouterr().out == ''
    assert target.read_bytes().startswith(b'b,mse\n')


def test_unwritable_output_is_computational_error(tmp_path, capsys):
    target = tmp_path / 'missing' / 'gt_risk.csv'
    assert main(['phase-curve', '--ratios', '1.0', '--output', str(target)]) == 1
    assert 'error:' in capsys.readouterr().err
    assert not target.exists()


# simulate

def test_simulate_is_deterministic(capsys):
    argv = ['simulate', '--dist', 'uniform:2', '--n', '2', '--trials', '20000', '--seed', '7']
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    assert capsys.readouterr().out == first


def test_simulate_reports_z_score(capsys):
    report = run_json(capsys, 'simulate', '--dist', 'uniform:2', '--n', '2', '--trials', '20000', '--seed', '7')
    assert report['exact_mse'] == pytest.approx(0.625)
    assert abs(report['z_score']) <= 4
    assert report['trials'] == 20000
    assert report['seed'] == 7


def test_simulate_same_output_under_thread_cap(capsys, monkeypatch):
    argv = ['simulate', '--dist', 'zipf:10:1', '--n', '30', '--trials', '3000', '--seed', '3']
    assert main(argv) == 0
    free = capsys.readouterr().out
    monkeypatch.setenv('GT_RISK_THREADS', '1')
    assert main(argv) == 0
    assert capsys.readouterr().out == free


@pytest.mark.slow
def test_simulate_full_scale(capsys):
    report = run_json(capsys, 'simulate', '--dist', 'uniform:2', '--n', '2', '--trials', '1000000', '--seed', '7')
    assert abs(report['z_score']) <= 4


def test_simulate_needs_two_trials():
    assert exit_code(['simulate', '--dist', 'uniform:2', '--n', '2', '--trials', '1']) == 2


def test_bad_thread_setting_is_computational_error(monkeypatch, capsys):
    monkeypatch.setenv('GT_RISK_THREADS', 'many')
    assert main(['simulate', '--dist', 'uniform:2', '--n', '2', '--trials', '10']) == 1
    assert 'GT_RISK_THREADS' in capsys.readouterr().err


# lemmas and landscape

def test_exp_quad_lemma(capsys):
    report = run_json(capsys, 'lemmas', 'exp-quad', '--b', '0')
    assert report['extremes'] == [2.0]
    report = run_json(capsys, 'lemmas', 'exp-quad', '--b', '-0.8')
    assert len(report['extremes']) == 2
    assert max(report['extreme_residuals']) <= 1e-8


def test_beta_mode_lemma(capsys):
    report = run_json(capsys, 'lemmas', 'beta-mode', '--a', '1', '--b', '9')
    assert report['mode'] == pytest.approx(0.1)


def test_lambert_lemma(capsys):
    report = run_json(capsys, 'lemmas', 'lambert-w', '--x', '2')
    assert report['w'] == pytest.approx(0.852605502, abs=1e-9)
    assert exit_code(['lemmas', 'lambert-w', '--x', '-1']) == 2


def test_exp_quad_curve_csv(capsys):
    assert main(['lemmas', 'exp-quad-curve', '--b', '1.2', '--points', '11']) == 0
    table = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert list(table.columns) == ['u', 'g']
    assert len(table) == 11


def test_beta_mode_rejects_bad_shape():
    assert exit_code(['lemmas', 'beta-mode', '--a', '0', '--b', '1']) == 2


def test_landscape_csv(capsys):
    assert main(['landscape', '--ratio', '0.8', '--points', '5']) == 0
    table = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert list(table.columns) == ['c', 'w', 'alpha', 'feasible']
    assert len(table) == 25


@pytest.mark.parametrize('argv', [
    ['landscape', '--ratio', '0.8', '--points', '0'],
    ['landscape', '--ratio', '0.8', '--points', '1'],
    ['lemmas', 'exp-quad-curve', '--b', '1.2', '--points', '0'],
])
def test_grid_points_must_be_at_least_two(argv):
    assert exit_code(argv) == 2


def test_unknown_subcommand_is_usage_error():
    assert exit_code(['fit']) == 2


# library surface

def test_run_validates_config():
    with pytest.raises(ValidationError):
        run(RunConfig(subcommand='mse', n=3))
    with pytest.raises(ValidationError):
        run(RunConfig(subcommand='lemmas', lemma='beta-mode', a=1.0))


def test_json_schema_is_stable():
    config = RunConfig(subcommand='worst-case', n=100, m='50')
    assert render(run(config), 'json') == render(run(config), 'json')
