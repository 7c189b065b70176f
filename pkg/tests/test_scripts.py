import pandas as pd
import pytest

import reproduce_figures
from minimax import plateau_alpha
from verify_results import verify_results


def test_reproduce_figures_writes_every_file(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    assert reproduce_figures.main() == 0
    assert '❌' not in capsys.readouterr().out

    for name in ('alpha_landscape.csv', 'alpha_landscape_path.csv', 'gt_risk.csv', 'exp_quad.csv'):
        assert (tmp_path / name).exists(), name
    assert (tmp_path / 'gt_risk.csv').read_bytes().startswith(b'b,mse\n')

    curve = pd.read_csv(tmp_path / 'gt_risk.csv')
    assert len(curve) == 200
    assert curve['mse'].iloc[-1] == pytest.approx(plateau_alpha(), abs=1e-9)
    assert len(pd.read_csv(tmp_path / 'alpha_landscape.csv')) == 2500
    assert sorted(pd.read_csv(tmp_path / 'exp_quad.csv')['b'].unique()) == [-0.8, 0.01, 1.2]


def test_verify_results_has_no_failures(capsys):
    assert verify_results() == 0
    out = capsys.readouterr().out
    assert '❌' not in out
    assert 'Verification Complete' in out
