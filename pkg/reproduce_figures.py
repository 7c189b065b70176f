"""
Write the data behind the three figures: the alpha(w, c) landscape,
the phase curve alpha(m/n) and the exponential-quadratic curves
"""

import sys

import pandas as pd

from cli import render
from config import Config
from minimax import alpha_landscape, exp_quad_curve, phase_curve, transition_ratio

# b values of the three legend curves
EXP_QUAD_CASES = [1.2, 0.01, -0.8]


def write_landscape(path='alpha_landscape.csv', ratio=0.8):
    surface, constraint = alpha_landscape(ratio, c_max=5.0, points=50)
    frame = pd.DataFrame(surface)
    path_frame = pd.DataFrame(constraint)
    with open(path, 'w', encoding='utf-8', newline='') as handle:
        handle.write(render(frame, 'csv'))
    path_file = path.replace('.csv', '_path.csv')
    with open(path_file, 'w', encoding='utf-8', newline='') as handle:
        handle.write(render(path_frame, 'csv'))
    print(f"  ✅ {path}: {len(frame)} grid points (m/n = {ratio})")
    print(f"  ✅ {path_file}: constraint w = min({ratio}c, 1)")


def write_phase_curve(path='gt_risk.csv', n_ref=None):
    if n_ref is None:
        n_ref = Config.DEFAULT_N_REF
    ratios = [round(0.01 * i, 12) for i in range(1, 201)]
    frame = pd.DataFrame(phase_curve(ratios, n_ref), columns=['b', 'mse'])
    with open(path, 'w', encoding='utf-8', newline='') as handle:
        handle.write(render(frame, 'csv'))
    print(f"  ✅ {path}: {len(frame)} ratios, transition at m/n = {transition_ratio():.6f}")


def write_exp_quad(path='exp_quad.csv'):
    frames = []
    for b in EXP_QUAD_CASES:
        u, g = exp_quad_curve(b)
        frames.append(pd.DataFrame({'b': b, 'u': u, 'g': g}))
    frame = pd.concat(frames, ignore_index=True)
    with open(path, 'w', encoding='utf-8', newline='') as handle:
        handle.write(render(frame, 'csv'))
    print(f"  ✅ {path}: b in {EXP_QUAD_CASES}")


def main():
    print("\n" + "="*80)
    print("📈 Reproducing figure data")
    print("="*80)

    steps = [
        ("Optimization landscape", write_landscape),
        ("Phase curve", write_phase_curve),
        ("Exponential-quadratic curves", write_exp_quad),
    ]
    failed = 0
    for title, step in steps:
        print(f"\n🔧 {title}")
        try:
            step()
        except Exception as e:
            print(f"  ❌ {title} failed: {e}")
            failed += 1

    print("\n" + "="*80)
    if failed:
        print(f"⚠️  {failed} figure(s) could not be written")
    else:
        print("✅ All figure data written!")
    print("="*80)
    return 1 if failed else 0


if __name__ == '__main__':
    sys.exit(main())
