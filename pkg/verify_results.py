"""
Verify the headline numbers: hand-enumerated MSE, oracle agreement,
plateau constant and the phase transition
"""

import math
import sys

from core import build_distribution, uniform
from exact import brute_force_mse, exact_mse
from minimax import (
    lambert_w0,
    objective_alpha,
    phase_curve,
    plateau_alpha,
    solve_worst_case,
    transition_ratio,
)


def check(label, ok, detail):
    mark = "✅" if ok else "❌"
    print(f"  {mark} {label}: {detail}")
    return ok


def verify_results():
    """Print one line per check; return the number of failures"""
    print("\n" + "="*80)
    print("🔍 RESULT VERIFICATION")
    print("="*80)
    results = []

    print("\n📊 Exact MSE")
    value = exact_mse(uniform(2), 2).mse
    results.append(check("uniform(2), n=2", abs(value - 0.625) <= 1e-15, f"{value:.15g} (expected 0.625)"))
    for probs in ([0.7, 0.2, 0.1], [0.5, 0.5, 0.0]):
        dist = build_distribution(probs)
        worst = max(abs(exact_mse(dist, n).mse - brute_force_mse(dist, n)) for n in range(1, 7))
        results.append(check(f"oracle {probs}, n=1..6", worst <= 1e-12, f"max gap {worst:.3g}"))

    print("\n📐 Worst case")
    w2 = lambert_w0(2.0)
    results.append(check("W(2)", abs(w2 * math.exp(w2) - 2.0) <= 1e-13, f"{w2:.12f}"))
    plateau = plateau_alpha()
    results.append(check(
        "plateau constant", f"{plateau:.3f}" == "0.608" and abs(plateau - objective_alpha(1.0, w2)) <= 1e-12,
        f"{plateau:.12f}"))
    solution = solve_worst_case(math.inf, 100)
    results.append(check("m = inf", solution.regime.value == 'Plateau', f"alpha={solution.alpha:.12f}"))

    print("\n📈 Phase transition")
    ratios = [round(0.05 * i, 12) for i in range(1, 41)]
    curve = phase_curve(ratios, 1000)
    alphas = [alpha for _, alpha in curve]
    results.append(check(
        "nondecreasing", all(b >= a - 1e-12 for a, b in zip(alphas, alphas[1:])), f"{len(alphas)} ratios"))
    flat = [alpha for b, alpha in curve if b >= 1.18]
    results.append(check(
        "flat past 1/W(2)", all(abs(alpha - plateau) <= 1e-9 for alpha in flat),
        f"transition at m/n = {transition_ratio():.4f}"))

    failures = results.count(False)
    print(f"\n{'='*80}")
    print("✅ Verification Complete!" if not failures else f"⚠️  {failures} check(s) failed")
    print("="*80)
    return failures


if __name__ == '__main__':
    sys.exit(1 if verify_results() else 0)
