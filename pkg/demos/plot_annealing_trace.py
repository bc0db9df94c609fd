"""
Watching the annealer cool
==========================

Minimize the 2-D Rastrigin function and inspect the recorded trace:
visiting temperature, current energy and best energy per iteration.
"""

import numpy as np

from scagen import GsaParams, ObjectiveSpec, gsa_minimize


def rastrigin(x):
    return float(20 + np.sum(x * x - 10 * np.cos(2 * np.pi * x)))


objective = ObjectiveSpec.box(rastrigin, 2, -5.12, 5.12)
result = gsa_minimize(objective, [4.0, 4.0], GsaParams(), seed=0, record_trace=True)

print("best x:", result.best_x, "energy:", result.best_energy)
print("iterations:", result.iterations_used, "evaluations:", result.n_evaluations)

temp, current, best = result.trace.T
for t in np.unique(np.geomspace(1, len(temp), 8).astype(int)):
    print(f"t={t:5d}  T_v={temp[t - 1]:10.3f}  E={current[t - 1]:8.4f}  best={best[t - 1]:.2e}")

# heavier visiting tails (larger q_v) take more long jumps early on
for q_v in (1.5, 2.62):
    runs = [gsa_minimize(objective, [4.0, 4.0], GsaParams(q_v=q_v), seed=s).best_energy for s in range(10)]
    print(f"q_v={q_v}: median best energy over 10 seeds {np.median(runs):.2e}")
