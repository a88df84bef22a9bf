"""Synthesize W-state Bell inequalities by linear programming.

Walks through the three shipped solutions: the optimal-angle inequality
(largest quantum/local ratio), the exact setting-symmetric solution at
pi/4, and the marginal-free variant, then scans the full angle range.

Run:  python3 demos/01_synthesize_inequalities.py
"""

import math

from ditomo.exactnum import Rad2
from ditomo.inequality_synth import default_phi_grid, scan, synthesize

OPT_ANGLE = 0.09275644 * math.pi

print("== optimal angle ==")
res = synthesize(OPT_ANGLE)
print(f"phi = {OPT_ANGLE:.8f} rad (0.09275644 pi)")
print(f"status {res.status}, Q/L = {res.q_over_l:.8f}")
print("coefficients b1..b9:")
for i, b in enumerate(res.b.coefficients, start=1):
    print(f"  b{i} = {float(b):+.8f}")
print(f"W state is top eigenvector: {res.eigenstate_maximal}")

print("\n== pi/4, exact arithmetic over a + b sqrt(2) ==")
res = synthesize(math.pi / 4, exact=True)
print(f"Q/L = {res.Q} = {float(res.Q):.8f}")
print(f"Q/L * (872 - 48 sqrt(2)) = {res.Q * Rad2(872, -48)}  (the scaled form)")

print("\n== pi/4, no single-party marginals ==")
res = synthesize(math.pi / 4, no_marginals=True, exact=True)
print(f"Q/L = {res.Q}")
print("eta * 6 =", [str(Rad2.coerce(v) * Rad2(6)) for v in res.eta])

print("\n== angle scan (33 points; use 512 for the full profile) ==")
rows = scan(default_phi_grid(33))
for phi, q in rows[::4]:
    bar = "#" * int(40 * (q - 1.0) / 0.5)
    print(f"  phi = {phi:.4f}  Q/L = {q:.6f}  {bar}")
best_phi, best_q = max(rows, key=lambda r: r[1])
print(f"peak: Q/L = {best_q:.8f} at phi = {best_phi:.8f} "
      f"({best_phi / math.pi:.8f} pi)")
