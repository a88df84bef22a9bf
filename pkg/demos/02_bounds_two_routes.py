"""Local bounds, heuristic quantum maxima and certified upper bounds.

For each built-in inequality: the exact local bound by strategy
enumeration, a see-saw lower bound on the quantum maximum, and a
moment-matrix (outer SDP relaxation) upper bound.  Agreement of the two
quantum routes certifies the value.

Run:  python3 demos/02_bounds_two_routes.py        (three-party only)
      DEMO_HEAVY=1 python3 demos/02_bounds_two_routes.py   (adds 4-party)
"""

import os

from ditomo.catalog import INEQUALITIES, get_inequality
from ditomo.moment import build_sequence_set, build_structure, npa_upper_bound
from ditomo.pi_bell import local_bound
from ditomo.seesaw import SeesawConfig, seesaw_optimize

heavy = bool(os.environ.get("DEMO_HEAVY"))
structures = {3: build_structure(build_sequence_set("local2"))}
if heavy:
    structures[4] = build_structure(build_sequence_set("local2_4party"))

print(f"{'name':>8} {'N':>2} {'local L':>14} {'see-saw Q':>14} {'NPA bound':>14}")
for name in INEQUALITIES:
    g = get_inequality(name)
    n = g.num_parties
    if n not in structures:
        print(f"{name:>8} {n:>2}   (4-party: set DEMO_HEAVY=1)")
        continue
    L, _ = local_bound(g)
    q_lower, _scenario = seesaw_optimize(g, SeesawConfig(num_seeds=20))
    q_upper, result = npa_upper_bound(g, structure=structures[n], tol=1e-8)
    print(f"{name:>8} {n:>2} {float(L):>14.8f} {q_lower:>14.8f} "
          f"{q_upper:>14.8f}   (gap {q_upper - q_lower:.2e}, "
          f"sdp {result.status})")
