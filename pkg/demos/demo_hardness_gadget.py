"""Compiling a monotone planar formula into a 3-color instance.

The generated instance has 13 active (multichromatic) points per
variable-clause edge and a decision threshold W that a standard solution
meets exactly when the formula is satisfiable.
"""

import itertools

from mcsg import core, gadgets

cnf = gadgets.parse_cnf("p mcnf 2 1\n+ 1 2\n")
g = gadgets.build_gadget(cnf)
print(f"single clause (x1 or x2): r = {g.r}, eps = {g.epsilon}, delta = {g.delta}")
print(f"active points: {g.active_points.size} (= 13 r)")
print(f"instance size once materialized: {g.instance.n} points")
print(f"threshold W = {g.W:.6f}")

for bits in itertools.product([False, True], repeat=2):
    if not cnf.satisfies(bits):
        print(f"assignment {bits}: unsatisfying, no witness")
        continue
    w = gadgets.build_witness(g, bits)
    ok = core.is_csg(g.instance, w.edges)
    print(f"assignment {bits}: witness cost {w.cost:.6f}, spans: {ok}, "
          f"|cost - W|/W = {abs(w.cost - g.W) / g.W:.2e}")

fig2 = gadgets.build_gadget(gadgets.parse_cnf(gadgets.FIG2_CNF))
print(f"(x1|x3|x5)(!x1|!x5)(!x2|!x3|!x4): r = {fig2.r}, "
      f"active points = {fig2.active_points.size} (instance stays lazy)")
