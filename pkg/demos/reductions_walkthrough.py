"""
From REACH, SAT and QBF to model checking
=========================================

Each generator builds a Kripke model, a start team and a formula.  The
expected answer comes from a brute-force oracle on the original instance.
"""

from teamcheck import CnfInstance, Digraph, QbfInstance, check, gen_qbf, gen_reach, gen_sat, render_formula
from teamcheck.reductions import verify_reduction

# reachability: the formula holds exactly when t cannot be reached
g = Digraph(("s", "m", "t"), {("s", "m"), ("m", "t")}, "s", "t")
inst = gen_reach(g)
print(render_formula(inst.formula), "expected", inst.expected, "got", check(inst.model, inst.team, inst.formula).value)

# SAT: dia picks one literal world per clause, dep forces a consistent assignment
psi = CnfInstance(2, (frozenset({1, 2}), frozenset({-1}), frozenset({-2})))
for mode in ["sat", "unsat-accept", "always-accept", "always-reject"]:
    inst = gen_sat(psi, mode)
    print(f"{mode:14} expected {inst.expected!s:5} got {check(inst.model, inst.team, inst.formula).value}")

# QBF: E x A y E z (x | !y | !z) & (x | y | z)
phi = QbfInstance.alternating(3, [[1, -2, -3], [1, 2, 3]])
inst = gen_qbf(phi)
print(len(inst.model.worlds), "worlds;", render_formula(inst.formula))
print("expected", inst.expected, "got", check(inst.model, inst.team, inst.formula).value)

# q on the existential chains as well breaks the construction: E x (x) & (!x) becomes true
bad = gen_qbf(QbfInstance.alternating(1, [[1], [-1]]), q_on_existential_chains=True)
print("literal labeling:", check(bad.model, bad.team, bad.formula).value, "but the QBF is", bad.expected)

# the harness compares many instances at once
for kind in ["reach", "sat", "qbf"]:
    r = verify_reduction(kind, count=50, seed=1, keep_instances=False)
    print(kind, r["matrix"])
