"""
Evaluating formulas on teams
============================

A team is a set of worlds.  Atoms are checked on every world of the team at
once, and dependence atoms compare worlds with each other.
"""

from teamcheck import KripkeModel, check, check_reference, parse_formula

# three worlds; a sees b and c, b is a dead end
model = KripkeModel(
    ["a", "b", "c"],
    [("a", "b"), ("a", "c"), ("c", "c")],
    {"a": ["p"], "b": ["p", "q"], "c": ["p"]},
)

team = model.team("b,c")
for text in ["p", "q", "~q", "!q", "dep(p,q)", "dep(q)"]:
    print(f"{{b,c}} |= {text:10} {check(model, team, parse_formula(text)).value}")

# ~q is atomic negation (no world has q); !q negates the team-level value
print()

# modalities move the team along the relation
start = model.team("a")
for text in ["box p", "box dep(q)", "dia dep(q)", "dia q", "boxdot q", "boxdot dep(q)"]:
    res = check(model, start, parse_formula(text))
    print(f"{{a}} |= {text:14} {str(res.value):5}  via {res.stats['path']}")

# a team with a dead end has no covering successor team at all
both = model.team("a,b")
for text in ["dia p", "boxdot ~p", "box p"]:
    print(f"{{a,b}} |= {text:10} {check(model, both, parse_formula(text)).value}")

# the reference evaluator follows the definitions literally; the dispatcher agrees
phi = parse_formula("dia (dep(q) ^ box ~p)")
print()
print("reference:", check_reference(model, start, phi).value, " auto:", check(model, start, phi).value)
