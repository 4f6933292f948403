"""
Which connectives matter
========================

Only the clone generated by the connectives (with both constants) affects
the model checking complexity.  This script classifies a few connective
sets and checks the classification against the brute-force closure.
"""

from teamcheck import (
    AND,
    NOT,
    OR,
    XOR,
    BooleanFunction,
    classify_by_closure,
    classify_clone,
    closure_oracle,
    fragment_complexity,
    fragment_signature,
    parse_formula,
)

implies_not = BooleanFunction.from_callable("and_not", 2, lambda x, y: x and not y)
maj = BooleanFunction.from_callable("maj", 3, lambda a, b, c: a + b + c >= 2)

for fns in [[], [AND], [OR], [AND, OR], [NOT], [XOR], [NOT, XOR], [maj], [implies_not], [AND, XOR]]:
    names = ", ".join(f.name for f in fns) or "(none)"
    print(f"{names:12} structural={classify_clone(fns).value:3} closure={classify_by_closure(fns).value}")

# sizes of the closures per arity
print()
for fns in [[NOT], [XOR], [AND, NOT]]:
    closed = closure_oracle(fns, 2)
    per_arity = [sum(f.arity == k for f in closed) for k in range(3)]
    print(", ".join(f.name for f in fns), "->", per_arity)

# the formula determines the fragment, and the fragment its complexity
print()
for text in ["box box dep(q)", "dia dep(p,q)", "!dia dep(p,q)", "dia (p ^ dep(q))", "dia p"]:
    sig = fragment_signature(parse_formula(text))
    print(f"{text:18} clone={sig.clone.value:2} -> {fragment_complexity(sig)}")
