import itertools

import pytest
from hypothesis import given, strategies as st

from teamcheck.clones import (
    COMPLEXITY_ORDER,
    NL,
    NP,
    PNP1,
    PSPACE,
    STANDARD_BASES,
    UNCLASSIFIED,
    CloneLabel,
    FragmentSignature,
    classify_by_closure,
    classify_clone,
    classify_function,
    closure_oracle,
    fragment_complexity,
    fragment_signature,
    join,
)
from teamcheck.formula import AND, NOT, OR, XOR, BooleanFunction, parse_formula
from teamcheck.limits import ResourceLimitError
from teamcheck.sampling import MAJORITY

ID, E, V, M, N, L, BF = (CloneLabel[x] for x in ("ID", "E", "V", "M", "N", "L", "BF"))
labels = st.sampled_from(list(CloneLabel))


def test_function_examples():
    assert classify_function(AND) == E
    assert classify_function(OR) == V
    assert classify_function(XOR) == L
    assert classify_function(NOT) == N
    assert classify_function(MAJORITY) == M
    assert classify_function(BooleanFunction.from_callable("f", 2, lambda x, y: x and not y)) == BF


def test_inessential_arguments_are_ignored():
    proj = BooleanFunction.from_callable("proj", 3, lambda a, b, c: b)
    neg_proj = BooleanFunction.from_callable("nproj", 3, lambda a, b, c: not c)
    const = BooleanFunction.from_callable("one", 2, lambda a, b: True)
    assert classify_function(proj) == ID
    assert classify_function(neg_proj) == N
    assert classify_function(const) == ID
    # and of a subset of arguments is still E
    and13 = BooleanFunction.from_callable("and13", 3, lambda a, b, c: a and c)
    assert classify_function(and13) == E
    # xnor is affine
    assert classify_function(BooleanFunction.from_callable("xnor", 2, lambda a, b: a == b)) == L


def test_set_examples():
    assert classify_clone([AND, OR]) == M
    assert classify_clone([AND, XOR]) == BF
    assert classify_clone([]) == ID
    assert classify_clone([NOT, XOR]) == L
    assert classify_clone([NOT, AND]) == BF


def test_hasse_diagram():
    assert ID < E < M < BF
    assert ID < V < M
    assert ID < N < L < BF
    assert not (E <= V) and not (V <= E)
    assert not (N <= M) and not (M <= L)
    assert join(E, V) == M
    assert join(N, E) == BF
    assert join(L, M) == BF
    assert join(N, N) == N


@given(labels, labels, labels)
def test_lattice_laws(a, b, c):
    assert join(a, b) == join(b, a)
    assert join(join(a, b), c) == join(a, join(b, c))
    assert join(a, a) == a
    assert join(a, BF) == BF
    assert join(a, ID) == a
    ab = join(a, b)
    assert a <= ab and b <= ab
    # least: every common upper bound lies above the join
    for u in CloneLabel:
        if a <= u and b <= u:
            assert ab <= u


def test_closure_examples():
    unary = {f for f in closure_oracle([NOT], 1) if f.arity == 1}
    assert {f.table for f in unary} == {(False, False), (True, True), (False, True), (True, False)}
    binary_xor = {f.table for f in closure_oracle([XOR], 2) if f.arity == 2}
    affine = set()
    for c, a, b in itertools.product((0, 1), repeat=3):
        affine.add(tuple(bool(c ^ (a & x) ^ (b & y)) for y in (0, 1) for x in (0, 1)))
    assert binary_xor == affine and len(affine) == 8
    assert len({f for f in closure_oracle([AND, NOT], 2) if f.arity == 2}) == 16


def test_closure_contains_constants_and_projections():
    got = closure_oracle([], 2)
    assert {f.table for f in got if f.arity == 2} == {
        (False,) * 4,
        (True,) * 4,
        (False, True, False, True),
        (False, False, True, True),
    }


def test_closure_respects_limits(monkeypatch):
    monkeypatch.setenv("TEAMCHECK_LIMITS", "closure_max_arity=2")
    with pytest.raises(ResourceLimitError):
        closure_oracle([AND], 3)


def test_standard_bases_generate_their_clone():
    for label, basis in STANDARD_BASES.items():
        assert classify_clone(basis) == label
        assert classify_by_closure(basis) == label


@pytest.mark.parametrize(
    "fn",
    [
        MAJORITY,
        BooleanFunction.from_callable("xor3", 3, lambda a, b, c: a ^ b ^ c),
        BooleanFunction.from_callable("and_or", 3, lambda a, b, c: a and (b or c)),
        BooleanFunction.from_callable("ite", 3, lambda a, b, c: b if a else c),
        BooleanFunction.from_callable("or_ac", 3, lambda a, b, c: a or c),
        BooleanFunction.from_callable("nxor", 3, lambda a, b, c: not (a ^ c)),
    ],
    ids=lambda f: f.name,
)
def test_ternary_functions_against_closure(fn):
    assert classify_function(fn) == classify_by_closure([fn], 3)


def test_fragment_signatures():
    assert fragment_signature(parse_formula("box box dep(q)")) == FragmentSignature(ID, True, False, True)
    assert fragment_signature(parse_formula("and(p, dia q)")) == FragmentSignature(E, False, True, False)
    psi = parse_formula("dia boxdot dia (!dep(p_2,q) ^ dia dep(p_1,p_2,p_3,q))")
    assert fragment_signature(psi) == FragmentSignature(L, True, True, True)
    # boxdot alone brings in both modalities and negation
    assert fragment_signature(parse_formula("boxdot dep(p,q)")) == FragmentSignature(N, True, True, True)


def test_complexity_examples():
    assert fragment_complexity(FragmentSignature(BF, True, False, True)) == NL
    assert fragment_complexity(FragmentSignature(N, False, True, True)) == PNP1
    assert fragment_complexity(FragmentSignature(L, True, True, True)) == PSPACE
    for c in (ID, E, V, M):
        assert fragment_complexity(FragmentSignature(c, False, True, True)) == NP
    assert fragment_complexity(FragmentSignature(ID, True, True, False)) == UNCLASSIFIED


@pytest.mark.parametrize("box", [False, True])
@pytest.mark.parametrize("dia", [False, True])
def test_complexity_monotone_in_clone(box, dia):
    rank = {label: i for i, label in enumerate(COMPLEXITY_ORDER)}
    for a, b in itertools.product(CloneLabel, repeat=2):
        if a <= b:
            ca = fragment_complexity(FragmentSignature(a, box, dia, True))
            cb = fragment_complexity(FragmentSignature(b, box, dia, True))
            assert rank[ca] <= rank[cb]
