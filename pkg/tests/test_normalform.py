import random

import pytest

from teamcheck.batch import ModelSpace
from teamcheck.formula import NOT, Apply, Box, BoxDot, Diamond, parse_formula
from teamcheck.kripke import KripkeModel
from teamcheck.normalform import NotInFragment, build_chain, float_negations, normalize_n_clone
from teamcheck.sampling import random_formula
from teamcheck.semantics import check_reference

P = parse_formula


def test_examples():
    assert normalize_n_clone(P("!!dia dep(p,q)")) == P("dia dep(p,q)")
    assert normalize_n_clone(P("dia boxdot dep(p,q)")) == P("dia box dep(p,q)")
    assert normalize_n_clone(P("!dia boxdot boxdot p")) == P("!dia box box p")
    assert normalize_n_clone(P("dia !boxdot !p")) == P("dia dia p")


def test_output_shape():
    rng = random.Random(2)
    for _ in range(200):
        phi = random_formula(rng, 6, connectives=(NOT,))
        out = normalize_n_clone(phi)
        if isinstance(out, Apply) and out.fn == NOT:
            out = out.args[0]
        while isinstance(out, (Diamond, Box)):
            out = out.arg
        assert not isinstance(out, (BoxDot, Apply)) or out.fn.arity == 0


def test_rejects_binary_connectives():
    with pytest.raises(NotInFragment):
        normalize_n_clone(P("dia (p & q)"))


def unary_formulas(seed, count, props=("p", "q"), depth=5):
    rng = random.Random(seed)
    return [random_formula(rng, depth, props=props, connectives=(NOT,)) for _ in range(count)]


def test_floating_negations_is_exact_on_all_small_models():
    space = ModelSpace(3, ["p", "q"])
    for phi in unary_formulas(0, 40):
        floated = build_chain(*float_negations(phi))
        assert space.disagreement(phi, floated) is None, phi


def test_normalization_exact_on_serial_models():
    for n, count in ((3, 60), (4, 6)):
        space = ModelSpace.serial(n, ["p"])
        for phi in unary_formulas(n, count, props=("p",)):
            assert space.disagreement(phi, normalize_n_clone(phi)) is None, phi


def test_normalization_differs_on_dead_ends():
    # the boxdot -> box replacement is not sound when a team world has no successor
    phi = P("!dia boxdot boxdot p")
    assert normalize_n_clone(phi) == P("!dia box box p")
    # {a, c} is a covering successor team of {a, b}; c is a dead end, so
    # boxdot boxdot p holds there vacuously while box box p fails
    m = KripkeModel(["a", "b", "c"], [("a", "a"), ("a", "c"), ("b", "a")], {})
    t = m.team("a,b")
    assert check_reference(m, t, phi).value is False
    assert check_reference(m, t, normalize_n_clone(phi)).value is True
    bad, total = ModelSpace(3, ["p"]).count_disagreements(phi, normalize_n_clone(phi))
    assert bad == 312 and total == 32768
