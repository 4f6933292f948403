import random

import pytest
from hypothesis import given, settings, strategies as st

from teamcheck.formula import (
    AND,
    NOT,
    OR,
    XOR,
    Apply,
    Box,
    BoxDot,
    Dep,
    Diamond,
    Prop,
    boxes,
    parse_formula,
    size,
)
from teamcheck.kripke import KripkeModel, successors
from teamcheck.reductions import CnfInstance, Digraph, QbfInstance, gen_qbf, gen_reach, gen_sat
from teamcheck.sampling import MAJORITY, random_formula, random_model, random_negation_free, sparse_random_model
from teamcheck.semantics import (
    BOX_FAST,
    GENERIC,
    N_NORMAL,
    check,
    check_reference,
    eval_dep,
    is_downward_closed_semantic,
    is_downward_closed_syntactic,
    select_path,
)

P = parse_formula


def two_worlds(v1, v2, edges=()):
    return KripkeModel(["w1", "w2"], edges, {"w1": v1, "w2": v2})


def test_reference_examples():
    m = KripkeModel(["w"], [], {"w": ["p"]})
    assert check_reference(m, m.team("w"), P("p")).value
    m = two_worlds(["p", "q"], ["p"])
    assert not check_reference(m, m.full_team, P("dep(p,q)")).value
    m = two_worlds(["p"], [])
    t = m.full_team
    assert not check_reference(m, t, P("p")).value
    assert not check_reference(m, t, P("~p")).value
    assert check_reference(m, t, P("!p")).value


@pytest.mark.parametrize("text", ["p", "~p", "dep(p,q)", "dep(q)", "dia p", "box dep(p)", "p & q", "boxdot p"])
def test_empty_team_satisfies_negation_free(text):
    m = two_worlds(["p"], [], [("w1", "w2")])
    assert check_reference(m, 0, P(text)).value
    assert check(m, 0, P(text)).value


def test_empty_team_negated_formulas_regression():
    # classical negation of a formula true on the empty team is false there
    m = two_worlds(["p"], [])
    assert check_reference(m, 0, P("!p")).value is False
    assert check_reference(m, 0, P("!dep(p,q) | p")).value is True
    assert check_reference(m, 0, P("xor(p, q)")).value is False


def test_eval_dep_examples():
    m = two_worlds(["q"], [])
    assert not eval_dep(m, m.full_team, (), "q")
    assert eval_dep(m, m.team("w1"), ("p",), "q")
    psi = CnfInstance(1, [frozenset([1]), frozenset([-1])])
    inst = gen_sat(psi)
    m = inst.model
    assert not eval_dep(m, m.team(["s_1", "sbar_1"]), ("p_1",), "q")


def test_absent_propositions_are_false():
    m = KripkeModel(["a"], [], {})
    assert check(m, m.team("a"), P("~zz")).value
    assert not check(m, m.team("a"), P("zz")).value


def test_dead_end_semantics():
    m = KripkeModel(["a", "b"], [("a", "b")], {"b": ["p"]})
    both = m.full_team
    # b has no successor: dia false, boxdot vacuously true, box evaluates at R(T) = {b}
    for engine in (check, check_reference):
        assert not engine(m, both, P("dia p")).value
        assert engine(m, both, P("boxdot ~p")).value
        assert engine(m, both, P("box p")).value
        assert not engine(m, both, P("box ~p")).value


def test_path_selection():
    assert select_path(P("box box (p & dep(q))")) == BOX_FAST
    assert select_path(P("!dia boxdot !dep(p,q)")) == N_NORMAL
    assert select_path(P("dia (p & q)")) == GENERIC


def test_reach_instances():
    inst = gen_reach(Digraph(("a", "b"), {("a", "b")}, "a", "b"))
    assert inst.formula == Box(Dep((), "q"))
    assert check(inst.model, inst.team, inst.formula).value is False
    inst = gen_reach(Digraph(("s", "t"), set(), "s", "t"))
    assert check(inst.model, inst.team, inst.formula).value is True


def test_fig4_instance_is_true():
    inst = gen_qbf(QbfInstance.alternating(3, [[1, -2, -3], [1, 2, 3]]))
    assert inst.expected is True
    assert check(inst.model, inst.team, inst.formula).value is True
    assert check_reference(inst.model, inst.team, inst.formula).value is True


def test_syntactic_downward_closure():
    assert is_downward_closed_syntactic(P("dep(p,q)"))
    assert not is_downward_closed_syntactic(P("!p"))
    assert is_downward_closed_syntactic(P("dia (p & dep(p,q))"))
    assert not is_downward_closed_syntactic(P("boxdot p"))
    assert not is_downward_closed_syntactic(P("p ^ q"))


def test_semantic_downward_closure():
    assert is_downward_closed_semantic(P("p"), 3)
    assert is_downward_closed_semantic(P("dia (p & dep(p,q))"), 3)
    assert is_downward_closed_semantic(P("box dep(p,q)"), 3)
    res = is_downward_closed_semantic(P("!p"), 3)
    assert not res
    model, team, sub = res.counterexample
    phi = P("!p")
    assert check_reference(model, model.team(team), phi).value
    assert not check_reference(model, model.team(sub), phi).value
    assert set(sub) < set(team)


ALL_CONNECTIVES = (AND, OR, NOT, XOR)


@settings(max_examples=400, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_check_agrees_with_reference(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    m = random_model(rng, n, edge_prob=rng.uniform(0.2, 0.8))
    phi = random_formula(rng, 4, connectives=ALL_CONNECTIVES)
    for team in range(1 << n):
        assert check(m, team, phi).value == check_reference(m, team, phi).value


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_forced_paths_agree(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    m = random_model(rng, n)
    phi = random_formula(rng, 4, connectives=(NOT,))
    for team in range(1 << n):
        ref = check_reference(m, team, phi).value
        assert check(m, team, phi, path=N_NORMAL).value == ref
        assert check(m, team, phi, path=GENERIC).value == ref


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_duality(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    m = random_model(rng, n)
    phi = random_formula(rng, 3, connectives=ALL_CONNECTIVES)
    for team in range(1 << n):
        dual = Apply(NOT, (Diamond(Apply(NOT, (phi,))),))
        assert check(m, team, BoxDot(phi)).value == check(m, team, dual).value
        assert check(m, team, Box(phi)).value == check(m, successors(m, team), phi).value


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_box_distributes_over_connectives(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    m = random_model(rng, n)
    a = random_formula(rng, 3)
    b = random_formula(rng, 3)
    c = random_formula(rng, 3)
    for team in range(1 << n):
        for f, args in ((AND, (a, b)), (OR, (a, b)), (NOT, (a,)), (XOR, (a, b)), (MAJORITY, (a, b, c))):
            left = Box(Apply(f, args))
            right = Apply(f, tuple(Box(x) for x in args))
            assert check(m, team, left).value == check(m, team, right).value


def test_box_fast_visits_each_pair_once():
    rng = random.Random(5)
    m = sparse_random_model(rng, 300)
    phi = Apply(AND, (boxes(30, Dep(("p",), "q")), boxes(30, Apply(OR, (Prop("r"), Dep((), "p"))))))
    res = check(m, m.team(["w0"]), phi)
    assert res.stats["path"] == BOX_FAST
    assert res.stats["successor_team_sets"] == 0
    assert res.stats["visits"] <= size(phi)
    assert res.stats["successor_images"] <= 31


def test_box_fast_refuses_search_formulas():
    m = KripkeModel(["a"], [], {})
    with pytest.raises(ValueError):
        check(m, 1, P("dia p"), path=BOX_FAST)


def test_stats_not_part_of_equality():
    m = two_worlds(["p"], ["p"], [("w1", "w2")])
    assert check(m, 1, P("box p")) == check_reference(m, 1, P("box p"))


def test_negation_free_formulas_downward_closed_on_random_models():
    rng = random.Random(11)
    for _ in range(30):
        phi = random_negation_free(rng, 4)
        assert is_downward_closed_syntactic(phi)
        m = random_model(rng, 4)
        for team in range(16):
            if check(m, team, phi).value:
                sub = team & rng.randrange(16)
                assert check(m, sub, phi).value


def test_boxdot_equals_box_for_closed_operands_without_dead_ends():
    from teamcheck.batch import ModelSpace

    serial = ModelSpace.serial(3, ["p", "q"])
    rng = random.Random(8)
    for _ in range(25):
        phi = random_negation_free(rng, 4)
        assert serial.disagreement(BoxDot(phi), Box(phi)) is None


def test_boxdot_differs_from_box_at_dead_ends():
    m = KripkeModel(["a", "b"], [("a", "b")], {})
    team = m.full_team
    phi = P("dia p")
    assert check_reference(m, team, BoxDot(phi)).value is True
    assert check_reference(m, team, Box(phi)).value is False
