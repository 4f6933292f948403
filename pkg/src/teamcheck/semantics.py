"""Team semantics evaluators.

:func:`check_reference` is a literal transcription of the satisfaction
relation over explicit sets and is meant as ground truth.  :func:`check`
computes the same value and picks a cheaper route when the formula allows:

* ``box_fast``: no ``dia``/``boxdot``.  Every subformula is evaluated on
  exactly one team (an iterated successor image of the input team), so the
  run is polynomial and never enumerates successor teams.
* ``n_normal``: only unary connectives.  Negations are floated to the root
  and the remaining modal chain is searched once.
* ``generic``: memoised recursion with short-circuiting over the ordered
  enumeration of covering successor teams.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .clones import _is_monotone
from .formula import (
    Apply,
    Box,
    BoxDot,
    Dep,
    Diamond,
    Formula,
    NegProp,
    Prop,
    eval_function,
    propositions,
    subformulas,
)
from .kripke import KripkeModel, Team, members, successor_teams, successors
from .normalform import BOX, BOXDOT, DIA, float_negations, is_unary_fragment

REFERENCE, BOX_FAST, N_NORMAL, GENERIC = "reference", "box_fast", "n_normal", "generic"


@dataclass
class EvalResult:
    value: bool
    stats: dict = field(default_factory=dict, compare=False)

    def __bool__(self) -> bool:
        return self.value


def _new_stats(path: str) -> dict:
    return {
        "path": path,
        "successor_team_sets": 0,
        "teams_enumerated": 0,
        "successor_images": 0,
        "visits": 0,
        "max_depth": 0,
    }


# -- atoms -------------------------------------------------------------------


def eval_prop(model: KripkeModel, team: Team, p: str) -> bool:
    return team & ~model.prop_mask(p) == 0


def eval_negprop(model: KripkeModel, team: Team, p: str) -> bool:
    return team & model.prop_mask(p) == 0


def eval_dep(model: KripkeModel, team: Team, antecedents: Sequence[str], consequent: str) -> bool:
    """Is the consequent a function of the antecedents across ``team``?"""
    masks = [model.prop_mask(p) for p in antecedents]
    qmask = model.prop_mask(consequent)
    if not masks:
        return team & qmask in (0, team)
    seen: dict[int, int] = {}
    for w in members(team):
        key = 0
        for k, m in enumerate(masks):
            key |= ((m >> w) & 1) << k
        if seen.setdefault(key, (qmask >> w) & 1) != (qmask >> w) & 1:
            return False
    return True


def _eval_atom(model, team, phi):
    if isinstance(phi, Prop):
        return eval_prop(model, team, phi.name)
    if isinstance(phi, NegProp):
        return eval_negprop(model, team, phi.name)
    if isinstance(phi, Dep):
        return eval_dep(model, team, phi.antecedents, phi.consequent)
    if isinstance(phi, Apply) and phi.fn.arity == 0:
        return phi.fn.table[0]
    raise TypeError(f"not an atom: {phi!r}")


# -- reference evaluator -----------------------------------------------------


def check_reference(model: KripkeModel, team: Team, phi: Formula) -> EvalResult:
    """Evaluate ``phi`` by structural recursion over explicit world sets."""
    stats = _new_stats(REFERENCE)
    worlds = frozenset(members(team))
    value = _Reference(model, stats).eval(worlds, phi, 1)
    return EvalResult(value, stats)


class _Reference:
    def __init__(self, model: KripkeModel, stats: dict):
        self.model = model
        self.stats = stats
        self.edges = {}
        for a, b in model.relation:
            self.edges.setdefault(model.index[a], set()).add(model.index[b])
        self.labels = [model.valuation[w] for w in model.worlds]

    def image(self, team: frozenset) -> frozenset:
        self.stats["successor_images"] += 1
        return frozenset(s for w in team for s in self.edges.get(w, ()))

    def covering(self, team: frozenset):
        self.stats["successor_team_sets"] += 1
        image = sorted(self.image(team))
        for k in range(len(image) + 1):
            for sub in combinations(image, k):
                sub = frozenset(sub)
                if all(self.edges.get(w, set()) & sub for w in team):
                    self.stats["teams_enumerated"] += 1
                    yield sub

    def eval(self, team: frozenset, phi: Formula, level: int) -> bool:
        stats = self.stats
        stats["visits"] += 1
        if level > stats["max_depth"]:
            stats["max_depth"] = level
        labels = self.labels
        if isinstance(phi, Prop):
            return all(phi.name in labels[w] for w in team)
        if isinstance(phi, NegProp):
            return all(phi.name not in labels[w] for w in team)
        if isinstance(phi, Dep):
            for w in team:
                for v in team:
                    same = all(
                        (p in labels[w]) == (p in labels[v]) for p in phi.antecedents
                    )
                    if same and (phi.consequent in labels[w]) != (phi.consequent in labels[v]):
                        return False
            return True
        if isinstance(phi, Apply):
            values = [self.eval(team, a, level + 1) for a in phi.args]
            return eval_function(phi.fn, values)
        if isinstance(phi, Diamond):
            return any(self.eval(t, phi.arg, level + 1) for t in self.covering(team))
        if isinstance(phi, BoxDot):
            return all(self.eval(t, phi.arg, level + 1) for t in self.covering(team))
        if isinstance(phi, Box):
            return self.eval(self.image(team), phi.arg, level + 1)
        raise TypeError(f"unknown formula node {phi!r}")


# -- dispatching evaluator ---------------------------------------------------


def needs_search(phi: Formula) -> bool:
    return any(isinstance(n, (Diamond, BoxDot)) for n in subformulas(phi))


def select_path(phi: Formula) -> str:
    if not needs_search(phi):
        return BOX_FAST
    if is_unary_fragment(phi):
        return N_NORMAL
    return GENERIC


def check(model: KripkeModel, team: Team, phi: Formula, path: str | None = None) -> EvalResult:
    """Decide ``model, team |= phi``; ``path`` forces a route (for testing)."""
    path = path or select_path(phi)
    if path == REFERENCE:
        return check_reference(model, team, phi)
    stats = _new_stats(path)
    if path == BOX_FAST:
        if needs_search(phi):
            raise ValueError("box_fast path needs a formula without dia/boxdot")
        value = _BoxFast(model, stats).eval(team, phi, 1)
    elif path == N_NORMAL:
        value = _ChainSearch(model, stats, phi).run(team)
    elif path == GENERIC:
        value = _Generic(model, stats).eval(team, phi, 1)
    else:
        raise ValueError(f"unknown evaluation path {path!r}")
    return EvalResult(value, stats)


class _Images:
    def __init__(self, model: KripkeModel, stats: dict):
        self.model = model
        self.stats = stats
        self.cache: dict[Team, Team] = {}

    def __call__(self, team: Team) -> Team:
        out = self.cache.get(team)
        if out is None:
            self.stats["successor_images"] += 1
            out = self.cache[team] = successors(self.model, team)
        return out


def _short_circuit(fn, values: list[bool]):
    """Value of ``fn`` if it is fixed by the first ``len(values)`` arguments."""
    prefix = 0
    for k, v in enumerate(values):
        if v:
            prefix |= 1 << k
    low = (1 << len(values)) - 1
    seen = set()
    for i, out in enumerate(fn.table):
        if i & low == prefix:
            seen.add(out)
            if len(seen) > 1:
                return None
    return seen.pop()


class _BoxFast:
    def __init__(self, model: KripkeModel, stats: dict):
        self.model = model
        self.stats = stats
        self.image = _Images(model, stats)
        self.memo: dict[tuple[int, Team], bool] = {}

    def eval(self, team: Team, phi: Formula, level: int) -> bool:
        key = (id(phi), team)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        stats = self.stats
        stats["visits"] += 1
        node = phi
        while isinstance(node, Box):
            team = self.image(team)
            level += 1
            node = node.arg
        if level > stats["max_depth"]:
            stats["max_depth"] = level
        if isinstance(node, Apply) and node.fn.arity:
            values: list[bool] = []
            for a in node.args:
                values.append(self.eval(team, a, level + 1))
                out = _short_circuit(node.fn, values)
                if out is not None:
                    break
        else:
            out = _eval_atom(self.model, team, node)
        self.memo[key] = out
        return out


class _Generic(_BoxFast):
    def eval(self, team: Team, phi: Formula, level: int) -> bool:
        if isinstance(phi, (Diamond, BoxDot)):
            key = (id(phi), team)
            hit = self.memo.get(key)
            if hit is not None:
                return hit
            stats = self.stats
            stats["visits"] += 1
            if level > stats["max_depth"]:
                stats["max_depth"] = level
            stats["successor_team_sets"] += 1
            want = isinstance(phi, Diamond)
            out = not want
            for t in successor_teams(self.model, team):
                stats["teams_enumerated"] += 1
                if self.eval(t, phi.arg, level + 1) == want:
                    out = want
                    break
            self.memo[key] = out
            return out
        if isinstance(phi, Box) or (isinstance(phi, Apply) and phi.fn.arity):
            # box chains and connectives recurse through eval(), not _BoxFast.eval
            return self._structural(team, phi, level)
        return super().eval(team, phi, level)

    def _structural(self, team: Team, phi: Formula, level: int) -> bool:
        key = (id(phi), team)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.stats["visits"] += 1
        if level > self.stats["max_depth"]:
            self.stats["max_depth"] = level
        if isinstance(phi, Box):
            out = self.eval(self.image(team), phi.arg, level + 1)
        else:
            values: list[bool] = []
            for a in phi.args:
                values.append(self.eval(team, a, level + 1))
                out = _short_circuit(phi.fn, values)
                if out is not None:
                    break
        self.memo[key] = out
        return out


def _choice_teams(model: KripkeModel, team: Team):
    """Covering teams built by picking successors only for uncovered worlds.

    Every inclusion-minimal covering successor team is produced.
    """
    succ = model.succ
    own = list(members(team))
    seen = set()

    def extend(pos: int, chosen: Team):
        if pos == len(own):
            if chosen not in seen:
                seen.add(chosen)
                yield chosen
            return
        s = succ[own[pos]]
        if s & chosen:
            yield from extend(pos + 1, chosen)
            return
        for w in members(s):
            yield from extend(pos + 1, chosen | 1 << w)

    if any(not succ[i] for i in own):
        return
    yield from extend(0, 0)


class _ChainSearch:
    """Evaluate ``[!] op_1 ... op_k leaf`` for unary-connective formulas."""

    def __init__(self, model: KripkeModel, stats: dict, phi: Formula):
        self.model = model
        self.stats = stats
        self.negated, self.ops, self.leaf = float_negations(phi)
        self.image = _Images(model, stats)
        self.dead = model.dead_ends()
        # closed[i]: the suffix from position i is downward closed (no boxdot)
        self.closed = [True] * (len(self.ops) + 1)
        for i in range(len(self.ops) - 1, -1, -1):
            self.closed[i] = self.closed[i + 1] and self.ops[i] != BOXDOT
        self.memo: dict[tuple[int, Team], bool] = {}

    def run(self, team: Team) -> bool:
        return self.eval(0, team) != self.negated

    def eval(self, i: int, team: Team) -> bool:
        key = (i, team)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        stats = self.stats
        stats["visits"] += 1
        if i + 1 > stats["max_depth"]:
            stats["max_depth"] = i + 1
        if i == len(self.ops):
            out = _eval_atom(self.model, team, self.leaf)
        else:
            op = self.ops[i]
            if op == BOX:
                out = self.eval(i + 1, self.image(team))
            elif op == BOXDOT and team & self.dead:
                out = True
            elif op == BOXDOT and self.closed[i + 1]:
                # the full image is itself a covering team and the operand is
                # downward closed, so it is the hardest one to satisfy
                out = self.eval(i + 1, self.image(team))
            else:
                stats["successor_team_sets"] += 1
                if op == DIA and self.closed[i + 1]:
                    candidates = _choice_teams(self.model, team)
                else:
                    candidates = successor_teams(self.model, team)
                want = op == DIA
                out = not want
                for t in candidates:
                    stats["teams_enumerated"] += 1
                    if self.eval(i + 1, t) == want:
                        out = want
                        break
        self.memo[key] = out
        return out


# -- downward closure --------------------------------------------------------


def is_downward_closed_syntactic(phi: Formula) -> bool:
    """Sufficient condition: only monotone connectives and no ``boxdot``."""
    for node in subformulas(phi):
        if isinstance(node, BoxDot):
            return False
        if isinstance(node, Apply) and not _is_monotone(node.fn.table, node.fn.arity):
            return False
    return True


@dataclass
class DownwardClosure:
    closed: bool
    counterexample: tuple | None = None  # (model, team, subteam), teams as name lists

    def __bool__(self) -> bool:
        return self.closed


def is_downward_closed_semantic(phi: Formula, max_worlds: int = 3) -> DownwardClosure:
    """Exhaustive check over every model with ``max_worlds`` worlds.

    Smaller models need no separate pass: adding isolated worlds to a model
    changes neither successor images nor covering successor teams of teams
    that avoid them.
    """
    from .batch import ModelSpace

    space = ModelSpace(max_worlds, propositions(phi))
    found = space.downward_closure_violation(phi)
    if found is None:
        return DownwardClosure(True)
    model, team, sub = found
    return DownwardClosure(False, (model, model.team_names(team), model.team_names(sub)))
