"""Kripke models and teams.

A team is stored as an ``int`` bitmask over world indices (bit ``i`` set
means world ``i`` is a member).  World indices follow declaration order.
"""

from __future__ import annotations

import json
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

Team = int


class ModelError(ValueError):
    pass


def members(team: Team) -> Iterator[int]:
    while team:
        low = team & -team
        yield low.bit_length() - 1
        team ^= low


def team_of(indices: Iterable[int]) -> Team:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


class KripkeModel:
    """Immutable Kripke structure ``(W, R, pi)``.

    ``valuation`` maps a world to the propositions true there; worlds that
    are missing from it carry no propositions.
    """

    __slots__ = ("worlds", "index", "relation", "valuation", "succ", "_prop_masks")

    def __init__(
        self,
        worlds: Sequence[str],
        relation: Iterable[tuple[str, str]] = (),
        valuation: Mapping[str, Iterable[str]] | None = None,
    ):
        worlds = tuple(worlds)
        index: dict[str, int] = {}
        for w in worlds:
            if not isinstance(w, str):
                raise ModelError(f"world names must be strings, got {w!r}")
            if w in index:
                raise ModelError(f"duplicate world {w!r}")
            index[w] = len(index)
        succ = [0] * len(worlds)
        rel = set()
        for pair in relation:
            if len(pair) != 2:
                raise ModelError(f"relation entry {pair!r} is not a pair")
            a, b = pair
            for w in (a, b):
                if w not in index:
                    raise ModelError(f"undeclared world {w!r} in relation")
            rel.add((a, b))
            succ[index[a]] |= 1 << index[b]
        val: dict[str, frozenset[str]] = {w: frozenset() for w in worlds}
        for w, props in (valuation or {}).items():
            if w not in index:
                raise ModelError(f"undeclared world {w!r} in valuation")
            if isinstance(props, str):
                raise ModelError(f"valuation of {w!r} must be a list of propositions")
            val[w] = frozenset(props)
        prop_masks: dict[str, int] = {}
        for w, props in val.items():
            for p in props:
                prop_masks[p] = prop_masks.get(p, 0) | 1 << index[w]
        self.worlds = worlds
        self.index = index
        self.relation = frozenset(rel)
        self.valuation = val
        self.succ = tuple(succ)
        self._prop_masks = prop_masks

    def __len__(self) -> int:
        return len(self.worlds)

    def __eq__(self, other) -> bool:
        if not isinstance(other, KripkeModel):
            return NotImplemented
        return (
            set(self.worlds) == set(other.worlds)
            and self.relation == other.relation
            and self.valuation == other.valuation
        )

    def __hash__(self):
        return hash((frozenset(self.worlds), self.relation))

    def __repr__(self) -> str:
        return f"KripkeModel({len(self.worlds)} worlds, {len(self.relation)} edges)"

    @property
    def full_team(self) -> Team:
        return (1 << len(self.worlds)) - 1

    def prop_mask(self, p: str) -> int:
        """Worlds labeled ``p`` as a bitmask (the inverse view of the valuation)."""
        return self._prop_masks.get(p, 0)

    def worlds_with(self, p: str) -> set[str]:
        return {self.worlds[i] for i in members(self.prop_mask(p))}

    def team(self, names: Iterable[str] | str) -> Team:
        """Team from world names, or from a comma separated string of names."""
        if isinstance(names, str):
            names = [n.strip() for n in names.split(",") if n.strip()]
        out = 0
        for n in names:
            if n not in self.index:
                raise ModelError(f"undeclared world {n!r} in team")
            out |= 1 << self.index[n]
        return out

    def team_names(self, team: Team) -> list[str]:
        return [self.worlds[i] for i in members(team)]

    def dead_ends(self) -> Team:
        return team_of(i for i, s in enumerate(self.succ) if not s)

    def is_serial(self) -> bool:
        return all(self.succ)


def successors(model: KripkeModel, team: Team) -> Team:
    """Image of ``team`` under the accessibility relation."""
    out = 0
    succ = model.succ
    while team:
        low = team & -team
        out |= succ[low.bit_length() - 1]
        team ^= low
    return out


def covers(model: KripkeModel, team: Team, candidate: Team) -> bool:
    """Does every world of ``team`` have a successor inside ``candidate``?"""
    succ = model.succ
    return all(succ[i] & candidate for i in members(team))


def successor_teams(model: KripkeModel, team: Team) -> Iterator[Team]:
    """Covering subsets of ``successors(team)``, smallest first.

    Teams of equal size come in lexicographic order of their sorted world
    indices.  The empty team yields only the empty team; a team containing
    a dead end yields nothing.
    """
    succ = model.succ
    own = list(members(team))
    if any(not succ[i] for i in own):
        return
    image = successors(model, team)
    forced = 0
    for i in own:
        s = succ[i]
        if s & (s - 1) == 0:
            forced |= s
    optional = list(members(image & ~forced))
    need = [succ[i] for i in own if not succ[i] & forced]
    for k in range(len(optional) + 1):
        for combo in combinations(optional, k):
            cand = forced
            for i in combo:
                cand |= 1 << i
            if all(s & cand for s in need):
                yield cand


# -- I/O ---------------------------------------------------------------------


def save_model(model: KripkeModel) -> bytes:
    data = {
        "worlds": list(model.worlds),
        "relation": sorted([a, b] for a, b in model.relation),
        "valuation": {w: sorted(model.valuation[w]) for w in model.worlds},
    }
    return json.dumps(data, indent=1, ensure_ascii=False).encode("utf-8")


def load_model(data: bytes | str | Mapping) -> KripkeModel:
    if isinstance(data, (bytes, str)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ModelError(f"model is not valid JSON: {exc}") from None
    if not isinstance(data, Mapping):
        raise ModelError("model must be a JSON object")
    unknown = set(data) - {"worlds", "relation", "valuation"}
    if unknown:
        raise ModelError(f"unknown model keys: {sorted(unknown)}")
    worlds = data.get("worlds")
    if not isinstance(worlds, list):
        raise ModelError("'worlds' must be a list of names")
    relation = data.get("relation", [])
    if not isinstance(relation, list) or any(
        not isinstance(e, list) or len(e) != 2 for e in relation
    ):
        raise ModelError("'relation' must be a list of [source, target] pairs")
    valuation = data.get("valuation", {})
    if not isinstance(valuation, Mapping) or any(
        not isinstance(v, list) for v in valuation.values()
    ):
        raise ModelError("'valuation' must map world names to lists of propositions")
    return KripkeModel(worlds, [tuple(e) for e in relation], valuation)
