"""Seeded random models and formulas, and exhaustive enumeration of small models."""

from __future__ import annotations

import random
from itertools import product
from typing import Iterator, Sequence

from .formula import (
    AND,
    NOT,
    OR,
    XOR,
    Apply,
    BooleanFunction,
    Box,
    BoxDot,
    Dep,
    Diamond,
    Formula,
    NegProp,
    Prop,
)
from .kripke import KripkeModel

MAJORITY = BooleanFunction.from_callable("maj", 3, lambda a, b, c: a + b + c >= 2)

DEFAULT_CONNECTIVES = (AND, OR, NOT, XOR)
DEFAULT_MODALITIES = (Diamond, Box, BoxDot)


def random_model(
    rng: random.Random,
    n_worlds: int,
    props: Sequence[str] = ("p", "q"),
    edge_prob: float = 0.4,
    label_prob: float = 0.5,
) -> KripkeModel:
    worlds = [f"w{i}" for i in range(n_worlds)]
    edges = [(a, b) for a in worlds for b in worlds if rng.random() < edge_prob]
    val = {w: [p for p in props if rng.random() < label_prob] for w in worlds}
    return KripkeModel(worlds, edges, val)


def sparse_random_model(
    rng: random.Random, n_worlds: int, out_degree: int = 3, props: Sequence[str] = ("p", "q", "r")
) -> KripkeModel:
    """Large random model with a fixed number of random successors per world."""
    worlds = [f"w{i}" for i in range(n_worlds)]
    edges = set()
    for a in range(n_worlds):
        for _ in range(out_degree):
            edges.add((worlds[a], worlds[rng.randrange(n_worlds)]))
    val = {w: [p for p in props if rng.random() < 0.5] for w in worlds}
    return KripkeModel(worlds, sorted(edges), val)


def all_models(n_worlds: int, props: Sequence[str] = ("p", "q")) -> Iterator[KripkeModel]:
    """Every model on worlds ``w0 .. w{n-1}`` (relations times valuations)."""
    worlds = [f"w{i}" for i in range(n_worlds)]
    pairs = [(a, b) for a in worlds for b in worlds]
    labelings = list(product([False, True], repeat=n_worlds * len(props)))
    for edge_bits in product([False, True], repeat=len(pairs)):
        edges = [pair for pair, on in zip(pairs, edge_bits) if on]
        for bits in labelings:
            val = {
                w: [p for j, p in enumerate(props) if bits[i * len(props) + j]]
                for i, w in enumerate(worlds)
            }
            yield KripkeModel(worlds, edges, val)


def random_atom(rng: random.Random, props: Sequence[str], allow_dep: bool = True) -> Formula:
    kind = rng.randrange(3 if allow_dep else 2)
    if kind == 0:
        return Prop(rng.choice(props))
    if kind == 1:
        return NegProp(rng.choice(props))
    k = rng.randrange(min(len(props), 2) + 1)
    ante = tuple(rng.sample(list(props), k))
    return Dep(ante, rng.choice(props))


def random_formula(
    rng: random.Random,
    depth: int,
    props: Sequence[str] = ("p", "q"),
    connectives: Sequence[BooleanFunction] = DEFAULT_CONNECTIVES,
    modalities: Sequence[type] = DEFAULT_MODALITIES,
    allow_dep: bool = True,
    leaf_prob: float = 0.25,
) -> Formula:
    """Random formula of nesting depth at most ``depth`` (an atom has depth 1)."""
    if depth <= 1 or rng.random() < leaf_prob:
        return random_atom(rng, props, allow_dep)
    options = list(connectives) + list(modalities)
    choice = rng.choice(options)
    if isinstance(choice, BooleanFunction):
        args = tuple(
            random_formula(rng, depth - 1, props, connectives, modalities, allow_dep, leaf_prob)
            for _ in range(choice.arity)
        )
        return Apply(choice, args)
    return choice(random_formula(rng, depth - 1, props, connectives, modalities, allow_dep, leaf_prob))


def random_negation_free(rng: random.Random, depth: int, props: Sequence[str] = ("p", "q")) -> Formula:
    return random_formula(rng, depth, props, connectives=(AND, OR), modalities=(Diamond, Box))
