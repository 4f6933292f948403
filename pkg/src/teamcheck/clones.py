"""The seven Boolean clones that contain both constants, and fragment analysis.

With the constants available for free, every finite set of connectives
generates one of ``ID < E, V < M < BF`` or ``ID < N < L < BF``.  The
classifier here is structural (essential arguments, affinity, monotonicity);
:func:`closure_oracle` computes clones by brute-force composition and is
kept independent of it so each can check the other.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

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
    subformulas,
)
from .limits import require


class CloneLabel(enum.Enum):
    ID = "ID"
    E = "E"
    V = "V"
    M = "M"
    N = "N"
    L = "L"
    BF = "BF"

    def __le__(self, other: "CloneLabel") -> bool:
        return other in _UP[self]

    def __lt__(self, other: "CloneLabel") -> bool:
        return self != other and self <= other

    def __ge__(self, other: "CloneLabel") -> bool:
        return other <= self

    def __gt__(self, other: "CloneLabel") -> bool:
        return other < self

    def join(self, other: "CloneLabel") -> "CloneLabel":
        return join(self, other)


_COVERS = {
    "ID": ("E", "V", "N"),
    "E": ("M",),
    "V": ("M",),
    "N": ("L",),
    "M": ("BF",),
    "L": ("BF",),
    "BF": (),
}


def _upsets() -> dict:
    up = {}
    for name in _COVERS:
        seen = {name}
        frontier = [name]
        while frontier:
            for nxt in _COVERS[frontier.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        up[CloneLabel(name)] = frozenset(CloneLabel(n) for n in seen)
    return up


_UP = _upsets()


def join(a: CloneLabel, b: CloneLabel) -> CloneLabel:
    common = _UP[a] & _UP[b]
    # least element of the common upper bounds
    return next(c for c in common if all(c <= d for d in common))


STANDARD_BASES: dict[CloneLabel, tuple[BooleanFunction, ...]] = {
    CloneLabel.ID: (),
    CloneLabel.E: (AND,),
    CloneLabel.V: (OR,),
    CloneLabel.M: (AND, OR),
    CloneLabel.N: (NOT,),
    CloneLabel.L: (XOR,),
    CloneLabel.BF: (AND, NOT),
}


# -- structural classifier -----------------------------------------------------


def essential_arguments(f: BooleanFunction) -> list[int]:
    out = []
    for k in range(f.arity):
        bit = 1 << k
        if any(f.table[i] != f.table[i | bit] for i in range(1 << f.arity) if not i & bit):
            out.append(k)
    return out


def _restrict(f: BooleanFunction, keep: list[int]) -> tuple[bool, ...]:
    """Table of ``f`` as a function of the arguments in ``keep`` only."""
    rows = []
    for j in range(1 << len(keep)):
        i = 0
        for pos, k in enumerate(keep):
            if (j >> pos) & 1:
                i |= 1 << k
        rows.append(f.table[i])
    return tuple(rows)


def _is_affine(table: tuple[bool, ...], n: int) -> bool:
    c = table[0]
    coeffs = [table[1 << k] != c for k in range(n)]
    for i, value in enumerate(table):
        acc = c
        for k in range(n):
            if (i >> k) & 1 and coeffs[k]:
                acc = not acc
        if acc != value:
            return False
    return True


def _is_monotone(table: tuple[bool, ...], n: int) -> bool:
    for i, value in enumerate(table):
        if value:
            for k in range(n):
                if not (i >> k) & 1 and not table[i | 1 << k]:
                    return False
    return True


def classify_function(f: BooleanFunction) -> CloneLabel:
    """Least of the seven clones that contains ``f`` (constants are free)."""
    keep = essential_arguments(f)
    table = _restrict(f, keep)
    n = len(keep)
    if n == 0:
        return CloneLabel.ID
    if n == 1:
        return CloneLabel.ID if table == (False, True) else CloneLabel.N
    if _is_affine(table, n):
        return CloneLabel.L
    if _is_monotone(table, n):
        full = (1 << n) - 1
        if all(v == (i == full) for i, v in enumerate(table)):
            return CloneLabel.E
        if all(v == (i != 0) for i, v in enumerate(table)):
            return CloneLabel.V
        return CloneLabel.M
    return CloneLabel.BF


def classify_clone(functions: Iterable[BooleanFunction]) -> CloneLabel:
    label = CloneLabel.ID
    for f in functions:
        label = join(label, classify_function(f))
    return label


# -- closure oracle ----------------------------------------------------------


def _compose(table: tuple[bool, ...], args: list[np.ndarray]) -> np.ndarray:
    """Apply a truth table bitwise to packed argument tables (broadcasting)."""
    shape = np.broadcast_shapes(*(a.shape for a in args)) if args else ()
    ones = np.uint64(0xFFFFFFFFFFFFFFFF)
    out = np.zeros(shape, dtype=np.uint64)
    for row, value in enumerate(table):
        if not value:
            continue
        term = np.full(shape, ones, dtype=np.uint64)
        for k, a in enumerate(args):
            term &= a if (row >> k) & 1 else ~a
        out |= term
    return out


def _closure_at(functions: tuple[BooleanFunction, ...], arity: int) -> set[int]:
    """All ``arity``-ary members of the clone generated by functions + constants."""
    width = 1 << arity
    mask = (1 << width) - 1
    start = {0, mask}
    for k in range(arity):
        start.add(sum(1 << i for i in range(width) if (i >> k) & 1))
    known = set(start)
    frontier = set(start)
    limit_size = 1 << width
    while frontier:
        pool = np.array(sorted(known), dtype=np.uint64)
        new_arr = np.array(sorted(frontier), dtype=np.uint64)
        found: set[int] = set()
        for f in functions:
            if f.arity == 0:
                continue
            require("closure_product", len(pool) ** f.arity, f"closure step for {f.name}")
            # every argument tuple that uses at least one new function
            for first_new in range(f.arity):
                arrays = [new_arr if k == first_new else pool for k in range(f.arity)]
                rest = 1
                for arr in arrays[1:]:
                    rest *= len(arr)
                step = max(1, (1 << 20) // max(rest, 1))
                for lo in range(0, len(arrays[0]), step):
                    axes = []
                    for k, arr in enumerate(arrays):
                        if k == 0:
                            arr = arr[lo:lo + step]
                        shape = [1] * f.arity
                        shape[k] = len(arr)
                        axes.append(arr.reshape(shape))
                    res = _compose(f.table, axes) & np.uint64(mask)
                    found.update(int(x) for x in np.unique(res))
        frontier = found - known
        known |= frontier
        require("closure_size", len(known), "closure")
        if len(known) == limit_size:
            break
    return known


def closure_oracle(functions: Iterable[BooleanFunction], max_arity: int) -> set[BooleanFunction]:
    """Every function of arity <= ``max_arity`` in the clone of functions + {0, 1}."""
    require("closure_max_arity", max_arity, "closure arity")
    gens = tuple(sorted(set(functions), key=lambda f: (f.arity, f.name, f.table)))
    out = set()
    for arity in range(max_arity + 1):
        width = 1 << arity
        for packed in _closure_cached(gens, arity):
            table = tuple(bool((packed >> i) & 1) for i in range(width))
            out.add(BooleanFunction(f"f{arity}_{packed:x}", arity, table))
    return out


@lru_cache(maxsize=512)
def _closure_cached(gens: tuple[BooleanFunction, ...], arity: int) -> frozenset[int]:
    return frozenset(_closure_at(gens, arity))


def classify_by_closure(functions: Iterable[BooleanFunction], max_arity: int = 3) -> CloneLabel:
    """Least label whose standard basis generates a superset of the closure."""
    target = closure_oracle(functions, max_arity)
    candidates = []
    for label, basis in STANDARD_BASES.items():
        generated = closure_oracle(basis, max_arity)
        if target <= generated:
            candidates.append((len(generated), label))
    return min(candidates, key=lambda c: c[0])[1]


# -- fragments ---------------------------------------------------------------


@dataclass(frozen=True)
class FragmentSignature:
    clone: CloneLabel
    uses_box: bool
    uses_diamond: bool
    uses_dep: bool


def fragment_signature(phi: Formula) -> FragmentSignature:
    """Clone and modality flags of ``phi``.

    ``boxdot`` counts as both modalities and contributes negation to the
    clone, since it abbreviates ``!dia !``.
    """
    label = CloneLabel.ID
    box = dia = dep = False
    seen_fns = set()
    for node in subformulas(phi):
        if isinstance(node, Apply):
            if node.fn not in seen_fns:
                seen_fns.add(node.fn)
                label = join(label, classify_function(node.fn))
        elif isinstance(node, Box):
            box = True
        elif isinstance(node, Diamond):
            dia = True
        elif isinstance(node, BoxDot):
            box = dia = True
            label = join(label, CloneLabel.N)
        elif isinstance(node, Dep):
            dep = True
    return FragmentSignature(label, box, dia, dep)


NL = "NL-complete"
NP = "NP-complete"
PNP1 = "P^NP[1]-complete"
PSPACE = "PSPACE-complete"
UNCLASSIFIED = "not classified (upper bound: same as with dep)"

COMPLEXITY_ORDER = (NL, NP, PNP1, PSPACE)


def fragment_complexity(sig: FragmentSignature) -> str:
    if not sig.uses_dep:
        return UNCLASSIFIED
    if not sig.uses_diamond:
        return NL
    if sig.clone in (CloneLabel.ID, CloneLabel.E, CloneLabel.V, CloneLabel.M):
        return NP
    if sig.clone == CloneLabel.N:
        return PNP1
    return PSPACE


def all_functions(arity: int) -> list[BooleanFunction]:
    out = []
    for packed in range(1 << (1 << arity)):
        table = tuple(bool((packed >> i) & 1) for i in range(1 << arity))
        out.append(BooleanFunction(f"f{arity}_{packed:x}", arity, table))
    return out

