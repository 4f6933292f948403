"""Evaluate a formula on every team of every model with ``n`` worlds at once.

Models are indexed by a relation number ``r`` (bit ``i*n + j`` set means an
edge from world ``i`` to world ``j``) and a valuation number ``v`` (bit
``w*k + p`` set means proposition ``p`` holds at world ``w``).  Truth
values are boolean arrays of shape ``(relations, valuations, teams)``, with
teams as bitmasks ``0 .. 2**n - 1``.  Relations are processed in chunks so
memory stays bounded.
"""

from __future__ import annotations

from typing import Iterator, Sequence

import numpy as np

from .formula import Apply, Box, BoxDot, Dep, Diamond, Formula, NegProp, Prop
from .kripke import KripkeModel
from .limits import require


class ModelSpace:
    def __init__(
        self,
        n_worlds: int,
        props: Sequence[str],
        relations: np.ndarray | None = None,
        chunk: int = 1 << 12,
    ):
        require("semantic_max_worlds", n_worlds, "model size")
        if n_worlds < 1:
            raise ValueError("need at least one world")
        self.n = n_worlds
        self.props = list(props)
        if relations is None:
            relations = np.arange(1 << (n_worlds * n_worlds), dtype=np.int64)
        self.relations = np.asarray(relations, dtype=np.int64)
        self.n_val = 1 << (n_worlds * len(self.props))
        require("semantic_models", len(self.relations) * self.n_val, "model space")
        self.chunk = chunk
        self.n_teams = 1 << n_worlds
        self.teams = np.arange(self.n_teams, dtype=np.int64)
        self._atoms: dict = {}

    @classmethod
    def serial(cls, n_worlds: int, props: Sequence[str], **kw) -> "ModelSpace":
        """Only relations in which every world has a successor."""
        rel = np.arange(1 << (n_worlds * n_worlds), dtype=np.int64)
        row = (1 << n_worlds) - 1
        ok = np.ones(len(rel), dtype=bool)
        for i in range(n_worlds):
            ok &= ((rel >> (i * n_worlds)) & row) != 0
        return cls(n_worlds, props, rel[ok], **kw)

    # -- model reconstruction ------------------------------------------------

    def model(self, r: int, v: int) -> KripkeModel:
        n, k = self.n, len(self.props)
        worlds = [f"w{i}" for i in range(n)]
        edges = [
            (worlds[i], worlds[j]) for i in range(n) for j in range(n) if (r >> (i * n + j)) & 1
        ]
        val = {
            worlds[w]: [p for pi, p in enumerate(self.props) if (v >> (w * k + pi)) & 1]
            for w in range(n)
        }
        return KripkeModel(worlds, edges, val)

    # -- structure arrays ----------------------------------------------------

    def _structure(self, rel: np.ndarray):
        n = self.n
        row = (1 << n) - 1
        succ = np.stack([(rel >> (i * n)) & row for i in range(n)], axis=1)  # (R, n)
        image = np.zeros((len(rel), self.n_teams), dtype=np.int64)
        # hit[r, w, T']: world w has a successor in T'
        hit = (succ[:, :, None] & self.teams[None, None, :]) != 0
        cover_all = np.ones((len(rel), self.n_teams, self.n_teams), dtype=bool)
        for t in range(1, self.n_teams):
            low = (t & -t).bit_length() - 1
            rest = t & (t - 1)
            image[:, t] = image[:, rest] | succ[:, low]
            cover_all[:, t, :] = cover_all[:, rest, :] & hit[:, low, :]
        subset = (self.teams[None, None, :] & ~image[:, :, None]) == 0
        return image, cover_all & subset

    def _prop_masks(self) -> np.ndarray:
        """(valuations, props) array of world bitmasks."""
        n, k = self.n, len(self.props)
        v = np.arange(self.n_val, dtype=np.int64)
        out = np.zeros((self.n_val, max(k, 1)), dtype=np.int64)
        for pi in range(k):
            for w in range(n):
                out[:, pi] |= ((v >> (w * k + pi)) & 1) << w
        return out

    def _atom(self, phi) -> np.ndarray:
        """Valuation-only truth table of an atom, shape (1, valuations, teams)."""
        if phi in self._atoms:
            return self._atoms[phi]
        masks = self._prop_masks()
        teams = self.teams[None, :]

        def mask_of(p):
            if p in self.props:
                return masks[:, self.props.index(p)][:, None]
            return np.zeros((self.n_val, 1), dtype=np.int64)

        if isinstance(phi, Prop):
            out = (teams & ~mask_of(phi.name)) == 0
        elif isinstance(phi, NegProp):
            out = (teams & mask_of(phi.name)) == 0
        else:
            out = self._dep(phi, mask_of)
        out = out[None, :, :]
        self._atoms[phi] = out
        return out

    def _dep(self, phi: Dep, mask_of) -> np.ndarray:
        n = self.n
        worlds = np.arange(n)
        bits = lambda p: (mask_of(p) >> worlds[None, :]) & 1  # (V, n)
        same = np.ones((self.n_val, n, n), dtype=bool)
        for p in phi.antecedents:
            b = bits(p)
            same &= b[:, :, None] == b[:, None, :]
        q = bits(phi.consequent)
        conflict = same & (q[:, :, None] != q[:, None, :])  # (V, n, n)
        # bad_with[v, w, T]: w conflicts with some member of T
        bad_with = np.zeros((self.n_val, n, self.n_teams), dtype=bool)
        bad = np.zeros((self.n_val, self.n_teams), dtype=bool)
        for t in range(1, self.n_teams):
            low = (t & -t).bit_length() - 1
            rest = t & (t - 1)
            bad_with[:, :, t] = bad_with[:, :, rest] | conflict[:, :, low]
            bad[:, t] = bad[:, rest] | bad_with[:, low, rest]
        return ~bad

    # -- evaluation ----------------------------------------------------------

    def chunks(self) -> Iterator[tuple[np.ndarray, np.ndarray, np.ndarray]]:
        for lo in range(0, len(self.relations), self.chunk):
            rel = self.relations[lo:lo + self.chunk]
            image, cover = self._structure(rel)
            yield rel, image, cover

    def evaluate(self, phi: Formula) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        """Yield ``(relations, truth)`` per chunk; truth is (R, V, teams)."""
        for rel, image, cover in self.chunks():
            out = self._eval(phi, image, cover, {})
            yield rel, np.broadcast_to(out, (len(rel), self.n_val, self.n_teams))

    def _eval(self, phi, image, cover, memo) -> np.ndarray:
        key = id(phi)
        if key in memo:
            return memo[key]
        if isinstance(phi, (Prop, NegProp, Dep)):
            out = self._atom(phi)
        elif isinstance(phi, Apply):
            args = [self._eval(a, image, cover, memo) for a in phi.args]
            if args:
                shape = np.broadcast_shapes(*(a.shape for a in args))
            else:
                shape = (1, 1, 1)
            out = np.zeros(shape, dtype=bool)
            for row, value in enumerate(phi.fn.table):
                if value:
                    term = np.ones(shape, dtype=bool)
                    for k, a in enumerate(args):
                        term &= a if (row >> k) & 1 else ~a
                    out |= term
        else:
            child = self._eval(phi.arg, image, cover, memo)
            child = np.broadcast_to(child, (image.shape[0], self.n_val, self.n_teams))
            if isinstance(phi, Box):
                idx = np.broadcast_to(image[:, None, :], child.shape)
                out = np.take_along_axis(child, idx, axis=2)
            elif isinstance(phi, Diamond):
                out = np.any(cover[:, None, :, :] & child[:, :, None, :], axis=3)
            elif isinstance(phi, BoxDot):
                out = np.all(~cover[:, None, :, :] | child[:, :, None, :], axis=3)
            else:
                raise TypeError(f"unknown formula node {phi!r}")
        memo[key] = out
        return out

    def downward_closure_violation(self, phi: Formula):
        """First ``(model, team, subteam)`` where truth is lost on a subteam."""
        for rel, truth in self.evaluate(phi):
            for w in range(self.n):
                bit = 1 << w
                with_w = self.teams[(self.teams & bit) != 0]
                lost = truth[:, :, with_w] & ~truth[:, :, with_w ^ bit]
                if lost.any():
                    r, v, t = np.argwhere(lost)[0]
                    team = int(with_w[t])
                    return self.model(int(rel[r]), int(v)), team, team ^ bit
        return None

    def disagreement(self, phi: Formula, psi: Formula):
        """First ``(model, team)`` where ``phi`` and ``psi`` differ, else None."""
        for (rel, a), (_, b) in zip(self.evaluate(phi), self.evaluate(psi)):
            diff = a != b
            if diff.any():
                r, v, t = np.argwhere(diff)[0]
                return self.model(int(rel[r]), int(v)), int(t)
        return None

    def count_disagreements(self, phi: Formula, psi: Formula) -> tuple[int, int]:
        """(number of differing (model, team) pairs, total pairs)."""
        bad = total = 0
        for (rel, a), (_, b) in zip(self.evaluate(phi), self.evaluate(psi)):
            bad += int((a != b).sum())
            total += a.size
        return bad, total
