"""Rewriting for formulas whose only connectives are unary.

Such a formula is a chain of ``!``, ``dia``, ``box`` and ``boxdot`` above a
leaf (literal, dependence atom or constant).  Negations commute outward
exactly::

    !!X      == X
    box !X   == !box X
    dia !X   == !boxdot X
    boxdot !X == !dia X

so the chain can always be brought to an optional ``!`` followed by
modalities only.
"""

from __future__ import annotations

from .formula import (
    BOT,
    NOT,
    TOP,
    Apply,
    Box,
    BoxDot,
    Dep,
    Diamond,
    Formula,
    NegProp,
    Prop,
)

DIA, BOX, BOXDOT = "dia", "box", "boxdot"
_NODE = {DIA: Diamond, BOX: Box, BOXDOT: BoxDot}


class NotInFragment(ValueError):
    pass


def is_unary_fragment(phi: Formula) -> bool:
    node = phi
    while True:
        if isinstance(node, (Diamond, Box, BoxDot)):
            node = node.arg
        elif isinstance(node, Apply):
            if node.fn.arity > 1:
                return False
            if node.fn.arity == 0:
                return True
            node = node.args[0]
        else:
            return True


def float_negations(phi: Formula) -> tuple[bool, list[str], Formula]:
    """Split ``phi`` into (negated, modality chain outermost first, leaf).

    The result is equivalent to ``phi`` on every model and team.
    """
    spine = []
    node = phi
    while True:
        if isinstance(node, (Diamond, Box, BoxDot)):
            spine.append(type(node))
            node = node.arg
        elif isinstance(node, Apply) and node.fn.arity == 1:
            table = node.fn.table
            if table == (False, True):
                pass
            elif table == (True, False):
                spine.append(NOT)
            else:
                node = Apply(TOP if table[0] else BOT, ())
                break
            node = node.args[0]
        elif isinstance(node, Apply) and node.fn.arity > 1:
            raise NotInFragment(f"connective {node.fn.name!r} is not unary")
        else:
            break
    if isinstance(node, Apply):
        node = Apply(TOP if node.fn.table[0] else BOT, ())
    elif not isinstance(node, (Prop, NegProp, Dep)):
        raise NotInFragment(f"unexpected node {node!r}")

    negated = False
    ops: list[str] = []
    # innermost first, carrying the pending negation outward
    for kind in reversed(spine):
        if kind is NOT:
            negated = not negated
        elif kind is Box:
            ops.append(BOX)
        elif kind is Diamond:
            ops.append(BOXDOT if negated else DIA)
        else:
            ops.append(DIA if negated else BOXDOT)
    ops.reverse()
    return negated, ops, node


def build_chain(negated: bool, ops: list[str], leaf: Formula) -> Formula:
    phi = leaf
    for op in reversed(ops):
        phi = _NODE[op](phi)
    return Apply(NOT, (phi,)) if negated else phi


def normalize_n_clone(phi: Formula) -> Formula:
    """Optional ``!`` over a chain of ``dia``/``box`` ending in a leaf.

    Negations are floated to the root and every ``boxdot`` is replaced by
    ``box``; after floating, each ``boxdot`` operand is negation free and
    therefore downward closed.  The replacement is exact only on teams
    whose worlds all have successors (see :func:`teamcheck.semantics.check`
    for the evaluation used on arbitrary models): on a team containing a
    dead end, ``boxdot X`` is vacuously true while ``box X`` is not.
    """
    negated, ops, leaf = float_negations(phi)
    ops = [BOX if op == BOXDOT else op for op in ops]
    return build_chain(negated, ops, leaf)
