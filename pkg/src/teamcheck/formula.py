"""Formula syntax: Boolean function tables, the AST, a parser and a printer.

Grammar (ASCII)::

    phi ::= ident | '~' ident | 'dep(' ident (',' ident)* ')'
          | 'box' phi | 'dia' phi | 'boxdot' phi
          | fname '(' [phi (',' phi)*] ')' | '(' phi ')'
          | phi '&' phi | phi '^' phi | phi '|' phi | '!' phi

Prefix operators bind tighter than ``&``, which binds tighter than ``^``,
which binds tighter than ``|``.  Infix operators are left associative.
``~p`` is atomic negation; ``!phi`` is the classical connective ``not``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence, Union


@dataclass(frozen=True)
class BooleanFunction:
    """A named Boolean function given by its truth table.

    Row ``i`` of ``table`` is the value at the argument vector whose k-th
    entry is bit k of ``i`` (the first argument is the least significant bit).
    """

    name: str
    arity: int
    table: tuple[bool, ...]

    def __post_init__(self):
        if self.arity < 0:
            raise ValueError("arity must be non-negative")
        table = tuple(bool(b) for b in self.table)
        if len(table) != 1 << self.arity:
            raise ValueError(
                f"function {self.name!r}: table has {len(table)} rows, "
                f"expected {1 << self.arity}"
            )
        object.__setattr__(self, "table", table)

    def __call__(self, *args: bool) -> bool:
        return eval_function(self, args)

    @classmethod
    def from_callable(cls, name: str, arity: int, fn) -> "BooleanFunction":
        rows = []
        for i in range(1 << arity):
            rows.append(bool(fn(*[(i >> k) & 1 for k in range(arity)])))
        return cls(name, arity, tuple(rows))


def eval_function(f: BooleanFunction, args: Sequence[bool]) -> bool:
    if len(args) != f.arity:
        raise ValueError(f"{f.name} expects {f.arity} arguments, got {len(args)}")
    index = 0
    for k, a in enumerate(args):
        if a:
            index |= 1 << k
    return f.table[index]


AND = BooleanFunction("and", 2, (False, False, False, True))
OR = BooleanFunction("or", 2, (False, True, True, True))
NOT = BooleanFunction("not", 1, (True, False))
XOR = BooleanFunction("xor", 2, (False, True, True, False))
TOP = BooleanFunction("top", 0, (True,))
BOT = BooleanFunction("bot", 0, (False,))

BUILTINS: dict[str, BooleanFunction] = {f.name: f for f in (AND, OR, NOT, XOR, TOP, BOT)}


def load_functions(data: Union[str, bytes, Mapping]) -> dict[str, BooleanFunction]:
    """Read a function-table file: ``{"name": {"arity": n, "table": [bits]}}``."""
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    if not isinstance(data, Mapping):
        raise ValueError("function file must be a JSON object")
    out = {}
    for name, spec in data.items():
        if not _IDENT.fullmatch(name) or name in _KEYWORDS:
            raise ValueError(f"invalid function name {name!r}")
        try:
            arity = spec["arity"]
            table = spec["table"]
        except (KeyError, TypeError):
            raise ValueError(f"function {name!r} needs 'arity' and 'table'") from None
        if not isinstance(arity, int) or any(b not in (0, 1, True, False) for b in table):
            raise ValueError(f"function {name!r}: arity must be an int and table bits 0/1")
        f = BooleanFunction(name, arity, tuple(table))
        if name in BUILTINS and BUILTINS[name] != f:
            raise ValueError(f"function {name!r} conflicts with the built-in of that name")
        out[name] = f
    return out


def dump_functions(functions: Sequence[BooleanFunction]) -> str:
    return json.dumps(
        {f.name: {"arity": f.arity, "table": [int(b) for b in f.table]} for f in functions},
        indent=2,
        sort_keys=True,
    )


# -- AST ---------------------------------------------------------------------


@dataclass(frozen=True)
class Prop:
    name: str


@dataclass(frozen=True)
class NegProp:
    """Atomic negation: no world of the team carries the proposition."""

    name: str


@dataclass(frozen=True)
class Dep:
    antecedents: tuple[str, ...]
    consequent: str

    def __post_init__(self):
        object.__setattr__(self, "antecedents", tuple(self.antecedents))


@dataclass(frozen=True)
class Apply:
    fn: BooleanFunction
    args: tuple["Formula", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if len(self.args) != self.fn.arity:
            raise ValueError(
                f"{self.fn.name} expects {self.fn.arity} arguments, got {len(self.args)}"
            )


@dataclass(frozen=True)
class Diamond:
    arg: "Formula"


@dataclass(frozen=True)
class Box:
    arg: "Formula"


@dataclass(frozen=True)
class BoxDot:
    """The dual modality: every covering successor team satisfies ``arg``."""

    arg: "Formula"


Formula = Union[Prop, NegProp, Dep, Apply, Diamond, Box, BoxDot]
MODALITIES = (Diamond, Box, BoxDot)


def children(phi: Formula) -> tuple:
    if isinstance(phi, Apply):
        return phi.args
    if isinstance(phi, MODALITIES):
        return (phi.arg,)
    return ()


def subformulas(phi: Formula) -> Iterator[Formula]:
    """Pre-order walk (iterative, so deep modal chains are fine)."""
    stack = [phi]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def propositions(phi: Formula) -> list[str]:
    seen: dict[str, None] = {}
    for node in subformulas(phi):
        if isinstance(node, (Prop, NegProp)):
            seen.setdefault(node.name)
        elif isinstance(node, Dep):
            for p in node.antecedents + (node.consequent,):
                seen.setdefault(p)
    return list(seen)


def functions_of(phi: Formula) -> list[BooleanFunction]:
    seen: dict[BooleanFunction, None] = {}
    for node in subformulas(phi):
        if isinstance(node, Apply):
            seen.setdefault(node.fn)
    return list(seen)


def size(phi: Formula) -> int:
    return sum(1 for _ in subformulas(phi))


def depth(phi: Formula) -> int:
    kids = children(phi)
    return 1 + max((depth(c) for c in kids), default=0)


def boxes(n: int, phi: Formula) -> Formula:
    for _ in range(n):
        phi = Box(phi)
    return phi


def neg(phi: Formula) -> Formula:
    return Apply(NOT, (phi,))


def conj(a: Formula, b: Formula) -> Formula:
    return Apply(AND, (a, b))


def disj(a: Formula, b: Formula) -> Formula:
    return Apply(OR, (a, b))


def xor(a: Formula, b: Formula) -> Formula:
    return Apply(XOR, (a, b))


# -- parser ------------------------------------------------------------------


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_KEYWORDS = {"box", "dia", "boxdot", "dep"}
_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_']*)|([()~!&|^,]))")

_INFIX = {"|": (1, OR), "^": (2, XOR), "&": (3, AND)}
_UNARY = {"box": Box, "dia": Diamond, "boxdot": BoxDot}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:]
            if rest.strip():
                bad = pos + len(rest) - len(rest.lstrip())
                raise FormulaSyntaxError(f"unexpected character {text[bad]!r}", bad)
            break
        kind = "ident" if m.group(1) else "sym"
        tokens.append((kind, m.group(m.lastindex), m.start(m.lastindex)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, functions: Mapping[str, BooleanFunction]):
        self.tokens = _tokenize(text)
        self.i = 0
        self.functions = functions

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.take()
        if val != value or kind == "end":
            raise FormulaSyntaxError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def ident(self) -> str:
        kind, val, pos = self.take()
        if kind != "ident" or val in _KEYWORDS:
            raise FormulaSyntaxError(f"expected a proposition name, found {val or 'end of input'!r}", pos)
        return val

    def formula(self, min_prec: int = 1) -> Formula:
        left = self.unary()
        while True:
            kind, val, _ = self.peek()
            if kind != "sym" or val not in _INFIX:
                return left
            prec, fn = _INFIX[val]
            if prec < min_prec:
                return left
            self.take()
            right = self.formula(prec + 1)
            left = Apply(fn, (left, right))

    def unary(self) -> Formula:
        # prefix operators are collected in a loop so long chains do not recurse
        ops = []
        while True:
            kind, val, _ = self.peek()
            if kind == "sym" and val == "!":
                ops.append(lambda x: Apply(NOT, (x,)))
            elif kind == "ident" and val in _UNARY:
                ops.append(_UNARY[val])
            else:
                break
            self.take()
        phi = self.primary()
        for op in reversed(ops):
            phi = op(phi)
        return phi

    def primary(self) -> Formula:
        kind, val, pos = self.take()
        if kind == "sym" and val == "(":
            inner = self.formula()
            self.expect(")")
            return inner
        if kind == "sym" and val == "~":
            return NegProp(self.ident())
        if kind != "ident":
            raise FormulaSyntaxError(f"unexpected {val or 'end of input'!r}", pos)
        if val == "dep":
            self.expect("(")
            names = [self.ident()]
            while self.peek()[1] == ",":
                self.take()
                names.append(self.ident())
            self.expect(")")
            return Dep(tuple(names[:-1]), names[-1])
        if val in _KEYWORDS:
            raise FormulaSyntaxError(f"keyword {val!r} needs an operand", pos)
        if self.peek()[1] == "(" and self.peek()[0] == "sym":
            fn = self.functions.get(val)
            if fn is None:
                raise FormulaSyntaxError(f"unknown function {val!r}", pos)
            self.take()
            args = []
            if self.peek()[1] != ")":
                args.append(self.formula())
                while self.peek()[1] == ",":
                    self.take()
                    args.append(self.formula())
            self.expect(")")
            if len(args) != fn.arity:
                raise FormulaSyntaxError(
                    f"function {val!r} expects {fn.arity} arguments, got {len(args)}", pos
                )
            return Apply(fn, tuple(args))
        return Prop(val)


def parse_formula(text: str, functions: Mapping[str, BooleanFunction] | None = None) -> Formula:
    """Parse ``text``; ``functions`` adds named connectives to the built-ins."""
    table = dict(BUILTINS)
    if functions:
        table.update(functions)
    parser = _Parser(text, table)
    phi = parser.formula()
    kind, val, pos = parser.peek()
    if kind != "end":
        raise FormulaSyntaxError(f"unexpected {val!r}", pos)
    return phi


# -- printer -----------------------------------------------------------------

_INFIX_SYMBOL = {AND: ("&", 3), OR: ("|", 1), XOR: ("^", 2)}
_PREFIX = {Box: "box", Diamond: "dia", BoxDot: "boxdot"}


def _prec(phi: Formula) -> int:
    if isinstance(phi, Apply) and phi.fn in _INFIX_SYMBOL:
        return _INFIX_SYMBOL[phi.fn][1]
    return 4


def render_formula(phi: Formula) -> str:
    """Print ``phi`` in the grammar accepted by :func:`parse_formula`."""
    prefix = []
    while isinstance(phi, MODALITIES) or (isinstance(phi, Apply) and phi.fn == NOT):
        prefix.append(_PREFIX[type(phi)] + " " if isinstance(phi, MODALITIES) else "!")
        phi = phi.arg if isinstance(phi, MODALITIES) else phi.args[0]
    if prefix:
        return "".join(prefix) + _wrap(phi, 4)
    if isinstance(phi, Prop):
        return phi.name
    if isinstance(phi, NegProp):
        return "~" + phi.name
    if isinstance(phi, Dep):
        return "dep(" + ",".join(phi.antecedents + (phi.consequent,)) + ")"
    if phi.fn in _INFIX_SYMBOL:
        sym, prec = _INFIX_SYMBOL[phi.fn]
        left, right = phi.args
        return f"{_wrap(left, prec)} {sym} {_wrap(right, prec + 1)}"
    return phi.fn.name + "(" + ", ".join(render_formula(a) for a in phi.args) + ")"


def _wrap(phi: Formula, min_prec: int) -> str:
    text = render_formula(phi)
    return text if _prec(phi) >= min_prec else f"({text})"
