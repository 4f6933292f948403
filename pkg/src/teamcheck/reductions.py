"""Instance generators for reachability, SAT and QBF, with brute-force oracles.

Each generator turns a source instance into ``(model, team, formula)``;
the expected truth value always comes from the matching oracle on the
source instance, never from the construction itself.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Iterable, Iterator, Sequence

from .formula import (
    BOT,
    NOT,
    TOP,
    XOR,
    Apply,
    BoxDot,
    Dep,
    Diamond,
    Formula,
    boxes,
    render_formula,
)
from .kripke import KripkeModel, Team
from .limits import require
from .semantics import check

# -- source instances --------------------------------------------------------


@dataclass(frozen=True)
class Digraph:
    nodes: tuple[str, ...]
    edges: frozenset[tuple[str, str]]
    s: str
    t: str

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", frozenset(tuple(e) for e in self.edges))
        names = set(self.nodes)
        if len(names) != len(self.nodes):
            raise ValueError("duplicate node")
        if self.s not in names or self.t not in names:
            raise ValueError("s and t must be nodes of the graph")
        for a, b in self.edges:
            if a not in names or b not in names:
                raise ValueError(f"edge ({a}, {b}) uses an undeclared node")

    def to_json(self) -> dict:
        return {"nodes": list(self.nodes), "edges": sorted(map(list, self.edges)), "s": self.s, "t": self.t}


@dataclass(frozen=True)
class CnfInstance:
    variable_count: int
    clauses: tuple[frozenset[int], ...]

    def __post_init__(self):
        clauses = tuple(frozenset(c) for c in self.clauses)
        for c in clauses:
            if not c:
                raise ValueError("clauses must be nonempty")
            for lit in c:
                if lit == 0 or abs(lit) > self.variable_count:
                    raise ValueError(f"literal {lit} out of range 1..{self.variable_count}")
        object.__setattr__(self, "clauses", clauses)

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        """``assignment[i]`` is the value of variable ``i + 1``."""
        return all(any(assignment[abs(l) - 1] == (l > 0) for l in c) for c in self.clauses)

    def to_json(self) -> dict:
        return {"vars": self.variable_count, "clauses": [sorted(c, key=abs) for c in self.clauses]}


@dataclass(frozen=True)
class QbfInstance:
    """``E x1 A x2 E x3 ... matrix``; ``prefix[i]`` is ``'e'`` or ``'a'``."""

    prefix: tuple[str, ...]
    matrix: CnfInstance

    def __post_init__(self):
        prefix = tuple(self.prefix)
        object.__setattr__(self, "prefix", prefix)
        if not prefix:
            raise ValueError("malformed prefix: no quantified variables")
        for i, q in enumerate(prefix):
            if q != ("e" if i % 2 == 0 else "a"):
                raise ValueError(
                    "malformed prefix: quantifiers must alternate starting with an existential"
                )
        if self.matrix.variable_count != len(prefix):
            raise ValueError("matrix and prefix disagree on the number of variables")

    @classmethod
    def alternating(cls, n: int, clauses: Iterable[Iterable[int]]) -> "QbfInstance":
        prefix = tuple("e" if i % 2 == 0 else "a" for i in range(n))
        return cls(prefix, CnfInstance(n, tuple(frozenset(c) for c in clauses)))

    @property
    def n(self) -> int:
        return len(self.prefix)

    def universal(self) -> list[int]:
        return [i + 1 for i, q in enumerate(self.prefix) if q == "a"]

    def to_json(self) -> dict:
        return {"prefix": "".join(self.prefix), "clauses": [sorted(c, key=abs) for c in self.matrix.clauses]}


@dataclass
class GeneratedInstance:
    model: KripkeModel
    team: Team
    formula: Formula
    expected: bool | None = None
    kind: str = ""
    degenerate: bool = False
    source: dict = field(default_factory=dict)

    def team_spec(self) -> str:
        return ",".join(self.model.team_names(self.team))


# -- oracles -----------------------------------------------------------------


def oracle_reach(g: Digraph) -> bool:
    """Is ``t`` reachable from ``s`` (every node reaches itself)?"""
    require("reach_nodes", len(g.nodes), "reachability oracle")
    adj: dict[str, list[str]] = {}
    for a, b in g.edges:
        adj.setdefault(a, []).append(b)
    seen = {g.s}
    frontier = [g.s]
    while frontier:
        nxt = []
        for a in frontier:
            for b in adj.get(a, ()):
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return g.t in seen


def oracle_sat(psi: CnfInstance) -> bool:
    require("sat_vars", psi.variable_count, "SAT oracle")
    return any(
        psi.satisfied_by(bits) for bits in product((False, True), repeat=psi.variable_count)
    )


def oracle_qbf(phi: QbfInstance) -> bool:
    if not isinstance(phi, QbfInstance):
        raise TypeError("expected a QbfInstance")
    require("qbf_vars", phi.n, "QBF oracle")
    assignment: list[bool] = []

    def value(i: int) -> bool:
        if i == phi.n:
            return phi.matrix.satisfied_by(assignment)
        outcomes = []
        for b in (False, True):
            assignment.append(b)
            outcomes.append(value(i + 1))
            assignment.pop()
            if phi.prefix[i] == "e" and outcomes[-1]:
                return True
            if phi.prefix[i] == "a" and not outcomes[-1]:
                return False
        return phi.prefix[i] == "a"

    return value(0)


# -- generators --------------------------------------------------------------


def gen_reach(g: Digraph) -> GeneratedInstance:
    """Self-loops on every node, ``q`` everywhere but ``t``, ``box^(|V|-1) dep(q)`` at ``{s}``.

    The formula holds iff ``t`` is unreachable, except when ``s == t``: then
    the instance is marked degenerate, since the value no longer tracks
    reachability.
    """
    edges = set(g.edges) | {(v, v) for v in g.nodes}
    val = {v: ["q"] for v in g.nodes if v != g.t}
    model = KripkeModel(g.nodes, sorted(edges), val)
    phi = boxes(len(g.nodes) - 1, Dep((), "q"))
    return GeneratedInstance(
        model,
        model.team([g.s]),
        phi,
        expected=not oracle_reach(g),
        kind="reach",
        degenerate=g.s == g.t,
        source=g.to_json(),
    )


SAT_MODES = ("sat", "unsat-accept", "always-accept", "always-reject")


def sat_worlds(psi: CnfInstance) -> tuple[list[str], list[str], list[str]]:
    clauses = [f"c_{i + 1}" for i in range(len(psi.clauses))]
    pos = [f"s_{j}" for j in range(1, psi.variable_count + 1)]
    negs = [f"sbar_{j}" for j in range(1, psi.variable_count + 1)]
    return clauses, pos, negs


def gen_sat(psi: CnfInstance, mode: str = "sat") -> GeneratedInstance:
    """Clause worlds pointing at literal worlds; ``dia dep(p_1..p_m, q)`` picks an assignment."""
    if mode not in SAT_MODES:
        raise ValueError(f"mode must be one of {SAT_MODES}")
    clauses, pos, negs = sat_worlds(psi)
    edges = []
    for i, c in enumerate(psi.clauses):
        for lit in sorted(c, key=abs):
            target = pos[lit - 1] if lit > 0 else negs[-lit - 1]
            edges.append((clauses[i], target))
    val = {}
    for j in range(psi.variable_count):
        val[pos[j]] = [f"p_{j + 1}", "q"]
        val[negs[j]] = [f"p_{j + 1}"]
    model = KripkeModel(clauses + pos + negs, edges, val)
    core = Diamond(Dep(tuple(f"p_{j}" for j in range(1, psi.variable_count + 1)), "q"))
    phi = {
        "sat": core,
        "unsat-accept": Apply(NOT, (core,)),
        "always-accept": Apply(TOP, ()),
        "always-reject": Apply(BOT, ()),
    }[mode]
    sat = oracle_sat(psi)
    expected = {"sat": sat, "unsat-accept": not sat, "always-accept": True, "always-reject": False}[mode]
    source = dict(psi.to_json(), mode=mode)
    return GeneratedInstance(model, model.team(clauses), phi, expected, "sat", source=source)


def qbf_names(i: int) -> dict:
    return {
        "delay": lambda j: f"d_{i}^{j}",
        "pos": lambda j: f"x_{i}^{j}",
        "neg": lambda j: f"xbar_{i}^{j}",
        "pos_value": f"x_{i}",
        "neg_value": f"xbar_{i}",
    }


def gen_qbf(phi: QbfInstance, q_on_existential_chains: bool = False) -> GeneratedInstance:
    """Kripke model whose modal game replays the quantifier prefix.

    Variable ``i`` gets a delay chain ``d_i^1 .. d_i^i`` branching into two
    value chains ``x_i^(i+1) .. x_i^(n+1)`` and ``xbar_i^(i+1) .. xbar_i^(n+1)``
    that end in the value worlds ``x_i`` / ``xbar_i``.  Clause ``j`` gets a
    chain ``c_j^1 .. c_j^(n+1)`` whose last world points at the value worlds
    of its literals.  Every start-to-value-world path has ``n + 1`` edges.

    The formula applies ``dia`` (existential) or ``boxdot`` (universal) once
    per variable and then

        ``!dep(P_forall, q) ^ dia dep(p_1, ..., p_n, q)``

    where ``P_forall`` lists the universal variables' propositions.  Chain
    worlds of existential variables carry ``p_i`` but not ``q``; otherwise
    ``dia`` could keep both branches of an existential variable, break the
    first dependence atom and satisfy the xor regardless of the matrix.
    ``q_on_existential_chains=True`` restores that labeling for comparison.
    """
    n = phi.n
    worlds: list[str] = []
    edges: list[tuple[str, str]] = []
    val: dict[str, list[str]] = {}
    team: list[str] = []
    universal = set(phi.universal())
    for i in range(1, n + 1):
        names = qbf_names(i)
        p = f"p_{i}"
        delay = [names["delay"](j) for j in range(1, i + 1)]
        pos = [names["pos"](j) for j in range(i + 1, n + 2)]
        negs = [names["neg"](j) for j in range(i + 1, n + 2)]
        worlds += delay + pos + negs + [names["pos_value"], names["neg_value"]]
        edges += list(zip(delay, delay[1:]))
        edges += [(delay[-1], pos[0]), (delay[-1], negs[0])]
        edges += list(zip(pos, pos[1:])) + list(zip(negs, negs[1:]))
        edges += [(pos[-1], names["pos_value"]), (negs[-1], names["neg_value"])]
        chain_q = i in universal or q_on_existential_chains
        for w in pos:
            val[w] = [p, "q"] if chain_q else [p]
        for w in negs:
            val[w] = [p]
        val[names["pos_value"]] = [p, "q"]
        val[names["neg_value"]] = [p]
        team.append(delay[0])
    for j, clause in enumerate(phi.matrix.clauses, start=1):
        chain = [f"c_{j}^{k}" for k in range(1, n + 2)]
        worlds += chain
        edges += list(zip(chain, chain[1:]))
        for lit in sorted(clause, key=abs):
            names = qbf_names(abs(lit))
            edges.append((chain[-1], names["pos_value"] if lit > 0 else names["neg_value"]))
        team.append(chain[0])
    model = KripkeModel(worlds, edges, val)
    return GeneratedInstance(
        model,
        model.team(team),
        qbf_formula(phi),
        expected=oracle_qbf(phi),
        kind="qbf",
        source=phi.to_json(),
    )


def qbf_matrix_formula(phi: QbfInstance) -> Formula:
    universal_props = tuple(f"p_{i}" for i in phi.universal())
    all_props = tuple(f"p_{i}" for i in range(1, phi.n + 1))
    return Apply(XOR, (Apply(NOT, (Dep(universal_props, "q"),)), Diamond(Dep(all_props, "q"))))


def qbf_formula(phi: QbfInstance) -> Formula:
    out = qbf_matrix_formula(phi)
    for q in reversed(phi.prefix):
        out = Diamond(out) if q == "e" else BoxDot(out)
    return out


def qbf_final_worlds(model: KripkeModel, phi: QbfInstance) -> tuple[list[tuple[str, str]], list[str]]:
    """Per variable the (positive, negative) chain ends, and the last clause-chain worlds.

    These are the worlds reached after one modal step per variable.
    """
    n = phi.n
    ends = [(f"x_{i}^{n + 1}", f"xbar_{i}^{n + 1}") for i in range(1, n + 1)]
    clause_ends = [f"c_{j}^{n + 1}" for j in range(1, len(phi.matrix.clauses) + 1)]
    return ends, clause_ends


# -- file formats ------------------------------------------------------------


def parse_edge_list(text: str) -> Digraph:
    """``s=<node> t=<node>`` header, then one ``a b`` edge (or lone node) per line."""
    s = t = None
    nodes: dict[str, None] = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if s is None:
            fields = dict(part.split("=", 1) for part in line.split() if "=" in part)
            if set(fields) != {"s", "t"} or len(line.split()) != 2:
                raise ValueError(f"line {lineno}: expected header 's=<node> t=<node>'")
            s, t = fields["s"], fields["t"]
            nodes.setdefault(s)
            nodes.setdefault(t)
            continue
        parts = line.split()
        if len(parts) == 1:
            nodes.setdefault(parts[0])
        elif len(parts) == 2:
            nodes.setdefault(parts[0])
            nodes.setdefault(parts[1])
            edges.append((parts[0], parts[1]))
        else:
            raise ValueError(f"line {lineno}: expected 'a b'")
    if s is None:
        raise ValueError("missing header 's=<node> t=<node>'")
    return Digraph(tuple(nodes), frozenset(edges), s, t)


def render_edge_list(g: Digraph) -> str:
    lines = [f"s={g.s} t={g.t}"]
    touched = {x for e in g.edges for x in e}
    lines += [v for v in g.nodes if v not in touched and v not in (g.s, g.t)]
    lines += [f"{a} {b}" for a, b in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def _dimacs_body(lines: list[tuple[int, str]], n_vars: int) -> list[frozenset[int]]:
    clauses = []
    current: list[int] = []
    for lineno, line in lines:
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ValueError(f"line {lineno}: bad literal {tok!r}") from None
            if lit == 0:
                if not current:
                    raise ValueError(f"line {lineno}: empty clause")
                clauses.append(frozenset(current))
                current = []
            elif abs(lit) > n_vars:
                raise ValueError(f"line {lineno}: variable {abs(lit)} exceeds declared {n_vars}")
            else:
                current.append(lit)
    if current:
        raise ValueError("last clause is not terminated by 0")
    return clauses


def _dimacs_header(text: str):
    header = None
    body = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf" or header is not None:
                raise ValueError(f"line {lineno}: expected 'p cnf <vars> <clauses>'")
            header = (int(parts[2]), int(parts[3]))
            continue
        if header is None:
            raise ValueError(f"line {lineno}: data before the 'p cnf' header")
        body.append((lineno, line))
    if header is None:
        raise ValueError("missing 'p cnf' header")
    return header, body


def parse_dimacs(text: str) -> CnfInstance:
    (n_vars, n_clauses), body = _dimacs_header(text)
    clauses = _dimacs_body(body, n_vars)
    if len(clauses) != n_clauses:
        raise ValueError(f"header declares {n_clauses} clauses, found {len(clauses)}")
    return CnfInstance(n_vars, tuple(clauses))


def render_dimacs(psi: CnfInstance) -> str:
    lines = [f"p cnf {psi.variable_count} {len(psi.clauses)}"]
    lines += [" ".join(map(str, sorted(c, key=abs))) + " 0" for c in psi.clauses]
    return "\n".join(lines) + "\n"


def parse_qdimacs(text: str) -> QbfInstance:
    """QDIMACS with variables quantified in order ``1 .. n``, one per block."""
    (n_vars, n_clauses), body = _dimacs_header(text)
    prefix: list[str] = []
    order: list[int] = []
    rest = []
    for lineno, line in body:
        head = line.split()[0]
        if head in ("e", "a"):
            if rest:
                raise ValueError(f"line {lineno}: quantifier block after clauses")
            vars_ = [int(x) for x in line.split()[1:]]
            if not vars_ or vars_[-1] != 0:
                raise ValueError(f"line {lineno}: quantifier block must end with 0")
            for v in vars_[:-1]:
                prefix.append(head)
                order.append(v)
        else:
            rest.append((lineno, line))
    if order != list(range(1, n_vars + 1)):
        raise ValueError("malformed prefix: variables must be quantified in order 1..n")
    clauses = _dimacs_body(rest, n_vars)
    if len(clauses) != n_clauses:
        raise ValueError(f"header declares {n_clauses} clauses, found {len(clauses)}")
    return QbfInstance(tuple(prefix), CnfInstance(n_vars, tuple(clauses)))


def render_qdimacs(phi: QbfInstance) -> str:
    lines = [f"p cnf {phi.n} {len(phi.matrix.clauses)}"]
    lines += [f"{q} {i} 0" for i, q in enumerate(phi.prefix, start=1)]
    lines += [" ".join(map(str, sorted(c, key=abs))) + " 0" for c in phi.matrix.clauses]
    return "\n".join(lines) + "\n"


# -- source instance spaces --------------------------------------------------


def all_digraphs(max_nodes: int) -> Iterator[Digraph]:
    """Every graph on 2..max_nodes nodes (loops omitted) with every s != t."""
    for n in range(2, max_nodes + 1):
        nodes = tuple(f"v{i}" for i in range(n))
        pairs = [(a, b) for a in nodes for b in nodes if a != b]
        for bits in product((False, True), repeat=len(pairs)):
            edges = frozenset(p for p, on in zip(pairs, bits) if on)
            for s in nodes:
                for t in nodes:
                    if s != t:
                        yield Digraph(nodes, edges, s, t)


def random_digraph(rng: random.Random, max_nodes: int) -> Digraph:
    n = rng.randint(2, max_nodes)
    nodes = tuple(f"v{i}" for i in range(n))
    prob = rng.uniform(0.05, 0.5)
    edges = frozenset((a, b) for a in nodes for b in nodes if a != b and rng.random() < prob)
    s, t = rng.sample(nodes, 2)
    return Digraph(nodes, edges, s, t)


def all_clauses(n_vars: int, max_width: int) -> list[frozenset[int]]:
    lits = [l for v in range(1, n_vars + 1) for l in (v, -v)]
    out = []
    for w in range(1, max_width + 1):
        out += [frozenset(c) for c in combinations(lits, w)]
    return out


def all_cnfs(max_vars: int, max_clauses: int, max_width: int = 3) -> Iterator[CnfInstance]:
    for n in range(0, max_vars + 1):
        pool = all_clauses(n, max_width)
        for k in range(0, max_clauses + 1):
            for combo in combinations(pool, k):
                yield CnfInstance(n, combo)


def random_cnf(rng: random.Random, max_vars: int, max_clauses: int, max_width: int = 3) -> CnfInstance:
    n = rng.randint(1, max_vars)
    clauses = []
    for _ in range(rng.randint(1, max_clauses)):
        width = rng.randint(1, min(max_width, n))
        vars_ = rng.sample(range(1, n + 1), width)
        clauses.append(frozenset(v if rng.random() < 0.5 else -v for v in vars_))
    return CnfInstance(n, tuple(clauses))


def all_qbfs(max_vars: int, max_clauses: int, max_width: int = 3) -> Iterator[QbfInstance]:
    for n in range(1, max_vars + 1):
        pool = all_clauses(n, max_width)
        for k in range(0, max_clauses + 1):
            for combo in combinations(pool, k):
                yield QbfInstance.alternating(n, combo)


def random_qbf(rng: random.Random, max_vars: int, max_clauses: int, max_width: int = 3) -> QbfInstance:
    cnf = random_cnf(rng, max_vars, max_clauses, max_width)
    return QbfInstance.alternating(cnf.variable_count, cnf.clauses)


# -- verification harness ----------------------------------------------------

DEFAULT_BOUNDS = {
    "reach": {"max_nodes": 8},
    "sat": {"max_vars": 4, "max_clauses": 4, "max_width": 3},
    "qbf": {"max_vars": 4, "max_clauses": 3, "max_width": 3},
}

Checker = Callable[[KripkeModel, Team, Formula], object]


def _instances(kind: str, count: int, bounds: dict, seed: int, exhaustive: bool):
    """Yield ``(instance_seed, GeneratedInstance)`` pairs."""
    if kind == "reach":
        if exhaustive:
            for g in all_digraphs(bounds["max_nodes"]):
                yield None, gen_reach(g)
            return
        make = lambda r: [gen_reach(random_digraph(r, bounds["max_nodes"]))]
    elif kind == "sat":
        if exhaustive:
            for psi in all_cnfs(bounds["max_vars"], bounds["max_clauses"], bounds["max_width"]):
                for mode in SAT_MODES:
                    yield None, gen_sat(psi, mode)
            return
        make = lambda r: [
            gen_sat(psi, mode)
            for psi in [random_cnf(r, bounds["max_vars"], bounds["max_clauses"], bounds["max_width"])]
            for mode in SAT_MODES
        ]
    elif kind == "qbf":
        if exhaustive:
            for phi in all_qbfs(bounds["max_vars"], bounds["max_clauses"], bounds["max_width"]):
                yield None, gen_qbf(phi)
            return
        make = lambda r: [
            gen_qbf(random_qbf(r, bounds["max_vars"], bounds["max_clauses"], bounds["max_width"]))
        ]
    else:
        raise ValueError(f"unknown reduction kind {kind!r}")
    rng = random.Random(seed)
    for _ in range(count):
        inst_seed = rng.randrange(1 << 32)
        for inst in make(random.Random(inst_seed)):
            yield inst_seed, inst


def verify_reduction(
    kind: str,
    count: int = 100,
    bounds: dict | None = None,
    seed: int = 0,
    exhaustive: bool = False,
    checker: Checker | None = None,
    keep_instances: bool = True,
) -> dict:
    """Run generated instances through ``checker`` and compare with the oracle.

    Degenerate instances (reachability with ``s == t``) are reported but do
    not count towards agreement.
    """
    merged = dict(DEFAULT_BOUNDS[kind]) if kind in DEFAULT_BOUNDS else {}
    merged.update(bounds or {})
    checker = checker or check
    report = {
        "kind": kind,
        "seed": seed,
        "exhaustive": exhaustive,
        "bounds": merged,
        "total": 0,
        "agree": 0,
        "disagree": 0,
        "degenerate": 0,
        "matrix": {},
        "counterexamples": [],
        "instances": [],
    }
    for inst_seed, inst in _instances(kind, count, merged, seed, exhaustive):
        got = bool(checker(inst.model, inst.team, inst.formula))
        cell = f"expected={str(inst.expected).lower()},got={str(got).lower()}"
        report["matrix"][cell] = report["matrix"].get(cell, 0) + 1
        report["total"] += 1
        record = {"source": inst.source, "expected": inst.expected, "got": got, "seed": inst_seed}
        if inst.degenerate:
            report["degenerate"] += 1
            record["degenerate"] = True
        elif got == inst.expected:
            report["agree"] += 1
        else:
            report["disagree"] += 1
            report["counterexamples"].append(
                dict(record, formula=render_formula(inst.formula), team=inst.team_spec())
            )
        if keep_instances:
            report["instances"].append(record)
    report["matrix"] = dict(sorted(report["matrix"].items()))
    return report
