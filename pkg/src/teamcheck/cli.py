"""``teamcheck`` command line: check, classify, generate, verify, bench, closure.

Exit codes: ``check`` returns 0 when the formula is satisfied and 1 when it
is not; ``verify`` returns 0 on full agreement and 1 otherwise.  Input,
usage and resource errors return 2.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from . import reductions
from .clones import (
    classify_clone,
    closure_oracle,
    fragment_complexity,
    fragment_signature,
)
from .formula import (
    BUILTINS,
    Dep,
    FormulaSyntaxError,
    Prop,
    boxes,
    conj,
    disj,
    load_functions,
    parse_formula,
    render_formula,
)
from .kripke import ModelError, load_model, save_model
from .limits import ResourceLimitError, require
from .sampling import sparse_random_model
from .semantics import BOX_FAST, GENERIC, REFERENCE, check

EXIT_TRUE, EXIT_FALSE, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _functions(path: str | None) -> dict:
    return load_functions(_read(path)) if path else {}


def _emit(args, payload: dict, human: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(human))


# -- check -------------------------------------------------------------------


def cmd_check(args) -> int:
    model = load_model(_read(args.model).encode())
    team = model.team(args.team)
    phi = parse_formula(args.formula, _functions(args.functions))
    engine = {"auto": None, "reference": REFERENCE, "fast": BOX_FAST}[args.engine]
    t0 = time.perf_counter()
    result = check(model, team, phi, path=engine)
    elapsed = time.perf_counter() - t0
    value = bool(result)
    stats = dict(result.stats)
    _emit(
        args,
        {"value": value, "path": stats.get("path"), "stats": stats, "seconds": elapsed},
        [
            "true" if value else "false",
            f"path: {stats.get('path')}",
            "stats: " + ", ".join(f"{k}={v}" for k, v in sorted(stats.items()) if k != "path"),
        ],
    )
    return EXIT_TRUE if value else EXIT_FALSE


# -- classify ----------------------------------------------------------------


def cmd_classify(args) -> int:
    if args.formula is not None:
        phi = parse_formula(args.formula, _functions(args.functions))
        sig = fragment_signature(phi)
        payload = {
            "clone": sig.clone.value,
            "uses_box": sig.uses_box,
            "uses_diamond": sig.uses_diamond,
            "uses_dep": sig.uses_dep,
            "complexity": fragment_complexity(sig),
        }
        human = [
            f"clone: {sig.clone.value}",
            f"box: {'yes' if sig.uses_box else 'no'}",
            f"dia: {'yes' if sig.uses_diamond else 'no'}",
            f"dep: {'yes' if sig.uses_dep else 'no'}",
            f"complexity: {payload['complexity']}",
        ]
    else:
        if not args.functions:
            raise UsageError("classify needs --formula or --functions")
        fns = _functions(args.functions)
        label = classify_clone(fns.values())
        payload = {"clone": label.value, "functions": sorted(fns)}
        human = [f"clone: {label.value}", "functions: " + ", ".join(sorted(fns))]
    _emit(args, payload, human)
    return 0


# -- generate ----------------------------------------------------------------


def _source(kind: str, text: str):
    if kind == "reach":
        return reductions.parse_edge_list(text)
    if kind == "sat":
        return reductions.parse_dimacs(text)
    return reductions.parse_qdimacs(text)


def cmd_generate(args) -> int:
    src = _source(args.kind, _read(args.input))
    if args.kind == "sat":
        inst = reductions.gen_sat(src, args.mode)
    elif args.mode is not None:
        raise UsageError("--mode only applies to sat")
    elif args.kind == "reach":
        inst = reductions.gen_reach(src)
    else:
        inst = reductions.gen_qbf(src)
    prefix = args.out_prefix
    files = {
        "model": f"{prefix}.model.json",
        "formula": f"{prefix}.formula.txt",
        "team": f"{prefix}.team.txt",
        "expected": f"{prefix}.expected.json",
    }
    Path(files["model"]).write_bytes(save_model(inst.model))
    Path(files["formula"]).write_text(render_formula(inst.formula) + "\n")
    Path(files["team"]).write_text(inst.team_spec() + "\n")
    Path(files["expected"]).write_text(
        json.dumps(
            {"kind": inst.kind, "expected": inst.expected, "degenerate": inst.degenerate, "source": inst.source},
            indent=2,
            sort_keys=True,
        )
        + "\n"
    )
    if inst.degenerate:
        print("warning: degenerate instance (s = t); the formula value does not track reachability",
              file=sys.stderr)
    _emit(
        args,
        {"files": files, "expected": inst.expected, "degenerate": inst.degenerate,
         "worlds": len(inst.model.worlds)},
        [f"wrote {path}" for path in files.values()]
        + [f"expected: {str(inst.expected).lower()}", f"worlds: {len(inst.model.worlds)}"],
    )
    return 0


# -- verify ------------------------------------------------------------------


def _bounds(args) -> dict:
    bounds = {}
    for key in ("max_nodes", "max_vars", "max_clauses", "max_width"):
        value = getattr(args, key)
        if value is not None:
            bounds[key] = value
    return bounds


def cmd_verify(args) -> int:
    report = reductions.verify_reduction(
        args.kind,
        count=args.count,
        bounds=_bounds(args),
        seed=args.seed,
        exhaustive=args.exhaustive,
        keep_instances=not args.summary,
    )
    if args.report:
        Path(args.report).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    human = [
        f"{report['kind']}: {report['agree']}/{report['total'] - report['degenerate']} agree"
        + (f", {report['degenerate']} degenerate" if report["degenerate"] else ""),
    ]
    human += [f"  {cell}: {n}" for cell, n in report["matrix"].items()]
    for cx in report["counterexamples"][:5]:
        human.append(f"  counterexample: {json.dumps(cx, sort_keys=True)}")
    _emit(args, report, human)
    return 0 if report["disagree"] == 0 else 1


# -- bench -------------------------------------------------------------------


def box_bench_formulas(depth: int) -> dict:
    dep = Dep(("p",), "q")
    return {
        f"box^{depth} dep(p,q)": boxes(depth, dep),
        f"box^{depth} (dep(p,q) & (dep(r) | p))": boxes(depth, conj(dep, disj(Dep((), "r"), Prop("p")))),
        f"box^{depth} dep(p,q) | box^{depth} r": disj(boxes(depth, dep), boxes(depth, Prop("r"))),
    }


def _time(model, team, phi, path, repeat: int) -> dict:
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = check(model, team, phi, path=path)
        elapsed = time.perf_counter() - t0
        best = elapsed if best is None else min(best, elapsed)
    return {"seconds": best, "value": bool(result), "stats": dict(result.stats)}


def run_bench(suite: str, seed: int = 0, worlds: int = 1000, depth: int = 50,
              clauses: int = 10, variables: int = 6, repeat: int = 1) -> dict:
    """Timings for the evaluation engines; deterministic apart from the seconds."""
    require("bench_worlds", worlds, "benchmark model")
    report = {"suite": suite, "seed": seed, "results": []}
    if suite in ("box", "all"):
        rng = random.Random(seed)
        model = sparse_random_model(rng, worlds)
        team = model.team([model.worlds[0], model.worlds[worlds // 2]])
        for name, phi in box_bench_formulas(depth).items():
            for engine, path in (("auto", None), ("reference", REFERENCE)):
                row = {"suite": "box", "instance": name, "engine": engine, "worlds": worlds}
                row.update(_time(model, team, phi, path, repeat))
                report["results"].append(row)
    if suite in ("dia", "all"):
        rng = random.Random(seed)
        psi = reductions.random_cnf(rng, variables, clauses, 3)
        while len(psi.clauses) != clauses:
            psi = reductions.random_cnf(rng, variables, clauses, 3)
        for mode in ("sat", "unsat-accept"):
            inst = reductions.gen_sat(psi, mode)
            for engine, path in (("auto", None), ("generic", GENERIC), ("reference", REFERENCE)):
                row = {"suite": "dia", "instance": f"sat/{mode} ({clauses} clauses)", "engine": engine,
                       "worlds": len(inst.model.worlds), "expected": inst.expected}
                row.update(_time(inst.model, inst.team, inst.formula, path, repeat))
                report["results"].append(row)
    return report


def cmd_bench(args) -> int:
    report = run_bench(args.suite, seed=args.seed, worlds=args.worlds, depth=args.depth,
                       clauses=args.clauses, repeat=args.repeat)
    if args.format == "human":
        lines = [f"suite: {report['suite']} seed: {report['seed']}"]
        for r in report["results"]:
            lines.append(f"{r['suite']:4} {r['engine']:9} {r['seconds'] * 1000:9.2f} ms  "
                         f"path={r['stats']['path']} value={str(r['value']).lower()}  {r['instance']}")
        print("\n".join(lines))
    else:
        print(json.dumps(report, indent=2, sort_keys=True))
    return 0


# -- closure -----------------------------------------------------------------


def cmd_closure(args) -> int:
    fns = list(_functions(args.functions).values())
    for name in args.builtin or []:
        if name not in BUILTINS:
            raise UsageError(f"unknown built-in function {name!r}")
        fns.append(BUILTINS[name])
    closed = closure_oracle(fns, args.max_arity)
    counts = {a: 0 for a in range(args.max_arity + 1)}
    for f in closed:
        counts[f.arity] += 1
    label = classify_clone(fns)
    payload = {
        "generators": [f.name for f in fns],
        "max_arity": args.max_arity,
        "clone": label.value,
        "counts": {str(a): n for a, n in counts.items()},
        "functions": sorted(
            ({"arity": f.arity, "table": [int(b) for b in f.table]} for f in closed),
            key=lambda d: (d["arity"], d["table"]),
        ),
    }
    human = [f"generators: {', '.join(payload['generators']) or '(none)'}", f"clone: {label.value}"]
    human += [f"arity {a}: {n} functions" for a, n in counts.items()]
    if args.tables:
        human += [f"  {d['arity']}: {''.join(map(str, d['table']))}" for d in payload["functions"]]
    _emit(args, payload, human)
    return 0


# -- argument parsing --------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="teamcheck", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("human", "json"), default="human")

    p = sub.add_parser("check", help="decide M, T |= phi")
    p.add_argument("--model", required=True, help="model JSON file")
    p.add_argument("--team", default="", help="comma separated world names (empty = empty team)")
    p.add_argument("--formula", required=True)
    p.add_argument("--functions", help="JSON file with extra truth-table functions")
    p.add_argument("--engine", choices=("auto", "reference", "fast"), default="auto")
    add_format(p)
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("classify", help="clone, fragment and complexity of a formula")
    p.add_argument("--formula")
    p.add_argument("--functions")
    add_format(p)
    p.set_defaults(run=cmd_classify)

    p = sub.add_parser("generate", help="build a model checking instance from REACH/SAT/QBF input")
    p.add_argument("kind", choices=("reach", "sat", "qbf"))
    p.add_argument("--input", required=True, help="edge list, DIMACS or QDIMACS file")
    p.add_argument("--mode", choices=reductions.SAT_MODES)
    p.add_argument("--out-prefix", required=True)
    add_format(p)
    p.set_defaults(run=cmd_generate)

    p = sub.add_parser("verify", help="compare generated instances against the oracles")
    p.add_argument("kind", choices=("reach", "sat", "qbf"))
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--max-nodes", type=int)
    p.add_argument("--max-vars", type=int)
    p.add_argument("--max-clauses", type=int)
    p.add_argument("--max-width", type=int)
    p.add_argument("--report", help="write the full JSON report here")
    p.add_argument("--summary", action="store_true", help="omit per-instance records")
    add_format(p)
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("bench", help="time the evaluation engines")
    p.add_argument("suite", choices=("box", "dia", "all", "none"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--worlds", type=int, default=1000)
    p.add_argument("--depth", type=int, default=50)
    p.add_argument("--clauses", type=int, default=10)
    p.add_argument("--repeat", type=int, default=1)
    p.add_argument("--format", choices=("human", "json"), default="json")
    p.set_defaults(run=cmd_bench)

    p = sub.add_parser("closure", help="functions generated by a set of connectives")
    p.add_argument("--functions")
    p.add_argument("--builtin", nargs="*", metavar="NAME")
    p.add_argument("--max-arity", type=int, default=2)
    p.add_argument("--tables", action="store_true")
    add_format(p)
    p.set_defaults(run=cmd_closure)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else 0
    try:
        return args.run(args)
    except (UsageError, FormulaSyntaxError, ModelError, ResourceLimitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
