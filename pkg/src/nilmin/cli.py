"""``nilmin`` command line: validate, analyze, tables, catalog, flow, translate.

Exit codes: 0 success, 1 invalid algebra, 2 internal error, 64 usage error
(bad flags, malformed JSON or DSL, out-of-range indices).  Verdicts live in
the report body, never in the exit code.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .algebra import BracketError, LieBracket, validate
from .catalog import FAMILIES, DomainError, format_params, get_family, instantiate, parse_params, reproduce_tables, sweep
from .flow import MODES, FlowOptions, run_flow
from .pipeline import DEFAULT_SAMPLES, DEFAULT_SEED, AnalysisReport, analyze
from .serialize import SCHEMA_VERSION, SpecError, bracket_to_spec, dumps, exact_str, load_spec
from .structeq import StructEqSyntaxError, parse_equations, translate

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INTERNAL = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_seed() -> int:
    raw = os.environ.get("NILMIN_SEED")
    if raw is None or raw.strip() == "":
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"NILMIN_SEED must be an integer, got {raw!r}") from None


def _seed(args) -> int:
    return args.seed if args.seed is not None else _default_seed()


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


# ------------------------------------------------------------------ text views


def _validation_text(mu: LieBracket, name: str) -> str:
    rep = validate(mu)
    lines = [f"algebra: {name or '(unnamed)'}  dim={mu.dim}  nonzero constants={len(mu.entries)}"]
    for key, value in rep.to_dict().items():
        lines.append(f"  {key}: {value}")
    return "\n".join(lines) + "\n"


def _analysis_text(rep: AnalysisReport) -> str:
    lines = [f"algebra: {rep.name or '(unnamed)'}" + (f"  [{format_params(rep.params)}]" if rep.params else "")]
    lines.append(f"verdict: {rep.verdict}")
    v = rep.validation
    lines.append(f"nilpotent step: {v.step}  integrable: {v.integrable}  abelian J: {v.abelian_complex}")
    if rep.jnice is not None:
        lines.append(f"J-nice: {rep.jnice_method}")
    if rep.representative is not None:
        lines.append(f"orbit representative: {bracket_to_spec(rep.representative.bracket)['brackets']}")
    if rep.gram is not None:
        lines.append("weights (source i,j,k -> weight):")
        for row in rep.weights:
            lines.append(f"  {row.source} -> {row.weight}")
        lines.append("Gram matrix U:")
        for row in rep.gram:
            lines.append("  " + " ".join(f"{x:3d}" for x in row))
    if rep.feasibility is not None:
        f = rep.feasibility
        lines.append(f"feasibility: {f.status}")
        if f.witness:
            lines.append("  witness: (" + ", ".join(exact_str(x) for x in f.witness) + ")")
        if f.solution_form is not None:
            lines.append(f"  solutions of U x = [1]: {f.solution_form.render()}")
    if rep.ricci is not None:
        lines.append(f"scal: {exact_str(rep.ricci.scal)}  tr(Ric^c^2): {exact_str(rep.ricci.ric_c_norm2)}")
    if rep.soliton is not None:
        s = rep.soliton
        lines.append(f"canonical metric minimal: {s.exists}" + (f" (c = {exact_str(s.c)})" if s.exists else ""))
    for note in rep.notes:
        lines.append(f"note: {note}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ commands


def cmd_validate(args) -> int:
    mu, name, params = load_spec(args.spec)
    rep = validate(mu)
    if args.json:
        out = {"schema_version": SCHEMA_VERSION, "input": bracket_to_spec(mu, name, params), "validation": rep.to_dict()}
        _write(dumps(out), None)
    else:
        _write(_validation_text(mu, name), None)
    return EXIT_OK if rep.valid else EXIT_INVALID


def _emit_analysis(rep: AnalysisReport, as_json: bool) -> int:
    _write(dumps(rep.to_dict()) if as_json else _analysis_text(rep), None)
    return EXIT_INVALID if rep.validation is not None and not rep.validation.valid else EXIT_OK


def cmd_analyze(args) -> int:
    mu, name, params = load_spec(args.spec)
    rep = analyze(mu, samples=args.samples, seed=_seed(args), name=name, params=params)
    return _emit_analysis(rep, args.json)


def cmd_tables(args) -> int:
    names = args.family or None
    if names:
        for name in names:
            get_family(name)
    report = reproduce_tables(samples=args.samples, seed=_seed(args), names=names)
    if args.csv is None and args.json is None:
        _write(report.to_csv(), None)
    if args.csv is not None:
        _write(report.to_csv(), args.csv)
    if args.json is not None:
        _write(dumps(report.to_dict()), args.json)
    print(
        f"{len(report.rows)} rows, {len(report.existence_mismatches)} existence mismatches, "
        f"{len(report.mismatches)} mismatches",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_catalog_list(args) -> int:
    rows = []
    for fam in FAMILIES.values():
        rows.append({
            "name": fam.name,
            "params": list(fam.params),
            "grid": [format_params(dict(zip(fam.params, p))) for p in fam.grid],
            "remark": fam.remark,
        })
    if args.json:
        _write(dumps({"schema_version": SCHEMA_VERSION, "families": rows}), None)
    else:
        for r in rows:
            params = ",".join(r["params"]) or "-"
            _write(f"{r['name']:<10} params={params:<8} grid: {' | '.join(g or '()' for g in r['grid'])}\n", None)
    return EXIT_OK


def cmd_catalog_run(args) -> int:
    fam = get_family(args.family)
    if args.params is None and fam.params:
        report = sweep(fam.name, samples=args.samples, seed=_seed(args))
        _write(dumps(report.to_dict()) if args.json else report.to_csv(), None)
        return EXIT_OK
    inst = instantiate(fam.name, parse_params(args.params))
    if args.spec:
        _write(dumps(bracket_to_spec(inst.bracket, inst.family, inst.params)), None)
        return EXIT_OK
    rep = analyze(inst.bracket, samples=args.samples, seed=_seed(args), name=inst.family, params=inst.params)
    if args.json:
        out = rep.to_dict()
        out["expected"] = {"existence": inst.expected_existence, "canonical_minimal": inst.expected_canonical}
        _write(dumps(out), None)
        return EXIT_OK
    return _emit_analysis(rep, False)


def cmd_flow(args) -> int:
    mu, name, params = load_spec(args.spec)
    rep = validate(mu)
    if not rep.valid:
        print("flow needs a valid nilpotent bracket with integrable J; run `nilmin validate`", file=sys.stderr)
        return EXIT_INVALID
    if mu.is_zero():
        print("zero bracket: flat metric, nothing to flow", file=sys.stderr)
        return EXIT_OK
    try:
        opts = FlowOptions(
            dt=args.dt, max_steps=args.max_steps, tol=args.tol, normalize=not args.no_normalize,
            record_every=args.record_every, mode=args.mode, cond_limit=args.cond_limit,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    result = run_flow(mu, opts=opts)
    if args.csv is not None:
        _write(result.trajectory_csv(), args.csv)
    if args.json:
        out = {"schema_version": SCHEMA_VERSION, "input": bracket_to_spec(mu, name, params)}
        out["options"] = {
            "dt": opts.dt, "max_steps": opts.max_steps, "tol": opts.tol, "normalize": opts.normalize,
            "mode": opts.mode, "cond_limit": opts.cond_limit,
        }
        out["result"] = result.to_dict()
        out["note"] = "numerical evidence only; non-convergence within the horizon is not a proof"
        _write(dumps(out), None)
    elif args.csv != "-":
        cond = "" if result.condition is None else f" cond(g)={result.condition:.6g}"
        _write(
            f"{result.status} after {result.steps} steps (t={result.time:.6g}): residual={result.final_residual:.6e} "
            f"c={result.c_estimate:.6e}{cond} monotonicity violations={result.monotone_violations}\n",
            None,
        )
    return EXIT_OK


def cmd_translate(args) -> int:
    try:
        text = Path(args.dsl).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {args.dsl}: {exc.strerror}") from None
    values = {}
    for item in args.param or []:
        values.update(parse_params(item))
    eqs = parse_equations(text, params=values)
    target = None
    target_params: dict = {}
    if args.target:
        fam = get_family(args.target)
        target_params = {p: values[p] for p in fam.params if p in values}
        target = instantiate(fam.name, target_params).bracket
    try:
        res = translate(eqs, target)
    except BracketError as exc:
        print(f"invalid algebra: {exc}", file=sys.stderr)
        return EXIT_INVALID
    mu = res.bracket
    if target is not None:
        if res.normalized is None:
            print(f"no rational diagonal rescaling onto {args.target}; emitting raw constants", file=sys.stderr)
        else:
            mu = res.normalized
    name = args.name or (args.target or Path(args.dsl).stem)
    out_params = target_params if res.normalized is not None else values
    _write(dumps(bracket_to_spec(mu, name, out_params)), args.output)
    return EXIT_OK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nilmin", description="Minimal hermitian metrics on nilpotent Lie algebras with complex structure.")
    p.add_argument("--version", action="version", version=f"nilmin {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def seeds(sp):
        sp.add_argument("--samples", type=_positive_int, default=DEFAULT_SAMPLES, help="diagonality samples (default 32)")
        sp.add_argument("--seed", type=int, default=None, help="sampling seed (default: $NILMIN_SEED or 0)")

    sp = sub.add_parser("validate", help="check antisymmetry, Jacobi, nilpotency and integrability")
    sp.add_argument("spec", help="JSON algebra spec")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("analyze", help="full pipeline: weights, Gram matrix, feasibility, verdict")
    sp.add_argument("spec", help="JSON algebra spec")
    sp.add_argument("--json", action="store_true")
    seeds(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("tables", help="reproduce the classification over the default grids")
    sp.add_argument("--csv", metavar="OUT", help="write CSV here ('-' for stdout)")
    sp.add_argument("--json", metavar="OUT", help="write the JSON mirror here ('-' for stdout)")
    sp.add_argument("--family", action="append", help="restrict to a family (repeatable)")
    seeds(sp)
    sp.set_defaults(func=cmd_tables)

    sp = sub.add_parser("catalog", help="built-in families")
    csub = sp.add_subparsers(dest="catalog_command", required=True, parser_class=_Parser)
    lp = csub.add_parser("list", help="list families, parameters and default grids")
    lp.add_argument("--json", action="store_true")
    lp.set_defaults(func=cmd_catalog_list)
    rp = csub.add_parser("run", help="analyze one instance, or sweep the default grid when no params are given")
    rp.add_argument("family")
    rp.add_argument("params", nargs="?", help="e.g. 's=1,t=0'")
    rp.add_argument("--json", action="store_true")
    rp.add_argument("--spec", action="store_true", help="emit the instance's JSON spec instead of analysing it")
    seeds(rp)
    rp.set_defaults(func=cmd_catalog_run)

    sp = sub.add_parser("flow", help="numerical complexified Ricci bracket flow (evidence only)")
    sp.add_argument("spec", help="JSON algebra spec")
    sp.add_argument("--dt", type=float, default=1e-3)
    sp.add_argument("--max-steps", type=int, default=200_000)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--no-normalize", action="store_true", help="bracket mode only: do not renormalise |mu|")
    sp.add_argument("--record-every", type=_positive_int, default=1000)
    sp.add_argument("--mode", choices=MODES, default="orbit")
    sp.add_argument("--cond-limit", type=float, default=1e3, help="orbit mode: cond(g) beyond which the run is degenerate")
    sp.add_argument("--csv", metavar="OUT", help="write the sampled trajectory as CSV ('-' for stdout)")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_flow)

    sp = sub.add_parser("translate", help="complex structure equations (DSL) to a JSON algebra spec")
    sp.add_argument("dsl", help="structure-equation file")
    sp.add_argument("--param", action="append", metavar="NAME=VALUE", help="bind a parameter (repeatable)")
    sp.add_argument("--target", metavar="FAMILY", help="rescale onto this catalog family at the bound parameters")
    sp.add_argument("--name", help="name recorded in the JSON output")
    sp.add_argument("-o", "--output", help="output file (default stdout)")
    sp.set_defaults(func=cmd_translate)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SpecError, StructEqSyntaxError, DomainError) as exc:
        print(f"nilmin: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KeyError as exc:
        print(f"nilmin: {exc.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"nilmin: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        return EXIT_OK
    except Exception as exc:  # noqa: BLE001 - last-resort guard for the exit-code contract
        print(f"nilmin: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
