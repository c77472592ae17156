"""Command line front end.

Subcommand groups wrap the library layers: `catalog` exposes the built-in
operator entries, `op` works on operator JSON documents (validation, linear
transformation, conformal checks, the correspondence with constant 3-forms),
and `sys` generates and verifies conservative systems.

Exit codes: 0 all checks passed, 1 a mathematical check failed, 2 bad input.
Seeded invocations produce byte-identical output for identical arguments.
"""

from __future__ import annotations

import argparse
import json
import random
import sys as _sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from .catalog import N8_CLASS_COUNT, get_entry, list_entries
from .operators import (
    Hho2,
    ProjReciprocal,
    conformal_check,
    conformal_determinant_check,
    transform,
    validate,
)
from .poly import rat
from .systems import (
    ConservativeSystem,
    DegenerateOperatorError,
    FluxParams,
    casimir_check,
    check_compat,
    euler_check,
    generate_flux,
    linearity_report,
    pluecker_relations,
    random_flux_params,
)
from .diagnostics import run_diagnostics, sample_points
from .threeform import LinearMapN1, ThreeForm, chart_restrict, embed


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    samples: int = 20
    coefficient_range: int = 10
    mode: str = "exact"
    digits: int = 50
    output: str = "text"

    def as_dict(self) -> dict:
        return {
            "seed": self.seed,
            "samples": self.samples,
            "coefficient_range": self.coefficient_range,
            "mode": self.mode,
            "digits": self.digits,
        }


class InputError(Exception):
    """Bad file, malformed document, or unknown identifier."""


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_json(source: str):
    """Parse a JSON document given as a file path or as an inline literal."""
    stripped = source.lstrip()
    text = source if stripped[:1] in "[{" else _read_text(source)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc


def _load_operator(path: str) -> Hho2:
    try:
        return Hho2.from_json(_read_text(path))
    except InputError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _load_system(path: str) -> ConservativeSystem:
    try:
        return ConservativeSystem.from_json(_read_text(path))
    except DegenerateOperatorError as exc:
        raise InputError(f"{path}: {exc}") from exc
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _load_linear_map(path: str) -> LinearMapN1:
    data = _load_json(path)
    try:
        if isinstance(data, dict):
            return LinearMapN1.from_json(json.dumps(data))
        return LinearMapN1(data)
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _parse_param_list(items: Optional[List[str]]) -> dict:
    values = {}
    for item in items or []:
        name, sep, raw = item.partition("=")
        if not sep or not name:
            raise InputError(f"parameter {item!r} is not of the form name=value")
        try:
            values[name] = rat(raw)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"parameter {item!r}: {exc}") from exc
    return values


def _parse_constants(raw: Optional[str], n: int) -> Optional[List[Fraction]]:
    if raw is None:
        return None
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != n:
        raise InputError(f"--constants expects {n} comma-separated values")
    try:
        return [rat(p) for p in parts]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"--constants: {exc}") from exc


def _dump(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2)


def _emit(report: dict, config: RunConfig, text_lines: List[str]) -> None:
    if config.output == "json":
        print(_dump(report))
    else:
        for line in text_lines:
            print(line)


def _write_payload(payload: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(payload + "\n")
    else:
        print(payload)


# ----- catalog ------------------------------------------------------------------


def cmd_catalog_list(args, config: RunConfig) -> int:
    entries = list_entries()
    rows = [
        {
            "id": e.id,
            "n": e.n,
            "parameters": list(e.params),
            "degenerate": e.degenerate,
            "notes": e.notes,
        }
        for e in entries
    ]
    report = {
        "command": "catalog list",
        "count": len(rows),
        "entries": rows,
        "n8_class_count": N8_CLASS_COUNT,
    }
    lines = [f"{len(rows)} catalog entries (n=8 classification holds {N8_CLASS_COUNT} classes; two families built here):"]
    for row in rows:
        tag = " degenerate" if row["degenerate"] else ""
        par = f" params={','.join(row['parameters'])}" if row["parameters"] else ""
        lines.append(f"  {row['id']:14s} n={row['n']}{par}{tag}  {row['notes']}")
    _emit(report, config, lines)
    return 0


def cmd_catalog_show(args, config: RunConfig) -> int:
    entry = _get_catalog_entry(args.id)
    op = entry.build_symbolic()
    g = op.metric()
    matrix = [[str(g.at(i, j)) for j in range(op.n)] for i in range(op.n)]
    report = {
        "command": "catalog show",
        "id": entry.id,
        "n": entry.n,
        "parameters": list(entry.params),
        "degenerate": entry.degenerate,
        "metric": matrix,
        "expected_det": entry.expected_det,
        "notes": entry.notes,
    }
    lines = [f"{entry.id}: n={entry.n}  {entry.notes}"]
    if entry.params:
        lines.append(f"parameters: {', '.join(entry.params)}")
    lines.append("metric g_ij:")
    width = max(len(cell) for row in matrix for cell in row)
    for row in matrix:
        lines.append("  [ " + "  ".join(cell.rjust(width) for cell in row) + " ]")
    if entry.expected_det is not None:
        lines.append(f"det(g) = {entry.expected_det}")
    if entry.degenerate:
        lines.append("degenerate: Pfaffian vanishes identically")
    _emit(report, config, lines)
    return 0


def _get_catalog_entry(entry_id: str):
    try:
        return get_entry(entry_id)
    except (KeyError, ValueError) as exc:
        raise InputError(str(exc)) from exc


def cmd_catalog_export(args, config: RunConfig) -> int:
    entry = _get_catalog_entry(args.id)
    values = _parse_param_list(args.params)
    try:
        op = entry.build(values) if (values or not entry.params) else entry.build_symbolic()
    except (ValueError, KeyError) as exc:
        raise InputError(str(exc)) from exc
    if not op.is_numeric():
        raise InputError(
            f"{entry.id} needs --params for: {', '.join(entry.params)}"
        )
    _write_payload(op.to_json(), args.out)
    return 0


# ----- op -----------------------------------------------------------------------


def cmd_op_validate(args, config: RunConfig) -> int:
    op = _load_operator(args.file)
    rep = validate(op)
    report = {
        "command": "op validate",
        "n": rep.n,
        "tensor_skew": rep.t_total_skew,
        "g0_skew": rep.g0_skew,
        "pfaffian": str(rep.pfaffian),
        "degenerate": rep.degenerate,
        "problems": rep.problems,
        "ok": rep.ok,
    }
    lines = [
        f"n = {rep.n}",
        f"tensor skew: {rep.t_total_skew}",
        f"g0 skew: {rep.g0_skew}",
        f"Pfaffian: {rep.pfaffian}",
        f"degenerate: {rep.degenerate}",
    ]
    if rep.problems:
        lines += [f"problem: {p}" for p in rep.problems]
    lines.append("ok" if rep.ok else "INVALID")
    _emit(report, config, lines)
    return 0 if rep.ok else 1


def cmd_op_transform(args, config: RunConfig) -> int:
    op = _load_operator(args.file)
    a = _load_linear_map(args.sl)
    if a.dim != op.n + 1:
        raise InputError(f"--sl matrix must be {op.n + 1}x{op.n + 1} for this operator")
    try:
        moved = transform(op, ProjReciprocal(a))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(str(exc)) from exc
    _write_payload(moved.to_json(), args.out)
    return 0


def cmd_op_conformal_check(args, config: RunConfig) -> int:
    op = _load_operator(args.file)
    a = _load_linear_map(args.sl)
    if a.dim != op.n + 1:
        raise InputError(f"--sl matrix must be {op.n + 1}x{op.n + 1} for this operator")
    r = ProjReciprocal(a)
    count = args.points if args.points is not None else config.samples
    rng = random.Random(config.seed)
    checked = 0
    failures = 0
    attempts = 0
    results = []
    while checked < count and attempts < 50 * count:
        attempts += 1
        u = sample_points(op, 1, rng, bound=config.coefficient_range, allow_degenerate=True)[0]
        if not r.affine_factor(u):
            continue
        ok_metric = conformal_check(op, r, u)
        ok_det = conformal_determinant_check(op, r, u)
        results.append({"point": [str(x) for x in u], "metric_identity": ok_metric, "determinant_identity": ok_det})
        if not (ok_metric and ok_det):
            failures += 1
        checked += 1
    if checked < count:
        raise InputError("could not sample enough points off the poles")
    report = {
        "command": "op conformal-check",
        "config": config.as_dict(),
        "n": op.n,
        "sl": a.is_sl,
        "points_checked": checked,
        "failures": failures,
        "points": results,
        "ok": failures == 0,
    }
    lines = [
        f"map is unimodular: {a.is_sl}",
        f"checked {checked} points: {'all conformal identities hold' if failures == 0 else f'{failures} failures'}",
    ]
    _emit(report, config, lines)
    return 0 if failures == 0 else 1


def cmd_op_to_3form(args, config: RunConfig) -> int:
    op = _load_operator(args.file)
    form = embed(op.t3, op.g0, op.n, op.params)
    _write_payload(form.to_json(), args.out)
    return 0


def cmd_op_from_3form(args, config: RunConfig) -> int:
    try:
        form = ThreeForm.from_json(_read_text(args.file))
        if form.dim < 3:
            raise ValueError("form dimension must be at least 3")
        t3, g0 = chart_restrict(form)
        op = Hho2(form.dim - 1, t3, g0, form.params)
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{args.file}: {exc}") from exc
    _write_payload(op.to_json(), args.out)
    return 0


# ----- sys ----------------------------------------------------------------------


def cmd_sys_generate(args, config: RunConfig) -> int:
    op = _load_operator(args.op)
    if not op.is_numeric():
        raise InputError("operator has free parameters; export it with --params first")
    constants = _parse_constants(args.constants, op.n)
    rng = random.Random(config.seed)
    try:
        if args.random:
            flux = random_flux_params(op.n, rng, bound=config.coefficient_range)
            system = ConservativeSystem(op, flux, constants)
        elif args.A or args.B:
            if not (args.A and args.B):
                raise InputError("--A and --B must be given together")
            a_data = _load_json(args.A)
            b_data = _load_json(args.B)
            try:
                a = [[rat(x) for x in row] for row in a_data]
                b = [rat(x) for x in b_data]
                flux = FluxParams.make(a, b)
            except (ValueError, TypeError, ZeroDivisionError) as exc:
                raise InputError(f"bad flux data: {exc}") from exc
            system = ConservativeSystem(op, flux, constants)
        else:
            raise InputError("either --random or both --A and --B are required")
    except DegenerateOperatorError as exc:
        raise InputError(str(exc)) from exc
    lin = linearity_report(system)
    den = system.flux_denominator_report()
    payload = system.to_json()
    report = {
        "command": "sys generate",
        "config": config.as_dict(),
        "n": op.n,
        "random_flux": bool(args.random),
        "linear": lin.is_linear,
        "pfaffian_degree": system.d.degree(),
        "denominators_ok": den["ok"],
        "system": json.loads(payload),
    }
    lines = [
        f"generated conservative system on n={op.n}",
        f"flux linear: {lin.is_linear}",
        f"denominators divide the Pfaffian, numerator degrees within n/2: {den['ok']}",
    ]
    if args.out:
        _write_payload(payload, args.out)
        lines.append(f"system written to {args.out}")
        _emit(report, config, lines)
    else:
        if config.output == "json":
            print(_dump(report))
        else:
            for line in lines:
                print(line)
            print(payload)
    return 0


def cmd_sys_verify(args, config: RunConfig) -> int:
    system = _load_system(args.file)
    n = system.op.n
    rng = random.Random(config.seed)
    if n <= 6:
        compat = check_compat(system, mode="symbolic")
    else:
        pts = sample_points(system.op, config.samples, rng, bound=config.coefficient_range)
        compat = check_compat(system, mode="points", points=pts)
    plk = pluecker_relations(system)
    den = system.flux_denominator_report()
    eul = euler_check(system)
    cas = casimir_check(system.op)
    ok = compat.passed and plk.passed and den["ok"] and eul.passed
    report = {
        "command": "sys verify",
        "config": config.as_dict(),
        "n": n,
        "compatibility": {
            "mode": compat.mode,
            "first_order_ok": compat.first_order_ok,
            "second_order_ok": compat.second_order_ok,
            "points_checked": compat.points_checked,
        },
        "pluecker_ok": plk.passed,
        "denominators_ok": den["ok"],
        "euler_ok": eul.passed,
        "casimir_corank": cas.corank,
        "ok": ok,
    }
    lines = [
        f"compatibility ({compat.mode}): {'pass' if compat.passed else 'FAIL'}",
        f"line-congruence relations: {'pass' if plk.passed else 'FAIL'}",
        f"flux denominators: {'pass' if den['ok'] else 'FAIL'}",
        f"variational reconstruction: {'pass' if eul.passed else 'FAIL'}",
        f"casimir corank: {cas.corank}",
        "ok" if ok else "VERIFICATION FAILED",
    ]
    _emit(report, config, lines)
    return 0 if ok else 1


def cmd_sys_diagnose(args, config: RunConfig) -> int:
    system = _load_system(args.file)
    count = args.points if args.points is not None else config.samples
    rng = random.Random(config.seed)
    pts = sample_points(system.op, count, rng, bound=config.coefficient_range)
    rep = run_diagnostics(system, pts, mode=config.mode, digits=config.digits)
    body = rep.to_dict()
    ok = body["haantjes_zero"] and body["nijenhuis_routes_agree"] and body["charpoly_square_ok"]
    report = {
        "command": "sys diagnose",
        "config": config.as_dict(),
        "report": body,
        "ok": ok,
    }
    lines = [
        f"points sampled: {len(pts)}",
        f"haantjes zero at all points: {body['haantjes_zero']}",
        f"nijenhuis routes agree: {body['nijenhuis_routes_agree']}",
        f"nijenhuis nonzero at {body['nijenhuis_nonzero_points']} points",
        f"charpoly is a perfect square at all points: {body['charpoly_square_ok']}",
        f"diagonalizable at all points: {body['all_diagonalizable']}",
        "ok" if ok else "DIAGNOSTIC FAILURE",
    ]
    _emit(report, config, lines)
    return 0 if ok else 1


# ----- parser -------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hho2",
        description="Exact tools for second-order homogeneous Hamiltonian operators and their conservative systems.",
    )
    parser.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    parser.add_argument("--samples", type=int, default=20, help="sample point count (default 20)")
    parser.add_argument(
        "--coefficient-range", type=int, default=10, metavar="N",
        help="integer bound for random coefficients and sample coordinates (default 10)",
    )
    parser.add_argument("--mode", choices=("exact", "float"), default="exact", help="eigenstructure arithmetic (default exact)")
    parser.add_argument("--digits", type=int, default=50, help="working precision for --mode float (default 50)")
    parser.add_argument("--output", choices=("text", "json"), default="text", help="report format (default text)")

    sub = parser.add_subparsers(dest="group", required=True)

    cat = sub.add_parser("catalog", help="built-in operator entries").add_subparsers(dest="command", required=True)
    cat.add_parser("list", help="list all entries").set_defaults(func=cmd_catalog_list)
    show = cat.add_parser("show", help="display an entry's metric and determinant")
    show.add_argument("id")
    show.set_defaults(func=cmd_catalog_show)
    export = cat.add_parser("export", help="write an entry as operator JSON")
    export.add_argument("id")
    export.add_argument("--params", nargs="*", metavar="NAME=VALUE", help="values for parametric entries")
    export.add_argument("--out", help="write to a file instead of stdout")
    export.set_defaults(func=cmd_catalog_export)

    opg = sub.add_parser("op", help="operator documents").add_subparsers(dest="command", required=True)
    val = opg.add_parser("validate", help="structural validation and nondegeneracy")
    val.add_argument("file")
    val.set_defaults(func=cmd_op_validate)
    tra = opg.add_parser("transform", help="pull back along a linear map of the extended space")
    tra.add_argument("file")
    tra.add_argument("--sl", required=True, help="(n+1)x(n+1) matrix, inline JSON or a file path")
    tra.add_argument("--out", help="write to a file instead of stdout")
    tra.set_defaults(func=cmd_op_transform)
    conf = opg.add_parser("conformal-check", help="pointwise conformal identity under a reciprocal transformation")
    conf.add_argument("file")
    conf.add_argument("--sl", required=True, help="(n+1)x(n+1) matrix, inline JSON or a file path")
    conf.add_argument("--points", type=int, help="number of sample points (default --samples)")
    conf.set_defaults(func=cmd_op_conformal_check)
    to3 = opg.add_parser("to-3form", help="extended constant 3-form of the operator")
    to3.add_argument("file")
    to3.add_argument("--out", help="write to a file instead of stdout")
    to3.set_defaults(func=cmd_op_to_3form)
    fr3 = opg.add_parser("from-3form", help="operator determined by a constant 3-form")
    fr3.add_argument("file")
    fr3.add_argument("--out", help="write to a file instead of stdout")
    fr3.set_defaults(func=cmd_op_from_3form)

    sysg = sub.add_parser("sys", help="conservative systems").add_subparsers(dest="command", required=True)
    gen = sysg.add_parser("generate", help="build a compatible flux for an operator")
    gen.add_argument("op", help="operator JSON file")
    gen.add_argument("--A", help="n x n skew matrix, inline JSON or a file path")
    gen.add_argument("--B", help="length-n vector, inline JSON or a file path")
    gen.add_argument("--random", action="store_true", help="draw A and B from the seeded generator")
    gen.add_argument("--constants", help="comma-separated additive flux constants")
    gen.add_argument("--out", help="write the system JSON to a file")
    gen.set_defaults(func=cmd_sys_generate)
    ver = sysg.add_parser("verify", help="compatibility identities, congruence relations, denominators")
    ver.add_argument("file", help="system JSON file")
    ver.set_defaults(func=cmd_sys_verify)
    dia = sysg.add_parser("diagnose", help="torsion tensors, square charpoly, eigenstructure at sample points")
    dia.add_argument("file", help="system JSON file")
    dia.add_argument("--points", type=int, help="number of sample points (default --samples)")
    dia.set_defaults(func=cmd_sys_diagnose)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    config = RunConfig(
        seed=args.seed,
        samples=args.samples,
        coefficient_range=args.coefficient_range,
        mode=args.mode,
        digits=args.digits,
        output=args.output,
    )
    if config.samples < 1:
        parser.error("--samples must be at least 1")
    try:
        return args.func(args, config)
    except InputError as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 2
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    raise SystemExit(main())
