"""Command line front-end.

Exit codes: 0 success, 1 invalid fan or failed surgery, 2 unreadable
input, 3 class not positive, 4 condition (b) fails, 5 class outside the
Mori cone, 6 positive class whose support is not a circuit, 70 internal
consistency failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from . import family as fam
from .classes import CurveClass, class_space, is_geometric_extremal, mori_cone
from .errors import InternalConsistencyError, TorquoError
from .fan import Fan, flip, product, star_subdivision, validate
from .gallery import gallery, projective_space

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INPUT = 2
EXIT_CODES = {
    fam.OK: 0,
    fam.NOT_A_RELATION: 2,
    fam.NOT_POSITIVE: 3,
    fam.CONDITION_B_FAILED: 4,
    fam.NOT_IN_CONE: 5,
    fam.NOT_A_CIRCUIT: 6,
}
EXIT_INTERNAL = 70

SCHEMA_PATH = Path(__file__).with_name("schemas") / "output.schema.json"


class InputError(Exception):
    pass


def max_dim() -> int:
    raw = os.environ.get("TORQUO_MAX_DIM", "8")
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"TORQUO_MAX_DIM must be an integer, got {raw!r}")


def _load_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}")


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"{where}: expected an integer, got {value!r}")
    return value


def _list(value, where: str) -> list:
    if not isinstance(value, list):
        raise InputError(f"{where}: expected a list, got {type(value).__name__}")
    return value


def parse_fan(data, source: str = "<fan>") -> Fan:
    if not isinstance(data, dict):
        raise InputError(f"{source}: expected a JSON object")
    for key in ("rank", "rays", "max_cones"):
        if key not in data:
            raise InputError(f"{source}: missing field {key!r}")
    rank = _int(data["rank"], f"{source}: rank")
    if rank > max_dim():
        raise InputError(f"{source}: rank {rank} exceeds TORQUO_MAX_DIM={max_dim()}")
    rays = [
        [_int(x, f"{source}: rays[{i}][{j}]") for j, x in enumerate(_list(r, f"{source}: rays[{i}]"))]
        for i, r in enumerate(_list(data["rays"], f"{source}: rays"))
    ]
    cones = [
        [_int(x, f"{source}: max_cones[{i}][{j}]") for j, x in enumerate(_list(c, f"{source}: max_cones[{i}]"))]
        for i, c in enumerate(_list(data["max_cones"], f"{source}: max_cones"))
    ]
    return Fan(rank, rays, cones)


def load_fan(path: str) -> Fan:
    return parse_fan(_load_json(path), path)


def _rational(value, where: str) -> Fraction:
    if isinstance(value, bool):
        raise InputError(f"{where}: expected a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise InputError(f"{where}: expected an integer or a string 'p/q', got {value!r}")


def parse_class(data, n_rays: int, source: str = "<class>") -> CurveClass:
    """Full-length ``{"coeffs": [...]}`` or ``{"support": [...], "coeffs": [...]}``."""
    if not isinstance(data, dict) or "coeffs" not in data:
        raise InputError(f"{source}: expected an object with a 'coeffs' field")
    coeffs = [_rational(c, f"{source}: coeffs[{i}]") for i, c in enumerate(_list(data["coeffs"], f"{source}: coeffs"))]
    if "support" in data:
        support = [_int(s, f"{source}: support[{i}]") for i, s in enumerate(_list(data["support"], f"{source}: support"))]
        if len(support) != len(coeffs):
            raise InputError(f"{source}: support and coeffs have different lengths")
        full = [Fraction(0)] * n_rays
        for s, c in zip(support, coeffs):
            if not 0 <= s < n_rays:
                raise InputError(f"{source}: support index {s} out of range")
            full[s] = c
        coeffs = full
    if len(coeffs) != n_rays:
        raise InputError(f"{source}: {len(coeffs)} coefficients for a fan with {n_rays} rays")
    return CurveClass(coeffs)


def write_atomic(path: str, text: str):
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit_fan(fan: Fan, out: str | None):
    text = json.dumps(fan.to_dict()) + "\n"
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _print(args, payload: dict, lines: list[str]):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))


# commands -------------------------------------------------------------------


def cmd_check(args) -> int:
    fan = load_fan(args.fan)
    rep = validate(fan)
    payload = {"command": "check", "file": args.fan, "report": rep.to_dict()}
    lines = [f"{args.fan}: {'valid' if rep.ok else 'INVALID'}"]
    for flag in ("simplicial", "complete", "faces_ok", "projective", "smooth"):
        lines.append(f"  {flag:<11} {getattr(rep, flag)}")
    if rep.witness:
        lines.append(f"  witness: {rep.witness}")
    if rep.witness_vector is not None:
        lines.append(f"  uncovered point: {list(rep.witness_vector)}")
    _print(args, payload, lines)
    return EXIT_OK if rep.ok else EXIT_INVALID


def _valid_fan(args, path) -> tuple[Fan, int]:
    fan = load_fan(path)
    rep = validate(fan)
    if not rep.ok:
        print(f"{path}: invalid fan: {rep.witness}", file=sys.stderr)
        return fan, EXIT_INVALID
    return fan, EXIT_OK


def cmd_classes(args) -> int:
    fan, code = _valid_fan(args, args.fan)
    if code:
        return code
    cone = mori_cone(fan)
    gens = []
    for g in cone.wall_classes:
        cert = is_geometric_extremal(fan, g)
        gens.append({"class": g.to_json()["coeffs"], "extremal": cert is not None,
                     "certificate": None if cert is None else cert.to_json()})
    payload = {
        "command": "classes",
        "rho": fan.rho,
        "basis": [b.to_json()["coeffs"] for b in class_space(fan)],
        "mori_generators": gens,
    }
    lines = [f"rho = {fan.rho}", "wall classes (Mori cone generators):"]
    for g in gens:
        lines.append(f"  [{', '.join(g['class'])}]{'  extremal' if g['extremal'] else ''}")
    _print(args, payload, lines)
    return EXIT_OK


def _report_lines(rep: fam.FamilyReport) -> list[str]:
    d = rep.to_json()
    pos = "yes" if rep.status not in (fam.NOT_POSITIVE, fam.NOT_A_RELATION) else "no"
    lines = [f"status: {rep.status}", f"positive relation: {pos}"]
    if d["condition_b"] is not None:
        lines.append(f"condition (b): {'holds' if d['condition_b'] else 'fails'}")
        if rep.violation is not None:
            lines.append(f"  witness: {rep.message}")
    elif rep.message:
        lines.append(f"  {rep.message}")
    if rep.certificate is not None:
        lines.append(f"extremal: yes, nef divisor [{', '.join(d['certificates']['nef_divisor']['coeffs'])}]")
    elif rep.in_cone is not None:
        lines.append(f"extremal: no (in cone: {rep.in_cone}, interior: {rep.interior})")
    if rep.contraction is not None:
        q = d["quotient"]
        lines.append(f"quotient: rho {q['rho_source']} -> {q['rho_target']}, f_V = {q['fiber_dim']}, "
                     f"target rank {q['rank']} with {q['n_rays']} rays")
    for note in rep.notes:
        lines.append(f"note: {note}")
    return lines


def cmd_family(args) -> int:
    fan, code = _valid_fan(args, args.fan)
    if code:
        return code
    gamma = parse_class(_load_json(args.cls), fan.n_rays, args.cls)
    rep = fam.full_report(fan, gamma)
    payload = {"command": "family", **rep.to_json()}
    lines = _report_lines(rep)
    if args.trace and rep.family is not None and rep.status in (fam.OK, fam.CONDITION_B_FAILED):
        trace = fam.verify_inductively(fan, rep.family)
        payload["trace"] = trace.to_json()
        lines.append(f"induction trace: {sum(1 for _ in trace.walk())} nodes, coherent")
    if args.emit_quotient and rep.contraction is not None:
        _emit_fan(rep.contraction.quotient_fan, args.emit_quotient)
        lines.append(f"quotient fan written to {args.emit_quotient}")
    _print(args, payload, lines)
    return EXIT_CODES[rep.status]


def cmd_quotient(args) -> int:
    fan, code = _valid_fan(args, args.fan)
    if code:
        return code
    gamma = parse_class(_load_json(args.cls), fan.n_rays, args.cls)
    rep = fam.full_report(fan, gamma)
    if rep.contraction is None:
        print(f"no quotient: {rep.status}: {rep.message}", file=sys.stderr)
        return EXIT_CODES[rep.status]
    _emit_fan(rep.contraction.quotient_fan, args.output)
    if args.output:
        c = rep.contraction
        _print(args, {"command": "quotient", **c.to_json()},
               [f"quotient of rank {c.quotient_fan.rank} written to {args.output}"])
    return EXIT_OK


def _indices(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"expected comma separated ray indices, got {text!r}")


def cmd_construct(args) -> int:
    stage = args.op
    try:
        if args.op == "pn":
            fan = projective_space(args.n)
        elif args.op == "product":
            fan = product(load_fan(args.first), load_fan(args.second))
        elif args.op == "blowup":
            fan = star_subdivision(load_fan(args.fan), _indices(args.cone))
        else:
            fan = flip(load_fan(args.fan), _indices(args.negative))
        rep = validate(fan)
        if not rep.ok:
            print(f"{stage}: result is not a valid fan: {rep.witness}", file=sys.stderr)
            return EXIT_INVALID
    except InputError:
        raise
    except TorquoError as exc:
        print(f"{stage}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"{stage}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _emit_fan(fan, args.output)
    return EXIT_OK


def cmd_gallery(args) -> int:
    table = gallery()
    if args.action == "list":
        _print(args, {"command": "gallery", "names": sorted(table)}, sorted(table))
        return EXIT_OK
    if args.name not in table:
        raise InputError(f"unknown gallery entry {args.name!r}; try 'gallery list'")
    _emit_fan(table[args.name](), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="torquo", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="machine readable output")
    p.add_argument("--seed", type=int, default=None, help="seed for randomized suites")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", help="validate a fan")
    s.add_argument("fan")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("classes", help="Picard number and Mori cone generators")
    s.add_argument("fan")
    s.set_defaults(func=cmd_classes)

    s = sub.add_parser("family", help="analyse a family class")
    s.add_argument("fan")
    s.add_argument("cls", metavar="class")
    s.add_argument("--emit-quotient", metavar="OUT")
    s.add_argument("--trace", action="store_true")
    s.set_defaults(func=cmd_family)

    s = sub.add_parser("quotient", help="write the quotient fan of a family")
    s.add_argument("fan")
    s.add_argument("cls", metavar="class")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_quotient)

    s = sub.add_parser("construct", help="build fans by surgery")
    ops = s.add_subparsers(dest="op", required=True)
    o = ops.add_parser("pn")
    o.add_argument("n", type=int)
    o = ops.add_parser("product")
    o.add_argument("first")
    o.add_argument("second")
    o = ops.add_parser("blowup")
    o.add_argument("fan")
    o.add_argument("--cone", required=True)
    o = ops.add_parser("flip")
    o.add_argument("fan")
    o.add_argument("--negative", required=True)
    for o in ops.choices.values():
        o.add_argument("-o", "--output")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("gallery", help="named example fans")
    acts = s.add_subparsers(dest="action", required=True)
    acts.add_parser("list")
    e = acts.add_parser("emit")
    e.add_argument("name")
    e.add_argument("-o", "--output")
    s.set_defaults(func=cmd_gallery)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InternalConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
