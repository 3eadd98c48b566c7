"""Command-line front end.  Every subcommand prints one canonical JSON report.

Exit status: 0 on success, 1 when a check comes out false, 2 for malformed
input, 3 when a search budget runs out.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
import time
from pathlib import Path

from . import serialize as ser
from .errors import BudgetExceeded, InsufficientData, NotFound
from .fields import QQ, Field, PrimeField, Rationals, parse_field
from .functors import Element, apply_map, derivative_spec, lessdot, parse_spec, shift_component_dim, shift_decompose
from .limits import TruncatedElement, coherence_check, e_apply
from .linalg import Matrix
from .maximal import maximal_r, maximal_specializer, required_level, truncated_r
from .minimal import (minimal_q, minimal_specializer_search, orbit_image_full_check,
                      prefixed_specializer_search, specializer_to_target)
from .omega import omega_check
from .partitions import lr_coefficient, parse_partition
from .quasiorder2 import canonical_q, classify_deg2, deg2_specializer, q_level, profile
from .strength import oracle_strength, strength_deg2, strength_leq_oracle, strength_unipotent, unipotent_matrix

WORKERS_ENV = "POLYFUNCTORS_WORKERS"


class CheckFailed(Exception):
    """The operation ran but its verification came out false."""


def _read_json(arg: str):
    """Inline JSON (starting with [ or {) or a path to a JSON file."""
    text = arg if arg.lstrip()[:1] in ("[", "{") else _read_file(arg)
    return ser.loads(text)


def _read_file(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ser.FormatError(f"cannot read {path}: {exc}") from exc


def _matrix(arg: str, field: Field) -> Matrix:
    doc = _read_json(arg)
    if isinstance(doc, list):
        if not doc or not all(isinstance(r, list) and len(r) == len(doc[0]) for r in doc):
            raise ser.FormatError("a matrix is a nonempty list of equal-length rows")
        return Matrix.from_rows(field, [[ser.scalar_in(field, x) for x in r] for r in doc], len(doc[0]))
    m = ser.matrix_from_json(doc)
    if m.field != field:
        raise ser.FormatError(f"matrix is over {m.field.tag}, not {field.tag}")
    return m


def _truncation(arg: str) -> TruncatedElement:
    doc = _read_json(arg)
    if isinstance(doc, dict) and doc.get("type") == "element":
        return TruncatedElement.from_element(ser.element_from_json(doc))
    return ser.truncation_from_json(doc)


def _element(arg: str) -> Element:
    doc = _read_json(arg)
    if isinstance(doc, dict) and doc.get("type") == "truncation":
        return ser.truncation_from_json(doc).layers[-1]
    return ser.element_from_json(doc)


def _write(path: str, obj) -> str:
    Path(path).write_text(ser.dumps(ser.to_json(obj)))
    return path


def _witness_result(args, w) -> dict:
    ok = w.verify()
    out = {"verified": ok, "verified_levels": list(w.verified_levels)}
    if args.witness_out:
        out["witness_path"] = _write(args.witness_out, w)
    else:
        out["witness"] = ser.to_json(w)
    if not ok:
        raise CheckFailed(out)
    return out


# ---------------------------------------------------------------------------
# subcommands


def cmd_strength(args) -> dict:
    field = args.field
    if args.unipotent is not None:
        x = ser.scalar_in(QQ, args.unipotent)
        r = strength_unipotent(x)
        cert_ok = r.certificate.verify(unipotent_matrix(x))
        return {"value": r.value, "certificate": ser.to_json(r.certificate), "verified": cert_ok,
                "mu": ser.scalar_out(QQ, r.mu) if r.mu is not None else None}
    if args.element:
        e = _element(args.element)
        if args.k is not None:
            return {"strength_leq": strength_leq_oracle(e, args.k, args.variant, args.budget), "k": args.k,
                    "variant": args.variant}
        return {"value": oracle_strength(e, args.budget)}
    if not args.matrix:
        raise ser.FormatError("strength needs --matrix, --element or --unipotent")
    a = _matrix(args.matrix, field)
    r = strength_deg2(a, args.mode)
    out = {"lower": r.lower, "upper": r.upper, "value": r.value}
    if r.certificate is not None:
        out["certificate"] = ser.to_json(r.certificate)
        out["verified"] = r.certificate.verify(a)
    return out


def cmd_lr(args) -> dict:
    lam, mu, nu = (parse_partition(x) for x in (args.lam, args.mu, args.nu))
    return {"lambda": list(lam), "mu": list(mu), "nu": list(nu), "coefficient": lr_coefficient(lam, mu, nu)}


def cmd_derive(args) -> dict:
    spec = parse_spec(args.spec)
    d = derivative_spec(spec)
    out = {"derivative": str(d)}
    if args.n is not None:
        out["dim"] = d.dim(args.n)
    return out


def cmd_shift(args) -> dict:
    if args.element:
        e = _element(args.element)
        parts = shift_decompose(e, args.m)
        return {"components": [ser.to_json(p) for p in parts]}
    spec = parse_spec(args.spec)
    return {"dims": [shift_component_dim(spec, args.n, args.k, j) for j in range(spec.degree + 1)]}


def cmd_lessdot(args) -> dict:
    return {"lessdot": lessdot(parse_spec(args.q), parse_spec(args.p))}


def cmd_minimal_q(args) -> dict:
    q = minimal_q(parse_spec(args.spec), args.blocks, args.pure_powers, args.field)
    out = {"levels": list(q.levels), "q": ser.to_json(q)}
    if args.verify:
        out["coherent"] = coherence_check(q)
        if not out["coherent"]:
            raise CheckFailed(out)
    return out


def cmd_maximal_r(args) -> dict:
    if args.level is not None:
        r = TruncatedElement.from_element(truncated_r(args.d, args.level, args.field))
    else:
        r = maximal_r(args.d, args.depth, args.field)
    return {"levels": list(r.levels), "coherent": coherence_check(r), "r": ser.to_json(r)}


def cmd_specialize(args) -> dict:
    if args.method == "to-target":
        g = _element(args.target)
        q = minimal_q(g.spec, args.blocks, field=g.field)
        phi = specializer_to_target(q, g)
        ok = apply_map(phi, q.layers[-1]) == g
        out = {"phi": ser.to_json(phi), "verified": ok}
        if not ok:
            raise CheckFailed(out)
        return out
    source = _truncation(args.source)
    if args.method == "search":
        w = minimal_specializer_search(source, args.blocks, args.budget, args.workers)
    elif args.method == "prefix":
        w = prefixed_specializer_search(source, args.prefix, args.blocks, args.budget, args.workers)
    else:
        d = source.spec.degree
        level = args.level if args.level is not None else required_level(d, source.top)
        r = TruncatedElement.from_element(truncated_r(d, level, source.field))
        w = maximal_specializer(source, r)
    return _witness_result(args, w)


def _deg2_input(args, field: Field) -> tuple[Element, str]:
    if args.stream:
        kind = args.kind or "quadric"
        return ser.stream_from_json(_read_json(args.stream), kind, field), kind
    if args.element:
        e = _element(args.element)
        default = {"S2": "quadric", "E2": "alternating"}.get(str(e.spec), "mixed")
        return e, args.kind or default
    raise ser.FormatError("need --stream or --element")


def cmd_specialize2(args) -> dict:
    p, kind = _deg2_input(args, args.field)
    level = args.level if args.level is not None else p.n
    e = deg2_specializer(p, kind, level)
    prof = profile(p.spec) if kind == "mixed" else None
    q = canonical_q(kind, level, p.field, prof)
    ok = e_apply(e, q, level) == p.restrict(level)
    out = {"kind": kind, "level": level, "q_level": q_level(kind, level, prof or (0, 0, 0)),
           "e": ser.to_json(e), "verified": ok, "max_bandwidth": e.max_bandwidth()}
    if not ok:
        raise CheckFailed(out)
    return out


def cmd_e_apply(args) -> dict:
    e = ser.e_from_json(_read_json(args.e))
    p = _truncation(args.p)
    return {"result": ser.to_json(e_apply(e, p, args.level, args.width))}


def cmd_orbit_check(args) -> dict:
    q = minimal_q(parse_spec(args.spec), args.blocks, field=args.field)
    res = orbit_image_full_check(q, args.m, args.mode, args.budget, args.seed, args.samples, args.workers)
    out = {"q_level": q.top, "m": args.m, "mode": args.mode, "full": res}
    if res is False:
        raise CheckFailed(out)
    return out


def cmd_omega_check(args) -> dict:
    reports = omega_check(parse_spec(args.spec), args.n, args.field)
    out = {"summands": [{"summand": r.summand, "rank": r.rank, "dim": r.dim, "surjective": r.surjective} for r in reports],
           "surjective": all(r.surjective for r in reports)}
    if not out["surjective"]:
        raise CheckFailed(out)
    return out


def cmd_classify2(args) -> dict:
    p, _ = _deg2_input(args, args.field)
    c = classify_deg2(p)
    pair = c.pair if c.pair is None or isinstance(c.pair, str) else [p.field.format(x) for x in c.pair]
    return {"class": str(c), "profile": list(c.profile), "level": c.level, "linear_rank": c.linear_rank,
            "sym_ranks": list(c.sym_ranks), "alt_ranks": list(c.alt_ranks), "pair": pair}


def cmd_verify_witness(args) -> dict:
    w = ser.witness_from_json(_read_json(args.witness))
    ok = w.verify()
    out = {"verified": ok, "verified_levels": list(w.verified_levels)}
    if not ok:
        raise CheckFailed(out)
    return out


COMMANDS = {
    "strength": (cmd_strength, "strength of a matrix, a unipotent 2x2 block or an F_p element"),
    "lr": (cmd_lr, "Littlewood-Richardson coefficient c^lambda_{mu nu}"),
    "derive": (cmd_derive, "derivative of a functor spec"),
    "shift": (cmd_shift, "dimensions or components of the shift decomposition"),
    "lessdot": (cmd_lessdot, "the order on functor specs"),
    "minimal-q": (cmd_minimal_q, "truncation of the minimal element q"),
    "maximal-r": (cmd_maximal_r, "truncation of the maximal tensor r_d"),
    "specialize": (cmd_specialize, "find a specialisation witness"),
    "specialize2": (cmd_specialize2, "banded specialiser for degree-2 data"),
    "e-apply": (cmd_e_apply, "apply an E element to a truncation"),
    "orbit-check": (cmd_orbit_check, "is the orbit image of q all of P(K^m)?"),
    "omega-check": (cmd_omega_check, "rank of the Omega map"),
    "classify2": (cmd_classify2, "rank classification in degree at most 2"),
    "verify-witness": (cmd_verify_witness, "re-verify a stored witness"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="q", help="q or fp:<prime>")
    common.add_argument("--workers", type=int, default=None, help=f"worker threads (default ${WORKERS_ENV} or 1)")
    common.add_argument("--budget", type=int, default=5_000_000)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output", help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="polyfunctors", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name):
        return sub.add_parser(name, parents=[common], help=COMMANDS[name][1])

    p = add("strength")
    p.add_argument("--mode", choices=["sym", "alt", "full"], default="sym")
    p.add_argument("--matrix", help="matrix JSON (file or inline)")
    p.add_argument("--unipotent", help="x in [[1, x], [0, 1]]")
    p.add_argument("--element", help="element JSON for the F_p brute force")
    p.add_argument("--k", type=int, help="decide strength <= k instead of computing it")
    p.add_argument("--variant", choices=["single", "tuple"], default="single")

    p = add("lr")
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("--nu", required=True)

    p = add("derive")
    p.add_argument("--spec", required=True)
    p.add_argument("--n", type=int)

    p = add("shift")
    p.add_argument("--spec")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--element")
    p.add_argument("--m", type=int, default=1, help="split point for --element")

    p = add("lessdot")
    p.add_argument("--q", required=True)
    p.add_argument("--p", required=True)

    p = add("minimal-q")
    p.add_argument("--spec", required=True)
    p.add_argument("--blocks", type=int, required=True)
    p.add_argument("--pure-powers", action="store_true", help="use x^d instead of a squarefree monomial")
    p.add_argument("--verify", action="store_true")

    p = add("maximal-r")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--level", type=int, help="truncate at this level instead of a depth")

    p = add("specialize")
    p.add_argument("--method", choices=["search", "prefix", "to-target", "maximal"], default="search")
    p.add_argument("--source", help="truncation or element JSON")
    p.add_argument("--target", help="target element JSON for to-target")
    p.add_argument("--blocks", type=int, default=1)
    p.add_argument("--prefix", type=int, default=1, help="number of linear forms for the prefix method")
    p.add_argument("--level", type=int, help="level of r_d for the maximal method")
    p.add_argument("--witness-out")

    p = add("specialize2")
    p.add_argument("--stream", help='coefficient stream {"a": {"1,2": "3/4"}}')
    p.add_argument("--element", help="element JSON (mixed kind)")
    p.add_argument("--kind", choices=["quadric", "alternating", "mixed"])
    p.add_argument("--level", type=int)

    p = add("e-apply")
    p.add_argument("--e", required=True)
    p.add_argument("--p", required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--width", type=int)

    p = add("orbit-check")
    p.add_argument("--spec", required=True)
    p.add_argument("--blocks", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--mode", choices=["exhaustive", "span"], default="exhaustive")
    p.add_argument("--samples", type=int, default=200)

    p = add("omega-check")
    p.add_argument("--spec", required=True)
    p.add_argument("--n", type=int, required=True)

    p = add("classify2")
    p.add_argument("--stream")
    p.add_argument("--element")
    p.add_argument("--kind", choices=["quadric", "alternating", "mixed"])

    p = add("verify-witness")
    p.add_argument("--witness", required=True)
    return parser


def _inputs(args) -> dict:
    skip = {"command", "output", "func"}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip or v is None or v is False:
            continue
        out[k] = v.tag if isinstance(v, (Rationals, PrimeField)) else v
    return out


def run(argv=None) -> tuple[int, dict, str | None]:
    """Parse argv, run the subcommand and return (exit status, report, output path)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    report = {"operation": args.command}
    start = time.perf_counter()
    status = 0
    try:
        args.field = parse_field(args.field)
        if args.workers is None:
            args.workers = int(os.environ.get(WORKERS_ENV, "1"))
        random.seed(args.seed)
        report["inputs"] = _inputs(args)
        report["result"] = COMMANDS[args.command][0](args)
    except CheckFailed as exc:
        report["result"] = exc.args[0]
        status = 1
    except (BudgetExceeded, NotFound) as exc:
        report["error"] = {"kind": type(exc).__name__, "message": str(exc)}
        status = 3
    except (ser.FormatError, InsufficientData, ValueError) as exc:
        report["error"] = {"kind": type(exc).__name__, "message": str(exc)}
        status = 2
    report["wall_time_ms"] = int((time.perf_counter() - start) * 1000)
    report.setdefault("inputs", {})
    return status, report, args.output


def main(argv=None) -> int:
    status, report, output = run(argv)
    text = ser.dumps(report)
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)
    if "error" in report:
        print(f"{report['error']['kind']}: {report['error']['message']}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
