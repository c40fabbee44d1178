"""Command-line front end.

Exit codes: 0 success, 1 bad input, 2 internal computation failure.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from . import __version__
from .cech import bott_dim, hypercohomology, truncation_bound
from .complexes import (
    BraneComplex,
    hom_complex,
    line_bundle,
    omega_replacement,
    random_brane,
    random_trivial_brane,
    validate,
)
from .derived import gauge_hom_audit
from .gauge import CocycleError, classify_brane, gauge_exists
from .io import DocumentError, brane_to_document, digest, load
from .poly import TruncationError


class InputError(Exception):
    pass


def _check_truncation(args, complex_for_bound: BraneComplex) -> Optional[int]:
    if args.truncation is None:
        return None
    bound = truncation_bound(complex_for_bound)
    if args.truncation < bound:
        raise InputError(f"--truncation {args.truncation} is below the required bound {bound}")
    return args.truncation


def _params_digest(**params) -> str:
    return hashlib.sha256(json.dumps(params, sort_keys=True).encode()).hexdigest()


def _emit(args, report: Dict[str, Any], lines: List[str]) -> None:
    if args.json:
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write("\n".join(lines) + "\n")


def _dims_lines(dims: Dict[int, int]) -> List[str]:
    nz = {k: v for k, v in dims.items() if v}
    if not nz:
        return ["all hypercohomology vanishes"]
    return [f"H^{k}: {v}" for k, v in sorted(nz.items())]


# -- subcommands -------------------------------------------------------------


def cmd_validate(args) -> int:
    c = load(args.brane)
    rep = validate(c)
    report = {"command": "validate", "input_digest": digest(c), "valid": rep.valid,
              "in_range": rep.in_range, "all_twists_zero": rep.all_twists_zero,
              "truncation_used": None, "seed": None}
    _emit(args, report, [rep.summary()])
    return 0


def cmd_cohom(args) -> int:
    c = load(args.brane)
    M = _check_truncation(args, c)
    rep = hypercohomology(c, M)
    dims = {str(k): v for k, v in sorted(rep.dims.items())}
    report = {"command": "cohom", "input_digest": digest(c), "dims": dims,
              "truncation_used": rep.truncation, "seed": None}
    _emit(args, report, _dims_lines(rep.dims) + [f"truncation: {rep.truncation}"])
    return 0


def cmd_ext(args) -> int:
    a, b = load(args.source), load(args.target)
    if a.n != b.n:
        raise InputError(f"documents live on P^{a.n} and P^{b.n}")
    hc = hom_complex(a, b)
    M = _check_truncation(args, hc)
    rep = hypercohomology(hc, M)
    if args.i is not None:
        dim = rep[args.i]
        report = {"command": "ext", "input_digest": digest(a, b), "dims": {str(args.i): dim},
                  "truncation_used": rep.truncation, "seed": None}
        _emit(args, report, [f"dim: {dim}"])
    else:
        dims = {str(k): v for k, v in sorted(rep.dims.items())}
        report = {"command": "ext", "input_digest": digest(a, b), "dims": dims,
                  "truncation_used": rep.truncation, "seed": None}
        _emit(args, report, [ln.replace("H^", "Ext^") for ln in _dims_lines(rep.dims)])
    return 0


def cmd_omega(args) -> int:
    if not 1 <= args.p <= args.n:
        raise InputError(f"--p must satisfy 1 <= p <= n = {args.n}")
    c = omega_replacement(line_bundle(args.n, args.k), args.p)
    M = _check_truncation(args, c)
    rep = hypercohomology(c, M)
    dims = {str(q): rep[q] for q in range(args.n + 1)}
    bott = {str(q): bott_dim(args.n, args.p, args.k, q) for q in range(args.n + 1)}
    report = {"command": "omega", "input_digest": _params_digest(n=args.n, p=args.p, k=args.k),
              "dims": dims, "bott": bott, "truncation_used": rep.truncation, "seed": None}
    lines = [f"H^{q}(P^{args.n}, Omega^{args.p}({args.k})): {rep[q]}   (Bott: {bott[str(q)]})"
             for q in range(args.n + 1)]
    _emit(args, report, lines)
    return 0


def cmd_gauge(args) -> int:
    g = load(args.brane)
    model = hom_complex(g, omega_replacement(g, 1))
    M = _check_truncation(args, model)
    dec = gauge_exists(g, M)
    report = {"command": "gauge", "input_digest": digest(g), "decision": dec.as_dict(),
              "audit": dec.audit.as_dict(), "truncation_used": M if M is not None else truncation_bound(model),
              "seed": None}
    lines = [f"exists: {str(dec.exists).lower()}", f"space_dim: {dec.space_dim}"]
    if dec.count is not None:
        lines.append(f"gauge fields: {dec.count}")
    else:
        lines.append("gauge fields: affine space of dimension " + str(dec.space_dim))
    if args.witness:
        if dec.witness is None:
            lines.append("no witness written (no gauge field)")
        else:
            Path(args.witness).write_text(json.dumps(dec.witness.as_dict(), indent=2) + "\n", encoding="utf-8")
            lines.append(f"witness written to {args.witness}")
            report["witness_path"] = str(args.witness)
    _emit(args, report, lines)
    return 0


def cmd_classify(args) -> int:
    g = load(args.brane)
    cls = classify_brane(g)
    report = {"command": "classify", "input_digest": digest(g), "decision": cls.as_dict(),
              "truncation_used": truncation_bound(hom_complex(g, omega_replacement(g, 1))), "seed": None}
    pred = "not covered" if cls.predicted is None else str(cls.predicted).lower()
    agree = "n/a" if cls.agree is None else str(cls.agree).lower()
    _emit(args, report, [f"predicted: {pred}", f"engine: {str(cls.engine).lower()}", f"agree: {agree}",
                         f"reason: {cls.reason}"])
    return 0


def cmd_audit(args) -> int:
    g = load(args.brane)
    rep = gauge_hom_audit(g)
    report = {"command": "audit", "input_digest": digest(g), "audit": rep.as_dict(),
              "truncation_used": truncation_bound(hom_complex(g, omega_replacement(g, 1))), "seed": None}
    lines = [f"Hom_D(G, Omega1 G): {rep.hom0}", f"Ext^1(G, Omega1 G): {rep.ext.get(1, 0)}",
             f"naive_hom0: {rep.naive_hom0}", f"discrepancy: {str(rep.discrepancy).lower()}"]
    for d, h in rep.twist_contributions:
        lines.append(f"h0(Omega1({d})) = {h}")
    _emit(args, report, lines)
    return 0


def cmd_generate(args) -> int:
    if args.trivial:
        c = random_trivial_brane(args.n, args.seed)
    else:
        c = random_brane(args.n, args.depth, args.seed)
    doc = brane_to_document(c, label=args.label)
    if args.json:
        report = {"command": "generate", "input_digest": _params_digest(n=args.n, depth=args.depth, seed=args.seed,
                                                                        trivial=args.trivial),
                  "brane": doc, "truncation_used": None, "seed": args.seed}
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    return 0


def cmd_bott(args) -> int:
    if not (0 <= args.p <= args.n and 0 <= args.q <= args.n):
        raise InputError("need 0 <= p, q <= n")
    v = bott_dim(args.n, args.p, args.k, args.q)
    report = {"command": "bott", "input_digest": _params_digest(n=args.n, p=args.p, k=args.k, q=args.q),
              "dims": {str(args.q): v}, "truncation_used": None, "seed": None}
    _emit(args, report, [f"dim: {v}"])
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaugebrane", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--truncation", type=int, metavar="M", help="Cech truncation bound (>= computed bound)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a brane document")
    p.add_argument("brane")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("cohom", parents=[common], help="hypercohomology of a brane")
    p.add_argument("brane")
    p.set_defaults(func=cmd_cohom)

    p = sub.add_parser("ext", parents=[common], help="Ext groups between two branes")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--i", type=int, help="report a single degree")
    p.set_defaults(func=cmd_ext)

    p = sub.add_parser("omega", parents=[common], help="cohomology of Omega^p(k) via its Euler resolution")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=int, default=0)
    p.set_defaults(func=cmd_omega)

    p = sub.add_parser("gauge", parents=[common], help="decide existence of a holomorphic gauge field")
    p.add_argument("brane")
    p.add_argument("--witness", metavar="PATH", help="write the verified witness as JSON")
    p.set_defaults(func=cmd_gauge)

    p = sub.add_parser("classify", parents=[common], help="compare the shape prediction with the engine")
    p.add_argument("brane")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("audit", parents=[common], help="measure Hom(G, Omega^1 G) both ways")
    p.add_argument("brane")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("generate", parents=[common], help="random brane from the cone closure of O(-n)..O")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trivial", action="store_true", help="copies of O with constant differentials instead")
    p.add_argument("--label")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bott", parents=[common], help="Bott formula dim H^q(P^n, Omega^p(k))")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_bott)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        return args.func(args)
    except (DocumentError, InputError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except (CocycleError, TruncationError, ArithmeticError) as exc:
        sys.stderr.write(f"internal error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())
