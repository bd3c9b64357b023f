"""Command-line interface: ``osserman validate | report | scan | theorems``.

Exit codes: 0 success, 1 property violation, 2 input error,
3 internal inconsistency between verdicts.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .catalog import constant_curvature, random_act, random_null_act
from .checks import (
    CheckParams, duality_principle, full_report, is_osserman, reference_coefficients, verify_duality_witness,
    verify_osserman_witness,
)
from .curvature import SymmetryError
from .io import (
    MAX_DIM, TensorFileError, dumps_report, fmt_scalar, fmt_vector, load_tensor, report_to_dict,
)
from .polymatrix import classify_generic, invariant_factors
from .space import PseudoEuclideanSpace, UsageError, derived_rng, sample_vector
from .spectral import char_poly

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_INCONSISTENT = 0, 1, 2, 3
SEED_ENV = "OSSERMAN_SEED"
TARGETS = ("osserman-violation", "duality-violation", "nongeneric-vector", "nilpotent-jacobi")


def _default_seed() -> int:
    try:
        return int(os.environ.get(SEED_ENV, "0"))
    except ValueError:
        return 0


def _signature(s: str) -> tuple[int, int]:
    try:
        p, q = (int(x) for x in s.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected p,q, got {s!r}") from None
    if p < 0 or q < 0 or p + q == 0:
        raise argparse.ArgumentTypeError(f"bad signature {s!r}")
    return p, q


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    ap = argparse.ArgumentParser(prog="osserman", formatter_class=fmt,
                                 description="Verify Osserman-type properties of algebraic curvature tensors.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", formatter_class=fmt, help="check the curvature symmetries of a tensor file")
    v.add_argument("tensor", help="tensor JSON file")

    seed_help = f"random seed; ${SEED_ENV} sets the default"
    r = sub.add_parser("report", formatter_class=fmt, help="write a full property report")
    r.add_argument("tensor", help="tensor JSON file")
    r.add_argument("--samples", type=int, default=64, help="samples per cone")
    r.add_argument("--seed", type=int, default=_default_seed(), help=seed_help)
    r.add_argument("--tol", type=float, default=1e-9, help="relative tolerance")
    r.add_argument("--domain", choices=("exact", "float"), default="exact", help="scalar domain")
    r.add_argument("--out", help="report file (stdout if omitted)")

    s = sub.add_parser("scan", formatter_class=fmt, help="search random tensors for witnesses")
    s.add_argument("--signature", type=_signature, default="2,1", help="p,q")
    s.add_argument("--dim", type=int, default=None, help="dimension n (must equal p+q)")
    s.add_argument("--instances", type=int, default=20, help="number of random tensors")
    s.add_argument("--seed", type=int, default=_default_seed(), help=seed_help)
    s.add_argument("--target", choices=TARGETS, default="duality-violation", help="kind of witness to look for")
    s.add_argument("--family", choices=("auto", "random", "null", "constant_curvature"), default="auto",
                   help="tensor family; auto uses null-form generators for nilpotent-jacobi, random otherwise")
    s.add_argument("--samples", type=int, default=64, help="samples per tensor")
    s.add_argument("--max-dim", type=int, default=MAX_DIM, help="largest accepted dimension")
    s.add_argument("--out", help="witness archive (JSON)")

    t = sub.add_parser("theorems", formatter_class=fmt, help="run the acceptance suite")
    t.add_argument("--level", choices=("quick", "full"), default="quick", help="suite size")
    t.add_argument("--seed", type=int, default=_default_seed(), help=seed_help)
    return ap


def cmd_validate(args, out) -> int:
    T = load_tensor(args.tensor, validate=False)
    rep = T.validate_symmetries()
    if rep.ok:
        print(f"ok: {T.space.signature} tensor satisfies all curvature symmetries", file=out)
        return EXIT_OK
    for viol in rep.violations:
        print(viol, file=out)
    print(f"{len(rep.violations)} violation(s)", file=out)
    return EXIT_VIOLATION


def cmd_report(args, out) -> int:
    T = load_tensor(args.tensor)
    params = CheckParams(samples=args.samples, seed=args.seed, tol=args.tol, domain=args.domain)
    rep = full_report(T, params)
    text = dumps_report(report_to_dict(T, rep))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        summary = ", ".join(f"{k}: {v}" for k, v in rep.verdicts().items())
        print(summary, file=out)
    else:
        out.write(text)
    for msg in rep.inconsistencies:
        print(f"INCONSISTENCY: {msg}", file=sys.stderr)
    return EXIT_OK if rep.consistent else EXIT_INCONSISTENT


def _scan_tensor(family, space, seed):
    if family == "constant_curvature":
        return constant_curvature(space, 1 + seed % 5), {"name": "constant_curvature", "parameters": {"k": str(1 + seed % 5)}}
    if family == "null":
        return random_null_act(space, seed), {"name": "random_null_act", "parameters": {"seed": seed}}
    return random_act(space, seed), {"name": "random_act", "parameters": {"seed": seed}}


def cmd_scan(args, out) -> int:
    p, q = args.signature
    n = args.dim if args.dim is not None else p + q
    if n != p + q:
        raise UsageError(f"--dim {n} does not match signature ({p},{q})")
    if n > args.max_dim:
        raise UsageError(f"dimension {n} exceeds the maximum {args.max_dim}")
    space = PseudoEuclideanSpace(p, q)
    family = args.family if args.family != "auto" else ("null" if args.target == "nilpotent-jacobi" else "random")
    witnesses = []
    for i in range(args.instances):
        iseed = int(derived_rng(args.seed, 97, i).integers(2**31))
        T, ctor = _scan_tensor(family, space, iseed)
        base = {"instance": i, "constructor": ctor, "signature": [p, q]}
        if args.target == "osserman-violation":
            o = is_osserman(T, args.samples, args.seed)
            if o.witness:
                ok = verify_osserman_witness(T, o.witness, reference_coefficients(T))
                witnesses.append({**base, "X": fmt_vector(o.witness.X), "j": o.witness.j,
                                  "defect": fmt_scalar(o.witness.defect), "reverified": ok})
        elif args.target == "duality-violation":
            d = duality_principle(T, args.samples, seed=args.seed, stop_on_violation=True)
            for X, pr in d.witnesses[:1]:
                witnesses.append({**base, "X": fmt_vector(X), "eigenvalue": fmt_scalar(pr.eigenvalue),
                                  "Y": fmt_vector(pr.Y), "residual": fmt_scalar(pr.residual), "exact": pr.exact,
                                  "reverified": verify_duality_witness(T, X, pr)})
        elif args.target == "nongeneric-vector":
            for k in range(args.samples):
                X = sample_vector(space, derived_rng(args.seed, 98, i, k), 3)
                g = classify_generic(T, X, count=4, seed=args.seed)
                if not g.generic:
                    witnesses.append({**base, "X": fmt_vector(X), "perturbed": fmt_vector(g.witness),
                                      "signature": repr(g.signature), "perturbed_signature": repr(g.witness_signature)})
                    break
        else:
            for k in range(min(args.samples, 8)):
                X = sample_vector(space, derived_rng(args.seed, 99, i, k), 10)
                A = T.jacobi(X)
                if A.is_zero() or any(c != 0 for c in char_poly(A).coefficients[:-1]):
                    continue
                m = invariant_factors(A).minimal_polynomial
                witnesses.append({**base, "X": fmt_vector(X), "minimal_polynomial": [str(c) for c in m.c],
                                  "nilpotency_index": m.deg})
                break
    print(f"scan target={args.target} signature=({p},{q}) family={family} instances={args.instances} "
          f"seed={args.seed} hits={len(witnesses)}", file=out)
    if args.out:
        archive = {"target": args.target, "signature": [p, q], "dim": n, "family": family,
                   "instances": args.instances, "seed": args.seed, "samples": args.samples,
                   "hits": len(witnesses), "witnesses": witnesses}
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(archive, fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def cmd_theorems(args, out) -> int:
    from .acceptance import run_suite

    results = run_suite(args.level, args.seed, report=lambda r: print(r.line(), file=out, flush=True))
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed"
          + (f"; failed: {failed}" if failed else ""), file=out)
    return EXIT_OK if not failed else EXIT_VIOLATION


COMMANDS = {"validate": cmd_validate, "report": cmd_report, "scan": cmd_scan, "theorems": cmd_theorems}


def main(argv=None, quiet: bool = False) -> int:
    args = build_parser().parse_args(argv)
    out = open(os.devnull, "w") if quiet else sys.stdout
    try:
        return COMMANDS[args.command](args, out)
    except SymmetryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (TensorFileError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    finally:
        if quiet:
            out.close()


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
