"""JSON tensor files and machine-readable property reports.

A tensor file looks like::

    {"n": 4, "field": "real", "signature": [2, 2],
     "convention": "R_ijkl = <R(e_i,e_j)e_k, e_l>",
     "components": [{"i": 1, "j": 2, "k": 2, "l": 1, "value": "1/3"}, ...]}

or carries ``"constructor": {"name": ..., "parameters": {...}}`` instead of
components.  Indices are 1-based.  Components that are not listed are filled
in from listed ones by antisymmetry and pair symmetry; a listed component is
never overwritten, so inconsistent input is caught by validation.
"""
from __future__ import annotations

import json
import re
from datetime import datetime, timezone

import numpy as np
from gmpy2 import mpq

from . import __version__
from .catalog import build
from .curvature import CONVENTION, CurvatureTensor, orbit
from .poly import ZERO, Poly
from .space import PseudoEuclideanSpace, UsageError

MAX_DIM = 8
FLOAT_DIGITS = 12
TIMESTAMP_KEY = "generated_at"

_RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*[+-]?\d+)?\s*$")


class TensorFileError(UsageError):
    """Malformed tensor file; the message names the offending location."""


def parse_rational(s, where: str) -> mpq:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise TensorFileError(f"{where}: expected an exact rational string, got {s!r}")
    if isinstance(s, str) and not _RATIONAL.match(s):
        raise TensorFileError(f"{where}: {s!r} is not a rational of the form p or p/q")
    try:
        return mpq(s.replace(" ", "") if isinstance(s, str) else s)
    except ZeroDivisionError:
        raise TensorFileError(f"{where}: zero denominator in {s!r}") from None


def _norm_convention(s: str) -> str:
    return re.sub(r"\s+", "", s)


def _parse_params(obj, where: str):
    """Strings that look rational become ``mpq``; everything else passes through."""
    if isinstance(obj, str) and _RATIONAL.match(obj):
        return parse_rational(obj, where)
    if isinstance(obj, list):
        return [_parse_params(x, f"{where}[{i}]") for i, x in enumerate(obj)]
    if isinstance(obj, dict):
        return {k: _parse_params(v, f"{where}.{k}") for k, v in obj.items()}
    return obj


def tensor_from_dict(d: dict, validate: bool = True) -> CurvatureTensor:
    if not isinstance(d, dict):
        raise TensorFileError("top level: expected a JSON object")
    for key in ("n", "signature"):
        if key not in d:
            raise TensorFileError(f"missing field {key!r}")
    n = d["n"]
    sig = d["signature"]
    if not (isinstance(sig, list) and len(sig) == 2 and all(isinstance(x, int) and x >= 0 for x in sig)):
        raise TensorFileError(f"signature: expected [p, q], got {sig!r}")
    if not isinstance(n, int) or n != sig[0] + sig[1]:
        raise TensorFileError(f"n: {n!r} does not match signature {sig}")
    if not 1 <= n <= MAX_DIM:
        raise TensorFileError(f"n: dimension {n} outside 1..{MAX_DIM}")
    conv = d.get("convention")
    if conv is not None and _norm_convention(conv) != _norm_convention(CONVENTION):
        raise TensorFileError(f"convention: {conv!r} differs from the supported {CONVENTION!r}")
    try:
        space = PseudoEuclideanSpace(sig[0], sig[1], d.get("field", "real"))
    except UsageError as exc:
        raise TensorFileError(f"field: {exc}") from None
    has_c, has_k = "components" in d, "constructor" in d
    if has_c == has_k:
        raise TensorFileError("exactly one of 'components' or 'constructor' is required")
    if has_k:
        ctor = d["constructor"]
        if not isinstance(ctor, dict) or "name" not in ctor:
            raise TensorFileError("constructor: expected {name, parameters}")
        params = _parse_params(ctor.get("parameters", {}), "constructor.parameters")
        try:
            return build(ctor["name"], space, **params)
        except UsageError as exc:
            raise TensorFileError(f"constructor: {exc}") from None
    comps = d["components"]
    if not isinstance(comps, list):
        raise TensorFileError("components: expected a list")
    R = np.full((n,) * 4, ZERO, dtype=object)
    given = {}
    for pos, c in enumerate(comps):
        where = f"components[{pos}]"
        if not isinstance(c, dict):
            raise TensorFileError(f"{where}: expected an object")
        idx = []
        for key in "ijkl":
            v = c.get(key)
            if not isinstance(v, int) or isinstance(v, bool) or not 1 <= v <= n:
                raise TensorFileError(f"{where}.{key}: index {v!r} outside 1..{n}")
            idx.append(v - 1)
        idx = tuple(idx)
        val = parse_rational(c.get("value"), f"{where}.value")
        if idx in given and given[idx] != val:
            raise TensorFileError(f"{where}: component {tuple(i + 1 for i in idx)} given twice with different values")
        given[idx] = val
    for idx, val in given.items():
        R[idx] = val
    for idx, val in given.items():
        for img, s in orbit(*idx):
            if img not in given and R[img] == 0:
                R[img] = s * val
    T = CurvatureTensor(space, R, exact=True)
    if validate:
        T.require_valid()
    return T


def load_tensor(path, validate: bool = True) -> CurvatureTensor:
    try:
        with open(path, encoding="utf-8") as fh:
            d = json.load(fh)
    except json.JSONDecodeError as exc:
        raise TensorFileError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise TensorFileError(f"{path}: {exc.strerror}") from None
    return tensor_from_dict(d, validate)


def tensor_to_dict(T: CurvatureTensor) -> dict:
    """Orbit representatives only; loading fills in the rest."""
    if not T.exact:
        raise UsageError("only exact tensors can be written to a tensor file")
    sp = T.space
    return {
        "n": sp.n,
        "field": sp.field,
        "signature": [sp.p, sp.q],
        "convention": CONVENTION,
        "components": [
            {"i": i + 1, "j": j + 1, "k": k + 1, "l": l + 1, "value": str(v)}
            for (i, j, k, l), v in sorted(T.canonical_components().items())
        ],
    }


def dump_tensor(T: CurvatureTensor, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(tensor_to_dict(T), fh, indent=2)
        fh.write("\n")


# ----------------------------------------------------------------- reports

def fmt_scalar(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (complex, np.complexfloating)):
        z = complex(x)
        if z.imag == 0:
            return fmt_scalar(z.real)
        return f"{z.real:.{FLOAT_DIGITS}g}{z.imag:+.{FLOAT_DIGITS}g}j"
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.{FLOAT_DIGITS}g}"
    if x is None:
        return None
    return str(x)


def fmt_vector(v):
    if v is None:
        return None
    return [fmt_scalar(x) for x in v]


def fmt_signature(sig) -> dict:
    blocks, p = sig
    return {"blocks": [list(b) for b in blocks], "distinct_eigenvalues": p}


def _poly_str(f: Poly | None):
    return None if f is None else [str(c) for c in f.c]


def report_to_dict(T: CurvatureTensor, r) -> dict:
    """Render a PropertyReport; floats carry ``FLOAT_DIGITS`` significant digits."""
    p = r.params
    o, jo, ss, du, mp = r.osserman, r.jordan_osserman, r.semisimple, r.duality, r.minimal_poly
    out = {
        "version": __version__,
        TIMESTAMP_KEY: datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "float_precision": f"{FLOAT_DIGITS} significant digits",
        "tensor": {"n": T.space.n, "signature": list(T.space.signature), "field": T.space.field,
                   "convention": CONVENTION},
        "parameters": {k: (fmt_scalar(v) if isinstance(v, float) else v) for k, v in p.__dict__.items()},
        "consistent": r.consistent,
        "inconsistencies": list(r.inconsistencies),
        "symmetries": {"ok": r.symmetries.ok, "violations": [str(v) for v in r.symmetries.violations]},
        "verdicts": r.verdicts(),
    }
    oss = {"verdict": o.verdict, "samples": o.samples, "seed": o.seed, "domain": o.domain}
    if o.certificate:
        c = o.certificate
        oss["certificate"] = {"a": [fmt_scalar(a) for a in c.a], "reference": fmt_vector(c.reference),
                              "samples": c.samples, "seed": c.seed}
    if o.witness:
        oss["witness"] = {"X": fmt_vector(o.witness.X), "j": o.witness.j, "defect": fmt_scalar(o.witness.defect)}
    out["osserman"] = oss
    jd = {"verdict": jo.verdict, "cones": list(jo.cones), "samples": jo.samples}
    if jo.reason:
        jd["reason"] = jo.reason
    if jo.signature:
        jd["signature"] = fmt_signature(jo.signature)
    if jo.witness:
        jd["witness"] = [{"X": fmt_vector(X), "signature": fmt_signature(k)} for X, k in jo.witness]
    out["jordan_osserman"] = jd
    out["semisimple"] = {
        "verdict": ss.verdict,
        "interior_point": fmt_vector(ss.interior_point),
        "genericity_perturbations": ss.generic_samples,
        "members": [{"X": fmt_vector(X), "diagonalisable": bool(d)} for X, d in ss.members],
    }
    out["duality"] = {
        "verdict": du.verdict,
        "samples": du.samples,
        "pairs_tested": du.pairs_tested,
        "flagged_null_pairs": du.flagged_pairs,
        "flagged_null_failures": du.flagged_failures,
        "not_applicable": du.not_applicable,
        "witnesses": [_pair_dict(X, q) for X, q in du.witnesses],
    }
    out["derivative_identity"] = [
        {"X": fmt_vector(X), "eigenvalue": fmt_scalar(mu), "verdict": d.verdict,
         "relative_residual": fmt_scalar(d.relative), "halving_ratio": fmt_scalar(d.ratio)}
        for X, mu, d in r.derivative
    ]
    if mp is not None:
        out["minimal_polynomial"] = {"verdict": mp.verdict, "vanishes": mp.vanishes,
                                     "F": _poly_str(mp.F), "p": mp.p, "note": mp.note}
    return out


def _pair_dict(X, q) -> dict:
    return {
        "X": fmt_vector(X),
        "eigenvalue": fmt_scalar(q.eigenvalue),
        "Y": fmt_vector(q.Y),
        "mu_Y": fmt_scalar(q.mu_Y),
        "residual": fmt_scalar(q.residual),
        "exact": q.exact,
        "null": bool(q.null),
        "defect": fmt_vector(q.defect),
    }


def strip_timestamp(d: dict) -> dict:
    return {k: v for k, v in d.items() if k != TIMESTAMP_KEY}


def dumps_report(d: dict) -> str:
    return json.dumps(d, indent=2, sort_keys=True) + "\n"


__all__ = [
    "MAX_DIM", "TensorFileError", "parse_rational", "tensor_from_dict", "tensor_to_dict", "load_tensor",
    "dump_tensor", "report_to_dict", "strip_timestamp", "dumps_report", "fmt_scalar", "fmt_vector",
]
