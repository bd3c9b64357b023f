"""End-to-end acceptance suite, shared by ``osserman theorems`` and the test-suite.

``quick`` runs every criterion at reduced sample counts; ``full`` runs the
stated counts.  Each criterion returns measured values alongside its
pass/fail flag so that a failure can be read without rerunning.
"""
from __future__ import annotations

import itertools
import json
import os
import tempfile
import time
from dataclasses import dataclass, field

import numpy as np
from gmpy2 import mpq

from .catalog import (
    clifford_tensor, constant_curvature, nilpotent_example, random_act, random_symmetric_form, standard_structure,
)
from .checks import (
    HOLDS, NO_EVIDENCE, ContinuationError, cone_samples, derivative_identity_check,
    duality_principle, is_jordan_osserman, is_osserman, is_semisimple, minimal_poly_test,
    radial_derivative, reciprocity_check, verify_duality_witness,
)
from .curvature import SquareOperator
from .poly import Poly
from .polymatrix import classify_generic, invariant_factors, invariant_factors_by_minors, \
    jordan_structure_exact, structure_signature
from .space import FLOAT, PseudoEuclideanSpace, as_float, derived_rng, inner, orthogonal_complement_basis, sample_vector
from .spectral import char_poly, eigen_clusters, jordan_structure_numeric, power

SIGNATURES = [(2, 0), (3, 0), (1, 1), (2, 1), (2, 2), (3, 3)]

LEVELS = {
    "quick": dict(c1=20, c2_samples=16, c2_k=(mpq(-2), mpq(1, 3), mpq(5)), c3_random=20, c3_jordan=10,
                  c4_samples=32, c5_tensors=5, c5_samples=128, c6_triples=3, c8_samples=16),
    "full": dict(c1=100, c2_samples=64, c2_k=(mpq(-2), mpq(1, 3), mpq(5)), c3_random=100, c3_jordan=50,
                 c4_samples=128, c5_tensors=25, c5_samples=256, c6_triples=10, c8_samples=64),
}


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    measured: str
    seconds: float = 0.0

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] criterion {self.number}: {self.title} ({self.seconds:.1f}s) | {self.measured}"


@dataclass
class SuiteContext:
    level: str
    seed: int
    cfg: dict
    mutual_pairs: list = field(default_factory=list)  # (space, mu_X, Y, mu_Y, X, exact, ref)

    def collect(self, T, result):
        ref = float(np.max(np.abs(T.float_array)))
        for X, p in result.mutual_pairs():
            self.mutual_pairs.append((T.space, p.eigenvalue, p.Y, p.mu_Y, X, p.exact, ref))


# ------------------------------------------------------------------ 1

def criterion_1(ctx: SuiteContext) -> CriterionResult:
    total = bad = 0
    start = time.perf_counter()
    for si, sig in enumerate(SIGNATURES):
        space = PseudoEuclideanSpace(*sig)
        for t in range(ctx.cfg["c1"]):
            phi = random_symmetric_form(space, derived_rng(ctx.seed, 1, si, t), 5)
            T = _unchecked_rank_one(space, phi)
            total += 1
            bad += not T.validate_symmetries().ok
    el = time.perf_counter() - start
    return CriterionResult(1, "symmetry exactness of rank-one generators", bad == 0 and el < 30,
                           f"{total} tensors, {bad} with violations, {el:.2f}s (< 30s)")


def _unchecked_rank_one(space, phi):
    from .catalog import _from_array, _rank_one_array

    return _from_array(space, _rank_one_array(phi.matrix, space.n))


# ------------------------------------------------------------------ 2

def _space_form_chi(n: int, k) -> tuple:
    return Poly.from_roots([0] + [k] * (n - 1)).c


def criterion_2(ctx: SuiteContext) -> CriterionResult:
    fails = []
    runs = 0
    samples = ctx.cfg["c2_samples"]
    for sig, k in itertools.product(SIGNATURES, ctx.cfg["c2_k"]):
        space = PseudoEuclideanSpace(*sig)
        T = constant_curvature(space, k)
        runs += 1
        o = is_osserman(T, samples, ctx.seed)
        if not o.holds or tuple(o.certificate.a) != _space_form_chi(space.n, k):
            fails.append(f"{sig},k={k}: osserman {o.verdict}")
            continue
        jo = is_jordan_osserman(T, samples, ctx.seed, osserman=o)
        if not jo.holds:
            fails.append(f"{sig},k={k}: jordan-osserman {jo.verdict}")
        du = duality_principle(T, samples, seed=ctx.seed)
        ctx.collect(T, du)
        nonzero = [p for c in du.checks for p in c.pairs if not (p.exact and p.residual == 0)]
        if not du.holds or nonzero:
            fails.append(f"{sig},k={k}: duality {du.verdict}, {len(nonzero)} pairs without exact-zero residual")
        X = cone_samples(space, 1, ctx.seed, 10, 61)[0][1]
        mp = minimal_poly_test(T, X, o.certificate)
        if not mp.vanishes:
            fails.append(f"{sig},k={k}: minimal polynomial test false")
    return CriterionResult(2, "space-form suite", not fails,
                           f"{runs} (signature, k) runs at {samples} samples/cone; failures: {fails or 'none'}")


# ------------------------------------------------------------------ 3

def _random_int_matrix(rng, n, lo=-5, hi=5):
    return tuple(tuple(mpq(int(x)) for x in row) for row in rng.integers(lo, hi + 1, size=(n, n)))


def _unimodular(rng, n, ops=None):
    """Product of elementary integer row operations, with its exact inverse."""
    U = [[mpq(int(i == j)) for j in range(n)] for i in range(n)]
    Ui = [[mpq(int(i == j)) for j in range(n)] for i in range(n)]
    for _ in range(ops or 2 * n):
        i, j = rng.choice(n, size=2, replace=False)
        c = int(rng.integers(-2, 3)) or 1
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]  # U <- E U
        for r in range(n):  # Ui <- Ui E^-1
            Ui[r][j] -= c * Ui[r][i]
    return U, Ui


def _jordan_matrix(blocks):
    n = sum(b for _, b in blocks)
    J = [[mpq(0)] * n for _ in range(n)]
    pos = 0
    for lam, b in blocks:
        for t in range(b):
            J[pos + t][pos + t] = mpq(lam)
            if t + 1 < b:
                J[pos + t][pos + t + 1] = mpq(1)
        pos += b
    return J


def _matmul(A, B):
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), mpq(0)) for j in range(len(B[0]))]
            for i in range(len(A))]


def _random_jordan(rng, n):
    blocks, left = [], n
    while left:
        b = int(rng.integers(1, min(3, left) + 1))
        blocks.append((int(rng.integers(-3, 4)), b))
        left -= b
    known: dict = {}
    for lam, b in blocks:
        known.setdefault(mpq(lam), []).append(b)
    return blocks, {k: tuple(sorted(v, reverse=True)) for k, v in known.items()}


def criterion_3(ctx: SuiteContext) -> CriterionResult:
    fails = []
    prod_checks = minor_checks = jordan_checks = numeric_checks = 0
    for n in range(2, 6):
        space = PseudoEuclideanSpace(n, 0)
        for t in range(ctx.cfg["c3_random"]):
            A = SquareOperator(space, _random_int_matrix(derived_rng(ctx.seed, 3, n, t), n))
            inv = invariant_factors(A)
            prod_checks += 1
            if inv.product() != char_poly(A).poly:
                fails.append(f"n={n} #{t}: product of invariant factors != char_poly")
            if n <= 4:
                minor_checks += 1
                if tuple(inv) != tuple(invariant_factors_by_minors(A)):
                    fails.append(f"n={n} #{t}: Smith factors != minor-gcd factors")
    for n in range(2, 7):
        space = PseudoEuclideanSpace(n, 0)
        for t in range(ctx.cfg["c3_jordan"]):
            rng = derived_rng(ctx.seed, 33, n, t)
            blocks, known = _random_jordan(rng, n)
            U, Ui = _unimodular(rng, n)
            A = SquareOperator(space, tuple(tuple(r) for r in _matmul(_matmul(U, _jordan_matrix(blocks)), Ui)))
            js = jordan_structure_exact(A)
            jordan_checks += 1
            if js.by_value() != known:
                fails.append(f"n={n} #{t}: exact {js} != known {known}")
                continue
            vals = sorted(known)
            if len(vals) == 1 or min(b - a for a, b in zip(vals, vals[1:])) > 1e-3:
                numeric_checks += 1
                num = jordan_structure_numeric(A.to_float(), 1e-8)
                if structure_signature(num) != structure_signature(js):
                    fails.append(f"n={n} #{t}: numeric {num} != exact {js}")
    return CriterionResult(3, "canonical-form oracle equivalence", not fails,
                           f"{prod_checks} product checks, {minor_checks} minor-gcd checks, {jordan_checks} "
                           f"exact Jordan checks, {numeric_checks} numeric checks; failures: {fails[:5] or 'none'}")


# ------------------------------------------------------------------ 4

def jordan_osserman_catalog():
    """(label, tensor) pairs of catalog members expected to be Jordan-Osserman."""
    out = []
    for sig in SIGNATURES:
        sp = PseudoEuclideanSpace(*sig)
        out.append((f"constant_curvature{sig} k=1/3", constant_curvature(sp, mpq(1, 3))))
    e4 = PseudoEuclideanSpace(4, 0)
    for m, ls in ((1, (3,)), (2, (1, 2)), (3, (1, 1, 1))):
        out.append((f"clifford(4,0) m={m}", clifford_tensor(e4, standard_structure((4, 0), m), 1, ls)))
    n22 = PseudoEuclideanSpace(2, 2)
    out.append(("clifford(2,2) m=1", clifford_tensor(n22, standard_structure((2, 2), 1), 1, (3,))))
    out.append(("nilpotent_example(2,2) depth=2", nilpotent_example((2, 2), 2)))
    out.append(("nilpotent_example(2,2) depth=3", nilpotent_example((2, 2), 3)))
    return out


def criterion_4(ctx: SuiteContext) -> CriterionResult:
    samples = ctx.cfg["c4_samples"]
    fails, tested, flagged = [], 0, 0
    for label, T in jordan_osserman_catalog():
        jo = is_jordan_osserman(T, min(samples, 64), ctx.seed)
        if not jo.holds:
            continue
        tested += 1
        du = duality_principle(T, samples, seed=ctx.seed)
        ctx.collect(T, du)
        flagged += du.flagged_pairs
        if du.witnesses:
            fails.append(f"{label}: {len(du.witnesses)} non-flagged failures")
    return CriterionResult(4, "Jordan-Osserman implies duality", not fails and tested > 0,
                           f"{tested} Jordan-Osserman catalog tensors at {samples} samples/cone, "
                           f"{flagged} flagged null pairs excluded; failures: {fails or 'none'}")


# ------------------------------------------------------------------ 5

def criterion_5(ctx: SuiteContext) -> CriterionResult:
    want = ctx.cfg["c5_tensors"]
    total_samples = ctx.cfg["c5_samples"]
    fails, found, witnesses, checked = [], {}, 0, 0
    for sig in ((2, 1), (2, 2)):
        space = PseudoEuclideanSpace(*sig)
        per_cone = total_samples // len(space.admissible_cones())
        got = 0
        for s in itertools.count():
            if got == want or s > 20 * want:
                break
            T = random_act(space, derived_rng(ctx.seed, 5, *sig, s).integers(2**31), 3, 3)
            if is_semisimple(T, 8, ctx.seed).verdict != HOLDS or is_osserman(T, 16, ctx.seed).holds:
                continue
            got += 1
            du = duality_principle(T, per_cone, seed=ctx.seed, stop_on_violation=True)
            ctx.collect(T, du)
            if not du.witnesses:
                fails.append(f"{sig} tensor #{s}: no duality violation in {du.samples} samples")
                continue
            for X, p in du.witnesses:
                witnesses += 1
                checked += 1
                if not verify_duality_witness(T, X, p):
                    fails.append(f"{sig} tensor #{s}: witness at X={X} does not re-verify")
        found[sig] = got
        if got < want:
            fails.append(f"{sig}: only {got} semisimple non-Osserman tensors found")
    return CriterionResult(5, "semisimple non-Osserman tensors violate duality", not fails,
                           f"tensors {found}, {witnesses} witnesses, {checked} re-verified; failures: {fails[:5] or 'none'}")


# ------------------------------------------------------------------ 6

def _c6_targets():
    out = []
    for sig in SIGNATURES:
        out.append((f"constant_curvature{sig} k=5", constant_curvature(PseudoEuclideanSpace(*sig), 5)))
    e4 = PseudoEuclideanSpace(4, 0)
    for m, ls in ((1, (3,)), (2, (1, 2)), (3, (1, 1, 1))):
        out.append((f"clifford(4,0) m={m}", clifford_tensor(e4, standard_structure((4, 0), m), 1, ls)))
    out.append(("clifford(2,2) m=1", clifford_tensor(PseudoEuclideanSpace(2, 2), standard_structure((2, 2), 1), 1, (3,))))
    return out


def derivative_triples(T, count: int, seed: int, tol: float = 1e-9):
    """``count`` generic (X, mu, e, T_dir) with real non-null e, mu != 0, T_dir orthogonal to X."""
    space = T.space
    Tf = T.to_float()
    out = []
    for s in itertools.count():
        if len(out) == count or s > 50 * count:
            break
        rng = derived_rng(seed, 6, s)
        cones = space.admissible_cones()
        X = sample_vector(space, rng, 10, cone=cones[s % len(cones)])
        if not classify_generic(T, X, count=4, seed=seed + s).generic:
            continue
        Xf = as_float(X)
        cl = [c for c in eigen_clusters(Tf.jacobi_float(Xf), tol)
              if c.eigenvalue.imag == 0 and abs(c.eigenvalue) > 1e-6]
        if not cl:
            continue
        c = cl[s % len(cl)]
        basis = [np.real(c.basis[:, k]) for k in range(c.geometric)]
        e = sum(rng.normal() * b for b in basis)
        if abs(inner(space, e, e)) <= 1e-6 * float(e @ e):
            continue
        comp = orthogonal_complement_basis(space, Xf, FLOAT)
        Td = sum(rng.normal() * b for b in comp)
        out.append((Xf, c.eigenvalue.real, e, Td))
    return out


def criterion_6(ctx: SuiteContext) -> CriterionResult:
    per = ctx.cfg["c6_triples"]
    fails, n_ok, worst_rel, ratios, worst_rad = [], 0, 0.0, [], 0.0
    for label, T in _c6_targets():
        triples = derivative_triples(T, per, ctx.seed)
        if len(triples) < per:
            fails.append(f"{label}: only {len(triples)} generic triples")
        Tf = T.to_float()
        for X, mu, e, Td in triples:
            try:
                r = derivative_identity_check(Tf, X, mu, e, Td, 1e-4 * np.linalg.norm(X))
                rad = radial_derivative(Tf, X, mu, e)
            except ContinuationError as exc:
                fails.append(f"{label}: {exc}")
                continue
            rad_rel = abs(rad - 2 * mu) / abs(2 * mu)
            worst_rel = max(worst_rel, r.relative)
            worst_rad = max(worst_rad, rad_rel)
            ratios.append(r.ratio)
            ok = r.relative <= 1e-6 and 0.15 <= r.ratio <= 0.45 and rad_rel <= 1e-6
            n_ok += ok
            if not ok:
                fails.append(f"{label}: rel {r.relative:.2e}, ratio {r.ratio:.3f}, radial {rad_rel:.2e}")
    rng_txt = f"[{min(ratios):.3f}, {max(ratios):.3f}]" if ratios else "n/a"
    return CriterionResult(6, "derivative identity by finite differences", not fails,
                           f"{n_ok} triples ok; max relative residual {worst_rel:.2e}; r(h/2)/r(h) in {rng_txt}; "
                           f"max radial error {worst_rad:.2e}; failures: {fails[:5] or 'none'}")


# ------------------------------------------------------------------ 7

def criterion_7(ctx: SuiteContext) -> CriterionResult:
    bad = exact = floating = 0
    for space, mu_X, Y, mu_Y, X, is_exact, ref in ctx.mutual_pairs:
        ok = reciprocity_check(space, mu_X, Y, mu_Y, X, 1e-9, ref=ref)
        exact += is_exact
        floating += not is_exact
        bad += not ok
    return CriterionResult(7, "reciprocity on mutual eigenpairs", bad == 0 and exact + floating > 0,
                           f"{exact} exact and {floating} floating mutual pairs from criteria 2, 4, 5; {bad} failures")


# ------------------------------------------------------------------ 8

def criterion_8(ctx: SuiteContext) -> CriterionResult:
    samples = ctx.cfg["c8_samples"]
    try:
        T = nilpotent_example((1, 1))
    except Exception as exc:  # the construction is impossible in dimension 2
        analog = _nilpotent_summary(nilpotent_example((2, 2), 2), samples, ctx.seed)
        return CriterionResult(8, "nilpotent branch in signature (1,1)", False,
                               f"no (1,1) example: {exc}. Signature (2,2) analog: {analog}")
    return CriterionResult(8, "nilpotent branch in signature (1,1)", *_nilpotent_check(T, samples, ctx.seed))


def _nilpotent_check(T, samples, seed):
    nonzero = square_zero = 0
    for k in range(samples):
        X = sample_vector(T.space, derived_rng(seed, 8, k), 10)
        A = T.jacobi(X)
        nonzero += not A.is_zero()
        square_zero += power(A, 2).is_zero()
    o = is_osserman(T, samples, seed)
    ss = is_semisimple(T, samples, seed)
    X = sample_vector(T.space, derived_rng(seed, 8, 10**6), 10)
    mp = minimal_poly_test(T, X, o.certificate)
    ok = nonzero == samples and square_zero == samples and ss.verdict == NO_EVIDENCE and mp.vanishes is False
    return ok, (f"R_X != 0 at {nonzero}/{samples}, R_X^2 = 0 at {square_zero}/{samples}, "
                f"semisimple {ss.verdict}, minimal polynomial test {mp.vanishes}")


def _nilpotent_summary(T, samples, seed) -> str:
    ok, txt = _nilpotent_check(T, samples, seed)
    return ("passes: " if ok else "fails: ") + txt


# ------------------------------------------------------------------ 9

def criterion_9(ctx: SuiteContext, elapsed_quick: float | None) -> CriterionResult:
    from .cli import main

    start = time.perf_counter()
    with tempfile.TemporaryDirectory() as tmp:
        tf = os.path.join(tmp, "t.json")
        with open(tf, "w") as fh:
            json.dump({"n": 4, "field": "real", "signature": [2, 2],
                       "constructor": {"name": "clifford", "parameters": {"l0": "1", "ls": ["3"], "m": 1}}}, fh)
        outs = []
        for r in range(2):
            out = os.path.join(tmp, f"r{r}.json")
            main(["report", tf, "--samples", "8", "--seed", str(ctx.seed), "--out", out], quiet=True)
            with open(out) as fh:
                d = json.load(fh)
            d.pop("generated_at", None)
            outs.append(json.dumps(d, sort_keys=True))
    same = outs[0] == outs[1]
    if elapsed_quick is None:
        t0 = time.perf_counter()
        run_suite("quick", ctx.seed, include_timing=False)
        elapsed_quick = time.perf_counter() - t0
    ok = same and elapsed_quick < 300
    return CriterionResult(9, "determinism and runtime budget", ok,
                           f"reports identical modulo timestamp: {same}; quick suite {elapsed_quick:.1f}s (< 300s)",
                           time.perf_counter() - start)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


def run_suite(level: str = "quick", seed: int = 0, include_timing: bool = True, report=None) -> list[CriterionResult]:
    """Run criteria 1-9; ``report`` is called with each result as it completes."""
    ctx = SuiteContext(level, seed, LEVELS[level])
    results = []
    start = time.perf_counter()
    for crit in CRITERIA:
        t0 = time.perf_counter()
        res = crit(ctx)
        res.seconds = time.perf_counter() - t0
        results.append(res)
        if report:
            report(res)
    if include_timing:
        elapsed = time.perf_counter() - start if level == "quick" else None
        res = criterion_9(ctx, elapsed)
        results.append(res)
        if report:
            report(res)
    return results


__all__ = ["CriterionResult", "LEVELS", "SIGNATURES", "run_suite", "jordan_osserman_catalog", "derivative_triples"]
