"""Verifiers for the Osserman, Jordan-Osserman, semisimple and duality properties.

Every verdict is sample based.  ``violated`` always comes with a witness
that can be re-checked independently; in the exact domain such a witness
is a proof.  ``holds-on-samples`` only reports that no counterexample was
found among the stated samples.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .curvature import CurvatureTensor, norm_inf
from .poly import Poly, rational_roots, squarefree_part
from .polymatrix import classify_generic, jordan_structure_exact, structure_signature
from .space import (
    DEFAULT_TOL,
    PseudoEuclideanSpace,
    UsageError,
    as_float,
    derived_rng,
    euclid_norm,
    inner,
    is_exact_vector,
    norm_sq,
    orthogonal_complement_basis,
    sample_vector,
    vec,
    FLOAT,
)
from .spectral import (
    char_poly,
    eigen_clusters,
    exact_eigenspace,
    is_diagonalisable,
    jordan_structure_numeric,
)

HOLDS = "holds-on-samples"
VIOLATED = "violated"
NOT_APPLICABLE = "not-applicable"
NO_EVIDENCE = "no-evidence"


class ContinuationError(RuntimeError):
    """Eigenvalue continuation cannot pick a unique branch; use a smaller step."""


@dataclass(frozen=True)
class CheckParams:
    samples: int = 64          # per cone where cones matter
    seed: int = 0
    tol: float = DEFAULT_TOL
    domain: str = "exact"      # "exact" | "float"
    pit_range: int = 10**6     # coordinate range for identity testing
    bound: int = 10            # coordinate bound for structural sampling
    generic_count: int = 8     # perturbations per genericity test
    h_factor: float = 1e-4     # finite-difference step relative to |X|
    derivative_samples: int = 4

    def with_(self, **kw) -> "CheckParams":
        return CheckParams(**{**self.__dict__, **kw})


def _require_valid(T: CurvatureTensor):
    T.require_valid()


def _sample(space, seed, *keys, bound=10, cone="any", require_non_null=True):
    return sample_vector(space, derived_rng(seed, *keys), bound, require_non_null=require_non_null, cone=cone)


def cone_samples(space: PseudoEuclideanSpace, samples: int, seed: int, bound: int, stream: int):
    """``samples`` non-null vectors from each admissible cone, deterministic in ``seed``."""
    out = []
    for ci, cone in enumerate(space.admissible_cones()):
        for s in range(samples):
            out.append((cone, _sample(space, seed, stream, ci, s, bound=bound, cone=cone)))
    return out


# --------------------------------------------------------------------- Osserman

@dataclass(frozen=True)
class OssermanCertificate:
    """``chi_X(t) = P(t, |X|^2)`` with ``P(t, y) = sum_j a_j y^(n-j) t^j``."""

    a: tuple
    samples: int
    seed: int
    reference: tuple

    @property
    def n(self) -> int:
        return len(self.a) - 1

    def chi(self, s) -> Poly:
        n = self.n
        return Poly([self.a[j] * s ** (n - j) for j in range(n + 1)])

    def unit_polynomial(self) -> Poly:
        """``P(t, 1)``; its roots are the eigenvalues at unit-norm vectors."""
        return Poly(self.a)


@dataclass
class OssermanWitness:
    X: tuple
    j: int
    defect: object  # f_j(X) - a_j |X|^(2(n-j)), nonzero


@dataclass
class OssermanResult:
    verdict: str
    certificate: OssermanCertificate | None = None
    witness: OssermanWitness | None = None
    samples: int = 0
    seed: int = 0
    domain: str = "exact"

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS


def _reference_vector(space: PseudoEuclideanSpace) -> tuple:
    n, p = space.n, space.p
    cands = [[1] + [0] * (n - 1)]
    if p < n:
        for c in (1, 2):
            v = [0] * n
            v[0], v[p] = 1, c
            cands.append(v)
    for v in cands:
        v = vec(v)
        if norm_sq(space, v) != 0:
            return v
    raise RuntimeError("no non-null reference vector among e1, e1+e_{p+1}, e1+2e_{p+1}")


def _char_coeffs(T: CurvatureTensor, X, domain: str):
    if domain == "exact":
        return char_poly(T.jacobi(X)).coefficients
    M = T.jacobi_float(X)
    return tuple(np.real_if_close(np.poly(M))[::-1])


def is_osserman(T: CurvatureTensor, samples: int = 64, seed: int = 0, *, domain: str = "exact",
                pit_range: int = 10**6, tol: float = DEFAULT_TOL) -> OssermanResult:
    """Polynomial identity test of ``f_j(X) = a_j |X|^(2(n-j))``.

    ``a_j`` is read off at a fixed reference vector; each identity is then
    tested at ``samples`` random integer points whose coordinate range is at
    least ``4 n samples``, so a non-identity escapes one sample with
    probability at most ``2n / range``.
    """
    _require_valid(T)
    space = T.space
    n = space.n
    X0 = _reference_vector(space)
    s0 = norm_sq(space, X0)
    f0 = _char_coeffs(T, X0, domain)
    if domain == "exact":
        a = tuple(f0[j] / s0 ** (n - j) for j in range(n + 1))
        half = max(pit_range, 4 * n * samples) // 2
    else:
        s0 = float(s0)
        a = tuple(float(np.real(f0[j])) / s0 ** (n - j) for j in range(n + 1))
        half = 10
    for k in range(samples):
        X = _sample(space, seed, 11, k, bound=half, require_non_null=False)
        f = _char_coeffs(T, X, domain)
        s = norm_sq(space, X)
        for j in range(n):
            if domain == "exact":
                g = f[j] - a[j] * s ** (n - j)
                bad = g != 0
            else:
                s = float(s)
                g = float(np.real(f[j])) - a[j] * s ** (n - j)
                scale = comb(n, j) * max(norm_inf(T.jacobi_float(X)), abs(s)) ** (n - j)
                bad = abs(g) > tol * max(scale, 1e-300)
            if bad:
                return OssermanResult(VIOLATED, witness=OssermanWitness(X, j, g), samples=k + 1,
                                      seed=seed, domain=domain)
    cert = OssermanCertificate(a, samples, seed, X0)
    return OssermanResult(HOLDS, certificate=cert, samples=samples, seed=seed, domain=domain)


def verify_osserman_witness(T: CurvatureTensor, w: OssermanWitness, cert_a) -> bool:
    """Recompute the defect from scratch; True when it is nonzero."""
    n = T.space.n
    f = char_poly(T.jacobi(w.X)).coefficients
    s = norm_sq(T.space, w.X)
    return f[w.j] - cert_a[w.j] * s ** (n - w.j) != 0


def reference_coefficients(T: CurvatureTensor) -> tuple:
    space = T.space
    n = space.n
    X0 = _reference_vector(space)
    s0 = norm_sq(space, X0)
    f0 = char_poly(T.jacobi(X0)).coefficients
    return tuple(f0[j] / s0 ** (n - j) for j in range(n + 1))


# ------------------------------------------------------------ Jordan-Osserman

def _jordan_key(T, X, domain, tol):
    if domain == "exact":
        return structure_signature(jordan_structure_exact(T.jacobi(X)))
    js = jordan_structure_numeric(T.jacobi_float(X), max(tol, 1e-8))
    return structure_signature(js)


@dataclass
class JordanOssermanResult:
    verdict: str
    signature: tuple | None = None
    witness: tuple | None = None  # ((X1, key1), (X2, key2))
    samples: int = 0
    cones: tuple = ()
    reason: str = ""

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS


def is_jordan_osserman(T: CurvatureTensor, samples: int = 64, seed: int = 0, *, domain: str = "exact",
                       bound: int = 10, tol: float = DEFAULT_TOL,
                       osserman: OssermanResult | None = None) -> JordanOssermanResult:
    """Osserman plus one Jordan type of ``R_X`` over sampled non-null ``X`` on every cone."""
    osserman = osserman or is_osserman(T, samples, seed, domain=domain, tol=tol)
    cones = tuple(T.space.admissible_cones())
    if not osserman.holds:
        return JordanOssermanResult(VIOLATED, witness=None, cones=cones, reason="not Osserman")
    first = None
    for cone, X in cone_samples(T.space, samples, seed, bound, 23):
        key = _jordan_key(T, X, domain, tol)
        if first is None:
            first = (X, key)
        elif key != first[1]:
            return JordanOssermanResult(VIOLATED, witness=(first, (X, key)), samples=samples, cones=cones,
                                        reason="Jordan type differs between sampled vectors")
    return JordanOssermanResult(HOLDS, signature=first[1], samples=samples, cones=cones)


# ------------------------------------------------------------------- semisimple

@dataclass
class SemisimpleResult:
    verdict: str
    members: list = field(default_factory=list)  # (X, diagonalisable) per sample
    interior_point: tuple | None = None
    generic_samples: int = 0

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS


def _diagonalisable(T, X, domain, tol):
    field_ = T.space.field
    if domain == "exact":
        return is_diagonalisable(T.jacobi(X), field_)
    js = jordan_structure_numeric(T.jacobi_float(X), max(tol, 1e-8))
    ok = js.is_semisimple() and not js.unreliable
    if field_ == "real":
        ok = ok and js.real_eigenvalues == js.p
    return ok


def is_semisimple(T: CurvatureTensor, samples: int = 64, seed: int = 0, *, domain: str = "exact",
                  bound: int = 10, generic_count: int = 8, tol: float = DEFAULT_TOL) -> SemisimpleResult:
    """Look for a diagonalisable ``R_X`` at a point whose Jordan type is locally constant.

    Such a point has a neighbourhood of diagonalisable operators, which is
    evidence that the diagonalisable set has interior.
    """
    _require_valid(T)
    members = []
    interior = None
    gsamples = 0
    for k in range(samples):
        X = _sample(T.space, seed, 31, k, bound=bound)
        d = _diagonalisable(T, X, domain, tol)
        members.append((X, d))
        if d and interior is None:
            if domain == "exact":
                g = classify_generic(T, X, count=generic_count, seed=seed + k)
                gsamples = g.samples
                if g.generic:
                    interior = X
            else:
                interior = X
    verdict = HOLDS if interior is not None else NO_EVIDENCE
    return SemisimpleResult(verdict, members, interior, gsamples)


# --------------------------------------------------------------------- duality

@dataclass
class PairResult:
    eigenvalue: object      # mu_X: mpq (exact) or float/complex
    Y: object               # eigenvector of R_X (exact tuple or ndarray)
    mu_Y: object            # <R_Y X, X> / |X|^2
    residual: float         # collinearity residual rho
    passed: bool
    exact: bool
    null: bool              # Y is a null vector (flagged)
    applicable: bool = True
    defect: object = None   # exact defect vector when exact

    @property
    def counts(self) -> bool:
        """Whether this pair enters the headline duality verdict."""
        return self.applicable and not self.null


@dataclass
class DualityCheck:
    X: tuple
    pairs: list

    @property
    def failures(self) -> list:
        return [p for p in self.pairs if p.counts and not p.passed]

    @property
    def flagged_failures(self) -> list:
        return [p for p in self.pairs if p.applicable and p.null and not p.passed]

    @property
    def passed(self) -> bool:
        return not self.failures


def _collinearity(space, T, X, Y, exact: bool):
    """Defect of ``R_Y X`` from the line through ``X``, and ``mu_Y``."""
    s = norm_sq(space, X)
    if exact:
        Z = T.apply(X, Y, Y)  # R(X, Y)Y = R_Y X
        mu_Y = inner(space, Z, X) / s
        D = tuple(z - mu_Y * x for z, x in zip(Z, X))
        Ry = norm_inf(T.jacobi(Y).to_float())
        nd = euclid_norm(D)
        rho = 0.0 if nd == 0 else nd / (Ry * euclid_norm(X))
        return mu_Y, rho, D
    Xf = as_float(X).astype(complex) if np.iscomplexobj(Y) else as_float(X)
    Ry = T.jacobi_float(Y) if not np.iscomplexobj(Y) else _jacobi_complex(T, Y)
    Z = Ry @ Xf
    sf = complex(s) if np.iscomplexobj(Y) else float(s)
    mu_Y = inner(space, Z, Xf) / sf
    D = Z - mu_Y * Xf
    scale = norm_inf(Ry) * np.linalg.norm(Xf)
    rho = float(np.linalg.norm(D) / scale) if scale > 0 else 0.0
    return mu_Y, rho, D


def _jacobi_complex(T, Y):
    Y = np.asarray(Y, dtype=complex)
    M = np.einsum("ajkm,j,k->ma", T.float_array, Y, Y)
    return np.asarray(T.space.eps)[:, None] * M


def _test_vectors(basis: list) -> list:
    """Basis vectors and pairwise sums: a quadratic map vanishing on these vanishes on the span."""
    out = list(basis)
    for a, b in itertools.combinations(range(len(basis)), 2):
        u, v = basis[a], basis[b]
        out.append(tuple(x + y for x, y in zip(u, v)) if isinstance(u, tuple) else u + v)
    return out


def _is_null_float(space, Y, tol):
    s = inner(space, Y, Y)
    return bool(abs(s) <= tol * float(np.sum(np.abs(Y) ** 2)))


def duality_check(T: CurvatureTensor, X, tol: float = DEFAULT_TOL) -> DualityCheck:
    """Test ``R_Y X`` parallel to ``X`` for the eigenvectors ``Y`` of ``R_X``.

    Each eigenspace is tested on a basis and on pairwise sums of basis
    vectors; as ``Y -> R_Y X`` is quadratic this covers every eigenvector.
    Rational eigenvalues are handled exactly, the rest in floating point.
    Over the reals non-real eigenvalues are recorded as not applicable.
    """
    space = T.space
    if is_exact_vector(X) and T.exact:
        if norm_sq(space, X) == 0:
            raise UsageError("duality is only defined at non-null X")
    elif _is_null_float(space, as_float(X), tol):
        raise UsageError("duality is only defined at non-null X")
    pairs: list[PairResult] = []
    exact_roots: list = []
    if T.exact and is_exact_vector(X):
        A = T.jacobi(X)
        chi = char_poly(A).poly
        exact_roots = rational_roots(chi)
        for mu in exact_roots:
            for Y in _test_vectors(exact_eigenspace(A, mu)):
                mu_Y, rho, D = _collinearity(space, T, X, Y, True)
                pairs.append(PairResult(mu, Y, mu_Y, rho, all(d == 0 for d in D), True,
                                        norm_sq(space, Y) == 0, True, D))
        if len(exact_roots) == squarefree_part(chi).deg:
            return DualityCheck(X, pairs)
        M = A.to_float()
    else:
        M = T.jacobi_float(X)
    scale = norm_inf(M) or 1.0
    for c in eigen_clusters(M, tol):
        lam = c.eigenvalue
        if any(abs(lam - float(r)) <= max(tol, 1e-7) * scale for r in exact_roots):
            continue
        real = lam.imag == 0.0
        if not real and space.field == "real":
            pairs.append(PairResult(lam, None, None, float("nan"), False, False, False, applicable=False))
            continue
        basis = [c.basis[:, k] / np.linalg.norm(c.basis[:, k]) for k in range(c.geometric)]
        if real:
            basis = [np.real(b) for b in basis]
        for Y in _test_vectors(basis):
            mu_Y, rho, D = _collinearity(space, T, X, Y, False)
            pairs.append(PairResult(lam.real if real else lam, Y, mu_Y, rho, rho <= tol, False,
                                    _is_null_float(space, Y, tol), True, None))
    return DualityCheck(X, pairs)


@dataclass
class DualityResult:
    verdict: str
    checks: list                   # DualityCheck per sampled X
    witnesses: list                # (X, PairResult) counted failures
    flagged_failures: int = 0
    pairs_tested: int = 0
    flagged_pairs: int = 0
    not_applicable: int = 0
    samples: int = 0

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def mutual_pairs(self):
        """(X, pair) for every passing eigenpair: Y eigenvector of R_X and X eigenvector of R_Y."""
        for chk in self.checks:
            for p in chk.pairs:
                if p.applicable and p.passed:
                    yield chk.X, p


def duality_principle(T: CurvatureTensor, samples: int = 64, tol: float = DEFAULT_TOL, seed: int = 0, *,
                      bound: int = 10, domain: str = "exact", stop_on_violation: bool = False) -> DualityResult:
    """``duality_check`` at ``samples`` random non-null vectors from every admissible cone."""
    _require_valid(T)
    Tk = T if domain == "exact" else T.to_float()
    checks, witnesses = [], []
    flagged = tested = flagged_pairs = na = 0
    count = 0
    for _, X in cone_samples(T.space, samples, seed, bound, 41):
        chk = duality_check(Tk, X, tol)
        count += 1
        checks.append(chk)
        for p in chk.pairs:
            if not p.applicable:
                na += 1
                continue
            tested += 1
            flagged_pairs += bool(p.null)
        witnesses.extend((X, p) for p in chk.failures)
        flagged += len(chk.flagged_failures)
        if stop_on_violation and witnesses:
            break
    verdict = VIOLATED if witnesses else HOLDS
    return DualityResult(verdict, checks, witnesses, flagged, tested, flagged_pairs, na, count)


def verify_duality_witness(T: CurvatureTensor, X, pair: PairResult, tol: float = DEFAULT_TOL) -> bool:
    """Independently confirm a duality failure: exact nonzero defect, or residual > 100 tol."""
    space = T.space
    if pair.exact:
        A = T.jacobi(X)
        AY = A @ pair.Y
        if any(a != pair.eigenvalue * y for a, y in zip(AY, pair.Y)) or all(y == 0 for y in pair.Y):
            return False
        Z = T.apply(X, pair.Y, pair.Y)
        ratio = None
        for z, x in zip(Z, X):
            if x != 0:
                ratio = z / x
                break
        return any(z != ratio * x for z, x in zip(Z, X))
    Y = np.asarray(pair.Y)
    M = T.jacobi_float(X)
    if np.linalg.norm(M @ Y - pair.eigenvalue * Y) > 1e3 * tol * (norm_inf(M) or 1.0) * np.linalg.norm(Y):
        return False
    _, rho, _ = _collinearity(space, T.to_float() if T.exact else T, X, Y, False)
    return rho > 100 * tol


def reciprocity_check(space: PseudoEuclideanSpace, mu_X, Y, mu_Y, X, tol: float | None = None,
                      ref: float = 0.0) -> bool:
    """``mu_X |Y|^2 = mu_Y |X|^2``; exactly for exact inputs, else to ``tol`` relative.

    ``ref`` is the size of the tensor entries.  Without it a pair of
    eigenvalues that are both rounding noise around zero has no scale to be
    compared against.
    """
    exact = all(isinstance(v, tuple) for v in (X, Y)) and not any(
        isinstance(m, (float, complex, np.floating, np.complexfloating)) for m in (mu_X, mu_Y))
    if exact:
        return mu_X * norm_sq(space, Y) == mu_Y * norm_sq(space, X)
    tol = DEFAULT_TOL if tol is None else tol
    Xf, Yf = as_float(X), as_float(Y)
    lhs = complex(mu_X) * complex(inner(space, Yf, Yf))
    rhs = complex(mu_Y) * complex(inner(space, Xf, Xf))
    ny, nx = np.sum(np.abs(Yf) ** 2), np.sum(np.abs(Xf) ** 2)
    scale = abs(complex(mu_X)) * ny + abs(complex(mu_Y)) * nx + ref * nx * ny
    return abs(lhs - rhs) <= tol * max(scale, 1e-300)


# ------------------------------------------------- continuation and derivatives

@dataclass(frozen=True)
class ContinuedPair:
    eigenvalue: complex
    eigenvector: np.ndarray


def eigen_continuation(T: CurvatureTensor, X, eigenvalue, eigenvector, Y, tol: float = DEFAULT_TOL,
                       radius: float | None = None) -> ContinuedPair:
    """Eigenpair of ``R_Y`` continuing ``(eigenvalue, eigenvector)`` of ``R_X``.

    Picks the eigenvalue cluster nearest to ``eigenvalue`` and projects the
    old eigenvector onto its eigenspace.
    """
    Xf, Yf = as_float(X), as_float(Y)
    if radius is not None and np.linalg.norm(Yf - Xf) > radius:
        raise UsageError("Y lies outside the continuation radius")
    M = T.jacobi_float(Yf)
    clusters = eigen_clusters(M, tol)
    d = sorted((abs(c.eigenvalue - eigenvalue), i) for i, c in enumerate(clusters))
    if len(d) > 1 and d[0][0] > 0 and d[1][0] <= 2 * d[0][0]:
        raise ContinuationError("two eigenvalues are comparably near; use a smaller step")
    c = clusters[d[0][1]]
    e = np.asarray(as_float(eigenvector), dtype=c.basis.dtype if np.iscomplexobj(c.basis) else float)
    B = c.basis
    v = B @ (B.conj().T @ e)
    if np.linalg.norm(v) < 1e-3 * np.linalg.norm(e):
        k = int(np.argmax(np.abs(B.conj().T @ e)))
        v = B[:, k]
    v = v * (np.linalg.norm(e) / np.linalg.norm(v))
    lam = c.eigenvalue
    return ContinuedPair(lam.real if lam.imag == 0 else lam, v)


@dataclass
class DerivativeIdentityResult:
    verdict: str
    lhs: float = float("nan")          # 2 <R_e X, T>
    dlambda_h: float = float("nan")    # finite-difference (d lambda)(T) at step h
    dlambda_h2: float = float("nan")   # ... at step h/2
    r_h: float = float("nan")
    r_h2: float = float("nan")
    scale: float = float("nan")
    h: float = float("nan")

    @property
    def relative(self) -> float:
        return self.r_h / self.scale

    @property
    def ratio(self) -> float:
        return self.r_h2 / self.r_h if self.r_h > 0 else float("nan")


def _curve(X, Tu, W, s):
    return X + s * Tu + s * s * W


def _lambda_along(T, X, mu, e, Tu, W, s, tol):
    return eigen_continuation(T, X, mu, e, _curve(X, Tu, W, s), tol).eigenvalue


def derivative_identity_check(T: CurvatureTensor, X, mu, e, T_dir, h: float | None = None,
                              tol: float = DEFAULT_TOL) -> DerivativeIdentityResult:
    """Compare ``2 <R_e X, T>`` with ``(d lambda)_X(T) |e|^2``.

    ``(d lambda)(T)`` is a central difference along the curve
    ``X + sT + s^2 W`` with ``T`` Euclidean-unit and
    ``W = |<X,X>| G T / |X|^3`` (Euclidean ``|X|``).  Along straight lines the
    eigenvalue of an Osserman tensor is exactly quadratic and the central
    difference would carry no truncation error at all; the curvature term
    gives a genuine ``O(h^2)`` error so that halving the step shows the
    second-order decay ``r(h/2) / r(h) ~ 1/4``.
    """
    space = T.space
    Xf = as_float(X)
    Td = as_float(T_dir)
    xn = np.linalg.norm(Xf)
    if abs(inner(space, Xf, Td)) > 1e-9 * xn * np.linalg.norm(Td):
        raise UsageError("direction must be orthogonal to X")
    if is_exact_vector(e) and norm_sq(space, e) == 0 or not is_exact_vector(e) and _is_null_float(space, as_float(e), tol):
        return DerivativeIdentityResult(NOT_APPLICABLE)
    Tu = Td / np.linalg.norm(Td)
    W = np.asarray(space.eps) * Tu * abs(float(inner(space, Xf, Xf))) / xn ** 3
    h = h or 1e-4 * xn
    ef = as_float(e)
    e_sq = float(inner(space, ef, ef))
    Re = T.jacobi_float(ef)
    lhs = 2.0 * float(inner(space, Re @ Xf, Tu))

    def dlam(step):
        return (_lambda_along(T, Xf, mu, ef, Tu, W, step, tol) - _lambda_along(T, Xf, mu, ef, Tu, W, -step, tol)) / (2 * step)

    d1 = float(np.real(dlam(h)))
    d2 = float(np.real(dlam(h / 2)))
    r1 = abs(lhs - d1 * e_sq)
    r2 = abs(lhs - d2 * e_sq)
    scale = 2 * norm_inf(Re) * xn + 2 * abs(float(np.real(mu))) / xn * abs(e_sq)
    scale = scale or 1.0
    verdict = HOLDS if r1 <= 1e-6 * scale else VIOLATED
    return DerivativeIdentityResult(verdict, lhs, d1, d2, r1, r2, scale, h)


def radial_derivative(T: CurvatureTensor, X, mu, e, h: float | None = None, tol: float = DEFAULT_TOL) -> float:
    """Central-difference ``(d lambda)_X(X)``; equals ``2 mu`` by degree-2 homogeneity."""
    Xf = as_float(X)
    xn = np.linalg.norm(Xf)
    u = Xf / xn
    h = h or 1e-4 * xn
    ef = as_float(e)
    lp = eigen_continuation(T, Xf, mu, ef, Xf + h * u, tol).eigenvalue
    lm = eigen_continuation(T, Xf, mu, ef, Xf - h * u, tol).eigenvalue
    return float(np.real((lp - lm) / (2 * h))) * xn


# ------------------------------------------------------- minimal polynomial

@dataclass
class MinimalPolyResult:
    verdict: str
    vanishes: bool | None = None
    F: Poly | None = None
    p: int = 0
    note: str = ""


def minimal_poly_test(T: CurvatureTensor, X, certificate: OssermanCertificate | None) -> MinimalPolyResult:
    """Evaluate ``F_X(R_X)`` with ``F_X(t) = prod_k (t - mu_k |X|^2)`` over distinct roots of ``P(t, 1)``.

    ``F_X(t) = s^p S(t / s)`` with ``S`` the squarefree part of ``P(t, 1)`` and
    ``s = |X|^2``, so the test stays exact even when the roots are irrational.
    """
    if certificate is None:
        return MinimalPolyResult(NOT_APPLICABLE, note="tensor is not Osserman on samples")
    space = T.space
    X = vec(X)
    s = norm_sq(space, X)
    if s == 0:
        raise UsageError("minimal polynomial test needs a non-null X")
    S = squarefree_part(certificate.unit_polynomial())
    p = S.deg
    F = Poly([S.c[i] * s ** (p - i) for i in range(p + 1)])
    A = T.jacobi(X)
    vanishes = all(x == 0 for row in F.eval_matrix(A.matrix) for x in row)
    note = ("F_X(R_X) = 0 at this point; with the Osserman property this identity extends to every "
            "non-null X, so every Jacobi operator off the null cone is diagonalisable") if vanishes else \
        "F_X(R_X) != 0: the Jacobi operator at X is not diagonalisable"
    return MinimalPolyResult(HOLDS if vanishes else VIOLATED, vanishes, F, p, note)


# ------------------------------------------------------------------- report

@dataclass
class PropertyReport:
    params: CheckParams
    symmetries: object
    osserman: OssermanResult
    jordan_osserman: JordanOssermanResult
    semisimple: SemisimpleResult
    duality: DualityResult
    derivative: list
    minimal_poly: MinimalPolyResult | None
    inconsistencies: list

    @property
    def consistent(self) -> bool:
        return not self.inconsistencies

    def verdicts(self) -> dict:
        return {
            "osserman": self.osserman.verdict,
            "jordan-osserman": self.jordan_osserman.verdict,
            "semisimple": self.semisimple.verdict,
            "duality": self.duality.verdict,
        }


def _derivative_samples(T: CurvatureTensor, params: CheckParams) -> list:
    """Derivative checks at a few generic sampled points with real non-null eigenvectors."""
    space = T.space
    out = []
    Tf = T.to_float() if T.exact else T
    for cone, X in cone_samples(space, params.derivative_samples, params.seed, params.bound, 53):
        if T.exact and not classify_generic(T, X, count=params.generic_count, seed=params.seed).generic:
            continue
        Xf = as_float(X)
        clusters = [c for c in eigen_clusters(Tf.jacobi_float(Xf), params.tol) if c.eigenvalue.imag == 0]
        clusters.sort(key=lambda c: -abs(c.eigenvalue))
        rng = derived_rng(params.seed, 59, len(out))
        for c in clusters:
            e = next((np.real(c.basis[:, k]) for k in range(c.geometric)
                      if not _is_null_float(space, np.real(c.basis[:, k]), 1e-6)), None)
            if e is None:
                continue
            comp = orthogonal_complement_basis(space, Xf, FLOAT)
            Td = sum(rng.normal() * b for b in comp)
            try:
                res = derivative_identity_check(Tf, Xf, c.eigenvalue.real, e, Td, params.h_factor * np.linalg.norm(Xf),
                                                params.tol)
            except ContinuationError:
                continue
            out.append((X, c.eigenvalue.real, res))
            break
    return out


def full_report(T: CurvatureTensor, params: CheckParams = CheckParams()) -> PropertyReport:
    """Run every verifier and flag verdict combinations that cannot occur together."""
    sym = T.validate_symmetries(params.tol)
    if not sym.ok:
        from .curvature import SymmetryError

        raise SymmetryError(sym)
    dom = params.domain
    oss = is_osserman(T, params.samples, params.seed, domain=dom, pit_range=params.pit_range, tol=params.tol)
    jo = is_jordan_osserman(T, params.samples, params.seed, domain=dom, bound=params.bound, tol=params.tol,
                            osserman=oss)
    ss = is_semisimple(T, params.samples, params.seed, domain=dom, bound=params.bound,
                       generic_count=params.generic_count, tol=params.tol)
    du = duality_principle(T, params.samples, params.tol, params.seed, bound=params.bound, domain=dom)
    deriv = _derivative_samples(T, params)
    mp = None
    if oss.holds and dom == "exact":
        X = cone_samples(T.space, 1, params.seed, params.bound, 61)[0][1]
        mp = minimal_poly_test(T, X, oss.certificate)
    issues = []
    if jo.holds and not du.holds:
        issues.append("Jordan-Osserman on samples but duality violated (contradicts: Jordan-Osserman implies duality)")
    if ss.holds:
        if oss.holds and not du.holds:
            issues.append("semisimple and Osserman but duality violated (contradicts: semisimple Osserman "
                          "tensors satisfy duality)")
        if du.holds and not oss.holds:
            issues.append("semisimple with duality on samples but Osserman violated (contradicts the converse; "
                          "enlarge the duality sample)")
    for X, mu, res in deriv:
        if res.verdict == VIOLATED:
            issues.append(f"derivative identity residual {res.relative:.3e} at X={_fmt_vec(X)} exceeds 1e-6")
    return PropertyReport(params, sym, oss, jo, ss, du, deriv, mp, issues)


def _fmt_vec(X) -> str:
    return "(" + ",".join(str(x) for x in X) + ")"


__all__ = [
    "HOLDS", "VIOLATED", "NOT_APPLICABLE", "NO_EVIDENCE", "CheckParams", "OssermanCertificate",
    "OssermanResult", "OssermanWitness", "JordanOssermanResult", "SemisimpleResult", "PairResult",
    "DualityCheck", "DualityResult", "DerivativeIdentityResult", "MinimalPolyResult", "PropertyReport",
    "ContinuationError", "is_osserman", "is_jordan_osserman", "is_semisimple", "duality_check",
    "duality_principle", "reciprocity_check", "eigen_continuation", "derivative_identity_check",
    "radial_derivative", "minimal_poly_test", "full_report", "verify_duality_witness",
    "verify_osserman_witness", "reference_coefficients", "cone_samples",
]
