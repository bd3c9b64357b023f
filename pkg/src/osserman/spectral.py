"""Characteristic polynomials, eigenpairs and Jordan structure of square operators."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from gmpy2 import mpq

from .curvature import SquareOperator, norm_inf
from .poly import ZERO, Poly, gcd, real_root_count, squarefree_part
from .polymatrix import (
    JordanStructure,
    invariant_factors,
    jordan_structure_exact,
    structure_signature,
)
from .space import DEFAULT_TOL, UsageError

_U = np.finfo(float).eps


class SpectralError(RuntimeError):
    """The floating eigensolver failed or produced an inconsistent result."""


@dataclass(frozen=True)
class CharacteristicPolynomial:
    """``det(tI - A) = sum_j f_j t^j`` with ``f_n = 1``."""

    poly: Poly

    @property
    def coefficients(self) -> tuple[mpq, ...]:
        return self.poly.c

    def f(self, j: int) -> mpq:
        return self.poly.c[j] if j < len(self.poly.c) else ZERO

    @property
    def degree(self) -> int:
        return self.poly.deg


def char_poly(A: SquareOperator) -> CharacteristicPolynomial:
    """Berkowitz's division-free algorithm; exact."""
    if not A.exact:
        raise UsageError("char_poly needs an exact operator")
    M = A.matrix
    n = len(M)
    # coefficients highest degree first
    vect = [mpq(1), -M[0][0]]
    for r in range(1, n):
        R = M[r][:r]
        a = M[r][r]
        v = [M[i][r] for i in range(r)]
        col = [mpq(1), -a]
        for _ in range(r):
            col.append(-sum((x * y for x, y in zip(R, v)), ZERO))
            v = [sum((M[i][j] * v[j] for j in range(r)), ZERO) for i in range(r)]
        vect = [sum((col[i - j] * vect[j] for j in range(max(0, i - r - 1), min(i, r) + 1)), ZERO)
                for i in range(r + 2)]
    return CharacteristicPolynomial(Poly(reversed(vect)))


@dataclass(frozen=True)
class EigenPair:
    eigenvalue: complex
    eigenvector: np.ndarray
    residual: float  # ||A v - lambda v|| / (||A|| ||v||)
    multiplicity: int = 1  # geometric multiplicity of the cluster this vector belongs to

    @property
    def is_real(self) -> bool:
        return abs(complex(self.eigenvalue).imag) == 0.0


@dataclass(frozen=True)
class EigenCluster:
    eigenvalue: complex
    algebraic: int
    basis: np.ndarray  # columns span the eigenspace
    residual: float

    @property
    def geometric(self) -> int:
        return self.basis.shape[1]


def _cluster_values(vals: np.ndarray, threshold: float) -> list[list[int]]:
    """Single-linkage groups of indices at the given distance threshold."""
    n = len(vals)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(vals[i] - vals[j]) <= threshold:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: (vals[g].real.mean(), vals[g].imag.mean()))


def _null_space(M: np.ndarray, threshold: float) -> np.ndarray:
    _, s, vh = np.linalg.svd(M)
    rank = int(np.sum(s > threshold))
    return vh[rank:].conj().T


def _as_float(A) -> np.ndarray:
    return A.to_float() if isinstance(A, SquareOperator) else np.asarray(A)


def eigen_clusters(A, tol: float = DEFAULT_TOL) -> list[EigenCluster]:
    """Eigenvalues merged when within ``tol * ||A||``, each with an eigenspace basis."""
    M = _as_float(A)
    n = M.shape[0]
    scale = norm_inf(M)
    if scale == 0.0:
        return [EigenCluster(0.0, n, np.eye(n), 0.0)]
    try:
        vals = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise SpectralError(f"eigensolver failed: {exc}") from exc
    if not np.all(np.isfinite(vals)):
        raise SpectralError("eigensolver returned non-finite eigenvalues")
    real_input = not np.iscomplexobj(M)
    out = []
    for g in _cluster_values(vals, tol * scale):
        lam = complex(vals[g].mean())
        if abs(lam.imag) <= tol * scale:
            lam = complex(lam.real, 0.0)
        if real_input and lam.imag == 0.0:
            shifted = M - lam.real * np.eye(n)
        else:
            shifted = M - lam * np.eye(n)
        basis = _null_space(shifted, max(tol, 1e3 * _U) * scale * np.sqrt(n))
        if basis.shape[1] == 0:
            # numerically defective cluster: best approximate null vector
            basis = np.linalg.svd(shifted)[2][-1:].conj().T
        res = float(np.linalg.norm(shifted @ basis, ord=2) / scale)
        out.append(EigenCluster(lam, len(g), basis, res))
    return out


def eigen_decomposition(A, tol: float = DEFAULT_TOL) -> list[EigenPair]:
    """Eigenpairs over C; one pair per basis vector of each clustered eigenspace."""
    pairs = []
    for c in eigen_clusters(A, tol):
        for k in range(c.geometric):
            v = c.basis[:, k]
            v = v / np.linalg.norm(v)
            M = _as_float(A)
            scale = norm_inf(M) or 1.0
            res = float(np.linalg.norm(M @ v - c.eigenvalue * v) / scale)
            pairs.append(EigenPair(c.eigenvalue if c.eigenvalue.imag else c.eigenvalue.real, v, res, c.geometric))
    return pairs


def _spread(m: int, scale: float) -> float:
    """Plausible eigenvalue splitting of an m x m Jordan chain under rounding."""
    return (1e6 * _U * max(scale, 1.0)) ** (1.0 / m)


def _jordan_clusters(vals: np.ndarray, tol: float, scale: float) -> list[list[int]]:
    """Group eigenvalues that plausibly come from one perturbed Jordan chain.

    A connected component is accepted when its diameter fits the splitting
    expected for its size, and split at the next tighter threshold otherwise.
    """
    out = []
    stack = [list(range(len(vals)))]
    while stack:
        idx = stack.pop()
        m = len(idx)
        diam = max((abs(vals[i] - vals[j]) for i in idx for j in idx), default=0.0)
        if m == 1 or diam <= max(tol * scale, _spread(m, scale)):
            out.append(idx)
            continue
        for size in range(m - 1, 0, -1):
            parts = _cluster_values(vals[idx], max(tol * scale, _spread(size, scale)))
            if len(parts) > 1:
                break
        else:
            out.append(idx)
            continue
        stack.extend([[idx[i] for i in p] for p in parts])
    return sorted(out, key=lambda g: (vals[g].real.mean(), vals[g].imag.mean()))


def jordan_structure_numeric(A, tol: float = 1e-8) -> JordanStructure:
    """Jordan block sizes from the kernel dimensions of powers of ``A - lam I``.

    With ``r_k = rank((A - lam I)^k)`` the number of blocks of size >= k is
    ``r_{k-1} - r_k``.  The nullities are computed through the nested kernels
    ``ker B^k = {v : B v in ker B^(k-1)}`` so that every singular-value
    decision is made at the scale of ``B`` rather than ``B^k``.  A singular
    value within a factor 10 of the threshold marks the result unreliable.
    """
    M = _as_float(A).astype(complex)
    n = M.shape[0]
    scale = norm_inf(M)
    if scale == 0.0:
        return JordanStructure(((0.0, (1,) * n),), real_eigenvalues=1)
    vals = np.linalg.eigvals(M)
    thr = tol * scale
    unreliable = False
    entries = []
    for g in _jordan_clusters(vals, tol, scale):
        m = len(g)
        lam = complex(vals[g].mean())
        if abs(lam.imag) <= max(thr, _spread(m, scale)):
            lam = complex(lam.real, 0.0)
        B = M - lam * np.eye(n)
        Q = np.zeros((n, 0), dtype=complex)
        nullity = [0]
        for _ in range(m):
            C = B - Q @ (Q.conj().T @ B)
            _, s, vh = np.linalg.svd(C)
            unreliable |= bool(np.any((s > thr / 10) & (s < thr * 10)))
            rank = int(np.sum(s > thr))
            Q = vh[rank:].conj().T
            nullity.append(n - rank)
            if nullity[-1] == nullity[-2]:
                break
        nullity += [nullity[-1]] * (m + 2 - len(nullity))
        at_least = [nullity[k] - nullity[k - 1] for k in range(1, m + 2)]
        blocks = []
        for k in range(1, m + 1):
            blocks += [k] * (at_least[k - 1] - at_least[k])
        if sum(blocks) != m:
            unreliable = True
        entries.append((lam, tuple(sorted(blocks, reverse=True))))
    real = sum(1 for lam, _ in entries if lam.imag == 0.0)
    return JordanStructure(tuple(entries), unreliable=unreliable, real_eigenvalues=real)


def exact_null_space(rows) -> list[tuple]:
    """Basis of the right kernel of a rational matrix by reduced row echelon form."""
    M = [list(r) for r in rows]
    nrows = len(M)
    ncols = len(M[0]) if M else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(nrows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [ZERO] * ncols
        v[fcol] = mpq(1)
        for i, pc in enumerate(pivots):
            v[pc] = -M[i][fcol]
        basis.append(tuple(v))
    return basis


def exact_eigenspace(A: SquareOperator, mu) -> list[tuple]:
    n = A.n
    return exact_null_space([[A.matrix[i][j] - (mu if i == j else 0) for j in range(n)] for i in range(n)])


def minimal_polynomial(A: SquareOperator) -> Poly:
    """Largest invariant factor, verified by substitution ``m(A) = 0``."""
    m = invariant_factors(A).minimal_polynomial
    if any(x != 0 for row in m.eval_matrix(A.matrix) for x in row):
        raise ArithmeticError("minimal polynomial does not annihilate the operator")
    return m


def is_diagonalisable(A: SquareOperator, field: str | None = None) -> bool:
    """Exact test: minimal polynomial squarefree, and over R all its roots real."""
    field = field or A.space.field
    m = invariant_factors(A).minimal_polynomial
    if gcd(m, m.derivative()).deg > 0:
        return False
    if field == "real":
        return real_root_count(m) == m.deg
    return True


def same_jordan_type(A: SquareOperator, B: SquareOperator) -> bool:
    return structure_signature(jordan_structure_exact(A)) == structure_signature(jordan_structure_exact(B))


def power(A: SquareOperator, k: int) -> SquareOperator:
    out = A
    for _ in range(k - 1):
        out = out.compose(A)
    return out


__all__ = [
    "CharacteristicPolynomial", "EigenPair", "EigenCluster", "SpectralError", "char_poly",
    "eigen_clusters", "eigen_decomposition", "jordan_structure_numeric", "jordan_structure_exact",
    "minimal_polynomial", "is_diagonalisable", "power", "squarefree_part", "exact_null_space",
    "exact_eigenspace",
]
