"""Algebraic curvature tensors and their Jacobi operators.

Component convention: ``R[i, j, k, l] = <R(e_i, e_j) e_k, e_l>``.  With it,
``R(X, Y)Z`` has coordinates ``W^m = eps_m * sum x_i y_j z_k R[i, j, k, m]``
and the Jacobi operator ``R_X Y = R(Y, X)X`` has matrix entries
``(R_X)[m, a] = eps_m * sum_{j,k} R[a, j, k, m] x_j x_k``.

The space of algebraic curvature tensors has dimension ``n^2 (n^2 - 1) / 12``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from gmpy2 import mpq

from .poly import ZERO, Q, _matmul
from .space import PseudoEuclideanSpace, UsageError, as_float, is_exact_vector, vec

CONVENTION = "R_ijkl = <R(e_i,e_j)e_k, e_l>"


def act_dimension(n: int) -> int:
    return n * n * (n * n - 1) // 12


def canonical_quadruples(n: int):
    """Orbit representatives under antisymmetry and pair symmetry: i<j, k<l, (i,j) <= (k,l)."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for a, (i, j) in enumerate(pairs):
        for k, l in pairs[a:]:
            yield (i, j, k, l)


def orbit(i, j, k, l):
    """Images of R_ijkl under antisymmetry and pair symmetry, with signs."""
    for (a, b, c, d), s in (((i, j, k, l), 1), ((j, i, k, l), -1), ((i, j, l, k), -1), ((j, i, l, k), 1)):
        yield (a, b, c, d), s
        yield (c, d, a, b), s


@dataclass(frozen=True)
class Violation:
    family: str  # "antisymmetry" | "pair-symmetry" | "bianchi"
    index: tuple[int, int, int, int]  # 0-based
    defect: object

    def __str__(self) -> str:
        i, j, k, l = (x + 1 for x in self.index)
        return f"{self.family} at ({i},{j},{k},{l}): defect {self.defect}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


class SymmetryError(UsageError):
    def __init__(self, report: ValidationReport):
        self.report = report
        lines = [str(v) for v in report.violations[:5]]
        more = len(report.violations) - len(lines)
        super().__init__("tensor violates curvature symmetries: " + "; ".join(lines)
                         + (f" (+{more} more)" if more > 0 else ""))


@dataclass(frozen=True)
class SquareOperator:
    """An n x n operator in coordinates; exact (tuple of tuples of mpq) or floating (ndarray)."""

    space: PseudoEuclideanSpace
    matrix: object

    @property
    def exact(self) -> bool:
        return isinstance(self.matrix, tuple)

    @property
    def n(self) -> int:
        return self.space.n

    def rows(self) -> list[list]:
        """Mutable nested-list copy of an exact matrix."""
        return [list(r) for r in self.matrix]

    def to_float(self) -> np.ndarray:
        if self.exact:
            return np.array([[float(x) for x in r] for r in self.matrix])
        return np.asarray(self.matrix)

    def __matmul__(self, v):
        if self.exact and is_exact_vector(v):
            return tuple(sum((a * x for a, x in zip(r, v)), ZERO) for r in self.matrix)
        return self.to_float() @ np.asarray(v if not is_exact_vector(v) else as_float(v))

    def compose(self, other: "SquareOperator") -> "SquareOperator":
        if self.exact and other.exact:
            return SquareOperator(self.space, _freeze(_matmul(self.matrix, other.matrix)))
        return SquareOperator(self.space, self.to_float() @ other.to_float())

    def is_zero(self) -> bool:
        if self.exact:
            return all(x == 0 for r in self.matrix for x in r)
        return not np.any(self.to_float())

    def is_metric_self_adjoint(self, tol: float = 0.0) -> bool:
        """``G A`` symmetric, i.e. ``<A Y, Z> = <Y, A Z>``."""
        eps = self.space.eps
        if self.exact:
            M = self.matrix
            return all(eps[i] * M[i][j] == eps[j] * M[j][i] for i in range(self.n) for j in range(i))
        GA = np.diag(eps) @ self.to_float()
        return bool(np.max(np.abs(GA - GA.T), initial=0.0) <= tol * max(1.0, norm_inf(GA)))

    def scale(self) -> float:
        return norm_inf(self.to_float())


def _freeze(rows) -> tuple:
    return tuple(tuple(r) for r in rows)


def norm_inf(M) -> float:
    """Max-row-sum norm."""
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(M), axis=1)))


def identity(n: int) -> list[list[mpq]]:
    return [[mpq(1) if i == j else ZERO for j in range(n)] for i in range(n)]


class CurvatureTensor:
    """Covariant components ``R[i][j][k][l]`` of an algebraic curvature tensor.

    The dense array is kept so that user-supplied tensors can be validated
    component by component; generated tensors satisfy the symmetries by
    construction.
    """

    def __init__(self, space: PseudoEuclideanSpace, components, exact: bool | None = None):
        self.space = space
        n = space.n
        arr = np.asarray(components, dtype=object)
        if arr.shape != (n, n, n, n):
            raise UsageError(f"components have shape {arr.shape}, expected {(n,) * 4}")
        if exact is None:
            exact = not any(isinstance(x, (float, np.floating)) for x in arr.flat)
        self.exact = exact
        if exact:
            self.R = np.empty((n,) * 4, dtype=object)
            for idx in itertools.product(range(n), repeat=4):
                self.R[idx] = Q(arr[idx])
        else:
            self.R = np.array(arr, dtype=float)

    @classmethod
    def zero(cls, space: PseudoEuclideanSpace) -> "CurvatureTensor":
        n = space.n
        return cls(space, np.full((n,) * 4, ZERO, dtype=object))

    @classmethod
    def from_canonical(cls, space: PseudoEuclideanSpace, values: dict) -> "CurvatureTensor":
        """Expand orbit representatives ``{(i,j,k,l): value}`` (0-based) by antisymmetry and pair symmetry."""
        n = space.n
        R = np.full((n,) * 4, ZERO, dtype=object)
        for (i, j, k, l), v in values.items():
            for idx, s in orbit(i, j, k, l):
                R[idx] = s * Q(v)
        return cls(space, R)

    def canonical_components(self) -> dict:
        out = {}
        for q in canonical_quadruples(self.space.n):
            v = self.R[q]
            if v != 0:
                out[q] = v
        return out

    def __add__(self, other: "CurvatureTensor") -> "CurvatureTensor":
        return CurvatureTensor(self.space, self.R + other.R, exact=self.exact and other.exact)

    def __rmul__(self, c) -> "CurvatureTensor":
        c = Q(c) if self.exact else float(c)
        return CurvatureTensor(self.space, self.R * c, exact=self.exact)

    def __eq__(self, other) -> bool:
        return (isinstance(other, CurvatureTensor) and self.space == other.space
                and bool(np.all(self.R == other.R)))

    __hash__ = None

    def to_float(self) -> "CurvatureTensor":
        return CurvatureTensor(self.space, self.float_array, exact=False)

    @cached_property
    def float_array(self) -> np.ndarray:
        return np.vectorize(float, otypes=[float])(self.R) if self.exact else self.R

    @cached_property
    def _nonzero(self) -> list:
        return [(idx, v) for idx, v in np.ndenumerate(self.R) if v != 0]

    def is_zero(self) -> bool:
        return not self._nonzero

    def validate_symmetries(self, tol: float = 1e-9) -> ValidationReport:
        """Check antisymmetry, pair symmetry and the first Bianchi identity on every quadruple."""
        R = self.R
        n = self.space.n
        if self.exact:
            bad = lambda d: d != 0  # noqa: E731
        else:
            thresh = tol * max(1.0, float(np.max(np.abs(R), initial=0.0)))
            bad = lambda d: abs(d) > thresh  # noqa: E731
        out = []
        seen_bianchi = set()
        for i, j, k, l in itertools.product(range(n), repeat=4):
            if i <= j:
                d = R[i, j, k, l] + R[j, i, k, l]
                if bad(d):
                    out.append(Violation("antisymmetry", (i, j, k, l), d))
            if (i, j) < (k, l):
                d = R[i, j, k, l] - R[k, l, i, j]
                if bad(d):
                    out.append(Violation("pair-symmetry", (i, j, k, l), d))
            # the cyclic sum is invariant under rotating (i, j, k)
            key = (min((i, j, k), (j, k, i), (k, i, j)), l)
            if key not in seen_bianchi:
                seen_bianchi.add(key)
                d = R[i, j, k, l] + R[j, k, i, l] + R[k, i, j, l]
                if bad(d):
                    out.append(Violation("bianchi", key[0] + (l,), d))
        return ValidationReport(tuple(out))

    def require_valid(self) -> "CurvatureTensor":
        rep = self.validate_symmetries()
        if not rep.ok:
            raise SymmetryError(rep)
        return self

    def apply(self, X, Y, Z):
        """``R(X, Y)Z`` as a vector."""
        self.space._check(X, Y, Z)
        eps = self.space.eps
        n = self.space.n
        if self.exact and all(is_exact_vector(v) for v in (X, Y, Z)):
            W = [ZERO] * n
            for (i, j, k, m), v in self._nonzero:
                c = X[i] * Y[j] * Z[k]
                if c:
                    W[m] += c * v
            return tuple(w if e > 0 else -w for e, w in zip(eps, W))
        W = np.einsum("ijkm,i,j,k->m", self.float_array, np.asarray(_f(X)), np.asarray(_f(Y)), np.asarray(_f(Z)))
        return np.asarray(eps) * W

    def jacobi(self, X) -> SquareOperator:
        """Jacobi operator ``Y -> R(Y, X)X``."""
        self.space._check(X)
        n = self.space.n
        eps = self.space.eps
        if self.exact and is_exact_vector(X):
            M = [[ZERO] * n for _ in range(n)]
            for (a, j, k, m), v in self._nonzero:
                c = X[j] * X[k]
                if c:
                    M[m][a] += c * v
            for m in range(n):
                if eps[m] < 0:
                    M[m] = [-x for x in M[m]]
            return SquareOperator(self.space, _freeze(M))
        Xf = np.asarray(_f(X))
        M = np.einsum("ajkm,j,k->ma", self.float_array, Xf, Xf)
        return SquareOperator(self.space, np.asarray(eps)[:, None] * M)

    def jacobi_float(self, X) -> np.ndarray:
        Xf = np.asarray(_f(X))
        M = np.einsum("ajkm,j,k->ma", self.float_array, Xf, Xf)
        return np.asarray(self.space.eps)[:, None] * M

    def __repr__(self) -> str:
        kind = "exact" if self.exact else "float"
        return f"CurvatureTensor({self.space.signature}, {kind}, {len(self._nonzero)} nonzero)"


def _f(X):
    return as_float(X) if is_exact_vector(X) else X


def covariant_bilinear(space: PseudoEuclideanSpace, T: CurvatureTensor, X, Y, Z, V):
    """``<R(X, Y)Z, V>``."""
    from .space import inner

    return inner(space, T.apply(X, Y, Z), V)


__all__ = [
    "CONVENTION", "CurvatureTensor", "SquareOperator", "ValidationReport", "Violation",
    "SymmetryError", "act_dimension", "canonical_quadruples", "identity", "norm_inf", "vec",
]
