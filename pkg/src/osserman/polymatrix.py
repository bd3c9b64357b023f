"""Exact canonical forms of ``tI - A`` over Q[t].

Invariant factors come from Smith elimination over the Euclidean ring
Q[t]; the determinantal-divisor definition (gcd of all k x k minors) is
kept as :func:`invariant_factors_by_minors` for cross-checking small
matrices.  Jordan data is read off the invariant factors without
factoring over Q: squarefree decompositions plus a coprime base suffice,
since a squarefree rational polynomial has distinct complex roots.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from gmpy2 import mpq

from .curvature import CurvatureTensor, SquareOperator
from .poly import (
    Poly,
    coprime_base,
    gcd,
    gcd_many,
    rational_roots,
    real_root_count,
    squarefree_decomposition,
)
from .space import UsageError, derived_rng

UnivariatePolynomial = Poly

__all__ = [
    "UnivariatePolynomial", "InvariantFactors", "JordanStructure", "GenericityResult",
    "char_matrix", "smith_diagonal", "invariant_factors", "invariant_factors_by_minors",
    "elementary_divisor_pattern", "jordan_structure_exact", "structure_signature",
    "classify_generic", "real_root_count",
]


@dataclass(frozen=True)
class InvariantFactors:
    """Monic invariant factors of ``tI - A``, in divisibility order (first divides second ...)."""

    factors: tuple[Poly, ...]

    def __post_init__(self):
        for a, b in zip(self.factors, self.factors[1:]):
            if not a.divides(b):
                raise UsageError(f"invariant factor chain broken: {a} does not divide {b}")

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)

    def __getitem__(self, k):
        return self.factors[k]

    def product(self) -> Poly:
        out = Poly((1,))
        for f in self.factors:
            out = out * f
        return out

    @property
    def minimal_polynomial(self) -> Poly:
        return self.factors[-1]

    def determinantal_divisors(self) -> list[Poly]:
        """``D_k = gcd`` of the k x k minors, equal to the product of the first k factors."""
        out, acc = [], Poly((1,))
        for f in self.factors:
            acc = acc * f
            out.append(acc)
        return out


@dataclass(frozen=True)
class JordanStructure:
    """Jordan block sizes per distinct complex eigenvalue.

    ``entries`` pairs an eigenvalue descriptor with its block sizes (sorted,
    largest first).  Exact descriptors are ``(factor, root_index)`` with
    ``factor`` a squarefree monic rational polynomial; numeric descriptors
    are complex numbers.
    """

    entries: tuple[tuple[object, tuple[int, ...]], ...]
    unreliable: bool = False
    real_eigenvalues: int | None = None  # distinct real eigenvalues, when known

    @property
    def p(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return sum(sum(b) for _, b in self.entries)

    def signature(self):
        return structure_signature(self)

    def by_value(self) -> dict:
        """Map eigenvalue -> block sizes; exact linear factors become their rational root."""
        out = {}
        for d, blocks in self.entries:
            if isinstance(d, tuple) and d[0].deg == 1:
                out[-d[0].c[0]] = blocks
            else:
                out[d] = blocks
        return out

    def is_semisimple(self) -> bool:
        return all(max(b) == 1 for _, b in self.entries)

    def __str__(self) -> str:
        parts = []
        for d, blocks in self.entries:
            if isinstance(d, tuple):
                f, i = d
                label = str(-f.c[0]) if f.deg == 1 else f"root{i}({f})"
            else:
                label = f"{d:.6g}"
            parts.append(f"{label}:{list(blocks)}")
        return "{" + ", ".join(parts) + f"}}, p={self.p}"


def structure_signature(js: JordanStructure) -> tuple:
    """Eigenvalue-anonymous key: sorted block-size multisets plus the eigenvalue count."""
    return (tuple(sorted(tuple(sorted(b, reverse=True)) for _, b in js.entries)), js.p)


def char_matrix(A: SquareOperator) -> list[list[Poly]]:
    """``tI - A`` as a matrix over Q[t]."""
    if not A.exact:
        raise UsageError("exact canonical forms need an exact operator")
    n = A.n
    return [[Poly((-A.matrix[i][j], 1 if i == j else 0)) for j in range(n)] for i in range(n)]


def smith_diagonal(M: list[list[Poly]]) -> list[Poly]:
    """Diagonal of the Smith form of a square polynomial matrix (monic; zeros kept as zero)."""
    M = [list(r) for r in M]
    n = len(M)
    diag: list[Poly] = []
    for k in range(n):
        while True:
            best = None
            for i in range(k, n):
                for j in range(k, n):
                    e = M[i][j]
                    if e and (best is None or e.deg < best[0]):
                        best = (e.deg, i, j)
                        if e.deg == 0:
                            break
                if best is not None and best[0] == 0:
                    break
            if best is None:
                diag.extend([Poly()] * (n - k))
                return diag
            _, i0, j0 = best
            M[k], M[i0] = M[i0], M[k]
            for r in M:
                r[k], r[j0] = r[j0], r[k]
            piv = M[k][k]
            clean = True
            for i in range(k + 1, n):
                if M[i][k]:
                    q, rem = divmod(M[i][k], piv)
                    if q:
                        Mi, Mk = M[i], M[k]
                        for j in range(k, n):
                            if Mk[j]:
                                Mi[j] = Mi[j] - q * Mk[j]
                    clean &= not rem
            for j in range(k + 1, n):
                if M[k][j]:
                    q, rem = divmod(M[k][j], piv)
                    if q:
                        for i in range(k, n):
                            if M[i][k]:
                                M[i][j] = M[i][j] - q * M[i][k]
                    clean &= not rem
            if not clean:
                continue
            bad = next(((i, j) for i in range(k + 1, n) for j in range(k + 1, n)
                        if M[i][j] and M[i][j] % piv), None)
            if bad is None:
                diag.append(piv.monic())
                break
            i = bad[0]
            M[k] = [a + b for a, b in zip(M[k], M[i])]
    return diag


def invariant_factors(A: SquareOperator) -> InvariantFactors:
    return InvariantFactors(tuple(smith_diagonal(char_matrix(A))))


def _poly_det(M: list[list[Poly]]) -> Poly:
    """Determinant by cofactor expansion along the first row (small matrices only)."""
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    out = Poly()
    for j in range(n):
        if not M[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _poly_det(minor)
        out = out + term if j % 2 == 0 else out - term
    return out


def invariant_factors_by_minors(A: SquareOperator) -> InvariantFactors:
    """Oracle: ``D_k`` = gcd of all k x k minors of ``tI - A``; factors ``D_k / D_{k-1}``."""
    M = char_matrix(A)
    n = len(M)
    prev = Poly((1,))
    out = []
    for k in range(1, n + 1):
        minors = (
            _poly_det([[M[i][j] for j in cols] for i in rows])
            for rows in itertools.combinations(range(n), k)
            for cols in itertools.combinations(range(n), k)
        )
        D = gcd_many(minors)
        out.append(D.exact_div(prev).monic())
        prev = D
    return InvariantFactors(tuple(out))


@dataclass(frozen=True)
class PatternEntry:
    quotient_index: int  # k, 1-based
    exponent: int        # e: block size contributed by each root
    factor: Poly         # squarefree S_{k,e}

    @property
    def degree(self) -> int:
        return self.factor.deg


def elementary_divisor_pattern(inv: InvariantFactors) -> list[PatternEntry]:
    """Squarefree decomposition of each quotient ``D_k / D_{k-1}`` of determinantal divisors.

    Every root of ``S_{k,e}`` carries one Jordan block of size ``e``.
    """
    if not isinstance(inv, InvariantFactors):
        inv = InvariantFactors(tuple(inv))
    D = inv.determinantal_divisors()
    out = []
    prev = Poly((1,))
    for k, Dk in enumerate(D, start=1):
        quotient = Dk.exact_div(prev)
        prev = Dk
        if quotient.deg <= 0:
            continue
        for e, S in sorted(squarefree_decomposition(quotient).items()):
            out.append(PatternEntry(k, e, S))
    return out


def _split_rational(base: list[Poly]) -> list[Poly]:
    """Peel rational roots off each base factor so that they get linear descriptors."""
    out = []
    for b in base:
        for r in rational_roots(b):
            lin = Poly((-r, 1))
            out.append(lin)
            b = b.exact_div(lin)
        if b.deg > 0:
            out.append(b.monic())
    return out


def jordan_structure_from_factors(inv: InvariantFactors, field: str = "complex") -> JordanStructure:
    pattern = elementary_divisor_pattern(inv)
    base = _split_rational(coprime_base([pe.factor for pe in pattern]))
    entries = []
    real = 0
    for b in base:
        blocks = []
        for pe in pattern:
            if gcd(b, pe.factor).deg > 0:
                # b is a factor of exactly one S_{k,e} per k since the S_{k,e} are coprime
                blocks.append(pe.exponent)
        blocks = tuple(sorted(blocks, reverse=True))
        for r in range(b.deg):
            entries.append(((b, r), blocks))
        real += real_root_count(b)
    return JordanStructure(tuple(entries), real_eigenvalues=real)


def jordan_structure_exact(A: SquareOperator) -> JordanStructure:
    return jordan_structure_from_factors(invariant_factors(A))


@dataclass
class GenericityResult:
    generic: bool  # False only with a witness
    signature: tuple
    samples: int
    witness: tuple | None = None
    witness_signature: tuple | None = None

    @property
    def verdict(self) -> str:
        return "generic-evidence" if self.generic else "non-generic-witness"


def classify_generic(
    T: CurvatureTensor,
    X,
    count: int = 8,
    radius=mpq(1, 100),
    seed: int = 0,
) -> GenericityResult:
    """Compare the Jordan type of ``R_X`` with that at ``count`` rational perturbations.

    Perturbation coordinates are ``k / 1000`` with ``|k| <= radius * 1000``.
    A mismatch is a certain witness of non-genericity; agreement is evidence.
    """
    X = tuple(mpq(x) for x in X)
    key = structure_signature(jordan_structure_exact(T.jacobi(X)))
    m = max(1, int(mpq(radius) * 1000))
    for s in range(count):
        rng = derived_rng(seed, 7919, s)
        delta = rng.integers(-m, m + 1, size=len(X))
        Y = tuple(x + mpq(int(d), 1000) for x, d in zip(X, delta))
        other = structure_signature(jordan_structure_exact(T.jacobi(Y)))
        if other != key:
            return GenericityResult(False, key, s + 1, Y, other)
    return GenericityResult(True, key, count)
