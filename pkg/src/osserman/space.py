"""Pseudo-Euclidean spaces: signature, inner product, null tests, sampling."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np
from gmpy2 import mpq

from .poly import Q, ZERO

DEFAULT_TOL = 1e-9

Vector = tuple  # coordinates as a tuple of mpq (exact) or a numpy array (floating)


class UsageError(ValueError):
    """Caller supplied arguments that violate an operation's contract."""


class SamplingError(RuntimeError):
    """Rejection sampling could not satisfy the requested cone."""


@dataclass(frozen=True)
class ScalarDomain:
    kind: str = "exact"  # "exact" | "float"
    tolerance: float = DEFAULT_TOL

    def __post_init__(self):
        if self.kind not in ("exact", "float"):
            raise UsageError(f"unknown scalar domain {self.kind!r}")
        if self.tolerance < 0:
            raise UsageError("tolerance must be nonnegative")

    @property
    def exact(self) -> bool:
        return self.kind == "exact"

    def is_zero(self, x, scale: float = 1.0) -> bool:
        if self.exact:
            return x == 0
        return abs(x) <= self.tolerance * scale


EXACT = ScalarDomain("exact")
FLOAT = ScalarDomain("float")


@dataclass(frozen=True)
class PseudoEuclideanSpace:
    p: int
    q: int
    field: str = "real"  # "real" | "complex"
    eps: tuple[int, ...] = dc_field(init=False, repr=False)

    def __post_init__(self):
        if self.p < 0 or self.q < 0 or self.p + self.q < 2:
            raise UsageError(f"signature ({self.p},{self.q}) needs p, q >= 0 and n >= 2")
        if self.field not in ("real", "complex"):
            raise UsageError(f"unknown field {self.field!r}")
        object.__setattr__(self, "eps", (1,) * self.p + (-1,) * self.q)

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def signature(self) -> tuple[int, int]:
        return (self.p, self.q)

    @property
    def definite(self) -> bool:
        return self.q == 0 or self.p == 0

    def gram(self) -> np.ndarray:
        return np.diag(np.array(self.eps, dtype=float))

    def admissible_cones(self) -> list[str]:
        """Cones containing non-null real vectors."""
        cones = []
        if self.p:
            cones.append("spacelike")
        if self.q:
            cones.append("timelike")
        return cones

    def _check(self, *vs):
        for v in vs:
            if len(v) != self.n:
                raise UsageError(f"vector of length {len(v)} in a space of dimension {self.n}")


def vec(coords: Sequence) -> tuple:
    """Exact vector from ints, Fractions, mpq or rational strings."""
    return tuple(Q(c) for c in coords)


def is_exact_vector(v) -> bool:
    return isinstance(v, tuple)


def inner(space: PseudoEuclideanSpace, X, Y):
    space._check(X, Y)
    if is_exact_vector(X) and is_exact_vector(Y):
        acc = ZERO
        for e, x, y in zip(space.eps, X, Y):
            if e > 0:
                acc += x * y
            else:
                acc -= x * y
        return acc
    # bilinear, not sesquilinear: the complex extension of the form
    return np.sum(np.asarray(space.eps) * np.asarray(X) * np.asarray(Y))


def norm_sq(space: PseudoEuclideanSpace, X):
    return inner(space, X, X)


def as_float(X) -> np.ndarray:
    if is_exact_vector(X):
        return np.array([float(x) for x in X])
    return np.asarray(X)


def euclid_norm(X) -> float:
    return float(np.linalg.norm(as_float(X)))


def is_null(space: PseudoEuclideanSpace, X, domain: ScalarDomain = EXACT) -> bool:
    s = norm_sq(space, X)
    if domain.exact and is_exact_vector(X):
        return s == 0
    scale = euclid_norm(X) ** 2
    return abs(s) <= domain.tolerance * scale


def orthogonal_complement_basis(space: PseudoEuclideanSpace, X, domain: ScalarDomain = EXACT) -> list:
    """Basis of the metric orthogonal complement of a non-null ``X``.

    The complement is the kernel of the covector ``G X``; with pivot the
    largest coordinate ``a`` of that covector the basis is
    ``e_j - (c_j / c_a) e_a`` for ``j != a``.
    """
    space._check(X)
    if is_null(space, X, domain):
        raise UsageError("orthogonal complement requested for a null vector")
    n = space.n
    if domain.exact:
        X = vec(X)
        cov = [e * x for e, x in zip(space.eps, X)]
        a = max(range(n), key=lambda i: abs(cov[i]))
        basis = []
        for j in range(n):
            if j == a:
                continue
            b = [ZERO] * n
            b[j] = mpq(1)
            b[a] = -cov[j] / cov[a]
            basis.append(tuple(b))
        return basis
    Xf = np.asarray(X, dtype=float)
    cov = np.asarray(space.eps) * Xf
    # orthonormal (Euclidean) basis of ker(cov) from the SVD
    _, _, vt = np.linalg.svd(cov[None, :])
    return [vt[i] for i in range(1, n)]


def sample_vector(
    space: PseudoEuclideanSpace,
    rng: np.random.Generator | int,
    bound: int = 10,
    require_non_null: bool = True,
    cone: str = "any",
    max_tries: int = 1000,
) -> tuple:
    """Random exact integer vector with coordinates uniform in ``[-bound, bound]``.

    ``cone`` is ``"any"``, ``"spacelike"`` (norm squared > 0) or
    ``"timelike"`` (norm squared < 0); rejection resampling up to ``max_tries``.
    """
    if bound < 1:
        raise UsageError("coordinate bound must be >= 1")
    if cone not in ("any", "spacelike", "timelike"):
        raise UsageError(f"unknown cone {cone!r}")
    if cone == "spacelike" and space.p == 0 or cone == "timelike" and space.q == 0:
        raise SamplingError(f"no {cone} vectors in signature {space.signature}")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    for _ in range(max_tries):
        X = vec(int(v) for v in rng.integers(-bound, bound + 1, size=space.n))
        s = norm_sq(space, X)
        if cone == "spacelike" and s <= 0 or cone == "timelike" and s >= 0:
            continue
        if (require_non_null or cone != "any") and s == 0:
            continue
        if all(x == 0 for x in X):
            continue
        return X
    raise SamplingError(f"could not sample a {cone} vector in {max_tries} tries")


def derived_rng(seed: int, *keys: int) -> np.random.Generator:
    """Independent generator for a (seed, key...) stream; order-independent across workers."""
    return np.random.default_rng([int(seed) & 0xFFFFFFFFFFFF, *[int(k) for k in keys]])
