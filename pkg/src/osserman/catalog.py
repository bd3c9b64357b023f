"""Curvature tensor families used to exercise the checkers.

Conventions (components ``R_ijkl = <R(e_i,e_j)e_k, e_l>``):

* constant curvature ``k``: ``R(X,Y)Z = k(<Y,Z>X - <X,Z>Y)``, so the Jacobi
  operator is ``R_X Y = k(|X|^2 Y - <X,Y>X)``;
* rank-one generator of a symmetric form ``phi``:
  ``R_phi(X,Y)Z = phi(Y,Z) Phi X - phi(X,Z) Phi Y`` with ``<Phi X, V> = phi(X, V)``;
* structure generator of a metric-skew ``J`` with ``J^2 = -1``:
  ``R^J(X,Y)Z = <JY,Z>JX - <JX,Z>JY - 2<JX,Y>JZ``, whose Jacobi operator is
  ``R^J_X Y = 3<Y,JX>JX``.  With this sign a unit ``X`` in Euclidean R^4 and
  ``R = l0 R_g + l1 R^J`` gives Jacobi eigenvalues ``{0, l0 + 3 l1, l0, l0}``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .curvature import CurvatureTensor, identity
from .poly import ZERO, Q, _matmul
from .space import PseudoEuclideanSpace, UsageError, derived_rng


@dataclass(frozen=True)
class SymmetricBilinearForm:
    space: PseudoEuclideanSpace
    matrix: tuple

    def __post_init__(self):
        n = self.space.n
        M = tuple(tuple(Q(x) for x in row) for row in self.matrix)
        if len(M) != n or any(len(r) != n for r in M):
            raise UsageError(f"form must be {n} x {n}")
        if any(M[i][j] != M[j][i] for i in range(n) for j in range(i)):
            raise UsageError("bilinear form is not symmetric")
        object.__setattr__(self, "matrix", M)

    @classmethod
    def metric(cls, space: PseudoEuclideanSpace) -> "SymmetricBilinearForm":
        return cls(space, [[e if i == j else 0 for j, _ in enumerate(space.eps)] for i, e in enumerate(space.eps)])

    @classmethod
    def from_covectors(cls, space, a, b=None) -> "SymmetricBilinearForm":
        """Symmetrised product ``(a (x) b + b (x) a) / 2`` of covectors."""
        b = a if b is None else b
        n = space.n
        return cls(space, [[(Q(a[i]) * Q(b[j]) + Q(b[i]) * Q(a[j])) / 2 for j in range(n)] for i in range(n)])

    def __add__(self, other: "SymmetricBilinearForm") -> "SymmetricBilinearForm":
        return SymmetricBilinearForm(self.space, [[x + y for x, y in zip(r, s)] for r, s in zip(self.matrix, other.matrix)])


@dataclass(frozen=True)
class AnticommutingStructure:
    """Metric-skew operators ``J_1..J_m`` with ``J_i^2 = -1`` and ``J_i J_j + J_j J_i = 0``."""

    space: PseudoEuclideanSpace
    operators: tuple

    def __post_init__(self):
        n = self.space.n
        ops = tuple(tuple(tuple(Q(x) for x in row) for row in J) for J in self.operators)
        object.__setattr__(self, "operators", ops)
        eps = self.space.eps
        minus_one = [[-x for x in row] for row in identity(n)]
        for a, J in enumerate(ops):
            if len(J) != n or any(len(r) != n for r in J):
                raise UsageError(f"J_{a + 1} must be {n} x {n}")
            if any(eps[i] * J[i][j] != -eps[j] * J[j][i] for i in range(n) for j in range(i, n)):
                raise UsageError(f"J_{a + 1} is not skew-adjoint for the metric")
            if _matmul(J, J) != minus_one:
                raise UsageError(f"J_{a + 1} does not square to -1")
        for a, b in itertools.combinations(range(len(ops)), 2):
            S = [[x + y for x, y in zip(r, s)] for r, s in zip(_matmul(ops[a], ops[b]), _matmul(ops[b], ops[a]))]
            if any(x != 0 for r in S for x in r):
                raise UsageError(f"J_{a + 1} and J_{b + 1} do not anticommute")

    @property
    def m(self) -> int:
        return len(self.operators)


_PAULI = {
    "I": ((1, 0), (0, 1)),
    "E": ((0, -1), (1, 0)),
    "X": ((0, 1), (1, 0)),
    "Z": ((1, 0), (0, -1)),
}

# Kronecker words of 2x2 blocks giving anticommuting complex structures.
_FAMILIES = {
    (4, 0): ("IE", "EX", "EZ"),
    (8, 0): ("IIE", "IEX", "EIZ", "EXX", "EZX", "XEZ", "ZEZ"),
    (2, 2): ("IE",),
    (4, 4): ("IIE", "IEX", "IEZ"),
}


def _kron_word(word: str) -> list[list[int]]:
    M = np.array([[1]], dtype=int)
    for ch in word:
        M = np.kron(M, np.array(_PAULI[ch], dtype=int))
    return M.tolist()


def standard_structure(signature: tuple[int, int], m: int | None = None) -> AnticommutingStructure:
    """Shipped anticommuting families: Euclidean R^4 (m <= 3), R^8 (m <= 7), and (2,2), (4,4)."""
    signature = tuple(signature)
    if signature not in _FAMILIES:
        raise UsageError(f"no shipped anticommuting family for signature {signature}")
    words = _FAMILIES[signature]
    m = len(words) if m is None else m
    if not 0 <= m <= len(words):
        raise UsageError(f"signature {signature} ships at most {len(words)} structures")
    space = PseudoEuclideanSpace(*signature)
    return AnticommutingStructure(space, tuple(_kron_word(w) for w in words[:m]))


def _from_array(space, R) -> CurvatureTensor:
    return CurvatureTensor(space, R, exact=True)


def constant_curvature(space: PseudoEuclideanSpace, k=1) -> CurvatureTensor:
    k = Q(k)
    n = space.n
    g = space.eps
    R = np.full((n,) * 4, ZERO, dtype=object)
    for i, j in itertools.permutations(range(n), 2):
        # only g_jk g_il - g_ik g_jl with {k,l} = {i,j} survives for a diagonal metric
        R[i, j, j, i] = k * g[i] * g[j]
        R[i, j, i, j] = -k * g[i] * g[j]
    return _from_array(space, R)


def _rank_one_array(phi, n):
    R = np.full((n,) * 4, ZERO, dtype=object)
    for i, j, k, l in itertools.product(range(n), repeat=4):
        v = phi[j][k] * phi[i][l] - phi[i][k] * phi[j][l]
        if v:
            R[i, j, k, l] = v
    return R


def rank_one_generator(space: PseudoEuclideanSpace, phi) -> CurvatureTensor:
    if not isinstance(phi, SymmetricBilinearForm):
        phi = SymmetricBilinearForm(space, phi)
    return _from_array(space, _rank_one_array(phi.matrix, space.n)).require_valid()


def mixed_generator(space: PseudoEuclideanSpace, phi, psi) -> CurvatureTensor:
    """Polarisation ``R_{phi+psi} - R_phi - R_psi``."""
    if not isinstance(phi, SymmetricBilinearForm):
        phi = SymmetricBilinearForm(space, phi)
    if not isinstance(psi, SymmetricBilinearForm):
        psi = SymmetricBilinearForm(space, psi)
    n = space.n
    R = _rank_one_array((phi + psi).matrix, n) - _rank_one_array(phi.matrix, n) - _rank_one_array(psi.matrix, n)
    return _from_array(space, R)


def structure_generator(space: PseudoEuclideanSpace, J) -> CurvatureTensor:
    n = space.n
    eps = space.eps
    # w[a][b] = <J e_a, e_b>
    w = [[eps[b] * Q(J[b][a]) for b in range(n)] for a in range(n)]
    R = np.full((n,) * 4, ZERO, dtype=object)
    for i, j, k, l in itertools.product(range(n), repeat=4):
        v = w[j][k] * w[i][l] - w[i][k] * w[j][l] - 2 * w[i][j] * w[k][l]
        if v:
            R[i, j, k, l] = v
    return _from_array(space, R)


def clifford_tensor(space: PseudoEuclideanSpace, cs: AnticommutingStructure, l0, ls) -> CurvatureTensor:
    """``l0 R_g + sum_i ls[i] R^{J_i}``."""
    if cs.space.signature != space.signature:
        raise UsageError("anticommuting structure lives on a different space")
    ls = list(ls)
    if len(ls) != cs.m:
        raise UsageError(f"need {cs.m} structure coefficients, got {len(ls)}")
    R = constant_curvature(space, l0).R
    for lam, J in zip(ls, cs.operators):
        R = R + Q(lam) * structure_generator(space, J).R
    return _from_array(space, R)


def random_symmetric_form(space, rng: np.random.Generator, bound: int) -> SymmetricBilinearForm:
    n = space.n
    M = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            M[i][j] = M[j][i] = int(rng.integers(-bound, bound + 1))
    return SymmetricBilinearForm(space, M)


def random_act(space: PseudoEuclideanSpace, seed: int, generators: int = 3, bound: int = 3) -> CurvatureTensor:
    """Signed sum of ``generators`` rank-one generators with random integer forms in ``[-bound, bound]``."""
    if generators < 1:
        raise UsageError("generator count must be >= 1")
    rng = derived_rng(seed, 104729)
    n = space.n
    R = np.full((n,) * 4, ZERO, dtype=object)
    for _ in range(generators):
        phi = random_symmetric_form(space, rng, bound)
        sign = 1 if rng.integers(0, 2) else -1
        R = R + sign * _rank_one_array(phi.matrix, n)
    return _from_array(space, R)


def null_frame(space: PseudoEuclideanSpace):
    """Null vectors ``u_a = e_a + e_{p+a}``, ``v_a = e_a - e_{p+a}`` for ``a < min(p, q)``."""
    n, p = space.n, space.p
    us, vs = [], []
    for a in range(min(space.p, space.q)):
        u = [0] * n
        v = [0] * n
        u[a], u[p + a] = 1, 1
        v[a], v[p + a] = 1, -1
        us.append(u)
        vs.append(v)
    return us, vs


def _flat(space, v):
    return [e * x for e, x in zip(space.eps, v)]


def random_null_act(space: PseudoEuclideanSpace, seed: int, generators: int = 3, bound: int = 3) -> CurvatureTensor:
    """Sum of rank-one generators whose forms are built from covectors of the null span of ``u_a``.

    Every such form vanishes on that totally null subspace ``U``, and each
    Jacobi operator maps into ``U`` and kills the images ``Phi_i X``, so it is
    nilpotent.  In dimension 2 the result is zero.
    """
    us, _ = null_frame(space)
    n = space.n
    R = np.full((n,) * 4, ZERO, dtype=object)
    if not us:
        return _from_array(space, R)
    rng = derived_rng(seed, 15485863)
    for _ in range(generators):
        a, b = (rng.integers(-bound, bound + 1, size=len(us)) @ np.array(us) for _ in range(2))
        a, b = [int(x) for x in a], [int(x) for x in b]
        phi = SymmetricBilinearForm.from_covectors(space, _flat(space, a), _flat(space, b))
        R = R + (1 if rng.integers(0, 2) else -1) * _rank_one_array(phi.matrix, n)
    return _from_array(space, R)


def nilpotent_example(signature, depth: int = 3) -> CurvatureTensor:
    """Tensor with nilpotent, nonzero Jacobi operators at every non-null ``X``.

    Signature (2,2) only.  With ``u1 = e1+e3``, ``u2 = e2+e4`` spanning a
    totally null plane and ``v1 = e1-e3``, ``v2 = e2-e4``:

    * ``depth=2``: ``R_phi`` with ``phi = u1 u1 + u2 u2`` (flat products);
      ``R_X`` maps into the null plane, ``R_X^2 = 0``, blocks ``[2,1,1]``.
    * ``depth=3``: ``-mix(u1 v2, u2 u2) - 2 mix(u1 u2, u1 v1)``; here
      ``chi_X = t^4`` identically and ``R_X^3 = 0 != R_X^2`` off the null cone,
      blocks ``[3,1]``.

    In dimension 2 every algebraic curvature tensor is a multiple of the
    constant-curvature one, whose Jacobi operator at a non-null ``X`` has the
    nonzero eigenvalue ``k|X|^2`` unless it vanishes; so no (1,1) instance exists.
    """
    signature = tuple(signature)
    if signature == (1, 1):
        raise UsageError(
            "signature (1,1) admits no nilpotent nonzero Jacobi operators: every tensor in "
            "dimension 2 has constant curvature, and R_X = k(|X|^2 - X<X,.>) is diagonalisable "
            "with eigenvalue k|X|^2 at non-null X"
        )
    if signature != (2, 2):
        raise UsageError(f"no shipped nilpotent example in signature {signature}")
    space = PseudoEuclideanSpace(2, 2)
    (u1, u2), (v1, v2) = null_frame(space)
    f = lambda v: _flat(space, v)  # noqa: E731
    sym = lambda a, b: SymmetricBilinearForm.from_covectors(space, f(a), f(b))  # noqa: E731
    if depth == 2:
        return rank_one_generator(space, sym(u1, u1) + sym(u2, u2))
    if depth == 3:
        R = (-1) * mixed_generator(space, sym(u1, v2), sym(u2, u2)).R \
            - 2 * mixed_generator(space, sym(u1, u2), sym(u1, v1)).R
        return _from_array(space, R)
    raise UsageError("depth must be 2 or 3")


CONSTRUCTORS = {
    "constant_curvature": lambda space, k=1: constant_curvature(space, k),
    "rank_one_generator": lambda space, phi: rank_one_generator(space, phi),
    "clifford": lambda space, l0, ls, m=None: clifford_tensor(
        space, standard_structure(space.signature, len(ls) if m is None else m), l0, ls),
    "random_act": lambda space, seed, generators=3, bound=3: random_act(space, seed, generators, bound),
    "random_null_act": lambda space, seed, generators=3, bound=3: random_null_act(space, seed, generators, bound),
    "nilpotent_example": lambda space, depth=3: nilpotent_example(space.signature, depth),
    "zero": lambda space: CurvatureTensor.zero(space),
}


def build(name: str, space: PseudoEuclideanSpace, **params) -> CurvatureTensor:
    """Construct a catalog tensor by name (used by the tensor file format)."""
    try:
        ctor = CONSTRUCTORS[name]
    except KeyError:
        raise UsageError(f"unknown constructor {name!r}; known: {sorted(CONSTRUCTORS)}") from None
    try:
        return ctor(space, **params)
    except TypeError as exc:
        raise UsageError(f"bad parameters for {name}: {exc}") from None
