import itertools

import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from osserman.catalog import constant_curvature, random_act
from osserman.curvature import (
    CurvatureTensor, SymmetryError, act_dimension, canonical_quadruples, covariant_bilinear, orbit,
)
from osserman.space import PseudoEuclideanSpace, inner, norm_sq, sample_vector, vec

signatures = st.sampled_from([(2, 0), (3, 0), (1, 1), (2, 1), (2, 2), (1, 3)])


def symmetry_solution_dim(n):
    """Dimension of the solution space of all curvature identities, by floating rank."""
    idx = {q: k for k, q in enumerate(itertools.product(range(n), repeat=4))}
    rows = []
    for i, j, k, l in idx:
        for a, b in (((i, j, k, l), (j, i, k, l)), ((i, j, k, l), (i, j, l, k))):
            r = np.zeros(len(idx))
            r[idx[a]] += 1
            r[idx[b]] += 1
            rows.append(r)
        r = np.zeros(len(idx))
        r[idx[(i, j, k, l)]] += 1
        r[idx[(k, l, i, j)]] -= 1
        rows.append(r)
        r = np.zeros(len(idx))
        for q in ((i, j, k, l), (j, k, i, l), (k, i, j, l)):
            r[idx[q]] += 1
        rows.append(r)
    return len(idx) - np.linalg.matrix_rank(np.array(rows))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_act_dimension(n):
    assert act_dimension(n) == symmetry_solution_dim(n)


def test_orbit_signs():
    imgs = dict(orbit(0, 1, 2, 3))
    assert imgs[(1, 0, 2, 3)] == -1 and imgs[(2, 3, 0, 1)] == 1 and imgs[(3, 2, 1, 0)] == 1
    assert len(list(canonical_quadruples(3))) == 6


def test_constant_curvature_jacobi_closed_form():
    s = PseudoEuclideanSpace(2, 0)
    J = constant_curvature(s, 1).jacobi(vec([1, 0]))
    assert J.matrix == ((0, 0), (0, 1))
    s11 = PseudoEuclideanSpace(1, 1)
    J = constant_curvature(s11, 1).jacobi(vec([1, 0]))
    # R_X Y = |X|^2 Y - <X,Y> X
    assert J.matrix == ((0, 0), (0, 1))


@given(signatures, st.integers(0, 2**20), st.fractions(-3, 3, max_denominator=5))
def test_constant_curvature_formula(sig, seed, k):
    s = PseudoEuclideanSpace(*sig)
    k = mpq(k.numerator, k.denominator)
    T = constant_curvature(s, k)
    X = sample_vector(s, seed, require_non_null=False)
    Y = sample_vector(s, seed + 1, require_non_null=False)
    lhs = T.jacobi(X) @ Y
    rhs = tuple(k * (norm_sq(s, X) * y - inner(s, X, Y) * x) for x, y in zip(X, Y))
    assert lhs == rhs


@given(signatures, st.integers(0, 2**20))
def test_jacobi_self_adjoint_and_kills_x(sig, seed):
    s = PseudoEuclideanSpace(*sig)
    T = random_act(s, seed)
    X = sample_vector(s, seed, require_non_null=False)
    J = T.jacobi(X)
    assert J.is_metric_self_adjoint()
    assert all(v == 0 for v in J @ X)


@given(signatures, st.integers(0, 2**20))
def test_apply_agrees_with_jacobi_and_float_path(sig, seed):
    s = PseudoEuclideanSpace(*sig)
    T = random_act(s, seed)
    X, Y, Z, V = (sample_vector(s, seed + i, require_non_null=False) for i in range(4))
    assert T.apply(Y, X, X) == T.jacobi(X) @ Y
    assert np.allclose(T.jacobi_float(X), T.jacobi(X).to_float())
    # pair symmetry in covariant form
    assert covariant_bilinear(s, T, X, Y, Z, V) == covariant_bilinear(s, T, Z, V, X, Y)


def test_validator_catches_each_family():
    s = PseudoEuclideanSpace(2, 2)
    R = constant_curvature(s, 1).R.copy()
    R[0, 1, 2, 3] += 1
    fams = {v.family for v in CurvatureTensor(s, R).validate_symmetries().violations}
    assert fams == {"antisymmetry", "pair-symmetry", "bianchi"}
    with pytest.raises(SymmetryError):
        CurvatureTensor(s, R).require_valid()
    # orbit-consistent but Bianchi-violating
    T = CurvatureTensor.from_canonical(s, {(0, 1, 2, 3): 1})
    fams = {v.family for v in T.validate_symmetries().violations}
    assert fams == {"bianchi"}


def test_violation_indices_are_one_based():
    s = PseudoEuclideanSpace(2, 0)
    R = np.full((2,) * 4, mpq(0), dtype=object)
    R[0, 1, 1, 0] = mpq(1)
    v = CurvatureTensor(s, R).validate_symmetries().violations[0]
    assert str(v) == "antisymmetry at (1,2,2,1): defect 1"


def test_float_tensor_tolerance():
    s = PseudoEuclideanSpace(3, 0)
    T = constant_curvature(s, 1).to_float()
    assert T.validate_symmetries().ok
    R = T.R.copy()
    R[0, 1, 1, 0] += 1e-13
    assert CurvatureTensor(s, R, exact=False).validate_symmetries(1e-9).ok
    R[0, 1, 1, 0] += 1e-3
    assert not CurvatureTensor(s, R, exact=False).validate_symmetries(1e-9).ok


def test_canonical_roundtrip_and_linear_ops():
    s = PseudoEuclideanSpace(2, 1)
    T = random_act(s, 3)
    assert CurvatureTensor.from_canonical(s, T.canonical_components()) == T
    assert (T + (-1) * T).is_zero()
    assert 2 * constant_curvature(s, 1) == constant_curvature(s, 2)
