import numpy as np
import pytest
import sympy as sp
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from osserman.catalog import (
    clifford_tensor, constant_curvature, nilpotent_example, random_act, standard_structure,
)
from osserman.checks import (
    HOLDS, NO_EVIDENCE, NOT_APPLICABLE, VIOLATED, CheckParams, ContinuationError, derivative_identity_check,
    duality_check, duality_principle, eigen_continuation, full_report, is_jordan_osserman, is_osserman,
    is_semisimple, minimal_poly_test, radial_derivative, reciprocity_check, verify_duality_witness,
)
from osserman.curvature import CurvatureTensor
from osserman.poly import Poly
from osserman.space import (
    FLOAT, PseudoEuclideanSpace, UsageError, as_float, inner, norm_sq, orthogonal_complement_basis,
    sample_vector, vec,
)

k_values = [mpq(-2), mpq(1, 3), mpq(5)]


def sympy_charpoly(T, X):
    M = sp.Matrix([[sp.Rational(int(x.numerator), int(x.denominator)) for x in r] for r in T.jacobi(X).matrix])
    t = sp.Symbol("t")
    return [sp.Rational(c) for c in M.charpoly(t).all_coeffs()[::-1]]


def clifford4(l0=1, ls=(3,)):
    s = PseudoEuclideanSpace(4, 0)
    return clifford_tensor(s, standard_structure((4, 0), len(ls)), l0, ls)


# ------------------------------------------------------------------ Osserman

@pytest.mark.parametrize("k", k_values)
def test_space_form_certificate(k):
    res = is_osserman(constant_curvature(PseudoEuclideanSpace(4, 0), k), 16, 0)
    assert res.verdict == HOLDS
    assert res.certificate.a == (0, -k**3, 3 * k**2, -3 * k, 1)


def test_zero_tensor_certificate():
    res = is_osserman(CurvatureTensor.zero(PseudoEuclideanSpace(2, 1)), 8, 0)
    assert res.holds and res.certificate.unit_polynomial() == Poly.t() ** 3


def test_random_tensor_witness_reverifies():
    s = PseudoEuclideanSpace(2, 1)
    T = random_act(s, 0, generators=3, bound=5)
    res = is_osserman(T, 16, 0)
    assert res.verdict == VIOLATED
    w = res.witness
    # independent recomputation: a_j from the reference vector, f_j at the witness, both via sympy
    X0 = vec([1, 0, 0])
    a = [c / sp.Rational(int(norm_sq(s, X0))) ** (3 - j) for j, c in enumerate(sympy_charpoly(T, X0))]
    f = sympy_charpoly(T, w.X)
    g = f[w.j] - a[w.j] * sp.Rational(int(norm_sq(s, w.X))) ** (3 - w.j)
    assert g != 0 and g == sp.Rational(int(w.defect.numerator), int(w.defect.denominator))


@given(st.integers(0, 2**20), st.sampled_from([(2, 2), (4, 0)]))
@settings(max_examples=10)
def test_certificate_reproduces_out_of_sample(seed, sig):
    s = PseudoEuclideanSpace(*sig)
    T = clifford_tensor(s, standard_structure(sig, 1), 1, [mpq(1, 2)])
    cert = is_osserman(T, 4, 0).certificate
    X = sample_vector(s, seed + 10**7, bound=50, require_non_null=False)
    assert sympy_charpoly(T, X) == [sp.Rational(int(c.numerator), int(c.denominator))
                                    for c in cert.chi(norm_sq(s, X)).c] + [0] * 0


def test_float_domain_osserman():
    s = PseudoEuclideanSpace(2, 1)
    assert is_osserman(constant_curvature(s, 3), 8, 0, domain="float").holds
    assert is_osserman(random_act(s, 1), 8, 0, domain="float").verdict == VIOLATED


# --------------------------------------------------------- Jordan-Osserman

def test_jordan_osserman_space_form_both_cones():
    s = PseudoEuclideanSpace(1, 1)
    res = is_jordan_osserman(constant_curvature(s, 2), 16, 0)
    assert res.holds and res.cones == ("spacelike", "timelike")
    assert res.signature == (((1,), (1,)), 2)


def test_jordan_osserman_zero_and_nilpotent():
    res = is_jordan_osserman(CurvatureTensor.zero(PseudoEuclideanSpace(3, 0)), 8, 0)
    assert res.holds and res.signature == (((1, 1, 1),), 1)
    res = is_jordan_osserman(nilpotent_example((2, 2), 3), 16, 0)
    assert res.holds and res.signature == (((3, 1),), 1)


def test_jordan_osserman_requires_osserman():
    res = is_jordan_osserman(random_act(PseudoEuclideanSpace(2, 1), 0), 8, 0)
    assert res.verdict == VIOLATED and res.reason == "not Osserman"


# ---------------------------------------------------------------- semisimple

def test_semisimple_verdicts():
    assert is_semisimple(random_act(PseudoEuclideanSpace(3, 0), 4), 8, 0).holds
    assert is_semisimple(constant_curvature(PseudoEuclideanSpace(2, 2), 1), 8, 0).holds
    res = is_semisimple(nilpotent_example((2, 2), 2), 16, 0)
    assert res.verdict == NO_EVIDENCE and len(res.members) == 16
    assert not any(d for _, d in res.members)


# ------------------------------------------------------------------ duality

def test_duality_space_form_pairs():
    s = PseudoEuclideanSpace(3, 0)
    k = mpq(2)
    chk = duality_check(constant_curvature(s, k), vec([1, 0, 0]))
    assert chk.passed and all(p.residual == 0 and p.exact for p in chk.pairs)
    by_mu = {}
    for p in chk.pairs:
        by_mu.setdefault(p.eigenvalue, []).append(p)
    assert set(by_mu) == {0, k}
    # the eigenvalue-0 eigenspace is spanned by X itself: R_X X = 0 so mu_Y = 0
    assert [p.mu_Y for p in by_mu[0]] == [0]
    assert all(p.mu_Y == k * norm_sq(s, p.Y) for p in by_mu[k])


def test_duality_rejects_null_x():
    with pytest.raises(UsageError):
        duality_check(constant_curvature(PseudoEuclideanSpace(1, 1), 1), vec([1, 1]))


def test_duality_failure_reverifies():
    s = PseudoEuclideanSpace(2, 1)
    T = random_act(s, 5)
    res = duality_principle(T, 32, seed=0)
    assert res.verdict == VIOLATED and res.witnesses
    for X, p in res.witnesses:
        assert verify_duality_witness(T, X, p)
        if p.exact:
            assert any(d != 0 for d in p.defect)
        else:
            assert p.residual > 100 * 1e-9


@pytest.mark.parametrize("T", [clifford4(1, (mpq(1, 10),)), clifford4(1, (1, 2, 3)),
                               nilpotent_example((2, 2), 3), constant_curvature(PseudoEuclideanSpace(3, 3), 1)])
def test_duality_holds_on_jordan_osserman_catalog(T):
    assert is_jordan_osserman(T, 8, 0).holds
    res = duality_principle(T, 16, seed=0)
    assert res.holds and not res.witnesses


def test_null_eigenvectors_are_flagged():
    res = duality_principle(nilpotent_example((2, 2), 2), 8, seed=0)
    assert res.flagged_pairs > 0
    assert res.holds


def _find_complex_x(T, tries=200):
    for k in range(tries):
        X = sample_vector(T.space, k)
        if np.any(np.abs(np.linalg.eigvals(T.jacobi_float(X)).imag) > 1e-6):
            return X
    raise AssertionError("no non-real spectrum found")


def test_complex_eigenvalues_by_field():
    real = PseudoEuclideanSpace(2, 1)
    T = random_act(real, 3)
    X = _find_complex_x(T)
    chk = duality_check(T, X)
    na = [p for p in chk.pairs if not p.applicable]
    assert na and all(isinstance(p.eigenvalue, complex) for p in na)
    cplx = PseudoEuclideanSpace(2, 1, field="complex")
    Tc = CurvatureTensor(cplx, T.R)
    chk = duality_check(Tc, X)
    assert all(p.applicable for p in chk.pairs)
    assert any(isinstance(p.eigenvalue, complex) and p.eigenvalue.imag != 0 for p in chk.pairs)


# -------------------------------------------------------------- reciprocity

def test_reciprocity_examples():
    s = PseudoEuclideanSpace(3, 0)
    k = mpq(3)
    X, Y = vec([1, 0, 0]), vec([0, 2, 0])
    assert reciprocity_check(s, k * norm_sq(s, X), Y, k * norm_sq(s, Y), X)
    assert reciprocity_check(s, mpq(0), Y, mpq(0), X)
    assert not reciprocity_check(s, mpq(1), Y, mpq(1), X)


@given(st.integers(0, 2**20), st.sampled_from(["cc22", "cl4", "cl22", "nil"]))
@settings(max_examples=20)
def test_reciprocity_on_mutual_pairs(seed, which):
    T = {
        "cc22": lambda: constant_curvature(PseudoEuclideanSpace(2, 2), mpq(2, 3)),
        "cl4": lambda: clifford4(1, (2, 1)),
        "cl22": lambda: clifford_tensor(PseudoEuclideanSpace(2, 2), standard_structure((2, 2), 1), 1, [3]),
        "nil": lambda: nilpotent_example((2, 2), 3),
    }[which]()
    res = duality_principle(T, 2, seed=seed)
    pairs = list(res.mutual_pairs())
    assert pairs
    for X, p in pairs:
        assert reciprocity_check(T.space, p.eigenvalue, p.Y, p.mu_Y, X)


def test_reciprocity_float_path():
    s = PseudoEuclideanSpace(3, 0)
    T = constant_curvature(s, 2).to_float()
    res = duality_principle(T, 4, seed=0, domain="float")
    pairs = list(res.mutual_pairs())
    assert pairs and not any(p.exact for _, p in pairs)
    for X, p in pairs:
        assert reciprocity_check(s, p.eigenvalue, p.Y, p.mu_Y, X, 1e-9, ref=2.0)


# ------------------------------------------------------------- continuation

def _pair(T, X):
    from osserman.spectral import eigen_clusters

    c = max(eigen_clusters(T.jacobi_float(X)), key=lambda c: abs(c.eigenvalue))
    return c.eigenvalue.real, np.real(c.basis[:, 0])


def test_continuation_at_same_point():
    T = clifford4(1, (3,))
    X = as_float(vec([1, 2, 0, 1]))
    mu, e = _pair(T, X)
    res = eigen_continuation(T, X, mu, e, X)
    assert abs(res.eigenvalue - mu) < 1e-9 * abs(mu)
    assert np.allclose(abs(res.eigenvector @ e), np.linalg.norm(e) ** 2)


@pytest.mark.parametrize("T", [constant_curvature(PseudoEuclideanSpace(2, 1), 3), clifford4(1, (3,)),
                               clifford_tensor(PseudoEuclideanSpace(2, 2), standard_structure((2, 2), 1), 1, [3])])
def test_continued_eigenvalue_scales_with_norm(T):
    s = T.space
    X = as_float(sample_vector(s, 7))
    mu, e = _pair(T, X)
    rng = np.random.default_rng(0)
    for _ in range(5):
        Y = X + 0.01 * rng.normal(size=s.n)
        lam = eigen_continuation(T, X, mu, e, Y).eigenvalue
        assert abs(lam * inner(s, X, X) - mu * inner(s, Y, Y)) <= 1e-9 * abs(mu * inner(s, Y, Y))


def test_continuation_ambiguity_raises():
    T = clifford4(1, (mpq(1, 1000),))
    X = as_float(vec([1, 0, 0, 0]))
    mu, e = 1.003, np.array([0.0, 1.0, 0.0, 0.0])  # halfway between eigenvalues 1 and 1.003
    with pytest.raises(ContinuationError):
        eigen_continuation(T, X, 1.0015, e, X)


# ---------------------------------------------------------- derivative identity

def test_derivative_space_form_both_sides_zero():
    s = PseudoEuclideanSpace(3, 0)
    k = mpq(2)
    T = constant_curvature(s, k)
    X = vec([1, 2, 2])
    e = vec([2, -1, 0])  # orthogonal to X, eigenvalue k|X|^2
    Td = vec([0, 1, -1])
    assert inner(s, T.jacobi(e) @ X, Td) == 0
    res = derivative_identity_check(T.to_float(), as_float(X), float(k * norm_sq(s, X)), as_float(e), as_float(Td))
    assert res.verdict == HOLDS and abs(res.lhs) == 0 and abs(res.dlambda_h) < 1e-6


@pytest.mark.parametrize("T", [clifford4(1, (3,)), clifford4(2, (1, 2, 3)), nilpotent_example((2, 2), 3)])
def test_jordan_osserman_lhs_vanishes_exactly(T):
    """<R_e X, T> = 0 for eigenvectors e and T orthogonal to X."""
    from osserman.spectral import exact_eigenspace
    from osserman.poly import rational_roots
    from osserman.spectral import char_poly

    s = T.space
    for k in range(4):
        X = sample_vector(s, k)
        A = T.jacobi(X)
        for mu in rational_roots(char_poly(A).poly):
            for e in exact_eigenspace(A, mu):
                Re_X = T.jacobi(e) @ X
                for Td in orthogonal_complement_basis(s, X):
                    assert inner(s, Re_X, Td) == 0


def test_derivative_second_order_decay_and_radial():
    T = clifford4(1, (3,))
    s = T.space
    X = as_float(vec([1, -2, 3, 1]))
    mu, e = _pair(T, X)
    Td = orthogonal_complement_basis(s, X, FLOAT)[0] + 0.5 * orthogonal_complement_basis(s, X, FLOAT)[1]
    res = derivative_identity_check(T, X, mu, e, Td)
    assert res.relative <= 1e-6
    assert 0.15 <= res.ratio <= 0.45
    assert abs(radial_derivative(T, X, mu, e) - 2 * mu) <= 1e-6 * abs(2 * mu)


def test_derivative_preconditions():
    T = constant_curvature(PseudoEuclideanSpace(1, 1), 1)
    X = np.array([2.0, 1.0])
    null_e = np.array([1.0, 1.0])
    Td = np.array([1.0, 2.0])
    assert derivative_identity_check(T, X, 3.0, null_e, Td).verdict == NOT_APPLICABLE
    with pytest.raises(UsageError):
        derivative_identity_check(T, X, 3.0, np.array([1.0, 2.0]), np.array([1.0, 0.0]))


# ------------------------------------------------------------ minimal polynomial

def test_minimal_poly_examples():
    s = PseudoEuclideanSpace(2, 2)
    X = vec([1, 2, 0, 1])
    T = constant_curvature(s, 3)
    cert = is_osserman(T, 4, 0).certificate
    res = minimal_poly_test(T, X, cert)
    assert res.vanishes and res.F == Poly.t() * (Poly.t() - 3 * norm_sq(s, X))
    Z = CurvatureTensor.zero(s)
    res = minimal_poly_test(Z, X, is_osserman(Z, 4, 0).certificate)
    assert res.vanishes and res.F == Poly.t()
    N = nilpotent_example((2, 2), 3)
    res = minimal_poly_test(N, X, is_osserman(N, 4, 0).certificate)
    assert res.vanishes is False and res.F == Poly.t() and res.verdict == VIOLATED
    R = random_act(s, 0)
    assert minimal_poly_test(R, X, is_osserman(R, 4, 0).certificate).verdict == NOT_APPLICABLE


def test_minimal_poly_irrational_roots():
    # l0 R_g + l1 R^J with eigenvalues 0, l0 + 3 l1, l0; choose l1 so nothing is special
    T = clifford4(mpq(1, 3), (mpq(2, 7),))
    res = minimal_poly_test(T, vec([1, 1, 0, 2]), is_osserman(T, 4, 0).certificate)
    assert res.vanishes and res.p == 3


# ------------------------------------------------------------------- reports

def test_full_report_space_form():
    rep = full_report(constant_curvature(PseudoEuclideanSpace(2, 1), mpq(1, 3)), CheckParams(samples=8))
    assert set(rep.verdicts().values()) == {HOLDS} and rep.consistent
    assert rep.minimal_poly.vanishes


def test_full_report_random_lorentzian():
    rep = full_report(random_act(PseudoEuclideanSpace(2, 1), 11), CheckParams(samples=8))
    v = rep.verdicts()
    assert (v["osserman"], v["semisimple"], v["duality"]) == (VIOLATED, HOLDS, VIOLATED)
    assert rep.consistent


def test_full_report_zero():
    rep = full_report(CurvatureTensor.zero(PseudoEuclideanSpace(3, 0)), CheckParams(samples=4))
    assert set(rep.verdicts().values()) == {HOLDS} and rep.consistent


def test_full_report_float_domain():
    rep = full_report(clifford4(1, (3,)), CheckParams(samples=8, domain="float"))
    assert set(rep.verdicts().values()) == {HOLDS} and rep.consistent


@given(st.integers(0, 2**20), st.sampled_from([(3, 0), (2, 1), (2, 2)]))
@settings(max_examples=8)
def test_reports_are_internally_consistent(seed, sig):
    rep = full_report(random_act(PseudoEuclideanSpace(*sig), seed), CheckParams(samples=6, derivative_samples=1))
    assert rep.consistent, rep.inconsistencies


def test_reciprocity_float_rejects_real_mismatch():
    s = PseudoEuclideanSpace(3, 0)
    X, Y = np.array([1.0, 0, 0]), np.array([0, 2.0, 0])
    assert not reciprocity_check(s, 1.0, Y, 1.0, X, 1e-9, ref=1.0)
    assert reciprocity_check(s, 1.0, Y, 4.0, X, 1e-9, ref=1.0)
