import sympy as sp
from fractions import Fraction
from gmpy2 import mpq
from hypothesis import given, strategies as st

from osserman.poly import (
    Poly, Q, coprime_base, gcd, rational_roots, real_root_count, squarefree_decomposition,
    squarefree_part,
)

t = sp.Symbol("t")
small = st.integers(-6, 6)
coeffs = st.lists(small, min_size=1, max_size=6)


def to_sympy(p: Poly):
    return sum(sp.Rational(int(c.numerator), int(c.denominator)) * t**i for i, c in enumerate(p.c))


def from_sympy(e) -> Poly:
    cs = sp.Poly(e, t).all_coeffs()[::-1]
    return Poly([mpq(int(sp.fraction(c)[0]), int(sp.fraction(c)[1])) for c in cs])


def test_coercion():
    assert Q("3/6") == mpq(1, 2)
    assert Q(Fraction(2, 4)) == mpq(1, 2)
    import pytest

    with pytest.raises(TypeError):
        Q(0.5)


def test_basic_arithmetic():
    x = Poly.t()
    p = (x - 1) * (x + 2)
    assert p.c == (mpq(-2), mpq(1), mpq(1))
    assert p.deg == 2 and Poly().deg == -1
    q, r = divmod(p, x - 1)
    assert q == x + 2 and not r
    assert p(mpq(1)) == 0
    assert (x**3).derivative() == 3 * x**2


@given(coeffs, coeffs)
def test_divmod_identity(a, b):
    A, B = Poly(a), Poly(b)
    if not B:
        return
    q, r = divmod(A, B)
    assert q * B + r == A
    assert r.deg < B.deg


@given(coeffs, coeffs)
def test_gcd_matches_sympy(a, b):
    A, B = Poly(a), Poly(b)
    if not A and not B:
        return
    g = gcd(A, B)
    ref = sp.Poly(sp.gcd(to_sympy(A), to_sympy(B)), t)
    ref = from_sympy(ref.monic().as_expr()) if ref.degree() >= 0 and ref.as_expr() != 0 else Poly()
    assert g == ref


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(1, 3)), min_size=1, max_size=4))
def test_squarefree_decomposition(roots):
    f = Poly((1,))
    for r, m in roots:
        f = f * Poly((-r, 1)) ** m
    dec = squarefree_decomposition(f)
    prod = Poly((1,))
    for e, S in dec.items():
        assert gcd(S, S.derivative()).deg == 0
        prod = prod * S**e
    assert prod == f.monic()
    mult = {}
    for r, m in roots:
        mult[r] = mult.get(r, 0) + m
    for r, m in mult.items():
        assert dec[m](mpq(r)) == 0
    assert squarefree_part(f).deg == len(mult)


@given(coeffs)
def test_real_root_count_matches_sympy(a):
    f = Poly(a)
    if f.deg < 1:
        return
    expected = len(set(sp.real_roots(to_sympy(f))))
    assert real_root_count(f) == expected


@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=1, max_size=4), coeffs)
def test_rational_roots(roots, extra):
    f = Poly.from_roots([mpq(r.numerator, r.denominator) for r in roots]) * (Poly(extra) if Poly(extra) else 1)
    got = set(rational_roots(f))
    ref = {r for r in sp.roots(to_sympy(f), filter="Q")}
    assert {sp.Rational(int(x.numerator), int(x.denominator)) for x in got} == ref


def test_coprime_base_is_pairwise_coprime():
    x = Poly.t()
    fs = [(x - 1) * (x - 2), (x - 2) * (x - 3), x**2 + 1, (x - 1) * (x**2 + 1)]
    base = coprime_base(fs)
    for a in range(len(base)):
        for b in range(a + 1, len(base)):
            assert gcd(base[a], base[b]).deg == 0
    for f in fs:
        rest = squarefree_part(f)
        for b in base:
            if gcd(b, rest).deg > 0:
                rest = rest.exact_div(b)
        assert rest.deg == 0
