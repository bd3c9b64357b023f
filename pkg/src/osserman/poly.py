"""Univariate polynomials with exact rational coefficients.

Coefficients are stored low degree first as ``gmpy2.mpq``.  The class is
immutable and hashable so polynomials can key dictionaries and sets.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq

ZERO = mpq(0)
ONE = mpq(1)


def Q(x) -> mpq:
    """Coerce an int, Fraction, mpq or ``"p/q"`` string to ``mpq``."""
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, float):
        raise TypeError("refusing to build an exact scalar from a float")
    return mpq(x)


class Poly:
    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        c = [Q(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c: tuple[mpq, ...] = tuple(c)

    @classmethod
    def t(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def const(cls, a) -> "Poly":
        return cls((a,))

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Poly":
        p = cls((1,))
        for r in roots:
            p = p * cls((-Q(r), 1))
        return p

    @property
    def deg(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.c) - 1

    @property
    def lead(self) -> mpq:
        return self.c[-1] if self.c else ZERO

    def is_zero(self) -> bool:
        return not self.c

    def __bool__(self) -> bool:
        return bool(self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.c == other.c
        if isinstance(other, (int, Fraction)) or type(other) is type(ZERO):
            return self.c == Poly.const(other).c
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.c)

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        if not self.c:
            return "0"
        terms = []
        for k in range(len(self.c) - 1, -1, -1):
            a = self.c[k]
            if a == 0:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if mono and abs(a) == 1:
                s = mono
            else:
                s = f"{abs(a)}" + (f"*{mono}" if mono else "")
            terms.append(("-" if a < 0 else "+", s))
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, s in terms[1:]:
            out += f" {sign} {s}"
        return out

    def _coerce(self, other) -> "Poly":
        return other if isinstance(other, Poly) else Poly.const(other)

    def __add__(self, other) -> "Poly":
        o = self._coerce(other).c
        a = self.c
        if len(a) < len(o):
            a, o = o, a
        return Poly([x + (o[i] if i < len(o) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly([-x for x in self.c])

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            b = Q(other)
            return Poly([x * b for x in self.c])
        a, b = self.c, other.c
        if not a or not b:
            return Poly()
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        out = Poly((1,))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other: "Poly"):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        db = other.deg
        if len(r) - 1 < db:
            return Poly(), self
        inv = 1 / other.lead
        q = [ZERO] * (len(r) - db)
        b = other.c
        for k in range(len(r) - 1 - db, -1, -1):
            f = r[k + db] * inv
            q[k] = f
            if f:
                for j in range(db + 1):
                    r[k + j] -= f * b[j]
        return Poly(q), Poly(r[:db])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def divides(self, other: "Poly") -> bool:
        return not (other % self)

    def monic(self) -> "Poly":
        if not self.c:
            return self
        return self * (1 / self.lead)

    def derivative(self) -> "Poly":
        return Poly([k * a for k, a in enumerate(self.c)][1:])

    def __call__(self, x):
        acc = ZERO
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def eval_matrix(self, A: Sequence[Sequence]) -> list[list[mpq]]:
        """Horner evaluation at a square matrix given as nested lists."""
        n = len(A)
        acc = [[ZERO] * n for _ in range(n)]
        for a in reversed(self.c):
            acc = _matmul(acc, A)
            for i in range(n):
                acc[i][i] += a
        return acc

    def primitive_integer(self) -> list[int]:
        """Integer coefficients of the primitive associate with positive lead."""
        from math import gcd, lcm

        if not self.c:
            return []
        den = 1
        for a in self.c:
            den = lcm(den, int(a.denominator))
        ints = [int(a * den) for a in self.c]
        g = 0
        for v in ints:
            g = gcd(g, v)
        ints = [v // g for v in ints]
        if ints[-1] < 0:
            ints = [-v for v in ints]
        return ints

    def to_float(self) -> list[float]:
        return [float(a) for a in self.c]


def _matmul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    out = [[ZERO] * p for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        Oi = out[i]
        for k in range(m):
            a = Ai[k]
            if a:
                Bk = B[k]
                for j in range(p):
                    Oi[j] += a * Bk[j]
    return out


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; gcd(0, 0) = 0."""
    while b:
        a, b = b, a % b
    return a.monic()


def gcd_many(polys: Iterable[Poly]) -> Poly:
    g = Poly()
    for p in polys:
        g = gcd(g, p)
        if g.deg == 0:
            break
    return g


def squarefree_part(f: Poly) -> Poly:
    if f.deg <= 0:
        return Poly((1,))
    return f.exact_div(gcd(f, f.derivative())).monic()


def squarefree_decomposition(f: Poly) -> dict[int, Poly]:
    """Yun's algorithm: monic ``f = prod_e S_e**e`` with ``S_e`` squarefree, pairwise coprime.

    Only factors of positive degree are returned.
    """
    if not f:
        raise ValueError("squarefree decomposition of the zero polynomial")
    f = f.monic()
    out: dict[int, Poly] = {}
    if f.deg == 0:
        return out
    fp = f.derivative()
    a = gcd(f, fp)
    b = f.exact_div(a)
    c = fp.exact_div(a)
    d = c - b.derivative()
    e = 1
    while b.deg > 0:
        g = gcd(b, d)
        if g.deg > 0:
            out[e] = g
        b = b.exact_div(g)
        c = d.exact_div(g)
        d = c - b.derivative()
        e += 1
    return out


def coprime_base(polys: Iterable[Poly]) -> list[Poly]:
    """Pairwise coprime squarefree monic polynomials generating the same roots.

    Every input root is a root of exactly one output element, and every
    input squarefree part is a product of output elements.
    """
    base: list[Poly] = []
    for p in polys:
        p = squarefree_part(p) if p.deg > 0 else Poly((1,))
        new = [p] if p.deg > 0 else []
        while new:
            f = new.pop()
            for i, b in enumerate(base):
                g = gcd(f, b)
                if g.deg > 0:
                    base.pop(i)
                    for piece in (g, b.exact_div(g).monic(), f.exact_div(g).monic()):
                        if piece.deg > 0:
                            new.append(piece)
                    break
            else:
                base.append(f.monic())
        # pieces re-enter the loop until coprime with all of ``base``
    base.sort(key=lambda b: (b.deg, [float(x) for x in b.c]))
    return base


def sturm_sequence(f: Poly) -> list[Poly]:
    seq = [f, f.derivative()]
    while seq[-1]:
        r = -(seq[-2] % seq[-1])
        if not r:
            break
        seq.append(r)
    return seq


def _sign_changes(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def real_root_count(f: Poly) -> int:
    """Number of distinct real roots of ``f`` by a Sturm sequence over the whole line."""
    if not f:
        raise ValueError("real root count of the zero polynomial")
    if f.deg <= 0:
        return 0
    seq = sturm_sequence(f)
    at_neg = [p.lead * (-1 if p.deg % 2 else 1) for p in seq]
    at_pos = [p.lead for p in seq]
    return _sign_changes(at_neg) - _sign_changes(at_pos)


def rational_roots(f: Poly) -> list[mpq]:
    """Exact rational roots of ``f`` (distinct, ascending).

    Numeric roots of the squarefree part are rounded onto the lattice
    ``Z/lead`` (every rational root ``a/b`` of a primitive integer polynomial
    has ``b | lead``) and kept only when they vanish exactly.
    """
    import numpy as np

    if not f:
        raise ValueError("rational roots of the zero polynomial")
    s = squarefree_part(f)
    if s.deg <= 0:
        return []
    ints = s.primitive_integer()
    lead = ints[-1]
    found: set[mpq] = set()
    if ints[0] == 0:
        found.add(ZERO)
    approx = np.roots([float(v) for v in reversed(ints)]) if s.deg > 0 else []
    for r in approx:
        if abs(r.imag) > 1e-6 * max(1.0, abs(r.real)):
            continue
        for num in {int(np.floor(r.real * lead)), int(np.ceil(r.real * lead))}:
            cand = mpq(num, lead)
            if cand not in found and s(cand) == 0:
                found.add(cand)
    if len(found) < s.deg:
        # numeric roots lose digits for large coefficients; widen the lattice window
        for r in approx:
            if abs(r.imag) > 1e-3 * max(1.0, abs(r.real)):
                continue
            centre = int(round(r.real * lead))
            for num in range(centre - 3, centre + 4):
                cand = mpq(num, lead)
                if cand not in found and s(cand) == 0:
                    found.add(cand)
    return sorted(found)
