"""Independent oracles built on sympy; used only by the tests."""
from fractions import Fraction

import sympy

from grlin.hmat import HMatrix


def _q(c):
    if isinstance(c, Fraction):
        return sympy.Rational(c.numerator, c.denominator)
    return sympy.Rational(str(c))


def q2_character(A: HMatrix, sign: int) -> sympy.Matrix:
    """Image of a Q[C2] matrix under x -> sign."""
    def ev(a):
        return sum((_q(c) * (sign if g == 1 else 1) for g, c in a.comps.items()), sympy.Integer(0))
    return sympy.Matrix([[ev(x) for x in r] for r in A.rows])


def laurent_at(A: HMatrix, t0) -> sympy.Matrix:
    """Image of a Laurent (or polynomial) matrix under t -> t0."""
    t0 = sympy.Rational(t0)

    def ev(a):
        return sum((_q(c) * t0 ** g for g, c in a.comps.items()), sympy.Integer(0))
    return sympy.Matrix([[ev(x) for x in r] for r in A.rows])


def laurent_symbolic(A: HMatrix) -> sympy.Matrix:
    t = sympy.Symbol("t")

    def ev(a):
        return sum((_q(c) * t ** g for g, c in a.comps.items()), sympy.Integer(0))
    return sympy.Matrix([[ev(x) for x in r] for r in A.rows])


def _gauss(z):
    return _q(z.re) + sympy.I * _q(z.im)


def sk_embed(A: HMatrix) -> sympy.Matrix:
    """a + b x -> [[a, b], [conj(b), conj(a)]], a faithful map of the skew group ring into 2x2 matrices."""
    m, n = A.m, A.n
    M = sympy.zeros(2 * m, 2 * n)
    for i in range(m):
        for j in range(n):
            comps = A.rows[i][j].comps
            a = _gauss(comps[0]) if 0 in comps else sympy.Integer(0)
            b = _gauss(comps[1]) if 1 in comps else sympy.Integer(0)
            M[2 * i, 2 * j] = a
            M[2 * i, 2 * j + 1] = b
            M[2 * i + 1, 2 * j] = sympy.conjugate(b)
            M[2 * i + 1, 2 * j + 1] = sympy.conjugate(a)
    return M


def oracle_rank(A: HMatrix) -> int:
    """Rank of a homogeneous matrix over the catalog graded division rings, computed outside the package."""
    name = A.ring.name
    if name == "Q2":
        r1, r2 = q2_character(A, 1).rank(), q2_character(A, -1).rank()
        assert r1 == r2
        return r1
    if name in ("QL", "QP"):
        r2, r3 = laurent_at(A, 2).rank(), laurent_at(A, 3).rank()
        assert r2 == r3
        return r2
    if name == "SK":
        r = sk_embed(A).rank(simplify=True)
        assert r % 2 == 0
        return r // 2
    if name == "Q":
        return laurent_at(A, 1).rank()
    raise ValueError(name)
