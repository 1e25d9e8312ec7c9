"""Coarsening a Gamma-grading to Gamma/Omega, and lifting a Gamma/Omega-graded division ring back to Gamma."""
from __future__ import annotations

import itertools
import random
from typing import Sequence

from .grp import Quotient, quotient
from .hmat import HMatrix, submatrix
from .rank import MatrixRankFn, PrimeMatrixIdeal
from .ring import (SMALL_COEFFS, GradedElement, GradedHom, GradedRing, NotInvertible, RingError)

BALL_RADIUS = 3


class RegradedRing:
    """A Gamma/Omega-graded view of a Gamma-graded ring.

    Elements are the elements of the underlying ring; only the degree changes, by projection.
    """

    is_graded_division = False

    def __init__(self, base: GradedRing, q: Quotient):
        self.base = base
        self.q = q
        self.group = q.target
        self.is_commutative = base.is_commutative
        self.name = f"{base.name}/{','.join(map(str, q.generators))}"

    def project(self, g):
        return self.q(g)

    def degrees_in(self, cls, radius: int = BALL_RADIUS) -> list:
        return [g for g in self.base.group.ball(radius) if self.q(g) == cls and self.base.supports(g)]

    def zero(self) -> GradedElement:
        return self.base.zero()

    def one(self) -> GradedElement:
        return self.base.one()

    def supports(self, cls) -> bool:
        return bool(self.degrees_in(cls))

    def homogeneous_of(self, a: GradedElement, cls) -> bool:
        return all(self.q(g) == cls for g in a.comps)

    def is_homogeneous(self, a: GradedElement) -> bool:
        return len({self.q(g) for g in a.comps}) <= 1

    def degree(self, a: GradedElement):
        classes = {self.q(g) for g in a.comps}
        if not classes:
            return None
        if len(classes) > 1:
            raise RingError(f"{a} is not homogeneous in {self.name}")
        return classes.pop()

    def invert(self, a: GradedElement) -> GradedElement:
        try:
            return self.base.invert(a)
        except RingError as exc:
            raise NotInvertible(f"{a} has no inverse computable in {self.name}") from exc

    def is_unit(self, a: GradedElement) -> bool:
        try:
            self.invert(a)
            return True
        except NotInvertible:
            return False

    def class_basis(self, cls) -> list:
        return [self.base.hom(g, c) for g in self.degrees_in(cls, 1) for c in self.base.basis_coefs(g)]

    def unit_of_degree(self, cls):
        for g in self.degrees_in(cls, 1):
            c = self.base.unit_of_degree(g)
            if c is not None:
                return self.base.hom(g, c)
        return None

    def sample_homogeneous(self, rng: random.Random, cls, values=SMALL_COEFFS) -> GradedElement:
        degs = self.degrees_in(cls, 1)
        out = self.base.zero()
        for g in rng.sample(degs, min(len(degs), 2)):
            out = out + self.base.sample_homogeneous(rng, g, values)
        return out

    def element_to_json(self, a: GradedElement):
        return self.base.element_to_json(a)

    def element_from_json(self, v) -> GradedElement:
        return self.base.element_from_json(v)

    def fmt(self, a: GradedElement) -> str:
        return self.base.fmt(a)

    def __repr__(self):
        return f"<RegradedRing {self.name}>"


def regrade_ring(R: GradedRing, omega: Sequence | str) -> RegradedRing:
    """omega lists generators of a normal subgroup, or is "all"; quotient() rejects non-normal ones."""
    return RegradedRing(R, quotient(R.group, omega))


def regrade_matrix(A: HMatrix, view: RegradedRing) -> HMatrix:
    if A.ring is not view.base:
        raise RingError("matrix is not over the underlying ring of this view")
    p = view.project
    return HMatrix(view, tuple(p(a) for a in A.alpha), tuple(p(b) for b in A.beta), A.rows, check=False)


def det(A: HMatrix) -> GradedElement:
    """Laplace expansion; only meaningful over a commutative ring."""
    R = A.ring
    if not getattr(R, "is_commutative", False):
        raise RingError("determinants need a commutative ring")
    if not A.is_square():
        raise ValueError("determinant of a non-square matrix")
    rows = A.rows

    def rec(rs: tuple, cs: tuple) -> GradedElement:
        if not rs:
            return R.one()
        i = rs[0]
        total = R.zero()
        for k, j in enumerate(cs):
            x = rows[i][j]
            if x.is_zero():
                continue
            term = x * rec(rs[1:], cs[:k] + cs[k + 1:])
            total = total + term if k % 2 == 0 else total - term
        return total
    return rec(tuple(range(A.m)), tuple(range(A.n)))


def det_rank(A: HMatrix) -> int:
    """Rank over the field of fractions of a commutative domain: the largest non-vanishing minor."""
    for k in range(min(A.m, A.n), 0, -1):
        for rs in itertools.combinations(range(A.m), k):
            for cs in itertools.combinations(range(A.n), k):
                if not det(submatrix(A, rs, cs)).is_zero():
                    return k
    return 0


def det_kernel(view: RegradedRing, evaluate=None, name: str = "det") -> PrimeMatrixIdeal:
    """Square matrices whose determinant vanishes (after evaluate, when given).

    Over a commutative domain this is the singular kernel of the map to the field of fractions,
    or of the composite with evaluate.
    """
    def member(A: HMatrix) -> bool:
        d = det(A)
        if evaluate is None:
            return d.is_zero()
        return evaluate(d) == 0
    return PrimeMatrixIdeal(name, view, member)


def evaluate_at(R: GradedRing, x):
    """Evaluation of a rank-one Laurent-type element at a scalar x."""
    def ev(a: GradedElement):
        return sum((c * x ** g for g, c in a.comps.items()), 0)
    return ev


def restrict_spectrum_point(P: PrimeMatrixIdeal, view: RegradedRing) -> PrimeMatrixIdeal:
    """The Gamma-prime matrix ideal P intersected with the Gamma-matrices."""
    return PrimeMatrixIdeal(f"{P.name}|{view.base.group.describe()['kind']}", view.base,
                            lambda A: P.member(regrade_matrix(A, view)))


def restrict_rank(rank_fn, view: RegradedRing, name: str = "restricted") -> MatrixRankFn:
    return MatrixRankFn(name, lambda A: rank_fn(regrade_matrix(A, view)))


class LiftRing(GradedRing):
    """D with D_g = E_{[g]} g inside E[Gamma]; the coefficient at g is an element of E of class [g]."""

    is_commutative = False

    def __init__(self, E, q: Quotient, name: str | None = None):
        super().__init__(q.parent)
        self.E = E
        self.q = q
        self.name = name or f"lift({E.name})"
        self.is_graded_division = getattr(E, "is_graded_division", False)
        self.is_commutative = getattr(E, "is_commutative", False) and q.parent.describe()["kind"] != "table"

    def czero(self, g):
        return self.E.zero()

    def cis_zero(self, c) -> bool:
        return c.is_zero()

    def cadd(self, a, b):
        return a + b

    def cneg(self, a):
        return -a

    def cmul(self, g, a, h, b):
        return a * b

    def cinv(self, g, a):
        return self.E.invert(a)

    def cone(self):
        return self.E.one()

    def cunit(self, g, a) -> bool:
        try:
            self.E.invert(a)
            return True
        except (NotInvertible, RingError):
            return False

    def supports(self, g) -> bool:
        return self.E.supports(self.q(g))

    def _class_basis(self, cls) -> list:
        if hasattr(self.E, "class_basis"):
            return self.E.class_basis(cls)
        return [self.E.hom(cls, c) for c in self.E.basis_coefs(cls)]

    def sample_coef(self, rng, g, values=SMALL_COEFFS):
        x = self.E.sample_homogeneous(rng, self.q(g), values)
        return x if not x.is_zero() else self._class_basis(self.q(g))[0]

    def basis_coefs(self, g) -> list:
        return self._class_basis(self.q(g))

    def coef_to_json(self, c):
        return self.E.element_to_json(c)

    def coef_from_json(self, v):
        return self.E.element_from_json(v)

    def fmt_coef(self, c) -> str:
        s = self.E.fmt(c)
        return f"({s})" if " " in s else s

    def contains_coef(self, g, c) -> bool:
        return self.E.homogeneous_of(c, self.q(g))


def lift_division_ring(E, q: Quotient) -> LiftRing:
    if q.target.describe() != (E.group.describe()):
        raise RingError("E must be graded by the quotient group")
    return LiftRing(E, q)


def lift_hom(phi: GradedHom, D: LiftRing) -> GradedHom:
    """psi(a) = phi(a) g for a of degree g."""
    def image(g, c):
        x = phi.image(g, c)
        if not D.E.homogeneous_of(x, D.q(g)):
            raise RingError("phi is not compatible with the quotient map")
        return D.elem({g: x})
    return GradedHom(f"lift({phi.name})", phi.source, D, image, lambda g: g)


def component_check(D: LiftRing, seed: int = 0, samples: int = 100) -> bool:
    """D_g D_h lies in D_{gh} on samples, and each coefficient stays in its class."""
    rng = random.Random(seed)
    G = D.group
    ball = [g for g in G.ball(2) if D.supports(g)]
    for _ in range(samples):
        g, h = rng.choice(ball), rng.choice(ball)
        a, b = D.sample_homogeneous(rng, g), D.sample_homogeneous(rng, h)
        p = a * b
        k = G.op(g, h)
        if not D.homogeneous_of(p, k):
            return False
        if any(not D.contains_coef(d, c) for d, c in p.comps.items()):
            return False
    return True
