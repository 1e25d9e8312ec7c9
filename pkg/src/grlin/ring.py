"""Graded rings with homogeneous-component arithmetic, the test-ring catalog and graded homomorphisms."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Callable, Iterable

from .grp import C2, Z, FreeAbelianGroup, Group, GroupError, trivial_group
from .scalars import QQ, QQI, Field, field_from_name

SMALL_COEFFS = (0, 1, -1, 2, -2)


class RingError(ValueError):
    pass


class NotInvertible(RingError):
    pass


class GradedElement:
    """A finite sum of homogeneous components {degree: coefficient}."""

    __slots__ = ("ring", "comps", "_hash")

    def __init__(self, ring: "GradedRing", comps: dict):
        self.ring = ring
        self.comps = comps
        self._hash = None

    def __add__(self, other: "GradedElement") -> "GradedElement":
        return self.ring.add(self, other)

    def __sub__(self, other: "GradedElement") -> "GradedElement":
        return self.ring.add(self, self.ring.neg(other))

    def __neg__(self) -> "GradedElement":
        return self.ring.neg(self)

    def __mul__(self, other: "GradedElement") -> "GradedElement":
        return self.ring.mul(self, other)

    def __eq__(self, other):
        return isinstance(other, GradedElement) and self.comps == other.comps

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.comps.items()))
        return self._hash

    def is_zero(self) -> bool:
        return not self.comps

    def support(self) -> list:
        return list(self.comps)

    def degree(self):
        """The degree of a non-zero homogeneous element, None for zero, RingError if inhomogeneous."""
        return self.ring.degree(self)

    def component(self, g) -> "GradedElement":
        if g in self.comps:
            return GradedElement(self.ring, {g: self.comps[g]})
        return self.ring.zero()

    def __repr__(self):
        return self.ring.fmt(self)


class GradedRing:
    """Base class. Subclasses supply coefficient arithmetic per homogeneous component.

    A coefficient c at degree g stands for the element c*g of R_g; cmul(g, a, h, b)
    returns the coefficient of the product (a*g)(b*h) at degree gh.
    """

    name = "ring"
    is_graded_division = False
    is_commutative = False

    def __init__(self, group: Group):
        self.group = group

    # coefficient level, overridden by subclasses
    def czero(self, g):
        raise NotImplementedError

    def cis_zero(self, c) -> bool:
        raise NotImplementedError

    def cadd(self, a, b):
        raise NotImplementedError

    def cneg(self, a):
        raise NotImplementedError

    def cmul(self, g, a, h, b):
        raise NotImplementedError

    def cinv(self, g, a):
        raise NotImplementedError

    def cone(self):
        raise NotImplementedError

    def cunit(self, g, a) -> bool:
        try:
            self.cinv(g, a)
            return True
        except NotInvertible:
            return False

    def supports(self, g) -> bool:
        return True

    def sample_coef(self, rng: random.Random, g, values=SMALL_COEFFS):
        raise NotImplementedError

    def basis_coefs(self, g) -> list:
        raise NotImplementedError

    def coef_to_json(self, c):
        raise NotImplementedError

    def coef_from_json(self, v):
        raise NotImplementedError

    def fmt_coef(self, c) -> str:
        return str(c)

    def describe(self):
        return self.name

    # element level
    def elem(self, comps: dict) -> GradedElement:
        out = {}
        for g, c in comps.items():
            if not self.group.contains(g):
                raise GroupError(f"degree {g!r} is not in the grading group")
            if not self.cis_zero(c):
                if not self.supports(g):
                    raise RingError(f"{self.name} has no component of degree {self.group.fmt(g)}")
                out[g] = c
        return GradedElement(self, out)

    def hom(self, g, c) -> GradedElement:
        """The homogeneous element c*g."""
        return self.elem({g: c})

    def zero(self) -> GradedElement:
        return GradedElement(self, {})

    def one(self) -> GradedElement:
        return GradedElement(self, {self.group.identity: self.cone()})

    def scalar(self, c) -> GradedElement:
        return self.elem({self.group.identity: c})

    def add(self, a: GradedElement, b: GradedElement) -> GradedElement:
        out = dict(a.comps)
        for g, c in b.comps.items():
            if g in out:
                s = self.cadd(out[g], c)
                if self.cis_zero(s):
                    del out[g]
                else:
                    out[g] = s
            else:
                out[g] = c
        return GradedElement(self, out)

    def neg(self, a: GradedElement) -> GradedElement:
        return GradedElement(self, {g: self.cneg(c) for g, c in a.comps.items()})

    def mul(self, a: GradedElement, b: GradedElement) -> GradedElement:
        G = self.group
        out: dict = {}
        for g, x in a.comps.items():
            for h, y in b.comps.items():
                k = G.op(g, h)
                p = self.cmul(g, x, h, y)
                if k in out:
                    out[k] = self.cadd(out[k], p)
                else:
                    out[k] = p
        return GradedElement(self, {k: c for k, c in out.items() if not self.cis_zero(c)})

    def degree(self, a: GradedElement):
        if not a.comps:
            return None
        if len(a.comps) > 1:
            raise RingError(f"{self.fmt(a)} is not homogeneous")
        return next(iter(a.comps))

    def homogeneous_of(self, a: GradedElement, d) -> bool:
        """True when a lies in the component of degree d (zero lies in every component)."""
        return all(g == d for g in a.comps)

    def is_homogeneous(self, a: GradedElement) -> bool:
        return len(a.comps) <= 1

    def invert(self, a: GradedElement) -> GradedElement:
        if not a.comps:
            raise NotInvertible("zero is not invertible")
        if len(a.comps) != 1:
            raise RingError("only homogeneous elements can be inverted here")
        (g, c), = a.comps.items()
        return self.hom(self.group.inv(g), self.cinv(g, c))

    def is_unit(self, a: GradedElement) -> bool:
        try:
            self.invert(a)
            return True
        except NotInvertible:
            return False

    def unit_of_degree(self, g):
        """Some homogeneous unit coefficient of degree g, or None."""
        for c in self.basis_coefs(g):
            if self.cunit(g, c):
                return c
        return None

    def sample_homogeneous(self, rng: random.Random, g, values=SMALL_COEFFS) -> GradedElement:
        if not self.supports(g):
            return self.zero()
        return self.elem({g: self.sample_coef(rng, g, values)})

    def element_to_json(self, a: GradedElement) -> list:
        G = self.group
        items = sorted(a.comps.items(), key=lambda kv: repr(G.to_json(kv[0])))
        return [{"deg": G.to_json(g), "coeffs": self.coef_to_json(c)} for g, c in items]

    def element_from_json(self, v) -> GradedElement:
        if v == 0:
            return self.zero()
        if not isinstance(v, list):
            raise RingError(f"element must be a list of components, got {v!r}")
        total = self.zero()
        for comp in v:
            if not isinstance(comp, dict) or "deg" not in comp or "coeffs" not in comp:
                raise RingError(f"component needs 'deg' and 'coeffs': {comp!r}")
            g = self.group.canon(comp["deg"])
            total = total + self.elem({g: self.coef_from_json(comp["coeffs"])})
        return total

    def fmt_term(self, g, c) -> str:
        cs = self.fmt_coef(c)
        if g == self.group.identity:
            return cs
        return f"{cs}*{self.group.fmt(g)}"

    def fmt(self, a: GradedElement) -> str:
        if not a.comps:
            return "0"
        return " + ".join(self.fmt_term(g, c) for g, c in a.comps.items())

    def __repr__(self):
        return f"<GradedRing {self.name}>"


class GroupAlgebra(GradedRing):
    """K[G] graded by G, optionally restricted to a support (e.g. Q[t] inside Q[t, 1/t])."""

    is_commutative = True

    def __init__(self, field: Field, group: Group, name: str | None = None,
                 support: Callable[[Any], bool] | None = None, var: str | None = None):
        super().__init__(group)
        self.field = field
        self._support = support
        self.var = var
        self.name = name or f"{field.name}[{group.kind}]"
        self.is_graded_division = support is None
        self.is_commutative = group.is_abelian

    def supports(self, g) -> bool:
        return self._support is None or self._support(g)

    def czero(self, g):
        return self.field.zero

    def cis_zero(self, c) -> bool:
        return c == 0

    def cadd(self, a, b):
        return a + b

    def cneg(self, a):
        return -a

    def cmul(self, g, a, h, b):
        return a * b

    def cinv(self, g, a):
        if a == 0 or not self.supports(self.group.inv(g)):
            raise NotInvertible(f"{self.fmt_term(g, a)} is not invertible in {self.name}")
        return self.field.inv(a)

    def cone(self):
        return self.field.one

    def sample_coef(self, rng, g, values=SMALL_COEFFS):
        if self.field is QQI:
            return self.field.coerce(rng.choice(values)) + self.field.coerce(rng.choice(values)) * QQI.coerce(_I)
        return self.field.coerce(rng.choice(values))

    def basis_coefs(self, g) -> list:
        if not self.supports(g):
            return []
        return [self.field.one]

    def coef_to_json(self, c):
        return self.field.to_json(c)

    def coef_from_json(self, v):
        return self.field.from_json(v)

    def fmt_term(self, g, c) -> str:
        if self.var is not None and isinstance(self.group, FreeAbelianGroup) and self.group.rank == 1:
            if g == 0:
                return str(c)
            return f"{c}*{self.var}^{g}"
        return super().fmt_term(g, c)

    def describe(self):
        return {"kind": "group-algebra", "field": self.field.name, "group": self.group.describe(), "name": self.name}


class SkewGroupRing(GradedRing):
    """K[G; sigma]: (a g)(b h) = a sigma_g(b) gh, with sigma a map G -> Aut(K)."""

    def __init__(self, field: Field, group: Group, action: Callable[[Any, Any], Any], name: str | None = None):
        super().__init__(group)
        self.field = field
        self.action = action
        self.name = name or f"{field.name}[{group.kind};sigma]"
        self.is_graded_division = True

    def czero(self, g):
        return self.field.zero

    def cis_zero(self, c) -> bool:
        return c == 0

    def cadd(self, a, b):
        return a + b

    def cneg(self, a):
        return -a

    def cmul(self, g, a, h, b):
        return a * self.action(g, b)

    def cinv(self, g, a):
        if a == 0:
            raise NotInvertible("zero is not invertible")
        return self.action(self.group.inv(g), self.field.inv(a))

    def cone(self):
        return self.field.one

    def sample_coef(self, rng, g, values=SMALL_COEFFS):
        return self.field.coerce(rng.choice(values)) + self.field.coerce(rng.choice(values)) * QQI.coerce(_I)

    def basis_coefs(self, g) -> list:
        return [self.field.one, QQI.coerce(_I)]

    def coef_to_json(self, c):
        return self.field.to_json(c)

    def coef_from_json(self, v):
        return self.field.from_json(v)

    def describe(self):
        return {"kind": "catalog", "name": self.name}


class DualNumbers(GradedRing):
    """B[x]/(x^2) with x central of degree e; coefficients are pairs (a, b) meaning a + b*x."""

    def __init__(self, base: GradedRing, name: str | None = None, var: str = "xbar"):
        super().__init__(base.group)
        self.base = base
        self.var = var
        self.name = name or f"{base.name}[{var}]/({var}^2)"
        self.is_commutative = base.is_commutative

    def czero(self, g):
        z = self.base.czero(g)
        return (z, z)

    def cis_zero(self, c) -> bool:
        return self.base.cis_zero(c[0]) and self.base.cis_zero(c[1])

    def cadd(self, a, b):
        return (self.base.cadd(a[0], b[0]), self.base.cadd(a[1], b[1]))

    def cneg(self, a):
        return (self.base.cneg(a[0]), self.base.cneg(a[1]))

    def cmul(self, g, a, h, b):
        B = self.base
        return (B.cmul(g, a[0], h, b[0]), B.cadd(B.cmul(g, a[0], h, b[1]), B.cmul(g, a[1], h, b[0])))

    def cinv(self, g, a):
        B = self.base
        if B.cis_zero(a[0]):
            raise NotInvertible(f"{self.fmt_term(g, a)} lies in the ideal generated by {self.var}")
        gi = self.group.inv(g)
        u = B.cinv(g, a[0])
        # (a0 + a1 x)^{-1} = u - u a1 u x
        t = B.cmul(gi, u, g, B.cmul(g, a[1], gi, u))
        return (u, B.cneg(t))

    def cone(self):
        return (self.base.cone(), self.base.czero(self.group.identity))

    def supports(self, g) -> bool:
        return self.base.supports(g)

    def sample_coef(self, rng, g, values=SMALL_COEFFS):
        return (self.base.sample_coef(rng, g, values), self.base.sample_coef(rng, g, values))

    def basis_coefs(self, g) -> list:
        z = self.base.czero(g)
        return [(c, z) for c in self.base.basis_coefs(g)] + [(z, c) for c in self.base.basis_coefs(g)]

    def coef_to_json(self, c):
        return [self.base.coef_to_json(c[0]), self.base.coef_to_json(c[1])]

    def coef_from_json(self, v):
        if not isinstance(v, list) or len(v) != 2:
            raise RingError(f"{self.name} coefficients are pairs [a, b], got {v!r}")
        return (self.base.coef_from_json(v[0]), self.base.coef_from_json(v[1]))

    def fmt_term(self, g, c) -> str:
        parts = []
        if not self.base.cis_zero(c[0]):
            parts.append(self.base.fmt_term(g, c[0]))
        if not self.base.cis_zero(c[1]):
            parts.append(f"({self.base.fmt_term(g, c[1])})*{self.var}")
        return " + ".join(parts)

    def nilpotent_multiple(self, a: GradedElement) -> GradedElement | None:
        """y with a = xbar*y when a lies in the ideal generated by xbar, else None."""
        out = {}
        for g, c in a.comps.items():
            if not self.base.cis_zero(c[0]):
                return None
            out[g] = (c[1], self.base.czero(g))
        return self.elem(out)

    def generator(self) -> GradedElement:
        e = self.group.identity
        return self.elem({e: (self.base.czero(e), self.base.cone())})


class ProductRing(GradedRing):
    """R_1 x ... x R_k over a common grading group, graded componentwise."""

    def __init__(self, factors: list[GradedRing], name: str | None = None):
        G = factors[0].group
        if any(f.group != G for f in factors):
            raise RingError("factors must share the grading group")
        super().__init__(G)
        self.factors = tuple(factors)
        self.name = name or " x ".join(f.name for f in factors)
        self.is_commutative = all(f.is_commutative for f in factors)

    def czero(self, g):
        return tuple(f.czero(g) for f in self.factors)

    def cis_zero(self, c) -> bool:
        return all(f.cis_zero(x) for f, x in zip(self.factors, c))

    def cadd(self, a, b):
        return tuple(f.cadd(x, y) for f, x, y in zip(self.factors, a, b))

    def cneg(self, a):
        return tuple(f.cneg(x) for f, x in zip(self.factors, a))

    def cmul(self, g, a, h, b):
        return tuple(f.cmul(g, x, h, y) for f, x, y in zip(self.factors, a, b))

    def cinv(self, g, a):
        return tuple(f.cinv(g, x) for f, x in zip(self.factors, a))

    def cone(self):
        return tuple(f.cone() for f in self.factors)

    def supports(self, g) -> bool:
        return any(f.supports(g) for f in self.factors)

    def sample_coef(self, rng, g, values=SMALL_COEFFS):
        return tuple(f.sample_coef(rng, g, values) if f.supports(g) else f.czero(g) for f in self.factors)

    def basis_coefs(self, g) -> list:
        out = []
        zeros = [f.czero(g) for f in self.factors]
        for i, f in enumerate(self.factors):
            for c in f.basis_coefs(g):
                v = list(zeros)
                v[i] = c
                out.append(tuple(v))
        units = [f.unit_of_degree(g) for f in self.factors]
        if all(u is not None for u in units):
            out.append(tuple(units))
        return out

    def coef_to_json(self, c):
        return [f.coef_to_json(x) for f, x in zip(self.factors, c)]

    def coef_from_json(self, v):
        if not isinstance(v, list) or len(v) != len(self.factors):
            raise RingError(f"{self.name} coefficients are lists of length {len(self.factors)}, got {v!r}")
        return tuple(f.coef_from_json(x) for f, x in zip(self.factors, v))

    def project(self, a: GradedElement, i: int) -> GradedElement:
        f = self.factors[i]
        return f.elem({g: c[i] for g, c in a.comps.items()})

    def embed(self, parts: list[GradedElement]) -> GradedElement:
        degs = set()
        for p in parts:
            degs.update(p.comps)
        out = {}
        for g in degs:
            out[g] = tuple(p.comps.get(g, f.czero(g)) for f, p in zip(self.factors, parts))
        return self.elem(out)

    def fmt_term(self, g, c) -> str:
        inner = ", ".join(f.fmt_term(g, x) if not f.cis_zero(x) else "0" for f, x in zip(self.factors, c))
        return f"({inner})"


# graded homomorphisms

@dataclass
class GradedHom:
    """A graded ring homomorphism given on homogeneous components.

    image(g, c) is the image of the homogeneous element c*g; deg_map sends source degrees to
    target degrees (a group homomorphism, trivial when the target is ungraded).
    """
    name: str
    source: GradedRing
    target: GradedRing
    image: Callable[[Any, Any], GradedElement]
    deg_map: Callable[[Any], Any]

    def __call__(self, a: GradedElement) -> GradedElement:
        return self.apply(a)

    def apply(self, a: GradedElement) -> GradedElement:
        out = self.target.zero()
        for g, c in a.comps.items():
            out = out + self.image(g, c)
        return out

    def map_degree(self, g):
        return self.deg_map(g)


def apply_hom(f: GradedHom, a: GradedElement) -> GradedElement:
    return f.apply(a)


def identity_hom(R: GradedRing) -> GradedHom:
    return GradedHom(f"id_{R.name}", R, R, lambda g, c: R.hom(g, c), lambda g: g)


def compose_homs(f: GradedHom, g: GradedHom) -> GradedHom:
    """f after g."""
    def image(d, c):
        return f.apply(g.image(d, c))
    return GradedHom(f"{f.name}.{g.name}", g.source, f.target, image, lambda d: f.deg_map(g.deg_map(d)))


# catalog

_I = None


def _catalog() -> dict:
    global _I
    from .scalars import GaussQ
    _I = GaussQ(0, 1)
    triv = trivial_group()
    Q = GroupAlgebra(QQ, triv, name="Q")
    Q2 = GroupAlgebra(QQ, C2, name="Q2")
    QL = GroupAlgebra(QQ, Z, name="QL", var="t")
    QP = GroupAlgebra(QQ, Z, name="QP", support=lambda n: n >= 0, var="t")
    SK = SkewGroupRing(QQI, C2, lambda g, b: b.conj() if g == 1 else b, name="SK")
    TX = DualNumbers(QL, name="TX")
    EXF = ProductRing([Q2, Q2], name="EXF")
    return {"Q": Q, "Q2": Q2, "QL": QL, "QP": QP, "SK": SK, "TX": TX, "EXF": EXF}


CATALOG = _catalog()


def catalog_ring(name: str) -> GradedRing:
    if name not in CATALOG:
        raise RingError(f"unknown catalog ring {name!r}; known: {', '.join(sorted(CATALOG))}")
    return CATALOG[name]


def _homs() -> dict:
    Q, Q2, QL, QP, TX, EXF, SK = (CATALOG[k] for k in ("Q", "Q2", "QL", "QP", "TX", "EXF", "SK"))
    homs = {}

    def add(h):
        homs[h.name] = h

    for R in (Q, Q2, QL, QP, SK, TX, EXF):
        h = identity_hom(R)
        add(h)
    add(GradedHom("aug_Q2", Q2, Q, lambda g, c: Q.scalar(c), lambda g: 0))
    add(GradedHom("sign_Q2", Q2, Q, lambda g, c: Q.scalar(-c if g == 1 else c), lambda g: 0))
    add(GradedHom("pi_E", EXF, Q2, lambda g, c: Q2.hom(g, c[0]), lambda g: g))
    add(GradedHom("pi_F", EXF, Q2, lambda g, c: Q2.hom(g, c[1]), lambda g: g))
    add(GradedHom("incl_QP_QL", QP, QL, lambda g, c: QL.hom(g, c), lambda g: g))
    add(GradedHom("eval0_QP", QP, Q, lambda g, c: Q.scalar(c) if g == 0 else Q.zero(), lambda g: 0))
    add(GradedHom("eval1_QL", QL, Q, lambda g, c: Q.scalar(c), lambda g: 0))
    add(GradedHom("residue_TX", TX, QL, lambda g, c: QL.hom(g, c[0]), lambda g: g))
    return homs


HOMS = _homs()


def catalog_hom(name: str) -> GradedHom:
    if name not in HOMS:
        raise RingError(f"unknown catalog homomorphism {name!r}; known: {', '.join(sorted(HOMS))}")
    return HOMS[name]


def homs_from(R: GradedRing) -> list[GradedHom]:
    return [h for h in HOMS.values() if h.source is R]


def ring_from_json(d) -> GradedRing:
    if isinstance(d, str):
        return catalog_ring(d)
    if not isinstance(d, dict) or "kind" not in d:
        raise RingError(f"ring description must be a catalog name or an object with 'kind': {d!r}")
    if d["kind"] == "catalog":
        return catalog_ring(d["name"])
    if d["kind"] == "group-algebra":
        from .grp import group_from_json
        return GroupAlgebra(field_from_name(d["field"]), group_from_json(d["group"]), name=d.get("name"))
    raise RingError(f"unknown ring kind {d['kind']!r}")


# structural checks

@dataclass
class LocalReport:
    is_local: bool
    checked: int
    witness: tuple | None = None


def is_graded_local(R: GradedRing, seed: int = 0, samples: int = 300, radius: int = 1) -> LocalReport:
    """Sampling check that homogeneous non-units are closed under sums and products.

    For a product ring a witness is produced directly from the factor identities.
    """
    if isinstance(R, ProductRing) and len(R.factors) > 1:
        e = R.group.identity
        parts = []
        for i in range(len(R.factors)):
            v = [f.czero(e) for f in R.factors]
            v[i] = R.factors[i].cone()
            parts.append(R.hom(e, tuple(v)))
        return LocalReport(False, 0, (parts[0], parts[1], parts[0] + parts[1]))
    rng = random.Random(seed)
    degs = [g for g in R.group.ball(radius) if R.supports(g)]
    checked = 0
    nonunits: dict = {}
    for _ in range(samples):
        g = rng.choice(degs)
        a = R.sample_homogeneous(rng, g)
        if not R.is_unit(a):
            nonunits.setdefault(g, []).append(a)
    for g, xs in nonunits.items():
        for a in xs[:20]:
            for b in xs[:20]:
                checked += 1
                s = a + b
                if R.is_unit(s):
                    return LocalReport(False, checked, (a, b, s))
    for g, xs in nonunits.items():
        for a in xs[:10]:
            for h in degs[:5]:
                b = R.sample_homogeneous(rng, h)
                for p in (a * b, b * a):
                    checked += 1
                    if R.is_unit(p):
                        return LocalReport(False, checked, (a, b, p))
    return LocalReport(True, checked, None)


def check_graded_division(R: GradedRing, seed: int = 0, samples: int = 200, radius: int = 2) -> tuple[bool, int]:
    """Sample non-zero homogeneous elements and confirm two-sided inverses exist and are correct."""
    rng = random.Random(seed)
    degs = [g for g in R.group.ball(radius) if R.supports(g)]
    n = 0
    for _ in range(samples):
        a = R.sample_homogeneous(rng, rng.choice(degs))
        if a.is_zero():
            continue
        n += 1
        try:
            b = R.invert(a)
        except NotInvertible:
            return False, n
        if a * b != R.one() or b * a != R.one():
            return False, n
    return True, n


def sample_elements(R: GradedRing, rng: random.Random, count: int, radius: int = 2) -> Iterable[GradedElement]:
    degs = [g for g in R.group.ball(radius) if R.supports(g)]
    for _ in range(count):
        a = R.zero()
        for _ in range(rng.randint(1, 3)):
            a = a + R.sample_homogeneous(rng, rng.choice(degs))
        yield a
