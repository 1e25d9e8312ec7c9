import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from grlin.ring import (CATALOG, HOMS, NotInvertible, RingError, catalog_hom, catalog_ring, check_graded_division,
                        is_graded_local, ring_from_json)
from grlin.scalars import GaussQ

Q2, QL, QP, SK, TX, EXF = (catalog_ring(n) for n in ("Q2", "QL", "QP", "SK", "TX", "EXF"))


def test_skew_relation():
    x = SK.hom(1, SK.cone())
    i = SK.scalar(GaussQ(0, 1))
    assert x * i == -(i * x)
    assert (SK.one() - x) * (SK.one() + x) == SK.zero()


def test_dual_numbers_unit():
    xb = TX.generator()
    assert (TX.one() + xb) * (TX.one() - xb) == TX.one()
    with pytest.raises(NotInvertible):
        TX.invert(xb)


def test_inverses():
    assert Q2.invert(Q2.hom(1, Fr(2))) == Q2.hom(1, Fr(1, 2))
    assert QL.invert(QL.hom(2, Fr(3))) == QL.hom(-2, Fr(1, 3))
    with pytest.raises(NotInvertible):
        QP.invert(QP.hom(1, Fr(1)))


def test_graded_local():
    assert is_graded_local(TX).is_local
    assert is_graded_local(Q2).is_local
    rep = is_graded_local(EXF)
    assert not rep.is_local
    a, b, s = rep.witness
    assert a + b == EXF.one() and s == EXF.one()


def test_hom_examples():
    x = Q2.hom(1, Fr(1))
    assert catalog_hom("aug_Q2")(Q2.one() + x) == catalog_ring("Q").scalar(Fr(2))
    assert catalog_hom("pi_E")(EXF.hom(0, (Fr(0), Fr(1)))).is_zero()
    t = QP.hom(1, Fr(1))
    assert catalog_hom("incl_QP_QL")(t) == QL.hom(1, Fr(1))


def test_graded_division_flags_match_sampling():
    for name, R in CATALOG.items():
        if R.is_graded_division:
            ok, n = check_graded_division(R, seed=3, samples=100)
            assert ok and n > 0, name


def test_element_json_round_trip():
    rng = random.Random(0)
    for R in CATALOG.values():
        for g in R.group.ball(1):
            a = R.sample_homogeneous(rng, g)
            assert R.element_from_json(R.element_to_json(a)) == a


def test_ring_from_json_rejects_unknown():
    with pytest.raises((RingError, KeyError)):
        ring_from_json("NOPE")


def _sample(R, seed):
    rng = random.Random(seed)
    degs = [g for g in R.group.ball(1) if R.supports(g)]
    out = R.zero()
    for _ in range(rng.randint(1, 3)):
        out = out + R.sample_homogeneous(rng, rng.choice(degs))
    return out


RINGS = sorted(CATALOG)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(RINGS), st.integers(0, 10 ** 6))
def test_ring_axioms(name, seed):
    R = CATALOG[name]
    a, b, c = _sample(R, seed), _sample(R, seed + 1), _sample(R, seed + 2)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c
    assert a * R.one() == a == R.one() * a
    assert a + (-a) == R.zero()


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(RINGS), st.integers(0, 10 ** 6))
def test_components_multiply_into_product_degree(name, seed):
    R = CATALOG[name]
    rng = random.Random(seed)
    degs = [g for g in R.group.ball(1) if R.supports(g)]
    g, h = rng.choice(degs), rng.choice(degs)
    p = R.sample_homogeneous(rng, g) * R.sample_homogeneous(rng, h)
    assert R.homogeneous_of(p, R.group.op(g, h))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(sorted(HOMS)), st.integers(0, 10 ** 6))
def test_homs_are_ring_maps(name, seed):
    f = HOMS[name]
    a, b = _sample(f.source, seed), _sample(f.source, seed + 7)
    assert f(a * b) == f(a) * f(b)
    assert f(a + b) == f(a) + f(b)
    assert f(f.source.one()) == f.target.one()
