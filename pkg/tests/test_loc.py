import dataclasses
import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from grlin import gdlin, loc
from grlin.examples import malcolmson_fixtures
from grlin.hmat import HMatrix, apply_hom_matrix, identity, zeros
from grlin.mideal import MalformedCertificate
from grlin.ring import catalog_hom, catalog_ring
from grlin.sampling import SampleConfig
from grlin.suites import random_closure_element, random_tuple

Q, Q2, QP, QL = (catalog_ring(n) for n in ("Q", "Q2", "QP", "QL"))
x = Q2.hom(1, Fr(1))
t = QP.hom(1, Fr(1))
tinv = QL.hom(-1, Fr(1))
id_q2 = catalog_hom("id_Q2")
incl = catalog_hom("incl_QP_QL")
SIG_QP = loc.inverting_set_of(incl)
SIG_Q2 = loc.inverting_set_of(id_q2)


def ev(f, s):
    return loc.tuple_eval(f, s)


def t_inverse_tuple():
    F = HMatrix(QP, (-1,), (-1,), [[QP.one()]])
    A = HMatrix(QP, (0,), (-1,), [[t]])
    X = HMatrix(QP, (0,), (0,), [[QP.one()]])
    return loc.LocTuple(F, A, X, -1)


# tuples

def test_mu_examples():
    z = loc.tuple_mu(Q2, Q2.zero())
    assert z.F.is_zero() and z.A.same_grid(identity(Q2, (0,))) and z.gamma == 0
    o = loc.tuple_mu(Q2, Q2.one())
    assert ev(id_q2, o) == Q2.one()
    mx = loc.tuple_mu(Q2, x)
    assert mx.gamma == 1 and mx.F.rows[0][0] == x and mx.check(SIG_Q2)
    with pytest.raises(Exception):
        loc.tuple_mu(Q2, Q2.one() + x)


def test_tuple_for_t_inverse():
    s = t_inverse_tuple()
    assert s.check(SIG_QP)
    assert ev(incl, s) == tinv


def test_sum_product_examples():
    s = t_inverse_tuple()
    assert ev(incl, loc.tuple_add(s, loc.tuple_mu(QP, QP.zero(), -1))) == tinv
    assert ev(incl, loc.tuple_add(s, loc.tuple_neg(s))).is_zero()
    a, b = x, Q2.hom(1, Fr(3))
    assert ev(id_q2, loc.tuple_add(loc.tuple_mu(Q2, a), loc.tuple_mu(Q2, b))) == a + b
    mx = loc.tuple_mu(Q2, x)
    assert ev(id_q2, loc.tuple_mul(mx, mx)) == Q2.one()
    prod = loc.tuple_mul(loc.tuple_mu(QP, t), s)
    assert prod.gamma == 0 and prod.check(SIG_QP)
    assert ev(incl, prod) == QL.one()
    assert ev(incl, loc.tuple_mul(s, loc.tuple_mu(QP, QP.one()))) == tinv
    with pytest.raises(Exception):
        loc.tuple_add(s, loc.tuple_mu(QP, t))


def test_eval_rejects_singular_image():
    bad = loc.LocTuple(HMatrix(QP, (0,), (0,), [[QP.one()]]), HMatrix(QP, (0,), (0,), [[QP.zero()]]),
                       HMatrix(QP, (0,), (0,), [[QP.one()]]), 0)
    assert not bad.check(SIG_QP)
    with pytest.raises(gdlin.SingularError):
        ev(incl, bad)


def test_size_cap():
    e = 0
    big = loc.LocTuple(zeros(QP, (e,), (e,) * 40), identity(QP, (e,) * 40), zeros(QP, (e,) * 40, (e,)), e)
    with pytest.raises(loc.BudgetError):
        loc.tuple_add(big, big)
    with pytest.raises(loc.BudgetError):
        loc.tuple_mul(big, big)


def test_tuple_json_round_trip():
    s = t_inverse_tuple()
    back = loc.tuple_from_json(QP, loc.tuple_to_json(s))
    assert back.gamma == -1 and back.A.same_grid(s.A) and ev(incl, back) == tinv
    with pytest.raises(MalformedCertificate):
        loc.tuple_from_json(QP, {"gamma": 0})


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_evaluation_is_a_ring_homomorphism(seed):
    rng = random.Random(seed)
    cfg = SampleConfig(zero_prob=0.3)
    g1, g2 = rng.choice([-1, 0, 1]), rng.choice([-1, 0, 1])
    s, u = random_tuple(QP, incl, rng, g1, cfg), random_tuple(QP, incl, rng, g2, cfg)
    s2 = random_tuple(QP, incl, rng, g1, cfg)
    assert ev(incl, loc.tuple_mul(s, u)) == ev(incl, s) * ev(incl, u)
    assert ev(incl, loc.tuple_add(s, s2)) == ev(incl, s) + ev(incl, s2)
    assert ev(incl, loc.tuple_neg(s)) == -ev(incl, s)
    r = QP.sample_homogeneous(rng, rng.choice([0, 1, 2]))
    assert ev(incl, loc.tuple_mu(QP, r)) == incl.apply(r)
    assert ev(incl, loc.tuple_mul(loc.tuple_mu(QP, r), s)) == incl.apply(r) * ev(incl, s)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_inverse_tuples_reproduce_the_inverse(seed):
    rng = random.Random(seed)
    s = random_tuple(QP, incl, rng, 0, SampleConfig())
    A = s.A
    B = gdlin.invert(apply_hom_matrix(incl, A))
    for i in range(A.n):
        for j in range(A.m):
            ti = loc.inverse_tuple(A, i, j)
            assert ti.check(SIG_QP)
            assert ev(incl, ti) == B.rows[i][j]


# kernel certificates

def test_trivial_cert_and_r_one():
    c = loc.trivial_cert(Q2)
    assert loc.malcolmson_verify(c, SIG_Q2)
    bad = dataclasses.replace(c, r=Q2.one())
    v = loc.malcolmson_verify(bad, SIG_Q2)
    assert not v and v.cell == (3, 3)


def test_fixtures_verify_and_map_r_to_zero():
    fx = malcolmson_fixtures()
    assert len(fx) >= 5
    for name, c, sigma, f in fx:
        assert loc.malcolmson_verify(c, sigma), name
        fr, chain = loc.malcolmson_soundness(c, f)
        assert fr.is_zero() and chain.is_zero(), name


def test_malformed_cert_raises():
    c = loc.trivial_cert(Q2)
    with pytest.raises(MalformedCertificate):
        loc.malcolmson_verify(dataclasses.replace(c, W=zeros(Q2, (0, 0), (0,))), SIG_Q2)
    with pytest.raises(MalformedCertificate):
        loc.malcolmson_verify(dataclasses.replace(c, gamma=1), SIG_Q2)


def test_equivalence_constructions_verify():
    s = t_inverse_tuple()
    assert loc.equivalence_verify(loc.reflexive_equivalence(s), SIG_QP)
    for name, c, sigma, f in malcolmson_fixtures()[:3]:
        conv = loc.converse_equivalence(c)
        assert loc.equivalence_verify(conv, sigma), name
        sw = loc.swap_equivalence(conv)
        assert loc.equivalence_verify(sw, sigma), name
        fwd = loc.forward_malcolmson(sw)
        assert loc.malcolmson_verify(fwd, sigma) and fwd.r == -c.r


def test_cert_json_round_trip():
    for name, c, sigma, f in malcolmson_fixtures():
        back = loc.cert_from_json(c.L.ring, loc.cert_to_json(c))
        assert loc.malcolmson_verify(back, sigma), name
    with pytest.raises(MalformedCertificate):
        loc.cert_from_json(Q2, {"r": []})


def test_nonzero_check_over_graded_field():
    rep = loc.nonzero_localization_check(SIG_Q2, seed=0, tries=200)
    assert rep["r1_cert_found"] is False


def test_supplied_false_cert_reports_coordinates():
    bad = dataclasses.replace(loc.trivial_cert(Q2), r=Q2.one())
    rep = loc.nonzero_localization_check(SIG_Q2, seed=0, tries=10, supplied=bad)
    assert rep["supplied_verdict"]["ok"] is False and rep["supplied_verdict"]["cell"] == (3, 3)


def test_non_full_member_rejected_at_sigma():
    z, o = Q.zero(), Q.one()
    c = loc.MalcolmsonCert(z, 0, HMatrix(Q, (0,), (0,), [[z]]), identity(Q, (0,)), HMatrix(Q, (0,), (0,), [[z]]),
                           HMatrix(Q, (0,), (0,), [[z]]), HMatrix(Q, (0, 0), (0, 0), [[z, z], [z, o]]),
                           zeros(Q, (0,), (0, 0)), HMatrix(Q, (0, 0), (0, 0), [[z, z], [z, o]]), zeros(Q, (0, 0), (0,)))
    v = loc.malcolmson_verify(c, loc.inverting_set_of(catalog_hom("id_Q")))
    assert not v and "L" in v.reason


def test_contradiction_path_for_an_oversized_sigma():
    # Sigma = every square matrix is not made of full matrices, so an r = 1 cert exists
    z, o = Q.zero(), Q.one()
    everything = loc.InvertingSet(Q, lambda A: True, "all")
    c = loc.MalcolmsonCert(o, 0, HMatrix(Q, (0,), (0,), [[z]]), HMatrix(Q, (0,), (0,), [[z]]),
                           HMatrix(Q, (0,), (0,), [[o]]), HMatrix(Q, (0,), (0,), [[z]]),
                           HMatrix(Q, (0, 0), (0, 0), [[o, z], [z, z]]), HMatrix(Q, (0,), (0, 0), [[o, z]]),
                           zeros(Q, (0, 0), (0, 0)), HMatrix(Q, (0, 0), (0,), [[o], [z]]))
    rep = loc.nonzero_localization_check(everything, seed=0, tries=5, supplied=c)
    assert rep["supplied_verdict"]["ok"]
    assert rep["contradiction"] == {"nonfull": True, "in_sigma": True}


# Cramer's rule and the closure

def cramer_t_inverse():
    A = HMatrix(QP, (0,), (0, -1), [[-QP.one(), t]])
    u = HMatrix(QL, (0, -1), (0,), [[QL.one()], [tinv]])
    return A, u


def test_cramer_t_inverse():
    A, u = cramer_t_inverse()
    res = loc.cramer_split(A, u, incl, SIG_QP)
    assert res.x == tinv and res.x_invertible and res.numerator_invertible
    assert res.numerator.rows[0][0] == -QP.one()
    assert res.witness is None


def test_cramer_trivial_system():
    A = HMatrix(Q2, (0,), (0, 0), [[-Q2.one(), Q2.one()]])
    u = HMatrix(Q2, (0, 0), (0,), [[Q2.one()], [Q2.one()]])
    res = loc.cramer_split(A, u, id_q2)
    assert res.x == Q2.one() and res.x_invertible and res.numerator_invertible


def test_cramer_zero_branch_has_witness():
    # rows: 0 + 0*u1 + x_inf = 0 and x - u1 = 0, so u = (1; x; 0)
    A =HMatrix(Q2, (0, 1), (0, 1, 0), [[Q2.zero(), Q2.zero(), Q2.one()], [x, -Q2.one(), Q2.zero()]])
    u = HMatrix(Q2, (0, 1, 0), (0,), [[Q2.one()], [x], [Q2.zero()]])
    res = loc.cramer_split(A, u, id_q2)
    assert res.x.is_zero() and not res.x_invertible and not res.numerator_invertible
    assert res.witness is not None and res.witness.P.n < res.numerator.n


def test_cramer_rejects_inconsistent_input():
    A, _ = cramer_t_inverse()
    wrong = HMatrix(QL, (0, -1), (0,), [[QL.one()], [QL.hom(-1, Fr(2))]])
    with pytest.raises(loc.InconsistentInput):
        loc.cramer_split(A, wrong, incl)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(["QP", "Q2", "EXF"]))
def test_cramer_invertibility_agrees(seed, rname):
    hname = {"QP": "incl_QP_QL", "Q2": "id_Q2", "EXF": "pi_F"}[rname]
    R, f = catalog_ring(rname), catalog_hom(hname)
    d7 = random_closure_element(R, f, random.Random(seed), SampleConfig(zero_prob=0.3))
    res = loc.cramer_split(d7.A, d7.u, f)
    assert res.x_invertible == res.numerator_invertible
    if res.x.is_zero():
        assert res.witness is not None


def test_rational_closure_entries():
    B, labels = loc.rational_closure_entries(id_q2, identity(Q2, (0, 1)))
    assert B.same_grid(identity(Q2, (0, 1))) and labels == [[0, 1], [1, 0]]
    A = HMatrix(Q2, (0, 1), (0, 1), [[Q2.one(), x], [x, -Q2.one()]])
    B, labels = loc.rational_closure_entries(id_q2, A)
    h = Fr(1, 2)
    assert [[B.rows[i][j] for j in range(2)] for i in range(2)] == [
        [Q2.hom(0, h), Q2.hom(1, h)], [Q2.hom(1, h), Q2.hom(0, -h)]]
    assert labels == [[0, 1], [1, 0]]
    B, labels = loc.rational_closure_entries(incl, HMatrix(QP, (1,), (0,), [[t]]))
    assert B.rows[0][0] == tinv and labels == [[-1]]


def test_inverse_witness_examples():
    A, u = cramer_t_inverse()
    s = loc.closure_inverse_witness(loc.Form7(incl, A, u), SIG_QP)
    assert ev(incl, s) == QL.hom(1, Fr(1)) and s.gamma == 1
    A1 = HMatrix(Q2, (0,), (0, 0), [[-Q2.one(), Q2.one()]])
    u1 = HMatrix(Q2, (0, 0), (0,), [[Q2.one()], [Q2.one()]])
    assert ev(id_q2, loc.closure_inverse_witness(loc.Form7(id_q2, A1, u1))) == Q2.one()
    z = HMatrix(Q2, (0, 1), (0,), [[Q2.one()], [Q2.zero()]])
    with pytest.raises(loc.InconsistentInput):
        loc.closure_inverse_witness(loc.Form7(id_q2, HMatrix(Q2, (0,), (0, 1), [[Q2.zero(), x]]), z))


def t_minus_two():
    A = HMatrix(QP, (0, -1), (0, -1, -2), [[-QP.one(), t, QP.zero()], [QP.zero(), -QP.one(), t]])
    u = HMatrix(QL, (0, -1, -2), (0,), [[QL.one()], [tinv], [tinv * tinv]])
    return loc.Form7(incl, A, u)


def test_common_denominator_examples():
    A, u = cramer_t_inverse()
    d = loc.Form7(incl, A, u)
    same = loc.common_denominator(d, d)
    assert same.first.value() == same.second.value() == tinv
    assert same.first.A.shape == (2, 3) and same.second.A.shape == (2, 3)
    assert same.denominators_agree()
    d2 = t_minus_two()
    assert d2.check()
    cd = loc.common_denominator(d, d2)
    assert (cd.first.value(), cd.second.value()) == (tinv, tinv * tinv)
    assert cd.first.check() and cd.second.check() and cd.denominators_agree()


def test_normalization_examples():
    A = HMatrix(Q2, (0, 1), (0, 1), [[Q2.one(), x], [x, -Q2.one()]])
    d2 = loc.Form2(id_q2, A, 0, 1)
    d3 = loc.representation_normalize(d2, 3)
    assert isinstance(d3, loc.Form3) and d3.value() == d2.value() == Q2.hom(1, Fr(1, 2))
    A5, u5 = cramer_t_inverse()
    f5 = loc.representation_normalize(loc.Form7(incl, A5, u5), 5)
    f7 = loc.representation_normalize(f5, 7)
    assert isinstance(f7, loc.Form7) and f7.check() and f7.value() == tinv
    f6 = loc.representation_normalize(f5, 6)
    f1 = loc.representation_normalize(f6, 1)
    n = f6.A.n
    assert isinstance(f1, loc.Form1) and (f1.j, f1.i) == (n + 1, 0) and f1.value() == tinv
    with pytest.raises(ValueError):
        loc.representation_normalize(f5, 8)


def test_closure_sum_and_product_examples():
    A, u = cramer_t_inverse()
    x5 = loc.representation_normalize(loc.Form7(incl, A, u), 5)
    s = loc.closure_sum(x5, x5)
    assert s.check() and s.value() == QL.hom(-1, Fr(2))
    p = loc.closure_product(x5, x5)
    assert p.check() and p.value() == tinv * tinv


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([("QP", "incl_QP_QL"), ("Q2", "id_Q2"), ("EXF", "pi_E")]))
def test_closure_properties(seed, setting):
    R, f = catalog_ring(setting[0]), catalog_hom(setting[1])
    rng = random.Random(seed)
    cfg = SampleConfig(zero_prob=0.3)
    d7, e7 = random_closure_element(R, f, rng, cfg), random_closure_element(R, f, rng, cfg)
    xv, yv = d7.value(), e7.value()
    for form in range(1, 8):
        assert loc.representation_normalize(d7, form).value() == xv
    x5, y5 = loc.representation_normalize(d7, 5), loc.representation_normalize(e7, 5)
    p = loc.closure_product(x5, y5)
    assert p.check() and p.value() == xv * yv
    if x5.A.beta[-1] == y5.A.beta[-1]:
        s = loc.closure_sum(x5, y5)
        assert s.check() and s.value() == xv + yv
    cd = loc.common_denominator(d7, e7)
    assert (cd.first.value(), cd.second.value()) == (xv, yv)
    if xv.comps and f.target.is_unit(xv):
        tt = loc.closure_inverse_witness(d7)
        assert ev(f, tt) * xv == f.target.one()
