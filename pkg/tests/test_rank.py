from fractions import Fraction as Fr

import pytest

from grlin import rank
from grlin.hmat import HMatrix, identity, zeros
from grlin.ring import catalog_hom, catalog_ring

Q2, QP, QL, EXF = (catalog_ring(n) for n in ("Q2", "QP", "QL", "EXF"))
one, x = Q2.one(), Q2.hom(1, Fr(1))
SINGULAR = HMatrix(Q2, (0, 1), (0, 1), [[one, x], [x, one]])
t = QP.hom(1, Fr(1))
T = HMatrix(QP, (1,), (0,), [[t]])


def test_induced_rank_examples():
    assert rank.induced_rank(catalog_hom("id_Q2"), SINGULAR) == 1
    e1 = HMatrix(EXF, (0,), (0,), [[EXF.hom(0, (Fr(0), Fr(1)))]])
    assert rank.induced_rank(catalog_hom("pi_E"), e1) == 0
    assert rank.induced_rank(catalog_hom("incl_QP_QL"), T) == 1


def test_singular_kernel_examples():
    kE = rank.singular_kernel(catalog_hom("pi_E"))
    assert kE.member(HMatrix(EXF, (0,), (0,), [[EXF.hom(0, (Fr(0), Fr(1)))]]))
    assert not kE.member(HMatrix(EXF, (0,), (0,), [[EXF.hom(0, (Fr(1), Fr(0)))]]))
    kid = rank.singular_kernel(catalog_hom("id_Q2"))
    assert kid.member(SINGULAR) and not kid.member(identity(Q2, (0, 1)))


def test_rank_from_pmi_and_back():
    P = rank.singular_kernel(catalog_hom("id_Q2"))
    assert rank.rank_from_pmi(P, SINGULAR) == 1
    assert rank.rank_from_pmi(P, identity(Q2, (0, 0, 1))) == 3
    r = rank.induced_rank_fn(catalog_hom("id_Q2"))
    P2 = rank.pmi_from_rank(r, Q2)
    assert P2.member(SINGULAR) and not P2.member(identity(Q2, (0,)))


def test_module_and_map_rank_examples():
    r = rank.induced_rank_fn(catalog_hom("incl_QP_QL"))
    di = rank.module_rank_fn(r)
    assert rank.module_rank(r, T) == 0
    assert di(zeros(QP, (0, 0), ())) == 2
    assert di(identity(QP, (0, 0))) == 0
    assert rank.map_rank(di, identity(QP, (0, 0))) == 2
    assert rank.map_rank(di, zeros(QP, (0, 0), (0,))) == 0
    assert rank.map_rank(di, T) == 1


def test_matrf_passes_and_corruption_is_caught():
    r = rank.induced_rank_fn(catalog_hom("id_Q2"))
    assert rank.verify_matrf(r, Q2, seed=2, budget=200).passed
    bad = rank.verify_matrf(rank.corrupted_rank(r), Q2, seed=2, budget=200)
    assert not bad.passed and bad.counterexample is not None


def test_modrf_and_maprf():
    f = catalog_hom("id_QL")
    di = rank.module_rank_direct(f)
    assert rank.verify_modrf(di, QL, seed=1, budget=80).passed
    assert rank.verify_maprf(lambda F: rank.map_rank(di, F), QL, seed=1, budget=80).passed


def test_pm_suites():
    for h in ("pi_E", "incl_QP_QL"):
        assert rank.verify_pm(rank.singular_kernel(catalog_hom(h)), seed=4, budget=60).passed


def test_specialization_between_projection_kernels():
    kE = rank.singular_kernel(catalog_hom("pi_E"))
    kF = rank.singular_kernel(catalog_hom("pi_F"))
    a = rank.specialization_leq(kE, kF)
    b = rank.specialization_leq(kF, kE)
    assert a is not None and kE.member(a) and not kF.member(a)
    assert b is not None and kF.member(b) and not kE.member(b)
    # the 1x1 counterexamples are the two idempotents
    assert {a.rows[0][0], b.rows[0][0]} == {EXF.hom(0, (Fr(0), Fr(1))), EXF.hom(0, (Fr(1), Fr(0)))}
    assert rank.specialization_leq(kE, kE) is None


def test_round_trips():
    for h in ("id_Q2", "pi_F", "residue_TX"):
        assert rank.round_trip_report(catalog_hom(h), seed=5, budget=60).passed


def test_non_division_target_rejected():
    with pytest.raises(Exception):
        rank.induced_rank_fn(catalog_hom("id_QP"))
