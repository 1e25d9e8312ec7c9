import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from grlin.hmat import (DistributionError, FactorizationWitness, HMatrix, MalformedWitness, ShapeError, det_sum,
                        direct_sum, find_nonfull_witness, hollow_witness, identity, is_hollow, mat_mul,
                        matrix_from_json, matrix_to_json, permutation_matrix, permute, transpose, verify_nonfull,
                        zeros)
from grlin.ring import catalog_ring
from grlin.sampling import SampleConfig, sample_matrix

Q2, QP, EXF = catalog_ring("Q2"), catalog_ring("QP"), catalog_ring("EXF")
one, x = Q2.one(), Q2.hom(1, Fr(1))


def test_valid_and_invalid_distribution():
    HMatrix(Q2, (0, 1), (0, 1), [[one, x], [x, one]])
    with pytest.raises(DistributionError) as exc:
        HMatrix(Q2, (0, 0), (0, 1), [[one, x], [x, one]])
    assert exc.value.cell == (2, 1)
    assert "(2,1)" in str(exc.value)
    t = QP.hom(1, Fr(1))
    HMatrix(QP, (0,), (0, -1), [[-QP.one(), t]])


def test_product_examples():
    A = HMatrix(Q2, (0, 1), (0, 1), [[one, x], [x, -one]])
    two = one + one
    assert mat_mul(A, A).rows == [[two, Q2.zero()], [Q2.zero(), two]]
    assert mat_mul(identity(Q2, (0, 1)), A) == A
    col = HMatrix(Q2, (0, 1), (0,), [[one], [x]])
    row = HMatrix(Q2, (0,), (0, 1), [[one, x]])
    P = mat_mul(col, row)
    assert P.shape == (2, 2) and P.alpha == (0, 1) and P.beta == (0, 1)


def test_product_needs_matching_distributions():
    A = identity(Q2, (0, 1))
    B = identity(Q2, (1, 0))
    with pytest.raises(DistributionError):
        mat_mul(A, B)


def test_direct_sums():
    A = identity(Q2, (0,))
    empty = HMatrix(Q2, (), (), [])
    assert direct_sum(A, empty) == A
    assert direct_sum(A, A) == identity(Q2, (0, 0))
    B = identity(Q2, (0, 1))
    S = direct_sum(A, B)
    assert S.shape == (3, 3) and S.rows[0][1].is_zero() and S.rows[2][0].is_zero()


def test_det_sum_examples():
    A = HMatrix(Q2, (0, 1), (0, 1), [[one, x], [x, one]])
    D = det_sum(A, A, "col", 0)
    assert D.rows[0][0] == one + one and D.rows[1][1] == one
    a = EXF.hom(0, (Fr(1), Fr(0)))
    b = EXF.hom(0, (Fr(0), Fr(1)))
    e1, z = EXF.one(), EXF.zero()
    L = HMatrix(EXF, (0, 0), (0, 0), [[a, z], [e1, b]])
    R = HMatrix(EXF, (0, 0), (0, 0), [[z, z], [-e1, b]])
    assert det_sum(L, R, "col", 0).rows == [[a, z], [z, b]]
    B = HMatrix(Q2, (0, 1), (0, 1), [[one + one, Q2.zero()], [x, -one]])
    with pytest.raises(ShapeError):
        det_sum(A, B, "col", 0)


def test_permute_and_transpose():
    A = HMatrix(Q2, (0, 1), (0, 1), [[one, x], [x, -one]])
    assert permute(A, [0, 1], [0, 1]) == A
    S = permute(A, [1, 0], None)
    assert S.alpha == (1, 0) and S.rows[0] == A.rows[1]
    T = transpose(A)
    assert T.rows[0][1] == x
    E = permutation_matrix(Q2, A.alpha, [1, 0])
    assert mat_mul(E, A) == S


def test_permutation_distributes_over_det_sum():
    A = HMatrix(Q2, (0, 1), (0, 1), [[one, x], [x, -one]])
    B = HMatrix(Q2, (0, 1), (0, 1), [[one + one, x], [x + x, -one]])
    E = permutation_matrix(Q2, A.alpha, [1, 0])
    lhs = mat_mul(E, det_sum(A, B, "col", 0))
    rhs = det_sum(mat_mul(E, A), mat_mul(E, B), "col", 0)
    assert lhs == rhs


def test_hollow_examples():
    QL = catalog_ring("QL")
    a, b, c, d, f = (QL.hom(0, Fr(k)) for k in (1, 2, 3, 4, 5))
    z = QL.zero()
    H = HMatrix(QL, (0, 0, 0), (0, 0, 0), [[a, z, z], [b, z, z], [c, d, f]])
    hb = is_hollow(H)
    assert hb is not None and hb.r + hb.s > 3
    assert verify_nonfull(H, hollow_witness(H, hb))
    assert is_hollow(identity(QL, (0, 0, 0))) is None
    hz = is_hollow(zeros(QL, (0,), (0,)))
    assert (hz.r, hz.s) == (1, 1)


def test_factorization_witnesses():
    a = EXF.hom(0, (Fr(1), Fr(0)))
    b = EXF.hom(0, (Fr(0), Fr(1)))
    e1, z = EXF.one(), EXF.zero()
    L = HMatrix(EXF, (0, 0), (0, 0), [[a, z], [e1, b]])
    w = FactorizationWitness(HMatrix(EXF, (0, 0), (0,), [[a], [e1]]), HMatrix(EXF, (0,), (0, 0), [[e1, b]]))
    assert verify_nonfull(L, w)
    I2 = identity(Q2, (0, 0))
    w2 = FactorizationWitness(HMatrix(Q2, (0, 0), (0,), [[one], [one]]), HMatrix(Q2, (0,), (0, 0), [[one, one]]))
    assert not verify_nonfull(I2, w2)
    w3 = FactorizationWitness(identity(Q2, (0, 0)), identity(Q2, (0, 0)))
    with pytest.raises(MalformedWitness):
        verify_nonfull(I2, w3)


def test_json_round_trip_and_schema_errors():
    A = HMatrix(Q2, (0, 1), (0, 1), [[one, x], [x, one]])
    assert matrix_from_json(Q2, matrix_to_json(A)) == A
    with pytest.raises(ShapeError):
        matrix_from_json(Q2, {"alpha": []})


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(["Q2", "QL", "SK", "EXF", "TX"]), st.integers(0, 10 ** 6))
def test_transpose_reverses_products(name, seed):
    R = catalog_ring(name)
    if not R.is_commutative:
        return
    rng = random.Random(seed)
    A = sample_matrix(R, rng, SampleConfig(max_size=3))
    B = sample_matrix(R, rng, SampleConfig(max_size=3), shape=(A.n, rng.randint(1, 3)), alpha=A.beta)
    assert transpose(mat_mul(A, B)) == mat_mul(transpose(B), transpose(A))


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(["Q2", "QL", "SK", "EXF", "TX", "QP"]), st.integers(0, 10 ** 6))
def test_found_witnesses_verify(name, seed):
    R = catalog_ring(name)
    A = sample_matrix(R, random.Random(seed), SampleConfig(max_size=3))
    if not A.is_square():
        return
    w = find_nonfull_witness(A)
    if w is not None:
        assert verify_nonfull(A, w)
