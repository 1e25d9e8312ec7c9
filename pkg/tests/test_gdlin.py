import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from grlin import gdlin
from grlin.hmat import HMatrix, identity, mat_mul, zeros
from grlin.ring import catalog_ring
from grlin.sampling import SampleConfig, random_invertible, sample_matrix

from oracles import oracle_rank, q2_character

Q2 = catalog_ring("Q2")
one, x = Q2.one(), Q2.hom(1, Fr(1))
half = Q2.hom(0, Fr(1, 2))
xhalf = Q2.hom(1, Fr(1, 2))
SINGULAR = HMatrix(Q2, (0, 1), (0, 1), [[one, x], [x, one]])
REGULAR = HMatrix(Q2, (0, 1), (0, 1), [[one, x], [x, -one]])

# values frozen from the character oracle in test_frozen_values_match_oracle
FROZEN_RANKS = {"singular": 1, "regular": 2}
FROZEN_INVERSE = [[half, xhalf], [xhalf, -half]]


def test_frozen_values_match_oracle():
    assert oracle_rank(SINGULAR) == FROZEN_RANKS["singular"]
    assert oracle_rank(REGULAR) == FROZEN_RANKS["regular"]
    for sign in (1, -1):
        inv = q2_character(REGULAR, sign).inv()
        assert inv == q2_character(HMatrix(Q2, (0, 1), (0, 1), FROZEN_INVERSE), sign)


def test_echelon_and_rank():
    E = gdlin.echelon(SINGULAR, "row")
    assert E.rank == 1
    assert all(v.is_zero() for v in E.matrix.rows[1])
    assert mat_mul(E.transform, SINGULAR) == E.matrix
    assert gdlin.drank(SINGULAR) == 1
    assert gdlin.drank(REGULAR) == 2
    assert gdlin.drank(identity(Q2, (0, 1, 0))) == 3
    assert gdlin.drank(zeros(Q2, (0, 1), (1,))) == 0


def test_column_echelon_transform():
    E = gdlin.echelon(SINGULAR, "col")
    assert mat_mul(SINGULAR, E.transform) == E.matrix


def test_invert():
    B = gdlin.invert(REGULAR)
    assert B.rows == FROZEN_INVERSE
    assert B.alpha == REGULAR.beta and B.beta == REGULAR.alpha
    two_x = HMatrix(Q2, (1,), (0,), [[x + x]])
    assert gdlin.invert(two_x).rows == [[xhalf]]
    with pytest.raises(gdlin.SingularError) as exc:
        gdlin.invert(SINGULAR)
    assert exc.value.rank == 1


def test_largest_invertible_submatrix():
    assert gdlin.largest_invertible_submatrix(SINGULAR)[0] == 1
    assert gdlin.largest_invertible_submatrix(identity(Q2, (0, 0)))[0] == 2
    assert gdlin.largest_invertible_submatrix(zeros(Q2, (0, 0), (0, 0)))[0] == 0


def test_solve():
    b = HMatrix(Q2, (0, 1), (0,), [[one], [Q2.zero()]])
    u = gdlin.solve(REGULAR, b)
    assert u.rows == [[half], [xhalf]]
    assert gdlin.solve(SINGULAR, b) is None
    assert gdlin.solve(identity(Q2, (0, 1)), b) == b


def test_non_division_ring_rejected():
    with pytest.raises(gdlin.NotDivisionRing):
        gdlin.drank(identity(catalog_ring("QP"), (0,)))


@settings(max_examples=120, deadline=None)
@given(st.sampled_from(["Q2", "QL", "SK"]), st.integers(0, 10 ** 6))
def test_rank_matches_oracle(name, seed):
    R = catalog_ring(name)
    A = sample_matrix(R, random.Random(seed), SampleConfig(max_size=3))
    assert gdlin.drank(A) == oracle_rank(A)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(["Q2", "QL", "SK", "Q"]), st.integers(0, 10 ** 6))
def test_rank_invariant_under_invertible_multiplication(name, seed):
    R = catalog_ring(name)
    rng = random.Random(seed)
    A = sample_matrix(R, rng, SampleConfig(max_size=3))
    P = random_invertible(R, rng, A.alpha, side="left")
    Q = random_invertible(R, rng, A.beta, side="right")
    assert gdlin.drank(mat_mul(mat_mul(P, A), Q)) == gdlin.drank(A)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(["Q2", "QL", "SK"]), st.integers(0, 10 ** 6))
def test_inverse_is_two_sided(name, seed):
    R = catalog_ring(name)
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    dist = tuple(rng.choice(R.group.ball(1)) for _ in range(n))
    A = random_invertible(R, rng, dist, side="right")
    B = gdlin.invert(A)
    assert mat_mul(A, B) == identity(R, A.alpha)
    assert mat_mul(B, A) == identity(R, A.beta)
