"""Seeded generators of homogeneous matrices used by the verification harnesses."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .grp import degree_of_entry
from .hmat import HMatrix, identity, mat_mul, zeros
from .ring import SMALL_COEFFS, GradedRing


@dataclass
class SampleConfig:
    max_size: int = 4
    radius: int = 2
    coeffs: tuple = SMALL_COEFFS
    zero_prob: float = 0.25
    deficient_prob: float = 0.35


def random_distribution(R: GradedRing, rng: random.Random, n: int, radius: int = 2) -> tuple:
    pool = R.group.ball(radius)
    return tuple(rng.choice(pool) for _ in range(n))


def random_entry(R: GradedRing, rng: random.Random, d, cfg: SampleConfig):
    if not R.supports(d) or rng.random() < cfg.zero_prob:
        return R.zero()
    return R.sample_homogeneous(rng, d, cfg.coeffs)


def random_matrix(R: GradedRing, rng: random.Random, alpha, beta, cfg: SampleConfig | None = None) -> HMatrix:
    cfg = cfg or SampleConfig()
    G = R.group
    rows = [[random_entry(R, rng, degree_of_entry(G, a, b), cfg) for b in beta] for a in alpha]
    return HMatrix(R, alpha, beta, rows, check=False)


def random_low_rank(R: GradedRing, rng: random.Random, alpha, beta, k: int,
                    cfg: SampleConfig | None = None) -> HMatrix:
    """A product of an m x k and a k x n matrix, so it factors through k columns."""
    cfg = cfg or SampleConfig()
    lam = random_distribution(R, rng, k, cfg.radius)
    if k == 0:
        return zeros(R, alpha, beta)
    return mat_mul(random_matrix(R, rng, alpha, lam, cfg), random_matrix(R, rng, lam, beta, cfg))


def sample_matrix(R: GradedRing, rng: random.Random, cfg: SampleConfig | None = None,
                  shape: tuple[int, int] | None = None, alpha=None, beta=None) -> HMatrix:
    cfg = cfg or SampleConfig()
    if shape is None:
        m = len(alpha) if alpha is not None else rng.randint(1, cfg.max_size)
        n = len(beta) if beta is not None else rng.randint(1, cfg.max_size)
    else:
        m, n = shape
    alpha = alpha if alpha is not None else random_distribution(R, rng, m, cfg.radius)
    beta = beta if beta is not None else random_distribution(R, rng, n, cfg.radius)
    u = rng.random()
    if u < 0.04:
        return zeros(R, alpha, beta)
    if u < cfg.deficient_prob and min(m, n) > 1:
        return random_low_rank(R, rng, alpha, beta, rng.randint(0, min(m, n) - 1), cfg)
    return random_matrix(R, rng, alpha, beta, cfg)


def sample_square(R: GradedRing, rng: random.Random, n: int | None = None,
                  cfg: SampleConfig | None = None, alpha=None, beta=None) -> HMatrix:
    cfg = cfg or SampleConfig()
    if n is None:
        n = len(alpha) if alpha is not None else rng.randint(1, cfg.max_size)
    return sample_matrix(R, rng, cfg, (n, n), alpha, beta)


def random_invertible(R: GradedRing, rng: random.Random, dist, cfg: SampleConfig | None = None,
                      side: str = "left") -> HMatrix:
    """An invertible matrix built from elementary matrices, a permutation and homogeneous unit scalings.

    side="left" gives P in M[alpha'][dist] (to multiply on the left of a matrix with row
    distribution dist); side="right" gives Q in M[dist][beta'].
    """
    from .hmat import permute
    cfg = cfg or SampleConfig()
    G = R.group
    n = len(dist)
    M = identity(R, dist)
    for _ in range(2 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        E = identity(R, dist)
        E.rows[i][j] = random_entry(R, rng, degree_of_entry(G, dist[i], dist[j]), cfg)
        M = mat_mul(E, M) if side == "left" else mat_mul(M, E)
    perm = list(range(n))
    rng.shuffle(perm)
    M = permute(M, perm, None) if side == "left" else permute(M, None, perm)
    unit_degs = [g for g in G.ball(1) if R.unit_of_degree(g) is not None]
    rows = [list(r) for r in M.rows]
    alpha, beta = list(M.alpha), list(M.beta)
    for k in range(n):
        d = rng.choice(unit_degs)
        u = R.hom(d, R.unit_of_degree(d))
        if rng.random() < 0.5:
            u = -u
        if side == "left":
            rows[k] = [u * x for x in rows[k]]
            alpha[k] = G.op(d, alpha[k])
        else:
            for i in range(n):
                rows[i][k] = rows[i][k] * u
            beta[k] = G.op(G.inv(d), beta[k])
    return HMatrix(R, alpha, beta, rows)
