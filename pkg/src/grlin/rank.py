"""Graded Sylvester rank functions (matrix, module and map forms), prime matrix ideals,
their correspondence, and sampling harnesses that check the axioms."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable

from . import gdlin
from .hmat import (FactorizationWitness, HMatrix, ShapeError, apply_hom_matrix, block, det_sum, direct_sum,
                   find_nonfull_witness, identity, mat_mul, permute, submatrix, translate, verify_nonfull, zeros)
from .ring import GradedHom, GradedRing
from .sampling import (SampleConfig, random_distribution, random_invertible, random_low_rank, random_matrix,
                       sample_matrix, sample_square)


@dataclass
class MatrixRankFn:
    name: str
    fn: Callable[[HMatrix], int]

    def __call__(self, A: HMatrix) -> int:
        return self.fn(A)


@dataclass
class PrimeMatrixIdeal:
    """A membership oracle on square homogeneous matrices."""
    name: str
    ring: GradedRing
    member: Callable[[HMatrix], bool]

    def __contains__(self, A: HMatrix) -> bool:
        if not A.is_square():
            raise ShapeError("prime matrix ideals contain square matrices only")
        return self.member(A)


@dataclass
class ModuleRankFn:
    """di on modules presented by A: R^n(beta) -> R^m(alpha), i.e. on coker A."""
    name: str
    fn: Callable[[HMatrix], int]

    def __call__(self, A: HMatrix) -> int:
        return self.fn(A)


def _need_gdr_target(f: GradedHom):
    if not f.target.is_graded_division:
        raise gdlin.NotDivisionRing(f"target {f.target.name} of {f.name} is not a graded division ring")


def induced_rank(f: GradedHom, A: HMatrix) -> int:
    _need_gdr_target(f)
    return gdlin.drank(apply_hom_matrix(f, A))


def induced_rank_fn(f: GradedHom) -> MatrixRankFn:
    _need_gdr_target(f)
    return MatrixRankFn(f"rank_{f.name}", lambda A: gdlin.drank(apply_hom_matrix(f, A)))


def singular_kernel(f: GradedHom) -> PrimeMatrixIdeal:
    _need_gdr_target(f)
    return PrimeMatrixIdeal(f"ker_{f.name}", f.source,
                            lambda A: not gdlin.is_invertible(apply_hom_matrix(f, A)))


def rank_from_pmi(P: PrimeMatrixIdeal, A: HMatrix) -> int:
    """Size of the largest square submatrix of A outside P."""
    for k in range(min(A.m, A.n), 0, -1):
        for rows in itertools.combinations(range(A.m), k):
            for cols in itertools.combinations(range(A.n), k):
                if not P.member(submatrix(A, rows, cols)):
                    return k
    return 0


def rank_fn_from_pmi(P: PrimeMatrixIdeal) -> MatrixRankFn:
    return MatrixRankFn(f"rank[{P.name}]", lambda A: rank_from_pmi(P, A))


def pmi_from_rank(r: MatrixRankFn, R: GradedRing) -> PrimeMatrixIdeal:
    return PrimeMatrixIdeal(f"P[{r.name}]", R, lambda A: r(A) < A.n)


def module_rank(r: MatrixRankFn, A: HMatrix) -> int:
    """di(coker A) = m - r(A)."""
    return A.m - r(A)


def module_rank_fn(r: MatrixRankFn) -> ModuleRankFn:
    return ModuleRankFn(f"di[{r.name}]", lambda A: A.m - r(A))


def module_rank_direct(f: GradedHom) -> ModuleRankFn:
    """di computed as the dimension of the cokernel after base change, via column elimination."""
    _need_gdr_target(f)
    return ModuleRankFn(f"di_{f.name}", lambda A: A.m - gdlin.column_rank(apply_hom_matrix(f, A)))


def map_rank(di: ModuleRankFn, F: HMatrix) -> int:
    """rho(f) = di(R^m) - di(coker f) for f: R^n(beta) -> R^m(alpha) given by F."""
    free = zeros(F.ring, F.alpha, ())
    return di(free) - di(F)


def rank_from_module(di: ModuleRankFn, A: HMatrix) -> int:
    return A.m - di(A)


def module_from_map(rho: Callable[[HMatrix], int], A: HMatrix) -> int:
    """di(M) = rho(1_Q) - rho(f) for M = coker(f: P -> Q)."""
    return rho(identity(A.ring, A.alpha)) - rho(A)


def corrupted_rank(r: MatrixRankFn, target: HMatrix | None = None) -> MatrixRankFn:
    """r + 1 on every matrix with the same grid as target (default: the 1x1 zero)."""
    def fn(A):
        if target is None:
            hit = A.shape == (1, 1) and A.is_zero()
        else:
            hit = A.same_grid(target)
        return r(A) + (1 if hit else 0)
    return MatrixRankFn(f"corrupt[{r.name}]", fn)


# reports

@dataclass
class Report:
    suite: str
    checked: int = 0
    passed: bool = True
    counterexample: dict | None = None
    counts: dict = field(default_factory=dict)

    def tick(self, axiom: str):
        self.checked += 1
        self.counts[axiom] = self.counts.get(axiom, 0) + 1

    def fail(self, axiom: str, detail: str, **mats):
        self.passed = False
        self.counterexample = {"axiom": axiom, "detail": detail, "matrices": mats}

    def to_json(self) -> dict:
        from .hmat import matrix_to_json
        out = {"suite": self.suite, "checked": self.checked, "passed": self.passed,
               "counts": dict(sorted(self.counts.items()))}
        if self.counterexample is not None:
            cx = dict(self.counterexample)
            cx["matrices"] = {k: matrix_to_json(v) for k, v in cx["matrices"].items()}
            out["counterexample"] = cx
        return out


def _shape_pick(rng, cfg):
    return rng.randint(1, cfg.max_size), rng.randint(1, cfg.max_size)


def verify_matrf(r: MatrixRankFn, R: GradedRing, seed: int = 0, budget: int = 200,
                 cfg: SampleConfig | None = None) -> Report:
    """Matrix rank function axioms plus the elementary consequences, one round per sample."""
    cfg = cfg or SampleConfig()
    rng = random.Random(seed)
    rep = Report(f"matrf:{r.name}")
    G = R.group
    e = G.identity
    one = identity(R, (e,))
    rep.tick("MatRF1")
    if r(one) != 1:
        rep.fail("MatRF1", f"rank of (1) is {r(one)}", A=one)
        return rep
    for _ in range(budget):
        m, n = _shape_pick(rng, cfg)
        A = sample_matrix(R, rng, cfg, (m, n))
        rA = r(A)
        # MatRF2
        k = rng.randint(1, cfg.max_size)
        B = sample_matrix(R, rng, cfg, (n, k), alpha=A.beta)
        rep.tick("MatRF2")
        rAB, rB = r(mat_mul(A, B)), r(B)
        if rAB > min(rA, rB):
            rep.fail("MatRF2", f"r(AB)={rAB} > min({rA},{rB})", A=A, B=B)
            return rep
        # MatRF3
        C = sample_matrix(R, rng, cfg)
        rep.tick("MatRF3")
        rC = r(C)
        if r(direct_sum(A, C)) != rA + rC:
            rep.fail("MatRF3", f"r(A+B)={r(direct_sum(A, C))} != {rA}+{rC}", A=A, B=C)
            return rep
        # MatRF4
        X = random_matrix(R, rng, A.alpha, C.beta, cfg)
        T = block([[A, X], [zeros(R, C.alpha, A.beta), C]])
        rep.tick("MatRF4")
        if r(T) < rA + rC:
            rep.fail("MatRF4", f"r((A X; 0 B))={r(T)} < {rA}+{rC}", A=A, B=C, C=X)
            return rep
        # identities, zero matrices, non-negativity, size bound
        alpha = random_distribution(R, rng, n, cfg.radius)
        rep.tick("identity")
        if r(identity(R, alpha)) != n:
            rep.fail("identity", "rank of identity", A=identity(R, alpha))
            return rep
        Z = zeros(R, A.alpha, A.beta)
        rep.tick("zero")
        if r(Z) != 0:
            rep.fail("zero", f"rank of zero matrix is {r(Z)}", A=Z)
            return rep
        rep.tick("nonnegative")
        rep.tick("size-bound")
        if rA < 0:
            rep.fail("nonnegative", f"negative rank {rA}", A=A)
            return rep
        if rA > min(m, n):
            rep.fail("size-bound", f"rank {rA} exceeds size bound", A=A)
            return rep
        # invariance under invertible multiplication; invertibles have full rank
        P = random_invertible(R, rng, A.alpha, cfg)
        Q = random_invertible(R, rng, A.beta, cfg, side="right")
        rep.tick("invertible-factors")
        if r(mat_mul(P, A)) != rA or r(mat_mul(A, Q)) != rA:
            rep.fail("invertible-factors", "rank changed under invertible multiplication", A=A, P=P, Q=Q)
            return rep
        rep.tick("invertible-full")
        if r(P) != m:
            rep.fail("invertible-full", f"invertible matrix has rank {r(P)}", P=P)
            return rep
        # adding rows or columns cannot lower the rank
        Brow = sample_matrix(R, rng, cfg, (rng.randint(1, 2), n), beta=A.beta)
        Bcol = sample_matrix(R, rng, cfg, (m, rng.randint(1, 2)), alpha=A.alpha)
        from .hmat import hstack, vstack
        rep.tick("adjoin")
        if r(vstack([A, Brow])) < rA or r(hstack([A, Bcol])) < rA:
            rep.fail("adjoin", "rank dropped after adjoining rows or columns", A=A, B=Brow, C=Bcol)
            return rep
        # alternative characterization: largest square submatrix of full rank
        rep.tick("alt")
        best = 0
        for kk in range(min(m, n), 0, -1):
            if any(r(submatrix(A, rs, cs)) == kk for rs in itertools.combinations(range(m), kk)
                   for cs in itertools.combinations(range(n), kk)):
                best = kk
                break
        if best != rA:
            rep.fail("alt", f"largest full-rank square submatrix has size {best}, rank is {rA}", A=A)
            return rep
    return rep


def verify_modrf(di: ModuleRankFn, R: GradedRing, seed: int = 0, budget: int = 200,
                 cfg: SampleConfig | None = None) -> Report:
    cfg = cfg or SampleConfig()
    rng = random.Random(seed)
    rep = Report(f"modrf:{di.name}")
    e = R.group.identity
    free_R = zeros(R, (e,), ())
    rep.tick("ModRF1")
    if di(free_R) != 1:
        rep.fail("ModRF1", f"di(R) = {di(free_R)}", A=free_R)
        return rep
    for _ in range(budget):
        A = sample_matrix(R, rng, cfg)
        B = sample_matrix(R, rng, cfg)
        rep.tick("ModRF2")
        if di(direct_sum(A, B)) != di(A) + di(B):
            rep.fail("ModRF2", "di not additive on direct sums", A=A, B=B)
            return rep
        # R^k -> coker A -> coker (A C) -> 0 is exact
        k = rng.randint(1, 2)
        C = sample_matrix(R, rng, cfg, (A.m, k), alpha=A.alpha)
        from .hmat import hstack
        M2, M3 = di(A), di(hstack([A, C]))
        rep.tick("ModRF3")
        if not (M3 <= M2 <= k + M3):
            rep.fail("ModRF3", f"di(M3)={M3}, di(M2)={M2}, di(M1)={k}", A=A, C=C)
            return rep
        # same grid, another distribution
        d = rng.choice(R.group.ball(cfg.radius))
        rep.tick("ModRF4")
        if di(translate(A, d)) != di(A):
            rep.fail("ModRF4", "di changed under re-distribution", A=A)
            return rep
    return rep


def verify_maprf(rho: Callable[[HMatrix], int], R: GradedRing, seed: int = 0, budget: int = 200,
                 cfg: SampleConfig | None = None, name: str = "rho") -> Report:
    cfg = cfg or SampleConfig()
    rng = random.Random(seed)
    rep = Report(f"maprf:{name}")
    e = R.group.identity
    rep.tick("MapRF1")
    if rho(identity(R, (e,))) != 1:
        rep.fail("MapRF1", "rho(1_R) != 1", A=identity(R, (e,)))
        return rep
    for _ in range(budget):
        F = sample_matrix(R, rng, cfg)
        Gm = sample_matrix(R, rng, cfg, (rng.randint(1, cfg.max_size), F.m), beta=F.alpha)
        rep.tick("MapRF2")
        if rho(mat_mul(Gm, F)) > min(rho(F), rho(Gm)):
            rep.fail("MapRF2", "rho(gf) > min", A=F, B=Gm)
            return rep
        H = sample_matrix(R, rng, cfg)
        rep.tick("MapRF3")
        if rho(direct_sum(F, H)) != rho(F) + rho(H):
            rep.fail("MapRF3", "rho not additive", A=F, B=H)
            return rep
        X = random_matrix(R, rng, F.alpha, H.beta, cfg)
        rep.tick("MapRF4")
        if rho(block([[F, X], [zeros(R, H.alpha, F.beta), H]])) < rho(F) + rho(H):
            rep.fail("MapRF4", "rho((f h; 0 g)) < rho(f) + rho(g)", A=F, B=H, C=X)
            return rep
        d = rng.choice(R.group.ball(cfg.radius))
        rep.tick("MapRF5")
        if rho(translate(F, d)) != rho(F):
            rep.fail("MapRF5", "rho changed under re-distribution", A=F)
            return rep
    return rep


def random_nonfull(R: GradedRing, rng: random.Random, n: int, cfg: SampleConfig) -> tuple[HMatrix, FactorizationWitness]:
    alpha = random_distribution(R, rng, n, cfg.radius)
    beta = random_distribution(R, rng, n, cfg.radius)
    k = rng.randint(0, n - 1)
    lam = random_distribution(R, rng, k, cfg.radius)
    P = random_matrix(R, rng, alpha, lam, cfg) if k else zeros(R, alpha, ())
    Q = random_matrix(R, rng, lam, beta, cfg) if k else zeros(R, (), beta)
    return mat_mul(P, Q), FactorizationWitness(P, Q)


def _dependent_column(R, rng, M: HMatrix, j: int, cfg) -> list:
    """A column for position j that is a right combination of the other columns of M."""
    G = R.group
    col = [R.zero() for _ in range(M.m)]
    for k in range(M.n):
        if k == j:
            continue
        d = G.op(M.beta[k], G.inv(M.beta[j]))
        c = R.sample_homogeneous(rng, d, cfg.coeffs) if R.supports(d) else R.zero()
        col = [x + M.rows[i][k] * c for i, x in enumerate(col)]
    return col


def _with_column(M: HMatrix, j: int, col: list) -> HMatrix:
    rows = [list(r) for r in M.rows]
    for i in range(M.m):
        rows[i][j] = col[i]
    return HMatrix(M.ring, M.alpha, M.beta, rows, check=False)


def _two_members_differing(R, rng, P, n, cfg, tries=6):
    """A, B in P with the same distribution, differing only in one column."""
    for _ in range(tries):
        M = sample_square(R, rng, n, cfg)
        j = rng.randrange(n)
        if rng.random() < 0.5:
            A = _with_column(M, j, _dependent_column(R, rng, M, j, cfg))
        else:
            A = _with_column(M, j, [R.zero()] * n) if rng.random() < 0.3 else M
        B = _with_column(M, j, _dependent_column(R, rng, M, j, cfg))
        if P.member(A) and P.member(B):
            return A, B, j
    return None


def verify_pm(P: PrimeMatrixIdeal, seed: int = 0, budget: int = 200, cfg: SampleConfig | None = None,
              consequences: bool = True) -> Report:
    """PM1-PM6 and, optionally, their standard consequences on seeded samples.

    PM6 is checked on its own samples and never inferred from the other axioms.
    """
    cfg = cfg or SampleConfig()
    R = P.ring
    rng = random.Random(seed)
    rep = Report(f"pm:{P.name}")
    G = R.group
    e = G.identity
    rep.tick("PM5")
    if P.member(identity(R, (e,))):
        rep.fail("PM5", "(1) lies in P", A=identity(R, (e,)))
        return rep
    for _ in range(budget):
        n = rng.randint(1, cfg.max_size)
        # PM1
        N, w = random_nonfull(R, rng, n, cfg)
        assert verify_nonfull(N, w)
        rep.tick("PM1")
        if not P.member(N):
            rep.fail("PM1", "non-full matrix outside P", A=N)
            return rep
        # PM2 (columns, and rows through the transpose pattern)
        pair = _two_members_differing(R, rng, P, n, cfg)
        if pair is not None:
            A, B, j = pair
            rep.tick("PM2")
            if not P.member(det_sum(A, B, "col", j)):
                rep.fail("PM2", f"column {j + 1} determinantal sum left P", A=A, B=B)
                return rep
        # PM3 / PM4
        A = sample_square(R, rng, n, cfg)
        B = sample_square(R, rng, None, cfg)
        inA, inB, inAB = P.member(A), P.member(B), P.member(direct_sum(A, B))
        rep.tick("PM3")
        if inA and not inAB:
            rep.fail("PM3", "A in P but A+B not in P", A=A, B=B)
            return rep
        rep.tick("PM4")
        if inAB and not (inA or inB):
            rep.fail("PM4", "A+B in P with neither summand in P", A=A, B=B)
            return rep
        # PM6
        X = N if rng.random() < 0.5 else A
        if P.member(X):
            rp = list(range(n))
            cp = list(range(n))
            rng.shuffle(rp)
            rng.shuffle(cp)
            rep.tick("PM6")
            if not P.member(permute(X, rp, cp)):
                rep.fail("PM6", "permuted member left P", A=X)
                return rep
        if not consequences:
            continue
        # C = A nabla B with B not gr-full
        Bn, _ = random_nonfull(R, rng, n, cfg)
        j = rng.randrange(n)
        col = [random_matrix(R, rng, (a,), (Bn.beta[j],), cfg).rows[0][0] for a in Bn.alpha]
        An = _with_column(Bn, j, col)
        C = det_sum(An, Bn, "col", j)
        rep.tick("nabla-nonfull")
        if P.member(An) != P.member(C):
            rep.fail("nabla-nonfull", "membership differs across a sum with a non-full matrix", A=An, B=Bn)
            return rep
        # block triangular vs block diagonal
        A1 = sample_square(R, rng, None, cfg)
        B1 = sample_square(R, rng, None, cfg)
        lower = random_matrix(R, rng, B1.alpha, A1.beta, cfg)
        upper = random_matrix(R, rng, A1.alpha, B1.beta, cfg)
        diag = P.member(direct_sum(A1, B1))
        Lo = block([[A1, zeros(R, A1.alpha, B1.beta)], [lower, B1]])
        Up = block([[A1, upper], [zeros(R, B1.alpha, A1.beta), B1]])
        rep.tick("triangular")
        if P.member(Lo) != diag or P.member(Up) != diag:
            rep.fail("triangular", "triangular block membership differs from diagonal", A=A1, B=B1, C=lower, D=upper)
            return rep
        # the complement is multiplicative
        if not P.member(A1) and not P.member(B1):
            rep.tick("complement-closed")
            rp = list(range(A1.n))
            rng.shuffle(rp)
            if P.member(Lo) or P.member(permute(A1, rp, rp)):
                rep.fail("complement-closed", "complement not closed", A=A1, B=B1, C=lower)
                return rep
        # AB in P iff A + B in P
        A2 = sample_square(R, rng, n, cfg)
        B2 = sample_square(R, rng, n, cfg, alpha=A2.beta)
        rep.tick("product-vs-sum")
        if P.member(mat_mul(A2, B2)) != P.member(direct_sum(A2, B2)):
            rep.fail("product-vs-sum", "AB and A+B disagree", A=A2, B=B2)
            return rep
        # C = A nabla B with B in P
        M = sample_square(R, rng, n, cfg)
        j = rng.randrange(n)
        B3 = _with_column(M, j, _dependent_column(R, rng, M, j, cfg))
        if P.member(B3):
            col = [random_matrix(R, rng, (a,), (M.beta[j],), cfg).rows[0][0] for a in M.alpha]
            A3 = _with_column(M, j, col)
            rep.tick("nabla-member")
            if P.member(A3) != P.member(det_sum(A3, B3, "col", j)):
                rep.fail("nabla-member", "membership differs across a sum with a member", A=A3, B=B3)
                return rep
    return rep


def specialization_leq(P1: PrimeMatrixIdeal, P2: PrimeMatrixIdeal, seed: int = 0, budget: int = 300,
                       cfg: SampleConfig | None = None) -> HMatrix | None:
    """A matrix in P1 but not in P2, or None if the sample shows P1 inside P2.

    1x1 matrices over the basis pool come first, then seeded random squares.
    """
    cfg = cfg or SampleConfig()
    R = P1.ring
    G = R.group
    for g in G.ball(1):
        for c in R.basis_coefs(g):
            A = HMatrix(R, (g,), (G.identity,), [[R.hom(g, c)]], check=False)
            if P1.member(A) and not P2.member(A):
                return A
    rng = random.Random(seed)
    for _ in range(budget):
        A = sample_square(R, rng, None, cfg)
        if P1.member(A) and not P2.member(A):
            return A
    return None


def round_trip_report(f: GradedHom, seed: int = 0, budget: int = 300, cfg: SampleConfig | None = None) -> Report:
    """Exact round trips between rank functions, prime matrix ideals, module and map ranks."""
    cfg = cfg or SampleConfig()
    R = f.source
    rng = random.Random(seed)
    rep = Report(f"roundtrip:{f.name}")
    r = induced_rank_fn(f)
    P = singular_kernel(f)
    r_from_P = rank_fn_from_pmi(P)
    P_from_r = pmi_from_rank(r, R)
    P_back = pmi_from_rank(r_from_P, R)
    r_back = rank_fn_from_pmi(P_from_r)
    di = module_rank_direct(f)
    di_r = module_rank_fn(r)
    for _ in range(budget):
        A = sample_matrix(R, rng, cfg)
        rA = r(A)
        rep.tick("rank=rank(P)")
        if r_from_P(A) != rA:
            rep.fail("rank=rank(P)", f"{r_from_P(A)} != {rA}", A=A)
            return rep
        rep.tick("B")
        if r_back(A) != rA:
            rep.fail("B", "rank_from_pmi(pmi_from_rank(r)) != r", A=A)
            return rep
        S = sample_square(R, rng, None, cfg)
        rep.tick("A")
        if P_back.member(S) != P.member(S) or P_from_r.member(S) != P.member(S):
            rep.fail("A", "membership not recovered", A=S)
            return rep
        rep.tick("module")
        if di(A) != di_r(A) or rank_from_module(di, A) != rA:
            rep.fail("module", f"di={di(A)} but m-r={di_r(A)}", A=A)
            return rep
        rep.tick("map")
        if map_rank(di, A) != rA:
            rep.fail("map", f"rho={map_rank(di, A)} != r={rA}", A=A)
            return rep
        rep.tick("map->module")
        if module_from_map(lambda X: map_rank(di, X), A) != di(A):
            rep.fail("map->module", "di from rho disagrees", A=A)
            return rep
    return rep
