"""Linear algebra over graded division rings: echelon forms, ranks, inverses and solving.

Every entry of a homogeneous matrix has a known degree, so elimination runs on bare
coefficients and the row or column distribution is updated alongside each operation.
Only swaps, scalings by homogeneous units and additions of homogeneous multiples are used.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .grp import degree_of_entry
from .hmat import FactorizationWitness, HMatrix, ShapeError, identity, submatrix
from .ring import GradedRing, NotInvertible, ProductRing


class SingularError(ArithmeticError):
    def __init__(self, msg: str, rank: int):
        super().__init__(msg)
        self.rank = rank


class NotDivisionRing(TypeError):
    pass


def _need_division(R: GradedRing):
    if not R.is_graded_division:
        raise NotDivisionRing(f"{R.name} is not a graded division ring")


class _Grid:
    """Coefficient grid with live distributions; None marks a zero entry."""

    def __init__(self, A: HMatrix):
        self.R = A.ring
        self.G = A.ring.group
        self.alpha = list(A.alpha)
        self.beta = list(A.beta)
        self.c = [[next(iter(x.comps.values())) if x.comps else None for x in r] for r in A.rows]

    def deg(self, i, j):
        return degree_of_entry(self.G, self.alpha[i], self.beta[j])

    def to_hmatrix(self) -> HMatrix:
        R = self.R
        rows = [[R.zero() if v is None else R.elem({self.deg(i, j): v}) for j, v in enumerate(r)]
                for i, r in enumerate(self.c)]
        return HMatrix(R, self.alpha, self.beta, rows, check=False)

    # row operations (left multiplication)
    def swap_rows(self, i, k):
        self.c[i], self.c[k] = self.c[k], self.c[i]
        self.alpha[i], self.alpha[k] = self.alpha[k], self.alpha[i]

    def scale_row(self, i, d, u):
        """Row i <- (u*d) * row i."""
        R = self.R
        row = self.c[i]
        for j, v in enumerate(row):
            if v is not None:
                row[j] = R.cmul(d, u, self.deg(i, j), v)
        self.alpha[i] = self.G.op(d, self.alpha[i])

    def add_row(self, i, k, d, u):
        """Row i <- row i + (u*d) * row k, where d = alpha_i alpha_k^{-1}."""
        R = self.R
        src, dst = self.c[k], self.c[i]
        for j, v in enumerate(src):
            if v is None:
                continue
            p = R.cmul(d, u, self.deg(k, j), v)
            w = p if dst[j] is None else R.cadd(dst[j], p)
            dst[j] = None if R.cis_zero(w) else w

    # column operations (right multiplication)
    def swap_cols(self, j, k):
        for r in self.c:
            r[j], r[k] = r[k], r[j]
        self.beta[j], self.beta[k] = self.beta[k], self.beta[j]

    def scale_col(self, j, d, u):
        """Column j <- column j * (u*d)."""
        R = self.R
        for i, r in enumerate(self.c):
            if r[j] is not None:
                r[j] = R.cmul(self.deg(i, j), r[j], d, u)
        self.beta[j] = self.G.op(self.G.inv(d), self.beta[j])

    def add_col(self, j, k, d, u):
        """Column j <- column j + column k * (u*d), where d = beta_k beta_j^{-1}."""
        R = self.R
        for i, r in enumerate(self.c):
            v = r[k]
            if v is None:
                continue
            p = R.cmul(self.deg(i, k), v, d, u)
            w = p if r[j] is None else R.cadd(r[j], p)
            r[j] = None if R.cis_zero(w) else w


@dataclass
class EchelonResult:
    mode: str
    matrix: HMatrix
    transform: HMatrix
    pivots: list
    rank: int


def echelon(A: HMatrix, mode: str = "row") -> EchelonResult:
    """Reduced echelon form.

    Row mode returns T and E with T*A = E; column mode returns T and E with A*T = E.
    Pivots are chosen as the first non-zero entry in scan order.
    """
    _need_division(A.ring)
    if mode == "row":
        return _row_echelon(A)
    if mode == "col":
        return _col_echelon(A)
    raise ValueError("mode must be 'row' or 'col'")


def _row_echelon(A: HMatrix, ncols: int | None = None) -> EchelonResult:
    R, G = A.ring, A.ring.group
    W = _Grid(A)
    T = _Grid(identity(R, A.alpha))
    m, n = A.m, A.n
    limit = n if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(limit):
        if r == m:
            break
        k = next((i for i in range(r, m) if W.c[i][c] is not None), None)
        if k is None:
            continue
        if k != r:
            W.swap_rows(r, k)
            T.swap_rows(r, k)
        g = W.deg(r, c)
        gi = G.inv(g)
        u = R.cinv(g, W.c[r][c])
        W.scale_row(r, gi, u)
        T.scale_row(r, gi, u)
        for i in range(m):
            if i == r or W.c[i][c] is None:
                continue
            d = W.deg(i, c)
            v = R.cneg(W.c[i][c])
            W.add_row(i, r, d, v)
            T.add_row(i, r, d, v)
        pivots.append((r, c))
        r += 1
    return EchelonResult("row", W.to_hmatrix(), T.to_hmatrix(), pivots, len(pivots))


def _col_echelon(A: HMatrix) -> EchelonResult:
    R, G = A.ring, A.ring.group
    W = _Grid(A)
    T = _Grid(identity(R, A.beta))
    m, n = A.m, A.n
    pivots = []
    c = 0
    for r in range(m):
        if c == n:
            break
        k = next((j for j in range(c, n) if W.c[r][j] is not None), None)
        if k is None:
            continue
        if k != c:
            W.swap_cols(c, k)
            T.swap_cols(c, k)
        g = W.deg(r, c)
        gi = G.inv(g)
        u = R.cinv(g, W.c[r][c])
        W.scale_col(c, gi, u)
        T.scale_col(c, gi, u)
        for j in range(n):
            if j == c or W.c[r][j] is None:
                continue
            d = W.deg(r, j)
            v = R.cneg(W.c[r][j])
            W.add_col(j, c, d, v)
            T.add_col(j, c, d, v)
        pivots.append((r, c))
        c += 1
    return EchelonResult("col", W.to_hmatrix(), T.to_hmatrix(), pivots, len(pivots))


def drank(A: HMatrix) -> int:
    """Rank over the graded division ring (row rank)."""
    return echelon(A, "row").rank


def column_rank(A: HMatrix) -> int:
    return echelon(A, "col").rank


def invert(A: HMatrix) -> HMatrix:
    """Two-sided inverse of a square matrix in M[alpha][beta]; it lies in M[beta][alpha]."""
    if not A.is_square():
        raise ShapeError("only square matrices can be inverted")
    res = echelon(A, "row")
    if res.rank < A.n:
        raise SingularError(f"matrix is singular (rank {res.rank} < {A.n})", res.rank)
    return res.transform


def is_invertible(A: HMatrix) -> bool:
    """Square elimination without bookkeeping, kept separate from echelon()."""
    _need_division(A.ring)
    if not A.is_square():
        return False
    R, G = A.ring, A.ring.group
    W = _Grid(A)
    n = A.n
    for c in range(n):
        k = next((i for i in range(c, n) if W.c[i][c] is not None), None)
        if k is None:
            return False
        W.swap_rows(c, k)
        g = W.deg(c, c)
        W.scale_row(c, G.inv(g), R.cinv(g, W.c[c][c]))
        for i in range(c + 1, n):
            if W.c[i][c] is not None:
                W.add_row(i, c, W.deg(i, c), R.cneg(W.c[i][c]))
    return True


def largest_invertible_submatrix(A: HMatrix) -> tuple[int, tuple, tuple]:
    """(size, rows, cols) of a largest invertible square submatrix, by exhaustive search."""
    for k in range(min(A.m, A.n), 0, -1):
        for rows in itertools.combinations(range(A.m), k):
            for cols in itertools.combinations(range(A.n), k):
                if is_invertible(submatrix(A, rows, cols)):
                    return k, rows, cols
    return 0, (), ()


def solve(A: HMatrix, b: HMatrix) -> HMatrix | None:
    """A solution u in M[beta][delta] of A*u = b for b in M[alpha][delta], or None."""
    from .hmat import hstack
    if b.n != 1 or b.m != A.m:
        raise ShapeError("right-hand side must be a column with as many rows as A")
    aug = hstack([A, b])
    res = _row_echelon(aug, ncols=A.n)
    E = res.matrix
    R = A.ring
    for i in range(res.rank, A.m):
        if not E.rows[i][A.n].is_zero():
            return None
    vals = [R.zero() for _ in range(A.n)]
    for r, c in res.pivots:
        vals[c] = E.rows[r][A.n]
    return HMatrix(R, A.beta, b.beta, [[v] for v in vals])


def rank_factorization(A: HMatrix) -> FactorizationWitness | None:
    """A = P*Q through rank-many columns, or None when A has full rank."""
    res = echelon(A, "row")
    r = res.rank
    if r >= A.n:
        return None
    Tinv = invert(res.transform)
    P = submatrix(Tinv, range(A.m), range(r))
    Q = submatrix(res.matrix, range(r), range(A.n))
    return FactorizationWitness(P, Q)


def product_rank_factorization(A: HMatrix) -> FactorizationWitness | None:
    """Rank factorization over a product of graded division rings, factor by factor.

    Interface degrees are aligned by moving homogeneous units between the factors.
    """
    R = A.ring
    assert isinstance(R, ProductRing)
    G = R.group
    n = A.n
    parts = []
    for k, F in enumerate(R.factors):
        Ak = HMatrix(F, A.alpha, A.beta, [[R.project(x, k) for x in r] for r in A.rows], check=False)
        w = rank_factorization(Ak)
        if w is None:
            return None
        parts.append(w)
    r = max(w.P.n for w in parts)
    ref = max(parts, key=lambda w: w.P.n)
    lam = list(ref.P.beta)
    if r == 0:
        lam = []
    Ps, Qs = [], []
    for k, (F, w) in enumerate(zip(R.factors, parts)):
        P = [[w.P.rows[i][j] if j < w.P.n else F.zero() for j in range(r)] for i in range(A.m)]
        Q = [[w.Q.rows[j][l] if j < w.Q.m else F.zero() for l in range(n)] for j in range(r)]
        for j in range(min(r, w.P.n)):
            have = w.P.beta[j]
            if have == lam[j]:
                continue
            d = G.op(have, G.inv(lam[j]))
            u = F.unit_of_degree(d)
            if u is None:
                return None
            uu = F.hom(d, u)
            ui = F.invert(uu)
            for i in range(A.m):
                P[i][j] = P[i][j] * uu
            for l in range(n):
                Q[j][l] = ui * Q[j][l]
        Ps.append(P)
        Qs.append(Q)
    Pm = [[R.embed([Ps[k][i][j] for k in range(len(parts))]) for j in range(r)] for i in range(A.m)]
    Qm = [[R.embed([Qs[k][j][l] for k in range(len(parts))]) for l in range(n)] for j in range(r)]
    return FactorizationWitness(HMatrix(R, A.alpha, lam, Pm), HMatrix(R, lam, A.beta, Qm))


def is_invertible_over(A: HMatrix) -> bool:
    """Invertibility for graded division rings and for products of them (componentwise)."""
    R = A.ring
    if R.is_graded_division:
        return is_invertible(A)
    if isinstance(R, ProductRing) and all(F.is_graded_division for F in R.factors):
        for k, F in enumerate(R.factors):
            Ak = HMatrix(F, A.alpha, A.beta, [[R.project(x, k) for x in r] for r in A.rows], check=False)
            if not is_invertible(Ak):
                return False
        return True
    raise NotDivisionRing(f"no invertibility test for {R.name}")


__all__ = [
    "EchelonResult", "SingularError", "NotDivisionRing", "NotInvertible", "echelon", "drank", "column_rank",
    "invert", "is_invertible", "largest_invertible_submatrix", "solve", "rank_factorization",
    "product_rank_factorization", "is_invertible_over",
]
