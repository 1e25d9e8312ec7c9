"""Homogeneous matrices with row/column degree distributions, and the block operations on them."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .grp import GroupError, degree_of_entry
from .ring import GradedElement, GradedHom, GradedRing, RingError


class DistributionError(ValueError):
    """An entry does not lie in the component its row and column degrees require."""

    def __init__(self, msg: str, cell: tuple[int, int] | None = None, expected=None):
        super().__init__(msg)
        self.cell = cell
        self.expected = expected


class ShapeError(ValueError):
    pass


class MalformedWitness(ValueError):
    pass


class HMatrix:
    """An m x n grid over a graded ring together with a distribution (alpha, beta).

    Entry (i, j) lies in R_{alpha_i beta_j^{-1}}. The grid is the matrix; the
    distribution is one witness of its homogeneity.
    """

    __slots__ = ("ring", "alpha", "beta", "rows")

    def __init__(self, ring: GradedRing, alpha: Sequence, beta: Sequence, rows: list[list[GradedElement]],
                 check: bool = True):
        self.ring = ring
        self.alpha = tuple(alpha)
        self.beta = tuple(beta)
        self.rows = rows
        if check:
            self._validate()

    @property
    def m(self) -> int:
        return len(self.alpha)

    @property
    def n(self) -> int:
        return len(self.beta)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.m, self.n)

    def is_square(self) -> bool:
        return self.m == self.n

    def _validate(self):
        R = self.ring
        G = R.group
        if len(self.rows) != self.m or any(len(r) != self.n for r in self.rows):
            raise ShapeError(f"grid shape does not match distribution lengths {self.m}x{self.n}")
        for a in self.alpha + self.beta:
            if not G.contains(a):
                raise GroupError(f"distribution entry {a!r} is not in the grading group")
        for i, a in enumerate(self.alpha):
            for j, b in enumerate(self.beta):
                x = self.rows[i][j]
                if x.comps and not R.homogeneous_of(x, degree_of_entry(G, a, b)):
                    d = degree_of_entry(G, a, b)
                    raise DistributionError(
                        f"entry ({i + 1},{j + 1}) = {x} is not in the component of degree {G.fmt(d)}",
                        (i + 1, j + 1), d)

    def __getitem__(self, ij) -> GradedElement:
        i, j = ij
        return self.rows[i][j]

    def entry_degree(self, i: int, j: int):
        return degree_of_entry(self.ring.group, self.alpha[i], self.beta[j])

    def same_grid(self, other: "HMatrix") -> bool:
        return self.shape == other.shape and all(
            x == y for r, s in zip(self.rows, other.rows) for x, y in zip(r, s))

    def __eq__(self, other):
        return (isinstance(other, HMatrix) and self.alpha == other.alpha and self.beta == other.beta
                and self.same_grid(other))

    def __hash__(self):
        return hash((self.alpha, self.beta, tuple(tuple(r) for r in self.rows)))

    def grid_key(self) -> tuple:
        return (self.shape, tuple(tuple(r) for r in self.rows))

    def is_zero(self) -> bool:
        return all(x.is_zero() for r in self.rows for x in r)

    def __repr__(self):
        G = self.ring.group
        body = "; ".join(", ".join(str(x) for x in r) for r in self.rows)
        return (f"HMatrix[{', '.join(G.fmt(a) for a in self.alpha)}]"
                f"[{', '.join(G.fmt(b) for b in self.beta)}]({body})")

    def __add__(self, other: "HMatrix") -> "HMatrix":
        return mat_add(self, other)

    def __sub__(self, other: "HMatrix") -> "HMatrix":
        return mat_add(self, mat_neg(other))

    def __neg__(self) -> "HMatrix":
        return mat_neg(self)

    def __matmul__(self, other: "HMatrix") -> "HMatrix":
        return mat_mul(self, other)


def new_hmatrix(R: GradedRing, rows: list[list[GradedElement]], alpha: Sequence, beta: Sequence) -> HMatrix:
    return HMatrix(R, alpha, beta, [list(r) for r in rows])


def zeros(R: GradedRing, alpha: Sequence, beta: Sequence) -> HMatrix:
    return HMatrix(R, alpha, beta, [[R.zero() for _ in beta] for _ in alpha], check=False)


def identity(R: GradedRing, alpha: Sequence) -> HMatrix:
    n = len(alpha)
    rows = [[R.one() if i == j else R.zero() for j in range(n)] for i in range(n)]
    return HMatrix(R, alpha, alpha, rows, check=False)


def with_distribution(A: HMatrix, alpha: Sequence, beta: Sequence) -> HMatrix:
    """The same grid with another distribution (validated)."""
    return HMatrix(A.ring, alpha, beta, [list(r) for r in A.rows])


def mat_add(A: HMatrix, B: HMatrix) -> HMatrix:
    if A.alpha != B.alpha or A.beta != B.beta:
        raise DistributionError("sum needs equal distributions")
    rows = [[x + y for x, y in zip(r, s)] for r, s in zip(A.rows, B.rows)]
    return HMatrix(A.ring, A.alpha, A.beta, rows, check=False)


def mat_neg(A: HMatrix) -> HMatrix:
    return HMatrix(A.ring, A.alpha, A.beta, [[-x for x in r] for r in A.rows], check=False)


def mat_mul(A: HMatrix, B: HMatrix) -> HMatrix:
    """A in M[alpha][beta] times B in M[beta][eps] gives M[alpha][eps]."""
    if A.n != B.m:
        raise ShapeError(f"cannot multiply {A.m}x{A.n} by {B.m}x{B.n}")
    if A.beta != B.alpha:
        raise DistributionError("column distribution of the left factor must equal row distribution of the right")
    R = A.ring
    rows = []
    for i in range(A.m):
        row = []
        Ai = A.rows[i]
        for j in range(B.n):
            s = R.zero()
            for k in range(A.n):
                a = Ai[k]
                if a.comps:
                    b = B.rows[k][j]
                    if b.comps:
                        s = s + a * b
            row.append(s)
        rows.append(row)
    return HMatrix(R, A.alpha, B.beta, rows, check=False)


def scalar_mul_left(c: GradedElement, A: HMatrix) -> HMatrix:
    """c*A, re-distributed by deg(c) on the rows."""
    R = A.ring
    d = R.degree(c) if c.comps else R.group.identity
    alpha = tuple(R.group.op(d, a) for a in A.alpha)
    return HMatrix(R, alpha, A.beta, [[c * x for x in r] for r in A.rows], check=False)


def direct_sum(A: HMatrix, B: HMatrix) -> HMatrix:
    R = A.ring
    rows = [list(r) + [R.zero()] * B.n for r in A.rows]
    rows += [[R.zero()] * A.n + list(r) for r in B.rows]
    return HMatrix(R, A.alpha + B.alpha, A.beta + B.beta, rows, check=False)


def direct_sum_all(mats: Sequence[HMatrix]) -> HMatrix:
    out = mats[0]
    for M in mats[1:]:
        out = direct_sum(out, M)
    return out


def transpose(A: HMatrix) -> HMatrix:
    """Grid transpose with distribution (beta^{-1}, alpha^{-1})."""
    G = A.ring.group
    rows = [[A.rows[i][j] for i in range(A.m)] for j in range(A.n)]
    return HMatrix(A.ring, tuple(G.inv(b) for b in A.beta), tuple(G.inv(a) for a in A.alpha), rows, check=False)


def permute(A: HMatrix, row_perm: Sequence[int] | None = None, col_perm: Sequence[int] | None = None) -> HMatrix:
    """Row i of the result is row row_perm[i] of A (and likewise for columns)."""
    rp = list(range(A.m)) if row_perm is None else list(row_perm)
    cp = list(range(A.n)) if col_perm is None else list(col_perm)
    if sorted(rp) != list(range(A.m)) or sorted(cp) != list(range(A.n)):
        raise ShapeError("not a permutation")
    rows = [[A.rows[i][j] for j in cp] for i in rp]
    return HMatrix(A.ring, tuple(A.alpha[i] for i in rp), tuple(A.beta[j] for j in cp), rows, check=False)


def permutation_matrix(R: GradedRing, alpha: Sequence, perm: Sequence[int]) -> HMatrix:
    """E with E*A = permute(A, perm) for A with row distribution alpha."""
    n = len(perm)
    rows = [[R.one() if j == perm[i] else R.zero() for j in range(n)] for i in range(n)]
    return HMatrix(R, tuple(alpha[p] for p in perm), alpha, rows, check=False)


def translate(A: HMatrix, d) -> HMatrix:
    G = A.ring.group
    return HMatrix(A.ring, tuple(G.op(a, d) for a in A.alpha), tuple(G.op(b, d) for b in A.beta),
                   A.rows, check=False)


def submatrix(A: HMatrix, rows: Sequence[int], cols: Sequence[int]) -> HMatrix:
    return HMatrix(A.ring, tuple(A.alpha[i] for i in rows), tuple(A.beta[j] for j in cols),
                   [[A.rows[i][j] for j in cols] for i in rows], check=False)


def hstack(mats: Sequence[HMatrix]) -> HMatrix:
    alpha = mats[0].alpha
    if any(M.alpha != alpha for M in mats):
        raise DistributionError("horizontal blocks need a common row distribution")
    rows = [sum((list(M.rows[i]) for M in mats), []) for i in range(len(alpha))]
    return HMatrix(mats[0].ring, alpha, sum((M.beta for M in mats), ()), rows, check=False)


def vstack(mats: Sequence[HMatrix]) -> HMatrix:
    beta = mats[0].beta
    if any(M.beta != beta for M in mats):
        raise DistributionError("vertical blocks need a common column distribution")
    rows = [list(r) for M in mats for r in M.rows]
    return HMatrix(mats[0].ring, sum((M.alpha for M in mats), ()), beta, rows, check=False)


def block(grid: Sequence[Sequence[HMatrix]]) -> HMatrix:
    return vstack([hstack(list(r)) for r in grid])


def column(R: GradedRing, entries: Sequence[GradedElement], alpha: Sequence, b) -> HMatrix:
    return HMatrix(R, alpha, (b,), [[x] for x in entries])


def row(R: GradedRing, entries: Sequence[GradedElement], a, beta: Sequence) -> HMatrix:
    return HMatrix(R, (a,), beta, [list(entries)])


def replace_line(A: HMatrix, axis: str, index: int, line: Sequence[GradedElement]) -> HMatrix:
    rows = [list(r) for r in A.rows]
    if axis == "row":
        rows[index] = list(line)
    else:
        for i in range(A.m):
            rows[i][index] = line[i]
    return HMatrix(A.ring, A.alpha, A.beta, rows)


def det_sum(A: HMatrix, B: HMatrix, axis: str, index: int) -> HMatrix:
    """The determinantal sum of A and B along one row or column.

    A and B must share a distribution and agree off the chosen line; the result
    carries the sum on that line. Rows are handled through the transpose.
    """
    if axis not in ("row", "col"):
        raise ValueError("axis must be 'row' or 'col'")
    if A.alpha != B.alpha or A.beta != B.beta:
        raise DistributionError("determinantal sum needs a common distribution")
    if axis == "row":
        T = det_sum(transpose(A), transpose(B), "col", index)
        return transpose(T)
    if not 0 <= index < A.n:
        raise ShapeError("column index out of range")
    for i in range(A.m):
        for j in range(A.n):
            if j != index and A.rows[i][j] != B.rows[i][j]:
                raise ShapeError(f"matrices differ outside column {index + 1} at ({i + 1},{j + 1})")
    rows = [list(r) for r in A.rows]
    for i in range(A.m):
        rows[i][index] = A.rows[i][index] + B.rows[i][index]
    return HMatrix(A.ring, A.alpha, A.beta, rows, check=False)


def apply_hom_matrix(f: GradedHom, A: HMatrix) -> HMatrix:
    rows = [[f.apply(x) for x in r] for r in A.rows]
    return HMatrix(f.target, tuple(f.deg_map(a) for a in A.alpha), tuple(f.deg_map(b) for b in A.beta),
                   rows, check=False)


# fullness

@dataclass
class HollowBlock:
    rows: tuple
    cols: tuple
    exact: bool = True

    @property
    def r(self) -> int:
        return len(self.rows)

    @property
    def s(self) -> int:
        return len(self.cols)


HOLLOW_EXACT_LIMIT = 8


def is_hollow(A: HMatrix) -> HollowBlock | None:
    """An r x s zero block with r + s > n, or None.

    Exhaustive over column subsets for n <= 8; above that a greedy search is used and
    the block is flagged inexact (a None answer is then inconclusive).
    """
    if not A.is_square():
        raise ShapeError("hollowness is defined for square matrices")
    n = A.n
    zero = [[A.rows[i][j].is_zero() for j in range(n)] for i in range(n)]
    best = None
    if n <= HOLLOW_EXACT_LIMIT:
        for k in range(n, 0, -1):
            for cols in itertools.combinations(range(n), k):
                rows = tuple(i for i in range(n) if all(zero[i][j] for j in cols))
                if len(rows) + k > n and (best is None or len(rows) + k > best.r + best.s):
                    best = HollowBlock(rows, cols)
        return best
    cols: list[int] = []
    rows = list(range(n))
    while True:
        cand = [(sum(zero[i][j] for i in rows), j) for j in range(n) if j not in cols]
        cand = [c for c in cand if c[0] > 0]
        if not cand:
            break
        _, j = max(cand)
        cols.append(j)
        rows = [i for i in rows if zero[i][j]]
        if len(rows) + len(cols) > n:
            best = HollowBlock(tuple(rows), tuple(sorted(cols)), exact=False)
    return best


@dataclass
class FactorizationWitness:
    """A = P*Q with P n x k, Q k x n and k < n."""
    P: HMatrix
    Q: HMatrix


def verify_nonfull(A: HMatrix, w: FactorizationWitness) -> bool:
    if not A.is_square():
        raise MalformedWitness("fullness is defined for square matrices")
    P, Q = w.P, w.Q
    if P.m != A.m or Q.n != A.n or P.n != Q.m:
        raise MalformedWitness(f"witness shapes {P.shape} and {Q.shape} do not fit a {A.m}x{A.n} matrix")
    if P.n >= A.n:
        raise MalformedWitness(f"inner dimension {P.n} is not below {A.n}")
    try:
        P._validate()
        Q._validate()
    except (DistributionError, ShapeError) as exc:
        raise MalformedWitness(f"witness factor is not homogeneous: {exc}") from exc
    if P.alpha != A.alpha or Q.beta != A.beta or P.beta != Q.alpha:
        return False
    return mat_mul(P, Q).same_grid(A)


def hollow_witness(A: HMatrix, hb: HollowBlock) -> FactorizationWitness:
    """Factor a hollow matrix through n' = 2n - r - s < n columns."""
    R = A.ring
    n = A.n
    rest_rows = [i for i in range(n) if i not in hb.rows]
    rest_cols = [j for j in range(n) if j not in hb.cols]
    rp = list(hb.rows) + rest_rows
    cp = rest_cols + list(hb.cols)
    M = permute(A, rp, cp)
    r, s = hb.r, hb.s
    T = submatrix(M, range(r), range(n - s))
    U = submatrix(M, range(r, n), range(n - s))
    V = submatrix(M, range(r, n), range(n - s, n))
    lam = T.beta + M.alpha[r:]
    P = block([[T, zeros(R, T.alpha, M.alpha[r:])],
               [zeros(R, M.alpha[r:], T.beta), identity(R, M.alpha[r:])]])
    Q = block([[identity(R, T.beta), zeros(R, T.beta, V.beta)], [U, V]])
    assert P.beta == lam
    # undo the permutations: A = E^{-1} M F^{-1}
    inv_rp = [rp.index(i) for i in range(n)]
    inv_cp = [cp.index(j) for j in range(n)]
    return FactorizationWitness(permute(P, inv_rp, None), permute(Q, None, inv_cp))


def find_nonfull_witness(A: HMatrix) -> FactorizationWitness | None:
    """A factorization witness when one is found, by the hollow recipe or by rank factorization."""
    if not A.is_square():
        raise ShapeError("fullness is defined for square matrices")
    if A.n == 0:
        return None
    hb = is_hollow(A)
    if hb is not None:
        return hollow_witness(A, hb)
    from . import gdlin
    R = A.ring
    if R.is_graded_division:
        return gdlin.rank_factorization(A)
    from .ring import ProductRing
    if isinstance(R, ProductRing) and all(f.is_graded_division for f in R.factors):
        return gdlin.product_rank_factorization(A)
    return pivot_witness(A)


def pivot_witness(A: HMatrix) -> FactorizationWitness | None:
    """Eliminate around a unit entry and look for a witness of the Schur complement.

    With A = (a u; v W) and S = W - v a^-1 u = P'Q', A factors as ((a; v) | (0; P')) ((1, a^-1 u); (0, Q')).
    """
    R = A.ring
    n = A.n
    for i in range(n):
        for j in range(n):
            a = A.rows[i][j]
            if len(a.comps) == 1 and R.is_unit(a):
                break
        else:
            continue
        break
    else:
        return None
    ai = R.invert(a)
    rs = [k for k in range(n) if k != i]
    cs = [k for k in range(n) if k != j]
    M = permute(A, [i] + rs, [j] + cs)
    v = submatrix(M, range(1, n), [0])
    u = submatrix(M, [0], range(1, n))
    W = submatrix(M, range(1, n), range(1, n))
    head = HMatrix(R, (M.beta[0],), u.beta, [[ai * x for x in u.rows[0]]], check=False)
    S = W - mat_mul(v, head)
    ws = find_nonfull_witness(S)
    if ws is None:
        return None
    col = submatrix(M, range(n), [0])
    P = hstack([col, vstack([zeros(R, (M.alpha[0],), ws.P.beta), ws.P])])
    top = hstack([identity(R, (M.beta[0],)), head])
    Q = vstack([top, hstack([zeros(R, ws.Q.alpha, (M.beta[0],)), ws.Q])])
    inv_r = [([i] + rs).index(k) for k in range(n)]
    inv_c = [([j] + cs).index(k) for k in range(n)]
    return FactorizationWitness(permute(P, inv_r, None), permute(Q, None, inv_c))


# serialization

def matrix_to_json(A: HMatrix) -> dict:
    G = A.ring.group
    return {
        "alpha": [G.to_json(a) for a in A.alpha],
        "beta": [G.to_json(b) for b in A.beta],
        "rows": [[A.ring.element_to_json(x) for x in r] for r in A.rows],
    }


def matrix_from_json(R: GradedRing, d: dict) -> HMatrix:
    if not isinstance(d, dict) or not {"alpha", "beta", "rows"} <= set(d):
        raise ShapeError("matrix JSON needs 'alpha', 'beta' and 'rows'")
    G = R.group
    alpha = [G.canon(a) for a in d["alpha"]]
    beta = [G.canon(b) for b in d["beta"]]
    if not isinstance(d["rows"], list):
        raise ShapeError("'rows' must be a list")
    rows = []
    for r in d["rows"]:
        if not isinstance(r, list):
            raise ShapeError("each row must be a list")
        rows.append([R.element_from_json(x) for x in r])
    return HMatrix(R, alpha, beta, rows)


def fmt_matrix(A: HMatrix) -> str:
    cells = [[str(x) for x in r] for r in A.rows]
    w = max((len(c) for r in cells for c in r), default=1)
    return "\n".join("[ " + "  ".join(c.rjust(w) for c in r) + " ]" for r in cells)
