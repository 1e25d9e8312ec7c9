"""Matrix (pre-)ideals through derivation certificates.

A member of the pre-ideal generated by a list X of matrices is certified by a binary
tree whose leaves are non-full matrices or matrices E(X_i + A)F, and whose internal
nodes are determinantal sums. Search is bounded; a miss is never a proof of non-membership.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Union

from .hmat import (FactorizationWitness, HMatrix, HollowBlock, MalformedWitness, ShapeError, det_sum, direct_sum,
                   direct_sum_all, find_nonfull_witness, hollow_witness, identity, is_hollow, matrix_from_json,
                   matrix_to_json, permute, submatrix, verify_nonfull)
from .ring import GradedRing, ProductRing


class MalformedCertificate(ValueError):
    pass


@dataclass
class NonFull:
    target: HMatrix
    witness: FactorizationWitness | None = None
    hollow: HollowBlock | None = None


@dataclass
class DClass:
    """target = permute(X[x] + padding, row_perm, col_perm)."""
    target: HMatrix
    x: int
    padding: HMatrix | None
    row_perm: tuple
    col_perm: tuple


@dataclass
class DetSum:
    target: HMatrix
    axis: str
    index: int
    left: "Node"
    right: "Node"


Node = Union[NonFull, DClass, DetSum]


def depth(c: Node) -> int:
    if isinstance(c, DetSum):
        return 1 + max(depth(c.left), depth(c.right))
    return 0


def size(c: Node) -> int:
    if isinstance(c, DetSum):
        return 1 + size(c.left) + size(c.right)
    return 1


def _differs_only_on(A: HMatrix, B: HMatrix, axis: str, index: int) -> bool:
    for i in range(A.m):
        for j in range(A.n):
            on_line = (j == index) if axis == "col" else (i == index)
            if not on_line and A.rows[i][j] != B.rows[i][j]:
                return False
    return True


def verify_derivation(c: Node, gens: list[HMatrix] | None = None) -> bool:
    """True iff every leaf checks and every determinantal sum evaluates to its parent."""
    gens = gens or []
    if isinstance(c, NonFull):
        T = c.target
        if not isinstance(T, HMatrix) or not T.is_square():
            raise MalformedCertificate("leaf target must be a square matrix")
        if c.witness is not None:
            try:
                return verify_nonfull(T, c.witness)
            except MalformedWitness as exc:
                raise MalformedCertificate(str(exc)) from exc
        if c.hollow is not None:
            rows, cols = c.hollow.rows, c.hollow.cols
            if any(not 0 <= i < T.m for i in rows) or any(not 0 <= j < T.n for j in cols):
                raise MalformedCertificate("hollow block indices out of range")
            if len(set(rows)) + len(set(cols)) <= T.n:
                return False
            return all(T.rows[i][j].is_zero() for i in rows for j in cols)
        raise MalformedCertificate("non-full leaf needs a witness or a hollow block")
    if isinstance(c, DClass):
        if not 0 <= c.x < len(gens):
            raise MalformedCertificate(f"generator index {c.x} out of range")
        X = gens[c.x]
        M = X if c.padding is None or c.padding.n == 0 else direct_sum(X, c.padding)
        T = c.target
        if M.shape != T.shape or len(c.row_perm) != T.m or len(c.col_perm) != T.n:
            raise MalformedCertificate("D-class leaf shape mismatch")
        if sorted(c.row_perm) != list(range(T.m)) or sorted(c.col_perm) != list(range(T.n)):
            raise MalformedCertificate("D-class permutations are not permutations")
        return permute(M, c.row_perm, c.col_perm).same_grid(T)
    if isinstance(c, DetSum):
        if c.axis not in ("row", "col"):
            raise MalformedCertificate(f"unknown axis {c.axis!r}")
        A, B = c.left.target, c.right.target
        T = c.target
        if A.shape != T.shape or B.shape != T.shape:
            raise MalformedCertificate("determinantal sum children must match the parent shape")
        limit = T.n if c.axis == "col" else T.m
        if not 0 <= c.index < limit:
            raise MalformedCertificate("determinantal sum line out of range")
        if A.alpha != B.alpha or A.beta != B.beta:
            return False
        if not _differs_only_on(A, B, c.axis, c.index):
            return False
        if not det_sum(A, B, c.axis, c.index).same_grid(T):
            return False
        return verify_derivation(c.left, gens) and verify_derivation(c.right, gens)
    raise MalformedCertificate(f"unknown node {type(c).__name__}")


# search

@dataclass
class SearchBudget:
    depth: int = 2
    size: int = 2
    degree_ball: int = 1
    max_splits: int = 400


@dataclass
class NotFound:
    budget: SearchBudget
    explored: int

    def __bool__(self):
        return False


def _dclass_leaf(T: HMatrix, gens: list[HMatrix], max_pad: int) -> DClass | None:
    n = T.n
    for xi, X in enumerate(gens):
        p = X.n
        if not X.is_square() or p > n or n - p > max_pad:
            continue
        for rsel in itertools.permutations(range(n), p):
            # rows of T that carry X must match X on some ordered column choice
            rest_r = [i for i in range(n) if i not in rsel]
            for csel in itertools.permutations(range(n), p):
                if any(T.rows[rsel[a]][csel[b]] != X.rows[a][b] for a in range(p) for b in range(p)):
                    continue
                rest_c = [j for j in range(n) if j not in csel]
                if any(not T.rows[i][j].is_zero() for i in rsel for j in rest_c):
                    continue
                if any(not T.rows[i][j].is_zero() for i in rest_r for j in csel):
                    continue
                pad = submatrix(T, rest_r, rest_c) if rest_r else None
                rp = [0] * n
                for k, i in enumerate(rsel):
                    rp[i] = k
                for k, i in enumerate(rest_r):
                    rp[i] = p + k
                cp = [0] * n
                for k, j in enumerate(csel):
                    cp[j] = k
                for k, j in enumerate(rest_c):
                    cp[j] = p + k
                return DClass(T, xi, pad, tuple(rp), tuple(cp))
    return None


def _leaf(T: HMatrix, gens, max_pad) -> Node | None:
    hb = is_hollow(T)
    if hb is not None and hb.exact:
        return NonFull(T, hollow=hb)
    w = find_nonfull_witness(T)
    if w is not None:
        return NonFull(T, witness=w)
    return _dclass_leaf(T, gens, max_pad)


def _cell_pool(T: HMatrix, d, gens, radius) -> list:
    R = T.ring
    pool = {R.zero()}
    for r in T.rows:
        for x in r:
            if R.homogeneous_of(x, d):
                pool.add(x)
                pool.add(-x)
                if isinstance(R, ProductRing):
                    for k in range(len(R.factors)):
                        parts = [R.project(x, i) if i == k else R.factors[i].zero() for i in range(len(R.factors))]
                        pool.add(R.embed(parts))
    for X in gens:
        for r in X.rows:
            for x in r:
                if R.homogeneous_of(x, d):
                    pool.add(x)
    if R.supports(d):
        for c in R.basis_coefs(d):
            u = R.hom(d, c)
            pool.add(u)
            pool.add(-u)
    return sorted(pool, key=repr)


def _splits(T: HMatrix, axis: str, index: int, gens, budget: SearchBudget):
    cells = [(i, index) for i in range(T.m)] if axis == "col" else [(index, j) for j in range(T.n)]
    pools = [_cell_pool(T, T.entry_degree(i, j), gens, budget.degree_ball) for i, j in cells]
    count = 0
    for us in itertools.product(*pools):
        line = [T.rows[i][j] for i, j in cells]
        if all(u == x for u, x in zip(us, line)) or all(u.is_zero() for u in us):
            continue
        vs = [x - u for u, x in zip(us, line)]
        count += 1
        if count > budget.max_splits:
            return
        yield cells, us, vs


def _set_line(T: HMatrix, cells, vals) -> HMatrix:
    rows = [list(r) for r in T.rows]
    for (i, j), v in zip(cells, vals):
        rows[i][j] = v
    return HMatrix(T.ring, T.alpha, T.beta, rows, check=False)


class _Searcher:
    def __init__(self, gens, budget: SearchBudget):
        self.gens = gens
        self.budget = budget
        self.failed: dict = {}
        self.explored = 0

    def key(self, T):
        return (T.alpha, T.beta, T.grid_key())

    def solve(self, T: HMatrix, d: int) -> Node | None:
        k = self.key(T)
        if self.failed.get(k, -1) >= d:
            return None
        self.explored += 1
        leaf = _leaf(T, self.gens, self.budget.size)
        if leaf is not None:
            return leaf
        if d > 0:
            axes = [("col", j) for j in range(T.n)]
            if T.m > 1:
                axes += [("row", i) for i in range(T.m)]
            for axis, idx in axes:
                for cells, us, vs in _splits(T, axis, idx, self.gens, self.budget):
                    A = _set_line(T, cells, us)
                    B = _set_line(T, cells, vs)
                    ca = self.solve(A, d - 1)
                    if ca is None:
                        continue
                    cb = self.solve(B, d - 1)
                    if cb is None:
                        continue
                    return DetSum(T, axis, idx, ca, cb)
        self.failed[k] = max(self.failed.get(k, -1), d)
        return None


def search_derivation(target: HMatrix, gens: list[HMatrix] | None = None,
                      budget: SearchBudget | None = None) -> Node | NotFound:
    """Iterative deepening search; every returned certificate verifies."""
    gens = list(gens or [])
    budget = budget or SearchBudget()
    s = _Searcher(gens, budget)
    for d in range(budget.depth + 1):
        c = s.solve(target, d)
        if c is not None:
            assert verify_derivation(c, gens)
            return c
    return NotFound(budget, s.explored)


# ideal level

@dataclass
class IdealCert:
    """A + I_k is certified by the derivation."""
    k: int
    derivation: Node


@dataclass
class MatrixIdealHandle:
    ring: GradedRing
    generators: list = field(default_factory=list)
    budget: SearchBudget = field(default_factory=SearchBudget)

    def member(self, A: HMatrix, budget: SearchBudget | None = None):
        return ideal_member(self, A, budget)

    def radical(self, A: HMatrix, r_bound: int = 2, budget: SearchBudget | None = None):
        return radical_member(self, A, r_bound, budget)


def padded(A: HMatrix, k: int) -> HMatrix:
    if k == 0:
        return A
    e = A.ring.group.identity
    return direct_sum(A, identity(A.ring, (e,) * k))


def ideal_member(H: MatrixIdealHandle, A: HMatrix, budget: SearchBudget | None = None) -> IdealCert | NotFound:
    budget = budget or H.budget
    explored = 0
    for k in range(budget.size + 1):
        res = search_derivation(padded(A, k), H.generators, budget)
        if not isinstance(res, NotFound):
            return IdealCert(k, res)
        explored += res.explored
    return NotFound(budget, explored)


def verify_ideal_cert(A: HMatrix, cert: IdealCert, gens: list[HMatrix]) -> bool:
    T = padded(A, cert.k)
    return cert.derivation.target.same_grid(T) and verify_derivation(cert.derivation, gens)


def unpad_cert(cert: IdealCert) -> IdealCert:
    """A cert for A + 1 is a cert for A with one more identity summand."""
    return IdealCert(cert.k + 1, cert.derivation)


def radical_member(H: MatrixIdealHandle, A: HMatrix, r_bound: int = 2,
                   budget: SearchBudget | None = None) -> tuple[int, IdealCert] | NotFound:
    budget = budget or H.budget
    explored = 0
    for r in range(1, r_bound + 1):
        res = ideal_member(H, direct_sum_all([A] * r), budget)
        if not isinstance(res, NotFound):
            return r, res
        explored += res.explored
    return NotFound(budget, explored)


def product_generators(X1: list[HMatrix], X2: list[HMatrix]) -> list[HMatrix]:
    return [direct_sum(a, b) for a in X1 for b in X2]


# certificate combinators

def _as_witness(c: NonFull) -> FactorizationWitness:
    if c.witness is not None:
        return c.witness
    return hollow_witness(c.target, c.hollow)


def cert_det_sum(a: Node, b: Node, axis: str, index: int) -> DetSum:
    return DetSum(det_sum(a.target, b.target, axis, index), axis, index, a, b)


def cert_direct_sum(c: Node, M: HMatrix) -> Node:
    """Certificate for target + M."""
    T = direct_sum(c.target, M)
    if isinstance(c, DetSum):
        return DetSum(T, c.axis, c.index, cert_direct_sum(c.left, M), cert_direct_sum(c.right, M))
    if isinstance(c, NonFull):
        w = _as_witness(c)
        return NonFull(T, witness=FactorizationWitness(direct_sum(w.P, M), direct_sum(w.Q, identity(M.ring, M.beta))))
    n0 = c.target.n
    pad = M if c.padding is None or c.padding.n == 0 else direct_sum(c.padding, M)
    rp = tuple(c.row_perm) + tuple(range(n0, n0 + M.m))
    cp = tuple(c.col_perm) + tuple(range(n0, n0 + M.n))
    return DClass(T, c.x, pad, rp, cp)


def cert_permute(c: Node, rp: list[int], cp: list[int]) -> Node:
    """Certificate for permute(target, rp, cp)."""
    T = permute(c.target, rp, cp)
    if isinstance(c, DetSum):
        idx = cp.index(c.index) if c.axis == "col" else rp.index(c.index)
        return DetSum(T, c.axis, idx, cert_permute(c.left, rp, cp), cert_permute(c.right, rp, cp))
    if isinstance(c, NonFull):
        w = _as_witness(c)
        return NonFull(T, witness=FactorizationWitness(permute(w.P, rp, None), permute(w.Q, None, cp)))
    return DClass(T, c.x, c.padding, tuple(c.row_perm[i] for i in rp), tuple(c.col_perm[j] for j in cp))


def negate_line_witness(w: FactorizationWitness, axis: str, index: int) -> FactorizationWitness:
    if axis == "col":
        rows = [list(r) for r in w.Q.rows]
        for r in rows:
            r[index] = -r[index]
        return FactorizationWitness(w.P, HMatrix(w.Q.ring, w.Q.alpha, w.Q.beta, rows, check=False))
    rows = [list(r) for r in w.P.rows]
    rows[index] = [-x for x in rows[index]]
    return FactorizationWitness(HMatrix(w.P.ring, w.P.alpha, w.P.beta, rows, check=False), w.Q)


def cert_cancel_nonfull(cC: Node, B: NonFull, axis: str, index: int) -> DetSum:
    """From a cert for C = A nabla B with B not full, a cert for A = C nabla B'."""
    w = negate_line_witness(_as_witness(B), axis, index)
    from .hmat import mat_mul
    Bneg = mat_mul(w.P, w.Q)
    Bneg = HMatrix(Bneg.ring, B.target.alpha, B.target.beta, Bneg.rows, check=False)
    return cert_det_sum(cC, NonFull(Bneg, witness=w), axis, index)


# probes

def existence_probe(R: GradedRing, budget: SearchBudget | None = None) -> dict:
    """Look for an identity matrix, or a diagonal matrix with non-zero homogeneous entries,
    written as a determinantal sum of non-full matrices."""
    budget = budget or SearchBudget(depth=2, size=0)
    G = R.group
    e = G.identity
    out: dict = {"ring": R.name, "budget": vars(budget).copy()}
    res = search_derivation(identity(R, (e,)), [], budget)
    out["identity"] = None if isinstance(res, NotFound) else res
    units = [R.hom(e, c) for c in R.basis_coefs(e)]
    found = None
    for a in units:
        for b in units:
            if a.is_zero() or b.is_zero():
                continue
            D = HMatrix(R, (e, e), (e, e), [[a, R.zero()], [R.zero(), b]], check=False)
            res = search_derivation(D, [], SearchBudget(depth=1, size=0, max_splits=budget.max_splits))
            if not isinstance(res, NotFound):
                found = {"a": a, "b": b, "certificate": res}
                break
        if found:
            break
    out["fractions_obstruction"] = found
    return out


# serialization

def cert_to_json(c: Node) -> dict:
    if isinstance(c, DetSum):
        return {"node": "detsum", "axis": c.axis, "index": c.index, "target": matrix_to_json(c.target),
                "left": cert_to_json(c.left), "right": cert_to_json(c.right)}
    if isinstance(c, NonFull):
        d = {"node": "nonfull", "target": matrix_to_json(c.target)}
        if c.witness is not None:
            d["witness"] = {"P": matrix_to_json(c.witness.P), "Q": matrix_to_json(c.witness.Q)}
        else:
            d["hollow"] = {"rows": list(c.hollow.rows), "cols": list(c.hollow.cols)}
        return d
    return {"node": "dclass", "target": matrix_to_json(c.target), "x": c.x,
            "padding": None if c.padding is None else matrix_to_json(c.padding),
            "row_perm": list(c.row_perm), "col_perm": list(c.col_perm)}


def cert_from_json(R: GradedRing, d: dict) -> Node:
    try:
        kind = d["node"]
        T = matrix_from_json(R, d["target"])
        if kind == "detsum":
            return DetSum(T, d["axis"], int(d["index"]), cert_from_json(R, d["left"]), cert_from_json(R, d["right"]))
        if kind == "nonfull":
            if "witness" in d:
                w = FactorizationWitness(matrix_from_json(R, d["witness"]["P"]), matrix_from_json(R, d["witness"]["Q"]))
                return NonFull(T, witness=w)
            return NonFull(T, hollow=HollowBlock(tuple(d["hollow"]["rows"]), tuple(d["hollow"]["cols"])))
        if kind == "dclass":
            pad = None if d.get("padding") is None else matrix_from_json(R, d["padding"])
            return DClass(T, int(d["x"]), pad, tuple(d["row_perm"]), tuple(d["col_perm"]))
    except (KeyError, TypeError) as exc:
        raise MalformedCertificate(f"bad certificate JSON: {exc!r}") from exc
    raise MalformedCertificate(f"unknown node kind {d.get('node')!r}")
