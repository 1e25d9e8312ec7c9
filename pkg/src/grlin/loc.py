"""Universal localization through Malcolmson tuples (F, A, X) evaluated as F A^{-1} X,
kernel certificates, Cramer's rule, rational closure forms and common denominators."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from . import gdlin
from .grp import degree_of_entry
from .hmat import (DistributionError, FactorizationWitness, HMatrix, ShapeError, apply_hom_matrix, block, column,
                   direct_sum, hstack, identity, mat_mul, mat_neg, matrix_from_json, matrix_to_json, permute,
                   submatrix, translate, verify_nonfull, vstack, zeros)
from .mideal import MalformedCertificate
from .rank import PrimeMatrixIdeal
from .ring import GradedElement, GradedHom, GradedRing

MAX_BLOCK = 64


class BudgetError(RuntimeError):
    pass


class InconsistentInput(ValueError):
    pass


@dataclass
class InvertingSet:
    """Sigma as a membership oracle, optionally with a Sigma-inverting map into a graded division ring."""
    ring: GradedRing
    member: Callable[[HMatrix], bool]
    name: str = "Sigma"
    hom: GradedHom | None = None

    def __contains__(self, A: HMatrix) -> bool:
        return A.is_square() and self.member(A)


def inverting_set_of(f: GradedHom) -> InvertingSet:
    """Matrices whose image under f is invertible; f is then Sigma-inverting by construction."""
    return InvertingSet(f.source, lambda A: gdlin.is_invertible(apply_hom_matrix(f, A)), f"Sigma_{f.name}", f)


def complement_of(P: PrimeMatrixIdeal) -> InvertingSet:
    return InvertingSet(P.ring, lambda A: not P.member(A), f"complement({P.name})")


@dataclass
class Verdict:
    ok: bool
    reason: str = ""
    cell: tuple | None = None

    def __bool__(self):
        return self.ok


# tuples

@dataclass
class LocTuple:
    """(F, A, X) of degree gamma: F in (gamma, beta), A in Sigma with (alpha, beta), X in (alpha, e)."""
    F: HMatrix
    A: HMatrix
    X: HMatrix
    gamma: object

    @property
    def ring(self) -> GradedRing:
        return self.A.ring

    @property
    def size(self) -> int:
        return self.A.n

    def check(self, sigma: InvertingSet | None = None) -> Verdict:
        G = self.ring.group
        A, F, X = self.A, self.F, self.X
        if not A.is_square() or F.m != 1 or X.n != 1 or F.n != A.n or X.m != A.m:
            return Verdict(False, "shape")
        if F.alpha != (self.gamma,) or F.beta != A.beta:
            return Verdict(False, "F must have distribution (gamma, beta)")
        if X.alpha != A.alpha or X.beta != (G.identity,):
            return Verdict(False, "X must have distribution (alpha, e)")
        for M in (F, A, X):
            try:
                M._validate()
            except DistributionError as exc:
                return Verdict(False, str(exc), exc.cell)
        if sigma is not None and A not in sigma:
            return Verdict(False, "A is not in Sigma")
        return Verdict(True)


def _cap(n: int):
    if n > MAX_BLOCK:
        raise BudgetError(f"tuple A-block of size {n} exceeds the cap {MAX_BLOCK}")


def tuple_mu(R: GradedRing, r: GradedElement, gamma=None) -> LocTuple:
    G = R.group
    e = G.identity
    if gamma is None:
        gamma = R.degree(r) if r.comps else e
    if not R.homogeneous_of(r, gamma):
        raise DistributionError(f"{r} is not homogeneous of degree {G.fmt(gamma)}")
    F = HMatrix(R, (gamma,), (e,), [[r]], check=False)
    return LocTuple(F, identity(R, (e,)), identity(R, (e,)), gamma)


def tuple_add(s: LocTuple, t: LocTuple) -> LocTuple:
    if s.gamma != t.gamma:
        raise DistributionError("tuples of different degrees cannot be added")
    _cap(s.size + t.size)
    return LocTuple(hstack([s.F, t.F]), direct_sum(s.A, t.A), vstack([s.X, t.X]), s.gamma)


def tuple_neg(t: LocTuple) -> LocTuple:
    return LocTuple(mat_neg(t.F), t.A, t.X, t.gamma)


def tuple_mul(s: LocTuple, t: LocTuple) -> LocTuple:
    """s of degree g' times t of degree g: ((0 F'), (A 0; -X'F A'), (X; 0)) of degree g'g."""
    R = t.ring
    G = R.group
    _cap(s.size + t.size)
    g = t.gamma
    A2 = translate(s.A, g)
    X2 = translate(s.X, g)  # M[alpha' g][g], so X2 F lands in M[alpha' g][beta]
    lower = mat_neg(mat_mul(X2, t.F))
    A = block([[t.A, zeros(R, t.A.alpha, A2.beta)], [lower, A2]])
    gg = G.op(s.gamma, g)
    F = HMatrix(R, (gg,), A.beta, [[R.zero()] * t.size + list(s.F.rows[0])], check=False)
    X = HMatrix(R, A.alpha, (G.identity,), [list(r) for r in t.X.rows] + [[R.zero()] for _ in range(s.size)],
                check=False)
    return LocTuple(F, A, X, gg)


def tuple_eval(f: GradedHom, t: LocTuple) -> GradedElement:
    """F^f (A^f)^{-1} X^f."""
    Af = apply_hom_matrix(f, t.A)
    if not gdlin.is_invertible(Af):
        raise gdlin.SingularError("A^f is singular: the map does not invert this tuple", gdlin.drank(Af))
    y = gdlin.solve(Af, apply_hom_matrix(f, t.X))
    Ff = apply_hom_matrix(f, t.F)
    return mat_mul(Ff, y).rows[0][0]


def inverse_tuple(A: HMatrix, i: int, j: int) -> LocTuple:
    """[E_i^T, A, E_j] re-anchored so that it evaluates to the (i, j) entry of A^{-1}."""
    R = A.ring
    G = R.group
    s = G.inv(A.alpha[j])
    At = translate(A, s)
    gamma = G.op(A.beta[i], s)
    F = HMatrix(R, (gamma,), At.beta, [[R.one() if k == i else R.zero() for k in range(A.n)]])
    X = HMatrix(R, At.alpha, (G.identity,), [[R.one() if k == j else R.zero()] for k in range(A.m)])
    return LocTuple(F, At, X, gamma)


def tuple_to_json(t: LocTuple) -> dict:
    G = t.ring.group
    return {"gamma": G.to_json(t.gamma), "F": matrix_to_json(t.F), "A": matrix_to_json(t.A),
            "X": matrix_to_json(t.X)}


def tuple_from_json(R: GradedRing, d: dict) -> LocTuple:
    try:
        return LocTuple(matrix_from_json(R, d["F"]), matrix_from_json(R, d["A"]), matrix_from_json(R, d["X"]),
                        R.group.canon(d["gamma"]))
    except KeyError as exc:
        raise MalformedCertificate(f"tuple JSON is missing {exc}") from exc


# kernel certificates

@dataclass
class MalcolmsonCert:
    """(L 0 W; 0 M 0; 0 J r) = (P; U)(Q V) with L, M, P, Q in Sigma."""
    r: GradedElement
    gamma: object
    L: HMatrix
    M: HMatrix
    W: HMatrix
    J: HMatrix
    P: HMatrix
    U: HMatrix
    Q: HMatrix
    V: HMatrix

    def lhs(self) -> HMatrix:
        R = self.L.ring
        e = R.group.identity
        top = hstack([self.L, zeros(R, self.L.alpha, self.M.beta), self.W])
        mid = hstack([zeros(R, self.M.alpha, self.L.beta), self.M, zeros(R, self.M.alpha, (e,))])
        bot = hstack([zeros(R, (self.gamma,), self.L.beta), self.J,
                      HMatrix(R, (self.gamma,), (e,), [[self.r]], check=False)])
        return vstack([top, mid, bot])


def _validate_all(mats: dict):
    for name, M in mats.items():
        try:
            M._validate()
        except (DistributionError, ShapeError) as exc:
            raise MalformedCertificate(f"{name}: {exc}") from exc


def _compare(lhs: HMatrix, rhs: HMatrix) -> Verdict:
    for i in range(lhs.m):
        for j in range(lhs.n):
            if lhs.rows[i][j] != rhs.rows[i][j]:
                return Verdict(False, f"block identity fails at ({i + 1},{j + 1}): {lhs.rows[i][j]} != {rhs.rows[i][j]}",
                               (i + 1, j + 1))
    return Verdict(True)


def malcolmson_verify(c: MalcolmsonCert, sigma: InvertingSet) -> Verdict:
    R = c.L.ring
    G = R.group
    e = G.identity
    p1, q1 = c.L.shape
    p2, q2 = c.M.shape
    N = p1 + p2
    if q1 + q2 != N:
        raise MalformedCertificate("L and M must have as many columns in total as rows")
    shapes = {"W": (p1, 1), "J": (1, q2), "P": (N, N), "U": (1, N), "Q": (N, N), "V": (N, 1)}
    for name, shp in shapes.items():
        if getattr(c, name).shape != shp:
            raise MalformedCertificate(f"{name} has shape {getattr(c, name).shape}, expected {shp}")
    _validate_all({k: getattr(c, k) for k in ("L", "M", "W", "J", "P", "U", "Q", "V")})
    pi = c.L.alpha + c.M.alpha
    theta = c.L.beta + c.M.beta
    omega = c.P.beta
    checks = [
        (c.P.alpha == pi, "P rows must carry pi = (L rows, M rows)"),
        (c.Q.alpha == omega and c.U.beta == omega and c.V.alpha == omega, "P, U, Q, V must share omega"),
        (c.Q.beta == theta, "Q columns must carry theta = (L columns, M columns)"),
        (c.W.alpha == c.L.alpha and c.W.beta == (e,), "W must have distribution (pi_1, e)"),
        (c.J.alpha == (c.gamma,) and c.J.beta == c.M.beta, "J must have distribution (gamma, theta_2)"),
        (c.U.alpha == (c.gamma,), "U must have row degree gamma"),
        (c.V.beta == (e,), "V must have column degree e"),
        (R.homogeneous_of(c.r, c.gamma), "r must be homogeneous of degree gamma"),
    ]
    for ok, msg in checks:
        if not ok:
            raise MalformedCertificate(msg)
    for name in ("L", "M", "P", "Q"):
        if getattr(c, name) not in sigma:
            return Verdict(False, f"{name} is not in Sigma")
    rhs = mat_mul(vstack([c.P, c.U]), hstack([c.Q, c.V]))
    return _compare(c.lhs(), rhs)


def malcolmson_soundness(c: MalcolmsonCert, f: GradedHom) -> tuple[GradedElement, GradedElement]:
    """(f(r), (0 J)^f diag(L, M)^{-f} (W; 0)^f); both vanish for a verified cert and Sigma-inverting f."""
    R = c.L.ring
    e = R.group.identity
    D = direct_sum(c.L, c.M)
    WJ = vstack([c.W, zeros(R, c.M.alpha, (e,))])
    J0 = hstack([zeros(R, (c.gamma,), c.L.beta), c.J])
    Df = apply_hom_matrix(f, D)
    y = gdlin.solve(Df, apply_hom_matrix(f, WJ))
    chain = mat_mul(apply_hom_matrix(f, J0), y).rows[0][0]
    return f.apply(c.r), chain


def negate_cert(c: MalcolmsonCert) -> MalcolmsonCert:
    """A cert for -r: negate the last row on both sides."""
    return MalcolmsonCert(-c.r, c.gamma, c.L, c.M, c.W, mat_neg(c.J), c.P, mat_neg(c.U), c.Q, c.V)


def trivial_cert(R: GradedRing) -> MalcolmsonCert:
    e = R.group.identity
    one = identity(R, (e,))
    return MalcolmsonCert(R.zero(), e, one, one, zeros(R, (e,), (e,)), zeros(R, (e,), (e,)),
                          identity(R, (e, e)), zeros(R, (e,), (e, e)), identity(R, (e, e)), zeros(R, (e, e), (e,)))


@dataclass
class EquivalenceCert:
    """s ~ t: (A 0 0 0 X; 0 B 0 0 Y; 0 0 L 0 W; 0 0 0 M 0; F -G 0 J 0) = (P; U)(Q V)."""
    s: LocTuple
    t: LocTuple
    L: HMatrix
    M: HMatrix
    W: HMatrix
    J: HMatrix
    P: HMatrix
    U: HMatrix
    Q: HMatrix
    V: HMatrix

    def lhs(self) -> HMatrix:
        R = self.s.ring
        e = R.group.identity
        s, t, L, M = self.s, self.t, self.L, self.M
        g = s.gamma
        cols = [s.A.beta, t.A.beta, L.beta, M.beta, (e,)]

        def z(a, b):
            return zeros(R, a, b)
        rows = [
            [s.A, z(s.A.alpha, cols[1]), z(s.A.alpha, cols[2]), z(s.A.alpha, cols[3]), s.X],
            [z(t.A.alpha, cols[0]), t.A, z(t.A.alpha, cols[2]), z(t.A.alpha, cols[3]), t.X],
            [z(L.alpha, cols[0]), z(L.alpha, cols[1]), L, z(L.alpha, cols[3]), self.W],
            [z(M.alpha, cols[0]), z(M.alpha, cols[1]), z(M.alpha, cols[2]), M, z(M.alpha, (e,))],
            [s.F, mat_neg(t.F), z((g,), cols[2]), self.J, z((g,), (e,))],
        ]
        return block(rows)


def equivalence_verify(c: EquivalenceCert, sigma: InvertingSet) -> Verdict:
    R = c.s.ring
    e = R.group.identity
    for name, t in (("s", c.s), ("t", c.t)):
        v = t.check(sigma)
        if not v:
            return Verdict(False, f"{name}: {v.reason}", v.cell)
    if c.s.gamma != c.t.gamma:
        raise MalformedCertificate("equivalent tuples must have the same degree")
    _validate_all({k: getattr(c, k) for k in ("L", "M", "W", "J", "P", "U", "Q", "V")})
    try:
        lhs = c.lhs()
    except (DistributionError, ShapeError) as exc:
        raise MalformedCertificate(f"blocks do not assemble: {exc}") from exc
    N = lhs.m - 1
    if c.P.shape != (N, N) or c.Q.shape != (N, N) or c.U.shape != (1, N) or c.V.shape != (N, 1):
        raise MalformedCertificate("factor shapes do not match the block matrix")
    if (c.P.alpha != lhs.alpha[:N] or c.Q.beta != lhs.beta[:N] or c.P.beta != c.Q.alpha
            or c.U.beta != c.P.beta or c.V.alpha != c.P.beta or c.U.alpha != (c.s.gamma,) or c.V.beta != (e,)):
        raise MalformedCertificate("factor distributions do not match pi, omega, theta")
    for name in ("L", "M", "P", "Q"):
        if getattr(c, name) not in sigma:
            return Verdict(False, f"{name} is not in Sigma")
    rhs = mat_mul(vstack([c.P, c.U]), hstack([c.Q, c.V]))
    return _compare(lhs, rhs)


def reflexive_equivalence(t: LocTuple) -> EquivalenceCert:
    """t ~ t through P = (I 0; I -A) and Q = (A 0; I -I), padded with 1x1 identity blocks."""
    R = t.ring
    e = R.group.identity
    A, F, X = t.A, t.F, t.X
    one = identity(R, (e,))
    Ia = identity(R, A.alpha)
    Ib = identity(R, A.beta)
    P0 = block([[Ia, zeros(R, A.alpha, A.beta)], [Ia, mat_neg(A)]])
    Q0 = block([[A, zeros(R, A.alpha, A.beta)], [Ib, mat_neg(Ib)]])
    P = direct_sum(direct_sum(P0, one), one)
    Q = direct_sum(direct_sum(Q0, one), one)
    U = hstack([zeros(R, (t.gamma,), A.alpha), F, zeros(R, (t.gamma,), (e, e))])
    V = vstack([X, zeros(R, A.beta + (e, e), (e,))])
    return EquivalenceCert(t, t, one, one, zeros(R, (e,), (e,)), zeros(R, (t.gamma,), (e,)), P, U, Q, V)


def converse_equivalence(c: MalcolmsonCert) -> EquivalenceCert:
    """From a kernel cert for r, a cert for mu(0) ~ mu(r)."""
    R = c.L.ring
    e = R.group.identity
    two = identity(R, (e, e))
    P = direct_sum(two, c.P)
    Q = direct_sum(two, c.Q)
    U = hstack([HMatrix(R, (c.gamma,), (e, e), [[R.zero(), -c.r]], check=False), c.U])
    V = vstack([HMatrix(R, (e, e), (e,), [[R.one()], [R.one()]], check=False), c.V])
    s = tuple_mu(R, R.zero(), c.gamma)
    t = tuple_mu(R, c.r, c.gamma)
    return EquivalenceCert(s, t, c.L, c.M, c.W, c.J, P, U, Q, V)


def swap_equivalence(c: EquivalenceCert) -> EquivalenceCert:
    """From s ~ t, a cert for -t ~ -s (swap the first two block rows and columns)."""
    a, b = c.s.A.m, c.t.A.m
    p, q = c.s.A.n, c.t.A.n
    N = c.P.m
    rp = list(range(a, a + b)) + list(range(a)) + list(range(a + b, N))
    cp = list(range(p, p + q)) + list(range(p)) + list(range(p + q, N))
    # move the interface along with the rows when the interface has the same block sizes
    wp = rp if c.P.beta[:a + b] == c.P.alpha[:a + b] else list(range(N))
    P = permute(c.P, rp, wp)
    U = permute(c.U, None, wp)
    Q = permute(c.Q, wp, cp)
    V = permute(c.V, wp, None)
    return EquivalenceCert(tuple_neg(c.t), tuple_neg(c.s), c.L, c.M, c.W, c.J, P, U, Q, V)


def forward_malcolmson(c: EquivalenceCert) -> MalcolmsonCert:
    """From a cert for mu(r) ~ mu(0), a kernel cert for r."""
    R = c.s.ring
    G = R.group
    e = G.identity
    for t in (c.s, c.t):
        if t.A.shape != (1, 1) or t.A.rows[0][0] != R.one() or t.X.rows[0][0] != R.one():
            raise InconsistentInput("forward construction needs tuples of the form (r, 1, 1)")
    if not c.t.F.is_zero():
        raise InconsistentInput("the second tuple must be mu(0)")
    r = c.s.F.rows[0][0]
    g = c.s.gamma
    one = identity(R, (e,))
    N = c.P.m
    L2 = direct_sum(identity(R, (e, e)), c.L)
    M2 = direct_sum(c.M, one)
    W2 = vstack([HMatrix(R, (e, e), (e,), [[R.one()], [R.one()]], check=False), c.W])
    J2 = hstack([mat_neg(c.J), HMatrix(R, (g,), (e,), [[r]], check=False)])
    P1 = submatrix(c.P, [0], range(N))
    lastP = hstack([mat_neg(HMatrix(R, (e,), c.P.beta, P1.rows, check=False)), one])
    P2 = vstack([hstack([c.P, zeros(R, c.P.alpha, (e,))]), lastP])
    U2 = hstack([mat_neg(c.U), HMatrix(R, (g,), (e,), [[r]], check=False)])
    e1 = HMatrix(R, (e,), c.Q.beta, [[R.one() if j == 0 else R.zero() for j in range(N)]], check=False)
    Q2 = vstack([hstack([c.Q, zeros(R, c.Q.alpha, (e,))]), hstack([e1, one])])
    V2 = vstack([c.V, one])
    return MalcolmsonCert(r, g, L2, M2, W2, J2, P2, U2, Q2, V2)


def mechanical_fixture(c: MalcolmsonCert) -> MalcolmsonCert:
    """Kernel cert for r -> mu(0) ~ mu(r) -> mu(-r) ~ mu(0) -> kernel cert for -r -> negated: a new cert for r."""
    return negate_cert(forward_malcolmson(swap_equivalence(converse_equivalence(c))))


def nonzero_localization_check(sigma: InvertingSet, seed: int = 0, tries: int = 300,
                               supplied: MalcolmsonCert | None = None) -> dict:
    """Bounded random search for a kernel cert with r = 1; and, for a supplied cert, the contradiction path.

    A verified cert with r = 1 turns into N = (L -WJ W; 0 M 0; 0 0 1), which lies in Sigma yet
    factors through one fewer column.
    """
    from .sampling import SampleConfig, random_invertible, random_matrix
    R = sigma.ring
    G = R.group
    e = G.identity
    rng = random.Random(seed)
    cfg = SampleConfig(max_size=2)
    found = None
    for _ in range(tries):
        n = rng.randint(2, 3)
        pi = tuple(rng.choice(G.ball(1)) for _ in range(n))
        P = random_invertible(R, rng, pi, cfg, side="right")
        omega = P.beta
        Q = random_invertible(R, rng, omega, cfg, side="right")
        U = random_matrix(R, rng, (e,), omega, cfg)
        V = random_matrix(R, rng, omega, (e,), cfg)
        big = mat_mul(vstack([P, U]), hstack([Q, V]))
        if big.rows[n][n] == R.one() and all(big.rows[n][j].is_zero() for j in range(n)):
            k = rng.randint(1, n - 1)
            L = submatrix(big, range(k), range(k))
            M = submatrix(big, range(k, n), range(k, n))
            W = submatrix(big, range(k), [n])
            J = submatrix(big, [n], range(k, n))
            cand = MalcolmsonCert(R.one(), e, L, M, W, J, P, U, Q, V)
            try:
                if malcolmson_verify(cand, sigma):
                    found = cand
                    break
            except MalformedCertificate:
                pass
    report: dict = {"ring": R.name, "sigma": sigma.name, "tries": tries, "r1_cert_found": found is not None}
    if supplied is not None:
        v = malcolmson_verify(supplied, sigma)
        report["supplied_verdict"] = {"ok": v.ok, "reason": v.reason, "cell": v.cell}
        if v and supplied.r == R.one():
            c = supplied
            WJ = mat_mul(HMatrix(R, c.W.alpha, (c.gamma,), c.W.rows, check=False), c.J)
            N = block([[c.L, mat_neg(WJ), c.W],
                       [zeros(R, c.M.alpha, c.L.beta), c.M, zeros(R, c.M.alpha, (e,))],
                       [zeros(R, (c.gamma,), c.L.beta), zeros(R, (c.gamma,), c.M.beta), identity(R, (c.gamma,))]])
            VJ = mat_mul(HMatrix(R, c.V.alpha, (c.gamma,), c.V.rows, check=False), hstack(
                [zeros(R, (c.gamma,), c.L.beta), c.J]))
            Qp = hstack([c.Q - VJ, c.V])
            w = FactorizationWitness(vstack([c.P, c.U]), Qp)
            report["contradiction"] = {"nonfull": verify_nonfull(N, w), "in_sigma": N in sigma}
    return report


# Cramer's rule and rational closure

@dataclass
class CramerResult:
    numerator: HMatrix
    denominator: HMatrix
    x: GradedElement
    x_invertible: bool
    numerator_invertible: bool
    witness: FactorizationWitness | None = None


def cramer_split(A: HMatrix, u: HMatrix, f: GradedHom, sigma: InvertingSet | None = None) -> CramerResult:
    """A = (A0 A. Ainf) is n x (n+1) with beta_0 = e; u = (1; u.; x) solves A^f u = 0."""
    S = f.target
    G = S.group
    n = A.m
    if A.n != n + 1 or u.shape != (n + 1, 1):
        raise ShapeError("need an n x (n+1) system and a solution column")
    if A.beta[0] != A.ring.group.identity:
        raise InconsistentInput("the first column must have degree e")
    if u.rows[0][0] != S.one():
        raise InconsistentInput("the solution must start with 1")
    Af = apply_hom_matrix(f, A)
    if not mat_mul(HMatrix(S, Af.alpha, Af.beta, Af.rows, check=False), u).is_zero():
        raise InconsistentInput("u does not solve A^f u = 0")
    num = submatrix(A, range(n), range(0, n))
    den = submatrix(A, range(n), range(1, n + 1))
    if sigma is not None and den not in sigma:
        raise InconsistentInput("the denominator is not in Sigma")
    x = u.rows[n][0]
    e = G.identity
    # (A.^f  -A0^f) = (A.^f Ainf^f)(I u.; 0 x)
    Adot = submatrix(Af, range(n), range(1, n))
    A0 = submatrix(Af, range(n), [0])
    lhs = hstack([Adot, mat_neg(A0)])
    udot = submatrix(u, range(1, n), [0])
    T = block([[identity(S, Adot.beta), udot],
               [zeros(S, (Af.beta[n],), Adot.beta), HMatrix(S, (Af.beta[n],), (e,), [[x]], check=False)]])
    rhs = mat_mul(apply_hom_matrix(f, den), T)
    if not rhs.same_grid(lhs):
        raise InconsistentInput("the pivotal identity fails")
    numf = apply_hom_matrix(f, num)
    witness = None
    if x.is_zero():
        # (A0 A.)^f = A.^f (-u. I) when x = 0
        Pw = mat_mul(apply_hom_matrix(f, den), vstack([identity(S, Adot.beta), zeros(S, (Af.beta[n],), Adot.beta)]))
        Qw = hstack([mat_neg(udot), identity(S, Adot.beta)])
        witness = FactorizationWitness(Pw, Qw)
        if not verify_nonfull(numf, witness):
            raise InconsistentInput("x = 0 but the numerator witness does not verify")
    return CramerResult(num, den, x, S.is_unit(x) if x.comps else False, gdlin.is_invertible(numf), witness)


def rational_closure_entries(f: GradedHom, A: HMatrix) -> tuple[HMatrix, list[list]]:
    """(A^f)^{-1} with the degree label beta_j alpha_i^{-1} of each entry (j, i)."""
    Af = apply_hom_matrix(f, A)
    B = gdlin.invert(Af)
    G = A.ring.group
    labels = [[degree_of_entry(G, A.beta[j], A.alpha[i]) for i in range(A.m)] for j in range(A.n)]
    return B, labels


# the seven equivalent descriptions of a closure element

@dataclass
class Form1:
    f: GradedHom
    A: HMatrix
    i: int
    j: int

    def value(self):
        return gdlin.invert(apply_hom_matrix(self.f, self.A)).rows[self.j][self.i]


@dataclass
class Form2(Form1):
    pass


@dataclass
class Form3:
    f: GradedHom
    A: HMatrix
    i: int
    j: int
    u: HMatrix

    def value(self):
        return self.u.rows[self.j][0]


@dataclass
class Form4:
    f: GradedHom
    A: HMatrix
    a: HMatrix
    u: HMatrix
    j: int

    def value(self):
        return self.u.rows[self.j][0]


@dataclass
class Form5:
    f: GradedHom
    A: HMatrix
    a: HMatrix
    u: HMatrix

    def value(self):
        return self.u.rows[-1][0]

    def check(self) -> bool:
        Af = apply_hom_matrix(self.f, self.A)
        return mat_mul(Af, self.u).same_grid(apply_hom_matrix(self.f, self.a))


@dataclass
class Form6:
    f: GradedHom
    b: HMatrix
    A: HMatrix
    c: HMatrix

    def value(self):
        return tuple_eval(self.f, LocTuple(self.b, self.A, self.c, self.b.alpha[0]))

    def as_tuple(self) -> LocTuple:
        return LocTuple(self.b, self.A, self.c, self.b.alpha[0])


@dataclass
class Form7:
    f: GradedHom
    A: HMatrix
    u: HMatrix

    def value(self):
        return self.u.rows[-1][0]

    def check(self) -> bool:
        Af = apply_hom_matrix(self.f, self.A)
        return self.u.rows[0][0] == self.f.target.one() and mat_mul(Af, self.u).is_zero()


def _form_number(d) -> int:
    return {Form1: 1, Form2: 2, Form3: 3, Form4: 4, Form5: 5, Form6: 6, Form7: 7}[type(d)]


def _step(d):
    """One construction along 1 -> 2 -> 3 -> 4 -> 5 -> 6 -> 1, and 7 -> 5."""
    f = d.f
    R = d.A.ring
    S = f.target
    G = R.group
    e = G.identity
    k = _form_number(d)
    if k == 1:
        return Form2(f, translate(d.A, G.inv(d.A.alpha[d.i])), d.i, d.j)
    if k == 2:
        Af = apply_hom_matrix(f, d.A)
        ei = HMatrix(S, Af.alpha, (f.deg_map(e),), [[S.one() if r == d.i else S.zero()] for r in range(d.A.m)])
        u = gdlin.solve(Af, ei)
        return Form3(f, d.A, d.i, d.j, u)
    if k == 3:
        a = HMatrix(R, d.A.alpha, (e,), [[R.one() if r == d.i else R.zero()] for r in range(d.A.m)])
        return Form4(f, d.A, a, d.u, d.j)
    if k == 4:
        bj = d.A.beta[d.j]
        row = HMatrix(R, (bj,), d.A.beta, [[-R.one() if c == d.j else R.zero() for c in range(d.A.n)]])
        A5 = block([[d.A, zeros(R, d.A.alpha, (bj,))], [row, identity(R, (bj,))]])
        a5 = vstack([d.a, zeros(R, (bj,), (e,))])
        x = d.u.rows[d.j][0]
        u5 = vstack([d.u, HMatrix(S, (f.deg_map(bj),), d.u.beta, [[x]], check=False)])
        return Form5(f, A5, a5, u5)
    if k == 5:
        n = d.A.n
        gamma = d.A.beta[-1]
        b = HMatrix(R, (gamma,), d.A.beta, [[R.one() if c == n - 1 else R.zero() for c in range(n)]])
        return Form6(f, b, d.A, d.a)
    if k == 6:
        gamma = d.b.alpha[0]
        n = d.A.n
        big = block([[identity(R, (e,)), zeros(R, (e,), d.A.beta), zeros(R, (e,), (gamma,))],
                     [d.c, d.A, zeros(R, d.A.alpha, (gamma,))],
                     [zeros(R, (gamma,), (e,)), d.b, identity(R, (gamma,))]])
        return Form1(f, big, 0, n + 1)
    if k == 7:
        n = d.A.m
        A5 = submatrix(d.A, range(n), range(1, n + 1))
        a5 = mat_neg(submatrix(d.A, range(n), [0]))
        u5 = submatrix(d.u, range(1, n + 1), [0])
        return Form5(f, A5, a5, u5)
    raise ValueError(f"unknown form {k}")


def form5_to_7(d: Form5) -> Form7:
    S = d.f.target
    e = S.group.identity
    A7 = hstack([mat_neg(d.a), d.A])
    u7 = vstack([HMatrix(S, (e,), d.u.beta, [[S.one()]], check=False), d.u])
    return Form7(d.f, A7, u7)


def representation_normalize(d, form: int):
    """Convert between the seven descriptions with the explicit constructions."""
    if not 1 <= form <= 7:
        raise ValueError("form must be in 1..7")
    for _ in range(16):
        k = _form_number(d)
        if k == form:
            return d
        if form == 7 and k == 5:
            return form5_to_7(d)
        d = _step(d)
    raise RuntimeError("normalization did not terminate")


def closure_inverse_witness(d: Form7, sigma: InvertingSet | None = None) -> LocTuple:
    """From a system for x, the re-ordered system (Ainf A. A0)(1; u.x^-1; x^-1) = 0 as a tuple for x^-1."""
    f = d.f
    S = f.target
    R = d.A.ring
    G = R.group
    n = d.A.m
    x = d.u.rows[n][0]
    if not x.comps or not S.is_unit(x):
        raise InconsistentInput("x is not invertible")
    xi = S.invert(x)
    shift = G.inv(d.A.beta[n])
    A = translate(permute(d.A, None, [n] + list(range(1, n)) + [0]), shift)
    sh = f.deg_map(shift)
    top = HMatrix(S, (sh,), (f.deg_map(G.identity),), [[S.one()]], check=False)
    mid = [[d.u.rows[k][0] * xi] for k in range(1, n)]
    ud = HMatrix(S, tuple(f.deg_map(b) for b in A.beta), (f.deg_map(G.identity),), [[S.one()]] + mid + [[xi]])
    d7 = Form7(f, A, ud)
    if not d7.check():
        raise InconsistentInput("re-ordered system does not verify")
    t = representation_normalize(d7, 6).as_tuple()
    if sigma is not None and t.A not in sigma:
        raise InconsistentInput("the new denominator is not in Sigma")
    return t


def closure_sum(x: Form5, y: Form5) -> Form5:
    """x + y for entries of the same degree: (A. Ainf 0; 0 -Binf B) with solution (u., x, v., x+y)."""
    R = x.A.ring
    S = x.f.target
    if x.A.beta[-1] != y.A.beta[-1]:
        raise DistributionError("closure sums need entries of the same degree")
    n2 = y.A.n
    Binf = submatrix(y.A, range(y.A.m), [n2 - 1])
    lower = hstack([zeros(R, y.A.alpha, x.A.beta[:-1]), mat_neg(Binf)])
    big = block([[x.A, zeros(R, x.A.alpha, y.A.beta)], [lower, y.A]])
    a = vstack([x.a, y.a])
    xv, yv = x.value(), y.value()
    vdot = submatrix(y.u, range(n2 - 1), [0])
    u = vstack([x.u, vdot, HMatrix(S, (S.group.identity,), x.u.beta, [[xv + yv]], check=False)])
    u = HMatrix(S, tuple(x.f.deg_map(b) for b in big.beta), x.u.beta, u.rows)
    return Form5(x.f, big, a, u)


def closure_product(x: Form5, y: Form5) -> Form5:
    """x y: (B. Binf 0; 0 -a A) translated by deg y, right-hand side (b; 0), solution (v., y, u. y, x y)."""
    R = x.A.ring
    S = x.f.target
    G = R.group
    e = G.identity
    delta = y.A.beta[-1]
    At = translate(x.A, delta)
    at = HMatrix(R, At.alpha, (delta,), x.a.rows, check=False)
    lower = hstack([zeros(R, At.alpha, y.A.beta[:-1]), mat_neg(at)])
    big = block([[y.A, zeros(R, y.A.alpha, At.beta)], [lower, At]])
    rhs = vstack([y.a, zeros(R, At.alpha, (e,))])
    yv = y.value()
    uy = [[r[0] * yv] for r in x.u.rows]
    u = HMatrix(S, tuple(x.f.deg_map(b) for b in big.beta), y.u.beta, [list(r) for r in y.u.rows] + uy)
    return Form5(x.f, big, rhs, u)


@dataclass
class CommonDenominator:
    first: Form7
    second: Form7

    def denominators_agree(self) -> bool:
        A, B = self.first.A, self.second.A
        D1 = submatrix(A, range(A.m), range(1, A.n))
        D2 = submatrix(B, range(B.m), range(1, B.n))
        return D1.same_grid(D2)


def common_denominator(x: Form7, y: Form7) -> CommonDenominator:
    """Two systems for x and y sharing the denominator (A. Ainf 0 0; 0 -Binf B. Binf)."""
    f = x.f
    S = f.target
    R = x.A.ring
    G = R.group
    e = G.identity
    A, B = x.A, y.A
    n, n2 = A.m, B.m
    b_inf, bp_inf = A.beta[n], B.beta[n2]
    A0 = submatrix(A, range(n), [0])
    Ad = submatrix(A, range(n), range(1, n))
    Ai = submatrix(A, range(n), [n])
    B0 = submatrix(B, range(n2), [0])
    Bd = submatrix(B, range(n2), range(1, n2))
    Bi = submatrix(B, range(n2), [n2])
    # first system: rows alpha * alpha' bp_inf^-1 b_inf
    s1 = G.op(G.inv(bp_inf), b_inf)
    Bd1, Bi1 = translate(Bd, s1), translate(Bi, s1)
    rows2 = Bd1.alpha
    top = hstack([A0, Ad, Ai, zeros(R, A.alpha, Bd1.beta), zeros(R, A.alpha, Bi1.beta)])
    bot = hstack([zeros(R, rows2, (e,)), zeros(R, rows2, Ad.beta),
                  HMatrix(R, rows2, (b_inf,), mat_neg(Bi1).rows, check=False), Bd1, Bi1])
    sys1 = vstack([top, bot])
    xv = x.value()
    u1 = [[x.u.rows[k][0]] for k in range(n + 1)] + [[S.zero()] for _ in range(n2 - 1)] + [[xv]]
    U1 = HMatrix(S, tuple(f.deg_map(b) for b in sys1.beta), (f.deg_map(e),), u1)
    # second system: rows alpha b_inf^-1 bp_inf * alpha'
    s2 = G.op(G.inv(b_inf), bp_inf)
    Ad2, Ai2 = translate(Ad, s2), translate(Ai, s2)
    top2 = hstack([zeros(R, Ad2.alpha, (e,)), Ad2, Ai2, zeros(R, Ad2.alpha, Bd.beta), zeros(R, Ad2.alpha, Bi.beta)])
    bot2 = hstack([B0, zeros(R, B.alpha, Ad2.beta), HMatrix(R, B.alpha, (bp_inf,), mat_neg(Bi).rows, check=False),
                   Bd, Bi])
    sys2 = vstack([top2, bot2])
    yv = y.value()
    u2 = [[S.one()]] + [[S.zero()] for _ in range(n)] + [[y.u.rows[k][0]] for k in range(1, n2)] + [[yv]]
    U2 = HMatrix(S, tuple(f.deg_map(b) for b in sys2.beta), (f.deg_map(e),), u2)
    out = CommonDenominator(Form7(f, sys1, U1), Form7(f, sys2, U2))
    if not (out.first.check() and out.second.check() and out.denominators_agree()):
        raise InconsistentInput("combined systems do not verify")
    return out


def cert_to_json(c: MalcolmsonCert) -> dict:
    R = c.L.ring
    d = {"kind": "malcolmson", "r": R.element_to_json(c.r), "gamma": R.group.to_json(c.gamma)}
    for k in ("L", "M", "W", "J", "P", "U", "Q", "V"):
        d[k] = matrix_to_json(getattr(c, k))
    return d


def cert_from_json(R: GradedRing, d: dict) -> MalcolmsonCert:
    try:
        mats = {k: matrix_from_json(R, d[k]) for k in ("L", "M", "W", "J", "P", "U", "Q", "V")}
        return MalcolmsonCert(R.element_from_json(d["r"]), R.group.canon(d["gamma"]), **mats)
    except KeyError as exc:
        raise MalformedCertificate(f"certificate is missing {exc}") from exc
