"""Seeded verification suites shared by the command line and the acceptance tests."""
from __future__ import annotations

import dataclasses
import random

from . import gdlin, loc, rank
from .grp import degree_of_entry, quotient
from .hmat import HMatrix, apply_hom_matrix, mat_mul, vstack, zeros
from .regrade import (component_check, det_kernel, lift_division_ring, lift_hom, regrade_ring,
                      restrict_spectrum_point, evaluate_at)
from .ring import catalog_hom, catalog_ring
from .sampling import SampleConfig, random_invertible, random_matrix, sample_matrix


def _result(suite: str, checked: int, failure: str | None = None, **extra) -> dict:
    out = {"suite": suite, "checked": checked, "passed": failure is None}
    if failure is not None:
        out["failure"] = failure
    out.update(extra)
    return out


def rank_triple(R, seed: int = 0, count: int = 500) -> dict:
    """Row rank, column rank and the largest invertible submatrix agree."""
    rng = random.Random(seed)
    cfg = SampleConfig(max_size=4)
    for k in range(count):
        A = sample_matrix(R, rng, cfg)
        r, c = gdlin.drank(A), gdlin.column_rank(A)
        s = gdlin.largest_invertible_submatrix(A)[0]
        if not r == c == s:
            return _result("rank-triple", k + 1, f"row {r}, column {c}, submatrix {s}", ring=R.name)
    return _result("rank-triple", count, ring=R.name)


def malcolmson_suite(seed: int = 0, perturbations: int = 100) -> dict:
    from .examples import malcolmson_fixtures
    fixtures = malcolmson_fixtures()
    for name, c, sigma, f in fixtures:
        if not loc.malcolmson_verify(c, sigma):
            return _result("malcolmson", 0, f"fixture {name} rejected")
        fr, chain = loc.malcolmson_soundness(c, f)
        if not (fr.is_zero() and chain.is_zero()):
            return _result("malcolmson", 0, f"fixture {name}: f(r) = {fr}")
    rng = random.Random(seed)
    pieces = ("r", "L", "M", "W", "J", "P", "U", "Q", "V")
    done = 0
    while done < perturbations:
        name, c, sigma, f = fixtures[done % len(fixtures)]
        R = c.L.ring
        G = R.group
        piece = rng.choice(pieces)
        if piece == "r":
            d = c.gamma
            unit = R.unit_of_degree(d)
            if unit is None:
                continue
            bad = dataclasses.replace(c, r=c.r + R.hom(d, unit))
            where = "r"
        else:
            M = getattr(c, piece)
            i, j = rng.randrange(M.m), rng.randrange(M.n)
            d = degree_of_entry(G, M.alpha[i], M.beta[j])
            unit = R.unit_of_degree(d)
            if unit is None:
                continue
            rows = [list(r) for r in M.rows]
            rows[i][j] = rows[i][j] + R.hom(d, unit)
            bad = dataclasses.replace(c, **{piece: HMatrix(R, M.alpha, M.beta, rows)})
            where = f"{piece}({i + 1},{j + 1})"
        if loc.malcolmson_verify(bad, sigma):
            return _result("malcolmson", done, f"perturbation of {name} at {where} accepted")
        done += 1
    return _result("malcolmson", len(fixtures) + perturbations, fixtures=[x[0] for x in fixtures])


def _sigma_member(R, f, rng, alpha, beta, cfg, tries: int = 40) -> HMatrix:
    for _ in range(tries):
        A = random_matrix(R, rng, alpha, beta, cfg)
        if gdlin.is_invertible(apply_hom_matrix(f, A)):
            return A
    A = random_invertible(R, rng, alpha, cfg, side="right")
    return A


def random_tuple(R, f, rng, gamma, cfg: SampleConfig) -> loc.LocTuple:
    G = R.group
    e = G.identity
    n = rng.randint(1, 3)
    ball = G.ball(1)
    alpha = tuple(rng.choice(ball) for _ in range(n))
    beta = tuple(rng.choice(ball) for _ in range(n))
    A = _sigma_member(R, f, rng, alpha, beta, cfg)
    F = random_matrix(R, rng, (gamma,), A.beta, cfg)
    X = random_matrix(R, rng, A.alpha, (e,), cfg)
    return loc.LocTuple(F, A, X, gamma)


def tuples_suite(seed: int = 0, pairs: int = 200, inverses: int = 50) -> dict:
    """Evaluation of tuples over QP with Sigma the QL-invertible matrices is a ring homomorphism."""
    R = catalog_ring("QP")
    f = catalog_hom("incl_QP_QL")
    S = f.target
    rng = random.Random(seed)
    cfg = SampleConfig(zero_prob=0.3)
    ev = lambda t: loc.tuple_eval(f, t)  # noqa: E731
    for k in range(pairs):
        g1, g2 = rng.choice([-1, 0, 1]), rng.choice([-1, 0, 1])
        s, t = random_tuple(R, f, rng, g1, cfg), random_tuple(R, f, rng, g2, cfg)
        t2 = random_tuple(R, f, rng, g1, cfg)
        if ev(loc.tuple_mul(s, t)) != ev(s) * ev(t):
            return _result("tuples", k, "product not preserved")
        if ev(loc.tuple_add(s, t2)) != ev(s) + ev(t2):
            return _result("tuples", k, "sum not preserved")
        if ev(loc.tuple_neg(s)) != -ev(s):
            return _result("tuples", k, "negation not preserved")
        r = R.sample_homogeneous(rng, rng.choice([0, 1, 2]))
        if ev(loc.tuple_mu(R, r)) != f.apply(r):
            return _result("tuples", k, "mu(r) does not evaluate to r")
    if ev(loc.tuple_mu(R, R.one())) != S.one():
        return _result("tuples", pairs, "mu(1) does not evaluate to 1")
    for k in range(inverses):
        n = rng.randint(1, 3)
        alpha = tuple(rng.choice([-1, 0, 1]) for _ in range(n))
        beta = tuple(rng.choice([-1, 0, 1]) for _ in range(n))
        A = _sigma_member(R, f, rng, alpha, beta, cfg)
        B = gdlin.invert(apply_hom_matrix(f, A))
        for i in range(n):
            for j in range(n):
                if ev(loc.inverse_tuple(A, i, j)) != B.rows[i][j]:
                    return _result("tuples", pairs + k, f"inverse entry ({i + 1},{j + 1}) differs")
    return _result("tuples", pairs + inverses)


CLOSURE_SETTINGS = (("QP", "incl_QP_QL"), ("EXF", "pi_E"), ("EXF", "pi_F"), ("Q2", "id_Q2"))


def random_closure_element(R, f, rng, cfg: SampleConfig, zero_prob: float = 0.3) -> loc.Form7:
    """A system (A0 A. Ainf)(1; u.; x) = 0 over the target, with Ainf-part in Sigma."""
    G = R.group
    e = G.identity
    n = rng.randint(1, 3)
    ball = G.ball(1)
    alpha = tuple(rng.choice(ball) for _ in range(n))
    beta = tuple(rng.choice(ball) for _ in range(n))
    Ap = _sigma_member(R, f, rng, alpha, beta, cfg)
    if rng.random() < zero_prob:
        c = random_matrix(R, rng, Ap.beta, (e,), cfg)
        c.rows[-1][0] = R.zero()
        a = mat_mul(Ap, c)
    else:
        a = random_matrix(R, rng, Ap.alpha, (e,), cfg)
    u = gdlin.solve(apply_hom_matrix(f, Ap), apply_hom_matrix(f, a))
    return loc.form5_to_7(loc.Form5(f, Ap, a, u))


def closure_suite(seed: int = 0, count: int = 100) -> dict:
    """Cramer's rule, the seven descriptions, inverses, sums, products and common denominators."""
    rng = random.Random(seed)
    cfg = SampleConfig(zero_prob=0.3)
    zeros_seen = 0
    for k in range(count):
        rname, hname = CLOSURE_SETTINGS[k % len(CLOSURE_SETTINGS)]
        R, f = catalog_ring(rname), catalog_hom(hname)
        d7 = random_closure_element(R, f, rng, cfg)
        res = loc.cramer_split(d7.A, d7.u, f)
        if res.x_invertible != res.numerator_invertible:
            return _result("closure", k, f"Cramer mismatch over {rname}")
        if res.x.is_zero():
            zeros_seen += 1
            if res.witness is None:
                return _result("closure", k, "x = 0 without a witness")
        x = d7.value()
        for form in range(1, 8):
            if loc.representation_normalize(d7, form).value() != x:
                return _result("closure", k, f"form {form} changes the value")
        if res.x_invertible:
            t = loc.closure_inverse_witness(d7)
            if loc.tuple_eval(f, t) * x != f.target.one():
                return _result("closure", k, "inverse tuple is wrong")
        y7 = random_closure_element(R, f, rng, cfg)
        y = y7.value()
        x5, y5 = loc.representation_normalize(d7, 5), loc.representation_normalize(y7, 5)
        p = loc.closure_product(x5, y5)
        if not p.check() or p.value() != x * y:
            return _result("closure", k, "product system is wrong")
        if x5.A.beta[-1] == y5.A.beta[-1]:
            s = loc.closure_sum(x5, y5)
            if not s.check() or s.value() != x + y:
                return _result("closure", k, "sum system is wrong")
        cd = loc.common_denominator(d7, y7)
        if cd.first.value() != x or cd.second.value() != y:
            return _result("closure", k, "common denominator changes the values")
    if zeros_seen == 0:
        return _result("closure", count, "the x = 0 branch was never exercised")
    return _result("closure", count, zero_branch=zeros_seen)


def regrade_suite(seed: int = 0, count: int = 200) -> dict:
    rng = random.Random(seed)
    Q, QL, QP, Q2 = (catalog_ring(n) for n in ("Q", "QL", "QP", "Q2"))
    # lift of Q along Z -> Z/Z against QL on generators
    D = lift_division_ring(Q, quotient(QL.group, "all"))
    to_d = lambda a: D.elem({g: Q.scalar(c) for g, c in a.comps.items()})  # noqa: E731
    t, ti = QL.hom(1, 1), QL.hom(-1, 1)
    if to_d(t) * to_d(ti) != D.one() or D.degree(to_d(t)) != 1:
        return _result("regrade", 0, "generator check failed")
    for _ in range(50):
        a, b = QL.sample_homogeneous(rng, rng.randint(-2, 2)), QL.sample_homogeneous(rng, rng.randint(-2, 2))
        if to_d(a * b) != to_d(a) * to_d(b) or to_d(a + b) != to_d(a) + to_d(b):
            return _result("regrade", 0, "QL -> lift is not a ring map")
    # A^phi invertible iff A^psi invertible
    D2 = lift_division_ring(Q, quotient(Q2.group, "all"))
    pairs = [(QL, catalog_hom("eval1_QL"), D), (Q2, catalog_hom("aug_Q2"), D2)]
    cfg = SampleConfig(max_size=3)
    for k in range(count):
        R, phi, DD = pairs[k % 2]
        psi = lift_hom(phi, DD)
        A = sample_matrix(R, rng, cfg)
        if not A.is_square():
            A = random_matrix(R, rng, A.alpha, A.alpha, cfg)
        if gdlin.is_invertible(apply_hom_matrix(phi, A)) != gdlin.is_invertible(apply_hom_matrix(psi, A)):
            return _result("regrade", k, "lift invertibility differs")
    # even/odd split of QL lifts with the right components
    v2 = regrade_ring(QL, [2])
    if not component_check(lift_division_ring(v2, v2.q), seed=seed):
        return _result("regrade", count, "component check failed")
    # spectrum restriction
    vt = regrade_ring(QP, "all")
    P1 = restrict_spectrum_point(det_kernel(vt, name="ker_Qt"), vt)
    P2 = restrict_spectrum_point(det_kernel(vt, evaluate_at(QP, 0), name="ker_t=0"), vt)
    for P in (P1, P2):
        rep = rank.verify_pm(P, seed=seed, budget=60, consequences=False)
        if not rep.passed:
            return _result("regrade", count, f"PM axioms fail for {P.name}")
    if rank.specialization_leq(P1, P2, seed=seed, budget=100) is not None:
        return _result("regrade", count, "restriction does not preserve inclusion")
    ker = rank.singular_kernel(catalog_hom("incl_QP_QL"))
    for _ in range(100):
        A = sample_matrix(QP, rng, cfg)
        if A.is_square() and P1.member(A) != ker.member(A):
            return _result("regrade", count, "restricted kernel differs from the QL kernel")
    return _result("regrade", count)


def run_suite(name: str, ring_name: str, seed: int, budget: int, hom_name: str | None = None) -> dict:
    """Dispatch used by the command line."""
    R = catalog_ring(ring_name)
    f = catalog_hom(hom_name or f"id_{ring_name}")
    if name == "matrf":
        return rank.verify_matrf(rank.induced_rank_fn(f), R, seed=seed, budget=budget).to_json()
    if name == "modrf":
        return rank.verify_modrf(rank.module_rank_direct(f), R, seed=seed, budget=budget).to_json()
    if name == "maprf":
        di = rank.module_rank_direct(f)
        return rank.verify_maprf(lambda F: rank.map_rank(di, F), R, seed=seed, budget=budget).to_json()
    if name == "pm":
        return rank.verify_pm(rank.singular_kernel(f), seed=seed, budget=budget).to_json()
    if name == "closure":
        return closure_suite(seed, budget)
    if name == "tuples":
        return tuples_suite(seed, budget, max(1, budget // 4))
    if name == "regrade":
        return regrade_suite(seed, budget)
    if name == "malcolmson":
        return malcolmson_suite(seed, budget)
    if name == "rank-triple":
        return rank_triple(R, seed, budget)
    raise KeyError(f"unknown suite {name!r}")


SUITES = ("matrf", "modrf", "maprf", "pm", "closure", "tuples", "regrade", "examples", "malcolmson", "rank-triple")
