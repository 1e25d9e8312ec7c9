"""Worked examples and bundled certificate fixtures."""
from __future__ import annotations

from fractions import Fraction

from . import gdlin, loc
from .hmat import FactorizationWitness, HMatrix, HollowBlock, identity, is_hollow, verify_nonfull
from .mideal import DetSum, NonFull, SearchBudget, search_derivation, verify_derivation
from .rank import singular_kernel, specialization_leq
from .ring import catalog_hom, catalog_ring, check_graded_division, homs_from, is_graded_local
from .scalars import GaussQ


def intro_c2() -> dict:
    """The skew group ring over C2: no map to a division ring, yet graded-division sampling passes."""
    Q2, SK = catalog_ring("Q2"), catalog_ring("SK")
    x2 = Q2.hom(1, Fraction(1))
    prod_q2 = (Q2.one() - x2) * (Q2.one() + x2)
    x = SK.hom(1, SK.cone())
    i = SK.scalar(GaussQ(0, 1))
    prod_sk = (SK.one() - x) * (SK.one() + x)
    ok_div, n = check_graded_division(SK, seed=0, samples=200)
    steps = []
    for sign in (-1, 1):
        # a ring map to a division ring kills 1 + x or 1 - x, so x goes to -1 or 1
        lhs = sign  # image of x i is sign * phi(i)
        rhs = -sign  # image of -i x is -phi(i) * sign
        steps.append({"phi(x)": sign, "phi(xi)": f"{lhs}*phi(i)", "phi(-ix)": f"{rhs}*phi(i)",
                      "forces": "2*phi(i) = 0, so the target has characteristic 2",
                      "but": "2 is invertible in the degree-e component"})
    return {
        "(1-x)(1+x)=0 in Q2": prod_q2.is_zero(),
        "(1-x)(1+x)=0 in SK": prod_sk.is_zero(),
        "xi=-ix in SK": x * i == -(i * x),
        "SK graded division (sampled)": ok_div,
        "samples": n,
        "obstruction": steps,
        "passed": prod_q2.is_zero() and prod_sk.is_zero() and x * i == -(i * x) and ok_div,
    }


def exf_two_points(seed: int = 0) -> dict:
    """Exactly two singular kernels among the catalog maps out of EXF, neither inside the other."""
    EXF = catalog_ring("EXF")
    homs = [h for h in homs_from(EXF) if getattr(h.target, "is_graded_division", False)]
    names = sorted(h.name for h in homs)
    kE, kF = singular_kernel(catalog_hom("pi_E")), singular_kernel(catalog_hom("pi_F"))
    e_not_f = specialization_leq(kE, kF, seed=seed)
    f_not_e = specialization_leq(kF, kE, seed=seed)
    return {
        "kernels": names,
        "ker_pi_E not inside ker_pi_F": None if e_not_f is None else e_not_f.rows[0][0],
        "ker_pi_F not inside ker_pi_E": None if f_not_e is None else f_not_e.rows[0][0],
        "local": is_graded_local(EXF).is_local,
        "passed": names == ["pi_E", "pi_F"] and e_not_f is not None and f_not_e is not None,
    }


def tx_local(seed: int = 0) -> dict:
    """TX = E[x]/(x^2) is graded local and its non-units are exactly the multiples of xbar."""
    import random
    from .ring import sample_elements
    TX = catalog_ring("TX")
    rep = is_graded_local(TX, seed=seed)
    xbar = TX.generator()
    rng = random.Random(seed)
    agree = 0
    total = 0
    for a in sample_elements(TX, rng, 200, radius=1):
        if len(a.comps) != 1:
            continue
        total += 1
        y = TX.nilpotent_multiple(a)
        in_ideal = y is not None and xbar * y == a
        if in_ideal != (not TX.is_unit(a)):
            break
        agree += 1
    return {"local": rep.is_local, "checked": total, "non-units = (xbar)": agree == total,
            "passed": rep.is_local and agree == total}


def ab_decomposition(ring_name: str = "EXF") -> tuple[HMatrix, DetSum]:
    """(a 0; 0 b) with ab = 0 as (a 0; 1 b) plus (0 0; -1 b) along the first column."""
    R = catalog_ring(ring_name)
    e = R.group.identity
    a = R.hom(e, (Fraction(1), Fraction(0)))
    b = R.hom(e, (Fraction(0), Fraction(1)))
    alpha, beta = (e, e), (e, e)
    one, zero = R.one(), R.zero()
    target = HMatrix(R, alpha, beta, [[a, zero], [zero, b]])
    left = HMatrix(R, alpha, beta, [[a, zero], [one, b]])
    right = HMatrix(R, alpha, beta, [[zero, zero], [-one, b]])
    P = HMatrix(R, alpha, (e,), [[a], [one]])
    Q = HMatrix(R, (e,), beta, [[one, b]])
    cert = DetSum(target, "col", 0, NonFull(left, FactorizationWitness(P, Q)), NonFull(right, hollow=is_hollow(right)))
    return target, cert


def ab_decomposition_report() -> dict:
    target, cert = ab_decomposition()
    left = cert.left.target
    Q2 = catalog_ring("Q2")
    I1 = identity(Q2, (Q2.group.identity,))
    res = search_derivation(I1, [], SearchBudget(depth=4, size=0))
    return {
        "derivation verifies": verify_derivation(cert),
        "left factor hollow": is_hollow(left) is not None,
        "left factor factors through one column": verify_nonfull(left, cert.left.witness),
        "I1 over Q2 at depth <= 4": "no derivation" if not res else "derivation found",
        "passed": verify_derivation(cert) and not res,
    }


# kernel certificate fixtures

def _exf_cert(side: str) -> loc.MalcolmsonCert:
    R = catalog_ring("EXF")
    e = R.group.identity
    F0, F1 = Fraction(0), Fraction(1)
    one, zero = R.one(), R.zero()
    if side == "E":
        # r = (0, 1) dies under the first projection
        u, w, g = (F1, F0), (F0, F1), e
    else:
        # r = (x, 0) dies under the second projection
        u, w, g = (F0, F1), (F1, F0), 1
    r = R.hom(g, w)
    L = HMatrix(R, (e,), (e,), [[R.hom(e, u)]])
    M = identity(R, (e,))
    W = HMatrix(R, (e,), (e,), [[R.hom(e, w)]])
    J = HMatrix(R, (g,), (e,), [[zero]])
    P = identity(R, (e, e))
    U = HMatrix(R, (g,), (e, e), [[r, zero]])
    Q = HMatrix(R, (e, e), (e, e), [[R.hom(e, u), zero], [zero, one]])
    V = HMatrix(R, (e, e), (e,), [[R.hom(e, w)], [zero]])
    return loc.MalcolmsonCert(r, g, L, M, W, J, P, U, Q, V)


def malcolmson_fixtures() -> list[tuple[str, loc.MalcolmsonCert, loc.InvertingSet, object]]:
    """(name, certificate, Sigma, Sigma-inverting map into a graded division ring)."""
    Q2, QP = catalog_ring("Q2"), catalog_ring("QP")
    id_q2 = catalog_hom("id_Q2")
    sig_q2 = loc.inverting_set_of(id_q2)
    piE, piF = catalog_hom("pi_E"), catalog_hom("pi_F")
    sig_E, sig_F = loc.inverting_set_of(piE), loc.inverting_set_of(piF)
    incl = catalog_hom("incl_QP_QL")
    sig_QP = loc.inverting_set_of(incl)
    cE, cF = _exf_cert("E"), _exf_cert("F")
    refl = loc.forward_malcolmson(loc.reflexive_equivalence(loc.tuple_mu(QP, QP.zero())))
    return [
        ("trivial-Q2", loc.trivial_cert(Q2), sig_q2, id_q2),
        ("exf-E", cE, sig_E, piE),
        ("exf-F", cF, sig_F, piF),
        ("exf-E-roundtrip", loc.mechanical_fixture(cE), sig_E, piE),
        ("exf-F-roundtrip", loc.mechanical_fixture(cF), sig_F, piF),
        ("qp-reflexive-zero", refl, sig_QP, incl),
        ("exf-E-roundtrip-twice", loc.mechanical_fixture(loc.mechanical_fixture(cE)), sig_E, piE),
        ("trivial-Q2-roundtrip", loc.mechanical_fixture(loc.trivial_cert(Q2)), sig_q2, id_q2),
    ]


def run_example(name: str) -> dict:
    table = {"intro-c2": intro_c2, "exf-two-points": exf_two_points, "tx-local": tx_local,
             "ab-decomposition": ab_decomposition_report}
    if name not in table:
        raise KeyError(f"unknown example {name!r}; choose from {sorted(table)}")
    return table[name]()


EXAMPLE_NAMES = ("intro-c2", "exf-two-points", "tx-local", "ab-decomposition")
