"""Acceptance gate: one check per criterion, each printing a PASS or FAIL line.

Run with `pytest tests/test_acceptance.py -v` (the summary lines appear at the end of the
session) or directly with `python3 tests/test_acceptance.py`.
"""
import sys
import time

import pytest

from grlin import examples, rank, suites
from grlin.ring import catalog_hom, catalog_ring

RESULTS: dict[int, tuple[bool, str]] = {}

DIVISION_RINGS = ("Q", "Q2", "QL", "SK")
ROUND_TRIP_HOMS = ("id_Q", "id_Q2", "id_QL", "id_SK", "incl_QP_QL", "pi_E")
PM_HOMS = ("id_Q2", "pi_E", "pi_F", "incl_QP_QL")


def record(n: int, ok: bool, detail: str):
    RESULTS[n] = (ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
    return ok


def criterion_1():
    bad = [r for r in (suites.rank_triple(catalog_ring(n), seed=1, count=500) for n in ("Q2", "QL", "SK"))
           if not r["passed"]]
    return record(1, not bad, "row rank = column rank = largest invertible submatrix, 500 matrices each over "
                  "Q2, QL, SK" if not bad else f"{bad[0]}")


def criterion_2():
    fails = []
    for name in DIVISION_RINGS:
        R = catalog_ring(name)
        rep = rank.verify_matrf(rank.induced_rank_fn(catalog_hom(f"id_{name}")), R, seed=2, budget=500)
        if not rep.passed:
            fails.append(f"{name}: {rep.counterexample['axiom']}")
    Q2 = catalog_ring("Q2")
    corrupt = rank.verify_matrf(rank.corrupted_rank(rank.induced_rank_fn(catalog_hom("id_Q2"))), Q2, seed=2,
                                budget=200)
    if corrupt.passed:
        fails.append("corrupted rank function survived 200 samples")
    return record(2, not fails, "; ".join(fails) or f"MatRF1-4 and their consequences on 500 samples over "
                  f"{', '.join(DIVISION_RINGS)}; corruption caught by {corrupt.counterexample['axiom']}")


def criterion_3():
    fails = [h for h in ROUND_TRIP_HOMS if not rank.round_trip_report(catalog_hom(h), seed=3, budget=300).passed]
    return record(3, not fails, f"failing: {fails}" if fails else
                  f"pmi<->rank and matrix<->module<->map exact on 300 samples for {len(ROUND_TRIP_HOMS)} maps")


def criterion_4():
    fails = []
    for h in PM_HOMS:
        rep = rank.verify_pm(rank.singular_kernel(catalog_hom(h)), seed=4, budget=300)
        if not rep.passed:
            fails.append(f"{h}: {rep.counterexample['axiom']}")
    return record(4, not fails, "; ".join(fails) or
                  f"PM1-PM6 and consequences on 300 samples for {', '.join(PM_HOMS)}")


def criterion_5():
    res = suites.malcolmson_suite(seed=5, perturbations=100)
    n = len(res.get("fixtures", []))
    ok = res["passed"] and n >= 5
    return record(5, ok, f"{n} fixtures accepted with f(r) = 0, 100 perturbations rejected" if ok
                  else res.get("failure", f"only {n} fixtures"))


def criterion_6():
    res = suites.tuples_suite(seed=6, pairs=200, inverses=50)
    return record(6, res["passed"], "evaluation is a ring map on 200 pairs; inverse tuples match on 50 matrices"
                  if res["passed"] else res["failure"])


def criterion_7():
    res = suites.closure_suite(seed=7, count=100)
    return record(7, res["passed"], f"Cramer agreement on 100 elements, x = 0 witnessed {res.get('zero_branch')} "
                  "times" if res["passed"] else res["failure"])


def criterion_8():
    out = {n: examples.run_example(n)["passed"] for n in examples.EXAMPLE_NAMES}
    ok = all(out.values())
    return record(8, ok, ", ".join(f"{k}={'ok' if v else 'FAILED'}" for k, v in out.items()))


def criterion_9():
    res = suites.regrade_suite(seed=9, count=200)
    return record(9, res["passed"], "lift generator check, 200 invertibility comparisons, restriction keeps PM "
                  "and inclusion" if res["passed"] else res["failure"])


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8, criterion_9]


@pytest.mark.parametrize("n", range(1, 10))
def test_criterion(n):
    assert CRITERIA[n - 1]()


def main() -> int:
    t0 = time.time()
    ok = all([c() for c in CRITERIA])
    print(f"{sum(v[0] for v in RESULTS.values())}/9 criteria passed in {time.time() - t0:.1f}s")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
