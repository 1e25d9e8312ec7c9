from fractions import Fraction as Fr

import pytest

from grlin import examples
from grlin.mideal import verify_derivation


def test_intro_c2():
    r = examples.intro_c2()
    assert r["passed"]
    assert r["(1-x)(1+x)=0 in Q2"] and r["(1-x)(1+x)=0 in SK"] and r["xi=-ix in SK"]
    assert len(r["obstruction"]) == 2
    assert all("characteristic 2" in s["forces"] for s in r["obstruction"])


def test_exf_two_points():
    r = examples.exf_two_points()
    assert r["passed"] and r["kernels"] == ["pi_E", "pi_F"]
    # (0, 1) lies in ker pi_E only, (1, 0) in ker pi_F only
    assert r["ker_pi_E not inside ker_pi_F"].comps[0] == (Fr(0), Fr(1))
    assert r["ker_pi_F not inside ker_pi_E"].comps[0] == (Fr(1), Fr(0))
    assert r["local"] is False


def test_tx_local():
    r = examples.tx_local()
    assert r["passed"] and r["local"] and r["checked"] > 0


def test_ab_decomposition():
    target, cert = examples.ab_decomposition()
    assert verify_derivation(cert)
    r = examples.ab_decomposition_report()
    assert r["passed"] and r["left factor hollow"] is False
    assert r["I1 over Q2 at depth <= 4"] == "no derivation"


def test_run_example_dispatch():
    for name in examples.EXAMPLE_NAMES:
        assert examples.run_example(name)["passed"]
    with pytest.raises(KeyError):
        examples.run_example("missing")
