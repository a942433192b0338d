import json

import pytest

from adjcert.errors import ConfigError, UnsupportedPrime
from adjcert.harness import (
    Scenario,
    recheck_obstruction,
    run_example_DD,
    run_prelim,
    run_scenario,
    run_theorem_A,
)


def failing(cert):
    return [c.name for c in cert.checks if not c.passed]


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_prelim(p):
    cert = run_prelim(p)
    assert cert.verdict, failing(cert)
    assert len(cert.checks) >= 4
    assert "u" in cert.data


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("case", [1, 2])
def test_unitary_grid(case, p, m):
    cert = run_theorem_A(case, p, m)
    assert cert.verdict, failing(cert)
    assert cert.obstruction.nonzero
    assert cert.multiplier == ("-t" if case == 1 else "t")
    assert cert.group["type"] == (f"2A_{4 * m - 1}" if case == 1 else f"2A_{4 * m + 1}")


def test_case2_route_by_residue():
    assert run_theorem_A(2, 5).similitude["route"] != "pure-fallback"
    assert run_theorem_A(2, 7).similitude["route"] == "pure-fallback"


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_example_dd(p):
    cert = run_example_DD(p)
    assert cert.verdict, failing(cert)
    assert cert.multiplier == f"-{p}*t"
    assert cert.discriminants["disc_sigma_h"] == "p*t"
    assert cert.group["type"] == "2D_3"


@pytest.mark.parametrize("bad", [2, 9, 15])
def test_bad_primes(bad):
    for run in (run_prelim, run_example_DD, lambda q: run_theorem_A(1, q)):
        with pytest.raises(UnsupportedPrime):
            run(bad)


def test_scenario_validation():
    with pytest.raises(ConfigError):
        Scenario("a1", 5, unit_override=4)
    with pytest.raises(ConfigError):
        Scenario("a1", 5, m=0)
    with pytest.raises(ConfigError):
        Scenario("xx", 5)
    assert Scenario("a1", 5, unit_override=3).unit == 3
    assert Scenario("a1", 7).unit == 3


def test_unit_override_changes_nothing_essential():
    cert = run_scenario(Scenario("a1", 5, unit_override=3))
    assert cert.verdict and cert.multiplier == "-t"


def test_determinism():
    for sc in (Scenario("dd", 5), Scenario("a2", 7, 2), Scenario("prelim", 3)):
        assert run_scenario(sc).to_json() == run_scenario(sc).to_json()


def test_verdict_is_conjunction():
    cert = run_theorem_A(1, 5)
    data = json.loads(cert.to_json())
    assert data["verdict"] == all(c["pass"] for c in data["checks"])
    assert len(data["checks"]) == len(cert.checks)
    assert set(data["checks"][0]) == {"name", "expected", "actual", "pass"}
    assert data["not_mechanized"]


@pytest.mark.parametrize("sc", [Scenario("a1", 5), Scenario("a2", 7), Scenario("dd", 13)])
def test_obstruction_roundtrip(sc):
    assert recheck_obstruction(run_scenario(sc).to_json())


def test_tampered_certificate_fails_recheck():
    data = json.loads(run_scenario(Scenario("dd", 5)).to_json())
    data["obstruction"]["witness"]["slots"] = ["p", "p", "u"]
    assert not recheck_obstruction(json.dumps(data))


def test_text_report():
    text = run_prelim(5).to_text()
    assert text.rstrip().endswith("verdict: PASS")
    assert "[FAIL]" not in text
