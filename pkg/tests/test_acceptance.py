"""Every acceptance criterion at exact equality, one PASS/FAIL line each (shown with -s or -rA)."""

import pytest

from krss import acceptance, bredon, cli
from krss.equivcw import EquivMap, orbit0, s00


@pytest.mark.parametrize("number", sorted(acceptance.CRITERIA))
def test_criterion(number):
    result = acceptance.run_criterion(number)
    print(result.line())
    assert result.passed, result.line()


def test_suites_cover_every_criterion():
    covered = set()
    for name, numbers in acceptance.SUITES.items():
        if name != "all":
            covered |= set(numbers)
    assert covered == set(acceptance.CRITERIA) == set(acceptance.SUITES["all"])


def negated_transfer():
    t = EquivMap(s00(), orbit0(), {1: {1: -1, 2: -1}})
    d = EquivMap(orbit0(), s00(), {1: {1: -1}, 2: {1: -1}})
    object.__setattr__(t, "dual", d)
    object.__setattr__(d, "dual", t)
    return t


def test_criterion_2_catches_a_broken_transfer(monkeypatch):
    monkeypatch.setattr(bredon, "transfer", negated_transfer)
    results = acceptance.run_suite("coeffs")
    by_number = {r.number: r for r in results}
    assert not by_number[2].passed
    spot, why = by_number[2].witness
    assert spot[0] == 0 and spot[1] % 2 == 0
    assert "res∘tr" in why
    assert by_number[1].passed and by_number[8].passed


def test_unknown_suite():
    with pytest.raises(KeyError):
        acceptance.run_suite("nope")
    assert cli.main(["verify", "nope"]) == 2


def test_lines_are_parseable():
    r = acceptance.run_criterion(1)
    assert r.line().startswith("PASS criterion 1: ")
