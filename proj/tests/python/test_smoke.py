import pytest

import ttperm


def test_groups():
    assert ttperm.group_order("C2xC2") == 4
    assert len(ttperm.subgroups("C2xC2")) == 5


def test_koszul_round_trip():
    cert = ttperm.koszul("C4", "C2")
    assert cert["checks"]["acyclic"]
    assert ttperm.verify(cert) == (True, [])


def test_twisted_integral_c2():
    t = ttperm.twisted("C2", "Z", max_twist=2)
    assert t["relations"] == ["2*a = 0"]
    assert t["entries"]["(-2,2)"]["rank"] == 1
    assert ttperm.hom("C2", "Z", [1], 0) == {"rank": 0, "torsion": ["2"]}


def test_invert_and_spectrum():
    ok, failures = ttperm.verify(ttperm.invert("C2", "1"))
    assert ok, failures
    spc = ttperm.spectrum("C6")
    assert sum(p["kind"] == "Modular" for p in spc["points"]) == 6
    assert ttperm.spectrum("C3", format="dot").startswith("digraph")


def test_errors():
    with pytest.raises(ValueError):
        ttperm.spectrum("C2xC2")
    with pytest.raises(ValueError):
        ttperm.twisted("C2", "R")
