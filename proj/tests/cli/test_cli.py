import json
import os
import subprocess

import pytest

EXE = os.environ.get("TTPERM_CLI", "build/ttperm")


def run(*args, stdin=None):
    return subprocess.run([EXE, *args], capture_output=True, text=True, input=stdin, timeout=300)


def test_kos_certificate_round_trip(tmp_path):
    r = run("kos", "--group", "C4", "--subgroup", "C2", "--ring", "Z", "--verify")
    assert r.returncode == 0, r.stderr
    cert = json.loads(r.stdout)
    assert cert["verified"] and cert["checks"]["restriction_contractible"]
    path = tmp_path / "kos.json"
    path.write_text(r.stdout)
    assert run("verify", str(path)).returncode == 0

    # a corrupted contraction is caught
    comps = cert["restriction_contraction"]["components"]
    m = next(c for c in comps if c["rows"] and c["cols"])
    m["entries"][0][0] = str(int(m["entries"][0][0]) + 1)
    path.write_text(json.dumps(cert))
    bad = run("verify", str(path))
    assert bad.returncode == 2
    assert json.loads(bad.stdout)["status"] == "verification-failure"


def test_twisted_field_relation():
    r = run("twisted", "--group", "C3", "--ring", "F3", "--max-twist", "3")
    assert r.returncode == 0
    t = json.loads(r.stdout)
    assert t["relations"] == ["c^2 = 0"]
    assert t["entries"]["(-1,1)"] == {"rank": 1, "torsion": [], "generators": ["c"], "spanned": True}
    assert "grid" in t


def test_twisted_jobs_are_deterministic():
    a = run("twisted", "--group", "C2xC2", "--ring", "F2", "--max-twist", "2")
    b = run("twisted", "--group", "C2xC2", "--ring", "F2", "--max-twist", "2", "--jobs", "3")
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout


def test_twisted_unspanned_entry_exits_2():
    r = run("twisted", "--group", "C2xC2", "--ring", "Z", "--max-twist", "2")
    assert r.returncode == 2
    assert "not spanned" in json.loads(r.stdout)["presentation_error"]


def test_twisted_verify_flag():
    assert run("twisted", "--group", "C2", "--ring", "Z", "--max-twist", "3", "--verify").returncode == 0


def test_spectrum_formats(tmp_path):
    dot = run("spectrum", "--group", "C6", "--format", "dot")
    assert dot.returncode == 0
    assert dot.stdout.startswith("digraph") and "darkgreen" in dot.stdout and "blue" in dot.stdout
    js = run("spectrum", "--group", "C6", "--format", "json")
    spc = json.loads(js.stdout)
    assert sum(p["kind"] == "Modular" for p in spc["points"]) == 6
    path = tmp_path / "spc.json"
    path.write_text(js.stdout)
    assert run("verify", str(path)).returncode == 0
    # dropping a relation breaks the isomorphism with the assembled spectrum
    spc["specializations"].pop()
    path.write_text(json.dumps(spc))
    assert run("verify", str(path)).returncode == 2


def test_spectrum_seed_bound():
    r = run("spectrum", "--group", "C4", "--format", "json", "--seed-bound", "7", "--verify")
    assert r.returncode == 0
    labels = [p["label"] for p in json.loads(r.stdout)["points"]]
    assert "(3)" in labels and "(7)" in labels and "(q), q not in {2,3,5,7}" in labels


def test_spectrum_rejects_noncyclic():
    assert run("spectrum", "--group", "C2xC2").returncode == 1


def test_invert_certificate(tmp_path):
    r = run("invert", "--group", "C3", "--ring", "Z", "--verify")
    assert r.returncode == 0
    path = tmp_path / "inv.json"
    path.write_text(r.stdout)
    v = run("verify", str(path), "--format", "text")
    assert v.returncode == 0 and v.stdout.strip() == "equivalence: ok"


@pytest.mark.parametrize(
    "args",
    [
        [],
        ["kos"],
        ["kos", "--group", "C4", "--bogus"],
        ["twisted", "--group", "C2", "--ring", "R"],
        ["spectrum", "--group", "C6", "--format", "svg"],
        ["kos", "--group", "C2xC2", "--subgroup", "C2"],
        ["verify", "/nonexistent/file.json"],
    ],
)
def test_usage_errors(args):
    r = run(*args)
    assert r.returncode == 1
    assert "Usage" in r.stderr or "Subcommands" in r.stderr


def test_verify_rejects_garbage():
    r = run("verify", "-", stdin="{not json")
    assert r.returncode == 2
