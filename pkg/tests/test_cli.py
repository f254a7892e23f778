import json
import subprocess
import sys
from pathlib import Path

import pytest

from carnot_forge.cli import main, report_digest, run

DATA = Path(__file__).parent / "data"
GOLDEN = DATA / "golden"


def invoke(capsys, *argv):
    code = main(["--no-timestamp", *argv])
    out, err = capsys.readouterr()
    return code, json.loads(out), err


def test_validate_ok_and_violation(capsys):
    code, rep, err = invoke(capsys, "validate", str(DATA / "heisenberg.json"))
    assert code == 0 and rep["result"]["validation"]["valid"]
    assert "valid" in err
    code, rep, _ = invoke(capsys, "validate", str(DATA / "violating.json"))
    assert code == 2
    v = rep["result"]["validation"]["violations"][0]
    assert (v["i"], v["j"], v["k"]) == (1, 2, 4)


def test_input_errors_exit_one(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, rep, _ = invoke(capsys, "validate", str(bad))
    assert code == 1 and rep["error"]["type"] == "parse"
    code, rep, _ = invoke(capsys, "validate", str(tmp_path / "missing.json"))
    assert code == 1 and rep["error"]["type"] == "io"


def test_singular_frame_exit_two(capsys):
    code, rep, _ = invoke(capsys, "validate", str(DATA / "singular.json"))
    assert code == 2 and "singular" in rep["error"]["message"]


def test_privilege_nontrivial(capsys):
    code, rep, _ = invoke(capsys, "privilege", str(DATA / "engel_skewed.json"))
    res = rep["result"]
    assert code == 0 and res["report"]["verdict"]
    assert res["psi_hat"]["forward"][3] == "-x1*x2 - x1^2 + x4"
    assert not res["psi_hat_is_identity"]
    code, rep, _ = invoke(capsys, "privilege", str(DATA / "heisenberg.json"))
    assert code == 0 and rep["result"]["psi_hat_is_identity"]


def test_approx_requires_privileged_or_auto(capsys):
    code, rep, _ = invoke(capsys, "approx", str(DATA / "engel_skewed.json"))
    assert code == 2
    code, rep, _ = invoke(capsys, "approx", "--auto", str(DATA / "engel_skewed.json"))
    assert code == 0
    checks = rep["result"]["checks"]
    assert checks["associative"] and checks["associativity_mode"] == "symbolic"


def test_approx_randomized_above_budget(capsys):
    code, rep, _ = invoke(capsys, "approx", "--assoc-budget", "6", "--trials", "20", str(DATA / "heisenberg.json"))
    assert code == 0 and rep["result"]["checks"]["associativity_mode"] == "randomized"
    assert rep["manifest"]["options"]["assoc_budget"] == 6


def test_canonical(capsys):
    code, rep, _ = invoke(capsys, "canonical", "--kind", "1", "--samples", "4", str(DATA / "perturbed.json"))
    assert code == 0 and rep["result"]["rate_report"]["verdict"] == "pass"
    code, rep, _ = invoke(capsys, "canonical", "--kind", "2", "--samples", "4", str(DATA / "heisenberg.json"))
    assert code == 0 and rep["result"]["rate_report"]["verdict"] == "exact"
    code, rep, _ = invoke(capsys, "canonical", "--kind", "1", str(DATA / "engel_skewed.json"))
    assert code == 2


def test_canonical_flags_are_recorded(capsys):
    code, rep, _ = invoke(capsys, "canonical", "--kind", "2", "--samples", "2", "--steps", "64", "--box", "0.1",
                          str(DATA / "heisenberg.json"))
    opts = rep["manifest"]["options"]
    assert (opts["steps"], opts["box"], opts["samples"], opts["guard"]) == (64, 0.1, 2, 10.0)
    assert rep["result"]["rate_report"]["settings"]["steps_per_unit_time"] == 64


def test_heisenberg_command(capsys):
    code, rep, _ = invoke(capsys, "heisenberg", "--n", "3")
    assert code == 0 and rep["result"]["last_component_matches"]
    assert rep["result"]["group_law"][2] == "y3 + x3 + 1/2*x2*y1 - 1/2*x1*y2"
    code, rep, _ = invoke(capsys, "heisenberg", "--n", "3", "--b", '[[1, "1/2"], ["1/2", 0]]')
    assert code == 0
    code, rep, _ = invoke(capsys, "heisenberg", "--n", "3", "--b", "[[0, 1], [0, 0]]")
    assert code == 2 and not rep["result"]["membership"]["verdict"]
    code, rep, _ = invoke(capsys, "heisenberg", "--n", "4")
    assert code == 1


def test_bch_command(capsys):
    code, rep, _ = invoke(capsys, "bch", str(DATA / "engel_constants.json"), "--xi", "1,0,0,0", "--eta", "[0,1,0,0]")
    assert code == 0
    assert rep["result"]["products"][0]["product"] == ["1", "1", "1/2", "1/12"]


def test_quiet_and_timestamp(capsys):
    main(["--quiet", "validate", str(DATA / "heisenberg.json")])
    out, err = capsys.readouterr()
    rep = json.loads(out)
    assert err == "" and "timestamp" in rep
    assert rep["report_sha256"] == report_digest(rep)


@pytest.mark.parametrize("name, argv", [
    ("approx_heisenberg", ["approx", "heisenberg.json"]),
    ("privilege_engel_skewed", ["privilege", "engel_skewed.json"]),
    ("bch_engel", ["bch", "engel_constants.json"]),
])
def test_golden_reports(capsys, name, argv):
    argv = [argv[0], str(DATA / argv[1])]
    code, rep, _ = invoke(capsys, *argv)
    golden = json.loads((GOLDEN / f"{name}.json").read_text())
    golden["manifest"]["version"] = rep["manifest"]["version"]
    golden.pop("report_sha256")
    rep.pop("report_sha256")
    assert rep == golden


def test_golden_heisenberg_law_is_the_expected_one():
    golden = json.loads((GOLDEN / "approx_heisenberg.json").read_text())
    assert golden["result"]["group_law"] == ["y1 + x1", "y2 + x2", "y3 + x3 + 1/2*x2*y1 - 1/2*x1*y2"]


def test_byte_identical_output(capsys):
    argv = ["--no-timestamp", "privilege", str(DATA / "engel_skewed.json")]
    main(argv)
    a = capsys.readouterr().out
    main(argv)
    b = capsys.readouterr().out
    assert a == b


def test_manifest_hashes_outputs():
    import hashlib
    code, rep, _, _ = run(["--no-timestamp", "bch", str(DATA / "engel_constants.json")])
    raw = (DATA / "engel_constants.json").read_bytes()
    assert rep["manifest"]["input_sha256"] == hashlib.sha256(raw).hexdigest()
    names = [o["name"] for o in rep["manifest"]["outputs"]]
    assert names == sorted(rep["result"])


def test_console_script_and_stdin():
    raw = (DATA / "heisenberg.json").read_bytes()
    proc = subprocess.run([sys.executable, "-m", "carnot_forge.cli", "--quiet", "validate", "-"], input=raw,
                          capture_output=True)
    assert proc.returncode == 0 and proc.stderr == b""
    assert json.loads(proc.stdout)["result"]["validation"]["valid"]
