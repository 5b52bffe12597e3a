import json

import pytest

from acdual.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sigma_then_verify(tmp_path, capsys):
    path = tmp_path / "c.json"
    code, out, _ = run(capsys, "sigma", "A2", "--i0", "2", "--out", str(path))
    assert code == 0 and "dims {0: 2, 1: 3, 2: 1}" in out
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 0 and out.startswith("ok: contraction")


def test_verify_perturbed(tmp_path, capsys):
    path = tmp_path / "c.json"
    run(capsys, "sigma", "A2", "--i0", "2", "--out", str(path))
    cert = json.loads(path.read_text())
    cert["mcoeffs"][0][2] = str(int(cert["mcoeffs"][0][2]) + 1)
    path.write_text(json.dumps(cert))
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 1
    assert "FAILED" in out and "[[" in out


def test_json_output(capsys):
    code, out, _ = run(capsys, "sigma", "A3", "--i0", "3", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["literal_refinement_failures"] == 1 and rep["i0"] == [3]


@pytest.mark.parametrize("argv", [
    ["sigma", "E8"],
    ["sigma", "A2", "--i0", "3"],
    ["sigma", "A2", "--i0", "1,2"],
    ["sigma", "A2", "--order", "1,1"],
    ["bn-st", "SL3(3)"],
    ["bn-thm9", "GL3(2)"],
    ["hecke-remark18", "B2", "--q", "2"],
    ["hecke-duality", "A1", "--q", "0"],
    ["accept", "--only", "14"],
    ["homology", "A2", "--complex", "xg"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sigma"])
    assert exc.value.code == 2


def test_verify_missing_file(tmp_path, capsys):
    code, _, _ = run(capsys, "verify", str(tmp_path / "nope.json"))
    assert code == 2


@pytest.mark.parametrize("argv, needle", [
    (["coxeter-complex", "B2"], "H^0 = Z^1"),
    (["hecke-x", "A2"], "dims {0: 36, 1: 36, 2: 6}"),
    (["hecke-remark18", "A2", "--q", "3"], "rank d0 = 30"),
    (["hecke-thm17", "A2", "--i0", "1"], "Y' dims {0: 12, 1: 6}"),
    (["hecke-duality", "A1", "--q", "2", "--q", "5"], "ranks {-1: 0, 0: 2, 1: 0} ok"),
    (["bn-st", "SL2(3)"], "H_0 = Z^3"),
    (["bn-thm20", "GL2(2)"], "restricted to P_I0"),
    (["bn-thm9", "GL2(2)"], "choice checks"),
    (["bn-duality", "SL2(3)"], "character matches"),
    (["homology", "GL3(2)"], "H^0 = Z^8"),
    (["homology", "A1", "--complex", "xh", "--q", "2"], "rank H^0 = 2"),
    (["accept", "--only", "3", "10"], "2/2 criteria pass"),
])
def test_commands(capsys, argv, needle):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert needle in out


def test_thm9_slow_gate(tmp_path, capsys):
    path = tmp_path / "t.json"
    code, _, _ = run(capsys, "bn-thm9", "GL3(2)", "--i0", "1", "--slow", "--out", str(path))
    assert code == 0
    assert run(capsys, "verify", str(path))[0] == 0


def test_accept_reports_failures(capsys):
    code, out, _ = run(capsys, "accept", "--only", "1")
    assert code == 1 and out.startswith("[FAIL]  1.")
