import json

from carnot.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build_cartan(capsys):
    code, out, _ = run(capsys, "build", "--group", "builtin:cartan")
    assert code == 0
    assert "dims E0 = 1,2,3,3,2,1" in out
    assert "Q = 10" in out


def test_build_free_matches_cartan(capsys):
    code, out, _ = run(capsys, "build", "--group", "free:2,3")
    assert code == 0
    assert "dims E0 = 1,2,3,3,2,1" in out


def test_build_bad_json_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "layers": [3, 1, 1],
        "brackets": {"1,2": {"4": "1"}, "1,3": {"4": "1"}, "2,3": {"4": "1"},
                     "1,4": {"5": "1"}, "2,4": {"5": "1"}, "3,4": {"5": "1"}}}))
    code, _, err = run(capsys, "build", "--group", str(bad))
    assert code == 2
    assert "JacobiViolation(1,2,3)" in err


def test_dc_matrix_text(capsys):
    code, out, _ = run(capsys, "dc", "--degree", "4")
    assert code == 0
    assert "-X2" in out and "X1" in out


def test_dc_bad_degree_exit_2(capsys):
    code, _, err = run(capsys, "dc", "--degree", "7")
    assert code == 2


def test_laplacian_text(capsys):
    code, out, _ = run(capsys, "laplacian", "--family", "A", "--degree", "0")
    assert code == 0
    assert "-X1^2 - X2^2" in out


def test_laplacian_json_report(capsys):
    code, out, _ = run(capsys, "laplacian", "--family", "A", "--degree", "2",
                       "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["order"] == 6
    assert payload["self_adjoint"] is True


def test_json_matrix_round_trip(capsys):
    from carnot.env import EnvElement
    from carnot.liealg import cartan_group
    from carnot.rumin import RuminComplex

    code, out, _ = run(capsys, "dc", "--degree", "1", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    g = cartan_group()
    cx = RuminComplex(g)
    parsed = [[EnvElement.parse(g, cell) for cell in row]
              for row in payload["entries"]]
    assert parsed == cx.dc_matrix(1).entries


def test_deterministic_output(capsys):
    code1, out1, _ = run(capsys, "exponents", "--theorem", "H2sum",
                         "--format", "json")
    code2, out2, _ = run(capsys, "exponents", "--theorem", "H2sum",
                         "--format", "json")
    assert code1 == code2 == 0
    assert out1 == out2


def test_exponents_unsupported_group(capsys):
    code, _, err = run(capsys, "exponents", "--theorem", "H2",
                       "--group", "free:2,2")
    assert code == 2


def test_tensors_json(capsys):
    code, out, _ = run(capsys, "tensors", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    checks = [f["check"] for f in payload["findings"]]
    assert "pierre-h2-tensor" in checks


def test_verify_fast_passes(capsys):
    code, out, _ = run(capsys, "verify", "--fast")
    assert code == 0
    assert "result: ok" in out


def test_verify_golden_tampering_exit_1(capsys, tmp_path):
    from carnot.verify import load_golden

    golden = load_golden()
    golden["dc"]["4"] = [["-X2", "X1 + X2"]]
    path = tmp_path / "tampered.json"
    path.write_text(json.dumps(golden))
    code, out, _ = run(capsys, "verify", "--fast", "--golden", str(path))
    assert code == 1
    assert "golden-dc-matrices" in out


def test_verify_degenerate_group(capsys):
    code, out, _ = run(capsys, "verify", "--group", "free:2,1")
    assert code == 0


def test_pi_e(capsys):
    code, out, _ = run(capsys, "pi-e", "--degree", "1", "--index", "1")
    assert code == 0
    assert "θ4" in out
