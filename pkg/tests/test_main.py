import json

import pytest

from gapforge.main import build_parser, main


DESK = ["--C", "1", "--u", "1", "--v", "2", "--alpha", "4", "--profile", "desk", "--m", "4"]
STRICT = ["--C", "1", "--u", "1", "--v", "2", "--alpha", "6"]


def run(capsys, *argv):
    code = main(["--quiet", "--threads", "1", *argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def desk_file(tmp_path, capsys):
    path = tmp_path / "desk.json"
    code, _, _ = run(capsys, "forge", *DESK, "--seed", "7", "--out", str(path))
    assert code == 0
    return path


# =============================================================================
# derive-params
# =============================================================================

def test_derive_strict(capsys):
    code, out, _ = run(capsys, "derive-params", *STRICT)
    assert code == 0
    data = json.loads(out)
    assert (data["n"], data["k"], data["s"], data["r"], data["m"]) == (256, 64, 64, 18, 4)
    assert data["delta"] == "46/64"
    assert data["identities"]["ok"] is True


def test_derive_desk(capsys):
    code, out, _ = run(capsys, "derive-params", *DESK)
    assert code == 0
    data = json.loads(out)
    assert data["n"] == 64
    assert data["profile"] == "desk"


def test_derive_rejects_alpha_5(capsys):
    code, out, err = run(capsys, "derive-params", "--C", "1", "--u", "1", "--v", "2", "--alpha", "5")
    assert code == 2
    assert out == ""
    assert "constraint violated: 2^alpha/alpha < K" in err


def test_invalid_setting_exits_2(capsys):
    assert main(["--mr-rounds", "0", "derive-params", *STRICT]) == 2


# =============================================================================
# forge / verify
# =============================================================================

def test_forge_then_verify(capsys, desk_file):
    code, out, _ = run(capsys, "verify", str(desk_file))
    assert code == 0
    report = json.loads(out)
    assert report["ok"] is True
    assert report["level"] == "witness"

    code, out, _ = run(capsys, "verify", str(desk_file), "--level", "oracle")
    assert code == 0
    statuses = {check["name"]: check["status"] for check in json.loads(out)["checks"]}
    assert statuses["oracle.distance"] == "skip"
    assert statuses["sums.audit"] == "pass"


def test_same_seed_same_bytes(capsys, tmp_path, desk_file):
    again = tmp_path / "again.json"
    code, _, _ = run(capsys, "forge", *DESK, "--seed", "7", "--out", str(again))
    assert code == 0
    assert again.read_bytes() == desk_file.read_bytes()


def test_forge_from_params_file(capsys, tmp_path):
    params = tmp_path / "params.json"
    params.write_text(json.dumps({"C": 1, "u": 1, "v": 2, "alpha": 4, "profile": "desk", "m": 4}))
    out_path = tmp_path / "cx.json"
    code, out, _ = run(capsys, "forge", "--params-file", str(params), "--seed", "7", "--out", str(out_path))
    assert code == 0
    assert json.loads(out)["z_count"] == 28


def test_forge_missing_flags(capsys, tmp_path):
    code, _, err = run(capsys, "forge", "--u", "1", "--out", str(tmp_path / "x.json"))
    assert code == 2
    assert "missing --C" in err


def test_forge_search_failure(capsys, tmp_path):
    code, _, _ = run(capsys, "--max-candidates", "0", "forge", *DESK, "--out", str(tmp_path / "x.json"))
    assert code == 3


def test_verify_gutted_witness(capsys, desk_file):
    data = json.loads(desk_file.read_text())
    witness = data["witnesses"][0]
    witness["agreement_runs"] = [witness["agreement_runs"][0] | {"count": 1}]
    witness["claimed_delta"] = "63/64"
    desk_file.write_text(json.dumps(data))
    code, out, err = run(capsys, "verify", str(desk_file), "--level", "exhaustive")
    assert code == 5
    failed = [check["name"] for check in json.loads(out)["checks"] if check["status"] == "fail"]
    assert "witness[0].claimed_delta" in failed
    assert "VerificationFailure" in err


def test_verify_tampered_file(capsys, desk_file):
    data = json.loads(desk_file.read_text())
    data["witnesses"][0]["z"] = str(int(data["witnesses"][0]["z"]) + 1)
    desk_file.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", str(desk_file))
    assert code == 5
    failed = [check["name"] for check in json.loads(out)["checks"] if check["status"] == "fail"]
    assert "witness[0].z" in failed


def test_verify_unknown_version(capsys, desk_file):
    data = json.loads(desk_file.read_text())
    data["format_version"] = "9.9"
    desk_file.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", str(desk_file))
    assert code == 4
    assert out == ""


# =============================================================================
# audit
# =============================================================================

def test_audit_theta(capsys):
    code, out, _ = run(capsys, "audit", "theta", "--x", "10", "--n", "4", "--a", "1")
    assert code == 0
    data = json.loads(out)
    assert data["theta"] == pytest.approx(1.6094379124341003, abs=1e-12)
    assert data["psi"] == pytest.approx(2.70805020110221, abs=1e-12)


def test_audit_resultant(capsys):
    code, out, _ = run(capsys, "audit", "resultant", "--s", "8", "--r", "2")
    assert code == 0
    data = json.loads(out)
    assert data["pairs_examined"] == 30
    assert data["bound"] == 256


def test_audit_bad_primes(capsys):
    code, out, _ = run(capsys, "audit", "bad-primes", "--s", "8", "--r", "2")
    assert code == 0
    assert json.loads(out)["max_B"] == 0


@pytest.mark.parametrize("argv, expected", [
    (["--s", "4", "--r", "2", "--p", "17", "--m", "2"], 0),
    (["--s", "16", "--r", "2", "--p", "17"], 5),
])
def test_audit_sums(capsys, argv, expected):
    code, out, _ = run(capsys, "audit", "sums", *argv)
    assert code == expected
    assert json.loads(out)["mode"] == "exhaustive"


def test_audit_T_bound_out_of_reach(capsys):
    code, out, _ = run(capsys, "audit", "T-bound", "--s", "64", "--n", "256")
    assert code == 0
    data = json.loads(out)
    assert data["desk_checkable"] is False
    assert data["reason"].startswith("not desk-checkable")


def test_audit_margin(capsys):
    code, out, _ = run(capsys, "audit", "margin", *DESK)
    assert code == 0
    assert json.loads(out)["good_prime_guaranteed"] is True


def test_config_command(capsys):
    code, out, _ = run(capsys, "config")
    assert code == 0
    assert json.loads(out)["threads"] == 1


def test_parser_requires_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])
