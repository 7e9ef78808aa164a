import json
from fractions import Fraction

import pytest

from gapforge.analytic import audit_resultant_bound
from gapforge.cxfile import (
    FORMAT_VERSION,
    Progression,
    compress_indices,
    dump_report,
    dumps,
    expand_runs,
    loads,
    read,
    save,
    to_jsonable,
)
from gapforge.errors import FormatError
from gapforge.forge import verify_counterexample


@pytest.fixture(scope="module")
def desk_text(desk_counterexample):
    return dumps(desk_counterexample)


def _edit(text, fn):
    data = json.loads(text)
    fn(data)
    return json.dumps(data)


# =============================================================================
# Round Trips
# =============================================================================

@pytest.mark.parametrize("compress", [True, False])
def test_round_trip(desk_counterexample, compress):
    again = loads(dumps(desk_counterexample, compress=compress))
    assert again == desk_counterexample
    assert verify_counterexample(again).ok


def test_layout(desk_counterexample, desk_text):
    data = json.loads(desk_text)
    assert list(data) == ["format_version", "tool_version", "seed", "params", "field", "z_count",
                          "witnesses", "certificate", "sum_audit", "prime_search"]
    assert data["format_version"] == FORMAT_VERSION
    assert data["field"]["p"] == str(desk_counterexample.p)
    assert data["params"]["delta"] == "10/16"
    assert data["params"]["eta"] == "2/16"
    assert data["witnesses"][0]["claimed_delta"] == "10/16"
    assert data["witnesses"][0]["agreement"] is None
    assert len(data["witnesses"][0]["agreement_runs"]) == 6


def test_plain_index_lists(desk_counterexample):
    data = json.loads(dumps(desk_counterexample, compress=False))
    assert data["witnesses"][0]["agreement"] == list(desk_counterexample.witnesses[0].agreement_exponents)
    assert data["witnesses"][0]["agreement_runs"] is None


def test_save_and_read(tmp_path, desk_counterexample):
    path = save(desk_counterexample, tmp_path / "out" / "cx.json")
    assert read(path) == desk_counterexample


def test_compress_indices():
    runs = compress_indices([0, 1, 4, 5, 9], 4)
    assert runs == [
        Progression(start=0, stride=4, count=2),
        Progression(start=1, stride=4, count=3),
    ]
    assert compress_indices([0, 8], 4) == [Progression(start=0, stride=4, count=1),
                                           Progression(start=8, stride=4, count=1)]
    assert expand_runs(runs) == (0, 1, 4, 5, 9)


# =============================================================================
# Malformed Files
# =============================================================================

def test_unknown_format_version(desk_text):
    with pytest.raises(FormatError) as excinfo:
        loads(_edit(desk_text, lambda d: d.update(format_version="9.9")))
    assert "9.9" in str(excinfo.value)
    assert excinfo.value.exit_code == 4


def test_not_json():
    with pytest.raises(FormatError):
        loads("{not json")
    with pytest.raises(FormatError):
        loads("[1, 2]")


def test_missing_file(tmp_path):
    with pytest.raises(FormatError):
        read(tmp_path / "absent.json")


def test_schema_violations(desk_text):
    with pytest.raises(FormatError):
        loads(_edit(desk_text, lambda d: d.pop("certificate")))
    with pytest.raises(FormatError):
        loads(_edit(desk_text, lambda d: d["field"].update(p="0x11")))
    with pytest.raises(FormatError):
        loads(_edit(desk_text, lambda d: d["witnesses"][0].update(agreement=[0, 1])))
    with pytest.raises(FormatError):
        loads(_edit(desk_text, lambda d: d.update(extra_field=1)))


def test_witness_indices_and_tags_are_validated(desk_text):
    with pytest.raises(FormatError):
        loads(_edit(desk_text, lambda d: d["witnesses"][0].update(xi_exponents=[])))
    with pytest.raises(FormatError):
        loads(_edit(desk_text, lambda d: d["witnesses"][0].update(xi_exponents=[-1, 1, 2, 3, 4, 5])))
    with pytest.raises(FormatError):
        loads(_edit(desk_text, lambda d: d["witnesses"][0].pop("xi_exponents")))
    with pytest.raises(FormatError):
        loads(_edit(desk_text, lambda d: d["witnesses"][0]["agreement_runs"][0].update(start=-4)))


def test_out_of_range_tag_fails_verification(desk_text):
    def bad_tag(data):
        data["witnesses"][0]["xi_exponents"][0] = 99

    report = verify_counterexample(loads(_edit(desk_text, bad_tag)))
    assert not report.ok
    assert report.get("witness[0].tag").status == "fail"


def test_invalid_params(desk_text):
    with pytest.raises(FormatError):
        loads(_edit(desk_text, lambda d: d["params"].update(u=0)))


def test_tampered_file_loads_and_fails_verification(desk_text):
    def bump_z(data):
        data["witnesses"][2]["z"] = str(int(data["witnesses"][2]["z"]) + 1)

    report = verify_counterexample(loads(_edit(desk_text, bump_z)))
    assert not report.ok
    assert report.get("witness[2].z").status == "fail"


# =============================================================================
# Report JSON
# =============================================================================

def test_to_jsonable_scalars():
    assert to_jsonable(Fraction(46, 64)) == "23/32"
    assert to_jsonable(2**60) == str(2**60)
    assert to_jsonable(12) == 12
    assert to_jsonable({"a": (1, Fraction(1, 2))}) == {"a": [1, "1/2"]}


def test_to_jsonable_params(strict_params):
    data = to_jsonable(strict_params)
    assert data["delta"] == "46/64"
    assert data["n"] == 256
    assert data["profile"] == "strict"
    assert data["identities"]["ok"] is True


def test_report_skips_hidden_fields():
    data = json.loads(dump_report(audit_resultant_bound(8, 2)))
    assert "certs" not in data
    assert data["ok"] is True
    assert data["pairs_examined"] == 30
