import json

import pytest
from hypothesis import given

from helpers import matrices
from hirano import cli, formats
from hirano.blockthm import BlockInstance
from hirano.errors import ParseError
from hirano.ratmat import Matrix


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_check_lower_unipotent(capsys, data_dir):
    code, out, _ = run(capsys, "check", "--matrix", data_dir / "lower_unipotent.json")
    assert code == 0
    lines = out.splitlines()
    # A - A^2 = [[0,0],[-2,0]] is nilpotent, so this matrix is strongly Drazin
    # invertible as well; an older reference output said "no" here.
    assert lines[0] == "hirano: yes (exponent 2), strongly-drazin: yes (exponent 2), nilpotent: no"
    assert lines[1] == "index: 1"
    assert lines[2] == "char poly: x^2 - 2*x + 1 = (x - 1)^2"


def test_check_identity(capsys, data_dir):
    code, out, _ = run(capsys, "check", "--matrix", data_dir / "identity2.json")
    assert code == 0
    assert out.splitlines()[0] == "hirano: yes, strongly-drazin: yes, nilpotent: no"


def test_check_nilpotent_shift(capsys, tmp_path):
    path = tmp_path / "shift.json"
    formats.dump_json(formats.render_matrix(Matrix([[0, 1], [0, 0]])), path)
    code, out, _ = run(capsys, "check", "--matrix", path)
    assert code == 0
    first = out.splitlines()[0]
    assert first.endswith("nilpotent: yes (exponent 2)")


def test_check_not_tripotent_spectrum(capsys, data_dir):
    code, out, _ = run(capsys, "check", "--matrix", data_dir / "diag_2.json")
    assert code == 0
    assert out.splitlines()[0].startswith("hirano: no, strongly-drazin: no")
    assert "(not a product of x, x - 1, x + 1)" in out


def test_invert_hirano_nonexistent(capsys, data_dir):
    code, _, err = run(capsys, "invert", "--kind", "hirano", "--matrix", data_dir / "diag_2_0.json")
    assert code == 4
    assert "-6" in err


def test_invert_drazin_certificate(capsys, data_dir):
    code, out, _ = run(capsys, "invert", "--kind", "drazin", "--matrix", data_dir / "diag_2_0.json")
    assert code == 0
    payload = json.loads(out)
    assert payload["rows"] == [["1/2", "0"], ["0", "0"]]
    cert = payload["certificate"]
    assert cert["index"] == 1
    assert cert["az-za"] == [["0", "0"], ["0", "0"]]


def test_invert_hirano_tripotent(capsys, data_dir):
    code, out, _ = run(capsys, "invert", "--kind", "hirano", "--matrix", data_dir / "tripotent.json")
    assert code == 0
    payload = json.loads(out)
    assert payload["rows"] == [["-1", "0", "0"], ["0", "0", "0"], ["0", "0", "1"]]
    assert payload["certificate"]["tripotent"] == payload["rows"]


def test_invert_writes_file(capsys, data_dir, tmp_path):
    dest = tmp_path / "inv.json"
    code, out, _ = run(capsys, "invert", "--kind", "strong", "--matrix", data_dir / "jordan_block.json",
                       "--out", dest)
    assert code == 0 and out == ""
    assert json.loads(dest.read_text())["kind"] == "strong"


def test_decompose_modes(capsys, data_dir):
    code, out, _ = run(capsys, "decompose", "--mode", "tripotent", "--matrix", data_dir / "lower_unipotent.json")
    assert code == 0
    payload = json.loads(out)
    assert payload["structured_part"]["rows"] == [["1", "0"], ["0", "1"]]
    assert payload["nilpart"]["rows"] == [["0", "0"], ["2", "0"]]
    code, _, _ = run(capsys, "decompose", "--mode", "idempotent", "--matrix", data_dir / "diag_2.json")
    assert code == 4


@pytest.mark.parametrize("name", ["ragged.json", "nonsquare.json"])
def test_dimension_errors(capsys, data_dir, name):
    code, _, err = run(capsys, "check", "--matrix", data_dir / name)
    assert code == 3
    assert err


def test_float_entries_rejected(capsys, data_dir):
    code, _, _ = run(capsys, "check", "--matrix", data_dir / "float_entry.json")
    assert code == 2


def test_missing_file_and_bad_usage(capsys, tmp_path):
    assert run(capsys, "check", "--matrix", tmp_path / "absent.json")[0] == 2
    assert run(capsys, "check")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "check", "--matrix", bad)[0] == 2


def test_theorem_command(capsys, data_dir):
    code, out, _ = run(capsys, "theorem", "--id", "c3_5", "--blocks", data_dir / "corollary_blocks.json")
    assert code == 0
    payload = json.loads(out)
    assert payload["verdict"] == "Verified"
    assert payload["hypotheses"]["all_hold"]
    assert payload["certificate"]["kind"] == "hirano"


def test_theorem_command_errors(capsys, data_dir):
    assert run(capsys, "theorem", "--id", "T9_9", "--blocks", data_dir / "corollary_blocks.json")[0] == 2
    assert run(capsys, "theorem", "--id", "L2_1", "--blocks", data_dir / "corollary_blocks.json")[0] == 3


def test_fuzz_sweep(capsys, tmp_path):
    code, out, _ = run(capsys, "fuzz", "--id", "T2_7", "--trials", 5, "--size", 2, "--seed", 1,
                       "--out-dir", tmp_path, "--json")
    assert code == 0
    summary = json.loads(out)
    assert summary["trials"] == 5 and summary["Verified"] == 5
    assert "counterexample" not in summary


def test_fuzz_probe_writes_counterexample(capsys, tmp_path):
    code, out, _ = run(capsys, "fuzz", "--id", "C2_9", "--as-stated", "--drop", "class-A",
                       "--trials", 20, "--seed", 0, "--out-dir", tmp_path)
    assert code == 0
    assert "counterexample at trial" in out
    files = list(tmp_path.glob("counterexample-C2_9-seed0-n3-trial*.json"))
    assert len(files) == 1
    inst, meta = formats.load_blocks(files[0])
    assert meta["dropped"] == "class-A" and meta["as_stated"] is True
    code, out, _ = run(capsys, "theorem", "--id", "C2_9", "--as-stated", "--blocks", files[0])
    assert json.loads(out)["verdict"] == "ConclusionFail"


def test_fuzz_is_deterministic(capsys, tmp_path):
    argv = ("fuzz", "--id", "L2_6", "--trials", 4, "--seed", 8, "--json", "--out-dir", tmp_path)
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_fuzz_argument_checks(capsys):
    assert run(capsys, "fuzz", "--id", "T2_7", "--seed", 2**64)[0] == 2
    assert run(capsys, "fuzz", "--id", "T2_7", "--drop", "nope")[0] == 2
    assert run(capsys, "fuzz", "--id", "T2_7", "--trials", -1)[0] == 2
    code, out, _ = run(capsys, "fuzz", "--id", "T2_7", "--trials", 0)
    assert code == 0 and "0 trials" in out


def test_parse_rational_forms():
    assert formats.parse_rational("-3/6") == formats.parse_rational(" -1/2 ")
    assert formats.parse_rational(7) == 7
    for bad in ("0.5", "1e3", "1/0", 0.5, True, None, "1/-2"):
        with pytest.raises(ParseError):
            formats.parse_rational(bad)


@given(matrices(max_size=4))
def test_matrix_round_trip(m):
    text = formats.dump_json(formats.render_matrix(m))
    assert formats.parse_matrix(json.loads(text)) == m


@given(matrices(max_size=3), matrices(max_size=3))
def test_block_round_trip(a, b):
    inst = BlockInstance({"P": a, "Q": b})
    back, meta = formats.parse_blocks(json.loads(formats.dump_json(formats.render_blocks(inst, {"seed": 1}))))
    assert back == inst and meta == {"seed": 1}


def test_block_file_validation():
    with pytest.raises(ParseError):
        formats.parse_blocks({"Z": [["1"]]})
    with pytest.raises(ParseError):
        formats.parse_blocks({})
    inst, _ = formats.parse_blocks({"A": {"rows": [["1"]]}})
    assert inst["A"] == Matrix([[1]])
