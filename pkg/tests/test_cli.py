"""Command surface: golden transcripts, structured output, error codes."""

import json
import subprocess
import sys

import pytest

from expweyl.cli import main


def run(capsys, *argv):
    status = main(list(argv))
    captured = capsys.readouterr()
    return status, captured.out, captured.err


# -- golden transcripts --------------------------------------------------------


def test_golden_normalize(capsys):
    status, out, err = run(capsys, "normalize", "D_1 * x_1")
    assert status == 0 and err == ""
    assert out == "x_1*D_1 + 1\n"


def test_golden_comm(capsys):
    status, out, _ = run(capsys, "comm", "D_1", "x_1")
    assert status == 0
    assert out == "1\n"


def test_golden_noetherian(capsys):
    status, out, _ = run(capsys, "noetherian", "3")
    assert status == 0
    assert out == "(6, 0)\n"


def test_golden_transcripts_via_interpreter():
    # byte-stable through the real process boundary
    cases = [
        (["normalize", "D_1 * x_1"], b"x_1*D_1 + 1\n"),
        (["comm", "D_1", "x_1"], b"1\n"),
        (["noetherian", "3"], b"(6, 0)\n"),
    ]
    for argv, expected in cases:
        proc = subprocess.run(
            [sys.executable, "-m", "expweyl.cli", *argv],
            capture_output=True,
            check=True,
        )
        assert proc.stdout == expected


# -- configuration -------------------------------------------------------------


def test_config_file_and_flag_overrides(tmp_path, capsys):
    cfg = tmp_path / "session.json"
    cfg.write_text(json.dumps({"n": 1, "rank": 2, "p": [2], "t": [[0, 0]]}))
    status, out, _ = run(capsys, "--config", str(cfg), "normalize", "g_2*x_1")
    assert status == 0
    assert out == "g_2*x_1\n"
    # hbar needs the flag, not just the config
    status, _, err = run(capsys, "--config", str(cfg), "normalize", "hbar")
    assert status == 1 and "error[SignatureMismatch]" in err
    status, out, _ = run(
        capsys, "--config", str(cfg), "--hbar-order", "2", "normalize", "hbar + hbar^3"
    )
    assert status == 0
    assert out == "hbar\n"


def test_bad_config_is_a_stable_error(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text("{not json")
    status, _, err = run(capsys, "--config", str(cfg), "normalize", "x_1")
    assert status == 1
    assert err.startswith("error[SignatureMismatch]:")


# -- structured output ----------------------------------------------------------


def test_structured_normalize_schema(capsys):
    status, out, _ = run(capsys, "--format", "structured", "normalize", "D_1*x_1")
    assert status == 0
    lines = out.splitlines()
    assert len(lines) == 1
    doc = json.loads(lines[0])
    assert doc["schema"] == "expweyl/1"
    assert doc["command"] == "normalize"
    assert doc["text"] == "x_1*D_1 + 1"
    assert doc["terms"][0]["d"] == [1]
    # keys are emitted sorted, so the line itself is canonical
    assert lines[0] == json.dumps(doc, sort_keys=True)


def test_structured_noetherian(capsys):
    status, out, _ = run(capsys, "--format", "structured", "noetherian", "3")
    doc = json.loads(out)
    assert status == 0
    assert doc["pair"] == ["6", "0"]
    assert doc["certified"] is True


def test_structured_selftest(capsys):
    status, out, _ = run(capsys, "--format", "structured", "selftest")
    doc = json.loads(out)
    assert status == 0
    assert doc["ok"] is True
    assert all(c["ok"] for c in doc["checks"])
    names = [c["name"] for c in doc["checks"]]
    assert "defining_relations" in names and "parse_format_round_trip" in names


# -- error surfacing -------------------------------------------------------------


def test_syntax_error_with_position(capsys):
    status, out, err = run(capsys, "normalize", "x_1 + ")
    assert status == 1 and out == ""
    assert err.startswith("error[SyntaxError]:")
    assert "position 6" in err


def test_unknown_symbol_error(capsys):
    status, _, err = run(capsys, "normalize", "q_7")
    assert status == 1
    assert err.startswith("error[UnknownSymbol]:")


def test_negative_power_error(capsys):
    status, _, err = run(capsys, "normalize", "D_1^-1")
    assert status == 1
    assert err.startswith("error[NegativePower]:")


def test_hbar_outside_mode_error(capsys):
    status, _, err = run(capsys, "normalize", "hbar")
    assert status == 1
    assert err.startswith("error[SignatureMismatch]:")


def test_zero_order_error(capsys):
    status, _, err = run(capsys, "ord", "x_1 - x_1")
    assert status == 1
    assert err.startswith("error[ZeroElement]:")


def test_act_requires_function(capsys):
    status, _, err = run(capsys, "act", "D_1", "D_1")
    assert status == 1
    assert err.startswith("error[NotAFunction]:")


# -- command behavior -------------------------------------------------------------


def test_ord_degree_symbol(capsys):
    assert run(capsys, "ord", "x_1^3*D_1^2 + D_1")[1] == "5\n"
    assert run(capsys, "degree", "exp(2*x_1)")[1] == "(2)\n"
    assert run(capsys, "degree", "x_1^3", "--power")[1] == "(3)\n"
    assert run(capsys, "symbol", "x_1*D_1^2 + D_1")[1] == "x_1*y_1^2\n"


def test_grdiag_strict_drop_refuted(tmp_path, capsys):
    cfg = tmp_path / "t1.json"
    cfg.write_text(json.dumps({"n": 1, "rank": 1, "p": [2], "t": [[1]]}))
    status, out, _ = run(capsys, "--config", str(cfg), "grdiag", "D_1", "E_1")
    assert status == 0
    assert "strict_drop=false" in out
    assert "witness=" in out


def test_grdiag_weyl_pair_drops(capsys):
    _, out, _ = run(capsys, "grdiag", "D_1", "x_1")
    assert "strict_drop=true" in out
    assert "submultiplicative=true" in out


def test_act_and_probe(capsys):
    assert run(capsys, "act", "D_1^2", "x_1^2")[1] == "2\n"
    _, out, _ = run(capsys, "probe", "x_1*D_1")
    assert out.splitlines()[0] == "zero: false"
    assert "witness" in out
    assert run(capsys, "probe", "x_1 - x_1")[1] == "zero: true\n"


def test_liebracket(capsys):
    assert run(capsys, "liebracket", "x_1*D_1", "D_1")[1] == "-D_1\n"


def test_cespan_preset_and_custom(capsys):
    _, out, _ = run(capsys, "cespan", "sl2like")
    assert "dimension: 3" in out and "degrees: -1, 0, 1" in out
    status, _, err = run(capsys, "cespan", "x_1^2*D_1, x_1^3*D_1")
    assert status == 1
    assert err.startswith("error[NotClosed]:")


def test_ced_and_eulerint(capsys):
    _, out, _ = run(capsys, "--seed", "3", "ced", "borel", "--degree", "1")
    assert "d^2 omega == 0: true" in out
    _, out, _ = run(capsys, "--seed", "3", "eulerint", "sl2like")
    assert "d phi == omega: true" in out


def test_hochb_and_connesB(capsys):
    _, out, _ = run(capsys, "hochb", "D_1, x_1")
    assert out == "b = [1]\nb^2 == 0: true\n"
    _, out, _ = run(capsys, "connesB", "D_1, x_1")
    assert out == "B = -1 * [1, x_1, D_1] + [1, D_1, x_1]\n"


def test_commspan(capsys):
    _, out, _ = run(capsys, "commspan", "1", "D_1, x_1")
    assert out.splitlines()[0] == "inside: true"
    assert run(capsys, "commspan", "x_1^5", "D_1, x_1")[1] == "inside: false\n"


def test_star_and_assoc(capsys):
    assert run(capsys, "star", "D_1", "x_1")[1] == "x_1*y_1 + hbar\n"
    _, out, _ = run(capsys, "star", "D_1^2", "x_1^2", "--order", "3")
    assert out == "x_1^2*y_1^2 + 4*hbar*x_1*y_1 + 2*hbar^2\n"
    _, out, _ = run(capsys, "--seed", "2", "assoc", "--triples", "5")
    assert out == "associative through hbar^2 on 5 triples\n"


def test_rank2_command(tmp_path, capsys):
    cfg = tmp_path / "r2.json"
    cfg.write_text(json.dumps({"n": 1, "rank": 2, "p": [2], "t": [[0, 0]]}))
    _, out, _ = run(capsys, "--config", str(cfg), "rank2", "1,0", "0,1")
    lines = out.splitlines()
    assert lines[0] == "product = hbar*E_1*x_1^(1,1) + x_1^(1,1)"
    assert lines[1] == "commutator = 2*hbar*E_1*x_1^(1,1)"
    _, out, _ = run(capsys, "--config", str(cfg), "rank2", "2,0", "0,1", "--c", "3/2")
    assert "commutator = 6*hbar*E_1*x_1^(2,1)" in out


def test_tshift_command(tmp_path, capsys):
    cfg = tmp_path / "t1.json"
    cfg.write_text(json.dumps({"n": 1, "rank": 1, "p": [2], "t": [[1]]}))
    status, out, _ = run(capsys, "--config", str(cfg), "tshift", "--order", "2")
    assert status == 0
    assert "hbar^1 deviation nonzero" in out
    _, doc_out, _ = run(
        capsys, "--config", str(cfg), "--format", "structured", "tshift", "--order", "2"
    )
    doc = json.loads(doc_out)
    assert doc["classical"].startswith("E_1*exp(1*x_1)*")
    assert doc["first_order"] != "0"


def test_mc_command(capsys):
    _, out, _ = run(capsys, "--seed", "4", "mc", "--triples", "4")
    assert out == "maurer-cartan residual zero on 4 triples\n"


def test_selftest_green_and_exit_code(capsys):
    status, out, _ = run(capsys, "selftest")
    assert status == 0
    lines = out.splitlines()
    assert lines[-1].startswith("selftest: ok")
    assert all(line.startswith("ok ") for line in lines[:-1])


# -- determinism -----------------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ["--format", "structured", "--seed", "5", "assoc", "--triples", "4"],
        ["--seed", "9", "ced", "sl2like", "--degree", "2"],
        ["selftest"],
    ],
)
def test_identical_invocations_are_byte_identical(argv, capsys):
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second
