import io

import pytest

from quasipolish.cli import RunConfig, main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue().strip().splitlines()


@pytest.fixture(autouse=True)
def _cwd(monkeypatch, spaces_dir):
    monkeypatch.chdir(spaces_dir.parent)


def test_classify_sd():
    code, lines = run("classify", "spaces/sd.space", "--depth", "64", "--format", "structured")
    assert code == 0 and lines[-1] == "RESULT SD"
    assert all(l.startswith(("CHECK", "POINTS", "RESULT")) for l in lines)


def test_human_format_has_depth_line():
    code, lines = run("classify", "spaces/sd.space", "--depth", "64")
    assert any(l.startswith("depth 64") for l in lines)


def test_extract_mismatch_is_inconclusive():
    code, lines = run("extract", "sd", "spaces/s1.space", "--depth", "64")
    assert code == 2
    assert lines[-1] == "# requested SD, found maxT1_subspace"


def test_extract_s1_needs_t1(capsys):
    code, _ = run("extract", "s1", "spaces/sd.space", "--depth", "64")
    assert code == 1 and "not T1" in capsys.readouterr().err


def test_extract_s2_precondition_error(capsys):
    code, _ = run("extract", "s2", "spaces/s1.space", "--depth", "64")
    assert code == 1
    assert "no two disjoint" in capsys.readouterr().err


def test_derive():
    code, lines = run("derive", "spaces/omega_lt_3.space", "--depth", "128", "--format", "structured")
    assert code == 0 and lines == ["CHECK stabilized PASS", "RESULT rank=3"]


def test_derive_union():
    code, lines = run("derive", "spaces/union_omega_lt.space", "--depth", "128")
    assert lines[-1] == "RESULT rank=omega_plus(0)"


def test_witness_sober():
    code, lines = run("witness", "sober", "spaces/plus_generic_s1.space", "--depth", "64")
    assert code == 0 and lines[-1] == "RESULT S1"


def test_witness_baire_needs_dense_line(capsys):
    code, _ = run("witness", "baire", "spaces/s1.space", "--depth", "64")
    assert code == 1 and "dense" in capsys.readouterr().err


def test_witness_dense_needs_points():
    code, _ = run("witness", "dense", "spaces/sd.space", "--depth", "16")
    assert code == 1
    code, lines = run("witness", "dense", "spaces/sd.space", "--depth", "16", "--points", "0,1,2,3")
    assert code == 0


def test_witness_delta3():
    code, lines = run("witness", "delta3", "spaces/sd.space", "--depth", "10", "--points", "2 5",
                      "--format", "structured")
    assert code == 0
    assert "POINTS 2 5" in lines and lines[-1] == "RESULT delta3_witness"


def test_eval():
    code, lines = run("eval", "spaces/sd.space", "sigma2(diff(b2,b5))", "--depth", "10")
    assert lines == ["class Sigma_2, 3 visible points", "POINTS 2 3 4", "RESULT size=3"]


def test_eval_bad_expression():
    code, _ = run("eval", "spaces/sd.space", "sigma2(b1)", "--depth", "10")
    assert code == 1


def test_check_sierpinski():
    code, lines = run("check", "spaces/sierpinski.space")
    assert "PROPERTY TD holds_exactly" in lines and "PROPERTY T1 fails" in lines
    assert "PROPERTY sober holds_exactly" in lines


def test_malformed_file(capsys):
    code, _ = run("check", "spaces/malformed.space")
    assert code == 1
    assert "line 4" in capsys.readouterr().err


def test_missing_file():
    assert run("check", "spaces/nope.space")[0] == 1


def test_bad_depth():
    assert run("classify", "spaces/sd.space", "--depth", "1")[0] == 1


def test_inconclusive_prints_report():
    code, lines = run("witness", "baire", "spaces/s2_punctured.space", "--depth", "64", "--count", "8")
    assert code == 2
    assert lines[-1] == "RESULT inconclusive"
    assert any(l == "CHECK perfect_trace FAIL" for l in lines)


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig(count=0)
    with pytest.raises(ValueError):
        RunConfig(output="xml")
    assert RunConfig(height=3).budgets.tree_height == 3
