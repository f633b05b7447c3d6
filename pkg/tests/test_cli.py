import json
import subprocess
import sys
from pathlib import Path

import pytest

from qschur.cli import main

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_basis_n2_d1(capsys):
    code, out, _ = run(capsys, "basis", "--n", "2", "--d", "1")
    data = json.loads(out)
    assert code == 0
    assert len(data["elements"]) == 4
    assert all(len(e["expansion"]) == 1 for e in data["elements"])


def test_basis_n2_d2(capsys):
    code, out, _ = run(capsys, "basis", "--n", "2", "--d", "2")
    assert code == 0 and len(json.loads(out)["elements"]) == 10


def test_basis_byte_identical(capsys):
    first = run(capsys, "basis", "--n", "3", "--d", "2")[1]
    second = run(capsys, "basis", "--n", "3", "--d", "2")[1]
    assert first == second


def test_basis_tsv(capsys):
    code, out, _ = run(capsys, "basis", "--n", "2", "--d", "2", "--format", "tsv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "top\tmatrix\tcoeff"
    assert len(lines) == 1 + 11  # ten tops, one with a lower term


def test_negative_d_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["basis", "--n", "2", "--d", "-1"])
    assert exc.value.code == 2


def test_cap_enforced(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["basis", "--n", "4", "--d", "2"])
    assert exc.value.code and "cap" in str(exc.value.code)


def test_bad_prime_rejected():
    with pytest.raises(SystemExit) as exc:
        main(["oracle-check", "--n", "2", "--d", "1", "--primes", "4"])
    assert exc.value.code == 2


def test_output_file(tmp_path, capsys):
    target = tmp_path / "b.json"
    code, out, _ = run(capsys, "basis", "--n", "2", "--d", "1", "--output", str(target))
    assert code == 0 and out == ""
    assert len(json.loads(target.read_text())["elements"]) == 4


def test_cache_dir(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("QSCHUR_CACHE_DIR", str(tmp_path))
    first = run(capsys, "basis", "--n", "2", "--d", "2")[1]
    assert (tmp_path / "basis_n2_d2.json").exists()
    second = run(capsys, "basis", "--n", "2", "--d", "2")[1]
    assert first == second


def test_verify_theorem_a(capsys):
    code, out, _ = run(capsys, "verify-theorem-a", "--n", "2", "--d-max", "2")
    report = json.loads(out)
    assert code == 0 and report["pass"]
    assert all(report["clauses"].values())


@pytest.mark.slow
def test_verify_theorem_a_n3(capsys):
    code, out, _ = run(capsys, "verify-theorem-a", "--n", "3", "--d-max", "3")
    assert code == 0


def test_verify_theorem_a_corrupted_basis(capsys):
    code, _, err = run(capsys, "verify-theorem-a", "--n", "2", "--d-max", "2",
                       "--basis-file", str(FIXTURES / "corrupted_basis_n2_d2.json"))
    assert code == 1
    assert "canonicity" in err and "existence" in err


def test_oracle_check(capsys):
    code, out, _ = run(capsys, "oracle-check", "--n", "2", "--d", "2", "--primes", "2,3,5", "--relations")
    report = json.loads(out)
    assert code == 0 and report["pass"]
    assert all(r["pass"] for r in report["relations"])


def test_cohomology_check_char2(capsys):
    code, out, _ = run(capsys, "cohomology-check", "--char", "2", "--mu", "1,1")
    report = json.loads(out)
    assert code == 0
    assert report["bubble_image"]["full"] is False


def test_cohomology_check_single_block(capsys):
    code, out, _ = run(capsys, "cohomology-check", "--mu", "3")
    assert code == 0 and json.loads(out)["bubble_image"]["full"]


def test_eq1_check(capsys):
    code, out, _ = run(capsys, "eq1-check", "--d", "3")
    report = json.loads(out)
    assert code == 0
    assert {r["block"]: r["m_at_1"] for r in report["results"]}[3] == 6


def test_surjectivity_check(capsys):
    code, out, _ = run(capsys, "surjectivity-check", "--n", "2", "--d", "2", "--format", "tsv")
    assert code == 0 and "pass\ttrue" in out.splitlines()


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qschur.cli", "basis", "--n", "2", "--d", "0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert len(json.loads(proc.stdout)["elements"]) == 1


def test_cohomology_check_char2_full_image_is_not_a_failure(capsys):
    code, out, _ = run(capsys, "cohomology-check", "--char", "2", "--mu", "0,2")
    assert code == 0 and json.loads(out)["bubble_image"]["full"]
