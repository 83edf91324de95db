import json
import subprocess
import sys

import pytest

from thetafrob.cli import formula_text, main
from thetafrob.decomp import evaluate_rendered
from thetafrob.frobenius import cphi_product


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def coeffs(out):
    return [int(c) for c in json.loads(out)["coeffs"]]


def test_cphi_examples(capsys):
    code, out, _ = run(capsys, "cphi", "--k", "2", "--terms", "4", "--method", "catalog")
    assert code == 0 and coeffs(out) == [1, 4, 9, 20]
    code, out, _ = run(capsys, "cphi", "--k", "1", "--terms", "6", "--method", "enumerate")
    assert code == 0 and coeffs(out) == [1, 1, 2, 3, 5, 7]
    code, out, _ = run(capsys, "cphi", "--k", "3", "--terms", "1", "--method", "recursion")
    assert code == 0 and coeffs(out) == [1]


def test_cphi_schema_and_text(capsys):
    code, out, _ = run(capsys, "cphi", "--k", "5", "--terms", "6", "--method", "product")
    d = json.loads(out)
    assert d == {"k": 5, "method": "product", "coeffs": ["1", "25", "150", "675", "2450", "7876"]}
    code, out, _ = run(capsys, "cphi", "--k", "2", "--terms", "3", "--output", "text")
    assert code == 0
    assert out.splitlines()[1:] == ["0  1", "1  4", "2  9"]


def test_catalog_errata_warning_and_exit(capsys):
    code, out, err = run(capsys, "cphi", "--k", "8", "--terms", "4", "--method", "catalog")
    assert code == 0 and "erratum" in err
    assert coeffs(out) != [1, 64, 912, 6912]
    code, out, err = run(capsys, "cphi", "--k", "8", "--terms", "4", "--method", "catalog", "--corrected")
    assert code == 0 and err == "" and coeffs(out) == [1, 64, 912, 6912]
    code, _, err = run(capsys, "cphi", "--k", "6", "--terms", "4", "--method", "catalog")
    assert code == 1 and "not a power series" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["cphi", "--k", "4", "--method", "catalog"],
        ["cphi", "--k", "0"],
        ["cphi", "--k", "2", "--corrected"],
        ["formula", "--k", "1"],
        ["verify", "--suite", "nope"],
        ["enumerate", "--k", "2", "--weight", "-1"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_cap_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("THETAFROB_ENUM_CAP", "10")
    code, _, err = run(capsys, "cphi", "--k", "3", "--terms", "8", "--method", "enumerate")
    assert code == 3 and "cap" in err


def test_formula_deterministic_and_evaluates(capsys):
    code, first, _ = run(capsys, "formula", "--k", "3")
    _, second, _ = run(capsys, "formula", "--k", "3")
    assert code == 0 and first == second
    body = first.split("=", 1)[1]
    assert evaluate_rendered(body, 12).integer_coeffs(12) == cphi_product(3, 12).coeffs
    assert formula_text(3) in first


def test_htable(capsys):
    code, out, _ = run(capsys, "htable", "--k", "4", "--output", "text")
    assert code == 0
    assert "h[2,1] = 2*θ[1,0]*θ[1,1]*θ[2,1]" in out
    code, out, _ = run(capsys, "htable", "--k", "3")
    assert json.loads(out)["level"] == "3/2"


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--k", "2", "--weight", "2")
    d = json.loads(out)
    assert code == 0 and d["count"] == 9 == len(d["arrays"])


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--suite", "jtp", "--terms", "50"],
        ["verify", "--suite", "lemma42", "--terms", "50"],
        ["verify", "--suite", "decomposition", "--k", "8", "--terms", "10"],
        ["verify", "--suite", "bs", "--terms", "30"],
        ["verify", "--suite", "catalog", "--k", "8", "--terms", "10"],
    ],
)
def test_verify_suites_pass(capsys, argv):
    code, out, _ = run(capsys, *argv)
    d = json.loads(out)
    assert code == 0 and d["status"] == "pass"
    assert all(c["status"] in ("pass", "erratum") for c in d["checks"])


def test_verify_output_deterministic(capsys):
    _, a, _ = run(capsys, "verify", "--suite", "lemmas", "--terms", "6")
    _, b, _ = run(capsys, "verify", "--suite", "lemmas", "--terms", "6")
    assert a == b
    _, c, _ = run(capsys, "verify", "--suite", "lemmas", "--terms", "6", "--metadata")
    assert "elapsed_seconds" in json.loads(c)["metadata"]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "thetafrob", "cphi", "--k", "2", "--terms", "3"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["coeffs"] == ["1", "4", "9"]
