"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line with its runtime and budget.
"""

import time
from fractions import Fraction

import pytest

from thetafrob import decomp, frobenius, verify
from thetafrob.cli import formula_text
from thetafrob.report import Report


@pytest.fixture
def record(capsys, request):
    """Time the test body, print one status line, and enforce the time budget."""
    state = {"start": time.perf_counter(), "budget": None, "label": request.node.name}

    def set_budget(label, seconds):
        state["label"], state["budget"] = label, seconds

    yield set_budget
    elapsed = time.perf_counter() - state["start"]
    failed = getattr(request.node, "rep_call_failed", True)
    over = state["budget"] is not None and elapsed > state["budget"]
    status = "FAIL" if failed or over else "PASS"
    with capsys.disabled():
        print(f"\n[{status}] {state['label']}  ({elapsed:.1f}s, budget {state['budget']}s)")
    assert not over, f"{state['label']} took {elapsed:.1f}s, budget {state['budget']}s"


def _ok(reports):
    for r in reports:
        assert r.status == "pass", r.summary()


def _erratum_named(rep: Report):
    assert rep.status == "erratum", rep.summary()
    assert rep.first_failure is not None
    assert rep.details["differing_display_terms"]


def test_criterion_01_route_equivalence(record):
    record("1 enumeration = product = recursion", 120)
    for k in range(1, 6):
        enum = frobenius.cphi_enumerate(k, 8).coeffs
        assert enum == frobenius.cphi_product(k, 9).coeffs == frobenius.cphi_recursion(k, 9).coeffs, k
    for k in range(1, 9):
        assert frobenius.cphi_product(k, 31).coeffs == frobenius.cphi_recursion(k, 31).coeffs, k


def test_criterion_02_two_and_three_colors(record):
    record("2 closed forms for two and three colors", 30)
    for k in (2, 3):
        assert frobenius.cphi_recursion(k, 100).coeffs == frobenius.catalog_formula(k, 100).coeffs, k
    assert frobenius.cphi_recursion(2, 9).coeffs == [1, 4, 9, 20, 42, 80, 147, 260, 445]


def test_criterion_03_catalog(record):
    record("3 closed forms for six, seven and eight colors", 60)
    assert frobenius.verify_catalog(7, 50).status == "pass"
    for k in (6, 8):
        rep = frobenius.verify_catalog(k, 50, strict=False)
        _erratum_named(rep)
        assert frobenius.catalog_formula(k, 50, corrected=True).coeffs == frobenius.cphi_recursion(k, 50).coeffs
        assert frobenius.cphi_product(k, 50).coeffs == frobenius.cphi_recursion(k, 50).coeffs
    rep8 = frobenius.verify_catalog(8, 50, strict=False)
    assert rep8.first_failure == {"q_exp": Fraction(2), "printed": 924, "recursion": 912}
    assert rep8.details["coefficient_fits"][0]["printed"] == 2
    assert rep8.details["coefficient_fits"][0]["required"] == 1


def test_criterion_04_theta_decomposition(record):
    record("4 theta decomposition, k = 2..8 at q^10", 120)
    _ok([decomp.verify_decomposition(k, 10, strict=False) for k in range(2, 9)])


def test_criterion_05_lemma_suite(record):
    record("5 product lemmas at q^12", 60)
    _ok(verify.suite_lemmas(None, 12))


def test_criterion_06_level_two_six_identities(record):
    record("6 level 2/6 theta identities, 200 coefficients", 10)
    reports = decomp.verify_lemma42(50, strict=False)
    assert len(reports) == 2
    _ok(reports)


def test_criterion_07_eta_theta_identities(record):
    record("7 eta quotients, theta products, triple product", 60)
    _ok(verify.verify_theta_eta(200))
    rep = verify.verify_theta_products(24, 30)
    _ok([rep])
    assert rep.details["pairs"] == sum(m - 1 for m in range(1, 25))
    _ok([verify.verify_jtp(50)])


def test_criterion_08_congruences(record):
    record("8 congruences", 60)
    for p in (2, 3, 5, 7):
        rep = frobenius.prime_square_congruence(p, 50)
        assert rep.passed and rep.details["violations"] == [], p
    # cphi_6(5n+4) for n <= 10 means arguments up to 54
    rep = frobenius.congruence_scan(6, 5, (5, 4), 54)
    assert rep.passed and rep.details["violations"] == []


def test_criterion_09_phi_psi(record):
    record("9 phi/psi identities to 60", 10)
    phi, psi, bs3, bs3_printed = frobenius.verify_bs_identities(60, strict=False)
    _ok([phi, psi, bs3])
    assert bs3_printed.status == "erratum"
    assert bs3_printed.first_failure["q_exp"] == Fraction(3, 4)


def test_criterion_10_render_round_trip(record):
    record("10 rendered formula evaluates to the series", 30)
    for k in range(2, 7):
        got = decomp.evaluate_rendered(formula_text(k), 30).integer_coeffs(30)
        assert got == frobenius.cphi_recursion(k, 30).coeffs, k
