import itertools
from fractions import Fraction as F

import pytest

from thetafrob.errors import CapExceeded, LatticeError
from thetafrob.frobenius import (
    CATALOG,
    ColoredPart,
    CPhiSeries,
    FrobeniusArray,
    catalog_formula,
    congruence_scan,
    cphi,
    cphi_enumerate,
    cphi_product,
    cphi_recursion,
    iter_arrays,
    prime_square_congruence,
    verify_bs_identities,
    verify_catalog,
)


def brute_count(k, n):
    """Count F-partitions of n by filtering all pairs of colored strict rows."""
    parts = [ColoredPart(v, c) for v in range(n + 1) for c in range(1, k + 1)]
    rows_by_len = {}
    for r in range(0, n + 2):
        for combo in itertools.combinations(parts, r):
            if sum(p.value for p in combo) + r <= n:
                rows_by_len.setdefault(r, []).append(combo)
    total = 0
    for r, rows in rows_by_len.items():
        for top in rows:
            for bottom in rows:
                if r + sum(p.value for p in top) + sum(p.value for p in bottom) == n:
                    total += 1
    return total


@pytest.mark.parametrize("k", [1, 2, 3])
def test_enumeration_against_brute_force(k):
    got = cphi_enumerate(k, 5).coeffs
    assert got == [brute_count(k, n) for n in range(6)]


def test_known_starts():
    assert cphi_enumerate(2, 3).coeffs == [1, 4, 9, 20]
    assert cphi_recursion(1, 11).coeffs == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]
    assert cphi_product(1, 11).coeffs == cphi_recursion(1, 11).coeffs
    assert cphi_recursion(3, 9).coeffs == [1, 9, 27, 82, 207, 486, 1055, 2205, 4374]
    assert cphi_product(8, 4).coeffs == [1, 64, 912, 6912]


def test_product_recursion_agree_k4():
    assert cphi_product(4, 40).coeffs == cphi_recursion(4, 40).coeffs


def test_monotone_in_colors():
    prev = cphi_product(1, 20).coeffs
    for k in range(2, 7):
        cur = cphi_product(k, 20).coeffs
        assert all(a >= b for a, b in zip(cur, prev))
        prev = cur


def test_array_validation():
    FrobeniusArray((ColoredPart(2, 1), ColoredPart(0, 1)), (ColoredPart(1, 2), ColoredPart(1, 1)))
    with pytest.raises(ValueError):
        FrobeniusArray((ColoredPart(0, 1), ColoredPart(2, 1)), (ColoredPart(1, 2), ColoredPart(1, 1)))
    with pytest.raises(ValueError):
        FrobeniusArray((ColoredPart(0, 1),), ())
    a = FrobeniusArray((ColoredPart(3, 1),), (ColoredPart(0, 2),))
    assert a.weight == 4


def test_cphi_series_checks():
    with pytest.raises(ValueError):
        CPhiSeries(2, [2, 4], "x")
    s = CPhiSeries(2, [1, 4, 9], "x")
    assert s.to_dict()["coeffs"] == ["1", "4", "9"]


def test_enumeration_cap(monkeypatch):
    monkeypatch.setenv("THETAFROB_ENUM_CAP", "50")
    with pytest.raises(CapExceeded):
        list(iter_arrays(3, 8))
    with pytest.raises(CapExceeded):
        cphi_enumerate(3, 8)


def test_dispatch():
    assert cphi(2, 5, "enumerate").coeffs == cphi(2, 5, "catalog").coeffs == [1, 4, 9, 20, 42]
    with pytest.raises(ValueError):
        cphi(2, 5, "nonsense")


def test_catalog_leading():
    assert catalog_formula(2, 3).coeffs == [1, 4, 9]
    assert set(CATALOG) == {2, 3, 6, 7, 8}
    with pytest.raises(ValueError):
        catalog_formula(4, 5)


@pytest.mark.parametrize("k", [2, 3, 7])
def test_catalog_exact(k):
    assert verify_catalog(k, 30).status == "pass"


def test_catalog_k6_erratum():
    rep = verify_catalog(6, 30, strict=False)
    assert rep.status == "erratum"
    assert rep.first_failure["q_exp"] == F(7, 8)
    (term,) = rep.details["differing_display_terms"]
    assert term["term"] == "θ[1,0]*θ[1,1]^2*θ[2,1]*θ[9,3]"
    assert catalog_formula(6, 30, corrected=True).coeffs == cphi_recursion(6, 30).coeffs
    # as printed, the k=6 display is not even a power series in q
    with pytest.raises(LatticeError):
        catalog_formula(6, 30)


def test_catalog_k8_erratum():
    rep = verify_catalog(8, 20, strict=False)
    assert rep.status == "erratum"
    assert rep.first_failure["printed"] - rep.first_failure["recursion"] == 12
    assert catalog_formula(8, 20, corrected=True).coeffs == cphi_recursion(8, 20).coeffs


def test_bs_identities():
    reps = verify_bs_identities(30, strict=False)
    assert [r.status for r in reps] == ["pass", "pass", "pass", "erratum"]


def test_congruences():
    for p in (2, 3, 5):
        rep = prime_square_congruence(p, 40)
        assert rep.passed and rep.details["violations"] == []
    rep = congruence_scan(6, 5, (5, 4), 54)
    assert rep.passed and rep.details["violations"] == []


def test_congruence_scan_reports_violations():
    rep = congruence_scan(2, 3, (1, 0), 10)
    assert not rep.passed
    assert rep.details["violations"]
