"""Named verification suites, shared by the CLI and the acceptance tests."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, List, Optional

from . import decomp, frobenius
from .jacobi import jtheta_half, jtheta_triple_product
from .qseries import QSeries, eta, klein, pochhammer, theta_product, theta_series, twisted_theta_series
from .report import Report

LEMMA_PAIRS = ((1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2))

SUITES = ("all", "jtp", "lemmas", "decomposition", "lemma42", "bs", "catalog", "congruences", "routes")


def _series_report(claim: str, rng: str, left: QSeries, right: QSeries) -> Report:
    rep = Report(claim, rng)
    d = left.first_difference(right)
    if d is not None:
        rep.status = "fail"
        rep.first_failure = {"q_exp": d[0], "left": d[1], "right": d[2]}
    return rep


def verify_jtp(qprec=50) -> Report:
    """Sum and product sides of ``-theta(z + 1/2)`` agree."""
    qprec = Fraction(qprec)
    left, right = jtheta_half(qprec), jtheta_triple_product(qprec)
    rep = Report("triple product for -theta(z+1/2)", f"q^{qprec}")
    d = left.first_difference(right)
    if d is not None:
        r, e, a, b = d
        rep.status = "fail"
        rep.first_failure = {"zeta_exp": r, "q_exp": e, "left": a, "right": b}
    return rep


def verify_theta_eta(n_coeffs: int = 200) -> List[Report]:
    """``theta_{1,0}`` and ``theta_{1,1}`` as eta quotients."""
    p = Fraction(n_coeffs)
    e = {s: eta(p + 1).rescale(s) for s in (1, 2, 4)}
    r0 = (e[2] ** 5 / (e[1] ** 2 * e[4] ** 2)).truncate(p)
    # theta_{1,1} lives on q^(1/4 + Z); n_coeffs terms reach q^(n_coeffs + 1/4)
    p1 = p + Fraction(1, 4)
    e1 = {s: eta(p1 + 1).rescale(s) for s in (2, 4)}
    r1 = (2 * e1[4] ** 2 / e1[2]).truncate(p1)
    return [
        _series_report("theta_{1,0} = eta(2t)^5/(eta(t)^2 eta(4t)^2)", f"{n_coeffs} coefficients", theta_series(1, 0, 1, p), r0),
        _series_report("theta_{1,1} = 2 eta(4t)^2/eta(2t)", f"{n_coeffs} coefficients", theta_series(1, 1, 1, p1), r1),
    ]


def verify_theta_products(m_max: int = 24, n_coeffs: int = 30, include_boundary: bool = False) -> Report:
    """Series against triple-product form of ``theta_{m,b}`` for ``0 < b < m <= m_max``."""
    rep = Report(
        f"theta_{{m,b}} series = product, {'0 <= b <= m' if include_boundary else '0 < b < m'} <= {m_max}",
        f"{n_coeffs} coefficients",
    )
    checked = 0
    for m in range(1, m_max + 1):
        bs = range(0, m + 1) if include_boundary else range(1, m)
        for b in bs:
            p = Fraction(b * b, 4 * m) + n_coeffs
            d = theta_series(m, b, 1, p).first_difference(theta_product(m, b, 1, p))
            checked += 1
            if d is not None:
                rep.status = "fail"
                rep.first_failure = {"m": m, "b": b, "q_exp": d[0], "series": d[1], "product": d[2]}
                return rep
    rep.details["pairs"] = checked
    return rep


def klein_route(m: int, b: int, prec) -> QSeries:
    """``-q^(m/12) (q^2m;q^2m)^3 t_{1/2 + b/2m, 0}(2m tau)`` modulo ``q^prec``."""
    prec = Fraction(prec)
    off = Fraction(m, 12)
    p = prec - off
    t = klein(Fraction(1, 2) + Fraction(b, 2 * m), p / (2 * m) + 1).rescale(2 * m).truncate(p)
    return -(pochhammer(2 * m, 2 * m, p) ** 3 * t).truncate(p).shift(off)


def verify_klein(m_max: int = 8, prec=20) -> Report:
    """The Klein-form expression equals the sign-alternating theta sum, ``0 < b < m``."""
    rep = Report(f"Klein-form product = sum (-1)^n q^((2mn+b)^2/4m), 0 < b < m <= {m_max}", f"q^{prec}")
    for m in range(2, m_max + 1):
        for b in range(1, m):
            d = klein_route(m, b, prec).first_difference(twisted_theta_series(m, b, 1, prec))
            if d is not None:
                rep.status = "fail"
                rep.first_failure = {"m": m, "b": b, "q_exp": d[0]}
                return rep
    return rep


def suite_jtp(k: Optional[int], terms: int) -> List[Report]:
    return [verify_jtp(terms), *verify_theta_eta(terms), verify_theta_products(24, min(terms, 30))]


def suite_lemmas(k: Optional[int], terms: int) -> List[Report]:
    out = [decomp.verify_lemma_theta2(terms, strict=False)]
    for l, c in LEMMA_PAIRS:
        out.append(decomp.verify_lemma_onemore(l, c, terms, strict=False))
    for eps in (0, 1):
        for l, c in LEMMA_PAIRS:
            out.append(decomp.verify_lemma_theta1eps(eps, l, c, terms, strict=False))
    return out


def suite_decomposition(k: Optional[int], terms: int) -> List[Report]:
    ks = [k] if k else list(range(1, 9))
    return [decomp.verify_decomposition(j, terms, strict=False) for j in ks]


def suite_lemma42(k: Optional[int], terms: int) -> List[Report]:
    return decomp.verify_lemma42(terms, strict=False)


def suite_bs(k: Optional[int], terms: int) -> List[Report]:
    return frobenius.verify_bs_identities(terms, strict=False)


def suite_catalog(k: Optional[int], terms: int) -> List[Report]:
    ks = [k] if k else sorted(frobenius.CATALOG)
    return [frobenius.verify_catalog(j, terms, strict=False) for j in ks]


def suite_congruences(k: Optional[int], terms: int) -> List[Report]:
    out = [frobenius.prime_square_congruence(p, terms) for p in (2, 3, 5, 7)]
    out.append(frobenius.congruence_scan(6, 5, (5, 4), max(terms, 4)))
    return out


def route_equality(k: int, n_terms: int, with_enumeration: bool) -> Report:
    rep = Report(f"routes agree for CPhi_{k}", f"first {n_terms} coefficients")
    series = {
        "product": frobenius.cphi_product(k, n_terms).coeffs,
        "recursion": frobenius.cphi_recursion(k, n_terms).coeffs,
    }
    if with_enumeration:
        series["enumeration"] = frobenius.cphi_enumerate(k, n_terms - 1).coeffs
    ref = series["product"]
    for name, cs in series.items():
        for n, (a, b) in enumerate(zip(ref, cs)):
            if a != b:
                rep.status = "fail"
                rep.first_failure = {"route": name, "n": n, "product": a, name: b}
                return rep
    rep.details["routes"] = sorted(series)
    return rep


def suite_routes(k: Optional[int], terms: int) -> List[Report]:
    ks = [k] if k else list(range(1, 9))
    out = [route_equality(j, terms, False) for j in ks]
    out += [route_equality(j, 9, True) for j in ks if j <= 5]
    out += [decomp.verify_routes(level, min(terms, 12), strict=False) for level in (2, 3, 4)]
    return out


SUITE_FUNCS: Dict[str, Callable[[Optional[int], int], List[Report]]] = {
    "jtp": suite_jtp,
    "lemmas": suite_lemmas,
    "decomposition": suite_decomposition,
    "lemma42": suite_lemma42,
    "bs": suite_bs,
    "catalog": suite_catalog,
    "congruences": suite_congruences,
    "routes": suite_routes,
}


def run_suite(name: str, k: Optional[int] = None, terms: int = 20) -> List[Report]:
    if name == "all":
        return [r for n in SUITE_FUNCS for r in SUITE_FUNCS[n](k, terms)]
    return SUITE_FUNCS[name](k, terms)
