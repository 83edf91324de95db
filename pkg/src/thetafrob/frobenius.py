"""Generalized Frobenius partitions in k colors.

``cphi_k(n)`` counts two-row arrays of equal length ``m`` whose rows are
strictly decreasing sequences of colored nonnegative integers, with weight
``m + sum(top values) + sum(bottom values)``.  Three independent routes give
the generating function:

* exhaustive enumeration (:func:`cphi_enumerate`),
* the zeta-constant term of the Andrews product (:func:`cphi_product`),
* the theta-decomposition recursion, ``h_{k/2,k/2} / (q;q)^k``
  (:func:`cphi_recursion`).

Closed forms known from the literature are collected in :data:`CATALOG`
together with the corrections needed where the printed display disagrees
with the recursion.
"""

from __future__ import annotations

import os
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from .decomp import ThetaExpr, eval_theta_expr, h_table, theta
from .errors import CapExceeded, DomainError, LatticeError
from .jacobi import andrews_product
from .qseries import QSeries, pochhammer, theta_series
from .report import Report

__all__ = [
    "ColoredPart",
    "FrobeniusArray",
    "CPhiSeries",
    "ENUM_CAP_ENV",
    "enumeration_cap",
    "iter_rows",
    "iter_arrays",
    "cphi_enumerate",
    "cphi_product",
    "cphi_recursion",
    "cphi",
    "CATALOG",
    "catalog_formula",
    "verify_catalog",
    "verify_bs_identities",
    "congruence_scan",
    "prime_square_congruence",
]

ENUM_CAP_ENV = "THETAFROB_ENUM_CAP"
DEFAULT_ENUM_CAP = 10**7


def enumeration_cap() -> int:
    return int(os.environ.get(ENUM_CAP_ENV, DEFAULT_ENUM_CAP))


@dataclass(frozen=True, order=True)
class ColoredPart:
    """A value from the ``color``-th copy of the nonnegative integers.

    Field order gives the lexicographic (value, color) ordering.
    """

    value: int
    color: int


@dataclass(frozen=True)
class FrobeniusArray:
    top: Tuple[ColoredPart, ...]
    bottom: Tuple[ColoredPart, ...]

    def __post_init__(self):
        if len(self.top) != len(self.bottom):
            raise ValueError("rows must have equal length")
        for row in (self.top, self.bottom):
            if any(not row[i] > row[i + 1] for i in range(len(row) - 1)):
                raise ValueError(f"row {row} is not strictly decreasing")
            if any(p.value < 0 for p in row):
                raise ValueError("values must be nonnegative")

    @property
    def weight(self) -> int:
        return len(self.top) + sum(p.value for p in self.top) + sum(p.value for p in self.bottom)


@dataclass
class CPhiSeries:
    """``cphi_k(0), ..., cphi_k(N-1)`` and the route that produced them."""

    k: int
    coeffs: List[int]
    method: str

    def __post_init__(self):
        if self.coeffs and self.coeffs[0] != 1:
            raise ValueError(f"cphi_{self.k}(0) must be 1, got {self.coeffs[0]}")
        if any(c < 0 for c in self.coeffs):
            raise ValueError("negative partition count")

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    def to_dict(self) -> dict:
        return {"k": self.k, "method": self.method, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_dict(cls, d) -> "CPhiSeries":
        return cls(int(d["k"]), [int(c) for c in d["coeffs"]], d["method"])


# -- enumeration ----------------------------------------------------------------


def iter_rows(k: int, max_weight: int) -> Iterator[Tuple[ColoredPart, ...]]:
    """All strictly decreasing colored rows with ``len(row) + sum(values) <= max_weight``.

    Each part of value ``v`` costs ``v + 1``, which is the share of an array's
    weight a row can account for on its own.
    """

    def descend(prefix, budget, below):
        yield tuple(prefix)
        bv, bc = below
        for v in range(min(bv, budget - 1), -1, -1):
            top_color = bc - 1 if v == bv else k
            for c in range(top_color, 0, -1):
                prefix.append(ColoredPart(v, c))
                yield from descend(prefix, budget - v - 1, (v, c))
                prefix.pop()

    yield from descend([], max_weight, (max_weight, k + 1))


def _rows_by_shape(k: int, n_max: int) -> Dict[Tuple[int, int], List[Tuple[ColoredPart, ...]]]:
    shapes: Dict[Tuple[int, int], list] = defaultdict(list)
    for row in iter_rows(k, n_max):
        shapes[(len(row), sum(p.value for p in row))].append(row)
    return shapes


def _pair_shapes(shapes, n_max):
    for (m1, s1), top in shapes.items():
        for (m2, s2), bottom in shapes.items():
            if m1 == m2 and m1 + s1 + s2 <= n_max:
                yield top, bottom


def iter_arrays(k: int, n_max: int, cap: Optional[int] = None) -> Iterator[FrobeniusArray]:
    """Every k-colored F-partition of weight ``<= n_max``, each exactly once."""
    if k < 1 or n_max < 0:
        raise DomainError("need k >= 1 and n_max >= 0")
    cap = enumeration_cap() if cap is None else cap
    shapes = _rows_by_shape(k, n_max)
    total = sum(len(t) * len(b) for t, b in _pair_shapes(shapes, n_max))
    if total > cap:
        raise CapExceeded(f"{total} arrays exceed the enumeration cap {cap}")
    for top_rows, bottom_rows in _pair_shapes(shapes, n_max):
        for top in top_rows:
            for bottom in bottom_rows:
                yield FrobeniusArray(top, bottom)


def cphi_enumerate(k: int, n_max: int, cap: Optional[int] = None) -> CPhiSeries:
    """``cphi_k(0..n_max)`` by exhaustive generation."""
    counts = [0] * (n_max + 1)
    for arr in iter_arrays(k, n_max, cap):
        counts[arr.weight] += 1
    return CPhiSeries(k, counts, "enumeration")


# -- series routes ----------------------------------------------------------------


def cphi_product(k: int, n_terms: int) -> CPhiSeries:
    """Constant zeta-term of ``(-zeta q; q)^k (-zeta^-1; q)^k``."""
    if k < 1 or n_terms < 1:
        raise DomainError("need k >= 1 and n_terms >= 1")
    s = andrews_product(k, n_terms).coeff(0)
    return CPhiSeries(k, s.integer_coeffs(n_terms), "product")


def cphi_recursion(k: int, n_terms: int) -> CPhiSeries:
    """``h_{k/2,k/2} / (q;q)^k`` from the theta-decomposition tables."""
    if k < 1 or n_terms < 1:
        raise DomainError("need k >= 1 and n_terms >= 1")
    h = eval_theta_expr(h_table(k)[Fraction(k, 2)], n_terms)
    if not h.on_integer_lattice():
        raise LatticeError(f"h_{{{k}/2,{k}/2}} has fractional exponents: {h!r}")
    s = h / pochhammer(1, 1, n_terms) ** k
    if not s.on_integer_lattice():
        raise LatticeError(f"CPhi_{k} has fractional exponents")
    return CPhiSeries(k, s.integer_coeffs(n_terms), "recursion")


# -- catalog of closed forms -----------------------------------------------------------

Evaluator = Callable[[Fraction], QSeries]


@dataclass
class DisplayPiece:
    """One summand ``coeff * unit`` of a printed closed form."""

    label: str
    coeff: int
    unit: Evaluator


@dataclass
class CatalogEntry:
    k: int
    description: str
    pieces: List[DisplayPiece]
    # label of the piece -> (replacement piece, explanation)
    errata: Dict[str, Tuple[DisplayPiece, str]] = field(default_factory=dict)

    def evaluate(self, prec, corrected: bool = False) -> QSeries:
        prec = Fraction(prec)
        total = QSeries.zero(prec)
        for piece in self.pieces:
            if corrected and piece.label in self.errata:
                piece = self.errata[piece.label][0]
            total = total + piece.coeff * piece.unit(prec)
        return total


def _ratio(num: Sequence[Tuple[int, int, int]], den: Sequence[Tuple[int, int, int]], shift: int = 0) -> Evaluator:
    def ev(prec):
        p = prec - shift
        top = QSeries.one(p)
        for a, s, e in num:
            top = top * pochhammer(a, s, p) ** e
        bottom = QSeries.one(p)
        for a, s, e in den:
            bottom = bottom * pochhammer(a, s, p) ** e
        return (top / bottom).truncate(p).shift(shift)

    return ev


def _theta_over_qq(expr: ThetaExpr, k: int) -> Evaluator:
    def ev(prec):
        return eval_theta_expr(expr, prec) / pochhammer(1, 1, prec) ** k

    return ev


def _tpiece(coeff: int, expr: ThetaExpr, k: int) -> DisplayPiece:
    return DisplayPiece(str(expr), coeff, _theta_over_qq(expr, k))


def _build_catalog() -> Dict[int, CatalogEntry]:
    t = theta
    T10, T11 = t(1, 0), t(1, 1)
    cat: Dict[int, CatalogEntry] = {}

    cat[2] = CatalogEntry(
        2,
        "(q^2;q^4) / ((q;q^2)^4 (q^4;q^4))",
        [DisplayPiece("(q^2;q^4)/((q;q^2)^4(q^4;q^4))", 1, _ratio([(2, 4, 1)], [(1, 2, 4), (4, 4, 1)]))],
    )
    cat[3] = CatalogEntry(
        3,
        "two-term Pochhammer quotient",
        [
            DisplayPiece(
                "(q^12;q^12)(q^6;q^12)^3/((q;q^6)^5(q^5;q^6)^5(q^4;q^4)^2(q^3;q^6)^7)",
                1,
                _ratio([(12, 12, 1), (6, 12, 3)], [(1, 6, 5), (5, 6, 5), (4, 4, 2), (3, 6, 7)]),
            ),
            DisplayPiece(
                "q(q^12;q^12)(q^4;q^4)/((q^6;q^12)(q^2;q^4)(q;q)^3)",
                4,
                _ratio([(12, 12, 1), (4, 4, 1)], [(6, 12, 1), (2, 4, 1), (1, 1, 3)], shift=1),
            ),
        ],
    )

    # q^(1/4)/eta^6 == 1/(q;q)^6
    p6a = T11**2 * T10 * t(3, 1, 3) * t(2, 1)
    cat[6] = CatalogEntry(
        6,
        "theta quotient over eta^6",
        [
            _tpiece(6, p6a, 6),
            _tpiece(1, T10**3 * t(1, 1, 6) * t(1, 1, 2), 6),
            _tpiece(1, T10**3 * t(1, 0, 6) * t(1, 0, 2), 6),
        ],
        errata={
            str(p6a): (
                _tpiece(6, T11**2 * T10 * t(2, 1, 3) * t(2, 1), 6),
                "printed theta_{3,1}(3tau) must read theta_{2,1}(3tau) = theta_{6,3}",
            )
        },
    )

    cat[7] = CatalogEntry(
        7,
        "h_{7/2,7/2} / (q;q)^7",
        [
            _tpiece(
                6,
                T10 * T11 * t(2, 1)
                * (t(6, 3) * (T10 * t(21, 21) + T11 * t(21, 0)) + (T11 * t(21, 14) + T10 * t(21, 7)) * (t(6, 1) + t(6, 5))),
                7,
            ),
            _tpiece(1, (T10**3 * t(21, 0) + T11**3 * t(21, 21)) * (t(2, 0) * t(6, 0) + t(2, 2) * t(6, 6)), 7),
            _tpiece(2, (T10**3 * t(21, 14) + T11**3 * t(21, 7)) * (t(2, 0) * t(6, 4) + t(2, 2) * t(6, 2)), 7),
        ],
    )

    first = T11**2 * t(2, 0) + T10**2 * t(2, 2)
    third = T11**2 * t(2, 2) + T10**2 * t(2, 0)
    pieces8 = [
        _tpiece(1, T11**2 * t(12, 12) * t(6, 0) * first, 8),
        _tpiece(2, T10**2 * t(12, 8) * t(6, 2) * first, 8),
        _tpiece(2, T11**2 * t(12, 4) * t(6, 4) * first, 8),
        _tpiece(2, T10**2 * t(12, 0) * t(6, 6) * first, 8),
        _tpiece(
            4,
            T10**2 * T11**2 * t(2, 1) * ((t(12, 0) + t(12, 12)) * t(6, 3) + (t(12, 8) + t(12, 4)) * (t(6, 1) + t(6, 5))),
            8,
        ),
        _tpiece(1, T11**2 * t(12, 12) * t(6, 6) * third, 8),
        _tpiece(2, T10**2 * t(12, 8) * t(6, 4) * third, 8),
        _tpiece(2, T11**2 * t(12, 4) * t(6, 2) * third, 8),
        _tpiece(1, T10**2 * t(12, 0) * t(6, 0) * third, 8),
    ]
    bad = pieces8[3]
    cat[8] = CatalogEntry(
        8,
        "h_{4,4} / (q;q)^8",
        pieces8,
        errata={
            bad.label: (
                DisplayPiece(bad.label, 1, bad.unit),
                "printed coefficient 2 on theta_{1,0}^2 theta_{12,0} theta_{6,6} (theta_{1,1}^2 theta_{2,0} + theta_{1,0}^2 theta_{2,2}) must be 1",
            )
        },
    )
    return cat


CATALOG: Dict[int, CatalogEntry] = _build_catalog()


def catalog_formula(k: int, n_terms: int, corrected: bool = False) -> CPhiSeries:
    """Evaluate the printed closed form for ``k`` in ``{2, 3, 6, 7, 8}``.

    With ``corrected=True`` the documented errata are applied first.
    """
    if k not in CATALOG:
        raise DomainError(f"no closed form catalogued for k={k}; have {sorted(CATALOG)}")
    s = CATALOG[k].evaluate(n_terms, corrected)
    if not s.on_integer_lattice():
        bad = next(e for e, _ in s.items() if e.denominator != 1)
        raise LatticeError(f"closed form for k={k} has a term at q^{bad}; not a power series in q")
    return CPhiSeries(k, s.integer_coeffs(n_terms), "catalog")


def _fit_coefficients(entry: CatalogEntry, diff: QSeries, prec) -> List[dict]:
    """Pieces whose coefficient change alone would explain ``diff``."""
    fits = []
    for piece in entry.pieces:
        unit = piece.unit(prec)
        items = list(unit.items())
        if not items:
            continue
        e0, u0 = items[0]
        d0 = diff.coeff(e0)
        if d0 % u0:
            continue
        lam = d0 // u0
        if lam and (diff - lam * unit).truncate(prec).is_zero():
            fits.append({"term": piece.label, "printed": piece.coeff, "required": piece.coeff + lam})
    return fits


def verify_catalog(k: int, n_terms: int = 50, strict: bool = True) -> Report:
    """Compare the printed closed form against :func:`cphi_recursion`.

    Status is ``pass`` on agreement, ``erratum`` when the printed display
    disagrees but its documented correction agrees (the differing term is
    named in the report), and ``fail`` otherwise.
    """
    entry = CATALOG[k]
    prec = Fraction(n_terms)
    ref = QSeries.from_coeffs(cphi_recursion(k, n_terms).coeffs, prec)
    printed = entry.evaluate(prec)
    rep = Report(f"printed closed form for CPhi_{k} equals recursion", f"first {n_terms} coefficients")
    d = printed.first_difference(ref)
    if d is None:
        return rep
    rep.first_failure = {"q_exp": d[0], "printed": d[1], "recursion": d[2]}
    rep.details["coefficient_fits"] = _fit_coefficients(entry, (ref - printed).truncate(prec), prec)
    corrected = entry.evaluate(prec, corrected=True)
    if entry.errata and corrected.first_difference(ref) is None:
        rep.status = "erratum"
        rep.details["differing_display_terms"] = [
            {"term": label, "correction": why} for label, (_, why) in entry.errata.items()
        ]
    else:
        rep.status = "fail"
    return rep.raise_if_failed(strict)


# -- phi/psi identities -----------------------------------------------------------


def _phi(prec) -> QSeries:
    terms: Dict[int, int] = defaultdict(int)
    n = 0
    while n * n < prec:
        terms[n * n] += 1 if n == 0 else 2
        n += 1
    return QSeries.from_terms(terms, prec)


def _psi(prec, scale: int = 1) -> QSeries:
    """``psi(q^scale) = sum_{n>=0} q^(scale*n(n+1)/2)``."""
    terms = {}
    n = 0
    while scale * n * (n + 1) // 2 < prec:
        terms[scale * n * (n + 1) // 2] = 1
        n += 1
    return QSeries.from_terms(terms, prec)


def verify_bs_identities(qprec=60, strict: bool = True) -> List[Report]:
    """``phi(q) = theta_{1,0}``, ``2q^(1/4) psi(q^2) = theta_{1,1}`` and the psi-product identity.

    The product identity is checked as printed (with a single factor
    ``theta_{1,1}``) and with ``theta_{1,1}^2``; only the squared form holds.
    """
    p = Fraction(qprec)
    reports = []

    rep = Report("phi(q) = theta_{1,0}", f"q^{p}")
    d = _phi(p).first_difference(theta_series(1, 0, 1, p))
    if d:
        rep.status, rep.first_failure = "fail", {"q_exp": d[0], "left": d[1], "right": d[2]}
    reports.append(rep.raise_if_failed(strict))

    rep = Report("2 q^(1/4) psi(q^2) = theta_{1,1}", f"q^{p}")
    lhs = (2 * _psi(p, 2)).shift(Fraction(1, 4))
    d = lhs.first_difference(theta_series(1, 1, 1, p))
    if d:
        rep.status, rep.first_failure = "fail", {"q_exp": d[0], "left": d[1], "right": d[2]}
    reports.append(rep.raise_if_failed(strict))

    lhs = (4 * _psi(p) ** 3 * _psi(p, 2) * _psi(p, 3)).truncate(p - 1).shift(1)
    t = theta
    fixed = t(1, 1) ** 2 * t(1, 0) * t(2, 1) * t(2, 1, 3)
    rep = Report(f"4q psi(q)^3 psi(q^2) psi(q^3) = {fixed}", f"q^{p}")
    d = lhs.first_difference(eval_theta_expr(fixed, p))
    if d:
        rep.status, rep.first_failure = "fail", {"q_exp": d[0], "left": d[1], "right": d[2]}
    reports.append(rep.raise_if_failed(strict))
    fixed_ok = rep.passed

    printed = t(1, 1) * t(1, 0) * t(2, 1) * t(2, 1, 3)
    rep = Report(f"4q psi(q)^3 psi(q^2) psi(q^3) = {printed} (as printed)", f"q^{p}")
    d = lhs.first_difference(eval_theta_expr(printed, p))
    if d:
        rep.first_failure = {"q_exp": d[0], "left": d[1], "right": d[2]}
        rep.status = "erratum" if fixed_ok else "fail"
        rep.details["correction"] = "theta_{1,1} must appear squared"
    reports.append(rep.raise_if_failed(strict))
    return reports


# -- congruences -----------------------------------------------------------------


def cphi(k: int, n_terms: int, method: str = "product") -> CPhiSeries:
    """Dispatch to one of the routes by name."""
    if method == "product":
        return cphi_product(k, n_terms)
    if method == "recursion":
        return cphi_recursion(k, n_terms)
    if method in ("enumerate", "enumeration"):
        return cphi_enumerate(k, n_terms - 1)
    if method == "catalog":
        return catalog_formula(k, n_terms)
    raise ValueError(f"unknown method {method!r}")


def congruence_scan(
    k: int,
    modulus: int,
    residue_class: Tuple[int, int],
    n_max: int,
    coeffs: Optional[Sequence[int]] = None,
    strict: bool = False,
) -> Report:
    """Arguments ``n <= n_max`` with ``n = a*t + b`` and ``cphi_k(n) != 0 (mod modulus)``.

    An empty ``violations`` list means the congruence holds on the range.
    """
    a, b = residue_class
    if coeffs is None:
        coeffs = cphi_product(k, n_max + 1).coeffs
    if len(coeffs) <= n_max:
        raise ValueError(f"need {n_max + 1} coefficients, got {len(coeffs)}")
    ns = [n for n in range(n_max + 1) if n % a == b % a] if a else [b]
    bad = [n for n in ns if coeffs[n] % modulus]
    rep = Report(f"cphi_{k}({a}n+{b}) = 0 mod {modulus}", f"argument <= {n_max}")
    rep.details["checked"] = len(ns)
    rep.details["violations"] = bad
    if bad:
        rep.status = "fail"
        rep.first_failure = {"n": bad[0], "value": coeffs[bad[0]], "residue": coeffs[bad[0]] % modulus}
    return rep.raise_if_failed(strict)


def prime_square_congruence(p: int, n_max: int, strict: bool = False) -> Report:
    """``cphi_p(n) = 0 (mod p^2)`` for every ``n <= n_max`` not divisible by ``p``."""
    coeffs = cphi_product(p, n_max + 1).coeffs
    subs = [congruence_scan(p, p * p, (p, r), n_max, coeffs) for r in range(1, p)]
    bad = sorted(n for s in subs for n in s.details["violations"])
    rep = Report(f"cphi_{p}(n) = 0 mod {p * p} for {p} not dividing n", f"n <= {n_max}")
    rep.details["checked"] = sum(s.details["checked"] for s in subs)
    rep.details["violations"] = bad
    if bad:
        rep.status = "fail"
        rep.first_failure = {"n": bad[0], "value": coeffs[bad[0]]}
    return rep.raise_if_failed(strict)
