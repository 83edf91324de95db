"""Two-variable expansions in ``zeta`` and ``q``.

A :class:`ZetaQSeries` maps half-integer powers of ``zeta`` to
:class:`~thetafrob.qseries.QSeries` coefficients, all known to a common
q-precision.  Exponents are stored as twice their value, so ``zeta^(1/2)``
lives under key ``1``.

Only finitely many zeta-powers survive a q-truncation for every object built
here (theta-type sums and the Andrews product have q-valuation growing
quadratically in the zeta exponent), so no separate zeta window is needed.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Dict, Iterator, Mapping, Tuple

from .errors import GridMismatch
from .qseries import INF, ExpLike, QSeries, as_exp, pochhammer

__all__ = [
    "ZetaQSeries",
    "jtheta_half",
    "jtheta_triple_product",
    "theta_component",
    "zq_mul",
    "zq_pow",
    "coeff_zeta",
    "andrews_product",
]


def _twice(r) -> int:
    t = Fraction(r) * 2
    if t.denominator != 1:
        raise ValueError(f"zeta exponent {r} is not a half-integer")
    return int(t)


class ZetaQSeries:
    """Finite Laurent polynomial in ``zeta^(1/2)`` with truncated q-series coefficients."""

    __slots__ = ("terms", "qprec")

    def __init__(self, terms: Mapping[int, QSeries], qprec):
        self.qprec = as_exp(qprec)
        kept = {}
        for t, s in terms.items():
            s = s.truncate(self.qprec)
            if s.prec < self.qprec:
                raise ValueError(f"coefficient of zeta^{Fraction(t, 2)} only known to q^{s.prec}")
            if not s.is_zero():
                kept[int(t)] = s
        self.terms: Dict[int, QSeries] = kept

    @classmethod
    def from_exponents(cls, terms: Mapping, qprec) -> "ZetaQSeries":
        """Build from ``{zeta_exponent: QSeries}`` with half-integer exponents."""
        return cls({_twice(r): s for r, s in terms.items()}, qprec)

    @classmethod
    def one(cls, qprec) -> "ZetaQSeries":
        return cls({0: QSeries.one(qprec)}, qprec)

    def coeff(self, r) -> QSeries:
        """Coefficient of ``zeta^r`` (zero to ``qprec`` when absent)."""
        t = _twice(r)
        return self.terms.get(t, QSeries.zero(self.qprec))

    def exponents(self) -> list:
        return [Fraction(t, 2) for t in sorted(self.terms)]

    def items(self) -> Iterator[Tuple[Fraction, QSeries]]:
        for t in sorted(self.terms):
            yield Fraction(t, 2), self.terms[t]

    @property
    def min_valuation(self):
        if not self.terms:
            return self.qprec
        return min(s.valuation for s in self.terms.values())

    def truncate(self, qprec) -> "ZetaQSeries":
        qprec = as_exp(qprec)
        if qprec >= self.qprec:
            return self
        return ZetaQSeries(self.terms, qprec)

    def __neg__(self):
        return ZetaQSeries({t: -s for t, s in self.terms.items()}, self.qprec)

    def __add__(self, other: "ZetaQSeries") -> "ZetaQSeries":
        if not isinstance(other, ZetaQSeries):
            return NotImplemented
        p = min(self.qprec, other.qprec)
        out = {}
        for t in set(self.terms) | set(other.terms):
            out[t] = self.coeff(Fraction(t, 2)).truncate(p) + other.coeff(Fraction(t, 2)).truncate(p)
        return ZetaQSeries(out, p)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, ZetaQSeries):
            return zq_mul(self, other)
        if isinstance(other, (int, QSeries)):
            return ZetaQSeries({t: s * other for t, s in self.terms.items()}, self.qprec)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return zq_pow(self, k)

    def shift(self, zeta_exp=0, q_exp=0) -> "ZetaQSeries":
        """Multiply by ``zeta^zeta_exp * q^q_exp``."""
        dz = _twice(zeta_exp)
        q_exp = as_exp(q_exp)
        return ZetaQSeries({t + dz: s.shift(q_exp) for t, s in self.terms.items()}, self.qprec + q_exp)

    def first_difference(self, other: "ZetaQSeries"):
        """``(zeta_exp, q_exp, left, right)`` of the first mismatch below the common precision."""
        p = min(self.qprec, other.qprec)
        for t in sorted(set(self.terms) | set(other.terms)):
            r = Fraction(t, 2)
            d = self.coeff(r).truncate(p).first_difference(other.coeff(r).truncate(p))
            if d is not None:
                return (r,) + d
        return None

    def __eq__(self, other):
        if not isinstance(other, ZetaQSeries):
            return NotImplemented
        return self.first_difference(other) is None

    __hash__ = None

    def __repr__(self):
        inner = ", ".join(f"{r}: {s!r}" for r, s in self.items())
        return f"ZetaQSeries({{{inner}}}, qprec={self.qprec})"

    def to_dict(self) -> dict:
        return {
            "qprec": None if self.qprec == INF else str(self.qprec),
            "terms": [{"zeta_num_over_2": t, "qseries": self.terms[t].to_dict()} for t in sorted(self.terms)],
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "ZetaQSeries":
        qprec = INF if d.get("qprec") is None else Fraction(d["qprec"])
        return cls({int(e["zeta_num_over_2"]): QSeries.from_dict(e["qseries"]) for e in d["terms"]}, qprec)


def zq_mul(a: ZetaQSeries, b: ZetaQSeries) -> ZetaQSeries:
    """Convolution in zeta with truncated q-series products."""
    p = min(a.qprec + b.min_valuation, b.qprec + a.min_valuation)
    out: Dict[int, QSeries] = {}
    for t1, f in a.terms.items():
        for t2, g in b.terms.items():
            if f.valuation + g.valuation >= p:
                continue
            prod = (f * g).truncate(p)
            t = t1 + t2
            out[t] = out[t] + prod if t in out else prod
    return ZetaQSeries(out, p)


def zq_pow(f: ZetaQSeries, k: int) -> ZetaQSeries:
    """``f**k`` by binary powering, ``k >= 1``."""
    if k < 1:
        raise ValueError("power must be a positive integer")
    result = None
    base = f
    while k:
        if k & 1:
            result = base if result is None else result * base
        k >>= 1
        if k:
            base = base * base
    return result


def coeff_zeta(f: ZetaQSeries, r) -> QSeries:
    return f.coeff(r)


def jtheta_half(qprec: ExpLike) -> ZetaQSeries:
    """``-theta(z + 1/2; tau) = sum_n q^((n+1/2)^2/2) zeta^(n+1/2)`` to ``q^qprec``."""
    qprec = as_exp(qprec)
    terms = {}
    n = 0
    while Fraction((2 * n + 1) ** 2, 8) < qprec:
        e = Fraction((2 * n + 1) ** 2, 8)
        terms[2 * n + 1] = QSeries.monomial(e, 1, qprec)
        terms[-(2 * n + 1)] = QSeries.monomial(e, 1, qprec)
        n += 1
    return ZetaQSeries(terms, qprec)


def _times_binomial(terms: Dict[int, QSeries], dz: int, qexp: Fraction, qprec, coeffs=(1,)) -> Dict[int, QSeries]:
    # multiply by sum_i coeffs[i-1] * zeta^(i*dz/2) q^(i*qexp), plus 1
    out = dict(terms)
    for i, c in enumerate(coeffs, start=1):
        e = i * qexp
        if e >= qprec:
            break
        for t, s in terms.items():
            if s.valuation + e >= qprec:
                continue
            piece = (c * s.shift(e)).truncate(qprec)
            key = t + i * dz
            out[key] = out[key] + piece if key in out else piece
    return out


def jtheta_triple_product(qprec: ExpLike) -> ZetaQSeries:
    """``-theta(z + 1/2; tau)`` from the product side of the triple product.

    ``q^(1/8) zeta^(1/2) (q;q) prod_{n>=1} (1 + zeta q^n)(1 + zeta^-1 q^(n-1))``.
    """
    qprec = as_exp(qprec)
    off = Fraction(1, 8)
    p = qprec - off
    if p <= 0:
        return ZetaQSeries({}, qprec)
    terms = {0: pochhammer(1, 1, p)}
    n = 1
    while n - 1 < p:
        terms = _times_binomial(terms, -2, Fraction(n - 1), p)
        if n < p:
            terms = _times_binomial(terms, 2, Fraction(n), p)
        n += 1
    return ZetaQSeries(terms, p).shift(Fraction(1, 2), off)


def theta_component(m, a, qprec: ExpLike) -> ZetaQSeries:
    """``vartheta_{m,a}(z; tau) = sum_n q^((2mn + a)^2/(4m)) zeta^(2mn + a)``.

    ``m`` and ``a`` may be half-integers; ``a`` must lie on ``m``'s grid
    (both integral, or ``a`` half-integral with ``2m`` odd).
    """
    m, a, qprec = Fraction(m), Fraction(a), as_exp(qprec)
    if (2 * m).denominator != 1 or (2 * a).denominator != 1 or m <= 0:
        raise GridMismatch(f"vartheta_{{{m},{a}}}: indices must be positive half-integers")
    if m.denominator == 1 and a.denominator != 1:
        raise GridMismatch(f"vartheta_{{{m},{a}}}: integral index with half-integral residue")
    terms = {}
    bound = 4 * m * qprec
    n = 0
    for sgn in (1, -1):
        n = 0 if sgn == 1 else -1
        while True:
            x = 2 * m * n + a
            e = x * x / (4 * m)
            if e >= qprec and x * sgn > 0:
                break
            if x * x < bound:
                terms[_twice(x)] = QSeries.monomial(e, 1, qprec)
            n += sgn
    return ZetaQSeries(terms, qprec)


def andrews_product(k: int, qprec: ExpLike) -> ZetaQSeries:
    """``(-zeta q; q)_inf^k (-zeta^-1; q)_inf^k`` truncated at ``q^qprec``."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    qprec = as_exp(qprec)
    binom = tuple(comb(k, i) for i in range(1, k + 1))
    terms = {0: QSeries.one(qprec)}
    terms = _times_binomial(terms, -2, Fraction(0), qprec, binom)
    n = 1
    while n < qprec:
        terms = _times_binomial(terms, 2, Fraction(n), qprec, binom)
        terms = _times_binomial(terms, -2, Fraction(n), qprec, binom)
        n += 1
    return ZetaQSeries(terms, qprec)
