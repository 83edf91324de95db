"""Exact truncated q-series with rational exponents.

A :class:`QSeries` is a finite sum ``sum c_e q^e`` with integer coefficients
and exponents in ``(1/D)Z``, known modulo ``q^prec``.  Internally the series
is split by exponent residue modulo 1: every residue class ``r + Z`` holds a
dense list of coefficients on the integer lattice.  Theta nullwerte, eta
quotients and their products have very few residue classes, so this keeps
multiplication close to ordinary integer-polynomial multiplication while
the exponent lattice stays exact.

Precision is a :class:`fractions.Fraction` or ``math.inf`` for exact
(finite) series.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, Mapping, Tuple, Union

from .errors import DomainError, NonUnitLeading, ZeroFactor

INF = math.inf

ExpLike = Union[int, Fraction, str, float]

__all__ = [
    "INF",
    "QSeries",
    "as_exp",
    "qs_add",
    "qs_mul",
    "qs_inv",
    "qs_rescale",
    "pochhammer",
    "neg_pochhammer",
    "eta",
    "klein",
    "theta_series",
    "twisted_theta_series",
    "theta_product",
    "theta_normalize",
]


def as_exp(x: ExpLike) -> Union[Fraction, float]:
    """Coerce an exponent or precision to ``Fraction`` (``math.inf`` passes through)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        if math.isinf(x) and x > 0:
            return INF
        raise TypeError("float exponents are not exact; use Fraction or str")
    return Fraction(x)


def _ceil(x) -> int:
    return math.ceil(x)


def _conv(a, b, n: int) -> list:
    """First ``n`` coefficients of the product of integer lists ``a`` and ``b``."""
    out = [0] * n
    nzb = [(j, y) for j, y in enumerate(b) if y]
    if not nzb:
        return out
    for i, x in enumerate(a):
        if i >= n:
            break
        if not x:
            continue
        lim = n - i
        for j, y in nzb:
            if j >= lim:
                break
            out[i + j] += x * y
    return out


class QSeries:
    """Immutable truncated series in ``q`` with rational exponents.

    Construct with :meth:`from_terms` or the builders in this module rather
    than calling ``__init__`` directly.
    """

    __slots__ = ("_parts", "prec")

    def __init__(self, parts: Mapping[Fraction, Tuple[int, Tuple[int, ...]]], prec):
        # parts: residue in [0, 1) -> (start, coeffs); coeffs[i] multiplies q^(r + start + i)
        self._parts = dict(parts)
        self.prec = prec

    # -- construction -----------------------------------------------------

    @classmethod
    def from_terms(cls, terms: Union[Mapping, Iterable[Tuple]], prec: ExpLike = INF) -> "QSeries":
        """Build from ``{exponent: coefficient}`` (or pairs); terms at or above ``prec`` are dropped."""
        prec = as_exp(prec)
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: Dict[Fraction, Dict[int, int]] = {}
        for e, c in items:
            e = as_exp(e)
            if not c or e >= prec:
                continue
            k = math.floor(e)
            r = e - k
            slot = acc.setdefault(r, {})
            slot[k] = slot.get(k, 0) + int(c)
        parts = {}
        for r, slot in acc.items():
            slot = {k: v for k, v in slot.items() if v}
            if not slot:
                continue
            lo, hi = min(slot), max(slot)
            parts[r] = (lo, tuple(slot.get(k, 0) for k in range(lo, hi + 1)))
        return cls(parts, prec)

    @classmethod
    def zero(cls, prec: ExpLike = INF) -> "QSeries":
        return cls({}, as_exp(prec))

    @classmethod
    def one(cls, prec: ExpLike = INF) -> "QSeries":
        return cls.from_terms({0: 1}, prec)

    @classmethod
    def monomial(cls, exponent: ExpLike, coeff: int = 1, prec: ExpLike = INF) -> "QSeries":
        return cls.from_terms({as_exp(exponent): coeff}, prec)

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int], prec: ExpLike = None, den: int = 1, val: int = 0) -> "QSeries":
        """Dense constructor: ``coeffs[i]`` multiplies ``q^((val + i)/den)``.

        ``prec`` defaults to the exponent just past the last given coefficient.
        """
        coeffs = list(coeffs)
        if prec is None:
            prec = Fraction(val + len(coeffs), den)
        return cls.from_terms(((Fraction(val + i, den), c) for i, c in enumerate(coeffs)), prec)

    # -- inspection -------------------------------------------------------

    def items(self) -> Iterator[Tuple[Fraction, int]]:
        """Nonzero ``(exponent, coefficient)`` pairs in increasing exponent order."""
        out = []
        for r, (s, cs) in self._parts.items():
            for i, c in enumerate(cs):
                if c:
                    out.append((r + s + i, c))
        out.sort()
        return iter(out)

    def as_dict(self) -> Dict[Fraction, int]:
        return dict(self.items())

    def coeff(self, e: ExpLike) -> int:
        e = as_exp(e)
        if e >= self.prec:
            raise ValueError(f"coefficient of q^{e} is not known (precision {self.prec})")
        k = math.floor(e)
        part = self._parts.get(e - k)
        if part is None:
            return 0
        s, cs = part
        i = k - s
        return cs[i] if 0 <= i < len(cs) else 0

    __getitem__ = coeff

    def is_zero(self) -> bool:
        return not self._parts

    @property
    def valuation(self):
        """Lowest exponent with a nonzero coefficient; ``prec`` for the zero series."""
        if not self._parts:
            return self.prec
        return min(r + s for r, (s, _) in self._parts.items())

    @property
    def lattice_den(self) -> int:
        """Smallest ``D`` with every stored exponent in ``(1/D)Z``."""
        d = 1
        for r in self._parts:
            d = d * r.denominator // math.gcd(d, r.denominator)
        if isinstance(self.prec, Fraction):
            d = d * self.prec.denominator // math.gcd(d, self.prec.denominator)
        return d

    def dense(self, den: int = None) -> Tuple[int, list]:
        """``(val, coeffs)`` on the lattice ``(1/den)Z``; ``coeffs[i]`` multiplies ``q^((val+i)/den)``.

        For finite precision the list runs up to the precision; for exact
        series up to the last nonzero term.
        """
        if den is None:
            den = self.lattice_den
        terms = list(self.items())
        for e, _ in terms:
            if (e * den).denominator != 1:
                raise ValueError(f"exponent {e} not on lattice 1/{den}")
        if not terms:
            return 0, []
        val = int(terms[0][0] * den)
        if self.prec == INF:
            top = int(terms[-1][0] * den) + 1
        else:
            top = _ceil(self.prec * den)
        out = [0] * (top - val)
        for e, c in terms:
            out[int(e * den) - val] = c
        return val, out

    @property
    def val(self) -> int:
        return self.dense()[0]

    @property
    def coeffs(self) -> list:
        return self.dense()[1]

    def integer_coeffs(self, n: int = None) -> list:
        """Coefficients of ``q^0 .. q^(n-1)``; requires an integral, nonnegative exponent set."""
        if n is None:
            if self.prec == INF:
                raise ValueError("n required for exact series")
            n = _ceil(self.prec)
        if n > self.prec:
            raise ValueError(f"only known below q^{self.prec}")
        out = [0] * n
        for e, c in self.items():
            if e.denominator != 1 or e < 0:
                raise ValueError(f"non-integral or negative exponent {e}")
            if e < n:
                out[int(e)] = c
        return out

    def on_integer_lattice(self) -> bool:
        return all(r == 0 for r in self._parts)

    # -- truncation and comparison ---------------------------------------

    def truncate(self, prec: ExpLike) -> "QSeries":
        prec = as_exp(prec)
        if prec >= self.prec:
            return self
        return QSeries.from_terms(self.items(), prec)

    def __eq__(self, other):
        if isinstance(other, int):
            other = QSeries.from_terms({0: other})
        if not isinstance(other, QSeries):
            return NotImplemented
        p = min(self.prec, other.prec)
        return self.truncate(p).as_dict() == other.truncate(p).as_dict()

    __hash__ = None

    def first_difference(self, other: "QSeries"):
        """Lowest exponent where the two series differ below their common precision, or ``None``."""
        p = min(self.prec, other.prec)
        a = self.truncate(p).as_dict()
        b = other.truncate(p).as_dict()
        diff = sorted(e for e in set(a) | set(b) if a.get(e, 0) != b.get(e, 0))
        if not diff:
            return None
        e = diff[0]
        return e, a.get(e, 0), b.get(e, 0)

    # -- arithmetic -------------------------------------------------------

    def __neg__(self):
        return QSeries({r: (s, tuple(-c for c in cs)) for r, (s, cs) in self._parts.items()}, self.prec)

    def __add__(self, other):
        if isinstance(other, int):
            other = QSeries.from_terms({0: other})
        if not isinstance(other, QSeries):
            return NotImplemented
        return qs_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = QSeries.from_terms({0: other})
        if not isinstance(other, QSeries):
            return NotImplemented
        return qs_add(self, -other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return QSeries.zero(self.prec)
            return QSeries({r: (s, tuple(other * c for c in cs)) for r, (s, cs) in self._parts.items()}, self.prec)
        if not isinstance(other, QSeries):
            return NotImplemented
        return qs_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = QSeries.one(self.prec if self.prec == INF else self.prec - self.valuation)
        base = self
        first = True
        while n:
            if n & 1:
                result = base if first else result * base
                first = False
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, int):
            if other in (1, -1):
                return self * other
            raise NonUnitLeading(f"cannot divide integer series by {other}")
        if not isinstance(other, QSeries):
            return NotImplemented
        # a / b needs b^{-1} to precision a.prec - v(a) (relative) shifted by -v(b)
        need = self.prec
        if need != INF:
            need = need - self.valuation + other.valuation
        return self * other.inverse(need)

    def exact_div(self, n: int) -> "QSeries":
        """Divide every coefficient by ``n``; raises if any division is inexact."""
        parts = {}
        for r, (s, cs) in self._parts.items():
            if any(c % n for c in cs):
                raise ArithmeticError(f"coefficients not divisible by {n}")
            parts[r] = (s, tuple(c // n for c in cs))
        return QSeries(parts, self.prec)

    def shift(self, e: ExpLike) -> "QSeries":
        """Multiply by ``q^e``."""
        e = as_exp(e)
        k = math.floor(e)
        f = e - k
        parts = {}
        for r, (s, cs) in self._parts.items():
            t = r + f
            carry = math.floor(t)
            parts[t - carry] = (s + k + carry, cs)
        return QSeries(parts, self.prec + e)

    def rescale(self, k: int) -> "QSeries":
        """Substitute ``q -> q^k``."""
        return qs_rescale(self, k)

    def inverse(self, prec: ExpLike = None) -> "QSeries":
        return qs_inv(self, prec)

    # -- presentation -----------------------------------------------------

    def __repr__(self):
        terms = []
        for e, c in self.items():
            if len(terms) >= 12:
                terms.append("...")
                break
            if e == 0:
                terms.append(str(c))
            else:
                mono = "q" if e == 1 else f"q^({e})"
                terms.append(mono if c == 1 else f"-{mono}" if c == -1 else f"{c}*{mono}")
        body = " + ".join(terms).replace("+ -", "- ") or "0"
        if self.prec != INF:
            body += f" + O(q^({self.prec}))"
        return f"QSeries({body})"

    def to_dict(self) -> dict:
        den = self.lattice_den
        val, cs = self.dense(den)
        prec = None if self.prec == INF else str(self.prec)
        return {"lattice_den": den, "val": val, "prec": prec, "coeffs": [str(c) for c in cs]}

    @classmethod
    def from_dict(cls, d: Mapping) -> "QSeries":
        prec = INF if d.get("prec") is None else Fraction(d["prec"])
        den = int(d["lattice_den"])
        val = int(d["val"])
        return cls.from_terms(
            ((Fraction(val + i, den), int(c)) for i, c in enumerate(d["coeffs"])), prec
        )


def _accumulate(out: dict, r: Fraction, start: int, cs: list) -> None:
    if r not in out:
        out[r] = [start, list(cs)]
        return
    slot = out[r]
    s0, lst = slot
    if start < s0:
        lst[:0] = [0] * (s0 - start)
        s0 = slot[0] = start
    off = start - s0
    need = off + len(cs) - len(lst)
    if need > 0:
        lst.extend([0] * need)
    for i, c in enumerate(cs):
        lst[off + i] += c


def _finish(out: dict, prec) -> QSeries:
    parts = {}
    for r, (s, lst) in out.items():
        if prec != INF:
            keep = _ceil(prec - r - s)
            if keep < len(lst):
                lst = lst[: max(keep, 0)]
        lo = 0
        while lo < len(lst) and not lst[lo]:
            lo += 1
        hi = len(lst)
        while hi > lo and not lst[hi - 1]:
            hi -= 1
        if hi > lo:
            parts[r] = (s + lo, tuple(lst[lo:hi]))
    return QSeries(parts, prec)


def qs_add(a: QSeries, b: QSeries) -> QSeries:
    """Exact sum; the result is known below the smaller of the two precisions."""
    prec = min(a.prec, b.prec)
    out: dict = {}
    for src in (a, b):
        for r, (s, cs) in src._parts.items():
            _accumulate(out, r, s, cs)
    return _finish(out, prec)


def qs_mul(a: QSeries, b: QSeries) -> QSeries:
    """Truncated product with precision ``min(v(a) + prec(b), v(b) + prec(a))``."""
    prec = min(a.prec + b.valuation, b.prec + a.valuation)
    out: dict = {}
    for r1, (s1, c1) in a._parts.items():
        for r2, (s2, c2) in b._parts.items():
            t = r1 + r2
            carry = math.floor(t)
            r = t - carry
            start = s1 + s2 + carry
            n = len(c1) + len(c2) - 1
            if prec != INF:
                n = min(n, _ceil(prec - r - start))
            if n <= 0:
                continue
            if len(c1) < len(c2):
                c1_, c2_ = c2, c1
            else:
                c1_, c2_ = c1, c2
            _accumulate(out, r, start, _conv(c2_, c1_, n))
    return _finish(out, prec)


def qs_inv(a: QSeries, prec: ExpLike = None) -> QSeries:
    """Multiplicative inverse ``b`` with ``a*b = 1 + O(q^prec)`` and ``v(b) = -v(a)``.

    ``prec`` defaults to the best precision ``a`` supports; it is required
    when ``a`` is exact but not a monomial.
    """
    if a.is_zero():
        raise NonUnitLeading("zero series has no inverse")
    v = a.valuation
    lead = a.coeff(v)
    if lead not in (1, -1):
        raise NonUnitLeading(f"leading coefficient {lead} is not a unit")
    limit = a.prec - v  # a*b is known at most to prec(a) - v
    if prec is None:
        target = limit
    else:
        target = min(as_exp(prec), limit)
    terms = list(a.items())
    if target == INF:
        if len(terms) == 1:
            return QSeries.monomial(-v, lead)
        raise ValueError("precision required to invert an exact non-monomial series")
    bprec = target - v
    # work on the lattice shared by a's exponents, normalised to start at 0
    den = 1
    for e, _ in terms:
        den = den * e.denominator // math.gcd(den, e.denominator)
    n = _ceil((target - v) * den)  # coefficients of the unit part needed
    if n <= 0:
        return QSeries.zero(bprec)
    u = [0] * n
    for e, c in terms:
        i = (e - v) * den
        if i < n:
            u[int(i)] = c
    nz = [(i, c) for i, c in enumerate(u) if c and i]
    inv = [0] * n
    inv[0] = lead
    for m in range(1, n):
        acc = 0
        for i, c in nz:
            if i > m:
                break
            acc += c * inv[m - i]
        inv[m] = -lead * acc
    return QSeries.from_terms(((Fraction(i, den) - v, c) for i, c in enumerate(inv)), bprec)


def qs_rescale(s: QSeries, k: int) -> QSeries:
    """Substitute ``q -> q^k``; exponents and precision scale by ``k``."""
    if k < 1:
        raise DomainError("rescale factor must be a positive integer")
    if k == 1:
        return s
    return QSeries.from_terms(((e * k, c) for e, c in s.items()), s.prec * k)


# -- builders -------------------------------------------------------------


def _binomial_product(exponents: Iterable[Fraction], sign: int, prec) -> QSeries:
    result = QSeries.one(prec)
    for e in exponents:
        result = result * QSeries.from_terms({0: 1, e: sign}, prec)
    return result


def _exponents(a: Fraction, step: Fraction, prec) -> Iterator[Fraction]:
    e = a
    while e < prec:
        yield e
        e += step


@lru_cache(maxsize=None)
def _pochhammer(a: Fraction, step: Fraction, prec: Fraction, sign: int) -> QSeries:
    return _binomial_product(_exponents(a, step, prec), sign, prec)


def pochhammer(a: ExpLike, step: ExpLike, prec: ExpLike) -> QSeries:
    """``(q^a; q^step)_inf = prod_{n>=0} (1 - q^(a + n*step))`` modulo ``q^prec``."""
    a, step, prec = as_exp(a), as_exp(step), as_exp(prec)
    if a <= 0:
        raise ZeroFactor(f"(q^{a}; q^{step}) has a non-positive base exponent")
    if step <= 0:
        raise DomainError("step must be positive")
    return _pochhammer(a, step, prec, -1)


def neg_pochhammer(a: ExpLike, step: ExpLike, prec: ExpLike) -> QSeries:
    """``(-q^a; q^step)_inf = prod_{n>=0} (1 + q^(a + n*step))``; ``a = 0`` gives the factor 2."""
    a, step, prec = as_exp(a), as_exp(step), as_exp(prec)
    if a < 0:
        raise DomainError("base exponent must be nonnegative")
    if step <= 0:
        raise DomainError("step must be positive")
    if a == 0:
        return 2 * _pochhammer(step, step, prec, 1)
    return _pochhammer(a, step, prec, 1)


def eta(prec: ExpLike) -> QSeries:
    """Dedekind eta ``q^(1/24) (q;q)_inf`` modulo ``q^prec``."""
    prec = as_exp(prec)
    off = Fraction(1, 24)
    return pochhammer(1, 1, prec - off).shift(off)


def klein(a: ExpLike, prec: ExpLike) -> QSeries:
    """Klein form ``t_{a,0} = -q^(a^2/2 - a/2 + 1/12) (q^a;q)(q^(1-a);q) / (q;q)^2``, ``0 < a < 1``."""
    a, prec = as_exp(a), as_exp(prec)
    if not 0 < a < 1:
        raise DomainError(f"Klein form parameter {a} outside (0, 1)")
    off = a * a / 2 - a / 2 + Fraction(1, 12)
    p = prec - off
    num = pochhammer(a, 1, p) * pochhammer(1 - a, 1, p)
    den = pochhammer(1, 1, p) ** 2
    return -(num / den).truncate(p).shift(off)


def theta_normalize(m: int, a: int) -> int:
    """Representative ``a'`` in ``[0, m]`` with ``a = +-a' (mod 2m)``."""
    if m < 1:
        raise DomainError("theta index m must be positive")
    r = a % (2 * m)
    return 2 * m - r if r > m else r


def _theta_terms(m: Fraction, a: Fraction, scale: int, prec, sign: bool):
    # exponent scale*(2mn + a)^2/(4m) < prec  <=>  |2mn + a| < sqrt(4m*prec/scale)
    bound = 4 * m * prec / scale
    root = math.isqrt(_ceil(bound)) + 2
    lo = math.floor((-root - a) / (2 * m)) - 1
    hi = _ceil((root - a) / (2 * m)) + 1
    terms: Dict[Fraction, int] = {}
    for n in range(lo, hi + 1):
        x = 2 * m * n + a
        e = scale * x * x / (4 * m)
        if e < prec:
            c = -1 if (sign and n % 2) else 1
            terms[e] = terms.get(e, 0) + c
    return terms


@lru_cache(maxsize=None)
def _theta_cached(m: Fraction, a: Fraction, scale: int, prec, sign: bool) -> QSeries:
    return QSeries.from_terms(_theta_terms(m, a, scale, prec, sign), prec)


def theta_series(m, a, scale: int = 1, prec: ExpLike = 10) -> QSeries:
    """``theta_{m,a}(scale*tau) = sum_n q^(scale*(2mn + a)^2/(4m))`` modulo ``q^prec``."""
    m, a, prec = as_exp(m), as_exp(a), as_exp(prec)
    if m <= 0:
        raise DomainError("theta index m must be positive")
    if scale < 1:
        raise DomainError("scale must be a positive integer")
    return _theta_cached(m, a, int(scale), prec, False)


def twisted_theta_series(m, a, scale: int = 1, prec: ExpLike = 10) -> QSeries:
    """Alternating variant ``sum_n (-1)^n q^(scale*(2mn + a)^2/(4m))``."""
    m, a, prec = as_exp(m), as_exp(a), as_exp(prec)
    if m <= 0:
        raise DomainError("theta index m must be positive")
    return _theta_cached(m, a, int(scale), prec, True)


def theta_product(m: int, b: int, scale: int = 1, prec: ExpLike = 10) -> QSeries:
    """``theta_{m,b}(scale*tau)`` from the triple product, for ``0 <= b <= m``.

    ``q^(b^2/4m) (q^2m;q^2m)(-q^(m-b);q^2m)(-q^(m+b);q^2m)``; at ``b = m`` the
    factor ``(1 + q^0)`` contributes 2.
    """
    prec = as_exp(prec)
    if m < 1 or not 0 <= b <= m:
        raise DomainError(f"theta_product needs 0 <= b <= m, got m={m}, b={b}")
    off = Fraction(b * b, 4 * m)
    p = prec / scale - off
    body = (
        pochhammer(2 * m, 2 * m, p)
        * neg_pochhammer(m - b, 2 * m, p)
        * neg_pochhammer(m + b, 2 * m, p)
    )
    return body.shift(off).rescale(scale)
