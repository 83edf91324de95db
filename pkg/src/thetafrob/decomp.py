"""Theta decompositions of powers of the Jacobi theta function.

For ``P_k = (-theta(z + 1/2; tau))^k`` and ``l = k/2`` we build symbolic
coefficients ``h_{l,b}`` with ``P_k = sum_b h_{l,b} vartheta_{l,b}``.  The
coefficients are sums of products of theta nullwerte ``theta_{m,a}``,
represented by :class:`ThetaExpr`, and are produced level by level from the
level-1 table ``h_{1,j} = theta_{1,j+1}``.

The recursion printed for residues ``l < b <= 2l`` reads
``h_{l,b} := h_{2l,2l-b}``; the level-preserving rule ``h_{l,b} = h_{l,2l-b}``
is the one that makes the decomposition hold, and is the one used here.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

from .errors import DomainError
from .jacobi import ZetaQSeries, jtheta_half, theta_component, zq_pow
from .qseries import ExpLike, QSeries, as_exp, pochhammer, theta_normalize, theta_series
from .report import Report

__all__ = [
    "ThetaSymbol",
    "ThetaExpr",
    "HTable",
    "theta",
    "h_base",
    "h_half_base",
    "h_step_even",
    "h_step_odd",
    "h_step_half_to_int",
    "h_table",
    "eval_theta_expr",
    "apply_rewrites",
    "LEMMA42_RULES",
    "verify_decomposition",
    "verify_lemma_theta2",
    "verify_lemma_onemore",
    "verify_lemma_theta1eps",
    "verify_lemma42",
    "verify_routes",
    "verify_symmetry",
    "render_products",
    "parse_products",
    "evaluate_rendered",
]


# -- symbolic theta expressions --------------------------------------------


@dataclass(frozen=True, order=True)
class ThetaSymbol:
    """``theta_{m,a}(scale * tau)`` with ``0 <= a <= m``."""

    m: int
    a: int
    scale: int = 1

    def __post_init__(self):
        if self.m < 1 or self.scale < 1:
            raise DomainError(f"bad theta symbol m={self.m}, scale={self.scale}")
        object.__setattr__(self, "a", theta_normalize(self.m, self.a))

    def canonical(self) -> "ThetaSymbol":
        """Same function at scale 1: ``theta_{m,a}(k tau) = theta_{km,ka}(tau)``."""
        if self.scale == 1:
            return self
        return ThetaSymbol(self.m * self.scale, self.a * self.scale)

    def evaluate(self, prec: ExpLike) -> QSeries:
        return theta_series(self.m, self.a, self.scale, prec)

    def __str__(self):
        s = f"θ[{self.m},{self.a}]"
        return s if self.scale == 1 else f"{s}({self.scale}τ)"


Monomial = Tuple[ThetaSymbol, ...]


class ThetaExpr:
    """Integer linear combination of products of theta nullwerte.

    Atoms are canonicalised to scale 1 and sorted by ``(m, a)``; identical
    products are merged and zero coefficients dropped, so ``==`` compares
    canonical forms.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, int] = None):
        merged: Dict[Monomial, int] = {}
        for atoms, c in (terms or {}).items():
            key = tuple(sorted(a.canonical() for a in atoms))
            merged[key] = merged.get(key, 0) + c
        self.terms = {k: v for k, v in merged.items() if v}

    @classmethod
    def atom(cls, m: int, a: int, scale: int = 1) -> "ThetaExpr":
        return cls({(ThetaSymbol(m, a, scale),): 1})

    @classmethod
    def const(cls, c: int) -> "ThetaExpr":
        return cls({(): c})

    def __add__(self, other):
        if isinstance(other, int):
            other = ThetaExpr.const(other)
        if not isinstance(other, ThetaExpr):
            return NotImplemented
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return ThetaExpr(out)

    __radd__ = __add__

    def __neg__(self):
        return ThetaExpr({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return ThetaExpr({k: v * other for k, v in self.terms.items()})
        if not isinstance(other, ThetaExpr):
            return NotImplemented
        out: Dict[Monomial, int] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                key = tuple(sorted(k1 + k2))
                out[key] = out.get(key, 0) + v1 * v2
        return ThetaExpr(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = ThetaExpr.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = ThetaExpr.const(other)
        if not isinstance(other, ThetaExpr):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __len__(self):
        return len(self.terms)

    def items(self) -> Iterator[Tuple[Monomial, int]]:
        """Terms in canonical order."""
        return iter(sorted(self.terms.items()))

    def atoms(self) -> set:
        return {a for k in self.terms for a in k}

    def evaluate(self, prec: ExpLike) -> QSeries:
        return eval_theta_expr(self, prec)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for atoms, c in self.items():
            body = "*".join(_power_str(atoms))
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"ThetaExpr({self})"

    def to_dict(self) -> dict:
        return {
            "terms": [
                {"coeff": c, "atoms": [{"m": a.m, "a": a.a, "scale": a.scale} for a in atoms]}
                for atoms, c in self.items()
            ]
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "ThetaExpr":
        terms: Dict[Monomial, int] = {}
        for t in d["terms"]:
            atoms = tuple(ThetaSymbol(x["m"], x["a"], x.get("scale", 1)) for x in t["atoms"])
            terms[atoms] = terms.get(atoms, 0) + int(t["coeff"])
        return cls(terms)


def _power_str(atoms: Monomial) -> List[str]:
    out = []
    i = 0
    while i < len(atoms):
        j = i
        while j < len(atoms) and atoms[j] == atoms[i]:
            j += 1
        n = j - i
        out.append(str(atoms[i]) if n == 1 else f"{atoms[i]}^{n}")
        i = j
    return out


def theta(m: int, a: int, scale: int = 1) -> ThetaExpr:
    """Shorthand for the single-atom expression ``theta_{m,a}(scale tau)``."""
    return ThetaExpr.atom(m, a, scale)


def eval_theta_expr(e: ThetaExpr, prec: ExpLike) -> QSeries:
    """Evaluate by substituting theta series; every atom has valuation >= 0."""
    prec = as_exp(prec)
    total = QSeries.zero(prec)
    for atoms, c in e.items():
        term = QSeries.from_terms({0: c}, prec)
        for a in atoms:
            if term.is_zero():
                break
            term = (term * a.evaluate(prec)).truncate(prec)
        total = total + term
    return total


# -- rewrite rules ----------------------------------------------------------

# (lhs_a, lhs_b, rhs): lhs_a + lhs_b == rhs as theta identities
LEMMA42_RULES = (
    (theta(2, 2) * theta(6, 0), theta(2, 0) * theta(6, 6), 2 * theta(2, 1) * theta(6, 3)),
    (theta(2, 2) * theta(6, 4), theta(2, 0) * theta(6, 2), theta(2, 1) * (theta(6, 1) + theta(6, 5))),
)


def _single(e: ThetaExpr) -> Monomial:
    ((atoms, c),) = e.terms.items()
    assert c == 1
    return atoms


def _remove(atoms: Monomial, sub: Monomial) -> Optional[Monomial]:
    rest = list(atoms)
    for a in sub:
        if a not in rest:
            return None
        rest.remove(a)
    return tuple(rest)


def apply_rewrites(e: ThetaExpr, rules=LEMMA42_RULES) -> ThetaExpr:
    """Replace ``c*T*A + c*T*B`` by ``c*T*R`` for every rule ``A + B = R``.

    Only the common part of matching coefficients (same sign) is rewritten.
    Nothing here runs automatically during the recursion.
    """
    terms = dict(e.terms)
    for lhs_a, lhs_b, rhs in rules:
        ma, mb = _single(lhs_a), _single(lhs_b)
        changed = True
        while changed:
            changed = False
            for atoms, c in sorted(terms.items()):
                rest = _remove(atoms, ma)
                if rest is None:
                    continue
                partner = tuple(sorted(rest + mb))
                d = terms.get(partner, 0)
                if not d or (c > 0) != (d > 0):
                    continue
                x = min(c, d) if c > 0 else max(c, d)
                new = ThetaExpr({atoms: -x, partner: -x}) + ThetaExpr({rest: x}) * rhs
                for k, v in new.terms.items():
                    terms[k] = terms.get(k, 0) + v
                terms = {k: v for k, v in terms.items() if v}
                changed = True
                break
    return ThetaExpr(terms)


# -- tables ------------------------------------------------------------------


class HTable:
    """The coefficients ``h_{l,c}`` at one level ``l`` (integer or half-integer)."""

    def __init__(self, level, entries: Mapping):
        self.level = Fraction(level)
        self.entries: Dict[Fraction, ThetaExpr] = {Fraction(c): e for c, e in entries.items()}

    @property
    def modulus(self) -> Fraction:
        return 2 * self.level

    def residues(self) -> List[Fraction]:
        return sorted(self.entries)

    def reduce(self, c) -> Fraction:
        c = Fraction(c) % self.modulus
        if c not in self.entries:
            raise KeyError(f"residue {c} not on the grid of level {self.level}")
        return c

    def __getitem__(self, c) -> ThetaExpr:
        return self.entries[self.reduce(c)]

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        if not isinstance(other, HTable):
            return NotImplemented
        return self.level == other.level and self.entries == other.entries

    __hash__ = None

    def evaluate(self, prec: ExpLike) -> Dict[Fraction, QSeries]:
        return {c: eval_theta_expr(e, prec) for c, e in sorted(self.entries.items())}

    def to_dict(self) -> dict:
        return {
            "level": str(self.level),
            "entries": [{"residue": str(c), "expr": self.entries[c].to_dict()} for c in self.residues()],
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "HTable":
        return cls(Fraction(d["level"]), {Fraction(x["residue"]): ThetaExpr.from_dict(x["expr"]) for x in d["entries"]})

    def __repr__(self):
        return f"HTable(level={self.level}, residues={len(self.entries)})"


def _h1(j: int) -> ThetaExpr:
    return theta(1, j + 1)


def h_base() -> HTable:
    """Level 1: ``h_{1,j} = theta_{1,j+1}``."""
    return HTable(1, {0: _h1(0), 1: _h1(1)})


def h_half_base() -> HTable:
    """Level 1/2: the single entry ``h_{1/2,1/2} = 1`` (so that ``P_1 = vartheta_{1/2,1/2}``)."""
    return HTable(Fraction(1, 2), {Fraction(1, 2): ThetaExpr.const(1)})


def _integer_level(t: HTable) -> int:
    if t.level.denominator != 1:
        raise DomainError(f"expected an integer-level table, got level {t.level}")
    return int(t.level)


def h_step_even(t: HTable, form: str = "grouped") -> HTable:
    """Level ``l`` -> ``l + 1``.

    ``form="grouped"`` pairs the residues ``c`` and ``2l - c`` and fills
    ``b > l + 1`` by symmetry; ``form="ungrouped"`` sums over every residue
    mod ``2l`` and computes every ``b`` directly.
    """
    l = _integer_level(t)
    L = l * (l + 1)
    entries = {}
    if form == "ungrouped":
        for b in range(2 * l + 2):
            acc = ThetaExpr()
            for c in range(2 * l):
                acc = acc + _h1(b - c) * theta(L, b * l - c * (l + 1)) * t[c]
            entries[b] = acc
    elif form == "grouped":
        for b in range(l + 2):
            acc = _h1(b) * theta(L, b * l) * t[0] + _h1(b - l) * theta(L, b * l - L) * t[l]
            for c in range(1, l):
                acc = acc + _h1(b - c) * (theta(L, b * l - c * (l + 1)) + theta(L, b * l + c * (l + 1))) * t[c]
            entries[b] = acc
        for b in range(l + 2, 2 * l + 2):
            entries[b] = entries[2 * l + 2 - b]
    else:
        raise ValueError(f"unknown form {form!r}")
    return HTable(l + 1, entries)


def h_step_odd(t: HTable) -> HTable:
    """Integer level ``l`` -> ``l + 1/2``; residues ``b + 1/2`` for ``b = 0..2l``."""
    l = _integer_level(t)
    M = l * (2 * l + 1)
    entries = {}
    for b in range(2 * l + 1):
        acc = ThetaExpr()
        for c in range(2 * l):
            acc = acc + t[c] * theta(M, c * (2 * l + 1) - l * (2 * b + 1))
        entries[Fraction(2 * b + 1, 2)] = acc
    return HTable(Fraction(2 * l + 1, 2), entries)


def h_step_half_to_int(t: HTable) -> HTable:
    """Half-integer level ``l + 1/2`` -> ``l + 1``."""
    if t.level.denominator != 2:
        raise DomainError(f"expected a half-integer level, got {t.level}")
    l = int(t.level - Fraction(1, 2))
    M = (2 * l + 1) * (l + 1)
    entries = {}
    for b in range(2 * l + 2):
        acc = ThetaExpr()
        for c in range(2 * l + 1):
            acc = acc + t[Fraction(2 * c + 1, 2)] * theta(M, (2 * c + 1) * (l + 1) - (2 * l + 1) * b)
        entries[b] = acc
    return HTable(l + 1, entries)


@lru_cache(maxsize=None)
def _h_table(k: int) -> HTable:
    if k == 1:
        return h_half_base()
    if k == 2:
        return h_base()
    if k % 2:
        return h_step_odd(_h_table(k - 1))
    return h_step_even(_h_table(k - 2))


def h_table(k: int) -> HTable:
    """Table at level ``k/2`` for ``P_k = (-theta(z + 1/2))^k``."""
    if k < 1:
        raise DomainError("k must be a positive integer")
    t = _h_table(k)
    return HTable(t.level, dict(t.entries))


# -- verification ------------------------------------------------------------


def _compare(claim: str, rng: str, left: ZetaQSeries, right: ZetaQSeries, strict: bool) -> Report:
    diff = left.first_difference(right)
    rep = Report(claim, rng)
    if diff is not None:
        r, e, a, b = diff
        rep.status = "fail"
        rep.first_failure = {"zeta_exp": r, "q_exp": e, "left": a, "right": b}
    return rep.raise_if_failed(strict)


def decomposition_rhs(table: HTable, qprec: ExpLike) -> ZetaQSeries:
    qprec = as_exp(qprec)
    total = ZetaQSeries({}, qprec)
    for c, e in sorted(table.entries.items()):
        h = eval_theta_expr(e, qprec)
        total = total + theta_component(table.level, c, qprec) * h
    return total


def verify_decomposition(k: int, qprec: ExpLike = 10, table: HTable = None, strict: bool = True) -> Report:
    """``(-theta(z+1/2))^k == sum_b h_{k/2,b} vartheta_{k/2,b}`` coefficientwise below ``q^qprec``."""
    qprec = as_exp(qprec)
    left = zq_pow(jtheta_half(qprec), k)
    right = decomposition_rhs(table or h_table(k), qprec)
    return _compare(f"theta decomposition of P_{k}", f"q^{qprec}", left, right, strict)


def verify_lemma_theta2(qprec: ExpLike = 12, strict: bool = True) -> Report:
    """``theta(z+1/2)^2 = theta_{1,1} vartheta_{1,0} + theta_{1,0} vartheta_{1,1}``."""
    qprec = as_exp(qprec)
    j = jtheta_half(qprec)
    left = j * j
    right = theta_component(1, 0, qprec) * theta_series(1, 1, 1, qprec) + theta_component(1, 1, qprec) * theta_series(
        1, 0, 1, qprec
    )
    return _compare("square of theta(z+1/2)", f"q^{qprec}", left, right, strict)


def verify_lemma_onemore(l: int, c: int, qprec: ExpLike = 12, strict: bool = True) -> Report:
    """``-theta(z+1/2) vartheta_{l,c} = sum_a theta_{l(2l+1), c-2la-l} vartheta_{l+1/2, a+c+1/2}``."""
    if not l > c >= 0:
        raise DomainError("need l > c >= 0")
    qprec = as_exp(qprec)
    left = jtheta_half(qprec) * theta_component(l, c, qprec)
    right = ZetaQSeries({}, qprec)
    M = l * (2 * l + 1)
    half = Fraction(1, 2)
    for a in range(2 * l + 1):
        nul = theta_series(M, c - 2 * l * a - l, 1, qprec)
        right = right + theta_component(l + half, a + c + half, qprec) * nul
    return _compare(f"theta(z+1/2) times vartheta_{{{l},{c}}}", f"q^{qprec}", left, right, strict)


def verify_lemma_theta1eps(eps: int, l: int, c: int, qprec: ExpLike = 12, strict: bool = True) -> Report:
    """``vartheta_{1,eps} vartheta_{l,c} = sum_a theta_{l(l+1),(2a+eps)l-c} vartheta_{l+1, 2a+c+eps}``."""
    if eps not in (0, 1) or not l > c >= 0:
        raise DomainError("need eps in {0,1} and l > c >= 0")
    qprec = as_exp(qprec)
    left = theta_component(1, eps, qprec) * theta_component(l, c, qprec)
    right = ZetaQSeries({}, qprec)
    for a in range(l + 1):
        nul = theta_series(l * (l + 1), (2 * a + eps) * l - c, 1, qprec)
        right = right + theta_component(l + 1, 2 * a + c + eps, qprec) * nul
    return _compare(f"vartheta_{{1,{eps}}} times vartheta_{{{l},{c}}}", f"q^{qprec}", left, right, strict)


def verify_lemma42(qprec: ExpLike = 50, strict: bool = True) -> List[Report]:
    """Both two-term theta identities among levels 2 and 6."""
    qprec = as_exp(qprec)
    out = []
    for name, (a, b, rhs) in zip(("A", "B"), LEMMA42_RULES):
        left = eval_theta_expr(a + b, qprec)
        right = eval_theta_expr(rhs, qprec)
        d = left.first_difference(right)
        rep = Report(f"level 2/6 theta identity {name}: {a + b} = {rhs}", f"q^{qprec}")
        if d is not None:
            rep.status = "fail"
            rep.first_failure = {"q_exp": d[0], "left": d[1], "right": d[2]}
        out.append(rep.raise_if_failed(strict))
    return out


def verify_routes(level: int, qprec: ExpLike = 12, strict: bool = True) -> Report:
    """Integer level reached via ``l-1 -> l-1/2 -> l`` equals the direct even step."""
    direct = h_table(2 * level)
    via_half = h_step_half_to_int(h_table(2 * level - 1))
    rep = Report(f"half-integer route to level {level}", f"q^{qprec}")
    for c in direct.residues():
        a = eval_theta_expr(direct[c], qprec)
        b = eval_theta_expr(via_half[c], qprec)
        d = a.first_difference(b)
        if d is not None:
            rep.status = "fail"
            rep.first_failure = {"residue": c, "q_exp": d[0], "left": d[1], "right": d[2]}
            break
    return rep.raise_if_failed(strict)


def verify_symmetry(table: HTable, qprec: ExpLike = 12, strict: bool = True) -> Report:
    """``h_{l,c} == h_{l,2l-c}`` as evaluated series for every residue."""
    rep = Report(f"symmetry of level {table.level}", f"q^{qprec}")
    for c in table.residues():
        a = eval_theta_expr(table[c], qprec)
        b = eval_theta_expr(table[table.modulus - c], qprec)
        d = a.first_difference(b)
        if d is not None:
            rep.status = "fail"
            rep.first_failure = {"residue": c, "q_exp": d[0], "left": d[1], "right": d[2]}
            break
    return rep.raise_if_failed(strict)


# -- product rendering -------------------------------------------------------

# Every atom becomes (coefficient, q-power, {(a, step): exponent}) with
# (q^a; q^step)_inf factors.  theta_{m,0} and theta_{m,m} are the eta quotients
# of theta_{1,0} and theta_{1,1} at m*tau; for 0 < a < m the triple product
# (q^2m;q^2m)(-q^(m-a);q^2m)(-q^(m+a);q^2m) is rewritten with
# (-x; Q) = (x^2; Q^2) / (x; Q).


def atom_product(sym: ThetaSymbol) -> Tuple[int, Fraction, Dict[Tuple[int, int], int]]:
    s = sym.canonical()
    m, a = s.m, s.a
    if a == 0:
        return 1, Fraction(0), {(2 * m, 2 * m): 5, (m, m): -2, (4 * m, 4 * m): -2}
    if a == m:
        return 2, Fraction(m, 4), {(4 * m, 4 * m): 2, (2 * m, 2 * m): -1}
    factors = {
        (2 * m, 2 * m): 1,
        (2 * m - 2 * a, 4 * m): 1,
        (2 * m + 2 * a, 4 * m): 1,
        (m - a, 2 * m): -1,
        (m + a, 2 * m): -1,
    }
    return 1, Fraction(a * a, 4 * m), factors


def _qpow_str(e: Fraction) -> str:
    return f"q^{{{e.numerator}}}" if e.denominator == 1 else f"q^{{{e.numerator}/{e.denominator}}}"


def _factor_str(a: int, step: int, e: int) -> str:
    base = "q" if a == 1 else f"q^{a}"
    mod = "q" if step == 1 else f"q^{step}"
    s = f"({base};{mod})"
    return s if e == 1 else f"{s}^{e}"


def _render_term(coeff: int, qpow: Fraction, factors: Mapping[Tuple[int, int], int]) -> str:
    num = [_factor_str(a, s, e) for (a, s), e in sorted(factors.items(), key=lambda x: (x[0][1], x[0][0])) if e > 0]
    den = [_factor_str(a, s, -e) for (a, s), e in sorted(factors.items(), key=lambda x: (x[0][1], x[0][0])) if e < 0]
    parts = [str(abs(coeff))]
    if qpow:
        parts.append(_qpow_str(qpow))
    parts.append(" ".join(num) if num else "1")
    body = " ".join(parts)
    if den:
        body += " / (" + " ".join(den) + ")"
    return body


def render_products(e: ThetaExpr, extra: Mapping[Tuple[int, int], int] = None) -> str:
    """Sum of q-power times Pochhammer-quotient terms equal to ``e``.

    ``extra`` adds the same Pochhammer factors to every term, e.g.
    ``{(1, 1): -k}`` divides by ``(q;q)^k``.
    """
    lines = []
    for atoms, c in e.items():
        coeff, qpow = c, Fraction(0)
        factors: Dict[Tuple[int, int], int] = dict(extra or {})
        for sym in atoms:
            ac, aq, af = atom_product(sym)
            coeff *= ac
            qpow += aq
            for key, x in af.items():
                factors[key] = factors.get(key, 0) + x
        factors = {k: v for k, v in factors.items() if v}
        lines.append(("-" if coeff < 0 else "+", _render_term(coeff, qpow, factors)))
    if not lines:
        return "0"
    text = ("-" if lines[0][0] == "-" else "") + lines[0][1]
    for sign, body in lines[1:]:
        text += f"\n  {sign} {body}"
    return text


_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<poch>\(q(?:\^(?P<a>\d+))?;q(?:\^(?P<s>\d+))?\)(?:\^(?P<e>\d+))?)"
    r"|(?P<qpow>q\^\{(?P<qn>-?\d+)(?:/(?P<qd>\d+))?\})"
    r"|(?P<int>\d+)"
    r"|(?P<op>[-+/()*])"
    r")"
)


def parse_products(text: str) -> List[Tuple[int, Fraction, Dict[Tuple[int, int], int]]]:
    """Inverse of :func:`render_products`: list of ``(coeff, q_power, factors)`` terms."""
    terms = []
    pos = 0
    sign = 1
    cur = None
    denom = False
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse formula at {text[pos:pos + 20]!r}")
        pos = m.end()
        if m.group("op"):
            op = m.group("op")
            if op in "+-" and not denom:
                if cur is not None:
                    terms.append(cur)
                    cur = None
                sign = 1 if op == "+" else -1
            elif op == "/":
                denom = True
            elif op == ")":
                denom = False
            continue
        if cur is None:
            cur = [sign, Fraction(0), {}]
            sign = 1
        if m.group("int"):
            cur[0] *= int(m.group("int"))
        elif m.group("qpow"):
            cur[1] += Fraction(int(m.group("qn")), int(m.group("qd") or 1))
        else:
            key = (int(m.group("a") or 1), int(m.group("s") or 1))
            e = int(m.group("e") or 1)
            cur[2][key] = cur[2].get(key, 0) + (-e if denom else e)
    if cur is not None:
        terms.append(cur)
    return [(c, q, f) for c, q, f in terms]


def evaluate_rendered(text: str, prec: ExpLike) -> QSeries:
    """Evaluate rendered Pochhammer text as a q-series modulo ``q^prec``."""
    prec = as_exp(prec)
    total = QSeries.zero(prec)
    for coeff, qpow, factors in parse_products(text):
        p = prec - qpow
        if p <= 0:
            continue
        body = QSeries.from_terms({0: coeff}, p)
        for (a, s), e in sorted(factors.items()):
            f = pochhammer(a, s, p)
            body = (body * (f ** e if e > 0 else f.inverse(p) ** (-e))).truncate(p)
        total = total + body.shift(qpow)
    return total
