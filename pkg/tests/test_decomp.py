from fractions import Fraction as F

import pytest

from thetafrob.decomp import (
    HTable,
    ThetaExpr,
    ThetaSymbol,
    apply_rewrites,
    eval_theta_expr,
    evaluate_rendered,
    h_base,
    h_half_base,
    h_step_even,
    h_step_half_to_int,
    h_step_odd,
    h_table,
    parse_products,
    render_products,
    theta,
    verify_decomposition,
    verify_lemma_onemore,
    verify_lemma_theta1eps,
    verify_lemma_theta2,
    verify_routes,
    verify_symmetry,
)
from thetafrob.qseries import theta_series

T10, T11 = theta(1, 0), theta(1, 1)


def test_symbol_normalization():
    assert ThetaSymbol(6, 14) == ThetaSymbol(6, 2)
    assert ThetaSymbol(6, -3) == ThetaSymbol(6, 3)
    # theta_{m,a}(s tau) = theta_{sm, sa}(tau)
    assert theta(2, 1, 3) == theta(6, 3)
    assert theta(1, 2) == theta(1, 0)


def test_expr_algebra():
    e = (T10 + T11) ** 2
    assert e == T10 * T10 + 2 * T10 * T11 + T11 * T11
    assert (e - e) == ThetaExpr.const(0)
    assert str(2 * T10 * T11) == "2*θ[1,0]*θ[1,1]"
    assert ThetaExpr.from_dict(e.to_dict()) == e


def test_base_tables():
    b = h_base()
    assert b[0] == T11 and b[1] == T10
    assert b[2] == T11
    half = h_half_base()
    assert half[F(1, 2)] == ThetaExpr.const(1)


def test_level_two():
    t = h_step_even(h_base())
    assert t[1] == 2 * T10 * T11 * theta(2, 1)
    assert t[0] == T11**2 * theta(2, 0) + T10**2 * theta(2, 2)
    assert t[2] == T11**2 * theta(2, 2) + T10**2 * theta(2, 0)
    assert t == h_step_even(h_base(), form="ungrouped")


def test_h33():
    t2 = h_table(4)
    expected = T10 * theta(6, 6) * t2[0] + 2 * T11 * theta(6, 3) * t2[1] + T10 * theta(6, 0) * t2[2]
    assert h_table(6)[3] == expected
    simplified = apply_rewrites(h_table(6)[3])
    target = 6 * T10 * T11**2 * theta(2, 1) * theta(6, 3) + T10**3 * (theta(2, 0) * theta(6, 0) + theta(2, 2) * theta(6, 6))
    assert simplified == target
    assert eval_theta_expr(simplified, 15) == eval_theta_expr(expected, 15)


def test_h_seven_halves_display():
    t = theta
    display = (
        6 * T10 * T11 * t(2, 1)
        * (t(6, 3) * (T10 * t(21, 21) + T11 * t(21, 0)) + (T11 * t(21, 14) + T10 * t(21, 7)) * (t(6, 1) + t(6, 5)))
        + (T10**3 * t(21, 0) + T11**3 * t(21, 21)) * (t(2, 0) * t(6, 0) + t(2, 2) * t(6, 6))
        + 2 * (T10**3 * t(21, 14) + T11**3 * t(21, 7)) * (t(2, 0) * t(6, 4) + t(2, 2) * t(6, 2))
    )
    assert apply_rewrites(h_table(7)[F(7, 2)]) == display


def test_h44_display_corrected_coefficient():
    t = theta
    first = T11**2 * t(2, 0) + T10**2 * t(2, 2)
    third = T11**2 * t(2, 2) + T10**2 * t(2, 0)
    display = (
        T11**2 * t(12, 12) * t(6, 0) * first
        + 2 * T10**2 * t(12, 8) * t(6, 2) * first
        + 2 * T11**2 * t(12, 4) * t(6, 4) * first
        + 1 * T10**2 * t(12, 0) * t(6, 6) * first
        + 4 * T10**2 * T11**2 * t(2, 1) * ((t(12, 0) + t(12, 12)) * t(6, 3) + (t(12, 8) + t(12, 4)) * (t(6, 1) + t(6, 5)))
        + T11**2 * t(12, 12) * t(6, 6) * third
        + 2 * T10**2 * t(12, 8) * t(6, 4) * third
        + 2 * T11**2 * t(12, 4) * t(6, 2) * third
        + T10**2 * t(12, 0) * t(6, 0) * third
    )
    assert apply_rewrites(h_table(8)[4]) == apply_rewrites(display)


def test_odd_and_half_steps_agree_with_even_step():
    for level in (1, 2, 3):
        direct = h_step_even(h_table(2 * level))
        via_half = h_step_half_to_int(h_step_odd(h_table(2 * level)))
        assert set(direct.residues()) == set(via_half.residues())
        d, v = direct.evaluate(12), via_half.evaluate(12)
        assert all(d[c] == v[c] for c in d)


def test_table_shapes_and_serialization():
    t = h_table(5)
    assert t.level == F(5, 2)
    assert len(t.residues()) == 5
    assert t[F(-1, 2)] == t[F(1, 2)]
    assert HTable.from_dict(t.to_dict()) == t
    assert h_table(1)[F(1, 2)] == ThetaExpr.const(1)


@pytest.mark.parametrize("k", range(1, 9))
def test_decomposition(k):
    assert verify_decomposition(k, 8).passed


def test_lemma_reports():
    assert verify_lemma_theta2(10).passed
    for l, c in [(1, 0), (2, 1), (3, 2)]:
        assert verify_lemma_onemore(l, c, 10).passed
    for eps, l, c in [(0, 1, 0), (1, 2, 1), (1, 3, 0)]:
        assert verify_lemma_theta1eps(eps, l, c, 10).passed


def test_routes_and_symmetry():
    assert verify_routes(2, 15).passed
    assert verify_routes(3, 10).passed
    for k in (4, 6, 7, 8):
        assert verify_symmetry(h_table(k), 8).passed


def test_render_atoms():
    assert render_products(T10) == "1 (q^2;q^2)^5 / ((q;q)^2 (q^4;q^4)^2)"
    assert render_products(T11) == "2 q^{1/4} (q^4;q^4)^2 / ((q^2;q^2))"
    assert render_products(theta(2, 1)) == "1 q^{1/8} (q^4;q^4) (q^2;q^8) (q^6;q^8) / ((q;q^4) (q^3;q^4))"


@pytest.mark.parametrize("m,b", [(1, 0), (1, 1), (2, 1), (3, 0), (4, 4), (6, 3), (21, 14)])
def test_render_round_trip_atoms(m, b):
    text = render_products(theta(m, b))
    assert evaluate_rendered(text, 20) == theta_series(m, b, 1, 20)


def test_parse_products():
    terms = parse_products("3 q^{1/4} (q;q)^2 (q^2;q^4) / ((q^3;q^3))\n  - 1 (q;q)")
    assert terms[0] == (3, F(1, 4), {(1, 1): 2, (2, 4): 1, (3, 3): -1})
    assert terms[1] == (-1, F(0), {(1, 1): 1})
