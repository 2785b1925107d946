import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asymptotic_surfaces.errors import ArityError, ExprDomainError, ExprSyntaxError, UnknownIdentifier
from asymptotic_surfaces.expr import (
    Jet2,
    Var,
    eval_jet2,
    evaluate,
    free_variables,
    parse,
    substitute,
    unparse,
)

from conftest import ENNEPER_NEG, ENNEPER_POS, LORENTZ_SPHERE, ROTATIONAL, SADDLE


def slots(j):
    return np.array([j.val, j.du, j.dv, j.duu, j.duv, j.dvv], dtype=float)


@pytest.mark.parametrize(
    "text,point,expected",
    [
        ("u^3/6 + u*v^2/2 - u/2", (0.0, 0.0), (0, -0.5, 0, 0, 0, 0)),
        ("u*v", (2.0, 3.0), (6, 3, 2, 0, 1, 0)),
        ("cos(u)*cosh(v)", (0.0, 0.0), (1, 0, 0, -1, 0, 1)),
    ],
)
def test_hand_differentiated_jets(text, point, expected):
    np.testing.assert_allclose(slots(eval_jet2(parse(text), *point)), expected, atol=1e-15)


def test_variable_jets():
    j = eval_jet2(parse("u"), 1.5, -2.0)
    assert slots(j).tolist() == [1.5, 1.0, 0.0, 0.0, 0.0, 0.0]
    j = eval_jet2(parse("v"), 1.5, -2.0)
    assert slots(j).tolist() == [-2.0, 0.0, 1.0, 0.0, 0.0, 0.0]


def test_precedence_and_associativity():
    assert evaluate(parse("2^3^2"), 0, 0) == 512.0
    assert evaluate(parse("-2^2"), 0, 0) == -4.0
    assert evaluate(parse("1 - 2 - 3"), 0, 0) == -4.0
    assert evaluate(parse("8/4/2"), 0, 0) == 1.0
    assert evaluate(parse("  u  *\tv "), 2, 5) == 10.0
    assert evaluate(parse("2**3"), 0, 0) == 8.0
    assert math.isclose(evaluate(parse("pi"), 0, 0), math.pi)


@pytest.mark.parametrize("text", ["cos u cosh v", "u v", "(u + v", "u +", "2 3", "u)", ""])
def test_syntax_errors(text):
    with pytest.raises(ExprSyntaxError):
        parse(text)


def test_syntax_error_position():
    with pytest.raises(ExprSyntaxError) as info:
        parse("u + * v")
    assert info.value.position == 4
    assert "position 4" in str(info.value)


def test_unknown_identifier_and_arity():
    with pytest.raises(UnknownIdentifier):
        parse("w + u")
    with pytest.raises(UnknownIdentifier):
        parse("foo(u)")
    with pytest.raises(ArityError):
        parse("sin(u, v)")


def test_domain_errors_name_the_subexpression():
    with pytest.raises(ExprDomainError) as info:
        evaluate(parse("1 + log(u - 1)"), 0.5, 0.0)
    assert "log" in str(info.value)
    with pytest.raises(ExprDomainError):
        evaluate(parse("sqrt(v)"), 0.0, -1.0)
    with pytest.raises(ExprDomainError):
        evaluate(parse("1/(u - v)"), 1.0, 1.0)


def test_broadcasting_over_arrays():
    uu, vv = np.meshgrid(np.linspace(0, 1, 4), np.linspace(-1, 1, 3), indexing="ij")
    j = eval_jet2(parse("sin(u)*exp(v) + 3"), uu, vv)
    assert j.val.shape == (4, 3) and j.duv.shape == (4, 3)
    np.testing.assert_allclose(j.duv, np.cos(uu) * np.exp(vv))
    # constants broadcast to the input shape too
    assert eval_jet2(parse("2"), uu, vv).duu.shape == (4, 3)


CORPUS = list(ENNEPER_POS + ENNEPER_NEG + ROTATIONAL + LORENTZ_SPHERE + SADDLE) + [
    "cosh(u + v)/cosh(u - v)",
    "tanh(u - v)",
    "sinh(u + v)/cosh(u - v)",
    "-u^2 + 3*v - 7",
    "exp(-(u^2 + v^2)/2)",
    "sqrt(1 + u^2)*log(2 + v)",
    "tan(u/3) - -v",
    "u^(1/2) + v^1.5",
    "(u + v)^-2",
    "2^u",
    "u^v",
    "pi*sin(pi*u)",
]


@pytest.mark.parametrize("text", CORPUS)
def test_unparse_round_trip(text):
    e = parse(text)
    assert parse(unparse(e)) == e
    assert unparse(parse(unparse(e))) == unparse(e)


def test_corpus_size():
    assert len(CORPUS) >= 20


def test_free_variables_and_substitute():
    e = parse("u^2 + sin(v)")
    assert free_variables(e) == {"u", "v"}
    assert free_variables(parse("3*pi")) == set()
    s = substitute(e, u=parse("u - v"), v=parse("u + v"))
    assert math.isclose(evaluate(s, 0.3, 0.1), 0.2**2 + math.sin(0.4))
    assert substitute(parse("u"), v=Var("u")) == parse("u")


def _fd_errors(e, u, v, h):
    j = eval_jet2(e, u, v)
    f = lambda a, b: float(evaluate(e, a, b))  # noqa: E731
    fu = (f(u + h, v) - f(u - h, v)) / (2 * h)
    fv = (f(u, v + h) - f(u, v - h)) / (2 * h)
    fuu = (f(u + h, v) - 2 * f(u, v) + f(u - h, v)) / h**2
    fvv = (f(u, v + h) - 2 * f(u, v) + f(u, v - h)) / h**2
    fuv = (f(u + h, v + h) - f(u + h, v - h) - f(u - h, v + h) + f(u - h, v - h)) / (4 * h * h)
    return np.abs(np.array([fu, fv, fuu, fuv, fvv]) - slots(j)[1:])


@pytest.mark.parametrize(
    "text", ["sin(u)*cosh(v) + u^3*v", "exp(u*v)/(2 + cos(u))", "log(3 + u^2)*sqrt(2 + v)", "tanh(u - 2*v)^2"]
)
def test_jets_match_finite_differences_at_order_two(text):
    e = parse(text)
    e1 = _fd_errors(e, 0.3, -0.4, 1e-2)
    e2 = _fd_errors(e, 0.3, -0.4, 1e-3)
    assert np.all(e1 < 1e-2)
    big = e1 > 1e-8
    ratio = e1[big] / e2[big]
    assert np.all((ratio > 60) & (ratio < 140))


coef = st.floats(-2, 2, allow_nan=False)
point = st.floats(-0.8, 0.8, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(coef, coef, coef, point, point)
def test_product_rule_property(a, b, c, u, v):
    f = parse(f"({a})*sin(u) + ({b})*v^2")
    g = parse(f"exp(({c})*u*v)")
    fg = parse(f"(({a})*sin(u) + ({b})*v^2)*exp(({c})*u*v)")
    jf, jg, jfg = eval_jet2(f, u, v), eval_jet2(g, u, v), eval_jet2(fg, u, v)
    np.testing.assert_allclose(slots(jfg), slots(jf * jg), rtol=1e-12, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(point, point)
def test_chain_rule_property(u, v):
    inner = eval_jet2(parse("u*v + u"), u, v)
    outer = eval_jet2(parse("sin(u*v + u)"), u, v)
    s, c = math.sin(inner.val), math.cos(inner.val)
    np.testing.assert_allclose(slots(outer), slots(inner.chain(s, c, -s)), rtol=1e-12, atol=1e-12)


def test_jet_reciprocal_and_division():
    x = Jet2.variable_u(2.0, 0.0)
    r = x.reciprocal()
    assert (r.val, r.du, r.duu) == (0.5, -0.25, 0.25)
