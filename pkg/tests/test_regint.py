import math

import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from conetrace.errors import DomainError, UnsupportedPoleOrder, ValidationError
from conetrace.regint import TaggedFunction, finite_part_power, mellin, regularized_integral
from conetrace.specfun import EULER_GAMMA


def _expm1_over_x(x):
    return -math.expm1(-x) / x if x > 0 else 1.0


def exp_decay(split=1.0):
    return TaggedFunction(f1=lambda x: math.exp(-x), f2=lambda x: math.exp(-x),
                          p=1.0, q=20.0, split=split, name="exp(-x)")


def exp_over_x(split=1.0):
    return TaggedFunction(small_terms=[(-1.0, 0, 1.0)],
                          f1=lambda x: -_expm1_over_x(x),
                          f2=lambda x: math.exp(-x) / x, p=1.0, q=20.0, split=split)


def exp_over_x2(split=1.0):
    def f1(x):
        # (e^-x - 1 + x) / x^2 without cancellation for small x
        if x < 1e-3:
            return 0.5 - x / 6 + x * x / 24
        return (math.expm1(-x) + x) / (x * x)
    return TaggedFunction(small_terms=[(-2.0, 0, 1.0), (-1.0, 0, -1.0)], f1=f1,
                          f2=lambda x: math.exp(-x) / (x * x), p=1.0, q=20.0, split=split)


def test_mellin_of_exponential():
    v = mellin(exp_decay(), 0.5)
    assert v.pole_order == 0
    assert v.res0 == pytest.approx(math.sqrt(math.pi), abs=1e-12)


def test_mellin_pole_of_exp_over_x():
    v = mellin(exp_over_x(), 1.0)
    assert v.res1 == pytest.approx(1.0, abs=1e-14)
    assert v.res0 == pytest.approx(-EULER_GAMMA, abs=1e-10)


def test_mellin_indicator():
    f = TaggedFunction(small_terms=[(-1.0, 0, 1.0)], p=5.0, q=5.0, split=1.0)
    v = mellin(f, 1.0)
    assert (v.res1, v.res0) == (1.0, 0.0)


@pytest.mark.parametrize("f, expected", [(exp_decay(), 1.0), (exp_over_x(), -EULER_GAMMA),
                                         (exp_over_x2(), EULER_GAMMA - 1.0)])
def test_regularized_integral_examples(f, expected):
    assert regularized_integral(f) == pytest.approx(expected, abs=1e-9)


def test_cross_check_with_epsilon_limit():
    # int_eps^oo e^-x / x dx + log eps -> -gamma
    eps = 1e-8
    e1 = integrate.quad(lambda x: math.exp(-x) / x, eps, 1.0, limit=200)[0] + \
        integrate.quad(lambda x: math.exp(-x) / x, 1.0, math.inf)[0]
    assert e1 + math.log(eps) == pytest.approx(regularized_integral(exp_over_x()), abs=1e-7)


def test_log_term_gives_gamma_derivative():
    f = TaggedFunction(small_terms=[(0.0, 1, 1.0)],
                       f1=lambda x: math.log(x) * math.expm1(-x),
                       f2=lambda x: math.log(x) * math.exp(-x), p=1.5, q=20.0)
    # M(log x e^-x)(s) = Gamma'(s); Gamma'(1) = -gamma
    assert regularized_integral(f) == pytest.approx(-EULER_GAMMA, abs=1e-9)


def test_log_term_at_its_pole_is_unsupported():
    f = TaggedFunction(small_terms=[(-1.0, 1, 1.0)], p=1.0, q=5.0)
    with pytest.raises(UnsupportedPoleOrder):
        mellin(f, 1.0)


def _one_over_one_plus_x():
    return TaggedFunction(large_terms=[(-1.0, 0, 1.0)], f1=lambda x: 1.0 / (1.0 + x),
                          f2=lambda x: -1.0 / (x * (1.0 + x)), p=1.0, q=0.9)


def test_large_end_continuation():
    f = _one_over_one_plus_x()
    v = mellin(f, 0.4)
    assert v.res0 == pytest.approx(math.pi / math.sin(0.4 * math.pi), rel=1e-10)
    v = mellin(f, 1.3)
    assert v.res0 == pytest.approx(math.pi / math.sin(1.3 * math.pi), rel=1e-10)
    v = mellin(f, 1.0)
    assert v.res1 == pytest.approx(-1.0, abs=1e-14)
    assert v.res0 == pytest.approx(0.0, abs=1e-10)


def test_strip_is_enforced():
    with pytest.raises(DomainError):
        mellin(_one_over_one_plus_x(), 2.0)
    with pytest.raises(DomainError):
        mellin(exp_over_x(), 0.0)


@pytest.mark.parametrize("make, s", [(exp_over_x, 1.0), (exp_over_x, 0.7), (exp_over_x2, 1.0),
                                     (exp_decay, 2.5)])
def test_split_independence(make, s):
    a, b = mellin(make(1.0), s), mellin(make(2.0), s)
    assert abs(a.res1 - b.res1) <= 1e-10
    assert abs(a.res0 - b.res0) <= 1e-10
    c = mellin(make(1.0).with_split(0.25), s)
    assert abs(a.res0 - c.res0) <= 1e-10


@settings(max_examples=25, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3))
def test_linearity(alpha, beta):
    f, g = exp_over_x(), exp_over_x2()
    lhs = regularized_integral(alpha * f + g * beta)
    rhs = alpha * regularized_integral(f) + beta * regularized_integral(g)
    assert lhs == pytest.approx(rhs, abs=1e-10)


@pytest.mark.parametrize("a", [0.5, 2.0, -0.5])
def test_consistency_with_quadrature(a):
    f = TaggedFunction(f1=lambda x: x**a * math.exp(-x), f2=lambda x: x**a * math.exp(-x),
                       p=a + 1.0, q=20.0)
    ref = integrate.quad(lambda x: x**a * math.exp(-x), 0, math.inf, limit=200)[0]
    assert regularized_integral(f) == pytest.approx(ref, abs=1e-8)
    assert regularized_integral(f) == pytest.approx(math.gamma(a + 1), abs=1e-10)


def test_tagged_function_validation():
    with pytest.raises(ValidationError):
        TaggedFunction(small_terms=[(0.0, 0, 1.0), (-1.0, 0, 1.0)], p=2.0)
    with pytest.raises(ValidationError):
        TaggedFunction(small_terms=[(1.5, 0, 1.0)], p=1.0)
    with pytest.raises(ValidationError):
        TaggedFunction(large_terms=[(-3.0, 0, 1.0)], q=1.0)
    with pytest.raises(ValidationError):
        TaggedFunction(small_terms=[(0.0, -1, 1.0)], p=2.0)
    with pytest.raises(ValidationError):
        TaggedFunction(p=0.0)
    with pytest.raises(ValidationError):
        exp_over_x(1.0) + exp_over_x(2.0)


# ---------------------------------------------------------------- finite_part_power

@pytest.mark.parametrize("a, eps, expected", [(1.0, 1.0, 0.5), (-1.0, 1.0, 0.0), (-2.0, 1.0, -1.0)])
def test_finite_part_power_examples(a, eps, expected):
    assert finite_part_power(a, eps) == expected


def test_finite_part_power_matches_mellin():
    # regularized int_0^eps r^a dr is Res_0 of M(r^a 1_[0,eps]) at s = 1
    for a in (-2.0, -1.0, -0.5, 1.5):
        eps = 1.7
        f = TaggedFunction(small_terms=[(a, 0, 1.0)], p=a + 3.0, q=5.0, split=eps)
        assert mellin(f, 1.0).res0 == pytest.approx(finite_part_power(a, eps), rel=1e-13)


@settings(max_examples=50, deadline=None)
@given(st.floats(-4, 3).filter(lambda a: abs(a + 1) > 1e-2), st.floats(0.2, 5.0))
def test_finite_part_power_derivative(a, eps):
    h = 1e-6 * eps
    fd = (finite_part_power(a, eps + h) - finite_part_power(a, eps - h)) / (2 * h)
    assert fd == pytest.approx(eps**a, rel=1e-6)


def test_finite_part_power_at_minus_one():
    eps, h = 2.3, 1e-6
    fd = (finite_part_power(-1.0, eps + h) - finite_part_power(-1.0, eps - h)) / (2 * h)
    assert fd == pytest.approx(1 / eps, rel=1e-8)
    # continuity away from a = -1
    assert finite_part_power(0.5 + 1e-9, 2.0) == pytest.approx(finite_part_power(0.5, 2.0), rel=1e-8)
    with pytest.raises(DomainError):
        finite_part_power(1.0, 0.0)
