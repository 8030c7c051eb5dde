"""Expression parsing and jet arithmetic against analytic derivatives."""

import numpy as np
import pytest

from warplab.errors import ExpressionError
from warplab.expressions import parse_expression


CASES = [
    # text, f, f', f'' as callables
    ("2 + cos(t)", lambda t: 2 + np.cos(t), lambda t: -np.sin(t), lambda t: -np.cos(t)),
    ("cosh(t)", np.cosh, np.sinh, np.cosh),
    ("exp(-t^2/2)", lambda t: np.exp(-t**2 / 2),
     lambda t: -t * np.exp(-t**2 / 2),
     lambda t: (t**2 - 1) * np.exp(-t**2 / 2)),
    ("sqrt(1 + t^2)", lambda t: np.sqrt(1 + t**2),
     lambda t: t / np.sqrt(1 + t**2),
     lambda t: 1.0 / (1 + t**2) ** 1.5),
    ("t*sin(t) + 3/(1+t^2)", lambda t: t * np.sin(t) + 3 / (1 + t**2),
     lambda t: np.sin(t) + t * np.cos(t) - 6 * t / (1 + t**2) ** 2,
     lambda t: 2 * np.cos(t) - t * np.sin(t) + (18 * t**2 - 6) / (1 + t**2) ** 3),
    ("log(2 + sin(t))", lambda t: np.log(2 + np.sin(t)),
     lambda t: np.cos(t) / (2 + np.sin(t)),
     lambda t: (-np.sin(t) * (2 + np.sin(t)) - np.cos(t) ** 2) / (2 + np.sin(t)) ** 2),
    ("(1 + t^2)^1.5", lambda t: (1 + t**2) ** 1.5,
     lambda t: 3 * t * np.sqrt(1 + t**2),
     lambda t: 3 * np.sqrt(1 + t**2) + 3 * t**2 / np.sqrt(1 + t**2)),
]


@pytest.mark.parametrize("text,f,f1,f2", CASES, ids=[c[0] for c in CASES])
def test_jet_matches_analytic_derivatives(text, f, f1, f2):
    expr = parse_expression(text)
    rng = np.random.default_rng(7)
    t = rng.uniform(-1.2, 1.2, size=50)
    jet = expr.jet(t)
    assert np.allclose(jet.val, f(t), rtol=1e-13, atol=1e-13)
    assert np.allclose(jet.d1, f1(t), rtol=1e-12, atol=1e-12)
    assert np.allclose(jet.d2, f2(t), rtol=1e-12, atol=1e-12)


def test_scalar_evaluation_returns_scalars():
    jet = parse_expression("2 + cos(t)").jet(0.0)
    assert jet.val == 3.0 and jet.d1 == 0.0 and jet.d2 == -1.0


def test_power_operator_spellings_agree():
    a = parse_expression("t^3").jet(1.7)
    b = parse_expression("t**3").jet(1.7)
    assert a.val == b.val and a.d1 == b.d1 and a.d2 == b.d2


def test_general_exponent_via_exp_log():
    # t^t = exp(t log t), derivative t^t (log t + 1)
    jet = parse_expression("t^t").jet(1.3)
    assert jet.val == pytest.approx(1.3 ** 1.3, rel=1e-13)
    assert jet.d1 == pytest.approx(1.3 ** 1.3 * (np.log(1.3) + 1), rel=1e-12)


def test_parse_errors_carry_column():
    with pytest.raises(ExpressionError) as err:
        parse_expression("2 + qos(t)")
    assert err.value.column == 5
    with pytest.raises(ExpressionError):
        parse_expression("sin(t")
    with pytest.raises(ExpressionError):
        parse_expression("1 + ")


def test_torus_variables_and_hessian_symmetry():
    expr = parse_expression("3 + cos(t1)*sin(t2) + t1*t2")
    rng = np.random.default_rng(3)
    pts = rng.uniform(0, 2 * np.pi, size=(2, 40))
    mj = expr.mjet(pts, m=2)
    t1, t2 = pts
    assert np.allclose(mj.val, 3 + np.cos(t1) * np.sin(t2) + t1 * t2)
    assert np.allclose(mj.grad[0], -np.sin(t1) * np.sin(t2) + t2)
    assert np.allclose(mj.grad[1], np.cos(t1) * np.cos(t2) + t1)
    assert np.allclose(mj.hess[0, 1], mj.hess[1, 0], atol=1e-14)
    assert np.allclose(mj.hess[0, 1], -np.sin(t1) * np.cos(t2) + 1.0)
    assert np.allclose(mj.hess[0, 0], -np.cos(t1) * np.sin(t2))


def test_torus_variable_out_of_range_rejected():
    expr = parse_expression("cos(t3)")
    with pytest.raises(ExpressionError):
        expr.mjet(np.zeros((2, 4)), m=2)
