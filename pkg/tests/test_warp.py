"""Warping function contracts: exact jets, FD cross-checks, catalog entries."""

import math

import numpy as np
import pytest

from warplab import (
    Domain1D,
    MeanCurvatureProfile,
    WarpingFunction,
    catalog,
    from_expression,
    schwarzschild_profile,
    schwarzschild_throat_profile,
)
from warplab.errors import DomainError, HorizonError, NonPositiveWarp

FD_STEPS = (1e-3, 5e-4, 2.5e-4)


def central_fd1(fn, t, h):
    return (fn(t + h) - fn(t - h)) / (2.0 * h)


def observed_orders(errors):
    errors = np.asarray(errors)
    return np.log2(errors[:-1] / errors[1:])


def sample_points(wf, n=100, seed=11):
    rng = np.random.default_rng(seed)
    if wf.domain.is_circle:
        return rng.uniform(0.0, wf.domain.period, n)
    a, b = wf.domain.a, wf.domain.b
    # keep FD stencils inside the interval
    pad = 0.05 * (b - a)
    return rng.uniform(a + pad, b - pad, n)


ALL_CATALOG = [
    ("constant", dict(c=3.0)),
    ("two-plus-cos", {}),
    ("cosh", {}),
    ("affine", {}),
    ("schwarzschild", dict(m=1.0, q=2, r0=2.0, tmax=1.5)),
    ("schwarzschild-throat", dict(m=1.0, q=2, tmax=1.5)),
]


def test_eval_examples():
    assert catalog("constant", c=3.0).eval(1.7) == (3.0, 0.0, 0.0)
    f, f1, f2 = catalog("two-plus-cos").eval(math.pi / 2)
    assert (f, f1) == pytest.approx((2.0, -1.0), abs=1e-14)
    assert f2 == pytest.approx(0.0, abs=1e-14)
    f, f1, f2 = catalog("two-plus-cos").eval(0.0)
    assert (f, f1, f2) == pytest.approx((3.0, 0.0, -1.0), abs=1e-14)


def test_mean_curvature_examples():
    const = catalog("constant", c=2.5)
    ts = np.linspace(0, 2 * np.pi, 17)
    assert np.all(const.mean_curvature(ts) == 0.0)
    assert np.all(const.mean_curvature_prime(ts) == 0.0)
    tpc = catalog("two-plus-cos")
    assert tpc.mean_curvature(math.pi / 2) == pytest.approx(-0.5, abs=1e-14)
    assert tpc.mean_curvature_prime(0.0) == pytest.approx(-1.0 / 3.0, abs=1e-14)


def test_domain_checks():
    w = catalog("affine")  # 1 + t on [0, 1]
    with pytest.raises(DomainError):
        w.eval(2.0)
    circle = catalog("two-plus-cos")
    # circle domains reduce modulo the period
    f_lo = circle.eval(0.3)[0]
    f_hi = circle.eval(0.3 + 2 * np.pi)[0]
    assert f_lo == pytest.approx(f_hi, abs=1e-14)


def test_positivity_rejected_at_construction():
    with pytest.raises(NonPositiveWarp):
        from_expression("cos(t)", Domain1D.circle())
    with pytest.raises(NonPositiveWarp):
        catalog("constant", c=-1.0)


def test_periodicity_of_circle_warps():
    w = catalog("two-plus-cos")
    ts = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    gaps = [np.max(np.abs(np.asarray(a) - np.asarray(b)))
            for a, b in zip(w._evaluator(ts), w._evaluator(ts + 2 * np.pi))]
    assert max(gaps) <= 1e-12
    with pytest.raises(DomainError):
        from_expression("2 + cos(t/2)", Domain1D.circle())  # not 2pi-periodic


@pytest.mark.parametrize("name,params", ALL_CATALOG, ids=[c[0] for c in ALL_CATALOG])
def test_first_derivative_matches_central_fd_at_order_two(name, params):
    wf = catalog(name, **params)
    ts = sample_points(wf)
    value = lambda t: np.asarray(wf.eval(t)[0])
    worst = []
    for h in FD_STEPS:
        err = np.max(np.abs(np.asarray(wf.eval(ts)[1]) - central_fd1(value, ts, h)))
        assert err <= 2.0 * h * h + 1e-11
        worst.append(max(err, 1e-13))
    if worst[0] > 1e-10:  # order is only measurable above the noise floor
        orders = observed_orders(worst)
        assert np.all(np.abs(orders - 2.0) <= 0.3)


@pytest.mark.parametrize("name,params", ALL_CATALOG, ids=[c[0] for c in ALL_CATALOG])
def test_second_derivative_matches_fd_of_first(name, params):
    # second differences of f at these steps sit on the float64 cancellation
    # floor, so the order study differences the exact f' instead
    wf = catalog(name, **params)
    ts = sample_points(wf)
    deriv = lambda t: np.asarray(wf.eval(t)[1])
    worst = []
    for h in FD_STEPS:
        err = np.max(np.abs(np.asarray(wf.eval(ts)[2]) - central_fd1(deriv, ts, h)))
        assert err <= 2.0 * h * h + 1e-11
        worst.append(max(err, 1e-13))
    if worst[0] > 1e-10:
        orders = observed_orders(worst)
        assert np.all(np.abs(orders - 2.0) <= 0.3)


@pytest.mark.parametrize("name,params", ALL_CATALOG, ids=[c[0] for c in ALL_CATALOG])
def test_second_difference_bound_on_f(name, params):
    wf = catalog(name, **params)
    ts = sample_points(wf)
    for h in FD_STEPS:
        d2 = (np.asarray(wf.eval(ts + h)[0]) - 2 * np.asarray(wf.eval(ts)[0])
              + np.asarray(wf.eval(ts - h)[0])) / (h * h)
        err = np.max(np.abs(np.asarray(wf.eval(ts)[2]) - d2))
        assert err <= 2.0 * h * h + 1e-7  # cancellation floor ~4 eps |f| / h^2


def test_mean_curvature_prime_is_derivative_of_mean_curvature():
    wf = catalog("two-plus-cos")
    ts = sample_points(wf, n=60, seed=5)
    for h in (1e-3, 5e-4):
        fd = central_fd1(lambda t: np.asarray(wf.mean_curvature(t)), ts, h)
        err = np.max(np.abs(np.asarray(wf.mean_curvature_prime(ts)) - fd))
        assert err <= 5.0 * h * h


def test_sign_report():
    prof = MeanCurvatureProfile(schwarzschild_profile(1.0, 2, 2.0, 1.5))
    report = prof.sign_report()
    assert report["H_positive"]
    cosh_prof = MeanCurvatureProfile(catalog("cosh"))
    assert cosh_prof.sign_report()["Hprime_nonnegative"]  # H' = 1/cosh^2 > 0


def test_schwarzschild_examples():
    s = schwarzschild_profile(1.0, 2, 2.0, 1.0)
    assert s.eval(0.0)[1] == pytest.approx(math.sqrt(0.5), abs=1e-12)
    # m -> 0 limit: f' = 1, so f = r0 + t
    flat = schwarzschild_profile(1e-14, 2, 1.0, 1.0)
    assert flat.eval(0.7)[0] == pytest.approx(1.7, abs=1e-9)
    assert flat.eval(0.7)[1] == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(HorizonError):
        schwarzschild_profile(1.0, 2, 1.0, 1.0)  # r0^q = 1 < 2m


def test_schwarzschild_q2_closed_form():
    # for q = 2 the profile is exactly sqrt(2m + (t + t0)^2), t0 = sqrt(r0^2 - 2m)
    s = schwarzschild_profile(1.0, 2, 2.0, 1.5)
    t0 = math.sqrt(2.0)
    ts = np.linspace(0, 1.5, 23)
    f = np.asarray(s.eval(ts)[0])
    assert np.max(np.abs(f - np.sqrt(2.0 + (ts + t0) ** 2))) < 1e-11


def test_schwarzschild_throat_closed_form_and_flags():
    th = schwarzschild_throat_profile(1.0, 2, math.sqrt(2.0))
    ts = np.linspace(0, math.sqrt(2.0), 29)
    f, f1, f2 = (np.asarray(a) for a in th.eval(ts))
    assert np.max(np.abs(f - np.sqrt(2.0 + ts ** 2))) < 1e-11
    assert f1[0] == pytest.approx(0.0, abs=1e-9)
    assert np.all(f1[1:] > 0)
    assert np.all(f2 > 0)


def test_schwarzschild_mean_curvature_positive_everywhere():
    s = schwarzschild_profile(1.0, 2, 2.0, 1.5)
    ts = np.linspace(0.0, 1.5, 501)
    assert np.all(np.asarray(s.mean_curvature(ts)) > 0.0)


def test_custom_domain_override():
    w = catalog("two-plus-cos", domain=Domain1D.interval(0.0, 2 * np.pi))
    assert not w.domain.is_circle
    assert w.eval(1.0)[0] == pytest.approx(2 + math.cos(1.0))
