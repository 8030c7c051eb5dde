"""Curvature and slice quantities of flat-base warped products."""

import math

import numpy as np
import pytest

from warplab import catalog
from warplab.errors import DomainError, MissingSpectrum
from warplab.geometry import (
    FiberDescriptor,
    ScalarFieldM,
    SplitTangent,
    TorusBase,
    WarpedProductSpace,
    covariant_dt,
    log_warp_identity_residual,
    ricci_dt_dt,
    ricci_horizontal,
    slice_data,
    sphere_volume,
    total_measure,
    volume_element,
    warped_norm,
)

TWO_PI = 2.0 * math.pi


def space_1d(warp_name="two-plus-cos", q=2, **params):
    fiber = FiberDescriptor.sphere(q) if q >= 2 else FiberDescriptor.circle()
    return WarpedProductSpace(catalog(warp_name, **params), fiber)


def test_sphere_fiber_descriptor():
    s2 = FiberDescriptor.sphere(2)
    assert s2.volume == pytest.approx(4 * math.pi, rel=1e-14)
    assert s2.spectrum[0] == (0.0, 1)
    assert s2.spectrum[1] == (2.0, 3)  # k(k+q-1) = 1*2, multiplicity 3
    assert s2.spectrum[2] == (6.0, 5)
    s3 = FiberDescriptor.sphere(3)
    assert s3.volume == pytest.approx(2 * math.pi ** 2, rel=1e-14)
    circ = FiberDescriptor.circle(radius=2.0)
    assert circ.volume == pytest.approx(4 * math.pi)
    assert circ.nonzero_eigenvalues()[0] == (0.25, 2)
    with pytest.raises(MissingSpectrum):
        FiberDescriptor.abstract(volume=1.0, q=2).nonzero_eigenvalues()


def test_sphere_volume_closed_forms():
    assert sphere_volume(1) == pytest.approx(TWO_PI)
    assert sphere_volume(2) == pytest.approx(4 * math.pi)
    assert sphere_volume(3) == pytest.approx(2 * math.pi ** 2)


def test_ricci_horizontal_examples():
    const = space_1d("constant", q=2, c=3.0)
    for t in np.linspace(0, TWO_PI, 7):
        assert ricci_horizontal(const, t, [1.0], [1.0]) == 0.0

    tpc = space_1d("two-plus-cos", q=2)
    assert ricci_horizontal(tpc, 0.0, [1.0], [1.0]) == pytest.approx(2.0 / 3.0, abs=1e-14)

    base = TorusBase((TWO_PI, TWO_PI))
    field = ScalarFieldM("3 + cos(t1)", base)
    torus_space = WarpedProductSpace(field, FiberDescriptor.sphere(2))
    assert ricci_horizontal(torus_space, [0.3, 1.1], [0, 1], [0, 1]) == pytest.approx(0.0, abs=1e-14)


def test_ricci_dt_dt_examples():
    assert ricci_dt_dt(space_1d("constant", q=2, c=3.0), 1.0) == 0.0
    assert ricci_dt_dt(space_1d("two-plus-cos", q=2), math.pi) == pytest.approx(-2.0, abs=1e-13)
    q3 = WarpedProductSpace(catalog("two-plus-cos"), FiberDescriptor.sphere(3))
    assert ricci_dt_dt(q3, 0.0) == pytest.approx(1.0, abs=1e-14)


def test_ricci_dt_dt_equals_ricci_horizontal():
    space = space_1d("two-plus-cos", q=2)
    for t in np.linspace(0, TWO_PI, 23):
        assert ricci_dt_dt(space, t) == ricci_horizontal(space, t, [1.0], [1.0])


def test_volume_element_examples():
    one = space_1d("constant", q=2, c=1.0)
    assert volume_element(one, 0.7) == 1.0
    tpc = space_1d("two-plus-cos", q=2)
    assert volume_element(tpc, 0.0) == pytest.approx(9.0, abs=1e-13)
    # q = 1 total measure over circle base with 2 pi fiber: 2 pi * int (2 + cos) = 8 pi^2
    q1 = WarpedProductSpace(catalog("two-plus-cos"), FiberDescriptor.circle(radius=1.0))
    assert total_measure(q1, nodes=2048) == pytest.approx(8 * math.pi ** 2, rel=1e-12)


def test_volume_element_periodicity():
    space = space_1d("two-plus-cos", q=3)
    ts = np.linspace(0, TWO_PI, 17)
    a = [volume_element(space, t) for t in ts]
    b = [volume_element(space, t + TWO_PI) for t in ts]
    assert np.allclose(a, b, atol=1e-12)


def test_covariant_dt_examples():
    space = space_1d("two-plus-cos", q=2)
    # along the base direction the derivative vanishes
    out = covariant_dt(space, 0.8, SplitTangent.dt())
    assert np.all(out.fiber == 0.0) and out.base == 0.0
    # purely vertical unit vector at t = pi/2 maps to norm |H| = 1/2
    f = space.warp.eval(math.pi / 2)[0]
    X = SplitTangent.vertical([1.0 / f])
    assert warped_norm(space, math.pi / 2, X) == pytest.approx(1.0)
    out = covariant_dt(space, math.pi / 2, X)
    assert warped_norm(space, math.pi / 2, out) == pytest.approx(0.5, abs=1e-13)
    # constant warp kills everything
    const = space_1d("constant", q=2, c=2.0)
    out = covariant_dt(const, 0.3, SplitTangent.vertical([0.4, 0.2]))
    assert np.all(out.fiber == 0.0)


def test_covariant_dt_is_homogeneous_in_the_vertical_part():
    space = space_1d("two-plus-cos", q=2)
    X = SplitTangent.vertical([0.3, 0.1])
    X2 = SplitTangent.vertical([0.6, 0.2])
    n1 = warped_norm(space, 1.1, covariant_dt(space, 1.1, X))
    n2 = warped_norm(space, 1.1, covariant_dt(space, 1.1, X2))
    assert n2 == pytest.approx(2.0 * n1, rel=1e-13)


CATALOG_SPACES = [
    ("constant", dict(c=3.0)),
    ("two-plus-cos", {}),
    ("cosh", {}),
    ("affine", {}),
    ("schwarzschild", dict(m=1.0, q=2, r0=2.0, tmax=1.5)),
]


@pytest.mark.parametrize("name,params", CATALOG_SPACES, ids=[c[0] for c in CATALOG_SPACES])
@pytest.mark.parametrize("q", [1, 2, 3])
def test_log_warp_identity_residual_under_1e10(name, params, q):
    fiber = FiberDescriptor.circle() if q == 1 else FiberDescriptor.sphere(q)
    space = WarpedProductSpace(catalog(name, **params), fiber)
    rng = np.random.default_rng(17)
    if space.base.is_circle:
        ts = rng.uniform(0, space.base.period, 100)
    else:
        pad = 0.02 * space.base.length
        ts = rng.uniform(space.base.a + pad, space.base.b - pad, 100)
    assert log_warp_identity_residual(space, ts) <= 1e-10


def test_degenerate_fiber_flag():
    assert WarpedProductSpace(catalog("two-plus-cos"), FiberDescriptor.circle()).degenerate_fiber
    assert not space_1d("two-plus-cos", q=2).degenerate_fiber


def test_slice_data():
    space = space_1d("two-plus-cos", q=2)
    sl = slice_data(space, 0.0)
    assert sl.scale == 3.0 and sl.umbilic and sl.totally_geodesic
    sl = slice_data(space, math.pi / 2)
    assert sl.mean_curvature == pytest.approx(-0.5)
    assert not sl.totally_geodesic


def test_torus_field_fd_cross_check():
    base = TorusBase((TWO_PI, TWO_PI))
    field = ScalarFieldM("3 + cos(t1)*sin(t2)", base)
    rng = np.random.default_rng(5)
    pts = rng.uniform(0, TWO_PI, size=(2, 20))
    val, grad, hess = field.eval(pts)
    h = 1e-4
    for i in range(2):
        shift = np.zeros((2, 1))
        shift[i] = h
        vp = field.eval(pts + shift)[0]
        vm = field.eval(pts - shift)[0]
        fd = (vp - vm) / (2 * h)
        assert np.max(np.abs(fd - grad[i])) < 5e-8
        gp = field.eval(pts + shift)[1]
        gm = field.eval(pts - shift)[1]
        fd_hess = (gp - gm) / (2 * h)
        assert np.max(np.abs(fd_hess - hess[i])) < 5e-8


def test_interval_base_rejects_compact_only_operations():
    space = WarpedProductSpace(catalog("cosh"), FiberDescriptor.sphere(2))
    with pytest.raises(DomainError):
        total_measure(space)
