import numpy as np
import pytest
import sympy as sp

from oracles import fd_christoffel, fd_gradient, fd_ricci, fd_scalar_hessian, rel_err, sympy_ricci
from warpcheck import geometry as geo
from warpcheck import jets
from warpcheck.errors import DomainError, SingularityError
from warpcheck.geometry import MetricField, ScalarField
from warpcheck.models import conformal_metric, flat_metric, hyperbolic_metric, sphere_metric

H3 = hyperbolic_metric(3)
E3 = flat_metric(3)


def scalar(n, fn, label="f"):
    return ScalarField(n, fn, label)


def test_flat_christoffel_vanishes():
    assert np.all(geo.christoffel(E3, [0.3, -2.0, 5.0]) == 0.0)


def test_h3_christoffel_at_unit_height():
    gam = geo.christoffel(H3, [0, 0, 1])
    expected = np.zeros((3, 3, 3))
    expected[2, 0, 0] = expected[2, 1, 1] = 1.0
    expected[0, 0, 2] = expected[0, 2, 0] = -1.0
    expected[1, 1, 2] = expected[1, 2, 1] = -1.0
    expected[2, 2, 2] = -1.0
    np.testing.assert_allclose(gam, expected, atol=1e-15)


def test_h3_christoffel_at_height_two():
    gam = geo.christoffel(H3, [0, 0, 2])
    nz = {(2, 0, 0): 0.5, (2, 1, 1): 0.5, (0, 0, 2): -0.5, (0, 2, 0): -0.5,
          (1, 1, 2): -0.5, (1, 2, 1): -0.5, (2, 2, 2): -0.5}
    expected = np.zeros((3, 3, 3))
    for k, v in nz.items():
        expected[k] = v
    np.testing.assert_allclose(gam, expected, atol=1e-15)
    assert rel_err(gam, fd_christoffel(H3, [0, 0, 2])) <= 1e-5


def test_conformal_christoffel_examples():
    xn = scalar(3, lambda x: x[2])
    np.testing.assert_allclose(geo.conformal_christoffel(xn, [0, 0, 1]), geo.christoffel(H3, [0, 0, 1]),
                               atol=1e-15)
    one = scalar(3, lambda x: 1.0)
    assert np.all(geo.conformal_christoffel(one, [1, 2, 3]) == 0.0)
    phi = scalar(3, lambda x: x[0] + x[2])
    gam = geo.conformal_christoffel(phi, [1, 0, 1])
    assert gam[0, 0, 0] == -0.5
    assert gam[2, 0, 0] == 0.5  # Gamma^3_11 = phi_3 / phi
    assert gam[0, 0, 2] == -0.5  # Gamma^1_13 = -phi_3 / phi
    np.testing.assert_allclose(gam, geo.christoffel(conformal_metric(phi), [1, 0, 1]), atol=1e-14)
    with pytest.raises(SingularityError):
        geo.conformal_christoffel(phi, [1, 0, -1])


CONFORMAL_FACTORS = {
    "x_n": (lambda x: x[-1], "half"),
    "1+|x|^2": (lambda x: 1.0 + sum(xi * xi for xi in x), "box"),
    "x1+x3": (lambda x: x[0] + x[2], "positive"),
}


@pytest.mark.parametrize("name", CONFORMAL_FACTORS)
def test_conformal_matches_general_formula(name):
    fn, domain = CONFORMAL_FACTORS[name]
    phi = scalar(3, fn, name)
    metric = conformal_metric(phi)
    rng = np.random.default_rng(3)
    for _ in range(100):
        p = rng.uniform(-3, 3, size=3)
        if domain == "half":
            p[2] = rng.uniform(0.1, 10)
        elif domain == "positive":
            p[0], p[2] = rng.uniform(0.1, 3, size=2)
        diff = geo.conformal_christoffel(phi, p) - geo.christoffel(metric, p)
        assert np.max(np.abs(diff)) <= 1e-10


def test_conformal_hessian_matches_covariant_hessian():
    rng = np.random.default_rng(4)
    phi = scalar(3, lambda x: x[2])
    f = scalar(3, lambda x: x[0] * x[1] / x[2] + x[2] ** 2 - 3.0 * x[0])
    for _ in range(20):
        p = rng.uniform(-3, 3, size=3)
        p[2] = rng.uniform(0.1, 10)
        np.testing.assert_allclose(geo.conformal_hessian(phi, f, p), geo.hessian_scalar(H3, f, p),
                                   atol=1e-10 * (1 + np.abs(geo.hessian_scalar(H3, f, p)).max()))


def test_ricci_flat():
    c = geo.ricci(E3, [1.0, 2.0, 3.0])
    assert np.all(c.ricci == 0.0) and c.scalar_curvature == 0.0


def test_ricci_h3_unit_height():
    c = geo.ricci(H3, [0, 0, 1])
    np.testing.assert_allclose(c.ricci, -2.0 * np.eye(3), atol=1e-14)
    assert c.scalar_curvature == pytest.approx(-6.0, abs=1e-13)
    assert c.normalized_scalar == pytest.approx(-1.0, abs=1e-14)


def test_ricci_unit_sphere_stereographic_origin():
    c = geo.ricci(sphere_metric(2), [0.0, 0.0])
    np.testing.assert_allclose(c.metric_value, 4 * np.eye(2))
    np.testing.assert_allclose(c.ricci, 4 * np.eye(2), atol=1e-13)
    assert rel_err(c.ricci, fd_ricci(sphere_metric(2), [0.0, 0.0])) <= 1e-5


def test_curvature_record_invariants():
    rng = np.random.default_rng(5)
    m = conformal_metric(scalar(4, lambda x: 1.0 + x[0] ** 2 + 0.3 * x[1] * x[3]))
    for _ in range(20):
        p = rng.uniform(-1, 1, size=4)
        c = geo.ricci(m, p)
        assert np.max(np.abs(c.christoffel - c.christoffel.transpose(0, 2, 1))) <= 1e-12
        assert np.max(np.abs(c.ricci - c.ricci.T)) <= 1e-10 * (1 + np.abs(c.ricci).max())
        assert c.scalar_curvature == pytest.approx(np.trace(c.metric_inverse @ c.ricci), rel=1e-12)
        assert c.normalized_scalar == pytest.approx(c.scalar_curvature / 12, rel=1e-15)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_hyperbolic_ricci_is_einstein(n):
    h = hyperbolic_metric(n)
    rng = np.random.default_rng(n)
    for _ in range(25):
        p = rng.uniform(-3, 3, size=n)
        p[-1] = rng.uniform(0.1, 10)
        c = geo.ricci(h, p)
        assert rel_err(c.ricci, -(n - 1) * c.metric_value) <= 1e-9


@pytest.mark.parametrize("d", [2, 3, 4])
def test_sphere_ricci_is_einstein(d):
    s = sphere_metric(d)
    rng = np.random.default_rng(d)
    for _ in range(25):
        p = rng.uniform(-10, 10, size=d) * rng.uniform(0, 1)
        c = geo.ricci(s, p)
        assert rel_err(c.ricci, (d - 1) * c.metric_value) <= 1e-9


def test_ricci_against_symbolic_oracle():
    # non-conformal, non-diagonal metric
    x, y, z = sp.symbols("x y z")
    gs = sp.Matrix([[1 + x**2, x * y, 0], [x * y, 2 + y**2, z], [0, z, 3 + z**2]])
    num = MetricField(3, lambda c: [[1 + c[0] * c[0], c[0] * c[1], 0.0],
                                    [c[0] * c[1], 2 + c[1] * c[1], c[2]],
                                    [0.0, c[2], 3 + c[2] * c[2]]])
    ric_sym = sympy_ricci(gs, (x, y, z))
    p = {x: 0.3, y: -0.7, z: 1.1}
    expected = np.array(ric_sym.subs(p).evalf(), dtype=float)
    np.testing.assert_allclose(geo.ricci(num, [0.3, -0.7, 1.1]).ricci, expected, atol=1e-12)


def test_hessian_examples():
    const = scalar(3, lambda x: 2.5)
    assert np.all(geo.hessian_scalar(H3, const, [0.1, 0.2, 0.3]) == 0.0)
    sq = scalar(3, lambda x: x[0] * x[0])
    np.testing.assert_array_equal(geo.hessian_scalar(E3, sq, [1.0, -2.0, 0.5]), np.diag([2.0, 0.0, 0.0]))
    inv = scalar(3, lambda x: 1.0 / x[2])
    np.testing.assert_allclose(geo.hessian_scalar(H3, inv, [0, 0, 1]), np.eye(3), atol=1e-14)


def test_gradient_norm_examples():
    const = scalar(3, lambda x: 1.0)
    assert geo.gradient_norm_sq(H3, const, [0, 0, 1]) == 0.0
    inv = scalar(3, lambda x: 1.0 / x[2])
    assert geo.gradient_norm_sq(H3, inv, [0, 0, 2]) == pytest.approx(0.25, abs=1e-15)
    assert geo.hyperbolic_gradient_norm_sq(inv, [0, 0, 2]) == pytest.approx(0.25, abs=1e-15)
    lin = scalar(3, lambda x: x[0] + 2.0 * x[1])
    for p in ([0, 0, 0], [5, -1, 2]):
        assert geo.gradient_norm_sq(E3, lin, p) == pytest.approx(5.0, abs=1e-14)
    with pytest.raises(DomainError):
        geo.hyperbolic_gradient_norm_sq(inv, [0, 0, -1])


def test_gradient_norm_specialization_agrees():
    f = scalar(4, lambda x: (x[0] ** 2 + 3 * x[1] - x[2]) / x[3] + 0.5 * x[3])
    h4 = hyperbolic_metric(4)
    rng = np.random.default_rng(6)
    for _ in range(30):
        p = rng.uniform(-3, 3, size=4)
        p[3] = rng.uniform(0.2, 5)
        assert geo.gradient_norm_sq(h4, f, p) == pytest.approx(geo.hyperbolic_gradient_norm_sq(f, p),
                                                               rel=1e-13)


def test_laplacian_examples():
    assert geo.laplacian(H3, scalar(3, lambda x: 7.0), [0, 0, 3]) == 0.0
    inv = scalar(3, lambda x: 1.0 / x[2])
    assert geo.laplacian(H3, inv, [0, 0, 1]) == pytest.approx(3.0, abs=1e-14)
    q = scalar(3, lambda x: x[0] ** 2 + x[1] ** 2)
    assert geo.laplacian(E3, q, [0.5, 9.0, -2.0]) == pytest.approx(4.0, abs=1e-14)


def test_invert_and_singular_metric():
    a = np.array([[0.0, 2.0], [3.0, 1.0]])
    np.testing.assert_allclose(geo.invert(a) @ a, np.eye(2), atol=1e-15)
    sing = MetricField(2, lambda x: [[1.0, 1.0], [1.0, 1.0]])
    with pytest.raises(SingularityError):
        geo.christoffel(sing, [0.0, 0.0])
    with pytest.raises(SingularityError):
        geo.invert(np.diag([1.0, 1e-13]))


def test_asymmetric_metric_rejected():
    bad = MetricField(2, lambda x: [[1.0, x[0]], [0.0, 1.0]])
    with pytest.raises(DomainError):
        geo.christoffel(bad, [0.5, 0.0])


def test_scalar_field_is_deterministic():
    f = scalar(3, lambda x: jets.sqrt(x[0] * x[0] + 1.0) / x[2])
    a, b = f.jet([0.3, 0.1, 2.0]), f.jet([0.3, 0.1, 2.0])
    assert a.value == b.value
    np.testing.assert_array_equal(a.hessian, b.hessian)


# --- AD against finite differences on random points --------------------------

FD_CASES = {
    "H4": (hyperbolic_metric(4), "half"),
    "S3": (sphere_metric(3, 2.0), "box"),
    "conformal": (conformal_metric(ScalarField(3, lambda x: 1.0 + x[0] ** 2 + x[1] * x[2])), "unit"),
}
F_TEST = {4: scalar(4, lambda x: x[0] * x[1] / x[3] + x[2] ** 2),
          3: scalar(3, lambda x: x[0] ** 3 - x[1] * x[2] + 2.0)}


def _point(rng, n, domain):
    if domain == "unit":
        return rng.uniform(0, 1, size=n)
    p = rng.uniform(-3, 3, size=n)
    if domain == "half":
        p[-1] = rng.uniform(0.5, 5)
    return p


@pytest.mark.parametrize("case", FD_CASES)
def test_geometry_matches_finite_differences(case):
    metric, domain = FD_CASES[case]
    f = F_TEST[metric.dim]
    rng = np.random.default_rng(11)
    for _ in range(20):
        p = _point(rng, metric.dim, domain)
        curv = geo.ricci(metric, p)
        assert rel_err(curv.christoffel, fd_christoffel(metric, p)) <= 1e-5
        assert rel_err(curv.ricci, fd_ricci(metric, p)) <= 1e-5
        hess_fd = fd_scalar_hessian(metric, f, p)
        assert rel_err(geo.hessian_scalar(metric, f, p), hess_fd) <= 1e-5
        ginv = np.linalg.inv(metric.value(p))
        g_fd = fd_gradient(f.value, p)
        assert rel_err(geo.gradient_norm_sq(metric, f, p), g_fd @ ginv @ g_fd) <= 1e-5
        assert rel_err(geo.laplacian(metric, f, p), np.sum(ginv * hess_fd)) <= 1e-5
