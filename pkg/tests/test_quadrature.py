from math import gamma, lgamma

import numpy as np
import pytest
from numpy.polynomial.hermite import hermgauss
from scipy.special import beta as beta_fn

from dunkl.errors import UsageError
from dunkl.polykernel import MuParams
from dunkl.quadrature import (
    DEFAULT_NODES,
    WeightKind,
    angular_inner_product,
    antihermiticity_defect,
    cartesian_inner_product,
    dunkl_derivative_apply,
    gauss_rule,
    inner_product_1d,
    polar_inner_product,
    radial_inner_product,
)
from dunkl.wavefunctions import PolarIndex, hermite_gaussian_poly, p_radial, phi_angular, psi_1d


def test_default_nodes():
    assert DEFAULT_NODES == 64


def test_mu0_matches_classical_gauss_hermite():
    rule = gauss_rule(WeightKind.generalized_hermite(0.0), 5)
    x, w = hermgauss(5)
    assert np.allclose(rule.nodes, x, atol=1e-13)
    assert np.allclose(rule.weights, w, atol=1e-13)
    assert rule.exact_degree == 9


def test_mu_to_zero_continuity():
    rule = gauss_rule(WeightKind.generalized_hermite(1e-8), 12)
    x, w = hermgauss(12)
    assert np.allclose(rule.nodes, x, atol=1e-6)
    assert np.allclose(rule.weights, w, atol=1e-6)


@pytest.mark.parametrize("m", [0.0, 0.3, 1.7])
def test_generalized_hermite_rule_symmetric_positive(m):
    rule = gauss_rule(WeightKind.generalized_hermite(m), 9)
    assert np.all(rule.weights > 0)
    assert np.allclose(rule.nodes, -rule.nodes[::-1], atol=1e-14)
    assert np.allclose(rule.weights, rule.weights[::-1], rtol=1e-14)
    assert rule.weights.sum() == pytest.approx(gamma(m + 0.5), rel=1e-13)


@pytest.mark.parametrize("n", [1, 4, 10])
@pytest.mark.parametrize("m", [-0.3, 0.0, 0.8])
def test_generalized_hermite_moments(n, m):
    rule = gauss_rule(WeightKind.generalized_hermite(m), n)
    for d in range(2 * n):
        exact = 0.0 if d % 2 else gamma((d + 1) / 2 + m)
        scale = rule.integrate(np.abs(rule.nodes) ** d)
        assert abs(rule.integrate(rule.nodes**d) - exact) <= 1e-12 * scale


@pytest.mark.parametrize("n", [1, 5, 12])
@pytest.mark.parametrize("alpha", [-0.5, 0.0, 2.3])
def test_laguerre_moments(n, alpha):
    rule = gauss_rule(WeightKind.laguerre(alpha), n)
    for d in range(2 * n):
        exact = np.exp(lgamma(d + alpha + 1))
        assert rule.integrate(rule.nodes**d) == pytest.approx(exact, rel=1e-12)


@pytest.mark.parametrize("n", [1, 3, 8])
@pytest.mark.parametrize("ab", [(0.0, 0.0), (-0.3, 0.6), (1.5, 2.0)])
def test_jacobi_moments(n, ab):
    a, b = ab
    rule = gauss_rule(WeightKind.jacobi(a, b), n)
    # moments of (1+x)^k via the Beta integral
    for d in range(2 * n):
        exact = 2.0 ** (a + b + d + 1) * beta_fn(a + 1, b + d + 1)
        assert rule.integrate((1 + rule.nodes) ** d) == pytest.approx(exact, rel=1e-12)


def test_jacobi_n3_second_moment():
    a, b = 0.2, 0.7
    rule = gauss_rule(WeightKind.jacobi(a, b), 3)
    # (x)^2 = ((1+x) - 1)^2 expanded against Beta moments
    m = [2.0 ** (a + b + k + 1) * beta_fn(a + 1, b + k + 1) for k in range(3)]
    assert rule.integrate(rule.nodes**2) == pytest.approx(m[2] - 2 * m[1] + m[0], rel=1e-13)


def test_inner_product_1d_examples():
    m = 0.35
    rule = gauss_rule(WeightKind.generalized_hermite(m))

    def psi(n):
        return lambda x: psi_1d(n, m, x)

    assert inner_product_1d(psi(0), psi(0), m, rule) == pytest.approx(1.0, abs=1e-12)
    assert inner_product_1d(psi(0), psi(1), m, rule) == pytest.approx(0.0, abs=1e-12)
    assert inner_product_1d(psi(2), psi(4), m, rule) == pytest.approx(0.0, abs=1e-10)


def test_inner_product_1d_rejects_wrong_rule():
    with pytest.raises(UsageError):
        inner_product_1d(np.cos, np.cos, 0.3, gauss_rule(WeightKind.laguerre(0.3), 4))
    with pytest.raises(UsageError):
        inner_product_1d(np.cos, np.cos, 0.3, gauss_rule(WeightKind.generalized_hermite(0.4), 4))


def test_inner_product_1d_without_gaussian():
    m = 0.5
    rule = gauss_rule(WeightKind.generalized_hermite(m), 6)
    val = inner_product_1d(lambda x: x**2, lambda x: np.ones_like(x), m, rule, gaussian=False)
    assert val == pytest.approx(gamma(1.5 + m))


def test_angular_rule_beta_integral():
    for mu in (MuParams(0.3, 0.5), MuParams(0.0, 0.0), MuParams(1.2, -0.3)):
        one = angular_inner_product(lambda p: np.ones_like(p), lambda p: np.ones_like(p), mu, 8)
        assert one == pytest.approx(2 * beta_fn(mu.mu_x + 0.5, mu.mu_y + 0.5), rel=1e-12)


def test_angular_examples():
    mu = MuParams(0.3, 0.5)

    def phi(n, sx, sy):
        idx = PolarIndex(0, n, sx, sy)
        return lambda p: phi_angular(idx, mu, p)

    assert angular_inner_product(phi(0, 1, 1), phi(0, 1, 1), mu, 16) == pytest.approx(1.0, abs=1e-10)
    assert angular_inner_product(phi(1, 1, 1), phi(2, 1, 1), mu, 16) == pytest.approx(0.0, abs=1e-10)
    for n in (1, 2, 3):
        for m in (1, 2):
            assert angular_inner_product(phi(n, 1, 1), phi(m, -1, -1), mu, 16) == pytest.approx(0.0, abs=1e-12)


def test_radial_examples():
    mu = MuParams(0.3, 0.5)
    P0 = lambda r: p_radial(0, 0, mu, r)  # noqa: E731
    P1 = lambda r: p_radial(1, 0, mu, r)  # noqa: E731
    assert radial_inner_product(P0, P0, mu, 16) == pytest.approx(1.0, abs=1e-12)
    assert radial_inner_product(P0, P1, mu, 16) == pytest.approx(0.0, abs=1e-10)
    g = radial_inner_product(lambda r: np.ones_like(r), lambda r: np.ones_like(r), mu, 4, gaussian=False)
    assert g == pytest.approx(gamma(1 + mu.total) / 2, rel=1e-13)
    # per-sector rule: n = 3/2 functions carry rho^3
    Pa = lambda r: p_radial(0, 1.5, mu, r)  # noqa: E731
    Pb = lambda r: p_radial(2, 1.5, mu, r)  # noqa: E731
    assert radial_inner_product(Pa, Pa, mu, 8, n=1.5) == pytest.approx(1.0, abs=1e-12)
    assert radial_inner_product(Pa, Pb, mu, 8, n=1.5) == pytest.approx(0.0, abs=1e-12)


def test_two_dimensional_measures_agree():
    mu = MuParams(0.3, 0.5)

    def f_xy(x, y):
        return (1 + x * x + 0.5 * y**4) * np.exp(-0.5 * (x * x + y * y))

    def f_polar(r, p):
        return f_xy(r * np.cos(p), r * np.sin(p))

    a = cartesian_inner_product(f_xy, f_xy, mu, 16)
    b = polar_inner_product(f_polar, f_polar, mu, 16)
    assert a == pytest.approx(b, rel=1e-12)


def test_dunkl_derivative_examples():
    m = 0.4
    x = np.array([-1.3, -1e-8, 0.0, 0.7, 2.0])
    const = dunkl_derivative_apply(lambda t: np.full_like(np.asarray(t, dtype=float), 2.0), m, df=lambda t: 0 * t)
    assert np.allclose(const(x), 0.0)
    lin = dunkl_derivative_apply(lambda t: t, m, df=lambda t: np.ones_like(t))
    assert np.allclose(lin(x), 1 + 2 * m)
    quad = dunkl_derivative_apply(lambda t: t * t, m)
    assert np.allclose(quad(x), 2 * x, atol=1e-8)
    exact = dunkl_derivative_apply(hermite_gaussian_poly(3, m), m)
    fd = dunkl_derivative_apply(lambda t: psi_1d(3, m, t), m)
    grid = np.linspace(-2, 2, 11)
    assert np.allclose(exact(grid), fd(grid), atol=1e-7)


def test_antihermiticity_examples():
    m = 0.6
    rule = gauss_rule(WeightKind.generalized_hermite(m), 32)
    h = [hermite_gaussian_poly(n, m) for n in range(2)]
    assert abs(antihermiticity_defect(h[0], h[0], m, rule)) < 1e-14
    assert abs(antihermiticity_defect(h[1], h[0], m, rule)) < 1e-10
    assert abs(antihermiticity_defect(h[1], h[1], m, rule)) < 1e-14


@pytest.mark.parametrize("m", [0.0, 0.3, 1.7])
def test_antihermiticity_first_eight(m):
    rule = gauss_rule(WeightKind.generalized_hermite(m), 32)
    basis = [hermite_gaussian_poly(n, m) for n in range(8)]
    worst = max(abs(antihermiticity_defect(f, g, m, rule)) for f in basis for g in basis)
    assert worst < 1e-10


def test_antihermiticity_fd_path():
    # generic callables take the finite-difference route
    m = 0.3
    rule = gauss_rule(WeightKind.generalized_hermite(m), 24)
    f = lambda x: psi_1d(2, m, x)  # noqa: E731
    g = lambda x: psi_1d(1, m, x)  # noqa: E731
    assert abs(antihermiticity_defect(f, g, m, rule)) < 1e-7


def test_rule_validation():
    with pytest.raises(UsageError):
        gauss_rule(WeightKind.laguerre(0.0), 0)
    with pytest.raises(UsageError):
        WeightKind("chebyshev", ()).recurrence(3)
    assert str(WeightKind.jacobi(0.5, 1.0)) == "jacobi(0.5, 1)"
    assert gauss_rule(WeightKind.generalized_hermite(0.2), 3).weight_kind.name == "generalized-hermite"
