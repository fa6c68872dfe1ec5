"""Gauss quadrature for the singular weights of the Dunkl oscillator.

Rules come from the Golub-Welsch eigenproblem of the symmetric Jacobi
matrix assembled from monic recurrence coefficients. Wavefunctions passed
to the inner products carry their own Gaussian factor; the products are
multiplied back by the inverse Gaussian at the nodes so that the rule's
weight supplies it exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lgamma, log

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from .errors import NumericalError, UsageError
from .polykernel import (
    MuParams,
    RecurrenceCoeffs,
    generalized_hermite_recurrence,
    jacobi_recurrence,
    laguerre_recurrence,
)

DEFAULT_NODES = 64

__all__ = [
    "DEFAULT_NODES",
    "WeightKind",
    "QuadratureRule",
    "gauss_rule",
    "golub_welsch",
    "inner_product_1d",
    "angular_inner_product",
    "radial_inner_product",
    "cartesian_inner_product",
    "polar_inner_product",
    "dunkl_derivative_apply",
    "antihermiticity_defect",
]


@dataclass(frozen=True)
class WeightKind:
    """One of ``generalized-hermite(mu)``, ``laguerre(alpha)``, ``jacobi(alpha, beta)``."""

    name: str
    params: tuple

    @classmethod
    def generalized_hermite(cls, mu: float) -> "WeightKind":
        return cls("generalized-hermite", (float(mu),))

    @classmethod
    def laguerre(cls, alpha: float) -> "WeightKind":
        return cls("laguerre", (float(alpha),))

    @classmethod
    def jacobi(cls, alpha: float, beta: float) -> "WeightKind":
        return cls("jacobi", (float(alpha), float(beta)))

    def recurrence(self, n: int) -> RecurrenceCoeffs:
        if self.name == "generalized-hermite":
            return generalized_hermite_recurrence(*self.params, n)
        if self.name == "laguerre":
            return laguerre_recurrence(*self.params, n)
        if self.name == "jacobi":
            return jacobi_recurrence(*self.params, n)
        raise UsageError(f"unknown weight kind {self.name!r}")

    def log_total_mass(self) -> float:
        """Logarithm of the integral of the weight."""
        if self.name == "generalized-hermite":
            (mu,) = self.params
            return lgamma(mu + 0.5)
        if self.name == "laguerre":
            (alpha,) = self.params
            return lgamma(alpha + 1)
        alpha, beta = self.params
        return (alpha + beta + 1) * log(2.0) + lgamma(alpha + 1) + lgamma(beta + 1) - lgamma(alpha + beta + 2)

    def __str__(self):
        return f"{self.name}({', '.join(f'{p:g}' for p in self.params)})"


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int
    weight_kind: WeightKind

    def __len__(self):
        return len(self.nodes)

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))


def golub_welsch(coeffs: RecurrenceCoeffs, n_nodes: int, log_mass: float):
    """Nodes and weights of the ``n_nodes``-point Gauss rule for ``coeffs``."""
    diag = coeffs.b[:n_nodes]
    off = np.sqrt(coeffs.u[1:n_nodes])
    try:
        nodes, vecs = eigh_tridiagonal(diag, off)
    except LinAlgError as exc:
        raise NumericalError(
            f"tridiagonal eigensolve failed for {n_nodes} nodes "
            f"(diag range [{diag.min():.3g}, {diag.max():.3g}], off max {off.max() if len(off) else 0:.3g})"
        ) from exc
    weights = np.exp(log_mass) * vecs[0, :] ** 2
    # far-tail weights may underflow to zero; only negative or non-finite values are errors
    if not np.all(np.isfinite(nodes)) or not np.all(weights >= 0) or not weights.any():
        raise NumericalError(f"non-finite nodes or negative weights for {n_nodes} nodes")
    return nodes, weights


def gauss_rule(kind: WeightKind, n_nodes: int = DEFAULT_NODES) -> QuadratureRule:
    """Gauss rule exact to degree ``2 n_nodes - 1`` against ``kind``.

    Examples
    --------
    >>> rule = gauss_rule(WeightKind.generalized_hermite(0.0), 5)
    >>> print(f"{rule.weights.sum():.12f}")
    1.772453850906
    """
    if n_nodes < 1:
        raise UsageError("n_nodes must be >= 1")
    coeffs = kind.recurrence(n_nodes)
    nodes, weights = golub_welsch(coeffs, n_nodes, kind.log_total_mass())
    if kind.name == "generalized-hermite":
        # Even weight: enforce exact mirror symmetry of the rule.
        nodes = 0.5 * (nodes - nodes[::-1])
        weights = 0.5 * (weights + weights[::-1])
    return QuadratureRule(nodes, weights, 2 * n_nodes - 1, kind)


def _check_kind(rule: QuadratureRule, name: str):
    if rule.weight_kind.name != name:
        raise UsageError(f"expected a {name} rule, got {rule.weight_kind}")


def inner_product_1d(f, g, mu: float, rule: QuadratureRule | None = None, gaussian: bool = True):
    """``int conj(g(x)) f(x) |x|^(2 mu) dx`` by generalized Hermite quadrature.

    ``f`` and ``g`` are vectorized callables. With ``gaussian=True`` they are
    assumed to contain a factor ``exp(-x^2/2)`` each, which is stripped at
    the nodes; with ``gaussian=False`` the rule's ``exp(-x^2)`` is taken as
    part of the integrand already.
    """
    if rule is None:
        rule = gauss_rule(WeightKind.generalized_hermite(mu))
    _check_kind(rule, "generalized-hermite")
    if not np.isclose(rule.weight_kind.params[0], mu, rtol=0, atol=1e-14):
        raise UsageError(f"rule built for mu={rule.weight_kind.params[0]}, called with mu={mu}")
    x = rule.nodes
    vals = np.conj(g(x)) * f(x)
    if gaussian:
        vals = vals * np.exp(x * x)
    return np.dot(rule.weights, vals)


def _angular_nodes(mu: MuParams, n_nodes: int):
    """Angles and weights covering [0, 2 pi) via four reflected quadrants."""
    rule = gauss_rule(WeightKind.jacobi(mu.mu_x - 0.5, mu.mu_y - 0.5), n_nodes)
    # |cos|^{2mx}|sin|^{2my} dphi = 2^{-mx-my-1} (1-t)^{mx-1/2} (1+t)^{my-1/2} dt, t = -cos 2phi
    phi0 = 0.5 * np.arccos(-rule.nodes)
    w0 = rule.weights * 2.0 ** (-mu.total - 1)
    phis = np.concatenate([phi0, np.pi - phi0, np.pi + phi0, 2 * np.pi - phi0])
    return phis, np.tile(w0, 4)


def angular_inner_product(f, g, mu: MuParams, n_nodes: int = DEFAULT_NODES):
    """``int_0^{2pi} conj(g) f |cos phi|^(2 mu_x) |sin phi|^(2 mu_y) dphi``."""
    phis, w = _angular_nodes(mu, n_nodes)
    return np.dot(w, np.conj(g(phis)) * f(phis))


def radial_inner_product(f, g, mu: MuParams, n_nodes: int = DEFAULT_NODES, n=0, gaussian: bool = True):
    """``int_0^inf conj(g) f rho^(1 + 2 mu_x + 2 mu_y) drho``.

    Integrates in ``t = rho^2`` against the Laguerre weight with
    ``alpha = 2n + mu_x + mu_y``, which makes the rule exact for radial
    functions of the angular sector ``n``.
    """
    alpha = 2 * float(n) + mu.total
    rule = gauss_rule(WeightKind.laguerre(alpha), n_nodes)
    t = rule.nodes
    rho = np.sqrt(t)
    vals = np.conj(g(rho)) * f(rho) * t ** (-2 * float(n))
    if gaussian:
        vals = vals * np.exp(t)
    return 0.5 * np.dot(rule.weights, vals)


def cartesian_inner_product(f, g, mu: MuParams, n_nodes: int = DEFAULT_NODES, gaussian: bool = True):
    """2-d ``int int conj(g) f |x|^(2 mu_x) |y|^(2 mu_y) dx dy`` on a tensor rule."""
    rx = gauss_rule(WeightKind.generalized_hermite(mu.mu_x), n_nodes)
    ry = gauss_rule(WeightKind.generalized_hermite(mu.mu_y), n_nodes)
    X, Y = np.meshgrid(rx.nodes, ry.nodes, indexing="ij")
    vals = np.conj(g(X, Y)) * f(X, Y)
    if gaussian:
        vals = vals * np.exp(X * X + Y * Y)
    return rx.weights @ vals @ ry.weights


def polar_inner_product(f, g, mu: MuParams, n_nodes: int = DEFAULT_NODES, gaussian: bool = True):
    """Same measure as :func:`cartesian_inner_product` with ``f(rho, phi)``, ``g(rho, phi)``.

    Radial part uses Laguerre ``alpha = mu_x + mu_y`` in ``t = rho^2``, the
    angular part the four-quadrant Jacobi construction.
    """
    rule = gauss_rule(WeightKind.laguerre(mu.total), n_nodes)
    phis, wphi = _angular_nodes(mu, n_nodes)
    R, P = np.meshgrid(np.sqrt(rule.nodes), phis, indexing="ij")
    vals = np.conj(g(R, P)) * f(R, P)
    if gaussian:
        vals = vals * np.exp(R * R)
    return 0.5 * (rule.weights @ vals @ wphi)


def dunkl_derivative_apply(f, mu: float, df=None, h: float = 1e-5):
    """Return ``x -> f'(x) + (mu/x)(f(x) - f(-x))``.

    Objects exposing a ``dunkl(mu)`` method (such as
    :class:`dunkl.wavefunctions.GaussianPolynomial`) are differentiated
    exactly. Otherwise ``df`` is used when given, falling back to a central
    difference with step ``h``. For ``|x| < 1e-6`` the reflection quotient
    is replaced by ``f'(x) + f'(-x)``, its even Taylor limit.
    """
    if hasattr(f, "dunkl"):
        return f.dunkl(mu)
    if df is None:

        def df(x):
            return (f(x + h) - f(x - h)) / (2 * h)

    def apply(x):
        x = np.asarray(x, dtype=float)
        small = np.abs(x) < 1e-6
        safe = np.where(small, 1.0, x)
        quotient = np.where(small, df(x) + df(-x), (f(x) - f(-x)) / safe)
        return df(x) + mu * quotient

    return apply


def antihermiticity_defect(f, g, mu: float, rule: QuadratureRule | None = None):
    """``<g, D f> + <D g, f>``; vanishes when the Dunkl derivative is anti-Hermitian."""
    if rule is None:
        rule = gauss_rule(WeightKind.generalized_hermite(mu))
    Df = dunkl_derivative_apply(f, mu)
    Dg = dunkl_derivative_apply(g, mu)
    return inner_product_1d(Df, g, mu, rule) + inner_product_1d(f, Dg, mu, rule)
