"""Separated eigenfunctions of the planar Dunkl oscillator.

Cartesian states ``|n_x, n_y>`` are products of generalized Hermite
functions. Polar states ``|k, n; s_x, s_y>`` are a Laguerre radial factor
times one of four angular families selected by the reflection parities.
Angular quantum numbers ``n`` are exact :class:`fractions.Fraction` values
(integers when ``s_x s_y = 1``, half-integers otherwise).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lgamma, log, sqrt

import numpy as np
from numpy.polynomial import Polynomial

from .errors import DomainError, ZeroFunctionError
from .polykernel import MuParams, generalized_hermite_eval, jacobi_eval, laguerre_eval, mu_number

__all__ = [
    "CartesianIndex",
    "PolarIndex",
    "JacobiDunklIndex",
    "GaussianPolynomial",
    "cartesian_indices_at_level",
    "polar_indices_at_level",
    "energy_cartesian",
    "energy_polar",
    "psi_1d",
    "hermite_gaussian_poly",
    "psi_cartesian",
    "phi_angular",
    "p_radial",
    "psi_polar",
    "separation_constant",
    "jacobi_dunkl_eigenvalue",
    "jacobi_dunkl_F",
    "j2_apply",
    "b_phi_apply",
    "dunkl_1d_residual",
]


def _sign(s) -> int:
    if s in (1, "+", "+1"):
        return 1
    if s in (-1, "-", "-1"):
        return -1
    raise DomainError(f"parity must be +1 or -1, got {s!r}")


def _half_integer(n) -> Fraction:
    if isinstance(n, str):
        n = Fraction(n)
    frac = Fraction(n).limit_denominator(2) if isinstance(n, float) else Fraction(n)
    if isinstance(n, float) and float(frac) != n:
        raise DomainError(f"{n!r} is not an integer or half-integer")
    if frac.denominator not in (1, 2):
        raise DomainError(f"{n!r} is not an integer or half-integer")
    return frac


def _fmt_half(n: Fraction) -> str:
    return str(n.numerator) if n.denominator == 1 else f"{n.numerator}/{n.denominator}"


def _pm(s: int) -> str:
    return "+" if s > 0 else "-"


@dataclass(frozen=True)
class CartesianIndex:
    n_x: int
    n_y: int

    def __post_init__(self):
        if int(self.n_x) != self.n_x or int(self.n_y) != self.n_y or self.n_x < 0 or self.n_y < 0:
            raise DomainError(f"Cartesian quantum numbers must be non-negative integers: {self}")
        object.__setattr__(self, "n_x", int(self.n_x))
        object.__setattr__(self, "n_y", int(self.n_y))

    @property
    def level(self) -> int:
        return self.n_x + self.n_y

    def label(self) -> str:
        return f"|{self.n_x},{self.n_y}⟩"


@dataclass(frozen=True)
class PolarIndex:
    k: int
    n: Fraction
    s_x: int
    s_y: int

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 0:
            raise DomainError(f"radial index k must be a non-negative integer, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "s_x", _sign(self.s_x))
        object.__setattr__(self, "s_y", _sign(self.s_y))
        n = _half_integer(self.n)
        object.__setattr__(self, "n", n)
        if self.s_x * self.s_y == 1:
            if n.denominator != 1 or n < 0:
                raise DomainError(f"s_x s_y = +1 requires integer n >= 0, got {n}")
            if n == 0 and self.s_x == -1:
                raise ZeroFunctionError("Phi_0^{--} vanishes identically")
        elif n.denominator != 2 or n < 0:
            raise DomainError(f"s_x s_y = -1 requires half-integer n > 0, got {n}")

    @property
    def level(self) -> int:
        return int(2 * (self.k + self.n))

    @property
    def sector(self) -> int:
        return self.s_x * self.s_y

    def label(self) -> str:
        return f"|{self.k},{_fmt_half(self.n)};{_pm(self.s_x)}{_pm(self.s_y)}⟩"


@dataclass(frozen=True)
class JacobiDunklIndex:
    """Eigenfunction label of the angular operator: ``epsilon = s_x s_y``, ``branch`` = sign of the eigenvalue."""

    n: Fraction
    epsilon: int
    branch: int = 1

    def __post_init__(self):
        object.__setattr__(self, "epsilon", _sign(self.epsilon))
        object.__setattr__(self, "branch", _sign(self.branch))
        n = _half_integer(self.n)
        object.__setattr__(self, "n", n)
        if self.epsilon == 1 and (n.denominator != 1 or n < 0):
            raise DomainError(f"epsilon = +1 requires integer n >= 0, got {n}")
        if self.epsilon == -1 and (n.denominator != 2 or n < 0):
            raise DomainError(f"epsilon = -1 requires half-integer n > 0, got {n}")


def cartesian_indices_at_level(N: int) -> list[CartesianIndex]:
    """Basis of level ``N`` ordered by increasing ``n_x``."""
    return [CartesianIndex(m, N - m) for m in range(N + 1)]


def polar_indices_at_level(N: int) -> list[PolarIndex]:
    """Polar states of level ``N`` ordered by ``n``, then (++, --) or (+-, -+)."""
    out = []
    for twice_n in range(N % 2, N + 1, 2):
        n = Fraction(twice_n, 2)
        k = (N - twice_n) // 2
        if N % 2 == 0:
            out.append(PolarIndex(k, n, 1, 1))
            if n > 0:
                out.append(PolarIndex(k, n, -1, -1))
        else:
            out.append(PolarIndex(k, n, 1, -1))
            out.append(PolarIndex(k, n, -1, 1))
    return out


def energy_cartesian(idx: CartesianIndex, mu: MuParams) -> float:
    return idx.n_x + idx.n_y + mu.mu_x + mu.mu_y + 1


def energy_polar(idx: PolarIndex, mu: MuParams) -> float:
    if not isinstance(idx, PolarIndex):
        raise DomainError(f"expected a PolarIndex, got {idx!r}")
    return 2 * (idx.k + float(idx.n)) + mu.mu_x + mu.mu_y + 1


def psi_1d(n: int, mu: float, x):
    """One-dimensional eigenfunction ``exp(-x^2/2) H_n^mu(x)``."""
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5 * x * x) * generalized_hermite_eval(n, mu, x)


class GaussianPolynomial:
    """``p(x) exp(-x^2/2)`` with exact derivative and Dunkl derivative."""

    def __init__(self, poly: Polynomial):
        coef = poly.coef if isinstance(poly, Polynomial) else poly
        self.poly = Polynomial(np.asarray(coef, dtype=float))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.poly(x) * np.exp(-0.5 * x * x)

    def derivative(self) -> "GaussianPolynomial":
        return GaussianPolynomial(self.poly.deriv() - Polynomial([0, 1]) * self.poly)

    def dunkl(self, mu: float) -> "GaussianPolynomial":
        # (p(x) - p(-x))/x keeps the odd coefficients shifted down one degree, doubled.
        c = self.poly.coef
        reflected = np.zeros(max(len(c) - 1, 1))
        reflected[0 : len(c) - 1 : 2] = 2.0 * c[1::2]
        return GaussianPolynomial(self.derivative().poly + Polynomial(float(mu) * reflected))

    def __add__(self, other):
        return GaussianPolynomial(self.poly + other.poly)

    def __mul__(self, scalar):
        return GaussianPolynomial(Polynomial(self.poly.coef * scalar))

    __rmul__ = __mul__


def hermite_gaussian_poly(n: int, mu: float) -> GaussianPolynomial:
    """``psi_n`` as an explicit polynomial times Gaussian.

    Built from the orthonormal recurrence
    ``x h_k = a_{k+1} h_{k+1} + a_k h_{k-1}`` with ``a_k = sqrt([k]_mu / 2)``,
    an independent route from the Laguerre closed form of :func:`psi_1d`.
    """
    if mu <= -0.5:
        raise DomainError(f"mu must be > -1/2, got {mu}")
    x = Polynomial([0.0, 1.0])
    prev = Polynomial([0.0])
    cur = Polynomial([np.exp(-0.5 * lgamma(mu + 0.5))])
    for k in range(n):
        a_next = sqrt(mu_number(k + 1, mu) / 2)
        a_k = sqrt(mu_number(k, mu) / 2)
        prev, cur = cur, (x * cur - a_k * prev) / a_next
    return GaussianPolynomial(cur)


def psi_cartesian(idx: CartesianIndex, mu: MuParams, x, y):
    return psi_1d(idx.n_x, mu.mu_x, x) * psi_1d(idx.n_y, mu.mu_y, y)


def _angular_log_norm2(n: Fraction, s_x: int, s_y: int, mu: MuParams) -> float:
    mx, my = mu.mu_x, mu.mu_y
    s = mx + my
    nf = float(n)
    if s_x == 1 and s_y == 1:
        # (2n+s) Gamma(n+s) -> Gamma(s+1) at n = 0
        head = lgamma(s + 1) if n == 0 else log(2 * nf + s) + lgamma(nf + s)
        return head + lgamma(nf + 1) - log(2) - lgamma(nf + mx + 0.5) - lgamma(nf + my + 0.5)
    if s_x == -1 and s_y == -1:
        return log(2 * nf + s) + lgamma(nf + s + 1) + lgamma(nf) - log(2) - lgamma(nf + mx + 0.5) - lgamma(nf + my + 0.5)
    # the (n-1/2)! factor of the odd-sector prefactors is Gamma(n+1/2)
    common = log(2 * nf + s) + lgamma(nf + s + 0.5) + lgamma(nf + 0.5) - log(2)
    if s_x == 1:
        return common - lgamma(nf + mx) - lgamma(nf + my + 1)
    return common - lgamma(nf + mx + 1) - lgamma(nf + my)


def phi_angular(idx: PolarIndex, mu: MuParams, phi):
    """Normalized angular factor ``Phi_n^{s_x s_y}(phi)``.

    Orthonormal on ``[0, 2 pi)`` against ``|cos phi|^(2 mu_x) |sin phi|^(2 mu_y)``,
    with ``Phi(pi - phi) = s_x Phi(phi)`` and ``Phi(-phi) = s_y Phi(phi)``.
    """
    phi = np.asarray(phi, dtype=float)
    n, sx, sy = idx.n, idx.s_x, idx.s_y
    mx, my = mu.mu_x, mu.mu_y
    t = -np.cos(2 * phi)
    norm = np.exp(0.5 * _angular_log_norm2(n, sx, sy, mu))
    if sx == 1 and sy == 1:
        body = jacobi_eval(int(n), mx - 0.5, my - 0.5, t)
    elif sx == -1 and sy == -1:
        body = np.sin(phi) * np.cos(phi) * jacobi_eval(int(n) - 1, mx + 0.5, my + 0.5, t)
    elif sx == 1:
        body = np.sin(phi) * jacobi_eval(int(n - Fraction(1, 2)), mx - 0.5, my + 0.5, t)
    else:
        body = np.cos(phi) * jacobi_eval(int(n - Fraction(1, 2)), mx + 0.5, my - 0.5, t)
    return norm * body


def p_radial(k: int, n, mu: MuParams, rho):
    """Normalized radial factor, orthonormal against ``rho^(1 + 2 mu_x + 2 mu_y)``."""
    if k < 0:
        raise DomainError("k must be non-negative")
    nf = float(_half_integer(n))
    alpha = 2 * nf + mu.total
    rho = np.asarray(rho, dtype=float)
    t = rho * rho
    norm = np.exp(0.5 * (log(2) + lgamma(k + 1) - lgamma(k + alpha + 1)))
    return norm * np.exp(-0.5 * t) * rho ** (2 * nf) * laguerre_eval(k, alpha, t)


def psi_polar(idx: PolarIndex, mu: MuParams, rho, phi):
    return p_radial(idx.k, idx.n, mu, rho) * phi_angular(idx, mu, phi)


def separation_constant(n, mu: MuParams) -> float:
    """``m^2 = 4 n (n + mu_x + mu_y)``."""
    nf = float(_half_integer(n))
    return 4 * nf * (nf + mu.total)


def jacobi_dunkl_eigenvalue(idx: JacobiDunklIndex, mu: MuParams) -> float:
    nf = float(idx.n)
    if idx.epsilon == 1:
        lam2 = 4 * nf * (nf + mu.total)
    else:
        lam2 = 4 * (nf + mu.mu_x) * (nf + mu.mu_y)
    return idx.branch * sqrt(lam2)


def jacobi_dunkl_F(idx: JacobiDunklIndex, mu: MuParams, phi):
    """Normalized eigenfunction of the angular operator ``J = i(x D_y - y D_x)``.

    ``epsilon = +1``: ``(Phi^{++} + i b Phi^{--}) / sqrt 2``;
    ``epsilon = -1``: ``(Phi^{-+} - i b Phi^{+-}) / sqrt 2``, with ``b`` the
    branch sign. At ``n = 0`` the function is ``Phi_0^{++}`` itself.
    """
    n, b = idx.n, idx.branch
    if idx.epsilon == 1:
        even = phi_angular(PolarIndex(0, n, 1, 1), mu, phi)
        if n == 0:
            return even.astype(complex)
        odd = phi_angular(PolarIndex(0, n, -1, -1), mu, phi)
        return (even + 1j * b * odd) / sqrt(2)
    first = phi_angular(PolarIndex(0, n, -1, 1), mu, phi)
    second = phi_angular(PolarIndex(0, n, 1, -1), mu, phi)
    return (first - 1j * b * second) / sqrt(2)


def _d1(f, x, h):
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)


def _d2(f, x, h):
    return (-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) - f(x + 2 * h)) / (12 * h * h)


def j2_apply(F, mu: MuParams, phi, h: float = 1e-3):
    """Apply ``i [d/dphi + mu_y cot(phi)(1 - R_y) - mu_x tan(phi)(1 - R_x)]`` numerically.

    ``R_x: phi -> pi - phi`` and ``R_y: phi -> -phi``; the derivative uses a
    five-point stencil, so ``phi`` must avoid multiples of ``pi/2``.
    """
    phi = np.asarray(phi, dtype=float)
    f = F(phi)
    return 1j * (
        _d1(F, phi, h)
        + mu.mu_y / np.tan(phi) * (f - F(-phi))
        - mu.mu_x * np.tan(phi) * (f - F(np.pi - phi))
    )


def b_phi_apply(F, mu: MuParams, phi, h: float = 1e-3):
    """Apply the angular part of the Hamiltonian (the operator whose eigenvalue is ``m^2 / 2``)."""
    phi = np.asarray(phi, dtype=float)
    f = F(phi)
    c, s = np.cos(phi), np.sin(phi)
    return (
        -0.5 * _d2(F, phi, h)
        + (mu.mu_x * s / c - mu.mu_y * c / s) * _d1(F, phi, h)
        + mu.mu_x * (f - F(np.pi - phi)) / (2 * c * c)
        + mu.mu_y * (f - F(-phi)) / (2 * s * s)
    )


def dunkl_1d_residual(n: int, mu: float, x, h: float = 1e-3):
    """Residual of the 1-d Schrodinger equation for ``psi_n`` at points ``x`` (nonzero)."""
    x = np.asarray(x, dtype=float)

    def f(t):
        return psi_1d(n, mu, t)

    energy = n + mu + 0.5
    return (
        _d2(f, x, h)
        + 2 * mu / x * _d1(f, x, h)
        + (2 * energy - x * x) * f(x)
        - mu / (x * x) * (f(x) - f(-x))
    )
