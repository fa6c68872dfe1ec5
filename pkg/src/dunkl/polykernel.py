"""Orthogonal polynomial families used throughout the package.

Laguerre, Jacobi and generalized Hermite polynomials are evaluated with
three-term recurrences. The dual -1 Hahn polynomials are built from their
monic recurrence coefficients together with the finite grid and weights
on which they are orthogonal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial, lgamma

import numpy as np

from .errors import DegenerateFamilyError, DomainError

__all__ = [
    "MuParams",
    "RecurrenceCoeffs",
    "DualMinusOneHahnFamily",
    "mu_number",
    "pochhammer",
    "laguerre_eval",
    "jacobi_eval",
    "generalized_hermite_eval",
    "monic_eval",
    "laguerre_recurrence",
    "jacobi_recurrence",
    "generalized_hermite_recurrence",
    "dual_m1_hahn_family",
    "dual_m1_hahn_eval",
]


@dataclass(frozen=True)
class MuParams:
    """Deformation parameters of the two Dunkl derivatives."""

    mu_x: float
    mu_y: float

    def __post_init__(self):
        for name in ("mu_x", "mu_y"):
            value = float(getattr(self, name))
            if not np.isfinite(value) or value <= -0.5:
                raise DomainError(f"{name} must be a finite real > -1/2, got {value!r}")
            object.__setattr__(self, name, value)

    @property
    def total(self) -> float:
        return self.mu_x + self.mu_y


@dataclass(frozen=True)
class RecurrenceCoeffs:
    """Monic recurrence ``x p_n = p_{n+1} + b_n p_n + u_n p_{n-1}``.

    ``u[0]`` is not used by the recurrence; it is kept so that ``b`` and
    ``u`` share indexing.
    """

    b: np.ndarray
    u: np.ndarray
    degree_max: int

    def __post_init__(self):
        b = np.asarray(self.b, dtype=float)
        u = np.asarray(self.u, dtype=float)
        if b.shape != u.shape or b.ndim != 1 or len(b) < self.degree_max + 1:
            raise ValueError("b and u must be 1-d arrays of length >= degree_max + 1")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "u", u)

    def is_positive(self) -> bool:
        return bool(np.all(self.u[1 : self.degree_max + 1] > 0))

    def norms(self) -> np.ndarray:
        """Products ``u_1 ... u_n`` for n = 0..degree_max (empty product is 1)."""
        return np.cumprod(np.r_[1.0, self.u[1 : self.degree_max + 1]])


@dataclass(frozen=True)
class DualMinusOneHahnFamily:
    alpha: float
    beta: float
    N: int
    xi: float
    zeta: float
    coeffs: RecurrenceCoeffs
    grid: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def norms(self) -> np.ndarray:
        """Orthogonality constants ``v_n = u_1 ... u_n``."""
        return self.coeffs.norms()


def mu_number(n: int, mu: float) -> float:
    """Deformed integer ``[n]_mu = n + mu (1 - (-1)^n)``."""
    return n + (2.0 * mu if n % 2 else 0.0)


def pochhammer(a: float, n: int) -> float:
    """Rising factorial ``(a)_n`` for a non-negative integer length ``n``."""
    if n < 0:
        raise DomainError("pochhammer length must be a non-negative integer")
    out = 1.0
    for i in range(n):
        out *= a + i
    return out


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def laguerre_eval(n: int, alpha: float, x):
    """Generalized Laguerre polynomial ``L_n^(alpha)(x)``.

    Uses the forward recurrence
    ``(k+1) L_{k+1} = (2k+1+alpha-x) L_k - (k+alpha) L_{k-1}``.
    Accepts scalar or array ``x``.
    """
    if n < 0:
        raise DomainError("degree must be non-negative")
    if alpha <= -1:
        raise DomainError(f"Laguerre parameter must be > -1, got {alpha}")
    x, scalar = _as_array(x)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    for k in range(n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return float(cur) if scalar else cur


def jacobi_eval(n: int, alpha: float, beta: float, x):
    """Jacobi polynomial ``P_n^(alpha,beta)(x)`` in the standard normalization."""
    if n < 0:
        raise DomainError("degree must be non-negative")
    if alpha <= -1 or beta <= -1:
        raise DomainError(f"Jacobi parameters must be > -1, got ({alpha}, {beta})")
    x, scalar = _as_array(x)
    prev = np.ones_like(x)
    if n == 0:
        return float(prev) if scalar else prev
    ab = alpha + beta
    cur = (alpha + 1) + (ab + 2) * (x - 1) / 2
    for k in range(2, n + 1):
        c = 2 * k + ab
        # k + ab > 0 and c - 2 > 0 for k >= 2 whenever alpha, beta > -1.
        a1 = 2 * k * (k + ab) * (c - 2)
        a2 = (c - 1) * (alpha * alpha - beta * beta)
        a3 = (c - 2) * (c - 1) * c
        a4 = 2 * (k + alpha - 1) * (k + beta - 1) * c
        prev, cur = cur, ((a2 + a3 * x) * cur - a4 * prev) / a1
    return float(cur) if scalar else cur


def generalized_hermite_eval(n: int, mu: float, x):
    """Normalized generalized Hermite polynomial ``H_n^mu(x)``.

    ``H_{2m+p}^mu(x) = (-1)^m sqrt(m!/Gamma(m+p+mu+1/2)) x^p L_m^(mu-1/2+p)(x^2)``
    with ``p = n mod 2``. The functions ``exp(-x^2/2) H_n^mu`` are
    orthonormal against ``|x|^(2 mu)``.
    """
    if n < 0:
        raise DomainError("degree must be non-negative")
    if mu <= -0.5:
        raise DomainError(f"mu must be > -1/2, got {mu}")
    m, p = divmod(n, 2)
    x, scalar = _as_array(x)
    norm = np.exp(0.5 * (lgamma(m + 1) - lgamma(m + p + mu + 0.5)))
    val = (-1) ** m * norm * x**p * laguerre_eval(m, mu - 0.5 + p, x * x)
    return float(val) if scalar else val


def monic_eval(coeffs: RecurrenceCoeffs, n: int, x):
    """Monic polynomial of degree ``n`` defined by ``coeffs``."""
    if n > coeffs.degree_max + 1:
        raise DomainError(f"degree {n} exceeds the available coefficients")
    x, scalar = _as_array(x)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    for k in range(n):
        uk = coeffs.u[k] if k > 0 else 0.0
        prev, cur = cur, (x - coeffs.b[k]) * cur - uk * prev
    return float(cur) if scalar else cur


def laguerre_recurrence(alpha: float, n: int) -> RecurrenceCoeffs:
    """Monic coefficients for the weight ``x^alpha e^{-x}`` on ``[0, inf)``."""
    if alpha <= -1:
        raise DomainError(f"Laguerre parameter must be > -1, got {alpha}")
    k = np.arange(n + 1, dtype=float)
    return RecurrenceCoeffs(2 * k + alpha + 1, k * (k + alpha), n)


def jacobi_recurrence(alpha: float, beta: float, n: int) -> RecurrenceCoeffs:
    """Monic coefficients for ``(1-x)^alpha (1+x)^beta`` on ``[-1, 1]``."""
    if alpha <= -1 or beta <= -1:
        raise DomainError(f"Jacobi parameters must be > -1, got ({alpha}, {beta})")
    ab = alpha + beta
    b = np.empty(n + 1)
    u = np.zeros(n + 1)
    b[0] = (beta - alpha) / (ab + 2)
    for k in range(1, n + 1):
        c = 2 * k + ab
        b[k] = (beta * beta - alpha * alpha) / (c * (c + 2))
        if k == 1:
            u[k] = 4 * (1 + alpha) * (1 + beta) / ((2 + ab) ** 2 * (3 + ab))
        else:
            u[k] = 4 * k * (k + alpha) * (k + beta) * (k + ab) / (c * c * (c + 1) * (c - 1))
    return RecurrenceCoeffs(b, u, n)


def generalized_hermite_recurrence(mu: float, n: int) -> RecurrenceCoeffs:
    """Monic coefficients for ``|x|^(2 mu) e^{-x^2}`` on the real line."""
    if mu <= -0.5:
        raise DomainError(f"mu must be > -1/2, got {mu}")
    u = np.array([mu_number(k, mu) / 2 for k in range(n + 1)])
    u[0] = 0.0
    return RecurrenceCoeffs(np.zeros(n + 1), u, n)


def _dual_hahn_weights(alpha: float, beta: float, N: int) -> np.ndarray:
    out = np.empty(N + 1)
    if N % 2 == 0:
        m = N // 2
        a2, b2 = alpha / 2, beta / 2
        scale = pochhammer(1 - b2, m) / pochhammer(1 - a2 - b2, m)
        for ell in range(N + 1):
            j, q = divmod(ell, 2)
            num = (-1) ** j * pochhammer(-m, j + q) * pochhammer(1 - a2, j) * pochhammer(1 - a2 - b2, j)
            den = factorial(j) * pochhammer(1 - b2, j) * pochhammer(m + 1 - a2 - b2, j + q)
            out[ell] = num / den * scale
    else:
        a2, b2 = alpha / 2, beta / 2
        half = (N + 1) // 2
        inner = (N - 1) // 2
        scale = pochhammer(0.5 + b2, half) / pochhammer(1 + a2 + b2, half)
        for ell in range(N + 1):
            j, q = divmod(ell, 2)
            num = (-1) ** j * pochhammer(-inner, j) * pochhammer(0.5 + a2, j + q) * pochhammer(1 + a2 + b2, j)
            den = factorial(j) * pochhammer(0.5 + b2, j + q) * pochhammer(N / 2 + 1.5 + a2 + b2, j)
            out[ell] = num / den * scale
    return out


def dual_m1_hahn_family(alpha: float, beta: float, N: int) -> DualMinusOneHahnFamily:
    """Build the dual -1 Hahn family of size ``N + 1``.

    Recurrence ``u_n = 4 [n]_xi [N-n+1]_zeta`` with ``b_n`` and
    ``(xi, zeta)`` taken from the parity-of-N branch; grid
    ``x_l = (-1)^l (2l + 1 -+ (alpha+beta))``; weights normalized so that
    they sum to one, hence ``sum_l w_l Q_n Q_m = delta_nm u_1...u_n``.

    Raises
    ------
    DegenerateFamilyError
        If some ``u_n`` with ``1 <= n <= N`` is not positive.
    """
    if N < 0:
        raise DomainError("N must be a non-negative integer")
    even = N % 2 == 0
    if even:
        xi, zeta = (beta - N - 1) / 2, (alpha - N - 1) / 2
    else:
        xi, zeta = alpha / 2, beta / 2
    n = np.arange(N + 1)
    sign = np.where(n % 2 == 0, 1.0, -1.0)
    if even:
        b = -sign * (2 * xi + 2 * zeta) - 1
    else:
        b = sign * (2 * zeta - 2 * xi) - 1
    u = np.zeros(N + 1)
    for k in range(1, N + 1):
        u[k] = 4 * mu_number(k, xi) * mu_number(N - k + 1, zeta)
    coeffs = RecurrenceCoeffs(b, u, N)
    if not coeffs.is_positive():
        bad = [k for k in range(1, N + 1) if u[k] <= 0]
        raise DegenerateFamilyError(
            f"dual -1 Hahn family (alpha={alpha}, beta={beta}, N={N}) has u_n <= 0 at n={bad}"
        )
    if even:
        grid = sign * (2 * n + 1 - alpha - beta)
    else:
        grid = sign * (2 * n + 1 + alpha + beta)
    weights = _dual_hahn_weights(alpha, beta, N)
    return DualMinusOneHahnFamily(alpha, beta, N, xi, zeta, coeffs, grid.astype(float), weights)


def dual_m1_hahn_eval(family: DualMinusOneHahnFamily, n: int, x):
    """Monic dual -1 Hahn polynomial ``Q_n(x)`` of the given family."""
    if not 0 <= n <= family.N:
        raise DomainError(f"degree must lie in [0, {family.N}], got {n}")
    return monic_eval(family.coeffs, n, x)
