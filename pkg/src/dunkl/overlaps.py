"""Cartesian to polar overlap coefficients.

The overlaps pass through the eigenbasis ``|q_l>`` of the operator ``Q``
whose level-``N`` block is tridiagonal in the Cartesian basis. Its
eigenvectors are dual -1 Hahn polynomials evaluated on the spectrum
``q_l = (-1)^(l+1) (l + mu_x + mu_y + 1/2)``. Each pair of ``q`` states is a
unit-modulus mixture of the two polar states sharing the same ``(k, n)``.

Three independent routes produce every table: the closed form, numerical
diagonalization of the ``Q`` block, and quadrature of the separated
wavefunctions. Row phases follow one convention: the first nonzero entry
of each row is real and positive.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import sqrt

import numpy as np

from .errors import DegeneracyError, DomainError, UsageError
from .operator_algebra import LevelBlock, symmetry_block
from .polykernel import MuParams, dual_m1_hahn_eval, dual_m1_hahn_family, mu_number
from .quadrature import DEFAULT_NODES, polar_inner_product
from .wavefunctions import (
    CartesianIndex,
    PolarIndex,
    cartesian_indices_at_level,
    energy_cartesian,
    energy_polar,
    polar_indices_at_level,
    psi_cartesian,
    psi_polar,
)

__all__ = [
    "OverlapTable",
    "MixingCoefficient",
    "q_eigenvalues",
    "q_labels",
    "mixing_coefficient",
    "q_overlap_closed_form",
    "q_overlap_oracle",
    "polar_cartesian_overlap",
    "overlap_quadrature_oracle",
    "overlap_quadrature_table",
    "fix_row_phases",
    "table_discrepancy",
    "recurrence_residual",
    "oracle_triangle",
]

PROVENANCES = ("closed-form", "diagonalization", "quadrature")
_DEGENERACY_GAP = 1e-8


@dataclass(frozen=True)
class OverlapTable:
    """Overlap matrix at one level: rows are ``q`` or polar states, columns ``|m, N-m>``."""

    level: int
    matrix: np.ndarray
    row_labels: tuple
    provenance: str
    basis: str = "q"
    notes: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise UsageError(f"unknown provenance {self.provenance!r}")
        if self.basis not in ("q", "polar"):
            raise UsageError(f"unknown row basis {self.basis!r}")

    @property
    def sector(self) -> int:
        return 1 if self.level % 2 == 0 else -1

    @property
    def col_labels(self) -> tuple:
        return tuple(c.label() for c in cartesian_indices_at_level(self.level))

    def unitarity_defect(self) -> float:
        T = self.matrix
        return float(np.abs(T @ T.conj().T - np.eye(len(T))).max())

    def records(self):
        for i, row in enumerate(self.row_labels):
            for j, col in enumerate(self.col_labels):
                z = complex(self.matrix[i, j])
                yield row, col, z.real, z.imag, abs(z)

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if header:
            writer.writerow(["row", "column", "real", "imag", "modulus"])
        for row, col, re, im, mod in self.records():
            writer.writerow([row, col, f"{re:.16e}", f"{im:.16e}", f"{mod:.16e}"])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "sector": self.sector,
            "provenance": self.provenance,
            "basis": self.basis,
            "rows": list(self.row_labels),
            "columns": list(self.col_labels),
            "real": [[float(v) for v in r] for r in self.matrix.real],
            "imag": [[float(v) for v in r] for r in self.matrix.imag],
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


@dataclass(frozen=True)
class MixingCoefficient:
    n: Fraction
    sector: int
    value: complex


def q_eigenvalues(N: int, mu: MuParams) -> np.ndarray:
    """Spectrum ``q_l = (-1)^(l+1) (l + mu_x + mu_y + 1/2)`` of the level-``N`` ``Q`` block."""
    l = np.arange(N + 1)
    return np.where(l % 2 == 0, -1.0, 1.0) * (l + mu.total + 0.5)


def q_labels(N: int) -> tuple:
    return tuple(f"q_{l}" for l in range(N + 1))


def mixing_coefficient(n, sector: int, mu: MuParams) -> MixingCoefficient:
    """Unit-modulus coefficient mixing the two polar states of angular number ``n``.

    Examples
    --------
    >>> mixing_coefficient(1, 1, MuParams(0.0, 0.0)).value
    -1j
    """
    s = mu.total
    n = Fraction(n).limit_denominator(2) if isinstance(n, float) else Fraction(n)
    nf = float(n)
    if sector == 1:
        if n.denominator != 1 or n <= 0:
            raise DomainError(f"sector + needs an integer n > 0, got {n}")
        value = complex(s, -2 * sqrt(nf * (nf + s))) / (2 * nf + s)
    elif sector == -1:
        if n.denominator != 2 or n <= 0:
            raise DomainError(f"sector - needs a half-integer n > 0, got {n}")
        value = complex(mu.mu_x - mu.mu_y, 2 * sqrt((nf + mu.mu_x) * (nf + mu.mu_y))) / (2 * nf + s)
    else:
        raise DomainError(f"sector must be +1 or -1, got {sector}")
    return MixingCoefficient(n, sector, value)


def _first_nonzero(row: np.ndarray, rel: float = 1e-9) -> int:
    mags = np.abs(row)
    return int(np.flatnonzero(mags > rel * mags.max())[0])


def fix_row_phases(matrix: np.ndarray) -> np.ndarray:
    """Rotate each row so its first nonzero entry is real and positive."""
    out = np.array(matrix, dtype=complex)
    for i, row in enumerate(out):
        if not np.any(row):
            continue
        z = row[_first_nonzero(row)]
        out[i] = row * (abs(z) / z)
    return out


def _hahn_setup(N: int, mu: MuParams):
    """Family and the sign relating ``q_l`` to the grid (``x = 2 s q``)."""
    if N % 2 == 0:
        return dual_m1_hahn_family(2 * mu.mu_y + N + 1, 2 * mu.mu_x + N + 1, N), 1.0
    return dual_m1_hahn_family(2 * mu.mu_x, 2 * mu.mu_y, N), -1.0


# candidate assignments of grid weights to the q_l rows
_INDEXINGS = {
    "w_{N-l}": lambda N: np.arange(N, -1, -1),
    "w_l": lambda N: np.arange(N + 1),
}


def _a_coeffs(N: int, mu: MuParams) -> np.ndarray:
    """Off-diagonal ``A_m = (-1)^m sqrt([m]_mu_x [N-m+1]_mu_y)``, ``m = 1..N`` (index 0 unused)."""
    a = np.zeros(N + 1)
    for m in range(1, N + 1):
        a[m] = (-1) ** m * sqrt(mu_number(m, mu.mu_x) * mu_number(N - m + 1, mu.mu_y))
    return a


def _b_coeffs(N: int, mu: MuParams) -> np.ndarray:
    m = np.arange(N + 1)
    sign = np.where(m % 2 == 0, 1.0, -1.0)
    if N % 2 == 0:
        return -sign * mu.total - 0.5
    return sign * (mu.mu_x - mu.mu_y) + 0.5


def q_overlap_closed_form(N: int, mu: MuParams) -> OverlapTable:
    """Closed-form ``<q_l | m, N-m>`` from dual -1 Hahn polynomials.

    Entry ``sqrt(w) P_m(q_l) / (A_1 ... A_m)`` with ``P_m(q) = (2s)^-m Q_m(2 s q)``
    the monic polynomial in ``q`` (``s = +1`` for even ``N``, ``-1`` for odd)
    and ``w`` the normalized weight of the grid point carrying ``q_l``.
    """
    if N < 0:
        raise DomainError("N must be non-negative")
    family, sgn = _hahn_setup(N, mu)
    q = q_eigenvalues(N, mu)
    a = _a_coeffs(N, mu)
    values = np.zeros((N + 1, N + 1))
    for l in range(N + 1):
        x = 2 * sgn * q[l]
        scale = 1.0
        for m in range(N + 1):
            if m > 0:
                scale *= 2 * sgn * a[m]
            values[l, m] = dual_m1_hahn_eval(family, m, x) / scale
    if np.any(family.weights <= 0):
        raise DomainError("non-positive dual -1 Hahn weight; mu must exceed -1/2")
    # the weight attached to q_l is fixed by requiring a unitary table
    best = None
    for name, index in _INDEXINGS.items():
        T = np.sqrt(family.weights[index(N)])[:, None] * values
        defect = float(np.abs(T @ T.T - np.eye(N + 1)).max())
        if best is None or defect < best[2]:
            best = (name, T, defect)
    name, T, _ = best
    return OverlapTable(N, fix_row_phases(T), q_labels(N), "closed-form", "q", (f"weight indexing {name}",))


def q_overlap_oracle(N: int, mu: MuParams) -> OverlapTable:
    """Eigenvectors of the ``Q`` level block, labeled by matching eigenvalues to ``q_l``.

    Raises
    ------
    DegeneracyError
        If two eigenvalues lie within ``1e-8`` of each other.
    """
    block: LevelBlock = symmetry_block("Q", N, mu)
    vals, vecs = np.linalg.eigh(block.matrix)
    if N > 0 and np.min(np.diff(np.sort(vals))) < _DEGENERACY_GAP:
        raise DegeneracyError(f"Q block at level {N} has nearly degenerate eigenvalues")
    q = q_eigenvalues(N, mu)
    order = [int(np.argmin(np.abs(vals - target))) for target in q]
    if len(set(order)) != N + 1:
        raise DegeneracyError(f"eigenvalues of the Q block at level {N} do not match the predicted spectrum")
    T = vecs[:, order].T.conj()
    return OverlapTable(N, fix_row_phases(T), q_labels(N), "diagonalization", "q")


def _pairing(N: int, mu: MuParams):
    """For every polar row, the ``q`` rows it mixes and their coefficients ``<polar|q_l>``.

    Also returns, per ``q`` row, the coefficient of the polar state sharing
    parity with ``|0, N>``, which fixes the relative phases of the ``q`` rows.
    """
    polar = polar_indices_at_level(N)
    pos = {idx: i for i, idx in enumerate(polar)}
    coeff = np.zeros((N + 1, N + 1), dtype=complex)  # coeff[polar row, l] = <polar|q_l>
    anchor = np.zeros(N + 1, dtype=complex)
    for l in range(N + 1):
        p = l % 2
        if N % 2 == 0:
            n = l // 2 + p
            k = (N - 2 * n) // 2
            if n == 0:
                c_plus, c_minus = 1.0, 0.0
            else:
                z = mixing_coefficient(n, 1, mu).value * (-1) ** p
                c_plus, c_minus = (1 + z) / 2, (1 - z) / 2j
            coeff[pos[PolarIndex(k, n, 1, 1)], l] = c_plus
            if n > 0:
                coeff[pos[PolarIndex(k, n, -1, -1)], l] = c_minus
            anchor[l] = c_plus
        else:
            n = Fraction(2 * (l // 2) + 1, 2)
            k = int((N - 2 * n) // 2)
            z = mixing_coefficient(n, -1, mu).value * (-1) ** p
            coeff[pos[PolarIndex(k, n, -1, 1)], l] = (1 + z) / 2
            coeff[pos[PolarIndex(k, n, 1, -1)], l] = (z - 1) / 2j
            anchor[l] = (z - 1) / 2j
    return polar, coeff, anchor


def polar_cartesian_overlap(N: int, mu: MuParams, source: str = "closed-form") -> OverlapTable:
    """``<k, n; s_x, s_y | m, N-m>`` from a ``q``-basis table.

    ``source`` picks the ``q`` table (``"closed-form"`` or ``"diagonalization"``).
    The ``q`` rows are first rephased so that their ``m = 0`` entries carry
    the phase dictated by the mixing coefficients, then combined with the
    unitary inverse of the polar-to-``q`` map.
    """
    if source == "closed-form":
        qt = q_overlap_closed_form(N, mu)
    elif source == "diagonalization":
        qt = q_overlap_oracle(N, mu)
    else:
        raise UsageError(f"source must be 'closed-form' or 'diagonalization', got {source!r}")
    polar, coeff, anchor = _pairing(N, mu)
    M = qt.matrix.copy()
    for l in range(N + 1):
        z = M[l, 0]
        M[l] *= (abs(z) / z) * (np.conj(anchor[l]) / abs(anchor[l]))
    T = coeff @ M
    labels = tuple(p.label() for p in polar)
    return OverlapTable(N, fix_row_phases(T), labels, qt.provenance, "polar", qt.notes)


def overlap_quadrature_oracle(polar: PolarIndex, cartesian: CartesianIndex, mu: MuParams, n_nodes: int = DEFAULT_NODES) -> complex:
    """``<polar | cartesian>`` as a weighted 2-d integral in polar coordinates.

    Returns exactly 0 when the two states have different energies.
    """
    if polar.level != cartesian.level:
        return 0j
    if abs(energy_polar(polar, mu) - energy_cartesian(cartesian, mu)) > 1e-12:
        return 0j

    def f(rho, phi):
        return psi_cartesian(cartesian, mu, rho * np.cos(phi), rho * np.sin(phi))

    def g(rho, phi):
        return psi_polar(polar, mu, rho, phi)

    return complex(polar_inner_product(f, g, mu, n_nodes))


def overlap_quadrature_table(N: int, mu: MuParams, n_nodes: int | None = None) -> OverlapTable:
    """Polar-row overlap table at level ``N`` by quadrature of the wavefunctions."""
    if n_nodes is None:
        n_nodes = max(16, N + 8)
    polar = polar_indices_at_level(N)
    cart = cartesian_indices_at_level(N)
    T = np.array([[overlap_quadrature_oracle(p, c, mu, n_nodes) for c in cart] for p in polar])
    return OverlapTable(N, fix_row_phases(T), tuple(p.label() for p in polar), "quadrature", "polar")


def table_discrepancy(a: OverlapTable, b: OverlapTable, modulus_only: bool = False) -> float:
    if a.level != b.level or a.basis != b.basis or a.row_labels != b.row_labels:
        raise UsageError("tables differ in level or row basis")
    if modulus_only:
        return float(np.abs(np.abs(a.matrix) - np.abs(b.matrix)).max())
    return float(np.abs(a.matrix - b.matrix).max())


def recurrence_residual(N: int, mu: MuParams) -> float:
    """Max residual of ``q_l M_m = A_{m+1} M_{m+1} + B_m M_m + A_m M_{m-1}`` on the closed form."""
    M = q_overlap_closed_form(N, mu).matrix
    q = q_eigenvalues(N, mu)
    a = np.append(_a_coeffs(N, mu), 0.0)
    b = _b_coeffs(N, mu)
    worst = 0.0
    for l in range(N + 1):
        row = M[l]
        for m in range(N + 1):
            rhs = b[m] * row[m]
            if m < N:
                rhs += a[m + 1] * row[m + 1]
            if m > 0:
                rhs += a[m] * row[m - 1]
            worst = max(worst, abs(q[l] * row[m] - rhs))
    return worst


def oracle_triangle(N: int, mu: MuParams, n_nodes: int | None = None) -> dict:
    """All three routes at level ``N`` with their pairwise discrepancies."""
    closed = q_overlap_closed_form(N, mu)
    diag = q_overlap_oracle(N, mu)
    polar_closed = polar_cartesian_overlap(N, mu)
    polar_diag = polar_cartesian_overlap(N, mu, source="diagonalization")
    quad = overlap_quadrature_table(N, mu, n_nodes)
    return {
        "tables": (closed, diag, polar_closed, polar_diag, quad),
        "closed_vs_diagonalization": table_discrepancy(closed, diag),
        "closed_vs_quadrature": table_discrepancy(polar_closed, quad),
        "diagonalization_vs_quadrature": table_discrepancy(polar_diag, quad),
        "unitarity": max(t.unitarity_defect() for t in (closed, diag, polar_closed, quad)),
    }
