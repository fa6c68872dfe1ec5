"""Exact matrices of the symmetry operators on each energy level.

Every symmetry commutes with the Hamiltonian, so restricting to the
``N + 1`` states ``|m, N - m>`` (ordered by increasing ``m = n_x``) loses
nothing. Ladder operators are rectangular maps between adjacent levels.
The ``check_*`` functions return :class:`Report` objects holding one
max-norm residual per identity.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import UsageError
from .polykernel import MuParams, mu_number
from .wavefunctions import CartesianIndex, cartesian_indices_at_level

__all__ = [
    "LevelBlock",
    "LadderMap",
    "Report",
    "ladder_block",
    "reflection_block",
    "symmetry_block",
    "commutator",
    "anticommutator",
    "check_sd2_relations",
    "check_casimir",
    "check_parabose",
    "sl12_module",
    "sl12_casimir_block",
    "sl12_casimir_check",
    "sorted_eigh",
]

LADDERS = ("Ax", "Ax_dag", "Ay", "Ay_dag")
SYMMETRIES = ("H", "Hx", "Hy", "J1", "J2", "J3", "Q", "C", "I")


@dataclass(frozen=True)
class LevelBlock:
    level: int
    matrix: np.ndarray
    name: str = ""

    @property
    def basis(self) -> list[CartesianIndex]:
        return cartesian_indices_at_level(self.level)

    @property
    def dim(self) -> int:
        return self.level + 1

    def _check(self, other: "LevelBlock"):
        if not isinstance(other, LevelBlock) or other.level != self.level:
            raise UsageError(f"level mismatch: {self.level} vs {getattr(other, 'level', other)}")

    def __matmul__(self, other):
        if isinstance(other, LevelBlock):
            self._check(other)
            return LevelBlock(self.level, self.matrix @ other.matrix)
        return self.matrix @ other

    def __add__(self, other):
        if isinstance(other, LevelBlock):
            self._check(other)
            return LevelBlock(self.level, self.matrix + other.matrix)
        return LevelBlock(self.level, self.matrix + other * np.eye(self.dim))

    def __sub__(self, other):
        if isinstance(other, LevelBlock):
            self._check(other)
            return LevelBlock(self.level, self.matrix - other.matrix)
        return LevelBlock(self.level, self.matrix - other * np.eye(self.dim))

    def __mul__(self, scalar):
        return LevelBlock(self.level, self.matrix * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return LevelBlock(self.level, -self.matrix)

    @property
    def H(self) -> "LevelBlock":
        return LevelBlock(self.level, self.matrix.conj().T)

    def norm(self) -> float:
        """Max-norm of the entries."""
        return float(np.abs(self.matrix).max()) if self.matrix.size else 0.0


@dataclass(frozen=True)
class LadderMap:
    from_level: int
    to_level: int
    matrix: np.ndarray

    def __matmul__(self, other):
        if isinstance(other, LadderMap):
            if other.to_level != self.from_level:
                raise UsageError(f"cannot compose maps {other.from_level}->{other.to_level} and {self.from_level}->{self.to_level}")
            return LadderMap(other.from_level, self.to_level, self.matrix @ other.matrix)
        if isinstance(other, LevelBlock):
            if other.level != self.from_level:
                raise UsageError("level mismatch")
            return LadderMap(self.from_level, self.to_level, self.matrix @ other.matrix)
        return self.matrix @ other

    def __rmatmul__(self, other):
        if isinstance(other, LevelBlock):
            if other.level != self.to_level:
                raise UsageError("level mismatch")
            return LadderMap(self.from_level, self.to_level, other.matrix @ self.matrix)
        return other @ self.matrix


@dataclass
class Report:
    """Named residuals, serializable to ``name<TAB>residual`` lines."""

    title: str
    residuals: dict = field(default_factory=dict)

    def add(self, name: str, residual: float):
        self.residuals[name] = max(float(residual), self.residuals.get(name, 0.0))

    def merge(self, other: "Report"):
        for name, value in other.residuals.items():
            self.add(name, value)
        return self

    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    def passed(self, tol: float) -> bool:
        return all(v < tol for v in self.residuals.values())

    def lines(self, tol: float | None = None, color: bool | None = None) -> list[str]:
        if color is None:
            color = not os.environ.get("DUNKL_NO_COLOR")
        out = []
        for name, value in self.residuals.items():
            line = f"{name}\t{value:.3e}"
            if tol is not None:
                ok = value < tol
                status = "PASS" if ok else "FAIL"
                if color:
                    status = f"\033[{32 if ok else 31}m{status}\033[0m"
                line += f"\t{status}"
            out.append(line)
        return out

    def to_text(self, tol: float | None = None, color: bool | None = None) -> str:
        return "\n".join(self.lines(tol, color)) + "\n"


def _dim(N: int) -> int:
    return max(N + 1, 0)


def ladder_block(which: str, N: int, mu: MuParams) -> LadderMap:
    """Matrix of a creation or annihilation operator acting on level ``N``.

    ``which`` is one of ``"Ax"``, ``"Ax_dag"``, ``"Ay"``, ``"Ay_dag"``.
    Annihilators map to level ``N - 1`` (of dimension 0 when ``N = 0``).
    """
    if which not in LADDERS:
        raise UsageError(f"unknown ladder operator {which!r}; expected one of {LADDERS}")
    raising = which.endswith("_dag")
    target = N + 1 if raising else N - 1
    out = np.zeros((_dim(target), _dim(N)))
    for m in range(N + 1):
        nx, ny = m, N - m
        if which == "Ax_dag":
            out[m + 1, m] = np.sqrt(mu_number(nx + 1, mu.mu_x))
        elif which == "Ay_dag":
            out[m, m] = np.sqrt(mu_number(ny + 1, mu.mu_y))
        elif which == "Ax" and nx > 0:
            out[m - 1, m] = np.sqrt(mu_number(nx, mu.mu_x))
        elif which == "Ay" and ny > 0:
            out[m, m] = np.sqrt(mu_number(ny, mu.mu_y))
    return LadderMap(N, target, out)


def reflection_block(which: str, N: int) -> LevelBlock:
    """Diagonal ``R_x`` (sign ``(-1)^{n_x}``) or ``R_y`` (sign ``(-1)^{n_y}``)."""
    m = np.arange(N + 1)
    if which == "Rx":
        diag = (-1.0) ** m
    elif which == "Ry":
        diag = (-1.0) ** (N - m)
    else:
        raise UsageError(f"unknown reflection {which!r}; expected 'Rx' or 'Ry'")
    return LevelBlock(N, np.diag(diag).astype(complex), which)


def _product(outer: str, inner: str, N: int, mu: MuParams) -> np.ndarray:
    """Level-preserving ``outer @ inner`` applied to level ``N``."""
    first = ladder_block(inner, N, mu)
    second = ladder_block(outer, first.to_level, mu)
    return second.matrix @ first.matrix


def symmetry_block(which: str, N: int, mu: MuParams) -> LevelBlock:
    """Level-``N`` block of ``H``, ``Hx``, ``Hy``, ``J1``, ``J2``, ``J3``, ``Q``, ``C`` or ``I``.

    ``Q = (Ax Ay^+ - Ax^+ Ay) Rx - mu_x Ry - mu_y Rx - Rx Ry / 2`` and
    ``C = J1^2 + J2^2 + J3^2 + (mu_x Rx + mu_y Ry)/2 + mu_x mu_y Rx Ry``.
    """
    if which not in SYMMETRIES:
        raise UsageError(f"unknown symmetry {which!r}; expected one of {SYMMETRIES}")
    m = np.arange(N + 1)
    eye = np.eye(N + 1, dtype=complex)
    if which == "I":
        mat = eye
    elif which == "H":
        mat = (N + mu.total + 1) * eye
    elif which == "Hx":
        mat = np.diag(m + mu.mu_x + 0.5).astype(complex)
    elif which == "Hy":
        mat = np.diag(N - m + mu.mu_y + 0.5).astype(complex)
    elif which == "J3":
        mat = 0.5 * np.diag((m + mu.mu_x) - (N - m + mu.mu_y)).astype(complex)
    elif which == "J1":
        mat = 0.5 * (_product("Ax_dag", "Ay", N, mu) + _product("Ax", "Ay_dag", N, mu)).astype(complex)
    elif which == "J2":
        mat = (_product("Ax_dag", "Ay", N, mu) - _product("Ax", "Ay_dag", N, mu)) / 2j
    elif which == "Q":
        rx = reflection_block("Rx", N).matrix
        ry = reflection_block("Ry", N).matrix
        hop = _product("Ax", "Ay_dag", N, mu) - _product("Ax_dag", "Ay", N, mu)
        mat = hop @ rx - mu.mu_x * ry - mu.mu_y * rx - 0.5 * rx @ ry
    else:
        j1, j2, j3 = (symmetry_block(k, N, mu).matrix for k in ("J1", "J2", "J3"))
        rx = reflection_block("Rx", N).matrix
        ry = reflection_block("Ry", N).matrix
        mat = j1 @ j1 + j2 @ j2 + j3 @ j3 + 0.5 * (mu.mu_x * rx + mu.mu_y * ry) + mu.mu_x * mu.mu_y * rx @ ry
    return LevelBlock(N, mat, which)


def commutator(A: LevelBlock, B: LevelBlock) -> LevelBlock:
    return A @ B - B @ A


def anticommutator(A: LevelBlock, B: LevelBlock) -> LevelBlock:
    return A @ B + B @ A


def check_sd2_relations(N: int, mu: MuParams) -> Report:
    """Residuals of the Schwinger-Dunkl relations on level ``N``."""
    J1, J2, J3, H = (symmetry_block(k, N, mu) for k in ("J1", "J2", "J3", "H"))
    Rx, Ry = reflection_block("Rx", N), reflection_block("Ry", N)
    I = symmetry_block("I", N, mu)
    rep = Report("sd(2) relations")
    for name, R in (("Rx", Rx), ("Ry", Ry)):
        rep.add(f"{{J1,{name}}}=0", anticommutator(J1, R).norm())
        rep.add(f"{{J2,{name}}}=0", anticommutator(J2, R).norm())
        rep.add(f"[J3,{name}]=0", commutator(J3, R).norm())
        rep.add(f"{name}^2=I", (R @ R - I).norm())
    rep.add("[J2,J3]=iJ1", (commutator(J2, J3) - 1j * J1).norm())
    rep.add("[J3,J1]=iJ2", (commutator(J3, J1) - 1j * J2).norm())
    deformed = J3 + J3 @ (mu.mu_x * Rx + mu.mu_y * Ry) - H @ (mu.mu_x * Rx - mu.mu_y * Ry) * 0.5
    rep.add("[J1,J2]=i(J3+J3(mxRx+myRy)-H(mxRx-myRy)/2)", (commutator(J1, J2) - 1j * deformed).norm())
    for name in ("J1", "J2", "J3"):
        rep.add(f"[H,{name}]=0", commutator(H, symmetry_block(name, N, mu)).norm())
    return rep


def check_casimir(N: int, mu: MuParams) -> Report:
    """Casimir value ``C = H^2/4 - 1/4`` and its commutation with the generators."""
    C = symmetry_block("C", N, mu)
    H = symmetry_block("H", N, mu)
    rep = Report("Casimir")
    rep.add("C=H^2/4-1/4", (C - (H @ H) * 0.25 + symmetry_block("I", N, mu) * 0.25).norm())
    for name in ("J1", "J2", "J3"):
        rep.add(f"[C,{name}]=0", commutator(C, symmetry_block(name, N, mu)).norm())
    for name in ("Rx", "Ry"):
        rep.add(f"[C,{name}]=0", commutator(C, reflection_block(name, N)).norm())
    return rep


def _maxabs(a: np.ndarray) -> float:
    return float(np.abs(a).max()) if a.size else 0.0


def check_parabose(N_max: int, mu: MuParams) -> Report:
    """Parabose relations composed across levels, for every level ``N <= N_max - 2``."""
    if N_max < 2:
        raise UsageError("N_max must be >= 2")
    rep = Report("parabose relations")
    for N in range(N_max - 1):
        for axis, mval, refl in (("x", mu.mu_x, "Rx"), ("y", mu.mu_y, "Ry")):
            A_up = ladder_block(f"A{axis}", N + 1, mu).matrix  # N+1 -> N
            Ad = ladder_block(f"A{axis}_dag", N, mu).matrix  # N -> N+1
            A = ladder_block(f"A{axis}", N, mu).matrix  # N -> N-1
            Ad_down = ladder_block(f"A{axis}_dag", N - 1, mu).matrix if N > 0 else np.zeros((N + 1, 0))
            R = reflection_block(refl, N).matrix
            R_up = reflection_block(refl, N + 1).matrix
            R_down = reflection_block(refl, N - 1).matrix if N > 0 else np.zeros((0, 0))
            Hk = symmetry_block(f"H{axis}", N, mu).matrix
            Hk_up = symmetry_block(f"H{axis}", N + 1, mu).matrix
            Hk_down = symmetry_block(f"H{axis}", N - 1, mu).matrix if N > 0 else np.zeros((0, 0))
            eye = np.eye(N + 1)
            rep.add(f"[A{axis},A{axis}+]=I+2mu{axis}R{axis}", _maxabs(A_up @ Ad - Ad_down @ A - (eye + 2 * mval * R)))
            rep.add(f"[H{axis},A{axis}]=-A{axis}", _maxabs(Hk_down @ A - A @ Hk + A))
            rep.add(f"[H{axis},A{axis}+]=A{axis}+", _maxabs(Hk_up @ Ad - Ad @ Hk - Ad))
            rep.add(f"{{A{axis},R{axis}}}=0", _maxabs(A @ R + R_down @ A))
            rep.add(f"{{A{axis}+,R{axis}}}=0", _maxabs(Ad @ R + R_up @ Ad))
            rep.add(f"H{axis}={{A{axis},A{axis}+}}/2", _maxabs(Hk - 0.5 * (A_up @ Ad + Ad_down @ A)))
            rep.add(f"[H{axis},R{axis}]=0", _maxabs(Hk @ R - R @ Hk))
        # cross relations between the two commuting oscillators
        Ax_up = ladder_block("Ax", N + 1, mu).matrix
        Ay_dag = ladder_block("Ay_dag", N, mu).matrix
        Ax = ladder_block("Ax", N, mu).matrix
        Ay_dag_down = ladder_block("Ay_dag", N - 1, mu).matrix if N > 0 else np.zeros((N + 1, 0))
        rep.add("[Ax,Ay+]=0", _maxabs(Ax_up @ Ay_dag - Ay_dag_down @ Ax))
        Ax_dag = ladder_block("Ax_dag", N, mu).matrix
        Ay_up = ladder_block("Ay", N + 1, mu).matrix
        Ax_dag_down = ladder_block("Ax_dag", N - 1, mu).matrix if N > 0 else np.zeros((N + 1, 0))
        Ay = ladder_block("Ay", N, mu).matrix
        rep.add("[Ax+,Ay]=0", _maxabs(Ay_up @ Ax_dag - Ax_dag_down @ Ay))
        Ax_dag_up = ladder_block("Ax_dag", N + 1, mu).matrix
        Ay_dag_up = ladder_block("Ay_dag", N + 1, mu).matrix
        rep.add("[Ax+,Ay+]=0", _maxabs(Ay_dag_up @ Ax_dag - Ax_dag_up @ Ay_dag))
        if N >= 2:
            Ax_down = ladder_block("Ax", N - 1, mu).matrix
            Ay_down = ladder_block("Ay", N - 1, mu).matrix
            rep.add("[Ax,Ay]=0", _maxabs(Ay_down @ Ax - Ax_down @ Ay))
        Rx_up = reflection_block("Rx", N + 1).matrix
        Ry = reflection_block("Ry", N).matrix
        rep.add("[Rx,Ay+]=0", _maxabs(Rx_up @ Ay_dag - Ay_dag @ reflection_block("Rx", N).matrix))
        rep.add("[Ry,Ax+]=0", _maxabs(reflection_block("Ry", N + 1).matrix @ Ax_dag - Ax_dag @ Ry))
    return rep


def sl12_module(mu: float, eps: int, dim: int):
    """Truncated generators ``(A0, A+, A-, R)`` of the module ``V^(eps, mu)`` on ``v_0..v_{dim-1}``."""
    n = np.arange(dim)
    A0 = np.diag(n + mu + 0.5)
    R = np.diag(eps * (-1.0) ** n)
    Ap = np.zeros((dim, dim))
    Am = np.zeros((dim, dim))
    for k in range(dim - 1):
        Ap[k + 1, k] = np.sqrt(mu_number(k + 1, mu))
        Am[k, k + 1] = np.sqrt(mu_number(k + 1, mu))
    return A0, Ap, Am, R


def _level_projector(N: int, dim: int) -> np.ndarray:
    """Columns embed ``e_m (x) e_{N-m}`` (m = 0..N) into the tensor space."""
    P = np.zeros((dim * dim, N + 1))
    for m in range(N + 1):
        P[m * dim + (N - m), m] = 1.0
    return P


def sl12_casimir_block(N: int, mu: MuParams, eps: tuple[int, int] = (1, 1)) -> np.ndarray:
    """Tensor-product Casimir restricted to ``n_1 + n_2 = N``.

    ``(A-1 A+2 - A+1 A-2) R1 - R1 R2 / 2 - eps1 mu1 R2 - eps2 mu2 R1``, built
    with Kronecker products of truncated single-module matrices.
    """
    dim = N + 1
    _, Ap1, Am1, R1 = sl12_module(mu.mu_x, eps[0], dim)
    _, Ap2, Am2, R2 = sl12_module(mu.mu_y, eps[1], dim)
    I = np.eye(dim)
    k = np.kron
    Qt = (
        (k(Am1, I) @ k(I, Ap2) - k(Ap1, I) @ k(I, Am2)) @ k(R1, I)
        - 0.5 * k(R1, I) @ k(I, R2)
        - eps[0] * mu.mu_x * k(I, R2)
        - eps[1] * mu.mu_y * k(R1, I)
    )
    P = _level_projector(N, dim)
    return P.T @ Qt @ P


def sl12_casimir_check(N: int, mu: MuParams) -> Report:
    """Compare the tensor-product Casimir with the ``Q`` level block."""
    rep = Report("sl_-1(2) Casimir")
    Qt = sl12_casimir_block(N, mu)
    rep.add("Qtilde=Q", _maxabs(Qt - symmetry_block("Q", N, mu).matrix))
    dim = N + 2
    for label, (mval, eps) in {"1": (mu.mu_x, 1), "2": (mu.mu_y, 1)}.items():
        A0, Ap, Am, R = sl12_module(mval, eps, dim)
        Qs = Ap @ Am @ R - A0 @ R + 0.5 * R
        # the top basis vector lacks its A+ partner in the truncation
        rep.add(f"Q({label})=-eps*mu", _maxabs((Qs + eps * mval * np.eye(dim))[: dim - 1, : dim - 1]))
        anti = Ap @ Am + Am @ Ap - 2 * A0
        rep.add(f"{{A+,A-}}=2A0 ({label})", _maxabs(anti[: dim - 1, : dim - 1]))
    R1 = np.diag((-1.0) ** np.arange(N + 1))
    R2 = np.diag((-1.0) ** (N - np.arange(N + 1)))
    rep.add("R1R2=(-1)^N", _maxabs(R1 @ R2 - (-1) ** N * np.eye(N + 1)))
    # coproduct A+ maps level N to N+1; the Casimir must intertwine it
    d = N + 2
    _, Ap1, _, R1f = sl12_module(mu.mu_x, 1, d)
    _, Ap2, _, R2f = sl12_module(mu.mu_y, 1, d)
    Ap_tot = np.kron(Ap1, R2f) + np.kron(np.eye(d), Ap2)
    Pn = _level_projector(N, d)
    Pn1 = _level_projector(N + 1, d)
    lift = Pn1.T @ Ap_tot @ Pn
    rep.add("[Qtilde,A+tilde]=0", _maxabs(sl12_casimir_block(N + 1, mu) @ lift - lift @ Qt))
    return rep


def sorted_eigh(block: LevelBlock):
    """Eigenpairs of a Hermitian block with deterministic order and phase.

    Eigenvalues ascend; each eigenvector is rotated so that its
    largest-magnitude entry is real and positive (first such entry on ties).
    """
    vals, vecs = np.linalg.eigh(block.matrix)
    order = np.argsort(vals, kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    for j in range(vecs.shape[1]):
        col = vecs[:, j]
        mags = np.abs(col)
        pivot = int(np.flatnonzero(mags >= mags.max() * (1 - 1e-9))[0])
        vecs[:, j] = col * (abs(col[pivot]) / col[pivot])
    return vals, vecs
