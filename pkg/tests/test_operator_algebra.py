import numpy as np
import pytest

from dunkl.errors import UsageError
from dunkl.operator_algebra import (
    LadderMap,
    Report,
    anticommutator,
    check_casimir,
    check_parabose,
    check_sd2_relations,
    commutator,
    ladder_block,
    reflection_block,
    sl12_casimir_block,
    sl12_casimir_check,
    sorted_eigh,
    symmetry_block,
)
from dunkl.polykernel import MuParams

MU = MuParams(0.3, 0.5)


def test_ladder_shapes_and_values():
    up = ladder_block("Ax_dag", 2, MU)
    assert isinstance(up, LadderMap) and up.matrix.shape == (4, 3)
    # Ax^+ |0,2> = sqrt([1]_mu_x) |1,2>
    assert up.matrix[1, 0] == pytest.approx(np.sqrt(1 + 2 * 0.3))
    down = ladder_block("Ay", 0, MU)
    assert down.matrix.shape == (0, 1) and down.to_level == -1
    with pytest.raises(UsageError):
        ladder_block("Az", 1, MU)


def test_ladder_adjoints():
    for N in range(5):
        assert np.allclose(ladder_block("Ax", N + 1, MU).matrix, ladder_block("Ax_dag", N, MU).matrix.T)
        assert np.allclose(ladder_block("Ay", N + 1, MU).matrix, ladder_block("Ay_dag", N, MU).matrix.T)


def test_composition_guards():
    a = ladder_block("Ax", 3, MU)
    b = ladder_block("Ay_dag", 1, MU)
    with pytest.raises(UsageError):
        a @ b
    composed = ladder_block("Ax", 2, MU) @ ladder_block("Ay_dag", 1, MU)
    assert (composed.from_level, composed.to_level) == (1, 1)
    with pytest.raises(UsageError):
        symmetry_block("J1", 2, MU) @ symmetry_block("J1", 3, MU)
    with pytest.raises(UsageError):
        commutator(symmetry_block("J1", 2, MU), symmetry_block("J1", 3, MU))
    with pytest.raises(UsageError):
        reflection_block("Rz", 2)
    with pytest.raises(UsageError):
        symmetry_block("K", 2, MU)


def test_block_hermiticity():
    for N in range(6):
        for name in ("H", "Hx", "Hy", "J1", "J2", "J3", "Q", "C"):
            blk = symmetry_block(name, N, MU)
            assert np.allclose(blk.matrix, blk.matrix.conj().T)


@pytest.mark.parametrize("N", range(11))
def test_sd2_relations(N, mu):
    assert check_sd2_relations(N, mu).max_residual() < 1e-12


@pytest.mark.parametrize("N", range(11))
def test_casimir(N, mu):
    assert check_casimir(N, mu).max_residual() < 1e-12


def test_parabose(mu):
    rep = check_parabose(12, mu)
    assert rep.max_residual() < 1e-12
    assert "[Ax,Ax+]=I+2muxRx" in rep.residuals
    with pytest.raises(UsageError):
        check_parabose(1, mu)


def test_anticommutator_reflection():
    J1 = symmetry_block("J1", 4, MU)
    assert anticommutator(J1, reflection_block("Rx", 4)).norm() < 1e-15


def test_q_and_j2_spectra(mu):
    s = mu.total
    for N in range(11):
        q = np.linalg.eigvalsh(symmetry_block("Q", N, mu).matrix)
        ell = np.arange(N + 1)
        assert np.allclose(np.sort(q), np.sort((-1.0) ** (ell + 1) * (ell + s + 0.5)), atol=1e-10)
        j2 = np.linalg.eigvalsh(symmetry_block("J2", N, mu).matrix)
        if N % 2 == 0:
            ns = np.arange(1, N // 2 + 1)
            lam = np.sqrt(ns * (ns + s))
            expected = np.concatenate([[0.0], lam, -lam])
        else:
            ns = np.arange(N // 2 + 1) + 0.5
            lam = np.sqrt((ns + mu.mu_x) * (ns + mu.mu_y))
            expected = np.concatenate([lam, -lam])
        assert np.allclose(np.sort(j2), np.sort(expected), atol=1e-10)


@pytest.mark.parametrize("N", range(9))
def test_sl12_identification(N, mu):
    rep = sl12_casimir_check(N, mu)
    assert rep.residuals["Qtilde=Q"] < 1e-13
    assert rep.max_residual() < 1e-12


def test_sl12_block_shape():
    assert sl12_casimir_block(3, MU).shape == (4, 4)


def test_sorted_eigh_convention():
    vals, vecs = sorted_eigh(symmetry_block("J2", 4, MU))
    assert np.all(np.diff(vals) > 0)
    for j in range(vecs.shape[1]):
        col = vecs[:, j]
        k = int(np.argmax(np.abs(col)))
        assert abs(col[k].imag) < 1e-14 and col[k].real > 0


def test_report_text(monkeypatch):
    rep = Report("demo", {"a": 1e-16, "b": 1.0})
    assert rep.max_residual() == 1.0 and not rep.passed(1e-10)
    monkeypatch.setenv("DUNKL_NO_COLOR", "1")
    text = rep.to_text(tol=1e-10)
    assert "\033[" not in text and "FAIL" in text and "PASS" in text
    monkeypatch.delenv("DUNKL_NO_COLOR")
    assert "\033[" in rep.to_text(tol=1e-10)
    assert "\033[" not in rep.to_text(tol=1e-10, color=False)
