import numpy as np
import pytest

from src.connection.casimir import connection_matrix
from src.connection.monodromy import (Loop, constant_transport_check, default_loop, eigenvalue_check,
                                      eigenvalue_sweep, homotopy_check, monodromy, residue_eigenvalues,
                                      twist_monodromy_check)
from src.utils.errors import MonodromyError


@pytest.fixture(scope="module")
def a1_nabla(a1):
    return connection_matrix(a1, a1.representation("adjoint"), "nabla")


def test_constant_transport():
    """DOP853 matches expm on a random constant system"""
    assert constant_transport_check() == []
    assert constant_transport_check(dim=4, seed=7) == []


def test_zero_hbar_is_trivial(a1, a1_nabla):
    result = monodromy(a1_nabla, default_loop(a1), 0.0)
    assert np.allclose(result.matrix, np.eye(3), atol=1e-10)


def test_a1_eigenvalues(a1, a1_nabla):
    """Residue eigenvalues 0, 1/2, 1/2 at hbar = 1/8 give 1, -1, -1"""
    result = monodromy(a1_nabla, default_loop(a1), 0.125)
    found = sorted(result.eigenvalues, key=lambda z: z.real)
    assert np.allclose(found, [-1, -1, 1], atol=1e-8)
    assert result.error < 1e-8


def test_residue_eigenvalues(a1, a1_nabla):
    expected = residue_eigenvalues(a1_nabla, 0, 0.125)
    assert np.allclose(sorted(expected, key=lambda z: z.real), [-1, -1, 1])


@pytest.mark.parametrize("kind", ["nabla", "casimir"])
def test_eigenvalue_check_a2(a2, kind, rng):
    form = connection_matrix(a2, a2.representation("defining"), kind)
    for root in range(a2.n_roots):
        assert eigenvalue_check(form, 0.1, root, rng=rng) == []


def test_homotopy(a2, rng):
    form = connection_matrix(a2, a2.representation("adjoint"), "casimir")
    assert homotopy_check(form, 0.15, rng=rng) == []


def test_twist_monodromy(a1, a2, rng):
    assert twist_monodromy_check(a1, a1.representation("adjoint"), 0.2, rng=rng) == []
    assert twist_monodromy_check(a2, a2.representation("defining"), 0.1, "full", rng=rng) == []


def test_default_loop_isolates_hyperplane(a2, rng):
    loop = default_loop(a2, 2, rng=rng)
    coroot = np.array([float(c) for c in a2.coroot(2)])
    assert abs(coroot @ np.array(loop.base)) < 1e-12
    assert coroot @ np.array(loop.direction) == pytest.approx(1.0)


def test_loop_through_hyperplane(a1, a1_nabla):
    """A degenerate loop sits on H_alpha = 0"""
    with pytest.raises(MonodromyError):
        monodromy(a1_nabla, Loop(0, (0.0,), (1.0,), radius=0.0), 0.125)


def test_loop_json():
    data = Loop(0, (0.0, 1.0), (1.0, 0.0)).to_json()
    assert data["radius"] == 0.5
    assert data["base"] == ["0.0", "1.0"]


def test_eigenvalue_sweep(a1_nabla):
    frame = eigenvalue_sweep(a1_nabla, [0.0, 0.125, 0.25])
    assert list(frame.columns) == ["hbar", "index", "argument", "modulus"]
    assert len(frame) == 9
    assert np.allclose(frame["modulus"], 1.0, atol=1e-8)
