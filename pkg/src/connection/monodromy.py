"""
Numerical parallel transport for logarithmic connections

Transport solves Psi' = omega(x'(theta)) Psi, Psi(0) = 1 along a loop, so a
single residue R around its hyperplane gives exp(2 pi i R).
"""
import logging
import random
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from src.connection.casimir import HBAR, connection_matrix, weight_basis
from src.utils.errors import MonodromyError

logger = logging.getLogger(__name__)

DEFAULT_RTOL = 1e-11
DEFAULT_ATOL = 1e-13
MIN_CLEARANCE = 1e-3


@dataclass
class Loop:
    """
    x(theta) = base + direction (r cos theta + i s r sin theta), theta in [0, 2 pi]

    base lies on the hyperplane H_alpha = 0 and H_alpha(direction) = 1.
    """
    root: int
    base: tuple
    direction: tuple
    radius: float = 0.5
    squash: float = 1.0

    def point(self, theta):
        scale = self.radius * (np.cos(theta) + 1j * self.squash * np.sin(theta))
        return np.asarray(self.base, dtype=complex) + scale * np.asarray(self.direction, dtype=complex)

    def velocity(self, theta):
        scale = self.radius * (-np.sin(theta) + 1j * self.squash * np.cos(theta))
        return scale * np.asarray(self.direction, dtype=complex)

    def to_json(self):
        return {"root": self.root, "base": [str(b) for b in self.base],
                "direction": [str(d) for d in self.direction], "radius": self.radius, "squash": self.squash}


@dataclass
class MonodromyResult:
    """Transport matrix around one loop with its error estimate"""
    loop: Loop
    hbar: float
    matrix: np.ndarray
    error: float
    eigenvalues: np.ndarray = field(init=False)

    def __post_init__(self):
        self.eigenvalues = np.linalg.eigvals(self.matrix)

    def to_json(self):
        return {
            "loop": self.loop.to_json(),
            "hbar": str(self.hbar),
            "matrix": [[[z.real, z.imag] for z in row] for row in self.matrix.tolist()],
            "eigenvalues": [[z.real, z.imag] for z in sorted(self.eigenvalues.tolist(), key=np.angle)],
            "error": self.error,
        }


def numeric_residues(form, hbar):
    """Residue matrices at a numerical hbar, as complex arrays"""
    return {a: np.array([[complex(x) for x in row] for row in r.subs(HBAR, hbar).evalf().tolist()])
            for a, r in form.residues.items()}


def coroot_vectors(alg):
    return {a: np.array([float(c) for c in alg.coroot(a)]) for a in range(alg.n_roots)}


def default_loop(alg, root=0, radius=0.5, squash=1.0, rng=None):
    """
    A loop around the hyperplane of one root, far from all others

    Returns:
        Loop
    """
    rng = rng or random.Random(0)
    coroots = coroot_vectors(alg)
    h = coroots[root]
    j = int(np.flatnonzero(h)[0])
    direction = np.zeros(alg.rank)
    direction[j] = 1.0 / h[j]
    for _ in range(1000):
        q = np.array([rng.randint(-9, 9) for _ in range(alg.rank)], dtype=float)
        base = q - (h @ q) * direction
        if all(abs(coroots[b] @ base) > 4 * radius * abs(coroots[b] @ direction) + 1
               for b in range(alg.n_roots) if b != root):
            return Loop(root, tuple(base), tuple(direction), radius, squash)
    raise MonodromyError(f"no base point isolates the hyperplane of root {root}")


def _transport(residues, coroots, loop, rtol, atol):
    dim = next(iter(residues.values())).shape[0]
    roots = sorted(residues)

    def rhs(theta, y):
        x = loop.point(theta)
        v = loop.velocity(theta)
        omega = np.zeros((dim, dim), dtype=complex)
        for a in roots:
            H = coroots[a] @ x
            if abs(H) < MIN_CLEARANCE:
                raise MonodromyError(f"loop passes within {abs(H):.2e} of a hyperplane")
            omega += residues[a] * ((coroots[a] @ v) / H)
        return (omega @ y.reshape(dim, dim)).ravel()

    start = np.eye(dim, dtype=complex).ravel()
    sol = solve_ivp(rhs, (0.0, 2 * np.pi), start, method="DOP853", rtol=rtol, atol=atol)
    if not sol.success:
        raise MonodromyError(f"integration failed: {sol.message}")
    return sol.y[:, -1].reshape(dim, dim)


def monodromy(form, loop, hbar, tol=DEFAULT_RTOL):
    """
    Parallel transport of the connection around a loop

    Args:
        form: ConnectionForm
        loop: Loop
        hbar: Numerical value of hbar
        tol: Relative tolerance; the error estimate reruns at tol / 100

    Returns:
        MonodromyResult
    """
    residues = numeric_residues(form, hbar)
    coroots = coroot_vectors(form.alg)
    coarse = _transport(residues, coroots, loop, tol, DEFAULT_ATOL)
    fine = _transport(residues, coroots, loop, tol / 100, DEFAULT_ATOL / 100)
    error = float(np.max(np.abs(coarse - fine)))
    logger.debug("monodromy around %s at hbar=%s, error %.2e", loop.root, hbar, error)
    return MonodromyResult(loop, hbar, fine, error)


def residue_eigenvalues(form, root, hbar):
    """exp(2 pi i eigenvalues of the residue)"""
    residue = numeric_residues(form, hbar)[root]
    return np.exp(2j * np.pi * np.linalg.eigvals(residue))


def _match(found, expected, tol):
    remaining = list(expected)
    for z in found:
        distances = [abs(z - w) for w in remaining]
        best = int(np.argmin(distances))
        if distances[best] > tol:
            return False
        remaining.pop(best)
    return True


def eigenvalue_check(form, hbar, root=0, tol=1e-8, rng=None):
    """Monodromy eigenvalues around one hyperplane match exp(2 pi i Res)"""
    result = monodromy(form, default_loop(form.alg, root, rng=rng), hbar)
    expected = residue_eigenvalues(form, root, hbar)
    if not _match(result.eigenvalues, expected, tol):
        return [f"eigenvalues {np.round(result.eigenvalues, 10)} differ from {np.round(expected, 10)}"]
    return []


def constant_transport_check(dim=3, tol=1e-10, seed=0):
    """
    The integrator reproduces expm on a constant-coefficient system

    Returns:
        List of failure descriptions
    """
    rng = np.random.default_rng(seed)
    M = 0.5 * (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    sol = solve_ivp(lambda t, y: (M @ y.reshape(dim, dim)).ravel(), (0.0, 1.0),
                    np.eye(dim, dtype=complex).ravel(), method="DOP853", rtol=1e-13, atol=1e-14)
    if not sol.success:
        raise MonodromyError(f"integration failed: {sol.message}")
    err = float(np.max(np.abs(sol.y[:, -1].reshape(dim, dim) - expm(M))))
    return [] if err < tol else [f"constant transport off by {err:.2e}"]


def homotopy_check(form, hbar, root=0, squash=0.5, tol=1e-8, rng=None):
    """A circle and a homotopic ellipse through the same base point give the same transport"""
    circle = default_loop(form.alg, root, rng=rng)
    ellipse = Loop(circle.root, circle.base, circle.direction, circle.radius, squash)
    a = monodromy(form, circle, hbar).matrix
    b = monodromy(form, ellipse, hbar).matrix
    err = float(np.max(np.abs(a - b)))
    return [] if err < tol else [f"homotopic loops differ by {err:.2e}"]


def twist_monodromy_check(alg, matrices, hbar, casimir_variant="truncated", tol=1e-8, rng=None):
    """
    On every weight block the Casimir transport is the nabla transport times
    exp(2 pi i hbar (alpha, alpha)/2 beta(h_alpha))

    Returns:
        List of failure descriptions
    """
    weights = weight_basis(alg, matrices)
    nabla = connection_matrix(alg, matrices, "nabla", casimir_variant)
    casimir = connection_matrix(alg, matrices, "casimir", casimir_variant)
    failures = []
    for root in range(alg.n_roots):
        loop = default_loop(alg, root, rng=rng)
        a = monodromy(nabla, loop, hbar).matrix
        b = monodromy(casimir, loop, hbar).matrix
        half_length = float(alg.root_length(root)) / 2
        for w in sorted(set(weights)):
            block = [j for j, v in enumerate(weights) if v == w]
            value = float(alg.pair_weight_coroot(w, root))
            if casimir_variant == "full":
                value += value ** 2 / 2
            factor = np.exp(2j * np.pi * hbar * half_length * value)
            err = float(np.max(np.abs(b[np.ix_(block, block)] - factor * a[np.ix_(block, block)])))
            if err > tol:
                failures.append(f"root {alg.positive_roots[root].label}, weight {tuple(str(x) for x in w)}: "
                                f"off by {err:.2e}")
    return failures


def eigenvalue_sweep(form, hbars, root=0, rng=None):
    """
    Arguments of the monodromy eigenvalues as hbar varies

    Returns:
        pandas DataFrame with columns hbar, index, argument, modulus
    """
    loop = default_loop(form.alg, root, rng=rng)
    rows = []
    for hbar in hbars:
        result = monodromy(form, loop, float(hbar))
        for idx, z in enumerate(sorted(result.eigenvalues, key=np.angle)):
            rows.append({"hbar": float(hbar), "index": idx, "argument": float(np.angle(z)), "modulus": float(abs(z))})
    return pd.DataFrame(rows)
