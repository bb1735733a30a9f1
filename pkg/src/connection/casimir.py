"""
Connections on the coinvariants of induced modules, N = 1

The coinvariants of the module induced from a finite-dimensional g-module V
are Fun(h^r) (x) V. On them 2 hbar bhat_{i,-1} acts as the connection

    nabla = d + sum_alpha (dH_alpha / H_alpha) A_alpha,   A_alpha = 2 hbar (alpha, alpha)/2 f_alpha e_alpha

with hbar = 1 / (2 (k + k_c)). The Casimir connection has residues
hbar (alpha, alpha)/2 (e_alpha f_alpha + f_alpha e_alpha) and differs from nabla
by the rank-one twist d + hbar sum (dH_alpha / H_alpha)(alpha, alpha)/2 h_alpha.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from src.modules.affine_pbw import coinvariants
from src.utils.errors import ConfigError, RepresentationError

logger = logging.getLogger(__name__)

HBAR = sympy.Symbol("hbar")
FORM_KINDS = ("nabla", "casimir", "twist")


def rational(q):
    q = Fraction(q)
    return sympy.Rational(q.numerator, q.denominator)


def to_sympy_matrix(matrix):
    return sympy.Matrix([[rational(x) for x in row] for row in matrix])


def weight_basis(alg, matrices):
    """
    h-weights of the basis vectors of V

    Returns:
        List of weight tuples (values on h_1..h_r)

    Raises:
        RepresentationError: If the Cartan matrices are not diagonal
    """
    dim = len(matrices[0])
    weights = []
    for col in range(dim):
        w = []
        for i in range(alg.rank):
            m = matrices[alg.h(i)]
            if any(m[row][col] for row in range(dim) if row != col):
                raise RepresentationError("basis of V is not a weight basis")
            w.append(m[col][col])
        weights.append(tuple(w))
    return weights


@dataclass
class ConnectionForm:
    """
    Logarithmic connection d + sum_alpha (dH_alpha / H_alpha) A_alpha on h^r x V

    Args:
        alg: LieAlgebraData
        kind: "nabla", "casimir" or "twist"
        residues: dict root index -> sympy Matrix, entries linear in HBAR
        casimir_variant: "truncated" or "full"
    """
    alg: object
    kind: str
    residues: dict
    casimir_variant: str = "truncated"
    coordinates: tuple = field(init=False)

    def __post_init__(self):
        self.coordinates = sympy.symbols(f"H1:{self.alg.rank + 1}")

    @property
    def dimension(self):
        return next(iter(self.residues.values())).shape[0]

    def root_form(self, a):
        """H_alpha as a linear expression in the coordinates"""
        return sum(rational(c) * h for c, h in zip(self.alg.coroot(a), self.coordinates))

    def component(self, i):
        """omega(d/dH_i) = sum_alpha A_alpha (h_alpha)_i / H_alpha"""
        out = sympy.zeros(self.dimension, self.dimension)
        for a, residue in self.residues.items():
            c = self.alg.coroot(a)[i]
            if c:
                out += residue * rational(c) / self.root_form(a)
        return out

    def along(self, direction):
        """omega on a constant vector field given by coordinates"""
        out = sympy.zeros(self.dimension, self.dimension)
        for i, d in enumerate(direction):
            if d:
                out += rational(d) * self.component(i)
        return out

    def cartan_direction(self, i):
        """Coordinates of the vector field d_{h_i} = sum_j (h_i, h_j) d/dH_j"""
        return tuple(self.alg.gram[i][j] for j in range(self.alg.rank))

    def substituted(self, hbar):
        """Residues with hbar replaced by a number"""
        return {a: r.subs(HBAR, hbar) for a, r in self.residues.items()}

    def to_json(self):
        return {
            "kind": self.kind,
            "casimir_variant": self.casimir_variant,
            "residues": {self.alg.positive_roots[a].label: [[str(x) for x in r.row(j)] for j in range(r.rows)]
                         for a, r in sorted(self.residues.items())},
        }


def induce_and_coinvariants(alg, ring, module="adjoint"):
    """
    The coinvariants of the module induced from V, identified with Fun(h^r) (x) V

    Args:
        module: "adjoint", "defining" or a list of representation matrices

    Returns:
        Coinvariants with the action of bhat_{i,1}, bhat_{i,0}, bhat_{i,-1}
    """
    matrices = alg.representation(module) if isinstance(module, str) else module
    return coinvariants(alg, ring, matrices)


def connection_matrix(alg, matrices, kind="nabla", casimir_variant="truncated"):
    """
    Residue matrices of one of the three connections

    Args:
        alg: LieAlgebraData
        matrices: Representation matrices of V
        kind: "nabla", "casimir" or "twist"
        casimir_variant: "full" adds (alpha, alpha)/4 h_alpha^2 to the Casimir and the twist

    Returns:
        ConnectionForm
    """
    if kind not in FORM_KINDS:
        raise ConfigError(f"unknown connection {kind}")
    residues = {}
    for a in range(alg.n_roots):
        e = to_sympy_matrix(matrices[alg.e(a)])
        f = to_sympy_matrix(matrices[alg.f(a)])
        h = sum((rational(c) * to_sympy_matrix(matrices[alg.h(i)]) for i, c in enumerate(alg.coroot(a))),
                sympy.zeros(len(matrices[0])))
        half_length = rational(alg.root_length(a)) / 2
        if kind == "nabla":
            residues[a] = 2 * HBAR * half_length * f * e
            continue
        extra = h * h / 2 if casimir_variant == "full" else sympy.zeros(*h.shape)
        if kind == "casimir":
            residues[a] = HBAR * half_length * (e * f + f * e + extra)
        else:
            residues[a] = HBAR * half_length * (h + extra)
    return ConnectionForm(alg, kind, residues, casimir_variant)


def verify_twist_identity(alg, matrices, casimir_variant="truncated"):
    """
    Res(casimir) = Res(nabla) + hbar (alpha, alpha)/2 beta(h_alpha) on every weight-beta block

    Returns:
        List of failure descriptions
    """
    weights = weight_basis(alg, matrices)
    nabla = connection_matrix(alg, matrices, "nabla", casimir_variant)
    casimir = connection_matrix(alg, matrices, "casimir", casimir_variant)
    failures = []
    for a in range(alg.n_roots):
        half_length = rational(alg.root_length(a)) / 2
        diff = (casimir.residues[a] - nabla.residues[a]).expand()
        for row in range(diff.rows):
            for col in range(diff.cols):
                expected = 0
                if row == col:
                    value = rational(alg.pair_weight_coroot(weights[col], a))
                    if casimir_variant == "full":
                        value = value + value ** 2 / 2
                    expected = HBAR * half_length * value
                if sympy.expand(diff[row, col] - expected) != 0:
                    failures.append(f"twist identity fails at root {alg.positive_roots[a].label}, "
                                    f"weight {tuple(str(w) for w in weights[col])}")
                    break
            else:
                continue
            break
    logger.info("twist identity checked on %d hyperplanes", alg.n_roots)
    return failures


def flatness_check(form):
    """
    Curvature [omega_i, omega_j] of the connection, computed exactly

    Each dH_alpha / H_alpha is closed, so the curvature is the commutator part.

    Returns:
        List of failure descriptions, empty when flat
    """
    rank = form.alg.rank
    components = [form.component(i) for i in range(rank)]
    failures = []
    for i in range(rank):
        for j in range(i + 1, rank):
            curvature = components[i] * components[j] - components[j] * components[i]
            for entry in curvature:
                if sympy.cancel(sympy.together(entry)) != 0:
                    failures.append(f"curvature in the ({i + 1}, {j + 1}) plane is {sympy.factor(entry)}")
                    break
    return failures


def perturbed(form, a=0, factor=2):
    """Copy of the form with one residue scaled, as a negative control"""
    residues = dict(form.residues)
    residues[a] = residues[a] * factor
    return ConnectionForm(form.alg, form.kind, residues, form.casimir_variant)


def check_weight_commutation(form, matrices):
    """Every residue commutes with the action of h on V"""
    failures = []
    for i in range(form.alg.rank):
        h = to_sympy_matrix(matrices[form.alg.h(i)])
        for a, residue in form.residues.items():
            if (residue * h - h * residue).expand() != sympy.zeros(*h.shape):
                failures.append(f"residue at {form.alg.positive_roots[a].label} moves weights of h{i + 1}")
    return failures


def _fe_vector(coinv, a, j):
    """f_alpha e_alpha applied to the basis vector j of V"""
    m = coinv.module.matrices
    alg = coinv.alg
    out = {}
    for mid in range(coinv.module.dimension):
        e = m[alg.e(a)][mid][j]
        if not e:
            continue
        for row in range(coinv.module.dimension):
            f = m[alg.f(a)][row][mid]
            if f:
                out[row] = out.get(row, Fraction(0)) + f * e
    return out


def _test_functions(ring):
    out = [ring.one]
    out.extend(ring.H)
    out.extend(ring.H[j] * ring.H[l] for j in range(ring.rank) for l in range(j, ring.rank))
    return out


def check_leibniz(coinv):
    """
    bhat_{i,-1} / (k + k_c) acts by d_{h_i} + sum_alpha alpha(h_i) / ((k + k_c) H_alpha) f_alpha e_alpha

    Checked on phi (x) v for phi in {1, H_j, H_j H_l} and every basis vector v.

    Returns:
        List of failure descriptions
    """
    alg, ring = coinv.alg, coinv.ring
    scale = ring.one / (ring.k + ring.critical)
    failures = []
    for i in range(alg.rank):
        for phi in _test_functions(ring):
            derivative = ring.zero
            for j in range(alg.rank):
                if alg.gram[i][j]:
                    derivative += ring.from_fraction(alg.gram[i][j]) * phi.diff(ring.H[j])
            for v in range(coinv.module.dimension):
                lhs = {row: c * scale for row, c in coinv.bhat_minus(i, {v: phi}).items()}
                rhs = {v: derivative} if derivative else {}
                for a in range(alg.n_roots):
                    value = alg.root_value(a, i)
                    if not value:
                        continue
                    factor = ring.from_fraction(value) * scale / ring.root_forms[a] * phi
                    for row, c in _fe_vector(coinv, a, v).items():
                        rhs[row] = rhs.get(row, ring.zero) + factor * ring.from_fraction(c)
                rows = set(lhs) | set(rhs)
                if any(lhs.get(r, ring.zero) != rhs.get(r, ring.zero) for r in rows):
                    failures.append(f"Leibniz rule fails for i = {i + 1}, phi = {ring.to_string(phi)}, v = {v}")
    return failures


def check_assembly(coinv, form=None):
    """
    The matrix of bhat_{i,-1} / (k + k_c) on 1 (x) V equals nabla along d_{h_i}

    The form's hbar is read as 1 / (2 (k + k_c)).

    Returns:
        List of failure descriptions
    """
    alg, ring = coinv.alg, coinv.ring
    form = form or connection_matrix(alg, coinv.module.matrices, "nabla")
    hbar = ring.to_expr(ring.hbar)
    scale = ring.one / (ring.k + ring.critical)
    failures = []
    for i in range(alg.rank):
        matrix = coinv.operator_matrix(lambda psi, i=i: coinv.bhat_minus(i, psi))
        expected = form.along(form.cartan_direction(i)).subs(HBAR, hbar)
        for row in range(len(matrix)):
            for col in range(len(matrix)):
                got = ring.to_expr(matrix[row][col] * scale)
                if sympy.cancel(got - expected[row, col]) != 0:
                    failures.append(f"assembly of nabla along h{i + 1} fails at ({row}, {col})")
    return failures
