"""
Simple Lie algebras of small rank

Root systems, Chevalley bases, structure constants and the normalized
invariant form, built from a defining matrix realization. Elements of the
algebra are dense tuples of Fractions in the basis

    e_alpha (alpha in positive roots), f_alpha (same order), h_1 .. h_r
"""
import logging
from dataclasses import dataclass
from fractions import Fraction

import sympy

from src.utils.config import DUAL_COXETER, SUPPORTED_TYPES
from src.utils.errors import ConventionError, RepresentationError, UnsupportedTypeError
from src.utils.linalg import commutator
from src.utils.serialization import rational_to_str

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Root:
    """Positive root in the simple-root basis"""
    coordinates: tuple

    @property
    def height(self):
        return sum(self.coordinates)

    @property
    def label(self):
        return "".join(str(c) for c in self.coordinates)


def root_order_key(coords):
    """Height first, then simple roots in index order"""
    return (sum(coords), tuple(-c for c in coords))


def _unit(n, i, j):
    m = sympy.zeros(n, n)
    m[i - 1, j - 1] = 1
    return m


def _simple_e_matrices(cartan_type):
    """Defining-representation matrices of the simple raising operators"""
    if cartan_type == "A1":
        return [_unit(2, 1, 2)]
    if cartan_type == "A2":
        return [_unit(3, 1, 2), _unit(3, 2, 3)]
    if cartan_type == "B2":
        # so(5) preserving the antidiagonal form
        return [_unit(5, 1, 2) - _unit(5, 4, 5), _unit(5, 2, 3) - _unit(5, 3, 4)]
    raise UnsupportedTypeError(f"unsupported type {cartan_type}; choose from {', '.join(SUPPORTED_TYPES)}")


def _comm(x, y):
    return x * y - y * x


def _to_fraction(r):
    r = sympy.Rational(r)
    return Fraction(int(r.p), int(r.q))


def _lowering_partner(e):
    """f = (2/lam) e^T with lam the eigenvalue of ad [e, e^T] on e"""
    h = _comm(e, e.T)
    he = _comm(h, e)
    i, j = next((i, j) for i in range(e.rows) for j in range(e.cols) if e[i, j] != 0)
    lam = he[i, j] / e[i, j]
    if lam == 0:
        raise ConventionError("raising operator is not an sl2 root vector")
    return (sympy.Rational(2) / lam) * e.T


class LieAlgebraData:
    """
    Chevalley-basis data of a simple Lie algebra

    Args:
        cartan_type: One of the supported labels
        positive_roots: Roots ordered by (height, simple index)
        matrices: Defining matrices of the basis elements
    """

    def __init__(self, cartan_type, positive_roots, matrices, chains):
        self.cartan_type = cartan_type
        self.positive_roots = positive_roots
        self.rank = len(positive_roots[0].coordinates)
        self.simple_roots = [r for r in positive_roots if r.height == 1]
        self.dual_coxeter = DUAL_COXETER[cartan_type]
        self.matrices = matrices
        self.chains = chains
        self.n_roots = len(positive_roots)
        self.dim = 2 * self.n_roots + self.rank
        self.root_index = {r.coordinates: a for a, r in enumerate(positive_roots)}
        self._projector = self._build_projector()
        self.structure = self._build_structure()
        self.form_matrix = self._build_form()
        self.cartan_matrix = [[self.structure[self.h(i)][self.e(j)][self.e(j)] for j in range(self.rank)]
                              for i in range(self.rank)]
        self.gram = [[self.form_matrix[self.h(i)][self.h(j)] for j in range(self.rank)] for i in range(self.rank)]
        gram_inv = sympy.Matrix(self.gram).inv()
        self.gram_inverse = [[_to_fraction(gram_inv[i, j]) for j in range(self.rank)] for i in range(self.rank)]
        self.coroots = [tuple(self.bracket(self.basis(self.e(a)), self.basis(self.f(a)))[self.h(0):])
                        for a in range(self.n_roots)]

    # -- basis bookkeeping ---------------------------------------------------

    def e(self, a):
        return a

    def f(self, a):
        return self.n_roots + a

    def h(self, i):
        return 2 * self.n_roots + i

    def kind(self, idx):
        """('e', root), ('f', root) or ('h', i)"""
        if idx < self.n_roots:
            return "e", idx
        if idx < 2 * self.n_roots:
            return "f", idx - self.n_roots
        return "h", idx - 2 * self.n_roots

    def label(self, idx):
        kind, a = self.kind(idx)
        if kind == "h":
            return f"h{a + 1}"
        return f"{kind}{self.positive_roots[a].label}"

    def basis(self, idx):
        return tuple(Fraction(int(j == idx)) for j in range(self.dim))

    def zero(self):
        return tuple(Fraction(0) for _ in range(self.dim))

    def simple_index(self, i):
        """Root index of the i-th simple root"""
        unit = tuple(int(j == i) for j in range(self.rank))
        return self.root_index[unit]

    # -- construction --------------------------------------------------------

    def _build_projector(self):
        columns = [list(m) for m in self.matrices]
        big = sympy.Matrix(columns).T
        self._big = big
        return (big.T * big).inv() * big.T

    def decompose(self, matrix):
        """
        Coordinates of a defining matrix in the Chevalley basis

        Args:
            matrix: sympy Matrix in the span of the basis

        Returns:
            Tuple of Fractions
        """
        vec = sympy.Matrix(list(matrix))
        coords = self._projector * vec
        if self._big * coords != vec:
            raise ConventionError("matrix outside the span of the Chevalley basis")
        return tuple(_to_fraction(c) for c in coords)

    def _build_structure(self):
        table = []
        for a in range(self.dim):
            row = []
            for b in range(self.dim):
                row.append(self.decompose(_comm(self.matrices[a], self.matrices[b])))
            table.append(row)
        return table

    def _build_form(self):
        ads = [self.adjoint_matrix(self.basis(a)) for a in range(self.dim)]
        scale = Fraction(1, 2 * self.dual_coxeter)
        form = []
        for a in range(self.dim):
            row = []
            for b in range(self.dim):
                trace = sum(ads[a][i][j] * ads[b][j][i] for i in range(self.dim) for j in range(self.dim))
                row.append(trace * scale)
            form.append(row)
        return form

    # -- algebra operations --------------------------------------------------

    def bracket(self, x, y):
        """Bracket of two dense elements"""
        out = [Fraction(0)] * self.dim
        for a, xa in enumerate(x):
            if not xa:
                continue
            for b, yb in enumerate(y):
                if not yb:
                    continue
                coeff = xa * yb
                for c, s in enumerate(self.structure[a][b]):
                    if s:
                        out[c] += coeff * s
        return tuple(out)

    def form(self, x, y):
        """Normalized invariant form tr(ad x ad y) / (2 h^vee)"""
        return sum((xa * self.form_matrix[a][b] * yb
                    for a, xa in enumerate(x) if xa
                    for b, yb in enumerate(y) if yb), Fraction(0))

    def adjoint_matrix(self, x):
        """Matrix of ad x, entry [c][b] = coefficient of basis c in [x, B_b]"""
        out = [[Fraction(0)] * self.dim for _ in range(self.dim)]
        for a, xa in enumerate(x):
            if not xa:
                continue
            for b in range(self.dim):
                for c, s in enumerate(self.structure[a][b]):
                    if s:
                        out[c][b] += xa * s
        return out

    def defining_matrix(self, x):
        total = sympy.zeros(*self.matrices[0].shape)
        for a, xa in enumerate(x):
            if xa:
                total += sympy.Rational(xa.numerator, xa.denominator) * self.matrices[a]
        return [[_to_fraction(total[i, j]) for j in range(total.cols)] for i in range(total.rows)]

    def representation(self, name):
        """
        Matrices of all basis elements in a finite-dimensional module

        Args:
            name: "adjoint" or "defining"

        Returns:
            List of matrices (lists of Fraction rows), one per basis element
        """
        if name == "adjoint":
            return [self.adjoint_matrix(self.basis(a)) for a in range(self.dim)]
        if name == "defining":
            return [self.defining_matrix(self.basis(a)) for a in range(self.dim)]
        raise UnsupportedTypeError(f"unknown module {name}")

    # -- weights -------------------------------------------------------------

    def root_value(self, a, i):
        """alpha_a(h_i)"""
        coords = self.positive_roots[a].coordinates
        return sum(Fraction(c) * self.cartan_matrix[i][j] for j, c in enumerate(coords))

    def root_weight(self, a):
        return tuple(self.root_value(a, i) for i in range(self.rank))

    def weight(self, idx):
        """h-weight of a basis element as values on h_1..h_r"""
        kind, a = self.kind(idx)
        if kind == "e":
            return self.root_weight(a)
        if kind == "f":
            return tuple(-v for v in self.root_weight(a))
        return tuple(Fraction(0) for _ in range(self.rank))

    def weight_pairing(self, lam, mu):
        """(lam, mu) = lam^T G^{-1} mu with G_ij = (h_i, h_j)"""
        return sum((lam[i] * self.gram_inverse[i][j] * mu[j]
                    for i in range(self.rank) for j in range(self.rank)), Fraction(0))

    def root_length(self, a):
        """(alpha, alpha)"""
        w = self.root_weight(a)
        return self.weight_pairing(w, w)

    def coroot(self, a):
        """h_alpha in the basis {h_i}"""
        return self.coroots[a]

    def coroot_element(self, a):
        out = [Fraction(0)] * self.dim
        for i, c in enumerate(self.coroots[a]):
            out[self.h(i)] = c
        return tuple(out)

    def pair_weight_coroot(self, lam, a):
        """lam(h_alpha)"""
        return sum((c * lam[i] for i, c in enumerate(self.coroots[a])), Fraction(0))

    def rho(self):
        return tuple(sum((self.root_value(a, i) for a in range(self.n_roots)), Fraction(0)) / 2
                     for i in range(self.rank))

    def regularity_check(self, chi):
        """True iff chi(h_alpha) != 0 for every positive root"""
        return all(self.pair_weight_coroot(tuple(Fraction(c) for c in chi), a) != 0
                   for a in range(self.n_roots))

    # -- checks and export ---------------------------------------------------

    def check_structure(self):
        """
        Exhaustive structural identities

        Returns:
            List of failure descriptions, empty when everything holds
        """
        failures = []
        basis = [self.basis(a) for a in range(self.dim)]
        for a in range(self.dim):
            for b in range(self.dim):
                if self.structure[a][b] != tuple(-c for c in self.structure[b][a]):
                    failures.append(f"antisymmetry fails on ({self.label(a)}, {self.label(b)})")
                for c in range(self.dim):
                    x, y, z = basis[a], basis[b], basis[c]
                    jac = [p + q + r for p, q, r in zip(self.bracket(x, self.bracket(y, z)),
                                                        self.bracket(y, self.bracket(z, x)),
                                                        self.bracket(z, self.bracket(x, y)))]
                    if any(jac):
                        failures.append(f"Jacobi fails on ({self.label(a)}, {self.label(b)}, {self.label(c)})")
                    if self.form(self.bracket(x, y), z) + self.form(y, self.bracket(x, z)):
                        failures.append(f"form not invariant on ({self.label(a)}, {self.label(b)}, {self.label(c)})")
        for a in range(self.n_roots):
            e, f, h = basis[self.e(a)], basis[self.f(a)], self.coroot_element(a)
            if self.bracket(e, f) != h:
                failures.append(f"[e,f] != h for root {self.positive_roots[a].label}")
            if self.bracket(h, e) != tuple(2 * v for v in e):
                failures.append(f"[h,e] != 2e for root {self.positive_roots[a].label}")
            if self.bracket(h, f) != tuple(-2 * v for v in f):
                failures.append(f"[h,f] != -2f for root {self.positive_roots[a].label}")
        if any(v != 1 for v in self.rho()):
            failures.append(f"rho(h_i) = {self.rho()}")
        return failures

    def check_representation(self, matrices):
        """Raise RepresentationError unless the matrices satisfy every bracket"""
        for a in range(self.dim):
            for b in range(a + 1, self.dim):
                target = [[Fraction(0)] * len(matrices[0]) for _ in matrices[0]]
                for c, s in enumerate(self.structure[a][b]):
                    if s:
                        target = [[t + s * m for t, m in zip(tr, mr)] for tr, mr in zip(target, matrices[c])]
                if commutator(matrices[a], matrices[b]) != target:
                    raise RepresentationError(f"bracket ({self.label(a)}, {self.label(b)}) not represented")
        return True

    def to_json(self):
        constants = []
        for a in range(self.dim):
            for b in range(self.dim):
                if any(self.structure[a][b]):
                    constants.append([self.label(a), self.label(b), [rational_to_str(c) for c in self.structure[a][b]]])
        return {
            "cartan_type": self.cartan_type,
            "rank": self.rank,
            "positive_roots": [list(r.coordinates) for r in self.positive_roots],
            "simple_roots": [list(r.coordinates) for r in self.simple_roots],
            "basis": [self.label(a) for a in range(self.dim)],
            "structure_constants": constants,
            "bilinear_form": [[rational_to_str(c) for c in row] for row in self.form_matrix],
            "dual_coxeter": self.dual_coxeter,
            "rho": [rational_to_str(c) for c in self.rho()],
        }


def build_lie_algebra(cartan_type):
    """
    Build the Chevalley-basis data of a supported simple Lie algebra

    Args:
        cartan_type: "A1", "A2" or "B2"

    Returns:
        LieAlgebraData
    """
    simple = _simple_e_matrices(cartan_type)
    rank = len(simple)
    units = [tuple(int(j == i) for j in range(rank)) for i in range(rank)]
    raising = {units[i]: simple[i] for i in range(rank)}
    chains = {}
    level = list(units)
    while level:
        candidates = sorted({tuple(c[j] + int(j == i) for j in range(rank)) for c in level for i in range(rank)},
                            key=root_order_key)
        level = []
        for cand in candidates:
            for i in range(rank):
                beta = tuple(cand[j] - int(j == i) for j in range(rank))
                if beta not in raising:
                    continue
                x = _comm(simple[i], raising[beta])
                if x != sympy.zeros(*x.shape):
                    raising[cand] = x
                    chains[cand] = (i, beta)
                    level.append(cand)
                    break
    ordered = sorted(raising, key=root_order_key)
    roots = [Root(c) for c in ordered]
    es = [raising[c] for c in ordered]
    fs = [_lowering_partner(e) for e in es]
    hs = [_comm(simple[i], _lowering_partner(simple[i])) for i in range(rank)]
    data = LieAlgebraData(cartan_type, roots, es + fs + hs, chains)
    logger.debug("built %s: %d positive roots, dim %d", cartan_type, data.n_roots, data.dim)
    return data
