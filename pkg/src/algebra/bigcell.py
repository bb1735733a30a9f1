"""
Action of a simple Lie algebra on the big cell as polynomial vector fields

A point of the big cell is u = exp(-Y) with Y = sum_alpha y_alpha e_alpha.
Differentiating the Gauss factorization of exp(-s x) u gives, in closed form,

    Ydot = psi(ad Y)(pi_u(exp(ad Y) x)),     psi(z) = z / (e^z - 1)

whose e_beta components are the coefficients of d/dy_beta.
"""
import logging
from fractions import Fraction

import sympy

from src.utils.errors import ConventionError

logger = logging.getLogger(__name__)


def _psi_coefficients():
    """Taylor coefficients of z / (e^z - 1), generated lazily"""
    coeffs = [sympy.Integer(1)]
    yield coeffs[0]
    n = 1
    while True:
        c = -sum(coeffs[j] / sympy.factorial(n - j + 1) for j in range(n))
        coeffs.append(c)
        yield c
        n += 1


def poly_terms(expr, variables):
    """
    Sparse terms of a polynomial

    Args:
        expr: sympy polynomial expression
        variables: Ordered coordinate symbols

    Returns:
        List of (Fraction coefficient, exponent tuple)
    """
    expr = sympy.expand(expr)
    if expr == 0:
        return []
    poly = sympy.Poly(expr, *variables)
    out = []
    for monom, coeff in poly.terms():
        coeff = sympy.Rational(coeff)
        out.append((Fraction(int(coeff.p), int(coeff.q)), tuple(monom)))
    return out


class PolyVectorField:
    """
    Polynomial vector field sum_beta terms[beta] d/dy_beta

    Args:
        terms: dict root index -> sympy polynomial
        variables: Coordinate symbols y_alpha in root order
    """

    def __init__(self, terms, variables):
        self.variables = variables
        self.terms = {b: sympy.expand(p) for b, p in terms.items() if sympy.expand(p) != 0}

    def component(self, beta):
        return self.terms.get(beta, sympy.Integer(0))

    def bracket(self, other):
        """Lie bracket of vector fields"""
        out = {}
        for beta in range(len(self.variables)):
            total = sympy.Integer(0)
            for gamma, y in enumerate(self.variables):
                total += self.component(gamma) * sympy.diff(other.component(beta), y)
                total -= other.component(gamma) * sympy.diff(self.component(beta), y)
            out[beta] = total
        return PolyVectorField(out, self.variables)

    def combine(self, other, scale=1):
        out = dict(self.terms)
        for b, p in other.terms.items():
            out[b] = out.get(b, 0) + scale * p
        return PolyVectorField(out, self.variables)

    def scaled(self, c):
        return PolyVectorField({b: c * p for b, p in self.terms.items()}, self.variables)

    def __eq__(self, other):
        keys = set(self.terms) | set(other.terms)
        return all(sympy.expand(self.component(b) - other.component(b)) == 0 for b in keys)

    def __repr__(self):
        return " + ".join(f"({p}) d/d{self.variables[b]}" for b, p in sorted(self.terms.items())) or "0"


class BigCellRealization:
    """
    Images of the Chevalley basis as vector fields on the big cell

    Args:
        alg: LieAlgebraData
        images: List of PolyVectorField, one per basis element
        variables: Coordinate symbols
        scalings: Coordinate rescalings y'_alpha = s_alpha y_alpha applied so far
    """

    def __init__(self, alg, images, variables, scalings=None):
        self.alg = alg
        self.images = images
        self.variables = variables
        self.scalings = scalings or {a: Fraction(1) for a in range(alg.n_roots)}

    def image(self, idx):
        return self.images[idx]

    def image_of(self, x):
        """Image of a dense algebra element"""
        total = PolyVectorField({}, self.variables)
        for a, c in enumerate(x):
            if c:
                total = total.combine(self.images[a], sympy.Rational(c.numerator, c.denominator))
        return total

    def rescaled(self, scalings):
        """
        Realization in the coordinates y'_alpha = s_alpha y_alpha

        The result is composed with the torus automorphism e_alpha -> e_alpha / t_alpha,
        f_alpha -> t_alpha f_alpha, t_alpha = prod_i s_i^{m_i}, so simple e_i still lead with 1.

        Args:
            scalings: dict root index -> nonzero Fraction

        Returns:
            New BigCellRealization
        """
        alg = self.alg
        rational = {a: sympy.Rational(s.numerator, s.denominator) for a, s in scalings.items()}
        subs = {self.variables[a]: self.variables[a] / s for a, s in rational.items()}
        simple = [rational.get(alg.simple_index(i), sympy.Integer(1)) for i in range(alg.rank)]
        torus = [sympy.Integer(1)] * alg.dim
        for a, root in enumerate(alg.positive_roots):
            t = sympy.prod([s ** int(m) for s, m in zip(simple, root.coordinates)])
            torus[alg.e(a)] = 1 / t
            torus[alg.f(a)] = t
        images = []
        for idx, field in enumerate(self.images):
            terms = {b: torus[idx] * rational.get(b, sympy.Integer(1)) * p.subs(subs, simultaneous=True)
                     for b, p in field.terms.items()}
            images.append(PolyVectorField(terms, self.variables))
        combined = {a: self.scalings[a] * scalings.get(a, Fraction(1)) for a in self.scalings}
        return BigCellRealization(alg, images, self.variables, combined)

    def monomial_weight(self, exponents, beta):
        """Root-coordinate weight of y^exponents d/dy_beta"""
        roots = self.alg.positive_roots
        weight = list(roots[beta].coordinates)
        for gamma, e in enumerate(exponents):
            for j, c in enumerate(roots[gamma].coordinates):
                weight[j] -= e * c
        return tuple(weight)

    def basis_weight(self, idx):
        kind, a = self.alg.kind(idx)
        if kind == "h":
            return tuple(0 for _ in range(self.alg.rank))
        sign = 1 if kind == "e" else -1
        return tuple(sign * c for c in self.alg.positive_roots[a].coordinates)

    def check_homomorphism(self):
        """Failures of images([x,y]) = [images(x), images(y)] on basis pairs"""
        failures = []
        alg = self.alg
        for a in range(alg.dim):
            for b in range(a + 1, alg.dim):
                lhs = self.image_of(alg.bracket(alg.basis(a), alg.basis(b)))
                rhs = self.images[a].bracket(self.images[b])
                if not lhs == rhs:
                    failures.append(f"[{alg.label(a)}, {alg.label(b)}]")
        return failures

    def check_homogeneity(self):
        """Failures of h |-> -sum beta(h) y_beta d/dy_beta"""
        failures = []
        alg = self.alg
        for i in range(alg.rank):
            expected = PolyVectorField({b: -sympy.Rational(alg.root_value(b, i).numerator, alg.root_value(b, i).denominator)
                                        * self.variables[b] for b in range(alg.n_roots)}, self.variables)
            if not self.images[alg.h(i)] == expected:
                failures.append(f"h{i + 1}")
        return failures

    def check_weights(self):
        """Failures of weight homogeneity of every term"""
        failures = []
        for idx, field in enumerate(self.images):
            target = self.basis_weight(idx)
            for beta, p in field.terms.items():
                for _, exps in poly_terms(p, self.variables):
                    if self.monomial_weight(exps, beta) != target:
                        failures.append(f"{self.alg.label(idx)} term at d/d{self.variables[beta]}")
        return failures

    def check_leading_shape(self):
        """Failures of e_alpha = d/dy_alpha + higher terms without constants"""
        failures = []
        alg = self.alg
        zero = {y: 0 for y in self.variables}
        for a in range(alg.n_roots):
            field = self.images[alg.e(a)]
            if sympy.expand(field.component(a) - 1) != 0:
                failures.append(f"e{alg.positive_roots[a].label} leading coefficient {field.component(a)}")
            for beta, p in field.terms.items():
                if beta == a:
                    continue
                if alg.positive_roots[beta].height <= alg.positive_roots[a].height:
                    failures.append(f"e{alg.positive_roots[a].label} has a term at d/d{self.variables[beta]}")
                if p.subs(zero) != 0:
                    failures.append(f"e{alg.positive_roots[a].label} constant term at d/d{self.variables[beta]}")
        return failures


def compute_realization(alg):
    """
    Vector fields of the Chevalley basis on the big cell

    Args:
        alg: LieAlgebraData

    Returns:
        BigCellRealization with every e_alpha leading with coefficient 1
    """
    variables = tuple(sympy.Symbol(f"y{r.label}") for r in alg.positive_roots)
    structure = [[[sympy.Rational(c.numerator, c.denominator) for c in alg.structure[a][b]]
                  for b in range(alg.dim)] for a in range(alg.dim)]
    Y = [sympy.Integer(0)] * alg.dim
    for a in range(alg.n_roots):
        Y[alg.e(a)] = variables[a]

    def ad_y(v):
        out = [sympy.Integer(0)] * alg.dim
        for a in range(alg.n_roots):
            for b, vb in enumerate(v):
                if vb == 0:
                    continue
                for c, s in enumerate(structure[alg.e(a)][b]):
                    if s != 0:
                        out[c] += s * Y[alg.e(a)] * vb
        return [sympy.expand(c) for c in out]

    def is_zero(v):
        return all(c == 0 for c in v)

    images = []
    for idx in range(alg.dim):
        x = [sympy.Integer(int(j == idx)) for j in range(alg.dim)]
        total, term, j = list(x), list(x), 1
        while True:
            term = [c / j for c in ad_y(term)]
            if is_zero(term):
                break
            total = [p + q for p, q in zip(total, term)]
            j += 1
        upper = [total[c] if c < alg.n_roots else sympy.Integer(0) for c in range(alg.dim)]
        coefficients = _psi_coefficients()
        field = [next(coefficients) * c for c in upper]
        term = upper
        for c_n in coefficients:
            term = ad_y(term)
            if is_zero(term):
                break
            field = [p + c_n * q for p, q in zip(field, term)]
        images.append(PolyVectorField({a: field[alg.e(a)] for a in range(alg.n_roots)}, variables))
    logger.debug("big cell realization of %s computed", alg.cartan_type)
    return BigCellRealization(alg, images, variables)


def extract_PQ(real):
    """
    Read off the polynomial tables of the simple and all root vectors

    Args:
        real: BigCellRealization

    Returns:
        dict with keys "P" (simple i -> beta -> poly, e_i minus its leading term),
        "Q" (simple i -> beta -> poly, the image of f_i) and "P_all" (root -> beta -> poly)
    """
    alg = real.alg
    zero = {y: 0 for y in real.variables}
    tables = {"P": {}, "Q": {}, "P_all": {}}
    for a in range(alg.n_roots):
        field = real.image(alg.e(a))
        row = {}
        for beta, p in field.terms.items():
            q = sympy.expand(p - 1) if beta == a else p
            if q != 0:
                row[beta] = q
        tables["P_all"][a] = row
    for i in range(alg.rank):
        a = alg.simple_index(i)
        tables["P"][i] = dict(tables["P_all"][a])
        tables["Q"][i] = dict(real.image(alg.f(a)).terms)
    for name in ("P", "Q"):
        for i, row in tables[name].items():
            for beta, p in row.items():
                if p.subs(zero) != 0:
                    raise ConventionError(f"{name}^{i + 1}_{beta} has a constant term")
    return tables


def pq_to_json(real, tables):
    """Serialize the P/Q tables keyed by 'i,beta' with sparse terms"""
    def encode(row_table, key_label):
        out = {}
        for i, row in row_table.items():
            for beta, p in row.items():
                key = f"{key_label(i)},{real.alg.positive_roots[beta].label}"
                out[key] = [[list(exps), str(c)] for c, exps in poly_terms(p, real.variables)]
        return out
    return {
        "variables": [str(y) for y in real.variables],
        "P": encode(tables["P"], lambda i: str(i + 1)),
        "Q": encode(tables["Q"], lambda i: str(i + 1)),
        "P_all": encode(tables["P_all"], lambda a: real.alg.positive_roots[a].label),
    }
