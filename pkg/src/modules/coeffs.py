"""
Coefficient ring: rational functions in the level k and the top Cartan modes H_i

Elements are sympy FracField elements over QQ. Denominators are restricted to
products of k - k_c, k + k_c and the root forms H_alpha.
"""
import logging
import random
from fractions import Fraction

import sympy
from sympy import QQ
from sympy.polys.fields import field

from src.utils.errors import DenominatorError

logger = logging.getLogger(__name__)


def qq_to_fraction(c):
    """Convert a QQ domain element to a Fraction"""
    return Fraction(int(c.numerator), int(c.denominator))


def evaluate_poly(poly, point):
    """
    Evaluate a sparse polynomial at a rational point

    Args:
        poly: sympy PolyElement over QQ
        point: Sequence of Fractions, one per ring generator

    Returns:
        Fraction
    """
    total = Fraction(0)
    for monom, coeff in poly.terms():
        term = qq_to_fraction(coeff)
        for value, exp in zip(point, monom):
            if exp:
                term *= value ** exp
        total += term
    return total


class CoeffRing:
    """
    The localized coefficient ring Q(k)[H_1..H_r][1/H_alpha]

    Args:
        rank: Number of Cartan generators
        critical: The critical level k_c
        root_coroots: For every positive root, the coordinates of h_alpha in the basis {h_i}
        level: None for a symbolic level, otherwise a Fraction substituted for k
    """

    def __init__(self, rank, critical, root_coroots, level=None):
        names = ["k"] + [f"H{i + 1}" for i in range(rank)]
        gens = field(",".join(names), QQ)
        self.field = gens[0]
        self.k_symbol = gens[1]
        self.H = tuple(gens[2:])
        self.rank = rank
        self.critical = critical
        self.root_coroots = tuple(tuple(Fraction(c) for c in cr) for cr in root_coroots)
        self.level = level
        self.zero = self.field.zero
        self.one = self.field.one
        self._fractions = {}
        self.k = self.k_symbol if level is None else self.from_fraction(level)
        self.root_forms = tuple(self.linear_form(c) for c in root_coroots)
        self._allowed = [f.numer.monic() for f in self.root_forms]
        if level is None:
            self._allowed.append((self.k_symbol - critical).numer.monic())
            self._allowed.append((self.k_symbol + critical).numer.monic())

    def from_fraction(self, q):
        """Embed an exact rational"""
        q = Fraction(q)
        cached = self._fractions.get(q)
        if cached is None:
            cached = self.field(q.numerator) / self.field(q.denominator)
            self._fractions[q] = cached
        return cached

    def linear_form(self, coords):
        """Sum of coords[i] * H_i"""
        total = self.zero
        for c, h in zip(coords, self.H):
            if c:
                total += self.from_fraction(c) * h
        return total

    @property
    def shifted_level(self):
        """k - k_c, the Heisenberg level of the free field side"""
        return self.k - self.critical

    @property
    def hbar(self):
        """1 / (2 (k + k_c))"""
        return self.one / (2 * (self.k + self.critical))

    def from_string(self, text):
        symbols = {str(s): s for s in self.field.symbols}
        return self.field.from_expr(sympy.sympify(text, locals=symbols))

    def to_string(self, c):
        return str(c.as_expr())

    def to_expr(self, c):
        return c.as_expr()

    def check_allowed(self, c):
        """
        Raise DenominatorError unless every denominator factor is allowed

        Args:
            c: Ring element

        Returns:
            c unchanged
        """
        _, factors = c.denom.factor_list()
        for f, _ in factors:
            if f.is_ground:
                continue
            if not any(f.monic() == a for a in self._allowed):
                raise DenominatorError(f"denominator factor {f.as_expr()} outside the localization")
        return c

    def is_scalar(self, c):
        """True if c does not involve any H_i"""
        return all(c.numer.degree(j) <= 0 and c.denom.degree(j) <= 0 for j in range(1, self.rank + 1))

    def decompose(self, c):
        """
        Split c into H-monomials over a product of root forms

        Args:
            c: Ring element

        Returns:
            (terms, root_exponents, scalar_denominator) with
            c = sum(s * prod(H_i^e_i)) / (prod(H_alpha^root_exponents[alpha]) * scalar_denominator)
            and every s, scalar_denominator free of H
        """
        root_exponents = {}
        scalar_den = self.one
        lead, factors = c.denom.factor_list()
        scalar_den *= self.field(lead)
        for f, e in factors:
            if all(f.degree(j) <= 0 for j in range(1, self.rank + 1)):
                scalar_den *= self.field(f) ** e
                continue
            monic = f.monic()
            for idx, form in enumerate(self.root_forms):
                ref = form.numer.monic()
                if monic == ref:
                    # f = lc * H_alpha * (denominator of H_alpha as stored)
                    ratio = self.field(f) / form
                    scalar_den *= ratio ** e
                    root_exponents[idx] = root_exponents.get(idx, 0) + e
                    break
            else:
                raise DenominatorError(f"cannot invert {f.as_expr()} by root forms")
        terms = []
        for monom, coeff in c.numer.terms():
            scalar = self.field(coeff) * self.k_symbol ** monom[0]
            terms.append((scalar, tuple(monom[1:])))
        return terms, root_exponents, scalar_den

    def root_denominator_exponents(self, c):
        """Exponent of every root form in the denominator of c"""
        return self.decompose(c)[1]

    def random_point(self, rng=None):
        """
        A rational point (k, H_1..H_r) avoiding every allowed denominator

        Args:
            rng: random.Random instance

        Returns:
            Tuple of Fractions
        """
        rng = rng or random.Random(0)
        while True:
            point = tuple(Fraction(rng.randint(-97, 97), rng.randint(1, 13)) for _ in range(self.rank + 1))
            if all(evaluate_poly(a, point) != 0 for a in self._allowed):
                return point

    def evaluate(self, c, point):
        """Evaluate c at a point from random_point"""
        den = evaluate_poly(c.denom, point)
        if den == 0:
            raise DenominatorError("evaluation point hits a pole")
        return evaluate_poly(c.numer, point) / den


def coeff_ring(alg, level=None):
    """
    The coefficient ring attached to a Lie algebra

    Args:
        alg: LieAlgebraData
        level: None for a symbolic k, otherwise a Fraction

    Returns:
        CoeffRing with k_c = h^vee and one root form per positive root
    """
    return CoeffRing(alg.rank, alg.dual_coxeter, alg.coroots, level)
