"""
Differential operators in Weyl normal form

An operator is a dict {derivative exponents: coefficient}, functions to the
left of derivatives, coefficients sympy expressions in the coordinates, the
level k and the regular Cartan coordinates H_i.
"""
import logging
from math import comb

import sympy

logger = logging.getLogger(__name__)


class DiffOpSpace:
    """
    Coordinates of the differential-operator side for parameter N

    x_{alpha,n} (0 < n < N) on copies of u*, y_{i,n} (0 < n <= N) on copies of
    h* with y_{i,N} = H_i on the regular part, and z_i on the extra h* factor.
    Derivatives exist along x and y.
    """

    def __init__(self, alg, ring, N):
        self.alg = alg
        self.ring = ring
        self.N = N
        self.x = {(a, n): sympy.Symbol(f"x{r.label}_{n}")
                  for n in range(1, N) for a, r in enumerate(alg.positive_roots)}
        self.y = {(i, n): sympy.Symbol(f"y{i + 1}_{n}") for n in range(1, N) for i in range(alg.rank)}
        for i in range(alg.rank):
            self.y[(i, N)] = sympy.Symbol(f"H{i + 1}")
        self.z = {i: sympy.Symbol(f"z{i + 1}") for i in range(alg.rank)}
        self.derivative_variables = tuple(self.x.values()) + tuple(self.y.values())
        self._position = {v: p for p, v in enumerate(self.derivative_variables)}

    def zero(self):
        return DiffOpElement(self, {})

    def function(self, expr):
        return DiffOpElement(self, {self._unit(): sympy.sympify(expr)})

    def derivative(self, variable, coeff=1):
        exps = [0] * len(self.derivative_variables)
        exps[self._position[variable]] = 1
        return DiffOpElement(self, {tuple(exps): sympy.sympify(coeff)})

    def _unit(self):
        return tuple(0 for _ in self.derivative_variables)

    def count_generators(self):
        """Coordinates plus derivatives: r(2N + 1) + 2|positive roots|(N - 1)"""
        return 2 * len(self.x) + 2 * len(self.y) + len(self.z) - self.alg.rank


class DiffOpElement:
    """
    Differential operator sum_A f_A d^A

    Args:
        space: DiffOpSpace
        terms: dict derivative exponent tuple -> sympy coefficient
    """

    def __init__(self, space, terms):
        self.space = space
        self.terms = {}
        for exps, c in terms.items():
            c = sympy.cancel(c)
            if c != 0:
                self.terms[exps] = c

    def __add__(self, other):
        out = dict(self.terms)
        for exps, c in other.terms.items():
            out[exps] = out.get(exps, 0) + c
        return DiffOpElement(self.space, out)

    def __sub__(self, other):
        return self + other.scaled(-1)

    def scaled(self, c):
        return DiffOpElement(self.space, {exps: c * f for exps, f in self.terms.items()})

    def __mul__(self, other):
        """Composition, by the Leibniz rule f d^A g d^B = sum_C binom(A, C) f d^C(g) d^(A - C + B)"""
        variables = self.space.derivative_variables
        out = {}
        for a_exps, f in self.terms.items():
            for b_exps, g in other.terms.items():
                for c_exps in _sub_indices(a_exps):
                    weight = 1
                    dg = g
                    for var, a, c in zip(variables, a_exps, c_exps):
                        if c:
                            weight *= comb(a, c)
                            dg = sympy.diff(dg, var, c)
                    if dg == 0:
                        continue
                    exps = tuple(a - c + b for a, c, b in zip(a_exps, c_exps, b_exps))
                    out[exps] = out.get(exps, 0) + weight * f * dg
        return DiffOpElement(self.space, out)

    def bracket(self, other):
        return self * other - other * self

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (self - other).is_zero()

    def constant_value(self):
        """The coefficient of d^0 when the operator is a function, else None"""
        unit = self.space._unit()
        if set(self.terms) - {unit}:
            return None
        return self.terms.get(unit, sympy.Integer(0))

    def __repr__(self):
        variables = self.space.derivative_variables
        parts = []
        for exps, c in sorted(self.terms.items()):
            ders = "".join(f" d/d{v}" + (f"^{e}" if e > 1 else "") for v, e in zip(variables, exps) if e)
            parts.append(f"({c}){ders}")
        return " + ".join(parts) or "0"


def _sub_indices(exps):
    if not exps:
        yield ()
        return
    for c in range(exps[0] + 1):
        for rest in _sub_indices(exps[1:]):
            yield (c,) + rest


def identify_symbol(space, symbol):
    """
    Image of a generator of the endomorphism ring

    a*_{alpha,-n} -> x_{alpha,n};  a_{alpha,n} -> -d/dx_{alpha,n};
    b_{i,n} -> y_{i,n} (0 < n <= N);  b_{i,0} -> z_i;
    b_{i,-n} -> -(2 n (k - k_c) / (alpha_i, alpha_i)) d_{alpha_i} on the n-th copy;
    ("fun", phi) -> phi(H)
    """
    alg, ring, N = space.alg, space.ring, space.N
    kind = symbol[0]
    if kind == "fun":
        return space.function(ring.to_expr(symbol[1]))
    _, idx, n = symbol
    if kind == "s":
        return space.function(space.x[(idx, -n)])
    if kind == "a":
        return space.derivative(space.x[(idx, n)], -1)
    if n > 0:
        return space.function(space.y[(idx, n)])
    if n == 0:
        return space.function(space.z[idx])
    m = -n
    length = alg.root_length(alg.simple_index(idx))
    scale = -sympy.Rational(2 * m) * ring.to_expr(ring.shifted_level) / sympy.Rational(length.numerator, length.denominator)
    out = space.zero()
    for j in range(alg.rank):
        value = alg.root_value(alg.simple_index(idx), j)
        if value:
            out = out + space.derivative(space.y[(j, m)], scale * sympy.Rational(value.numerator, value.denominator))
    return out
