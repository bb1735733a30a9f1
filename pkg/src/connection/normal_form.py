"""
Gauge normal forms of formal connections with regular leading term

A connection d + sum_n A_n t^n dt is stored as its coefficients A_n, dense
tuples in the Chevalley basis, for -N-1 <= n <= T. Gauge elements are ordered
products exp(X_1) ... exp(X_m) of truncated exponentials, X_j = sum_m X_{j,m} t^m.
"""
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from src.utils.errors import NormalFormError, TruncationError
from src.utils.linalg import rank, solve
from src.utils.serialization import rational_to_str

logger = logging.getLogger(__name__)

GROUPS = ("G+", "U~")
VARIANTS = ("gauge", "adjoint")
MAX_EXP_TERMS = 64


# -- Lie algebra valued series -----------------------------------------------

def _add(x, y, scale=1):
    return tuple(a + scale * b for a, b in zip(x, y))


def _scale(x, c):
    return tuple(c * a for a in x)


def _series_add(X, Y, scale=1):
    out = dict(X)
    for n, y in Y.items():
        total = _add(out[n], y, scale) if n in out else _scale(y, scale)
        if any(total):
            out[n] = total
        else:
            out.pop(n, None)
    return out


def _series_bracket(alg, X, Y, top):
    out = {}
    for m, x in X.items():
        for n, y in Y.items():
            if m + n > top:
                continue
            z = alg.bracket(x, y)
            if any(z):
                out = _series_add(out, {m + n: z})
    return out


def _derivative(X):
    return {m - 1: _scale(x, m) for m, x in X.items() if m}


def _exp_series(alg, X, Y, top, weights):
    """sum_j weights(j) ad_X^j(Y), stopping when every term passes the truncation"""
    out = {}
    term = dict(Y)
    for j in range(MAX_EXP_TERMS):
        if not term:
            return out
        out = _series_add(out, {n: _scale(y, weights(j)) for n, y in term.items()})
        term = _series_bracket(alg, X, term, top)
    raise TruncationError("exponential series does not terminate within the truncation")


def ad_exp(alg, X, A, top):
    """Ad_{exp X} A = sum_j ad_X^j(A) / j!"""
    return _exp_series(alg, X, A, top, lambda j: Fraction(1, factorial(j)))


def dexp(alg, X, top):
    """(d exp X / dt) exp(-X) = sum_j ad_X^j(X') / (j + 1)!"""
    return _exp_series(alg, X, _derivative(X), top, lambda j: Fraction(1, factorial(j + 1)))


# -- element helpers ---------------------------------------------------------

def cartan_part(alg, x):
    return tuple(c if idx >= alg.h(0) else Fraction(0) for idx, c in enumerate(x))


def off_diagonal_part(alg, x):
    return tuple(c if idx < alg.h(0) else Fraction(0) for idx, c in enumerate(x))


def upper_part(alg, x):
    return tuple(c if idx < alg.n_roots else Fraction(0) for idx, c in enumerate(x))


def root_of(alg, a, x):
    """alpha_a evaluated on the Cartan part of x"""
    return sum((x[alg.h(i)] * alg.root_value(a, i) for i in range(alg.rank)), Fraction(0))


def _unit(alg, idx):
    return alg.basis(idx)


# -- connections and gauges --------------------------------------------------

@dataclass
class FormalConnection:
    """
    d + sum_{n=-N-1}^{T} A_n t^n dt

    Args:
        alg: LieAlgebraData
        N: Level parameter, the pole has order N + 1
        T: Truncation order
        coeffs: dict n -> dense element
    """
    alg: object
    N: int
    T: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = {n: tuple(Fraction(c) for c in x) for n, x in self.coeffs.items()
                       if any(x) and n <= self.T}
        if any(n < -self.N - 1 for n in self.coeffs):
            raise TruncationError(f"pole of order above {self.N + 1}")

    def coefficient(self, n):
        return self.coeffs.get(n, self.alg.zero())

    @property
    def leading(self):
        return self.coefficient(-self.N - 1)

    def orders(self):
        return range(-self.N - 1, self.T + 1)

    def check_leading(self):
        """Raise NormalFormError unless the leading term is a regular Cartan element"""
        lead = self.leading
        if any(off_diagonal_part(self.alg, lead)):
            raise NormalFormError("leading coefficient is not in the Cartan subalgebra")
        for a in range(self.alg.n_roots):
            if not root_of(self.alg, a, lead):
                raise NormalFormError(f"leading coefficient is singular on root {self.alg.positive_roots[a].label}")
        return lead

    def __eq__(self, other):
        return self.N == other.N and self.T == other.T and \
            all(self.coefficient(n) == other.coefficient(n) for n in self.orders())

    def with_coefficients(self, coeffs):
        return FormalConnection(self.alg, self.N, self.T, coeffs)

    def to_json(self):
        return {
            "N": self.N,
            "T": self.T,
            "coefficients": {str(n): [rational_to_str(c) for c in self.coefficient(n)] for n in self.orders()},
        }


@dataclass
class GaugeElement:
    """
    exp(X_1) exp(X_2) ... exp(X_m); factors act rightmost first

    Args:
        alg: LieAlgebraData
        N: Level parameter
        factors: List of exponent series {power: element}
        group: "G+" (exp of t^N (u_- + u) + t^(N+1) g[[t]]) or "U~" (exp of t u[[t]])
    """
    alg: object
    N: int
    factors: list = field(default_factory=list)
    group: str = "G+"

    def __post_init__(self):
        if self.group not in GROUPS:
            raise NormalFormError(f"unknown gauge group {self.group}")

    def inverse(self):
        return GaugeElement(self.alg, self.N, [{m: _scale(x, -1) for m, x in X.items()}
                                              for X in reversed(self.factors)], self.group)

    def __mul__(self, other):
        return GaugeElement(self.alg, self.N, self.factors + other.factors, self.group)

    def is_identity(self):
        return not any(self.factors)

    def check_group(self):
        """Failure descriptions for exponents outside the group's Lie algebra"""
        failures = []
        for X in self.factors:
            for m, x in X.items():
                if self.group == "U~":
                    if m < 1 or upper_part(self.alg, x) != x:
                        failures.append(f"exponent at t^{m} leaves t u[[t]]")
                elif m < self.N or (m == self.N and any(cartan_part(self.alg, x))):
                    failures.append(f"exponent at t^{m} leaves the level subalgebra")
        return failures

    def to_json(self):
        return {
            "N": self.N,
            "group": self.group,
            "factors": [{str(m): [rational_to_str(c) for c in x] for m, x in sorted(X.items())} for X in self.factors],
        }


def gauge_transform(conn, g, variant="gauge"):
    """
    Act by a gauge element

    variant "gauge": d + A -> d + Ad_g A - (dg) g^-1
    variant "adjoint": A -> Ad_g A

    Returns:
        FormalConnection, exact up to the truncation order
    """
    if variant not in VARIANTS:
        raise NormalFormError(f"unknown gauge variant {variant}")
    alg, top = conn.alg, conn.T
    A = dict(conn.coeffs)
    for X in reversed(g.factors):
        if any(m < 0 for m in X):
            raise TruncationError("gauge exponents must be regular at t = 0")
        A = ad_exp(alg, X, A, top)
        if variant == "gauge":
            A = _series_add(A, dexp(alg, X, top), -1)
    return conn.with_coefficients({n: x for n, x in A.items() if n <= top})


# -- normal form -------------------------------------------------------------

def _gauge_system(conn):
    """
    Unknown exponent components and the equations of the normal-form shape

    Off-diagonal exponents sit at powers N .. T+N+1 and Cartan exponents at
    N+1 .. T+1; the equations are the off-diagonal entries at orders -1 .. T and
    the Cartan entries at orders N .. T. Cartan exponents above T+1 are set to zero.
    """
    alg, N, T = conn.alg, conn.N, conn.T
    off = range(alg.h(0))
    cartan = range(alg.h(0), alg.dim)
    unknowns = [(p, idx) for p in range(N, T + N + 2) for idx in off]
    unknowns += [(p, idx) for p in range(N + 1, T + 2) for idx in cartan]
    equations = [(n, idx) for n in range(-1, T + 1) for idx in off]
    equations += [(n, idx) for n in range(N, T + 1) for idx in cartan]
    return unknowns, equations


def _newton_exponent(conn):
    """
    Exponent solving the linearized shape equations [X, A] - X' = -residual

    The orders -N .. -2 feed the Cartan equations from off-diagonal exponents
    of higher power, so the whole truncated system is solved at once.

    Returns:
        Exponent series, empty when conn already has the normal-form shape
    """
    alg = conn.alg
    unknowns, equations = _gauge_system(conn)
    residual = [conn.coefficient(n)[idx] for n, idx in equations]
    if not any(residual):
        return {}
    columns = []
    for power, idx in unknowns:
        X = {power: _unit(alg, idx)}
        change = _series_add(_series_bracket(alg, X, conn.coeffs, conn.T), _derivative(X), -1)
        columns.append([change.get(n, alg.zero())[i] for n, i in equations])
    matrix = [list(row) for row in zip(*columns)]
    if rank(matrix) < len(unknowns):
        raise NormalFormError("linearized gauge action is singular on the truncated system")
    solution = solve(matrix, [-r for r in residual])
    if solution is None:
        raise NormalFormError("linearized gauge system is inconsistent")
    X = {}
    for (power, idx), c in zip(unknowns, solution):
        if c:
            X = _series_add(X, {power: _scale(_unit(alg, idx), c)})
    return X


def check_shape(conn):
    """Failure descriptions where conn leaves the normal-form shape"""
    alg = conn.alg
    failures = []
    for n in conn.orders():
        x = conn.coefficient(n)
        if n >= -1 and any(off_diagonal_part(alg, x)):
            failures.append(f"off-diagonal term at order {n}")
        if n >= conn.N and any(cartan_part(alg, x)):
            failures.append(f"Cartan term at order {n}")
    if any(off_diagonal_part(alg, conn.leading)):
        failures.append("leading term leaves the Cartan subalgebra")
    return failures


def normal_form(conn):
    """
    The unique representative with Cartan coefficients in orders -1 .. N-1 and
    nothing from order N on, reached by the level subalgebra's gauge group

    Coefficients of orders -N .. -2 are untouched by the group and may carry
    root vectors. Each pass applies the exponent of one linearized solve; the
    lowest order of the remaining error rises with every pass.

    Returns:
        (GaugeElement g, FormalConnection) with g . conn equal to the normal form

    Raises:
        NormalFormError: Non-regular leading term, singular linearization or no convergence
    """
    alg, N = conn.alg, conn.N
    conn.check_leading()
    if conn.T < N - 1:
        raise NormalFormError(f"truncation order {conn.T} is below N - 1 = {N - 1}")
    factors = []
    current = conn
    for attempt in range(2 * (conn.T + N + 2)):
        X = _newton_exponent(current)
        if not X:
            break
        current = gauge_transform(current, GaugeElement(alg, N, [X]))
        factors.insert(0, X)
        logger.debug("pass %d applied exponent powers %s", attempt, sorted(X))
    else:
        raise NormalFormError("gauge normalization did not converge")
    failures = check_shape(current)
    if failures:
        raise NormalFormError(failures[0])
    return GaugeElement(alg, N, factors), current


def torus_conjugate(conn, scalings):
    """
    Conjugation by the torus element acting on e_alpha by prod_i z_i^(alpha_i)

    Args:
        scalings: One nonzero Fraction per simple root
    """
    alg = conn.alg
    factors = []
    for root in alg.positive_roots:
        c = Fraction(1)
        for z, m in zip(scalings, root.coordinates):
            c *= Fraction(z) ** m
        factors.append(c)
    out = {}
    for n, x in conn.coeffs.items():
        y = list(x)
        for a, c in enumerate(factors):
            y[alg.e(a)] = x[alg.e(a)] * c
            y[alg.f(a)] = x[alg.f(a)] / c
        out[n] = tuple(y)
    return conn.with_coefficients(out)


# -- the map (u, B) -> Ad_u B ------------------------------------------------

def solve_phi_prime(conn):
    """
    Find u in exp(t u[[t]]) with Ad_u^-1 A in the Borel part, order by order

    Each step solves [A_{-N-1}, u_m] = -pi_u(B_{m-N-1}), triangular because the
    leading term is regular.

    Returns:
        (GaugeElement u, FormalConnection B) with Ad_u B = A to the truncation
    """
    alg, N = conn.alg, conn.N
    lead = conn.check_leading()
    current = conn
    exponents = []
    for m in range(1, conn.T + N + 2):
        target = upper_part(alg, current.coefficient(m - N - 1))
        if not any(target):
            continue
        u = alg.zero()
        for a in range(alg.n_roots):
            c = target[alg.e(a)]
            if c:
                u = _add(u, _scale(_unit(alg, alg.e(a)), -c / root_of(alg, a, lead)))
        # applying exp(-u t^m) removes the upper part at order m - N - 1
        current = gauge_transform(current, GaugeElement(alg, N, [{m: _scale(u, -1)}], "U~"), "adjoint")
        exponents.append({m: u})
    for n in current.orders():
        if any(upper_part(alg, current.coefficient(n))):
            raise NormalFormError(f"upper part survives at order {n}")
    return GaugeElement(alg, N, exponents, "U~"), current


def phi_prime_rank(borel):
    """
    Rank of delta -> pi_u [delta, B] on t u[[t]] up to the truncation

    Returns:
        (rank, number of unknowns)
    """
    alg, N, T = borel.alg, borel.N, borel.T
    unknowns = [(m, a) for m in range(1, T + N + 2) for a in range(alg.n_roots)]
    equations = [(n, a) for n in range(-N, T + 1) for a in range(alg.n_roots)]
    columns = []
    for m, a in unknowns:
        change = _series_bracket(alg, {m: _unit(alg, alg.e(a))}, borel.coeffs, T)
        columns.append([change.get(n, alg.zero())[alg.e(b)] for n, b in equations])
    matrix = [list(row) for row in zip(*columns)]
    return rank(matrix), len(unknowns)


# -- random inputs and coordinates -------------------------------------------

def random_connection(alg, N, T, rng=None, bound=3):
    """
    Random input with regular Cartan leading term and full coefficients above it
    """
    rng = rng or random.Random(0)
    while True:
        lead = [Fraction(0)] * alg.dim
        for i in range(alg.rank):
            lead[alg.h(i)] = Fraction(rng.randint(-bound, bound))
        if all(root_of(alg, a, lead) for a in range(alg.n_roots)):
            break
    coeffs = {-N - 1: tuple(lead)}
    for n in range(-N, T + 1):
        coeffs[n] = tuple(Fraction(rng.randint(-bound, bound)) for _ in range(alg.dim))
    return FormalConnection(alg, N, T, coeffs)


def random_gauge(alg, N, T, rng=None, bound=2):
    """A random element of the level subalgebra's gauge group, one factor"""
    rng = rng or random.Random(0)
    X = {}
    for m in range(N, T + N + 2):
        x = tuple(Fraction(rng.randint(-bound, bound)) for _ in range(alg.dim))
        X[m] = off_diagonal_part(alg, x) if m == N else x
    return GaugeElement(alg, N, [{m: x for m, x in X.items() if any(x)}])


def darboux_report(conns, lambda_counts=None):
    """
    Normal-form coordinates of an ensemble of connections

    Cartan coordinates: the h-components of A_n, -N-1 <= n <= N-1.
    Residual data: the off-diagonal parts of A_n, -N <= n <= -2.

    Args:
        conns: FormalConnections sharing alg and N
        lambda_counts: Optional generator counts {"heisenberg", "total"} to compare with

    Returns:
        dict with the coordinate rows and the dimension counts
    """
    rows = []
    cartan_count = residual_count = 0
    for conn in conns:
        alg, N = conn.alg, conn.N
        _, nf = normal_form(conn)
        cartan = {n: [rational_to_str(nf.coefficient(n)[alg.h(i)]) for i in range(alg.rank)] for n in range(-N - 1, N)}
        residual = {n: [rational_to_str(c) for c in off_diagonal_part(alg, nf.coefficient(n))[:alg.h(0)]]
                    for n in range(-N, -1)}
        rows.append({"cartan": cartan, "residual": residual})
        cartan_count = sum(len(v) for v in cartan.values())
        residual_count = sum(len(v) for v in residual.values())
    report = {"rows": rows, "cartan_count": cartan_count, "residual_count": residual_count,
              "total_count": cartan_count + residual_count}
    if lambda_counts is not None:
        report["matches"] = (cartan_count == lambda_counts["heisenberg"]
                             and cartan_count + residual_count == lambda_counts["total"])
    return report


# -- checks ------------------------------------------------------------------

def check_round_trip(conn):
    """The inverse gauge takes the normal form back to the input"""
    g, nf = normal_form(conn)
    failures = g.check_group()
    back = gauge_transform(nf, g.inverse())
    for n in conn.orders():
        if back.coefficient(n) != conn.coefficient(n):
            failures.append(f"inverse gauge differs from the input at order {n}")
            break
    return failures


def check_uniqueness(conn, rng=None):
    """A randomly gauged copy has the same normal form"""
    scrambled = gauge_transform(conn, random_gauge(conn.alg, conn.N, conn.T, rng))
    _, a = normal_form(conn)
    _, b = normal_form(scrambled)
    return [] if a == b else ["gauge-equivalent inputs have different normal forms"]


def check_torus_equivariance(conn, scalings):
    """Normal form commutes with torus conjugation"""
    _, a = normal_form(torus_conjugate(conn, scalings))
    _, b = normal_form(conn)
    return [] if a == torus_conjugate(b, scalings) else ["normal form is not torus equivariant"]


def check_phi_prime(conn):
    """Ad_u B reproduces the input and the linearized map has full rank"""
    u, borel = solve_phi_prime(conn)
    failures = u.check_group()
    if gauge_transform(borel, u, "adjoint") != conn:
        failures.append("Ad_u B differs from the input")
    found, expected = phi_prime_rank(borel)
    if found != expected:
        failures.append(f"linearized map has rank {found} of {expected}")
    return failures
