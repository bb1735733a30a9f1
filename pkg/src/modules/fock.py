"""
Free-field Fock modules

Generators are triples (kind, index, n):

    ("a", alpha, n)   a_{alpha,n},  annihilates vac' for n >= N
    ("s", alpha, n)   a*_{alpha,n}, annihilates vac' for n >= 0
    ("b", i, n)       b_{i,n},      annihilates vac' for n > N

with [a_{alpha,n}, a*_{beta,m}] = delta delta_{n+m,0} and
[b_{i,n}, b_{j,m}] = -n (k - k_c)(h_i, h_j) delta_{n+m,0}.
The top modes b_{i,N} act on the localized vacuum by H_i.

Generating fields follow

    a(z) = sum a_n z^(-n-1),  a*(z) = sum a*_n z^(-n),  b(z) = sum b_n z^(-n-1)
"""
import logging
from dataclasses import dataclass, field

from src.modules.affine_pbw import ModeModule, add_into
from src.utils.errors import NonConformalFieldError, TruncationError

logger = logging.getLogger(__name__)

A, ASTAR, B = "a", "s", "b"
CURRENT_KINDS = ("a", "dastar", "b")
FACTOR_KINDS = ("a", "astar", "dastar", "b")
MAX_SPLITTINGS = 50000

_FREE_BLOCKS = {B: 0, ASTAR: 1, A: 2}


class FockModule(ModeModule):
    """
    M_N tensor pi_N at the shifted level, optionally localized at the b_{i,N}

    Args:
        alg: LieAlgebraData
        ring: CoeffRing
        N: Level-subalgebra parameter
        localized: Whether b_{i,N} is absorbed into the coefficients
        shift: Heisenberg level, defaults to k - k_c
    """

    def __init__(self, alg, ring, N, localized=True, shift=None):
        super().__init__(ring)
        self.alg = alg
        self.N = N
        self.localized = localized
        self.shift = ring.shifted_level if shift is None else shift
        self.name = "Freg" if localized else "F"
        self._mode_cache = {}

    def status(self, g):
        kind, _, n = g
        if kind == A:
            return "free" if n < self.N else "kill"
        if kind == ASTAR:
            return "free" if n < 0 else "kill"
        if n < self.N:
            return "free"
        if n == self.N:
            return "absorb" if self.localized else "top"
        return "kill"

    def key(self, g):
        status = self.status(g)
        if status == "free":
            kind, idx, n = g
            return (_FREE_BLOCKS[kind], -n, idx)
        if status == "top":
            return (3, 0, g[1])
        return None

    def raw_bracket(self, g1, g2):
        return [], osc_bracket(self, g1, g2) or None

    def ground_action(self, g, ground):
        status = self.status(g)
        if status in ("free", "top"):
            return {((g,), ground): self.ring.one}
        if status == "kill":
            return {}
        return {((), ground): self.ring.H[g[1]]}

    def I_weight(self, g):
        kind, _, n = g
        if kind == ASTAR:
            return -n
        return self.N - n

    def weight(self, g):
        kind, idx, _ = g
        if kind == B:
            return tuple(0 for _ in range(self.alg.rank))
        w = self.alg.root_weight(idx)
        return w if kind == A else tuple(-v for v in w)

    def absorber(self, i):
        return (B, i, self.N)

    def free_generators(self, D):
        gens = []
        for n in range(self.N - D, self.N):
            gens.extend((B, i, n) for i in range(self.alg.rank))
            gens.extend((A, a, n) for a in range(self.alg.n_roots))
        for n in range(-D, 0):
            gens.extend((ASTAR, a, n) for a in range(self.alg.n_roots))
        return gens

    def level_generators(self, D):
        """Generators of the annihilator (A tensor U_1 h)_+ of vac' in a window"""
        D = max(D, 1)
        gens = []
        for a in range(self.alg.n_roots):
            gens.extend((A, a, n) for n in range(self.N, self.N + D + 1))
            gens.extend((ASTAR, a, n) for n in range(0, D + 1))
        for i in range(self.alg.rank):
            gens.extend((B, i, n) for n in range(self.N + 1, self.N + D + 1))
        return gens

    def label(self, g):
        kind, idx, n = g
        if kind == B:
            return f"b{idx + 1}[{n}]"
        name = "a" if kind == A else "a*"
        return f"{name}{self.alg.positive_roots[idx].label}[{n}]"

    # -- fields ----------------------------------------------------------------

    def _upper_bound(self, kind, I):
        if kind in ("astar", "dastar"):
            return max(0, I - self.N)
        if kind == "a":
            return max(self.N - 1, I)
        return max(self.N, I - self.N)

    def splittings(self, term, n, I):
        """
        Index tuples of the factors of term summing to n that can act nontrivially

        Args:
            term: FieldTerm
            n: Mode index
            I: I-weight of the state acted on

        Returns:
            List of index tuples, one entry per factor
        """
        bounds = [self._upper_bound(kind, I) for kind, _ in term.factors]
        out = []

        def extend(k, remaining, chosen):
            if k == len(bounds) - 1:
                if remaining <= bounds[k]:
                    out.append(tuple(chosen + [remaining]))
                return
            tail = sum(bounds[k + 1:])
            for j in range(remaining - tail, bounds[k] + 1):
                extend(k + 1, remaining - j, chosen + [j])
                if len(out) > MAX_SPLITTINGS:
                    raise TruncationError(f"mode {n} of {term} has too many splittings")

        extend(0, n, [])
        return out

    def term_mode_on_monomial(self, term, n, mono, ground=0):
        """Normally ordered mode n of one field term applied to a basis monomial"""
        cache_key = (term, n, mono, ground)
        cached = self._mode_cache.get(cache_key)
        if cached is not None:
            return cached
        start = {(mono, ground): self.ring.one}
        out = {}
        for indices in self.splittings(term, n, self.mono_I(mono)):
            scale = term.coeff
            left, right = [], []
            for (kind, idx), j in zip(term.factors, indices):
                if kind == "dastar":
                    if j == 0:
                        scale = None
                        break
                    scale = scale * (-j)
                if kind in ("astar", "dastar"):
                    (right if j > 0 else left).append((ASTAR, idx, j))
                elif kind == "a":
                    (right if j >= 0 else left).append((A, idx, j))
                else:
                    right.append((B, idx, j))
            if scale is None:
                continue
            add_into(out, self.apply_word(tuple(left + right), start), scale)
        self._mode_cache[cache_key] = out
        return out

    def mode_apply(self, f, n, s):
        """Mode n of a field expression applied to a state"""
        out = {}
        for (mono, ground), c in s.items():
            for term in f.terms:
                add_into(out, self.term_mode_on_monomial(term, n, mono, ground), c)
        return out

    def localize(self, s):
        """Move trailing top modes b_{i,N} into coefficients"""
        out = {}
        for (mono, ground), c in s.items():
            mono = list(mono)
            coeff = c
            while mono and self.status(mono[-1]) == "top":
                coeff = coeff * self.ring.H[mono.pop()[1]]
            add_into(out, {(tuple(mono), ground): coeff})
        return out


@dataclass(frozen=True)
class FieldTerm:
    """
    coeff * product of field factors with exactly one current

    Args:
        coeff: Ring element
        factors: Tuple of (kind, index), kind in a, astar, dastar, b
    """
    coeff: object
    factors: tuple

    def __post_init__(self):
        for kind, _ in self.factors:
            if kind not in FACTOR_KINDS:
                raise NonConformalFieldError(f"unknown field factor {kind}")
        currents = sum(1 for kind, _ in self.factors if kind in CURRENT_KINDS)
        if currents != 1:
            raise NonConformalFieldError(f"field term needs exactly one current factor, found {currents}")

    @property
    def current(self):
        return next(f for f in self.factors if f[0] in CURRENT_KINDS)

    def astar_factors(self):
        return [f for f in self.factors if f[0] == "astar"]

    def __repr__(self):
        names = {"a": "a", "astar": "a*", "dastar": "da*", "b": "b"}
        return f"{self.coeff.as_expr()}*:" + " ".join(f"{names[k]}{i}" for k, i in self.factors) + ":"


@dataclass(frozen=True)
class FieldExpr:
    """Formal sum of normally ordered conformal field terms"""
    terms: tuple = field(default_factory=tuple)

    @classmethod
    def single(cls, coeff, *factors):
        if not coeff:
            return cls()
        return cls((FieldTerm(coeff, tuple(factors)),))

    def __add__(self, other):
        return FieldExpr(self.terms + other.terms)

    def scaled(self, c):
        if not c:
            return FieldExpr()
        return FieldExpr(tuple(FieldTerm(t.coeff * c, t.factors) for t in self.terms))

    def replace_coefficient(self, predicate, coeff):
        """Copy with the coefficient of every term matching predicate replaced"""
        return FieldExpr(tuple(FieldTerm(coeff, t.factors) if predicate(t) else t for t in self.terms))

    def weight(self, alg):
        """h-weight, read from the first term"""
        total = [0] * alg.rank
        if not self.terms:
            return tuple(total)
        for kind, idx in self.terms[0].factors:
            if kind == "b":
                continue
            sign = 1 if kind == "a" else -1
            for i, v in enumerate(alg.root_weight(idx)):
                total[i] += sign * v
        return tuple(total)

    def __repr__(self):
        return " + ".join(repr(t) for t in self.terms) or "0"


def osc_bracket(module, g1, g2):
    """
    Scalar bracket of two free-field generators

    Args:
        module: FockModule supplying the algebra and the Heisenberg level
        g1, g2: Generators (kind, index, n)

    Returns:
        Ring element
    """
    ring = module.ring
    (k1, i1, n1), (k2, i2, n2) = g1, g2
    if n1 + n2 != 0:
        return ring.zero
    if k1 == A and k2 == ASTAR and i1 == i2:
        return ring.one
    if k1 == ASTAR and k2 == A and i1 == i2:
        return -ring.one
    if k1 == B and k2 == B and n1 != 0:
        gram = module.alg.gram[i1][i2]
        if gram:
            return ring.from_fraction(-n1 * gram) * module.shift
    return ring.zero


def normal_order(word):
    """
    Normal ordering of a raw product of free-field generators

    Moves every a_{alpha,n} with n >= 0 and every a*_{alpha,m} with m > 0 to
    the right, keeping the relative order inside both groups.

    Args:
        word: Sequence of generators, leftmost first

    Returns:
        Reordered tuple
    """
    def moves_right(g):
        kind, _, n = g
        return (kind == A and n >= 0) or (kind == ASTAR and n > 0)

    left = [g for g in word if not moves_right(g)]
    right = [g for g in word if moves_right(g)]
    return tuple(left + right)


def mode_apply(module, f, n, s):
    """Mode n of the field f applied to the state s"""
    return module.mode_apply(f, n, s)


def localize_fock(module, s):
    """Image of a state of the non-localized Fock module in the localization"""
    return module.localize(s)
