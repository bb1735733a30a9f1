"""
PBW straightening for modules over the affine algebra

A vector is a dict {(monomial, ground): coefficient}. The monomial is a tuple
of free generators sorted by the module's key, applied from the right to a
ground vector (the vacuum, or a basis vector of a finite-dimensional module).
Coefficients lie in the CoeffRing and sit on the right of the tensor product,
so they commute with the left action.

Generators of the affine algebra are pairs (basis index, n) for x_n = x t^n
with bracket

    [x_n, y_m] = [x, y]_{n+m} + m delta_{n,-m} (x, y) K
"""
import logging
from itertools import combinations_with_replacement

from src.utils.errors import InvarianceError, TruncationError
from src.utils.linalg import rank

logger = logging.getLogger(__name__)

BLOCK_H, BLOCK_F, BLOCK_E = 0, 1, 2
_BLOCKS = {"h": BLOCK_H, "f": BLOCK_F, "e": BLOCK_E}


# -- vector helpers ----------------------------------------------------------

def add_into(target, source, scale=None):
    """target += scale * source, dropping zeros"""
    for term, c in source.items():
        value = c if scale is None else c * scale
        total = target.get(term)
        total = value if total is None else total + value
        if total:
            target[term] = total
        else:
            target.pop(term, None)
    return target


def scale_vector(v, c):
    if not c:
        return {}
    return {term: coeff * c for term, coeff in v.items()}


def subtract(a, b):
    out = dict(a)
    for term, c in b.items():
        total = out.get(term)
        total = -c if total is None else total - c
        if total:
            out[term] = total
        else:
            out.pop(term, None)
    return out


def is_zero(v):
    return all(not c for c in v.values())


def vectors_equal(a, b):
    return is_zero(subtract(a, b))


def leading_term(v):
    """Some nonzero term, for witnesses"""
    for term, c in v.items():
        if c:
            return term, c
    return None


class ModeModule:
    """
    Generic straightening engine over a Lie algebra of modes

    Subclasses define which generators are free (key), how generators act on
    the ground vectors, and the bracket of two generators.

    Args:
        ring: CoeffRing
        sign: +1 for left modules; -1 for a right module written through x * v = -v x
    """
    name = "module"

    def __init__(self, ring, sign=1):
        self.ring = ring
        self.sign = sign
        self._apply_cache = {}
        self._bracket_cache = {}

    # -- hooks -----------------------------------------------------------------

    def key(self, g):
        """Sort key of a free generator; None when g must move to the ground"""
        raise NotImplementedError

    def raw_bracket(self, g1, g2):
        """([(generator, coeff)], scalar or None)"""
        raise NotImplementedError

    def ground_action(self, g, ground):
        """Action of a generator on a ground vector"""
        raise NotImplementedError

    def I_weight(self, g):
        raise NotImplementedError

    def weight(self, g):
        raise NotImplementedError

    def absorber(self, i):
        """Generator whose action on the vacuum is multiplication by H_i"""
        raise NotImplementedError

    def free_generators(self, D):
        """Free generators of I-weight at most D"""
        raise NotImplementedError

    # -- straightening ---------------------------------------------------------

    def vacuum(self):
        return {((), 0): self.ring.one}

    def bracket(self, g1, g2):
        cached = self._bracket_cache.get((g1, g2))
        if cached is None:
            cached = self.raw_bracket(g1, g2)
            self._bracket_cache[(g1, g2)] = cached
        return cached

    def apply_mono(self, g, mono, ground):
        """g applied to mono * ground, as a vector (cached, do not mutate)"""
        cache_key = (g, mono, ground)
        cached = self._apply_cache.get(cache_key)
        if cached is None:
            cached = self._straighten(g, mono, ground)
            self._apply_cache[cache_key] = cached
        return cached

    def _straighten(self, g, mono, ground):
        if not mono:
            return self.ground_action(g, ground)
        first = mono[0]
        kg = self.key(g)
        if kg is not None and kg <= self.key(first):
            return {((g,) + mono, ground): self.ring.one}
        rest = mono[1:]
        out = {}
        # g first rest = first (g rest) + [g, first] rest
        for (m2, g2), c in self.apply_mono(g, rest, ground).items():
            add_into(out, self.apply_mono(first, m2, g2), c)
        terms, scalar = self.bracket(g, first)
        for z, c in terms:
            add_into(out, self.apply_mono(z, rest, ground), c)
        if scalar:
            add_into(out, {(rest, ground): scalar})
        return out

    def apply(self, g, v):
        out = {}
        for (mono, ground), c in v.items():
            add_into(out, self.apply_mono(g, mono, ground), c)
        return out

    def apply_word(self, word, v):
        """Apply the product word[0] word[1] ... to v (rightmost first)"""
        for g in reversed(word):
            v = self.apply(g, v)
        return v

    def apply_linear(self, combo, v):
        out = {}
        for g, c in combo:
            add_into(out, self.apply(g, v), c)
        return out

    def monomial_vector(self, word, ground=0):
        return self.apply_word(word, {((), ground): self.ring.one})

    # -- gradings --------------------------------------------------------------

    def mono_I(self, mono):
        return sum(self.I_weight(g) for g in mono)

    def vector_I(self, v):
        return max((self.mono_I(mono) for mono, _ in v), default=0)

    def mono_weight(self, mono):
        total = [0] * self.ring.rank
        for g in mono:
            for i, w in enumerate(self.weight(g)):
                total[i] += w
        return tuple(total)

    def basis_monomials(self, D, weight=None):
        """
        Sorted free monomials of I-weight at most D

        Args:
            D: I-weight bound
            weight: Optional h-weight filter

        Returns:
            List of monomial tuples
        """
        gens = sorted(self.free_generators(D), key=self.key)
        out = []

        def extend(start, mono, total):
            if weight is None or self.mono_weight(mono) == tuple(weight):
                out.append(tuple(mono))
            for j in range(start, len(gens)):
                w = self.I_weight(gens[j])
                if total + w <= D:
                    extend(j, mono + [gens[j]], total + w)

        extend(0, [], 0)
        return out

    # -- localization and endomorphisms ----------------------------------------

    def tilde_left(self, i, v):
        """sign * absorber(i) acting from the left; on the vacuum it multiplies by H_i"""
        out = self.apply(self.absorber(i), v)
        return scale_vector(out, self.ring.from_fraction(self.sign)) if self.sign != 1 else out

    def tilde_left_root(self, a, v):
        out = {}
        for i, c in enumerate(self.ring.root_coroots[a]):
            if c:
                add_into(out, self.tilde_left(i, v), self.ring.from_fraction(c))
        return out

    def ad_root(self, a, v):
        """Nilpotent part of the left action of H_alpha"""
        return subtract(self.tilde_left_root(a, v), scale_vector(v, self.ring.root_forms[a]))

    def left_inverse(self, v, a):
        """
        Solve h_{alpha,N} y = v in the localized module

        Args:
            v: Vector
            a: Positive root index

        Returns:
            y = sum_j (-1)^j ad^j(v) / H_alpha^(j+1)
        """
        H = self.ring.root_forms[a]
        out = {}
        term = v
        power = self.ring.one / H
        limit = self.vector_I(v) + 2
        for j in range(limit + 1):
            if is_zero(term):
                return out
            add_into(out, term, power if j % 2 == 0 else -power)
            term = self.ad_root(a, term)
            power = power / H
        if not is_zero(term):
            raise TruncationError("left action of the top Cartan mode is not nilpotent")
        return out

    def apply_function(self, phi, v):
        """phi(H) acting from the left through the top Cartan modes"""
        terms, root_exponents, scalar_den = self.ring.decompose(phi)
        w = v
        for a, e in sorted(root_exponents.items()):
            for _ in range(e):
                w = self.left_inverse(w, a)
        out = {}
        for scalar, exps in terms:
            u = w
            for i, e in enumerate(exps):
                for _ in range(e):
                    u = self.tilde_left(i, u)
            add_into(out, u, scalar)
        return scale_vector(out, self.ring.one / scalar_den)

    def endomorphism_from_vacuum(self, w):
        """Module endomorphism sending the vacuum to w"""
        return Endomorphism(self, w)

    def level_generators(self, D):
        """Generators of the level subalgebra in a finite window"""
        raise NotImplementedError

    def check_invariant(self, w, D=1):
        """
        Level-subalgebra generators that fail to annihilate w

        Args:
            w: Vector
            D: Window size

        Returns:
            List of (generator, leading nonzero term)
        """
        failures = []
        for g in self.level_generators(D):
            out = self.apply(g, w)
            if not is_zero(out):
                failures.append((g, leading_term(out)))
        return failures

    def require_invariant(self, w, D=1):
        failures = self.check_invariant(w, D)
        if failures:
            raise InvarianceError(f"vector not annihilated by {failures[0][0]}")
        return w

    def clear_denominators(self, v):
        """
        Minimal product of root forms making every coefficient H-polynomial

        Args:
            v: Vector

        Returns:
            (exponents dict root -> power, multiplier ring element)
        """
        exponents = {}
        multiplier = self.ring.one
        for a, H in enumerate(self.ring.root_forms):
            while any(self.ring.root_denominator_exponents(c * multiplier).get(a, 0) for c in v.values()):
                multiplier = multiplier * H
                exponents[a] = exponents.get(a, 0) + 1
        return exponents, multiplier


class Endomorphism:
    """
    Endomorphism determined by the image w of the vacuum

    E(J vac phi) = J phi(H) w, with phi(H) acting through the top Cartan modes.
    """

    def __init__(self, module, w):
        self.module = module
        self.w = w

    def __call__(self, v):
        out = {}
        for (mono, ground), c in v.items():
            if ground != 0:
                raise TruncationError("endomorphisms are defined on cyclic vacuum modules only")
            add_into(out, self.module.apply_word(mono, self.module.apply_function(c, self.w)))
        return out


# -- affine modules ----------------------------------------------------------

class AffineModule(ModeModule):
    """
    Modes x_n of a simple Lie algebra at a fixed level

    Args:
        alg: LieAlgebraData
        ring: CoeffRing
        level: Ring element by which the central element acts
        sign: See ModeModule
    """

    def __init__(self, alg, ring, level, sign=1):
        super().__init__(ring, sign)
        self.alg = alg
        self.level = level

    def raw_bracket(self, g1, g2):
        (a, n), (b, m) = g1, g2
        terms = [((c, n + m), self.ring.from_fraction(s))
                 for c, s in enumerate(self.alg.structure[a][b]) if s]
        scalar = None
        if n + m == 0 and m != 0:
            f = self.alg.form_matrix[a][b]
            if f:
                scalar = self.ring.from_fraction(m * f) * self.level
        return terms, scalar

    def weight(self, g):
        return self.alg.weight(g[0])

    def free_key(self, g):
        idx, n = g
        return (_BLOCKS[self.alg.kind(idx)[0]], -n, idx)

    def label(self, g):
        idx, n = g
        return f"{self.alg.label(idx)}[{n}]"


class FreeEnveloping(AffineModule):
    """U_k of the affine algebra acting on itself; every mode is free"""
    name = "U"

    def key(self, g):
        return self.free_key(g)

    def ground_action(self, g, ground):
        return {((g,), ground): self.ring.one}

    def I_weight(self, g):
        return 0


class VacuumModule(AffineModule):
    """
    The vacuum module U_k / U_k g_+ and its localization

    g_+ = t^N (u_- + u) + t^(N+1) g[[t]] annihilates the vacuum. When localized,
    h_{i,N} vac = H_i vac; otherwise h_{i,N} stays a free generator sorted last.

    Args:
        alg: LieAlgebraData
        ring: CoeffRing
        N: Level-subalgebra parameter
        localized: Whether the top Cartan modes are absorbed into coefficients
        level: Defaults to the ring level k
        sign: -1 for the right module written as a left module
    """

    def __init__(self, alg, ring, N, localized=True, level=None, sign=1):
        super().__init__(alg, ring, ring.k if level is None else level, sign)
        self.N = N
        self.localized = localized
        self.name = ("Mreg" if localized else "M") + ("r" if sign < 0 else "")

    def status(self, g):
        idx, n = g
        if n < self.N:
            return "free"
        if self.alg.kind(idx)[0] == "h" and n == self.N:
            return "absorb" if self.localized else "top"
        return "kill"

    def key(self, g):
        status = self.status(g)
        if status == "free":
            return self.free_key(g)
        if status == "top":
            return (3, 0, g[0])
        return None

    def ground_action(self, g, ground):
        status = self.status(g)
        if status in ("free", "top"):
            return {((g,), ground): self.ring.one}
        if status == "kill":
            return {}
        i = self.alg.kind(g[0])[1]
        return {((), ground): self.ring.H[i] * self.sign}

    def I_weight(self, g):
        return self.N - g[1]

    def absorber(self, i):
        return (self.alg.h(i), self.N)

    def free_generators(self, D):
        return [(idx, n) for n in range(self.N - D, self.N) for idx in range(self.alg.dim)]

    def level_generators(self, D):
        D = max(D, 1)
        gens = []
        for idx in range(self.alg.dim):
            kind = self.alg.kind(idx)[0]
            start = self.N + 1 if kind == "h" else self.N
            gens.extend((idx, n) for n in range(start, self.N + D + 1))
        return gens

    def localize(self, v, target=None):
        """
        Move trailing top Cartan modes into coefficients

        Args:
            v: Vector of the non-localized module
            target: Optional localized module, for bookkeeping only

        Returns:
            Vector of the localized module
        """
        out = {}
        for (mono, ground), c in v.items():
            mono = list(mono)
            coeff = c
            while mono and self.status(mono[-1]) == "top":
                g = mono.pop()
                coeff = coeff * self.ring.H[self.alg.kind(g[0])[1]] * self.sign
            add_into(out, {(tuple(mono), ground): coeff})
        return out

    def top_monomials(self, power):
        """Monomials in the top Cartan modes of total degree at most power"""
        tops = [self.absorber(i) for i in range(self.alg.rank)]
        out = []
        for p in range(power + 1):
            out.extend(combinations_with_replacement(tops, p))
        return out

    def action_matrix_injective(self, D, power=1, rng=None):
        """
        PBW uniqueness: left multiplication by every h_{i,N} is injective

        Only meaningful on the non-localized module; checked on monomials of
        I-weight at most D times top-mode monomials of degree at most power.

        Returns:
            List of failing Cartan indices
        """
        if self.localized:
            raise TruncationError("injectivity is checked on the non-localized module")
        point = self.ring.random_point(rng)
        columns = [mono + top for mono in self.basis_monomials(D) for top in self.top_monomials(power)]
        failures = []
        for i in range(self.alg.rank):
            images = [self.apply(self.absorber(i), {(col, 0): self.ring.one}) for col in columns]
            rows = sorted({term for img in images for term in img}, key=repr)
            matrix = [[self.ring.evaluate(img.get(r, self.ring.zero), point) for img in images] for r in rows]
            if rank(matrix) < len(columns):
                failures.append(i)
        return failures


class RightVacuumModule(VacuumModule):
    """
    The right vacuum module, written as a left module through x * v = -v x

    The twisted action has level -k. Right multiplication v x is therefore
    -(x * v), and the top Cartan modes act by vac h_{i,N} = H_i vac.
    """

    def __init__(self, alg, ring, N, localized=True):
        super().__init__(alg, ring, N, localized=localized, level=-ring.k, sign=-1)

    def right_multiply(self, v, g):
        """v x for a single mode"""
        return scale_vector(self.apply(g, v), -self.ring.one)

    def right_multiply_linear(self, v, combo):
        out = {}
        for g, c in combo:
            add_into(out, self.right_multiply(v, g), c)
        return out

    def right_word(self, v, word):
        """v x_1 x_2 ... in reading order"""
        for g in word:
            v = self.right_multiply(v, g)
        return v


class InducedModule(AffineModule):
    """
    U_k ghat tensored over g[t^-1] with a finite-dimensional module V

    Modes with n < 0 kill V, n = 0 act by the given matrices, n > 0 are free.
    Free keys put g_+ modes (N = 1) left of the h_{i,1}.

    Args:
        alg: LieAlgebraData
        ring: CoeffRing
        matrices: Representation matrices, one per basis element
    """
    name = "V"

    def __init__(self, alg, ring, matrices):
        super().__init__(alg, ring, ring.k)
        alg.check_representation(matrices)
        self.matrices = matrices
        self.dimension = len(matrices[0])
        self.N = 1

    def in_level_subalgebra(self, g):
        idx, n = g
        return n >= 2 or (n == 1 and self.alg.kind(idx)[0] != "h")

    def key(self, g):
        idx, n = g
        if n <= 0:
            return None
        return (0 if self.in_level_subalgebra(g) else 1, -n, idx)

    def ground_action(self, g, ground):
        idx, n = g
        if n < 0:
            return {}
        if n > 0:
            return {((g,), ground): self.ring.one}
        out = {}
        for row in range(self.dimension):
            c = self.matrices[idx][row][ground]
            if c:
                out[((), row)] = self.ring.from_fraction(c)
        return out

    def I_weight(self, g):
        return 1 - g[1]

    def absorber(self, i):
        return (self.alg.h(i), 1)


class Coinvariants:
    """
    The coinvariants F(V) = Fun(h^r) tensor over Sym(t h) of V / g_+ V, for N = 1

    Elements are dicts {basis index of V: coefficient}, read as sum phi (x) v.

    Args:
        module: InducedModule
    """

    def __init__(self, module):
        self.module = module
        self.alg = module.alg
        self.ring = module.ring

    def lift(self, psi):
        """Represent phi (x) v by phi(h_{.,1}) v; phi must be polynomial in H"""
        out = {}
        for j, c in psi.items():
            terms, root_exponents, scalar_den = self.ring.decompose(c)
            if root_exponents:
                raise TruncationError("lift needs polynomial coefficients")
            for scalar, exps in terms:
                word = []
                for i, e in enumerate(exps):
                    word.extend([self.module.absorber(i)] * e)
                add_into(out, self.module.monomial_vector(tuple(word), j), scalar / scalar_den)
        return out

    def project(self, v):
        out = {}
        for (mono, ground), c in v.items():
            if any(self.module.in_level_subalgebra(g) for g in mono):
                continue
            coeff = c
            for g in mono:
                coeff = coeff * self.ring.H[self.alg.kind(g[0])[1]]
            add_into(out, {ground: coeff})
        return out

    def basis(self):
        return [{j: self.ring.one} for j in range(self.module.dimension)]

    def casimir_term(self, i, psi):
        """sum_alpha alpha(h_i) / H_alpha [f_{alpha,0} e_{alpha,0} psi]"""
        lifted = self.lift(psi)
        out = {}
        for a in range(self.alg.n_roots):
            value = self.alg.root_value(a, i)
            if not value:
                continue
            fe = self.module.apply_word(((self.alg.f(a), 0), (self.alg.e(a), 0)), lifted)
            add_into(out, self.project(fe), self.ring.from_fraction(value) / self.ring.root_forms[a])
        return out

    def bhat_minus(self, i, psi):
        """Action of the generator bhat_{i,-1}"""
        lifted = self.lift(psi)
        out = self.project(self.module.apply((self.alg.h(i), -1), lifted))
        return add_into(out, self.casimir_term(i, psi))

    def bhat_zero(self, i, psi):
        """Action of h_{i,0}; on phi (x) v it is phi (x) h_i v"""
        return self.project(self.module.apply((self.alg.h(i), 0), self.lift(psi)))

    def bhat_one(self, i, psi):
        """Multiplication by H_i, the function h_{i,1}"""
        return {j: c * self.ring.H[i] for j, c in psi.items()}

    def operator_matrix(self, op):
        """Matrix of a Fun-linear operator on the basis 1 (x) v_j"""
        images = [op(b) for b in self.basis()]
        d = self.module.dimension
        return [[images[col].get(row, self.ring.zero) for col in range(d)] for row in range(d)]


def affine_bracket(alg, ring, x, y, level=None):
    """
    Bracket of two modes in U_k ghat

    Args:
        x, y: Generators (basis index, n)

    Returns:
        Vector in the free enveloping algebra (the scalar part on the empty monomial)
    """
    module = FreeEnveloping(alg, ring, ring.k if level is None else level)
    terms, scalar = module.raw_bracket(x, y)
    out = {}
    for z, c in terms:
        add_into(out, {((z,), 0): c})
    if scalar:
        add_into(out, {((), 0): scalar})
    return out


def pbw_normal_form(word, module):
    """
    Normal form of a product of modes applied to the generating vector

    Args:
        word: Sequence of generators (basis index, n), leftmost first
        module: FreeEnveloping, VacuumModule or a right module (sign -1)

    Returns:
        Vector in sorted PBW monomials
    """
    return module.monomial_vector(tuple(word))


def localize(module, v):
    """Image of a vector of the non-localized vacuum module in its localization"""
    return module.localize(v)


def coinvariants(alg, ring, matrices):
    """Coinvariants of the module induced from the given representation (N = 1)"""
    return Coinvariants(InducedModule(alg, ring, matrices))
