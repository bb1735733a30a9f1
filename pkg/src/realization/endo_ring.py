"""
The endomorphism ring of the localized Fock module

An element is stored through the image of the vacuum, which determines it:
E(J vac' phi) = J phi(b_N) w. The product is composition, (x y)(v) = x(y(v)).
Generators are the Fock modes themselves, read as the endomorphisms with
vacuum image g vac':

    a_{alpha,n}  0 < n < N,   a*_{alpha,n}  -N < n < 0,   b_{i,n}  -N <= n <= N

In this order [a_{alpha,n}, a*_{alpha,-n}] = -1 and
[b_{i,n}, b_{j,-n}] = n (k - k_c)(h_i, h_j).
"""
import logging
import random

import sympy

from src.modules.affine_pbw import (Endomorphism, RightVacuumModule, add_into, is_zero, leading_term,
                                    scale_vector, subtract, vectors_equal)
from src.modules.fock import A, ASTAR, B
from src.realization.diffops import DiffOpSpace, identify_symbol
from src.utils.errors import InvarianceError
from src.utils.linalg import rank

logger = logging.getLogger(__name__)


class LambdaElement:
    """
    Element of the endomorphism ring, kept as its vacuum image

    Args:
        module: Localized FockModule
        state: Image of the vacuum
    """

    def __init__(self, module, state):
        self.module = module
        self.state = {term: c for term, c in state.items() if c}

    @classmethod
    def generator(cls, module, symbol):
        """A generator symbol (kind, index, n) or ("fun", phi)"""
        if symbol[0] == "fun":
            return cls(module, scale_vector(module.vacuum(), symbol[1]))
        return cls(module, module.apply(symbol, module.vacuum()))

    @classmethod
    def scalar(cls, module, c):
        return cls(module, scale_vector(module.vacuum(), c))

    def endomorphism(self):
        return Endomorphism(self.module, self.state)

    def __call__(self, v):
        return self.endomorphism()(v)

    def __mul__(self, other):
        return LambdaElement(self.module, self(other.state))

    def __add__(self, other):
        return LambdaElement(self.module, add_into(dict(self.state), other.state))

    def __sub__(self, other):
        return LambdaElement(self.module, subtract(self.state, other.state))

    def scaled(self, c):
        return LambdaElement(self.module, scale_vector(self.state, c))

    def bracket(self, other):
        return self * other - other * self

    def is_zero(self):
        return is_zero(self.state)

    def __eq__(self, other):
        return vectors_equal(self.state, other.state)

    def scalar_value(self):
        """The coefficient when the element is a multiple of the identity, else None"""
        if set(self.state) - {((), 0)}:
            return None
        return self.state.get(((), 0), self.module.ring.zero)

    def words(self):
        """
        Decomposition into composition words, outermost factor first

        The vacuum image c g_1 ... g_r vac' is the composite
        fun(c) o g_r o ... o g_1.

        Returns:
            List of symbol tuples
        """
        return [(("fun", c),) + tuple(reversed(mono)) for (mono, _), c in sorted(self.state.items(), key=repr)]

    def __repr__(self):
        parts = []
        for (mono, _), c in self.state.items():
            label = " ".join(self.module.label(g) for g in mono)
            parts.append(f"({self.module.ring.to_string(c)}) {label} vac'".replace("  ", " "))
        return " + ".join(parts) or "0"


def lambda_generators(alg, N):
    """
    The generator symbols of the ring

    Returns:
        List of Fock generators; 2|positive roots|(N - 1) oscillators and r(2N + 1) Heisenberg modes
    """
    gens = []
    for a in range(alg.n_roots):
        gens.extend((A, a, n) for n in range(1, N))
        gens.extend((ASTAR, a, n) for n in range(-N + 1, 0))
    for i in range(alg.rank):
        gens.extend((B, i, n) for n in range(-N, N + 1))
    return gens


def lambda_bracket(x, y):
    """Commutator in the ring"""
    return x.bracket(y)


def expected_bracket(module, g1, g2):
    """Scalar value of [g1, g2] for two generators"""
    ring, alg = module.ring, module.alg
    (k1, i1, n1), (k2, i2, n2) = g1, g2
    if n1 + n2 != 0:
        return ring.zero
    if {k1, k2} == {A, ASTAR} and i1 == i2:
        return -ring.one if k1 == A else ring.one
    if k1 == B and k2 == B and n1:
        return ring.from_fraction(n1 * alg.gram[i1][i2]) * module.shift
    return ring.zero


def lambda_as_endomorphism(x, D=1):
    """
    The endomorphism determined by x, after checking its vacuum image is invariant

    Raises:
        InvarianceError: If a generator of the annihilator of vac' moves the vacuum image
    """
    failures = x.module.check_invariant(x.state, D)
    if failures:
        g, _ = failures[0]
        raise InvarianceError(f"{x.module.label(g)} does not annihilate the vacuum image of {x}")
    return x.endomorphism()


def check_lambda_relations(module):
    """
    Every generator pair brackets to the expected scalar

    Returns:
        List of failure descriptions
    """
    gens = lambda_generators(module.alg, module.N)
    elements = {g: LambdaElement.generator(module, g) for g in gens}
    failures = []
    for p, g1 in enumerate(gens):
        for g2 in gens[p + 1:]:
            bracket = lambda_bracket(elements[g1], elements[g2])
            value = bracket.scalar_value()
            expected = expected_bracket(module, g1, g2)
            if value is None or value != expected:
                failures.append(f"[{module.label(g1)}, {module.label(g2)}] = "
                                f"{bracket}, expected {module.ring.to_string(expected)}")
    logger.info("ring relations checked on %d generators", len(gens))
    return failures


def check_lambda_invariance(module, D=1):
    """Every generator's vacuum image is killed by the annihilator of vac'"""
    failures = []
    for g in lambda_generators(module.alg, module.N):
        for h, _ in module.check_invariant(LambdaElement.generator(module, g).state, D):
            failures.append(f"{module.label(h)} moves the image of {module.label(g)}")
    return failures


def check_lambda_commutes_with_realization(real, elements, D, modes=None):
    """
    Ring elements commute with the realization images on basis states

    Args:
        real: WakimotoRealization on the localized module
        elements: LambdaElements
        D: State I-weight bound
        modes: Affine generators (basis index, n), defaults to the simple and Cartan ones with -1 <= n <= N

    Returns:
        List of failure descriptions
    """
    alg, module = real.alg, real.module
    if modes is None:
        idxs = [alg.e(alg.simple_index(i)) for i in range(alg.rank)] + \
            [alg.f(alg.simple_index(i)) for i in range(alg.rank)] + [alg.h(i) for i in range(alg.rank)]
        modes = [(idx, n) for idx in idxs for n in range(-1, real.N + 1)]
    states = [{(mono, 0): module.ring.one} for mono in module.basis_monomials(D)]
    failures = []
    for x in elements:
        endo = x.endomorphism()
        for g in modes:
            for v in states:
                if not vectors_equal(endo(real.apply(g, v)), real.apply(g, endo(v))):
                    failures.append(f"{x} does not commute with {alg.label(g[0])}[{g[1]}]")
                    break
            else:
                continue
            break
    return failures


def lambda_injectivity(module, D, rng=None):
    """
    Products of generators within the window have independent vacuum images

    The ordered products are indexed by the free monomials of I-weight at most
    D; their images form a matrix whose rank is certified at a random point,
    symbolically when the point is degenerate.

    Returns:
        (number of monomials, rank)
    """
    rng = rng or random.Random(0)
    ring = module.ring
    allowed = set(lambda_generators(module.alg, module.N))
    images = []
    for mono in module.basis_monomials(D):
        if not set(mono) <= allowed:
            continue
        x = LambdaElement.scalar(module, ring.one)
        for g in mono:
            x = LambdaElement.generator(module, g) * x
        images.append(x.state)
    rows = sorted({term for img in images for term in img}, key=repr)
    point = ring.random_point(rng)
    matrix = [[ring.evaluate(img.get(r, ring.zero), point) for img in images] for r in rows]
    found = rank(matrix)
    if found < len(images):
        found = rank([[img.get(r, ring.zero) for img in images] for r in rows])
    logger.debug("%d ring monomials, rank %d", len(images), found)
    return len(images), found


# -- differential operators --------------------------------------------------

def identify_diffop(x, space=None):
    """
    The differential operator attached to a ring element

    Args:
        x: LambdaElement
        space: DiffOpSpace, built from the module when omitted

    Returns:
        DiffOpElement
    """
    module = x.module
    space = space or DiffOpSpace(module.alg, module.ring, module.N)
    out = space.zero()
    for word in x.words():
        term = identify_symbol(space, word[0])
        for symbol in word[1:]:
            term = term * identify_symbol(space, symbol)
        out = out + term
    return out


def check_diffop_homomorphism(module, samples=6, rng=None):
    """
    identify(x y) = identify(x) identify(y) on generator pairs and random products

    Returns:
        List of failure descriptions
    """
    rng = rng or random.Random(0)
    ring = module.ring
    space = DiffOpSpace(module.alg, ring, module.N)
    gens = lambda_generators(module.alg, module.N)
    elements = [LambdaElement.generator(module, g) for g in gens]
    elements.append(LambdaElement.generator(module, ("fun", ring.one / ring.root_forms[0])))
    failures = []
    for p, x in enumerate(elements):
        for y in elements[p + 1:]:
            lhs = identify_diffop(x.bracket(y), space)
            rhs = identify_diffop(x, space).bracket(identify_diffop(y, space))
            if not lhs == rhs:
                failures.append(f"bracket of {x} and {y} not preserved")
    for _ in range(samples):
        x = rng.choice(elements) * rng.choice(elements)
        y = rng.choice(elements)
        if not identify_diffop(x * y, space) == identify_diffop(x, space) * identify_diffop(y, space):
            failures.append(f"product of {x} and {y} not preserved")
    return failures


def generator_counts(alg, N):
    """
    Sizes of the generator set

    Returns:
        dict with the Heisenberg count r(2N + 1), the oscillator count and the total
    """
    heisenberg = alg.rank * (2 * N + 1)
    oscillators = 2 * alg.n_roots * (N - 1)
    return {"heisenberg": heisenberg, "oscillators": oscillators, "total": heisenberg + oscillators}


# -- right modules at N = 1 --------------------------------------------------

def _coroot_combo(alg, a, n):
    return [((alg.h(j), n), c) for j, c in enumerate(alg.coroot(a)) if c]


def regularized_endomorphism(alg, ring, i, D=1):
    """
    The regularized vacuum image for the Cartan index i, N = 1

    vac h_{i,-1} prod_beta h_{beta,1}
        + sum_alpha alpha(h_i) vac prod_{beta != alpha} h_{beta,1} f_{alpha,0} e_{alpha,0}

    computed in the non-localized right vacuum module.

    Returns:
        (RightVacuumModule, vector)

    Raises:
        InvarianceError: If the vector is not annihilated by the level subalgebra
    """
    module = RightVacuumModule(alg, ring, 1, localized=False)
    vac = module.vacuum()
    out = module.right_multiply(vac, (alg.h(i), -1))
    for beta in range(alg.n_roots):
        out = module.right_multiply_linear(out, _coroot_combo(alg, beta, 1))
    for a in range(alg.n_roots):
        value = alg.root_value(a, i)
        if not value:
            continue
        term = vac
        for beta in range(alg.n_roots):
            if beta != a:
                term = module.right_multiply_linear(term, _coroot_combo(alg, beta, 1))
        term = module.right_word(term, [(alg.f(a), 0), (alg.e(a), 0)])
        add_into(out, term, ring.from_fraction(value))
    failures = module.check_invariant(out, D)
    if failures:
        raise InvarianceError(f"regularized image for i = {i + 1} not killed by {module.label(failures[0][0])}")
    return module, out


def right_casimir_generators(alg, ring):
    """
    Vacuum images of the right endomorphisms bhat_{i,1}, bhat_{i,0}, bhat_{i,-1}

        bhat_{i,1}:  vac h_{i,1} = H_i vac
        bhat_{i,0}:  vac h_{i,0}
        bhat_{i,-1}: vac h_{i,-1} + sum_alpha alpha(h_i) / H_alpha vac f_{alpha,0} e_{alpha,0}

    Returns:
        (localized RightVacuumModule, dict (i, n) -> vector)
    """
    module = RightVacuumModule(alg, ring, 1)
    vac = module.vacuum()
    images = {}
    for i in range(alg.rank):
        images[(i, 1)] = module.right_multiply(vac, (alg.h(i), 1))
        images[(i, 0)] = module.right_multiply(vac, (alg.h(i), 0))
        w = module.right_multiply(vac, (alg.h(i), -1))
        for a in range(alg.n_roots):
            value = alg.root_value(a, i)
            if value:
                fe = module.right_word(vac, [(alg.f(a), 0), (alg.e(a), 0)])
                add_into(w, fe, ring.from_fraction(value) / ring.root_forms[a])
        images[(i, -1)] = w
    return module, images


def diagrammatic_bracket(module, w1, w2):
    """[A, B] for the product (A B)(v) = B(A(v)), on the vacuum"""
    return subtract(Endomorphism(module, w2)(w1), Endomorphism(module, w1)(w2))


def check_right_casimir(alg, ring, D=1):
    """
    Relations of the right endomorphisms

    [bhat_{i,-1}, bhat_{j,1}] = (-k - k_c)(h_i, h_j), every other bracket zero,
    every vacuum image invariant, and h_i identified with 2 alpha_i / (alpha_i, alpha_i).

    Returns:
        List of failure descriptions
    """
    module, images = right_casimir_generators(alg, ring)
    vac = module.vacuum()
    failures = []
    for key, w in sorted(images.items()):
        if module.check_invariant(w, D):
            failures.append(f"bhat_{key[0] + 1},{key[1]} image not invariant")
    keys = sorted(images)
    for p, x in enumerate(keys):
        for y in keys[p + 1:]:
            expected = ring.zero
            if x[1] == -1 and y[1] == 1:
                expected = -(ring.k + ring.critical) * ring.from_fraction(alg.gram[x[0]][y[0]])
            elif x[1] == 1 and y[1] == -1:
                expected = (ring.k + ring.critical) * ring.from_fraction(alg.gram[x[0]][y[0]])
            got = diagrammatic_bracket(module, images[x], images[y])
            if not vectors_equal(got, scale_vector(vac, expected)):
                failures.append(f"[bhat_{x[0] + 1},{x[1]}, bhat_{y[0] + 1},{y[1]}] = {leading_term(got)}")
    for i in range(alg.rank):
        s = alg.simple_index(i)
        length = alg.root_length(s)
        for j in range(alg.rank):
            if alg.gram[i][j] != 2 * alg.root_value(s, j) / length:
                failures.append(f"(h_{i + 1}, h_{j + 1}) != 2 alpha_{i + 1}(h_{j + 1}) / (alpha_{i + 1}, alpha_{i + 1})")
    return failures


def check_regularized(alg, ring, D=1):
    """
    The regularized images are invariant and localize to

        prod_beta H_beta bhat_{i,-1}(vac) + k sum_beta (h_i, h_beta) prod_{beta' != beta} H_beta' vac

    Returns:
        List of failure descriptions
    """
    failures = []
    target, images = right_casimir_generators(alg, ring)
    product = ring.one
    for H in ring.root_forms:
        product = product * H
    for i in range(alg.rank):
        try:
            module, w = regularized_endomorphism(alg, ring, i, D)
        except InvarianceError as e:
            failures.append(str(e))
            continue
        rhs = scale_vector(images[(i, -1)], product)
        for beta in range(alg.n_roots):
            pairing = sum((c * alg.gram[i][j] for j, c in enumerate(alg.coroot(beta))), 0)
            if not pairing:
                continue
            rest = product / ring.root_forms[beta]
            add_into(rhs, target.vacuum(), ring.k * ring.from_fraction(pairing) * rest)
        if not vectors_equal(module.localize(w), rhs):
            failures.append(f"regularized image for i = {i + 1} does not localize to the scaled bhat_{i + 1},-1")
    return failures


def lambda_table(module):
    """
    Generator symbol and vacuum image of every generator, for export

    Returns:
        List of (label, LambdaElement)
    """
    return [(module.label(g), LambdaElement.generator(module, g)) for g in lambda_generators(module.alg, module.N)]


def check_identification_scale(module):
    """identify(b_{i,-n}) brackets with identify(b_{j,n}) to n (k - k_c)(h_i, h_j)"""
    alg, ring = module.alg, module.ring
    space = DiffOpSpace(alg, ring, module.N)
    failures = []
    for n in range(1, module.N + 1):
        for i in range(alg.rank):
            for j in range(alg.rank):
                lhs = identify_symbol(space, (B, j, n)).bracket(identify_symbol(space, (B, i, -n)))
                expected = ring.to_expr(ring.from_fraction(n * alg.gram[i][j]) * module.shift)
                value = lhs.constant_value()
                if value is None or sympy.cancel(value - expected) != 0:
                    failures.append(f"[y_{j + 1},{n}, identify(b_{i + 1},{-n})] = {lhs}")
    return failures
