import pytest
import sympy

from src.modules.affine_pbw import vectors_equal
from src.modules.fock import A, ASTAR, B
from src.realization.diffops import DiffOpSpace, identify_symbol
from src.realization.endo_ring import (LambdaElement, check_diffop_homomorphism, check_identification_scale,
                                       check_lambda_commutes_with_realization, check_lambda_invariance,
                                       check_lambda_relations, check_regularized, check_right_casimir, expected_bracket,
                                       generator_counts, identify_diffop, lambda_as_endomorphism, lambda_bracket,
                                       lambda_generators, lambda_injectivity, lambda_table)
from src.utils.errors import InvarianceError


@pytest.mark.parametrize("cartan_type,N,expected", [
    ("A1", 1, {"heisenberg": 3, "oscillators": 0, "total": 3}),
    ("A1", 2, {"heisenberg": 5, "oscillators": 2, "total": 7}),
    ("A2", 1, {"heisenberg": 6, "oscillators": 0, "total": 6}),
    ("A2", 2, {"heisenberg": 10, "oscillators": 6, "total": 16}),
])
def test_generator_counts(algebras, cartan_type, N, expected):
    alg = algebras[cartan_type]
    assert generator_counts(alg, N) == expected
    assert len(lambda_generators(alg, N)) == expected["total"]


def test_relations_a1(a1_real, a1_real_n2):
    """Heisenberg and oscillator generators bracket to scalars"""
    assert check_lambda_relations(a1_real.module) == []
    assert check_lambda_relations(a1_real_n2.module) == []


def test_relations_a2(a2_real):
    assert check_lambda_relations(a2_real.module) == []


def test_generators_are_invariant(a1_real_n2):
    assert check_lambda_invariance(a1_real_n2.module) == []


def test_top_mode_is_a_function(a1_real):
    """b_{1,1} at N = 1 is multiplication by H_1"""
    x = LambdaElement.generator(a1_real.module, (B, 0, 1))
    assert x.scalar_value() == a1_real.ring.H[0]
    space = DiffOpSpace(a1_real.alg, a1_real.ring, 1)
    assert identify_diffop(x, space) == space.function(sympy.Symbol("H1"))


def test_non_invariant_image_rejected(a1_real):
    """a*_{-1} vac' is moved by a_1"""
    x = LambdaElement(a1_real.module, a1_real.module.monomial_vector(((ASTAR, 0, -1),)))
    with pytest.raises(InvarianceError):
        lambda_as_endomorphism(x)


def test_product_is_composition(a1_real):
    """(b_0 b_-1)(vac') = b_0 b_-1 vac'"""
    module = a1_real.module
    b0 = LambdaElement.generator(module, (B, 0, 0))
    bm = LambdaElement.generator(module, (B, 0, -1))
    assert vectors_equal((b0 * bm).state, module.apply((B, 0, 0), module.apply((B, 0, -1), module.vacuum())))


def test_commutes_with_realization(a1_real):
    elements = [x for _, x in lambda_table(a1_real.module)]
    assert check_lambda_commutes_with_realization(a1_real, elements, 1) == []


def test_injectivity(a1_real, a1_real_n2, rng):
    count, found = lambda_injectivity(a1_real.module, 2, rng)
    assert count == found
    count, found = lambda_injectivity(a1_real_n2.module, 1, rng)
    assert count == found


def test_diffop_homomorphism(a1_real, a1_real_n2, rng):
    assert check_diffop_homomorphism(a1_real.module, rng=rng) == []
    assert check_diffop_homomorphism(a1_real_n2.module, samples=3, rng=rng) == []


def test_identification_scale(a1_real_n2, a2_real):
    assert check_identification_scale(a1_real_n2.module) == []
    assert check_identification_scale(a2_real.module) == []


def test_lowering_mode_is_a_derivative(a1_real):
    """b_{1,-1} maps to a multiple of d/dH_1"""
    space = DiffOpSpace(a1_real.alg, a1_real.ring, 1)
    op = identify_symbol(space, (B, 0, -1))
    assert op.constant_value() is None
    assert not op.bracket(space.function(sympy.Symbol("H1"))).is_zero()


def test_right_casimir(a1, a1_ring, a2, a2_ring):
    assert check_right_casimir(a1, a1_ring) == []
    assert check_right_casimir(a2, a2_ring) == []


def test_regularized(a1, a1_ring):
    assert check_regularized(a1, a1_ring) == []


@pytest.mark.slow
def test_regularized_a2(a2, a2_ring):
    assert check_regularized(a2, a2_ring) == []


def test_oscillator_bracket(a1_real_n2):
    """a_{1,1} and a*_{1,-1} bracket to a nonzero scalar, a_{1,1} with b modes to zero"""
    module = a1_real_n2.module
    a = LambdaElement.generator(module, (A, 0, 1))
    a_star = LambdaElement.generator(module, (ASTAR, 0, -1))
    value = lambda_bracket(a, a_star).scalar_value()
    assert value == expected_bracket(module, (A, 0, 1), (ASTAR, 0, -1)) == -module.ring.one
    assert lambda_bracket(a, LambdaElement.generator(module, (B, 0, 1))).is_zero()
