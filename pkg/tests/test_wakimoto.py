from fractions import Fraction

import pytest

from src.algebra.bigcell import compute_realization, extract_PQ
from src.modules.fock import A, ASTAR, B
from src.realization.wakimoto import (build_realization, build_wp, check_constants, check_constants_n_independent,
                                      check_hin_bin, check_n1_proposition, check_normalization_independence,
                                      check_vacuum_annihilation, check_wp_intertwines, check_wp_isomorphism,
                                      derive_nonsimple_images, f_field_shapes, forbidden_vacuum_terms,
                                      level_plus_generators, mutated, verify_homomorphism)
from src.utils.errors import ConventionError


def test_homomorphism_a1(a1_real):
    """Every bracket holds on the D = 1 window"""
    assert verify_homomorphism(a1_real, 1) == []


def test_homomorphism_a1_n2(a1_real_n2):
    assert verify_homomorphism(a1_real_n2, 1) == []


@pytest.mark.slow
def test_homomorphism_a1_wide_window(a1_real):
    assert verify_homomorphism(a1_real, 3) == []


def test_homomorphism_a2_chevalley(a2, a2_real):
    """Brackets among the simple root vectors and the Cartan part on the D = 1 window"""
    gens = [a2.e(a2.simple_index(i)) for i in range(2)] + [a2.f(a2.simple_index(i)) for i in range(2)] + \
        [a2.h(i) for i in range(2)]
    assert verify_homomorphism(a2_real, 1, gens) == []


@pytest.mark.slow
def test_homomorphism_a2(a2_real):
    assert verify_homomorphism(a2_real, 1) == []


def test_mutation_is_detected(a1_real):
    """Shifting c_1 by one breaks [e_n, f_m]"""
    failures = verify_homomorphism(mutated(a1_real, 0, 1), 1)
    assert failures
    assert failures[0].startswith("[")


def test_level_plus_generators(a1):
    """Cartan modes start one step above the root modes"""
    gens = level_plus_generators(a1, 1, 1)
    assert (a1.e(0), 1) in gens and (a1.f(0), 1) in gens
    assert (a1.h(0), 1) not in gens
    assert (a1.h(0), 2) in gens


def test_vacuum_annihilation(a1_real, a1_real_n2):
    assert check_vacuum_annihilation(a1_real, 2) == []
    assert check_vacuum_annihilation(a1_real_n2, 1) == []


def test_top_cartan_mode(a1_real, a1_real_n2):
    """h_{1,N} vac' = b_{1,N} vac' before localization"""
    assert check_hin_bin(a1_real) == []
    assert check_hin_bin(a1_real_n2) == []


def test_constants_level_free(a1_real, a2_real):
    assert check_constants(a1_real) == []
    assert check_constants(a2_real) == []


def test_constants_do_not_depend_on_n(a1, a1_ring):
    cell = compute_realization(a1)
    assert check_constants_n_independent(a1, a1_ring, extract_PQ(cell), cell.variables) == []


def test_constants_do_not_depend_on_scaling(a1, a1_ring):
    cell = compute_realization(a1)
    assert check_normalization_independence(a1, a1_ring, cell, {0: Fraction(3)}, 1, 1) == []


def test_n1_preimages(a1_real, a2_real):
    assert check_n1_proposition(a1_real) == []
    assert check_n1_proposition(a2_real) == []


def test_n1_preimages_need_n1(a1_real_n2):
    with pytest.raises(ConventionError):
        check_n1_proposition(a1_real_n2)


def test_wp_maps_vacuum_to_vacuum(a1_real):
    wp = build_wp(a1_real)
    vac = wp.source.vacuum()
    assert wp(vac) == a1_real.vacuum()


def test_wp_top_mode(a1, a1_real):
    """wp(h_{1,-1} vac) has the b_{1,-1} vac' component"""
    wp = build_wp(a1_real)
    image = wp(wp.source.monomial_vector(((a1.h(0), -1),)))
    assert image.get((((B, 0, -1),), 0)) == a1_real.ring.one


def test_wp_isomorphism(a1_real, rng):
    wp = build_wp(a1_real)
    assert check_wp_intertwines(wp, 1) == []
    assert check_wp_isomorphism(wp, 3, rng) == []


def test_wp_isomorphism_a2(a2_real, rng):
    wp = build_wp(a2_real)
    assert check_wp_isomorphism(wp, 1, rng) == []


def test_wp_isomorphism_n2(a1_real_n2, rng):
    wp = build_wp(a1_real_n2)
    assert check_wp_isomorphism(wp, 1, rng) == []


def test_nonsimple_images_a2(a2_real):
    """The highest root of A2 follows its big-cell field and f fits the admissible terms"""
    derived = derive_nonsimple_images(a2_real, 1)
    assert derived.failures == []
    assert set(derived.e_fields) == set(derived.f_fields) == {2}
    linear = [t for t in derived.f_fields[2].terms if t.current[0] == "b" and len(t.factors) == 2]
    assert sorted(t.current[1] for t in linear if t.coeff) == [0, 1]


def test_f_field_shapes_a2(a2):
    """Weight -theta terms: seven a-currents, four b-currents, three derivatives"""
    shapes = f_field_shapes(a2, 2)
    assert len(shapes) == 14
    assert (("b", 0), ("astar", 2)) in shapes
    assert (("dastar", 2),) in shapes


def test_forbidden_vacuum_terms(a2_real):
    """Linear b a*_gamma with gamma != alpha and a lone a-mode are rejected, derivative terms are not"""
    module, one = a2_real.module, a2_real.ring.one
    state = {(((B, 0, 0), (ASTAR, 0, -1)), 0): one, (((B, 1, 0), (ASTAR, 2, -1)), 0): one,
             (((A, 1, -1),), 0): one, (((ASTAR, 2, -2),), 0): one}
    reasons = sorted(reason for _, reason in forbidden_vacuum_terms(module, 2, state))
    assert reasons == ["constant Q", "linear R"]


def test_build_realization_rejects_bad_tables(a1, a1_ring):
    """A wrong Q table breaks [e, f] for every kappa"""
    cell = compute_realization(a1)
    tables = extract_PQ(cell)
    y, = cell.variables
    broken = dict(tables, Q={0: {0: -3 * y ** 2}})
    with pytest.raises(ConventionError):
        build_realization(a1, a1_ring, broken, cell.variables, 1)
