import pytest
from hypothesis import given, settings, strategies as st

from src.modules.affine_pbw import (FreeEnveloping, RightVacuumModule, VacuumModule, affine_bracket, coinvariants,
                                    localize, pbw_normal_form, subtract, vectors_equal)
from src.utils.errors import InvarianceError


def test_straightening_a1(a1, a1_ring):
    """e_1 f_-1 = f_-1 e_1 + h_0 - k in U_k"""
    U = FreeEnveloping(a1, a1_ring, a1_ring.k)
    e, f, h = a1.e(0), a1.f(0), a1.h(0)
    got = pbw_normal_form([(e, 1), (f, -1)], U)
    expected = {(((f, -1), (e, 1)), 0): a1_ring.one, (((h, 0),), 0): a1_ring.one, ((), 0): -a1_ring.k}
    assert vectors_equal(got, expected)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 7), st.integers(-2, 2), st.integers(0, 7), st.integers(-2, 2))
def test_commutator_matches_bracket(a2, a2_ring, x, n, y, m):
    """x y - y x equals the affine bracket on random A2 modes"""
    U = FreeEnveloping(a2, a2_ring, a2_ring.k)
    left = pbw_normal_form([(x, n), (y, m)], U)
    right = pbw_normal_form([(y, m), (x, n)], U)
    assert vectors_equal(subtract(left, right), affine_bracket(a2, a2_ring, (x, n), (y, m)))


def test_vacuum_annihilator(a1, a1_ring):
    """The level subalgebra kills vac and h_{1,N} acts by H_1"""
    M = VacuumModule(a1, a1_ring, 1)
    vac = M.vacuum()
    assert M.apply((a1.e(0), 1), vac) == {}
    assert M.apply((a1.h(0), 2), vac) == {}
    assert M.apply((a1.h(0), 1), vac) == {((), 0): a1_ring.H[0]}
    assert M.check_invariant(vac, 2) == []


def test_top_mode_passes_lower_modes(a1, a1_ring):
    """h_1 f_0 vac = H_1 f_0 vac, the correction f_1 vac vanishes"""
    M = VacuumModule(a1, a1_ring, 1)
    v = {(((a1.f(0), 0),), 0): a1_ring.one}
    assert vectors_equal(M.apply((a1.h(0), 1), v), {(((a1.f(0), 0),), 0): a1_ring.H[0]})


def test_localize(a1, a1_ring):
    """Trailing top Cartan modes become coefficients"""
    M = VacuumModule(a1, a1_ring, 1, localized=False)
    v = M.monomial_vector(((a1.f(0), 0), (a1.h(0), 1)))
    assert vectors_equal(localize(M, v), {(((a1.f(0), 0),), 0): a1_ring.H[0]})


def test_pbw_injectivity(a2, a2_ring):
    """Left multiplication by the top Cartan modes is injective"""
    M = VacuumModule(a2, a2_ring, 1, localized=False)
    assert M.action_matrix_injective(1) == []


def test_right_module_top_mode(a1, a1_ring):
    """vac h_{1,1} = H_1 vac in the right module"""
    R = RightVacuumModule(a1, a1_ring, 1)
    assert R.right_multiply(R.vacuum(), (a1.h(0), 1)) == {((), 0): a1_ring.H[0]}
    plain = RightVacuumModule(a1, a1_ring, 1, localized=False)
    w = plain.right_multiply(plain.vacuum(), (a1.h(0), 1))
    assert vectors_equal(plain.localize(w), {((), 0): a1_ring.H[0]})


def test_function_action_and_denominators(a1, a1_ring):
    """phi(H) acts through the top modes; clearing 1/H_alpha needs one factor"""
    M = VacuumModule(a1, a1_ring, 1)
    H = a1_ring.H[0]
    v = {(((a1.f(0), 0),), 0): a1_ring.one}
    assert vectors_equal(M.apply_function(H * H, v), {(((a1.f(0), 0),), 0): H * H})
    exponents, multiplier = M.clear_denominators({((), 0): a1_ring.one / H})
    assert exponents == {0: 1}
    assert multiplier == a1_ring.root_forms[0]


def test_require_invariant(a1, a1_ring):
    """f_{-1} vac is moved by e_1"""
    M = VacuumModule(a1, a1_ring, 1)
    v = M.monomial_vector(((a1.f(0), -1),))
    with pytest.raises(InvarianceError):
        M.require_invariant(v)


def test_coinvariants_a1(a1, a1_ring):
    """h_0 acts on the adjoint module, H_1 multiplies"""
    coinv = coinvariants(a1, a1_ring, a1.representation("adjoint"))
    e = a1.e(0)
    assert coinv.bhat_zero(0, {e: a1_ring.one}) == {e: a1_ring.from_fraction(2)}
    assert coinv.bhat_one(0, {e: a1_ring.one}) == {e: a1_ring.H[0]}
