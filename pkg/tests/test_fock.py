import pytest

from src.modules.affine_pbw import vectors_equal
from src.modules.fock import A, ASTAR, B, FieldExpr, FieldTerm, FockModule, localize_fock, normal_order, osc_bracket
from src.utils.errors import NonConformalFieldError


def test_oscillator_brackets(a1, a1_ring):
    """[a_n, a*_-n] = 1 and [b_n, b_-n] = -n (k - k_c)(h, h)"""
    F = FockModule(a1, a1_ring, 1)
    assert osc_bracket(F, (A, 0, 1), (ASTAR, 0, -1)) == a1_ring.one
    assert osc_bracket(F, (ASTAR, 0, -1), (A, 0, 1)) == -a1_ring.one
    assert osc_bracket(F, (A, 0, 1), (ASTAR, 0, -2)) == a1_ring.zero
    expected = a1_ring.from_fraction(-2 * a1.gram[0][0]) * (a1_ring.k - 2)
    assert osc_bracket(F, (B, 0, 2), (B, 0, -2)) == expected


def test_vacuum_relations(a1, a1_ring):
    """a_{n >= N} and a*_{n >= 0} kill vac', b_{i,N} acts by H_i"""
    F = FockModule(a1, a1_ring, 1)
    vac = F.vacuum()
    assert F.apply((A, 0, 1), vac) == {}
    assert F.apply((ASTAR, 0, 0), vac) == {}
    assert F.apply((B, 0, 2), vac) == {}
    assert F.apply((B, 0, 1), vac) == {((), 0): a1_ring.H[0]}


def test_annihilation_through_creation(a1, a1_ring):
    """a_1 a*_-1 vac' = vac'"""
    F = FockModule(a1, a1_ring, 1)
    v = F.monomial_vector(((A, 0, 1), (ASTAR, 0, -1)))
    assert vectors_equal(v, F.vacuum())


def test_normal_order():
    """Annihilating a and a* modes move right, relative order kept"""
    word = ((A, 0, 0), (ASTAR, 0, -1), (ASTAR, 1, 1), (B, 0, -1))
    assert normal_order(word) == ((ASTAR, 0, -1), (B, 0, -1), (A, 0, 0), (ASTAR, 1, 1))


def test_field_needs_one_current(a1_ring):
    """A term with two currents or none is rejected"""
    with pytest.raises(NonConformalFieldError):
        FieldTerm(a1_ring.one, (("a", 0), ("b", 0)))
    with pytest.raises(NonConformalFieldError):
        FieldTerm(a1_ring.one, (("astar", 0),))


def test_field_modes(a1, a1_ring):
    """Modes -1 and 0 of b(z) create b_{-1} and b_0"""
    F = FockModule(a1, a1_ring, 1)
    b = FieldExpr.single(a1_ring.one, ("b", 0))
    assert vectors_equal(F.mode_apply(b, -1, F.vacuum()), {(((B, 0, -1),), 0): a1_ring.one})
    assert vectors_equal(F.mode_apply(b, 0, F.vacuum()), {(((B, 0, 0),), 0): a1_ring.one})


def test_localize_fock(a1, a1_ring):
    """b_{1,N} vac' becomes H_1 vac'"""
    F = FockModule(a1, a1_ring, 1, localized=False)
    s = F.monomial_vector(((B, 0, -1), (B, 0, 1)))
    assert vectors_equal(localize_fock(F, s), {(((B, 0, -1),), 0): a1_ring.H[0]})


def test_basis_grading(a1, a1_ring):
    """I-weight 1 states at N = 1: b_0, a_0 and a*_-1"""
    F = FockModule(a1, a1_ring, 1)
    monos = F.basis_monomials(1)
    assert set(monos) == {(), ((B, 0, 0),), ((A, 0, 0),), ((ASTAR, 0, -1),)}
