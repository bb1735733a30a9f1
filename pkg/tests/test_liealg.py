from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from src.algebra.liealg import build_lie_algebra
from src.utils.config import SUPPORTED_TYPES
from src.utils.errors import RepresentationError, UnsupportedTypeError


def elements(dim):
    return st.lists(st.integers(-3, 3), min_size=dim, max_size=dim).map(lambda xs: tuple(Fraction(x) for x in xs))


@pytest.mark.parametrize("cartan_type", SUPPORTED_TYPES)
def test_structure_identities(algebras, cartan_type):
    """Jacobi, antisymmetry, invariance, sl2 triples and rho all hold exactly"""
    assert algebras[cartan_type].check_structure() == []


@pytest.mark.parametrize("cartan_type,dim,n_roots,dual", [("A1", 3, 1, 2), ("A2", 8, 3, 3), ("B2", 10, 4, 3)])
def test_dimensions(algebras, cartan_type, dim, n_roots, dual):
    """Basis sizes and dual Coxeter numbers"""
    alg = algebras[cartan_type]
    assert (alg.dim, alg.n_roots, alg.dual_coxeter) == (dim, n_roots, dual)


def test_root_lengths(algebras):
    """Long roots have squared length 2; B2 also has roots of length 1"""
    assert algebras["A1"].root_length(0) == 2
    assert {algebras["A2"].root_length(a) for a in range(3)} == {2}
    assert {algebras["B2"].root_length(a) for a in range(4)} == {1, 2}


def test_sl2_triple_a1(a1):
    """[e, f] = h, [h, e] = 2e in A1"""
    e, f, h = a1.basis(a1.e(0)), a1.basis(a1.f(0)), a1.basis(a1.h(0))
    assert a1.bracket(e, f) == h
    assert a1.bracket(h, e) == tuple(2 * x for x in e)
    assert a1.form(e, f) == 1


def test_positive_roots_ordered_by_height(a2):
    """Simple roots first, then the highest root"""
    assert [r.coordinates for r in a2.positive_roots] == [(1, 0), (0, 1), (1, 1)]


def test_regularity(a1, a2):
    """A weight is regular iff no coroot pairs to zero"""
    assert a1.regularity_check((1,))
    assert not a1.regularity_check((0,))
    assert a2.regularity_check((1, 2))
    assert not a2.regularity_check((1, -1))


def test_unsupported_type():
    """Unknown labels are rejected"""
    with pytest.raises(UnsupportedTypeError):
        build_lie_algebra("G2")


def test_representations(a2):
    """Adjoint and defining matrices satisfy every bracket"""
    assert a2.check_representation(a2.representation("adjoint"))
    assert a2.check_representation(a2.representation("defining"))
    assert len(a2.representation("defining")[0]) == 3


def test_broken_representation(a1):
    """Doubling the e matrix breaks [e, f] = h"""
    matrices = [list(map(list, m)) for m in a1.representation("adjoint")]
    matrices[a1.e(0)] = [[2 * x for x in row] for row in matrices[a1.e(0)]]
    with pytest.raises(RepresentationError):
        a1.check_representation(matrices)


def test_to_json_uses_rational_strings(a1):
    """Exported constants are p/q strings"""
    data = a1.to_json()
    assert data["cartan_type"] == "A1"
    assert all("/" in c for row in data["bilinear_form"] for c in row)
    assert data["rho"] == ["1/1"]


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_bracket_properties(a2, data):
    """Antisymmetry, Jacobi and invariance on random A2 elements"""
    x, y, z = (data.draw(elements(a2.dim)) for _ in range(3))
    assert a2.bracket(x, y) == tuple(-c for c in a2.bracket(y, x))
    jacobi = [p + q + r for p, q, r in zip(a2.bracket(x, a2.bracket(y, z)),
                                           a2.bracket(y, a2.bracket(z, x)),
                                           a2.bracket(z, a2.bracket(x, y)))]
    assert not any(jacobi)
    assert a2.form(a2.bracket(x, y), z) == a2.form(x, a2.bracket(y, z))
