from fractions import Fraction

import pytest
import sympy

from src.algebra.bigcell import PolyVectorField, compute_realization, extract_PQ, poly_terms, pq_to_json


@pytest.fixture(scope="module")
def cells(algebras):
    return {t: compute_realization(algebras[t]) for t in ("A1", "A2")}


def test_a1_closed_form(a1, cells):
    """e -> d/dy, h -> -2y d/dy, f -> -y^2 d/dy"""
    cell = cells["A1"]
    y, = cell.variables
    assert cell.image(a1.e(0)) == PolyVectorField({0: sympy.Integer(1)}, cell.variables)
    assert cell.image(a1.h(0)) == PolyVectorField({0: -2 * y}, cell.variables)
    assert cell.image(a1.f(0)) == PolyVectorField({0: -y ** 2}, cell.variables)


@pytest.mark.parametrize("cartan_type", ["A1", "A2"])
def test_homomorphism(cells, cartan_type):
    """Images respect every bracket of basis elements"""
    assert cells[cartan_type].check_homomorphism() == []


@pytest.mark.parametrize("cartan_type", ["A1", "A2"])
def test_shape_and_weights(cells, cartan_type):
    """Cartan images are Euler fields, e_alpha leads with 1, every term has the right weight"""
    cell = cells[cartan_type]
    assert cell.check_homogeneity() == []
    assert cell.check_leading_shape() == []
    assert cell.check_weights() == []


def test_pq_tables_a2(a2, cells):
    """P and Q have no constant terms and P_all only points to higher roots"""
    tables = extract_PQ(cells["A2"])
    assert set(tables["P"]) == {0, 1}
    assert set(tables["Q"]) == {0, 1}
    for a, row in tables["P_all"].items():
        for beta in row:
            assert a2.positive_roots[beta].height > a2.positive_roots[a].height
    data = pq_to_json(cells["A2"], tables)
    assert data["variables"] == ["y10", "y01", "y11"]


def test_rescaling_keeps_homomorphism(cells):
    """A coordinate rescaling is again a realization"""
    rescaled = cells["A2"].rescaled({0: Fraction(2), 2: Fraction(-1, 3)})
    assert rescaled.check_homomorphism() == []
    assert rescaled.scalings[0] == 2


def test_rescaling_keeps_simple_normalization(a1, a2, cells):
    """The torus twist undoes the rescaling on sl2 and keeps P/Q free of constants"""
    rescaled = cells["A1"].rescaled({0: Fraction(3)})
    for idx in range(a1.dim):
        assert rescaled.image(idx).terms == cells["A1"].image(idx).terms
    scalings = {a2.simple_index(0): Fraction(2), a2.simple_index(1): Fraction(5, 7)}
    tables = extract_PQ(cells["A2"].rescaled(scalings))
    assert set(tables["Q"]) == {0, 1}


def test_poly_terms():
    """Sparse terms with Fraction coefficients"""
    y1, y2 = sympy.symbols("y1 y2")
    terms = poly_terms(y1 ** 2 * y2 / 2 - 3 * y2, (y1, y2))
    assert sorted(terms, key=lambda t: t[1]) == [(Fraction(-3), (0, 1)), (Fraction(1, 2), (2, 1))]
