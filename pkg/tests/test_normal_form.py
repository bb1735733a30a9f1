import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from src.connection.normal_form import (FormalConnection, GaugeElement, check_phi_prime, check_round_trip,
                                        check_shape, check_torus_equivariance, check_uniqueness, darboux_report,
                                        gauge_transform, normal_form, phi_prime_rank, random_connection,
                                        random_gauge, solve_phi_prime, torus_conjugate)
from src.realization.endo_ring import generator_counts
from src.utils.errors import NormalFormError, TruncationError

CASES = [("A1", 1), ("A1", 2), ("A2", 1), ("A2", 2)]
TRUNCATION = 4


def scaled(x, c):
    return tuple(Fraction(c) * a for a in x)


@pytest.fixture
def a1_pole(a1):
    """d + h t^-2 dt"""
    return FormalConnection(a1, 1, 2, {-2: a1.basis(a1.h(0))})


def test_gauge_example(a1, a1_pole):
    """exp(s f t) turns h/t^2 into h/t^2 + 2s f/t - s f"""
    f = a1.basis(a1.f(0))
    g = GaugeElement(a1, 1, [{1: scaled(f, 3)}])
    out = gauge_transform(a1_pole, g)
    assert out.coefficient(-2) == a1.basis(a1.h(0))
    assert out.coefficient(-1) == scaled(f, 6)
    assert out.coefficient(0) == scaled(f, -3)
    assert out.coefficient(1) == a1.zero()
    _, nf = normal_form(out)
    assert nf == a1_pole


def test_adjoint_variant_skips_derivative(a1, a1_pole):
    f = a1.basis(a1.f(0))
    out = gauge_transform(a1_pole, GaugeElement(a1, 1, [{1: scaled(f, 3)}]), "adjoint")
    assert out.coefficient(0) == a1.zero()


def test_already_normal(a1_pole):
    g, nf = normal_form(a1_pole)
    assert g.is_identity()
    assert nf == a1_pole
    assert check_shape(nf) == []


@pytest.mark.parametrize("cartan_type,N", CASES)
def test_round_trip(algebras, cartan_type, N, rng):
    conn = random_connection(algebras[cartan_type], N, TRUNCATION, rng)
    assert check_round_trip(conn) == []
    g, nf = normal_form(conn)
    assert check_shape(nf) == []
    assert g.check_group() == []


@pytest.mark.parametrize("cartan_type,N", CASES)
def test_uniqueness(algebras, cartan_type, N, rng):
    conn = random_connection(algebras[cartan_type], N, TRUNCATION, rng)
    assert check_uniqueness(conn, rng) == []


@pytest.mark.parametrize("cartan_type,N", CASES)
def test_torus_equivariance(algebras, cartan_type, N, rng):
    alg = algebras[cartan_type]
    conn = random_connection(alg, N, TRUNCATION, rng)
    scalings = [Fraction(i + 2, 3) for i in range(alg.rank)]
    assert check_torus_equivariance(conn, scalings) == []


def test_torus_scales_root_vectors(a1):
    e, f = a1.basis(a1.e(0)), a1.basis(a1.f(0))
    conn = FormalConnection(a1, 1, 1, {-2: a1.basis(a1.h(0)), 0: e, 1: f})
    out = torus_conjugate(conn, [Fraction(2)])
    assert out.coefficient(0) == scaled(e, 2)
    assert out.coefficient(1) == scaled(f, Fraction(1, 2))


@pytest.mark.parametrize("cartan_type,N", CASES)
def test_phi_prime(algebras, cartan_type, N, rng):
    conn = random_connection(algebras[cartan_type], N, TRUNCATION, rng)
    assert check_phi_prime(conn) == []


def test_phi_prime_borel_shape(a2, rng):
    """No e-components survive and the linearization is square of full rank"""
    conn = random_connection(a2, 1, 3, rng)
    u, borel = solve_phi_prime(conn)
    assert u.group == "U~"
    for n in borel.orders():
        assert not any(borel.coefficient(n)[:a2.n_roots])
    found, expected = phi_prime_rank(borel)
    assert found == expected == a2.n_roots * (3 + 1 + 1)


@pytest.mark.parametrize("cartan_type,N,cartan,residual", [("A1", 1, 3, 0), ("A1", 2, 5, 2), ("A2", 1, 6, 0)])
def test_darboux_counts(algebras, cartan_type, N, cartan, residual, rng):
    """Normal-form coordinates match the generators of the endomorphism ring"""
    alg = algebras[cartan_type]
    conns = [random_connection(alg, N, TRUNCATION, rng) for _ in range(2)]
    report = darboux_report(conns, generator_counts(alg, N))
    assert (report["cartan_count"], report["residual_count"]) == (cartan, residual)
    assert report["total_count"] == cartan + residual
    assert report["matches"]
    assert len(report["rows"]) == 2


def test_non_cartan_leading(a1):
    conn = FormalConnection(a1, 1, 2, {-2: a1.basis(a1.e(0))})
    with pytest.raises(NormalFormError):
        normal_form(conn)


def test_singular_leading(a2):
    """h_1 + h_2 is regular, h_1 - h_2 vanishes on the highest root"""
    lead = tuple(a + b for a, b in zip(a2.basis(a2.h(0)), a2.basis(a2.h(1))))
    normal_form(FormalConnection(a2, 1, 2, {-2: lead}))
    lead = tuple(a - b for a, b in zip(a2.basis(a2.h(0)), a2.basis(a2.h(1))))
    with pytest.raises(NormalFormError):
        normal_form(FormalConnection(a2, 1, 2, {-2: lead}))


def test_truncation_below_n(a1, rng):
    conn = random_connection(a1, 3, 1, rng)
    with pytest.raises(NormalFormError):
        normal_form(conn)


def test_off_diagonal_deep_pole(a1, rng):
    """Orders -N .. -2 are gauge invariant and may carry root vectors"""
    h, e = a1.basis(a1.h(0)), a1.basis(a1.e(0))
    conn = FormalConnection(a1, 3, 4, {-4: h, -3: e})
    g, nf = normal_form(conn)
    assert g.is_identity()
    assert nf == conn
    assert check_round_trip(conn) == []
    assert check_uniqueness(conn, rng) == []


def test_off_diagonal_deep_pole_scrambled(a1, rng):
    h, e = a1.basis(a1.h(0)), a1.basis(a1.e(0))
    conn = FormalConnection(a1, 3, 4, {-4: h, -3: e})
    moved = gauge_transform(conn, random_gauge(a1, 3, 4, rng))
    g, nf = normal_form(moved)
    assert check_shape(nf) == []
    assert nf == conn
    assert gauge_transform(moved, g) == nf


def test_pole_too_deep(a1):
    with pytest.raises(TruncationError):
        FormalConnection(a1, 1, 2, {-3: a1.basis(a1.h(0))})


def test_coefficients_above_truncation_dropped(a1):
    conn = FormalConnection(a1, 1, 1, {-2: a1.basis(a1.h(0)), 5: a1.basis(a1.e(0))})
    assert set(conn.coeffs) == {-2}


def test_unknown_variant_and_group(a1, a1_pole):
    with pytest.raises(NormalFormError):
        gauge_transform(a1_pole, GaugeElement(a1, 1), "conjugate")
    with pytest.raises(NormalFormError):
        GaugeElement(a1, 1, group="B")


def test_negative_gauge_power(a1, a1_pole):
    g = GaugeElement(a1, 1, [{-1: a1.basis(a1.e(0))}])
    with pytest.raises(TruncationError):
        gauge_transform(a1_pole, g)


def test_group_membership(a1):
    """A Cartan exponent at t^N leaves the level subalgebra's group"""
    h, e = a1.basis(a1.h(0)), a1.basis(a1.e(0))
    assert GaugeElement(a1, 1, [{1: e, 2: h}]).check_group() == []
    assert GaugeElement(a1, 1, [{1: h}]).check_group()
    assert GaugeElement(a1, 1, [{0: e}], "U~").check_group()


def test_inverse_gauge(a1, a1_pole, rng):
    g = random_gauge(a1, 1, 2, rng)
    back = gauge_transform(gauge_transform(a1_pole, g), g.inverse())
    assert back == a1_pole


def test_to_json(a1_pole):
    data = a1_pole.to_json()
    assert data["N"] == 1
    assert data["coefficients"]["-2"][-1] == "1/1"


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_round_trip_random_seeds(a1, seed):
    conn = random_connection(a1, 1, 3, random.Random(seed))
    assert check_round_trip(conn) == []
    assert check_uniqueness(conn, random.Random(seed + 1)) == []
