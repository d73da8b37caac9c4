from fractions import Fraction

import pytest

from bpcentre.dvr_arith import lattice_membership
from bpcentre.ktheory_lattice import (
    StabilizationError,
    adams_sequence,
    compare_with_diagonal_window,
    sg_membership,
    sg_window,
)


def test_adams_sequence_examples():
    assert adams_sequence(3, 1, 4) == (1, 1, 1, 1, 1)
    assert adams_sequence(3, 0, 3) == (1, 0, 0, 0)
    assert adams_sequence(3, 2, 3) == (1, 4, 16, 64)
    assert adams_sequence(5, 2, 2) == (1, 16, 256)
    with pytest.raises(ValueError):
        adams_sequence(3, Fraction(1, 3), 2)


def test_sg_window_0_is_full():
    lat, cert = sg_window(3, 0)
    assert lat.rank == 1
    assert lat.elementary_divisors == (0,)
    assert cert.stopped_at_a <= cert.m_cap


def test_sg_window_1_is_full():
    lat, _ = sg_window(3, 1)
    assert lat.elementary_divisors == (0, 0)
    assert lattice_membership((1, 1), lat) is not None
    assert lattice_membership((1, 0), lat) is not None


def test_sg_window_2_frozen():
    lat, _ = sg_window(3, 2)
    assert lat.pivots == ((0, 0), (1, 0), (2, 1))
    assert lat.basis == (
        (Fraction(1), Fraction(0), Fraction(0)),
        (Fraction(0), Fraction(1), Fraction(1)),
        (Fraction(0), Fraction(0), Fraction(3)),
    )


def test_generator_membership_certificates():
    p, q = 3, 2
    for N in range(6):
        lat, _ = sg_window(p, N)
        for k in (0, 1, q, q * q, p, p * q):
            cert = sg_membership(adams_sequence(p, k, N), lat)
            assert cert is not None, (N, k)


def test_unit_vector_membership_decided():
    # the top unit vector needs a p-power multiple from window 2 onwards
    lat, _ = sg_window(3, 3)
    assert sg_membership((0, 0, 0, 1), lat) is None
    assert sg_membership((0, 0, 0, 9), lat) is not None


def test_membership_length_checked():
    lat, _ = sg_window(3, 2)
    with pytest.raises(ValueError):
        sg_membership((1, 1), lat)


def test_window_projections_nested():
    for N in range(1, 7):
        bigger, _ = sg_window(3, N)
        smaller, _ = sg_window(3, N - 1)
        for col in bigger.basis:
            assert lattice_membership(col[:N], smaller) is not None, N


def test_pointwise_product_closure_on_generators():
    for k1 in (0, 1, 2, 3, 6):
        for k2 in (0, 1, 2, 4):
            w1 = adams_sequence(3, k1, 5)
            w2 = adams_sequence(3, k2, 5)
            prod = tuple(a * b for a, b in zip(w1, w2))
            assert prod == adams_sequence(3, k1 * k2, 5)


def test_stabilization_reproducible_with_raised_caps():
    for N in (2, 4):
        lat, cert = sg_window(3, N)
        raised, _ = sg_window(3, N, caps=(cert.m_cap + cert.margin, cert.s_cap))
        assert raised == lat


def test_stabilization_failure_is_loud():
    with pytest.raises(StabilizationError):
        sg_window(3, 6, caps=(1, 0), margin=10)


def test_compare_with_diagonal_window(table_p3):
    report = compare_with_diagonal_window(0, 1, table_p3)
    assert report["inclusion"] is True
    assert report["sg_divisors"] == [0]
    assert report["diagonal_divisors"] == [0]
    assert report["gap_colength"] == 0

    report = compare_with_diagonal_window(3, 2, table_p3)
    assert report["inclusion"] is True
    assert report["gap_colength"] is not None
    assert report["gap_colength"] >= 0
    assert report["stabilization"]["q"] == 2
