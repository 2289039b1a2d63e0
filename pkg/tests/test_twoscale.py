from fractions import Fraction

import numpy as np
import pytest

from polyhom.energies import LAMINATE_PARTITION
from polyhom.homogenize.field import DisplacementField, laminate_field
from polyhom.homogenize.twoscale import (LambdaBins, corrupt_field, distance_fraction,
                                         empirical_two_scale_measure, riemann_lebesgue_check,
                                         support_check)
from polyhom.sets import A1, A1_1, A2, A2_1, O, P1_RECT


def test_laminate_measure():
    f = laminate_field(A1_1, A2_1, Fraction(1, 5), 20)
    m = empirical_two_scale_measure(f, y_bins=2)
    assert m.weights.sum() == pytest.approx(1.0, abs=1e-12)
    assert m.mass_at(A1_1) == pytest.approx(0.5) and m.mass_at(A2_1) == pytest.approx(0.5)
    for iy, il, w in zip(m.y_index, m.lam_index, m.weights):
        expect = A1_1 if iy[0] == 0 else A2_1
        assert tuple(il) == tuple(m.lam.index(expect)[0])
    assert len(m.young_measure()) == 2


def test_constant_measure_and_support():
    f = DisplacementField.zero(8, 1, O, 0.5)
    m = empirical_two_scale_measure(f, y_bins=4)
    assert m.mass_at(O) == pytest.approx(1.0)
    assert len(m.weights) == 16
    assert support_check(m, LAMINATE_PARTITION, [A1, A2]) == (True, 0.0)


def test_support_laminate_and_corruption():
    f = laminate_field(A1_1, A2_1, 0.2, 60)
    m = empirical_two_scale_measure(f, y_bins=4)
    assert support_check(m, LAMINATE_PARTITION, [A1, A2]) == (True, 0.0)
    g, n_bad = corrupt_field(f, 0.01, 1.0, seed=0)
    assert n_bad == 72 and n_bad / g.n_triangles == 0.01
    ok, esc = support_check(empirical_two_scale_measure(g, y_bins=4), LAMINATE_PARTITION, [A1, A2])
    assert not ok and esc > 0
    frac = distance_fraction(g, LAMINATE_PARTITION, [A1, A2], 1e-6)
    assert frac == pytest.approx(0.01)
    assert abs(esc - frac) <= 1.0 / g.n_triangles


def test_single_triangle_corruption_escapes():
    f = laminate_field(A1_1, A2_1, 0.25, 16)
    g = f.copy()
    g.w[3, 3, 0] += 0.5 * f.h
    m = empirical_two_scale_measure(g, y_bins=2)
    assert support_check(m, LAMINATE_PARTITION, [A1, A2])[1] > 0


def test_bins_must_refine_partition():
    f = laminate_field(A1_1, A2_1, 0.25, 16)
    with pytest.raises(ValueError):
        support_check(empirical_two_scale_measure(f, y_bins=3), LAMINATE_PARTITION, [A1, A2])


def test_overflow_bin():
    bins = LambdaBins(-1, 1, 4)
    assert np.array_equal(bins.index(np.array([[5.0, 0], [0, 0]]))[0], [-1, -1, -1, -1])
    f = DisplacementField.zero(4, 1, np.diag([3.0, 0.0]), 1.0)
    m = empirical_two_scale_measure(f, lambda_bins=bins)
    assert support_check(m, LAMINATE_PARTITION, [A1, A2]) == (False, 1.0)


def test_riemann_lebesgue_examples():
    eps = [Fraction(1, m) for m in (2, 4, 8, 16)]
    full = ((Fraction(0), Fraction(1)), (Fraction(0), Fraction(1)))
    assert all(e == 0 for e in riemann_lebesgue_check(full, full, eps))
    assert all(e == 0 for e in riemann_lebesgue_check(full, P1_RECT, eps))
    U = ((Fraction(0), Fraction(7, 10)), (Fraction(0), Fraction(1)))
    V = ((Fraction(0), Fraction(1, 2)), (Fraction(0), Fraction(1)))
    errs = riemann_lebesgue_check(U, V, eps)
    # exact integration by hand: the last partial period of [0, 0.7) over-counts
    assert errs == [Fraction(1, 10), Fraction(1, 40), Fraction(1, 40), Fraction(1, 160)]
    assert all(b <= a for a, b in zip(errs, errs[1:]))
    assert all(err <= e for err, e in zip(errs, eps))


def test_riemann_lebesgue_against_quadrature():
    U = ((0.1, 0.83), (0.2, 0.9))
    V = ((0.3, 0.6), (0.1, 0.45))
    eps = [1 / 3, 1 / 7]
    x = (np.arange(200_000) + 0.5) / 200_000
    for e, err in zip(eps, riemann_lebesgue_check(U, V, eps)):
        ix = (x >= U[0][0]) & (x < U[0][1]) & ((x / e) % 1 >= V[0][0]) & ((x / e) % 1 < V[0][1])
        iy = (x >= U[1][0]) & (x < U[1][1]) & ((x / e) % 1 >= V[1][0]) & ((x / e) % 1 < V[1][1])
        quad = ix.mean() * iy.mean()
        target = 0.73 * 0.7 * 0.3 * 0.35
        assert err == pytest.approx(abs(quad - target), abs=1e-5)
