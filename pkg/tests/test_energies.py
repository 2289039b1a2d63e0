import numpy as np
import pytest

from polyhom.energies import (GrowthViolation, LAMINATE_PARTITION, EnergyDensity, PartitionSpec,
                              build_zero_set_energy, cell_energy_eval, coercivity_check,
                              convex_variant_energy, counterexample_cell_energy, distance_integrand,
                              growth_bounds_hold, growth_sample, hull_distance_energy, sverak_V)
from polyhom.mat2 import MatrixSet, diag, dist_to_set, minors, project_convex_hull, sym_part
from polyhom.sets import A1, A1_1, A1_2, A2, A2_1, A2_2, O


def _diag_grid():
    x = np.linspace(-3, 4, 61)
    y = np.linspace(-1, 3, 61)
    X, Y = np.meshgrid(x, y, indexing="ij")
    M = np.zeros(X.shape + (2, 2))
    M[..., 0, 0], M[..., 1, 1] = X, Y
    return M.reshape(-1, 2, 2)


def test_zero_set_examples():
    w = build_zero_set_energy(A1, 4)
    assert w(A1_2) == 0.0 and w(O) == 0.0
    w2 = build_zero_set_energy(A1, 2)
    # oracle: the two projections computed directly
    d4 = project_convex_hull(np.eye(2), A1.mats)[0]
    d5 = project_convex_hull(minors(np.eye(2)), A1.minors())[0]
    assert w2(np.eye(2)) == pytest.approx(max(d4**2, d5), rel=1e-12)
    assert w2(np.eye(2)) > 0
    with pytest.raises(ValueError):
        build_zero_set_energy(A1, 1.5)


@pytest.mark.parametrize("a", [A1, A2], ids=["A1", "A2"])
@pytest.mark.parametrize("p", [2, 4])
def test_zero_set_on_grid(a, p):
    grid = np.concatenate([_diag_grid(), a.mats])
    w = build_zero_set_energy(a, p)(grid)
    d = dist_to_set(grid, a)
    assert np.array_equal(w <= 1e-8, d <= 1e-8)
    assert np.all(w[d == 0] == 0.0)


def test_zero_set_is_polyconvex_hull_for_B():
    from polyhom.hulls import b_arc
    from polyhom.sets import B

    w = build_zero_set_energy(B, 4)
    assert w(b_arc(0.5)) < 1e-12  # the arc is in the zero set although not in B


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(11)
    w = build_zero_set_energy(A1, 4)
    h = 1e-6
    checked = 0
    while checked < 100:
        m = rng.uniform(-3, 3, size=(2, 2))
        v1, _, v2, _ = w.value_and_grad.branches(m)
        if abs(v1[0] - v2[0]) < 1e-3 * max(v1[0], v2[0]):
            continue  # too close to the switch between branches
        g = w.grad(m)
        fd = np.zeros((2, 2))
        for i in range(2):
            for j in range(2):
                e = np.zeros((2, 2))
                e[i, j] = h
                fd[i, j] = (w(m + e) - w(m - e)) / (2 * h)
        assert np.linalg.norm(fd - g) <= 1e-4 * np.linalg.norm(g)
        checked += 1


def test_sverak_examples_and_properties():
    assert sverak_V(np.eye(2)) == 1.0
    assert sverak_V(diag(-1, 1)) == 0.0
    assert sverak_V(diag(2, 3)) == 6.0
    rng = np.random.default_rng(5)
    m = rng.normal(size=(1000, 2, 2))
    v = sverak_V(m)
    assert np.all(v >= 0)
    assert np.array_equal(v, sverak_V(sym_part(m)))
    # linear decay to zero across the boundary of the cone
    s = np.linspace(-0.1, 0.1, 41)
    vals = sverak_V(np.array([diag(x, 1.0) for x in s]))
    assert np.allclose(vals, np.maximum(s, 0.0), atol=1e-15)


def test_distance_integrand():
    part = LAMINATE_PARTITION
    assert distance_integrand([0.25, 0.5], A1_1, part, [A1, A2]) == 0.0
    assert distance_integrand([0.25, 0.5], O, part, [A1, A2]) == 0.0
    # brute force over A2 = {O, diag(5/2,1), diag(3,2)}: nearest is O at |A1_1| = sqrt(5)/2
    brute = min(np.linalg.norm(A1_1 - c) for c in A2.mats)
    got = distance_integrand([0.75, 0.5], A1_1, part, [A1, A2])
    assert got == pytest.approx(brute, abs=1e-15) and got == pytest.approx(np.sqrt(5) / 2)


def test_cell_energy_examples(ce4):
    assert cell_energy_eval(ce4, [0.25, 0.5], A1_1) == 0.0
    assert cell_energy_eval(ce4, [0.75, 0.5], A2_2) == 0.0
    v = cell_energy_eval(ce4, [0.25, 0.5], A2_1)
    assert v > 0 and v == build_zero_set_energy(A1, 4)(A2_1)


def test_partition_validation():
    with pytest.raises(ValueError):
        PartitionSpec((((0, 0.6), (0, 1)), ((0.5, 1), (0, 1))), (0, 1))
    with pytest.raises(ValueError):
        PartitionSpec((((0, 0.5), (0, 1)),), (0,))


def test_convex_variant():
    w = convex_variant_energy(4)
    assert w(A2_1) == 0.0
    assert w(0.5 * (A2_1 + A2_2)) < 1e-30
    # O is itself a point of A2, so its distance to the hull is zero
    assert w(O) == 0.0
    # oracle for a point outside: squared Frobenius distance by projection
    d = project_convex_hull(A1_1, A2.mats)[0]
    assert d > 0 and w(A1_1) == pytest.approx(d**4, rel=1e-12)
    with pytest.raises(ValueError):
        convex_variant_energy(1)


def test_coercivity():
    c1, c2, c3 = coercivity_check(build_zero_set_energy(A1, 2), 10, 30)
    assert c1 > 0
    c1, c2, c3 = coercivity_check(build_zero_set_energy(A1, 4), 10, 30)
    assert c1 > 0
    sq = hull_distance_energy(MatrixSet.of([O]), 2)
    mats = growth_sample(10, 30)
    assert growth_bounds_hold(sq, 1, 0, 1, mats)
    with pytest.raises(ValueError):
        coercivity_check(sq, 0, 10)


def test_growth_violation_raised():
    flat = EnergyDensity(lambda m: (np.zeros(m.shape[:-2]), np.zeros_like(m)), 2.0, MatrixSet.of([O]))
    with pytest.raises(GrowthViolation):
        coercivity_check(flat, 5, 10)
