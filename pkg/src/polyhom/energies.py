"""Energy densities with prescribed zero sets and the two-phase cell integrand.

All evaluators are vectorised over stacks of matrices of shape ``(..., 2, 2)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import sets
from .mat2 import HullProjector, MatrixSet, cofactor, dist_to_set, frobenius, minors, sym_part, det


@dataclass(frozen=True)
class EnergyDensity:
    """Nonnegative function of a 2x2 matrix with growth exponent ``p``.

    ``value_and_grad`` maps a stack ``(..., 2, 2)`` to ``(values, grads)``.
    When ``zero_set_is_hull`` is set the zero set is the convex hull of
    ``zero_set`` rather than the finite set itself.
    """

    value_and_grad: Callable
    p: float
    zero_set: MatrixSet
    label: str = ""
    zero_set_is_hull: bool = False

    def __call__(self, m):
        v, _ = self.value_and_grad(np.asarray(m, dtype=float))
        return float(v) if np.ndim(v) == 0 else v

    def grad(self, m):
        return self.value_and_grad(np.asarray(m, dtype=float))[1]


def _dist_power(d, r, p):
    """Value and gradient factor of ``dist^p`` given ``d = dist`` and ``r = x - proj``."""
    val = d**p
    with np.errstate(divide="ignore", invalid="ignore"):
        fac = np.where(d > 0, p * d ** (p - 2.0), 0.0) if p < 2 else p * d ** (p - 2.0)
    return val, fac[..., None] * r


class _HullDistancePower:
    def __init__(self, generators: MatrixSet, p: float):
        self.proj = HullProjector(generators.flat())
        self.p = p

    def __call__(self, m):
        m = np.asarray(m, dtype=float)
        shape = m.shape[:-2]
        x = m.reshape(-1, 4)
        d, _, near = self.proj.project(x)
        val, g = _dist_power(d, x - near, self.p)
        return val.reshape(shape), g.reshape(shape + (2, 2))


class _ZeroSetEnergy:
    """max(dist^p(m, conv A), dist^{p/2}(minors(m), conv minors(A)))."""

    def __init__(self, a: MatrixSet, p: float):
        self.p = p
        self.flat_proj = HullProjector(a.flat())
        self.minor_proj = HullProjector(a.minors())

    def branches(self, m):
        m = np.asarray(m, dtype=float)
        x = m.reshape(-1, 4)
        d4, _, near4 = self.flat_proj.project(x)
        xh = minors(m.reshape(-1, 2, 2))
        d5, _, near5 = self.minor_proj.project(xh)
        v1, g1 = _dist_power(d4, x - near4, self.p)
        v2, g5 = _dist_power(d5, xh - near5, self.p / 2.0)
        g2 = g5[:, :4] + g5[:, 4:5] * cofactor(m.reshape(-1, 2, 2)).reshape(-1, 4)
        return v1, g1, v2, g2

    def __call__(self, m):
        m = np.asarray(m, dtype=float)
        shape = m.shape[:-2]
        v1, g1, v2, g2 = self.branches(m)
        first = v1 >= v2
        val = np.where(first, v1, v2)
        g = np.where(first[:, None], g1, g2)
        return val.reshape(shape), g.reshape(shape + (2, 2))


def build_zero_set_energy(a: MatrixSet, p: float = 4.0, label: str = "") -> EnergyDensity:
    """Polyconvex, p-coercive energy of p-growth vanishing on ``a``.

    The zero set is ``{m : minors(m) in conv(minors(a))}``, i.e. the polyconvex
    hull of ``a``; it equals ``a`` exactly when ``a`` is polyconvex.
    """
    if not isinstance(a, MatrixSet):
        a = MatrixSet.of(a)
    if p < 2:
        raise ValueError("p must be at least 2")
    return EnergyDensity(_ZeroSetEnergy(a, float(p)), float(p), a, label or "zero-set")


def hull_distance_energy(a: MatrixSet, p: float = 4.0, label: str = "") -> EnergyDensity:
    """``dist^p(m, conv a)``, convex with zero set ``conv a``."""
    if not isinstance(a, MatrixSet):
        a = MatrixSet.of(a)
    if p < 1:
        raise ValueError("p must be at least 1")
    return EnergyDensity(_HullDistancePower(a, float(p)), float(p), a, label or "hull-distance", True)


def convex_variant_energy(p: float = 4.0) -> EnergyDensity:
    if p < 2:
        raise ValueError("p must be at least 2")
    return hull_distance_energy(sets.A2, p, "dist^p(conv A2)")


def sverak_V(m):
    """``det`` of the symmetric part on the positive definite cone, zero elsewhere."""
    e = sym_part(m)
    de = det(e)
    pd = (e[..., 0, 0] > 0) & (de > 0)
    v = np.where(pd, de, 0.0)
    return float(v) if np.ndim(v) == 0 else v


# ---------------------------------------------------------------------------
# cell integrand


@dataclass(frozen=True)
class PartitionSpec:
    """Axis-aligned rectangles ``((x0, x1), (y0, y1))`` tiling the unit cell, with phase ids."""

    rects: tuple
    phases: tuple

    def __post_init__(self):
        rects = tuple(tuple(tuple(float(c) for c in side) for side in r) for r in self.rects)
        phases = tuple(int(k) for k in self.phases)
        if len(rects) != len(phases) or not rects:
            raise ValueError("one phase index per rectangle required")
        area = 0.0
        for (x0, x1), (y0, y1) in rects:
            if not (0.0 <= x0 < x1 <= 1.0 and 0.0 <= y0 < y1 <= 1.0):
                raise ValueError("rectangles must lie in the unit cell")
            area += (x1 - x0) * (y1 - y0)
        for i in range(len(rects)):
            for j in range(i + 1, len(rects)):
                (a0, a1), (b0, b1) = rects[i]
                (c0, c1), (d0, d1) = rects[j]
                overlap = max(0.0, min(a1, c1) - max(a0, c0)) * max(0.0, min(b1, d1) - max(b0, d0))
                if overlap > 0:
                    raise ValueError("rectangles overlap")
        if abs(area - 1.0) > 1e-12:
            raise ValueError("rectangles must cover the unit cell")
        object.__setattr__(self, "rects", rects)
        object.__setattr__(self, "phases", phases)

    @property
    def n_phases(self) -> int:
        return max(self.phases) + 1

    def phase_of(self, y):
        """Phase index of points ``y`` (shape ``(..., 2)``) of ``[0, 1)^2``."""
        y = np.asarray(y, dtype=float)
        out = np.full(y.shape[:-1], -1, dtype=int)
        for ((x0, x1), (y0, y1)), k in zip(self.rects, self.phases):
            inside = (y[..., 0] >= x0) & (y[..., 0] < x1) & (y[..., 1] >= y0) & (y[..., 1] < y1)
            out[inside] = k
        if np.any(out < 0):
            raise ValueError("points outside the unit cell")
        return int(out) if out.ndim == 0 else out


LAMINATE_PARTITION = PartitionSpec((sets.P1_RECT, sets.P2_RECT), (0, 1))


@dataclass(frozen=True)
class CellEnergy:
    partition: PartitionSpec
    phases: Sequence[EnergyDensity] = field(default=())

    def __post_init__(self):
        if len(self.phases) != self.partition.n_phases:
            raise ValueError("one energy density per partition phase required")
        object.__setattr__(self, "phases", tuple(self.phases))

    def __call__(self, y, m):
        k = self.partition.phase_of(np.asarray(y, dtype=float))
        return self.phases[k](m)

    def value_and_grad(self, phase_idx: np.ndarray, m: np.ndarray):
        """Energies and gradients for matrices ``m`` (n, 2, 2) with given phase indices."""
        val = np.empty(len(m))
        grad = np.empty_like(m)
        for k, e in enumerate(self.phases):
            sel = phase_idx == k
            if np.any(sel):
                val[sel], grad[sel] = e.value_and_grad(m[sel])
        return val, grad

    def zero_sets(self):
        return [e.zero_set for e in self.phases]


def cell_energy_eval(ce: CellEnergy, y, m) -> float:
    return float(ce(y, m))


def counterexample_cell_energy(p: float = 4.0, variant: str | None = None) -> CellEnergy:
    """Two-phase integrand with phase zero sets A1 on P1 and A2 on P2.

    ``variant="convex-phase2"`` replaces the second phase by ``dist^p(., conv A2)``.
    """
    w1 = build_zero_set_energy(sets.A1, p, "W1")
    if variant in (None, "", "default"):
        w2 = build_zero_set_energy(sets.A2, p, "W2")
    elif variant == "convex-phase2":
        w2 = convex_variant_energy(p)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return CellEnergy(LAMINATE_PARTITION, (w1, w2))


def distance_integrand(y, m, partition: PartitionSpec, phase_sets: Sequence[MatrixSet]):
    """Distance of ``m`` to the zero set of the phase containing ``y``."""
    k = np.asarray(partition.phase_of(y))
    m = np.asarray(m, dtype=float)
    if k.ndim == 0:
        return dist_to_set(m, phase_sets[int(k)])
    out = np.empty(k.shape)
    for idx, s in enumerate(phase_sets):
        sel = k == idx
        if np.any(sel):
            out[sel] = dist_to_set(m[sel], s)
    return out


# ---------------------------------------------------------------------------
# growth and coercivity


def growth_sample(radius: float, grid_n: int, seed: int = 0) -> np.ndarray:
    """``grid_n**2`` matrices: ``grid_n`` radii in ``[0, radius]`` times ``grid_n`` directions."""
    rng = np.random.default_rng(seed)
    dirs = rng.standard_normal((grid_n, 4))
    dirs[: min(grid_n, 4)] = np.eye(4)[: min(grid_n, 4)]
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    radii = np.linspace(0.0, radius, grid_n)
    return (radii[:, None, None] * dirs[None]).reshape(-1, 2, 2)


def growth_bounds_hold(e: EnergyDensity, c1, c2, c3, mats) -> bool:
    w = e(mats)
    n = frobenius(mats) ** e.p
    return bool(np.all(c1 * n - c2 <= w + 1e-12) and np.all(w <= c3 * (1.0 + n) + 1e-12))


class GrowthViolation(RuntimeError):
    pass


def coercivity_check(e: EnergyDensity, radius: float, grid_n: int, seed: int = 0):
    """Constants ``(c1, c2, c3)`` with ``c1 |m|^p - c2 <= e(m) <= c3 (1 + |m|^p)`` on a sample ball."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    mats = growth_sample(radius, grid_n, seed)
    w = e(mats)
    n = frobenius(mats) ** e.p
    far = frobenius(mats) >= 0.5 * radius
    c1 = float(np.min(w[far] / n[far]))
    c2 = float(max(0.0, np.max(c1 * n - w)))
    c3 = float(np.max(w / (1.0 + n)))
    if c1 <= 0 or not growth_bounds_hold(e, c1, c2, c3, mats):
        raise GrowthViolation(f"growth bounds fail for {e.label or 'energy'}")
    return c1, c2, c3
