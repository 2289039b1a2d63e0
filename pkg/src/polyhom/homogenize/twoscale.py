"""Empirical two-scale measures of discrete gradient fields and related diagnostics."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..energies import PartitionSpec, distance_integrand
from ..mat2 import MatrixSet
from .field import DisplacementField


@dataclass(frozen=True)
class LambdaBins:
    """Uniform boxes on ``[lo, hi)^4`` for the matrix entries; anything else overflows."""

    lo: float = -4.0
    hi: float = 4.0
    n: int = 32

    @property
    def width(self) -> float:
        return (self.hi - self.lo) / self.n

    @property
    def diameter(self) -> float:
        return 2.0 * self.width  # sqrt(4) * width

    def index(self, F: np.ndarray) -> np.ndarray:
        """Bin indices ``(n, 4)``; rows of ``-1`` mark the overflow bin."""
        x = F.reshape(-1, 4)
        # values on a bin edge up to rounding belong to the upper bin
        idx = np.floor((x - self.lo) / self.width + 1e-9).astype(int)
        out = np.any((idx < 0) | (idx >= self.n), axis=1)
        idx[out] = -1
        return idx

    def box(self, idx):
        lo = self.lo + np.asarray(idx) * self.width
        return lo, lo + self.width


@dataclass
class EmpiricalTwoScaleMeasure:
    y_bins: int
    lam: LambdaBins
    y_index: np.ndarray  # (K, 2)
    lam_index: np.ndarray  # (K, 4), -1 = overflow
    weights: np.ndarray  # (K,)

    def y_rect(self, iy):
        a = np.asarray(iy, dtype=float) / self.y_bins
        return a, a + 1.0 / self.y_bins

    def young_measure(self):
        """Marginal over the cell variable: ``{lambda-bin: weight}``."""
        out = {}
        for li, wgt in zip(map(tuple, self.lam_index), self.weights):
            out[li] = out.get(li, 0.0) + wgt
        return out

    def mass_at(self, F) -> float:
        key = tuple(self.lam.index(np.asarray(F, dtype=float))[0])
        return float(sum(w for li, w in zip(map(tuple, self.lam_index), self.weights) if li == key))


def empirical_two_scale_measure(f: DisplacementField, eps: float | None = None, y_bins: int = 2,
                                lambda_bins: LambdaBins | None = None) -> EmpiricalTwoScaleMeasure:
    """Histogram of ``(<c_T / eps>, grad u|_T)`` weighted by triangle area."""
    lam = lambda_bins or LambdaBins()
    if eps is not None and abs(eps - f.eps) > 1e-12:
        f = DisplacementField(f.N, f.k, f.w, f.A, eps)
    y = f.cell_coordinates()
    iy = np.minimum(np.floor(y * y_bins).astype(int), y_bins - 1)
    il = lam.index(f.flat_gradients())
    keys = np.concatenate([iy, il], axis=1)
    uniq, inv = np.unique(keys, axis=0, return_inverse=True)
    w = np.bincount(inv.ravel(), minlength=len(uniq)) / len(keys)
    return EmpiricalTwoScaleMeasure(y_bins, lam, uniq[:, :2], uniq[:, 2:], w)


def _check_refines(m: EmpiricalTwoScaleMeasure, partition: PartitionSpec):
    for (x0, x1), (y0, y1) in partition.rects:
        for c in (x0, x1, y0, y1):
            if abs(c * m.y_bins - round(c * m.y_bins)) > 1e-9:
                raise ValueError("y-bins do not refine the partition")


def _box_distance(lo, hi, s: MatrixSet) -> float:
    pts = s.flat()
    near = np.clip(pts, lo, hi)
    return float(np.min(np.linalg.norm(pts - near, axis=1)))


def support_check(m: EmpiricalTwoScaleMeasure, partition: PartitionSpec,
                  phase_sets: Sequence[MatrixSet], tol: float = 1e-6):
    """Mass sitting in matrix bins farther than ``tol`` from the local phase set."""
    _check_refines(m, partition)
    escaped = 0.0
    for iy, il, wgt in zip(m.y_index, m.lam_index, m.weights):
        lo, hi = m.y_rect(iy)
        k = partition.phase_of(0.5 * (lo + hi))
        if il[0] < 0:
            escaped += wgt
            continue
        blo, bhi = m.lam.box(il)
        if _box_distance(blo, bhi, phase_sets[k]) > tol:
            escaped += wgt
    return bool(escaped <= tol), float(escaped)


def distance_fraction(f: DisplacementField, partition: PartitionSpec,
                      phase_sets: Sequence[MatrixSet], tol: float) -> float:
    """Area fraction where the distance integrand exceeds ``tol``."""
    d = distance_integrand(f.cell_coordinates(), f.flat_gradients(), partition, phase_sets)
    return float(np.mean(d > tol))


def corrupt_field(f: DisplacementField, fraction: float, magnitude: float = 1.0,
                  seed: int = 0) -> tuple[DisplacementField, int]:
    """Bump the first displacement component at isolated nodes.

    Each bump of size ``magnitude * h`` changes the first gradient row by
    ``magnitude`` on the six triangles around the node; nodes are drawn from
    the even sublattice so their stars are disjoint.  Returns the field and the
    number of corrupted triangles.
    """
    rng = np.random.default_rng(seed)
    n_nodes = int(round(fraction * f.n_triangles / 6))
    cand = np.array([(i, j) for i in range(0, f.M - 1, 2) for j in range(0, f.M - 1, 2)])
    if n_nodes > len(cand):
        raise ValueError("fraction too large for disjoint node stars")
    pick = cand[rng.choice(len(cand), n_nodes, replace=False)]
    g = f.copy()
    g.w[pick[:, 0], pick[:, 1], 0] += magnitude * f.h
    return g, 6 * n_nodes


def _periodic_overlap(a, b, c, d, eps):
    """Length of ``{x in [a, b) : <x/eps> in [c, d)}``, exact for rational inputs."""

    def cum(s):
        return math.floor(s) * (d - c) + min(max(s - math.floor(s) - c, 0), d - c)

    return eps * (cum(b / eps) - cum(a / eps))


def riemann_lebesgue_check(U, V, eps_list):
    """``| int chi_U(x) chi_V(<x/eps>) dx - |U| |V| |`` for rectangles ``U``, ``V``."""
    (ua, ub), (uc, ud) = U
    (va, vb), (vc, vd) = V
    target = (ub - ua) * (ud - uc) * (vb - va) * (vd - vc)
    errs = []
    for eps in eps_list:
        val = _periodic_overlap(ua, ub, va, vb, eps) * _periodic_overlap(uc, ud, vc, vd, eps)
        errs.append(abs(val - target))
    return errs
