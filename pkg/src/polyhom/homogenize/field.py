"""Periodic-plus-affine P1 displacement fields on a crossed-diagonal grid.

A field lives on ``[0, k)^2`` with ``N`` grid intervals per unit length, so
``M = k N`` nodes per side.  The displacement is ``A x + w(x)`` with ``w``
periodic and stored at the nodes as an ``(M, M, 2)`` array indexed
``[i, j, component]`` (``i`` along x1).  Each grid square is split along its
main diagonal into a lower triangle ``(i,j), (i+1,j), (i+1,j+1)`` and an upper
triangle ``(i,j), (i+1,j+1), (i,j+1)``.  The material pattern has period
``eps`` and is read at ``<x / eps>``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ..mat2 import as_mat2
from ..sets import SHIFT_1, SHIFT_2


class AlignmentError(ValueError):
    """Grid does not resolve the phase pattern."""


class IncompatiblePairError(ValueError):
    """Matrices are not rank-one connected across interfaces of normal e1."""


def period_nodes(eps: float, N: int, k: int) -> int:
    """Grid intervals per period; checks the half period and the domain are resolved."""
    p = eps * N
    pn = int(round(p))
    if pn < 2 or abs(p - pn) > 1e-9 or pn % 2:
        raise AlignmentError(f"eps * N / 2 must be a positive integer (eps={eps}, N={N})")
    if (k * N) % pn:
        raise AlignmentError("domain must contain a whole number of periods")
    return pn


@dataclass
class DisplacementField:
    N: int
    k: int
    w: np.ndarray
    A: np.ndarray = field(default_factory=lambda: np.zeros((2, 2)))
    eps: float = 1.0

    def __post_init__(self):
        self.w = np.asarray(self.w, dtype=float)
        self.A = as_mat2(self.A)
        if self.w.shape != (self.M, self.M, 2):
            raise ValueError(f"nodal array must have shape {(self.M, self.M, 2)}")
        period_nodes(self.eps, self.N, self.k)

    @classmethod
    def zero(cls, N: int, k: int = 1, A=None, eps: float = 1.0) -> "DisplacementField":
        A = np.zeros((2, 2)) if A is None else A
        return cls(N, k, np.zeros((k * N, k * N, 2)), A, eps)

    @property
    def M(self) -> int:
        return self.k * self.N

    @property
    def h(self) -> float:
        return 1.0 / self.N

    @property
    def n_triangles(self) -> int:
        return 2 * self.M * self.M

    @property
    def triangle_area(self) -> float:
        return 0.5 * self.h * self.h

    def nodes(self) -> np.ndarray:
        i = np.arange(self.M) * self.h
        return np.stack(np.meshgrid(i, i, indexing="ij"), axis=-1)

    def displacement(self) -> np.ndarray:
        """Total nodal displacement ``A x + w``."""
        return self.nodes() @ self.A.T + self.w

    def gradients(self) -> np.ndarray:
        """Per-triangle gradients, shape ``(M, M, 2, 2, 2)`` = ``[i, j, tri, row, col]``."""
        return self.A + fluctuation_gradients(self.w, self.h)

    def flat_gradients(self) -> np.ndarray:
        return self.gradients().reshape(-1, 2, 2)

    def centroids(self) -> np.ndarray:
        """Triangle centroids, shape ``(M, M, 2, 2)`` = ``[i, j, tri, coord]``."""
        i = np.arange(self.M, dtype=float)
        ii, jj = np.meshgrid(i, i, indexing="ij")
        c = np.empty((self.M, self.M, 2, 2))
        c[:, :, 0, 0] = ii + 2.0 / 3.0
        c[:, :, 0, 1] = jj + 1.0 / 3.0
        c[:, :, 1, 0] = ii + 1.0 / 3.0
        c[:, :, 1, 1] = jj + 2.0 / 3.0
        return c * self.h

    def cell_coordinates(self) -> np.ndarray:
        """``<centroid / eps>`` for every triangle, flattened to ``(T, 2)``."""
        y = self.centroids().reshape(-1, 2) / self.eps
        return y - np.floor(y)

    def copy(self) -> "DisplacementField":
        return replace(self, w=self.w.copy(), A=self.A.copy())

    def tiled(self, times: int) -> "DisplacementField":
        """Same field viewed on ``times**2`` as many copies of the unit domain."""
        return DisplacementField(self.N, self.k * times, np.tile(self.w, (times, times, 1)), self.A.copy(), self.eps)

    def refined(self) -> "DisplacementField":
        """Exact red refinement (``N -> 2N``); every triangle keeps its gradient."""
        w = self.w
        M = self.M
        fine = np.empty((2 * M, 2 * M, 2))
        w_i = np.roll(w, -1, axis=0)
        w_j = np.roll(w, -1, axis=1)
        w_ij = np.roll(w_i, -1, axis=1)
        fine[0::2, 0::2] = w
        fine[1::2, 0::2] = 0.5 * (w + w_i)
        fine[0::2, 1::2] = 0.5 * (w + w_j)
        fine[1::2, 1::2] = 0.5 * (w + w_ij)
        return DisplacementField(2 * self.N, self.k, fine, self.A.copy(), self.eps)


def fluctuation_gradients(w: np.ndarray, h: float) -> np.ndarray:
    w_i = np.roll(w, -1, axis=0)
    w_j = np.roll(w, -1, axis=1)
    w_ij = np.roll(w_i, -1, axis=1)
    g = np.empty(w.shape[:2] + (2, 2, 2))
    g[:, :, 0, :, 0] = (w_i - w) / h
    g[:, :, 0, :, 1] = (w_ij - w_i) / h
    g[:, :, 1, :, 0] = (w_ij - w_j) / h
    g[:, :, 1, :, 1] = (w_j - w) / h
    return g


def fluctuation_gradients_adjoint(g: np.ndarray, h: float) -> np.ndarray:
    """Transpose of :func:`fluctuation_gradients`: nodal forces from per-triangle stresses."""
    a0 = g[:, :, 0, :, 0] / h
    b0 = g[:, :, 0, :, 1] / h
    a1 = g[:, :, 1, :, 0] / h
    b1 = g[:, :, 1, :, 1] / h
    out = -a0 - b1
    out += np.roll(a0 - b0, 1, axis=0)
    out += np.roll(b0 + a1, (1, 1), axis=(0, 1))
    out += np.roll(b1 - a1, 1, axis=1)
    return out


def _tent(pn: int, M: int) -> np.ndarray:
    """``|<x1 / eps> - 1/2|`` at node columns, computed from integer arithmetic."""
    r = np.arange(M) % pn
    return np.abs(r / pn - 0.5)


def laminate_field(m1, m2, eps: float, N: int, k: int = 1) -> DisplacementField:
    """Layered field with gradient ``m1`` where ``<x1/eps> < 1/2`` and ``m2`` elsewhere."""
    m1, m2 = as_mat2(m1), as_mat2(m2)
    jump = m1 - m2
    if np.max(np.abs(jump[:, 1])) > 1e-12:
        raise IncompatiblePairError("m1 - m2 must have zero second column")
    pn = period_nodes(eps, N, k)
    M = k * N
    a = jump[:, 0]
    tent = _tent(pn, M)
    w = np.zeros((M, M, 2))
    w += (-0.5 * eps * tent)[:, None, None] * a
    return DisplacementField(N, k, w, 0.5 * (m1 + m2), eps)


def shift_transform(f: DisplacementField, eps: float | None = None,
                    shift1=SHIFT_1, shift2=SHIFT_2) -> DisplacementField:
    """Subtract the laminate of ``(shift1, shift2)`` from ``f``.

    With the default shifts the first component loses
    ``(5/2) eps |<x1/eps> - 1/2| + x1/2`` and the second loses ``x2``, so the
    gradient drops by ``shift1`` on the first phase and ``shift2`` on the second.
    """
    eps = f.eps if eps is None else eps
    if abs(eps - f.eps) > 1e-12:
        raise AlignmentError("shift period must match the field's pattern period")
    lam = laminate_field(shift1, shift2, eps, f.N, f.k)
    return DisplacementField(f.N, f.k, f.w - lam.w, f.A - lam.A, f.eps)


# ---------------------------------------------------------------------------
# text serialisation: "N k" then one "i j u1 u2" line per node, i outer


def write_field(f: DisplacementField, path) -> None:
    """Write the periodic nodal displacement ``w`` (the affine part is not stored)."""
    lines = [f"{f.N} {f.k}"]
    for i in range(f.M):
        for j in range(f.M):
            u1, u2 = f.w[i, j]
            lines.append(f"{i} {j} {u1:.17g} {u2:.17g}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_field(path, A=None, eps: float = 1.0) -> DisplacementField:
    text = Path(path).read_text(encoding="utf-8").split("\n")
    try:
        N, k = (int(v) for v in text[0].split())
    except ValueError as exc:
        raise ValueError("bad field header; expected 'N k'") from exc
    M = N * k
    w = np.full((M, M, 2), math.nan)
    rows = [ln for ln in text[1:] if ln.strip()]
    if len(rows) != M * M:
        raise ValueError(f"expected {M * M} node lines, found {len(rows)}")
    for ln in rows:
        i, j, u1, u2 = ln.split()
        w[int(i), int(j)] = float(u1), float(u2)
    if np.isnan(w).any():
        raise ValueError("missing node lines")
    return DisplacementField(N, k, w, np.zeros((2, 2)) if A is None else A, eps)
