"""Polyconvex hulls of three-element matrix sets.

For a triple C = {C1, C2, C3} the polyconvex hull consists of the convex
combinations sum t_k C_k whose weights annihilate the quadratic form

    f(t) = sum_{k,j} t_k t_j det(C_k - C_j),

which equals ``2 sum_k t_k det C_k - 2 det(sum_k t_k C_k)`` on the simplex.
The set is polyconvex exactly when f has no zero on the simplex apart from
the vertices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .mat2 import MatrixSet, as_mat2, det, diag, frobenius
from .sets import B

SIMPLEX_TOL = 1e-9


class DegenerateTripleError(ValueError):
    """The three matrices are affinely dependent."""


@dataclass(frozen=True)
class HullCertificate:
    t: np.ndarray
    residual_affine: float
    residual_det: float


def _check_triple(tr: MatrixSet) -> MatrixSet:
    if not isinstance(tr, MatrixSet):
        tr = MatrixSet.of(tr)
    if len(tr) != 3:
        raise ValueError("a triple of matrices is required")
    return tr


def _affine_basis(tr: MatrixSet) -> np.ndarray:
    e = np.stack([(tr[1] - tr[0]).ravel(), (tr[2] - tr[0]).ravel()], axis=1)
    if np.linalg.matrix_rank(e, tol=1e-12 * max(1.0, np.abs(e).max())) < 2:
        raise DegenerateTripleError("triple is affinely dependent")
    return e


def pair_dets(tr: MatrixSet) -> np.ndarray:
    """Matrix of ``det(C_k - C_j)``; symmetric with zero diagonal."""
    tr = _check_triple(tr)
    return det(tr.mats[:, None] - tr.mats[None, :])


def _constraint(d: np.ndarray, t: np.ndarray) -> np.ndarray:
    return np.einsum("...k,kj,...j->...", t, d, t)


def pc_constraint(tr: MatrixSet, t) -> float:
    t = np.asarray(t, dtype=float)
    if t.shape != (3,):
        raise ValueError("three weights required")
    if np.any(t < -SIMPLEX_TOL) or abs(t.sum() - 1.0) > SIMPLEX_TOL:
        raise ValueError("weights must lie on the simplex")
    return float(_constraint(pair_dets(tr), t))


def det_defect(tr: MatrixSet, t) -> float:
    """``2 sum t_k det C_k - 2 det(sum t_k C_k)``, the closed form of the constraint."""
    tr = _check_triple(tr)
    t = np.asarray(t, dtype=float)
    mix = np.tensordot(t, tr.mats, axes=1)
    return float(2.0 * t @ det(tr.mats) - 2.0 * det(mix))


def hull_weights(tr: MatrixSet, m):
    """Affine coordinates of ``m`` in the plane of the triple.

    Returns ``(t, residual)`` where ``t`` sums to one and ``residual`` is the
    Frobenius distance from ``m`` to ``sum t_k C_k``.  For diagonal triples and
    diagonal ``m`` this is an exact 2x2 solve.
    """
    tr = _check_triple(tr)
    m = as_mat2(m)
    e = _affine_basis(tr)
    rhs = (m - tr[0]).ravel()
    st = np.linalg.lstsq(e, rhs, rcond=None)[0]
    t = np.array([1.0 - st.sum(), st[0], st[1]])
    residual = frobenius(np.tensordot(t, tr.mats, axes=1) - m)
    return t, residual


def pc_membership(tr: MatrixSet, m, tol: float = 1e-9) -> HullCertificate | None:
    """Certificate that ``m`` lies in the polyconvex hull of ``tr``, or ``None``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    tr = _check_triple(tr)
    t, _ = hull_weights(tr, m)
    if np.any(t < -tol):
        return None
    t = np.clip(t, 0.0, None)
    t /= t.sum()
    res_aff = frobenius(np.tensordot(t, tr.mats, axes=1) - as_mat2(m))
    res_det = abs(float(_constraint(pair_dets(tr), t)))
    if res_aff > tol or res_det > tol:
        return None
    return HullCertificate(t, res_aff, res_det)


def simplex_grid(step: float = 1e-3) -> np.ndarray:
    n = int(round(1.0 / step))
    i, j = np.triu_indices(n + 1)
    # pairs (i, j) with i <= j give t = (i, j - i, n - j) / n
    t = np.stack([i, j - i, n - j], axis=1).astype(float) / n
    return t


@dataclass(frozen=True)
class SimplexScan:
    n_points: int
    n_extra: int  # non-vertex combinations with |f| <= tol
    sign_change: bool  # f takes both strict signs away from the vertices
    f_min: float
    f_max: float

    @property
    def trivial_hull(self) -> bool:
        return self.n_extra == 0 and not self.sign_change


def simplex_scan(tr: MatrixSet, step: float = 1e-3, tol: float = 1e-9) -> SimplexScan:
    """Brute-force scan of the weight simplex for extra hull points."""
    tr = _check_triple(tr)
    _affine_basis(tr)
    t = simplex_grid(step)
    f = _constraint(pair_dets(tr), t)
    pts = np.tensordot(t, tr.mats, axes=1)
    to_vertex = np.sqrt(np.sum((pts[:, None] - tr.mats[None]) ** 2, axis=(-2, -1))).min(axis=1)
    off_vertex = to_vertex > tol
    extra = off_vertex & (np.abs(f) <= tol)
    fo = f[off_vertex]
    sign_change = bool(np.any(fo > tol) and np.any(fo < -tol))
    return SimplexScan(len(t), int(extra.sum()), sign_change, float(fo.min()), float(fo.max()))


def has_strict_sign(tr: MatrixSet) -> bool:
    d = pair_dets(tr)[np.triu_indices(3, 1)]
    return bool(np.all(d > 0) or np.all(d < 0))


def is_polyconvex_set(tr: MatrixSet, tol: float = 1e-9, step: float = 1e-3) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    tr = _check_triple(tr)
    _affine_basis(tr)
    if has_strict_sign(tr):
        return True
    return simplex_scan(tr, step, tol).trivial_hull


def b_arc(t: float) -> np.ndarray:
    """Point ``diag(b1(t), b2(t))`` of the curved part of the hull of B."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    r = math.sqrt(9.0 * t * t - 4.0 * t + 4.0)
    return diag((-3.0 * t + 2.0 + r) / 4.0, (3.0 * t + 2.0 + r) / 4.0)


def pc_hull_of_B(n_samples: int) -> MatrixSet:
    """B together with ``n_samples`` equally spaced interior arc points."""
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2")
    ts = [i / (n_samples + 1) for i in range(1, n_samples + 1)]
    mats = list(B.mats) + [b_arc(t) for t in ts]
    labels = list(B.labels) + [f"b({t:.6g})" for t in ts]
    return MatrixSet.of(mats, labels)
