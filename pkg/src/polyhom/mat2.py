"""Small-matrix primitives for 2x2 gradients.

Matrices are plain ``numpy`` arrays of shape ``(2, 2)``; most functions also
accept stacks of shape ``(..., 2, 2)``.  The convex-hull projection works on
points of R^n (n = 4 for flattened matrices, n = 5 for minors vectors).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

DUPLICATE_TOL = 1e-12


def as_mat2(m) -> np.ndarray:
    """Return ``m`` as a float (2, 2) array, rejecting non-finite entries."""
    a = np.asarray(m, dtype=float)
    if a.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def diag(a: float, b: float) -> np.ndarray:
    return np.array([[a, 0.0], [0.0, b]], dtype=float)


def det(m) -> np.ndarray | float:
    m = np.asarray(m, dtype=float)
    d = m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]
    return float(d) if d.ndim == 0 else d


def cofactor(m) -> np.ndarray:
    """Gradient of ``det`` with respect to the matrix entries."""
    m = np.asarray(m, dtype=float)
    c = np.empty_like(m)
    c[..., 0, 0] = m[..., 1, 1]
    c[..., 0, 1] = -m[..., 1, 0]
    c[..., 1, 0] = -m[..., 0, 1]
    c[..., 1, 1] = m[..., 0, 0]
    return c


def minors(m) -> np.ndarray:
    """Minors vector ``(a11, a12, a21, a22, det)``; shape ``(..., 5)``."""
    m = np.asarray(m, dtype=float)
    out = np.empty(m.shape[:-2] + (5,))
    out[..., :4] = m.reshape(m.shape[:-2] + (4,))
    out[..., 4] = det(m)
    return out


def sym_part(m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    return 0.5 * (m + np.swapaxes(m, -1, -2))


def pd_margins(m) -> tuple:
    """Sylvester quantities ``(E11, det E)`` of the symmetric part ``E``."""
    e = sym_part(m)
    return e[..., 0, 0], det(e)


def is_positive_definite(m, tol: float = 0.0):
    """Positive definiteness of the quadratic form ``x . m x``.

    Decided on the symmetric part by Sylvester's criterion, with both leading
    minors required to exceed ``tol``.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    e11, de = pd_margins(m)
    res = (e11 > tol) & (de > tol)
    return bool(res) if np.ndim(res) == 0 else res


def frobenius(m) -> np.ndarray | float:
    m = np.asarray(m, dtype=float)
    r = np.sqrt(np.sum(m * m, axis=(-2, -1)))
    return float(r) if r.ndim == 0 else r


@dataclass(frozen=True)
class MatrixSet:
    """Finite, duplicate-free, ordered set of 2x2 matrices."""

    mats: np.ndarray
    labels: tuple = field(default=())

    def __post_init__(self):
        mats = np.asarray(self.mats, dtype=float)
        if mats.ndim != 3 or mats.shape[1:] != (2, 2):
            raise ValueError("MatrixSet expects an array of shape (n, 2, 2)")
        if len(mats) == 0:
            raise ValueError("MatrixSet must be nonempty")
        if not np.all(np.isfinite(mats)):
            raise ValueError("matrix entries must be finite")
        for i, j in itertools.combinations(range(len(mats)), 2):
            if frobenius(mats[i] - mats[j]) <= DUPLICATE_TOL:
                raise ValueError(f"duplicate matrices at positions {i} and {j}")
        labels = tuple(self.labels) if self.labels else tuple(f"M{i}" for i in range(len(mats)))
        if len(labels) != len(mats):
            raise ValueError("one label per matrix required")
        mats.setflags(write=False)
        object.__setattr__(self, "mats", mats)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def of(cls, items: Iterable, labels: Sequence[str] = ()) -> "MatrixSet":
        return cls(np.array([as_mat2(m) for m in items]), tuple(labels))

    def __len__(self):
        return len(self.mats)

    def __iter__(self):
        return iter(self.mats)

    def __getitem__(self, i):
        return self.mats[i]

    def flat(self) -> np.ndarray:
        return self.mats.reshape(len(self), 4)

    def minors(self) -> np.ndarray:
        return minors(self.mats)

    def contains(self, m, tol: float = DUPLICATE_TOL) -> bool:
        return dist_to_set(m, self) <= tol


def dist_to_set(m, s: MatrixSet):
    """Frobenius distance from ``m`` (or a stack of matrices) to a finite set."""
    m = np.asarray(m, dtype=float)
    diff = m[..., None, :, :] - s.mats
    d = np.sqrt(np.sum(diff * diff, axis=(-2, -1))).min(axis=-1)
    return float(d) if d.ndim == 0 else d


# ---------------------------------------------------------------------------
# Nearest point in the convex hull of a finite point set


class HullProjector:
    """Exact Euclidean projection onto ``conv(generators)`` by face enumeration.

    Every affinely independent subset of the generators is a candidate face;
    the projection onto its affine hull is feasible when all barycentric
    coordinates are nonnegative.  The nearest point of the hull is the closest
    feasible candidate.  Face data are precomputed once, so evaluating many
    points is a handful of vectorised matrix products.
    """

    FEAS_TOL = 1e-12

    def __init__(self, generators):
        g = np.atleast_2d(np.asarray(generators, dtype=float))
        if g.size == 0 or len(g) == 0:
            raise ValueError("empty generator list")
        self._mat = g.ndim == 3
        g = g.reshape(len(g), -1)
        if not np.all(np.isfinite(g)):
            raise ValueError("generators must be finite")
        self.generators = g
        n_gen, dim = g.shape
        scale = max(1.0, float(np.abs(g).max()))
        self._faces = []
        for size in range(1, min(n_gen, dim + 1) + 1):
            for idx in itertools.combinations(range(n_gen), size):
                v0 = g[idx[0]]
                if size == 1:
                    self._faces.append((idx, v0, None, None))
                    continue
                e = g[list(idx[1:])] - v0
                gram = e @ e.T
                if np.linalg.matrix_rank(gram, tol=1e-10 * scale**2) < size - 1:
                    continue
                # weights w = (x - v0) @ coef, projection = v0 + w @ e
                coef = e.T @ np.linalg.inv(gram)
                self._faces.append((idx, v0, coef, e))

    def project(self, points):
        """Return ``(distance, weights, nearest)`` for one point or a stack.

        ``weights`` has one column per generator.  Matrix generators take
        matrix points and return matrix nearest points.
        """
        x = np.asarray(points, dtype=float)
        if self._mat:
            single = x.ndim == 2
            x = x.reshape(-1, self.generators.shape[1])
        else:
            single = x.ndim == 1
            x = np.atleast_2d(x)
        n_pts = len(x)
        n_gen = len(self.generators)
        best_d2 = np.full(n_pts, np.inf)
        best_w = np.zeros((n_pts, n_gen))
        best_p = np.zeros_like(x)
        for idx, v0, coef, e in self._faces:
            d = x - v0
            if coef is None:
                proj = np.broadcast_to(v0, x.shape)
                bary = np.ones((n_pts, 1))
                feasible = np.ones(n_pts, dtype=bool)
            else:
                w = d @ coef
                bary = np.concatenate([1.0 - w.sum(axis=1, keepdims=True), w], axis=1)
                feasible = np.all(bary >= -self.FEAS_TOL, axis=1)
                proj = v0 + w @ e
            r = x - proj
            d2 = np.einsum("ij,ij->i", r, r)
            better = feasible & (d2 < best_d2)
            if np.any(better):
                best_d2[better] = d2[better]
                best_p[better] = proj[better]
                best_w[better] = 0.0
                best_w[np.ix_(better, list(idx))] = np.clip(bary[better], 0.0, None)
        best_w /= best_w.sum(axis=1, keepdims=True)
        dist = np.sqrt(best_d2)
        if self._mat:
            best_p = best_p.reshape(-1, 2, 2)
        if single:
            return float(dist[0]), best_w[0], best_p[0]
        return dist, best_w, best_p


def min_norm_point(points, tol: float = 1e-15, max_iter: int = 500):
    """Wolfe's algorithm: barycentric weights of the min-norm point of ``conv(points)``."""
    q = np.asarray(points, dtype=float)
    n = len(q)
    scale = max(1.0, float(np.max(np.sum(q * q, axis=1))))
    s = [int(np.argmin(np.sum(q * q, axis=1)))]
    w = np.array([1.0])
    for _ in range(max_iter):
        y = w @ q[s]
        j = int(np.argmin(q @ y))
        if y @ y - q[j] @ y <= tol * scale or j in s:
            break
        s.append(j)
        w = np.append(w, 0.0)
        while True:
            qs = q[s]
            k = len(s)
            kkt = np.zeros((k + 1, k + 1))
            kkt[:k, :k] = qs @ qs.T
            kkt[:k, k] = 1.0
            kkt[k, :k] = 1.0
            rhs = np.zeros(k + 1)
            rhs[k] = 1.0
            lam = np.linalg.lstsq(kkt, rhs, rcond=None)[0][:k]
            if np.all(lam > 1e-14):
                w = lam
                break
            neg = lam <= 1e-14
            theta = np.min(w[neg] / (w[neg] - lam[neg]))
            w = w + theta * (lam - w)
            keep = w > 1e-14
            s = [si for si, kp in zip(s, keep) if kp]
            w = w[keep]
    out = np.zeros(n)
    out[s] = w
    return out / out.sum()


def project_convex_hull(p, generators, method: str = "auto"):
    """Distance from ``p`` to ``conv(generators)`` and attaining barycentric weights.

    ``method`` is ``"faces"`` (exact enumeration), ``"wolfe"`` (active-set
    iteration) or ``"auto"``, which enumerates faces for up to four generators.
    """
    g = np.atleast_2d(np.asarray(generators, dtype=float))
    p = np.asarray(p, dtype=float)
    if g.size == 0:
        raise ValueError("empty generator list")
    g = g.reshape(len(g), -1)
    p = p.ravel()
    if len(g) > 8:
        raise ValueError("at most 8 generators supported")
    if g.shape[1] != p.shape[-1]:
        raise ValueError("point and generators differ in dimension")
    if method == "auto":
        method = "faces" if len(g) <= 4 else "wolfe"
    if method == "faces":
        dist, w, _ = HullProjector(g).project(p)
        return dist, w
    if method == "wolfe":
        w = min_norm_point(g - p)
        return float(np.linalg.norm(w @ g - p)), w
    raise ValueError(f"unknown method {method!r}")
