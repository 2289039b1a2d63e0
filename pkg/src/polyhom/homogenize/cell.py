"""Discretised periodic cell problem for the homogenised integrand.

The estimate at a macroscopic gradient ``A`` is the minimum over periodic P1
fluctuations ``w`` on ``k x k`` unit cells of the area-averaged energy

    E(w) = (1 / k^2) sum_T |T| W(<c_T>, A + grad w|_T).

Since the phase boundaries lie on grid lines, no triangle straddles phases.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from ..energies import CellEnergy
from ..mat2 import as_mat2
from .field import DisplacementField, fluctuation_gradients, fluctuation_gradients_adjoint, laminate_field

log = logging.getLogger(__name__)

CHUNK = 4096


class DiscreteCellEnergy:
    """Energy and gradient of the discrete cell functional for fixed grid and ``A``."""

    def __init__(self, ce: CellEnergy, A, N: int, k: int = 1, eps: float = 1.0, threads: int = 1):
        self.ce = ce
        self.A = as_mat2(A)
        self.N, self.k, self.eps = N, k, eps
        self.template = DisplacementField.zero(N, k, self.A, eps)
        self.phase = ce.partition.phase_of(self.template.cell_coordinates())
        self.threads = max(1, int(threads))
        self.n_evals = 0

    @property
    def shape(self):
        return self.template.w.shape

    def field(self, w) -> DisplacementField:
        return DisplacementField(self.N, self.k, np.asarray(w, dtype=float).reshape(self.shape).copy(),
                                 self.A.copy(), self.eps)

    def _pointwise(self, F):
        # Fixed chunking keeps results independent of the thread count.
        n = len(F)
        bounds = [(s, min(s + CHUNK, n)) for s in range(0, n, CHUNK)]
        val = np.empty(n)
        grad = np.empty_like(F)

        def work(b):
            s, e = b
            val[s:e], grad[s:e] = self.ce.value_and_grad(self.phase[s:e], F[s:e])

        if self.threads > 1 and len(bounds) > 1:
            with ThreadPoolExecutor(self.threads) as ex:
                list(ex.map(work, bounds))
        else:
            for b in bounds:
                work(b)
        return val, grad

    def value_and_grad(self, w):
        w = np.asarray(w, dtype=float).reshape(self.shape)
        h = 1.0 / self.N
        F = (self.A + fluctuation_gradients(w, h)).reshape(-1, 2, 2)
        val, g = self._pointwise(F)
        T = len(F)
        self.n_evals += 1
        energy = float(np.sum(val)) / T
        gw = fluctuation_gradients_adjoint((g / T).reshape(w.shape[:2] + (2, 2, 2)), h)
        return energy, gw.ravel()

    def energy(self, w) -> float:
        return self.value_and_grad(w)[0]

    def phase_energies(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=float).reshape(self.shape)
        F = (self.A + fluctuation_gradients(w, 1.0 / self.N)).reshape(-1, 2, 2)
        return self._pointwise(F)[0]


def field_energy(ce: CellEnergy, f: DisplacementField) -> float:
    """Area-averaged cell energy of ``f``, reading phases at ``<x / f.eps>``."""
    F = f.flat_gradients()
    phase = ce.partition.phase_of(f.cell_coordinates())
    val, _ = ce.value_and_grad(phase, F)
    return float(np.mean(val))


@dataclass
class SolverOptions:
    method: str = "lbfgs"  # or "gd"
    max_iter: int = 100_000
    gtol: float = 1e-9
    ftol: float = 1e-15
    armijo: float = 1e-4
    shrink: float = 0.5
    memory: int = 20
    threads: int = 1


@dataclass
class CellResult:
    estimate: float
    minimizer: DisplacementField
    iterations: int
    converged: bool
    initial_energy: float
    message: str = ""
    grad_inf: float = math.nan
    history: list = field(default_factory=list, repr=False)

    @property
    def flagged(self) -> bool:
        return not self.converged


def _gradient_descent(fun, x0, opts: SolverOptions):
    x = x0.copy()
    e, g = fun(x)
    step = 1.0
    history = [e]
    for it in range(1, opts.max_iter + 1):
        gn = float(np.max(np.abs(g)))
        if gn <= opts.gtol:
            return x, e, g, it - 1, True, "gradient tolerance reached", history
        g2 = float(g @ g)
        step *= 2.0
        while True:
            xn = x - step * g
            en, gnew = fun(xn)
            if en <= e - opts.armijo * step * g2:
                break
            step *= opts.shrink
            if step < 1e-300:
                return x, e, g, it, True, "line search stalled", history
        x, g = xn, gnew
        if abs(e - en) <= opts.ftol * max(1.0, abs(e)):
            e = en
            history.append(e)
            return x, e, g, it, True, "energy decrease below ftol", history
        e = en
        history.append(e)
    return x, e, g, opts.max_iter, False, "maximum iterations reached", history


def cell_problem_minimize(ce: CellEnergy, A, N: int, k: int = 1,
                          opts: SolverOptions | None = None,
                          initial: DisplacementField | None = None) -> CellResult:
    """Minimise the discrete cell energy at macroscopic gradient ``A``.

    ``initial`` defaults to the zero fluctuation; a provided field must live
    on the same grid (its own mean gradient is ignored).
    """
    opts = opts or SolverOptions()
    if N < 4 or N % 2:
        raise ValueError("N must be even and at least 4")
    if k < 1:
        raise ValueError("k must be positive")
    prob = DiscreteCellEnergy(ce, A, N, k, 1.0, opts.threads)
    if initial is None:
        x0 = np.zeros(int(np.prod(prob.shape)))
    else:
        if initial.w.shape != prob.shape or initial.N != N:
            raise ValueError("initial field lives on a different grid")
        x0 = initial.w.ravel().copy()
    e0, _ = prob.value_and_grad(x0)

    if opts.method == "gd":
        x, e, g, its, ok, msg, hist = _gradient_descent(prob.value_and_grad, x0, opts)
    elif opts.method == "lbfgs":
        hist = [e0]
        res = optimize.minimize(
            prob.value_and_grad, x0, jac=True, method="L-BFGS-B",
            options={"maxiter": opts.max_iter, "gtol": opts.gtol, "ftol": opts.ftol,
                     "maxcor": opts.memory, "maxfun": 10 * opts.max_iter},
        )
        x, e = res.x, float(res.fun)
        g = res.jac
        its = int(res.nit)
        ok = its < opts.max_iter
        msg = str(res.message)
        hist.append(e)
    else:
        raise ValueError(f"unknown method {opts.method!r}")

    if e > e0:  # never report worse than the start
        x, e = x0, e0
    e = max(e, 0.0)
    log.debug("cell problem N=%d k=%d: E0=%.3e E=%.6e its=%d (%s)", N, k, e0, e, its, msg)
    return CellResult(e, prob.field(x), its, ok, e0, msg, float(np.max(np.abs(g))), hist)


def best_laminate_start(ce: CellEnergy, A, N: int, k: int = 1) -> DisplacementField:
    """Period-one laminate with mean ``A`` and layer gradients ``A +/- a (x) e1 / 2``.

    The jump vector ``a`` is chosen to minimise the average phase energy.
    """
    A = as_mat2(A)

    def cost(a):
        d = np.array([[a[0], 0.0], [a[1], 0.0]]) / 2.0
        return 0.5 * (ce.phases[0](A + d) + ce.phases[1](A - d))

    starts = [np.array([s, 0.0]) for s in np.linspace(-8.0, 8.0, 33)]
    best = min(starts, key=cost)
    res = optimize.minimize(cost, best, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-14})
    a = res.x if cost(res.x) < cost(best) else best
    d = np.array([[a[0], 0.0], [a[1], 0.0]]) / 2.0
    return laminate_field(A + d, A - d, 1.0, N, k)


def perturbed(f: DisplacementField, scale: float, seed: int) -> DisplacementField:
    rng = np.random.default_rng(seed)
    g = f.copy()
    g.w = g.w + scale * f.h * rng.standard_normal(g.w.shape)
    return g
