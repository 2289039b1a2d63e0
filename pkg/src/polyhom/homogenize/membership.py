"""Certificates for membership in, or exclusion from, the homogenised zero set."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..energies import CellEnergy, counterexample_cell_energy, sverak_V
from ..mat2 import as_mat2, frobenius, is_positive_definite, pd_margins
from ..sets import SVERAK_SHIFT
from .cell import SolverOptions, cell_problem_minimize, field_energy
from .field import DisplacementField, laminate_field


class Verdict(str, Enum):
    MEMBER = "CertifiedMember"
    EXCLUDED = "ExcludedBySverak"
    UNKNOWN = "Unknown"


@dataclass
class MembershipVerdict:
    tag: Verdict
    witness: object = None
    evidence: dict = field(default_factory=dict)
    route: str = ""


def sverak_exclusion_test(A, shift=SVERAK_SHIFT, tol: float = 1e-12) -> MembershipVerdict:
    """``A - shift`` positive definite rules ``A`` out of the homogenised set."""
    A = as_mat2(A)
    c = A - shift
    e11, de = pd_margins(c)
    ev = {"E11": float(e11), "detE": float(de)}
    if is_positive_definite(c, tol):
        return MembershipVerdict(Verdict.EXCLUDED, c, ev, "sverak")
    return MembershipVerdict(Verdict.UNKNOWN, None, ev, "sverak")


def sverak_average(f: DisplacementField) -> float:
    """Area average of the Sverak function over the triangle gradients of ``f``."""
    return float(np.mean(sverak_V(f.flat_gradients())))


@dataclass
class CertifyOptions:
    N: int = 16
    k: int = 1
    zero_tol: float = 1e-8
    solver: SolverOptions = field(default_factory=SolverOptions)


def _constructions(A, ce: CellEnergy, opts: CertifyOptions):
    """Explicit candidate fields: the constant field and midpoint laminates of zero-set points."""
    yield "constant", DisplacementField.zero(opts.N, opts.k, A)
    z1, z2 = (s.mats for s in ce.zero_sets()[:2])
    for m1, m2 in itertools.product(z1, z2):
        if np.max(np.abs((m1 - m2)[:, 1])) > 1e-12:
            continue
        if frobenius(0.5 * (m1 + m2) - A) > 1e-12:
            continue
        yield "laminate", laminate_field(m1, m2, 1.0, opts.N, opts.k)


def membership_certify(A, ce: CellEnergy | None = None,
                       strategy=("sverak", "construction", "solver"),
                       opts: CertifyOptions | None = None, shift=SVERAK_SHIFT) -> MembershipVerdict:
    """Run the exclusion test, explicit constructions and the cell solver in ``strategy`` order."""
    A = as_mat2(A)
    ce = ce or counterexample_cell_energy()
    opts = opts or CertifyOptions()
    evidence = {}
    for route in strategy:
        if route == "sverak":
            v = sverak_exclusion_test(A, shift)
            if v.tag is Verdict.EXCLUDED:
                return v
            evidence.update(v.evidence)
        elif route == "construction":
            for name, f in _constructions(A, ce, opts):
                e = field_energy(ce, f)
                if e <= opts.zero_tol:
                    return MembershipVerdict(Verdict.MEMBER, f, {**evidence, "energy": e}, name)
        elif route == "solver":
            res = cell_problem_minimize(ce, A, opts.N, opts.k, opts.solver)
            evidence.update(energy=res.estimate, iterations=res.iterations, converged=res.converged)
            if res.estimate <= opts.zero_tol:
                return MembershipVerdict(Verdict.MEMBER, res.minimizer, evidence, "solver")
        else:
            raise ValueError(f"unknown strategy step {route!r}")
    return MembershipVerdict(Verdict.UNKNOWN, None, evidence, "")
