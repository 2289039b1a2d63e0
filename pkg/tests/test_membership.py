import numpy as np
import pytest

from polyhom.energies import counterexample_cell_energy
from polyhom.homogenize.cell import cell_problem_minimize, field_energy
from polyhom.homogenize.field import shift_transform
from polyhom.homogenize.membership import (CertifyOptions, Verdict, membership_certify,
                                           sverak_average, sverak_exclusion_test)
from polyhom.energies import sverak_V
from polyhom.hulls import b_arc
from polyhom.mat2 import diag
from polyhom.sets import B_1, B_2, O, SVERAK_SHIFT


def test_sverak_exclusion_examples():
    v = sverak_exclusion_test(b_arc(0.5))
    assert v.tag is Verdict.EXCLUDED and v.evidence["E11"] > 0 and v.evidence["detE"] > 0
    assert sverak_exclusion_test(B_1).tag is Verdict.UNKNOWN
    assert sverak_exclusion_test(O).tag is Verdict.UNKNOWN


def test_certify_examples(ce4):
    v = membership_certify(B_2, ce4)
    assert v.tag is Verdict.MEMBER and v.route == "laminate"
    assert field_energy(ce4, v.witness) <= 1e-8
    assert membership_certify(O, ce4).route == "constant"
    assert membership_certify(b_arc(0.3), ce4).tag is Verdict.EXCLUDED


def test_certify_far_matrix_unknown(ce4):
    A = diag(10, 10)
    # the exclusion test already rules this matrix out
    assert membership_certify(A, ce4).tag is Verdict.EXCLUDED
    v = membership_certify(A, ce4, strategy=("construction", "solver"), opts=CertifyOptions(N=8))
    assert v.tag is Verdict.UNKNOWN and v.evidence["energy"] > 1e3
    with pytest.raises(ValueError):
        membership_certify(A, ce4, strategy=("oracle",))


def test_convex_variant_certificates():
    ce = counterexample_cell_energy(4, "convex-phase2")
    for A in (O, B_1, B_2):
        assert membership_certify(A, ce).tag is Verdict.MEMBER


@pytest.mark.parametrize("t", [0.3, 0.5, 0.7])
def test_sverak_consistency_on_minimisers(ce4, t):
    A = b_arc(t)
    r = cell_problem_minimize(ce4, A, 8, 1)
    v = shift_transform(r.minimizer)
    assert sverak_average(v) >= sverak_V(A - SVERAK_SHIFT) - 1e-9
