"""
Two-scale measures of laminates
===============================

The empirical two-scale measure bins each triangle by its position in the
period cell and by its gradient.  An exact laminate keeps all mass on the
phase zero sets; bumping one percent of the nodes pushes mass out.  The
oscillating test functions average out at rate eps.
"""
from fractions import Fraction

from polyhom import sets
from polyhom.energies import LAMINATE_PARTITION
from polyhom.homogenize import (corrupt_field, distance_fraction, empirical_two_scale_measure,
                                laminate_field, riemann_lebesgue_check, support_check)

lam = laminate_field(sets.A1_1, sets.A2_1, eps=Fraction(1, 5), N=60)
m = empirical_two_scale_measure(lam, y_bins=4)
print("mass at A1_1 =", m.mass_at(sets.A1_1), " mass at A2_1 =", m.mass_at(sets.A2_1))

phase_sets = [sets.A1, sets.A2]
print("laminate:  pass, escaped =", support_check(m, LAMINATE_PARTITION, phase_sets))

bad, n = corrupt_field(lam, 0.01, seed=0)
mb = empirical_two_scale_measure(bad, y_bins=4)
print(f"corrupted ({n} of {bad.n_triangles} triangles): pass, escaped =",
      support_check(mb, LAMINATE_PARTITION, phase_sets))
print("area where the distance integrand exceeds 1e-6:", distance_fraction(bad, LAMINATE_PARTITION, phase_sets, 1e-6))

U = ((Fraction(0), Fraction(7, 10)), (Fraction(0), Fraction(1)))
V = ((Fraction(0), Fraction(1, 2)), (Fraction(0), Fraction(1)))
eps = [Fraction(1, 2**j) for j in range(1, 7)]
for e, err in zip(eps, riemann_lebesgue_check(U, V, eps)):
    print(f"eps = {str(e):5s} error = {str(err):6s} = {float(err):.5f}")
