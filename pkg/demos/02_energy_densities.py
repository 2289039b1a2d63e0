"""
Energies with prescribed zero sets
==================================

``max(dist^p(F, conv A), dist^(p/2)(minors F, conv minors A))`` is
polyconvex and vanishes exactly on the polyconvex hull of A.  For the
polyconvex phase sets that hull is A itself.
"""
import numpy as np

from polyhom import sets
from polyhom.energies import build_zero_set_energy, coercivity_check, sverak_V
from polyhom.hulls import b_arc
from polyhom.mat2 import diag

W1 = build_zero_set_energy(sets.A1, p=4)
for label, m in zip(sets.A1.labels, sets.A1.mats):
    print(f"W1({label}) = {W1(m)}")
print("W1(I)   =", W1(np.eye(2)))

# a diagonal slice: zero only at the three points of A1
x = np.linspace(-3, 1, 9)
vals = W1(np.array([diag(a, 1.0) for a in x]))
print("\nW1(diag(a, 1)) for a in", x)
print(np.array2string(vals, precision=3))

# for B the same construction vanishes on the arc as well
WB = build_zero_set_energy(sets.B, p=4)
print("\nW_B(b_arc(1/2)) =", WB(b_arc(0.5)))

# growth constants certified on a ball of radius 10
print("\nc1, c2, c3 =", coercivity_check(W1, radius=10.0, grid_n=30))

# the Sverak function: det of the symmetric part on the positive definite cone
for m in (np.eye(2), diag(-1, 1), diag(2, 3), np.array([[1.0, 3.0], [-3.0, 1.0]])):
    print("V(%s) = %g" % (m.tolist(), sverak_V(m)))
