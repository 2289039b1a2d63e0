"""
Polyconvex hulls of three diagonal matrices
===========================================

A triple of 2x2 matrices is polyconvex when the quadratic form
``f(t) = sum t_k t_j det(C_k - C_j)`` has no zero on the weight simplex
except at the vertices.  The two phase sets pass the test; their average B
does not, and its hull picks up a curved arc.
"""
import numpy as np

from polyhom import sets
from polyhom.hulls import b_arc, is_polyconvex_set, pair_dets, pc_membership, simplex_scan

# pairwise determinants: one strict sign is already a certificate
for name, tr in (("A1", sets.A1), ("A2", sets.A2), ("B", sets.B)):
    d = pair_dets(tr)[np.triu_indices(3, 1)]
    print(f"{name}: det(C_k - C_j) = {d}, polyconvex = {is_polyconvex_set(tr)}")

# the brute force scan finds the sign change for B
scan = simplex_scan(sets.B, step=1e-3)
print("B: f ranges over [%.3f, %.3f] on the simplex" % (scan.f_min, scan.f_max))

# points of the arc are certified members of the hull of B;
# the weight on diag(1/2, 2) is the arc parameter itself
print("\n   t      b1        b2       t3      residual")
for t in (0.1, 0.3, 0.5, 0.7, 0.9):
    m = b_arc(t)
    c = pc_membership(sets.B, m)
    print(f"{t:4.1f}  {m[0, 0]:.6f}  {m[1, 1]:.6f}  {c.t[2]:.6f}  {max(c.residual_affine, c.residual_det):.1e}")

# the midpoint of two A1 matrices is not in the hull of A1
print("\n(A1_1 + A1_2)/2 accepted:", pc_membership(sets.A1, 0.5 * (sets.A1_1 + sets.A1_2)) is not None)
