"""
Homogenisation destroys polyconvexity
=====================================

Two polyconvex phases are layered in the unit cell.  Exact laminates show
that every point of B lies in the homogenised zero set.  The arc of the
polyconvex hull of B is ruled out: ``A - diag(1/2, 1)`` is positive
definite there, and no sequence in the zero sets can reach such an A.
So the homogenised zero set contains B but not its polyconvex hull.
"""
from polyhom import sets
from polyhom.energies import counterexample_cell_energy
from polyhom.homogenize import field_energy, laminate_field, membership_certify
from polyhom.hulls import b_arc

ce = counterexample_cell_energy(p=4)

# B1 = (A1_1 + A2_1)/2 and B2 = (A1_2 + A2_2)/2: rank-one connected across x1 = 1/2
for m1, m2 in ((sets.A1_1, sets.A2_1), (sets.A1_2, sets.A2_2)):
    f = laminate_field(m1, m2, eps=1 / 4, N=16)
    print("laminate with mean", f.A.diagonal(), "has cell energy", field_energy(ce, f))

print()
for label, A in [("O", sets.O), ("B1", sets.B_1), ("B2", sets.B_2)] + [(f"arc({t})", b_arc(t)) for t in (0.1, 0.5, 0.9)]:
    v = membership_certify(A, ce)
    print(f"{label:9s} {v.tag.value:18s} via {v.route}")

# the closing remark: a convex second phase gives the same picture
ce_convex = counterexample_cell_energy(p=4, variant="convex-phase2")
print("\nconvex phase 2:", [membership_certify(A, ce_convex).tag.value for A in (sets.B_1, sets.B_2, b_arc(0.5))])
