"""
The discrete cell problem on the arc
====================================

The homogenised energy at ``A`` is estimated by minimising the averaged
energy over periodic P1 fluctuations on ``k x k`` cells.  At the arc point
``b_arc(1/2)`` the estimate stays positive under refinement and under
enlarging the period, while it vanishes at the points of B.
"""
import time

from polyhom import sets
from polyhom.energies import counterexample_cell_energy, sverak_V
from polyhom.homogenize import (best_laminate_start, cell_problem_minimize, shift_transform,
                                sverak_average)
from polyhom.hulls import b_arc

ce = counterexample_cell_energy(p=4)
A = b_arc(0.5)

print(" N  k  estimate            iterations  time")
prev = None
for N in (8, 16, 32):
    for k in (1, 2):
        init = prev.minimizer.tiled(2) if k == 2 else None
        t0 = time.perf_counter()
        r = cell_problem_minimize(ce, A, N, k, initial=init)
        print(f"{N:2d}  {k}  {r.estimate:.15f}  {r.iterations:10d}  {time.perf_counter() - t0:.2f}s")
        prev = r

# the minimiser is a layered field; compare with the best period-one laminate
lam = best_laminate_start(ce, A, 16)
print("\nbest laminate energy", cell_problem_minimize(ce, A, 16, initial=lam).initial_energy)

# the analogue of Sverak's inequality on the shifted minimiser
v = shift_transform(prev.minimizer)
print("mean V on shifted minimiser = %.4f >= V(A - diag(1/2,1)) = %.4f"
      % (sverak_average(v), sverak_V(A - sets.SVERAK_SHIFT)))

for label, m in (("B1", sets.B_1), ("B2", sets.B_2), ("O", sets.O)):
    print(f"estimate at {label}: {cell_problem_minimize(ce, m, 16).estimate:.1e}")
