"""Polyconvexity and periodic homogenization of two-phase 2x2 laminates."""
from .mat2 import (MatrixSet, as_mat2, det, diag, dist_to_set, is_positive_definite, minors,
                   project_convex_hull, sym_part)
from .hulls import b_arc, is_polyconvex_set, pc_constraint, pc_hull_of_B, pc_membership
from .energies import (CellEnergy, EnergyDensity, PartitionSpec, build_zero_set_energy, cell_energy_eval,
                       coercivity_check, convex_variant_energy, counterexample_cell_energy,
                       distance_integrand, sverak_V)

__version__ = "0.1.0"
