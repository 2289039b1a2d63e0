"""Laminates, the discrete cell problem, two-scale diagnostics and membership certificates."""
from .field import (AlignmentError, DisplacementField, IncompatiblePairError, laminate_field, read_field,
                    shift_transform, write_field)
from .cell import (CellResult, DiscreteCellEnergy, SolverOptions, best_laminate_start, cell_problem_minimize,
                   field_energy, perturbed)
from .membership import (CertifyOptions, MembershipVerdict, Verdict, membership_certify, sverak_average,
                         sverak_exclusion_test)
from .twoscale import (EmpiricalTwoScaleMeasure, LambdaBins, corrupt_field, distance_fraction,
                       empirical_two_scale_measure, riemann_lebesgue_check, support_check)
