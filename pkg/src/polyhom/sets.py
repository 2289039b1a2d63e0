"""The two-phase laminate data: phase zero-sets, their averages and the cell partition."""
from .mat2 import MatrixSet, diag

O = diag(0.0, 0.0)
A1_1 = diag(-0.5, 1.0)
A1_2 = diag(-2.0, 2.0)
A2_1 = diag(2.5, 1.0)
A2_2 = diag(3.0, 2.0)
B_1 = 0.5 * (A1_1 + A2_1)  # identity
B_2 = 0.5 * (A1_2 + A2_2)  # diag(1/2, 2)

A1 = MatrixSet.of([O, A1_1, A1_2], ["O", "A1_1", "A1_2"])
A2 = MatrixSet.of([O, A2_1, A2_2], ["O", "A2_1", "A2_2"])
B = MatrixSet.of([O, B_1, B_2], ["O", "B_1", "B_2"])

# A1 - SHIFT_1 and A2 - SHIFT_2 contain no positive definite matrix;
# SVERAK_SHIFT is their average.
SHIFT_1 = diag(-2.0, 1.0)
SHIFT_2 = diag(3.0, 1.0)
SVERAK_SHIFT = diag(0.5, 1.0)

# P1 = [0, 1/2) x [0, 1), P2 = [1/2, 1) x [0, 1)
P1_RECT = ((0.0, 0.5), (0.0, 1.0))
P2_RECT = ((0.5, 1.0), (0.0, 1.0))

__all__ = [
    "O", "A1_1", "A1_2", "A2_1", "A2_2", "B_1", "B_2", "A1", "A2", "B",
    "SHIFT_1", "SHIFT_2", "SVERAK_SHIFT", "P1_RECT", "P2_RECT",
]
