# Centralizers of positive diagonal matrices, and the small 2x2 facts
# the automorphism classification leans on.
from totpos import RatMatrix, block_membership, centralizer_shape, in_centralizer
from totpos.structure import (
    dk_matrix,
    find_noncommuting_ck_pair,
    maximal_subgroup_witness,
    two_by_two_conjugation_test,
)
import random

D = RatMatrix.diag([2, 2, 3])
print("shape of C(diag(2,2,3)):", centralizer_shape(D).composition)

X = RatMatrix.from_rows([[1, 1, 0], [1, 2, 0], [0, 0, 3]])
Y = RatMatrix.from_rows([[1, 1, 1], [1, 2, 0], [0, 0, 3]])
for name, M in (("X", X), ("Y", Y)):
    print(f"{name}: block rule says {block_membership(D, M)}, commutation says {in_centralizer(D, M)}")

# D_k matrices isolate one 2x2 block
print("D_2 in dimension 4:", dk_matrix(4, 2).diagonal())

# the only invertible elements of ITN are positive diagonals: every other
# ITN matrix has an inverse with a negative entry
A = RatMatrix.from_rows([[2, 1], [1, 1]])
print("negative entry of A^-1 at", *maximal_subgroup_witness(A))

# which 2x2 matrices keep D A D^-1 in their centralizer?
for rows in ([[3, 2], [0, 3]], [[5, 0], [1, 5]], [[2, 1], [1, 1]]):
    print(rows, two_by_two_conjugation_test(RatMatrix.from_rows(rows)))

# the C_k semigroups commute exactly when their indices are two or more apart
rng = random.Random(0)
n = 5
for i in range(1, n):
    row = ["." if find_noncommuting_ck_pair(n, i, j, rng) is None else "x" for j in range(1, n)]
    print(f"C_{i}:", " ".join(row))
