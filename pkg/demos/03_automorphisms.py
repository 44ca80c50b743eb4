# Automorphisms of the ITN semigroup: apply one, check it, then recover it
# from what it does to a handful of generators.
from fractions import Fraction

from totpos import AutomorphismSpec, RatMatrix, apply, recover, tabulate, verify_homomorphism
from totpos.factor import random_itn

# T(A) = det(A)^(c - 1/n) * R A R^-1 with R antidiagonal
spec = AutomorphismSpec(3, "antidiagonal", (Fraction(1), Fraction(2), Fraction(5, 3)), Fraction(2, 3))

A = random_itn(3, seed=1)
TA = apply(spec, A)
print("A =")
print(A)
print("det A =", A.det())
print("T(A) = scale * body with scale", TA.scale, "and body")
print(TA.body)

# the scale is usually irrational, but products stay exact
B = random_itn(3, seed=2)
assert apply(spec, A @ B) == apply(spec, A) @ apply(spec, B)
print("T(AB) == T(A) T(B) exactly")

report = verify_homomorphism(spec, trials=50, seed=7)
print("50 random pairs:", "pass" if report.passed else report.counterexample)

# the images of the generators pin the map down
table = tabulate(spec)
for item, image in table.entries[:4]:
    print(f"  {item.kind} k={getattr(item, 'k', '-')}  ->  scale {image.scale}, body row sums",
          [str(sum(image.body.row(i))) for i in range(3)])
got = recover(table)
print("recovered:", got.orientation, [str(x) for x in got.r], "c =", got.mu_exponent)
assert got == spec.normalized()

# a table that was tampered with is refused, with the entry named
from totpos.radical import ScaledMatrix
from totpos.automorph import InconsistentTableError

bad = table.replace_image(0, ScaledMatrix.of(RatMatrix.identity(3)))
try:
    recover(bad)
except InconsistentTableError as exc:
    print("rejected:", exc)
