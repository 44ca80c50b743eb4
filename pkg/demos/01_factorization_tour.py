# Whitney factorization, start to finish, on one small matrix and a few random ones.
from totpos import RatMatrix, classify_full, factorize, ldu, synthesize
from totpos.factor import random_factorization

A = RatMatrix.from_rows([[2, 1], [1, 1]])
print("A =")
print(A)
print("label:", classify_full(A).label.value)

# the parameters: one lower weight, one upper weight, two pivots
f = factorize(A)
print("w  =", {k: str(v) for k, v in f.w.items()})
print("w' =", {k: str(v) for k, v in f.w_prime.items()})
print("d  =", [str(x) for x in f.d])

# the word these parameters stand for, left to right
for item in f.word():
    print("  ", item)

# multiplying the word back out gives A again, exactly
assert synthesize(f) == A

# grouping the word gives the LDU decomposition
L, D, U = ldu(A)
print("L =\n%s\nD =\n%s\nU =\n%s" % (L, D, U))

# now random parameters: with a zero somewhere the product is ITN but not TP
f = random_factorization(4, seed=3)
B = synthesize(f)
print()
print("random 4x4, all parameters positive:", f.all_positive())
print(B)
cert = classify_full(B)
print("label:", cert.label.value, "witness:", cert.witness, "value:", cert.value)

# and it round trips
assert synthesize(factorize(B)) == B
print("round trip ok; pivots", [str(x) for x in factorize(B).d])
