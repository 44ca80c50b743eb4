# Three ways to ask "is this TP / ITN?", and how they relate.
from totpos import RatMatrix, classify_full, is_itn_fast, is_tp_fekete, whitney_perturb

samples = {
    "identity": RatMatrix.identity(3),
    "vandermonde": RatMatrix.from_rows([[1, 1, 1], [1, 2, 4], [1, 3, 9]]),
    "all ones": RatMatrix.from_rows([[1, 1], [1, 1]]),
    "swap": RatMatrix.from_rows([[0, 1], [1, 0]]),
    "det < 0": RatMatrix.from_rows([[1, 2], [3, 4]]),
}

# classify_full looks at every minor and returns a certificate
for name, A in samples.items():
    cert = classify_full(A)
    where = "" if cert.witness is None else f"  witness {cert.witness} = {cert.value}"
    print(f"{name:12s} {cert.label.value:12s}{where}")

# the fast tests: contiguous minors only (TP), and Neville elimination (ITN)
print()
for name, A in samples.items():
    print(f"{name:12s} fekete TP: {is_tp_fekete(A)!s:5s}  neville ITN: {is_itn_fast(A)}")

# any ITN matrix is a limit of TP ones; here is an explicit nearby TP matrix
I3 = samples["identity"]
B = whitney_perturb(I3, "1/100")
print()
print("TP matrix within 1/100 of I3:")
print(B)
print("label:", classify_full(B).label.value, " distance:", B.max_abs_diff(I3))
