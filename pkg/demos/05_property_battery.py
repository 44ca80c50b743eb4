# The property battery: a clean run, then each canned defect and what catches it.
from totpos.battery import MUTANTS, RunConfig, check_all

cfg = RunConfig(seed=42, dims=(2, 3, 4), trials=3)

reports = check_all(cfg)
for r in reports:
    print(r.line())
print(sum(r.passed for r in reports), "of", len(reports), "passed")

for name in sorted(MUTANTS):
    failing = [r for r in check_all(cfg, mutant=name) if not r.passed]
    print()
    print(f"mutant {name!r} is caught by:", ", ".join(r.id for r in failing))
    first = failing[0].failures[0]
    print("  first counterexample keys:", sorted(first))
