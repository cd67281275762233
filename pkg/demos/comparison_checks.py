# Seeded checks that deeper potentials give lower levels, and that levels
# rise monotonically along a family interpolating between two potentials.
import sys

from relcomp.harness import monotonicity_suite, theorem2_suite, theorem4_suite

n = int(sys.argv[1]) if len(sys.argv) > 1 else 10
print(theorem2_suite(seed=42, n_pairs=n).to_text(), "\n")
print(theorem4_suite(seed=42, n_pairs=n).to_text(), "\n")
print(monotonicity_suite("dirac", seed=42, n_families=max(1, n // 3)).to_text())
