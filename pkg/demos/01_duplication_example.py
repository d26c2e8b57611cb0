"""
Duplicating a frequent token
============================

Splitting one token into k look-alike copies always raises entropy, but
efficiency can still go down on a tiny vocabulary because the denominator
grows too. This walks through the four-token example.
"""

import numpy as np

from renyi_bpe import UnigramDistribution, duplicate_distribution, renyi_efficiency, renyi_entropy
from renyi_bpe.analysis import example_table

# A four-token unigram distribution; "w0" carries 40% of the mass.
base = UnigramDistribution.from_probs([0.4, 0.3, 0.2, 0.1])
print(base.probs)

# Replace w0 by ten duplicates of 4% each.
dup = duplicate_distribution(base, "w0", 10)
print(dup.support_size, np.round(sorted(dup.values()), 3))

# Entropy goes up for every order...
for alpha in (0.5, 1, 3):
    print(f"H{alpha:g}: {renyi_entropy(base, alpha):.2f} -> {renyi_entropy(dup, alpha):.2f}")

# ...yet Eff3 drops once log|V| jumps from log 4 to log 13.
print("Eff3 (bits / nats):", round(renyi_efficiency(base, 3, "paper-table"), 2),
      "->", round(renyi_efficiency(dup, 3, "paper-table"), 2))

# The full table, rows keyed by duplication factor.
cols = ("H", "H0.5", "H3", "Eff", "Eff0.5", "Eff3")
print("k   " + "  ".join(f"{c:>6}" for c in cols))
for k, row in example_table("paper-table").items():
    print(f"{k:<3} " + "  ".join(f"{v:6.2f}" for v in row))
