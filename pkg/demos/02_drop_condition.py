"""
When does dropping a merge raise Renyi entropy?
===============================================

Removing x = (y, z) from the vocabulary sends every occurrence of x to the
pair y z. A closed-form inequality predicts whether H_alpha goes up; here we
check it against a brute-force recount on random count vectors.
"""

import numpy as np

from renyi_bpe import drop_condition
from renyi_bpe.analysis import random_drop_instance

counts = {"x": 4, "y": 1, "z": 1, "w": 4}
r = drop_condition(counts, "x", ("y", "z"), alpha=3)
print(f"lhs {r.lhs:.4f}  rhs {r.rhs:.4f}  holds: {r.condition_holds}")
print(f"H3 {r.entropy_before:.4f} -> {r.entropy_after:.4f}")

# Make x rare and the parents common: the drop now lowers entropy.
r = drop_condition({"x": 1, "y": 9, "z": 9, "w": 1}, "x", ("y", "z"), alpha=3)
print(f"lhs {r.lhs:.4f}  rhs {r.rhs:.4f}  holds: {r.condition_holds}  "
      f"H3 {r.entropy_before:.4f} -> {r.entropy_after:.4f}")

# Random instances: the verdict should always agree with the recount.
rng = np.random.default_rng(0)
agree, raised = 0, 0
for i in range(2000):
    c, x, y, z = random_drop_instance(rng)
    r = drop_condition(c, x, (y, z), alpha=(1.5, 2, 3, 5)[i % 4])
    agree += r.condition_holds == r.actual_increase
    raised += r.actual_increase
print(f"{agree}/2000 verdicts agree; entropy rose in {raised} instances")
