"""Walk through the four proximity operators on one small vector.

Shows the qualitative differences: the lasso prox only shrinks, the
elastic net shrinks twice, the pairwise-max prox ties near-equal
magnitudes together, and the k-sparse variant does the same after
hard-selecting a support.

Run:  python3 demos/01_prox_operators.py
"""

import numpy as np

from sparcreg import ElasticNet, Lasso, Oscar, Sparc, prox, prox_objective

v = np.array([3.0, 2.9, -2.8, 1.0, 0.1, -0.05])
print("input      ", np.array2string(v, precision=3))
print()

for label, reg in [
    ("lasso      ", Lasso(0.5)),
    ("elastic net", ElasticNet(0.5, 0.5)),
    ("oscar      ", Oscar(0.1, 0.3)),
    ("sparc k=3  ", Sparc(0.3, 3)),
]:
    x = prox(reg, v)
    obj = prox_objective(reg, v, x)
    print(f"{label} -> {np.array2string(x, precision=3)}"
          f"   objective {obj:.4f}")

print()
print("note how the pairwise-max penalties pool 3.0, 2.9 and 2.8 into one")
print("shared magnitude: that tie is what makes grouped features enter or")
print("leave the model together.")

# the sparse variant keeps at most k coefficients no matter how small the
# penalty weight is
x = prox(Sparc(0.0, 2), v)
print()
print("sparc k=2, zero penalty ->", np.array2string(x, precision=3))
print("nonzeros:", int(np.count_nonzero(x)))
