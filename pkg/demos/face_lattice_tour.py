"""Face lattices, chain lengths and support selection on a few cones."""
import numpy as np

from conelift.cones import (PSD, Orthant, Polyhedral, Product, SecondOrder, chain_length, chain_witness,
                            minimal_face, subset_select)
from conelift.numerics import svec

pyramid = Polyhedral(np.array([[1, 0, 1], [0, 1, 1], [-1, 0, 1], [0, -1, 1]], dtype=float))
cones = {"orthant R^4_+": Orthant(4), "PSD 3x3": PSD(3), "second-order, dim 5": SecondOrder(5),
         "PSD 2x2 x orthant R^3_+": Product((PSD(2), Orthant(3))), "square pyramid": pyramid}
for name, cone in cones.items():
    cl = chain_length(cone)
    print(f"{name:25s} longest face chain {cl.value} ({'exact' if cl.exact else 'bound'})")

# A strictly increasing chain of PSD faces, one per rank.
for F in chain_witness(PSD(3), 4):
    print("  face of rank", F.rank)

# Few points already span the face of a large sum: at most (chain length - 1) are needed.
rng = np.random.default_rng(0)
vs = rng.standard_normal((8, 2)) @ rng.standard_normal((2, 3))
pts = [svec(np.outer(v, v)) for v in vs]
I = subset_select(PSD(3), pts)
print(f"8 rank-one points in a rank-2 face; kept {list(I)}, "
      f"face rank {minimal_face(PSD(3), sum(pts)).rank}")
