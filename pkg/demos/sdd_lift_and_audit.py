"""Lifting the SDD cone through 2x2 PSD blocks, then auditing a bogus lift.

The scaled diagonally dominant cone is the image of a product of 2x2 PSD
cones, one per coordinate pair.  Factorizing the lift splits each pairing
<X, Y> into one non-negative summand per block.  The second half shows the
auditor catching a small orthant lift that claims to reproduce a
neighborly family.
"""
import numpy as np

from conelift.lifts import factorize, sdd_decompose, sdd_lift, sdd_preimage
from conelift.numerics import svec
from conelift.obstruction import audit, pigeonhole_bundle

n = 4
rng = np.random.default_rng(1)
A = rng.standard_normal((n, n))
A = (A + A.T) / 2
np.fill_diagonal(A, 0.0)
np.fill_diagonal(A, np.abs(A).sum(axis=1) + 0.2)
blocks = sdd_decompose(A)
print(f"{len(blocks)} PSD 2x2 blocks reassemble X")

V = rng.standard_normal((n, n))
Y = V @ V.T
fac = factorize(sdd_lift(n), [("X", svec(A), sdd_preimage(A))], [("Y", svec(Y))])
terms = fac.terms("X", "Y")
print(f"<X,Y> = {np.sum(A * Y):.6f}, block summands add to {terms.sum():.6f}, "
      f"smallest summand {terms.min():.2e}")

cert, fd, cones = pigeonhole_bundle(5, seed=0)
verdict = audit(cert, fd, cones)
print(f"audit of a {len(cones)}-factor orthant lift: {verdict.verdict}; witness {verdict.witness}")
