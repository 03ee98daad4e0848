"""Sanity check: a local-unitary copy of H is never flagged.

Each trial draws Haar-random unitaries per party, conjugates H, runs the
locus comparison and maps sampled locus points back with U^T.
"""
import numpy as np

from luob.fixtures import example1
from luob.simcheck import lu_invariance_selftest

res = lu_invariance_selftest(example1(0, 0, np.pi).H, trials=5, seed=11)
print("\n".join(res.log))
print("passed" if res.passed else "FAILED")
