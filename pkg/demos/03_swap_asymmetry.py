"""Is an operator as good as its mirror image?

Swapping the parties of H exchanges its A-side and B-side loci.  For the
example below the A side is three distinct lines while the B side is a
double line plus a line, so H cannot simulate its swapped copy.
"""
from luob.fixtures import example2
from luob.simcheck import corollary2_swap_check

rep = corollary2_swap_check(example2(v=2, lam=3).H)
for e in rep.per_invariant:
    print(f"k={e.k}  A: {e.signature_H.summary()}")
    print(f"     B: {e.signature_Hprime.summary()}")
print("verdict:", rep.verdict)
