"""Three phases, one plane cubic.

The rank-two locus of the three-phase family is a member of the Hesse pencil
r1^3 + r2^3 + r3^3 - g r1 r2 r3.  With all phases zero it splits into three
lines (a singular cubic); flipping one phase to pi gives a smooth cubic with a
finite moduli value.  Because local unitaries act by projective linear maps,
a singular cubic can never be turned into a smooth one, so neither operator
can be simulated by the other.
"""
import numpy as np

from luob.cubic import g_of_etas
from luob.fixtures import example1
from luob.locus import DegeneratingLocus, signature
from luob.pencil import pencil_from_operator
from luob.simcheck import corollary1_check

for etas in [(0, 0, 0), (0, 0, np.pi)]:
    L = DegeneratingLocus(pencil_from_operator(example1(*etas).H, "A"), 2)
    print(f"etas={tuple(round(e, 4) for e in etas)}  g={g_of_etas(*etas):.6f}")
    print("   ", signature(L).summary())

rep = corollary1_check((0, 0, 0), (0, 0, np.pi))
print("verdict:", rep.verdict, "-", rep.witness[2])
