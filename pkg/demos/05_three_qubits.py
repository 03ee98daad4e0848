"""Three qubits, cut into A:B versus C.

For H the rank-one locus over CP^1 x CP^1 is four isolated points.  For H'
every generator carries the same state on A, so the locus is the whole line
{(1:1)} x CP^1.  Comparing loci across all cuts gives an obstruction already
at the single-party cut A, k = 0.
"""
from luob.fixtures import example5
from luob.locus import DegeneratingLocus, signature
from luob.pencil import pencil_from_operator
from luob.simcheck import theorem3_check

fx = example5()
for label, H in (("H ", fx.H), ("H'", fx.Hprime)):
    L = DegeneratingLocus(pencil_from_operator(H, "A:B"), 1)
    print(label, "V_A:B^1:", signature(L).summary())

rep = theorem3_check(fx.H, fx.Hprime, notes=fx.notes)
print("verdict:", rep.verdict, rep.witness)
for n in rep.notes:
    print("note:", n)
