"""Two small obstructions.

First pair: equal rank and trace, yet the rank-one loci hold two points
versus one.  Second pair: the range of H contains a maximally entangled
vector while H' kills a whole direction of party A; no mixture of local
unitary conjugates of H can do that.
"""
from luob.fixtures import example3, example4
from luob.simcheck import theorem1_check, theorem2_check

fx = example3()
rep = theorem1_check(fx.H, fx.Hprime)
print("two-qubit pair:", rep.verdict, rep.witness)

fx = example4()
rep = theorem2_check(fx.H, fx.Hprime)
print("qutrit pair:", rep.verdict, rep.witness)
for n in rep.notes:
    print("  note:", n)
