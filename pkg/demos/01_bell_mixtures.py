"""Mixtures of Bell states: how many product directions kill a rank?

For a two-qubit operator T built from Bell states, contract party A with a
vector r and ask when the remaining 2 x s matrix drops to rank one.  Two Bell
states leave exactly two such directions; three or four leave none.
"""
from luob.fixtures import bell_subset, bell_subsets
from luob.locus import DegeneratingLocus, extract_finite_points, is_empty
from luob.pencil import pencil_from_operator

for subset in bell_subsets():
    H = bell_subset(subset).H
    L = DegeneratingLocus(pencil_from_operator(H, "A"), 1)
    if is_empty(L):
        print(f"Bell states {subset}: V_A^1 is empty")
    else:
        pts = extract_finite_points(L)
        print(f"Bell states {subset}: V_A^1 = {{{', '.join(map(str, pts))}}}")
