"""
Membership and contraction in a subalgebra
==========================================

"""

from ralab.ideals import Ideal, PresentedRing
from ralab.subalgebra import SubAlgebra

# A = Q[X, Y, XT - YZ] inside Q[X, Y, Z, T]
B = PresentedRing(["X", "Y", "Z", "T"])
A = SubAlgebra(B, ["X", "Y", "X*T - Y*Z"])

# membership returns an expression in the tags t1, t2, t3
res = A.member("X^2*T - X*Y*Z + Y^3")
print(bool(res), res.expression)
print(bool(A.member("T")))

# the presentation of A: no relations among the three generators
print("relations:", [str(g) for g in A.presentation().kernel.groebner()])
print("trdeg:", A.trdeg())

# contracting (X, Y)B back to A keeps the third generator
q = A.contract(Ideal(B, ["X", "Y"]))
print("(X, Y)B cap A =", [str(g) for g in q.groebner()])
