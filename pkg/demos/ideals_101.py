"""
Ideals, quotients and elimination over Q
========================================

"""

from ralab.ideals import Ideal, PresentedRing, eliminate, ideal_quotient, krull_dim, saturate

# a polynomial ring is a presented ring with no relations
R = PresentedRing(["x", "y", "z"])
I = Ideal(R, ["x*y - z^2", "x^2*y"])

# reduced Groebner basis in degrevlex
for g in I.groebner():
    print("G:", g)

# (I : x) and the saturation (I : x^inf), with the exponent where it stabilised
print("I : x     =", [str(g) for g in ideal_quotient(I, "x").groebner()])
sat, k = saturate(I, "x")
print("I : x^inf =", [str(g) for g in sat.groebner()], "after", k, "steps")

# eliminate z: the result lives in Q[x, y]
E = eliminate(Ideal(R, ["z - x^2", "z - y^3"]), ["z"])
print("elimination ring:", E.ring.names, "generators:", [str(g) for g in E.groebner()])

# dimension of the variety, -1 for the unit ideal
print("dim V(I) =", krull_dim(I), "  dim V(1) =", krull_dim(Ideal(R, [1])))
