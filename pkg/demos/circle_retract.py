"""
A retract with a twisted complement over the circle
===================================================

"""

from ralab.derivation import Derivation, check_lnd
from ralab.ideals import Ideal, PresentedRing, RingMap
from ralab.retract import (PatchData, is_invertible, principal_upto, sym_of_ideal,
                           verify_patch_decomposition, verify_retraction)
from ralab.subalgebra import SubAlgebra

# R = Q[a, b]/(a^2 + b^2 - 1), B = R[X, Y]; a and b form the base
B = PresentedRing(["a", "b", "X", "Y"], ["a^2 + b^2 - 1"], base=["a", "b"])
R = B.base_ring()

u, v = B("a*Y + (1 - b)*X"), B("(1 + b)*Y + a*X")
F, G = B("a*Y - (1 + b)*X"), B("(1 - b)*Y - a*X")

# u and v are killed by an R-linear nilpotent derivation
D = Derivation(B, {"X": "a", "Y": "b - 1"})
print("D(u), D(v) =", D(u), D(v), "  lnd:", check_lnd(D).verdict)

# pi is an R-linear idempotent with image A = R[u, v]
pi = verify_retraction(RingMap(B, B, {"X": "1/2*a*Y + 1/2*(1 - b)*X",
                                      "Y": "1/2*(1 + b)*Y + 1/2*a*X"}, base_fixing=True))
A = SubAlgebra(B, [u, v])
print("pi(u) = u:", B.equal(pi(u), u), "  pi(v) = v:", B.equal(pi(v), v))

# the ideal (a, 1 - b) of R is invertible but not principal in low degree
J = Ideal(R, ["a", "1 - b"])
cert = is_invertible(J)
print("J:", cert.verdict, "  inverse:", [str(g) for g in cert.inverse.generators])
print("J:", principal_upto(J, 6).verdict)

# A is the symmetric algebra of J: two linear relations cut it out
sym = sym_of_ideal(R, ["1 - b", "a"])
print("Sym relations:", [str(r) for r in sym.linear_relations])

# the patching certificate over the cover by 1 + b and 1 - b
rep = verify_patch_decomposition(PatchData(A, B("1 + b"), B("1 - b"), F, G, N=2), pi)
print(rep.to_text())
