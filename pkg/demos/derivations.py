"""
A nilpotent derivation on a quadric cone
========================================

"""

from ralab.derivation import (Derivation, check_exp_axioms, check_lnd, exp_from_lnd,
                              generator_guess, invariants_upto)
from ralab.ideals import PresentedRing, RingMap
from ralab.retract import retract_image, verify_retraction

# B = Q[X, Y, Z]/(XY - Z^2); D is defined on generators and must respect the relation
B = PresentedRing(["X", "Y", "Z"], ["X*Y - Z^2"])
D = Derivation(B, {"X": "0", "Z": "X", "Y": "2*Z"})
print("D(YZ) =", D("Y*Z"))

# local nilpotency is certified generator by generator, up to a cap
lnd = check_lnd(D, cap=8)
print(lnd.verdict, lnd.orders)
print("cap 2:", check_lnd(D, cap=2).verdict)

# the exponential map exp(TD) and its two axioms
phi = exp_from_lnd(D)
for v in B.names:
    print(f"phi({v}) =", phi(v))
print("axioms:", check_exp_axioms(phi).status)

# invariants of small degree and a guess for the kernel's generators
inv = invariants_upto(D, 4)
print("invariants:", [str(f) for f in inv])
print("kernel guess:", [str(g) for g in generator_guess(B, inv).generators])

# killing Y and Z is a retraction onto the kernel
pi = verify_retraction(RingMap(B, B, {"Y": "0", "Z": "0"}))
print("image:", [str(g) for g in retract_image(pi).generators])
