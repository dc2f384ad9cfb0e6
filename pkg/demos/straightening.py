"""
Straightening an idempotent into coordinates
============================================

"""

from ralab.graded import check_graded_preconditions, decompose
from ralab.ideals import PresentedRing, RingMap
from ralab.jets import JetMap, invert_coords, jet_compose, jet_decompose
from ralab.poly import PolyRing
from ralab.retract import verify_retraction

# pi(Y) = X^2 + X^3 is not a graded map, but its image Q[X] is graded
B = PresentedRing(["X", "Y"])
pi = verify_retraction(RingMap(B, B, {"Y": "X^2 + X^3"}))
print(check_graded_preconditions(pi).status)
split = decompose(pi)
print("d =", split.d, "  Y =", [str(y) for y in split.Y], "  linear part:", [[str(c) for c in row] for row in split.P])

# a linear change of coordinates hides the structure; decompose recovers it
C = PresentedRing(["X", "Y"])
mixed = verify_retraction(RingMap(C, C, {"X": "2*X - Y", "Y": "2*X - Y"}))
split = decompose(mixed)
print("d =", split.d, "  Y =", [str(y) for y in split.Y])

# the same recipe on truncated power series, here modulo degree 6
R = PolyRing(["X", "Y"])
jet = JetMap(R, ["X", "X^2"], 5)
print("pi o pi = pi:", jet_compose(jet, jet).images == jet.images)
js = jet_decompose(jet)
print("d =", js.d, "  Y =", [str(y) for y in js.Y])

# coordinate changes invert degree by degree
s = JetMap(R, ["X + Y^2", "Y - X*Y"], 5)
print("inverse:", [str(g) for g in invert_coords(s).images])
