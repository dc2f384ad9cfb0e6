"""
Socles, annihilators and depth of small local rings
===================================================

"""

from ralab.ideals import PresentedRing
from ralab.local import LocalAlgebra, annihilator, depth_and_cm_report, socle_and_gorenstein

# Q[X, Y]/(X^2, XY, Y^2): three-dimensional, socle spanned by x and y
A = LocalAlgebra(PresentedRing(["X", "Y"], ["X^2", "Y^2", "X*Y"]))
print("basis:", [str(b) for b in A.basis_polys()])
rep = socle_and_gorenstein(A)
print("socle:", [str(s) for s in rep.socle], "  Gorenstein:", rep.gorenstein)

# adding Z, W with xZ = yW gives a six-dimensional Gorenstein ring
B = LocalAlgebra(PresentedRing(["X", "Y", "Z", "W"],
                               ["X^2", "Y^2", "X*Y", "Z^2", "W^2", "Z*W", "X*W", "Y*Z",
                                "X*Z - Y*W"]))
rep = socle_and_gorenstein(B)
print("dim:", len(B.basis()), "  socle:", [str(s) for s in rep.socle], "  Gorenstein:", rep.gorenstein)
print("ann(xz) = m:", annihilator("X*Z", B) == B.maximal_ideal())

# one-dimensional rings: a regular element certifies Cohen-Macaulay, a socle element rules it out
C = LocalAlgebra(PresentedRing(["X", "Y", "Z"], ["X^2", "X*Y", "Y*Z"]))
print(depth_and_cm_report(C, candidate="Y + Z").to_text())
D = LocalAlgebra(PresentedRing(["X", "Y"], ["X^2", "X*Y"]))
print(depth_and_cm_report(D).to_text())
