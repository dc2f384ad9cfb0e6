"""Exact computations with retracts of polynomial rings, derivations and exponential maps over Q."""

from ralab.poly import QQ, DEGREVLEX, MonomialOrder, Poly, PolyRing, qq
from ralab.groebner import ResourceLimitError, buchberger
from ralab.ideals import (Ideal, PresentedRing, RingMap, eliminate, ideal_quotient, intersect,
                          krull_dim, saturate)
from ralab.subalgebra import SubAlgebra
from ralab.derivation import (Derivation, ExpMap, check_exp_axioms, check_lnd, exp_from_lnd,
                              exp_translation, invariants_upto)
from ralab.retract import (PatchData, Retraction, compute_Mn, is_invertible, is_regular_mod,
                           mu_graded, prime_image_analysis, principal_upto, sym_of_ideal,
                           verify_patch_decomposition, verify_retraction)
from ralab.graded import decompose
from ralab.jets import JetMap, invert_coords, jet_compose, jet_decompose
from ralab.local import LocalAlgebra, depth_and_cm_report, socle_and_gorenstein
from ralab.report import Report
from ralab.session.parser import parse_session
from ralab.registry import paper_suite

__version__ = "0.1.0"
