import pytest
from hypothesis import given, settings, strategies as st

import oracles
from ralab.ideals import Ideal, PresentedRing, RingMap, eliminate
from ralab.retract import (DecompositionFailed, IdempotencyError, NormalizationFailed, PatchData,
                           compute_Mn, going_down_witness, is_invertible, is_regular_mod,
                           mu_graded, prime_image_analysis, principal_upto, retract_image,
                           sym_of_ideal, tag_weights, verify_patch_decomposition,
                           verify_retraction)
from ralab.subalgebra import SubAlgebra
from strategies import nonzero_polys, polys

CIRCLE = ["a^2 + b^2 - 1"]
U_ = "a*Y + (1 - b)*X"
V_ = "(1 + b)*Y + a*X"
F_ = "a*Y - (1 + b)*X"
G_ = "(1 - b)*Y - a*X"


def circle_B():
    return PresentedRing(["a", "b", "X", "Y"], CIRCLE, base=["a", "b"])


def circle_pi(B):
    return verify_retraction(RingMap(B, B, {"X": "1/2*a*Y + 1/2*(1 - b)*X",
                                            "Y": "1/2*(1 + b)*Y + 1/2*a*X"}, base_fixing=True))


def ex65():
    B = PresentedRing(["X", "Y", "Z"])
    return B, verify_retraction(RingMap(B, B, {"X": 1, "Y": "X*Y", "Z": "X*Z"}))


# -- retractions -----------------------------------------------------------------------

def test_verify_retraction_examples():
    B = circle_B()
    pi = circle_pi(B)
    assert B.equal(pi(U_), U_) and B.equal(pi(V_), V_)
    ident = verify_retraction(RingMap(B, B, {}))
    assert [str(g) for g in retract_image(ident).generators] == ["X", "Y"]
    C, pi = ex65()
    A = retract_image(pi)
    assert [str(g) for g in A.generators] == ["X*Y", "X*Z"]
    D = PresentedRing(["X", "Y"])
    A = retract_image(verify_retraction(RingMap(D, D, {"Y": 0})))
    assert [str(g) for g in A.generators] == ["X"]


def test_idempotency_error_has_witness():
    D = PresentedRing(["X", "Y"])
    with pytest.raises(IdempotencyError) as err:
        verify_retraction(RingMap(D, D, {"X": "X + Y", "Y": "Y"}))
    assert err.value.variable == "X"
    assert str(err.value.twice) == "X + 2*Y"


RETRACTIONS = [
    ("ex6.5", ex65),
    ("circle", lambda: (lambda B: (B, circle_pi(B)))(circle_B())),
]


@pytest.mark.parametrize("name,make", RETRACTIONS)
@settings(max_examples=100)
@given(f=polys(["X", "Y"], max_deg=4, max_terms=4))
def test_certified_retraction_is_idempotent_on_samples(name, make, f):
    B, pi = make()
    A = retract_image(pi)
    once = pi(B(f))
    assert B.equal(pi(once), once)
    assert A.member(once)


# -- Sym and invertibility ------------------------------------------------------------

def test_sym_examples():
    R = PresentedRing(["u", "v"])
    assert sym_of_ideal(R, ["u^2 + v"]).linear_relations == []
    assert [str(r) for r in sym_of_ideal(R, ["u", "v"]).linear_relations] == ["v*t1 - u*t2"]


def test_sym_of_circle_ideal():
    R = PresentedRing(["a", "b"], CIRCLE)
    sym = sym_of_ideal(R, ["a", "1 - b"])
    names = ["a", "b", "t1", "t2"]
    # the syzygy module of (a, 1 - b) needs two generators on the circle
    want = ["(1 - b)*t1 - a*t2", "(1 + b)*t2 - a*t1"]
    got = Ideal(PresentedRing(names, CIRCLE), sym.linear_relations)
    assert got == Ideal(got.ring, want)
    assert len(sym.linear_relations) == 2
    # oracle: the t-linear part of the Rees ideal, via sympy
    rees = oracles.eliminate(["t1 - a*s", "t2 - (1 - b)*s"] + CIRCLE, names + ["s"], ["s"])
    assert oracles.gb([oracles.text(g) for g in rees], names) == \
        oracles.gb(want + CIRCLE, names)


def test_invertibility_examples():
    R = PresentedRing(["a", "b"], CIRCLE)
    I = Ideal(R, ["a", "1 + b"])
    cert = is_invertible(I)
    assert cert.invertible
    assert cert.inverse == Ideal(R, ["a", "1 - b"])
    assert is_invertible(Ideal(R, ["a + 3*b"])).invertible
    P = PresentedRing(["u", "v"])
    bad = is_invertible(Ideal(P, ["u", "v"]))
    assert not bad.invertible
    assert bad.inverse == Ideal(P, ["u"])


@pytest.mark.parametrize("ring,gens,names", [
    (CIRCLE, ["a", "1 + b"], ["a", "b"]),
    (CIRCLE, ["a", "1 - b"], ["a", "b"]),
    ([], ["u", "v"], ["u", "v"]),
    ([], ["u^2 + v*u"], ["u", "v"]),
])
def test_invertibility_is_witness_independent(ring, gens, names):
    R = PresentedRing(names, ring)
    I = Ideal(R, gens)
    verdicts = {is_invertible(I, witness=w).verdict for w in gens}
    verdicts.add(is_invertible(I, witness=f"({gens[0]})*({gens[-1]})").verdict)
    assert len(verdicts) == 1


def test_not_principal_up_to_degree_6():
    R = PresentedRing(["a", "b"], CIRCLE)
    for gens in (["a", "1 + b"], ["a", "1 - b"]):
        assert principal_upto(Ideal(R, gens), 6).verdict == "not principal up to degree 6"
    assert principal_upto(Ideal(R, ["a^2"]), 6).verdict.startswith("principal")


# -- localization helpers ---------------------------------------------------------------

def test_is_regular_mod_examples():
    C = PresentedRing(["x", "y"])
    assert is_regular_mod("y", "x", C)
    assert not is_regular_mod("x", "x", C)
    R = PresentedRing(["a", "b"], CIRCLE)
    assert is_regular_mod("1 - b", "1 + b", R)


def _saturation_criterion(y, x, names, relations):
    sat, _ = oracles.saturation([x] + relations, y, names)
    return oracles.same_ideal(sat, [x] + relations, names)


@settings(max_examples=50)
@given(nonzero_polys(["x", "y"], 2, 2), nonzero_polys(["x", "y"], 2, 2))
def test_is_regular_mod_agrees_with_saturation_free(x, y):
    C = PresentedRing(["x", "y"])
    if C.is_zero(x) or C.is_zero(y):
        return
    assert is_regular_mod(y, x, C) == _saturation_criterion(y, x, ["x", "y"], [])


@settings(max_examples=50)
@given(nonzero_polys(["a", "b"], 2, 2), nonzero_polys(["a", "b"], 2, 2))
def test_is_regular_mod_agrees_with_saturation_circle(x, y):
    R = PresentedRing(["a", "b"], CIRCLE)
    if R.is_zero(x) or R.is_zero(y):
        return
    assert is_regular_mod(y, x, R) == _saturation_criterion(y, x, ["a", "b"], CIRCLE)


def test_compute_Mn_examples():
    Q = PresentedRing(["s", "t"])
    for n in range(4):
        assert compute_Mn(Q, "s", "t", n) == Ideal(Q, [f"s^{n}"])
        assert compute_Mn(Q, "s + t^2", 1, n) == Ideal(Q, [f"(s + t^2)^{n}"])
        osat, _ = oracles.saturation([f"s^{n}"], "t", ["s", "t"])
        assert oracles.same_ideal(osat, [f"s^{n}"], ["s", "t"])


def _circle_algebra():
    B = circle_B()
    A = SubAlgebra(B, [U_, V_])
    return B, A, A.presented_ring()


def test_compute_Mn_circle():
    B, A, Ar = _circle_algebra()
    M1 = compute_Mn(A, "a", "1 + b", 1)
    assert M1 == Ideal(Ar, ["a", "1 - b"])
    # oracle: present A and saturate (a) by (1 + b) with sympy
    names = ["a", "b", "t1", "t2"]
    kernel = oracles.eliminate([f"t1 - ({U_})", f"t2 - ({V_})"] + CIRCLE,
                               ["a", "b", "X", "Y", "t1", "t2"], ["X", "Y"])
    kernel = [oracles.text(k) for k in kernel]
    sat, _ = oracles.saturation(["a"] + kernel, "1 + b", names)
    assert oracles.same_ideal(sat, ["a", "1 - b"] + kernel, names)
    # the isomorphic copy (a, 1 + b)A: (1 + b)*M1 = a*(a, 1 + b)
    assert M1.scaled(Ar("1 + b")) == Ideal(Ar, ["a", "1 + b"]).scaled(Ar("a"))
    assert M1 != Ideal(Ar, ["a", "1 + b"])


filtration_data = st.tuples(nonzero_polys(["s", "t"], 2, 2), nonzero_polys(["s", "t"], 1, 2))


@settings(max_examples=20)
@given(filtration_data)
def test_Mn_filtration(data):
    a, x = data
    Q = PresentedRing(["s", "t"])
    if Q.is_zero(a) or Q.is_zero(x):
        return
    M = [compute_Mn(Q, a, x, n) for n in range(3)]
    assert M[0].is_unit()
    for n in range(3):
        assert M[n].contains(Q(a) ** n)
    for n in range(3):
        for m in range(3 - n):
            for g in (M[n] * M[m]).generators:
                assert M[n + m].contains(g)


def test_Mn_filtration_circle():
    _, A, Ar = _circle_algebra()
    M = [compute_Mn(A, "a", "1 + b", n) for n in range(3)]
    assert M[0].is_unit()
    for n in range(3):
        assert M[n].contains(Ar("a") ** n)
    assert (M[1] * M[1]).issubset(M[2])


# -- the patch pipeline -----------------------------------------------------------------

def test_trivial_patch():
    B = PresentedRing(["s", "T"])
    pi = verify_retraction(RingMap(B, B, {"T": 0}))
    A = retract_image(pi)
    rep = verify_patch_decomposition(PatchData(A, B(1), B(1), B("T"), B("T"), N=2), pi)
    assert rep.passed
    assert all(M.is_unit() for M in rep.M)
    assert rep.I.is_unit()


@pytest.fixture(scope="module")
def circle_patch():
    B = circle_B()
    pi = circle_pi(B)
    A = SubAlgebra(B, [U_, V_])
    rep = verify_patch_decomposition(PatchData(A, B("1 + b"), B("1 - b"), B(F_), B(G_), N=2), pi)
    return B, A, pi, rep


def test_circle_patch(circle_patch):
    B, A, pi, rep = circle_patch
    assert rep.passed
    R = B.base_ring()
    # M1 cap R; isomorphic to (a, 1 + b)R through multiplication by (1 + b)/a
    assert rep.I == Ideal(R, ["a", "1 - b"])
    assert rep.I.scaled(R("1 + b")) == Ideal(R, ["a", "1 + b"]).scaled(R("a"))
    assert rep.witness("I invertible") == "invertible"
    Ar = A.presented_ring()
    assert rep.M[1] == Ideal(Ar, ["a", "1 - b"])


def test_circle_patch_sym_relations_vanish(circle_patch):
    B, A, pi, rep = circle_patch
    R = B.base_ring()
    gens = list(rep.I.groebner())
    sym = sym_of_ideal(R, gens)
    m = int(rep.witness("m"))
    images = [B.divide(B(g.to_ring(B.free)) * B(G_), B("1 - b") ** m) for g in gens]
    assert all(q is not None for q in images)
    for rel in sym.linear_relations:
        sub = [images[sym.tvars.index(n)] if n in sym.tvars else B.var(n) for n in rel.ring.names]
        assert B.is_zero(rel.substitute(sub, B.free))


def test_corrupted_patch_input():
    B = circle_B()
    pi = circle_pi(B)
    A = SubAlgebra(B, [U_, V_])
    bad = PatchData(A, B("1 + b"), B("1 - b"), B(F_), B(G_) + 1, N=2, normalize=False)
    with pytest.raises(NormalizationFailed):
        verify_patch_decomposition(bad, pi)
    shifted = PatchData(A, B("1 + b"), B("1 - b"), B(F_), B(G_) + 1, N=2)
    rep = verify_patch_decomposition(shifted, pi)
    assert rep.passed and rep.witness("normalization shift")


def test_patch_rejects_wrong_algebra():
    B = circle_B()
    pi = circle_pi(B)
    A = SubAlgebra(B, [U_])
    with pytest.raises((NormalizationFailed, DecompositionFailed)):
        verify_patch_decomposition(PatchData(A, B("1 + b"), B("1 - b"), B(F_), B(G_)), pi)


# -- primes, contractions, mu -------------------------------------------------------

def test_prime_image_branches():
    B, pi = ex65()
    rep = prime_image_analysis(pi, "X")
    assert rep.branch == "precondition-violated"
    assert rep.contraction == Ideal(rep.contraction.ring, ["t1", "t2"])
    assert rep.witness("height(pB cap A)") == "2"
    D = PresentedRing(["X", "Y"])
    pi6 = verify_retraction(RingMap(D, D, {"Y": 0}))
    rep = prime_image_analysis(pi6, "Y + X^2")
    assert rep.branch == "zero"
    assert rep.witness("pi(p)") == "X^2"
    assert rep.witness("pi(p) reducible") == "(X)*(X)"
    rep = prime_image_analysis(pi6, "Y + X")
    assert rep.branch == "zero" and "pi(p) reducible" not in dict(rep.witnesses)
    rep = prime_image_analysis(pi6, "X")
    assert rep.branch == "principal" and rep.passed


def test_going_down_witness():
    B, pi = ex65()
    A = retract_image(pi)
    hp, hq, q = going_down_witness(B, A, "X")
    assert (hp, hq) == (1, 2)
    assert q == Ideal(q.ring, ["t1", "t2"])
    assert oracles.krull_dim(["X"], ["X", "Y", "Z"]) == 2
    assert oracles.krull_dim(["t1", "t2"], ["t1", "t2"]) == 0


@pytest.mark.parametrize("images,p,expect", [
    ({"X": 1, "Y": "X*Y", "Z": "X*Z"}, ["X - 1", "Y"], ["t1"]),
    ({"X": 1, "Y": "X*Y", "Z": "X*Z"}, ["X - 1"], []),
    ({"Y": 0}, ["Y", "X"], ["t1"]),
    ({"Z": 0}, ["Z", "X*Y - 1"], ["t1*t2 - 1"]),
])
def test_image_of_prime_containing_kernel_is_contraction(images, p, expect):
    names = ["X", "Y", "Z"]
    B = PresentedRing(names)
    pi = verify_retraction(RingMap(B, B, images))
    A = retract_image(pi)
    Ar = A.presented_ring()
    P = Ideal(B, p)
    image = Ideal(Ar, [A.member(pi(g)).expression for g in P.generators])
    contraction = A.contract(P)
    assert image == contraction
    assert contraction == Ideal(Ar, expect)


def test_mu_examples():
    B = PresentedRing(["X", "Y", "Z"])
    assert mu_graded(Ideal(B, ["X*Y", "X*Z"])) == 2
    assert mu_graded(Ideal(PresentedRing(["X"]), ["X^2", "X^3"])) == 1
    assert mu_graded(Ideal(B, [])) == 0
    with pytest.raises(ValueError):
        mu_graded(Ideal(B, ["X + Y^2"]))


@pytest.mark.parametrize("gens", [["t1", "t2"], ["t1"], ["t1^2", "t1*t2"], ["t2", "t1*t2"]])
def test_mu_invariant_under_extension(gens):
    B, pi = ex65()
    A = retract_image(pi)
    J = Ideal(A.presented_ring(), gens)
    assert mu_graded(J, tag_weights(A)) == mu_graded(A.expand(J))


def test_eliminate_M1_to_base_gives_I(circle_patch):
    B, A, pi, rep = circle_patch
    cut = eliminate(rep.M[1], A.tags)
    R = B.base_ring()
    assert Ideal(R, [g.to_ring(R.free) for g in cut.generators]) == Ideal(R, ["a", "1 - b"])
