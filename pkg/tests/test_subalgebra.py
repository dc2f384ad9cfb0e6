import pytest
from hypothesis import given, settings, strategies as st

import oracles
from ralab.derivation import Derivation, check_lnd
from ralab.ideals import Ideal, PresentedRing, RingMap
from ralab.retract import retract_image, verify_retraction
from ralab.subalgebra import SubAlgebra, contract_ideal, member, presentation, trdeg
from strategies import nonzero_polys, polys

XYZ = ["X", "Y", "Z"]
XYZT = ["X", "Y", "Z", "T"]


@pytest.fixture
def B3():
    return PresentedRing(XYZ)


def test_member_examples(B3):
    A = SubAlgebra(B3, ["X*Y", "X*Z"])
    res = member("X*Y", A)
    assert res and str(res.expression) == "t1"
    assert not member("X", A)
    assert not oracles.in_subalgebra("X", ["X*Y", "X*Z"], XYZ)
    P = PresentedRing(XYZT)
    K = SubAlgebra(P, ["X", "Y", "X*T - Y*Z"])
    res = member("X^2*T - X*Y*Z", K)
    assert res and str(res.expression) == "t1*t3"
    assert oracles.same(oracles.sym("X*(X*T - Y*Z)"), "X^2*T - X*Y*Z")


def test_contract_examples(B3):
    A = SubAlgebra(B3, ["X*Y", "X*Z"])
    q = contract_ideal(Ideal(B3, ["X"]), A)
    assert q == Ideal(q.ring, ["t1", "t2"])
    P = PresentedRing(XYZT)
    K = SubAlgebra(P, ["X", "Y", "X*T - Y*Z"])
    q = contract_ideal(Ideal(P, ["X", "Y"]), K)
    assert q == Ideal(q.ring, ["t1", "t2", "t3"])
    assert q != Ideal(q.ring, ["t1", "t2"])
    assert contract_ideal(Ideal(B3, []), A).is_zero()


def test_presentation_examples(B3):
    pres = presentation(SubAlgebra(B3, ["X*Y", "X*Z"]))
    assert pres.kernel.is_zero() and pres.dimension == 2
    pres = presentation(SubAlgebra(PresentedRing(["X", "Y"]), ["X"]))
    assert pres.kernel.is_zero() and pres.dimension == 1
    B = PresentedRing(XYZ, ["X*Y - Z^2"])
    pres = presentation(SubAlgebra(B, ["X", "Y", "Z"]))
    assert pres.kernel == Ideal(pres.kernel.ring, ["t1*t2 - t3^2"])
    assert pres.dimension == 2
    graph = ["X*Y - Z^2", "t1 - X", "t2 - Y", "t3 - Z"]
    names = XYZ + ["t1", "t2", "t3"]
    assert oracles.as_set(oracles.eliminate(graph, names, XYZ), names) == \
        oracles.as_set(["t1*t2 - t3^2"], names)


def test_trdeg_examples(B3):
    assert trdeg(SubAlgebra(B3, ["X*Y", "X*Z"])) == 2
    assert trdeg(SubAlgebra(B3, ["X"])) == 1
    K = SubAlgebra(PresentedRing(XYZT), ["X", "Y", "X*T - Y*Z"])
    assert K.presentation().kernel.is_zero()
    assert trdeg(K) == 3


def test_trdeg_over_a_base():
    B = PresentedRing(["a", "b", "X", "Y"], ["a^2 + b^2 - 1"], base=["a", "b"])
    u, v = "a*Y + (1 - b)*X", "(1 + b)*Y + a*X"
    assert SubAlgebra(B, [u, v]).trdeg() == 1
    assert SubAlgebra(B, ["X", "Y"]).trdeg() == 2


def test_algebraic_witness_examples():
    B = PresentedRing(["X", "Y"], ["Y^2 - X^3"])
    A = SubAlgebra(B, ["X"])
    assert A.algebraic_witness_check("Y", "e^2 - t1^3") == "algebraic, outside A"
    assert A.algebraic_witness_check("X", "e - t1") == "inside A"
    free = SubAlgebra(PresentedRing(["X", "Y"]), ["X"])
    assert free.algebraic_witness_check("Y", "e^2 - t1^3") == "witness invalid"


def test_factorial_closure_examples():
    B = PresentedRing(XYZ, ["X*Y - Z^2"])
    A = SubAlgebra(B, ["X"])
    assert A.factorial_closure_witness_check("X", "X^2") == "pass"
    C = PresentedRing(["X", "Y"])
    assert SubAlgebra(C, ["X"]).factorial_closure_witness_check("Y", "Y") == "vacuous"
    Q = PresentedRing(["X"])
    assert SubAlgebra(Q, ["X^2"]).factorial_closure_witness_check("X", "X") == "fail"


@settings(max_examples=15)
@given(polys(XYZ, max_deg=2, max_terms=3), polys(XYZ, max_deg=2, max_terms=3))
def test_member_round_trip(p, q):
    B = PresentedRing(XYZ)
    gens = ["X*Y", "X*Z", "Y + Z^2"]
    A = SubAlgebra(B, gens)
    for cand in (B(p), B(p) + B(q)):
        res = A.member(cand)
        if res:
            assert A.evaluate(res.expression) == cand
        assert bool(res) == oracles.in_subalgebra(str(cand), gens, XYZ, max_weight=3)


@given(st.lists(st.integers(0, 2), min_size=3, max_size=3),
       st.lists(st.integers(0, 2), min_size=3, max_size=3))
def test_member_accepts_products_of_generators(e1, e2):
    B = PresentedRing(XYZ)
    gens = [B("X*Y"), B("X*Z"), B("Y + Z^2")]
    A = SubAlgebra(B, gens)
    f = B.free.one()
    for g, k in zip(gens, e1):
        f = f * g ** k
    h = B.free.one()
    for g, k in zip(gens, e2):
        h = h * g ** k
    res = A.member(f - 3 * h)
    assert res
    assert A.evaluate(res.expression) == f - 3 * h


@given(st.lists(nonzero_polys(XYZ, 2, 2), min_size=1, max_size=2))
def test_contracted_generators_lie_in_ideal(gens):
    B = PresentedRing(XYZ)
    A = SubAlgebra(B, ["X*Y", "X*Z"])
    I = Ideal(B, gens)
    q = A.contract(I)
    for g in q.generators:
        assert I.contains(A.evaluate(g))


@given(st.lists(nonzero_polys(XYZ, 2, 2), min_size=1, max_size=2), nonzero_polys(XYZ, 2, 2))
def test_trdeg_monotone(gens, extra):
    B = PresentedRing(XYZ)
    a = SubAlgebra(B, gens).trdeg()
    b = SubAlgebra(B, gens + [extra]).trdeg()
    assert a <= b <= a + 1


def _kernel_and_image():
    C = PresentedRing(["X", "Y"])
    D = Derivation(C, {"Y": 1})
    assert check_lnd(D).verified
    pi = verify_retraction(RingMap(C, C, {"Y": 0}))
    return C, retract_image(pi)


@given(polys(["X"], max_deg=2, max_terms=2), polys(["X", "Y"], max_deg=2, max_terms=3),
       st.integers(-2, 2))
def test_factorial_closure_of_lnd_kernel(p, q, c):
    C, A = _kernel_and_image()
    a, b = C(p) + c, C(p) * C(q) + 1
    for x, y in ((a, b), (a, a), (b, a)):
        if C.is_zero(x * y):
            continue
        assert A.factorial_closure_witness_check(x, y) in ("pass", "vacuous")
