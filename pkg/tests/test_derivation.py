import pytest
from hypothesis import given, settings, strategies as st

import oracles
from ralab.derivation import (Derivation, ExpMap, NotLocallyNilpotent, apply_derivation,
                              check_exp_axioms, check_lnd, exp_from_lnd, exp_translation,
                              generator_guess, in_span, invariants_upto, same_span)
from ralab.ideals import PresentedRing
from ralab.subalgebra import SubAlgebra
from strategies import polys

XYZ = ["X", "Y", "Z"]


def ex43():
    B = PresentedRing(XYZ, ["X*Y - Z^2"])
    return B, Derivation(B, {"X": 0, "Z": "X", "Y": "2*Z"})


def circle():
    B = PresentedRing(["a", "b", "X", "Y"], ["a^2 + b^2 - 1"], base=["a", "b"])
    return B, Derivation(B, {"X": "a", "Y": "b - 1"})


def triangular(c, p, q, n):
    """``D(x1) = c``, ``D(x2) = p(x1)``, ``D(x3) = q(x1, x2)``."""
    names = ["x1", "x2", "x3"][:n]
    B = PresentedRing(names)
    images = {"x1": c}
    if n > 1:
        images["x2"] = p
    if n > 2:
        images["x3"] = q
    return B, Derivation(B, images), images


triangular_data = st.tuples(
    st.integers(-2, 2), polys(["x1"], 2, 2), polys(["x1", "x2"], 2, 3), st.integers(1, 3))


# -- apply_derivation ----------------------------------------------------------------

def test_apply_examples():
    B, D = ex43()
    got = apply_derivation(D, "Y*Z")
    assert B.equal(got, "2*Z^2 + X*Y")
    # X*Y reduces to Z^2, so the normal form collapses to one term
    assert str(got) == "3*Z^2"
    assert oracles.same(oracles.derive("Y*Z", {"Z": "X", "Y": "2*Z"}, XYZ), "2*Z^2 + X*Y")
    assert not D(7)
    C, E = circle()
    assert not E("a*Y + (1 - b)*X")
    assert not E("(1 + b)*Y + a*X")


def test_derivation_must_respect_relations():
    B = PresentedRing(XYZ, ["X*Y - Z^2"])
    with pytest.raises(ValueError):
        Derivation(B, {"X": 1})


@given(polys(XYZ, 2, 3), polys(XYZ, 2, 3))
def test_leibniz_free(f, g):
    B = PresentedRing(XYZ)
    D = Derivation(B, {"X": "Y^2", "Y": "Z", "Z": "1 + X"})
    lhs = D(B(f) * B(g))
    assert lhs == B(f) * D(g) + B(g) * D(f)
    assert oracles.same(lhs, oracles.derive(f"({f})*({g})", {"X": "Y^2", "Y": "Z", "Z": "1 + X"},
                                            XYZ))


@settings(max_examples=200)
@given(polys(XYZ, 2, 3), polys(XYZ, 2, 3))
def test_leibniz_quotient(f, g):
    B, D = ex43()
    assert B.equal(D(B(f) * B(g)), B(f) * D(g) + B(g) * D(f))


# -- check_lnd -----------------------------------------------------------------------

def test_check_lnd_examples():
    _, D = ex43()
    rep = check_lnd(D, 8)
    assert rep.verified and rep.orders == {"X": 1, "Z": 2, "Y": 3}
    zero = check_lnd(Derivation(PresentedRing(XYZ)), 8)
    assert zero.verified and set(zero.orders.values()) == {1}
    grow = check_lnd(Derivation(PresentedRing(["X"]), {"X": "X"}), 8)
    assert grow.verdict == "unknown" and grow.stuck == ["X"]
    assert check_lnd(D, 2).verdict == "unknown"


@given(triangular_data)
def test_verified_orders_respect_cap(data):
    B, D, _ = triangular(*data)
    rep = check_lnd(D, 8)
    assert rep.verified
    for name, k in rep.orders.items():
        assert k <= 8
        assert not D.power(name, k)


# -- exponential maps -----------------------------------------------------------------

def test_exp_examples():
    Q = PresentedRing(["x"])
    phi = exp_from_lnd(Derivation(Q, {"x": 1}))
    assert phi("x") == phi.ext(f"x + {phi.tag}")
    B, D = ex43()
    phi = exp_from_lnd(D)
    T = phi.tag
    assert phi.ext.equal(phi("Y"), f"Y + 2*Z*{T} + X*{T}^2")
    assert phi.ext.equal(phi("Z"), f"Z + X*{T}")
    assert phi.ext.equal(phi("X"), "X")
    for v in XYZ:
        direct = oracles.exp_series(v, {"Z": "X", "Y": "2*Z"}, XYZ, tag=T)
        assert phi.ext.equal(phi(v), oracles.text(direct))
    assert exp_from_lnd(Derivation(PresentedRing(XYZ))).is_identity()


def test_exp_requires_verified_lnd():
    with pytest.raises(NotLocallyNilpotent):
        exp_from_lnd(Derivation(PresentedRing(["X"]), {"X": "X"}), cap=5)


def test_exp_axiom_examples():
    Q = PresentedRing(["x"])
    assert check_exp_axioms(ExpMap(Q, {"x": "x + U"}, tag="U")).passed
    bad = check_exp_axioms(ExpMap(Q, {"x": "x + x*U"}, tag="U"))
    assert bad.status == "fail"
    assert bad.witness("axiom").startswith("(ii)")
    assert bad.witness("generator") == "x"
    # (x + xU)(1 + V) - (x + x(U + V)) = xUV; the checker's first tag avoids the name U
    assert bad.witness("difference") == "x*U2*V"
    assert check_exp_axioms(ExpMap(Q, {"x": "x"}, tag="U")).passed


@given(triangular_data)
def test_exp_of_random_triangular_lnd_obeys_axioms(data):
    B, D, images = triangular(*data)
    phi = exp_from_lnd(D)
    assert check_exp_axioms(phi).passed
    for v in B.names:
        direct = oracles.exp_series(v, {k: str(B(x)) for k, x in images.items()}, B.names,
                                    tag=phi.tag)
        assert phi.ext.equal(phi(v), oracles.text(direct))


def test_circle_exp_obeys_axioms():
    _, D = circle()
    assert check_exp_axioms(exp_from_lnd(D)).passed


# -- invariants -----------------------------------------------------------------------

def test_invariant_examples():
    B, D = ex43()
    assert same_span(invariants_upto(D, 3), [B(f"X^{i}") for i in range(4)])
    P = PresentedRing(["X", "Y", "Z", "T"])
    R = Derivation(P, {"Z": "X", "T": "Y"})
    assert in_span(P("X*T - Y*Z"), invariants_upto(R, 2))
    assert oracles.derive("X*T - Y*Z", {"Z": "X", "T": "Y"}, ["X", "Y", "Z", "T"]) == 0
    zero = invariants_upto(Derivation(PresentedRing(XYZ)), 1)
    assert len(zero) == 4


def test_generator_guess_recovers_kernel():
    P = PresentedRing(["X", "Y", "Z", "T"])
    R = Derivation(P, {"Z": "X", "T": "Y"})
    guess = generator_guess(P, invariants_upto(R, 3))
    assert guess.covered
    assert SubAlgebra(P, guess.generators).contains_generators_of(
        SubAlgebra(P, ["X", "Y", "X*T - Y*Z"]))


@given(triangular_data, st.integers(1, 3))
def test_exp_and_kernel_give_same_invariants(data, d):
    B, D, _ = triangular(*data)
    a = invariants_upto(D, d)
    b = invariants_upto(exp_from_lnd(D), d)
    assert same_span(a, b)
    for f in a:
        assert not D(f)


@given(triangular_data)
def test_invariants_form_a_subring(data):
    B, D, _ = triangular(*data)
    basis = invariants_upto(D, 3)
    for f in basis:
        for g in basis:
            h = f * g
            if h.total_degree() <= 3:
                assert in_span(h, basis)


@given(triangular_data, polys(["x1"], 2, 2), polys(["x1"], 2, 2))
def test_kernel_is_factorially_closed(data, p, q):
    B, D, _ = triangular(*data)
    gens = [f for f in invariants_upto(D, 2) if not f.is_constant()]
    if not gens:
        return
    A = SubAlgebra(B, gens)
    x, y = B(p), B(q)
    pairs = [(x, x), (x, y), (gens[0] + 1, gens[-1]), (gens[0] * x, gens[-1])]
    for a, b in pairs:
        if B.is_zero(a * b):
            continue
        assert A.factorial_closure_witness_check(a, b) in ("pass", "vacuous")


# -- exp_translation --------------------------------------------------------------------

def test_translation_examples():
    R = PresentedRing(["x", "F"])
    res = exp_translation(R, ["x"], "F", "x", 1)
    assert res.report.passed
    assert res.phi("F") == res.phi.ext(f"F + x*{res.phi.tag}")
    unit = exp_translation(R, ["x"], "F", 1, 1)
    assert unit.report.passed and unit.least_m == 0


def test_translation_circle():
    B, _ = circle()
    u, v = "a*Y + (1 - b)*X", "(1 + b)*Y + a*X"
    F = "a*Y - (1 + b)*X"
    res = exp_translation(B, [u, v], F, "a", 1)
    assert res.report.passed and res.least_m == 1
    U = res.phi.tag
    # independent check with sympy: phi fixes u, v and shifts F by a*U, modulo the circle
    images = {"X": oracles.sym(res.phi("X")), "Y": oracles.sym(res.phi("Y"))}
    circle_rel = ["a^2 + b^2 - 1"]
    names = ["a", "b", "X", "Y", U]
    for g, want in ((u, u), (v, v), (F, f"{F} + a*{U}")):
        img = oracles.sym(g).subs({oracles.sym("X"): images["X"], oracles.sym("Y"): images["Y"]},
                                  simultaneous=True)
        assert oracles.nf(str(img - oracles.sym(want)), circle_rel, names) == 0


def test_translation_rejects_algebraic_F():
    R = PresentedRing(["x", "F"])
    with pytest.raises(ValueError):
        exp_translation(R, ["x", "F"], "F^2", "x", 1)
