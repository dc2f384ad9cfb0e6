import pytest
from hypothesis import given, settings, strategies as st

import oracles
from ralab.graded import decompose
from ralab.ideals import PresentedRing, RingMap
from ralab.jets import (Jet, JetIdempotencyError, JetMap, NotACoordinateSystem, invert_coords,
                        jet_compose, jet_decompose)
from ralab.poly import PolyRing
from ralab.retract import verify_retraction
from strategies import coeffs, no_constant_polys, invertible_matrices, polys, render
from test_graded import _build, _monomials, conjugated_instances

XY = ["X", "Y"]


def jm(names, images, N):
    return JetMap(PolyRing(names), images, N)


def images_of(m):
    return [str(g) for g in m.images]


# -- arithmetic -------------------------------------------------------------------------

@given(polys(XY, 3, 3), polys(XY, 3, 3), polys(XY, 3, 3), st.integers(1, 5))
def test_jet_product_associative(f, g, h, N):
    R = PolyRing(XY)
    a, b, c = Jet(R(f), N), Jet(R(g), N), Jet(R(h), N)
    assert (a * b) * c == a * (b * c)
    want = oracles.truncate(oracles.sym(f"({f})*({g})*({h})"), XY, N)
    assert oracles.same(((a * b) * c).poly, oracles.text(want) if want != 0 else "0")


def test_compose_examples():
    ident = JetMap.identity(PolyRing(XY), 3)
    m = jm(XY, ["X + Y^2", "Y - X*Y"], 3)
    assert jet_compose(m, ident).images == m.images
    assert jet_compose(ident, m).images == m.images
    out = jet_compose(jm(XY, ["X + Y^2", "Y"], 2), jm(XY, ["X", "X"], 2))
    assert images_of(out) == ["X^2 + X", "X"]


jet_images = st.lists(no_constant_polys(XY, 3, 3), min_size=2, max_size=2)


@given(jet_images, jet_images, jet_images, st.integers(1, 5))
def test_compose_associative(a, b, c, N):
    A, B, C = (jm(XY, x, N) for x in (a, b, c))
    assert jet_compose(jet_compose(A, B), C).images == jet_compose(A, jet_compose(B, C)).images
    want = oracles.jet_compose(a, b, XY, N)
    got = jet_compose(A, B).images
    assert all(oracles.same(g, oracles.text(w) if w != 0 else "0") for g, w in zip(got, want))


# -- inversion --------------------------------------------------------------------------

def test_inverse_examples():
    inv = invert_coords(jm(XY, ["X", "Y - X^2"], 4))
    assert images_of(inv) == ["X", "X^2 + Y"]
    lin = invert_coords(jm(XY, ["2*X + Y", "X + Y"], 4))
    assert images_of(lin) == ["X - Y", "-X + 2*Y"]
    with pytest.raises(NotACoordinateSystem):
        invert_coords(jm(XY, ["X^2", "Y"], 4))


@st.composite
def coordinate_changes(draw, names=XY, N=5):
    n = len(names)
    lin = draw(invertible_matrices(n))
    extra = draw(st.lists(no_constant_polys(names, 3, 2, min_deg=2).map(
        lambda s: s if s == "0" else f"({s})"), min_size=n, max_size=n))
    images = []
    for i in range(n):
        linear = " + ".join(f"({lin[i][j]})*{names[j]}" for j in range(n) if lin[i][j])
        images.append(f"{linear} + {extra[i]}")
    return lin, extra, images


@given(coordinate_changes(), st.integers(1, 5))
def test_inverse_both_sides(change, N):
    _, _, images = change
    m = jm(XY, images, N)
    inv = invert_coords(m)
    ident = JetMap.identity(m.ring, N).images
    assert jet_compose(m, inv).images == ident
    assert jet_compose(inv, m).images == ident
    ref = oracles.jet_inverse(images, XY, N)
    assert all(oracles.same(g, oracles.text(r) if r != 0 else "0")
               for g, r in zip(inv.images, ref))


# -- decomposition ------------------------------------------------------------------------

def test_decompose_examples():
    split = jet_decompose(jm(XY, ["X", "X^2"], 4))
    assert split.report.passed and split.d == 1
    assert [str(y) for y in split.Y] == ["X", "-X^2 + Y"]
    assert all(not (q.support() - {"Y1"}) for q in split.image_in_Y)
    ident = jet_decompose(JetMap.identity(PolyRing(["X", "Y", "Z"]), 4))
    assert ident.d == 3 and [str(y) for y in ident.Y] == ["X", "Y", "Z"]
    split = jet_decompose(jm(XY, ["X", "0"], 4))
    assert split.d == 1 and [str(y) for y in split.Y] == ["X", "Y"]


def test_deterministic_instance_at_order_5():
    split = jet_decompose(jm(XY, ["X", "X^2"], 5))
    assert str(split.Y[1]) == "-X^2 + Y"


def test_decompose_rejects_non_idempotent():
    with pytest.raises(JetIdempotencyError):
        jet_decompose(jm(XY, ["X + Y", "Y"], 4))


@st.composite
def jet_instances(draw, N=5):
    n = draw(st.integers(1, 3))
    names = ["X", "Y", "Z"][:n]
    d = draw(st.integers(0, n))
    lin, extra, _ = draw(coordinate_changes(names, N))
    ynames = [f"Y{i + 1}" for i in range(d)]
    fs = []
    for _ in range(n - d):
        if d == 0:
            fs.append("0")
            continue
        picks = draw(st.lists(st.tuples(coeffs, st.sampled_from(_monomials(d, 3))), max_size=3))
        fs.append(render(ynames, picks))
    return names, lin, extra, d, fs


@settings(max_examples=50)
@given(jet_instances())
def test_random_jet_round_trip(inst):
    names, lin, extra, d, fs = inst
    N = 5
    images = oracles.conjugated_projection(names, lin, extra, d, fs, N)
    pi = JetMap(PolyRing(names), [oracles.text(g) if g != 0 else "0" for g in images], N)
    split = jet_decompose(pi)
    assert split.report.passed
    assert split.d == d


@settings(max_examples=20)
@given(conjugated_instances(max_n=3))
def test_graded_and_jet_agree(inst):
    names, images = _build(*inst)
    B = PresentedRing(names)
    graded = decompose(verify_retraction(RingMap(B, B, images)))
    jets = jet_decompose(JetMap(PolyRing(names), [images[n] for n in names], 6))
    assert graded.d == jets.d
