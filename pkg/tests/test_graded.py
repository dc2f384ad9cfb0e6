from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

import oracles
from ralab.graded import check_graded_preconditions, decompose, linear_idempotent
from ralab.ideals import PresentedRing, RingMap
from ralab.retract import retract_image, verify_retraction
from strategies import coeffs, invertible_matrices, render

half = Fraction(1, 2)


def retraction(names, images):
    B = PresentedRing(names)
    return verify_retraction(RingMap(B, B, images))


def test_precondition_examples():
    assert check_graded_preconditions(retraction(["X", "Y"], {"Y": "X^2"})).passed
    bad = check_graded_preconditions(retraction(["X", "Y"], {"Y": "X^2 + 1"}))
    assert bad.status == "fail"
    assert bad.witness("condition").startswith("(a)")
    assert bad.witness("constant term") == "1"
    # the image is graded although pi is not a graded map
    assert check_graded_preconditions(retraction(["X", "Y"], {"Y": "X + X^2"})).passed


def test_linear_part_examples():
    assert linear_idempotent(retraction(["X", "Y"], {"Y": "X^2"})) == [[1, 0], [0, 0]]
    assert linear_idempotent(retraction(["X", "Y"], {})) == [[1, 0], [0, 1]]
    P = linear_idempotent(retraction(["X", "Y"], {"X": "1/2*X + 1/2*Y", "Y": "1/2*X + 1/2*Y"}))
    assert P == [[half, half], [half, half]]
    assert sympy.Matrix(P).rank() == 1


def test_decompose_examples():
    split = decompose(retraction(["X", "Y"], {"Y": "X^2"}))
    assert split.report.passed and split.d == 1
    assert [str(y) for y in split.Y] == ["X", "Y"]
    assert split.report.witness("A") == "Q[Y1]"
    ident = decompose(retraction(["X", "Y", "Z"], {}))
    assert ident.d == 3 and ident.sigma == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    split = decompose(retraction(["X", "Y"], {"Y": "X^2 + X^3"}))
    assert split.report.passed and split.d == 1 and str(split.Y[0]) == "X"


def test_decompose_rejects_failed_preconditions():
    with pytest.raises(ValueError):
        decompose(retraction(["X", "Y"], {"Y": "X^2 + 1"}))


def _monomials(d, deg):
    """Exponent vectors in ``d`` variables of total degree 1..deg."""
    out = []

    def rec(prefix, left):
        if len(prefix) == d:
            if 0 < sum(prefix):
                out.append(tuple(prefix))
            return
        for k in range(left + 1):
            rec(prefix + [k], left - k)

    rec([], deg)
    return out


@st.composite
def conjugated_instances(draw, max_n=4, max_deg=3):
    n = draw(st.integers(1, max_n))
    d = draw(st.integers(0, n))
    sigma = draw(invertible_matrices(n))
    ynames = [f"Y{i + 1}" for i in range(d)]
    fs = []
    for _ in range(n - d):
        if d == 0:
            fs.append("0")
            continue
        mons = _monomials(d, max_deg)
        picks = draw(st.lists(st.tuples(coeffs, st.sampled_from(mons)), max_size=3))
        fs.append(render(ynames, picks))
    return n, d, sigma, fs


def _build(n, d, sigma, fs):
    names = ["X", "Y", "Z", "W"][:n]
    images = oracles.conjugated_projection(names, sigma, ["0"] * n, d, fs)
    return names, {x: oracles.text(g) for x, g in zip(names, images)}


@settings(max_examples=100)
@given(conjugated_instances())
def test_random_round_trip(inst):
    n, d, sigma, fs = inst
    names, images = _build(n, d, sigma, fs)
    pi = retraction(names, images)
    assert check_graded_preconditions(pi).passed
    split = decompose(pi)
    assert split.report.passed
    assert split.d == d
    P = sympy.Matrix(split.P)
    assert P * P == P
    assert P.rank() + (sympy.eye(n) - P).rank() == n
    assert split.d == retract_image(pi).trdeg()


def test_idempotent_matrix_oracle():
    # the constructed linear part is sigma^-1 diag(1..1, 0..0) sigma, independent of the fs
    sigma = [[1, 2, 0], [0, 1, 1], [1, 0, 1]]
    names, images = _build(3, 2, sigma, ["Y1*Y2"])
    P = linear_idempotent(retraction(names, images))
    S = sympy.Matrix(sigma)
    E = sympy.diag(1, 1, 0)
    assert sympy.Matrix(P) == S.inv() * E * S
