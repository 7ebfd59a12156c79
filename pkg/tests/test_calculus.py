from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gpa.calculus import (Derivation, MissingImageError, apply_derivation,
                          derivation_commutator, left_partial)
from gpa.graded import Context, GcPoly
from strategies import homogeneous, polys

ODD2 = Context([("t1", 1), ("t2", 1)])
MIXED = Context([("x", 0), ("t1", 1), ("y", 2), ("t2", -1)])


def sgn(k):
    return -1 if k % 2 else 1


def test_left_partial_examples():
    t1, t2 = ODD2.gens()
    assert left_partial(t1 * t2, "t1") == t2
    assert left_partial(t1 * t2, "t2") == -t1
    c = Context([("x", 0)])
    x = c.gen("x")
    assert left_partial(x * x, "x") == x.scale(2)


@settings(max_examples=80, deadline=None)
@given(polys(MIXED), st.integers(0, 3))
def test_left_partial_euler_oracle(p, g):
    # g * ∂_g p counts each occurrence of g once; the sign cancels for odd g
    counted = GcPoly(MIXED, {m: c * m.count(g) for m, c in p.terms.items()})
    assert MIXED.gen(g) * left_partial(p, g) == counted


@settings(max_examples=80, deadline=None)
@given(polys(MIXED), st.integers(0, 3), st.integers(0, 3))
def test_partials_graded_commute(p, g, h):
    s = sgn(MIXED.degree(g) * MIXED.degree(h))
    assert left_partial(left_partial(p, h), g) == left_partial(left_partial(p, g), h).scale(s)


@settings(max_examples=40, deadline=None)
@given(polys(MIXED))
def test_odd_partial_squares_to_zero(p):
    assert left_partial(left_partial(p, "t1"), "t1").is_zero()


def test_apply_derivation_examples():
    t1, t2 = ODD2.gens()
    assert Derivation.euler(ODD2)(t1 * t2) == (t1 * t2).scale(2)
    c = Context([("x", 0)])
    x = c.gen("x")
    D = Derivation(c, 0, {"x": 1})
    assert D(x * x * x) == (x * x).scale(3)
    c2 = Context([("x", 0), ("th", 1)])
    x, th = c2.gens()
    odd = Derivation(c2, -1, {"th": 1, "x": 0})
    assert odd(x * th) == x


def test_missing_image_and_degree_errors():
    c = Context([("x", 0), ("th", 1)])
    with pytest.raises(MissingImageError):
        Derivation(c, 0, {"x": 1})(c.gen("th"))
    with pytest.raises(ValueError):
        Derivation(c, 0, {"th": c.gen("x")})


def _random_derivation(draw, ctx, degree):
    images = {}
    for g in ctx:
        target = g.degree + degree
        pool = [GcPoly(ctx, {m: 1}) for m in _monos_of_degree(ctx, target)]
        if pool:
            picks = draw(st.lists(st.sampled_from(range(len(pool))), max_size=2))
            coeffs = draw(st.lists(st.integers(-2, 2), min_size=len(picks), max_size=len(picks)))
            img = ctx.zero()
            for k, cf in zip(picks, coeffs):
                img = img + pool[k].scale(cf)
        else:
            img = ctx.zero()
        images[g.id] = img
    return Derivation(ctx, degree, images)


def _monos_of_degree(ctx, d):
    from gpa.graded import monomials
    return [m for m in monomials(ctx, 2) if ctx.monomial_degree(m) == d]


derivations = st.composite(lambda draw: _random_derivation(draw, MIXED, draw(st.integers(-2, 2))))


@settings(max_examples=60, deadline=None)
@given(derivations(), homogeneous(MIXED), homogeneous(MIXED))
def test_leibniz(D, p, q):
    lhs = apply_derivation(D, p * q)
    rhs = D(p) * q + (p * D(q)).scale(sgn(D.degree * p.degree()))
    assert lhs == rhs


def test_commutator_examples():
    c = Context([("x", 0)])
    x = c.gen("x")
    dx = Derivation.partial(c, "x")
    xdx = Derivation(c, 0, {"x": x})
    assert derivation_commutator(dx, xdx) == dx
    c2 = Context([("th", 1)])
    th = c2.gen("th")
    dth = Derivation.partial(c2, "th")
    thdth = Derivation(c2, 0, {"th": th})
    assert derivation_commutator(dth, thdth) == dth


@settings(max_examples=40, deadline=None)
@given(derivations(), polys(MIXED, 2))
def test_commutator_acts_as_commutator(D, p):
    E = Derivation.partial(MIXED, "t1")
    lhs = derivation_commutator(D, E)(p)
    rhs = D(E(p)) - E(D(p)).scale(sgn(D.degree * E.degree))
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(derivations(), derivations(), derivations())
def test_commutator_jacobi(A, B, C):
    br = derivation_commutator
    s = sgn(A.degree * B.degree)
    assert br(A, br(B, C)) == br(br(A, B), C) + br(B, br(A, C)).scale(s)


def test_odd_self_commutator_is_twice_square():
    c = Context([("x", 0), ("th", 1)])
    x, th = c.gens()
    D = Derivation(c, 1, {"x": x * th, "th": Fraction(0)})
    sq = derivation_commutator(D, D)
    for g in c.gens():
        assert sq(g) == D(D(g)).scale(2)
