import pytest
import sympy

from gpa.brst import (ConstraintSystem, IdealReducer, NotFirstClassError, angular_momentum,
                      canonical_bracket, divide, extended_algebra, first_class_check,
                      invariant_functions, phase_space, reduced_pair, require_first_class,
                      rinehart_constraint_complex, second_class_pair, single_position,
                      witness_residuals)
from gpa.graded import render
from gpa.linalg import rank
from gpa.axioms import sample_tuples
from oracles import to_sympy


def sympy_canonical(f, g, m):
    q = sympy.symbols([f"q{i + 1}" for i in range(m)])
    p = sympy.symbols([f"p{i + 1}" for i in range(m)])
    return sympy.expand(sum(sympy.diff(f, q[i]) * sympy.diff(g, p[i])
                            - sympy.diff(g, q[i]) * sympy.diff(f, p[i]) for i in range(m)))


def test_canonical_bracket_against_sympy():
    ctx = phase_space(2)
    for f, g in sample_tuples(ctx, 2, 30, seed=8):
        assert to_sympy(canonical_bracket(f, g)) == sympy_canonical(to_sympy(f), to_sympy(g), 2)
    assert canonical_bracket(ctx.gen("q1"), ctx.gen("p1")) == ctx.one()


def test_division_reconstructs():
    ctx = phase_space(2)
    q1, q2, p1, p2 = (ctx.gen(n) for n in ("q1", "q2", "p1", "p2"))
    divisors = [q1 * p2 - q2 * p1, q1 + p1 * p1]
    for f in [q1 * q1 * p2, q1 * q2 * p1 * p2 + q2, p1 ** 3 + q1]:
        quots, rem = divide(f, divisors)
        tot = rem
        for a, d in zip(quots, divisors):
            tot = tot + a * d
        assert tot == f


def test_first_class_examples():
    assert first_class_check(single_position(2)).ok
    res = first_class_check(angular_momentum())
    assert res.ok
    for (i, j), q in res.witnesses.items():
        assert all(not c or c.degree() == 0 and set(c.terms) == {()} for c in q)
    assert all(r.is_zero() for r in witness_residuals(angular_momentum()))
    # {L1, L2} = L3
    assert [render(c) for c in res.witnesses[0, 1]] == ["0", "0", "1"]


def test_second_class_violation():
    res = first_class_check(second_class_pair())
    assert not res.ok and res.violation == (0, 1) and res.remainder == res.remainder.ctx.one()
    assert res.render() == "first_class=false pair=g1,g2 remainder=1"
    with pytest.raises(NotFirstClassError):
        require_first_class(second_class_pair())
    with pytest.raises(NotFirstClassError):
        extended_algebra(second_class_pair())


def test_hamiltonian_check():
    ctx = phase_space(3)
    H = sum((ctx.gen(f"p{i}") ** 2 for i in (1, 2, 3)), ctx.zero())
    cs = angular_momentum()
    ok = ConstraintSystem(3, cs.constraints, hamiltonian=H, ctx=cs.ctx)
    assert first_class_check(ok).ok
    bad = ConstraintSystem(3, cs.constraints, hamiltonian=ctx.gen("p1"), ctx=cs.ctx)
    res = first_class_check(bad)
    assert not res.ok and res.violation[0] == "H"


def test_extended_algebra():
    E = extended_algebra(angular_momentum())
    c1, c2, b1, b2 = E.ghost(0), E.ghost(1), E.momentum(0), E.momentum(1)
    assert E.bracket(c1, c2).is_zero() and E.bracket(b1, b2).is_zero()
    assert E.bracket(b1, c1) == E.ctx.one() and E.bracket(c1, b1) == E.ctx.one()
    assert E.bracket(b1, c2).is_zero()
    P = angular_momentum().ctx
    for f, g in sample_tuples(P, 2, 20, seed=1):
        assert E.bracket(E.embed(f), E.embed(g)) == E.embed(canonical_bracket(f, g))
    assert all(r.passed for r in E.check(32))


def test_reduced_pair_single_constraint():
    pair = reduced_pair(single_position(1))
    p1 = pair.base.gen("p1")
    assert pair.act(0, p1) == pair.base.one()
    assert pair.act(0, p1 * p1) == p1.scale(2)
    assert all(not v for vec in pair.c.values() for v in vec)
    assert pair.verified


def test_reduced_pair_angular_is_so3():
    pair = reduced_pair(angular_momentum())
    assert pair.verified
    assert [render(v) for v in pair.c[0, 1]] == ["0", "0", "1"]
    assert [render(v) for v in pair.c[1, 2]] == ["1", "0", "0"]


def test_ideal_reducer_is_canonical():
    cs = angular_momentum()
    red = IdealReducer(cs.ctx, cs.constraints)
    for g in cs.constraints:
        assert red.contains(g)
        assert red.contains(g * cs.ctx.gen("q1"))
    q1 = cs.ctx.gen("q1")
    assert not red.contains(q1)


def _sympy_invariant(f, cs):
    m = cs.m
    gens = [to_sympy(g) for g in cs.constraints]
    syms = sympy.symbols([g.name for g in cs.ctx.generators])
    G = sympy.groebner(gens, *syms, order="grevlex")
    return all(G.reduce(sympy_canonical(to_sympy(g), to_sympy(f), m))[1] == 0 for g in cs.constraints)


@pytest.mark.parametrize("cs,dim", [(single_position(1), 1), (single_position(2), 6),
                                    (angular_momentum(), 4)])
def test_invariants(cs, dim):
    comp = rinehart_constraint_complex(cs, 2)
    assert comp.passed
    assert len(comp.invariants) == dim
    for f in comp.invariants:
        assert _sympy_invariant(f, cs)


def test_invariants_angular_span_rotation_scalars():
    cs = angular_momentum()
    pair = reduced_pair(cs)
    ctx = cs.ctx
    q = [ctx.gen(f"q{i}") for i in (1, 2, 3)]
    p = [ctx.gen(f"p{i}") for i in (1, 2, 3)]
    want = [sum((a * b for a, b in zip(u, v)), ctx.zero()) for u, v in ((q, q), (q, p), (p, p))]
    inv = invariant_functions(pair, 2)
    keys = sorted({m for f in inv + want for m in pair.reduce(f).terms})
    idx = {k: i for i, k in enumerate(keys)}

    def cols(fs):
        return [{idx[m]: c for m, c in pair.reduce(f).terms.items()} for f in fs]

    assert rank(cols(inv)) == rank(cols(inv + want)) == 4


def test_complex_render_notes_assumption():
    text = rinehart_constraint_complex(single_position(1), 1).render()
    assert "identity=delta_squared status=pass" in text
    assert "regular sequence assumed" in text
