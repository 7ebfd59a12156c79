import pytest

from gpa.axioms import (BracketOracle, GeneratorOracle, InhomogeneousSampleError, NotLinearError,
                        Report, bracket_from_generator, check_antisymmetry,
                        check_exactness_and_bv, check_jacobi, check_leibniz, check_linearity,
                        check_seven_term, generator_bracket, monomial_bank, poisson_suite,
                        sample_tuples)
from gpa.calculus import Derivation, left_partial
from gpa.graded import Context
from gpa.schouten import ShiftedCotangent, bv_laplacian, shifted_bracket

SO3 = Context([("x1", 0), ("x2", 0), ("x3", 0)])


def so3_oracle(corrupt=None):
    x1, x2, x3 = SO3.gens()
    table = {("x1", "x2"): x3, ("x2", "x3"): x1, ("x3", "x1"): x2}
    if corrupt:
        table.update(corrupt)
    return BracketOracle.from_structure_constants(SO3, 0, table)


def banks(ctx, count=24, seed=0):
    return (sample_tuples(ctx, 2, count, seed), sample_tuples(ctx, 3, count, seed))


def test_sn_bracket_passes_suite():
    ctx = ShiftedCotangent(2, -1)
    pairs, triples = banks(ctx)
    assert all(r.passed for r in poisson_suite(BracketOracle.from_shifted(ctx), pairs, triples))


def test_even_bracket_on_even_elements_vanishes_on_diagonal():
    B = so3_oracle()
    for a in monomial_bank(SO3, 2):
        assert B(a, a).is_zero()


def test_flipped_sign_detected_by_antisymmetry():
    x1, x2, x3 = SO3.gens()
    B = so3_oracle({("x2", "x1"): x3})
    pairs = [(x1, x3), (x1, x2), (x2, x3)]
    r = check_antisymmetry(B, pairs)
    assert not r.passed and r.witness == 1
    assert r.worst == x3.scale(-2)


def test_jacobi_so3_and_corruption():
    pairs, triples = banks(SO3)
    assert check_jacobi(so3_oracle(), triples).passed
    x1, x2, x3 = SO3.gens()
    bad = so3_oracle({("x2", "x3"): x1 + x2})
    r = check_jacobi(bad, [(x1, x2, x3)])
    assert not r.passed and r.worst


def test_jacobi_with_unit_argument():
    B = so3_oracle()
    x1, x2, _ = SO3.gens()
    one = SO3.one()
    assert check_jacobi(B, [(one, x1, x2), (x1, one, x2), (x1, x2, one)]).passed


def test_leibniz_examples():
    pairs, triples = banks(SO3)
    assert check_leibniz(so3_oracle(), triples).passed
    zero = BracketOracle(0, lambda a, b: SO3.zero(), "explicit-table")
    assert check_leibniz(zero, triples).passed
    # bracket defined on generators only, with no extension to products
    x1, x2, x3 = SO3.gens()
    table = BracketOracle.from_table(SO3, 0, {((0,), (1,)): x3, ((1,), (0,)): -x3})
    r = check_leibniz(table, [(x1, x2, x2)])
    assert not r.passed


def test_inhomogeneous_sample_rejected():
    ctx = ShiftedCotangent(1, -1)
    x, xd = ctx.base(0), ctx.fiber(0)
    with pytest.raises(InhomogeneousSampleError):
        check_antisymmetry(BracketOracle.from_shifted(ctx), [(x + xd, x)])


def test_report_render():
    r = Report("jacobi", "pass", 64)
    assert r.render() == "identity=jacobi status=pass samples=64 max_residual=0"


# -- generators ---------------------------------------------------------------


EXT = Context([("t1", 1), ("t2", 1)])


def test_bracket_from_second_order_operator():
    t1, t2 = EXT.gens()
    D = GeneratorOracle(1, lambda f: left_partial(left_partial(f, "t2"), "t1"))
    assert bracket_from_generator(D, t1, t2) == EXT.one()


def test_derivation_has_no_defect():
    t1, t2 = EXT.gens()
    d = Derivation.complete(EXT, -1, {"t1": 1, "t2": 0})
    D = GeneratorOracle(1, d)
    for a in monomial_bank(EXT, 2):
        for b in monomial_bank(EXT, 2):
            assert bracket_from_generator(D, a, b).is_zero()


BV = ShiftedCotangent(2, -1)
BVD = GeneratorOracle(-1, lambda f: bv_laplacian(BV, f))


def test_bv_generator_reproduces_sn():
    for a, b in sample_tuples(BV, 2, 48, seed=3):
        assert bracket_from_generator(BVD, a, b) == shifted_bracket(BV, a, b)


def test_seven_term():
    _, triples = banks(BV)
    assert check_seven_term(BVD, triples).passed
    d = Derivation.complete(BV, 1, {"x1_dag": BV.gen("x1")})
    assert check_seven_term(GeneratorOracle(-1, d), triples).passed


def test_nonlinear_map_rejected():
    _, triples = banks(BV, 4)
    with pytest.raises(NotLinearError):
        check_seven_term(GeneratorOracle(-1, lambda f: f * f), triples)
    assert not check_linearity(GeneratorOracle(-1, lambda f: f * f + BV.one()),
                               [BV.gen(0)]).passed


def test_exactness_and_bv():
    pairs, triples = banks(BV)
    reports = check_exactness_and_bv(BVD, None, pairs, triples)
    assert [r.identity for r in reports] == ["exactness", "bracket_derivation", "generator",
                                             "antisymmetry", "jacobi", "leibniz"]
    assert all(r.passed for r in reports)
    reports = check_exactness_and_bv(BVD, BracketOracle.from_shifted(BV), pairs, triples)
    assert all(r.passed for r in reports)


def test_adding_a_derivation_keeps_the_bracket():
    d = Derivation.complete(BV, 1, {"x1_dag": BV.gen("x1") * BV.gen("x2"),
                                     "x2_dag": BV.gen("x2")})
    D2 = BVD.plus(d)
    for a, b in sample_tuples(BV, 2, 32, seed=5):
        assert bracket_from_generator(D2, a, b) == bracket_from_generator(BVD, a, b)


def test_non_exact_generator_skips_bracket_derivation():
    ctx = Context([("xi", 2), ("th", 1)])
    xi, th = ctx.gens()
    d_th = Derivation.partial(ctx, "th")
    th_dxi = Derivation.complete(ctx, -1, {"xi": th, "th": 0})
    D = GeneratorOracle(1, lambda f: d_th(f) + th_dxi(f))
    assert D(D(xi * th)) != ctx.zero()
    pairs = [(xi, th), (xi * th, xi)]
    reports = check_exactness_and_bv(D, None, pairs, [(xi, th, xi)])
    assert reports[0].identity == "exactness" and not reports[0].passed
    assert reports[1].status == "skipped" and reports[1].note == "not_exact"


def test_generated_bracket_is_poisson():
    pairs, triples = banks(BV, 16, seed=2)
    assert all(r.passed for r in poisson_suite(generator_bracket(BVD), pairs, triples))


def test_sample_banks_are_deterministic():
    a = sample_tuples(BV, 3, 10, seed=4)
    b = sample_tuples(BV, 3, 10, seed=4)
    assert a == b and all(x.is_homogeneous() for t in a for x in t)
