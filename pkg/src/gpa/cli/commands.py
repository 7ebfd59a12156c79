"""Subcommands. Each returns a list of records and whether every check passed."""

from __future__ import annotations

from dataclasses import dataclass

from ..algebroid import IncompatiblePairError, koszul_bracket_forms, forms_bv_generator
from ..axioms import (BracketOracle, GeneratorOracle, Report, _collect, bracket_from_generator,
                      check_exactness_and_bv, check_linearity, check_seven_term, monomial_bank,
                      poisson_suite, sample_tuples)
from ..brst import (NotFirstClassError, extended_algebra, first_class_check,
                    rinehart_constraint_complex, witness_residuals)
from ..graded import render
from ..hochschild import Cochain, basis_index, gerstenhaber_bracket_hoch, hh_cohomology, hochschild_d
from ..schouten import (MasterEquationError, NotPoissonError, PoissonBivector, check_master_equation,
                        coordinate_bracket_table, derived_multibrackets, is_poisson_bivector,
                        poisson_bracket, shifted_bracket, total_degree, weight_components)
from .session import Session
from .syntax import SessionError, print_expr


@dataclass
class Record:
    fields: list  # [(key, value), ...]
    text: str | None = None

    def render(self) -> str:
        if self.text is not None:
            return self.text
        return " ".join(f"{k}={v}" for k, v in self.fields)


@dataclass
class Options:
    max_degree: int = 3
    seed: int = 0
    samples: int = 64


def _b(x: bool) -> str:
    return "true" if x else "false"


def _rep(r: Report) -> Record:
    return Record(r.fields())


def _reports(reports) -> tuple[list[Record], bool]:
    return [_rep(r) for r in reports], all(r.passed or r.status == "skipped" for r in reports)


# -- expressions -----------------------------------------------------------------


def cmd_eval(s: Session, opt: Options):
    env = s.main()
    out = [Record([("expr", print_expr(d.args[0])), ("value", render(env.eval(d.args[0])))])
           for d in s.ast.directives("eval")]
    return out, True


def cmd_sn_bracket(s: Session, opt: Options):
    ctx = s.shifted()
    env = s.main()
    out = []
    for d in s.ast.directives("bracket"):
        f, g = (env.eval(a) for a in d.args)
        out.append(Record([("f", print_expr(d.args[0])), ("g", print_expr(d.args[1])),
                           ("bracket", render(shifted_bracket(ctx, f, g)))]))
    return out, True


def cmd_check_poisson(s: Session, opt: Options):
    alpha = s.bivector()
    chk = is_poisson_bivector(alpha)
    fields = [("poisson", _b(chk.poisson)), ("skew", _b(chk.skew))]
    if chk.skew:
        fields.append(("cyclic", _b(chk.witness is None)))
        fields.append(("sn_residual", render(chk.sn_residual)))
    if chk.witness is not None:
        names = alpha.ctx.names()
        fields.append(("witness", ",".join(names[i] for i in chk.witness)))
        fields.append(("residual", render(chk.residual)))
    return [Record(fields)], chk.poisson


def cmd_master_eq(s: Session, opt: Options):
    ctx = s.shifted()
    env = s.main()
    out, ok = [], True
    for d in s.ast.directives("master"):
        r = check_master_equation(ctx, env.eval(d.args[0]))
        ok = ok and r.satisfied
        out.append(Record([("S", print_expr(d.args[0])), ("satisfied", _b(r.satisfied)),
                           ("residual", render(r.residual))]))
    return out, ok


def cmd_bv_check(s: Session, opt: Options):
    ctx = s.shifted()
    env = s.main()
    if env.delta is None:
        raise SessionError(1, 1, "bv-check needs an odd shift")
    D = GeneratorOracle(ctx.n, env.delta)
    B = BracketOracle.from_shifted(ctx)
    pairs = sample_tuples(ctx, 2, opt.samples, opt.seed, opt.max_degree)
    triples = sample_tuples(ctx, 3, opt.samples, opt.seed, max(1, opt.max_degree - 1))
    reports = [check_linearity(D, [x for p in pairs for x in p]), check_seven_term(D, triples)]
    reports += check_exactness_and_bv(D, None, pairs, triples)
    derived = BracketOracle(ctx.n, lambda a, b: bracket_from_generator(D, a, b))
    reports.append(_collect("generated_equals_bracket",
                            [derived(a, b) - B(a, b) for a, b in pairs]))
    out, ok = _reports(reports)
    for d in s.ast.directives("delta"):
        out.append(Record([("f", print_expr(d.args[0])), ("Delta", render(env.delta(env.eval(d.args[0]))))]))
    return out, ok


def cmd_axioms(s: Session, opt: Options):
    ctx = s.shifted()
    B = BracketOracle.from_shifted(ctx)
    table = coordinate_bracket_table(ctx)
    O = BracketOracle.from_structure_constants(
        ctx, ctx.n, {(a.name, b.name): table(a.id, b.id) for a in ctx for b in ctx if table(a.id, b.id)})
    pairs = sample_tuples(ctx, 2, opt.samples, opt.seed, opt.max_degree)
    triples = sample_tuples(ctx, 3, opt.samples, opt.seed, max(1, opt.max_degree - 1))
    reports = poisson_suite(B, pairs, triples)
    reports.append(_collect("oracle_agreement", [B(a, b) - O(a, b) for a, b in pairs]))
    return _reports(reports)


# -- algebroids and forms -----------------------------------------------------------


def _square_report(pair, D: int) -> Report:
    return _collect("delta_squared", [pair.differential(pair.differential(v))
                                      for v in monomial_bank(pair.forms, D)])


def cmd_algebroid_check(s: Session, opt: Options):
    pair = s.algebroid()
    reports = pair.check()
    if all(r.passed for r in reports):
        reports.append(_square_report(pair, opt.max_degree))
    return _reports(reports)


def cmd_algebroid_diff(s: Session, opt: Options):
    pair = s.algebroid()
    pair.require()
    env = s.algebroid_forms()
    out = []
    for d in s.ast.directives("diff"):
        out.append(Record([("xi", print_expr(d.args[0])),
                           ("d", render(pair.differential(env.eval(d.args[0]))))]))
    sq = _square_report(pair, opt.max_degree)
    out.append(_rep(sq))
    return out, sq.passed


def cmd_koszul_bracket(s: Session, opt: Options):
    alpha = s.bivector()
    alpha.require()
    env = s.forms()
    F = env.ctx
    D = GeneratorOracle(-1, lambda x: forms_bv_generator(alpha, x))
    bank = monomial_bank(F, opt.max_degree)
    m = len(F) // 2
    exact = _collect("exactness", [D(D(x)) for x in bank])
    ones = [x for x in bank if x.weight(range(m, 2 * m)) == {1}]
    pairs = [(a, b) for a in ones for b in ones]
    gen = _collect("generates_koszul", [bracket_from_generator(D, a, b) - koszul_bracket_forms(alpha, a, b)
                                        for a, b in pairs])
    out, ok = _reports([exact, gen])
    for d in s.ast.directives("koszul"):
        a, b = (env.eval(x) for x in d.args)
        out.append(Record([("w1", print_expr(d.args[0])), ("w2", print_expr(d.args[1])),
                           ("bracket", render(bracket_from_generator(D, a, b)))]))
    return out, ok


# -- Hochschild ---------------------------------------------------------------------


def cmd_hochschild(s: Session, opt: Options):
    A = s.algebra()
    mu = A.mu()
    mumu = gerstenhaber_bracket_hoch(mu, mu)
    assoc = A.is_associative()
    out = [Record([("dim", A.dim), ("associative", _b(assoc)), ("unit", "none" if A.unit is None else _b(A.check_unit())),
                   ("mu_mu_zero", _b(mumu.is_zero()))])]
    if not assoc:
        out.append(Record([("mu_mu", mumu.render())]))
        return out, False
    N = min(max(opt.max_degree, 1), 6)
    bad = 0
    total = 0
    for k in range(N):
        for key in basis_index(A.dim, k):
            total += 1
            if hochschild_d(hochschild_d(Cochain(A, k, {key: 1}))):
                bad += 1
    out.append(Record([("identity", "d_squared"), ("status", "pass" if not bad else "fail"),
                       ("samples", total), ("failures", bad)]))
    res = hh_cohomology(A, N)
    for k, dim in enumerate(res.dims):
        reps = [c.render() for c in res.representatives[k]]
        text = "\n".join([f"arity {k}: dim HH = {dim}"] + [f"  rep: {r}" for r in reps])
        out.append(Record([("arity", k), ("dim_HH", dim), ("reps", reps)], text))
    return out, not bad and A.check_unit()


# -- constraints -------------------------------------------------------------------


def _witness_record(i, j, q):
    return Record([("pair", f"g{i + 1},g{j + 1}"), ("witness", "[" + ", ".join(render(c) for c in q) + "]")])


def cmd_brst_extend(s: Session, opt: Options):
    cs = s.constraints()
    res = first_class_check(cs)
    out = [Record([("constraints", cs.r), ("first_class", _b(res.ok))])]
    if not res.ok:
        i, j = res.violation
        label = "H" if i == "H" else f"g{i + 1}"
        out.append(Record([("violation", f"{label},g{j + 1}"), ("remainder", render(res.remainder))]))
        return out, False
    for (i, j), q in sorted(res.witnesses.items()):
        if i < j:
            out.append(_witness_record(i, j, q))
    wit = _collect("witness_reproduces", witness_residuals(cs))
    out.append(_rep(wit))
    if res.hamiltonian is not None:
        out.append(Record([("hamiltonian", "first_class")]))
    E = extended_algebra(cs)
    for i in range(cs.r):
        b, c = E.momentum(i), E.ghost(i)
        out.append(Record([("pairing", f"{{b{i + 1},c{i + 1}}}"), ("value", render(E.bracket(b, c)))]))
    reports = E.check(opt.samples, opt.seed)
    recs, ok = _reports(reports)
    return out + recs, ok and wit.passed


def cmd_brst_rinehart(s: Session, opt: Options):
    cs = s.constraints()
    rc = rinehart_constraint_complex(cs, opt.max_degree)
    out, ok = _reports(rc.checks + [rc.square])
    out.append(Record([("invariant_dim", len(rc.invariants)), ("max_degree", rc.max_degree)]))
    for v in rc.invariants:
        out.append(Record([("invariant", render(v))]))
    out.append(Record([("note", "I/I^2 presented by constraint classes, regular sequence assumed")]))
    return out, ok and rc.passed


# -- derived brackets ------------------------------------------------------------


def cmd_derived_brackets(s: Session, opt: Options):
    ctx = s.shifted()
    env = s.main()
    alphas = s.ast.directives("alpha")
    if not alphas:
        raise SessionError(1, 1, "derived-brackets needs an @alpha directive")
    alpha = env.eval(alphas[0].args[0])
    comps = weight_components(ctx, alpha)
    tdeg = sorted(total_degree(ctx, alpha))
    out = [Record([("weights", ",".join(str(k) for k in comps)),
                   ("total_degree", ",".join(str(d) for d in tdeg))])]
    master = check_master_equation(ctx, alpha)
    out.append(Record([("master", _b(master.satisfied)), ("residual", render(master.residual))]))
    if not master.satisfied:
        return out, False
    lam = derived_multibrackets(ctx, alpha)
    lam0 = lam(0)
    out.append(Record([("lambda0", render(lam0))]))
    ok = True
    singles = [t[0] for t in sample_tuples(ctx, 1, opt.samples, opt.seed, opt.max_degree)]
    if not lam0:
        rep = _collect("lambda1_squared", [lam(1, lam(1, a)) for a in singles])
        out.append(_rep(rep))
        ok = rep.passed
    if set(comps) == {2} and not any(ctx.base_degrees):
        pb = PoissonBivector.from_multivector(ctx, alpha)
        base_pairs = sample_tuples(ctx, 2, opt.samples, opt.seed, opt.max_degree, ids=list(ctx.base_ids))
        rep = _collect("lambda2_poisson", [lam(2, a, b) - poisson_bracket(pb, a, b) for a, b in base_pairs])
        out.append(_rep(rep))
        ok = ok and rep.passed
    for d in s.ast.directives("lambda"):
        k = int(d.args[0].value)
        vals = [env.eval(a) for a in d.args[1:]]
        out.append(Record([("lambda", k), ("args", ", ".join(print_expr(a) for a in d.args[1:])),
                           ("value", render(lam(k, *vals)))]))
    return out, ok


COMMANDS = {
    "eval": cmd_eval,
    "sn-bracket": cmd_sn_bracket,
    "check-poisson": cmd_check_poisson,
    "master-eq": cmd_master_eq,
    "bv-check": cmd_bv_check,
    "algebroid-check": cmd_algebroid_check,
    "algebroid-diff": cmd_algebroid_diff,
    "koszul-bracket": cmd_koszul_bracket,
    "hochschild": cmd_hochschild,
    "brst-extend": cmd_brst_extend,
    "brst-rinehart": cmd_brst_rinehart,
    "derived-brackets": cmd_derived_brackets,
    "axioms": cmd_axioms,
}

# mathematical failures surfaced as exceptions by the library
CHECK_FAILURES = (NotPoissonError, MasterEquationError, NotFirstClassError, IncompatiblePairError)
