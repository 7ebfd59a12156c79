"""Constraint systems on a polynomial phase space and their algebraic skeleton.

Phase space is ``Q[q1..qm, p1..pm]`` with ``{q_i, p_j} = δ_ij``. Constraints
``g_1..g_r`` are first class when every ``{g_i, g_j}`` divides out by the
``g_k`` with zero remainder; the quotients are kept as witnesses.

Ghosts ``c1..cr`` sit in degree +1 and ghost momenta ``b1..br`` in degree -1,
paired by ``{b_i, c_j} = δ_ij``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebroid import LieRinehartPair, lift
from .axioms import BracketOracle, Report, _collect, monomial_bank, poisson_suite, sample_tuples
from .calculus import left_partial
from .graded import Context, ContextError, GcPoly, monomials, render
from .linalg import Echelon, nullspace


class NotFirstClassError(ValueError):
    def __init__(self, pair, remainder: GcPoly):
        i, j = pair
        label = "H" if i == "H" else f"g{i + 1}"
        super().__init__(f"{{{label},g{j + 1}}} leaves remainder {render(remainder)}")
        self.pair = pair
        self.remainder = remainder


def phase_space(m: int) -> Context:
    return Context([(f"q{i + 1}", 0) for i in range(m)] + [(f"p{i + 1}", 0) for i in range(m)])


def canonical_bracket(f: GcPoly, g: GcPoly) -> GcPoly:
    """``Σ_i ∂_q f ∂_p g - ∂_p f ∂_q g`` on the leading ``2m`` even generators."""
    ctx = f.ctx
    m = _half(ctx)
    out = ctx.zero()
    for i in range(m):
        out = out + left_partial(f, i) * left_partial(g, m + i) - left_partial(f, m + i) * left_partial(g, i)
    return out


def _half(ctx: Context) -> int:
    k = 0
    while k < len(ctx) and ctx.generators[k].name.startswith("q"):
        k += 1
    return k


# -- polynomial division -------------------------------------------------------


def _exponents(mono, nvars):
    e = [0] * nvars
    for i in mono:
        e[i] += 1
    return tuple(e)


def _mono(exps):
    return tuple(i for i, k in enumerate(exps) for _ in range(k))


def _lead(p: dict):
    """Leading exponent under lex with the first generator largest."""
    return max(p)


def divide(f: GcPoly, divisors: Sequence[GcPoly]) -> tuple[list[GcPoly], GcPoly]:
    """Multivariate division in lex order; returns quotients and remainder.

    The remainder depends on the divisor order unless the divisors form a
    Gröbner basis, so a nonzero remainder is only conclusive for such inputs.
    """
    ctx = f.ctx
    nv = len(ctx)
    rest = {_exponents(m, nv): c for m, c in f.terms.items()}
    divs = []
    for g in divisors:
        d = {_exponents(m, nv): c for m, c in g.terms.items()}
        if not d:
            raise ValueError("division by the zero polynomial")
        lt = _lead(d)
        divs.append((lt, d[lt], d))
    quots = [dict() for _ in divisors]
    rem: dict = {}
    while rest:
        lt = _lead(rest)
        lc = rest[lt]
        for k, (glt, glc, g) in enumerate(divs):
            if all(a >= b for a, b in zip(lt, glt)):
                shift = tuple(a - b for a, b in zip(lt, glt))
                c = lc / glc
                quots[k][shift] = quots[k].get(shift, 0) + c
                for e, v in g.items():
                    key = tuple(a + b for a, b in zip(e, shift))
                    w = rest.get(key, 0) - c * v
                    if w:
                        rest[key] = w
                    else:
                        rest.pop(key, None)
                break
        else:
            rem[lt] = lc
            del rest[lt]
    return ([GcPoly(ctx, {_mono(e): c for e, c in q.items()}) for q in quots],
            GcPoly(ctx, {_mono(e): c for e, c in rem.items()}))


# -- sympy bridge for ideal normal forms ------------------------------------------


def _to_sympy(p: GcPoly, syms):
    import sympy

    expr = sympy.Integer(0)
    for mono, c in p.terms.items():
        t = sympy.Rational(c.numerator, c.denominator)
        for i in mono:
            t *= syms[i]
        expr += t
    return expr


def _from_sympy(expr, syms, ctx: Context) -> GcPoly:
    import sympy

    poly = sympy.Poly(expr, *syms, domain="QQ")
    terms = {}
    for exps, c in poly.terms():
        c = sympy.Rational(c)
        terms[_mono(exps)] = Fraction(int(c.p), int(c.q))
    return GcPoly(ctx, terms)


class IdealReducer:
    """Canonical normal forms modulo an ideal via a lex Gröbner basis."""

    def __init__(self, ctx: Context, gens: Sequence[GcPoly]):
        import sympy  # loaded lazily: it dominates start-up time

        self.ctx = ctx
        self.syms = sympy.symbols([g.name for g in ctx.generators])
        exprs = [_to_sympy(g, self.syms) for g in gens if g]
        self.basis = sympy.groebner(exprs, *self.syms, order="lex", domain="QQ") if exprs else None
        self._cache: dict = {}

    def __call__(self, p: GcPoly) -> GcPoly:
        if self.basis is None or not p:
            return p
        key = p
        hit = self._cache.get(key)
        if hit is None:
            _, r = self.basis.reduce(_to_sympy(p, self.syms))
            hit = _from_sympy(r, self.syms, self.ctx)
            self._cache[key] = hit
        return hit

    def contains(self, p: GcPoly) -> bool:
        return not self(p)


# -- constraint systems -------------------------------------------------------------


@dataclass
class FirstClassResult:
    ok: bool
    witnesses: dict = field(default_factory=dict)  # (i, j) -> [C^k_ij]
    violation: tuple | None = None
    remainder: GcPoly | None = None
    hamiltonian: dict | None = None  # i -> [V^k_i] with {H, g_i} = Σ V^k_i g_k

    def render(self) -> str:
        if self.ok:
            return "first_class=true"
        i, j = self.violation
        label = "H" if i == "H" else f"g{i + 1}"
        return f"first_class=false pair={label},g{j + 1} remainder={render(self.remainder)}"


class ConstraintSystem:
    def __init__(self, m: int, constraints: Sequence, hamiltonian=None, ctx: Context | None = None):
        self.m = m
        self.ctx = ctx if ctx is not None else phase_space(m)
        self.constraints = [self._poly(g) for g in constraints]
        self.hamiltonian = None if hamiltonian is None else self._poly(hamiltonian)
        self._first_class: FirstClassResult | None = None

    def _poly(self, g) -> GcPoly:
        if isinstance(g, GcPoly):
            if g.ctx != self.ctx:
                raise ContextError("constraint lives in a different context")
            return g
        return self.ctx.const(g)

    @property
    def r(self) -> int:
        return len(self.constraints)

    def bracket(self, f: GcPoly, g: GcPoly) -> GcPoly:
        return canonical_bracket(f, g)


def first_class_check(cs: ConstraintSystem) -> FirstClassResult:
    """Divide every ``{g_i, g_j}`` (and ``{H, g_i}`` if given) by the constraints."""
    if cs._first_class is not None:
        return cs._first_class
    g = cs.constraints
    wit = {}
    res = None
    for i in range(cs.r):
        for j in range(i, cs.r):
            q, rem = divide(cs.bracket(g[i], g[j]), g)
            if rem:
                res = FirstClassResult(False, wit, (i, j), rem)
                break
            wit[i, j] = q
            wit[j, i] = [-x for x in q]
        if res is not None:
            break
    if res is None:
        ham = None
        if cs.hamiltonian is not None:
            ham = {}
            for i in range(cs.r):
                q, rem = divide(cs.bracket(cs.hamiltonian, g[i]), g)
                if rem:
                    res = FirstClassResult(False, wit, ("H", i), rem)
                    break
                ham[i] = q
        if res is None:
            res = FirstClassResult(True, wit, hamiltonian=ham)
    cs._first_class = res
    return res


def require_first_class(cs: ConstraintSystem) -> FirstClassResult:
    res = first_class_check(cs)
    if not res.ok:
        raise NotFirstClassError(res.violation, res.remainder)
    return res


def witness_residuals(cs: ConstraintSystem) -> list[GcPoly]:
    """``Σ_k C^k_ij g_k - {g_i, g_j}`` for every stored witness."""
    res = first_class_check(cs)
    g = cs.constraints
    out = []
    for (i, j), q in sorted(res.witnesses.items()):
        tot = cs.ctx.zero()
        for k, c in enumerate(q):
            tot = tot + c * g[k]
        out.append(tot - cs.bracket(g[i], g[j]))
    return out


# -- extended phase space -------------------------------------------------------------


@dataclass
class ExtendedAlgebra:
    cs: ConstraintSystem
    ctx: Context
    bracket: BracketOracle

    def ghost(self, i: int) -> GcPoly:
        return self.ctx.gen(f"c{i + 1}")

    def momentum(self, i: int) -> GcPoly:
        return self.ctx.gen(f"b{i + 1}")

    def embed(self, f: GcPoly) -> GcPoly:
        return lift(f, self.ctx)

    def check(self, count: int = 64, seed: int = 0) -> list[Report]:
        pairs = sample_tuples(self.ctx, 2, count, seed, max_len=3)
        triples = sample_tuples(self.ctx, 3, count, seed, max_len=2)
        out = poisson_suite(self.bracket, pairs, triples)
        deg = []
        for a, b in pairs:
            v = self.bracket(a, b)
            bad = v and v.degree() != a.degree() + b.degree()
            deg.append(v if bad else self.ctx.zero())
        out.append(_collect("bracket_degree", deg))
        return out


def extended_algebra(cs: ConstraintSystem) -> ExtendedAlgebra:
    """``S(Ψ*[-1] ⊕ Ψ[1]) ⊗ P`` with the canonical bracket plus ``{b_i, c_j} = δ_ij``."""
    require_first_class(cs)
    base = [(g.name, g.degree) for g in cs.ctx.generators]
    r = cs.r
    ctx = Context(base + [(f"c{i + 1}", 1) for i in range(r)] + [(f"b{i + 1}", -1) for i in range(r)])
    table = {}
    for i in range(cs.m):
        table[f"q{i + 1}", f"p{i + 1}"] = 1
    for i in range(r):
        table[f"b{i + 1}", f"c{i + 1}"] = 1
    return ExtendedAlgebra(cs, ctx, BracketOracle.from_structure_constants(ctx, 0, table))


# -- Lie–Rinehart pair and its complex ------------------------------------------------


def reduced_pair(cs: ConstraintSystem) -> LieRinehartPair:
    """``(P/I, I/I²)`` presented by the classes ``[g_i]`` with witness structure functions.

    Presumes the constraints form a regular sequence, so the classes are a
    free frame of ``I/I²``.
    """
    res = require_first_class(cs)
    ctx, g = cs.ctx, cs.constraints
    reducer = IdealReducer(ctx, g)
    action = [[reducer(cs.bracket(g[k], ctx.gen(a))) for a in range(len(ctx))] for k in range(cs.r)]
    structure = {(i, j): [reducer(c) for c in res.witnesses[i, j]]
                 for i in range(cs.r) for j in range(cs.r)}
    names = [f"g{k + 1}" for k in range(cs.r)]
    return LieRinehartPair(ctx, action, structure, names, [f"{nm}_star" for nm in names],
                           reduce=reducer, ideal=g)


@dataclass
class RinehartComplex:
    pair: LieRinehartPair
    max_degree: int
    square: Report
    invariants: list[GcPoly]
    checks: list[Report]

    @property
    def passed(self) -> bool:
        return self.square.passed and all(r.passed for r in self.checks)

    def render(self) -> str:
        lines = [rep.render() for rep in self.checks]
        lines.append(self.square.render())
        lines.append(f"invariant_dim(deg<={self.max_degree})={len(self.invariants)}")
        for v in self.invariants:
            lines.append(f"  invariant: {render(v)}")
        lines.append("note=I/I^2 presented by constraint classes (regular sequence assumed)")
        return "\n".join(lines)


def invariant_functions(pair: LieRinehartPair, max_degree: int) -> list[GcPoly]:
    """Basis of normal forms of degree <= N killed by every ``[g_k]`` modulo ``I``."""
    base = pair.base
    span = Echelon()
    basis = []
    for mono in monomials(base, max_degree):
        v = pair.reduce(GcPoly(base, {mono: 1}))
        if v and span.add(_vec(v)):
            basis.append(v)
    if not basis:
        return []
    # reduced echelon basis of the normal-form space keeps things canonical
    basis = [GcPoly(base, dict(row)) for _, row in sorted(span.rows.items())]
    cols = []
    for f in basis:
        img = {}
        for k in range(pair.rank):
            for key, c in _vec(pair.reduce(pair.act(k, f))).items():
                img[(k, key)] = c
        cols.append(img)
    out = []
    for x in nullspace(_index_columns(cols), len(cols)):
        tot = base.zero()
        for j, c in x.items():
            tot = tot + basis[j].scale(c)
        out.append(tot)
    return out


def _vec(p: GcPoly) -> dict:
    return {m: c for m, c in p.terms.items()}


def _index_columns(cols: list[dict]) -> list[dict]:
    keys = sorted({k for c in cols for k in c})
    idx = {k: i for i, k in enumerate(keys)}
    return [{idx[k]: v for k, v in c.items()} for c in cols]


def rinehart_constraint_complex(cs: ConstraintSystem, max_degree: int = 2) -> RinehartComplex:
    pair = reduced_pair(cs)
    checks = pair.check()
    F = pair.forms
    sq = []
    for v in monomial_bank(F, max_degree + 1):
        sq.append(pair.differential(pair.differential(v)))
    return RinehartComplex(pair, max_degree, _collect("delta_squared", sq),
                           invariant_functions(pair, max_degree), checks)


# -- example systems ----------------------------------------------------------------


def angular_momentum() -> ConstraintSystem:
    """``L_i = ε_ijk q_j p_k`` on ``T*R^3``."""
    ctx = phase_space(3)
    q = [ctx.gen(f"q{i + 1}") for i in range(3)]
    p = [ctx.gen(f"p{i + 1}") for i in range(3)]
    L = [q[1] * p[2] - q[2] * p[1], q[2] * p[0] - q[0] * p[2], q[0] * p[1] - q[1] * p[0]]
    return ConstraintSystem(3, L, ctx=ctx)


def second_class_pair() -> ConstraintSystem:
    ctx = phase_space(1)
    return ConstraintSystem(1, [ctx.gen("q1"), ctx.gen("p1")], ctx=ctx)


def single_position(m: int = 1) -> ConstraintSystem:
    ctx = phase_space(m)
    return ConstraintSystem(m, [ctx.gen("q1")], ctx=ctx)
