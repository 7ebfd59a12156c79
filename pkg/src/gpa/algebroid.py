"""Lie algebroids and Lie–Rinehart pairs in a global frame.

A pair is presented by a polynomial base ``B`` (even generators), a frame
``γ_1..γ_r`` of the module, the action ``γ_k(y_a)`` on base generators, and
structure functions ``{γ_i, γ_j} = Σ_k C^k_{ij} γ_k``. A quotient base
``B = P/I`` is handled by passing a normal-form function ``reduce``.

Three contexts are attached to every pair, all listing the base generators
first:

* ``sections``: base plus frame generators of degree -1 (multisections);
* ``forms``: base plus dual generators of degree +1 (alternating cochains);
* the base context itself.

The differential on cochains is the derivation of degree +1 with
``δ y_a = Σ_k γ_k(y_a) ε^k`` and ``δ ε^m = -Σ_{i<j} C^m_{ij} ε^i ε^j``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .axioms import BracketOracle, Report, _collect
from .calculus import Derivation, apply_derivation, biderivation_bracket, left_partial
from .graded import Context, ContextError, GcPoly, monomials


class IncompatiblePairError(ValueError):
    def __init__(self, message, reports=None):
        super().__init__(message)
        self.reports = reports or []


def lift(p: GcPoly, ctx: Context) -> GcPoly:
    """Reinterpret a polynomial in the leading generators of a larger context."""
    if p.ctx == ctx:
        return p
    if not p.ctx.is_subcontext_of(ctx):
        raise ContextError(f"cannot lift from {p.ctx!r} into {ctx!r}")
    return GcPoly._raw(ctx, dict(p.terms))


def restrict(p: GcPoly, ctx: Context) -> GcPoly:
    """Inverse of :func:`lift` for polynomials in the leading generators only."""
    if p.ctx == ctx:
        return p
    k = len(ctx)
    if any(i >= k for i in p.support()):
        raise ContextError("polynomial involves generators outside the target context")
    return GcPoly._raw(ctx, dict(p.terms))


class LieRinehartPair:
    def __init__(self, base: Sequence[str] | Context, action, structure,
                 frame_names: Sequence[str] | None = None,
                 dual_names: Sequence[str] | None = None,
                 reduce: Callable[[GcPoly], GcPoly] | None = None,
                 ideal: Sequence[GcPoly] = ()):
        if not isinstance(base, Context):
            base = Context((nm, 0) for nm in base)
        if any(g.degree % 2 for g in base):
            raise ContextError("the base algebra must be even")
        self.base = base
        m = len(base)
        self.rank = r = len(action)
        if frame_names is None:
            frame_names = [f"e{k + 1}" for k in range(r)]
        if dual_names is None:
            dual_names = [f"{nm}_star" for nm in frame_names]
        self.frame_names = list(frame_names)
        self.dual_names = list(dual_names)
        self.sections = Context([(g.name, g.degree) for g in base] + [(nm, -1) for nm in frame_names])
        self.forms = Context([(g.name, g.degree) for g in base] + [(nm, 1) for nm in dual_names])
        self._reduce = reduce
        self.ideal = [restrict(g, base) for g in ideal]
        self.action = [[self._poly(action[k][a]) for a in range(m)] for k in range(r)]
        self.c = {}
        for i in range(r):
            for j in range(r):
                vec = structure.get((i, j))
                if vec is None and (j, i) in structure:
                    vec = [-self._poly(v) for v in structure[(j, i)]]
                if vec is None:
                    vec = [0] * r
                self.c[i, j] = [self._poly(v) for v in vec]
        self._verified: bool | None = None

    def _poly(self, v) -> GcPoly:
        if isinstance(v, GcPoly):
            return restrict(v, self.base)
        return self.base.const(v)

    @property
    def m(self) -> int:
        return len(self.base)

    def reduce(self, p: GcPoly) -> GcPoly:
        """Normal form of a base, section or form element modulo the ideal."""
        if self._reduce is None:
            return p
        ctx = p.ctx
        if ctx == self.base:
            return self._reduce(p)
        m = self.m
        groups: dict = {}
        for mono, c in p.terms.items():
            k = 0
            while k < len(mono) and mono[k] < m:
                k += 1
            groups.setdefault(mono[k:], {})[mono[:k]] = c
        out = ctx.zero()
        for tail, coeff in groups.items():
            red = self._reduce(GcPoly(self.base, coeff))
            out = out + lift(red, ctx) * GcPoly._raw(ctx, {tail: Fraction(1)})
        return out

    def act(self, k: int, f: GcPoly) -> GcPoly:
        """``γ_k(f)`` for ``f`` in any of the attached contexts (base part only)."""
        ctx = f.ctx
        out = ctx.zero()
        for a in range(self.m):
            if self.action[k][a]:
                out = out + lift(self.action[k][a], ctx) * left_partial(f, a)
        return out

    def frame(self, k: int) -> GcPoly:
        return self.sections.gen(self.m + k)

    def dual(self, k: int) -> GcPoly:
        return self.forms.gen(self.m + k)

    # -- axioms ------------------------------------------------------------

    def check(self) -> list[Report]:
        r, m = self.rank, self.m
        base = self.base
        red = self.reduce
        skew = [self.c[i, j][k] + self.c[j, i][k] for i in range(r) for j in range(r) for k in range(r)]
        jac = []
        for i in range(r):
            for j in range(r):
                for k in range(r):
                    for mm in range(r):
                        tot = base.zero()
                        for (a, b, cc) in ((i, j, k), (j, k, i), (k, i, j)):
                            tot = tot + self.act(a, self.c[b, cc][mm])
                            for l in range(r):
                                tot = tot + self.c[b, cc][l] * self.c[a, l][mm]
                        jac.append(red(tot))
        morph = []
        for i in range(r):
            for j in range(r):
                for a in range(m):
                    lhs = base.zero()
                    for k in range(r):
                        lhs = lhs + self.c[i, j][k] * self.action[k][a]
                    rhs = self.act(i, self.action[j][a]) - self.act(j, self.action[i][a])
                    morph.append(red(lhs - rhs))
        reports = [_collect("skew", skew), _collect("jacobi", jac),
                   _collect("anchor_morphism", morph)]
        if self._reduce is not None:
            # γ_k(I) ⊂ I, tested on the ideal generators
            pres = [red(self.act(k, g)) for k in range(r) for g in self.ideal]
            reports.append(_collect("ideal_preserved", pres))
        reports.append(self._check_leibniz())
        return reports

    def _check_leibniz(self) -> Report:
        """``{γ_i, a γ_j} = γ_i(a) γ_j + a {γ_i, γ_j}`` on low-degree ``a``."""
        S = self.sections
        res = []
        for mono in monomials(self.base, 2):
            a = lift(GcPoly(self.base, {mono: 1}), S)
            for i in range(self.rank):
                for j in range(self.rank):
                    lhs = self.section_bracket(self.frame(i), a * self.frame(j))
                    rhs = self.act(i, a) * self.frame(j) + a * self.section_bracket(self.frame(i), self.frame(j))
                    res.append(self.reduce(lhs - rhs))
        return _collect("anchor_leibniz", res)

    @property
    def verified(self) -> bool:
        if self._verified is None:
            self._verified = all(rep.passed for rep in self.check())
        return self._verified

    def require(self):
        if not self.verified:
            bad = [rep for rep in self.check() if not rep.passed]
            raise IncompatiblePairError(bad[0].render(), bad)

    # -- Gerstenhaber bracket on multisections ------------------------------

    def _generator_bracket(self, a: int, b: int) -> GcPoly:
        S, m = self.sections, self.m
        if a >= m and b >= m:
            out = S.zero()
            for k, v in enumerate(self.c[a - m, b - m]):
                if v:
                    out = out + lift(v, S) * self.frame(k)
            return out
        if a >= m:
            return lift(self.action[a - m][b], S)
        if b >= m:
            # {y, e} = -(-1)^{(0-1)(-1-1)} {e, y}
            return -lift(self.action[b - m][a], S)
        return S.zero()

    def section_bracket(self, P: GcPoly, Q: GcPoly) -> GcPoly:
        return biderivation_bracket(self.sections, -1, self._generator_bracket, P, Q)

    def bracket_oracle(self) -> BracketOracle:
        return BracketOracle(-1, lambda a, b: self.reduce(self.section_bracket(a, b)), "structure-constants")

    # -- cochain differential ------------------------------------------------

    def differential_derivation(self) -> Derivation:
        F, m, r = self.forms, self.m, self.rank
        images = {}
        for a in range(m):
            img = F.zero()
            for k in range(r):
                if self.action[k][a]:
                    img = img + lift(self.action[k][a], F) * self.dual(k)
            images[a] = img
        for mm in range(r):
            img = F.zero()
            for i in range(r):
                for j in range(i + 1, r):
                    v = self.c[i, j][mm]
                    if v:
                        img = img - lift(v, F) * self.dual(i) * self.dual(j)
            images[m + mm] = img
        return Derivation(F, 1, images)

    def differential(self, xi: GcPoly) -> GcPoly:
        if xi.ctx != self.forms:
            raise ContextError("cochains live in the forms context of the pair")
        return self.reduce(apply_derivation(self.differential_derivation(), self.reduce(xi)))


class AlgebroidData(LieRinehartPair):
    """A Lie algebroid over ``R^m`` in a global frame: anchor rows and ``c^k_{ij}``."""

    def __init__(self, base, anchor, structure, frame_names=None, dual_names=None):
        super().__init__(base, anchor, structure, frame_names, dual_names)

    @property
    def anchor(self):
        return self.action


def check_algebroid(A: LieRinehartPair) -> list[Report]:
    return A.check()


def gerstenhaber_bracket(A: LieRinehartPair, P: GcPoly, Q: GcPoly) -> GcPoly:
    """Leibniz extension of the frame bracket and anchor action to ``Γ(ΛE)``."""
    A.require()
    return A.reduce(A.section_bracket(P, Q))


def algebroid_differential(A: LieRinehartPair, xi: GcPoly) -> GcPoly:
    A.require()
    return A.differential(xi)


def rinehart_differential(pair: LieRinehartPair, phi: GcPoly) -> GcPoly:
    """Differential on ``Alt_B(g, B)``; cochains are elements of ``pair.forms``."""
    pair.require()
    return pair.differential(phi)


# -- standard examples -------------------------------------------------------


def tangent_algebroid(m: int, names: Sequence[str] | None = None) -> AlgebroidData:
    """``E = TR^m`` with the coordinate frame; frame ``x_dag``, duals ``dx``."""
    if names is None:
        names = [f"x{i + 1}" for i in range(m)]
    anchor = [[1 if a == k else 0 for a in range(m)] for k in range(m)]
    return AlgebroidData(names, anchor, {}, [f"{nm}_dag" for nm in names],
                         [f"d{nm}" for nm in names])


def lie_algebra_algebroid(structure_constants, names: Sequence[str] | None = None) -> AlgebroidData:
    """A Lie algebra as an algebroid over a point: ``{e_i, e_j} = f^k_{ij} e_k``."""
    r = len(structure_constants)
    if names is None:
        names = [f"e{k + 1}" for k in range(r)]
    structure = {(i, j): list(structure_constants[i][j]) for i in range(r) for j in range(r)}
    return AlgebroidData([], [[] for _ in range(r)], structure, names)


def so3_constants():
    eps = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        eps[i][j][k] = 1
        eps[j][i][k] = -1
    return eps


def cotangent_algebroid(alpha) -> AlgebroidData:
    """``T*M`` of a Poisson bivector: anchor ``ρ(dx^k) = α^{ka} ∂_a``, ``c^k_{ij} = ∂_k α^{ij}``."""
    alpha.require()
    ctx = alpha.ctx
    m = ctx.m
    names = [g.name for g in ctx.generators[:m]]
    base = Context((nm, 0) for nm in names)
    mat = [[restrict(alpha.matrix[i][j], base) for j in range(m)] for i in range(m)]
    anchor = [[mat[k][a] for a in range(m)] for k in range(m)]
    structure = {(i, j): [left_partial(mat[i][j], k) for k in range(m)]
                 for i in range(m) for j in range(m)}
    return AlgebroidData(base, anchor, structure, [f"d{nm}" for nm in names],
                         [f"d{nm}_star" for nm in names])


def cotangent_form_to_multivector(A: AlgebroidData, xi: GcPoly, target) -> GcPoly:
    """Send a cochain of ``T*M`` (a multivector) into ``T*[-1]M``: ``ε^k ↦ -x_dag_k``."""
    m = A.m
    return GcPoly(target, {mono: c * (-1) ** sum(1 for i in mono if i >= m)
                           for mono, c in xi.terms.items()})


# -- differential forms on R^m -----------------------------------------------


def forms_context(names: Sequence[str]) -> Context:
    """``x1..xm`` in degree 0 followed by ``dx1..dxm`` in degree 1."""
    return Context([(nm, 0) for nm in names] + [(f"d{nm}", 1) for nm in names])


def _m(ctx: Context) -> int:
    return len(ctx) // 2


def de_rham(omega: GcPoly) -> GcPoly:
    """``d(f dx^I) = Σ_a ∂_a f dx^a ∧ dx^I``."""
    ctx = omega.ctx
    m = _m(ctx)
    out = ctx.zero()
    for a in range(m):
        out = out + ctx.gen(m + a) * left_partial(omega, a)
    return out


def contract_vector(components: Sequence[GcPoly], omega: GcPoly) -> GcPoly:
    """``i_X ω`` for ``X = Σ X^a ∂_a``."""
    ctx = omega.ctx
    m = _m(ctx)
    out = ctx.zero()
    for a, X in enumerate(components):
        if X:
            out = out + lift(X, ctx) * left_partial(omega, m + a)
    return out


def lie_derivative(components: Sequence[GcPoly], omega: GcPoly) -> GcPoly:
    """Cartan formula ``L_X = i_X d + d i_X``."""
    return contract_vector(components, de_rham(omega)) + de_rham(contract_vector(components, omega))


def contract_bivector(alpha, omega: GcPoly) -> GcPoly:
    """``i_α ω = Σ_{i<j} α^{ij} ι_j ι_i ω``, so ``i_α(dx^i dx^j) = α^{ij}``."""
    ctx = omega.ctx
    m = _m(ctx)
    out = ctx.zero()
    for i in range(m):
        for j in range(i + 1, m):
            a = alpha.matrix[i][j]
            if a:
                inner = left_partial(left_partial(omega, m + i), m + j)
                out = out + lift(_base(a, alpha), ctx) * inner
    return out


def _base(p: GcPoly, alpha) -> GcPoly:
    m = alpha.ctx.m
    return restrict(p, Context((g.name, 0) for g in alpha.ctx.generators[:m]))


def one_form_components(omega: GcPoly) -> list[GcPoly]:
    ctx = omega.ctx
    m = _m(ctx)
    if omega.weight(range(m, 2 * m)) - {1}:
        raise ValueError("expected a 1-form")
    return [left_partial(omega, m + a) for a in range(m)]


def sharp(alpha, omega: GcPoly) -> list[GcPoly]:
    """Components of ``α^#(ω)``: ``X^j = Σ_i ω_i α^{ij}``."""
    ctx = omega.ctx
    m = _m(ctx)
    w = one_form_components(omega)
    comps = []
    for j in range(m):
        c = ctx.zero()
        for i in range(m):
            if alpha.matrix[i][j]:
                c = c + w[i] * lift(_base(alpha.matrix[i][j], alpha), ctx)
        comps.append(c)
    return comps


def pair_bivector(alpha, w1: GcPoly, w2: GcPoly) -> GcPoly:
    ctx = w1.ctx
    m = _m(ctx)
    a, b = one_form_components(w1), one_form_components(w2)
    out = ctx.zero()
    for i in range(m):
        for j in range(m):
            if alpha.matrix[i][j]:
                out = out + lift(_base(alpha.matrix[i][j], alpha), ctx) * a[i] * b[j]
    return out


def koszul_bracket_forms(alpha, w1: GcPoly, w2: GcPoly) -> GcPoly:
    """``L_{α#ω1} ω2 - L_{α#ω2} ω1 - d α(ω1, ω2)`` on polynomial 1-forms."""
    alpha.require()
    return (lie_derivative(sharp(alpha, w1), w2) - lie_derivative(sharp(alpha, w2), w1)
            - de_rham(pair_bivector(alpha, w1, w2)))


def forms_bv_generator(alpha, xi: GcPoly) -> GcPoly:
    """``Δ = [i_α, d] = i_α d - d i_α``; ``Δ(f dg) = {f, g}_α``."""
    alpha.require()
    return contract_bivector(alpha, de_rham(xi)) - de_rham(contract_bivector(alpha, xi))
