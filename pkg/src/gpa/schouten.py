"""Functions on shifted cotangent bundles ``T*[n]R^m`` and multivector calculus.

Base coordinates are named ``x1..xm`` (or user-supplied names) and the fiber
coordinates carry a ``_dag`` suffix. Fiber degrees are ``n - |x^i|``, so for
``n = -1`` and degree-zero base a k-vector field sits in degree ``-k``.

Locked conventions (see ``conventions.golden``):

* ``{x_dag_i, x^j} = δ_i^j`` for the coordinate bracket;
* a bivector ``α^{ij} ∂_i ∧ ∂_j`` is stored as ``Σ_{i<j} α^{ij} x_dag_j x_dag_i``,
  which makes ``{{α, f}, g} = α^{ij} ∂_i f ∂_j g``;
* the BV Laplacian is ``-Σ_i ∂/∂x_dag_i ∂/∂x^i``, the generator whose
  derivation defect reproduces the bracket above.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .calculus import left_partial
from .graded import Context, ContextError, GcPoly


class ShiftedCotangent(Context):
    """Coordinate ring of ``T*[n]R^m``: base ids ``0..m-1``, fiber ids ``m..2m-1``."""

    __slots__ = ("m", "n", "base_degrees")

    def __init__(self, m: int, n: int, base_degrees: Sequence[int] | None = None,
                 names: Sequence[str] | None = None):
        if base_degrees is None:
            base_degrees = [0] * m
        if names is None:
            names = [f"x{i + 1}" for i in range(m)]
        if len(base_degrees) != m or len(names) != m:
            raise ValueError("need one degree and one name per base coordinate")
        gens = [(nm, d) for nm, d in zip(names, base_degrees)]
        gens += [(f"{nm}_dag", n - d) for nm, d in zip(names, base_degrees)]
        super().__init__(gens)
        self.m = m
        self.n = n
        self.base_degrees = tuple(base_degrees)

    def base(self, i: int) -> GcPoly:
        return self.gen(i)

    def fiber(self, i: int) -> GcPoly:
        return self.gen(self.m + i)

    @property
    def base_ids(self) -> range:
        return range(self.m)

    @property
    def fiber_ids(self) -> range:
        return range(self.m, 2 * self.m)

    def weight(self, p: GcPoly) -> set[int]:
        return p.weight(self.fiber_ids)

    def weight_part(self, p: GcPoly, k: int) -> GcPoly:
        return p.weight_part(self.fiber_ids, k)

    def is_base_only(self, p: GcPoly) -> bool:
        return self.weight(p) <= {0}


def _require(ctx, p):
    if not isinstance(ctx, ShiftedCotangent):
        raise ContextError("expected a shifted cotangent context")
    if p.ctx != ctx:
        raise ContextError("polynomial does not live in the given context")


def shifted_bracket(ctx: ShiftedCotangent, f: GcPoly, g: GcPoly) -> GcPoly:
    """Degree ``-n`` coordinate bracket on ``T*[n]R^m``.

    For homogeneous ``f``::

        {f,g} = Σ_i (-1)^{(|x^i|+n)(|f|+n+|x^i|)} ∂f/∂x†_i · ∂g/∂x^i
                - (-1)^{(|f|+n)|x^i|} ∂f/∂x^i · ∂g/∂x†_i

    with left partials throughout.
    """
    _require(ctx, f)
    _require(ctx, g)
    n = ctx.n
    out = ctx.zero()
    for df, fp in f.homogeneous_parts().items():
        for i in range(ctx.m):
            xd = ctx.base_degrees[i]
            xi, xdag = i, ctx.m + i
            a = left_partial(fp, xdag)
            if a:
                b = left_partial(g, xi)
                if b:
                    s = -1 if ((xd + n) * (df + n + xd)) % 2 else 1
                    out = out + (a * b).scale(s)
            a = left_partial(fp, xi)
            if a:
                b = left_partial(g, xdag)
                if b:
                    s = 1 if ((df + n) * xd) % 2 else -1
                    out = out + (a * b).scale(s)
    return out


def coordinate_bracket_table(ctx: ShiftedCotangent):
    """Brackets of coordinate generators, as used by the biderivation oracle."""
    m, n = ctx.m, ctx.n

    def table(a: int, b: int) -> GcPoly:
        if a >= m and b == a - m:
            return ctx.one()
        if a < m and b == a + m:
            d_base, d_fib = ctx.base_degrees[a], n - ctx.base_degrees[a]
            sign = -1 if ((d_base + n) * (d_fib + n)) % 2 == 0 else 1
            return ctx.const(sign)
        return ctx.zero()

    return table


def sn_bracket(P: GcPoly, Q: GcPoly) -> GcPoly:
    """Schouten–Nijenhuis bracket of multivector fields (``n = -1``)."""
    ctx = P.ctx
    if not isinstance(ctx, ShiftedCotangent) or ctx.n != -1:
        raise ContextError("Schouten–Nijenhuis bracket needs a T*[-1] context")
    return shifted_bracket(ctx, P, Q)


def vector_field(ctx: ShiftedCotangent, components: Sequence) -> GcPoly:
    """``Σ_i a^i ∂_i`` as ``Σ_i a^i x_dag_i``."""
    out = ctx.zero()
    for i, a in enumerate(components):
        a = a if isinstance(a, GcPoly) else ctx.const(a)
        out = out + a * ctx.fiber(i)
    return out


def apply_vector_field(ctx: ShiftedCotangent, components: Sequence, f: GcPoly) -> GcPoly:
    out = ctx.zero()
    for i, a in enumerate(components):
        a = a if isinstance(a, GcPoly) else ctx.const(a)
        out = out + a * left_partial(f, i)
    return out


def regrade(ctx: ShiftedCotangent, p: GcPoly) -> tuple[ShiftedCotangent, GcPoly]:
    """Move a multivector into ``T*[-n]`` so k-vectors sit in positive degree.

    Fiber degrees flip from ``n - |x|`` to ``-n - |x|``; parities are
    unchanged, so this is an isomorphism of graded-commutative algebras.
    """
    target = ShiftedCotangent(ctx.m, -ctx.n, ctx.base_degrees,
                              [g.name for g in ctx.generators[: ctx.m]])
    return target, GcPoly(target, p.terms)


# -- Poisson bivectors ------------------------------------------------------


class NotPoissonError(ValueError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


@dataclass
class PoissonCheck:
    poisson: bool
    skew: bool = True
    witness: tuple | None = None
    residual: GcPoly | None = None
    sn_residual: GcPoly | None = None


def bivector_multivector(ctx: ShiftedCotangent, matrix) -> GcPoly:
    """Encode a skew matrix ``α^{ij}`` of base polynomials as a multivector."""
    out = ctx.zero()
    for i in range(ctx.m):
        for j in range(i + 1, ctx.m):
            a = _as_poly(ctx, matrix[i][j])
            if a:
                out = out + a * ctx.fiber(j) * ctx.fiber(i)
    return out


def bivector_matrix(ctx: ShiftedCotangent, P: GcPoly) -> list[list[GcPoly]]:
    """Inverse of :func:`bivector_multivector` on weight-2 elements."""
    return [
        [sn_bracket(sn_bracket(P, ctx.base(i)), ctx.base(j)) for j in range(ctx.m)]
        for i in range(ctx.m)
    ]


def _as_poly(ctx, a) -> GcPoly:
    if isinstance(a, GcPoly):
        if a.ctx != ctx:
            raise ContextError("coefficient lives in a different context")
        return a
    return ctx.const(a)


class PoissonBivector:
    """A bivector ``α^{ij}`` on ``R^m`` with polynomial coefficients."""

    def __init__(self, ctx: ShiftedCotangent, matrix):
        if ctx.n != -1 or any(ctx.base_degrees):
            raise ContextError("bivectors live on T*[-1]R^m with degree-zero base")
        m = ctx.m
        self.ctx = ctx
        self.matrix = [[_as_poly(ctx, matrix[i][j]) for j in range(m)] for i in range(m)]
        for i in range(m):
            for j in range(m):
                if not ctx.is_base_only(self.matrix[i][j]):
                    raise ValueError("bivector coefficients must be base polynomials")
        self._check: PoissonCheck | None = None

    @classmethod
    def from_multivector(cls, ctx, P):
        if ctx.weight(P) - {2}:
            raise ValueError("not a pure bivector")
        return cls(ctx, bivector_matrix(ctx, P))

    @property
    def multivector(self) -> GcPoly:
        return bivector_multivector(self.ctx, self.matrix)

    def is_skew(self) -> bool:
        m = self.ctx.m
        return all(self.matrix[i][j] == -self.matrix[j][i] for i in range(m) for j in range(m))

    def check(self) -> PoissonCheck:
        if self._check is None:
            self._check = is_poisson_bivector(self)
        return self._check

    @property
    def verified(self) -> bool:
        return self.check().poisson

    def require(self):
        c = self.check()
        if not c.poisson:
            raise NotPoissonError(f"bivector is not Poisson at {c.witness}", c.residual)

    def bracket(self, f: GcPoly, g: GcPoly) -> GcPoly:
        return poisson_bracket(self, f, g)


def cyclic_residual(alpha: PoissonBivector, j: int, k: int, l: int) -> GcPoly:
    """``α^{ij}∂_iα^{kl} + α^{il}∂_iα^{jk} + α^{ik}∂_iα^{lj}`` (sum over i)."""
    a = alpha.matrix
    out = alpha.ctx.zero()
    for i in range(alpha.ctx.m):
        out = out + a[i][j] * left_partial(a[k][l], i)
        out = out + a[i][l] * left_partial(a[j][k], i)
        out = out + a[i][k] * left_partial(a[l][j], i)
    return out


def is_poisson_bivector(alpha: PoissonBivector) -> PoissonCheck:
    """Decide the Poisson property by the cyclic identity and by ``[α,α] = 0``.

    The two criteria are evaluated independently; a disagreement means a bug
    in one of them and raises ``AssertionError``.
    """
    m = alpha.ctx.m
    if not alpha.is_skew():
        return PoissonCheck(poisson=False, skew=False)
    witness, residual = None, None
    for j in range(m):
        for k in range(m):
            for l in range(m):
                r = cyclic_residual(alpha, j, k, l)
                if r and witness is None:
                    witness, residual = (j, k, l), r
    P = alpha.multivector
    sn = sn_bracket(P, P)
    if (witness is None) != (not sn):
        raise AssertionError("cyclic identity and [α,α]_SN disagree")
    return PoissonCheck(poisson=witness is None, witness=witness, residual=residual, sn_residual=sn)


def poisson_bracket(alpha: PoissonBivector, f: GcPoly, g: GcPoly) -> GcPoly:
    """``{f,g} = α^{ij} ∂_i f ∂_j g`` on base polynomials."""
    alpha.require()
    ctx = alpha.ctx
    out = ctx.zero()
    dfs = [left_partial(f, i) for i in range(ctx.m)]
    dgs = [left_partial(g, j) for j in range(ctx.m)]
    for i in range(ctx.m):
        if not dfs[i]:
            continue
        for j in range(ctx.m):
            if dgs[j] and alpha.matrix[i][j]:
                out = out + alpha.matrix[i][j] * dfs[i] * dgs[j]
    return out


def hamiltonian_vf(alpha: PoissonBivector, h: GcPoly) -> GcPoly:
    """``X_h = Σ_j (α^{ij} ∂_i h) ∂_j``, so that ``X_h(g) = {h, g}``."""
    alpha.require()
    ctx = alpha.ctx
    comps = []
    for j in range(ctx.m):
        c = ctx.zero()
        for i in range(ctx.m):
            c = c + alpha.matrix[i][j] * left_partial(h, i)
        comps.append(c)
    return vector_field(ctx, comps)


# -- BV Laplacian, master equation, derived brackets -------------------------


def bv_laplacian(ctx: ShiftedCotangent, f: GcPoly) -> GcPoly:
    """``Δ f = -Σ_i ∂/∂x_dag_i (∂f/∂x^i)`` for odd shift and even base."""
    _require(ctx, f)
    if ctx.n % 2 == 0:
        raise ContextError("the BV Laplacian needs an odd shift")
    if any(d % 2 for d in ctx.base_degrees):
        raise ContextError("the BV Laplacian is implemented for even base coordinates")
    out = ctx.zero()
    for i in range(ctx.m):
        out = out - left_partial(left_partial(f, i), ctx.m + i)
    return out


def divergence(ctx: ShiftedCotangent, components: Sequence) -> GcPoly:
    out = ctx.zero()
    for i, a in enumerate(components):
        out = out + left_partial(_as_poly(ctx, a), i)
    return out


@dataclass
class MasterEquation:
    satisfied: bool
    residual: GcPoly


def check_master_equation(ctx: ShiftedCotangent, S: GcPoly) -> MasterEquation:
    """Test ``{S, S} = 0``."""
    r = shifted_bracket(ctx, S, S)
    return MasterEquation(satisfied=not r, residual=r)


class MasterEquationError(ValueError):
    def __init__(self, residual):
        super().__init__(f"{{α,α}} != 0: {residual}")
        self.residual = residual


def weight_components(ctx: ShiftedCotangent, alpha: GcPoly) -> dict[int, GcPoly]:
    return {k: ctx.weight_part(alpha, k) for k in sorted(ctx.weight(alpha))}


def total_degree(ctx: ShiftedCotangent, p: GcPoly) -> set[int]:
    """Degrees in the picture where a k-vector gains ``+2k`` (``n = -1``)."""
    fib = set(ctx.fiber_ids)
    return {ctx.monomial_degree(m) + 2 * sum(1 for i in m if i in fib) for m in p.terms}


def derived_multibracket(ctx: ShiftedCotangent, alpha: GcPoly, i: int,
                         args: Sequence[GcPoly], check: bool = True) -> GcPoly:
    """``λ_i(a_1..a_i) = {…{{α_i, a_1}, a_2}…, a_i}`` with ``α_i`` the i-vector part."""
    if ctx.n != -1:
        raise ContextError("derived brackets use the T*[-1] Schouten bracket")
    if len(args) != i:
        raise ValueError(f"λ_{i} takes {i} arguments")
    if check:
        r = shifted_bracket(ctx, alpha, alpha)
        if r:
            raise MasterEquationError(r)
    out = ctx.weight_part(alpha, i)
    for a in args:
        out = shifted_bracket(ctx, out, a)
    return out


def derived_multibrackets(ctx, alpha):
    """Check ``{α,α} = 0`` once and return ``λ`` as a callable ``λ(i, *args)``."""
    r = shifted_bracket(ctx, alpha, alpha)
    if r:
        raise MasterEquationError(r)

    def lam(i, *args):
        return derived_multibracket(ctx, alpha, i, args, check=False)

    return lam
