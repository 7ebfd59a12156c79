"""Turning a parsed session into contexts, structures and polynomials."""

from __future__ import annotations

from fractions import Fraction

from ..algebroid import LieRinehartPair, cotangent_algebroid, forms_context
from ..brst import ConstraintSystem, phase_space
from ..calculus import left_partial
from ..graded import Context, GcPoly
from ..hochschild import FiniteAlgebra
from ..schouten import PoissonBivector, ShiftedCotangent, bv_laplacian, shifted_bracket
from .syntax import (AlgebraBlock, AlgebroidBlock, AlgebroidPreset, BinOp, BivectorBlock, Bracket,
                     ConstraintsBlock, ContextBlock, Decl, Delta, Name, Neg, Num, Partial, Pow,
                     SessionError, SessionFile)


class Env:
    """Evaluation context: a generator context plus optional bracket and generator."""

    def __init__(self, ctx: Context, lets: dict, bracket=None, delta=None, label: str = ""):
        self.ctx = ctx
        self.lets = lets
        self.bracket = bracket
        self.delta = delta
        self.label = label
        self._cache: dict = {}

    def eval(self, e) -> GcPoly:
        ctx = self.ctx
        if isinstance(e, Num):
            return ctx.const(e.value)
        if isinstance(e, Name):
            if e.ident in self.lets:
                if e.ident not in self._cache:
                    self._cache[e.ident] = self.eval(self.lets[e.ident].expr)
                return self._cache[e.ident]
            return ctx.gen(self._gen(e))
        if isinstance(e, Neg):
            return -self.eval(e.arg)
        if isinstance(e, BinOp):
            a, b = self.eval(e.left), self.eval(e.right)
            return a + b if e.op == "+" else a - b if e.op == "-" else a * b
        if isinstance(e, Pow):
            return ctx.gen(self._gen(e.base)) ** e.exp
        if isinstance(e, Bracket):
            if self.bracket is None:
                raise SessionError(*e.pos, f"no bracket is defined {self.label}".rstrip())
            return self.bracket(self.eval(e.left), self.eval(e.right))
        if isinstance(e, Delta):
            if self.delta is None:
                raise SessionError(*e.pos, f"no generator Delta is defined {self.label}".rstrip())
            try:
                return self.delta(self.eval(e.arg))
            except ValueError as exc:
                raise SessionError(*e.pos, str(exc)) from None
        if isinstance(e, Partial):
            return left_partial(self.eval(e.arg), self._gen(e.var))
        raise TypeError(e)

    def _gen(self, name: Name) -> int:
        try:
            return self.ctx.index(name.ident)
        except (KeyError, ValueError):
            where = f" {self.label}" if self.label else ""
            raise SessionError(*name.pos, f"{name.ident!r} is not available{where}") from None


def _zero_bracket(a, b):
    return a.ctx.zero()


class Session:
    def __init__(self, ast: SessionFile):
        self.ast = ast
        self.lets = ast.lets
        self._cache: dict = {}

    def _need(self, kind, what: str):
        block = self.ast.first(kind)
        if block is None:
            raise SessionError(1, 1, f"this command needs {what}")
        return block

    # main context

    @property
    def context_block(self) -> ContextBlock | None:
        return self.ast.first(ContextBlock)

    def main(self) -> Env:
        if "main" not in self._cache:
            cb = self.context_block
            if cb is not None:
                ctx = ShiftedCotangent(len(cb.base), cb.shift, [d for _, d in cb.base],
                                       [n for n, _ in cb.base])
                delta = (lambda f: bv_laplacian(ctx, f)) if cb.shift % 2 else None
                env = Env(ctx, self.lets, lambda a, b: shifted_bracket(ctx, a, b), delta,
                          "in the shifted cotangent context")
            else:
                ctx = Context((d.name, d.deg) for d in self.ast.blocks(Decl))
                env = Env(ctx, self.lets, _zero_bracket, None, "in the declared context")
            self._cache["main"] = env
        return self._cache["main"]

    def shifted(self) -> ShiftedCotangent:
        self._need(ContextBlock, "a context block")
        return self.main().ctx

    # bivector and forms

    def bivector(self) -> PoissonBivector:
        if "bivector" not in self._cache:
            block = self._need(BivectorBlock, "a bivector block")
            ctx = self.shifted()
            env = Env(ctx, {}, label="in the bivector block")
            m = ctx.m
            mat = [[ctx.zero() for _ in range(m)] for _ in range(m)]
            given = set()
            for a, b, e in block.entries:
                i, j = ctx.index(a), ctx.index(b)
                mat[i][j] = env.eval(e)
                given.add((i, j))
            for i, j in list(given):
                if (j, i) not in given:
                    mat[j][i] = -mat[i][j]
            self._cache["bivector"] = PoissonBivector(ctx, mat)
        return self._cache["bivector"]

    def forms(self) -> Env:
        if "forms" not in self._cache:
            ctx = self.shifted()
            names = [g.name for g in ctx.generators[:ctx.m]]
            self._cache["forms"] = Env(forms_context(names), self.lets, label="in the forms context")
        return self._cache["forms"]

    # algebroid

    def algebroid(self) -> LieRinehartPair:
        if "algebroid" not in self._cache:
            preset = self.ast.first(AlgebroidPreset)
            if preset is not None:
                pair = cotangent_algebroid(self.bivector())
            else:
                pair = self._algebroid_block(self._need(AlgebroidBlock, "an algebroid block"))
            self._cache["algebroid"] = pair
        return self._cache["algebroid"]

    def _algebroid_block(self, block: AlgebroidBlock) -> LieRinehartPair:
        base = Context((n, 0) for n in block.base)
        r = len(block.frame)
        sections = Context([(n, 0) for n in block.base] + [(f, -1) for f in block.frame])
        benv = Env(base, {}, label="in the algebroid base")
        senv = Env(sections, {}, label="in the algebroid sections")
        action = [[base.zero() for _ in block.base] for _ in range(r)]
        for f, y, e in block.anchors:
            action[block.frame.index(f)][block.base.index(y)] = benv.eval(e)
        structure = {}
        m = len(block.base)
        for a, b, e in block.brackets:
            v = senv.eval(e)
            if v.weight(range(m, m + r)) - {1}:
                raise SessionError(*e.pos, "a frame bracket must be linear in the frame")
            coeffs = [GcPoly(base, dict(left_partial(v, m + k).terms)) for k in range(r)]
            i, j = block.frame.index(a), block.frame.index(b)
            structure[i, j] = coeffs
        return LieRinehartPair(base, action, structure, list(block.frame))

    def algebroid_forms(self) -> Env:
        pair = self.algebroid()
        return Env(pair.forms, self.lets, label="in the algebroid cochains")

    # algebra and constraints

    def algebra(self) -> FiniteAlgebra:
        block = self._need(AlgebraBlock, "an algebra block")
        d = block.dim
        ctx = Context((f"e{k}", 0) for k in range(d))
        env = Env(ctx, {}, label="in the algebra block")
        table = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
        for i, j, e in block.products:
            v = env.eval(e)
            for mono, c in v.terms.items():
                if len(mono) != 1:
                    raise SessionError(*e.pos, "a product must be a linear combination of e0..")
                table[i][j][mono[0]] = c
        return FiniteAlgebra(table, unit=block.unit)

    def constraints(self) -> ConstraintSystem:
        block = self._need(ConstraintsBlock, "a constraints block")
        ctx = phase_space(block.dim)
        env = Env(ctx, {}, label="in the constraints block")
        cons = [env.eval(e) for e in block.constraints]
        ham = None if block.hamiltonian is None else env.eval(block.hamiltonian)
        return ConstraintSystem(block.dim, cons, ham, ctx=ctx)
