"""Derivations and left partial derivatives on free graded-commutative algebras."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Mapping

from .graded import Context, ContextError, GcPoly, gc_multiply


def left_partial(p: GcPoly, g) -> GcPoly:
    """Left derivative ``∂p/∂g``: commute ``g`` to the front, then strip it."""
    ctx = p.ctx
    gi = ctx.index(g)
    odd_g = ctx.parity(gi)
    out: dict = {}
    for mono, c in p.terms.items():
        try:
            pos = mono.index(gi)
        except ValueError:
            continue
        mult = 1
        while pos + mult < len(mono) and mono[pos + mult] == gi:
            mult += 1
        sign = 1
        if odd_g:
            before = sum(ctx.parity(i) for i in mono[:pos])
            if before % 2:
                sign = -1
        rest = mono[:pos] + mono[pos + 1:]
        out[rest] = out.get(rest, 0) + sign * mult * c
    return GcPoly(ctx, out)


class MissingImageError(KeyError):
    pass


class Derivation:
    """A derivation of given degree, stored by its values on generators.

    Generators absent from ``images`` are treated as missing; use
    :meth:`complete` to fill the rest with zero.
    """

    __slots__ = ("ctx", "degree", "images")

    def __init__(self, ctx: Context, degree: int, images: Mapping):
        self.ctx = ctx
        self.degree = int(degree)
        self.images = {}
        for g, img in images.items():
            i = ctx.index(g)
            if not isinstance(img, GcPoly):
                img = ctx.const(img)
            if img.ctx != ctx:
                raise ContextError("image lives in a different context")
            d = img.degree()
            if img and d is not None and d != ctx.generators[i].degree + self.degree:
                raise ValueError(
                    f"image of {ctx.generators[i].name} has degree {d}, "
                    f"expected {ctx.generators[i].degree + self.degree}"
                )
            self.images[i] = img

    @classmethod
    def complete(cls, ctx: Context, degree: int, images: Mapping) -> "Derivation":
        full = {i: ctx.zero() for i in range(len(ctx))}
        full.update({ctx.index(g): v for g, v in images.items()})
        return cls(ctx, degree, full)

    @classmethod
    def euler(cls, ctx: Context) -> "Derivation":
        return cls(ctx, 0, {g.id: ctx.gen(g.id).scale(g.degree) for g in ctx})

    @classmethod
    def partial(cls, ctx: Context, g) -> "Derivation":
        i = ctx.index(g)
        return cls.complete(ctx, -ctx.generators[i].degree, {i: ctx.one()})

    def __call__(self, p: GcPoly) -> GcPoly:
        return apply_derivation(self, p)

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        keys = set(self.images) | set(other.images)
        z = self.ctx.zero()
        return self.ctx == other.ctx and all(
            self.images.get(k, z) == other.images.get(k, z) for k in keys
        )

    def __add__(self, other: "Derivation") -> "Derivation":
        if self.degree != other.degree:
            raise ValueError("sum of derivations of different degrees")
        keys = set(self.images) | set(other.images)
        z = self.ctx.zero()
        return Derivation(
            self.ctx, self.degree, {k: self.images.get(k, z) + other.images.get(k, z) for k in keys}
        )

    def scale(self, c) -> "Derivation":
        return Derivation(self.ctx, self.degree, {k: v.scale(c) for k, v in self.images.items()})

    def __repr__(self):
        body = ", ".join(f"{self.ctx.generators[k].name}->{v}" for k, v in sorted(self.images.items()))
        return f"Derivation(deg={self.degree}; {body})"


def apply_derivation(D: Derivation, p: GcPoly) -> GcPoly:
    """Graded Leibniz extension of the generator images of ``D``."""
    ctx = p.ctx
    if ctx != D.ctx:
        raise ContextError("derivation and polynomial contexts differ")
    odd_d = D.degree % 2
    out = ctx.zero()
    for mono, c in p.terms.items():
        prefix_parity = 0
        for k, gi in enumerate(mono):
            img = D.images.get(gi)
            if img is None:
                raise MissingImageError(ctx.generators[gi].name)
            if img:
                sign = -1 if (odd_d and prefix_parity) else 1
                left = GcPoly._raw(ctx, {mono[:k]: Fraction(1)})
                right = GcPoly._raw(ctx, {mono[k + 1:]: Fraction(1)})
                out = out + gc_multiply(gc_multiply(left, img), right).scale(sign * c)
            prefix_parity ^= ctx.parity(gi)
    return out


def derivation_commutator(D1: Derivation, D2: Derivation) -> Derivation:
    """Graded commutator ``D1∘D2 - (-1)^{|D1||D2|} D2∘D1``, evaluated on generators."""
    if D1.ctx != D2.ctx:
        raise ContextError("derivations live in different contexts")
    ctx = D1.ctx
    sign = -1 if (D1.degree * D2.degree) % 2 else 1
    images = {}
    for g in ctx:
        y = ctx.gen(g.id)
        images[g.id] = D1(D2(y)) - D2(D1(y)).scale(sign)
    return Derivation(ctx, D1.degree + D2.degree, images)


def biderivation_bracket(
    ctx: Context,
    n: int,
    generator_bracket: Callable[[int, int], GcPoly],
    f: GcPoly,
    g: GcPoly,
) -> GcPoly:
    """Extend brackets of generators to a degree ``-n`` biderivation.

    ``generator_bracket(a, b)`` returns ``{y_a, y_b}``. The bracket ``{f, ·}``
    is the derivation of degree ``|f| - n`` whose value on ``y_b`` is
    ``-(-1)^{(|f|+n)(|y_b|+n)} {y_b, f}``, and ``{y_b, f}`` is in turn computed
    with the derivation ``{y_b, ·}``. Inhomogeneous ``f`` is split by degree.
    """
    gens = ctx.generators
    col = {}

    def gen_derivation(b):
        if b not in col:
            col[b] = Derivation(
                ctx, gens[b].degree - n, {a: generator_bracket(b, a) for a in range(len(gens))}
            )
        return col[b]

    out = ctx.zero()
    needed = g.support()
    for df, fpart in f.homogeneous_parts().items():
        images = {}
        for b in range(len(gens)):
            if b not in needed:
                images[b] = ctx.zero()
                continue
            yb = gen_derivation(b)(fpart)
            sign = -1 if ((df + n) * (gens[b].degree + n)) % 2 == 0 else 1
            images[b] = yb.scale(sign)
        out = out + apply_derivation(Derivation(ctx, df - n, images), g)
    return out
