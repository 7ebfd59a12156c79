"""Sample-based verifiers for graded Poisson and BV axioms.

Every check takes explicit sample tuples and reports exact residuals; nothing
here knows where a bracket or generator came from.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .calculus import biderivation_bracket
from .graded import Context, GcPoly, format_fraction, monomials, render


class InhomogeneousSampleError(ValueError):
    pass


class NotLinearError(ValueError):
    pass


def thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("GPA_THREADS", "1")))
    except ValueError:
        return 1


def _pmap(fn, items):
    items = list(items)
    cap = thread_cap()
    if cap == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=cap) as ex:
        return list(ex.map(fn, items))


def sgn(k: int) -> int:
    return -1 if k % 2 else 1


# -- oracles ---------------------------------------------------------------


@dataclass
class BracketOracle:
    """A bracket of degree ``-n`` on some free graded-commutative algebra."""

    n: int
    eval: Callable[[GcPoly, GcPoly], GcPoly]
    backing: str = "multivector"

    def __call__(self, a, b):
        return self.eval(a, b)

    @classmethod
    def from_shifted(cls, ctx) -> "BracketOracle":
        from .schouten import shifted_bracket

        return cls(ctx.n, lambda a, b: shifted_bracket(ctx, a, b), "multivector")

    @classmethod
    def from_structure_constants(cls, ctx: Context, n: int, table) -> "BracketOracle":
        """Biderivation extension of generator brackets.

        ``table`` maps generator-name pairs to :class:`GcPoly` values; the
        partner pair is filled in by graded antisymmetry when absent.
        """
        brackets = {}
        for (a, b), v in table.items():
            ia, ib = ctx.index(a), ctx.index(b)
            v = v if isinstance(v, GcPoly) else ctx.const(v)
            brackets[ia, ib] = v
        for (ia, ib), v in list(brackets.items()):
            if (ib, ia) not in brackets:
                da, db = ctx.generators[ia].degree, ctx.generators[ib].degree
                brackets[ib, ia] = v.scale(-sgn((da + n) * (db + n)))
        zero = ctx.zero()

        def gen_bracket(a, b):
            return brackets.get((a, b), zero)

        return cls(n, lambda f, g: biderivation_bracket(ctx, n, gen_bracket, f, g),
                   "structure-constants")

    @classmethod
    def from_table(cls, ctx: Context, n: int, table) -> "BracketOracle":
        """Bilinear extension of a bracket given on monomials only."""
        table = {(tuple(a), tuple(b)): v for (a, b), v in table.items()}

        def ev(f, g):
            out = ctx.zero()
            for ma, ca in f.terms.items():
                for mb, cb in g.terms.items():
                    v = table.get((ma, mb))
                    if v is not None:
                        out = out + v.scale(ca * cb)
            return out

        return cls(n, ev, "explicit-table")


@dataclass
class GeneratorOracle:
    """A linear map of degree ``-n`` (``n`` odd) presented as a callable."""

    n: int
    eval: Callable[[GcPoly], GcPoly]

    def __call__(self, a):
        return self.eval(a)

    def plus(self, other: Callable[[GcPoly], GcPoly]) -> "GeneratorOracle":
        return GeneratorOracle(self.n, lambda a: self.eval(a) + other(a))


# -- reports ---------------------------------------------------------------


@dataclass
class Report:
    identity: str
    status: str
    samples: int
    max_residual: Fraction = Fraction(0)
    worst: GcPoly | None = None
    witness: int | None = None
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def render(self) -> str:
        line = (f"identity={self.identity} status={self.status} samples={self.samples} "
                f"max_residual={format_fraction(self.max_residual)}")
        if self.witness is not None:
            line += f" witness={self.witness}"
        if self.worst is not None and self.worst:
            line += f" residual={render(self.worst)}"
        if self.note:
            line += f" note={self.note}"
        return line

    def fields(self) -> list[tuple[str, object]]:
        out = [("identity", self.identity), ("status", self.status), ("samples", self.samples),
               ("max_residual", format_fraction(self.max_residual))]
        if self.witness is not None:
            out.append(("witness", self.witness))
        if self.worst is not None and self.worst:
            out.append(("residual", render(self.worst)))
        if self.note:
            out.append(("note", self.note))
        return out


def _collect(identity: str, residuals: Sequence[GcPoly]) -> Report:
    worst, witness, mx = None, None, Fraction(0)
    for k, r in enumerate(residuals):
        if r:
            c = r.max_abs_coefficient()
            if witness is None:
                worst, witness = r, k
            if c > mx:
                mx = c
    return Report(identity, "fail" if witness is not None else "pass", len(residuals),
                  mx, worst, witness)


def _deg(a: GcPoly) -> int:
    d = a.degree()
    if d is None:
        raise InhomogeneousSampleError(f"inhomogeneous sample: {a}")
    return d


# -- bracket identities ----------------------------------------------------


def check_antisymmetry(B: BracketOracle, pairs: Iterable[tuple[GcPoly, GcPoly]]) -> Report:
    """``{a,b} + (-1)^{(|a|+n)(|b|+n)} {b,a} = 0``."""
    n = B.n

    def residual(pair):
        a, b = pair
        da, db = _deg(a), _deg(b)
        return B(a, b) + B(b, a).scale(sgn((da + n) * (db + n)))

    return _collect("antisymmetry", _pmap(residual, pairs))


def check_jacobi(B: BracketOracle, triples: Iterable[tuple[GcPoly, GcPoly, GcPoly]]) -> Report:
    """``{a,{b,c}} = {{a,b},c} + (-1)^{(|a|+n)(|b|+n)} {b,{a,c}}``."""
    n = B.n

    def residual(t):
        a, b, c = t
        da, db = _deg(a), _deg(b)
        _deg(c)
        return B(a, B(b, c)) - B(B(a, b), c) - B(b, B(a, c)).scale(sgn((da + n) * (db + n)))

    return _collect("jacobi", _pmap(residual, triples))


def check_leibniz(B: BracketOracle, triples: Iterable[tuple[GcPoly, GcPoly, GcPoly]]) -> Report:
    """``{a,bc} = {a,b}c + (-1)^{|b|(|a|+n)} b{a,c}``."""
    n = B.n

    def residual(t):
        a, b, c = t
        da, db = _deg(a), _deg(b)
        _deg(c)
        return B(a, b * c) - B(a, b) * c - (b * B(a, c)).scale(sgn(db * (da + n)))

    return _collect("leibniz", _pmap(residual, triples))


def poisson_suite(B: BracketOracle, pairs, triples) -> list[Report]:
    return [check_antisymmetry(B, pairs), check_jacobi(B, triples), check_leibniz(B, triples)]


# -- generators ------------------------------------------------------------


def check_linearity(D: GeneratorOracle, samples: Sequence[GcPoly]) -> Report:
    """Additivity on consecutive sample pairs and homogeneity under scaling."""
    res = []
    k = Fraction(3, 2)
    for i, a in enumerate(samples):
        b = samples[(i + 1) % len(samples)]
        res.append(D(a + b) - D(a) - D(b))
        res.append(D(a.scale(k)) - D(a).scale(k))
    return _collect("linearity", res)


def require_linear(D: GeneratorOracle, samples: Sequence[GcPoly]):
    r = check_linearity(D, samples)
    if not r.passed:
        raise NotLinearError(r.render())


def bracket_from_generator(D: GeneratorOracle, a: GcPoly, b: GcPoly) -> GcPoly:
    """``{a,b} = (-1)^{|a|}(Δ(ab) - Δ(a)b - (-1)^{|a|} aΔ(b))``, split by degree of ``a``."""
    out = a.ctx.zero()
    Db = D(b)
    for da, ap in a.homogeneous_parts().items():
        s = sgn(da)
        out = out + (D(ap * b) - D(ap) * b - (ap * Db).scale(s)).scale(s)
    return out


def generator_bracket(D: GeneratorOracle) -> BracketOracle:
    return BracketOracle(D.n, lambda a, b: bracket_from_generator(D, a, b), "generator")


def check_seven_term(D: GeneratorOracle, triples: Sequence[tuple[GcPoly, GcPoly, GcPoly]]) -> Report:
    """Second-order operator identity relating ``Δ`` and the product."""
    flat = [x for t in triples for x in t]
    require_linear(D, flat)

    def residual(t):
        a, b, c = t
        da, db = _deg(a), _deg(b)
        _deg(c)
        lhs = (D(a * b * c) + D(a) * b * c + (a * D(b) * c).scale(sgn(da))
               + (a * b * D(c)).scale(sgn(da + db)))
        rhs = (D(a * b) * c + (a * D(b * c)).scale(sgn(da))
               + (b * D(a * c)).scale(sgn((da + 1) * db)))
        return lhs - rhs

    return _collect("seven_term", _pmap(residual, triples))


def check_generates(D: GeneratorOracle, B: BracketOracle, pairs) -> Report:
    """``Δ(ab) = Δ(a)b + (-1)^{|a|}aΔ(b) + (-1)^{|a|}{a,b}``."""

    def residual(pair):
        a, b = pair
        s = sgn(_deg(a))
        return D(a * b) - D(a) * b - (a * D(b)).scale(s) - B(a, b).scale(s)

    return _collect("generator", _pmap(residual, pairs))


def check_exactness_and_bv(D: GeneratorOracle, B: BracketOracle | None, pairs,
                           triples) -> list[Report]:
    """``Δ² = 0``, then ``Δ`` as a derivation of the bracket, then the BV axioms.

    ``B`` defaults to the bracket generated by ``D``.
    """
    if B is None:
        B = generator_bracket(D)
    singles = [x for p in pairs for x in p]
    exact = _collect("exactness", _pmap(lambda a: D(D(a)), singles))
    out = [exact]
    if exact.passed:

        def residual(pair):
            a, b = pair
            return D(B(a, b)) - B(D(a), b) - B(a, D(b)).scale(sgn(_deg(a) + 1))

        out.append(_collect("bracket_derivation", _pmap(residual, pairs)))
    else:
        out.append(Report("bracket_derivation", "skipped", 0, note="not_exact"))
    out.append(check_generates(D, B, pairs))
    out.extend(poisson_suite(B, pairs, triples))
    return out


# -- sample banks ------------------------------------------------------------


def random_homogeneous(rng: random.Random, ctx: Context, max_len: int = 3, terms: int = 3,
                       pool=None) -> GcPoly:
    """A random homogeneous element with up to ``terms`` monomials."""
    if pool is None:
        pool = [m for m in monomials(ctx, max_len)]
    by_deg: dict[int, list] = {}
    for m in pool:
        by_deg.setdefault(ctx.monomial_degree(m), []).append(m)
    first = rng.choice(pool)
    same = by_deg[ctx.monomial_degree(first)]
    chosen = {first}
    for _ in range(rng.randint(0, terms - 1)):
        chosen.add(rng.choice(same))
    out = {}
    for m in sorted(chosen):
        c = Fraction(rng.choice([1, -1, 2, -2, 3, 1]), rng.choice([1, 1, 2, 3]))
        out[m] = c
    return GcPoly(ctx, out)


def sample_tuples(ctx: Context, arity: int, count: int = 64, seed: int = 0, max_len: int = 3,
                  terms: int = 3, ids=None) -> list[tuple[GcPoly, ...]]:
    """Deterministic bank of homogeneous sample tuples."""
    rng = random.Random(seed * 7919 + arity)
    pool = monomials(ctx, max_len, ids)
    return [tuple(random_homogeneous(rng, ctx, max_len, terms, pool) for _ in range(arity))
            for _ in range(count)]


def monomial_bank(ctx: Context, max_len: int = 3, ids=None) -> list[GcPoly]:
    return [GcPoly(ctx, {m: 1}) for m in monomials(ctx, max_len, ids)]
