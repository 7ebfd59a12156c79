"""Free graded-commutative algebras with exact rational coefficients.

A :class:`Context` declares an ordered list of graded generators. Elements of
the free graded-commutative algebra on those generators are :class:`GcPoly`
instances whose monomials are kept in normal order (ascending generator id),
with odd generators appearing at most once.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Mapping, Sequence

Monomial = tuple  # ascending tuple of generator ids, repeats allowed for even ids

ONE: Monomial = ()


class ContextError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    id: int
    name: str
    degree: int

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1


class Context:
    """An ordered set of graded generators.

    Contexts compare equal when they declare the same generators in the same
    order, so polynomials built in equal contexts can be mixed freely.
    """

    __slots__ = ("generators", "_by_name", "_parity", "_key")

    def __init__(self, generators: Iterable[tuple[str, int]]):
        gens = []
        by_name = {}
        for i, (name, degree) in enumerate(generators):
            if name in by_name:
                raise ContextError(f"duplicate generator {name!r}")
            g = Generator(i, name, int(degree))
            gens.append(g)
            by_name[name] = g
        self.generators = tuple(gens)
        self._by_name = by_name
        self._parity = tuple(g.degree % 2 for g in gens)
        self._key = tuple((g.name, g.degree) for g in gens)

    def __len__(self):
        return len(self.generators)

    def __iter__(self) -> Iterator[Generator]:
        return iter(self.generators)

    def __eq__(self, other):
        return isinstance(other, Context) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        body = ", ".join(f"{n}:{d}" for n, d in self._key)
        return f"Context({body})"

    def index(self, g) -> int:
        """Resolve a generator given by id, name or :class:`Generator`."""
        if isinstance(g, Generator):
            g = g.id
        if isinstance(g, str):
            try:
                return self._by_name[g].id
            except KeyError:
                raise ContextError(f"undeclared generator {g!r}") from None
        if isinstance(g, int) and 0 <= g < len(self.generators):
            return g
        raise ContextError(f"undeclared generator id {g!r}")

    def degree(self, g) -> int:
        return self.generators[self.index(g)].degree

    def parity(self, i: int) -> int:
        return self._parity[i]

    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    def gen(self, g) -> "GcPoly":
        return GcPoly(self, {(self.index(g),): Fraction(1)})

    def gens(self) -> list["GcPoly"]:
        return [self.gen(i) for i in range(len(self))]

    def zero(self) -> "GcPoly":
        return GcPoly(self, {})

    def one(self) -> "GcPoly":
        return GcPoly(self, {ONE: Fraction(1)})

    def const(self, c) -> "GcPoly":
        return GcPoly(self, {ONE: Fraction(c)})

    def monomial_degree(self, mono: Monomial) -> int:
        gens = self.generators
        return sum(gens[i].degree for i in mono)

    def is_subcontext_of(self, other: "Context") -> bool:
        return other._key[: len(self._key)] == self._key


def koszul_sign(perm: Sequence[int], degrees: Sequence[int]) -> int:
    """Sign of permuting homogeneous factors.

    ``perm[i]`` is the original position of the factor placed at position
    ``i``; ``degrees[k]`` is the degree of the factor originally at ``k``.
    """
    if len(perm) != len(degrees):
        raise ValueError("permutation and degree list differ in length")
    if sorted(perm) != list(range(len(perm))):
        raise ValueError(f"not a permutation: {perm!r}")
    s = 0
    for i in range(len(perm)):
        a = perm[i]
        for j in range(i + 1, len(perm)):
            b = perm[j]
            if a > b:
                s += degrees[a] * degrees[b]
    return -1 if s % 2 else 1


def normalize(ctx: Context, word: Sequence) -> tuple[Monomial, int] | None:
    """Bring a word of generators to normal order.

    Returns ``(monomial, sign)``, or ``None`` when an odd generator repeats.
    """
    ids = [ctx.index(g) for g in word]
    ids = list(ids)
    sign = 1
    # insertion sort by adjacent transpositions
    for i in range(1, len(ids)):
        j = i
        while j > 0 and ids[j - 1] > ids[j]:
            if ctx.parity(ids[j - 1]) and ctx.parity(ids[j]):
                sign = -sign
            ids[j - 1], ids[j] = ids[j], ids[j - 1]
            j -= 1
    for a, b in zip(ids, ids[1:]):
        if a == b and ctx.parity(a):
            return None
    return tuple(ids), sign


def _merge(ctx: Context, a: Monomial, b: Monomial):
    """Product of two normal-ordered monomials: (monomial, sign) or None."""
    if not a:
        return b, 1
    if not b:
        return a, 1
    par = ctx._parity
    odd_a = [i for i in a if par[i]]
    odd_b = [i for i in b if par[i]]
    s = 0
    if odd_a and odd_b:
        sa = set(odd_a)
        for v in odd_b:
            if v in sa:
                return None
        # count odd pairs (u in a, v in b) with u > v
        for v in odd_b:
            for u in odd_a:
                if u > v:
                    s += 1
    if a[-1] <= b[0]:
        mono = a + b
    else:
        mono = tuple(sorted(a + b))
    return mono, (-1 if s % 2 else 1)


class GcPoly:
    """Element of a free graded-commutative algebra.

    Treated as immutable: arithmetic always returns new objects.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: Context, terms: Mapping[Monomial, Fraction] | None = None):
        self.ctx = ctx
        if terms is None:
            terms = {}
        self.terms = {m: Fraction(c) for m, c in terms.items() if c != 0}

    @classmethod
    def _raw(cls, ctx, terms):
        p = object.__new__(cls)
        p.ctx = ctx
        p.terms = terms
        return p

    @classmethod
    def from_words(cls, ctx: Context, words: Iterable[tuple[Sequence, object]]) -> "GcPoly":
        """Build from ``(word, coefficient)`` pairs, normalizing each word."""
        out: dict = {}
        for word, c in words:
            r = normalize(ctx, word)
            if r is None:
                continue
            mono, sign = r
            out[mono] = out.get(mono, 0) + sign * Fraction(c)
        return cls(ctx, out)

    # -- queries ---------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def items(self):
        return self.terms.items()

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.terms.get(ONE, Fraction(0))

    def degrees(self) -> set[int]:
        return {self.ctx.monomial_degree(m) for m in self.terms}

    def degree(self) -> int | None:
        """The degree if homogeneous (0 for the zero element), else None."""
        ds = self.degrees()
        if not ds:
            return 0
        if len(ds) == 1:
            return ds.pop()
        return None

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def homogeneous_parts(self) -> dict[int, "GcPoly"]:
        parts: dict[int, dict] = {}
        for m, c in self.terms.items():
            parts.setdefault(self.ctx.monomial_degree(m), {})[m] = c
        return {d: GcPoly._raw(self.ctx, t) for d, t in sorted(parts.items())}

    def support(self) -> set[int]:
        return {i for m in self.terms for i in m}

    def weight(self, ids) -> set[int]:
        """Set of counts of factors from ``ids`` over all monomials."""
        ids = set(ids)
        return {sum(1 for i in m if i in ids) for m in self.terms}

    def weight_part(self, ids, k: int) -> "GcPoly":
        ids = set(ids)
        return GcPoly._raw(
            self.ctx,
            {m: c for m, c in self.terms.items() if sum(1 for i in m if i in ids) == k},
        )

    def max_abs_coefficient(self) -> Fraction:
        return max((abs(c) for c in self.terms.values()), default=Fraction(0))

    # -- arithmetic ------------------------------------------------------

    def _check(self, other: "GcPoly"):
        if other.ctx is not self.ctx and other.ctx != self.ctx:
            raise ContextError(f"context mismatch: {self.ctx!r} vs {other.ctx!r}")

    def _coerce(self, other) -> "GcPoly":
        if isinstance(other, GcPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return GcPoly._raw(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return GcPoly._raw(self.ctx, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "GcPoly":
        c = Fraction(c)
        if not c:
            return GcPoly._raw(self.ctx, {})
        return GcPoly._raw(self.ctx, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, GcPoly):
            return NotImplemented
        return gc_multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = self.ctx.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.const(other)
        if not isinstance(other, GcPoly):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    def map_coefficients(self, fn) -> "GcPoly":
        return GcPoly(self.ctx, {m: fn(c) for m, c in self.terms.items()})

    def relabel(self, ctx: Context, mapping: Mapping[int, int]) -> "GcPoly":
        """Move into ``ctx`` sending generator id ``i`` to ``mapping[i]``."""
        return GcPoly.from_words(
            ctx, (([mapping[i] for i in m], c) for m, c in self.terms.items())
        )

    # -- rendering -------------------------------------------------------

    def sorted_terms(self):
        ctx = self.ctx
        return sorted(self.terms.items(), key=lambda t: (ctx.monomial_degree(t[0]), t[0]))

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"GcPoly({render(self)})"


def gc_multiply(p: GcPoly, q: GcPoly) -> GcPoly:
    p._check(q)
    ctx = p.ctx
    out: dict = {}
    for a, ca in p.terms.items():
        for b, cb in q.terms.items():
            r = _merge(ctx, a, b)
            if r is None:
                continue
            mono, sign = r
            v = out.get(mono, 0) + sign * ca * cb
            if v:
                out[mono] = v
            else:
                out.pop(mono, None)
    return GcPoly._raw(ctx, out)


def format_fraction(c: Fraction) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def render_monomial(ctx: Context, mono: Monomial) -> str:
    parts = []
    i = 0
    while i < len(mono):
        j = i
        while j < len(mono) and mono[j] == mono[i]:
            j += 1
        name = ctx.generators[mono[i]].name
        parts.append(name if j - i == 1 else f"{name}^{j - i}")
        i = j
    return "*".join(parts)


def render(p: GcPoly) -> str:
    """Canonical text form, e.g. ``3/2*x^2*theta1*theta2 - y``."""
    if not p.terms:
        return "0"
    out = []
    for k, (mono, c) in enumerate(p.sorted_terms()):
        neg = c < 0
        a = -c if neg else c
        if mono:
            body = render_monomial(p.ctx, mono)
            if a != 1:
                body = f"{format_fraction(a)}*{body}"
        else:
            body = format_fraction(a)
        if k == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def monomials(ctx: Context, max_length: int, ids: Sequence[int] | None = None) -> list[Monomial]:
    """All nonzero normal-ordered monomials with at most ``max_length`` factors."""
    if ids is None:
        ids = range(len(ctx))
    ids = sorted(ids)
    out = []
    for k in range(max_length + 1):
        for word in combinations_with_replacement(ids, k):
            if any(a == b and ctx.parity(a) for a, b in zip(word, word[1:])):
                continue
            out.append(tuple(word))
    return out


def decalage_dims(degrees: Sequence[int], k: int) -> tuple[int, int]:
    """Dimensions of ``S^k(A[1])`` and of ``Λ^k(A)`` for finite-dimensional ``A``.

    Both are counted over monomial bases: the first in the free
    graded-commutative algebra on the shifted generators, the second directly
    from the exterior relations ``a∧b = -(-1)^{|a||b|} b∧a``.
    """
    shifted = Context((f"s{i}", d - 1) for i, d in enumerate(degrees))
    sym = sum(1 for m in monomials(shifted, k) if len(m) == k)
    ext = 0
    for word in combinations_with_replacement(range(len(degrees)), k):
        # a∧a = -(-1)^{|a|^2} a∧a, so a repeat survives only for odd |a|
        if any(a == b and degrees[a] % 2 == 0 for a, b in zip(word, word[1:])):
            continue
        ext += 1
    return sym, ext
