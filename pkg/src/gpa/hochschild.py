"""Hochschild cochains of a finite-dimensional associative algebra over Q.

A cochain of arity ``k`` is a multilinear map ``A^{⊗k} → A`` stored as
coefficients on ``(input basis tuple, output basis index)``; it sits in degree
``k - 1``. With insertions over the full range ``i = 0..k-1``::

    (f∘g)(a_1..a_{k+l-1}) = Σ_i (-1)^{i(l-1)} f(a_1..a_i, g(a_{i+1}..a_{i+l}), ..)
    {f, g} = f∘g - (-1)^{(k-1)(l-1)} g∘f
    d f = {μ, f}

so that ``{μ, μ} = 2 μ∘μ`` is twice the associator and ``d² = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .graded import format_fraction
from .linalg import Echelon, nullspace, rank, solve


class AlgebraMismatch(ValueError):
    pass


class FiniteAlgebra:
    """Structure constants ``e_i e_j = Σ_k m[i][j][k] e_k``."""

    def __init__(self, table: Sequence[Sequence[Sequence]], unit: int | Sequence | None = None,
                 name: str = "A"):
        d = len(table)
        self.dim = d
        self.name = name
        self.m = [[[Fraction(table[i][j][k]) for k in range(d)] for j in range(d)] for i in range(d)]
        if isinstance(unit, int):
            unit = [1 if k == unit else 0 for k in range(d)]
        self.unit = None if unit is None else [Fraction(u) for u in unit]

    def __eq__(self, other):
        return isinstance(other, FiniteAlgebra) and self.m == other.m

    def __hash__(self):
        return hash(str(self.m))

    def mul_basis(self, i: int, j: int) -> dict:
        return {k: c for k, c in enumerate(self.m[i][j]) if c}

    def mul(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for i, x in a.items():
            for j, y in b.items():
                for k, c in enumerate(self.m[i][j]):
                    if c:
                        out[k] = out.get(k, 0) + x * y * c
        return {k: v for k, v in out.items() if v}

    def associator_residuals(self) -> list[tuple[tuple[int, int, int], dict]]:
        bad = []
        e = [{i: Fraction(1)} for i in range(self.dim)]
        for i, j, k in product(range(self.dim), repeat=3):
            r = _sub(self.mul(self.mul(e[i], e[j]), e[k]), self.mul(e[i], self.mul(e[j], e[k])))
            if r:
                bad.append(((i, j, k), r))
        return bad

    def is_associative(self) -> bool:
        return not self.associator_residuals()

    def check_unit(self) -> bool:
        if self.unit is None:
            return True
        u = {k: c for k, c in enumerate(self.unit) if c}
        for i in range(self.dim):
            e = {i: Fraction(1)}
            if self.mul(u, e) != e or self.mul(e, u) != e:
                return False
        return True

    def mu(self) -> "Cochain":
        coeffs = {}
        for i in range(self.dim):
            for j in range(self.dim):
                for k, c in enumerate(self.m[i][j]):
                    if c:
                        coeffs[(i, j), k] = c
        return Cochain(self, 2, coeffs)


def _sub(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        w = out.get(k, 0) - v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


class Cochain:
    __slots__ = ("algebra", "arity", "coeffs")

    def __init__(self, algebra: FiniteAlgebra, arity: int, coeffs=None):
        self.algebra = algebra
        self.arity = arity
        self.coeffs = {}
        for (inp, out), c in (coeffs or {}).items():
            inp = tuple(inp)
            if len(inp) != arity:
                raise ValueError("input tuple does not match the arity")
            if c:
                self.coeffs[inp, out] = Fraction(c)

    @property
    def degree(self) -> int:
        return self.arity - 1

    @classmethod
    def element(cls, algebra, vec) -> "Cochain":
        return cls(algebra, 0, {((), k): c for k, c in enumerate(vec) if c})

    @classmethod
    def identity(cls, algebra) -> "Cochain":
        return cls(algebra, 1, {((i,), i): 1 for i in range(algebra.dim)})

    @classmethod
    def from_vector(cls, algebra, arity: int, vec: dict) -> "Cochain":
        idx = basis_index(algebra.dim, arity)
        return cls(algebra, arity, {idx[j]: c for j, c in vec.items()})

    def to_vector(self) -> dict:
        d = self.algebra.dim
        out = {}
        for (inp, o), c in self.coeffs.items():
            j = 0
            for a in inp:
                j = j * d + a
            out[j * d + o] = c
        return out

    def __call__(self, *inputs: int) -> dict:
        return {o: c for (inp, o), c in self.coeffs.items() if inp == inputs}

    def _check(self, other):
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise AlgebraMismatch("cochains over different algebras")

    def __add__(self, other):
        self._check(other)
        if self.arity != other.arity:
            raise ValueError("cannot add cochains of different arity")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return Cochain(self.algebra, self.arity, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Cochain":
        c = Fraction(c)
        return Cochain(self.algebra, self.arity, {k: c * v for k, v in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.arity == other.arity and self.coeffs == other.coeffs

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        out = []
        for k, ((inp, o), c) in enumerate(sorted(self.coeffs.items())):
            args = ",".join(f"e{i}" for i in inp)
            body = f"[{args}->e{o}]"
            a = abs(c)
            if a != 1:
                body = f"{format_fraction(a)}*{body}"
            if k == 0:
                out.append(f"-{body}" if c < 0 else body)
            else:
                out.append(f" - {body}" if c < 0 else f" + {body}")
        return "".join(out)

    def __repr__(self):
        return f"Cochain(arity={self.arity}; {self.render()})"


def basis_index(d: int, arity: int) -> list[tuple[tuple[int, ...], int]]:
    return [(inp, o) for inp in product(range(d), repeat=arity) for o in range(d)]


def cup(f: Cochain, g: Cochain) -> Cochain:
    """``(f∪g)(a_1..a_{k+l}) = (-1)^{kl} f(a_1..a_k)·g(a_{k+1}..a_{k+l})``."""
    f._check(g)
    A = f.algebra
    k, l = f.arity, g.arity
    s = -1 if (k * l) % 2 else 1
    out: dict = {}
    for (fi, r), fc in f.coeffs.items():
        for (gi, t), gc in g.coeffs.items():
            for o, mc in A.mul_basis(r, t).items():
                key = (fi + gi, o)
                out[key] = out.get(key, 0) + s * fc * gc * mc
    return Cochain(A, k + l, out)


def circle(f: Cochain, g: Cochain) -> Cochain:
    """Signed sum of insertions of ``g`` into each slot of ``f``; zero if ``f`` has arity 0."""
    f._check(g)
    A = f.algebra
    k, l = f.arity, g.arity
    if k == 0:
        return Cochain(A, max(l - 1, 0))
    by_slot: dict = {}
    for (fi, o), fc in f.coeffs.items():
        for i, a in enumerate(fi):
            by_slot.setdefault((i, a), []).append((fi, o, fc))
    out: dict = {}
    for (gi, r), gc in g.coeffs.items():
        for i in range(k):
            s = -1 if (i * (l - 1)) % 2 else 1
            for fi, o, fc in by_slot.get((i, r), ()):
                key = (fi[:i] + gi + fi[i + 1:], o)
                out[key] = out.get(key, 0) + s * fc * gc
    return Cochain(A, k + l - 1, out)


def gerstenhaber_bracket_hoch(f: Cochain, g: Cochain) -> Cochain:
    k, l = f.arity, g.arity
    s = -1 if ((k - 1) * (l - 1)) % 2 else 1
    a, b = circle(f, g), circle(g, f)
    if a.arity != b.arity:
        # only when one side is an empty insertion into an arity-0 cochain
        return a if b.is_zero() else b.scale(-s)
    return a - b.scale(s)


def hochschild_d(f: Cochain) -> Cochain:
    return gerstenhaber_bracket_hoch(f.algebra.mu(), f)


def differential_columns(A: FiniteAlgebra, arity: int) -> list[dict]:
    """Images of the basis cochains of the given arity, as coordinate vectors."""
    cols = []
    for key in basis_index(A.dim, arity):
        cols.append(hochschild_d(Cochain(A, arity, {key: 1})).to_vector())
    return cols


@dataclass
class HHResult:
    dims: list[int]
    representatives: list[list[Cochain]] = field(default_factory=list)

    def render(self) -> str:
        lines = []
        for k, d in enumerate(self.dims):
            lines.append(f"arity {k}: dim HH = {d}")
            for rep in self.representatives[k]:
                lines.append(f"  rep: {rep.render()}")
        return "\n".join(lines)


def hh_cohomology(A: FiniteAlgebra, max_arity: int) -> HHResult:
    """Dimensions and representatives of ``HH^0 .. HH^{N-1}``."""
    if max_arity > 6:
        raise ValueError("max_arity is capped at 6")
    if not A.is_associative():
        raise ValueError("algebra is not associative")
    dims, reps = [], []
    prev_image: list[dict] = []
    for k in range(max_arity):
        cols = differential_columns(A, k)
        kernel = nullspace(cols, len(cols))
        e = Echelon()
        for v in prev_image:
            e.add(v)
        base = len(e)
        chosen = []
        for v in kernel:
            if e.add(v):
                chosen.append(Cochain.from_vector(A, k, v))
        dims.append(len(e) - base)
        reps.append(chosen)
        prev_image = [c for c in cols if c]
    return HHResult(dims, reps)


def hh_dims_by_rank(A: FiniteAlgebra, max_arity: int, rank_fn=rank) -> list[int]:
    """``dim C^k - rank d_k - rank d_{k-1}`` with a pluggable rank routine."""
    out = []
    prev = 0
    for k in range(max_arity):
        cols = differential_columns(A, k)
        r = rank_fn(cols)
        out.append(len(cols) - r - prev)
        prev = r
    return out


def is_exact(c: Cochain) -> Cochain | None:
    """A cochain ``b`` with ``d b = c`` if one exists."""
    A = c.algebra
    if c.arity == 0:
        return None if c else Cochain(A, 0)
    cols = differential_columns(A, c.arity - 1)
    x = solve(cols, c.to_vector())
    if x is None:
        return None
    return Cochain.from_vector(A, c.arity - 1, x)


# -- example algebras ----------------------------------------------------------


def ground_field() -> FiniteAlgebra:
    return FiniteAlgebra([[[1]]], unit=0, name="Q")


def dual_numbers() -> FiniteAlgebra:
    """``Q[x]/(x^2)`` with basis ``1, x``."""
    return FiniteAlgebra([[[1, 0], [0, 1]], [[0, 1], [0, 0]]], unit=0, name="Q[x]/(x^2)")


def product_field() -> FiniteAlgebra:
    """``Q × Q`` with orthogonal idempotents."""
    return FiniteAlgebra([[[1, 0], [0, 0]], [[0, 0], [0, 1]]], unit=[1, 1], name="QxQ")


def upper_triangular() -> FiniteAlgebra:
    """2×2 upper-triangular matrices with basis ``E11, E12, E22``."""
    t = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    t[0][0][0] = 1  # E11 E11 = E11
    t[0][1][1] = 1  # E11 E12 = E12
    t[1][2][1] = 1  # E12 E22 = E12
    t[2][2][2] = 1  # E22 E22 = E22
    return FiniteAlgebra(t, unit=[1, 0, 1], name="T2")
