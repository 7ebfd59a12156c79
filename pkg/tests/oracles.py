"""Independent reference computations used to freeze expected values.

These deliberately avoid the package's own sign machinery: brackets of
ordinary functions go through sympy differentiation, ranks through sympy
matrices, and Hochschild operations through dense loops over basis tuples.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

import sympy

from gpa.graded import render


def to_sympy(p):
    """Even (commuting) polynomial to a sympy expression via its rendering."""
    names = {g.name: sympy.Symbol(g.name) for g in p.ctx}
    return sympy.expand(sympy.sympify(render(p).replace("^", "**"), locals=names))


def matrix_sympy(matrix):
    return [[to_sympy(a) for a in row] for row in matrix]


def poisson_sympy(A, xs, f, g):
    m = len(xs)
    return sympy.expand(sum(A[i][j] * sympy.diff(f, xs[i]) * sympy.diff(g, xs[j])
                            for i in range(m) for j in range(m)))


def jacobiators(A, xs):
    """All ``{x_a,{x_b,x_c}} + cyclic`` for a bivector matrix of sympy entries."""
    out = {}
    m = len(xs)
    for a, b, c in product(range(m), repeat=3):
        def br(f, g):
            return poisson_sympy(A, xs, f, g)
        j = br(xs[a], br(xs[b], xs[c])) + br(xs[b], br(xs[c], xs[a])) + br(xs[c], br(xs[a], xs[b]))
        out[a, b, c] = sympy.expand(j)
    return out


def is_poisson_sympy(A, xs) -> bool:
    skew = all(sympy.expand(A[i][j] + A[j][i]) == 0 for i in range(len(xs)) for j in range(len(xs)))
    return skew and all(v == 0 for v in jacobiators(A, xs).values())


def sympy_rank(columns: list[dict], nrows: int | None = None) -> int:
    if not columns:
        return 0
    rows = max([max(c) + 1 for c in columns if c] + [0])
    if nrows is not None:
        rows = max(rows, nrows)
    if rows == 0:
        return 0
    M = sympy.zeros(rows, len(columns))
    for j, c in enumerate(columns):
        for i, v in c.items():
            M[i, j] = sympy.Rational(v.numerator, v.denominator)
    return M.rank()


# -- dense Hochschild reference ------------------------------------------------


def dense(cochain):
    """``{inputs: {out: coeff}}`` over every input tuple, zeros included."""
    A = cochain.algebra
    out = {}
    for inp in product(range(A.dim), repeat=cochain.arity):
        out[inp] = cochain(*inp)
    return out


def _mul_vec(A, u: dict, v: dict) -> dict:
    out: dict = {}
    for i, a in u.items():
        for j, b in v.items():
            for k in range(A.dim):
                c = A.m[i][j][k]
                if c:
                    out[k] = out.get(k, 0) + a * b * c
    return {k: x for k, x in out.items() if x}


def _apply(f, A, vecs):
    """Multilinear evaluation of a cochain on element vectors."""
    out: dict = {}
    for idx in product(*[sorted(v) for v in vecs]):
        w = Fraction(1)
        for v, i in zip(vecs, idx):
            w *= v[i]
        for o, c in f(*idx).items():
            out[o] = out.get(o, 0) + w * c
    return {k: x for k, x in out.items() if x}


def hochschild_d_dense(f):
    """Textbook coboundary with bimodule action on both ends."""
    A, k = f.algebra, f.arity
    out = {}
    for inp in product(range(A.dim), repeat=k + 1):
        e = [{i: Fraction(1)} for i in inp]
        acc: dict = {}

        def add(v, s):
            for o, c in v.items():
                acc[o] = acc.get(o, 0) + s * c

        add(_mul_vec(A, e[0], _apply(f, A, e[1:])), 1)
        for i in range(k):
            merged = e[:i] + [_mul_vec(A, e[i], e[i + 1])] + e[i + 2:]
            add(_apply(f, A, merged), (-1) ** (i + 1))
        add(_mul_vec(A, _apply(f, A, e[:k]), e[k]), (-1) ** (k + 1))
        out[inp] = {o: c for o, c in acc.items() if c}
    return out


def cup_dense(f, g):
    A, k, l = f.algebra, f.arity, g.arity
    out = {}
    for inp in product(range(A.dim), repeat=k + l):
        v = _mul_vec(A, f(*inp[:k]), g(*inp[k:]))
        out[inp] = {o: (-1) ** (k * l) * c for o, c in v.items()}
    return out


def circle_dense(f, g):
    A, k, l = f.algebra, f.arity, g.arity
    out = {}
    for inp in product(range(A.dim), repeat=k + l - 1):
        acc: dict = {}
        for i in range(k):
            inner = g(*inp[i:i + l])
            vecs = [{a: Fraction(1)} for a in inp[:i]] + [inner] + \
                [{a: Fraction(1)} for a in inp[i + l:]]
            if not inner:
                continue
            for o, c in _apply(f, A, vecs).items():
                acc[o] = acc.get(o, 0) + (-1) ** (i * (l - 1)) * c
        out[inp] = {o: c for o, c in acc.items() if c}
    return out
