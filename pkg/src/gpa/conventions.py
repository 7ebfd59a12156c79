"""Every sign convention the package commits to, computed from the code itself.

``conventions_text()`` is compared against a golden file in the test suite, so
a change to any of these signs shows up as a single reviewable diff.
"""

from __future__ import annotations

from .algebroid import (cotangent_algebroid, forms_bv_generator, forms_context,
                        koszul_bracket_forms, lie_algebra_algebroid, so3_constants)
from .brst import angular_momentum, extended_algebra
from .graded import render
from .hochschild import Cochain, circle, cup, dual_numbers, gerstenhaber_bracket_hoch
from .schouten import PoissonBivector, ShiftedCotangent, bv_laplacian, shifted_bracket


def _so3(ctx):
    x1, x2, x3 = ctx.base(0), ctx.base(1), ctx.base(2)
    z = ctx.zero()
    return PoissonBivector(ctx, [[z, x3, -x2], [-x3, z, x1], [x2, -x1, z]])


def conventions() -> list[tuple[str, str]]:
    out = []
    for n in range(-2, 3):
        ctx = ShiftedCotangent(1, n)
        x, xd = ctx.base(0), ctx.fiber(0)
        out.append((f"shifted n={n} {{x1_dag,x1}}", render(shifted_bracket(ctx, xd, x))))
        out.append((f"shifted n={n} {{x1,x1_dag}}", render(shifted_bracket(ctx, x, xd))))
    ctx = ShiftedCotangent(2, -1)
    x1, x2, d1, d2 = ctx.base(0), ctx.base(1), ctx.fiber(0), ctx.fiber(1)
    out.append(("bv Delta(x1*x1_dag)", render(bv_laplacian(ctx, x1 * d1))))
    out.append(("bv Delta(x1*x2*x1_dag*x2_dag)", render(bv_laplacian(ctx, x1 * x2 * d1 * d2))))
    out.append(("bivector encoding of a^12", render(d2 * d1)))
    out.append(("sn {{x2_dag*x1_dag,x1},x2}", render(shifted_bracket(ctx, shifted_bracket(ctx, d2 * d1, x1), x2))))

    ctx3 = ShiftedCotangent(3, -1)
    alpha = _so3(ctx3)
    F = forms_context(["x1", "x2", "x3"])
    dx1, dx2 = F.gen("dx1"), F.gen("dx2")
    out.append(("so3 koszul {dx1,dx2}", render(koszul_bracket_forms(alpha, dx1, dx2))))
    out.append(("so3 forms Delta(x1*dx2)", render(forms_bv_generator(alpha, F.gen("x1") * dx2))))

    lie = lie_algebra_algebroid(so3_constants())
    out.append(("so3 CE delta(e1_star)", render(lie.differential(lie.dual(0)))))
    cot = cotangent_algebroid(alpha)
    out.append(("cotangent delta(x1)", render(cot.differential(cot.forms.gen("x1")))))
    out.append(("cotangent cochain map", "dx_k_star -> -x_k_dag"))

    E = extended_algebra(angular_momentum())
    c1, b1 = E.ghost(0), E.momentum(0)
    out.append(("ghost {b1,c1}", render(E.bracket(b1, c1))))
    out.append(("ghost {c1,b1}", render(E.bracket(c1, b1))))
    q1, p1 = E.ctx.gen("q1"), E.ctx.gen("p1")
    out.append(("canonical {q1,p1}", render(E.bracket(q1, p1))))

    A = dual_numbers()
    mu = A.mu()
    ident = Cochain.identity(A)
    x = Cochain.element(A, [0, 1])
    out.append(("hochschild {mu,mu} = 2*mu.mu", str(gerstenhaber_bracket_hoch(mu, mu) == circle(mu, mu).scale(2)).lower()))
    out.append(("hochschild id.id", circle(ident, ident).render()))
    out.append(("hochschild x cup x", cup(x, x).render()))
    out.append(("hochschild id cup id", cup(ident, ident).render()))
    return out


def conventions_text() -> str:
    return "".join(f"{k} = {v}\n" for k, v in conventions())
