"""Explicit local models of the bundle: degenerate-fiber chart equations,
fiber-type classification, and reducedness prerequisites of the flatness
argument.

Case-2 models embed into P^2 x P^2 x P^2 with nine bilinear relations in the
xi-matrix twisted by a base function g; each of the 27 standard affine
charts reduces to four equations generating the same ideal.  Case-3 models
use the two explicit cubic chart equations in (x, y, z, w) over the base.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import WrongMode, ZeroInput
from .ideal import (
    EMPTY,
    IdealHandle,
    dimension,
    ideal_equality_radical,
    jacobian_minors_ideal,
    membership,
)
from .poly import Polynomial, VariableContext, as_raw

XI_NAMES = tuple(f"xi{i}{j}" for i in range(1, 4) for j in range(1, 4))

FIBER_SMOOTH = "SmoothBrauerSeveri"
FIBER_TRIPLE = "TripleHirzebruch"
FIBER_CONE = "ConeOverTwistedCubic"


@dataclass
class ChartIdeal:
    ambient: VariableContext
    ideal: IdealHandle
    provenance: str


def case2_equations(g: Polynomial):
    """The nine xi-relations over the base ring of g, as LHS - RHS.

    The variable context of the output extends g's context by xi11..xi33.
    """
    if g.is_zero():
        raise ZeroInput("case-2 equations need a nonzero base function")
    ectx = g.context.extend(*XI_NAMES)
    base = g.context.nvars

    def xi(i, j):
        return Polynomial.variable(ectx, base + 3 * (i - 1) + (j - 1))

    gl = Polynomial(ectx, {e + (0,) * 9: c for e, c in g.terms.items()})
    g2 = gl * gl
    rows = [
        gl * xi(1, 1) * xi(2, 2) - xi(1, 2) * xi(2, 1),
        gl * xi(1, 1) * xi(2, 3) - xi(1, 3) * xi(2, 1),
        gl * xi(1, 1) * xi(3, 2) - gl * xi(1, 2) * xi(3, 1),
        gl * xi(1, 1) * xi(3, 3) - xi(1, 3) * xi(3, 1),
        xi(1, 2) * xi(2, 3) - xi(1, 3) * xi(2, 2),
        gl * xi(1, 2) * xi(3, 3) - xi(1, 3) * xi(3, 2),
        gl * xi(2, 1) * xi(3, 2) - g2 * xi(2, 2) * xi(3, 1),
        gl * xi(2, 1) * xi(3, 3) - g2 * xi(2, 3) * xi(3, 1),
        gl * xi(2, 2) * xi(3, 3) - xi(2, 3) * xi(3, 2),
    ]
    return rows


@dataclass
class ChartReduction:
    chart: ChartIdeal
    full: IdealHandle
    subset: tuple  # indices of the nine used as generators
    four_generated: bool  # whether a 4-element subset generates the full ideal


def case2_affine_chart(eqs, chart) -> ChartReduction:
    """Substitute xi1i = xi2j = xi3k = 1 and drop redundant generators.

    Searches subsets of the nine substituted equations in lexicographic
    order, smallest size first starting at 4, for one generating the same
    ideal as the full substitution (verified by membership of the remaining
    equations; the candidate is a subset, so the other containment is
    automatic).  ``four_generated`` records whether size 4 sufficed.
    """
    i, j, k = chart
    ectx = eqs[0].context
    base = ectx.nvars - 9

    def xi_index(r, c):
        return base + 3 * (r - 1) + (c - 1)

    subs = [xi_index(1, i), xi_index(2, j), xi_index(3, k)]
    # substitute 1 for the three chart coordinates, then drop them
    chart_polys = []
    for f in eqs:
        for v in subs:
            f = f.substitute(v, f.context.field.one)
        chart_polys.append(f)
    keepvars = [n for t, n in enumerate(ectx.names) if t not in subs]
    cctx = VariableContext(keepvars, ectx.field)
    keep_pos = [t for t in range(ectx.nvars) if t not in subs]
    chart_polys = [
        Polynomial(cctx, {tuple(e[t] for t in keep_pos): c for e, c in f.terms.items()})
        for f in chart_polys
    ]
    full = IdealHandle([f for f in chart_polys if not f.is_zero()], cctx)
    for size in range(4, 10):
        for subset in combinations(range(9), size):
            cand = [chart_polys[s] for s in subset if not chart_polys[s].is_zero()]
            if not cand:
                continue
            J = IdealHandle(cand, cctx)
            if all(membership(f, J) for f in chart_polys):
                return ChartReduction(
                    ChartIdeal(cctx, J, f"Case2Chart({i},{j},{k})"),
                    full,
                    subset,
                    size == 4,
                )
    raise ZeroInput(f"no generating subset found for chart {chart}")


def case3_chart_u3(f_val, g_val, field):
    """The (3,3) complete-intersection chart in variables x, y, z, w.

    F1 = y^3 - w x^2 w' + (1-w) x y z - f,  F2 = z^3 - w^2 x w'^2 - (1-w) x y z - g
    with w the cube root of unity and (f, g) specialized base values.
    """
    if not field.has_omega():
        raise WrongMode("case-3 chart needs a cube root of unity in the field")
    # the fourth chart coordinate is named u ('w' is the cube root of unity)
    ctx = VariableContext(("x", "y", "z", "u"), field)
    om = field.omega()
    one = field.one
    x, y, z, u = (Polynomial.variable(ctx, t) for t in range(4))
    one_m_omega = field.sub(one, om)
    F1 = (
        y**3
        - (x**2 * u).scale(om)
        + (x * y * z).scale(one_m_omega)
        - Polynomial.const(ctx, as_raw(field, f_val))
    )
    F2 = (
        z**3
        - (x * u**2).scale(field.mul(om, om))
        - (x * y * z).scale(one_m_omega)
        - Polynomial.const(ctx, as_raw(field, g_val))
    )
    return ChartIdeal(ctx, IdealHandle([F1, F2], ctx), "Case3U3")


def _minimize_generators(gens, context):
    """Greedy minimal generating subset: drop any generator that lies in the
    ideal of the others (deterministic, in list order)."""
    kept = [g for g in gens if not g.is_zero()]
    i = 0
    while i < len(kept):
        others = kept[:i] + kept[i + 1 :]
        if others and membership(kept[i], IdealHandle(others, context)):
            kept.pop(i)
        else:
            i += 1
    return kept


def chart_reducedness_check(C: ChartIdeal):
    """Serre-criterion report for a chart over a point base.

    complete_intersection: ambient codimension equals the minimal generator
    count; singular_codim: ambient codimension of the Jacobian-minor locus
    (the ambient dimension when that locus is empty); reduced: complete
    intersection (S1) plus singular locus of codimension strictly larger
    than the scheme's (R0).
    """
    gens = _minimize_generators(C.ideal.generators, C.ambient)
    n = C.ambient.nvars
    d = dimension(C.ideal, "affine")
    if d == EMPTY:
        return {"complete_intersection": False, "singular_codim": n, "reduced": False}
    codim = n - d
    ci = codim == len(gens)
    J = jacobian_minors_ideal(gens, min(len(gens), n))
    ds = dimension(J, "affine")
    sing_codim = n if ds == EMPTY else n - ds
    reduced = ci and sing_codim >= codim + 1
    return {
        "complete_intersection": ci,
        "singular_codim": sing_codim,
        "reduced": reduced,
    }


def classify_fiber(a_factors, b_factors, discriminant, point, field):
    """Fiber type over a point, by evaluation against the symbol's divisors.

    ``a_factors``/``b_factors``: lists of (Polynomial, multiplicity) for the
    zero/pole divisors of the two symbol entries (numerator multiplicities
    positive, denominator negative).  ``discriminant``: the components with
    nontrivial residue.  The fiber is a cone iff the point lies on at least
    two of the listed divisors and both entries degenerate there (some
    divisor through the point carries valuation not divisible by 3);
    otherwise a triple of Hirzebruch surfaces over a single discriminant
    component, and a smooth Brauer-Severi surface off the discriminant.
    """
    pt = [as_raw(field, v) for v in point]

    def on(poly):
        return poly.evaluate(pt).is_zero()

    divisors_through = set()
    a_degenerates = False
    b_degenerates = False
    for factors, flag in ((a_factors, "a"), (b_factors, "b")):
        for poly, mult in factors:
            if on(poly):
                divisors_through.add(poly.canonical_key())
                if mult % 3 != 0:
                    if flag == "a":
                        a_degenerates = True
                    else:
                        b_degenerates = True
    disc_count = sum(1 for s in discriminant if on(s))
    if len(divisors_through) >= 2 and a_degenerates and b_degenerates:
        return FIBER_CONE
    if disc_count >= 1:
        return FIBER_TRIPLE
    return FIBER_SMOOTH


def triple_component_check(chart: ChartIdeal, components):
    """Degenerate-fiber decomposition check at g -> 0.

    True iff every supplied component ideal contains the chart ideal and the
    intersection of all components is radical-equal to the chart ideal.
    """
    for comp in components:
        if not all(membership(g, comp) for g in chart.ideal.generators):
            return False
    inter = _intersect_many(components)
    return ideal_equality_radical(inter, chart.ideal)


def _intersect_many(handles):
    acc = handles[0]
    for h in handles[1:]:
        acc = _intersect_two(acc, h)
    return acc


def _intersect_two(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    """Ideal intersection via the t-trick: (t I + (1-t) J) cap k[x]."""
    ctx = I.context
    tname = ctx.fresh_name("t_int")
    ectx = VariableContext((tname,) + ctx.names, ctx.field)
    t = Polynomial.variable(ectx, 0)
    one = Polynomial.one(ectx)

    def lift(p):
        return Polynomial(ectx, {(0,) + e: c for e, c in p.terms.items()})

    gens = [t * lift(g) for g in I.generators] + [(one - t) * lift(g) for g in J.generators]
    from .ideal import buchberger

    gb = buchberger([g for g in gens if not g.is_zero()], "lex")
    out = []
    for p in gb:
        if p.degree_in(0) == 0:
            out.append(Polynomial(ctx, {e[1:]: c for e, c in p.terms.items()}))
    return IdealHandle(out if out else [Polynomial.zero(ctx)], ctx)