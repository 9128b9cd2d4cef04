"""Builtin scenarios: the two-surface example, the pencil family and the
appendix verification catalog (a1, a2, a3, a4, a5, cartier, a7).

Every builtin ships its witnesses: Cartier cofactors are derived here by
exact division in the chart, cube witnesses come from the defining
identities, and evidence points over F_p are found by deterministic search.
"""

from __future__ import annotations

from .coeff import FieldMode, fp_mode, DEFAULT_PRIME
from .errors import BothZero, UnknownLemma, WrongMode
from .poly import Polynomial, VariableContext, as_raw, exact_divide, parse_polynomial, parse_rational
from .residue import (
    CertAsserted,
    CertConstantTerm,
    CertEisenstein,
    CertRegularPoint,
    CertSingularLocusDim,
    PrimeDivisor,
    SymbolAlgebra,
)
from .scenario import (
    CartierDecl,
    CheckRequest,
    ComponentDecl,
    CurveDecl,
    CurveVal,
    DivisorDecl,
    DivisorOfDecl,
    PointEvidence,
    ScenarioDoc,
)

VARS = ("x0", "x1", "x2", "x3")


def _require_omega(field: FieldMode):
    if not field.has_omega():
        raise WrongMode(
            "builtin scenarios need a cube root of unity; use field qw or fp:<p>"
        )


def _base_polys(ctx):
    P = {}
    P["P1"] = parse_polynomial(ctx, "(x1^3-x2^3)*(x2^3-x3^3)*(x3^3-x1^3)")
    P["P2"] = parse_polynomial(ctx, "x1^3*x2^3*x3^3")
    P["PQ"] = P["P1"] - P["P2"]
    P["FS1"] = parse_polynomial(ctx, "x0^9") + P["P1"]
    P["FS2"] = P["FS1"] * (parse_polynomial(ctx, "x0^9") - P["P2"]) + P["P2"] * P["P2"]
    P["LX0"] = parse_polynomial(ctx, "x0")
    w = ctx.field.omega()
    w2 = ctx.field.mul(w, w)
    P["LM"] = parse_polynomial(ctx, "x2-x3")
    P["LW"] = parse_polynomial(ctx, "x2") - parse_polynomial(ctx, "x3").scale(w)
    P["LW2"] = parse_polynomial(ctx, "x2") - parse_polynomial(ctx, "x3").scale(w2)
    P["D1Q"] = parse_polynomial(ctx, "x0^9-x2^6*x3^3+x2^3*x3^6")
    P["D2Q"] = parse_polynomial(ctx, "x0^9-x3^6*x1^3+x3^3*x1^6")
    P["D3Q"] = parse_polynomial(ctx, "x0^9-x1^6*x2^3+x1^3*x2^6")
    return P


def _sing_points_s1(field):
    w = field.omega()
    w2 = field.mul(w, w)
    o, l = field.zero, field.one
    pts = [
        (o, l, o, o),
        (o, o, l, o),
        (o, o, o, l),
        (o, w, l, l),
        (o, l, w, l),
        (o, l, l, w),
        (o, w2, l, l),
        (o, l, w2, l),
        (o, l, l, w2),
        (o, w2, w, l),
        (o, w, w2, l),
        (o, l, l, l),
    ]
    return {f"SP{i+1:02d}": list(p) for i, p in enumerate(pts)}


def derive_cartier_cofactor(surface: Polynomial, t: Polynomial, q: Polynomial, point, k: int = 3):
    """Cofactor c with q = t^k * c + surface in the chart of the point.

    The chart is the last nonvanishing coordinate; all six builtin instances
    satisfy the q - F = t^k * c pattern with unit multiplier 1.
    """
    field = surface.context.field
    raws = [as_raw(field, v) for v in point]
    chart = max(i for i, v in enumerate(raws) if not field.is_zero(v))
    f_chart = surface.dehomogenize(chart)
    q_chart = q.dehomogenize(chart)
    t_chart = t.dehomogenize(chart)
    cof = exact_divide(q_chart - f_chart, t_chart**k)
    if cof is None:
        raise ValueError("cofactor derivation failed: q - F is not divisible by t^k")
    inv = field.inv(raws[chart])
    affine = [field.mul(v, inv) for i, v in enumerate(raws) if i != chart]
    if cof.shift(affine).evaluate([field.zero] * cof.context.nvars).is_zero():
        raise ValueError("derived cofactor vanishes at the point")
    # re-homogenize so the scenario document stays chart-free
    deg = q.degree() - k * t.degree()
    lifted = {}
    for e, c in cof.terms.items():
        full = list(e[:chart]) + [0] + list(e[chart:])
        full[chart] = deg - sum(e)
        if full[chart] < 0:
            raise ValueError("cofactor is not homogenizable in the chart variable")
        lifted[tuple(full)] = c
    return Polynomial(surface.context, lifted)


def _cartier_data(ctx, P):
    """(curve, surface) Cartier witnesses at the singular points they meet."""
    data = {
        "D1": [("SP02", "x2"), ("SP03", "x3")],  # [0:0:1:0], [0:0:0:1]
        "D2": [("SP01", "x1"), ("SP03", "x3")],  # [0:1:0:0], [0:0:0:1]
        "D3": [("SP01", "x1"), ("SP02", "x2")],  # [0:1:0:0], [0:0:1:0]
    }
    ts = {"D1": "x1", "D2": "x2", "D3": "x3"}
    return data, ts


def build_s1s2(field: FieldMode | None = None) -> ScenarioDoc:
    """The two-surface example: symbol, covers, witnesses and all checks."""
    field = field or fp_mode(DEFAULT_PRIME)
    _require_omega(field)
    ctx = VariableContext(VARS, field)
    P = _base_polys(ctx)
    points = _sing_points_s1(field)
    o, l = field.zero, field.one
    points["EV2"] = [o, o, l, l]
    w = field.omega()

    names = dict(P)
    rf = lambda s: parse_rational(ctx, s, names)

    pdiv = PrimeDivisor(P["PQ"], CertRegularPoint((o, l, l, o)), "PDIV")
    divisors = [
        DivisorDecl("X0", "LX0", PrimeDivisor(P["LX0"], CertSingularLocusDim(0), "X0")),
        DivisorDecl("LM", "LM", PrimeDivisor(P["LM"], CertSingularLocusDim(0), "LM")),
        DivisorDecl("LW", "LW", PrimeDivisor(P["LW"], CertSingularLocusDim(0), "LW")),
        DivisorDecl("LW2", "LW2", PrimeDivisor(P["LW2"], CertSingularLocusDim(0), "LW2")),
        DivisorDecl("PDIV", "PQ", pdiv),
    ]
    s1 = ComponentDecl(
        "S1",
        "FS1",
        PrimeDivisor(P["FS1"], CertSingularLocusDim(0), "S1"),
        rf("(x2^3-x3^3)/x0^3"),
        cover_witness=rf("(x1*x2*x3)^2/(x0)^6"),
        evidence=PointEvidence(rf("(x2^3-x3^3)/x0^3"), "SP04", 1),
        sing_points=sorted(k for k in points if k.startswith("SP")),
    )
    s2 = ComponentDecl(
        "S2",
        "FS2",
        PrimeDivisor(P["FS2"], CertEisenstein(0, pdiv), "S2"),
        rf("(x0^9-x1^3*x2^3*x3^3)/(x0)^9"),
        cover_witness=rf("-(x0)^6/(x1*x2*x3)^2"),
        evidence=PointEvidence(rf("FS1/(x0)^9"), "EV2", 1, relation_witness=rf("-(x1*x2*x3)^2/(x0)^6")),
    )
    symbol = SymbolAlgebra(rf("FS2*LM*LW*LW2/(x0)^21"), rf("FS1/(x0)^9"))
    factors = {
        "a": {"num": [("S2", 1), ("LM", 1), ("LW", 1), ("LW2", 1)], "den": [("X0", 21)]},
        "b": {"num": [("S1", 1)], "den": [("X0", 9)]},
    }
    trivial = {
        "X0": rf("-FS1^7/(FS2^3*LM^3*LW^3*LW2^3)"),
        "LM": rf("1"),
        "LW": rf("1"),
        "LW2": rf("1"),
    }
    cart_map, ts = _cartier_data(ctx, P)
    curves = []
    for name, qname, tname, uexpr in (
        ("D1", "D1Q", "x1", "(x2^3-x3^3)/x0^3"),
        ("D2", "D2Q", "x2", "(x2^3-x3^3)/x0^3"),
        ("D3", "D3Q", "x3", "(x2^3-x3^3)/x0^3"),
    ):
        gens = [parse_polynomial(ctx, ts[name]), P[qname]]
        cubes = {
            "S1": {
                "D1": rf("(x0)^2/(x2*x3)"),
                "D2": rf("-x3/x0"),
                "D3": rf("x2/x0"),
            }[name],
            "S2": rf("1"),
        }
        cart = []
        for ptname, chart_var in cart_map[name]:
            t_poly = parse_polynomial(ctx, ts[name])
            cof = derive_cartier_cofactor(P["FS1"], t_poly, P[qname], points[ptname])
            cart.append(CartierDecl(ptname, t_poly, 3, cof))
        curves.append(
            CurveDecl(
                name,
                gens,
                ("S1", "S2"),
                {
                    "S1": CurveVal(parse_polynomial(ctx, ts[name]), rf("(x2^3-x3^3)/x0^3"), 0),
                    "S2": CurveVal(parse_polynomial(ctx, ts[name]), rf("(x0^9-x1^3*x2^3*x3^3)/(x0)^9"), 0),
                },
                cubes,
                {"S1": cart},
            )
        )
    divisor_checks = [
        DivisorOfDecl(
            "FS2_on_S1",
            "S1",
            "FS2",
            {
                "D1": CurveVal(parse_polynomial(ctx, "x1"), rf("x2^6*x3^6"), 6),
                "D2": CurveVal(parse_polynomial(ctx, "x2"), rf("x3^6*x1^6"), 6),
                "D3": CurveVal(parse_polynomial(ctx, "x3"), rf("x1^6*x2^6"), 6),
            },
        )
    ]
    checks = [CheckRequest("sing_dim", {"component": "S1", "expect": "0"})]
    if field.kind == "fp":
        points["PT_OFF"] = [l, o, o, o]
        points["PT_CONE"] = [o, o, o, l]
        checks += [
            CheckRequest("classify", {"point": "PT_OFF", "expect": "SmoothBrauerSeveri"}),
            CheckRequest("classify", {"point": "PT_CONE", "expect": "ConeOverTwistedCubic"}),
        ]
        gen = _hirzebruch_point(ctx, P)
        if gen is not None:  # tiny fields may have an empty generic stratum
            points["PT_GEN"] = gen
            checks.insert(
                -1, CheckRequest("classify", {"point": "PT_GEN", "expect": "TripleHirzebruch"})
            )
    return ScenarioDoc(
        "s1s2",
        field,
        ctx,
        P,
        points,
        [s1, s2],
        divisors,
        symbol,
        factors,
        curves,
        divisor_checks,
        checks,
        trivial,
    )


def _hirzebruch_point(ctx, P):
    """Deterministic F_p point on S1 only, off S2, the x0-plane and the
    omega-lines (the generic stratum of the triple-fiber locus), or None."""
    from math import gcd

    field = ctx.field
    p = field.p
    e9 = (p - 1) // gcd(9, p - 1)  # x^9 = t is solvable iff t^e9 = 1
    budget = 300_000
    for x3 in range(2, p):
        for x2 in range(1, p):
            for x1 in range(1, p):
                budget -= 1
                if budget < 0:
                    return None
                v = P["P1"].evaluate([0, x1, x2, x3])
                if v.is_zero():
                    continue
                t = (-v.raw) % p
                if pow(t, e9, p) != 1:
                    continue
                x0 = next((c for c in range(1, p) if pow(c, 9, p) == t), None)
                if x0 is None:
                    continue
                pt = [field.from_int(c) for c in (x0, x1, x2, x3)]
                if (
                    not P["FS2"].evaluate(pt).is_zero()
                    and not P["LM"].evaluate(pt).is_zero()
                    and not P["LW"].evaluate(pt).is_zero()
                    and not P["LW2"].evaluate(pt).is_zero()
                ):
                    return pt
    return None


# --- the pencil family ---


def _pencil_polys(ctx, P, t0, t1):
    field = ctx.field
    G1 = parse_polynomial(ctx, "x0^9-x1^9+x2^8*x3+x3^8*x2")
    G2 = parse_polynomial(ctx, "x0^21+x1^21+x2^21-x3^21")
    lm3 = parse_polynomial(ctx, "x2^3-x3^3")
    A0 = P["FS2"] * lm3
    V1 = P["FS1"].scale(t0) + (G1 - P["FS1"]).scale(t1)
    V2 = A0.scale(t0) + (G2 - A0).scale(t1)
    return G1, G2, V1, V2


def build_pencil(t0, t1, field: FieldMode | None = None) -> ScenarioDoc:
    """The one-parameter family; (t0, t1) are field scalars, not both zero.

    At t1 = 0 the scenario is the two-surface example at the polynomial
    level.  At (1, 1) the members are the two regular surfaces and the
    smoothness and transversality checks are scheduled.
    """
    field = field or fp_mode(DEFAULT_PRIME)
    _require_omega(field)
    t0r = as_raw(field, t0)
    t1r = as_raw(field, t1)
    if field.is_zero(t0r) and field.is_zero(t1r):
        raise BothZero("(t0, t1) = (0, 0) is not a pencil member")
    if field.is_zero(t1r):
        doc = build_s1s2(field)
        doc.name = "pencil_1_0"
        return doc
    ctx = VariableContext(VARS, field)
    P = _base_polys(ctx)
    G1, G2, V1, V2 = _pencil_polys(ctx, P, t0r, t1r)
    names = dict(P, V1P=V1, V2P=V2, G1=G1, G2=G2)
    rf = lambda s: parse_rational(ctx, s, names)
    # constant x0-coefficients drive the irreducibility certificates
    c0_v1 = _constant_coefficient(V1, 0)
    c0_v2 = _constant_coefficient(V2, 0)
    polys = {"V1P": V1, "V2P": V2, "LX0": P["LX0"], "C0V1": c0_v1, "C0V2": c0_v2, "LM": P["LM"]}
    o, l = field.zero, field.one
    divisors = [
        DivisorDecl("X0", "LX0", PrimeDivisor(P["LX0"], CertSingularLocusDim(0), "X0")),
        DivisorDecl("LMD", "LM", PrimeDivisor(P["LM"], CertSingularLocusDim(0), "LMD")),
        DivisorDecl(
            "C0V1D", "C0V1", PrimeDivisor(c0_v1, CertRegularPoint((o, o, l, o)), "C0V1D")
        ),
        DivisorDecl(
            "C0V2D",
            "C0V2",
            PrimeDivisor(
                c0_v2,
                CertEisenstein(1, PrimeDivisor(P["LM"], CertSingularLocusDim(0), "LMD")),
                "C0V2D",
            ),
        ),
    ]
    v1_cert = (
        CertEisenstein(0, divisors[2].divisor)
        if not field.is_zero(t0r)
        else CertRegularPoint((o, o, l, o))
    )
    v2_cert = CertConstantTerm(0, divisors[3].divisor)
    regular_member = field.eq(t0r, field.one) and field.eq(t1r, field.one)
    ev = _pencil_evidence(ctx, V1, V2) if regular_member else None
    points = {}
    ev1 = ev2 = None
    if ev is not None:
        points["EVP"] = ev
        ev1 = PointEvidence(rf("V2P/(x0)^21"), "EVP", 1)
        ev2 = PointEvidence(rf("(x0)^9/V1P"), "EVP", 2)
    comp1 = ComponentDecl(
        "V1", "V1P", PrimeDivisor(V1, v1_cert, "V1"), rf("V2P/(x0)^21"),
        cover_witness=rf("1"), evidence=ev1,
    )
    comp2 = ComponentDecl(
        "V2", "V2P", PrimeDivisor(V2, v2_cert, "V2"), rf("(x0)^9/V1P"),
        cover_witness=rf("1"), evidence=ev2,
    )
    symbol = SymbolAlgebra(rf("V2P/(x0)^21"), rf("V1P/(x0)^9"))
    factors = {
        "a": {"num": [("V2", 1)], "den": [("X0", 21)]},
        "b": {"num": [("V1", 1)], "den": [("X0", 9)]},
    }
    trivial = {"X0": rf("-V1P^7/V2P^3")}
    checks = []
    one = field.one
    if field.eq(t0r, one) and field.eq(t1r, one):
        checks = [
            CheckRequest("smooth", {"component": "V1"}),
            CheckRequest("smooth", {"component": "V2"}),
            CheckRequest("transversal", {"pair": "(V1,V2)"}),
        ]
    name = f"pencil_{field.to_str(t0r)}_{field.to_str(t1r)}"
    return ScenarioDoc(
        name, field, ctx, polys, points, [comp1, comp2], divisors, symbol,
        factors, [], [], checks, trivial,
    )


def _constant_coefficient(f: Polynomial, var: int) -> Polynomial:
    """Coefficient of var^0, re-expressed in the full context."""
    view = f.univariate_view(var)
    k, c0 = view[-1]
    if k != 0:
        return Polynomial.zero(f.context)
    out = {}
    for e, c in c0.terms.items():
        out[e[:var] + (0,) + e[var:]] = c
    return Polynomial(f.context, out)


def _pencil_evidence(ctx, V1, V2):
    """Deterministic point on the regular member's intersection curve.

    For the (1,1) member the two surfaces are 1 - x1^9 + x2^8 x3 + x3^8 x2
    and 1 + x1^21 + x2^21 - x3^21 on the chart x0 = 1, so a common point
    solves x1^9 = A(x2,x3) and x1^21 = B(x2,x3); eliminating x1 leaves
    (B/A^2)^3 = A with x1 a cube root of B/A^2.  The orders of the covers at
    a transversal such point are (1,0) and (0,1), so the residues are 1 and
    2 under genuine valuation semantics (the point is smooth).
    """
    field = ctx.field
    if field.kind != "fp":
        return None
    p = field.p
    g1 = [V1.partial_derivative(i) for i in range(4)]
    g2 = [V2.partial_derivative(i) for i in range(4)]
    cube_exp = (p - 1) // 3
    for x2 in range(p):
        for x3 in range(p):
            A = (1 + pow(x2, 8, p) * x3 + pow(x3, 8, p) * x2) % p
            B = (pow(x3, 21, p) - pow(x2, 21, p) - 1) % p
            if A == 0 or B == 0:
                continue
            C = B * pow(A, p - 3, p) % p  # B / A^2
            if pow(C, 3, p) != A or pow(C, cube_exp, p) != 1:
                continue
            x1 = next((c for c in range(1, p) if pow(c, 3, p) == C), None)
            if x1 is None:
                continue
            pt = [1, x1, x2, x3]
            if not V1.evaluate(pt).is_zero() or not V2.evaluate(pt).is_zero():
                continue
            r1 = [g.evaluate(pt).raw for g in g1]
            r2 = [g.evaluate(pt).raw for g in g2]
            minors = [
                (r1[i] * r2[j] - r1[j] * r2[i]) % p
                for i in range(4)
                for j in range(i + 1, 4)
            ]
            if any(minors):
                return [field.from_int(v) for v in pt]
    return None


# --- appendix catalog ---


def build_appendix(lemma: str, field: FieldMode | None = None, t0=1, t1=1, t2=1) -> ScenarioDoc:
    lemma = lemma.lower()
    field = field or fp_mode(DEFAULT_PRIME)
    _require_omega(field)
    builders = {
        "a1": _appendix_a1,
        "a2": _appendix_a2,
        "a3": _appendix_a3,
        "a4": _appendix_a4,
        "a5": _appendix_a5,
        "cartier": _appendix_cartier,
        "a7": _appendix_a7,
    }
    if lemma not in builders:
        raise UnknownLemma(lemma)
    return builders[lemma](field, t0, t1, t2)


def _empty_doc(name, field, ctx):
    return ScenarioDoc(name, field, ctx, {}, {}, [], [], None, {}, [], [], [], {})


def _appendix_a1(field, t0, t1, t2):
    """Plane-curve pencil: singular exactly at the three coordinate points."""
    ctx = VariableContext(("x1", "x2", "x3"), field)
    P1 = parse_polynomial(ctx, "(x1^3-x2^3)*(x2^3-x3^3)*(x3^3-x1^3)")
    P2 = parse_polynomial(ctx, "x1^3*x2^3*x3^3")
    F = P1.scale(as_raw(field, t1)) + P2.scale(as_raw(field, t2))
    doc = _empty_doc(f"appendix_a1_{field.to_str(as_raw(field, t1))}_{field.to_str(as_raw(field, t2))}", field, ctx)
    doc.polys = {"FC": F}
    o, l = field.zero, field.one
    doc.points = {"Q1": [l, o, o], "Q2": [o, l, o], "Q3": [o, o, l]}
    doc.components = [
        ComponentDecl(
            "C", "FC", PrimeDivisor(F, CertAsserted("pencil member"), "C"),
            parse_rational(ctx, "1"), sing_points=["Q1", "Q2", "Q3"],
        )
    ]
    doc.checks = [CheckRequest("sing_dim", {"component": "C", "expect": "0"})]
    return doc


def _appendix_a2(field, *_):
    """Singular locus of the degree-18 surface is the three lines."""
    ctx = VariableContext(VARS, field)
    P = _base_polys(ctx)
    doc = _empty_doc("appendix_a2", field, ctx)
    doc.polys = {"FS2": P["FS2"], "LX0": P["LX0"], "M123": parse_polynomial(ctx, "x1*x2*x3")}
    doc.components = [
        ComponentDecl(
            "S2", "FS2", PrimeDivisor(P["FS2"], CertAsserted("checked in s1s2"), "S2"),
            parse_rational(ctx, "1"),
        )
    ]
    doc.checks = [
        CheckRequest("sing_dim", {"component": "S2", "expect": "1"}),
        CheckRequest("sing_equals_lines", {"component": "S2", "lines": "LX0,M123"}),
    ]
    return doc


def _appendix_a3(field, *_):
    """Smoothness of both regular surfaces and transversality of their intersection."""
    ctx = VariableContext(VARS, field)
    doc = _empty_doc("appendix_a3", field, ctx)
    G1 = parse_polynomial(ctx, "x0^9-x1^9+x2^8*x3+x3^8*x2")
    G2 = parse_polynomial(ctx, "x0^21+x1^21+x2^21-x3^21")
    doc.polys = {"G1": G1, "G2": G2}
    doc.divisors = [
        DivisorDecl("G1", "G1", PrimeDivisor(G1, CertSingularLocusDim(0), "G1")),
        DivisorDecl("G2", "G2", PrimeDivisor(G2, CertSingularLocusDim(0), "G2")),
    ]
    doc.checks = [
        CheckRequest("smooth", {"component": "G1"}),
        CheckRequest("smooth", {"component": "G2"}),
        CheckRequest("transversal", {"pair": "(G1,G2)"}),
    ]
    return doc


def _appendix_a4(field, t0, t1, _t2):
    """Irreducibility of the degree-9 family member via the regular point
    of its constant x0-coefficient (full Eisenstein when t0 != 0)."""
    ctx = VariableContext(VARS, field)
    P = _base_polys(ctx)
    t0r, t1r = as_raw(field, t0), as_raw(field, t1)
    G1, G2, V1, V2 = _pencil_polys(ctx, P, t0r, t1r)
    c0 = _constant_coefficient(V1, 0)
    doc = _empty_doc(f"appendix_a4_{field.to_str(t0r)}_{field.to_str(t1r)}", field, ctx)
    o, l = field.zero, field.one
    doc.polys = {"V1P": V1, "C0V1": c0}
    c0_div = PrimeDivisor(c0, CertRegularPoint((o, o, l, o)), "C0V1D")
    doc.divisors = [DivisorDecl("C0V1D", "C0V1", c0_div)]
    cert = CertEisenstein(0, c0_div) if not field.is_zero(t0r) else CertRegularPoint((o, o, l, o))
    doc.components = [
        ComponentDecl("V1", "V1P", PrimeDivisor(V1, cert, "V1"), parse_rational(ctx, "1"))
    ]
    return doc


def _appendix_a5(field, t0, t1, _t2):
    """Irreducibility of the degree-21 family member: Eisenstein at (x2-x3)
    on the constant x0-coefficient, then the constant-term route."""
    ctx = VariableContext(VARS, field)
    P = _base_polys(ctx)
    t0r, t1r = as_raw(field, t0), as_raw(field, t1)
    G1, G2, V1, V2 = _pencil_polys(ctx, P, t0r, t1r)
    c0 = _constant_coefficient(V2, 0)
    doc = _empty_doc(f"appendix_a5_{field.to_str(t0r)}_{field.to_str(t1r)}", field, ctx)
    doc.polys = {"V2P": V2, "C0V2": c0, "LM": P["LM"]}
    lm_div = PrimeDivisor(P["LM"], CertSingularLocusDim(0), "LMD")
    c0_div = PrimeDivisor(c0, CertEisenstein(1, lm_div), "C0V2D")
    doc.divisors = [
        DivisorDecl("LMD", "LM", lm_div),
        DivisorDecl("C0V2D", "C0V2", c0_div),
    ]
    doc.components = [
        ComponentDecl(
            "V2", "V2P", PrimeDivisor(V2, CertConstantTerm(0, c0_div), "V2"),
            parse_rational(ctx, "1"),
        )
    ]
    return doc


def _appendix_cartier(field, *_):
    """The local-equation identity at [0:0:0:1] and the cofactor unit."""
    ctx = VariableContext(VARS, field)
    P = _base_polys(ctx)
    doc = _empty_doc("appendix_cartier", field, ctx)
    o, l = field.zero, field.one
    doc.polys = {"FS1": P["FS1"], "D1Q": P["D1Q"], "LX1": parse_polynomial(ctx, "x1")}
    doc.points = {"SP03": [o, o, o, l]}
    t_poly = parse_polynomial(ctx, "x1")
    cof = derive_cartier_cofactor(P["FS1"], t_poly, P["D1Q"], doc.points["SP03"])
    doc.polys["COF"] = cof
    doc.components = [
        ComponentDecl(
            "S1", "FS1", PrimeDivisor(P["FS1"], CertAsserted("checked in s1s2"), "S1"),
            parse_rational(ctx, "1"),
        )
    ]
    doc.curves = [
        CurveDecl(
            "D1",
            [t_poly, P["D1Q"]],
            ("S1", "S1"),
            {},
            {},
            {"S1": [CartierDecl("SP03", t_poly, 3, cof)]},
        )
    ]
    return doc


def _appendix_a7(field, *_):
    """Reducedness of the degenerate local models via Serre's criterion."""
    ctx = VariableContext(VARS, field)
    doc = _empty_doc("appendix_a7", field, ctx)
    doc.checks = [
        CheckRequest("u3_chart", {"f": "0", "g": "0", "min_sing_codim": "3"}),
        CheckRequest("case2_reducedness", {"chart": "(1,1,1)"}),
        CheckRequest("triple_components", {"chart": "(1,1,1)"}),
    ]
    return doc