"""Divisorial valuations, residue maps of cyclic symbol algebras, and the
witness-certified checks built on them.

Levels of residue data:

* along a prime divisor S of the base: the first residue is the valuation
  mod 3, the second residue of a symbol (a,b) is the class of
  (-1)^(v(a)v(b)) a^v(b) / b^v(a) on S;
* along a curve on S, or centered at a point of S: orders are certified by
  explicit witnesses (local equation + unit cofactor, or incremental
  m-adic membership), never searched for.

Triviality of a class in k(S)^x / cubes is certified only by an explicit
cube witness; nontriviality only by a nonzero second-level residue.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import (
    DenominatorVanishes,
    FactorizationIncomplete,
    NotAUnit,
    NotHomogeneous,
    NotOnSurface,
    PoleAlongS,
    UnboundedOrder,
    WitnessRejected,
    ZeroInput,
)
from .ideal import EMPTY, IdealHandle, dimension, membership, radical_membership, singular_locus_ideal
from .poly import (
    Polynomial,
    RationalFunction,
    _into_context,
    as_raw,
    exact_divide,
    eisenstein_check,
    multiplicity_of_factor,
)

ORD_CAP_DEFAULT = 50


# --- irreducibility certificates ---


@dataclass(frozen=True)
class CertEisenstein:
    """Eisenstein certificate: f is Eisenstein in ``var`` at ``prime``."""

    var: int
    prime: "PrimeDivisor"
    kind: str = dc_field(default="eisenstein", init=False)


@dataclass(frozen=True)
class CertSingularLocusDim:
    """Hypersurface in P^3 with singular locus of dimension <= bound is
    reduced and irreducible (a reducible or non-reduced surface has singular
    locus of dimension >= 1 by Bezout)."""

    bound: int = 0
    kind: str = dc_field(default="singular_locus_dim", init=False)


@dataclass(frozen=True)
class CertRegularPoint:
    """A regular point on the vanishing locus certifies a multiplicity-one
    irreducible factor through it (the whole polynomial need not be
    irreducible); usable as an Eisenstein prime."""

    point: tuple
    kind: str = dc_field(default="regular_point", init=False)


@dataclass(frozen=True)
class CertConstantTerm:
    """For homogeneous f of degree d in which ``var``^d appears with a
    nonzero constant coefficient: if the var-constant coefficient (the part
    of f without var, necessarily of degree d) is irreducible, so is f --
    any factorization would restrict to one of the irreducible constant
    term, forcing a unit or a var-divisible factor."""

    var: int
    inner: "PrimeDivisor"
    kind: str = dc_field(default="constant_term", init=False)


@dataclass(frozen=True)
class CertAsserted:
    note: str
    kind: str = dc_field(default="asserted", init=False)


class PrimeDivisor:
    """Irreducible homogeneous polynomial with an irreducibility certificate."""

    def __init__(self, poly: Polynomial, cert, name: str | None = None):
        if poly.is_zero() or poly.is_constant():
            raise ZeroInput("prime divisor must be non-constant")
        if not poly.is_homogeneous():
            raise NotHomogeneous(poly.to_str())
        self.poly = poly
        self.cert = cert
        self.name = name or poly.to_str()

    def verify_certificate(self):
        """Run the checkable part of the certificate.

        Returns (ok: bool, status: str, detail: str); status is "Asserted"
        for user-asserted certificates, else "Pass"/"Fail" (over F_p callers
        downgrade Groebner-backed passes to CertifiedModP).
        """
        c = self.cert
        if c.kind == "asserted":
            return True, "Asserted", c.note
        if c.kind == "regular_point":
            pt = [as_raw(self.poly.context.field, v) for v in c.point]
            if not self.poly.evaluate(pt).is_zero():
                return False, "Fail", "certificate point is not on the divisor"
            if all(g.evaluate(pt).is_zero() for g in self.poly.gradient()):
                return False, "Fail", "gradient vanishes at the certificate point"
            return True, "Pass", f"regular point at {_point_str(pt, self.poly.context.field)}"
        if c.kind == "singular_locus_dim":
            d = dimension(singular_locus_ideal(self.poly), "projective")
            ok = d == EMPTY or d <= c.bound
            return ok, "Pass" if ok else "Fail", f"singular locus dimension {d} (bound {c.bound})"
        if c.kind == "eisenstein":
            ok_inner, st, detail = c.prime.verify_certificate()
            if not ok_inner:
                return False, "Fail", f"inner certificate failed: {detail}"
            ok = eisenstein_check(self.poly, c.var, c.prime)
            return ok, "Pass" if ok else "Fail", (
                f"Eisenstein in {self.poly.context.names[c.var]} at ({c.prime.name}); inner: {detail}"
            )
        if c.kind == "constant_term":
            if not self.poly.is_homogeneous():
                return False, "Fail", "constant-term route needs a homogeneous polynomial"
            view = self.poly.univariate_view(c.var)
            d = self.poly.degree()
            if view[0][0] != d or not view[0][1].is_constant():
                return False, "Fail", "top coefficient in the variable is not a nonzero constant"
            if view[-1][0] != 0:
                return False, "Fail", "no constant term in the variable"
            c0 = view[-1][1]
            inner_in_sub = _into_context(c.inner.poly, c0.context)
            if inner_in_sub is None or inner_in_sub != c0:
                return False, "Fail", "inner divisor is not the constant term"
            ok_inner, st, detail = c.inner.verify_certificate()
            if not ok_inner:
                return False, "Fail", f"inner certificate failed: {detail}"
            return True, "Pass", (
                f"irreducible constant term in {self.poly.context.names[c.var]}; inner: {detail}"
            )
        return False, "Fail", f"unknown certificate kind {c.kind!r}"

    def handle(self) -> IdealHandle:
        return IdealHandle([self.poly], self.poly.context)

    def __repr__(self):
        return f"PrimeDivisor({self.name})"


def _point_str(pt, field):
    return "[" + ":".join(field.to_str(v) for v in pt) + "]"


# --- symbol algebras and residue classes ---


class SymbolAlgebra:
    """Cyclic degree-3 symbol (a, b): x^3 = a, y^3 = b, xy = w yx.

    Both entries must be homogeneous of total degree 0 so restrictions to
    projective divisors are well-defined functions.
    """

    def __init__(self, a: RationalFunction, b: RationalFunction):
        if a.is_zero() or b.is_zero():
            raise ZeroInput("symbol entries must be nonzero")
        for name, f in (("a", a), ("b", b)):
            if f.homogeneous_degree() != 0:
                raise NotHomogeneous(f"symbol entry {name} is not homogeneous of degree 0")
        self.a = a
        self.b = b


class ResidueClass:
    """Element of k(S)^x/(k(S)^x)^3, represented by a rational function with
    zero valuation along S and denominator not identically zero on S."""

    def __init__(self, surface: PrimeDivisor, repr_fn: RationalFunction):
        self.surface = surface
        self.repr = repr_fn
        if repr_fn.is_zero():
            raise ZeroInput("residue class of 0")
        if valuation_along_divisor(repr_fn, surface) != 0:
            raise PoleAlongS("representative has nonzero valuation along the surface")
        for p, _ in repr_fn.den:
            if multiplicity_of_factor(surface.poly, p) > 0:
                raise DenominatorVanishes("denominator vanishes identically on the surface")

    def __repr__(self):
        return f"ResidueClass({self.repr.to_str()} on {self.surface.name})"


@dataclass
class CurveWitness:
    """Certifies g = u * t^m on S: membership of the cross-multiplied
    difference in (I_S), with u a unit at the curve's generic point."""

    curve: IdealHandle
    t: Polynomial
    u: RationalFunction
    m: int


@dataclass
class CubeWitness:
    """Certifies gamma = h^3 in k(S) (or on a curve, modulo I_S + I_C)."""

    h: RationalFunction


# --- valuations and residues along divisors ---


def valuation_along_divisor(f: RationalFunction, S: PrimeDivisor) -> int:
    """v_S(f) = multiplicity of S in the numerator minus the denominator."""
    if f.is_zero():
        raise ZeroInput("valuation of the zero function")
    v = 0
    for p, e in f.num:
        v += e * multiplicity_of_factor(S.poly, p)
    for p, e in f.den:
        v -= e * multiplicity_of_factor(S.poly, p)
    return v


def residue1_divisor(f: RationalFunction, S: PrimeDivisor) -> int:
    """First residue: the valuation mod 3."""
    return valuation_along_divisor(f, S) % 3


def _extract_surface_powers(f: RationalFunction, S: PrimeDivisor) -> RationalFunction:
    """Divide every factor by its exact S-power; requires v_S(f) = 0."""
    ctx = f.context
    spow = 0
    num_out, den_out = [], []
    for p, e in f.num:
        m = multiplicity_of_factor(S.poly, p)
        if m:
            q = exact_divide(p, S.poly ** m)
            spow += m * e
            num_out.append((q, e))
        else:
            num_out.append((p, e))
    for p, e in f.den:
        m = multiplicity_of_factor(S.poly, p)
        if m:
            q = exact_divide(p, S.poly ** m)
            spow -= m * e
            den_out.append((q, e))
        else:
            den_out.append((p, e))
    assert spow == 0, "surface powers do not balance; valuation was nonzero"
    return RationalFunction.from_factor_lists(ctx, f.coeff, num_out, den_out)


def residue2_symbol(A: SymbolAlgebra, S: PrimeDivisor) -> ResidueClass:
    """Second residue of (a,b) along S as a class on S.

    With e = v_S(a), f = v_S(b), the representative is
    (-1)^(e f) a^f / b^e with all S-powers extracted.  The sign is a cube
    (-1 = (-1)^3), so it never changes the class; it is kept for fidelity.
    """
    e = valuation_along_divisor(A.a, S)
    f = valuation_along_divisor(A.b, S)
    r = A.a ** f / A.b ** e
    if (e * f) % 2:
        r = r.scale(r.context.field.neg(r.context.field.one))
    r = _extract_surface_powers(r, S)
    return ResidueClass(S, r)


def restrict_to_hypersurface(f: RationalFunction, S: PrimeDivisor) -> ResidueClass:
    """Tag f as a class modulo (S.poly); requires v_S(f) = 0."""
    if valuation_along_divisor(f, S) != 0:
        raise PoleAlongS("nonzero valuation along the hypersurface")
    return ResidueClass(S, _extract_surface_powers(f, S))


# --- witness-certified curve valuations ---


def curve_valuation_witnessed(g: RationalFunction, W: CurveWitness, S: PrimeDivisor) -> int:
    """Verify g = u * t^m mod I_S and unit-hood of u along the curve; return m."""
    ctx = g.context
    t_pow = W.t ** W.m if W.m >= 0 else None
    lhs = g.expanded_num() * W.u.expanded_den()
    if W.m >= 0:
        rhs = W.u.expanded_num() * t_pow * g.expanded_den()
    else:
        # negative order: g * t^(-m) = u
        lhs = lhs * W.t ** (-W.m)
        rhs = W.u.expanded_num() * g.expanded_den()
    if not membership(lhs - rhs, S.handle()):
        raise WitnessRejected("g != u * t^m modulo the surface ideal")
    for p, _ in W.u.num + W.u.den:
        if radical_membership(p, W.curve):
            raise NotAUnit(f"{p.to_str()} vanishes along the curve")
    return W.m


def curve_residue1(gamma: ResidueClass, W: CurveWitness) -> int:
    """First residue of a class along a curve on its surface, mod 3."""
    return curve_valuation_witnessed(gamma.repr, W, gamma.surface) % 3


# --- point-centered orders ---


def _chart_data(poly_ctx, point):
    """Chart index (last nonvanishing coordinate) for a projective point."""
    fld = poly_ctx.field
    raws = [as_raw(fld, v) for v in point]
    chart = None
    for i in range(len(raws) - 1, -1, -1):
        if not fld.is_zero(raws[i]):
            chart = i
            break
    if chart is None:
        raise ZeroInput("the zero vector is not a projective point")
    inv = fld.inv(raws[chart])
    scaled = [fld.mul(v, inv) for v in raws]
    affine = [v for i, v in enumerate(scaled) if i != chart]
    return chart, affine


def _monomials_of_degree(ctx, k):
    def rec(i, remaining):
        if i == ctx.nvars - 1:
            yield (remaining,)
            return
        for a in range(remaining + 1):
            for rest in rec(i + 1, remaining - a):
                yield (a,) + rest
    return [Polynomial(ctx, {e: ctx.field.one}) for e in rec(0, k)]


def ord_at_point(
    g: RationalFunction,
    point,
    S: PrimeDivisor,
    cap: int = ORD_CAP_DEFAULT,
):
    """m-adic orders (ord_num, ord_den) of g at a point of S.

    The order of a polynomial is the largest k with the polynomial in
    m_P^k + (I_S in the chart), found by incremental membership tests after
    translating the point to the chart origin.  At singular points this
    order function need not be a valuation; consumers label conclusions
    accordingly.
    """
    ctx = g.context
    fld = ctx.field
    chart, affine = _chart_data(ctx, point)
    s_chart = S.poly.dehomogenize(chart)
    cctx = s_chart.context
    if not s_chart.shift(affine).evaluate([fld.zero] * cctx.nvars).is_zero():
        raise NotOnSurface("point does not lie on the surface")
    s_shift = s_chart.shift(affine)

    def order_of(poly4: Polynomial) -> int:
        p_chart = poly4.dehomogenize(chart)
        if exact_divide(p_chart, s_chart) is not None:
            raise ZeroInput("function vanishes identically on the chart surface")
        p_shift = p_chart.shift(affine)
        k = 0
        while k <= cap:
            gens = [s_shift] + _monomials_of_degree(cctx, k + 1)
            if not membership(p_shift, IdealHandle(gens, cctx)):
                return k
            k += 1
        raise UnboundedOrder(f"order exceeds cap {cap}")

    num = g.expanded_num()
    den = g.expanded_den()
    return order_of(num), order_of(den)


def point_residue1(g: RationalFunction, point, S: PrimeDivisor, cap: int = ORD_CAP_DEFAULT) -> int:
    """(ord_num - ord_den) mod 3 at the point, m-adic order semantics."""
    on, od = ord_at_point(g, point, S, cap)
    return (on - od) % 3


# --- cube triviality ---


def cube_triviality_check(gamma: ResidueClass, W: CubeWitness, curve: IdealHandle | None = None) -> bool:
    """gamma = h^3 modulo (I_S) -- or modulo (I_S + I_curve) on a curve.

    Structural route first: if the factored forms of num_g * den_h^3 and
    den_g * num_h^3 agree literally, the difference is 0 and membership is
    immediate (this covers high-power witnesses that must never be
    expanded).  Otherwise expand and test membership.
    """
    g = gamma.repr
    h3 = W.h ** 3
    lhs = RationalFunction.from_factor_lists(
        g.context, g.coeff, list(g.num) + list(h3.den), []
    )
    rhs = RationalFunction.from_factor_lists(
        g.context, h3.coeff, list(h3.num) + list(g.den), []
    )
    if lhs.structural_key() == rhs.structural_key():
        return True
    if max(lhs.expansion_size_bound(), rhs.expansion_size_bound()) > 500_000:
        return False  # refuse to expand; witness should match structurally
    diff = lhs.expanded_num() - rhs.expanded_num()
    ambient = [gamma.surface.poly]
    if curve is not None:
        ambient = ambient + list(curve.generators)
    return membership(diff, IdealHandle(ambient, g.context))


# --- residue support of a symbol ---


@dataclass
class Factorization:
    """Certified factor lists for the numerators/denominators of a symbol."""

    num_a: list  # list[(PrimeDivisor, mult)]
    den_a: list
    num_b: list
    den_b: list

    def all_divisors(self):
        seen = {}
        for part in (self.num_a, self.den_a, self.num_b, self.den_b):
            for d, _ in part:
                seen.setdefault(d.poly.canonical_key(), d)
        return list(seen.values())


@dataclass
class SupportEntry:
    divisor: PrimeDivisor
    residue: ResidueClass
    triviality: str  # TrivialByWitness | Nontrivial | Unknown
    detail: str = ""


def _check_factor_product(stated: Polynomial, factors) -> bool:
    prod = Polynomial.one(stated.context)
    for d, m in factors:
        prod = prod * d.poly ** m
    if prod == stated:
        return True
    # allow a scalar: compare monic forms and degree sums
    if stated.is_zero() or prod.is_zero():
        return False
    return prod.monic() == stated.monic()


def residue_support(
    A: SymbolAlgebra,
    fz: Factorization,
    cube_witnesses: dict | None = None,
    evidence: dict | None = None,
):
    """Complete divisor support of the second residue, with triviality status.

    ``cube_witnesses`` maps divisor name -> CubeWitness, ``evidence`` maps
    divisor name -> verified-nontrivial flag provider (callable returning a
    detail string or raising).  Unresolved divisors are reported Unknown.
    """
    cube_witnesses = cube_witnesses or {}
    evidence = evidence or {}
    for stated, factors in (
        (A.a.expanded_num(), fz.num_a),
        (A.a.expanded_den(), fz.den_a),
        (A.b.expanded_num(), fz.num_b),
        (A.b.expanded_den(), fz.den_b),
    ):
        if not _check_factor_product(stated, factors):
            raise FactorizationIncomplete(
                "factor product does not reproduce the stated polynomial"
            )
        degsum = sum(d.poly.degree() * m for d, m in factors)
        if degsum != stated.degree():
            raise FactorizationIncomplete("degree sums do not match")
    out = {}
    for d in fz.all_divisors():
        e = valuation_along_divisor(A.a, d)
        f = valuation_along_divisor(A.b, d)
        if e == 0 and f == 0:
            continue  # residue is the class of 1
        cls = residue2_symbol(A, d)
        if d.name in cube_witnesses:
            ok = cube_triviality_check(cls, cube_witnesses[d.name])
            out[d.name] = SupportEntry(
                d, cls, "TrivialByWitness" if ok else "Unknown",
                "cube witness verified" if ok else "cube witness rejected",
            )
        elif d.name in evidence:
            out[d.name] = SupportEntry(d, cls, "Nontrivial", evidence[d.name])
        else:
            out[d.name] = SupportEntry(d, cls, "Unknown", "no witness supplied")
    return out
