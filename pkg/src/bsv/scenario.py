"""Scenario description language, check orchestration and report emission.

A scenario file is line-oriented: ``field``, ``vars``, ``poly``, ``point``,
``divisor``, ``component``, ``symbol``, ``factors``, ``curve``,
``divisor_of`` and ``check`` sections, comments with ``#``.  Values never
contain spaces (polynomial expressions are written compactly); structured
values use ``key=value`` tokens with ``;``-separated sub-fields.

Running a scenario executes, in order: irreducibility certificates,
singular-point checks, residue support and cover matching, curve residues
and cube witnesses, divisor bookkeeping, Cartier witnesses, the hypothesis
checklist, the obstruction groups, then any requested local-model checks.
Failures never abort the run; each check lands in the report.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field as dc_field

from . import __version__
from .coeff import FieldMode, field_by_name
from .errors import (
    DuplicateName,
    ScenarioSyntaxError,
    UnresolvedName,
    UnresolvedRestriction,
)
from .ideal import EMPTY, IdealHandle, degree, dimension, jacobian_transversality_ideal, membership, radical_membership, singular_locus_ideal
from .localmodel import (
    case2_affine_chart,
    case2_equations,
    case3_chart_u3,
    chart_reducedness_check,
    classify_fiber,
    triple_component_check,
)
from .obstruction import (
    NONTRIVIAL,
    TRIVIAL_BY_WITNESS,
    UNKNOWN,
    IntersectionCurveDatum,
    build_gamma,
    compute_H,
    compute_Hprime,
    hypothesis_checklist,
    quotient_report,
)
from .poly import Polynomial, RationalFunction, VariableContext, as_raw, parse_polynomial, parse_rational
from .residue import (
    CertAsserted,
    CertConstantTerm,
    CertEisenstein,
    CertRegularPoint,
    CertSingularLocusDim,
    CubeWitness,
    CurveWitness,
    Factorization,
    PrimeDivisor,
    ResidueClass,
    SymbolAlgebra,
    cube_triviality_check,
    curve_valuation_witnessed,
    point_residue1,
    residue2_symbol,
    residue_support,
)

# --- document model ---


@dataclass
class PointEvidence:
    clazz: RationalFunction  # the class whose point residue is computed
    point_name: str
    expect: int
    relation_witness: RationalFunction | None = None  # gamma * clazz = h^3 when set


@dataclass
class ComponentDecl:
    name: str
    poly_name: str
    divisor: PrimeDivisor
    gamma: RationalFunction
    cover_witness: RationalFunction | None = None
    evidence: PointEvidence | None = None
    sing_points: list = dc_field(default_factory=list)  # point names


@dataclass
class DivisorDecl:
    name: str
    poly_name: str
    divisor: PrimeDivisor


@dataclass
class CurveVal:
    t: Polynomial
    u: RationalFunction
    m: int


@dataclass
class CartierDecl:
    point_name: str
    t: Polynomial
    k: int
    cofactor: Polynomial


@dataclass
class CurveDecl:
    name: str
    gens: list
    pair: tuple  # component names (i, j)
    vals: dict  # component name -> CurveVal
    cubes: dict  # component name -> RationalFunction (cube witness)
    cartier: dict  # component name -> list[CartierDecl]


@dataclass
class DivisorOfDecl:
    name: str
    on: str  # component name
    func_name: str  # named polynomial restricted to the surface
    parts: dict  # curve name -> CurveVal


@dataclass
class CheckRequest:
    kind: str
    args: dict


@dataclass
class ScenarioDoc:
    name: str
    field: FieldMode
    context: VariableContext
    polys: dict
    points: dict  # name -> list of raw coefficients
    components: list
    divisors: list
    symbol: SymbolAlgebra | None
    factors: dict  # side 'a'/'b' -> {"num": [(name, mult)], "den": [...]}
    curves: list
    divisor_checks: list
    checks: list
    trivial_witnesses: dict = dc_field(default_factory=dict)  # divisor name -> cube witness

    def component(self, name):
        for c in self.components:
            if c.name == name:
                return c
        raise UnresolvedName(name)

    def any_divisor(self, name):
        for c in self.components:
            if c.name == name:
                return c.divisor
        for d in self.divisors:
            if d.name == name:
                return d.divisor
        raise UnresolvedName(name)

    def __eq__(self, other):
        if not isinstance(other, ScenarioDoc):
            return NotImplemented
        return serialize_scenario(self) == serialize_scenario(other)


# --- parsing ---


def _split_args(rest):
    """key=value tokens; repeated keys collect into lists."""
    out = {}
    for tok in rest.split():
        if "=" not in tok:
            raise ValueError(f"expected key=value, got {tok!r}")
        k, v = tok.split("=", 1)
        if k in out:
            if not isinstance(out[k], list):
                out[k] = [out[k]]
            out[k].append(v)
        else:
            out[k] = v
    return out


def _parse_point_value(field, text):
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"expected [c,...], got {text!r}")
    vals = []
    for part in text[1:-1].split(","):
        part = part.strip()
        if part == "w":
            vals.append(field.omega())
        elif part.startswith("w^"):
            vals.append(field.pow(field.omega(), int(part[2:])))
        elif part.startswith("-"):
            vals.append(field.neg(_parse_scalar(field, part[1:])))
        else:
            vals.append(_parse_scalar(field, part))
    return vals


def _parse_scalar(field, text):
    if text == "w":
        return field.omega()
    if text.startswith("w^"):
        return field.pow(field.omega(), int(text[2:]))
    return field.from_int(int(text))


class _DocBuilder:
    def __init__(self):
        self.name = "scenario"
        self.field = None
        self.context = None
        self.polys = {}
        self.points = {}
        self.components = []
        self.divisors = []
        self.symbol_exprs = None
        self.factors = {}
        self.curves = []
        self.divisor_checks = []
        self.checks = []
        self.trivial_witnesses = {}

    def poly(self, text):
        return parse_polynomial(self.context, text, self.polys)

    def rational(self, text):
        return parse_rational(self.context, text, self.polys)

    def parse_cert(self, text, lookup):
        if text == "sing_locus_dim":
            return CertSingularLocusDim(0)
        if text == "asserted" or text.startswith("asserted("):
            note = text[len("asserted(") : -1] if "(" in text else ""
            return CertAsserted(note or "asserted")
        if text.startswith("regular_point("):
            pt = _parse_point_value(self.field, text[len("regular_point(") : -1])
            return CertRegularPoint(tuple(pt))
        if text.startswith("eisenstein("):
            body = text[len("eisenstein(") : -1]
            var_name, prime_name = body.split(";")
            return CertEisenstein(self.context.index(var_name), lookup(prime_name))
        if text.startswith("constant_term("):
            body = text[len("constant_term(") : -1]
            var_name, inner_name = body.split(";")
            return CertConstantTerm(self.context.index(var_name), lookup(inner_name))
        raise ValueError(f"unknown certificate kind {text!r}")


def parse_scenario(text: str, field_override: FieldMode | None = None) -> ScenarioDoc:
    b = _DocBuilder()
    named_divisors = {}

    def lookup_divisor(name):
        if name not in named_divisors:
            raise UnresolvedName(name)
        return named_divisors[name]

    lines = text.splitlines()
    any_content = False
    for lineno, raw_line in enumerate(lines, 1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        any_content = True
        try:
            head, _, rest = line.partition(" ")
            rest = rest.strip()
            if head == "scenario":
                b.name = rest
            elif head == "field":
                b.field = field_override or field_by_name(rest)
            elif head == "vars":
                if b.field is None:
                    raise ValueError("field must be declared before vars")
                b.context = VariableContext(tuple(rest.split()), b.field)
            elif head == "poly":
                name, _, expr = rest.partition("=")
                name = name.strip()
                if name in b.polys:
                    raise DuplicateName(name)
                b.polys[name] = b.poly(expr.strip())
            elif head == "point":
                name, _, expr = rest.partition("=")
                name = name.strip()
                if name in b.points:
                    raise DuplicateName(name)
                b.points[name] = _parse_point_value(b.field, expr.strip())
            elif head == "divisor":
                name, _, body = rest.partition(":")
                name = name.strip()
                args = _split_args(body)
                pd = PrimeDivisor(
                    b.polys[args["poly"]], b.parse_cert(args["cert"], lookup_divisor), name
                )
                if name in named_divisors:
                    raise DuplicateName(name)
                named_divisors[name] = pd
                b.divisors.append(DivisorDecl(name, args["poly"], pd))
            elif head == "component":
                name, _, body = rest.partition(":")
                name = name.strip()
                args = _split_args(body)
                pd = PrimeDivisor(
                    b.polys[args["poly"]], b.parse_cert(args["cert"], lookup_divisor), name
                )
                if name in named_divisors:
                    raise DuplicateName(name)
                named_divisors[name] = pd
                ev = None
                if "ev_point" in args:
                    ev = PointEvidence(
                        b.rational(args["ev_class"]) if "ev_class" in args else b.rational(args["gamma"]),
                        args["ev_point"],
                        int(args["ev_expect"]),
                        b.rational(args["ev_relation"]) if "ev_relation" in args else None,
                    )
                b.components.append(
                    ComponentDecl(
                        name,
                        args["poly"],
                        pd,
                        b.rational(args["gamma"]),
                        b.rational(args["cover_witness"]) if "cover_witness" in args else None,
                        ev,
                        args.get("sing_points", "").split(",") if args.get("sing_points") else [],
                    )
                )
            elif head == "symbol":
                args = _split_args(rest.lstrip(": "))
                b.symbol_exprs = (args["a"], args["b"])
            elif head == "factors":
                side, _, body = rest.partition(":")
                side = side.strip()
                args = _split_args(body)
                def flist(s):
                    out = []
                    for item in s.split(","):
                        if "^" in item:
                            nm, mult = item.split("^")
                            out.append((nm, int(mult)))
                        else:
                            out.append((item, 1))
                    return out
                b.factors[side] = {"num": flist(args["num"]), "den": flist(args["den"])}
            elif head == "curve":
                name, _, body = rest.partition(":")
                name = name.strip()
                args = _split_args(body)
                gens = [b.poly(g) for g in args["gens"].split(";")]
                pair = tuple(args["pair"][1:-1].split(","))
                vals, cubes, cartier = {}, {}, {}
                for k, v in args.items():
                    if k.startswith("val_"):
                        comp = k[4:]
                        sub = dict(p.split("=", 1) for p in v[1:-1].split(";"))
                        vals[comp] = CurveVal(b.poly(sub["t"]), b.rational(sub["u"]), int(sub["m"]))
                    elif k.startswith("cube_"):
                        cubes[k[5:]] = b.rational(v)
                    elif k.startswith("cartier_"):
                        comp = k[8:]
                        entries = v if isinstance(v, list) else [v]
                        for entry in entries:
                            sub = dict(p.split("=", 1) for p in entry[1:-1].split(";"))
                            cartier.setdefault(comp, []).append(
                                CartierDecl(
                                    sub["point"], b.poly(sub["t"]), int(sub["k"]), b.poly(sub["cof"])
                                )
                            )
                b.curves.append(CurveDecl(name, gens, pair, vals, cubes, cartier))
            elif head == "divisor_of":
                name, _, body = rest.partition(":")
                name = name.strip()
                args = _split_args(body)
                parts = {}
                for k, v in args.items():
                    if k.startswith("part_"):
                        sub = dict(p.split("=", 1) for p in v[1:-1].split(";"))
                        parts[k[5:]] = CurveVal(b.poly(sub["t"]), b.rational(sub["u"]), int(sub["m"]))
                b.divisor_checks.append(DivisorOfDecl(name, args["on"], args["func"], parts))
            elif head == "trivial":
                name, _, expr = rest.partition("=")
                b.trivial_witnesses[name.strip()] = b.rational(expr.strip())
            elif head == "check":
                kind, _, body = rest.partition(" ")
                b.checks.append(CheckRequest(kind.strip(), _split_args(body) if body.strip() else {}))
            else:
                raise ValueError(f"unknown section {head!r}")
        except (ValueError, KeyError, DuplicateName, UnresolvedName) as e:
            if isinstance(e, (DuplicateName, UnresolvedName)):
                raise
            raise ScenarioSyntaxError(str(e), line=lineno) from e
    if not any_content or b.field is None or b.context is None:
        raise ScenarioSyntaxError("scenario must declare field and vars", line=1)
    symbol = None
    if b.symbol_exprs:
        symbol = SymbolAlgebra(b.rational(b.symbol_exprs[0]), b.rational(b.symbol_exprs[1]))
    doc = ScenarioDoc(
        b.name,
        b.field,
        b.context,
        b.polys,
        b.points,
        b.components,
        b.divisors,
        symbol,
        b.factors,
        b.curves,
        b.divisor_checks,
        b.checks,
        b.trivial_witnesses,
    )
    _validate_references(doc)
    return doc


def _validate_references(doc: ScenarioDoc):
    names = {c.name for c in doc.components} | {d.name for d in doc.divisors}
    for side in doc.factors.values():
        for part in ("num", "den"):
            for nm, _ in side[part]:
                if nm not in names:
                    raise UnresolvedName(nm)
    for c in doc.components:
        if c.evidence and c.evidence.point_name not in doc.points:
            raise UnresolvedName(c.evidence.point_name)
        for p in c.sing_points:
            if p not in doc.points:
                raise UnresolvedName(p)
    for cu in doc.curves:
        for nm in cu.pair:
            if nm not in names:
                raise UnresolvedName(nm)
        for comp, decls in cu.cartier.items():
            for d in decls:
                if d.point_name not in doc.points:
                    raise UnresolvedName(d.point_name)
    for nm in doc.trivial_witnesses:
        if nm not in names:
            raise UnresolvedName(nm)
    for dv in doc.divisor_checks:
        if dv.on not in names:
            raise UnresolvedName(dv.on)
        if dv.func_name not in doc.polys:
            raise UnresolvedName(dv.func_name)
        for cn in dv.parts:
            if cn not in {c.name for c in doc.curves}:
                raise UnresolvedName(cn)


# --- serialization ---


def _cert_spec(cert) -> str:
    if cert.kind == "singular_locus_dim":
        return "sing_locus_dim"
    if cert.kind == "asserted":
        return f"asserted({cert.note})" if cert.note else "asserted"
    if cert.kind == "regular_point":
        return "regular_point(" + _point_text(cert.point) + ")"
    if cert.kind == "eisenstein":
        return f"eisenstein({cert.prime.poly.context.names[cert.var]};{cert.prime.name})"
    if cert.kind == "constant_term":
        return f"constant_term({cert.inner.poly.context.names[cert.var]};{cert.inner.name})"
    raise ValueError(cert.kind)


def _point_text(pt) -> str:
    def one(v):
        if isinstance(v, tuple):  # Q(w) pair
            a, b = v
            if b == 0:
                return str(a)
            if (a, b) == (0, 1):
                return "w"
            if (a, b) == (0, -1):
                return "-w"
            if (a, b) == (-1, -1):
                return "w^2"
            raise ValueError("only integer and w-power entries are serializable in points")
        return str(v)

    return "[" + ",".join(one(v) for v in pt) + "]"


def serialize_scenario(doc: ScenarioDoc) -> str:
    out = [f"scenario {doc.name}", f"field {doc.field.name}", "vars " + " ".join(doc.context.names)]
    for name, p in doc.polys.items():
        out.append(f"poly {name} = {p.to_str()}")
    for name, pt in doc.points.items():
        out.append(f"point {name} = {_point_text(pt)}")
    for d in doc.divisors:
        out.append(f"divisor {d.name}: poly={d.poly_name} cert={_cert_spec(d.divisor.cert)}")
    for c in doc.components:
        line = (
            f"component {c.name}: poly={c.poly_name} cert={_cert_spec(c.divisor.cert)}"
            f" gamma={c.gamma.to_str()}"
        )
        if c.cover_witness is not None:
            line += f" cover_witness={c.cover_witness.to_str()}"
        if c.evidence is not None:
            line += (
                f" ev_point={c.evidence.point_name} ev_expect={c.evidence.expect}"
                f" ev_class={c.evidence.clazz.to_str()}"
            )
            if c.evidence.relation_witness is not None:
                line += f" ev_relation={c.evidence.relation_witness.to_str()}"
        if c.sing_points:
            line += " sing_points=" + ",".join(c.sing_points)
        out.append(line)
    if doc.symbol is not None:
        out.append(f"symbol : a={doc.symbol.a.to_str()} b={doc.symbol.b.to_str()}")
    for side in sorted(doc.factors):
        fl = doc.factors[side]
        def fmt(items):
            return ",".join(nm if m == 1 else f"{nm}^{m}" for nm, m in items)
        out.append(f"factors {side}: num={fmt(fl['num'])} den={fmt(fl['den'])}")
    for cu in doc.curves:
        line = f"curve {cu.name}: gens=" + ";".join(g.to_str() for g in cu.gens)
        line += f" pair=({cu.pair[0]},{cu.pair[1]})"
        for comp in sorted(cu.vals):
            v = cu.vals[comp]
            line += f" val_{comp}=(t={v.t.to_str()};u={v.u.to_str()};m={v.m})"
        for comp in sorted(cu.cubes):
            line += f" cube_{comp}={cu.cubes[comp].to_str()}"
        for comp in sorted(cu.cartier):
            for d in cu.cartier[comp]:
                line += (
                    f" cartier_{comp}=(point={d.point_name};t={d.t.to_str()};"
                    f"k={d.k};cof={d.cofactor.to_str()})"
                )
        out.append(line)
    for nm in sorted(doc.trivial_witnesses):
        out.append(f"trivial {nm} = {doc.trivial_witnesses[nm].to_str()}")
    for dv in doc.divisor_checks:
        line = f"divisor_of {dv.name}: on={dv.on} func={dv.func_name}"
        for cn in sorted(dv.parts):
            v = dv.parts[cn]
            line += f" part_{cn}=(t={v.t.to_str()};u={v.u.to_str()};m={v.m})"
        out.append(line)
    for ch in doc.checks:
        line = f"check {ch.kind}"
        for k in sorted(ch.args):
            line += f" {k}={ch.args[k]}"
        out.append(line)
    return "\n".join(out) + "\n"


# --- report ---


@dataclass
class CheckRecord:
    id: str
    status: str  # Pass | Fail | Witnessed | Asserted | CertifiedModP
    details: str

    def as_dict(self):
        return {"id": self.id, "status": self.status, "details": self.details}


@dataclass
class Report:
    scenario: str
    field: str
    prime: int | None
    checks: list
    obstruction: dict | None
    local_models: dict
    timing: float
    toolchain: dict

    def has_fail(self) -> bool:
        return any(c.status == "Fail" for c in self.checks)

    def as_dict(self):
        return {
            "schema": "1",
            "scenario": self.scenario,
            "field": self.field,
            "prime": self.prime,
            "checks": [c.as_dict() for c in sorted(self.checks, key=lambda c: c.id)],
            "obstruction": self.obstruction,
            "local_models": self.local_models,
            "timing": self.timing,
            "toolchain": self.toolchain,
        }


def emit_report(report: Report, fmt: str = "text") -> bytes:
    if fmt == "json":
        return (json.dumps(report.as_dict(), sort_keys=True, indent=2) + "\n").encode()
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    lines = [f"scenario: {report.scenario}   field: {report.field}"]
    width = max((len(c.id) for c in report.checks), default=10) + 2
    for c in sorted(report.checks, key=lambda c: c.id):
        lines.append(f"{c.id:<{width}}{c.status:<16}{c.details}")
    if report.obstruction:
        o = report.obstruction
        lines.append(
            f"obstruction: |Gamma|={o['gamma_order']} |H|={o['H_order']} "
            f"|H'|={o['Hprime_order']} quotient={o['quotient_order']} "
            f"nontrivial={o['nontrivial']}"
        )
    lines.append(f"elapsed: {report.timing:.2f}s")
    return ("\n".join(lines) + "\n").encode()


# --- the runner ---


class _Runner:
    def __init__(self, doc: ScenarioDoc):
        self.doc = doc
        self.checks = []
        self.obstruction = None
        self.local_models = {}
        self.modular = doc.field.kind == "fp"
        self._seq = 0

    def _status(self, ok: bool, witnessed=False, computed=True):
        if not ok:
            return "Fail"
        if witnessed:
            return "Witnessed"
        if computed and self.modular:
            return "CertifiedModP"
        return "Pass"

    def add(self, phase: int, kind: str, name: str, status: str, details: str):
        self._seq += 1
        self.checks.append(
            CheckRecord(f"{phase:03d}_{self._seq:03d}_{kind}_{name}", status, details)
        )

    def point(self, name):
        return self.doc.points[name]

    # phase 10: certificates
    def run_certs(self):
        for c in self.doc.components:
            ok, st, detail = c.divisor.verify_certificate()
            status = st if st == "Asserted" else self._status(ok)
            self.add(10, "cert", c.name, status, detail)
        for d in self.doc.divisors:
            ok, st, detail = d.divisor.verify_certificate()
            status = st if st == "Asserted" else self._status(ok)
            self.add(10, "cert", d.name, status, detail)

    # phase 15: listed singular points
    def run_sing_points(self):
        for c in self.doc.components:
            if not c.sing_points:
                continue
            I = singular_locus_ideal(c.divisor.poly)
            bad = []
            for pn in c.sing_points:
                pt = self.point(pn)
                if not all(g.evaluate(pt).is_zero() for g in I.generators):
                    bad.append(pn)
            ok = not bad
            self.add(
                15,
                "sing_points",
                c.name,
                "Pass" if ok else "Fail",
                f"{len(c.sing_points)}/{len(c.sing_points)} listed points satisfy all generators"
                if ok
                else f"points failing some generator: {bad}",
            )

    # phase 30: residue support, cover matching, evidence
    def run_support(self):
        doc = self.doc
        if doc.symbol is None or not doc.factors:
            return None
        def dv(nm):
            return doc.any_divisor(nm)
        fz = Factorization(
            num_a=[(dv(nm), m) for nm, m in doc.factors["a"]["num"]],
            den_a=[(dv(nm), m) for nm, m in doc.factors["a"]["den"]],
            num_b=[(dv(nm), m) for nm, m in doc.factors["b"]["num"]],
            den_b=[(dv(nm), m) for nm, m in doc.factors["b"]["den"]],
        )
        cube_witnesses = {nm: CubeWitness(w) for nm, w in doc.trivial_witnesses.items()}
        evidence = {}
        ev_results = {}
        for c in doc.components:
            if c.evidence is None:
                continue
            ev = c.evidence
            try:
                r = point_residue1(ev.clazz, self.point(ev.point_name), c.divisor, cap=50)
                ok = r == ev.expect and r != 0
                detail = (
                    f"m-adic point residue of {ev.clazz.to_str()} at {ev.point_name} is {r}"
                    f" (expected {ev.expect}; m-adic order semantics)"
                )
            except Exception as e:  # surface failures as Fail entries
                ok, detail = False, f"evidence computation failed: {e}"
            ev_results[c.name] = ok
            self.add(30, "evidence", c.name, self._status(ok), detail)
            if ok:
                evidence[c.name] = detail
            if ev.relation_witness is not None:
                rel = ResidueClass(c.divisor, _strip(c.gamma * ev.clazz, c.divisor))
                rok = cube_triviality_check(rel, CubeWitness(ev.relation_witness))
                self.add(
                    30,
                    "evidence_relation",
                    c.name,
                    self._status(rok, witnessed=rok),
                    "gamma times evidence class is a verified cube"
                    if rok
                    else "relation witness rejected",
                )
                ev_results[c.name] = ev_results[c.name] and rok
        try:
            support = residue_support(doc.symbol, fz, cube_witnesses, evidence)
            comp_names = {c.name for c in doc.components}
            nontrivial = {k for k, v in support.items() if v.triviality == "Nontrivial"}
            trivial = {k for k, v in support.items() if v.triviality == "TrivialByWitness"}
            ok = nontrivial == comp_names and trivial == set(support) - comp_names
            self.add(
                30,
                "residue_support",
                "symbol",
                self._status(ok),
                f"nontrivial: {sorted(nontrivial)}; trivial by witness: {sorted(trivial)}; "
                f"unknown: {sorted(set(support) - nontrivial - trivial)}",
            )
        except Exception as e:
            support = None
            self.add(30, "residue_support", "symbol", "Fail", str(e))
        # factorization completeness: degree sums
        if support is not None:
            da = sum(dv(nm).poly.degree() * m for nm, m in doc.factors["a"]["num"])
            db = sum(dv(nm).poly.degree() * m for nm, m in doc.factors["b"]["num"])
            ea = sum(dv(nm).poly.degree() * m for nm, m in doc.factors["a"]["den"])
            eb = sum(dv(nm).poly.degree() * m for nm, m in doc.factors["b"]["den"])
            ok = da == ea and db == eb
            self.add(
                30,
                "factorization_degrees",
                "symbol",
                "Pass" if ok else "Fail",
                f"numerator degree sums {da}, {db} match denominators {ea}, {eb}",
            )
        # cover matching: computed second residue vs declared gamma
        for c in doc.components:
            if c.cover_witness is None:
                continue
            try:
                cls = residue2_symbol(doc.symbol, c.divisor)
                ratio = ResidueClass(c.divisor, _strip(cls.repr / c.gamma, c.divisor))
                ok = cube_triviality_check(ratio, CubeWitness(c.cover_witness))
                self.add(
                    30,
                    "cover_match",
                    c.name,
                    self._status(ok, witnessed=ok),
                    "computed second residue equals the declared cover modulo a verified cube"
                    if ok
                    else "cover witness rejected",
                )
            except Exception as e:
                self.add(30, "cover_match", c.name, "Fail", str(e))
        return ev_results

    # phase 40-45: curves
    def run_curves(self, ev_results):
        doc = self.doc
        curve_data = []
        comp_index = {c.name: i + 1 for i, c in enumerate(doc.components)}
        for cu in doc.curves:
            handle = IdealHandle(cu.gens, doc.context)
            if not cu.vals and not cu.cubes:
                continue  # declared only for Cartier witnesses
            # containment: both surface polynomials vanish on the curve
            cont = all(
                radical_membership(doc.any_divisor(nm).poly, handle) for nm in cu.pair
            )
            residues = {}
            ok_all = cont
            details = [] if cont else ["curve is not contained in both surfaces"]
            for comp_name in cu.pair:
                comp = doc.component(comp_name)
                val = cu.vals.get(comp_name)
                if val is None:
                    ok_all = False
                    details.append(f"missing valuation witness for {comp_name}")
                    continue
                W = CurveWitness(handle, val.t, val.u, val.m)
                try:
                    m = curve_valuation_witnessed(comp.gamma, W, comp.divisor)
                    residues[comp_name] = m % 3
                    details.append(f"d1({comp_name}) = {m % 3} (witnessed order {m})")
                except Exception as e:
                    ok_all = False
                    details.append(f"valuation witness for {comp_name} rejected: {e}")
            self.add(
                40,
                "curve_residues",
                cu.name,
                self._status(ok_all and len(residues) == 2),
                "; ".join(details),
            )
            statuses = []
            for comp_name in cu.pair:
                comp = doc.component(comp_name)
                h = cu.cubes.get(comp_name)
                if h is None:
                    statuses.append(UNKNOWN)
                    continue
                try:
                    cls = ResidueClass(comp.divisor, _strip(comp.gamma, comp.divisor))
                    ok = cube_triviality_check(cls, CubeWitness(h), handle)
                    statuses.append(TRIVIAL_BY_WITNESS if ok else UNKNOWN)
                    self.add(
                        45,
                        "cube",
                        f"{cu.name}_{comp_name}",
                        self._status(ok, witnessed=ok),
                        f"gamma restricted to {cu.name} is a verified cube"
                        if ok
                        else "cube witness rejected",
                    )
                except Exception as e:
                    statuses.append(UNKNOWN)
                    self.add(45, "cube", f"{cu.name}_{comp_name}", "Fail", str(e))
            if len(residues) == 2:
                curve_data.append(
                    IntersectionCurveDatum(
                        cu.name,
                        (comp_index[cu.pair[0]], comp_index[cu.pair[1]]),
                        (residues[cu.pair[0]], residues[cu.pair[1]]),
                        tuple(statuses),
                    )
                )
        return curve_data

    # phase 48: divisor bookkeeping
    def run_divisor_checks(self):
        doc = self.doc
        curve_map = {c.name: c for c in doc.curves}
        for dv in doc.divisor_checks:
            comp = doc.component(dv.on)
            func = doc.polys[dv.func_name]
            f_rf = RationalFunction.from_polys(func)
            total = 0
            ok = True
            details = []
            for cn, val in sorted(dv.parts.items()):
                cu = curve_map[cn]
                handle = IdealHandle(cu.gens, doc.context)
                W = CurveWitness(handle, val.t, val.u, val.m)
                try:
                    m = curve_valuation_witnessed(f_rf, W, comp.divisor)
                    dC = degree(handle)
                    total += m * dC
                    details.append(f"{cn}: order {m}, degree {dC}")
                except Exception as e:
                    ok = False
                    details.append(f"{cn}: witness rejected ({e})")
            expect = comp.divisor.poly.degree() * func.degree()
            ok = ok and total == expect
            details.append(f"sum m_i deg C_i = {total}, deg(S) deg(f) = {expect}")
            self.add(48, "divisor_bookkeeping", dv.name, self._status(ok), "; ".join(details))

    # phase 50: Cartier witnesses
    def run_cartier(self):
        doc = self.doc
        results = []
        for cu in doc.curves:
            for comp_name, decls in sorted(cu.cartier.items()):
                comp = doc.component(comp_name)
                for d in decls:
                    ok, detail = self._cartier_one(cu, comp, d)
                    results.append((f"{cu.name}@{d.point_name}", ok))
                    self.add(
                        50,
                        "cartier",
                        f"{cu.name}_{d.point_name}",
                        self._status(ok, witnessed=ok),
                        detail,
                    )
        return results

    def _cartier_one(self, cu, comp, d):
        doc = self.doc
        pt = self.point(d.point_name)
        fld = doc.field
        raws = [as_raw(fld, v) for v in pt]
        chart = max(i for i, v in enumerate(raws) if not fld.is_zero(v))
        inv = fld.inv(raws[chart])
        affine = [fld.mul(v, inv) for i, v in enumerate(raws) if i != chart]
        f_chart = comp.divisor.poly.dehomogenize(chart)
        t_chart = d.t.dehomogenize(chart)
        cof_chart = d.cofactor.dehomogenize(chart)
        # the non-local-parameter generator of the curve ideal, in the chart
        others = [g for g in cu.gens if g != d.t]
        if len(others) != len(cu.gens) - 1:
            return False, "local parameter must be one of the curve generators"
        diff = None
        for q in others:
            q_chart = q.dehomogenize(chart)
            cand = q_chart - t_chart**d.k * cof_chart
            if membership(cand, IdealHandle([f_chart], f_chart.context)):
                diff = q_chart
                break
        if diff is None:
            return False, "q != t^k * cofactor modulo the chart surface ideal"
        cval = cof_chart.shift(affine).evaluate([fld.zero] * f_chart.context.nvars)
        if cval.is_zero():
            return False, "cofactor vanishes at the point"
        return True, (
            f"curve ideal is generated by {d.t.to_str()} at {d.point_name}: "
            f"second generator = t^{d.k} * cofactor modulo the surface, cofactor nonzero at the point"
        )

    # phase 60-70: checklist and obstruction groups
    def run_obstruction(self, curve_data, ev_results, cartier_results):
        doc = self.doc
        if not doc.components or doc.symbol is None:
            return  # nothing bundle-like to check
        surfaces = [(c.name, IdealHandle([c.divisor.poly], doc.context)) for c in doc.components]
        cert_ok = {}
        for rec in self.checks:
            if "_cert_" in rec.id:
                nm = rec.id.split("_cert_", 1)[1]
                cert_ok[nm] = rec.status in ("Pass", "CertifiedModP", "Asserted", "Witnessed")
        comp_reduced = [(c.name, cert_ok.get(c.name, False)) for c in doc.components]
        cover_ev = [(k, v) for k, v in (ev_results or {}).items()]
        items = hypothesis_checklist(surfaces, cartier_results, comp_reduced, cover_ev)
        for it in items:
            self.add(60, "hypothesis", it.item, it.status, it.detail)
        n = len(doc.components)
        gamma = build_gamma(n)
        H = compute_H(n, curve_data)
        try:
            Hp = compute_Hprime(n, H, curve_data)
            q, nontrivial = quotient_report(Hp)
            self.obstruction = {
                "gamma_order": gamma.order,
                "H_order": H.order,
                "Hprime_order": Hp.order,
                "quotient_order": q,
                "nontrivial": nontrivial,
                "checklist": [it.as_dict() for it in items],
            }
            self.add(
                70,
                "obstruction",
                "groups",
                "Pass",
                f"|Gamma|={gamma.order}, |H|={H.order}, |H'|={Hp.order}, "
                f"quotient order {q}, nontrivial={nontrivial}",
            )
        except UnresolvedRestriction as e:
            self.obstruction = {
                "gamma_order": gamma.order,
                "H_order": H.order,
                "Hprime_order": None,
                "quotient_order": None,
                "nontrivial": None,
                "checklist": [it.as_dict() for it in items],
            }
            self.add(
                70,
                "obstruction",
                "groups",
                "Fail",
                f"H' not computed: {e} (conservative refusal on Unknown restrictions)",
            )

    # phase 80: requested local-model and auxiliary checks
    def run_requests(self):
        for req in self.doc.checks:
            fn = getattr(self, f"_req_{req.kind}", None)
            if fn is None:
                self.add(80, req.kind, "unknown", "Fail", f"unknown check kind {req.kind!r}")
            else:
                fn(req.args)

    def _req_sing_dim(self, args):
        comp = self.doc.any_divisor(args["component"])
        d = dimension(singular_locus_ideal(comp.poly), "projective")
        expect = args["expect"]
        want = EMPTY if expect == "EMPTY" else int(expect)
        ok = d == want
        self.add(
            80,
            "sing_dim",
            args["component"],
            self._status(ok),
            f"projective dimension of the singular locus is {d} (expected {want})",
        )

    def _req_sing_equals_lines(self, args):
        comp = self.doc.any_divisor(args["component"])
        line_names = args["lines"].split(",")
        J = IdealHandle([self.doc.polys[nm] for nm in line_names], self.doc.context)
        I = singular_locus_ideal(comp.poly)
        from .ideal import ideal_equality_radical

        ok = ideal_equality_radical(I, J)
        self.add(
            80,
            "sing_equals_lines",
            args["component"],
            self._status(ok),
            "singular locus is radical-equal to the stated line arrangement"
            if ok
            else "singular locus differs from the stated line arrangement",
        )

    def _req_smooth(self, args):
        comp = self.doc.any_divisor(args["component"])
        d = dimension(singular_locus_ideal(comp.poly), "projective")
        ok = d == EMPTY
        self.add(
            80,
            "smooth",
            args["component"],
            self._status(ok),
            f"singular locus is {'empty' if ok else f'of dimension {d}'}",
        )

    def _req_transversal(self, args):
        n1, n2 = args["pair"][1:-1].split(",")
        d1 = self.doc.any_divisor(n1)
        d2 = self.doc.any_divisor(n2)
        J = jacobian_transversality_ideal(d1.poly, d2.poly)
        d = dimension(J, "projective")
        ok = d == EMPTY
        self.add(
            80,
            "transversal",
            f"{n1}_{n2}",
            self._status(ok),
            "smooth transversal intersection (proportional-gradient locus empty)"
            if ok
            else f"proportional-gradient locus has dimension {d}",
        )

    def _req_case2_charts(self, args):
        gctx = VariableContext(("g",), self.doc.field)
        eqs = case2_equations(Polynomial.variable(gctx, 0))
        failures = []
        sizes = {}
        for i in range(1, 4):
            for j in range(1, 4):
                for k in range(1, 4):
                    red = case2_affine_chart(eqs, (i, j, k))
                    sizes[f"({i},{j},{k})"] = len(red.subset)
                    if not red.four_generated:
                        failures.append(f"({i},{j},{k}):{len(red.subset)}")
        ok = not failures
        self.local_models["case2_chart_subset_sizes"] = sizes
        self.add(
            80,
            "case2_charts",
            "all27",
            self._status(ok),
            "all 27 charts reduce to 4 generators"
            if ok
            else "no 4-element generating subset exists; minimal sizes per chart: "
            + ", ".join(failures),
        )

    def _req_u3_chart(self, args):
        f_val = int(args.get("f", 0))
        g_val = int(args.get("g", 0))
        chart = case3_chart_u3(f_val, g_val, self.doc.field)
        rep = chart_reducedness_check(chart)
        ok = rep["complete_intersection"] and rep["reduced"]
        if "min_sing_codim" in args:
            ok = ok and rep["singular_codim"] >= int(args["min_sing_codim"])
        self.local_models[f"u3_chart_f{f_val}_g{g_val}"] = rep
        self.add(
            80,
            "u3_chart",
            f"f{f_val}_g{g_val}",
            self._status(ok),
            f"complete_intersection={rep['complete_intersection']}, "
            f"singular_codim={rep['singular_codim']}, reduced={rep['reduced']}",
        )

    def _req_case2_reducedness(self, args):
        gctx = VariableContext(("g",), self.doc.field)
        eqs = case2_equations(Polynomial.variable(gctx, 0))
        i, j, k = (int(x) for x in args["chart"][1:-1].split(","))
        red = case2_affine_chart(eqs, (i, j, k))
        # specialize g -> 0 in the full substituted ideal
        g_idx = red.full.context.index("g")
        gens0 = [p.dehomogenize(g_idx, self.doc.field.zero) for p in red.full.generators]
        gens0 = [p for p in gens0 if not p.is_zero()]
        from .localmodel import ChartIdeal

        ctx0 = gens0[0].context
        chart0 = ChartIdeal(ctx0, IdealHandle(gens0, ctx0), f"Case2Chart({i},{j},{k})@g=0")
        rep = chart_reducedness_check(chart0)
        ok = rep["reduced"]
        self.local_models[f"case2_chart_{i}{j}{k}_g0"] = rep
        self.add(
            80,
            "case2_reducedness",
            f"{i}{j}{k}_g0",
            self._status(ok),
            f"g->0 chart: complete_intersection={rep['complete_intersection']}, "
            f"singular_codim={rep['singular_codim']}, reduced={rep['reduced']}",
        )

    def _req_triple_components(self, args):
        gctx = VariableContext(("g",), self.doc.field)
        eqs = case2_equations(Polynomial.variable(gctx, 0))
        i, j, k = (int(x) for x in args.get("chart", "(1,1,1)")[1:-1].split(","))
        red = case2_affine_chart(eqs, (i, j, k))
        g_idx = red.full.context.index("g")
        gens0 = [p.dehomogenize(g_idx, self.doc.field.zero) for p in red.full.generators]
        gens0 = [p for p in gens0 if not p.is_zero()]
        from .localmodel import ChartIdeal

        ctx0 = gens0[0].context
        chart0 = ChartIdeal(ctx0, IdealHandle(gens0, ctx0), "g->0")
        comps = _decompose_monomial_like(chart0.ideal)
        if len(comps) < 2:
            self.add(80, "triple_components", f"{i}{j}{k}", "Fail", "decomposition failed")
            return
        # the intersection locus fills the third slot of the interface
        third = IdealHandle(comps[0].generators + comps[1].generators, ctx0)
        ok = triple_component_check(chart0, [comps[0], comps[1], third])
        wrong = triple_component_check(chart0, [comps[0], comps[0], comps[0]])
        self.add(
            80,
            "triple_components",
            f"{i}{j}{k}",
            self._status(ok and not wrong),
            f"{len(comps)} visible components in the chart; decomposition verified "
            "(duplicate component list correctly rejected)"
            if ok and not wrong
            else "component decomposition check failed",
        )

    def _req_classify(self, args):
        doc = self.doc
        pt = self.point(args["point"])
        expect = args["expect"]
        a_f = [
            (doc.any_divisor(nm).poly, m) for nm, m in doc.factors["a"]["num"]
        ] + [(doc.any_divisor(nm).poly, -m) for nm, m in doc.factors["a"]["den"]]
        b_f = [
            (doc.any_divisor(nm).poly, m) for nm, m in doc.factors["b"]["num"]
        ] + [(doc.any_divisor(nm).poly, -m) for nm, m in doc.factors["b"]["den"]]
        disc = [c.divisor.poly for c in doc.components]
        got = classify_fiber(a_f, b_f, disc, pt, doc.field)
        ok = got == expect
        self.add(
            80,
            "classify",
            args["point"],
            self._status(ok),
            f"fiber type over {args['point']}: {got} (expected {expect})",
        )


def _strip(rf, divisor):
    from .residue import _extract_surface_powers

    return _extract_surface_powers(rf, divisor)


def _decompose_monomial_like(I: IdealHandle):
    """Brute-force minimal primes of an ideal generated by variables and
    products of variables (the g->0 chart degenerations)."""
    ctx = I.context
    fixed = []
    split = []
    for g in I.basis():
        terms = list(g.terms)
        if len(terms) != 1:
            return []
        support = [i for i, e in enumerate(terms[0]) if e]
        if len(support) == 1:
            fixed.append(support[0])
        else:
            split.append(support)
    fixed_vars = sorted(set(fixed))
    choices = [[]]
    for group in split:
        choices = [c + [v] for c in choices for v in group]
    seen = {}
    for choice in choices:
        vs = tuple(sorted(set(fixed_vars) | set(choice)))
        seen[vs] = True
    # keep minimal supports only
    primes = []
    for vs in sorted(seen):
        if not any(set(o) < set(vs) for o in seen if o != vs):
            primes.append(IdealHandle([Polynomial.variable(ctx, v) for v in vs], ctx))
    return primes


def run_checks(doc: ScenarioDoc) -> Report:
    t0 = time.time()
    r = _Runner(doc)
    r.run_certs()
    r.run_sing_points()
    ev_results = r.run_support()
    curve_data = r.run_curves(ev_results)
    r.run_divisor_checks()
    cartier_results = r.run_cartier()
    r.run_obstruction(curve_data, ev_results, cartier_results)
    r.run_requests()
    return Report(
        scenario=doc.name,
        field=doc.field.name,
        prime=doc.field.p if doc.field.kind == "fp" else None,
        checks=r.checks,
        obstruction=r.obstruction,
        local_models=r.local_models,
        timing=time.time() - t0,
        toolchain={"package": f"bsv {__version__}"},
    )