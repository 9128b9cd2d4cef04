"""Sparse exact multivariate polynomials and factored rational functions.

Monomials are exponent tuples indexed by a shared :class:`VariableContext`;
polynomials are dicts ``{exponents: raw coefficient}`` holding nonzero
coefficients only, so equality of the dicts is equality of polynomials.
The canonical term order is degrevlex on the context.

Rational functions keep numerator and denominator as *factor lists* with a
scalar in front and are never expanded unless asked: valuation bookkeeping
routinely forms 21st powers of degree-9 forms whose expansions are huge,
while every consumer only needs per-factor data.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .coeff import CoeffElement, FieldMode
from .errors import (  # noqa: F401  (re-exported error types)
    ContextMismatch,
    DivisionByZero,
    NotHomogeneous,
    UncertifiedPrime,
    ZeroInput,
)

# --- Monomial helpers (exponent tuples) ---


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a, b):
    """a | b componentwise."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(b, a):
    return tuple(x - y for x, y in zip(b, a))


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def as_raw(field: FieldMode, v):
    """Coerce a CoeffElement, int or Fraction into the field's raw form."""
    if isinstance(v, CoeffElement):
        if v.field != field:
            raise ContextMismatch(f"scalar from {v.field}, expected {field}")
        return v.raw
    if isinstance(v, int):
        return field.from_int(v)
    if isinstance(v, Fraction):
        return field.from_fraction(v)
    return v


def drl_antikey(e):
    """Sort key; ascending antikey = descending degrevlex order."""
    return (-sum(e), e[::-1])


def lex_antikey(e):
    return tuple(-x for x in e)


ANTIKEYS = {"degrevlex": drl_antikey, "lex": lex_antikey}


class VariableContext:
    """Ordered variable names over a fixed coefficient field."""

    __slots__ = ("names", "field", "_index")

    def __init__(self, names, field: FieldMode):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ContextMismatch("duplicate variable names")
        self.field = field
        self._index = {n: i for i, n in enumerate(self.names)}

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self._index[name]

    def extend(self, *extra: str) -> "VariableContext":
        return VariableContext(self.names + tuple(extra), self.field)

    def drop(self, var: int) -> "VariableContext":
        return VariableContext(self.names[:var] + self.names[var + 1 :], self.field)

    def fresh_name(self, stem: str = "y") -> str:
        if stem not in self._index:
            return stem
        i = 0
        while f"{stem}{i}" in self._index:
            i += 1
        return f"{stem}{i}"

    def key(self):
        return (self.names, self.field.key())

    def __eq__(self, other):
        return isinstance(other, VariableContext) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"VariableContext({','.join(self.names)}; {self.field.name})"


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to raw coeffs."""

    __slots__ = ("context", "terms")

    def __init__(self, context: VariableContext, terms: dict):
        self.context = context
        self.terms = terms

    # --- constructors ---

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, {})

    @classmethod
    def const(cls, ctx, raw):
        if ctx.field.is_zero(raw):
            return cls(ctx, {})
        return cls(ctx, {(0,) * ctx.nvars: raw})

    @classmethod
    def one(cls, ctx):
        return cls.const(ctx, ctx.field.one)

    @classmethod
    def variable(cls, ctx, i: int, exp: int = 1):
        e = [0] * ctx.nvars
        e[i] = exp
        return cls(ctx, {tuple(e): ctx.field.one})

    def _chk(self, other):
        if self.context != other.context:
            raise ContextMismatch(f"{self.context} vs {other.context}")

    # --- ring operations ---

    def __add__(self, other):
        self._chk(other)
        f = self.context.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = f.add(out.get(e, f.zero), c)
            if f.is_zero(v):
                out.pop(e, None)
            else:
                out[e] = v
        return Polynomial(self.context, out)

    def __sub__(self, other):
        self._chk(other)
        f = self.context.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = f.sub(out.get(e, f.zero), c)
            if f.is_zero(v):
                out.pop(e, None)
            else:
                out[e] = v
        return Polynomial(self.context, out)

    def __neg__(self):
        f = self.context.field
        return Polynomial(self.context, {e: f.neg(c) for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(self.context.field.from_int(other))
        self._chk(other)
        f = self.context.field
        out = {}
        mul, add, is0 = f.mul, f.add, f.is_zero
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                ne = tuple(x + y for x, y in zip(e1, e2))
                v = add(out.get(ne, f.zero), mul(c1, c2))
                if is0(v):
                    out.pop(ne, None)
                else:
                    out[ne] = v
        return Polynomial(self.context, out)

    __rmul__ = __mul__

    def scale(self, raw):
        f = self.context.field
        if f.is_zero(raw):
            return Polynomial.zero(self.context)
        return Polynomial(self.context, {e: f.mul(c, raw) for e, c in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        acc = Polynomial.one(self.context)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base if n > 1 else base
            n >>= 1
        return acc

    # --- structure ---

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def leading(self, antikey=drl_antikey):
        """(exponent, coeff) of the leading term in the given order."""
        if not self.terms:
            raise ZeroInput("leading term of 0")
        e = min(self.terms, key=antikey)
        return e, self.terms[e]

    def monic(self, antikey=drl_antikey) -> "Polynomial":
        if not self.terms:
            return self
        _, c = self.leading(antikey)
        f = self.context.field
        if f.eq(c, f.one):
            return self
        return self.scale(f.inv(c))

    def degree_in(self, var: int) -> int:
        if not self.terms:
            return -1
        return max(e[var] for e in self.terms)

    def sorted_terms(self, antikey=drl_antikey):
        return sorted(self.terms.items(), key=lambda t: antikey(t[0]))

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.context == other.context and self.terms == other.terms

    def __hash__(self):
        return hash((self.context.key(), tuple(sorted(self.terms.items()))))

    def canonical_key(self):
        return (self.context.key(), tuple(sorted(self.terms.items())))

    # --- calculus and substitution ---

    def partial_derivative(self, var: int) -> "Polynomial":
        f = self.context.field
        out = {}
        for e, c in self.terms.items():
            k = e[var]
            if k == 0:
                continue
            ne = e[:var] + (k - 1,) + e[var + 1 :]
            v = f.add(out.get(ne, f.zero), f.mul(c, f.from_int(k)))
            if f.is_zero(v):
                out.pop(ne, None)
            else:
                out[ne] = v
        return Polynomial(self.context, out)

    def evaluate(self, point) -> CoeffElement:
        """Exact evaluation at a point of raw values or CoeffElements."""
        f = self.context.field
        raws = [as_raw(f, p) for p in point]
        if len(raws) != self.context.nvars:
            raise ContextMismatch("point length does not match context")
        # memoize powers per variable
        pows = [{0: f.one} for _ in raws]
        acc = f.zero
        for e, c in self.terms.items():
            v = c
            for i, k in enumerate(e):
                if k:
                    tbl = pows[i]
                    if k not in tbl:
                        tbl[k] = f.pow(raws[i], k)
                    v = f.mul(v, tbl[k])
            acc = f.add(acc, v)
        return CoeffElement(f, acc)

    def gradient(self):
        return [self.partial_derivative(i) for i in range(self.context.nvars)]

    def substitute(self, var: int, raw) -> "Polynomial":
        """Substitute a scalar for one variable, keeping the context."""
        f = self.context.field
        raw = as_raw(f, raw)
        out = {}
        pows = {0: f.one}
        for e, c in self.terms.items():
            k = e[var]
            if k not in pows:
                pows[k] = f.pow(raw, k)
            v = f.mul(c, pows[k])
            if f.is_zero(v):
                continue
            ne = e[:var] + (0,) + e[var + 1 :]
            nv = f.add(out.get(ne, f.zero), v)
            if f.is_zero(nv):
                out.pop(ne, None)
            else:
                out[ne] = nv
        return Polynomial(self.context, out)

    def dehomogenize(self, var: int, raw=None) -> "Polynomial":
        """Substitute var := value (default 1) and drop it from the context."""
        f = self.context.field
        if raw is None:
            raw = f.one
        sub = self.substitute(var, raw)
        nctx = self.context.drop(var)
        out = {e[:var] + e[var + 1 :]: c for e, c in sub.terms.items()}
        return Polynomial(nctx, out)

    def shift(self, point) -> "Polynomial":
        """Translate: f(x) -> f(x + c) for a point c, one variable at a time."""
        f = self.context.field
        res = self
        for i, p in enumerate(point):
            raw = as_raw(f, p)
            if f.is_zero(raw):
                continue
            res = res._shift_one(i, raw)
        return res

    def _shift_one(self, var: int, raw) -> "Polynomial":
        f = self.context.field
        out = {}
        for e, c in self.terms.items():
            k = e[var]
            for j in range(k + 1):
                # x^k -> sum_j C(k,j) c^(k-j) x^j
                coeff = f.mul(c, f.mul(f.from_int(comb(k, j)), f.pow(raw, k - j)))
                if f.is_zero(coeff):
                    continue
                ne = e[:var] + (j,) + e[var + 1 :]
                v = f.add(out.get(ne, f.zero), coeff)
                if f.is_zero(v):
                    out.pop(ne, None)
                else:
                    out[ne] = v
        return Polynomial(self.context, out)

    def univariate_view(self, var: int):
        """Coefficients of f as a polynomial in one variable.

        Returns [(exponent, Polynomial in the remaining variables)], highest
        exponent first; reassembling reproduces f exactly.
        """
        nctx = self.context.drop(var)
        buckets: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[var]
            buckets.setdefault(k, {})[e[:var] + e[var + 1 :]] = c
        return [
            (k, Polynomial(nctx, buckets[k])) for k in sorted(buckets, reverse=True)
        ]

    # --- display ---

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        f = self.context.field
        names = self.context.names
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                (names[i] if k == 1 else f"{names[i]}^{k}")
                for i, k in enumerate(e)
                if k
            )
            cs = f.to_str(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append(f"-{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __repr__(self):
        return self.to_str()


# --- exact division and multiplicities ---


def exact_divide(g: Polynomial, f: Polynomial):
    """Quotient q with g = q*f, or None if f does not divide g exactly."""
    if f.is_zero():
        raise DivisionByZero("division by zero polynomial")
    if g.is_zero():
        return Polynomial.zero(g.context)
    g._chk(f)
    fld = g.context.field
    lt_e, lt_c = f.leading()
    inv_lc = fld.inv(lt_c)
    tail = [(e, c) for e, c in f.terms.items() if e != lt_e]
    work = dict(g.terms)
    quot = {}
    while work:
        e = min(work, key=drl_antikey)
        c = work.pop(e)
        if not mono_divides(lt_e, e):
            return None
        q = mono_div(e, lt_e)
        qc = fld.mul(c, inv_lc)
        quot[q] = qc
        for e2, c2 in tail:
            ne = mono_mul(q, e2)
            v = fld.sub(work.get(ne, fld.zero), fld.mul(qc, c2))
            if fld.is_zero(v):
                work.pop(ne, None)
            else:
                work[ne] = v
    return Polynomial(g.context, quot)


def divides(f: Polynomial, g: Polynomial) -> bool:
    return exact_divide(g, f) is not None


def multiplicity_of_factor(f: Polynomial, g: Polynomial) -> int:
    """Largest k with f^k | g, by repeated exact division."""
    if g.is_zero():
        raise ZeroInput("multiplicity in the zero polynomial")
    if f.is_constant():
        raise ZeroInput("multiplicity of a constant factor")
    k = 0
    cur = g
    while True:
        q = exact_divide(cur, f)
        if q is None:
            return k
        cur = q
        k += 1


# --- homogeneity ---


def euler_identity_check(f: Polynomial) -> bool:
    """Sum_i x_i df/dx_i == deg(f) * f, for homogeneous f."""
    if f.is_zero():
        return True
    if not f.is_homogeneous():
        raise NotHomogeneous(f.to_str())
    ctx = f.context
    acc = Polynomial.zero(ctx)
    for i in range(ctx.nvars):
        acc = acc + Polynomial.variable(ctx, i) * f.partial_derivative(i)
    return acc == f.scale(ctx.field.from_int(f.degree()))


# --- Eisenstein certificate check ---


def eisenstein_check(f: Polynomial, var: int, prime) -> bool:
    """Eisenstein's criterion for f as a univariate polynomial in ``var``.

    ``prime`` is a prime-divisor object (poly + irreducibility certificate)
    in the remaining variables.  Two certificate routes:

    * exact prime (any certificate other than a regular point): the usual
      conditions p not| c_top, p | c_i for i < top, p^2 not| c_0, via
      multiplicity counting;
    * regular-point certificate: ``prime.poly`` may be reducible; the
      certified multiplicity-one irreducible factor q through the regular
      point is the Eisenstein prime.  Sufficient checkable conditions:
      prime.poly | c_i for all i < top, c_top(pt) != 0 and (c_0 /
      prime.poly)(pt) != 0, which force q not| c_top and q^2 not| c_0.
    """
    cert = getattr(prime, "cert", None)
    p_poly = getattr(prime, "poly", prime)
    if cert is None:
        raise UncertifiedPrime("prime divisor carries no certificate")
    view = f.univariate_view(var)
    if not view:
        raise ZeroInput("eisenstein check on 0")
    nctx = view[0][1].context
    pd = _into_context(p_poly, nctx)
    if pd is None or pd.is_constant():
        raise UncertifiedPrime("prime must be non-constant in the remaining variables")
    top_e, top_c = view[0]
    lower = view[1:]
    if getattr(cert, "kind", None) == "regular_point":
        pt = [c for i, c in enumerate(cert.point) if i != var]
        if not f.context.field.is_zero(pd.evaluate(pt).raw):
            return False  # certificate point not on the base factor
        if top_c.evaluate(pt).is_zero():
            return False
        for _, ci in lower:
            if exact_divide(ci, pd) is None:
                return False
        if lower:
            c0_e, c0 = view[-1]
            if c0_e != 0:
                return False  # no constant term: p^2 | 0
            cof = exact_divide(c0, pd)
            if cof is None:
                return False
            if not _coprime_to_certified_factor(pd, cof, pt):
                return False
        return True
    # exact prime route
    if multiplicity_of_factor(pd, top_c) != 0:
        return False
    for k, ci in lower:
        m = multiplicity_of_factor(pd, ci)
        if m < 1:
            return False
        if k == 0 and m != 1:
            return False
    if not lower:
        return False
    if view[-1][0] != 0:
        return False  # zero constant term is divisible by p^2
    return True


def _coprime_to_certified_factor(pd: Polynomial, cof: Polynomial, pt) -> bool:
    """Does the multiplicity-one factor of pd through pt avoid cof?

    Sufficient either way: cof does not vanish at the point, or the common
    vanishing locus of pd and cof has codimension at least two (so they
    share no divisorial component at all).
    """
    if cof.is_constant():
        return not cof.is_zero()
    if not cof.evaluate(pt).is_zero():
        return True
    if not (pd.is_homogeneous() and cof.is_homogeneous()):
        return False
    from .ideal import EMPTY, IdealHandle, dimension

    d = dimension(IdealHandle([pd, cof], pd.context), "projective")
    ambient = pd.context.nvars - 1
    return d == EMPTY or d < ambient - 1


def _into_context(p: Polynomial, nctx: VariableContext):
    """Re-express p in a context with a subset of the variables, if possible."""
    if p.context == nctx:
        return p
    try:
        idx = [p.context.index(n) for n in nctx.names]
    except KeyError:
        return None
    pos = set(idx)
    out = {}
    for e, c in p.terms.items():
        if any(k and i not in pos for i, k in enumerate(e)):
            return None
        out[tuple(e[i] for i in idx)] = c
    return Polynomial(nctx, out)


# --- factored rational functions ---


def _canon_factor(p: Polynomial, antikey=drl_antikey):
    """(monic polynomial, leading coefficient) for factor normalization."""
    _, c = p.leading(antikey)
    return p.monic(antikey), c


class RationalFunction:
    """coeff * prod(num_i^e_i) / prod(den_j^d_j), factors monic, never expanded."""

    __slots__ = ("context", "coeff", "num", "den")

    def __init__(self, context, coeff, num, den):
        self.context = context
        self.coeff = coeff  # raw field scalar, nonzero unless the function is 0
        self.num = num  # tuple[(Polynomial, int > 0)]
        self.den = den

    @classmethod
    def from_polys(cls, num: Polynomial, den: Polynomial | None = None) -> "RationalFunction":
        ctx = num.context
        f = ctx.field
        if den is None:
            den = Polynomial.one(ctx)
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        coeff = f.one
        nfs = []
        if num.is_zero():
            return cls(ctx, f.zero, (), ())
        if num.is_constant():
            coeff = f.mul(coeff, num.leading()[1])
        else:
            m, c = _canon_factor(num)
            coeff = f.mul(coeff, c)
            nfs.append((m, 1))
        dfs = []
        if den.is_constant():
            coeff = f.div(coeff, den.leading()[1])
        else:
            m, c = _canon_factor(den)
            coeff = f.div(coeff, c)
            dfs.append((m, 1))
        return cls(ctx, coeff, tuple(nfs), tuple(dfs))

    @classmethod
    def from_factor_lists(cls, ctx, coeff, num_factors, den_factors) -> "RationalFunction":
        """Build from (poly, exponent) lists; factors are normalized and merged."""
        f = ctx.field
        if f.is_zero(coeff):
            return cls(ctx, f.zero, (), ())
        nmap, dmap = {}, {}
        c = coeff
        for p, e in num_factors:
            if e == 0 or p.is_constant():
                if p.is_constant():
                    if p.is_zero():
                        return cls(ctx, f.zero, (), ())
                    c = f.mul(c, f.pow(p.leading()[1], e))
                continue
            m, lc = _canon_factor(p)
            c = f.mul(c, f.pow(lc, e))
            k = m.canonical_key()
            nmap[k] = (m, nmap.get(k, (m, 0))[1] + e)
        for p, e in den_factors:
            if e == 0 or p.is_constant():
                if p.is_constant():
                    if p.is_zero():
                        raise DivisionByZero("zero denominator factor")
                    c = f.div(c, f.pow(p.leading()[1], e))
                continue
            m, lc = _canon_factor(p)
            c = f.div(c, f.pow(lc, e))
            k = m.canonical_key()
            dmap[k] = (m, dmap.get(k, (m, 0))[1] + e)
        # cancel identical factors between num and den (no gcd computation)
        for k in list(nmap):
            if k in dmap:
                pn, en = nmap[k]
                pdn, ed = dmap[k]
                m = min(en, ed)
                if en - m:
                    nmap[k] = (pn, en - m)
                else:
                    del nmap[k]
                if ed - m:
                    dmap[k] = (pdn, ed - m)
                else:
                    del dmap[k]
        num = tuple(sorted(nmap.values(), key=lambda t: t[0].canonical_key()))
        den = tuple(sorted(dmap.values(), key=lambda t: t[0].canonical_key()))
        return cls(ctx, c, num, den)

    def is_zero(self) -> bool:
        return self.context.field.is_zero(self.coeff)

    def expanded_num(self) -> Polynomial:
        acc = Polynomial.const(self.context, self.coeff)
        for p, e in self.num:
            acc = acc * p**e
        return acc

    def expanded_den(self) -> Polynomial:
        acc = Polynomial.one(self.context)
        for p, e in self.den:
            acc = acc * p**e
        return acc

    def expansion_size_bound(self) -> int:
        b = 1
        for p, e in self.num + self.den:
            b *= len(p.terms) ** e
        return b

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        if self.context != other.context:
            raise ContextMismatch("rational functions from different contexts")
        f = self.context.field
        return RationalFunction.from_factor_lists(
            self.context,
            f.mul(self.coeff, other.coeff),
            list(self.num) + list(other.num),
            list(self.den) + list(other.den),
        )

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise DivisionByZero("inverse of the zero function")
        f = self.context.field
        return RationalFunction(self.context, f.inv(self.coeff), self.den, self.num)

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        return self * other.inverse()

    def __pow__(self, n: int) -> "RationalFunction":
        if n == 0:
            return RationalFunction(self.context, self.context.field.one, (), ())
        if n < 0:
            return self.inverse() ** (-n)
        f = self.context.field
        return RationalFunction.from_factor_lists(
            self.context,
            f.pow(self.coeff, n),
            [(p, e * n) for p, e in self.num],
            [(p, e * n) for p, e in self.den],
        )

    def scale(self, raw) -> "RationalFunction":
        f = self.context.field
        c = f.mul(self.coeff, raw)
        if f.is_zero(c):
            return RationalFunction(self.context, f.zero, (), ())
        return RationalFunction(self.context, c, self.num, self.den)

    def evaluate(self, point) -> CoeffElement:
        f = self.context.field
        acc = self.coeff
        for p, e in self.num:
            acc = f.mul(acc, f.pow(p.evaluate(point).raw, e))
        for p, e in self.den:
            v = p.evaluate(point).raw
            if f.is_zero(v):
                raise DivisionByZero("denominator factor vanishes at the point")
            acc = f.div(acc, f.pow(v, e))
        return CoeffElement(f, acc)

    def homogeneous_degree(self):
        """Total degree num - den if every factor is homogeneous, else None."""
        d = 0
        for p, e in self.num:
            if not p.is_homogeneous():
                return None
            d += p.degree() * e
        for p, e in self.den:
            if not p.is_homogeneous():
                return None
            d -= p.degree() * e
        return d

    def structural_key(self):
        """Canonical key: equal keys mean literally identical factored forms."""
        return (
            self.coeff,
            tuple((p.canonical_key(), e) for p, e in self.num),
            tuple((p.canonical_key(), e) for p, e in self.den),
        )

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.context == other.context and self.structural_key() == other.structural_key()

    def __hash__(self):
        return hash((self.context.key(), self.structural_key()))

    def to_str(self) -> str:
        f = self.context.field

        def side(factors):
            parts = []
            for p, e in factors:
                base = f"({p.to_str()})"
                parts.append(base if e == 1 else f"{base}^{e}")
            return "*".join(parts)

        ns = side(self.num)
        cs = f.to_str(self.coeff)
        if not ns:
            ns = cs
        elif cs == "-1":
            ns = "-" + ns
        elif cs != "1":
            ns = f"{cs}*{ns}"
        ds = side(self.den)
        return f"{ns}/{ds}" if ds else ns

    def __repr__(self):
        return self.to_str()


# --- parser ---

_TOK_INT = "int"
_TOK_NAME = "name"
_TOK_OP = "op"


def _tokenize(text: str):
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append((_TOK_INT, text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append((_TOK_NAME, text[i:j], i))
            i = j
        elif ch in "+-*^()/":
            toks.append((_TOK_OP, ch, i))
            i += 1
        else:
            raise ValueError(f"unexpected character {ch!r} at column {i}")
    return toks


class _PolyParser:
    """Recursive-descent parser for polynomial expressions.

    Grammar: sums of products with `^` powers; `*` optional (juxtaposition);
    `w` is the cube root of unity; bare `a/b` between two integer literals is
    an exact scalar fraction; names refer to declared polynomials.
    """

    def __init__(self, ctx: VariableContext, text: str, names=None):
        self.ctx = ctx
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0
        self.names = names or {}

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None, len(self.text))

    def next(self):
        t = self.peek()
        self.pos += 1
        return t

    def error(self, msg, tok=None):
        col = (tok or self.peek())[2]
        raise ValueError(f"{msg} at column {col}: {self.text!r}")

    def parse(self) -> Polynomial:
        p = self.parse_sum()
        if self.pos != len(self.toks):
            self.error("trailing input")
        return p

    def parse_sum(self) -> Polynomial:
        kind, val, _ = self.peek()
        neg = False
        if kind == _TOK_OP and val in "+-":
            self.next()
            neg = val == "-"
        p = self.parse_product()
        if neg:
            p = -p
        while True:
            kind, val, _ = self.peek()
            if kind == _TOK_OP and val in "+-":
                self.next()
                q = self.parse_product()
                p = p - q if val == "-" else p + q
            else:
                return p

    def parse_product(self) -> Polynomial:
        p = self.parse_power()
        while True:
            kind, val, _ = self.peek()
            if kind == _TOK_OP and val == "*":
                self.next()
                p = p * self.parse_power()
            elif kind in (_TOK_INT, _TOK_NAME) or (kind == _TOK_OP and val == "("):
                p = p * self.parse_power()  # juxtaposition
            else:
                return p

    def parse_power(self) -> Polynomial:
        base = self.parse_atom()
        kind, val, _ = self.peek()
        if kind == _TOK_OP and val == "^":
            self.next()
            k2, v2, _ = self.next()
            if k2 != _TOK_INT:
                self.error("exponent must be an integer")
            return base ** int(v2)
        return base

    def parse_atom(self) -> Polynomial:
        kind, val, tok_at = self.next()
        f = self.ctx.field
        if kind == _TOK_INT:
            # integer, possibly an exact fraction int/int
            k2, v2, _ = self.peek()
            if k2 == _TOK_OP and v2 == "/":
                k3, v3, _ = self.toks[self.pos + 1] if self.pos + 1 < len(self.toks) else (None, None, 0)
                if k3 == _TOK_INT:
                    self.next()
                    self.next()
                    return Polynomial.const(self.ctx, f.from_fraction(Fraction(int(val), int(v3))))
            return Polynomial.const(self.ctx, f.from_int(int(val)))
        if kind == _TOK_NAME:
            if val == "w":
                return Polynomial.const(self.ctx, f.omega())
            if val in self.ctx._index:
                return Polynomial.variable(self.ctx, self.ctx.index(val))
            if val in self.names:
                p = self.names[val]
                if p.context != self.ctx:
                    q = _into_context(p, self.ctx)
                    if q is None:
                        self.error(f"name {val!r} lives in another context", (kind, val, tok_at))
                    return q
                return p
            self.error(f"unknown name {val!r}", (kind, val, tok_at))
        if kind == _TOK_OP and val == "(":
            p = self.parse_sum()
            k2, v2, _ = self.next()
            if k2 != _TOK_OP or v2 != ")":
                self.error("expected ')'")
            return p
        if kind == _TOK_OP and val == "-":
            return -self.parse_power()
        self.error("expected a term", (kind, val, tok_at))


def parse_polynomial(ctx: VariableContext, text: str, names=None) -> Polynomial:
    return _PolyParser(ctx, text, names).parse()


def _parse_factor_side(ctx, text, names):
    """Parse one side of a rational function as a factor list.

    Top-level products (explicit '*' or juxtaposition) stay unexpanded so
    structural identities between high powers remain checkable; anything
    that is not a plain product of powers falls back to a single factor.
    """
    parser = _PolyParser(ctx, text, names)
    field = ctx.field
    coeff = field.one
    factors = []
    kind, val, _ = parser.peek()
    if kind == _TOK_OP and val == "-":
        parser.next()
        coeff = field.neg(coeff)
    while True:
        try:
            base = parser.parse_atom()
        except ValueError:
            return None
        kind, val, _ = parser.peek()
        exp = 1
        if kind == _TOK_OP and val == "^":
            parser.next()
            k2, v2, _ = parser.next()
            if k2 != _TOK_INT:
                return None
            exp = int(v2)
            kind, val, _ = parser.peek()
        factors.append((base, exp))
        if kind == _TOK_OP and val == "*":
            parser.next()
            continue
        if kind in (_TOK_INT, _TOK_NAME) or (kind == _TOK_OP and val == "("):
            continue  # juxtaposition
        if kind is None:
            return coeff, factors
        return None  # top-level '+', '-', ... : not a plain product


def parse_rational(ctx: VariableContext, text: str, names=None) -> RationalFunction:
    """num or num/den, split at the last top-level '/'.

    Each side is kept as a product of factors when it is written as one.
    """
    depth = 0
    split = None
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            split = i
    num_text = text if split is None else text[:split]
    den_text = None if split is None else text[split + 1 :]

    def strip_outer(s):
        s = s.strip()
        while s.startswith("(") and s.endswith(")"):
            depth = 0
            for i, ch in enumerate(s):
                if ch == "(":
                    depth += 1
                elif ch == ")":
                    depth -= 1
                    if depth == 0 and i != len(s) - 1:
                        return s
            s = s[1:-1].strip()
        return s

    num_text = strip_outer(num_text)
    if den_text is not None:
        den_text = strip_outer(den_text)
    field = ctx.field
    coeff = field.one
    sides = []
    for side_text, is_den in ((num_text, False), (den_text, True)):
        if side_text is None:
            sides.append([])
            continue
        parsed = _parse_factor_side(ctx, side_text, names)
        if parsed is None:
            p = parse_polynomial(ctx, side_text, names)
            if is_den and p.is_zero():
                raise DivisionByZero("zero denominator")
            sides.append([(p, 1)])
        else:
            c, factors = parsed
            coeff = field.mul(coeff, field.inv(c) if is_den else c)
            sides.append(factors)
    return RationalFunction.from_factor_lists(ctx, coeff, sides[0], sides[1])
