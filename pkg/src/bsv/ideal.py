"""Gröbner bases (Buchberger) and ideal-theoretic predicates.

Deterministic by construction: normal pair-selection strategy (lowest lcm
degree, then lexicographic tie-break on pair indices), monic auto-reduced
output, so the result is the unique reduced Gröbner basis for the order.

Dimension is read off independent variable subsets modulo the leading-term
ideal; degree comes from the Hilbert series numerator of the same monomial
ideal.  A process-wide basis memo makes repeated certifications (the same
heavy ideals show up in several checks) pay only once.
"""

from __future__ import annotations

import heapq
import threading
from functools import lru_cache
from operator import add as _add, le as _le, sub as _sub

from .coeff import FpMode
from .errors import EmptyScheme, NotHomogeneous
from .poly import (
    ANTIKEYS,
    Polynomial,
    VariableContext,
    drl_antikey,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)

EMPTY = "EMPTY"

_GB_MEMO: dict = {}
_GB_LOCK = threading.Lock()


class _Red:
    """Prebaked reducer: monic polynomial split into leading term and tail."""

    __slots__ = ("lt", "tail", "deg")

    def __init__(self, lt, tail):
        self.lt = lt
        self.tail = tail  # list[(exp, coeff)]
        self.deg = sum(lt)


def _nf_fp(terms, reducers, p, antikey):
    """Normal form over F_p; raw int arithmetic in the hot loop.

    ``reducers`` must be sorted by ascending leading-term degree so the scan
    can stop once reducer degrees exceed the monomial degree.
    """
    work = dict(terms)
    out = {}
    heap = [(antikey(e), e) for e in work]
    heapq.heapify(heap)
    push = heapq.heappush
    pop = heapq.heappop
    while heap:
        _, e = pop(heap)
        c = work.pop(e, 0)
        if not c:
            continue
        deg = sum(e)
        hit = None
        for red in reducers:
            if red.deg > deg:
                break
            if all(map(_le, red.lt, e)):
                hit = red
                break
        if hit is None:
            out[e] = c
            continue
        q = tuple(map(_sub, e, hit.lt))
        for e2, c2 in hit.tail:
            ne = tuple(map(_add, q, e2))
            prev = work.get(ne)
            v = ((prev or 0) - c * c2) % p
            if v:
                work[ne] = v
                if prev is None:
                    push(heap, (antikey(ne), ne))
            else:
                work.pop(ne, None)
    return out


def _nf_gen(terms, reducers, field, antikey):
    work = dict(terms)
    out = {}
    heap = [(antikey(e), e) for e in work]
    heapq.heapify(heap)
    fsub, fmul, fzero, fis0 = field.sub, field.mul, field.zero, field.is_zero
    while heap:
        _, e = heapq.heappop(heap)
        c = work.pop(e, None)
        if c is None or fis0(c):
            continue
        deg = sum(e)
        hit = None
        for red in reducers:
            if red.deg > deg:
                break
            if all(map(_le, red.lt, e)):
                hit = red
                break
        if hit is None:
            out[e] = c
            continue
        q = tuple(map(_sub, e, hit.lt))
        for e2, c2 in hit.tail:
            ne = tuple(map(_add, q, e2))
            prev = work.get(ne)
            v = fsub(prev if prev is not None else fzero, fmul(c, c2))
            if fis0(v):
                work.pop(ne, None)
            else:
                work[ne] = v
                if prev is None:
                    heapq.heappush(heap, (antikey(ne), ne))
    return out


def _normal_form_terms(terms, reducers, field, antikey):
    if not reducers:
        return dict(terms)
    if isinstance(field, FpMode):
        return _nf_fp(terms, reducers, field.p, antikey)
    return _nf_gen(terms, reducers, field, antikey)


def _make_reducer(terms, field, antikey):
    lt = min(terms, key=antikey)
    lc = terms[lt]
    inv = field.inv(lc)
    tail = [(e, field.mul(c, inv)) for e, c in terms.items() if e != lt]
    return _Red(lt, tail)


def _monic(terms, field, antikey):
    lt = min(terms, key=antikey)
    lc = terms[lt]
    if field.eq(lc, field.one):
        return dict(terms)
    inv = field.inv(lc)
    return {e: field.mul(c, inv) for e, c in terms.items()}


class GroebnerBasis:
    """Monic auto-reduced basis, sorted by ascending leading monomial."""

    def __init__(self, context: VariableContext, polys, order: str = "degrevlex"):
        self.context = context
        self.order = order
        self.polys = list(polys)
        ak = ANTIKEYS[order]
        self._antikey = ak
        # reducers sorted by degree so normal forms can stop scanning early
        self._reducers = sorted(
            (_make_reducer(p.terms, context.field, ak) for p in self.polys),
            key=lambda r: (r.deg, ak(r.lt)),
        )

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.context != self.context:
            raise ValueError("context mismatch in normal form")
        return Polynomial(
            self.context,
            _normal_form_terms(f.terms, self._reducers, self.context.field, self._antikey),
        )

    def contains_one(self) -> bool:
        return len(self.polys) == 1 and self.polys[0].is_constant() and not self.polys[0].is_zero()

    def leading_exponents(self):
        return [r.lt for r in self._reducers]

    def spair_reductions_zero(self, pairs=None) -> bool:
        """Buchberger criterion; ``pairs`` restricts to a sample of index pairs."""
        n = len(self.polys)
        field = self.context.field
        ak = self._antikey
        all_pairs = pairs if pairs is not None else [
            (i, j) for i in range(n) for j in range(i + 1, n)
        ]
        for i, j in all_pairs:
            s = _spoly_terms(self.polys[i].terms, self.polys[j].terms, field, ak)
            if _normal_form_terms(s, self._reducers, field, ak):
                return False
        return True

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)


def _spoly_terms(t1, t2, field, antikey):
    lt1 = min(t1, key=antikey)
    lt2 = min(t2, key=antikey)
    lcm = mono_lcm(lt1, lt2)
    q1 = mono_div(lcm, lt1)
    q2 = mono_div(lcm, lt2)
    inv1 = field.inv(t1[lt1])
    inv2 = field.inv(t2[lt2])
    out = {}
    for e, c in t1.items():
        out[mono_mul(e, q1)] = field.mul(c, inv1)
    for e, c in t2.items():
        ne = mono_mul(e, q2)
        v = field.sub(out.get(ne, field.zero), field.mul(c, inv2))
        if field.is_zero(v):
            out.pop(ne, None)
        else:
            out[ne] = v
    return out


def _gm_update(active, pairs, new_i, lts):
    """Gebauer-Möller pair update for a freshly added basis element.

    Returns the new active index set and pair set.  Pairs are stored as
    (i, j) with i < j; redundancy pruning follows the B/M/F criteria.
    """
    mh = lts[new_i]
    # candidate pairs with the new element, pruned among themselves
    C = sorted(active)
    D = []
    lcms = {ig: mono_lcm(mh, lts[ig]) for ig in C}
    while C:
        ig = C.pop(0)
        lcm_g = lcms[ig]
        if mono_mul(mh, lts[ig]) == lcm_g or (
            not any(mono_divides(lcms[ip], lcm_g) for ip in C)
            and not any(mono_divides(lcms[ip], lcm_g) for ip in D)
        ):
            D.append(ig)
    # drop pairs whose leading terms are coprime (Buchberger's first criterion)
    E = [ig for ig in D if mono_mul(mh, lts[ig]) != lcms[ig]]
    # prune old pairs made redundant by the new leading term
    B_new = set()
    for (i1, i2) in pairs:
        lcm12 = mono_lcm(lts[i1], lts[i2])
        if (
            not mono_divides(mh, lcm12)
            or mono_lcm(lts[i1], mh) == lcm12
            or mono_lcm(lts[i2], mh) == lcm12
        ):
            B_new.add((i1, i2))
    for ig in E:
        B_new.add((min(ig, new_i), max(ig, new_i)))
    # retire active elements whose leading term the new one divides
    active_new = {ig for ig in active if not mono_divides(mh, lts[ig])}
    active_new.add(new_i)
    return active_new, B_new


def buchberger(gens, order: str = "degrevlex") -> GroebnerBasis:
    """Reduced Gröbner basis of the ideal generated by ``gens``.

    Pair selection is the normal strategy: lowest lcm degree first, ties
    broken lexicographically on the pair indices.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("empty generator list")
    ctx = gens[0].context
    for g in gens:
        if g.context != ctx:
            raise ValueError("generators from different contexts")
    field = ctx.field
    ak = ANTIKEYS[order]

    polys = []  # term dicts, monic
    for g in gens:
        if not g.is_zero():
            polys.append(_monic(g.terms, field, ak))
    if not polys:
        return GroebnerBasis(ctx, [], order)

    lts = [min(t, key=ak) for t in polys]
    if any(sum(lt) == 0 for lt in lts):
        return GroebnerBasis(ctx, [Polynomial.one(ctx)], order)

    redmap = {i: _make_reducer(polys[i], field, ak) for i in range(len(polys))}

    def reducer_list(active):
        return sorted(
            (redmap[i] for i in active), key=lambda r: (r.deg, ak(r.lt))
        )

    active = set()
    pairs = set()
    for i in range(len(polys)):
        active, pairs = _gm_update(active, pairs, i, lts)
    reducers = reducer_list(active)

    while pairs:
        sel = min(pairs, key=lambda p: (sum(mono_lcm(lts[p[0]], lts[p[1]])), p))
        pairs.discard(sel)
        i, j = sel
        s = _spoly_terms(polys[i], polys[j], field, ak)
        nf = _normal_form_terms(s, reducers, field, ak)
        if not nf:
            continue
        nf = _monic(nf, field, ak)
        lt = min(nf, key=ak)
        if sum(lt) == 0:
            return GroebnerBasis(ctx, [Polynomial.one(ctx)], order)
        new_i = len(polys)
        polys.append(nf)
        lts.append(lt)
        redmap[new_i] = _make_reducer(nf, field, ak)
        active, pairs = _gm_update(active, pairs, new_i, lts)
        reducers = reducer_list(active)

    # minimal basis: prune divisible leading terms, then one interreduction
    # pass (tail monomials are never divisible by the element's own leading
    # term, so reducing against the full reducer set is safe)
    final = sorted(active)
    keep = []
    for i in final:
        if not any(
            mono_divides(lts[j], lts[i]) and (lts[j] != lts[i] or j < i)
            for j in final
            if j != i
        ):
            keep.append(i)
    reds = reducer_list(keep)
    out = []
    for i in keep:
        tail = {e: c for e, c in polys[i].items() if e != lts[i]}
        nf_tail = _normal_form_terms(tail, reds, field, ak)
        nf_tail[lts[i]] = field.one
        out.append(nf_tail)
    out.sort(key=lambda t: ak(min(t, key=ak)))
    return GroebnerBasis(ctx, [Polynomial(ctx, t) for t in out], order)


def groebner_basis(gens, order: str = "degrevlex") -> GroebnerBasis:
    """Memoized reduced basis (process-wide, keyed by generators and order)."""
    key = (
        order,
        gens[0].context.key() if gens else None,
        tuple(sorted(g.canonical_key() for g in gens)),
    )
    with _GB_LOCK:
        hit = _GB_MEMO.get(key)
    if hit is not None:
        return hit
    gb = buchberger(gens, order)
    with _GB_LOCK:
        _GB_MEMO[key] = gb
    return gb


class IdealHandle:
    """Generators plus a lazily computed, cached Gröbner basis."""

    def __init__(self, generators, context=None, order: str = "degrevlex"):
        self.generators = list(generators)
        if context is None:
            if not self.generators:
                raise ValueError("need a context for an empty ideal")
            context = self.generators[0].context
        self.context = context
        self.order = order
        self._basis = None
        self._lock = threading.Lock()

    def basis(self) -> GroebnerBasis:
        if self._basis is None:
            with self._lock:
                if self._basis is None:
                    gens = [g for g in self.generators if not g.is_zero()]
                    if not gens:
                        self._basis = GroebnerBasis(self.context, [], self.order)
                    else:
                        self._basis = groebner_basis(gens, self.order)
        return self._basis

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.generators)

    def extended(self, extra_gens) -> "IdealHandle":
        return IdealHandle(self.generators + list(extra_gens), self.context, self.order)


def membership(f: Polynomial, I: IdealHandle) -> bool:
    return I.basis().normal_form(f).is_zero()


def normal_form(f: Polynomial, I: IdealHandle) -> Polynomial:
    return I.basis().normal_form(f)


def radical_membership(f: Polynomial, I: IdealHandle) -> bool:
    """f in rad(I)?  Rabinowitsch; homogeneous inputs use the graded slice.

    For homogeneous I and homogeneous f of positive degree, 1 in I + (f - 1)
    iff f is nilpotent mod I, which avoids the extra variable.
    """
    if f.is_zero():
        return True
    ctx = I.context
    if f.is_constant():
        return I.basis().contains_one()  # a unit lies in rad(I) iff I = (1)
    if I.is_homogeneous() and f.is_homogeneous():
        gens = I.generators + [f - Polynomial.one(ctx)]
        return groebner_basis([g for g in gens if not g.is_zero()], I.order).contains_one()
    yname = ctx.fresh_name("y_rad")
    ectx = ctx.extend(yname)
    lifted = [_lift(g, ectx) for g in I.generators]
    yvar = Polynomial.variable(ectx, ectx.nvars - 1)
    lifted.append(Polynomial.one(ectx) - yvar * _lift(f, ectx))
    return groebner_basis([g for g in lifted if not g.is_zero()], I.order).contains_one()


def _lift(p: Polynomial, ectx: VariableContext) -> Polynomial:
    pad = ectx.nvars - p.context.nvars
    return Polynomial(ectx, {e + (0,) * pad: c for e, c in p.terms.items()})


def _minimal_monomials(exps):
    out = []
    for e in sorted(exps, key=lambda x: (sum(x), x)):
        if not any(mono_divides(m, e) for m in out):
            out.append(e)
    return out


def dimension(I: IdealHandle, mode: str = "projective"):
    """Krull dimension of the vanishing set, or EMPTY.

    Computed as the maximum size of a variable subset independent modulo the
    leading-term ideal.  Projective dimension is the cone dimension minus 1;
    EMPTY means the unit ideal (affine) or a leading-term ideal containing a
    power of every variable (projective).
    """
    if mode not in ("affine", "projective"):
        raise ValueError(mode)
    if mode == "projective" and not I.is_homogeneous():
        raise NotHomogeneous("projective dimension needs homogeneous generators")
    gb = I.basis()
    if gb.contains_one():
        return EMPTY
    lts = _minimal_monomials(gb.leading_exponents())
    n = I.context.nvars
    supports = [frozenset(i for i, k in enumerate(e) if k) for e in lts]
    best = 0
    for mask in range(1 << n):
        u = frozenset(i for i in range(n) if mask >> i & 1)
        if len(u) <= best:
            continue
        if all(not s <= u for s in supports):
            best = len(u)
    if mode == "affine":
        return best
    if best == 0:
        return EMPTY  # the cone is the origin only
    return best - 1


def hilbert_numerator(exps):
    """Numerator of the Hilbert series of R/M for a monomial ideal M.

    Returned as a coefficient dict {power: int} with series N(t)/(1-t)^n.
    """
    mins = tuple(sorted(_minimal_monomials(exps)))
    return dict(_hilbert_rec(mins))


@lru_cache(maxsize=None)
def _hilbert_rec(mins):
    if not mins:
        return ((0, 1),)
    if len(mins) == 1:
        d = sum(mins[0])
        return ((0, 1), (d, -1)) if d else ((0, 0),)
    if all(sum(1 for k in e if k) == 1 for e in mins):
        # pairwise coprime pure powers: product formula
        acc = {0: 1}
        for e in mins:
            d = sum(e)
            new = dict(acc)
            for k, v in acc.items():
                new[k + d] = new.get(k + d, 0) - v
            acc = {k: v for k, v in new.items() if v}
        return tuple(sorted(acc.items()))
    # pivot on a variable occurring in a non-pure-power generator
    counts = {}
    for e in mins:
        if sum(1 for k in e if k) > 1:
            for i, k in enumerate(e):
                if k:
                    counts[i] = counts.get(i, 0) + 1
    piv = max(sorted(counts), key=lambda i: counts[i])
    n = len(mins[0])
    pivot = tuple(1 if i == piv else 0 for i in range(n))
    plus = _minimal_monomials(list(mins) + [pivot])
    colon = _minimal_monomials(
        [tuple(k - 1 if i == piv and k else k for i, k in enumerate(e)) for e in mins]
    )
    a = dict(_hilbert_rec(tuple(sorted(plus))))
    b = _hilbert_rec(tuple(sorted(colon)))
    for k, v in b:
        a[k + 1] = a.get(k + 1, 0) + v
    return tuple(sorted((k, v) for k, v in a.items() if v))


def degree(I: IdealHandle) -> int:
    """Degree of the projective scheme from the Hilbert numerator.

    With N(t) = (1-t)^k Q(t), Q(1) != 0, the degree is Q(1).
    """
    if not I.is_homogeneous():
        raise NotHomogeneous("degree needs homogeneous generators")
    if dimension(I, "projective") == EMPTY:
        raise EmptyScheme("degree of an empty projective scheme")
    num = hilbert_numerator(I.basis().leading_exponents())
    # divide by (1 - t) while the value at t=1 is zero
    coeffs = [0] * (max(num) + 1)
    for k, v in num.items():
        coeffs[k] = v
    while sum(coeffs) == 0:
        # coeffs / (1 - t): prefix sums
        acc = 0
        new = []
        for c in coeffs:
            acc += c
            new.append(acc)
        while new and new[-1] == 0:
            new.pop()
        coeffs = new
    return sum(coeffs)


def standard_monomial_bound(I: IdealHandle) -> int:
    """Max total degree of monomials outside LT(I), for cone-dimension-0 ideals."""
    exps = _minimal_monomials(I.basis().leading_exponents())
    n = I.context.nvars
    caps = []
    for i in range(n):
        pures = [sum(e) for e in exps if all(k == 0 for j, k in enumerate(e) if j != i)]
        if not pures:
            raise EmptyScheme("not cone-dimension 0: no pure power in LT ideal")
        caps.append(min(pures))
    best = -1
    # standard monomials live under the pure-power box; enumerate it
    def rec(i, cur, deg):
        nonlocal best
        if i == n:
            best = max(best, deg)
            return
        for k in range(caps[i]):
            e = cur + (k,)
            if all(not mono_divides(m, e + (0,) * (n - i - 1)) for m in exps):
                rec(i + 1, e, deg + k)
    rec(0, (), 0)
    return best


def singular_locus_ideal(F: Polynomial, include_f: bool = True) -> IdealHandle:
    """Ideal of F and all its partial derivatives."""
    if not F.is_homogeneous():
        raise NotHomogeneous("singular locus of a non-homogeneous polynomial")
    gens = ([F] if include_f else []) + F.gradient()
    return IdealHandle([g for g in gens if not g.is_zero()], F.context)


def jacobian_transversality_ideal(F: Polynomial, G: Polynomial) -> IdealHandle:
    """F, G and the 2x2 minors of their Jacobian; emptiness certifies a
    smooth transversal intersection."""
    if not (F.is_homogeneous() and G.is_homogeneous()):
        raise NotHomogeneous("transversality ideal needs homogeneous inputs")
    dF = F.gradient()
    dG = G.gradient()
    n = F.context.nvars
    gens = [F, G]
    for i in range(n):
        for j in range(i + 1, n):
            m = dF[i] * dG[j] - dF[j] * dG[i]
            if not m.is_zero():
                gens.append(m)
    return IdealHandle(gens, F.context)


def jacobian_minors_ideal(gens_list, k: int) -> IdealHandle:
    """Ideal of the generators plus all k x k minors of their Jacobian."""
    ctx = gens_list[0].context
    n = ctx.nvars
    rows = [g.gradient() for g in gens_list]
    from itertools import combinations

    out = list(gens_list)
    for ri in combinations(range(len(rows)), k):
        for ci in combinations(range(n), k):
            out.append(_det([[rows[r][c] for c in ci] for r in ri]))
    return IdealHandle([g for g in out if not g.is_zero()], ctx)


def _det(m):
    if len(m) == 1:
        return m[0][0]
    if len(m) == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    ctx = m[0][0].context
    acc = Polynomial.zero(ctx)
    for j in range(len(m)):
        sub = [[row[c] for c in range(len(m)) if c != j] for row in m[1:]]
        t = m[0][j] * _det(sub)
        acc = acc - t if j % 2 else acc + t
    return acc


def ideal_equality_radical(I: IdealHandle, J: IdealHandle) -> bool:
    """rad(I) == rad(J), by two-sided radical membership of the generators."""
    if I.context != J.context:
        raise ValueError("ideals from different contexts")
    return all(radical_membership(g, J) for g in I.generators) and all(
        radical_membership(g, I) for g in J.generators
    )
