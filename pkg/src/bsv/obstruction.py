"""Residue-pattern obstruction groups over F_3.

The residue group of an n-component discriminant is Gamma = (Z/3)^n.  Curve
data on pairwise intersections cuts out two subgroups by equality
constraints x_i = x_j:

* H: constrained by curves whose first-residue pair is (1,2) or (2,1);
* H' <= H: additionally constrained by (0,0)-curves whose two restricted
  classes are not both certified trivial.

The obstruction lower bound is the quotient H' / <(1,...,1)>; its order is
|H'| / 3.  Constraints are equality-only, so union-find suffices; a
row-reduced basis is kept for closure tests and reporting.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import AllOnesMissing, UnresolvedRestriction

TRIVIAL_BY_WITNESS = "TrivialByWitness"
NONTRIVIAL = "NontrivialByEvidence"
UNKNOWN = "Unknown"


@dataclass
class IntersectionCurveDatum:
    """Verified residue data for one irreducible component of S_i cap S_j."""

    name: str
    pair: tuple  # (i, j), 1-based component indices
    residue_pair: tuple  # (d1(gamma_i), d1(gamma_j)) in Z/3
    restriction_status: tuple = (UNKNOWN, UNKNOWN)  # for gamma_i|_C, gamma_j|_C


class SubgroupF3:
    """Subgroup of (Z/3)^n, stored as a row-reduced basis."""

    def __init__(self, n: int, vectors=()):
        self.n = n
        self.basis = []
        for v in vectors:
            self.add(v)

    def add(self, vec):
        v = list(x % 3 for x in vec)
        for row in self.basis:
            lead = next(i for i, x in enumerate(row) if x)
            if v[lead]:
                f = v[lead] * _inv3(row[lead]) % 3
                v = [(a - f * b) % 3 for a, b in zip(v, row)]
        if any(v):
            self.basis.append(v)
            self._reduce()

    def _reduce(self):
        # full row reduction with sorted pivots
        rows = [r[:] for r in self.basis]
        out = []
        for col in range(self.n):
            piv = next((r for r in rows if r[col] and all(x == 0 for x in r[:col])), None)
            if piv is None:
                continue
            inv = _inv3(piv[col])
            piv = [x * inv % 3 for x in piv]
            rows = [
                [(a - r[col] * b) % 3 for a, b in zip(r, piv)] if r is not piv else piv
                for r in rows
            ]
            out.append(piv)
        self.basis = [r for r in out if any(r)]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def order(self) -> int:
        return 3**self.rank

    def contains(self, vec) -> bool:
        v = [x % 3 for x in vec]
        for row in self.basis:
            lead = next(i for i, x in enumerate(row) if x)
            if v[lead]:
                f = v[lead] * _inv3(row[lead]) % 3
                v = [(a - f * b) % 3 for a, b in zip(v, row)]
        return not any(v)

    def is_subgroup_of(self, other: "SubgroupF3") -> bool:
        return all(other.contains(r) for r in self.basis)

    def elements(self):
        """All vectors (enumeration; intended for small n)."""
        for coeffs in product(range(3), repeat=self.rank):
            v = [0] * self.n
            for c, row in zip(coeffs, self.basis):
                v = [(a + c * b) % 3 for a, b in zip(v, row)]
            yield tuple(v)

    def __eq__(self, other):
        return (
            isinstance(other, SubgroupF3)
            and self.n == other.n
            and self.basis == other.basis
        )

    def __repr__(self):
        return f"SubgroupF3(n={self.n}, order={self.order})"


def _inv3(x):
    return x % 3  # 1 and 2 are self-inverse mod 3


def build_gamma(n: int) -> SubgroupF3:
    """The full residue group (Z/3)^n with the standard basis."""
    if n < 1:
        raise ValueError("need at least one component")
    g = SubgroupF3(n)
    for i in range(n):
        g.add([1 if j == i else 0 for j in range(n)])
    return g


def _equality_subgroup(n: int, constraints) -> SubgroupF3:
    """Subgroup of vectors with x_i = x_j for each constrained pair (union-find)."""
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in constraints:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    classes = {}
    for i in range(n):
        classes.setdefault(find(i), []).append(i)
    g = SubgroupF3(n)
    for members in classes.values():
        g.add([1 if j in members else 0 for j in range(n)])
    return g


def compute_H(n: int, curves) -> SubgroupF3:
    """Vectors with x_i = x_j for every curve with residue pair (1,2)/(2,1)."""
    constraints = []
    for c in curves:
        if set(c.residue_pair) == {1, 2}:
            i, j = c.pair
            constraints.append((i - 1, j - 1))
    return _equality_subgroup(n, constraints)


def compute_Hprime(n: int, H: SubgroupF3, curves) -> SubgroupF3:
    """Refine H by (0,0)-curves whose restrictions are not both trivial.

    A curve with residue pair (0,0) and any Unknown restriction status
    blocks the computation: defaulting it either way could fabricate or
    destroy obstructions.
    """
    constraints = []
    for c in curves:
        if c.residue_pair == (0, 0):
            st = c.restriction_status
            if UNKNOWN in st:
                raise UnresolvedRestriction(
                    f"curve {c.name}: restriction status unresolved"
                )
            if not (st[0] == TRIVIAL_BY_WITNESS and st[1] == TRIVIAL_BY_WITNESS):
                i, j = c.pair
                constraints.append((i - 1, j - 1))
    extra = _equality_subgroup(n, constraints)
    out = SubgroupF3(n)
    for v in H.elements():
        if extra.contains(v):
            out.add(v)
    return out


def quotient_report(Hprime: SubgroupF3):
    """(order of H'/<(1,...,1)>, nontrivial flag)."""
    ones = [1] * Hprime.n
    if not Hprime.contains(ones):
        raise AllOnesMissing("the all-ones vector is not in H'")
    order = Hprime.order // 3
    return order, order > 1


@dataclass
class ChecklistItem:
    item: str
    status: str  # Pass | Fail | Witnessed | Asserted
    detail: str = ""

    def as_dict(self):
        return {"item": self.item, "status": self.status, "detail": self.detail}


def hypothesis_checklist(
    surface_handles,
    curve_cartier_status,
    component_reduced_status,
    cover_evidence_status,
):
    """Structured pass/fail/asserted report for the obstruction hypotheses.

    * incidence (1): no curve lies on three of the listed surfaces -- every
      triple intersection must have dimension <= 0 (vacuous for n = 2);
    * incidence (2): no point lies on four surfaces -- quadruple
      intersections must be empty (vacuous for n <= 3);
    * factoriality (3)/(3'): reported at the strength actually certified --
      per-curve Cartier witnesses on the designated surface, never "proved";
    * good discriminant locus: reducedness from the irreducibility
      certificates, general fiber type asserted by reference, cover
      irreducibility from nontriviality evidence, kernel condition asserted.

    ``surface_handles``: list of (name, IdealHandle); ``curve_cartier_status``:
    list of (curve name, bool verified); ``component_reduced_status`` /
    ``cover_evidence_status``: lists of (name, bool).
    """
    from itertools import combinations

    from .ideal import EMPTY, IdealHandle, dimension

    items = []
    n = len(surface_handles)
    if n <= 2:
        items.append(ChecklistItem("incidence_curves", "Pass", "vacuous for n <= 2"))
    else:
        bad = []
        for trip in combinations(range(n), 3):
            gens = []
            for t in trip:
                gens.extend(surface_handles[t][1].generators)
            d = dimension(IdealHandle(gens, surface_handles[0][1].context), "projective")
            if d != EMPTY and d >= 1:
                bad.append("&".join(surface_handles[t][0] for t in trip))
        items.append(
            ChecklistItem(
                "incidence_curves",
                "Fail" if bad else "Pass",
                f"triple intersections of dimension >= 1: {bad}" if bad else "all triple intersections have dimension <= 0",
            )
        )
    if n <= 3:
        items.append(ChecklistItem("incidence_points", "Pass", "vacuous for n <= 3"))
    else:
        bad = []
        for quad in combinations(range(n), 4):
            gens = []
            for t in quad:
                gens.extend(surface_handles[t][1].generators)
            d = dimension(IdealHandle(gens, surface_handles[0][1].context), "projective")
            if d != EMPTY:
                bad.append("&".join(surface_handles[t][0] for t in quad))
        items.append(
            ChecklistItem(
                "incidence_points",
                "Fail" if bad else "Pass",
                f"nonempty quadruple intersections: {bad}" if bad else "all quadruple intersections empty",
            )
        )
    all_cartier = all(ok for _, ok in curve_cartier_status) if curve_cartier_status else False
    items.append(
        ChecklistItem(
            "factoriality",
            "Witnessed" if all_cartier else "Fail" if curve_cartier_status else "Asserted",
            "Cartier witnesses verified on the designated surface at the listed points"
            if all_cartier
            else "missing or failed Cartier witnesses",
        )
    )
    red_ok = all(ok for _, ok in component_reduced_status)
    items.append(
        ChecklistItem(
            "good_locus_reduced",
            "Pass" if red_ok else "Fail",
            "irreducibility certificates verified" if red_ok else "a component certificate failed",
        )
    )
    items.append(
        ChecklistItem(
            "good_locus_general_fiber",
            "Asserted",
            "general fiber over each component is a transversal triple of Hirzebruch surfaces (by reference)",
        )
    )
    ev_ok = all(ok for _, ok in cover_evidence_status)
    items.append(
        ChecklistItem(
            "good_locus_cover_irreducible",
            "Pass" if (cover_evidence_status and ev_ok) else "Asserted",
            "triple covers irreducible: nontriviality evidence verified"
            if (cover_evidence_status and ev_ok)
            else "no computed nontriviality evidence; asserted",
        )
    )
    items.append(
        ChecklistItem(
            "good_locus_kernel_condition",
            "Asserted",
            "kernel-generation condition has no finite certificate; asserted",
        )
    )
    return items
