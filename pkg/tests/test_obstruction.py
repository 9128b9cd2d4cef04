"""Tests for the F_3 obstruction group machinery."""

import random
from itertools import permutations, product

import pytest

from bsv.errors import UnresolvedRestriction
from bsv.obstruction import (
    NONTRIVIAL,
    TRIVIAL_BY_WITNESS,
    UNKNOWN,
    IntersectionCurveDatum,
    SubgroupF3,
    build_gamma,
    compute_H,
    compute_Hprime,
    quotient_report,
)


def curve(name, pair, rp, st=(TRIVIAL_BY_WITNESS, TRIVIAL_BY_WITNESS)):
    return IntersectionCurveDatum(name, pair, rp, st)


def test_build_gamma_orders():
    assert build_gamma(2).order == 9
    assert build_gamma(1).order == 3
    assert build_gamma(3).order == 27


def test_compute_H():
    c12 = curve("C", (1, 2), (1, 2))
    H = compute_H(2, [c12])
    assert H.order == 3
    assert set(H.elements()) == {(0, 0), (1, 1), (2, 2)}
    assert compute_H(2, []).order == 9
    assert compute_H(1, []).order == 3
    # pairs like (0,1) or (2,0) impose no constraint
    assert compute_H(2, [curve("C", (1, 2), (0, 1)), curve("D", (1, 2), (2, 0))]).order == 9


def test_compute_Hprime():
    # all-(0,0) curves with both restrictions trivial leave H unchanged
    curves = [curve(f"D{i}", (1, 2), (0, 0)) for i in (1, 2, 3)]
    H = compute_H(2, curves)
    assert H.order == 9
    Hp = compute_Hprime(2, H, curves)
    assert Hp.order == 9
    # one nontrivial restriction forces the diagonal
    c = curve("C", (1, 2), (0, 0), (NONTRIVIAL, TRIVIAL_BY_WITNESS))
    Hp2 = compute_Hprime(2, H, [c])
    assert Hp2.order == 3
    assert set(Hp2.elements()) == {(0, 0), (1, 1), (2, 2)}
    # empty curve list: H' = H
    assert compute_Hprime(2, H, []).order == H.order
    # Unknown blocks the computation
    cu = curve("C", (1, 2), (0, 0), (UNKNOWN, TRIVIAL_BY_WITNESS))
    with pytest.raises(UnresolvedRestriction):
        compute_Hprime(2, H, [cu])


def test_quotient_report():
    g = build_gamma(2)
    assert quotient_report(g) == (3, True)
    diag = SubgroupF3(2, [[1, 1]])
    assert quotient_report(diag) == (1, False)
    g3 = build_gamma(3)
    assert quotient_report(g3) == (9, True)


def test_subgroup_closure_exhaustive_small():
    # all constraint patterns for n <= 3: each pair gets one of
    # {none, H-constraint, H'-constraint}
    for n in (1, 2, 3):
        pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        for pattern in product(range(3), repeat=len(pairs)):
            curves = []
            for (i, j), kind in zip(pairs, pattern):
                if kind == 1:
                    curves.append(curve(f"C{i}{j}", (i, j), (1, 2)))
                elif kind == 2:
                    curves.append(
                        curve(f"C{i}{j}", (i, j), (0, 0), (NONTRIVIAL, NONTRIVIAL))
                    )
            H = compute_H(n, curves)
            Hp = compute_Hprime(n, H, curves)
            G = build_gamma(n)
            # subgroup closure under addition and negation
            els = set(Hp.elements())
            for a in els:
                assert tuple((-x) % 3 for x in a) in els
                for b in els:
                    assert tuple((x + y) % 3 for x, y in zip(a, b)) in els
            # monotone chain and the all-ones vector
            assert Hp.is_subgroup_of(H) and H.is_subgroup_of(G)
            assert Hp.contains([1] * n)
            q, nontriv = quotient_report(Hp)
            assert q * 3 == Hp.order
            assert nontriv == (q > 1)


def test_equivariance_under_permutation():
    rng = random.Random(23)
    for _ in range(30):
        n = rng.choice([2, 3, 4])
        pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        curves = []
        for (i, j) in pairs:
            kind = rng.randrange(3)
            if kind == 1:
                curves.append(curve(f"C{i}{j}", (i, j), (1, 2)))
            elif kind == 2:
                curves.append(curve(f"C{i}{j}", (i, j), (0, 0), (NONTRIVIAL, TRIVIAL_BY_WITNESS)))
        perm = list(rng.choice(list(permutations(range(1, n + 1)))))
        inv = [0] * n
        for i, k in enumerate(perm):
            inv[k - 1] = i + 1

        def apply(p, idx):
            return p[idx - 1]

        permuted = [
            IntersectionCurveDatum(
                c.name,
                (min(apply(perm, c.pair[0]), apply(perm, c.pair[1])),
                 max(apply(perm, c.pair[0]), apply(perm, c.pair[1]))),
                c.residue_pair if apply(perm, c.pair[0]) < apply(perm, c.pair[1]) else c.residue_pair[::-1],
                c.restriction_status if apply(perm, c.pair[0]) < apply(perm, c.pair[1]) else c.restriction_status[::-1],
            )
            for c in curves
        ]
        H1 = compute_H(n, curves)
        H2 = compute_H(n, permuted)
        els1 = {tuple(v[inv[k] - 1] for k in range(n)) for v in H1.elements()}
        assert els1 == set(H2.elements())


def test_hypothesis_checklist_counterexample():
    # three surfaces through the line (x0, x1) fail the curve-incidence bound
    from bsv.coeff import fp_mode
    from bsv.ideal import IdealHandle
    from bsv.obstruction import hypothesis_checklist
    from bsv.poly import VariableContext, parse_polynomial

    F = fp_mode(10009)
    c = VariableContext(("x0", "x1", "x2", "x3"), F)
    surfs = [
        ("A", IdealHandle([parse_polynomial(c, "x0")], c)),
        ("B", IdealHandle([parse_polynomial(c, "x0*x2+x1^2")], c)),
        ("C", IdealHandle([parse_polynomial(c, "x0*x3+x1^2")], c)),
    ]
    items = hypothesis_checklist(surfs, [("D", True)], [("A", True)], [("A", True)])
    by = {i.item: i for i in items}
    assert by["incidence_curves"].status == "Fail"
    assert by["incidence_points"].status == "Pass"  # vacuous for n = 3
    assert by["factoriality"].status == "Witnessed"
    # two-surface case passes vacuously
    items2 = hypothesis_checklist(surfs[:2], [("D", True)], [("A", True)], [])
    by2 = {i.item: i for i in items2}
    assert by2["incidence_curves"].status == "Pass"
    assert by2["good_locus_cover_irreducible"].status == "Asserted"
