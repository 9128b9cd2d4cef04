"""Tests for the scenario language, runner behavior and report emission."""

import json
import pathlib

SCN_PATH = str(pathlib.Path(__file__).resolve().parent.parent / "scenarios" / "s1s2.scn")

import pytest

from bsv.catalog import build_s1s2
from bsv.coeff import QW, fp_mode
from bsv.errors import ScenarioSyntaxError, UnresolvedName
from bsv.scenario import emit_report, parse_scenario, run_checks, serialize_scenario

F = fp_mode(10009)


def test_shipped_scenario_parses():
    with open(SCN_PATH, encoding="utf-8") as f:
        text = f.read()
    doc = parse_scenario(text)
    assert len(doc.components) == 2
    assert len(doc.curves) == 3
    assert doc.symbol is not None


def test_roundtrip_identity():
    doc = build_s1s2()
    text = serialize_scenario(doc)
    doc2 = parse_scenario(text)
    assert doc == doc2
    assert serialize_scenario(doc2) == text


def test_empty_file_rejected():
    with pytest.raises(ScenarioSyntaxError):
        parse_scenario("")
    with pytest.raises(ScenarioSyntaxError):
        parse_scenario("# only a comment\n")


def test_unknown_name_rejected():
    text = "scenario t\nfield fp:10009\nvars x0 x1\npoly A = x0\n" \
           "component C: poly=B cert=asserted gamma=1\n"
    with pytest.raises((ScenarioSyntaxError, KeyError, UnresolvedName)):
        parse_scenario(text)


def test_gamma_binds_to_component():
    text = (
        "scenario t\nfield fp:10009\nvars x0 x1 x2 x3\n"
        "poly FS1 = x0^9+(x1^3-x2^3)*(x2^3-x3^3)*(x3^3-x1^3)\n"
        "component S1: poly=FS1 cert=asserted gamma=(x2^3-x3^3)/x0^3\n"
    )
    doc = parse_scenario(text)
    c = doc.component("S1")
    assert c.gamma.expanded_num().to_str() == "x2^3+10008*x3^3"
    assert c.divisor.poly is doc.polys["FS1"]


def test_field_override():
    with open(SCN_PATH, encoding="utf-8") as f:
        text = f.read()
    doc = parse_scenario(text, field_override=fp_mode(31))
    assert doc.field.p == 31
    assert not run_checks(doc).has_fail()


def test_run_s1s2_all_good():
    rep = run_checks(build_s1s2())
    assert not rep.has_fail()
    o = rep.obstruction
    assert (o["gamma_order"], o["H_order"], o["Hprime_order"]) == (9, 9, 9)
    assert o["quotient_order"] == 3 and o["nontrivial"] is True


def test_run_with_trivial_gamma_fails():
    # replacing gamma_1 by the class of 1 breaks the nontriviality evidence
    doc = build_s1s2()
    from bsv.poly import parse_rational
    from bsv.scenario import PointEvidence

    one = parse_rational(doc.context, "1")
    doc.components[0].gamma = one
    doc.components[0].evidence = PointEvidence(one, "SP04", 1)
    rep = run_checks(doc)
    assert rep.has_fail()
    failing = {c.id for c in rep.checks if c.status == "Fail"}
    assert any("evidence_S1" in i for i in failing)


def test_run_without_cube_witness_refuses_Hprime():
    doc = build_s1s2()
    doc.curves[0].cubes.pop("S1")
    rep = run_checks(doc)
    obs = [c for c in rep.checks if "obstruction" in c.id]
    assert obs and obs[0].status == "Fail"
    assert "refusal" in obs[0].details or "Unknown" in obs[0].details
    assert rep.obstruction["Hprime_order"] is None


def test_report_json_deterministic():
    doc = build_s1s2()
    r1 = run_checks(doc)
    r2 = run_checks(build_s1s2())
    d1 = json.loads(emit_report(r1, "json"))
    d2 = json.loads(emit_report(r2, "json"))
    d1.pop("timing")
    d2.pop("timing")
    assert json.dumps(d1, sort_keys=True) == json.dumps(d2, sort_keys=True)
    assert d1["schema"] == "1"
    assert d1["prime"] == 10009


def test_report_text_format():
    rep = run_checks(build_s1s2())
    text = emit_report(rep, "text").decode()
    lines = text.splitlines()
    assert any("obstruction:" in ln for ln in lines)
    # one aligned line per check
    ids = [c.id for c in rep.checks]
    assert all(any(ln.startswith(i) for ln in lines) for i in ids)


def test_exit_semantics_statuses():
    rep = run_checks(build_s1s2())
    statuses = {c.status for c in rep.checks}
    assert "Fail" not in statuses
    # modular certifications and witnesses are present but do not fail the run
    assert "CertifiedModP" in statuses
    assert "Witnessed" in statuses


def test_qw_mode_exact_subset():
    # over Q(w) the cheap checks run exactly (heavy Groebner ones avoided here)
    from bsv.poly import parse_polynomial
    from bsv.residue import point_residue1, PrimeDivisor, CertAsserted
    from bsv.poly import VariableContext, parse_rational

    ctx = VariableContext(("x0", "x1", "x2", "x3"), QW)
    FS1 = parse_polynomial(ctx, "x0^9+(x1^3-x2^3)*(x2^3-x3^3)*(x3^3-x1^3)")
    S1 = PrimeDivisor(FS1, CertAsserted("t"), "S1")
    w = QW.omega()
    gamma1 = parse_rational(ctx, "(x2^3-x3^3)/x0^3")
    assert point_residue1(gamma1, [QW.zero, w, QW.one, QW.one], S1, cap=9) == 1


def test_full_s1s2_exact_qw():
    # the entire two-surface scenario verifies exactly over Q(w)
    from bsv.catalog import build_s1s2

    rep = run_checks(build_s1s2(QW))
    assert not rep.has_fail()
    statuses = {c.status for c in rep.checks}
    assert "CertifiedModP" not in statuses  # exact mode: plain Pass
    assert rep.obstruction["quotient_order"] == 3
    assert rep.prime is None


def test_s1s2_alternative_prime():
    from bsv.catalog import build_s1s2

    rep = run_checks(build_s1s2(fp_mode(31)))
    assert not rep.has_fail()
    assert rep.prime == 31
    assert rep.obstruction["quotient_order"] == 3


def test_minimal_scenario_empty_checks():
    text = "scenario tiny\nfield fp:10009\nvars x0 x1\npoly A = x0\n"
    doc = parse_scenario(text)
    rep = run_checks(doc)
    assert rep.checks == []
    data = json.loads(emit_report(rep, "json"))
    assert data["checks"] == []
    assert not rep.has_fail()


def test_a1_second_parameter():
    from bsv.catalog import build_appendix

    rep = run_checks(build_appendix("a1", t1=1, t2=2))
    assert not rep.has_fail()


def test_figure_for_empty_report(tmp_path):
    from bsv.figures import render_report_figure

    text = "scenario tiny\nfield fp:10009\nvars x0 x1\npoly A = x0\n"
    rep = run_checks(parse_scenario(text))
    out = tmp_path / "empty.png"
    render_report_figure(rep, str(out))
    assert out.exists()


def test_pencil_doc_roundtrip():
    from bsv.catalog import build_pencil

    doc = build_pencil(1, 1)
    text = serialize_scenario(doc)
    doc2 = parse_scenario(text)
    assert doc == doc2
    assert "EVP" in doc2.points
    # nested certificates survive the round trip
    v2 = doc2.component("V2")
    assert v2.divisor.cert.kind == "constant_term"
    assert v2.divisor.cert.inner.cert.kind == "eisenstein"


def test_pencil_doc_builds_over_qw():
    from bsv.catalog import build_pencil

    doc = build_pencil(1, 1, QW)
    # no modular evidence point over the exact field; certificates still carry
    assert "EVP" not in doc.points
    assert doc.component("V1").divisor.cert.kind == "eisenstein"
    text = serialize_scenario(doc)
    assert parse_scenario(text) == doc


def test_obstruction_fragment_keys():
    rep = run_checks(build_s1s2())
    assert set(rep.obstruction) == {
        "gamma_order", "H_order", "Hprime_order", "quotient_order", "nontrivial", "checklist",
    }


def test_runner_survives_bad_witness():
    doc = build_s1s2()
    from bsv.poly import parse_rational

    # break one curve valuation witness: wrong unit
    doc.curves[0].vals["S1"].u = parse_rational(doc.context, "x2/x3")
    rep = run_checks(doc)
    assert rep.has_fail()
    bad = [c for c in rep.checks if "curve_residues_D1" in c.id]
    assert bad and bad[0].status == "Fail"
    # the run still completed through the later phases
    assert any("obstruction" in c.id for c in rep.checks)
