from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vxcalc.charts import (ChartDomainError, ChartError, Gluing, TransitionMap, apply_transition,
                           build_chart_cdo, build_p1_cdo, build_p1_tcdo, builtin_document, chart_report,
                           identity_transition, load_document, verify_homomorphism)
from vxcalc.exact import parse_poly
from vxcalc.fock import A, B, H, State, translate
from vxcalc.products import act
from vxcalc.suites import StateSampler


def checks(report):
    return {c.name: c.ok for c in report.checks}


def test_beta_gamma_chart():
    c = build_chart_cdo(1)
    assert c.tau(0) == State.monomial(c.ring, ((A, 0, -1),))
    assert chart_report(c).ok


def test_constant_three_form():
    c = build_chart_cdo(3, {(0, 1, 2): 1})
    rep = chart_report(c)
    assert rep.ok
    # tau1 (0) tau2 = alpha(d2, d1, -) = -dx3
    prod = act(c.space, c.tau(0), 0, c.tau(1))
    assert prod == State.monomial(c.ring, ((B, 2, -1),), -1)
    assert rep.data["alpha"]["1,2"] == ["0", "0", "-1"]


def test_closed_nonconstant_three_form_accepted():
    c = build_chart_cdo(3, {(0, 1, 2): "x1"})
    assert chart_report(c).ok
    prod = act(c.space, c.tau(0), 0, c.tau(1))
    assert prod == State.monomial(c.ring, ((B, 2, -1),), -1, exp=(1, 0, 0))


def test_non_closed_three_form_rejected():
    with pytest.raises(ChartError, match="not closed"):
        build_chart_cdo(4, {(0, 1, 2): "x4"})


def test_p1_cdo_examples():
    g = build_p1_cdo()
    phi = g.forward
    src = g.charts[0]
    x = State.from_poly(src.ring.var("x"))
    y_inv = parse_poly("y^-1", phi.overlap)
    assert apply_transition(phi, x) == State.from_poly(y_inv)
    assert apply_transition(phi, State.vacuum(src.ring)) == State.vacuum(phi.overlap)
    tau = apply_transition(phi, src.tau(0))
    space = phi.target_space
    assert act(space, tau, 0, State.from_poly(y_inv)) == State.vacuum(phi.overlap)
    assert not act(space, tau, 1, tau)
    assert apply_transition(phi, translate(x)) == translate(apply_transition(phi, x))
    assert any("d(x)" in n and "fails" in n for n in g.notes)


def test_p1_cdo_gluing_passes_and_sign_variant_fails():
    assert build_p1_cdo().verify(2, 2).ok
    bad = verify_homomorphism(build_p1_cdo("sign").forward, 2, 2)
    assert not checks(bad)["homomorphism"]
    assert all(c.witness for c in bad.checks if not c.ok)


def test_p1_tcdo_gluing_and_negative_controls():
    g = build_p1_tcdo()
    assert g.verify(2, 2).ok
    lam = g.charts[0].h(0)
    assert apply_transition(g.forward, lam) == g.charts[1].h(0).with_ring(g.forward.overlap)
    for variant in ("omit", "flip"):
        rep = build_p1_tcdo(twist=variant).verify(2, 2)
        c = checks(rep)
        assert not c["twist-term"] and not c["cocycle-roundtrip"]
        assert c["reverse:twist-term"]


def test_identity_transition_passes():
    c = build_chart_cdo(2, gram=[[1, 0], [0, 0]])
    ident = identity_transition(c)
    assert verify_homomorphism(ident, 2, 2, (0, 1), inverse=ident).ok


def test_coefficient_outside_overlap():
    src = build_chart_cdo(1, names=["x"])
    tgt = build_chart_cdo(1, names=["y"])
    phi = TransitionMap(src, tgt, {"x": tgt.ring.var("y")}, {(A, 0): tgt.tau(0)}, source_laurent=("x",))
    assert apply_transition(phi, State.from_poly(src.ring.var("x", 2))) == State.from_poly(tgt.ring.var("y", 2))
    with pytest.raises(ChartDomainError):
        apply_transition(phi, State.from_poly(parse_poly("x^-1", phi.source_ring)))


@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6), st.integers(-2, 2))
def test_transition_commutes_with_products(s1, s2, n):
    g = build_p1_tcdo()
    phi = g.forward
    sampler = StateSampler(g.charts[0].table, 2)
    u = sampler.state(random.Random(s1), 2, 2)
    v = sampler.state(random.Random(s2), 2, 2)
    lhs = apply_transition(phi, act(g.charts[0].space, u, n, v))
    rhs = act(phi.target_space, apply_transition(phi, u), n, apply_transition(phi, v))
    assert lhs == rhs


def test_builtin_documents_match_builders():
    doc = load_document(builtin_document("p1-tcdo"))
    fwd, bwd = doc.transitions
    g = Gluing(tuple(doc.charts.values()), fwd, bwd)
    assert g.verify(2, 2).ok
    assert fwd.images[(A, 0)] == build_p1_tcdo().forward.images[(A, 0)]
    assert load_document(builtin_document("cn", 3)).first_chart().n == 3
    with pytest.raises(ChartError):
        builtin_document("p2")


def test_document_errors():
    with pytest.raises(ChartError, match="no charts"):
        load_document({"charts": []})
    doc = builtin_document("p1-cdo")
    doc["transitions"][0]["from"] = "nowhere"
    with pytest.raises(ChartError, match="unknown chart"):
        load_document(doc)
