from __future__ import annotations

import random
from fractions import Fraction

import pytest

from vxcalc.charts import build_chart_cdo, build_p1_tcdo
from vxcalc.dsl import parse_state
from vxcalc.exact import kernel_basis
from vxcalc.fock import A, B, H, State
from vxcalc.modules import (CentralCharacter, Fibre, ModuleError, Presentation, PresentationError, RewriteError,
                            check_half_integrable, filtration_level, fock_module, reduction_residual, induce_free,
                            is_singular, make_module, nilpotency_power, presentation_from_json,
                            rewrite_to_sing, roundtrip_check, sing, sing_slice, zhu_action)
from vxcalc.products import act
from vxcalc.suites import module_borcherds_suite, module_sampler

P1 = build_p1_tcdo().charts[0]
THETA3 = CentralCharacter.build([3], {0: [3]})


def test_make_module_examples():
    M = fock_module(1)
    assert M.graded and M.n_comp == 0
    M5 = make_module(P1, CentralCharacter.build([5], {0: [5]}))
    top = M5.top()
    assert M5.mode(H, 0, 0, top) == top * 5
    with pytest.raises(ModuleError, match="no nonzero half-integrable module"):
        make_module(P1, CentralCharacter.build([0], {1: [1]}))


def test_character_consistency_is_checked():
    with pytest.raises(ModuleError, match="disagree"):
        make_module(P1, CentralCharacter.build([2], {0: [3]}))
    with pytest.raises(ModuleError, match="entries"):
        make_module(P1, CentralCharacter.build([1, 2]))


def test_noncentral_heisenberg_is_free():
    chart = build_chart_cdo(1, gram=[[2, 0], [0, 0]])
    M = make_module(chart, CentralCharacter.build([7, 4], {0: [0, 4], 1: [5, 0]}))
    # chi_1 is nonzero only off the center, so the module exists
    top = M.top()
    assert M.mode(H, 0, 0, top) == top * 7 and M.mode(H, 1, 0, top) == top * 4
    s = M.mode(H, 0, -1, top)
    assert M.mode(H, 0, 1, s) == top * 2


def test_half_integrability_probe():
    M = fock_module(1)
    rep = check_half_integrable(M, 2, 4)
    assert rep.ok
    b = parse_state("b[1](-1)|0>", M)
    assert nilpotency_power(M, (A, 0, 1), b) == 2
    assert nilpotency_power(M, (A, 0, 1), State.vacuum(M.ring)) == 1


def test_zero_mode_of_a_on_polynomials():
    # a_0 = d/dx lowers the degree; it kills x^d after d + 1 steps
    M = fock_module(1)
    x3 = State.from_poly(M.ring.var("x1", 3))
    assert nilpotency_power(M, (A, 0, 0), x3) == 4
    for n in (1, 2):
        assert nilpotency_power(M, (B, 0, n), x3) == 1


@pytest.mark.parametrize("n", [1, 2])
def test_sing_is_weight_zero(n):
    M = fock_module(n)
    S = sing(M, 3, 3)
    assert len(S[0]) == len(M.basis(0, 3))
    assert all(not S[w] for w in (1, 2, 3))


def test_sing_slice_against_dense_kernel():
    M = fock_module(1)
    basis = M.basis(1, 1)
    ops = M.positive_modes(1)
    keys = sorted({k for b in basis for op in ops for k in M.imode(*op, b).terms})
    rows = []
    for op in ops:
        for key in keys:
            rows.append([M.imode(*op, b).terms.get(key, 0) for b in basis])
    assert kernel_basis(rows) == [] and sing_slice(M, 1, 1) == []
    rank0 = make_module(build_chart_cdo(1), fibre=Fibre(0))
    assert sing(rank0, 2, 2) == {0: [], 1: [], 2: []}


def test_filtration_examples():
    M = fock_module(1)
    assert filtration_level(M, State.vacuum(M.ring)) == 0
    assert filtration_level(M, parse_state("a[1](-2)|0>", M)) == 2
    assert filtration_level(M, State.from_poly(M.ring.var("x1", 3))) == 0
    assert filtration_level(M, State(M.ring)) == -1


def test_rewrite_examples():
    M = fock_module(1)
    m = parse_state("a[1](-1)|0>", M)
    expr = rewrite_to_sing(M, m)
    assert expr.as_tree() == [{"word": ["tau1(-1)"], "sing": "|0>"}]
    b = parse_state("b[1](-1)|0>", M)
    assert not reduction_residual(M, (A, 0, 1), (B, 0, -1), b, 1)


@pytest.mark.parametrize("module", [
    fock_module(2),
    make_module(P1, THETA3),
    make_module(build_chart_cdo(2, gram=[[1, 0], [0, 0]]), CentralCharacter.build([2, 5], {0: [0, 5]})),
    make_module(build_chart_cdo(3, {(0, 1, 2): 1})),
], ids=["C2", "P1-theta3", "C2-gram", "C3-alpha"])
def test_rewrite_roundtrip_random(module):
    rng = random.Random(11)
    sampler = module_sampler(module, 2)
    for _ in range(15):
        m = sampler.nonzero(rng, 3, terms=3, mixed=True)
        expr = rewrite_to_sing(module, m)
        assert expr.evaluate(module) == m
        assert all(is_singular(module, s) for _, s in expr.terms)


def test_rewrite_bound_is_enforced():
    M = fock_module(2)
    m = parse_state("a[1](-2) a[2](-1) b[1](-1) x1|0>", M)
    with pytest.raises(RewriteError, match="did not terminate"):
        rewrite_to_sing(M, m, max_steps=2)


def test_filtration_compatibility_examples():
    M = make_module(P1, THETA3)
    tau = P1.tau(0)
    m = parse_state("a[1](-2) b[1](-1) x|0>", M)
    lm = filtration_level(M, m)
    for k in range(-2, 4):
        vkm = act(M, tau, k, m)
        if vkm:
            assert filtration_level(M, vkm) <= lm - k


def test_zhu_action_examples():
    M = make_module(P1, THETA3)
    p = State.from_poly(M.ring.var("x", 3))
    assert zhu_action(M, P1.tau(0), p) == State.from_poly(M.ring.var("x", 2)) * 3
    assert zhu_action(M, P1.h(0), p) == p * 3
    x_tau = act(P1.space, State.from_poly(P1.ring.var("x")), -1, P1.tau(0))
    assert zhu_action(M, x_tau, p) == p * 3
    with pytest.raises(ModuleError, match="not a singular vector"):
        zhu_action(M, P1.tau(0), parse_state("a[1](-1)|0>", M))


def test_module_borcherds_instances():
    assert module_borcherds_suite(make_module(P1, THETA3), samples=15, seed=3).ok
    assert module_borcherds_suite(fock_module(1), samples=15, seed=4).ok


def test_roundtrip_cases():
    assert roundtrip_check(Presentation(1, 1)).ok
    assert roundtrip_check(Presentation(1, 1), THETA3, chart=P1).ok
    zero = roundtrip_check(Presentation(1, 0))
    assert zero.ok and zero.data["sing_dimensions"] == {"0": 0, "1": 0, "2": 0, "3": 0}
    assert induce_free(Presentation(1, 0)).basis(0, 2) == []


def test_roundtrip_with_connection():
    pres = presentation_from_json({"N": 2, "rank": 2,
                                   "connection": [[["0", "1"], ["0", "0"]], [["1", "0"], ["0", "1"]]]})
    assert roundtrip_check(pres, weight=2, degree=2).ok


def test_inconsistent_presentation_rejected():
    pres = presentation_from_json({"N": 2, "rank": 1, "connection": [[["x2"]], [["0"]]]})
    with pytest.raises(PresentationError, match="not flat"):
        induce_free(pres)
    with pytest.raises(PresentationError, match="rank x rank"):
        induce_free(presentation_from_json({"N": 1, "rank": 2, "connection": [[["0"]]]}))


def test_tampered_character_rejected():
    with pytest.raises(ModuleError):
        roundtrip_check(Presentation(1, 1), CentralCharacter.build([3], {0: [3], 1: [1]}), chart=P1)


def test_ungraded_module_refuses_graded_algorithms():
    M = make_module(P1, CentralCharacter.build([0], {-1: [2]}))
    assert not M.graded
    top = M.top()
    assert M.mode(H, 0, -1, top) == top * 2
    with pytest.raises(ModuleError, match="graded"):
        sing(M, 1, 1)
