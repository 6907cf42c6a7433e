"""Acceptance criteria 1-11, each checked exactly and timed against its budget.

Each test prints (and records for the terminal summary) one line of the form
``CRITERION n: PASS|FAIL <title> (<seconds>s / <budget>s) <details>``.
"""
from __future__ import annotations

import subprocess
import sys
import time

from vxcalc.algebroid import AXIOMS, central_lift, central_lift_report, check_algebroid_axioms, extract_truncation
from vxcalc.charts import build_chart_cdo, build_p1_cdo, build_p1_tcdo, verify_homomorphism
from vxcalc.dsl import parse_state
from vxcalc.fock import A, B
from vxcalc.modules import (CentralCharacter, ModuleError, Presentation, apply_word, fock_module, reduction_residual,
                            make_module, roundtrip_check, sing)
from vxcalc.report import emit_report
from vxcalc.suites import borcherds_suite, filtration_suite, module_borcherds_suite, rewrite_suite

SEED = 7
THETA3 = CentralCharacter.build([3], {0: [3]})


class Criterion:
    def __init__(self, log, number: int, title: str, budget: float):
        self.log, self.number, self.title, self.budget = log, number, title, budget
        self.failures: list[str] = []
        self.notes: list[str] = []

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def require(self, ok: bool, what: str):
        if not ok:
            self.failures.append(what)

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc is not None:
            self.failures.append(f"{exc_type.__name__}: {exc}")
        self.require(elapsed < self.budget, f"runtime {elapsed:.1f}s exceeds {self.budget:.0f}s")
        verdict = "PASS" if not self.failures else "FAIL"
        info = "; ".join(self.failures or self.notes)
        line = f"CRITERION {self.number}: {verdict} {self.title} ({elapsed:.2f}s / {self.budget:.0f}s)"
        if info:
            line += f" {info}"
        print(line)
        self.log.append(line)
        assert not self.failures, line
        return False


def failed_witnesses(report):
    return [f"{c.name}: {c.witness}" for c in report.checks if not c.ok]


def test_criterion_01_borcherds(acceptance_log):
    with Criterion(acceptance_log, 1, "Borcherds identity suite", 60) as c:
        chart = build_chart_cdo(2, gram=[[1, 0], [0, 0]])
        rep = borcherds_suite(chart, samples=100, seed=SEED, weight=3, window=3)
        c.require(rep.ok, f"nonzero residuals: {failed_witnesses(rep)}")
        c.require(rep.params["samples"] == 100, "wrong sample count")
        c.notes.append("100 triples, residual 0")


def test_criterion_02_module_borcherds(acceptance_log):
    with Criterion(acceptance_log, 2, "module Borcherds identity", 60) as c:
        rep = module_borcherds_suite(fock_module(1), samples=100, seed=SEED)
        c.require(rep.ok, f"nonzero residuals: {failed_witnesses(rep)}")
        c.notes.append("100 instances, residual 0")


def test_criterion_03_algebroid_axioms(acceptance_log):
    with Criterion(acceptance_log, 3, "vertex algebroid axioms", 30) as c:
        charts = [build_chart_cdo(1, name="C1"), build_chart_cdo(2, name="C2"), *build_p1_tcdo().charts]
        for chart in charts:
            rep = check_algebroid_axioms(extract_truncation(chart), degree=3)
            names = {ch.name for ch in rep.checks}
            c.require(set(AXIOMS) <= names, f"{chart.name}: missing axioms")
            c.require(rep.ok, f"{chart.name}: {failed_witnesses(rep)}")
        c.notes.append(f"nine residuals vanish on {', '.join(ch.name for ch in charts)}")


def test_criterion_04_p1_cdo_gluing(acceptance_log):
    with Criterion(acceptance_log, 4, "P1 CDO gluing", 30) as c:
        rep = build_p1_cdo().verify(weight=2, window=2)
        c.require(rep.ok, f"correct map fails: {failed_witnesses(rep)}")
        bad = verify_homomorphism(build_p1_cdo("sign").forward, 2, 2)
        hom = next(ch for ch in bad.checks if ch.name == "homomorphism")
        c.require(not hom.ok and bool(hom.witness), "sign-perturbed map was not rejected with a witness")
        c.notes.append("sign variant fails with witness")


def test_criterion_05_p1_tcdo_gluing(acceptance_log):
    with Criterion(acceptance_log, 5, "P1 TCDO gluing", 60) as c:
        rep = build_p1_tcdo().verify(weight=2, window=2)
        c.require(rep.ok, f"correct map fails: {failed_witnesses(rep)}")
        names = {ch.name: ch.ok for ch in rep.checks}
        c.require(names.get("cocycle-roundtrip") is True and names.get("reverse:cocycle-roundtrip") is True,
                  "cocycle round trip missing or failing")
        omit = build_p1_tcdo(twist="omit").verify(weight=2, window=2)
        c.require(not omit.ok and all(ch.witness for ch in omit.checks if not ch.ok),
                  "omitting the lambda* term was not rejected")
        c.notes.append("omit variant fails: " + ", ".join(ch.name for ch in omit.checks if not ch.ok))


def test_criterion_06_central_lift(acceptance_log):
    with Criterion(acceptance_log, 6, "central lifting", 10) as c:
        charts = [*build_p1_tcdo().charts, build_chart_cdo(2, gram=[[1, 0], [0, 0]], name="C2-gram")]
        for chart in charts:
            T = extract_truncation(chart)
            rep = central_lift_report(T)
            c.require(rep.ok, f"{chart.name}: {failed_witnesses(rep)}")
            c.require(bool(rep.data["center_basis"]), f"{chart.name}: empty center")
            for h in rep.data["center_basis"]:
                s = central_lift(T, h)
                for i in range(chart.n):
                    tau = chart.tau(i)
                    c.require(not T.one(s, tau) and not T.zero(tau, s), f"{chart.name}: lift not central")
        c.notes.append("s(1)tau = 0, tau(0)s = 0, Omega-invariant")


def test_criterion_07_sing(acceptance_log):
    with Criterion(acceptance_log, 7, "Sing computation", 120) as c:
        for n in (1, 2):
            M = fock_module(n)
            S = sing(M, 4, 4)
            top = M.basis(0, 4)
            c.require(len(S[0]) == len(top), f"N={n}: weight-0 Sing has dimension {len(S[0])} != {len(top)}")
            for w in range(1, 5):
                c.require(not S[w], f"N={n}: weight {w} kernel nonempty: {S[w][:1]}")
        c.notes.append("Sing = weight-0 slice for N = 1, 2 (W = D = 4)")


def test_criterion_08_rewriting(acceptance_log):
    with Criterion(acceptance_log, 8, "rewriting over Sing", 120) as c:
        fock = fock_module(2)
        twisted = make_module(build_p1_tcdo().charts[0], THETA3)
        for M in (fock, twisted):
            rep = rewrite_suite(M, samples=50, seed=SEED, weight=3)
            c.require(rep.ok, f"{M.chart.name}: {failed_witnesses(rep)}")
        M1 = fock_module(1)
        m = parse_state("b[1](-1)|0>", M1)
        a1, b_1 = (A, 0, 1), (B, 0, -1)
        c.require(not apply_word(M1, [a1, a1], m), "A^2 m != 0")
        inner = (apply_word(M1, [b_1, a1], m) - apply_word(M1, [a1, b_1], m)) + apply_word(M1, [b_1, a1], m)
        c.require(not inner, f"(n[B,A] + BA)m = {inner}")
        c.require(not reduction_residual(M1, a1, b_1, m, 1), "reduction identity instance nonzero")
        c.notes.append("50 + 50 elements re-evaluate exactly; reduction identity instance = 0")


def test_criterion_09_filtration(acceptance_log):
    with Criterion(acceptance_log, 9, "filtration", 60) as c:
        rep = filtration_suite(fock_module(2), samples=50, pairs=100, seed=SEED)
        c.require(rep.ok, str(failed_witnesses(rep)))
        c.notes.append(next(ch.detail for ch in rep.checks if ch.name == "level-compatibility"))


def test_criterion_10_roundtrip(acceptance_log):
    with Criterion(acceptance_log, 10, "equivalence roundtrip", 120) as c:
        plain = roundtrip_check(Presentation(1, 1), CentralCharacter.zero(), weight=3, degree=3)
        c.require(plain.ok, f"cc = 0: {failed_witnesses(plain)}")
        p1 = build_p1_tcdo().charts[0]
        tw = roundtrip_check(Presentation(1, 1), THETA3, weight=3, degree=3, chart=p1)
        c.require(tw.ok, f"theta = 3: {failed_witnesses(tw)}")
        try:
            make_module(p1, CentralCharacter.build([0], {1: [1]}))
            c.require(False, "chi_1 != 0 was accepted")
        except ModuleError:
            pass
        c.notes.append("CDO and TDO cases pass; chi_1 != 0 rejected")


def test_criterion_11_determinism(acceptance_log):
    with Criterion(acceptance_log, 11, "determinism", 120) as c:
        chart = build_chart_cdo(2, gram=[[1, 0], [0, 0]])
        twisted = make_module(build_p1_tcdo().charts[0], THETA3)
        suites = [
            lambda: borcherds_suite(chart, samples=20, seed=SEED),
            lambda: module_borcherds_suite(fock_module(1), samples=20, seed=SEED),
            lambda: rewrite_suite(twisted, samples=20, seed=SEED),
            lambda: filtration_suite(fock_module(2), samples=20, pairs=20, seed=SEED),
        ]
        for run in suites:
            first, second = emit_report(run()), emit_report(run())
            c.require(first == second, f"{first.splitlines()[1]} differs between runs")
        argv = [sys.executable, "-m", "vxcalc", "borcherds", "--builtin", "cn", "-N", "2",
                "--samples", "20", "--seed", str(SEED)]
        outs = {subprocess.run(argv, capture_output=True, check=True).stdout for _ in range(2)}
        c.require(len(outs) == 1, "CLI output differs between runs")
        c.notes.append("suite reports and CLI JSON byte-identical across runs")
