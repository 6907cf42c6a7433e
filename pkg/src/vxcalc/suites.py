"""Seeded randomized verification suites.

Every suite draws all of its samples from ``random.Random(seed)`` before
evaluating anything, so the report depends only on the inputs and the seed.
``VXCALC_THREADS`` caps the number of worker threads used for evaluation.
"""
from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Sequence

from .charts import Chart
from .fock import GeneratorTable, State, creation_monomials, make_monomial
from .modules import VModule, filtration_level, rewrite_to_sing
from .products import act, borcherds_residual, to_plain
from .report import Report, check_from_failures

DEFAULT_SEED = 7


def thread_count() -> int:
    raw = os.environ.get("VXCALC_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"VXCALC_THREADS must be a positive integer, got {raw!r}") from None


def parallel_map(fn: Callable, items: Sequence) -> list:
    threads = min(thread_count(), len(items))
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def random_coefficient(rng: random.Random) -> Fraction:
    num = rng.choice([-3, -2, -1, 1, 2, 3])
    den = rng.choice([1, 1, 1, 2, 3])
    return Fraction(num, den)


class StateSampler:
    """Random states built from the creation monomials of a generator table.

    ``prefix`` is appended to every monomial (used for fibre markers).
    """

    def __init__(self, table: GeneratorTable, degree: int, prefixes: Sequence[tuple] = ((),)):
        self.table = table
        self.ring = table.ring
        self.exps = self.ring.monomials(degree)
        self.prefixes = list(prefixes)
        self._mono: dict[int, list] = {}

    def monomials(self, weight: int) -> list:
        if weight not in self._mono:
            self._mono[weight] = creation_monomials(self.table, weight)
        return self._mono[weight]

    def homogeneous(self, rng: random.Random, weight: int, terms: int = 2) -> State:
        monos = self.monomials(weight)
        out: dict = {}
        for _ in range(terms):
            mono = make_monomial(rng.choice(monos) + rng.choice(self.prefixes))
            key = (mono, rng.choice(self.exps))
            out[key] = out.get(key, 0) + random_coefficient(rng)
        return State(self.ring, out)

    def state(self, rng: random.Random, max_weight: int, terms: int = 2, mixed: bool = False) -> State:
        """A homogeneous state of random weight, or a sum over several weights if ``mixed``."""
        if not mixed:
            return self.homogeneous(rng, rng.randint(0, max_weight), terms)
        s = State(self.ring)
        for _ in range(terms):
            s = s + self.homogeneous(rng, rng.randint(0, max_weight), 1)
        return s

    def nonzero(self, rng: random.Random, max_weight: int, terms: int = 2, mixed: bool = False) -> State:
        while True:
            s = self.state(rng, max_weight, terms, mixed)
            if s:
                return s


def module_sampler(M: VModule, degree: int) -> StateSampler:
    return StateSampler(M.internal, degree, [M.fibre_factor(j) for j in range(M.fibre.rank)])


def _window(rng: random.Random, window: int) -> int:
    return rng.randint(-window, window)


def borcherds_suite(chart: Chart, samples: int = 100, seed: int = DEFAULT_SEED, weight: int = 3,
                    window: int = 3, degree: int = 2) -> Report:
    """Borcherds identity on random triples of states of weight <= ``weight``."""
    rng = random.Random(seed)
    sampler = StateSampler(chart.table, degree)
    cases = []
    for _ in range(samples):
        a, b, c = (sampler.nonzero(rng, weight, terms=rng.randint(1, 2)) for _ in range(3))
        cases.append((a, b, c, _window(rng, window), _window(rng, window), _window(rng, window)))
    space = chart.space

    def run(case):
        a, b, c, m, n, k = case
        return borcherds_residual(space, a, b, c, m, n, k)

    residuals = parallel_map(run, cases)
    failures = [f"sample {i}: a={a}, b={b}, c={c}, (m,n,k)=({m},{n},{k}), residual {r}"
                for i, ((a, b, c, m, n, k), r) in enumerate(zip(cases, residuals)) if r]
    report = Report("borcherds", {"chart": chart.name, "samples": samples, "seed": seed,
                                  "weight": weight, "window": window, "degree": degree})
    report.add(check_from_failures("borcherds-identity", failures, f"{samples} triples"))
    return report


def module_borcherds_suite(M: VModule, samples: int = 100, seed: int = DEFAULT_SEED, weight: int = 3,
                           window: int = 3, degree: int = 2) -> Report:
    """The module form of the identity: a, b in the vertex algebra, the third state in M."""
    rng = random.Random(seed)
    va = StateSampler(M.chart.table, degree)
    mod = module_sampler(M, degree)
    cases = []
    for _ in range(samples):
        a = va.nonzero(rng, weight, terms=rng.randint(1, 2))
        b = va.nonzero(rng, weight, terms=rng.randint(1, 2))
        c = mod.nonzero(rng, weight, terms=rng.randint(1, 2))
        cases.append((a, b, c, _window(rng, window), _window(rng, window), _window(rng, window)))
    space = M.chart.space

    def run(case):
        a, b, c, m, n, k = case
        return borcherds_residual(space, a, b, c, m, n, k, space_m=M)

    residuals = parallel_map(run, cases)
    failures = [f"sample {i}: a={a}, b={b}, m={c}, (m,n,k)=({m},{n},{k}), residual {r}"
                for i, ((a, b, c, m, n, k), r) in enumerate(zip(cases, residuals)) if r]
    report = Report("module-borcherds", {"chart": M.chart.name, "samples": samples, "seed": seed,
                                         "weight": weight, "window": window, "degree": degree,
                                         "character": M.cc.as_dict()})
    report.add(check_from_failures("module-borcherds-identity", failures, f"{samples} instances"))
    return report


def rewrite_suite(M: VModule, samples: int = 50, seed: int = DEFAULT_SEED, weight: int = 3,
                  degree: int = 2) -> Report:
    """Random elements are rewritten over Sing and re-evaluated."""
    rng = random.Random(seed)
    sampler = module_sampler(M, degree)
    states = [sampler.nonzero(rng, weight, terms=rng.randint(1, 3), mixed=rng.random() < 0.3)
              for _ in range(samples)]

    def run(m):
        try:
            expr = rewrite_to_sing(M, m)
        except Exception as exc:  # reported as a failing sample
            return None, f"{type(exc).__name__}: {exc}"
        back = expr.evaluate(M)
        return len(expr), None if back == m else f"evaluates to {back}"

    results = parallel_map(run, states)
    failures = [f"sample {i}: {m}: {err}" for i, (m, (_, err)) in enumerate(zip(states, results)) if err]
    report = Report("rewrite", {"chart": M.chart.name, "samples": samples, "seed": seed,
                                "weight": weight, "degree": degree, "character": M.cc.as_dict()})
    report.add(check_from_failures("rewrite-roundtrip", failures, f"{samples} elements"))
    report.data["terms"] = [n for n, _ in results]
    return report


def filtration_suite(M: VModule, samples: int = 50, pairs: int = 100, seed: int = DEFAULT_SEED,
                     weight: int = 3, degree: int = 2, window: int = 3) -> Report:
    """Level equals top weight, and v_k lowers the level by at least k."""
    rng = random.Random(seed)
    sampler = module_sampler(M, degree)
    va = StateSampler(M.chart.table, degree)
    states = [sampler.nonzero(rng, weight, terms=rng.randint(1, 3), mixed=i % 2 == 1)
              for i in range(samples)]
    pair_cases = []
    for _ in range(pairs):
        v = va.homogeneous(rng, rng.randint(0, 2), terms=rng.randint(1, 2))
        m = sampler.nonzero(rng, weight, terms=rng.randint(1, 2))
        pair_cases.append((v, _window(rng, window), m))

    levels = parallel_map(lambda m: filtration_level(M, m), states)
    failures = [f"sample {i}: {m}: level {lv}, top weight {m.max_weight()}"
                for i, (m, lv) in enumerate(zip(states, levels)) if lv != m.max_weight()]

    def run(case):
        v, k, m = case
        # (checked, error); the inequality is only tested when v_k m is nonzero
        if not v:
            return False, None
        vkm = act(M, v, to_plain(v.weight(), k), m)
        if not vkm:
            return False, None
        lv, lm = filtration_level(M, vkm), filtration_level(M, m)
        return True, None if lv <= lm - k else f"level(v_k m) = {lv} > {lm} - {k}"

    pair_results = parallel_map(run, pair_cases)
    bad = [f"pair {i}: v={v}, k={k}, m={m}: {err}"
           for i, ((v, k, m), (_, err)) in enumerate(zip(pair_cases, pair_results)) if err]
    report = Report("filtration", {"chart": M.chart.name, "samples": samples, "pairs": pairs,
                                   "seed": seed, "weight": weight, "degree": degree})
    report.add(check_from_failures("level-equals-top-weight", failures, f"{samples} states"))
    checked = sum(1 for ok, _ in pair_results if ok)
    report.add(check_from_failures("level-compatibility", bad, f"{pairs} pairs, {checked} with v_k m != 0"))
    report.data["levels"] = levels
    return report
