"""The weight <= 1 part of a chart vertex algebra as a vertex algebroid.

Operations are realized by n-th products:

    f o v = (f|0>)_(-1) v,   x (0) y,   x (1) y,   d f = translate(f),   pi(v)(f) = v_(0) f.

The nine vertex-algebroid identities are checked on a finite sample set; both
sides of each identity are differential-polynomial expressions in the
arguments, so monomials up to degree 3 together with the frame lifts and
their coordinate multiples already exercise every term (first and second
derivatives, products and the correction terms of f o v).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .charts import Chart
from .exact import Poly, kernel_basis
from .fock import State, translate
from .products import act, split_weight_one
from .report import Check, Report, check_from_failures


class AlgebroidError(ValueError):
    pass


class OneTruncated:
    """V0 = chart ring, V1 = weight-one states, with the algebroid operations."""

    def __init__(self, chart: Chart):
        self.chart = chart
        self.space = chart.space
        self.ring = chart.ring
        self.table = chart.table

    def state(self, f: Poly) -> State:
        return State.from_poly(f)

    def opm(self, f: Poly, v: State) -> State:
        return act(self.space, State.from_poly(f), -1, v)

    def zero(self, x: State, y: State) -> State:
        return act(self.space, x, 0, y)

    def one(self, x: State, y: State) -> Poly:
        return act(self.space, x, 1, y).to_poly()

    def d(self, f: Poly) -> State:
        return translate(State.from_poly(f))

    def anchor(self, v: State, f: Poly) -> Poly:
        return act(self.space, v, 0, State.from_poly(f)).to_poly()

    def frame(self) -> list[tuple[str, State]]:
        c = self.chart
        out = [(f"tau{i + 1}", c.tau(i)) for i in range(c.n)]
        out += [(f"h{k + 1}", c.h(k)) for k in range(self.table.n_heis)]
        return out

    def omegas(self) -> list[tuple[str, State]]:
        return [(f"dx{i + 1}", self.chart.omega(i)) for i in range(self.chart.n)]

    def describe(self) -> dict:
        return {
            "V0": f"Q[{', '.join(self.ring.names)}]",
            "V1_generators": [name for name, _ in self.frame() + self.omegas()],
        }


def extract_truncation(chart: Chart) -> OneTruncated:
    return OneTruncated(chart)


def sample_functions(T: OneTruncated, degree: int = 3) -> list[Poly]:
    ring = T.ring
    return [Poly(ring, {e: Fraction(1)}) for d in range(degree + 1) for e in ring.monomials(d)]


def sample_vectors(T: OneTruncated, multiples: bool = True) -> list[tuple[str, State]]:
    """Frame lifts, the forms dx_i, and coordinate multiples x_j o tau_i, x_j o dx_i."""
    base = T.frame() + T.omegas()
    out = list(base)
    if multiples:
        for j, name in enumerate(T.ring.names):
            xj = T.ring.var(name)
            for label, v in base:
                out.append((f"{name} o {label}", T.opm(xj, v)))
    return out


AXIOMS = ("assoc", "leibniz", "skew", "anchor_linear", "opm_one", "invariance",
          "d_derivation", "zero_d", "one_d")


def check_algebroid_axioms(T: OneTruncated, degree: int = 3, vectors: Sequence | None = None,
                           triple_vectors: int | None = None) -> Report:
    """Evaluate the nine identity residuals on the sample set; PASS iff all vanish.

    ``triple_vectors`` limits the vector samples used by the three-vector
    identity (the first entries are always the frame lifts).
    """
    fs = sample_functions(T, degree)
    vs = list(vectors) if vectors is not None else sample_vectors(T)
    vs3 = vs if triple_vectors is None else vs[:triple_vectors]
    fails: dict[str, list[str]] = {name: [] for name in AXIOMS}
    counts = dict.fromkeys(AXIOMS, 0)

    def record(name, residual, label):
        counts[name] += 1
        if residual:
            fails[name].append(f"{label}: residual {residual}")

    anchors = {}
    for lv, v in vs:
        for f in fs:
            anchors[(lv, f)] = T.anchor(v, f)

    for (lv, v), f, g in itertools.product(vs, fs, fs):
        res = (T.opm(f, T.opm(g, v)) - T.opm(f * g, v)
               - T.opm(anchors[(lv, f)], T.d(g)) - T.opm(anchors[(lv, g)], T.d(f)))
        record("assoc", res, f"f={f}, g={g}, v={lv}")
    for (lx, x), f, (ly, y) in itertools.product(vs, fs, vs):
        res = T.zero(x, T.opm(f, y)) - T.opm(anchors[(lx, f)], y) - T.opm(f, T.zero(x, y))
        record("leibniz", res, f"x={lx}, f={f}, y={ly}")
    for (lx, x), (ly, y) in itertools.product(vs, vs):
        res = T.zero(x, y) + T.zero(y, x) - T.d(T.one(x, y))
        record("skew", res, f"x={lx}, y={ly}")
    for f, (lx, x), g in itertools.product(fs, vs, fs):
        res = T.anchor(T.opm(f, x), g) - f * anchors[(lx, g)]
        record("anchor_linear", res, f"f={f}, x={lx}, g={g}")
    for f, (lx, x), (ly, y) in itertools.product(fs, vs, vs):
        res = T.one(T.opm(f, x), y) - f * T.one(x, y) + T.anchor(x, anchors[(ly, f)])
        record("opm_one", res, f"f={f}, x={lx}, y={ly}")
    for (lv, v), (lx, x), (ly, y) in itertools.product(vs3, vs3, vs3):
        res = T.anchor(v, T.one(x, y)) - T.one(T.zero(v, x), y) - T.one(x, T.zero(v, y))
        record("invariance", res, f"v={lv}, x={lx}, y={ly}")
    for f, g in itertools.product(fs, fs):
        res = T.d(f * g) - T.opm(f, T.d(g)) - T.opm(g, T.d(f))
        record("d_derivation", res, f"f={f}, g={g}")
    for (lv, v), f in itertools.product(vs, fs):
        record("zero_d", T.zero(v, T.d(f)) - T.d(anchors[(lv, f)]), f"v={lv}, f={f}")
        record("one_d", T.one(v, T.d(f)) - anchors[(lv, f)], f"v={lv}, f={f}")

    report = Report("axioms", {"chart": T.chart.name, "degree": degree, "vectors": len(vs)})
    for name in AXIOMS:
        report.add(check_from_failures(name, fails[name], f"{counts[name]} instances"))
    bad = []
    for f in fs:
        df = T.d(f)
        for g in fs:
            r = T.anchor(df, g)
            if r:
                bad.append(f"pi(d {f})({g}) = {r}")
    report.add(check_from_failures("anchor_kills_d", bad, f"{len(fs) ** 2} instances"))
    return report


# ---------------------------------------------------------------------------
# the associated Lie algebroid


@dataclass
class LieAlgebroid:
    labels: list[str]
    n_vector: int
    bracket: dict
    anchor: list[list[Poly]]
    pairing: list[list[Fraction]]
    checks: list[Check] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "frame": self.labels,
            "bracket": {f"[{a},{b}]": v for (a, b), v in sorted(self.bracket.items())},
            "anchor": [[str(p) for p in row] for row in self.anchor],
            "pairing": [[str(c) for c in row] for row in self.pairing],
        }


def class_coordinates(T: OneTruncated, v: State) -> tuple[list[Poly], list[Poly]]:
    """Coordinates of the class of v modulo V0 o dV0 in the frame {tau_i, h_k}."""
    a_part, _, h_part = split_weight_one(v, T.table)
    taus = T.chart.taus()
    h_coords = list(h_part)
    for i, c in enumerate(a_part):
        if c:
            _, _, mu = split_weight_one(taus[i], T.table)
            for k in range(len(h_coords)):
                h_coords[k] = h_coords[k] - c * mu[k]
    return a_part, h_coords


def _coords_text(coords) -> list[str]:
    a, h = coords
    return [str(p) for p in a] + [str(p) for p in h]


def quotient_lie_algebroid(T: OneTruncated, degree: int = 2) -> LieAlgebroid:
    """Bracket table on the frame, anchor matrix and the pairing on the h-span."""
    frame = T.frame()
    labels = [l for l, _ in frame]
    checks = []
    bracket = {}
    for (la, a), (lb, b) in itertools.product(frame, frame):
        bracket[(la, lb)] = _coords_text(class_coordinates(T, T.zero(a, b)))
    # descent: products with V0 o dV0 vanish in the quotient
    fs = sample_functions(T, degree)
    bad = []
    for f in fs:
        for lw, w in T.omegas():
            om = T.opm(f, w)
            for lv, v in sample_vectors(T, multiples=False):
                for label, prod in ((f"{lv} (0) {f} o {lw}", T.zero(v, om)),
                                    (f"{f} o {lw} (0) {lv}", T.zero(om, v))):
                    a, h = class_coordinates(T, prod)
                    if any(a) or any(h):
                        bad.append(f"{label} has nonzero class {prod}")
    checks.append(check_from_failures("descends", bad))
    if bad:
        raise AlgebroidError("the (0)-product does not descend: " + bad[0])
    anchor = [[T.anchor(v, T.ring.var(name)) for name in T.ring.names] for _, v in frame]
    bad = []
    for (lv, v), row in zip(frame, anchor):
        if lv.startswith("h") and any(row):
            bad.append(f"anchor of {lv} is nonzero")
    for f in fs:
        for (lv, v), row in zip(frame, anchor):
            if not lv.startswith("tau"):
                continue
            fv = T.opm(f, v)
            for name, entry in zip(T.ring.names, row):
                if T.anchor(fv, T.ring.var(name)) != f * entry:
                    bad.append(f"pi({f} o {lv})({name}) != {f} pi({lv})({name})")
    checks.append(check_from_failures("anchor", bad))
    hs = [(l, v) for l, v in frame if l.startswith("h")]
    pairing = []
    bad = []
    for lk, hk in hs:
        row = []
        for ll, hl in hs:
            p = T.one(hk, hl)
            if not p.is_constant():
                bad.append(f"<{lk},{ll}> = {p} is not constant")
            row.append(p.constant_term())
        pairing.append(row)
    for k in range(len(pairing)):
        for l in range(len(pairing)):
            if pairing[k][l] != pairing[l][k]:
                bad.append(f"pairing not symmetric at ({k + 1},{l + 1})")
            if pairing[k][l] != T.table.gram[k][l]:
                bad.append(f"pairing ({k + 1},{l + 1}) = {pairing[k][l]} differs from gram")
    checks.append(check_from_failures("pairing", bad))
    return LieAlgebroid(labels, T.chart.n, bracket, anchor, pairing, checks)


@dataclass
class CenterData:
    basis: list[list[Fraction]]
    lifts: list[State] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"center_basis": [[str(c) for c in v] for v in self.basis],
                "lifts": [str(s) for s in self.lifts]}


def pairing_and_center(L: LieAlgebroid) -> CenterData:
    """Basis of the kernel of the pairing on the h-span."""
    if not L.pairing:
        return CenterData([])
    return CenterData(kernel_basis(L.pairing))


def _h_state(T: OneTruncated, h: Sequence) -> State:
    out = State(T.ring)
    for k, c in enumerate(h):
        if c:
            out = out + T.chart.h(k) * Fraction(c)
    return out


def central_lift(T: OneTruncated, h: Sequence, s_prime: State | None = None) -> State:
    """The unique central lift s(h) = s' - sum_i (tau_i (1) s') o dx_i.

    ``h`` is a coefficient vector on the h-generators and must lie in the
    kernel of the pairing; ``s_prime`` is any weight-one lift of it.
    """
    gram = T.table.gram
    h = [Fraction(c) for c in h]
    if len(h) != T.table.n_heis:
        raise AlgebroidError("h has the wrong length")
    for k in range(len(h)):
        if sum(gram[k][l] * h[l] for l in range(len(h))):
            raise AlgebroidError(f"h = {[str(c) for c in h]} is not in the center of the pairing")
    if s_prime is None:
        s_prime = _h_state(T, h)
    a, hc = class_coordinates(T, s_prime)
    if any(a) or any(hc[k] != T.ring.const(h[k]) for k in range(len(h))):
        raise AlgebroidError(f"{s_prime} is not a lift of h")
    s = s_prime
    for i in range(T.chart.n):
        c = T.one(T.chart.tau(i), s_prime)
        if c:
            s = s - T.opm(c, T.chart.omega(i))
    bad = []
    for i in range(T.chart.n):
        tau = T.chart.tau(i)
        if T.one(s, tau):
            bad.append(f"s(1)tau{i + 1} = {T.one(s, tau)}")
        if T.zero(tau, s):
            bad.append(f"tau{i + 1}(0)s = {T.zero(tau, s)}")
    for k in range(T.table.n_heis):
        if T.one(s, T.chart.h(k)):
            bad.append(f"s(1)h{k + 1} = {T.one(s, T.chart.h(k))}")
    if bad:
        raise AlgebroidError("central lift failed its post-check: " + "; ".join(bad))
    return s


def central_lift_report(T: OneTruncated, perturb_degree: int = 2) -> Report:
    """Central lifts of a basis of the center, with Omega^1-perturbation invariance."""
    L = quotient_lie_algebroid(T)
    center = pairing_and_center(L)
    report = Report("central-lift", {"chart": T.chart.name})
    report.extend(L.checks)
    lifts = []
    bad = []
    for h in center.basis:
        base = central_lift(T, h)
        lifts.append(base)
        for f in sample_functions(T, perturb_degree):
            for _, w in T.omegas():
                pert = _h_state(T, h) + T.opm(f, w)
                other = central_lift(T, h, pert)
                if other != base:
                    bad.append(f"perturbing by {f} o dx gives {other} instead of {base}")
    report.add(check_from_failures("omega-invariance", bad, f"{len(center.basis)} center elements"))
    center.lifts = lifts
    report.data.update(center.as_dict())
    return report
