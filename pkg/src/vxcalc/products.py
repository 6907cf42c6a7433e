"""n-th products of states, the Borcherds identity and the Borcherds Lie algebra.

Products are computed as operator actions.  For a state ``v = g_(q) u``
whose leading creation mode is ``g_(q)`` the field of ``v`` is expanded by

    (g_(q) u)_(n) = sum_j (-1)^j C(q, j) [ g_(q-j) u_(n+j) - (-1)^q u_(q+n-j) g_(j) ]

and weight-zero states ``f|0>`` have the field ``f(b(z))``, Taylor expanded
around the commuting zero modes ``b_0``.  Both infinite sums are cut off by
the grading: ``u_(r) w`` vanishes once ``wt(u) + wt(w) - r - 1 < 0``.
The same code computes module actions; the representation object only has
to provide generator modes.
"""
from __future__ import annotations

import itertools
import math
from functools import lru_cache
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import binom
from .fock import (A, B, GEN_WEIGHT, H, FockSpace, GeneratorTable, State, charge,
                   creation_monomials, make_monomial, monomial_weight, to_plain, translate)
from .report import Check


def _weight_bound(u_weight: int, w: State, n: int) -> int:
    """Largest j with u_(n+j) w possibly nonzero (negative: nothing)."""
    return u_weight + w.max_weight() - n - 1


def spec_truncation_bound(v: State, w: State, n: int) -> int:
    """The documented worst-case bound on the j-range of the expansion."""
    return w.max_weight() + v.max_weight() + abs(n) + 2


def _colored_partitions(total: int, colors: int, max_part: int | None = None):
    """Multisets of (color, part) with parts >= 1 summing to ``total``."""
    if total == 0:
        yield ()
        return
    if max_part is None:
        max_part = total
    for part in range(min(total, max_part), 0, -1):
        for color in range(colors):
            for rest in _colored_partitions(total - part, colors, part):
                # keep (part, color) non-increasing to list each multiset once
                if rest and (rest[0][1], rest[0][0]) > (part, color):
                    continue
                yield ((color, part),) + rest


@lru_cache(maxsize=None)
def _negative_part(exp: tuple[int, ...], alpha: tuple[int, ...], total: int):
    """Terms ``(factors, exponent, coeff)`` of the z^total creation part of d^alpha x^exp (b(z))."""
    nv = len(exp)
    out: dict = {}
    for neg in _colored_partitions(total, nv):
        a2 = list(alpha)
        counts: dict = {}
        for i, part in neg:
            a2[i] += 1
            counts[(i, part)] = counts.get((i, part), 0) + 1
        c = Fraction(1)
        for v in counts.values():
            c /= math.factorial(v)
        new_exp = list(exp)
        for i, k in enumerate(a2):
            e = exp[i]
            for t in range(k):
                c *= e - t
            new_exp[i] = e - k
        if c:
            key = (make_monomial((B, i, -part) for i, part in neg), tuple(new_exp))
            out[key] = out.get(key, 0) + c
    return tuple((m, e, c) for (m, e), c in out.items() if c)


def _base_product(space, exp: tuple[int, ...], coeff: Fraction, n: int, w: State) -> State:
    """(c x^exp |0>)_(n) w via the Taylor expansion of f(b(z))."""
    ring = w.ring.join(space.ring)
    # positive b-modes can only remove a-creation factors present in w
    avail: dict[tuple[int, int], int] = {}
    for (mono, _), _c in w.terms.items():
        counts: dict[tuple[int, int], int] = {}
        for kind, i, m in mono:
            if kind == A:
                counts[(i, -m)] = counts.get((i, -m), 0) + 1
        for k, v in counts.items():
            avail[k] = max(avail.get(k, 0), v)
    keys = sorted(avail)
    out: dict = {}
    target = n + 1
    for mults in itertools.product(*(range(avail[k] + 1) for k in keys)):
        pos_sum = sum(k[1] * m for k, m in zip(keys, mults))
        neg_total = pos_sum - target
        if neg_total < 0:
            continue
        state = w
        alpha = [0] * len(exp)
        denom = 1
        for (i, m), mult in zip(keys, mults):
            for _ in range(mult):
                state = space.mode(B, i, m, state)
            alpha[i] += mult
            denom *= math.factorial(mult)
        if not state:
            continue
        scale = coeff / denom
        for factors, dexp, c in _negative_part(exp, tuple(alpha), neg_total):
            c = c * scale
            for (mono, e), v in state.terms.items():
                key = (make_monomial(mono + factors) if factors else mono,
                       tuple(a + b for a, b in zip(e, dexp)))
                out[key] = out.get(key, 0) + v * c
    return State(ring, out)


def _term_product(space, mono, exp, coeff, n: int, w: State) -> State:
    key = (mono, exp, coeff, n, w)
    cache = space.cache
    hit = cache.get(key)
    if hit is not None:
        return hit
    if not w.terms:
        res = w
    elif not mono:
        if not any(exp):
            res = w * coeff if n == -1 else State(w.ring)
        else:
            res = _base_product(space, exp, coeff, n, w)
    else:
        kind, i, k = mono[0]
        rest = mono[1:]
        dg = GEN_WEIGHT[kind]
        q = to_plain(dg, k)
        u_weight = monomial_weight(rest)
        res = State(w.ring.join(space.ring))
        j1 = _weight_bound(u_weight, w, n)
        for j in range(0, j1 + 1):
            c = binom(q, j)
            if not c:
                continue
            inner = _term_product(space, rest, exp, coeff, n + j, w)
            if inner:
                res = res + space.mode(kind, i, k - j, inner) * ((-1) ** j * c)
        j2 = w.max_weight() + dg - 1
        # the weight cut-offs are never looser than the documented worst case
        assert max(j1, j2) <= monomial_weight(mono) + w.max_weight() + abs(n) + 2
        sign_q = -1 if q % 2 else 1
        for j in range(0, j2 + 1):
            c = binom(q, j)
            if not c:
                continue
            gw = space.mode(kind, i, j - dg + 1, w)
            if gw:
                inner = _term_product(space, rest, exp, coeff, q + n - j, gw)
                if inner:
                    res = res - inner * (sign_q * (-1) ** j * c)
    cache[key] = res
    return res


def act(space, v: State, n: int, w: State) -> State:
    """``v_(n) w`` where ``v`` is a vertex-algebra state and ``w`` lives in ``space``."""
    out = State(w.ring.join(space.ring))
    for (mono, exp), c in v.terms.items():
        out = out + _term_product(space, mono, exp, c, n, w)
    return out


def nth_product(v: State, n: int, w: State, space: FockSpace | GeneratorTable | None = None) -> State:
    """The n-th product ``v_(n) w`` inside the vertex algebra."""
    if space is None:
        raise TypeError("nth_product needs the FockSpace (or GeneratorTable) of the chart")
    if isinstance(space, GeneratorTable):
        space = _space_for(space)
    return act(space, v, n, w)


_SPACES: dict = {}


def _space_for(table: GeneratorTable) -> FockSpace:
    sp = _SPACES.get(table)
    if sp is None:
        sp = _SPACES[table] = FockSpace(table)
    return sp


def conformal_mode(space, v: State, n: int, w: State) -> State:
    """``v_n w`` in conformal-weight notation for homogeneous ``v``."""
    return act(space, v, to_plain(v.weight(), n), w)


# ---------------------------------------------------------------------------
# Borcherds identity


def borcherds_residual(space_v, a: State, b: State, c: State, m: int, n: int, k: int,
                       space_m=None) -> State:
    """LHS - RHS of the Borcherds identity applied to ``c``.

    With ``space_m`` given, ``c`` lies in that module and the left side uses
    products inside ``space_v`` (the module form of the identity).
    """
    mod = space_m if space_m is not None else space_v
    wa, wb = a.max_weight(), b.max_weight()
    lhs = State(c.ring)
    for j in range(0, max(wa + wb - n - 1, -1) + 1):
        cm = binom(m, j)
        if cm:
            ab = act(space_v, a, n + j, b)
            if ab:
                lhs = lhs + act(mod, ab, m + k - j, c) * cm
    rhs = State(c.ring)
    wc = c.max_weight()
    sign_n = -1 if n % 2 else 1
    for j in range(0, max(wb + wc - k - 1, wa + wc - m - 1, -1) + 1):
        cn = binom(n, j)
        if not cn:
            continue
        t1 = act(mod, a, m + n - j, act(mod, b, k + j, c))
        t2 = act(mod, b, n + k - j, act(mod, a, m + j, c))
        rhs = rhs + (t1 - t2 * sign_n) * ((-1) ** j * cn)
    return lhs - rhs


def check_borcherds(space, a: State, b: State, c: State, m: int, n: int, k: int) -> State:
    return borcherds_residual(space, a, b, c, m, n, k)


# ---------------------------------------------------------------------------
# Borcherds Lie algebra


class LieElement:
    """Formal sum of ``state (x) t^n`` modulo ``(d a + (n + H) a) (x) t^n``.

    Stored in normal form: every summand lies in the fixed complement of the
    image of the translation operator chosen by :class:`TranslationComplement`.
    """

    __slots__ = ("parts", "reducer")

    def __init__(self, reducer: "TranslationComplement", parts: dict[int, State] | None = None,
                 normalized: bool = False):
        self.reducer = reducer
        parts = {n: s for n, s in (parts or {}).items() if s}
        if not normalized:
            parts = reducer.normalize(parts)
        self.parts = parts

    @classmethod
    def of(cls, reducer, state: State, n: int) -> "LieElement":
        return cls(reducer, {n: state})

    def __add__(self, other):
        out = dict(self.parts)
        for n, s in other.parts.items():
            out[n] = out[n] + s if n in out else s
        return LieElement(self.reducer, {n: s for n, s in out.items() if s}, normalized=True)

    def __neg__(self):
        return LieElement(self.reducer, {n: -s for n, s in self.parts.items()}, normalized=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        return LieElement(self.reducer, {n: s * c for n, s in self.parts.items()}, normalized=True)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.parts
        return isinstance(other, LieElement) and (self - other).parts == {}

    def __hash__(self):
        return hash(tuple(sorted((n, s.key()) for n, s in self.parts.items())))

    def __bool__(self):
        return bool(self.parts)

    def __str__(self):
        if not self.parts:
            return "0"
        return " + ".join(f"({s}) t^{n}" for n, s in sorted(self.parts.items()))

    def homogeneous_summands(self):
        for n, s in sorted(self.parts.items()):
            for (mono, exp), c in s.terms.items():
                yield State(s.ring, {(mono, exp): c}), n

    def act(self, space, w: State) -> State:
        """Action on a module: ``a (x) t^n`` acts as the conformal mode ``a_n``."""
        out = State(w.ring)
        for s, n in self.homogeneous_summands():
            out = out + act(space, s, to_plain(s.weight(), n), w)
        return out


class TranslationComplement:
    """Normal forms modulo the image of d, computed per (weight, charge) slice.

    In each slice the image of ``d`` is put in echelon form with pivots on the
    largest basis monomial; a state is reduced to ``d u + r`` with ``r`` free
    of pivots.  ``r`` is the canonical complement representative.
    """

    def __init__(self, space: FockSpace):
        self.space = space
        self.table = space.table
        self._slices: dict = {}

    def _slice(self, weight: int, ch: tuple[int, ...]):
        key = (weight, ch)
        if key in self._slices:
            return self._slices[key]
        table = self.table
        ring = self.space.ring
        basis = []
        for mono in creation_monomials(table, weight - 1):
            mono_ch = charge(mono, (0,) * ring.nvars, ring.nvars)
            exp = tuple(c - m for c, m in zip(ch, mono_ch))
            if ring.admits(exp):
                basis.append(State(ring, {(mono, exp): Fraction(1)}))
        # echelon rows: (pivot key, image state, preimage state)
        rows: list[tuple[object, State, State]] = []
        for u in basis:
            img = translate(u)
            pre = u
            img, pre = self._reduce_rows(rows, img, pre)
            if img:
                piv = max(img.terms, key=self._order)
                c = img.terms[piv]
                rows.append((piv, img * (1 / c), pre * (1 / c)))
        self._slices[key] = rows
        return rows

    @staticmethod
    def _order(k):
        mono, exp = k
        return (tuple((f[0], f[1], -f[2]) for f in mono), exp)

    @staticmethod
    def _reduce_rows(rows, img: State, pre: State):
        for piv, r_img, r_pre in rows:
            c = img.terms.get(piv)
            if c:
                img = img - r_img * c
                pre = pre - r_pre * c
        return img, pre

    def split(self, s: State) -> tuple[State, State]:
        """Write homogeneous ``s`` as ``d(u) + r``; returns ``(u, r)``."""
        ring = s.ring
        u_total = State(ring)
        r_total = State(ring)
        by_slice: dict = {}
        for (mono, exp), c in s.terms.items():
            key = (monomial_weight(mono), charge(mono, exp, ring.nvars))
            by_slice.setdefault(key, {})[(mono, exp)] = c
        for (weight, ch), terms in sorted(by_slice.items()):
            part = State(ring, terms)
            if weight == 0:
                r_total = r_total + part
                continue
            rows = self._slice(weight, ch)
            r, u = self._reduce_rows(rows, part, State(ring))
            u_total = u_total - u
            r_total = r_total + r
        return u_total, r_total

    def normalize(self, parts: dict[int, State]) -> dict[int, State]:
        # process summands weight by weight from the top
        pending: list[tuple[int, State]] = []
        for n, s in parts.items():
            for w, piece in _by_weight(s).items():
                pending.append((n, piece))
        out: dict[int, State] = {}
        while pending:
            n, s = pending.pop()
            if not s:
                continue
            w = s.max_weight()
            u, r = self.split(s)
            if r:
                # the vacuum spans ker d: |0> (x) t^n = 0 unless n = 0
                if w == 0:
                    r = _drop_constants(r) if n != 0 else r
                if r:
                    out[n] = out[n] + r if n in out else r
            if u:
                # d(u) (x) t^n = -(n + wt u) u (x) t^n
                factor = -(n + (w - 1))
                if factor:
                    pending.append((n, u * factor))
        return {n: s for n, s in out.items() if s}


def _by_weight(s: State) -> dict[int, State]:
    parts: dict[int, dict] = {}
    for (mono, e), c in s.terms.items():
        parts.setdefault(monomial_weight(mono), {})[(mono, e)] = c
    return {w: State(s.ring, t) for w, t in parts.items()}


def _drop_constants(s: State) -> State:
    zero = (0,) * s.ring.nvars
    return State(s.ring, {k: c for k, c in s.terms.items() if not (k[0] == () and k[1] == zero)})


def borcherds_bracket(space: FockSpace, x: LieElement, y: LieElement,
                      reducer: TranslationComplement | None = None) -> LieElement:
    """[a (x) t^n, b (x) t^l] = sum_j C(n + wt a - 1, j) (a_(j) b) (x) t^(n+l)."""
    reducer = reducer or x.reducer
    out: dict[int, State] = {}
    for a, n in x.homogeneous_summands():
        da = a.weight()
        for b, l in y.homogeneous_summands():
            top = da + b.max_weight() - 1
            for j in range(0, top + 1):
                c = binom(n + da - 1, j)
                if not c:
                    continue
                prod = act(space, a, j, b)
                if prod:
                    out[n + l] = out[n + l] + prod * c if (n + l) in out else prod * c
    return LieElement(reducer, out)


# ---------------------------------------------------------------------------
# structure relations among the chart generators


def split_weight_one(state: State, table: GeneratorTable):
    """Split a weight-1 state into (a-part, b-part, h-part) coefficient lists."""
    ring = state.ring
    a_part = [ring.zero() for _ in range(table.n_pairs)]
    b_part = [ring.zero() for _ in range(table.n_pairs)]
    h_part = [ring.zero() for _ in range(table.n_heis)]
    for mono, p in state.coefficients().items():
        if len(mono) != 1 or mono[0][2] != -1:
            raise ValueError(f"not a weight-one state in the generator basis: {state}")
        kind, i, _ = mono[0]
        {A: a_part, B: b_part, H: h_part}[kind][i] = p
    return a_part, b_part, h_part


def commutator_report(space: FockSpace, taus: Sequence[State], lam: Sequence[int] = ()) -> dict:
    """Check the commutation relations of the lifts tau_i, omega_i = dx_i, h_k.

    Relations are read off from the 0th and 1st products of weight-one
    states, since [u_m, v_n] = (u_(0)v)_(m+n) + m (u_(1)v)_(m+n).
    Returns a dict with ``checks`` and the extracted ``alpha``, ``f`` and
    ``beta`` data.
    """
    table = space.table
    ring = space.ring
    N, Hn = table.n_pairs, table.n_heis
    omegas = [table.dx(i) for i in range(N)]
    hs = [table.generator_state(H, k) for k in range(Hn)]
    lam_set = set(lam)
    checks: list[Check] = []

    def prod(u, n, v):
        return act(space, u, n, v)

    def fail_witness(label, st):
        return f"{label} = {st}"

    # omega-omega
    for i in range(N):
        for j in range(N):
            for n in (0, 1):
                r = prod(omegas[i], n, omegas[j])
                if r:
                    checks.append(Check("omega-omega", False, witness=fail_witness(f"omega{i+1}_({n})omega{j+1}", r)))
    if not any(c.name == "omega-omega" for c in checks):
        checks.append(Check("omega-omega", True))
    # tau-omega
    bad = []
    for i in range(N):
        for j in range(N):
            r0 = prod(taus[i], 0, omegas[j])
            r1 = prod(taus[i], 1, omegas[j])
            want = table.vacuum() if i == j else State(ring)
            if r0:
                bad.append(fail_witness(f"tau{i+1}_(0)omega{j+1}", r0))
            if r1 != want:
                bad.append(fail_witness(f"tau{i+1}_(1)omega{j+1}", r1))
    checks.append(Check("tau-omega", not bad, witness="; ".join(bad) or None))
    # tau-tau: alpha and f data, no central term
    alpha: dict[tuple[int, int], list] = {}
    fdata: dict[tuple[int, int], list] = {}
    bad = []
    for i in range(N):
        for j in range(N):
            r1 = prod(taus[i], 1, taus[j])
            if r1:
                bad.append(fail_witness(f"tau{i+1}_(1)tau{j+1}", r1))
            r0 = prod(taus[i], 0, taus[j])
            try:
                a_p, b_p, h_p = split_weight_one(r0, table)
            except ValueError as exc:
                bad.append(str(exc))
                continue
            if any(a_p) or any(h_p[k] for k in range(Hn) if k not in lam_set):
                bad.append(fail_witness(f"tau{i+1}_(0)tau{j+1}", r0))
            alpha[(i, j)] = [str(p) for p in b_p]
            fdata[(i, j)] = [str(h_p[k]) for k in sorted(lam_set)]
    checks.append(Check("tau-tau", not bad, witness="; ".join(bad) or None))
    # h-h against gram
    bad = []
    for k in range(Hn):
        for l in range(Hn):
            r0 = prod(hs[k], 0, hs[l])
            r1 = prod(hs[k], 1, hs[l])
            if r0:
                bad.append(fail_witness(f"h{k+1}_(0)h{l+1}", r0))
            want = table.vacuum() * table.gram[k][l]
            if r1 != want:
                bad.append(fail_witness(f"h{k+1}_(1)h{l+1}", r1))
    checks.append(Check("h-h", not bad, witness="; ".join(bad) or None))
    # tau-h: beta data
    beta: dict[tuple[int, int], list] = {}
    bad = []
    for i in range(N):
        for k in range(Hn):
            r1 = prod(taus[i], 1, hs[k])
            if r1:
                bad.append(fail_witness(f"tau{i+1}_(1)h{k+1}", r1))
            r0 = prod(taus[i], 0, hs[k])
            try:
                a_p, b_p, h_p = split_weight_one(r0, table)
            except ValueError as exc:
                bad.append(str(exc))
                continue
            if any(a_p) or any(h_p):
                bad.append(fail_witness(f"tau{i+1}_(0)h{k+1}", r0))
            beta[(i, k)] = [str(p) for p in b_p]
    checks.append(Check("tau-h", not bad, witness="; ".join(bad) or None))
    return {
        "checks": checks,
        "alpha": alpha,
        "f": fdata,
        "beta": beta,
        "ok": all(c.ok for c in checks),
    }
