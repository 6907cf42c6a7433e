"""Fock-type modules with a central character, singular vectors and the rewriting algorithm.

A :class:`VModule` is built on a chart.  The Heisenberg span is split as
``complement (+) center``: the center is the radical of the Gram form and acts
through the central character (``c_n -> chi_n(c)``), the complement ``l_r``
has diagonal Gram ``d_r`` and acts freely with ``l_r,0 -> theta(l_r)``.
States reuse :class:`~vxcalc.fock.State`; inside a module the Heisenberg
factors ``h[r]`` of a state refer to the complement vector ``l_r`` and a
factor ``e[j]`` marks the fibre basis vector when the fibre has rank > 1.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import forms
from .charts import Chart, build_chart_cdo
from .exact import (Poly, diagonalize_symmetric, inverse, parse_poly, scalar,
                    sparse_kernel_basis)
from .fock import (A, B, E, H, GeneratorTable, State, _create, _d_var, _derive, _times_var,
                   creation_monomials, format_factor, make_monomial, monomial_weight, to_plain)
from .products import act
from .report import Check, Report, check_from_failures


class ModuleError(ValueError):
    pass


class PresentationError(ValueError):
    pass


class RewriteError(RuntimeError):
    pass


@dataclass(frozen=True)
class CentralCharacter:
    """theta on the h-generators and chi_n as functionals on the h-generators.

    Only the restriction of each chi_n to the center of the pairing matters.
    """

    theta: tuple[Fraction, ...] = ()
    chi: tuple[tuple[int, tuple[Fraction, ...]], ...] = ()

    @classmethod
    def build(cls, theta: Sequence = (), chi: Mapping | None = None) -> "CentralCharacter":
        th = tuple(scalar(v) for v in theta)
        ch = tuple(sorted((int(n), tuple(scalar(v) for v in vec)) for n, vec in (chi or {}).items()))
        return cls(th, ch)

    @classmethod
    def zero(cls) -> "CentralCharacter":
        return cls()

    def chi_at(self, n: int, n_heis: int) -> tuple[Fraction, ...]:
        for m, vec in self.chi:
            if m == n:
                return tuple(vec) + (Fraction(0),) * (n_heis - len(vec))
        return (Fraction(0),) * n_heis

    def theta_vec(self, n_heis: int) -> tuple[Fraction, ...]:
        return tuple(self.theta) + (Fraction(0),) * (n_heis - len(self.theta))

    def as_dict(self) -> dict:
        return {"theta": [str(v) for v in self.theta],
                "chi": {str(n): [str(v) for v in vec] for n, vec in self.chi}}


def character_from_json(doc: Mapping) -> CentralCharacter:
    return CentralCharacter.build(doc.get("theta", []), doc.get("chi", {}))


@dataclass(frozen=True)
class Fibre:
    """A free module O^rank with flat connection: d_i e_j = sum_k conn[i][j][k] e_k."""

    rank: int
    connection: tuple = ()

    def gamma(self, i: int, j: int, k: int, ring) -> Poly:
        if not self.connection:
            return ring.zero()
        return self.connection[i][j][k]


def _dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


class VModule:
    """A module over the chart vertex algebra, generated freely from a fibre."""

    graded = True

    def __init__(self, chart: Chart, cc: CentralCharacter, fibre: Fibre | None = None):
        self.chart = chart
        self.table = chart.table
        self.ring = chart.ring
        self.cc = cc
        self.fibre = fibre or Fibre(1)
        self.cache: dict = {}
        nh = self.table.n_heis
        comp, diag, radical = diagonalize_symmetric(self.table.gram) if nh else ([], [], [])
        self.complement = comp
        self.diag = diag
        self.center = radical
        basis = comp + radical
        self.h_in_basis = inverse(basis) if nh else []
        # h_k = sum_j h_in_basis[k][j] u_j where u_j runs over complement then center
        # (rows of ``basis`` are the u_j in h-coordinates, so h = basis^{-1} u)
        self.n_comp = len(comp)
        theta = cc.theta_vec(nh)
        self.theta_comp = [_dot(v, theta) for v in comp]
        self.chi_center: dict[int, list[Fraction]] = {}
        for n, vec in cc.chi:
            vec = cc.chi_at(n, nh)
            self.chi_center[n] = [_dot(z, vec) for z in radical]
        self.graded = all(not any(v) for n, v in self.chi_center.items() if n != 0)
        self.internal = GeneratorTable(self.table.n_pairs, self.n_comp,
                                       tuple(tuple(diag[r] if r == s else Fraction(0)
                                                   for s in range(self.n_comp)) for r in range(self.n_comp)),
                                       self.ring)

    # -- modes ----------------------------------------------------------------
    def _chi(self, n: int, s_idx: int) -> Fraction:
        vals = self.chi_center.get(n)
        return vals[s_idx] if vals else Fraction(0)

    def umode(self, j: int, n: int, s: State) -> State:
        """Mode of the j-th adapted Heisenberg vector (complement first, then center)."""
        if not s.terms:
            return s
        if j >= self.n_comp:
            return s * self._chi(n, j - self.n_comp)
        if n <= -1:
            return _create(s, (H, j, n))
        if n == 0:
            return s * self.theta_comp[j]
        return _derive(s, (H, j, -n), n * self.diag[j])

    def _a_zero(self, i: int, s: State) -> State:
        out = _d_var(s, i)
        if not self.fibre.connection:
            return out
        ring = self.ring
        for (mono, e), c in s.terms.items():
            j = next((f[1] for f in mono if f[0] == E), 0)
            rest = tuple(f for f in mono if f[0] != E)
            for k in range(self.fibre.rank):
                g = self.fibre.gamma(i, j, k, ring)
                if g:
                    fac = rest + (((E, k, 0),) if self.fibre.rank > 1 else ())
                    term = State(ring, {(make_monomial(fac), e): c}).times_poly(g)
                    out = out + term
        return out

    def imode(self, kind: int, i: int, n: int, s: State) -> State:
        """Generator mode in the adapted basis (``H`` index = complement vector)."""
        if not s.terms:
            return s
        if kind == H:
            return self.umode(i, n, s)
        if n <= -1:
            return _create(s, (kind, i, n))
        if kind == A:
            return self._a_zero(i, s) if n == 0 else _derive(s, (B, i, -n), 1)
        if kind == B:
            return _times_var(s, i) if n == 0 else _derive(s, (A, i, -n), -1)
        raise KeyError(f"unknown generator kind {kind}")

    def mode(self, kind: int, i: int, n: int, s: State) -> State:
        """Mode of an original generator of the chart."""
        if kind != H:
            return self.imode(kind, i, n, s)
        out = State(s.ring)
        for j, c in enumerate(self.h_in_basis[i]):
            if c:
                out = out + self.umode(j, n, s) * c
        return out

    def positive_modes(self, max_mode: int) -> list[tuple[int, int, int]]:
        """Adapted generator modes g_n, 1 <= n <= max_mode, that can act nontrivially."""
        out = []
        for n in range(1, max_mode + 1):
            for i in range(self.table.n_pairs):
                out.append((A, i, n))
                out.append((B, i, n))
            for r in range(self.n_comp):
                out.append((H, r, n))
        return out

    # -- states ---------------------------------------------------------------
    def fibre_factor(self, j: int) -> tuple:
        return ((E, j, 0),) if self.fibre.rank > 1 else ()

    def top(self, f: Poly | None = None, j: int = 0) -> State:
        """The weight-zero state f e_j."""
        if self.fibre.rank == 0:
            return State(self.ring)
        f = f if f is not None else self.ring.one()
        return State.from_poly(f, self.fibre_factor(j))

    def basis(self, weight: int, degree: int) -> list[State]:
        """States of exactly this weight with coefficient degree <= degree."""
        if self.fibre.rank == 0:
            return []
        exps = self.ring.monomials(degree)
        out = []
        for mono in creation_monomials(self.internal, weight):
            for j in range(self.fibre.rank):
                m = make_monomial(mono + self.fibre_factor(j))
                for e in exps:
                    out.append(State(self.ring, {(m, e): Fraction(1)}))
        return out

    def word_state(self, word: Sequence[tuple[int, int, int]], top: State | None = None) -> State:
        s = top if top is not None else self.top()
        for kind, i, n in reversed(word):
            s = self.imode(kind, i, n, s)
        return s

    def describe(self) -> dict:
        return {
            "chart": self.chart.name,
            "character": self.cc.as_dict(),
            "complement": [[str(c) for c in v] for v in self.complement],
            "complement_gram": [str(d) for d in self.diag],
            "center": [[str(c) for c in v] for v in self.center],
            "fibre_rank": self.fibre.rank,
        }


def make_module(chart: Chart, cc: CentralCharacter | None = None, fibre: Fibre | None = None) -> VModule:
    """Module with character cc; rejects characters that allow no nonzero module."""
    cc = cc or CentralCharacter.zero()
    nh = chart.table.n_heis
    if len(cc.theta) > nh:
        raise ModuleError(f"theta has {len(cc.theta)} entries but the chart has {nh} h-generators")
    _, _, radical = diagonalize_symmetric(chart.table.gram) if nh else ([], [], [])
    for n, vec in cc.chi:
        if len(vec) > nh:
            raise ModuleError(f"chi_{n} has {len(vec)} entries but the chart has {nh} h-generators")
        values = [_dot(z, cc.chi_at(n, nh)) for z in radical]
        if n > 0 and any(values):
            raise ModuleError(f"no nonzero half-integrable module: chi_{n} = "
                              f"{[str(v) for v in values]} is nonzero on the center")
    theta = cc.theta_vec(nh)
    chi0 = cc.chi_at(0, nh)
    for z in radical:
        if _dot(z, theta) != _dot(z, chi0):
            raise ModuleError(f"theta and chi_0 disagree on the central vector {[str(c) for c in z]}")
    return VModule(chart, cc, fibre)


def fock_module(n: int = 1, cc: CentralCharacter | None = None, **chart_kwargs) -> VModule:
    return make_module(build_chart_cdo(n, **chart_kwargs), cc)


def _require_graded(M: VModule) -> None:
    if not M.graded:
        raise ModuleError("this computation needs a graded module (chi_n = 0 for n != 0)")


# ---------------------------------------------------------------------------
# half-integrability, singular vectors, filtration


def check_half_integrable(M: VModule, weight: int = 2, power: int = 4, degree: int = 2) -> Report:
    """Probe: every positive generator mode is nilpotent on every basis state."""
    report = Report("half-integrable", {"weight": weight, "power": power, "degree": degree})
    unresolved = []
    worst = 0
    count = 0
    for w in range(weight + 1):
        for m in M.basis(w, degree):
            for kind, i, n in M.positive_modes(weight + 1):
                s = m
                for p in range(1, power + 1):
                    s = M.imode(kind, i, n, s)
                    if not s:
                        worst = max(worst, p)
                        break
                else:
                    unresolved.append(f"{format_factor((kind, i, n))} on {m}")
                count += 1
    report.add(check_from_failures("nilpotent", unresolved, f"{count} pairs, max power {worst}"))
    report.data["max_power"] = worst
    return report


def nilpotency_power(M: VModule, op, m: State, bound: int = 64) -> int:
    """Least p with op^p m = 0 (0 for m = 0); ``op`` is an adapted mode or a state mode."""
    s = m
    for p in range(bound + 1):
        if not s:
            return p
        s = apply_op(M, op, s)
    raise ModuleError(f"operator not nilpotent within {bound} steps")


def _components(rows: list[dict[int, Fraction]], ncols: int) -> list[list[int]]:
    parent = list(range(ncols))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for row in rows:
        cols = list(row)
        for c in cols[1:]:
            ra, rb = find(cols[0]), find(c)
            if ra != rb:
                parent[ra] = rb
    groups: dict[int, list[int]] = {}
    for c in range(ncols):
        groups.setdefault(find(c), []).append(c)
    return list(groups.values())


def sing_slice(M: VModule, weight: int, degree: int) -> list[State]:
    """Kernel of all positive generator modes on one weight slice."""
    basis = M.basis(weight, degree)
    if not basis:
        return []
    ops = M.positive_modes(weight)
    row_index: dict = {}
    rows: list[dict[int, Fraction]] = []
    for col, b in enumerate(basis):
        for op in ops:
            img = M.imode(*op, b)
            for key, c in img.terms.items():
                r = row_index.get((op, key))
                if r is None:
                    r = row_index[(op, key)] = len(rows)
                    rows.append({})
                rows[r][col] = c
    out = []
    for comp in _components(rows, len(basis)):
        local = {c: k for k, c in enumerate(comp)}
        comp_rows = [{local[c]: v for c, v in row.items()} for row in rows
                     if next(iter(row)) in local] if rows else []
        for vec in sparse_kernel_basis(comp_rows, len(comp)):
            s = State(M.ring)
            for k, v in enumerate(vec):
                if v:
                    s = s + basis[comp[k]] * v
            out.append(s)
    return out


def sing(M: VModule, weight: int, degree: int) -> dict[int, list[State]]:
    """Sing M up to the cutoffs, per weight."""
    _require_graded(M)
    if weight < 0 or degree < 0:
        raise ValueError("cutoffs must be nonnegative")
    return {w: sing_slice(M, w, degree) for w in range(weight + 1)}


def is_singular(M: VModule, s: State) -> bool:
    top = max(s.max_weight(), 0)
    return all(not M.imode(*op, s) for op in M.positive_modes(top + 1))


def _echelon_insert(basis: dict, s: State) -> bool:
    """Insert ``s`` into an echelon family keyed by pivot term; True if independent."""
    for piv in sorted(basis, reverse=True):
        c = s.terms.get(piv)
        if c:
            s = s - basis[piv] * c
    if not s:
        return False
    piv = max(s.terms)
    basis[piv] = s * (1 / s.terms[piv])
    # keep pivots reduced in older rows
    for other, row in list(basis.items()):
        if other != piv:
            c = row.terms.get(piv)
            if c:
                basis[other] = row - basis[piv] * c
    return True


def filtration_level(M: VModule, m: State) -> int:
    """Largest total degree of a product of positive generator modes not killing m.

    Products of degree d are tracked through the span they produce.  The zero
    vector gets -1, below every nonzero level.
    """
    _require_graded(M)
    if not m:
        return -1
    top = m.max_weight()
    spans: dict[int, list[State]] = {0: [m]}
    level = 0
    for d in range(1, top + 1):
        fam: dict = {}
        for n in range(1, d + 1):
            for s in spans.get(d - n, []):
                for op in _modes_of_degree(M, n):
                    img = M.imode(*op, s)
                    if img:
                        _echelon_insert(fam, img)
        spans[d] = list(fam.values())
        if fam:
            level = d
    return level


def _modes_of_degree(M: VModule, n: int) -> list[tuple[int, int, int]]:
    out = []
    for i in range(M.table.n_pairs):
        out.append((A, i, n))
        out.append((B, i, n))
    for r in range(M.n_comp):
        out.append((H, r, n))
    return out


# ---------------------------------------------------------------------------
# operators in words


@dataclass(frozen=True)
class Op:
    """The conformal mode ``n`` of a named weight-one (or weight-zero) state."""

    label: str
    state: State
    n: int

    def __str__(self):
        return f"{self.label}_{{{self.n}}}"


def apply_op(M: VModule, op, s: State) -> State:
    if isinstance(op, Op):
        return act(M, op.state, to_plain(op.state.weight(), op.n), s)
    kind, i, n = op
    return M.imode(kind, i, n, s)


def _tau(M: VModule, i: int, n: int) -> Op:
    return Op(f"tau{i + 1}", M.chart.tau(i), n)


def _omega(M: VModule, i: int, n: int) -> Op:
    return Op(f"omega{i + 1}", M.chart.omega(i), n)


def apply_word(M: VModule, word: Sequence, s: State) -> State:
    for op in reversed(word):
        s = _apply_any(M, op, s)
    return s


def _apply_any(M: VModule, op, s: State) -> State:
    if isinstance(op, Op):
        return apply_op(M, op, s)
    kind, i, n = op
    if kind == "l":
        return M.umode(i, n, s)
    return M.imode(kind, i, n, s)


def _op_text(op) -> str:
    if isinstance(op, Op):
        return f"{op.label}({op.n})"
    kind, i, n = op
    if kind == "l":
        return f"l{i + 1}({n})"
    return format_factor((kind, i, n))


@dataclass
class SingExpression:
    """m = sum_t word_t . s_t with words in non-positive modes and s_t singular."""

    terms: list = field(default_factory=list)

    def evaluate(self, M: VModule) -> State:
        out = State(M.ring)
        for word, s in self.terms:
            out = out + apply_word(M, word, s)
        return out

    def as_tree(self) -> list[dict]:
        return [{"word": [_op_text(op) for op in word], "sing": str(s)} for word, s in self.terms]

    def __len__(self):
        return len(self.terms)


def reduction_residual(M: VModule, A_op, B_op, m: State, n: int) -> State:
    """A^n (n [B, A] + B A) m, which vanishes when A^(n+1) m = 0 and [A,[A,B]] = 0."""
    am = _apply_any(M, A_op, m)
    bam = _apply_any(M, B_op, am)
    abm = _apply_any(M, A_op, _apply_any(M, B_op, m))
    s = (bam - abm) * n + bam
    for _ in range(n):
        s = _apply_any(M, A_op, s)
    return s


class _Rewriter:
    def __init__(self, M: VModule, max_steps: int):
        self.M = M
        self.max_steps = max_steps
        self.steps = 0
        self.N = M.table.n_pairs
        self.taus = [M.chart.tau(i) for i in range(self.N)]
        self.omegas = [M.chart.omega(i) for i in range(self.N)]

    def tick(self):
        self.steps += 1
        if self.steps > self.max_steps:
            raise RewriteError(f"descent did not terminate within {self.max_steps} steps")

    def _first(self, m: State, ops):
        """First operator (smallest n, then smallest i) acting nonzero, with its order."""
        for op in ops:
            img = _apply_any(self.M, op, m)
            if img:
                k = 1
                s = img
                while True:
                    s = _apply_any(self.M, op, s)
                    if not s:
                        return op, k, img
                    k += 1
                    if k > 64:
                        raise RewriteError(f"{_op_text(op)} is not nilpotent on {m}")
        return None

    def omega_ops(self, top):
        return [_omega(self.M, i, n) for n in range(1, top + 1) for i in range(self.N)]

    def l_ops(self, top):
        return [("l", r, n) for n in range(1, top + 1) for r in range(self.M.n_comp)]

    def tau_ops(self, top):
        return [_tau(self.M, i, n) for n in range(1, top + 1) for i in range(self.N)]

    def run(self, m: State) -> list:
        self.tick()
        if not m:
            return []
        top = m.max_weight()
        M = self.M
        hit = self._first(m, self.omega_ops(top))
        if hit:
            op, k, m1 = hit
            i, n = int(op.label[5:]) - 1, op.n
            B = _tau(M, i, -n)
            scale = Fraction(n * k)
            return self._combine(m, m1, B, scale)
        hit = self._first(m, self.l_ops(top))
        if hit:
            (_, r, n), k, m1 = hit
            B = ("l", r, -n)
            scale = Fraction(n * k) * M.diag[r]
            return self._combine(m, m1, B, scale)
        hit = self._first(m, self.tau_ops(top))
        if hit:
            op, k, m1 = hit
            i, n = int(op.label[3:]) - 1, op.n
            B = _omega(M, i, -n)
            return self._combine(m, m1, B, Fraction(n * k))
        if not is_singular(M, m):
            raise RewriteError(f"{m} is killed by all positive frame modes but is not singular")
        return [((), m)]

    def _combine(self, m, m1, B, scale):
        # m'' = scale m - B m'  has lower degree at (i, n); m = (m'' + B m') / scale
        bm1 = _apply_any(self.M, B, m1)
        m2 = m * scale - bm1
        out = [(word, s * (1 / scale)) for word, s in self.run(m2)]
        out += [((B,) + word, s * (1 / scale)) for word, s in self.run(m1)]
        return out


def rewrite_to_sing(M: VModule, m: State, max_steps: int = 200000) -> SingExpression:
    """Express m through singular vectors by the three-phase descent; checked on return."""
    _require_graded(M)
    rw = _Rewriter(M, max_steps)
    raw = rw.run(m)
    merged: dict = {}
    order = []
    for word, s in raw:
        key = tuple(_op_key(op) for op in word)
        if key not in merged:
            merged[key] = (word, s)
            order.append(key)
        else:
            merged[key] = (word, merged[key][1] + s)
    terms = [merged[k] for k in sorted(order) if merged[k][1]]
    expr = SingExpression(terms)
    back = expr.evaluate(M)
    if back != m:
        raise RewriteError(f"rewriting does not reproduce the input: difference {back - m}")
    for _, s in terms:
        if not is_singular(M, s):
            raise RewriteError(f"leaf {s} is not singular")
    return expr


def _op_key(op):
    if isinstance(op, Op):
        return (op.label, op.n)
    kind, i, n = op
    return (str(kind), i, n)


# ---------------------------------------------------------------------------
# Zhu action and induction from a fibre


def zhu_action(M: VModule, xi: State, s: State) -> State:
    """Zero mode of xi (weight 0 or 1) on a singular vector; the result must be singular."""
    if not is_singular(M, s):
        raise ModuleError(f"{s} is not a singular vector")
    out = act(M, xi, to_plain(xi.weight(), 0), s)
    if not is_singular(M, out):
        raise ModuleError(f"zero mode of {xi} leaves Sing: {out}")
    return out


@dataclass(frozen=True)
class Presentation:
    """A free module over the chart with a flat connection.

    ``connection[i]`` is a rank x rank matrix of polynomials (strings or
    Poly): d_i e_j = sum_k connection[i][j][k] e_k.
    """

    n: int
    rank: int
    connection: tuple = ()
    names: tuple[str, ...] = ()

    def chart(self) -> Chart:
        return build_chart_cdo(self.n, names=list(self.names) or None)


def presentation_from_json(doc: Mapping) -> Presentation:
    n = int(doc.get("N", 1))
    rank = int(doc.get("rank", 1))
    conn = doc.get("connection", [])
    names = tuple(doc.get("vars", []))
    return Presentation(n, rank, tuple(tuple(tuple(str(c) for c in row) for row in mat) for mat in conn), names)


def _fibre_for(pres: Presentation, chart: Chart) -> Fibre:
    ring = chart.ring
    if not pres.connection:
        return Fibre(pres.rank)
    if len(pres.connection) != pres.n:
        raise PresentationError("need one connection matrix per coordinate")
    conn = []
    for mat in pres.connection:
        if len(mat) != pres.rank or any(len(r) != pres.rank for r in mat):
            raise PresentationError("connection matrices must be rank x rank")
        conn.append(tuple(tuple(c if isinstance(c, Poly) else parse_poly(str(c), ring) for c in row)
                          for row in mat))
    fib = Fibre(pres.rank, tuple(conn))
    # flatness: [nabla_i, nabla_j] e_l = 0
    for i, j in itertools.combinations(range(pres.n), 2):
        for l in range(pres.rank):
            for k in range(pres.rank):
                val = conn[j][l][k].diff(i) - conn[i][l][k].diff(j)
                for m in range(pres.rank):
                    val = val + conn[j][l][m] * conn[i][m][k] - conn[i][l][m] * conn[j][m][k]
                if val:
                    raise PresentationError(f"connection is not flat: curvature ({i + 1},{j + 1}) entry "
                                            f"({l + 1},{k + 1}) = {val}")
    return fib


def induce_free(pres: Presentation, cc: CentralCharacter | None = None, chart: Chart | None = None,
                lam: Sequence[int] = ()) -> VModule:
    """The module freely generated by negative modes over the fibre, positive modes killing it."""
    if chart is None:
        chart = pres.chart()
    if chart.n != pres.n:
        raise PresentationError("presentation and chart have different dimensions")
    return make_module(chart, cc, _fibre_for(pres, chart))


def roundtrip_check(pres: Presentation, cc: CentralCharacter | None = None, weight: int = 3,
                    degree: int = 3, chart: Chart | None = None) -> Report:
    """Sing of the induced module recovers the fibre with its differential-operator action."""
    cc = cc or CentralCharacter.zero()
    report = Report("roundtrip", {"weight": weight, "degree": degree, "rank": pres.rank,
                                  "character": cc.as_dict()})
    M = induce_free(pres, cc, chart)
    S = sing(M, weight, degree)
    bad = [f"weight {w}: {len(v)} singular vectors, first {v[0]}" for w, v in S.items() if w and v]
    report.add(check_from_failures("sing-positive-weights-empty", bad))
    top = M.basis(0, degree)
    span = S.get(0, [])
    ok = len(span) == len(top)
    report.add(Check("sing-weight-zero-is-fibre", ok, f"{len(span)} vectors for {len(top)} fibre monomials",
                     None if ok else f"dimension {len(span)} != {len(top)}"))
    ring = M.ring
    samples = M.basis(0, max(degree - 1, 0))
    bad = []
    theta = cc.theta_vec(M.table.n_heis)
    mus = {k: M.chart.mu(k) for k in M.chart.lam}
    for i in range(M.chart.n):
        tau = M.chart.tau(i)
        # the lift adds sum_k mu_k(d_i) h_k, whose zero mode is the scalar theta(h_k)
        shift = ring.zero()
        for k, mu in mus.items():
            shift = shift + forms.component(mu, (i,), ring) * theta[k]
        for s in samples:
            got = zhu_action(M, tau, s)
            want = M._a_zero(i, s) + s.times_poly(shift)
            if got != want:
                bad.append(f"tau{i + 1} on {s}: {got} != {want}")
    report.add(check_from_failures("zhu-frame-acts-by-connection", bad))
    bad = []
    for name in ring.names:
        x = State.from_poly(ring.var(name))
        for s in samples:
            got = zhu_action(M, x, s)
            if got != s.times_poly(ring.var(name)):
                bad.append(f"{name} on {s}: {got}")
    report.add(check_from_failures("zhu-functions-multiply", bad))
    bad = []
    for k in range(M.table.n_heis):
        h = M.chart.h(k)
        for s in samples:
            got = zhu_action(M, h, s)
            if got != s * theta[k]:
                bad.append(f"h{k + 1} on {s}: {got} != {theta[k]} * s")
    report.add(check_from_failures("zhu-h-acts-by-theta", bad))
    # Lie algebroid homomorphism: [xi_0, eta_0] = (xi_(0) eta)_0
    xs = [M.chart.tau(i) for i in range(M.chart.n)]
    for name in ring.names:
        xv = ring.var(name)
        xs += [act(M.chart.space, State.from_poly(xv), -1, M.chart.tau(i)) for i in range(M.chart.n)]
    xs += [M.chart.h(k) for k in range(M.table.n_heis)]
    bad = []
    for xi, eta in itertools.product(xs, xs):
        br = act(M.chart.space, xi, 0, eta)
        for s in samples[:6]:
            lhs = zhu_action(M, br, s) if br else State(ring)
            rhs = zhu_action(M, xi, zhu_action(M, eta, s)) - zhu_action(M, eta, zhu_action(M, xi, s))
            if lhs != rhs:
                bad.append(f"[{xi}, {eta}] on {s}: {lhs} != {rhs}")
    report.add(check_from_failures("zhu-bracket-homomorphism", bad, f"{len(xs) ** 2} pairs"))
    report.data["sing_dimensions"] = {str(w): len(v) for w, v in S.items()}
    return report
