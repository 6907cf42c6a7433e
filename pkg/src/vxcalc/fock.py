"""Free-field Fock spaces: generator tables, states and mode actions.

Generators come in three kinds:

* ``a[i]`` -- weight 1, the vector field d/dx_i;
* ``b[i]`` -- weight 0, the coordinate x_i;
* ``h[k]`` -- weight 1 Heisenberg generators with Gram matrix ``gram``.

Generator modes are written in the conformal-weight convention
``g_n``, which for these free fields is the Heisenberg index:
``[a^i_m, b^j_n] = delta_{m+n,0} delta_ij`` and
``[h_k,m, h_l,n] = m gram[k][l] delta_{m+n,0}``.  The mode ``g_n``
lowers the weight by ``n``.  The n-th product index of a state of weight
``D`` is ``v_(p)`` with ``v_n = v_(n + D - 1)``; see :func:`to_plain`.

A :class:`State` is a finite sum ``coeff * x^e * M|0>`` where ``M`` is a
commutative monomial of creation modes (``a_n, b_n, h_n`` with ``n <= -1``).
The zero modes ``b^i_0`` are absorbed into the coefficient ring, so the
weight-zero space is literally the chart ring.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exact import Poly, Ring, scalar

A, B, H, E = 0, 1, 2, 3
KIND_NAMES = {A: "a", B: "b", H: "h", E: "e"}
KIND_CODES = {v: k for k, v in KIND_NAMES.items()}
GEN_WEIGHT = {A: 1, B: 0, H: 1}

Factor = tuple  # (kind, index, mode)
Monomial = tuple  # sorted tuple of factors


def factor_key(f: Factor):
    # kind a < b < h < e, then index, then mode descending
    return (f[0], f[1], -f[2])


def make_monomial(factors: Iterable[Factor]) -> Monomial:
    return tuple(sorted(factors, key=factor_key))


def monomial_weight(mono: Monomial) -> int:
    return -sum(f[2] for f in mono if f[0] != E)


def to_plain(weight: int, n: int) -> int:
    """Conformal mode index ``n`` of a weight-``weight`` vector -> n-th product index."""
    return n + weight - 1


def to_conformal(weight: int, p: int) -> int:
    """Inverse of :func:`to_plain`."""
    return p - weight + 1


def format_factor(f: Factor) -> str:
    kind, i, n = f
    if kind == E:
        return f"e[{i + 1}]"
    return f"{KIND_NAMES[kind]}[{i + 1}]({n})"


@dataclass(frozen=True)
class GeneratorTable:
    """The free-field alphabet of a chart."""

    n_pairs: int
    n_heis: int
    gram: tuple[tuple[Fraction, ...], ...]
    ring: Ring

    def __post_init__(self):
        if self.ring.nvars != self.n_pairs:
            raise ValueError("chart ring needs one variable per symplectic pair")
        if len(self.gram) != self.n_heis or any(len(r) != self.n_heis for r in self.gram):
            raise ValueError("gram must be an H x H matrix")
        for k in range(self.n_heis):
            for l in range(self.n_heis):
                if self.gram[k][l] != self.gram[l][k]:
                    raise ValueError("gram must be symmetric")

    @classmethod
    def build(cls, n_pairs: int, gram: Sequence[Sequence] = (), names: Sequence[str] | None = None,
              laurent: Sequence[str] = ()) -> "GeneratorTable":
        if names is None:
            names = [f"x{i + 1}" for i in range(n_pairs)]
        ring = Ring(tuple(names), tuple(n in set(laurent) for n in names))
        g = tuple(tuple(scalar(v) for v in row) for row in gram)
        return cls(n_pairs, len(g), g, ring)

    def with_ring(self, ring: Ring) -> "GeneratorTable":
        return GeneratorTable(self.n_pairs, self.n_heis, self.gram, ring)

    def generators(self) -> list[tuple[int, int]]:
        return ([(A, i) for i in range(self.n_pairs)] + [(B, i) for i in range(self.n_pairs)]
                + [(H, k) for k in range(self.n_heis)])

    def vacuum(self) -> "State":
        return State.vacuum(self.ring)

    def generator_state(self, kind: int, i: int) -> "State":
        """The state attached to a generator: a_{-1}|0>, x_i|0> or h_{-1}|0>."""
        if kind == B:
            return State.from_poly(self.ring.var(self.ring.names[i]))
        return State.monomial(self.ring, ((kind, i, -1),))

    def dx(self, i: int) -> "State":
        """The 1-form dx_i = b^i_{-1}|0> (the translate of x_i)."""
        return State.monomial(self.ring, ((B, i, -1),))

    def check(self, kind: int, i: int) -> None:
        limit = self.n_heis if kind == H else self.n_pairs
        if kind not in (A, B, H) or not 0 <= i < limit:
            raise KeyError(f"no generator {KIND_NAMES.get(kind, '?')}[{i + 1}] in this table")


class State:
    """Immutable finite sum of ``coeff * x^exp * monomial|0>``.

    ``terms`` maps ``(monomial, exponent)`` pairs to nonzero Fractions.
    """

    __slots__ = ("ring", "terms", "_key", "_hash")

    def __init__(self, ring: Ring, terms: Mapping | None = None):
        self.ring = ring
        clean = {}
        if terms:
            for k, c in terms.items():
                if c:
                    clean[k] = c if isinstance(c, Fraction) else Fraction(c)
        self.terms = clean
        self._key = None
        self._hash = None

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, ring: Ring) -> "State":
        return cls(ring)

    @classmethod
    def vacuum(cls, ring: Ring) -> "State":
        return cls(ring, {((), (0,) * ring.nvars): Fraction(1)})

    @classmethod
    def from_poly(cls, p: Poly, mono: Monomial = ()) -> "State":
        return cls(p.ring, {(mono, e): c for e, c in p.terms.items()})

    @classmethod
    def monomial(cls, ring: Ring, factors: Iterable[Factor], coeff=1,
                 exp: tuple[int, ...] | None = None) -> "State":
        if exp is None:
            exp = (0,) * ring.nvars
        ring.check_exponent(exp)
        return cls(ring, {(make_monomial(factors), exp): scalar(coeff)})

    # -- protocol ---------------------------------------------------------
    def key(self):
        if self._key is None:
            self._key = tuple(sorted(self.terms.items()))
        return self._key

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, State):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    # -- linear structure --------------------------------------------------
    def _join(self, other: "State") -> Ring:
        return self.ring.join(other.ring)

    def __add__(self, other: "State") -> "State":
        if not other.terms:
            return self
        if not self.terms:
            return other if other.ring == self.ring else State(self._join(other), other.terms)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k)
            out[k] = c if v is None else v + c
        return State(self._join(other), out)

    def __neg__(self):
        return State(self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "State") -> "State":
        return self + (-other)

    def __mul__(self, c) -> "State":
        if isinstance(c, Poly):
            return self.times_poly(c)
        c = scalar(c)
        if not c:
            return State(self.ring)
        if c == 1:
            return self
        return State(self.ring, {k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def times_poly(self, p: Poly) -> "State":
        ring = self.ring.join(p.ring)
        out: dict = {}
        for (mono, e1), c1 in self.terms.items():
            for e2, c2 in p.terms.items():
                k = (mono, tuple(a + b for a, b in zip(e1, e2)))
                out[k] = out.get(k, 0) + c1 * c2
        return State(ring, out)

    def with_ring(self, ring: Ring) -> "State":
        for (_, e) in self.terms:
            ring.check_exponent(e)
        return State(ring, self.terms)

    # -- structure ---------------------------------------------------------
    def coefficients(self) -> dict[Monomial, Poly]:
        """Group terms by creation monomial."""
        grouped: dict[Monomial, dict] = {}
        for (mono, e), c in self.terms.items():
            grouped.setdefault(mono, {})[e] = c
        return {m: Poly(self.ring, t) for m, t in grouped.items()}

    def coefficient(self, mono: Iterable[Factor]) -> Poly:
        mono = make_monomial(mono)
        return Poly(self.ring, {e: c for (m, e), c in self.terms.items() if m == mono})

    def weights(self) -> set[int]:
        return {monomial_weight(m) for (m, _) in self.terms}

    def max_weight(self) -> int:
        return max((monomial_weight(m) for (m, _) in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        return len(self.weights()) <= 1

    def weight(self) -> int:
        ws = self.weights()
        if len(ws) > 1:
            raise ValueError(f"state is not homogeneous: weights {sorted(ws)}")
        return ws.pop() if ws else 0

    def to_poly(self) -> Poly:
        """A weight-zero state as a ring element."""
        out = {}
        for (mono, e), c in self.terms.items():
            if mono:
                raise ValueError("state has positive weight; not a function")
            out[e] = c
        return Poly(self.ring, out)

    def sorted_terms(self):
        order = sorted(range(self.ring.nvars), key=lambda i: self.ring.names[i])
        return sorted(self.terms.items(),
                      key=lambda t: (monomial_weight(t[0][0]),
                                     tuple(factor_key(f) for f in t[0][0]),
                                     tuple(-t[0][1][i] for i in order)))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (mono, exp), c in self.sorted_terms():
            bits = []
            if c != 1:
                bits.append(str(c))
            for name, e in zip(self.ring.names, exp):
                if e == 1:
                    bits.append(name)
                elif e:
                    bits.append(f"{name}^{e}")
            bits.extend(format_factor(f) for f in mono)
            bits.append("|0>")
            parts.append(" ".join(bits))
        return " + ".join(parts)

    def __repr__(self):
        return f"State({self})"


# ---------------------------------------------------------------------------
# the vacuum Fock representation


def _remove(mono: Monomial, f: Factor) -> Monomial:
    i = mono.index(f)
    return mono[:i] + mono[i + 1:]


def _derive(s: State, target: Factor, scale) -> State:
    """Apply ``scale * d/d(target)`` to the creation-monomial part of ``s``."""
    if not scale:
        return State(s.ring)
    out: dict = {}
    for (mono, e), c in s.terms.items():
        k = mono.count(target)
        if k:
            key = (_remove(mono, target), e)
            out[key] = out.get(key, 0) + c * k * scale
    return State(s.ring, out)


def _create(s: State, f: Factor) -> State:
    out = {}
    for (mono, e), c in s.terms.items():
        out[(make_monomial(mono + (f,)), e)] = c
    return State(s.ring, out)


def _times_var(s: State, i: int) -> State:
    out = {}
    for (mono, e), c in s.terms.items():
        ne = list(e)
        ne[i] += 1
        out[(mono, tuple(ne))] = c
    return State(s.ring, out)


def _d_var(s: State, i: int) -> State:
    out: dict = {}
    for (mono, e), c in s.terms.items():
        if e[i]:
            ne = list(e)
            ne[i] -= 1
            key = (mono, tuple(ne))
            out[key] = out.get(key, 0) + c * e[i]
    return State(s.ring, out)


class FockSpace:
    """The vertex algebra of a generator table acting on itself.

    Also the reference implementation of the generator modes; module classes
    override :meth:`mode` to change zero-mode and central behaviour.
    """

    graded = True

    def __init__(self, table: GeneratorTable):
        self.table = table
        self.ring = table.ring
        self.cache: dict = {}

    def mode(self, kind: int, i: int, n: int, s: State) -> State:
        """Generator mode ``g_n`` (conformal index) applied to ``s``."""
        if not s.terms:
            return s
        if n <= -1:
            return _create(s, (kind, i, n))
        if kind == A:
            return _d_var(s, i) if n == 0 else _derive(s, (B, i, -n), 1)
        if kind == B:
            return _times_var(s, i) if n == 0 else _derive(s, (A, i, -n), -1)
        if kind == H:
            if n == 0:
                return State(s.ring)
            out = State(s.ring)
            for l, g in enumerate(self.table.gram[i]):
                if g:
                    out = out + _derive(s, (H, l, -n), n * g)
            return out
        raise KeyError(f"unknown generator kind {kind}")

    def commutator_scalar(self, g1: tuple[int, int, int], g2: tuple[int, int, int]) -> Fraction:
        """[g1, g2] for generator modes, a multiple of the identity."""
        (k1, i1, m), (k2, i2, n) = g1, g2
        if m + n != 0:
            return Fraction(0)
        if k1 == A and k2 == B and i1 == i2:
            return Fraction(1)
        if k1 == B and k2 == A and i1 == i2:
            return Fraction(-1)
        if k1 == H and k2 == H:
            return m * self.table.gram[i1][i2]
        return Fraction(0)

    def positive_modes(self, max_mode: int) -> list[tuple[int, int, int]]:
        """Generator modes g_n, 1 <= n <= max_mode, that may act nontrivially."""
        out = []
        for n in range(1, max_mode + 1):
            for kind, i in self.table.generators():
                out.append((kind, i, n))
        return out


def apply_mode(table_or_space, kind: int, i: int, n: int, s: State) -> State:
    """Apply the generator mode ``g_n`` (conformal index) to ``s``."""
    space = table_or_space if isinstance(table_or_space, FockSpace) else FockSpace(table_or_space)
    space.table.check(kind, i)
    return space.mode(kind, i, n, s)


def canonicalize(table: GeneratorTable, word: Sequence[tuple[int, int, int]], coeff=1) -> State:
    """Normal-order ``coeff * g1_{n1} ... gr_{nr}|0>`` into the monomial basis."""
    space = FockSpace(table)
    s = State.vacuum(table.ring) * scalar(coeff)
    for kind, i, n in reversed(word):
        space.table.check(kind, i)
        s = space.mode(kind, i, n, s)
    return s


def translate(s: State) -> State:
    """The translation operator; a derivation with [d, g_(p)] = -p g_(p-1)."""
    out = State(s.ring)
    for (mono, e), c in s.terms.items():
        # d on the coefficient: sum_i d_i f * b^i_{-1}
        for i, k in enumerate(e):
            if k:
                ne = list(e)
                ne[i] -= 1
                out = out + State(s.ring, {(make_monomial(mono + ((B, i, -1),)), tuple(ne)): c * k})
        # d on each creation factor: g_n -> -(n + D_g - 1) g_{n-1} in plain terms
        for idx, f in enumerate(mono):
            if idx and mono[idx - 1] == f:
                continue
            kind, i, n = f
            if kind == E:
                continue
            mult = mono.count(f)
            p = to_plain(GEN_WEIGHT[kind], n)
            rest = _remove(mono, f)
            new = make_monomial(rest + ((kind, i, n - 1),))
            out = out + State(s.ring, {(new, e): -p * mult * c})
    return out


def weight_decompose(s: State) -> dict[int, State]:
    parts: dict[int, dict] = {}
    for (mono, e), c in s.terms.items():
        parts.setdefault(monomial_weight(mono), {})[(mono, e)] = c
    return {w: State(s.ring, t) for w, t in sorted(parts.items())}


def creation_monomials(table: GeneratorTable, weight: int, kinds: Sequence[tuple[int, int]] | None = None
                       ) -> list[Monomial]:
    """All creation monomials of the given weight over ``kinds`` (default: all generators)."""
    if kinds is None:
        kinds = table.generators()
    factors = sorted([(k, i, -n) for n in range(1, weight + 1) for (k, i) in kinds], key=factor_key)
    out: list[Monomial] = []

    def rec(start: int, left: int, acc: list):
        if left == 0:
            out.append(make_monomial(acc))
            return
        for j in range(start, len(factors)):
            f = factors[j]
            if -f[2] <= left:
                rec(j, left + f[2], acc + [f])

    rec(0, weight, [])
    return sorted(set(out), key=lambda m: tuple(factor_key(f) for f in m))


def charge(mono: Monomial, exp: tuple[int, ...], nvars: int) -> tuple[int, ...]:
    """Per-variable charge: exponent of x_i plus #b^i minus #a^i.  Preserved by d."""
    ch = list(exp)
    for kind, i, _ in mono:
        if kind == B:
            ch[i] += 1
        elif kind == A:
            ch[i] -= 1
    return tuple(ch)
