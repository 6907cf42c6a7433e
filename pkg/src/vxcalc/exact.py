"""Exact scalars, sparse (Laurent) polynomials and rational linear algebra.

Scalars are :class:`fractions.Fraction` values; nothing in the package ever
touches a float.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Scalar = Fraction

__all__ = [
    "Scalar",
    "scalar",
    "binom",
    "Ring",
    "Poly",
    "NotPolynomialError",
    "RationalMatrix",
    "kernel_basis",
    "sparse_kernel_basis",
    "rank",
    "parse_poly",
    "inverse",
    "diagonalize_symmetric",
]

_SCALAR_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def scalar(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        m = _SCALAR_RE.match(value)
        if not m:
            raise ValueError(f"not a rational literal: {value!r}")
        num, den = m.groups()
        return Fraction(int(num), int(den) if den else 1)
    raise TypeError(f"cannot make an exact scalar from {type(value).__name__}")


def binom(n: int, j: int) -> int:
    """Generalized binomial coefficient; ``n`` may be negative."""
    if j < 0:
        return 0
    if n >= 0:
        return math.comb(n, j)
    # C(n, j) = (-1)^j C(j - n - 1, j)
    return (-1) ** j * math.comb(j - n - 1, j)


class NotPolynomialError(ValueError):
    """A negative exponent appeared on a variable that is not inverted."""


@dataclass(frozen=True)
class Ring:
    """Polynomial ring over Q; variables flagged ``laurent`` are inverted."""

    names: tuple[str, ...]
    laurent: tuple[bool, ...]

    def __post_init__(self):
        if len(self.names) != len(self.laurent):
            raise ValueError("one Laurent flag per variable")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")

    @classmethod
    def polynomial(cls, names: Sequence[str]) -> "Ring":
        return cls(tuple(names), (False,) * len(names))

    @classmethod
    def laurent_ring(cls, names: Sequence[str]) -> "Ring":
        return cls(tuple(names), (True,) * len(names))

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown ring variable {name!r}") from None

    def localize(self, names: Iterable[str] | None = None) -> "Ring":
        """The ring with ``names`` (default: all variables) inverted."""
        inv = set(self.names if names is None else names)
        return Ring(self.names, tuple(f or n in inv for n, f in zip(self.names, self.laurent)))

    def join(self, other: "Ring") -> "Ring":
        if self.names != other.names:
            raise ValueError(f"incompatible rings {self.names} and {other.names}")
        if self.laurent == other.laurent:
            return self
        return Ring(self.names, tuple(a or b for a, b in zip(self.laurent, other.laurent)))

    def check_exponent(self, exp: tuple[int, ...]) -> None:
        for e, inv, name in zip(exp, self.laurent, self.names):
            if e < 0 and not inv:
                raise NotPolynomialError(f"not a polynomial in target chart: {name}^{e}")

    def admits(self, exp: tuple[int, ...]) -> bool:
        return all(e >= 0 or inv for e, inv in zip(exp, self.laurent))

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return Poly(self, {(0,) * self.nvars: Fraction(1)})

    def const(self, c) -> "Poly":
        c = scalar(c)
        return Poly(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name: str, power: int = 1) -> "Poly":
        exp = [0] * self.nvars
        exp[self.index(name)] = power
        return Poly(self, {tuple(exp): Fraction(1)})

    def monomials(self, degree: int) -> list[tuple[int, ...]]:
        """Exponent vectors of total degree <= ``degree`` with nonnegative entries."""
        out: list[tuple[int, ...]] = []

        def rec(prefix: list[int], left: int, k: int):
            if k == self.nvars:
                out.append(tuple(prefix))
                return
            for e in range(left + 1):
                rec(prefix + [e], left - e, k + 1)

        rec([], degree, 0)
        out.sort(key=lambda e: (sum(e), e))
        return out


def _add_exp(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


class Poly:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to Fractions."""

    __slots__ = ("ring", "terms", "_key")

    def __init__(self, ring: Ring, terms: Mapping[tuple[int, ...], Fraction]):
        clean = {}
        for exp, c in terms.items():
            if c:
                ring.check_exponent(exp)
                clean[exp] = Fraction(c)
        self.ring = ring
        self.terms = clean
        self._key = None

    # -- basic protocol -------------------------------------------------
    def key(self):
        if self._key is None:
            self._key = tuple(sorted(self.terms.items()))
        return self._key

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring.names == other.ring.names and self.key() == other.key()

    def __hash__(self):
        return hash((self.ring.names, self.key()))

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.ring.nvars, Fraction(0))

    def degree(self) -> int:
        """Largest total degree of a term (-1 for zero)."""
        return max((sum(e) for e in self.terms), default=-1)

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        ring = self.ring.join(other.ring)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly(self.ring, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        ring = self.ring.join(other.ring)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add_exp(e1, e2)
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "Poly":
        """Inverse of a unit, i.e. a single term in inverted variables."""
        if len(self.terms) != 1:
            raise NotPolynomialError("not a polynomial in target chart: inverting a non-monomial")
        (exp, c), = self.terms.items()
        inv = tuple(-e for e in exp)
        self.ring.check_exponent(inv)
        return Poly(self.ring, {inv: 1 / c})

    def diff(self, i: int, times: int = 1) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            coeff = c
            for t in range(times):
                coeff *= k - t
            if coeff:
                ne = list(e)
                ne[i] -= times
                out[tuple(ne)] = coeff
        return Poly(self.ring, out)

    def substitute(self, images: Mapping[str, "Poly"], target: Ring) -> "Poly":
        """Ring morphism sending each variable to ``images[name]`` in ``target``.

        Raises :class:`NotPolynomialError` when an image that must be inverted
        is not a unit of ``target``.
        """
        result = target.zero()
        powers: dict[tuple[int, int], Poly] = {}
        for exp, c in self.terms.items():
            term = target.const(c)
            for i, e in enumerate(exp):
                if e == 0:
                    continue
                name = self.ring.names[i]
                img = images.get(name)
                if img is None:
                    img = target.var(name)
                key = (i, e)
                if key not in powers:
                    powers[key] = img ** e
                term = term * powers[key]
            result = result + term
        return Poly(target, result.terms)

    def with_ring(self, ring: Ring) -> "Poly":
        if ring.names != self.ring.names:
            raise ValueError("variable sets differ")
        return Poly(ring, self.terms)

    # -- printing -------------------------------------------------------
    def sorted_terms(self):
        """Terms in the canonical order (lexicographic by variable name, then exponent)."""
        order = sorted(range(self.ring.nvars), key=lambda i: self.ring.names[i])
        return sorted(self.terms.items(), key=lambda t: tuple(-t[0][i] for i in order))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp, c in self.sorted_terms():
            mono = " ".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.ring.names, exp)
                if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c} {mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Poly({self})"


_POLY_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_]\w*)(?:\^(-?\d+))?|([+\-*]))")


def parse_poly(text: str, ring: Ring) -> Poly:
    """Parse a ring element such as ``"x1^2 - 1/2 x2 + 3"`` or ``"y^-1"``."""
    pos = 0
    result = ring.zero()
    term = None
    sign = 1
    text = text.rstrip()
    if not text:
        raise ValueError("empty polynomial")
    while pos < len(text):
        m = _POLY_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad polynomial {text!r} at column {pos + 1}")
        pos = m.end()
        num, name, power, op = m.groups()
        if op in ("+", "-"):
            if term is not None:
                result = result + term
                term = None
            sign = sign * (-1 if op == "-" else 1)
            continue
        if op == "*":
            if term is None:
                raise ValueError(f"dangling '*' in {text!r}")
            continue
        if term is None:
            term = ring.const(sign)
            sign = 1
        if num:
            term = term * scalar(num)
        else:
            term = term * ring.var(name, int(power) if power else 1)
    if term is None:
        raise ValueError(f"polynomial {text!r} ends with an operator")
    return result + term


# ---------------------------------------------------------------------------
# linear algebra


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("matrix dimensions inconsistent")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RationalMatrix":
        data = tuple(tuple(scalar(x) for x in r) for r in rows)
        ncols = cols if cols is not None else (len(data[0]) if data else 0)
        return cls(len(data), ncols, data)

    def apply(self, v: Sequence[Fraction]) -> list[Fraction]:
        return [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in self.entries]


def _rref_sparse(rows: Iterable[Mapping[int, Fraction]]) -> dict[int, dict[int, Fraction]]:
    """Reduced row echelon form; returns pivot column -> normalized row."""
    pivots: dict[int, dict[int, Fraction]] = {}
    for raw in rows:
        row = {c: Fraction(v) for c, v in raw.items() if v}
        # eliminate existing pivots
        changed = True
        while changed and row:
            changed = False
            for col in sorted(row):
                if col in pivots:
                    f = row[col]
                    for c, v in pivots[col].items():
                        nv = row.get(c, 0) - f * v
                        if nv:
                            row[c] = nv
                        else:
                            row.pop(c, None)
                    changed = True
                    break
        if not row:
            continue
        col = min(row)
        inv = 1 / row[col]
        row = {c: v * inv for c, v in row.items()}
        # back-substitute into previous pivots to keep the form reduced
        for prow in pivots.values():
            f = prow.get(col)
            if f:
                for c, v in row.items():
                    nv = prow.get(c, 0) - f * v
                    if nv:
                        prow[c] = nv
                    else:
                        prow.pop(c, None)
        pivots[col] = row
    return pivots


def sparse_kernel_basis(rows: Iterable[Mapping[int, Fraction]], ncols: int) -> list[list[Fraction]]:
    """Right-kernel basis of a sparse matrix given as ``{col: value}`` rows."""
    pivots = _rref_sparse(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for pcol, prow in pivots.items():
            coeff = prow.get(f)
            if coeff:
                v[pcol] = -coeff
        basis.append(v)
    return basis


def kernel_basis(m: RationalMatrix | Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of the right kernel over Q; empty iff the kernel is trivial."""
    if not isinstance(m, RationalMatrix):
        m = RationalMatrix.from_rows(m)
    rows = ({j: v for j, v in enumerate(r) if v} for r in m.entries)
    return sparse_kernel_basis(rows, m.cols)


def rank(m: RationalMatrix | Sequence[Sequence]) -> int:
    if not isinstance(m, RationalMatrix):
        m = RationalMatrix.from_rows(m)
    return len(_rref_sparse({j: v for j, v in enumerate(r) if v} for r in m.entries))


def inverse(m: Sequence[Sequence]) -> list[list[Fraction]]:
    """Inverse of a square rational matrix by Gauss-Jordan elimination."""
    n = len(m)
    aug = [[scalar(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def diagonalize_symmetric(gram: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[Fraction], list[list[Fraction]]]:
    """Congruence-diagonalize a symmetric form over Q.

    Returns ``(complement, diag, radical)``: vectors ``l_r`` with
    ``<l_r, l_s> = diag[r] * delta_rs`` (all nonzero), and a basis of the
    radical.  Standard basis vectors are kept wherever possible.
    """
    n = len(gram)
    g = [[scalar(x) for x in row] for row in gram]

    def form(u, v):
        return sum((u[i] * g[i][j] * v[j] for i in range(n) for j in range(n) if u[i] and v[j]), Fraction(0))

    remaining = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    complement: list[list[Fraction]] = []
    diag: list[Fraction] = []
    while remaining:
        pick = next((k for k, v in enumerate(remaining) if form(v, v)), None)
        if pick is None:
            pair = next(((k, l) for k in range(len(remaining)) for l in range(k + 1, len(remaining))
                         if form(remaining[k], remaining[l])), None)
            if pair is None:
                break
            k, l = pair
            remaining[k] = [a + b for a, b in zip(remaining[k], remaining[l])]
            pick = k
        v = remaining.pop(pick)
        q = form(v, v)
        complement.append(v)
        diag.append(q)
        remaining = [[a - form(w, v) / q * b for a, b in zip(w, v)] for w in remaining]
    return complement, diag, remaining
