"""Polynomial differential forms on a chart.

A k-form is a dict mapping strictly increasing index tuples ``(i1 < ... < ik)``
to ring elements.  Only what the chart builders need is provided: the de
Rham differential, contraction with coordinate vector fields, transport
along a ring map and the Euler homotopy that inverts ``d`` on closed forms.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Mapping

from .exact import Poly, Ring

Form = dict


def _sort_sign(idx: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Sign of the permutation sorting ``idx`` (0 if an index repeats)."""
    if len(set(idx)) != len(idx):
        return 0, idx
    sign = 1
    arr = list(idx)
    for i in range(len(arr)):
        for j in range(len(arr) - 1 - i):
            if arr[j] > arr[j + 1]:
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                sign = -sign
    return sign, tuple(arr)


def normalize(form: Mapping, ring: Ring) -> Form:
    """Bring arbitrary index tuples to sorted order, dropping zero entries."""
    out: dict = {}
    for idx, c in form.items():
        sign, key = _sort_sign(tuple(idx))
        if not sign:
            continue
        if not isinstance(c, Poly):
            c = ring.const(c)
        out[key] = out.get(key, ring.zero()) + c * sign
    return {k: v for k, v in sorted(out.items()) if v}


def component(form: Form, idx: tuple[int, ...], ring: Ring) -> Poly:
    """Antisymmetric coefficient ``form(d_i1, ..., d_ik)`` for any index order."""
    sign, key = _sort_sign(tuple(idx))
    if not sign or key not in form:
        return ring.zero()
    return form[key] * sign


def degree(form: Form) -> int | None:
    degs = {len(k) for k in form}
    if len(degs) > 1:
        raise ValueError("mixed-degree form")
    return degs.pop() if degs else None


def d(form: Form, ring: Ring) -> Form:
    """Exterior derivative: d(f dx_I) = sum_j d_j f dx_j ^ dx_I."""
    out: dict = {}
    for idx, c in form.items():
        for j in range(ring.nvars):
            dc = c.diff(j)
            if dc:
                out[(j,) + idx] = out.get((j,) + idx, ring.zero()) + dc
    return normalize(out, ring)


def contract(form: Form, i: int, ring: Ring) -> Form:
    """Interior product with d/dx_i, inserted in the first slot."""
    out: dict = {}
    for idx, c in form.items():
        if i in idx:
            pos = idx.index(i)
            rest = idx[:pos] + idx[pos + 1:]
            out[rest] = out.get(rest, ring.zero()) + c * (-1) ** pos
    return {k: v for k, v in sorted(out.items()) if v}


def euler_homotopy(form: Form, ring: Ring) -> Form:
    """H with dH + Hd = id on forms of positive degree with polynomial coefficients.

    On a term of polynomial degree m and form degree k, H is contraction with
    the Euler field divided by m + k.  For closed forms d(H form) = form.
    """
    out: dict = {}
    for idx, c in form.items():
        for exp, coeff in c.terms.items():
            if any(e < 0 for e in exp):
                raise ValueError("homotopy needs polynomial coefficients")
            total = sum(exp) + len(idx)
            for pos, i in enumerate(idx):
                rest = idx[:pos] + idx[pos + 1:]
                ne = list(exp)
                ne[i] += 1
                term = Poly(ring, {tuple(ne): Fraction(coeff * (-1) ** pos, total)})
                out[rest] = out.get(rest, ring.zero()) + term
    return {k: v for k, v in sorted(out.items()) if v}


def transport(form: Form, images: Mapping[str, Poly], source: Ring, target: Ring) -> Form:
    """Pull a form back along the coordinate change ``source var -> image``."""
    out: dict = {}
    jac = [[images[name].diff(j) for j in range(target.nvars)] for name in source.names]
    for idx, c in form.items():
        c2 = c.substitute(images, target)
        for new in itertools.product(range(target.nvars), repeat=len(idx)):
            coeff = c2
            for i, j in zip(idx, new):
                coeff = coeff * jac[i][j]
                if not coeff:
                    break
            if coeff:
                out[new] = out.get(new, target.zero()) + coeff
    return normalize(out, target)


def is_zero(form: Form) -> bool:
    return not any(form.values())


def to_json(form: Form) -> dict[str, str]:
    return {",".join(str(i + 1) for i in k): str(v) for k, v in form.items()}
