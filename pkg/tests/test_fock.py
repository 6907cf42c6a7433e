from __future__ import annotations

from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from vxcalc.fock import (A, B, H, FockSpace, GeneratorTable, State, canonicalize, to_conformal, to_plain,
                         translate, weight_decompose)
from vxcalc.suites import StateSampler

TABLE = GeneratorTable.build(2, gram=[[1, 0], [0, 0]])
SPACE = FockSpace(TABLE)
SAMPLER = StateSampler(TABLE, 2)
RING = TABLE.ring


def vac():
    return State.vacuum(RING)


def mono(*factors, exp=None):
    return State.monomial(RING, factors, exp=exp)


def test_canonicalize_examples():
    assert canonicalize(TABLE, [(B, 0, -1), (A, 0, -1)]) == mono((A, 0, -1), (B, 0, -1))
    assert canonicalize(TABLE, [(A, 0, 1), (B, 0, -1)]) == vac()
    assert canonicalize(TABLE, [(H, 1, -1)]) == mono((H, 1, -1))


def test_mode_examples():
    for n in range(0, 3):
        assert not SPACE.mode(A, 0, n, vac())
    assert SPACE.mode(B, 1, 0, vac()) == State.from_poly(RING.var("x2"))
    assert SPACE.mode(A, 0, 1, mono((B, 0, -1))) == vac()


def test_translate_examples():
    assert not translate(vac())
    assert translate(mono((A, 0, -1))) == mono((A, 0, -2))
    assert translate(State.from_poly(RING.var("x1"))) == mono((B, 0, -1))


def test_weight_decompose_examples():
    x2 = State.from_poly(RING.var("x1", 2))
    assert weight_decompose(x2) == {0: x2}
    s = mono((A, 0, -1)) + mono((B, 0, -1))
    assert weight_decompose(s) == {1: s}
    assert weight_decompose(mono((A, 0, -2))) == {2: mono((A, 0, -2))}


def test_index_conversion_is_bijective():
    for w in range(3):
        for n in range(-4, 5):
            assert to_conformal(w, to_plain(w, n)) == n


modes = st.tuples(st.sampled_from([(A, 0), (A, 1), (B, 0), (B, 1), (H, 0), (H, 1)]), st.integers(-3, 3)) \
    .map(lambda t: (t[0][0], t[0][1], t[1]))


@st.composite
def states(draw, max_weight=3):
    import random
    rng = random.Random(draw(st.integers(0, 10 ** 6)))
    return SAMPLER.state(rng, max_weight, terms=draw(st.integers(1, 3)), mixed=draw(st.booleans()))


@given(modes, modes, states())
def test_mode_commutator_matches_table(g1, g2, s):
    lhs = SPACE.mode(*g1, SPACE.mode(*g2, s)) - SPACE.mode(*g2, SPACE.mode(*g1, s))
    assert lhs == s * SPACE.commutator_scalar(g1, g2)


@given(modes, states())
def test_translation_commutator(g, s):
    kind, i, n = g
    w = 1 if kind in (A, H) else 0
    p = to_plain(w, n)
    lhs = translate(SPACE.mode(kind, i, n, s)) - SPACE.mode(kind, i, n, translate(s))
    # [d, g_(p)] = -p g_(p-1), and g_(p-1) is the conformal mode n - 1
    assert lhs == SPACE.mode(kind, i, n - 1, s) * (-p)


@given(states(), states())
def test_canonicalize_linear_and_idempotent(s, t):
    word = [(A, 0, 1), (B, 1, -2)]
    def run(x):
        for g in reversed(word):
            x = SPACE.mode(*g, x)
        return x
    assert run(s + t) == run(s) + run(t)
    assert run(s * Fraction(3, 2)) == run(s) * Fraction(3, 2)
    c = canonicalize(TABLE, [(B, 0, -1), (A, 1, -2)])
    assert canonicalize(TABLE, [(B, 0, -1), (A, 1, -2)]) == c


@given(modes, states())
def test_mode_shifts_weight(g, s):
    kind, i, n = g
    out = SPACE.mode(kind, i, n, s)
    for w, part in weight_decompose(s).items():
        image = SPACE.mode(kind, i, n, part)
        assert all(x == w - n for x in image.weights())
    assert set(weight_decompose(out)) <= {w - n for w in s.weights()}
