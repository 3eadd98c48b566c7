from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from polyfunctors.errors import InsufficientData
from polyfunctors.fields import QQ
from polyfunctors.functors import Element, FunctorSpec, Sym, parse_spec
from polyfunctors.limits import EElement, TruncatedElement, coherence_check, compose_e, e_apply
from polyfunctors.linalg import Matrix, solve_linear
from polyfunctors.quasiorder2 import canonical_q, deg2_specializer

S2 = FunctorSpec([Sym(2)])
small = st.fractions(min_value=-3, max_value=3, max_denominator=3)


def _quadric(n, terms):
    return Element.from_terms(S2, n, terms)


def test_coherence_examples():
    assert coherence_check(TruncatedElement(S2, [1, 3], [Element.zero(S2, 1), Element.zero(S2, 3)]))
    x12 = _quadric(2, [(0, (0, 1), 1)])
    good = TruncatedElement(S2, [2, 4], [x12, _quadric(4, [(0, (0, 1), 1), (0, (2, 3), 1)])])
    assert coherence_check(good)
    bad = TruncatedElement(S2, [2, 4], [x12, _quadric(4, [(0, (2, 3), 1)])])
    assert not coherence_check(bad)


def test_e_apply_examples():
    p = TruncatedElement.from_element(_quadric(5, [(0, (0, 1), 2), (0, (3, 4), -1), (0, (2, 2), 1)]))
    for L in range(6):
        assert e_apply(EElement.identity(), p, L) == p.layer(L)
        assert e_apply(EElement.zero(), p, L) == Element.zero(S2, L)
    # the banded matrix turns x1x2 + x3x4 + ... into sum a_ij x_i x_j
    L = 4
    a = {(i, j): Fraction(i + 2 * j + 1, j + 1) for i in range(L) for j in range(i, L)}
    target = _quadric(L, [(0, k, v) for k, v in a.items()])
    e = deg2_specializer(target, "quadric")
    assert e_apply(e, canonical_q("quadric", L), L) == target


def test_insufficient_data():
    p = TruncatedElement.from_element(_quadric(3, [(0, (0, 1), 1)]))
    short = EElement.from_rows(QQ, [{0: 1}, {1: 1}], tail="none")
    with pytest.raises(InsufficientData):
        e_apply(short, p, 3)
    wide = EElement.from_rows(QQ, [{5: 1}], tail="none")
    with pytest.raises(InsufficientData):
        e_apply(wide, p, 1)


def test_compose_examples():
    e = EElement.from_rows(QQ, [{0: 2, 3: 1}, {1: -1}, {0: 1, 2: 5}], tail="identity")
    assert compose_e(EElement.identity(), e) == e
    assert compose_e(EElement.zero(), e) == EElement.zero()
    A = Matrix.from_rows(QQ, [[1, 2], [3, 4]])
    B = Matrix.from_rows(QQ, [[0, 1], [-1, 5]])
    ab = compose_e(EElement.from_blocks([A]), EElement.from_blocks([B]))
    assert ab == EElement.from_blocks([A @ B])
    assert compose_e(EElement.from_blocks([A, B]), EElement.from_blocks([B, A])) == EElement.from_blocks([A @ B, B @ A])


def _random_e(data, depth, width, tail):
    rows = [{c: data.draw(small) for c in data.draw(st.sets(st.integers(0, width - 1), max_size=3))} for _ in range(depth)]
    return EElement.from_rows(QQ, rows, tail=tail)


def _random_truncation(data, spec, n):
    terms = [(i, lab, data.draw(small)) for i, s in enumerate(spec) for lab in s.labels(n) if data.draw(st.booleans())]
    return TruncatedElement.from_element(Element.from_terms(spec, n, terms))


SPECS = st.sampled_from(["S2", "E2", "T2", "S1+S2", "L(2,1)"])


@settings(max_examples=40)
@given(SPECS, st.integers(0, 3), st.sampled_from(["none", "identity", "zero"]), st.data())
def test_action_law(spec_text, L, tail, data):
    spec = parse_spec(spec_text)
    e1 = _random_e(data, 4, 4, tail)
    e2 = _random_e(data, 4, 5, tail)
    p = _random_truncation(data, spec, 6)
    n1 = e1.support_bound(L)
    assume(n1 <= 4)
    lifted = TruncatedElement.from_element(e_apply(e2, p, n1))
    assert e_apply(compose_e(e1, e2), p, L) == e_apply(e1, lifted, L)


@settings(max_examples=40)
@given(SPECS, st.integers(0, 3), st.integers(0, 2), st.data())
def test_cut_width_does_not_matter(spec_text, L, extra, data):
    spec = parse_spec(spec_text)
    e = _random_e(data, 3, 4, "none")
    p = _random_truncation(data, spec, 6)
    n = e.support_bound(L)
    assert e_apply(e, p, L) == e_apply(e, p, L, width=min(6, n + extra)) == e_apply(e, p, L, width=6)


@settings(max_examples=30)
@given(SPECS, st.integers(1, 3), st.data())
def test_gl_embedding_round_trip(spec_text, size, data):
    spec = parse_spec(spec_text)
    g = Matrix.from_rows(QQ, [[data.draw(small) for _ in range(size)] for _ in range(size)])
    assume(g.rank() == size)
    cols = [solve_linear(g, [1 if i == j else 0 for i in range(size)]) for j in range(size)]
    g_inv = Matrix.from_columns(QQ, cols, size)
    p = _random_truncation(data, spec, size + 2)
    for L in range(size, size + 3):
        moved = TruncatedElement.from_element(e_apply(EElement.from_gl(g), p, L))
        assert e_apply(EElement.from_gl(g_inv), moved, L) == p.layer(L)
