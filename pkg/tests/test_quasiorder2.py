import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import rank_q
from polyfunctors.errors import InsufficientData
from polyfunctors.fields import GF, QQ
from polyfunctors.functors import Element, parse_spec
from polyfunctors.limits import TruncatedElement, e_apply
from polyfunctors.quasiorder2 import (canonical_q, classify_deg2, deg2_specializer, mixed_index, mixed_spec, q_level)

small = st.fractions(min_value=-4, max_value=4, max_denominator=3)


def _el(spec, n, terms, field=QQ):
    return Element.from_terms(parse_spec(spec), n, terms, field)


def test_classify_examples():
    top = classify_deg2(_el("S1+S1", 3, [(0, (0,), 1), (0, (2,), 2), (1, (1,), -1)]))
    assert top.pair == "top" and top.linear_rank == 2
    assert classify_deg2(_el("S1+S1", 2, [(0, (0,), 1), (1, (1,), 1)])) == \
        classify_deg2(_el("S1+S1", 2, [(0, (0,), 2), (1, (0,), 1), (1, (1,), 1)]))
    u = [(0, Fraction(1)), (2, Fraction(-3))]
    point = classify_deg2(_el("S1+S1", 3, [(0, (a,), 2 * c) for a, c in u] + [(1, (a,), 3 * c) for a, c in u]))
    assert point.pair == (1, Fraction(3, 2))
    assert classify_deg2(Element.zero(parse_spec("S1+S1"), 2)).pair == "zero"
    rank5 = classify_deg2(_el("S2", 6, [(0, (i, i), i + 1) for i in range(5)]))
    assert rank5.sym_ranks == (5,) and str(rank5) == "S2 rank 5 (at level 6)"
    with pytest.raises(ValueError):
        classify_deg2(_el("S3", 2, []))


def _stream(data, kind, L):
    strict = kind == "alternating"
    spec = "S2" if kind == "quadric" else "E2"
    terms = [(0, (s, r), data.draw(small)) for s in range(L) for r in range(s + strict, L)]
    return _el(spec, L, terms)


def test_specializer_examples():
    for kind, spec in (("quadric", "S2"), ("alternating", "E2")):
        zero = Element.zero(parse_spec(spec), 6)
        assert e_apply(deg2_specializer(zero, kind), canonical_q(kind, 6), 6).is_zero()
    q8 = canonical_q("quadric", 8).layer(8)
    assert e_apply(deg2_specializer(q8, "quadric"), canonical_q("quadric", 8), 8) == q8
    with pytest.raises(InsufficientData):
        deg2_specializer(q8, "quadric", 10)


@settings(max_examples=30)
@given(st.sampled_from(["quadric", "alternating"]), st.integers(1, 8), st.data())
def test_specializer_reproduces_and_is_banded(kind, L, data):
    p = _stream(data, kind, L)
    e = deg2_specializer(p, kind)
    assert e_apply(e, canonical_q(kind, L), L) == p
    assert e.support_bound(L) <= q_level(kind, L)
    assert e.max_bandwidth() <= 2 * L


@settings(max_examples=30)
@given(st.sampled_from(["quadric", "alternating"]), st.integers(1, 4), st.data())
def test_round_trip_preserves_class(kind, r, data):
    # a finite-rank form in 2r variables, rebuilt from q by its specialiser
    L = 2 * r
    spec = "S2" if kind == "quadric" else "E2"
    vecs = [[data.draw(small) for _ in range(L)] for _ in range(2 * r)]
    coords = {}
    for t in range(r):
        u, v = vecs[2 * t], vecs[2 * t + 1]
        for a in range(L):
            for b in range(L):
                if kind == "quadric" and a <= b:
                    key = (a, b)
                    coords[key] = coords.get(key, 0) + (u[a] * v[b] + (u[b] * v[a] if a != b else 0))
                elif kind == "alternating" and a < b:
                    coords[(a, b)] = coords.get((a, b), 0) + u[a] * v[b] - u[b] * v[a]
    p = _el(spec, L, [(0, k, c) for k, c in coords.items()])
    rebuilt = e_apply(deg2_specializer(p, kind), canonical_q(kind, L), L)
    assert classify_deg2(rebuilt) == classify_deg2(p)
    assert classify_deg2(TruncatedElement.from_element(p)) == classify_deg2(p)


def test_alternating_ranks_even_and_match_oracle():
    rng = random.Random(5)
    for _ in range(30):
        L = rng.randint(1, 6)
        terms = [(0, (s, r), rng.randint(-2, 2)) for s in range(L) for r in range(s + 1, L)]
        p = _el("E2", L, terms)
        (rk,) = classify_deg2(p).alt_ranks
        mat = [[0] * L for _ in range(L)]
        for _, (s, r), c in terms:
            mat[s][r], mat[r][s] = c, -c
        assert rk % 2 == 0 and rk == rank_q(mat)


def test_quadrics_need_odd_characteristic():
    with pytest.raises(ValueError):
        classify_deg2(_el("S2", 2, [(0, (0, 1), 1)], GF(2)))


def test_mixed_interleaving_is_a_bijection():
    for a, b, c in [(0, 1, 1), (1, 2, 1), (2, 1, 2), (3, 0, 2), (1, 3, 0)]:
        seen = {}
        for i in range(11):
            for kind, count in (("sym", b), ("ext", c)):
                for t in range(count):
                    for j in (0, 1):
                        seen[(kind, t, i, j)] = mixed_index(a, b, c, kind, t, i, j)
        values = sorted(seen.values())
        assert values == list(range(a, a + 2 * 11 * (b + c)))


@pytest.mark.parametrize("abc", [(1, 1, 0), (2, 1, 1), (0, 1, 2), (1, 0, 1)])
def test_mixed_specializer(abc):
    a, b, c = abc
    rng = random.Random(sum(abc))
    L = 5
    spec = mixed_spec(a, b, c)
    terms = []
    for t in range(a):
        terms += [(t, (r,), Fraction(rng.randint(-3, 3))) for r in range(L)]
    for t in range(b):
        terms += [(a + t, (s, r), Fraction(rng.randint(-3, 3), 2)) for s in range(L) for r in range(s, L)]
    for t in range(c):
        terms += [(a + b + t, (s, r), Fraction(rng.randint(-3, 3))) for s in range(L) for r in range(s + 1, L)]
    p = Element.from_terms(spec, L, terms)
    e = deg2_specializer(p, "mixed", L)
    q = canonical_q("mixed", L, profile_abc=abc)
    assert e.support_bound(L) <= q_level("mixed", L, abc) <= q.top
    assert e_apply(e, q, L) == p
