"""Acceptance suite: one test per criterion, summarised as PASS/FAIL lines at the end of the run."""

import json
import random
import time
from fractions import Fraction
from math import ceil
from pathlib import Path

import pytest

from oracles import count_profile_solutions, rank_q
from polyfunctors.fields import GF, QQ
from polyfunctors.functors import (Element, Ext, FunctorSpec, SchurOf, Sym, Tensor, apply_map, derivative_spec, parse_spec,
                                  shift_component_dim)
from polyfunctors.limits import EElement, TruncatedElement, coherence_check, e_apply
from polyfunctors.linalg import Matrix
from polyfunctors.maximal import maximal_r, maximal_specializer
from polyfunctors.minimal import minimal_q, minimal_specializer_search, orbit_image_full_check, specializer_to_target
from polyfunctors.omega import omega_check
from polyfunctors.partitions import lr_coefficient, partitions_of
from polyfunctors.quasiorder2 import banded_layout, canonical_q, deg2_specializer, instantiate_layout
from polyfunctors.strength import (element_code, image_strength_bound, reducible_codes, strength_deg2,
                                   strength_table, strength_unipotent, unipotent_matrix)

GOLDEN = Path(__file__).parent / "golden"


def _rand_q(rng, lo=-5, hi=5):
    return Fraction(rng.randint(lo, hi), rng.randint(1, 4))


def _random_low_rank_symmetric(rng, n):
    r = rng.randint(0, n)
    B = [[_rand_q(rng) for _ in range(n)] for _ in range(r)]
    D = [_rand_q(rng, -3, 3) or Fraction(1) for _ in range(r)]
    return [[sum(B[k][i] * D[k] * B[k][j] for k in range(r)) for j in range(n)] for i in range(n)]


def _random_low_rank_alternating(rng, n):
    k = rng.randint(0, n // 2)
    A = [[Fraction(0)] * n for _ in range(n)]
    for _ in range(k):
        u = [_rand_q(rng) for _ in range(n)]
        v = [_rand_q(rng) for _ in range(n)]
        for i in range(n):
            for j in range(n):
                A[i][j] += u[i] * v[j] - v[i] * u[j]
    return A


@pytest.mark.criterion(1, "degree-2 strength formulas with certificates")
def test_criterion_01_degree2_strength():
    rng = random.Random(1)
    start = time.perf_counter()
    for _ in range(200):
        n = rng.randint(1, 8)
        rows = _random_low_rank_symmetric(rng, n)
        A = Matrix.from_rows(QQ, rows, n)
        res = strength_deg2(A, "sym")
        assert res.value == ceil(rank_q(rows) / 2)
        assert res.certificate.claimed == res.value and res.certificate.verify(A)

        rows = _random_low_rank_alternating(rng, n)
        W = Matrix.from_rows(QQ, rows, n)
        res = strength_deg2(W, "alt")
        assert res.value == rank_q(rows) // 2
        assert res.certificate.claimed == res.value and res.certificate.verify(W)
    elapsed = time.perf_counter() - start
    assert elapsed < 5, f"took {elapsed:.2f}s"


@pytest.mark.criterion(2, "unipotent 2x2 family")
def test_criterion_02_unipotent():
    for x in (2, -2):
        assert strength_unipotent(x).value == 2
    for x in (0, 1, Fraction(5, 2), -3):
        r = strength_unipotent(x)
        assert r.value == 1
        assert r.certificate.verify(unipotent_matrix(x))
    r = strength_unipotent(Fraction(5, 2))
    assert (r.mu, r.a, r.b) == (2, Fraction(4, 3), Fraction(-1, 3))
    assert r.certificate.evaluate() == Matrix.from_rows(QQ, [[1, Fraction(5, 2)], [0, 1]])


@pytest.mark.criterion(3, "F_5 cubic strength table in two variables")
def test_criterion_03_oracle_table():
    start = time.perf_counter()
    p, n, d = 5, 2, 3
    table = strength_table(p, n, d)
    assert len(table) == 625 and (table >= 0).all()
    R = set(int(c) for c in reducible_codes(p, n, d))

    def add(a, b):
        da = [(a // p ** i) % p for i in range(4)]
        db = [(b // p ** i) % p for i in range(4)]
        return sum(((x + y) % p) * p ** i for i, (x, y) in enumerate(zip(da, db)))

    # the levels {strength <= k} grow and each is the previous one plus one product
    level = {0}
    for k in range(1, int(table.max()) + 1):
        nxt = level | {add(a, b) for a in level for b in R}
        assert nxt == {c for c in range(625) if table[c] <= k}
        assert level <= nxt
        level = nxt
    assert all(table[c] == 1 for c in R if c)
    spec = FunctorSpec([Sym(3)])
    cubic = Element.from_terms(spec, 2, [(0, (0, 0, 0), 1), (0, (0, 1, 1), 1), (0, (1, 1, 1), 1)], GF(5))
    assert all((t ** 3 + t + 1) % 5 for t in range(5))
    assert table[element_code(cubic)] == 2
    elapsed = time.perf_counter() - start
    assert elapsed < 60, f"took {elapsed:.2f}s"


@pytest.mark.criterion(4, "LR coefficients into a single row")
def test_criterion_04_lr_single_row():
    for d in range(1, 7):
        for a in range(0, d + 1):
            for mu in partitions_of(a):
                for nu in partitions_of(d - a):
                    expected = 1 if len(mu) <= 1 and len(nu) <= 1 else 0
                    assert lr_coefficient((d,), mu, nu) == expected, (d, mu, nu)


@pytest.mark.criterion(5, "derivative dimension matches the degree-1 shift component")
def test_criterion_05_derivative_vs_shift():
    singles = [Sym(d) for d in range(1, 5)] + [Ext(d) for d in range(1, 5)] + [SchurOf((2, 1)), SchurOf((2, 2))]
    specs = [FunctorSpec([s]) for s in singles]
    specs += [FunctorSpec([a, b]) for a in singles for b in singles]
    for spec in specs:
        deriv = derivative_spec(spec)
        for n in range(1, 4):
            for k in range(1, 4):
                assert shift_component_dim(spec, n, k, 1) == deriv.dim(n) * k, (str(spec), n, k)


@pytest.mark.criterion(6, "E action does not depend on the cut width")
def test_criterion_06_e_action_well_defined():
    rng = random.Random(6)
    choices = ["S2", "E2", "T2", "S3", "S1+E2", "L(2,1)"]
    for trial in range(100):
        spec = parse_spec(choices[trial % len(choices)])
        L = rng.randint(1, 3)
        rows = [{c: _rand_q(rng) for c in rng.sample(range(L + 2), rng.randint(0, 3))} for _ in range(L)]
        e = EElement.from_rows(QQ, rows, tail="none")
        n = e.support_bound(L)
        top = n + rng.randint(1, 2)
        terms = []
        for idx, s in enumerate(spec):
            labs = list(s.labels(top))
            for lab in rng.sample(labs, min(len(labs), 4)):
                terms.append((idx, lab, _rand_q(rng)))
        p = TruncatedElement.from_element(Element.from_terms(spec, top, terms))
        assert e_apply(e, p, L) == e_apply(e, p, L, width=top)
        if n < top - 1:
            assert e_apply(e, p, L, width=n + 1) == e_apply(e, p, L, width=top)


@pytest.mark.criterion(7, "minimal q: F_2 orbit image and exact specialisers over Q")
def test_criterion_07_minimal_q():
    q2 = minimal_q(FunctorSpec([Sym(2)]), 4, field=GF(2))
    assert q2.top == 8
    start = time.perf_counter()
    assert orbit_image_full_check(q2, 2, "exhaustive") is True
    assert time.perf_counter() - start < 10

    rng = random.Random(7)
    for spec_text, m in (("S3", 2), ("E2", 3)):
        spec = parse_spec(spec_text)
        labels = list(spec[0].labels(m))
        q = minimal_q(spec, len(labels))
        for _ in range(100):
            terms = [(0, lab, _rand_q(rng)) for lab in rng.sample(labels, rng.randint(0, len(labels)))]
            g = Element.from_terms(spec, m, terms)
            phi = specializer_to_target(q, g)
            assert apply_map(phi, q.layers[-1]) == g


def _full_rank_quadric(seed, L=8):
    rng = random.Random(seed)
    F = GF(5)
    spec = FunctorSpec([Sym(2)])
    while True:
        terms = [(0, (i, j), rng.randrange(5)) for i in range(L) for j in range(i, L)]
        e = Element.from_terms(spec, L, terms, F)
        A = [[0] * L for _ in range(L)]
        for (_, (i, j)), v in e.coords.items():
            if i == j:
                A[i][i] = v
            else:
                A[i][j] = A[j][i] = v * 3 % 5
        if Matrix.from_rows(F, A, L).rank() == L:
            return e


@pytest.mark.criterion(8, "block search over F_5 for full-rank quadrics")
def test_criterion_08_block_search():
    start = time.perf_counter()
    target = minimal_q(FunctorSpec([Sym(2)]), 2, field=GF(5))
    for seed in range(10):
        p = TruncatedElement.from_element(_full_rank_quadric(seed))
        w = minimal_specializer_search(p, 2)
        assert w.verify()
        assert e_apply(w.e, p, 4) == target.layer(4)
    elapsed = time.perf_counter() - start
    assert elapsed < 120, f"took {elapsed:.2f}s"


@pytest.mark.criterion(9, "banded specialisers for quadrics and alternating forms")
def test_criterion_09_banded():
    rng = random.Random(9)
    L = 12
    for kind, spec_text, strict in (("quadric", "S2", 0), ("alternating", "E2", 1)):
        golden = json.loads((GOLDEN / f"{kind}_layout.json").read_text())
        assert banded_layout(kind, golden["level"]) == golden["layout"]
        layout = banded_layout(kind, L)
        q = canonical_q(kind, L)
        for _ in range(50):
            terms = [(0, (s, r), _rand_q(rng)) for s in range(L) for r in range(s + strict, L)]
            p = Element.from_terms(parse_spec(spec_text), L, terms)
            e = deg2_specializer(p, kind, L)
            assert e_apply(e, q, L) == p
            assert e.block(L, 2 * L).rows == tuple(tuple(r) for r in instantiate_layout(layout, p))
            small = e.block(golden["level"], 2 * golden["level"]).rows
            assert small == tuple(tuple(r) for r in instantiate_layout(golden["layout"], p))


@pytest.mark.criterion(10, "maximal tensor r_d and its specialisations")
def test_criterion_10_maximal():
    r1 = maximal_r(1, 1)
    assert r1.layers[-1] == Element.from_terms(FunctorSpec([Tensor(1)]), 1, [(0, (0,), 1)])
    r = maximal_r(2, 4)
    rng = random.Random(10)
    spec = FunctorSpec([Tensor(2)])
    for _ in range(50):
        terms = [(0, (a, b), _rand_q(rng)) for a in range(4) for b in range(4)]
        p = TruncatedElement.from_element(Element.from_terms(spec, 4, terms))
        w = maximal_specializer(p, r)
        assert w.verify()
        assert e_apply(w.e, r, 4) == p.layers[-1]
    for d in range(1, 4):
        for depth in range(1, 4):
            assert coherence_check(maximal_r(d, depth))


@pytest.mark.criterion(11, "Omega map is surjective")
def test_criterion_11_omega():
    for kind in (Tensor, Sym, Ext):
        for d in range(1, 4):
            for n in range(1, 4):
                (rep,) = omega_check(kind(d), n)
                assert rep.surjective and rep.rank == kind(d).dim(n), (str(kind(d)), n)


@pytest.mark.criterion(12, "strength bound count for images")
def test_criterion_12_image_bound():
    assert image_strength_bound(parse_spec("S1+S2"), 3) == 2
    rng = random.Random(12)
    for _ in range(20):
        d = rng.randint(2, 9)
        degrees = [rng.randint(1, d - 1) for _ in range(rng.randint(1, 4))]
        spec = FunctorSpec([Sym(g) for g in degrees])
        assert image_strength_bound(spec, d) == count_profile_solutions(degrees, d), (degrees, d)
