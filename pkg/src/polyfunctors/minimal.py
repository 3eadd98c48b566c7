"""The minimal dense element q = q^(1) + q^(2) + ... and specialisations onto and from it."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .batch import batch_apply, decode_digits, element_vector, iter_hits
from .errors import BudgetExceeded, NotEnoughBlocks, NotFound
from .fields import Field, PrimeField, QQ
from .functors import Element, FunctorSpec, Sym, apply_map, shift_decompose
from .limits import EElement, TruncatedElement, compose_e, e_apply
from .linalg import EchelonBasis, Matrix, nullspace
from .schur import highest_weight_vector, schur_coordinates


def block_terms(spec: FunctorSpec, offset: int, pure_powers: bool = False) -> list[tuple[int, tuple, object]]:
    """Terms of q^(j) whose first variable is x_offset.

    Summand i occupies the d variables starting at offset + i*d.
    """
    d = spec.degree
    terms = []
    for i, s in enumerate(spec):
        o = offset + i * d
        if s.kind == "sym":
            terms.append((i, (o,) * d if pure_powers else tuple(range(o, o + d)), 1))
        elif s.kind in ("ext", "tensor"):
            terms.append((i, tuple(range(o, o + d)), 1))
        else:
            for label, c in sorted(schur_coordinates(s.shape, highest_weight_vector(s.shape, o)).items()):
                terms.append((i, label, c))
    return terms


def minimal_q(spec: FunctorSpec, blocks: int, pure_powers: bool = False, field: Field = QQ) -> TruncatedElement:
    """Truncation of q at levels j*l*d for j = 1..blocks (level 0 when blocks = 0)."""
    if not spec.is_homogeneous or not spec.is_pure or not len(spec):
        raise ValueError("minimal_q needs a nonzero homogeneous spec of positive degree")
    d, ell = spec.degree, len(spec)
    if blocks == 0:
        return TruncatedElement(spec, [0], [Element.zero(spec, 0, field)])
    levels, layers, terms = [], [], []
    for j in range(blocks):
        terms.extend(block_terms(spec, j * ell * d, pure_powers))
        n = (j + 1) * ell * d
        levels.append(n)
        layers.append(Element.from_terms(spec, n, terms, field))
    return TruncatedElement(spec, levels, layers)


def specializer_to_target(q: TruncatedElement, g: Element) -> Matrix:
    """A matrix phi with P(phi) q_top = g, one block of q per term of g.

    The first variable of a block carries the coefficient, the others map
    onto the remaining letters of the term, and unused blocks map to zero.
    """
    spec = q.spec
    if any(s.kind == "schur" for s in spec):
        raise ValueError("specializer_to_target is constructive for Sym, Ext and Tensor summands")
    if g.spec != spec:
        raise ValueError("target lives in a different functor")
    blocks = 0 if q.top == 0 else len(q.levels)
    if q != minimal_q(spec, blocks, field=q.field):
        raise ValueError("q must be the default minimal element")
    f = q.field
    d, ell = spec.degree, len(spec)
    per_summand = [sorted(g.component(i).items()) for i in range(ell)]
    need = max((len(t) for t in per_summand), default=0)
    if need > blocks:
        raise NotEnoughBlocks(f"target has {need} terms in one summand but q has only {blocks} blocks")
    cols = [[f.zero] * g.n for _ in range(q.top)]
    for i, terms in enumerate(per_summand):
        for j, (label, c) in enumerate(terms):
            o = (j * ell + i) * d
            cols[o][label[0]] = c
            for s in range(1, d):
                cols[o + s][label[s]] = f.one
    return Matrix.from_columns(f, cols, g.n)


def orbit_image_full_check(q: TruncatedElement, m: int, mode: str = "exhaustive", budget: int = 10_000_000,
                           seed: int = 0, samples: int = 200, workers: int = 1) -> bool | None:
    """Is {P(phi) q_top : phi in Hom(K^n, K^m)} all of P(K^m)?

    ``exhaustive`` enumerates every phi over F_p and answers True or False.
    ``span`` only checks that sampled images span each summand; it returns
    True (a proof of spanning) or None (inconclusive).
    """
    spec = q.spec
    if m == 0:
        return True
    top = q.layers[-1]
    n = top.n
    if mode == "span":
        return _span_check(top, m, seed, samples)
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")
    f = q.field
    if not isinstance(f, PrimeField):
        raise ValueError("exhaustive orbit checks need a prime field")
    p = f.p
    total = p ** (m * n)
    if total > budget:
        raise BudgetExceeded(f"{total} maps exceed the budget {budget}")
    D = spec.dim(m)
    size = p ** D
    if size > total:
        return False
    seen = np.zeros(size, dtype=bool)
    covered = 0
    weights = p ** np.arange(D, dtype=np.int64)
    chunk = 1 << 14
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
        mats = decode_digits(codes, p, m * n).reshape(-1, m, n)
        img = batch_apply(top, mats) @ weights
        seen[img] = True
        covered = int(seen.sum())
        if covered == size:
            return True
    return False


def _span_check(top: Element, m: int, seed: int, samples: int) -> bool | None:
    rng = random.Random(seed)
    f = top.field
    spec = top.spec
    bases = [EchelonBasis(f) for _ in spec]
    dims = [s.dim(m) for s in spec]
    for _ in range(samples):
        if all(b.dim == dim for b, dim in zip(bases, dims)):
            return True
        if isinstance(f, PrimeField):
            rows = [[rng.randrange(f.p) for _ in range(top.n)] for _ in range(m)]
        else:
            rows = [[rng.randint(-3, 3) for _ in range(top.n)] for _ in range(m)]
        img = apply_map(Matrix.from_rows(f, rows, top.n), top)
        for i, b in enumerate(bases):
            if b.dim < dims[i]:
                b.add(img.component(i))
    return True if all(b.dim == dim for b, dim in zip(bases, dims)) else None


@dataclass(frozen=True)
class SpecializationWitness:
    source: TruncatedElement
    target: TruncatedElement
    e: EElement
    verified_levels: tuple[int, ...]

    def verify(self) -> bool:
        """Re-run e_apply at every recorded level and compare exactly."""
        return all(e_apply(self.e, self.source, L) == self.target.layer(L) for L in self.verified_levels)


def _sub_element(e: Element, indices: Sequence[int], spec: FunctorSpec) -> Element:
    pos = {old: new for new, old in enumerate(indices)}
    return Element(spec, e.n, {(pos[i], lab): v for (i, lab), v in e.coords.items() if i in pos}, e.field, check=False)


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, amount: int):
        self.used += amount
        if self.used > self.limit:
            raise NotFound(f"search budget of {self.limit} candidates exhausted (not a disproof)")


def _embed(phi: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Batch of block-diagonal matrices diag(phi, psi_b)."""
    B, a, w = psi.shape
    r, c = phi.shape
    out = np.zeros((B, r + a, c + w), dtype=np.int64)
    out[:, :r, :c] = phi
    out[:, r:, c:] = psi
    return out


def _round_candidates(p: TruncatedElement, phi: np.ndarray, budget: _Budget, workers: int) -> Iterator[np.ndarray]:
    """Every block psi extending phi by one round, narrowest first, then in code order."""
    spec = p.spec
    f = p.field
    P = f.p
    d, ell = spec.degree, len(spec)
    width = ell * d
    q1 = element_vector(minimal_q(spec, 1, field=f).layers[-1])
    m_prev = phi.shape[1]
    for w in range(width, p.top - m_prev + 1):
        m = m_prev + w
        parts = shift_decompose(p.layer(m), m_prev)
        top = parts[d]
        local = Element(spec, w, {(i, tuple(a - m_prev for a in lab)): v for (i, lab), v in top.coords.items()}, f, check=False)
        mixed = [parts[j] for j in range(1, d) if not parts[j].is_zero()]
        linear = parts[1] if d > 1 and not parts[1].is_zero() else None

        def ok(psi_batch):
            budget.spend(len(psi_batch))
            mask = np.all(batch_apply(local, psi_batch) == q1[None, :], axis=1)
            if mixed and mask.any():
                full = _embed(phi, psi_batch)
                for r in mixed:
                    mask &= np.all(batch_apply(r, full) == 0, axis=1)
            return mask

        unknowns = width * w
        # the part of degree one in the new variables is linear in psi, so solve it first
        if linear is not None:
            units = np.zeros((unknowns, width, w), dtype=np.int64)
            for u in range(unknowns):
                units[u].flat[u] = 1
            C = batch_apply(linear, _embed(phi, units)).T % P
            basis = nullspace(Matrix.from_rows(f, C.tolist(), unknowns))
        else:
            basis = [tuple(int(u == v) for v in range(unknowns)) for u in range(unknowns)]
        N = np.array(basis, dtype=np.int64).reshape(len(basis), unknowns)

        eye = np.zeros((1, width, w), dtype=np.int64)
        eye[0, :, :width] = np.eye(width, dtype=np.int64)
        eye_ok = bool(ok(eye)[0])
        if eye_ok:
            yield eye[0]
        s = len(basis)

        def predicate(codes):
            ys = decode_digits(codes, P, s)
            return ok((ys @ N % P).reshape(-1, width, w))

        for hit in iter_hits(P ** s, predicate, workers=workers):
            ys = decode_digits(np.array([hit], dtype=np.int64), P, s)
            psi = (ys @ N % P).reshape(width, w)
            if not (eye_ok and np.array_equal(psi, eye[0])):
                yield psi


def _search_rounds(p: TruncatedElement, phi: np.ndarray, rounds: int, budget: _Budget, workers: int) -> list[np.ndarray] | None:
    """Blocks psi_1..psi_rounds with P(diag(phi, psi_1, ..., psi_i)) p = phi-part + q^(1) + ... + q^(i).

    Depth-first: a candidate for one round is kept only if the later rounds
    still fit inside the stored truncation.  None when nothing fits.
    """
    if rounds == 0:
        return []
    for psi in _round_candidates(p, phi, budget, workers):
        rest = _search_rounds(p, _embed(phi, psi[None])[0], rounds - 1, budget, workers)
        if rest is not None:
            return [psi] + rest
    return None


def _no_fit(p: TruncatedElement) -> NotFound:
    return NotFound(f"no block found within the stored truncation (level {p.top}); not a disproof")


def _check_search_input(p: TruncatedElement, spec: FunctorSpec):
    if not isinstance(p.field, PrimeField):
        raise ValueError("the block search runs over a prime field")
    if any(s.kind == "schur" for s in spec):
        raise ValueError("the block search supports Sym, Ext and Tensor summands")
    if not spec.is_homogeneous or spec.degree < 1:
        raise ValueError("the block search needs a homogeneous spec")
    if p.field.p <= spec.degree:
        raise ValueError("the block search requires p > d")


def _to_matrix(f: Field, a: np.ndarray) -> Matrix:
    return Matrix.from_rows(f, a.tolist(), a.shape[1])


def minimal_specializer_search(p: TruncatedElement, blocks: int, budget: int = 5_000_000, workers: int = 1) -> SpecializationWitness:
    """Search a block-diagonal e in E with P(e) p = q^(1) + ... + q^(blocks).

    Each block psi_i is found by exhaustive search over F_p after the part of
    degree one in the new variables has been cut down to a linear subspace.
    """
    spec = p.spec
    _check_search_input(p, spec)
    f = p.field
    target = minimal_q(spec, blocks, field=f)
    if blocks == 0:
        e = EElement.zero(f)
        return SpecializationWitness(p, target, e, (0,))
    psis = _search_rounds(p, np.zeros((0, 0), dtype=np.int64), blocks, _Budget(budget), workers)
    if psis is None:
        raise _no_fit(p)
    e = EElement.from_blocks([_to_matrix(f, psi) for psi in psis], tail="none")
    w = SpecializationWitness(p, target, e, tuple(target.levels))
    if not w.verify():
        raise AssertionError("assembled block witness failed verification")
    return w


def linear_prefix_target(spec: FunctorSpec, k: int, blocks: int, field: Field) -> TruncatedElement:
    """(x_1, ..., x_k, q) with q written in the variables after x_k."""
    full = FunctorSpec([Sym(1)] * k) + spec
    q = minimal_q(spec, blocks, field=field)
    d, ell = spec.degree, len(spec)
    levels, layers = [], []
    for j in range(blocks + 1):
        n = k + j * ell * d
        terms = [(i, (i,), 1) for i in range(k)]
        if j:
            terms += [(k + i, tuple(a + k for a in lab), c) for (i, lab), c in q.layer(j * ell * d).coords.items()]
        levels.append(n)
        layers.append(Element.from_terms(full, n, terms, field))
    if levels[0] == 0:
        levels, layers = levels[1:], layers[1:]
    return TruncatedElement(full, levels, layers)


def linear_normalizer(source: TruncatedElement, k: int) -> EElement:
    """An element of E moving k independent linear forms onto x_1..x_k.

    It is phi_{-B} composed with a finite GL element that brings a pivot
    block of the forms to the identity.
    """
    f = source.field
    L = source.top
    top = source.layers[-1]
    A = [[f.zero] * k for _ in range(L)]
    for i in range(k):
        for (lab,), v in top.component(i).items():
            A[lab][i] = v
    At = Matrix.from_rows(f, [[A[r][i] for r in range(L)] for i in range(k)], L)
    _, pivots = At.rref()
    if len(pivots) < k:
        raise ValueError("the linear forms are dependent at the stored level")
    order = list(pivots) + [r for r in range(L) if r not in pivots]
    perm = Matrix.from_rows(f, [[1 if c == order[r] else 0 for c in range(L)] for r in range(L)], L)
    M = Matrix.from_rows(f, [A[r] for r in pivots], k)
    Minv = _inverse(M)
    G = Matrix.from_rows(f, [list(Minv.rows[r]) + [0] * (L - k) if r < k else [1 if c == r else 0 for c in range(L)] for r in range(L)], L)
    g = G @ perm
    B = g @ Matrix.from_rows(f, A, k)
    rows = []
    for r in range(L):
        row = {r: f.one}
        if r >= k:
            for c in range(k):
                if B.rows[r][c]:
                    row[c] = f.reduce(-B.rows[r][c])
        rows.append(row)
    phi_minus_b = EElement.from_rows(f, rows, tail="none")
    return compose_e(phi_minus_b, EElement.from_gl(g))


def _inverse(M: Matrix) -> Matrix:
    f = M.field
    n = M.nrows
    aug = Matrix.from_rows(f, [list(M.rows[i]) + [1 if i == j else 0 for j in range(n)] for i in range(n)], 2 * n)
    R, piv = aug.rref()
    if piv[:n] != tuple(range(n)):
        raise ValueError("matrix is singular")
    return Matrix.from_rows(f, [r[n:] for r in R.rows], n)


def _prefix_candidates(p_part: TruncatedElement, k: int, budget: _Budget, workers: int) -> Iterator[np.ndarray]:
    """Blocks [I_k | psi_0] with p vanishing under them, narrowest first."""
    P = p_part.field.p
    for w in range(0, p_part.top - k + 1):
        pm = p_part.layer(k + w)

        def predicate(codes, w=w, pm=pm):
            budget.spend(len(codes))
            B = len(codes)
            ys = decode_digits(codes, P, k * w).reshape(B, k, w)
            mats = np.concatenate([np.broadcast_to(np.eye(k, dtype=np.int64), (B, k, k)), ys], axis=2)
            return np.all(batch_apply(pm, mats) == 0, axis=1)

        for hit in iter_hits(P ** (k * w), predicate, workers=workers):
            ys = decode_digits(np.array([hit], dtype=np.int64), P, k * w).reshape(k, w)
            yield np.concatenate([np.eye(k, dtype=np.int64), ys], axis=1)


def prefixed_specializer_search(source: TruncatedElement, k: int, blocks: int, budget: int = 5_000_000,
                                workers: int = 1) -> SpecializationWitness:
    """Specialise (l_1..l_k, p) to (x_1..x_k, q) for spec (Sym1)^k + P.

    The forms are first normalised to x_1..x_k, then a first block
    [I_k | psi_0] kills p on the prefix, and the remaining blocks are found
    as in ``minimal_specializer_search``.
    """
    full = source.spec
    if len(full) <= k or any(full[i] != Sym(1) for i in range(k)):
        raise ValueError("the first k summands must be Sym1")
    spec = FunctorSpec(full.summands[k:])
    _check_search_input(source, spec)
    f = source.field
    L = source.top
    normalizer = linear_normalizer(source, k)
    normalized = TruncatedElement(full, [L], [e_apply(normalizer, source, L)])
    p_part = TruncatedElement(spec, [L], [_sub_element(normalized.layers[0], range(k, len(full)), spec)])
    bud = _Budget(budget)
    found = None
    for phi0 in _prefix_candidates(p_part, k, bud, workers):
        psis = _search_rounds(p_part, phi0, blocks, bud, workers)
        if psis is not None:
            found = phi0, psis
            break
    if found is None:
        raise _no_fit(source)
    phi0, psis = found
    search_e = EElement.from_blocks([_to_matrix(f, phi0)] + [_to_matrix(f, x) for x in psis], tail="none")
    e = compose_e(search_e, normalizer)
    target = linear_prefix_target(spec, k, blocks, f)
    w = SpecializationWitness(source, target, e, tuple(target.levels))
    if not w.verify():
        raise AssertionError("assembled prefix witness failed verification")
    return w
