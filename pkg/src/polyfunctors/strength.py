"""Strength of tensors: exact formulas in degree two, brute force over F_p.

A degree-two tensor A in V (x) V is stored as a square matrix, row i holding
the coefficients of e_i (x) e_j.  A certificate is a list of bilinear terms
a*u(x)v + b*v(x)u whose sum is A.  Over Q a symmetric matrix of odd rank
cannot always be split into rational products, so term entries may live in
a quadratic extension Q(sqrt t); each term is still rational once expanded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded
from .fields import Field, PrimeField, QQ
from .functors import Element, FunctorSpec, Sym
from .linalg import Matrix, EchelonBasis, rank, rank_factorization
from .quadratic import Quad, field_sqrt

COMBINE_WEIGHTS = {
    "product": (Fraction(1, 2), Fraction(1, 2)),
    "wedge": (1, -1),
    "tensor": (1, 0),
}


@dataclass(frozen=True)
class BilinearTerm:
    """weights[0] * u (x) v + weights[1] * v (x) u."""

    u: tuple
    v: tuple
    combine: str
    weights: tuple

    def matrix(self, field: Field) -> list[list]:
        a, b = self.weights
        n = len(self.u)
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                x = a * self.u[i] * self.v[j] + b * self.v[i] * self.u[j]
                if isinstance(x, Quad):
                    x = x.rational()
                row.append(field(x))
            out.append(row)
        return out


def make_term(u, v, combine: str, weights=None, field: Field = QQ) -> BilinearTerm:
    if weights is None:
        weights = tuple(field(w) for w in COMBINE_WEIGHTS[combine])
    return BilinearTerm(tuple(u), tuple(v), combine, tuple(weights))


@dataclass(frozen=True)
class StrengthCertificate:
    field: Field
    n: int
    terms: tuple[BilinearTerm, ...]

    @property
    def claimed(self) -> int:
        return len(self.terms)

    def evaluate(self) -> Matrix:
        f = self.field
        acc = [[f.zero] * self.n for _ in range(self.n)]
        for t in self.terms:
            m = t.matrix(f)
            for i in range(self.n):
                for j in range(self.n):
                    acc[i][j] = f.reduce(acc[i][j] + m[i][j])
        return Matrix.from_rows(f, acc, self.n)

    def verify(self, target: Matrix) -> bool:
        """True when the terms expand exactly to target."""
        try:
            return self.evaluate() == target
        except ValueError:
            return False


@dataclass(frozen=True)
class StrengthResult:
    lower: int
    upper: int
    certificate: StrengthCertificate | None

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self) -> int | None:
        return self.lower if self.exact else None


def _outer_sub(A: list[list], f: Field, c, x: Sequence, y: Sequence):
    """A -= c * (x y^T) in place."""
    for i, xi in enumerate(x):
        if xi:
            row = A[i]
            for j, yj in enumerate(y):
                if yj:
                    row[j] = f.reduce(row[j] - c * xi * yj)


def _sym_terms(A: Matrix) -> list[BilinearTerm]:
    f = A.field
    if f.characteristic == 2:
        raise ValueError("symmetric strength needs characteristic different from 2")
    n = A.nrows
    W = [list(r) for r in A.rows]
    squares = []
    terms = []
    while True:
        i = next((i for i in range(n) if W[i][i] != 0), None)
        if i is not None:
            c = f.inv(W[i][i])
            row = list(W[i])
            squares.append((c, row))
            _outer_sub(W, f, c, row, row)
            continue
        ij = next(((i, j) for i in range(n) for j in range(i + 1, n) if W[i][j] != 0), None)
        if ij is None:
            break
        i, j = ij
        a = W[i][j]
        ri, rj = list(W[i]), list(W[j])
        ainv = f.inv(a)
        terms.append(make_term([f.reduce(2 * ainv * x) for x in ri], rj, "product", field=f))
        _outer_sub(W, f, ainv, ri, rj)
        _outer_sub(W, f, ainv, rj, ri)
    return terms + _pair_squares(squares, f)


def _pair_squares(squares: list, f: Field) -> list[BilinearTerm]:
    """Turn c1*l1^2 + c2*l2^2 into c1*(l1 + s l2)(l1 - s l2) with s^2 = -c2/c1."""
    out = []
    unused = list(range(len(squares)))
    while unused:
        i = unused.pop(0)
        c1, l1 = squares[i]
        if not unused:
            out.append(make_term([f.reduce(c1 * x) for x in l1], l1, "product", field=f))
            break
        ratio = lambda j: f.reduce(-squares[j][0] * f.inv(c1))
        j = next((j for j in unused if field_sqrt(f, ratio(j)) is not None), unused[0])
        unused.remove(j)
        c2, l2 = squares[j]
        t = ratio(j)
        s = field_sqrt(f, t)
        if s is None:
            s = Quad(f.zero, f.one, t, f)
            u = [c1 * (Quad.lift(x, t, f) + s * y) for x, y in zip(l1, l2)]
            v = [Quad.lift(x, t, f) - s * y for x, y in zip(l1, l2)]
            weights = tuple(Quad.lift(w, t, f) for w in COMBINE_WEIGHTS["product"])
            out.append(BilinearTerm(tuple(u), tuple(v), "product", weights))
        else:
            u = [f.reduce(c1 * (x + s * y)) for x, y in zip(l1, l2)]
            v = [f.reduce(x - s * y) for x, y in zip(l1, l2)]
            out.append(make_term(u, v, "product", field=f))
    return out


def _alt_terms(A: Matrix) -> list[BilinearTerm]:
    f = A.field
    n = A.nrows
    W = [list(r) for r in A.rows]
    terms = []
    while True:
        ij = next(((i, j) for i in range(n) for j in range(i + 1, n) if W[i][j] != 0), None)
        if ij is None:
            break
        i, j = ij
        ainv = f.inv(W[i][j])
        ri, rj = list(W[i]), list(W[j])
        terms.append(make_term([f.reduce(ainv * x) for x in ri], rj, "wedge", field=f))
        _outer_sub(W, f, ainv, ri, rj)
        _outer_sub(W, f, -ainv, rj, ri)
    return terms


def _ceil_half(r: int) -> int:
    return (r + 1) // 2


def strength_deg2(a: Matrix, mode: str = "sym") -> StrengthResult:
    """Strength of a degree-two tensor given as a square matrix.

    ``sym`` and ``alt`` are exact with a certificate; ``full`` returns the
    rank bounds together with a certificate attaining the upper bound.
    """
    if a.nrows != a.ncols:
        raise ValueError("strength_deg2 needs a square matrix")
    f = a.field
    n = a.nrows
    if mode == "sym":
        if not a.is_symmetric():
            raise ValueError("mode 'sym' needs a symmetric matrix")
        terms = _sym_terms(a)
        k = _ceil_half(rank(a))
        assert len(terms) == k
        return StrengthResult(k, k, StrengthCertificate(f, n, tuple(terms)))
    if mode == "alt":
        if not a.is_alternating():
            raise ValueError("mode 'alt' needs an alternating matrix")
        terms = _alt_terms(a)
        r = rank(a)
        assert len(terms) * 2 == r
        return StrengthResult(r // 2, r // 2, StrengthCertificate(f, n, tuple(terms)))
    if mode != "full":
        raise ValueError(f"unknown mode {mode!r}")
    if f.characteristic == 2:
        raise ValueError("full mode needs characteristic different from 2")
    half = f.inv(2)
    S = (a + a.T).scale(half)
    W = (a - a.T).scale(half)
    rk, rs, ra = rank(a), rank(S), rank(W)
    lower = max(_ceil_half(rk), _ceil_half(rs), ra // 2)
    split = _ceil_half(rs) + ra // 2
    if rk <= split:
        C, R = rank_factorization(a)
        terms = [make_term(C.column(t), R.rows[t], "tensor", field=f) for t in range(rk)]
    else:
        terms = _sym_terms(S) + _alt_terms(W)
    upper = min(rk, split)
    return StrengthResult(lower, upper, StrengthCertificate(f, n, tuple(terms)))


@dataclass(frozen=True)
class UnipotentResult:
    value: int
    certificate: StrengthCertificate
    quadratic: tuple  # coefficients of mu^2 - x mu + 1
    mu: object = None
    a: object = None
    b: object = None


def unipotent_matrix(x) -> Matrix:
    return Matrix.from_rows(QQ, [[1, x], [0, 1]])


def strength_unipotent(x) -> UnipotentResult:
    """Strength of [[1, x], [0, 1]] in V (x) V over an algebraically closed field."""
    x = QQ(x)
    A = unipotent_matrix(x)
    quad = (QQ(1), -x, QQ(1))
    if x in (2, -2):
        C, R = rank_factorization(A)
        terms = tuple(make_term(C.column(t), R.rows[t], "tensor") for t in range(2))
        return UnipotentResult(2, StrengthCertificate(QQ, 2, terms), quad)
    disc = x * x - 4
    root = field_sqrt(QQ, disc)
    if root is not None:
        mu = (x + root) / 2
    else:
        mu = Quad(x / 2, Fraction(1, 2), disc)
    a = mu * mu / (mu * mu - 1)
    b = 1 - a
    lam = 1 / mu
    u = (QQ.one, lam)
    v = (QQ.one, mu)
    if isinstance(mu, Quad):
        u = (Quad.lift(1, disc), lam)
        v = (Quad.lift(1, disc), mu)
    term = BilinearTerm(u, v, "general", (a, b))
    return UnipotentResult(1, StrengthCertificate(QQ, 2, (term,)), quad, mu, a, b)


# ---------------------------------------------------------------------------
# brute force over F_p


def _sym_labels(n: int, d: int) -> list[tuple[int, ...]]:
    return list(combinations_with_replacement(range(n), d))


@lru_cache(maxsize=None)
def _product_tensor(n: int, e: int, d: int) -> np.ndarray:
    """T[i, j, k] = coefficient of monomial k in (monomial i of degree e)(monomial j of degree d-e)."""
    le, lf, ld = _sym_labels(n, e), _sym_labels(n, d - e), _sym_labels(n, d)
    index = {m: k for k, m in enumerate(ld)}
    T = np.zeros((len(le), len(lf), len(ld)), dtype=np.int64)
    for i, a in enumerate(le):
        for j, b in enumerate(lf):
            T[i, j, index[tuple(sorted(a + b))]] = 1
    return T


def _all_vectors(p: int, D: int) -> np.ndarray:
    """All of F_p^D as rows, in code order (code = sum digit_i p^i)."""
    codes = np.arange(p ** D, dtype=np.int64)
    return np.stack([(codes // p ** i) % p for i in range(D)], axis=1) if D else np.zeros((1, 0), dtype=np.int64)


def _encode(vecs: np.ndarray, p: int) -> np.ndarray:
    D = vecs.shape[-1]
    weights = p ** np.arange(D, dtype=np.int64)
    return (vecs % p) @ weights


DEFAULT_BUDGET = 50_000_000


@lru_cache(maxsize=None)
def reducible_codes(p: int, n: int, d: int, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Codes of all products g*h with 0 < deg g <= deg h, deg g + deg h = d."""
    D = comb(n + d - 1, d)
    seen = np.zeros(p ** D, dtype=bool)
    for e in range(1, d // 2 + 1):
        De, Df = comb(n + e - 1, e), comb(n + d - e - 1, d - e)
        if p ** (De + Df) * D > budget:
            raise BudgetExceeded(f"enumerating products needs {p ** (De + Df) * D} operations")
        G, H = _all_vectors(p, De), _all_vectors(p, Df)
        T = _product_tensor(n, e, d)
        GT = np.einsum("gi,ijk->gjk", G, T) % p
        for start in range(0, len(H), 4096):
            prod = np.einsum("gjk,hj->ghk", GT, H[start:start + 4096]) % p
            seen[_encode(prod.reshape(-1, D), p)] = True
    return np.flatnonzero(seen)


@lru_cache(maxsize=None)
def strength_table(p: int, n: int, d: int, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Minimal strength of every form in Sym^d(F_p^n), indexed by code."""
    if d < 2:
        raise ValueError("strength over F_p is tabulated for degree >= 2")
    D = comb(n + d - 1, d)
    size = p ** D
    R = reducible_codes(p, n, d, budget)
    if size * len(R) > budget:
        raise BudgetExceeded(f"sumset closure needs {size * len(R)} operations")
    digits = _all_vectors(p, D)
    rdig = digits[R]
    dist = np.full(size, -1, dtype=np.int64)
    dist[0] = 0
    frontier = np.array([0], dtype=np.int64)
    k = 0
    while len(frontier):
        k += 1
        nxt = np.zeros(size, dtype=bool)
        for start in range(0, len(frontier), 256):
            block = digits[frontier[start:start + 256]]
            sums = (block[:, None, :] + rdig[None, :, :]) % p
            nxt[_encode(sums.reshape(-1, D), p)] = True
        new = np.flatnonzero(nxt & (dist < 0))
        dist[new] = k
        frontier = new
    return dist


def element_code(f: Element) -> int:
    p = f.field.p
    vec = f.vector()
    return sum(int(c) * p ** i for i, c in enumerate(vec))


def _check_oracle_input(f: Element):
    if not isinstance(f.field, PrimeField):
        raise ValueError("the strength oracle works over F_p only")
    if any(s.kind != "sym" for s in f.spec):
        raise ValueError("the strength oracle needs Sym^d components")
    if len(set(f.spec.degrees)) != 1:
        raise ValueError("all components must have the same degree")
    d = f.spec.degree
    if f.field.p <= d:
        raise ValueError(f"the oracle requires p > d (p={f.field.p}, d={d})")


def oracle_strength(f: Element, budget: int = DEFAULT_BUDGET) -> int:
    """Exact strength over F_p of a single form (minimal k)."""
    _check_oracle_input(f)
    if len(f.spec) != 1:
        raise ValueError("oracle_strength takes a single form")
    table = strength_table(f.field.p, f.n, f.spec.degree, budget)
    return int(table[element_code(f)])


def strength_leq_oracle(f: Element, k: int, variant: str = "single", budget: int = DEFAULT_BUDGET) -> bool:
    """Decide str(f) <= k over F_p by exhaustive enumeration.

    ``single``: f is one form of degree d and we ask whether it is a sum of
    k products.  ``tuple``: f has several Sym^d components and we ask
    whether some k reducible forms span all of them.
    """
    _check_oracle_input(f)
    if variant == "single":
        return oracle_strength(f, budget) <= k
    if variant != "tuple":
        raise ValueError(f"unknown variant {variant!r}")
    return _tuple_strength_leq(f, k, budget)


def _tuple_strength_leq(f: Element, k: int, budget: int) -> bool:
    field = f.field
    p, n, d = field.p, f.n, f.spec.degree
    D = comb(n + d - 1, d)
    labels = _sym_labels(n, d)
    targets = EchelonBasis(field)
    for i in range(len(f.spec)):
        comp = f.component(i)
        targets.add({j: comp[m] for j, m in enumerate(labels) if m in comp})
    w = targets.dim
    if w == 0:
        return True
    if w > k:
        return False
    if k >= D:
        return True
    codes = reducible_codes(p, n, d, budget)
    digits = _all_vectors(p, D)[codes]
    # projectivise: keep vectors whose first nonzero coordinate is 1
    reps = []
    for row in digits:
        nz = np.flatnonzero(row)
        if len(nz) and row[nz[0]] == 1:
            reps.append({int(j): int(row[j]) for j in nz})
    target_rows = [dict(r) for _, r in targets._rows]
    nodes = 0

    def search(start: int, chosen: EchelonBasis, joint: EchelonBasis) -> bool:
        nonlocal nodes
        if all(chosen.contains(t) for t in target_rows):
            return True
        if chosen.dim == k:
            return False
        for idx in range(start, len(reps)):
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded("tuple strength search exceeded its budget")
            g = reps[idx]
            if chosen.contains(g):
                continue
            c2 = _copy_basis(chosen)
            c2.add(g)
            j2 = _copy_basis(joint)
            j2.add(g)
            if j2.dim > k:
                continue
            if search(idx + 1, c2, j2):
                return True
        return False

    joint = EchelonBasis(field)
    for t in target_rows:
        joint.add(t)
    return search(0, EchelonBasis(field), joint)


def _copy_basis(b: EchelonBasis) -> EchelonBasis:
    c = EchelonBasis(b.field)
    c._rows = list(b._rows)
    return c


def image_strength_bound(q: FunctorSpec, d: int) -> int:
    """Number of (e_1..e_k) >= 0 with sum e_i d_i = d over the irreducible degrees d_i of q."""
    degrees = [sum(lam) for lam, mult in q.partitions().items() for _ in range(mult)]
    if any(di <= 0 or di >= d for di in degrees):
        raise ValueError("image_strength_bound needs summand degrees strictly between 0 and d")
    ways = [1] + [0] * d
    for di in degrees:
        for total in range(di, d + 1):
            ways[total] += ways[total - di]
    return ways[d]
