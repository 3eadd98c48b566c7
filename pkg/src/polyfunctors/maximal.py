"""A maximal element r_d of T^d_infinity and explicit specialisations from it.

r_1 = x_0 and r_d is the sum over i >= 1 and slots j of
x_{iota(i,j,1)} inserted at slot j of r_{d-1}(x_{iota(i,j,2)}, x_{iota(i,j,3)}, ...).
Variables are 0-based, the arguments i, j, k of iota are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import DepthExceeded
from .fields import Field, QQ
from .functors import Element, FunctorSpec, Tensor
from .limits import EElement, TruncatedElement
from .minimal import SpecializationWitness


def _cantor(a: int, b: int) -> int:
    return (a + b) * (a + b + 1) // 2 + b


@dataclass(frozen=True)
class PairingInjection:
    """iota(i, j, k) = d * cantor(i-1, k-1) + (j-1): injective and increasing in i and k."""

    d: int

    def __call__(self, i: int, j: int, k: int) -> int:
        if i < 1 or k < 1 or not 1 <= j <= self.d:
            raise ValueError(f"iota({i}, {j}, {k}) is out of range for d = {self.d}")
        return self.d * _cantor(i - 1, k - 1) + (j - 1)


def slot_insert(j: int, v: Element, t: Element) -> Element:
    """Insert the vector v at slot j (1-based) of every word of t."""
    if v.spec != FunctorSpec([Tensor(1)]) and v.spec.degree != 1:
        raise ValueError("v must be a vector")
    if len(t.spec) != 1 or t.spec[0].kind != "tensor":
        raise ValueError("t must be a pure tensor element")
    d = t.spec.degree + 1
    if not 1 <= j <= d:
        raise IndexError(f"slot {j} out of range 1..{d}")
    if v.n != t.n:
        raise ValueError("v and t live in different dimensions")
    f = v.field
    coords: dict = {}
    for (_, (a,)), c in v.coords.items():
        for (_, w), b in t.coords.items():
            key = (0, w[:j - 1] + (a,) + w[j - 1:])
            coords[key] = f.reduce(coords.get(key, f.zero) + c * b)
    return Element(FunctorSpec([Tensor(d)]), v.n, {k: c for k, c in coords.items() if c}, f, check=False)


@lru_cache(maxsize=None)
def _r_words(d: int, level: int) -> frozenset:
    """Words of r_d (all coefficients 1) whose letters are all below level."""
    if level <= 0:
        return frozenset()
    if d == 1:
        return frozenset({(0,)})
    iota = PairingInjection(d)
    words = set()
    i = 1
    while iota(i, 1, 1) < level:
        for j in range(1, d + 1):
            head = iota(i, j, 1)
            if head >= level:
                continue
            # arguments x_{iota(i,j,c+2)} of r_{d-1} below level form a prefix c < m
            m = 0
            while iota(i, j, m + 2) < level:
                m += 1
            for w in _r_words(d - 1, m):
                sub = tuple(iota(i, j, c + 2) for c in w)
                words.add(sub[:j - 1] + (head,) + sub[j - 1:])
        i += 1
    return frozenset(words)


def truncated_r(d: int, level: int, field: Field = QQ) -> Element:
    """The layer of r_d in T^d(K^level)."""
    if d < 1:
        raise ValueError("d must be at least 1")
    words = _r_words(d, level)
    return Element(FunctorSpec([Tensor(d)]), level, {(0, w): field.one for w in words}, field, check=False)


@lru_cache(maxsize=None)
def depth_level(d: int, depth: int) -> int:
    """Level covering every term of r_d with i <= depth, recursively in each factor."""
    if d == 1:
        return 1
    iota = PairingInjection(d)
    inner = depth_level(d - 1, depth)
    return 1 + max(iota(i, j, k) for i in range(1, depth + 1) for j in range(1, d + 1) for k in range(1, inner + 2))


def maximal_r(d: int, depth: int, field: Field = QQ) -> TruncatedElement:
    """Truncation of r_d at the levels implied by depth 1, ..., depth."""
    if d < 1 or depth < 1:
        raise ValueError("d and depth must be at least 1")
    levels = sorted({depth_level(d, t) for t in range(1, depth + 1)})
    top = truncated_r(d, levels[-1], field)
    return TruncatedElement.from_element(top, levels)


@lru_cache(maxsize=None)
def required_level(d: int, n: int) -> int:
    """Level of r_d that suffices to specialise to any p in T^d(K^n)."""
    if n <= 0:
        return 0
    if d == 1:
        return 1
    iota = PairingInjection(d)
    need = 0
    for i in range(1, n + 1):
        inner = required_level(d - 1, n - i + 1)
        for j in range(1, d + 1):
            need = max(need, iota(i, j, 1) + 1, iota(i, j, inner + 1) + 1 if inner else 0)
    return need


def _columns(p: Element) -> dict[int, dict[int, object]]:
    """Column map of an e with P(e) r_d = p: source variable -> {target row: value}."""
    d = p.spec.degree
    f = p.field
    if d == 1:
        col = {a: c for (_, (a,)), c in p.coords.items()}
        return {0: col} if col else {}
    iota = PairingInjection(d)
    parts: dict[tuple[int, int], dict] = {}
    for (_, w), c in p.coords.items():
        m = min(w)
        j = w.index(m)
        rest = tuple(a - m for a in w[:j] + w[j + 1:])
        parts.setdefault((m, j + 1), {})[(0, rest)] = c
    cols: dict[int, dict[int, object]] = {}
    sub_spec = FunctorSpec([Tensor(d - 1)])
    for (m, j), coords in sorted(parts.items()):
        i = m + 1
        cols[iota(i, j, 1)] = {m: f.one}
        sub = Element(sub_spec, p.n - m, coords, f, check=False)
        for k, col in _columns(sub).items():
            cols[iota(i, j, k + 2)] = {row + m: v for row, v in col.items()}
    return cols


def maximal_specializer(p: TruncatedElement, r: TruncatedElement) -> SpecializationWitness:
    """An e in E with P(e) r = p at the top level of p, built by splitting p along min indices.

    Each word goes to i = its smallest letter and j = the first slot holding
    it; the remainder, shifted down by i, is specialised recursively.  When p
    equals the truncation of r the identity is returned.
    """
    if len(p.spec) != 1 or p.spec[0].kind != "tensor" or p.spec != r.spec:
        raise ValueError("p and r must both be pure tensors of the same degree")
    n = p.top
    target = p.layers[-1]
    f = target.field
    if r.top >= n and r.layer(n) == target:
        return SpecializationWitness(r, p, EElement.identity(f), (n,))
    cols = _columns(target)
    if cols and max(cols) >= r.top:
        raise DepthExceeded(f"r is stored to level {r.top} but the specialisation uses variable {max(cols)}; "
                            f"level {required_level(p.spec.degree, n)} always suffices")
    rows: list[dict] = [{} for _ in range(n)]
    for c, col in cols.items():
        for row, v in col.items():
            rows[row][c] = v
    e = EElement.from_rows(f, rows, tail="none")
    w = SpecializationWitness(r, p, e, (n,))
    if not w.verify():
        raise AssertionError("maximal specialisation failed verification")
    return w
