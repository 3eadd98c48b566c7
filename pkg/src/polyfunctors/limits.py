"""Truncations of P_infinity and the action of row-finite matrices on them.

A ``TruncatedElement`` stores layers p_n in P(K^n) at finitely many levels.
An ``EElement`` is an N x N matrix with finitely many nonzero entries per
row, stored as finitely many explicit rows plus a tail rule.  Row i is the
target variable x_i and column j the source variable, so applying e is the
substitution x_j -> sum_i e[i][j] x_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import InsufficientData
from .fields import Field, QQ, same_field
from .functors import Element, FunctorSpec, apply_map
from .linalg import Matrix

TAILS = ("identity", "zero", "none")


@dataclass(frozen=True)
class TruncatedElement:
    spec: FunctorSpec
    levels: tuple[int, ...]
    layers: tuple[Element, ...]
    offset: int = 0

    def __init__(self, spec: FunctorSpec, levels: Sequence[int], layers: Sequence[Element], offset: int = 0):
        levels, layers = tuple(levels), tuple(layers)
        if len(levels) != len(layers) or not levels:
            raise ValueError("need one layer per level and at least one level")
        if any(a >= b for a, b in zip(levels, levels[1:])):
            raise ValueError("levels must be strictly increasing")
        for n, layer in zip(levels, layers):
            if layer.n != n or layer.spec != spec:
                raise ValueError(f"layer at level {n} does not live in P(K^{n})")
        same_field(*(l.field for l in layers))
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "layers", layers)
        object.__setattr__(self, "offset", offset)

    @classmethod
    def from_element(cls, e: Element, levels: Sequence[int] | None = None) -> "TruncatedElement":
        """Truncation whose top layer is e, with lower layers obtained by projection."""
        levels = tuple(levels) if levels is not None else (e.n,)
        if levels[-1] != e.n:
            raise ValueError("the top level must equal the element's dimension")
        return cls(e.spec, levels, [e.restrict(n) for n in levels])

    @property
    def field(self) -> Field:
        return self.layers[0].field

    @property
    def top(self) -> int:
        return self.levels[-1]

    def layer(self, n: int) -> Element:
        """p_n, projected down from the nearest stored level >= n."""
        for level, layer in zip(self.levels, self.layers):
            if level == n:
                return layer
            if level > n:
                return layer.restrict(n)
        raise InsufficientData(f"no layer at or above level {n} (top level {self.top})")

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedElement):
            return NotImplemented
        return (self.spec, self.levels, self.layers, self.offset) == (other.spec, other.levels, other.layers, other.offset)

    def __hash__(self):
        return hash((self.spec, self.levels, self.layers, self.offset))


def coherence_check(t: TruncatedElement) -> bool:
    """Each layer is the coordinate projection of the next one."""
    return all(hi.restrict(lo.n) == lo for lo, hi in zip(t.layers, t.layers[1:]))


@dataclass(frozen=True)
class EElement:
    """A row-finite N x N matrix: explicit rows followed by a tail rule.

    Rows beyond the explicit ones are e_{i+shift} for the identity tail,
    zero for the zero tail, and unknown (InsufficientData) for tail "none".
    ``blocks`` records the block-diagonal description when there is one.
    """

    field: Field
    rows: tuple[tuple[tuple[int, object], ...], ...]
    tail: str = "identity"
    shift: int = 0
    blocks: tuple[Matrix, ...] | None = None

    def __post_init__(self):
        if self.tail not in TAILS:
            raise ValueError(f"unknown tail {self.tail!r}")
        if self.tail == "identity" and len(self.rows) + self.shift < 0:
            raise ValueError("identity tail would point at a negative column")

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Mapping[int, object]], tail: str = "none", shift: int = 0) -> "EElement":
        clean = []
        for r in rows:
            items = []
            for c, v in sorted(r.items()):
                v = field(v)
                if v:
                    if c < 0:
                        raise ValueError("negative column index")
                    items.append((int(c), v))
            clean.append(tuple(items))
        return cls(field, tuple(clean), tail, shift)

    @classmethod
    def identity(cls, field: Field = QQ) -> "EElement":
        return cls(field, (), "identity", 0)

    @classmethod
    def zero(cls, field: Field = QQ) -> "EElement":
        return cls(field, (), "zero", 0)

    @classmethod
    def from_blocks(cls, blocks: Sequence[Matrix], tail: str = "identity") -> "EElement":
        """Block-diagonal matrix diag(B_1, B_2, ...) followed by the tail."""
        if not blocks:
            raise ValueError("need at least one block")
        field = same_field(*(b.field for b in blocks))
        rows = []
        col0 = 0
        for b in blocks:
            for r in b.rows:
                rows.append(tuple((col0 + j, v) for j, v in enumerate(r) if v))
            col0 += b.ncols
        return cls(field, tuple(rows), tail, col0 - len(rows), tuple(blocks))

    @classmethod
    def from_gl(cls, g: Matrix) -> "EElement":
        """The block form (g 0; 0 I)."""
        if g.nrows != g.ncols:
            raise ValueError("GL element must be square")
        return cls.from_blocks([g], "identity")

    @property
    def depth(self) -> int:
        return len(self.rows)

    def row(self, i: int) -> dict:
        if i < 0:
            raise IndexError(i)
        if i < len(self.rows):
            return dict(self.rows[i])
        if self.tail == "identity":
            return {i + self.shift: self.field.one}
        if self.tail == "zero":
            return {}
        raise InsufficientData(f"row {i} is beyond the {len(self.rows)} stored rows")

    def support_bound(self, nrows: int) -> int:
        """Smallest n such that the first nrows rows vanish outside the first n columns."""
        return max((c + 1 for i in range(nrows) for c in self.row(i)), default=0)

    def block(self, nrows: int, ncols: int | None = None) -> Matrix:
        """Upper-left nrows x ncols corner (ncols defaults to the support bound)."""
        n = self.support_bound(nrows)
        if ncols is None:
            ncols = n
        elif ncols < n:
            raise ValueError(f"{ncols} columns cut off nonzero entries (need {n})")
        out = []
        for i in range(nrows):
            r = [self.field.zero] * ncols
            for c, v in self.row(i).items():
                r[c] = v
            out.append(r)
        return Matrix(self.field, tuple(tuple(r) for r in out), ncols)

    def max_bandwidth(self) -> int:
        """Largest |column - row| over the explicit nonzero entries."""
        return max((abs(c - i) for i, r in enumerate(self.rows) for c, _ in r), default=0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EElement):
            return NotImplemented
        return (self.field, self.rows, self.tail, self.shift if self.tail == "identity" else 0) == (
            other.field, other.rows, other.tail, other.shift if other.tail == "identity" else 0)

    def __hash__(self):
        return hash((self.field, self.rows, self.tail))


def e_apply(e: EElement, p: TruncatedElement, out_level: int, width: int | None = None) -> Element:
    """q_L = P(psi) p_n with psi the upper-left L x n corner of e.

    n defaults to the support bound of the first L rows; any larger width
    gives the same answer.
    """
    same_field(e.field, p.field)
    n = e.support_bound(out_level)
    if width is None:
        width = n
    psi = e.block(out_level, width)
    return apply_map(psi, p.layer(width))


def e_apply_truncated(e: EElement, p: TruncatedElement, levels: Sequence[int]) -> TruncatedElement:
    """P(e) p at several output levels, as a truncation."""
    return TruncatedElement(p.spec, levels, [e_apply(e, p, L) for L in levels])


def compose_e(e1: EElement, e2: EElement) -> EElement:
    """The product e1 e2, so that P(e1) P(e2) = P(e1 e2)."""
    f = same_field(e1.field, e2.field)
    if e1.tail == "zero":
        depth, tail, shift = e1.depth, "zero", 0
    elif e1.tail == "none":
        depth, tail, shift = e1.depth, "none", 0
    else:
        depth = max(e1.depth, e2.depth - e1.shift)
        tail, shift = e2.tail, e1.shift + e2.shift if e2.tail == "identity" else 0
    rows = []
    for i in range(depth):
        acc: dict = {}
        try:
            for j, a in e1.row(i).items():
                for k, b in e2.row(j).items():
                    acc[k] = f.reduce(acc.get(k, f.zero) + a * b)
        except InsufficientData:
            # this row needs data e2 does not store; stop here and fail on later queries
            return EElement(f, tuple(rows), "none", 0)
        rows.append(tuple(sorted((k, v) for k, v in acc.items() if v)))
    if tail == "identity" and e1.tail == "identity":
        # rows past depth are e2 rows shifted by e1.shift; those must also be tail rows of e2
        if depth + e1.shift < e2.depth:
            raise AssertionError("composition depth miscomputed")
    return EElement(f, tuple(rows), tail, shift)
