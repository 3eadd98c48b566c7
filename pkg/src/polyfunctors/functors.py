"""Polynomial functors built from Sym, Ext, tensor powers and Schur functors.

Every basis label is a tuple of 0-based variable indices:

* Sym d: a weakly increasing tuple (the monomial x_{i1}...x_{id});
* Ext d: a strictly increasing tuple (e_{i1} ^ ... ^ e_{id});
* Tensor d: a word (e_{w1} (x) ... (x) e_{wd});
* Schur lam: the pivot word of a symmetrizer basis vector (see ``schur``).

Because labels never depend on the ambient dimension, restriction to the
first n coordinates keeps exactly the labels whose letters are all below n,
and bidegrees can be read off the letters.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field as dc_field
from itertools import combinations, combinations_with_replacement, product
from math import comb
from typing import Iterable, Iterator, Mapping

from .fields import Field, QQ, same_field, FieldMismatch
from .linalg import Matrix
from .partitions import Partition, as_partition, hook_length_count, partitions_of, removable_corners
from . import schur as _schur

Label = tuple[int, ...]

KINDS = ("sym", "ext", "tensor", "schur")


@dataclass(frozen=True)
class Summand:
    kind: str
    degree: int
    shape: Partition = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown summand kind {self.kind!r}")
        if self.degree < 0:
            raise ValueError("negative degree")
        if self.kind == "schur" and sum(self.shape) != self.degree:
            raise ValueError("Schur shape does not match degree")

    def __str__(self) -> str:
        if self.kind == "schur":
            return "L(" + ",".join(map(str, self.shape)) + ")"
        return {"sym": "S", "ext": "E", "tensor": "T"}[self.kind] + str(self.degree)

    def partitions(self) -> Counter:
        """Irreducible decomposition as a multiset of partitions."""
        d = self.degree
        if self.kind == "sym":
            return Counter({(d,) if d else (): 1})
        if self.kind == "ext":
            return Counter({(1,) * d: 1})
        if self.kind == "schur":
            return Counter({self.shape: 1})
        return Counter({lam: hook_length_count(lam) for lam in partitions_of(d)})

    def labels(self, n: int) -> Iterator[Label]:
        d = self.degree
        if self.kind == "sym":
            return combinations_with_replacement(range(n), d)
        if self.kind == "ext":
            return combinations(range(n), d)
        if self.kind == "tensor":
            return product(range(n), repeat=d)
        return iter(_schur.schur_labels(self.shape, n))

    def dim(self, n: int) -> int:
        d = self.degree
        if self.kind == "sym":
            return comb(n + d - 1, d)
        if self.kind == "ext":
            return comb(n, d)
        if self.kind == "tensor":
            return n ** d
        return len(_schur.schur_labels(self.shape, n))

    def valid_label(self, label: Label, n: int) -> bool:
        if len(label) != self.degree or any(not 0 <= a < n for a in label):
            return False
        if self.kind == "sym":
            return all(a <= b for a, b in zip(label, label[1:]))
        if self.kind == "ext":
            return all(a < b for a, b in zip(label, label[1:]))
        if self.kind == "schur":
            cb = _schur.content_basis(self.shape, tuple(sorted(label)))
            return label in cb.pivots
        return True


def Sym(d: int) -> Summand:
    return Summand("sym", d)


def Ext(d: int) -> Summand:
    return Summand("ext", d)


def Tensor(d: int) -> Summand:
    return Summand("tensor", d)


def SchurOf(shape) -> Summand:
    shape = as_partition(shape)
    return Summand("schur", sum(shape), shape)


@dataclass(frozen=True)
class FunctorSpec:
    summands: tuple[Summand, ...]

    def __init__(self, summands: Iterable = ()):
        flat = []
        for s in summands:
            if isinstance(s, tuple) and len(s) == 2 and isinstance(s[0], Summand):
                flat.extend([s[0]] * int(s[1]))
            else:
                flat.append(s)
        object.__setattr__(self, "summands", tuple(flat))

    def __len__(self) -> int:
        return len(self.summands)

    def __iter__(self):
        return iter(self.summands)

    def __getitem__(self, i) -> Summand:
        return self.summands[i]

    def __add__(self, other: "FunctorSpec") -> "FunctorSpec":
        return FunctorSpec(self.summands + other.summands)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(s.degree for s in self.summands)

    @property
    def degree(self) -> int:
        return max(self.degrees, default=0)

    @property
    def is_homogeneous(self) -> bool:
        return len(set(self.degrees)) <= 1

    @property
    def is_pure(self) -> bool:
        return all(d >= 1 for d in self.degrees)

    def dim(self, n: int) -> int:
        return sum(s.dim(n) for s in self.summands)

    def partitions(self) -> Counter:
        out = Counter()
        for s in self.summands:
            out.update(s.partitions())
        return out

    def __str__(self) -> str:
        if not self.summands:
            return "0"
        parts, prev, count = [], None, 0
        for s in self.summands + (None,):
            if s == prev:
                count += 1
                continue
            if prev is not None:
                parts.append(f"{count}*{prev}" if count > 1 else str(prev))
            prev, count = s, 1
        return "+".join(parts)


_TOKEN = re.compile(r"^(?:(\d+)\*)?(?:([SET])(\d+)|L\(([\d,\s]*)\))$")


def parse_spec(text: str) -> FunctorSpec:
    """Parse specs such as ``S3+E3``, ``2*S2+E2``, ``T2`` or ``L(2,1)+S1``."""
    text = text.replace(" ", "")
    if text in ("", "0"):
        return FunctorSpec(())
    out = []
    depth, start = 0, 0
    tokens = []
    for i, ch in enumerate(text + "+"):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "+" and depth == 0:
            tokens.append(text[start:i])
            start = i + 1
    for tok in tokens:
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"cannot parse functor summand {tok!r}")
        mult = int(m.group(1) or 1)
        if m.group(2):
            s = Summand({"S": "sym", "E": "ext", "T": "tensor"}[m.group(2)], int(m.group(3)))
        else:
            s = SchurOf([int(x) for x in m.group(4).split(",") if x])
        out.extend([s] * mult)
    return FunctorSpec(out)


class Element:
    """An element of P(K^n): sparse coordinates keyed by (summand index, label)."""

    __slots__ = ("spec", "n", "field", "coords")

    def __init__(self, spec: FunctorSpec, n: int, coords: Mapping | None = None, field: Field = QQ, check: bool = True):
        if field.characteristic != 0 and any(s.kind == "schur" for s in spec):
            raise FieldMismatch("Schur summands are only supported over Q")
        self.spec = spec
        self.n = n
        self.field = field
        cleaned = {}
        for key, v in (coords or {}).items():
            v = field(v) if check else v
            if v:
                cleaned[key] = v
        if check:
            for (i, label) in cleaned:
                if not 0 <= i < len(spec) or not spec[i].valid_label(tuple(label), n):
                    raise ValueError(f"invalid label {label} for summand {i} at n={n}")
        self.coords = cleaned

    @classmethod
    def zero(cls, spec: FunctorSpec, n: int, field: Field = QQ) -> "Element":
        return cls(spec, n, {}, field)

    @classmethod
    def from_terms(cls, spec: FunctorSpec, n: int, terms: Iterable, field: Field = QQ) -> "Element":
        """Build from (summand index, label, coeff) triples, summing repeats."""
        acc: dict = {}
        for i, label, c in terms:
            key = (i, tuple(label))
            acc[key] = field.reduce(acc.get(key, field.zero) + field(c))
        return cls(spec, n, acc, field)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.spec == other.spec and self.n == other.n and self.field == other.field and self.coords == other.coords

    def __hash__(self):
        return hash((self.spec, self.n, self.field, frozenset(self.coords.items())))

    def _check_compatible(self, other: "Element"):
        same_field(self.field, other.field)
        if self.spec != other.spec or self.n != other.n:
            raise ValueError("elements live in different spaces")

    def __add__(self, other: "Element") -> "Element":
        self._check_compatible(other)
        f = self.field
        out = dict(self.coords)
        for k, v in other.coords.items():
            out[k] = f.reduce(out.get(k, f.zero) + v)
        return Element(self.spec, self.n, out, f, check=False)

    def __neg__(self) -> "Element":
        f = self.field
        return Element(self.spec, self.n, {k: f.reduce(-v) for k, v in self.coords.items()}, f, check=False)

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, c) -> "Element":
        f = self.field
        c = f(c)
        return Element(self.spec, self.n, {k: f.reduce(c * v) for k, v in self.coords.items()}, f, check=False)

    def is_zero(self) -> bool:
        return not self.coords

    def component(self, i: int) -> dict:
        return {label: v for (j, label), v in self.coords.items() if j == i}

    def terms(self) -> list[tuple[int, Label, object]]:
        return [(i, label, v) for (i, label), v in sorted(self.coords.items())]

    def support_bound(self) -> int:
        """One more than the largest variable index in use."""
        return max((max(label) + 1 for (_, label) in self.coords if label), default=0)

    def restrict(self, m: int) -> "Element":
        """Image under the coordinate projection K^n -> K^m (m <= n)."""
        if m > self.n:
            raise ValueError(f"cannot restrict from {self.n} to a larger dimension {m}")
        return Element(self.spec, m, {k: v for k, v in self.coords.items() if all(a < m for a in k[1])}, self.field, check=False)

    def extend(self, m: int) -> "Element":
        """The same element viewed in P(K^m) for m >= n (zero-extension)."""
        if m < self.n:
            raise ValueError("extend needs a larger dimension")
        return Element(self.spec, m, dict(self.coords), self.field, check=False)

    def shift(self, offset: int, n: int | None = None) -> "Element":
        """Relabel every variable x_i as x_{i+offset}."""
        n = self.n + offset if n is None else n
        out = {}
        for (i, label), v in self.coords.items():
            new = tuple(a + offset for a in label)
            if any(a < 0 or a >= n for a in new):
                raise ValueError("shift moves a variable out of range")
            out[(i, new)] = v
        return Element(self.spec, n, out, self.field, check=False)

    def vector(self) -> list:
        """Dense coordinate vector in the canonical label order."""
        out = []
        for i, s in enumerate(self.spec):
            comp = self.component(i)
            out.extend(comp.get(label, self.field.zero) for label in s.labels(self.n))
        return out

    def tensor(self, i: int) -> dict:
        """Component i as a tensor {word: coeff} (Schur and Tensor kinds only)."""
        s = self.spec[i]
        comp = self.component(i)
        if s.kind == "tensor":
            return comp
        if s.kind != "schur":
            raise ValueError("only tensor and Schur components embed as tensors here")
        out: dict = {}
        for label, c in comp.items():
            for w, a in _schur.schur_vector(s.shape, label).items():
                out[w] = out.get(w, 0) + c * a
        return {w: v for w, v in out.items() if v}

    def __repr__(self) -> str:
        return f"Element({self.spec}, n={self.n}, {self.field}, {self.coords})"

    def __str__(self) -> str:
        if not self.coords:
            return "0"
        pieces = []
        for i, label, v in self.terms():
            kind = self.spec[i].kind
            if kind == "sym":
                mono = "*".join(f"x{a + 1}" for a in label) or "1"
            elif kind == "ext":
                mono = "^".join(f"x{a + 1}" for a in label)
            elif kind == "tensor":
                mono = "(x)".join(f"x{a + 1}" for a in label)
            else:
                mono = f"b[{','.join(str(a + 1) for a in label)}]"
            pieces.append(f"{self.field.format(v)}*{mono}" if len(self.spec) == 1 else f"[{i}] {self.field.format(v)}*{mono}")
        return " + ".join(pieces)


def _sort_sign(word: Label) -> tuple[Label, int] | None:
    """Sort a word and return the sign of the sorting permutation, None on repeats."""
    if len(set(word)) != len(word):
        return None
    w = list(word)
    sign = 1
    for i in range(1, len(w)):
        j = i
        while j > 0 and w[j - 1] > w[j]:
            w[j - 1], w[j] = w[j], w[j - 1]
            sign = -sign
            j -= 1
    return tuple(w), sign


def _expand_word(phi_cols: list[list[tuple[int, object]]], word: Label) -> Iterator[tuple[Label, object]]:
    """phi^{(x)d} applied to e_word, as (target word, coefficient) pairs."""
    if not word:
        yield (), 1
        return
    for choice in product(*(phi_cols[a] for a in word)):
        coef = 1
        for _, v in choice:
            coef = coef * v
        yield tuple(r for r, _ in choice), coef


def apply_map(phi: Matrix, e: Element) -> Element:
    """P(phi) for phi: K^n -> K^m given as an m x n matrix."""
    f = same_field(phi.field, e.field)
    if phi.ncols != e.n:
        raise ValueError(f"map has {phi.ncols} columns but the element lives in dimension {e.n}")
    m = phi.nrows
    cols = [[(i, phi.rows[i][j]) for i in range(m) if phi.rows[i][j] != 0] for j in range(phi.ncols)]
    acc: dict = {}
    for idx, s in enumerate(e.spec):
        comp = e.component(idx)
        if not comp:
            continue
        if s.kind == "schur":
            tensor = e.tensor(idx)
            image: dict = {}
            for w, c in tensor.items():
                for u, a in _expand_word(cols, w):
                    image[u] = image.get(u, 0) + c * a
            for label, v in _schur.schur_coordinates(s.shape, {u: x for u, x in image.items() if x}).items():
                acc[(idx, label)] = acc.get((idx, label), 0) + v
            continue
        for label, c in comp.items():
            for u, a in _expand_word(cols, label):
                if s.kind == "sym":
                    key = tuple(sorted(u))
                    sgn = 1
                elif s.kind == "ext":
                    r = _sort_sign(u)
                    if r is None:
                        continue
                    key, sgn = r
                else:
                    key, sgn = u, 1
                acc[(idx, key)] = acc.get((idx, key), 0) + sgn * c * a
    return Element(e.spec, m, {k: f.reduce(v) for k, v in acc.items()}, f, check=False)


def coordinate_projection(field: Field, m: int, n: int) -> Matrix:
    return Matrix.from_rows(field, [[1 if i == j else 0 for j in range(n)] for i in range(m)], n)


def label_bidegree(label: Label, m: int) -> int:
    """Number of letters of a label that belong to the second summand (index >= m)."""
    return sum(1 for a in label if a >= m)


def shift_decompose(e: Element, m: int) -> list[Element]:
    """Split e in P(K^m + K^k) by degree in the last k coordinates.

    Component j scales as t^j when the last k coordinates are scaled by t.
    """
    if not 0 <= m <= e.n:
        raise ValueError("split point out of range")
    d = e.spec.degree
    parts: list[dict] = [dict() for _ in range(d + 1)]
    for key, v in e.coords.items():
        parts[label_bidegree(key[1], m)][key] = v
    return [Element(e.spec, e.n, p, e.field, check=False) for p in parts]


def shift_component_dim(spec: FunctorSpec, n: int, k: int, j: int) -> int:
    """Dimension of the V-degree-j component of P(K^n + K^k)."""
    return sum(1 for s in spec for label in s.labels(n + k) if label_bidegree(label, n) == j)


def derivative_spec(spec: FunctorSpec) -> FunctorSpec:
    """P' by one-box branching.

    Degree-1 summands contribute the constant functor, kept as Sym(0) so that
    dim P'(K^n) * k matches the V-linear part of P(K^n + K^k).
    """
    out = []
    for s in spec:
        if s.degree == 0:
            continue
        if s.kind == "sym":
            out.append(Sym(s.degree - 1))
        elif s.kind == "ext":
            out.append(Ext(s.degree - 1) if s.degree > 1 else Sym(0))
        elif s.kind == "tensor":
            out.extend([Tensor(s.degree - 1) if s.degree > 1 else Sym(0)] * s.degree)
        else:
            for mu in reversed(removable_corners(s.shape)):
                out.append(SchurOf(mu) if mu else Sym(0))
    return FunctorSpec(out)


def lessdot(q: FunctorSpec, p: FunctorSpec) -> bool:
    """q < p: at the top degree where they differ, q's part is a quotient of p's."""
    qc, pc = q.partitions(), p.partitions()
    if qc == pc:
        return False
    degrees = {sum(lam) for lam in qc} | {sum(lam) for lam in pc}
    for d in sorted(degrees, reverse=True):
        qd = Counter({lam: c for lam, c in qc.items() if sum(lam) == d})
        pd = Counter({lam: c for lam, c in pc.items() if sum(lam) == d})
        if qd != pd:
            return all(pd[lam] >= c for lam, c in qd.items())
    return False
