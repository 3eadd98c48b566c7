"""Degree at most two: classification by ranks and explicit banded specialisers.

The canonical elements are q = x0x1 + x2x3 + ... for Sym2 and
q = x0^x1 + x2^x3 + ... for Ext2.  A target p = sum a_sr x_s x_r is reached
from q by the matrix whose column 2s is the unit vector e_s and whose
column 2s+1 holds a_sr in row r (r >= s for quadrics, r > s for
alternating forms).  For (Sym1)^a + (Sym2)^b + (Ext2)^c the pairs of the
quadratic components are interleaved after the a linear variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InsufficientData
from .fields import Field, QQ
from .functors import Element, Ext, FunctorSpec, Sym
from .limits import EElement, TruncatedElement
from .linalg import Matrix
from .minimal import linear_prefix_target, minimal_q

KINDS = ("quadric", "alternating", "mixed")


@dataclass(frozen=True)
class Deg2Class:
    """Rank data of an element of (Sym1)^a + (Sym2)^b + (Ext2)^c, computed at one level.

    ``pair`` is only set for (Sym1)^2: "top" for independent forms, a
    normalised point (lam, mu) for (lam u, mu u), or "zero".
    """

    profile: tuple[int, int, int]
    level: int
    linear_rank: int
    sym_ranks: tuple[int, ...]
    alt_ranks: tuple[int, ...]
    pair: object = None

    def __str__(self) -> str:
        parts = []
        if self.profile[0]:
            parts.append(f"linear rank {self.linear_rank}")
        parts += [f"S2 rank {r}" for r in self.sym_ranks]
        parts += [f"E2 rank {r}" for r in self.alt_ranks]
        if self.pair is not None:
            parts.append(self.pair if isinstance(self.pair, str) else "point [{}:{}]".format(*self.pair))
        return ", ".join(parts) + f" (at level {self.level})"


def profile(spec: FunctorSpec) -> tuple[int, int, int]:
    counts = {Sym(1): 0, Sym(2): 0, Ext(2): 0}
    for s in spec:
        if s not in counts:
            raise ValueError(f"unsupported summand {s}; only S1, S2 and E2 are classified")
        counts[s] += 1
    return counts[Sym(1)], counts[Sym(2)], counts[Ext(2)]


def gram_matrix(component: dict, n: int, field: Field, alternating: bool) -> Matrix:
    """Symmetric matrix of a quadric (a_ii on the diagonal, a_ij/2 off it) or the matrix of a 2-form."""
    if not alternating and field.characteristic == 2:
        raise ValueError("quadrics are classified by their symmetric matrix, which needs characteristic != 2")
    half = field(Fraction(1, 2)) if not alternating else None
    rows = [[field.zero] * n for _ in range(n)]
    for (i, j), c in component.items():
        if alternating:
            rows[i][j] = field.reduce(rows[i][j] + c)
            rows[j][i] = field.reduce(rows[j][i] - c)
        elif i == j:
            rows[i][i] = field.reduce(rows[i][i] + c)
        else:
            rows[i][j] = field.reduce(rows[i][j] + c * half)
            rows[j][i] = field.reduce(rows[j][i] + c * half)
    return Matrix.from_rows(field, rows, n)


def classify_deg2(e: Element | TruncatedElement) -> Deg2Class:
    """Ranks of the components; a truncation is classified at its top level."""
    if isinstance(e, TruncatedElement):
        e = e.layers[-1]
    prof = profile(e.spec)
    f, n = e.field, e.n
    linear, sym_ranks, alt_ranks = [], [], []
    for idx, s in enumerate(e.spec):
        comp = e.component(idx)
        if s == Sym(1):
            row = [f.zero] * n
            for (a,), c in comp.items():
                row[a] = c
            linear.append(row)
        elif s == Sym(2):
            sym_ranks.append(gram_matrix(comp, n, f, False).rank())
        else:
            r = gram_matrix(comp, n, f, True).rank()
            if r % 2:
                raise AssertionError("alternating rank came out odd")
            alt_ranks.append(r)
    linear_rank = Matrix.from_rows(f, linear, n).rank() if linear else 0
    pair = None
    if prof == (2, 0, 0):
        pair = _pair_class(linear, linear_rank, f)
    return Deg2Class(prof, n, linear_rank, tuple(sym_ranks), tuple(alt_ranks), pair)


def _pair_class(rows: list[list], rank: int, f: Field):
    if rank == 2:
        return "top"
    if rank == 0:
        return "zero"
    # (lam u, mu u): read lam, mu off the first nonzero coordinate and normalise
    col = next(j for j in range(len(rows[0])) if rows[0][j] or rows[1][j])
    lam, mu = rows[0][col], rows[1][col]
    s = f.inv(lam if lam else mu)
    return (f.reduce(lam * s), f.reduce(mu * s))


def mixed_index(a: int, b: int, c: int, kind: str, t: int, i: int, j: int) -> int:
    """0-based variable of the j-th letter (j in {0, 1}) of pair i of quadratic component t."""
    if kind == "sym":
        if not 0 <= t < b:
            raise IndexError(t)
        return a + 2 * i * (b + c) + 2 * t + j
    if not 0 <= t < c:
        raise IndexError(t)
    return a + 2 * i * (b + c) + 2 * b + 2 * t + j


def mixed_spec(a: int, b: int, c: int) -> FunctorSpec:
    return FunctorSpec([Sym(1)] * a + [Sym(2)] * b + [Ext(2)] * c)


def canonical_q(kind: str, level: int, field: Field = QQ, profile_abc: tuple[int, int, int] | None = None) -> TruncatedElement:
    """q with enough pairs to reach any target at the given level."""
    if kind == "quadric":
        return minimal_q(FunctorSpec([Sym(2)]), level, field=field)
    if kind == "alternating":
        return minimal_q(FunctorSpec([Ext(2)]), level, field=field)
    if kind != "mixed" or profile_abc is None:
        raise ValueError(f"unknown kind {kind!r}")
    a, b, c = profile_abc
    if b + c == 0:
        spec = mixed_spec(a, 0, 0)
        return TruncatedElement.from_element(Element.from_terms(spec, a, [(t, (t,), 1) for t in range(a)], field))
    quad = FunctorSpec([Sym(2)] * b + [Ext(2)] * c)
    return linear_prefix_target(quad, a, level, field)


def _banded_columns(component: dict, level: int, first_col: int, stride: int, alternating: bool) -> dict[int, dict[int, object]]:
    """Columns of the banded specialiser for one quadratic component, keyed by source variable."""
    cols: dict[int, dict[int, object]] = {}
    for s in range(level):
        cols[first_col + stride * s] = {s: 1}
        coeff = {}
        for r in range(s + 1 if alternating else s, level):
            c = component.get((s, r))
            if c:
                coeff[r] = c
        cols[first_col + stride * s + 1] = coeff
    return cols


def deg2_specializer(p: Element, kind: str, level: int | None = None) -> EElement:
    """Rows 0..level-1 of an e in E with P(e) q = p, q the canonical element of ``canonical_q``.

    kind is "quadric" (p in Sym2), "alternating" (p in Ext2) or "mixed"
    (p in (Sym1)^a + (Sym2)^b + (Ext2)^c in that order).
    """
    if level is None:
        level = p.n
    if level > p.n:
        raise InsufficientData(f"coefficients are stored up to level {p.n}, not {level}")
    p = p.restrict(level)
    f = p.field
    cols: dict[int, dict[int, object]] = {}
    if kind in ("quadric", "alternating"):
        want = FunctorSpec([Sym(2)] if kind == "quadric" else [Ext(2)])
        if p.spec != want:
            raise ValueError(f"a {kind} specialiser needs an element of {want}")
        cols = _banded_columns(p.component(0), level, 0, 2, kind == "alternating")
    elif kind == "mixed":
        a, b, c = profile(p.spec)
        if p.spec != mixed_spec(a, b, c):
            raise ValueError("mixed elements must list S1, then S2, then E2 summands")
        for t in range(a):
            cols[t] = {r: v for (r,), v in p.component(t).items()}
        stride = 2 * (b + c)
        for t in range(b):
            cols.update(_banded_columns(p.component(a + t), level, mixed_index(a, b, c, "sym", t, 0, 0), stride, False))
        for t in range(c):
            cols.update(_banded_columns(p.component(a + b + t), level, mixed_index(a, b, c, "ext", t, 0, 0), stride, True))
    else:
        raise ValueError(f"unknown kind {kind!r}")
    rows: list[dict] = [{} for _ in range(level)]
    for col, entries in cols.items():
        for r, v in entries.items():
            rows[r][col] = v
    return EElement.from_rows(f, rows, tail="none")


def q_level(kind: str, level: int, profile_abc: tuple[int, int, int] = (0, 0, 0)) -> int:
    """Level of q that the first ``level`` rows of the specialiser read from."""
    if kind in ("quadric", "alternating"):
        return 2 * level
    a, b, c = profile_abc
    return a + 2 * level * (b + c)


def banded_layout(kind: str, level: int) -> list[list[str]]:
    """Symbolic upper-left level x 2*level block: "1", "0" or "a(s,r)" with 1-based s <= r."""
    if kind not in ("quadric", "alternating"):
        raise ValueError("layouts exist for quadric and alternating kinds")
    out = [["0"] * (2 * level) for _ in range(level)]
    for s in range(level):
        out[s][2 * s] = "1"
        for r in range(s + (kind == "alternating"), level):
            out[r][2 * s + 1] = f"a({s + 1},{r + 1})"
    return out


def instantiate_layout(layout: list[list[str]], p: Element) -> list[list]:
    """Replace the symbols of a layout by the coefficients of p."""
    f = p.field
    comp = p.component(0)
    out = []
    for row in layout:
        vals = []
        for cell in row:
            if cell.startswith("a("):
                s, r = (int(x) - 1 for x in cell[2:-1].split(","))
                vals.append(comp.get((s, r), f.zero))
            else:
                vals.append(f(int(cell)))
        out.append(vals)
    return out
