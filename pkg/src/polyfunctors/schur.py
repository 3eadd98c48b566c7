"""Schur modules as Young-symmetrizer images inside tensor powers.

The basis of S_lam(K^n) is built one weight space at a time.  For a content
(a sorted word) we apply the Young symmetrizer of the row-filled tableau to
every word with that content and row-reduce the results over Q.  Each basis
vector is identified by its pivot word, which does not depend on n, so the
basis of S_lam(K^n) is the union over all contents with letters below n.
Coordinates of a tensor in the image are read off at the pivot words.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, permutations

from .fields import QQ
from .linalg import _rref
from .partitions import Partition, as_partition, conjugate

Word = tuple[int, ...]


@dataclass(frozen=True)
class ContentBasis:
    content: Word
    pivots: tuple[Word, ...]
    vectors: tuple[dict, ...]  # pivot word -> {word: Fraction}


def _row_positions(lam: Partition) -> list[list[int]]:
    out, k = [], 0
    for row in lam:
        out.append(list(range(k, k + row)))
        k += row
    return out


def _col_positions(lam: Partition) -> list[list[int]]:
    rows = _row_positions(lam)
    return [[rows[i][j] for i in range(c)] for j, c in enumerate(conjugate(lam))]


def _perm_sign(perm: tuple[int, ...]) -> int:
    sign, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def _group(blocks: list[list[int]], d: int, signed: bool) -> list[tuple[tuple[int, ...], int]]:
    """The product of symmetric groups on the blocks, as (position map, sign)."""
    elems = [(tuple(range(d)), 1)]
    for block in blocks:
        new = []
        for base, s in elems:
            for img in permutations(block):
                perm = list(base)
                for src, dst in zip(block, img):
                    perm[src] = dst
                sg = s * (_perm_sign(tuple(block.index(x) for x in img)) if signed else 1)
                new.append((tuple(perm), sg))
        elems = new
    return elems


@lru_cache(maxsize=None)
def _symmetrizer_groups(lam: Partition):
    d = sum(lam)
    return _group(_row_positions(lam), d, False), _group(_col_positions(lam), d, True)


def _act(perm: tuple[int, ...], word: Word) -> Word:
    out = [0] * len(word)
    for i, letter in enumerate(word):
        out[perm[i]] = letter
    return tuple(out)


def young_symmetrize(lam: Partition, tensor: dict) -> dict:
    """Apply (column antisymmetrizer) o (row symmetrizer) to a tensor {word: coeff}."""
    rows, cols = _symmetrizer_groups(lam)
    mid: dict = {}
    for w, c in tensor.items():
        for perm, _ in rows:
            u = _act(perm, w)
            mid[u] = mid.get(u, 0) + c
    out: dict = {}
    for w, c in mid.items():
        if not c:
            continue
        for perm, s in cols:
            u = _act(perm, w)
            out[u] = out.get(u, 0) + s * c
    return {w: Fraction(c) for w, c in out.items() if c}


def _words_with_content(content: Word) -> list[Word]:
    return sorted(set(permutations(content)))


@lru_cache(maxsize=None)
def _pattern_basis(lam: Partition, multiplicities: tuple[int, ...]) -> ContentBasis:
    content = tuple(i for i, m in enumerate(multiplicities) for _ in range(m))
    words = _words_with_content(content)
    index = {w: i for i, w in enumerate(words)}
    rows = []
    for w in words:
        img = young_symmetrize(lam, {w: 1})
        if img:
            row = [Fraction(0)] * len(words)
            for u, c in img.items():
                row[index[u]] = c
            rows.append(row)
    rows, pivots = _rref(QQ, rows, len(words))
    vectors = []
    for r in rows[: len(pivots)]:
        vectors.append({words[j]: c for j, c in enumerate(r) if c})
    return ContentBasis(content, tuple(words[p] for p in pivots), tuple(vectors))


def content_basis(lam: Partition, content: Word) -> ContentBasis:
    """Basis of the weight space of S_lam for a sorted content word."""
    lam = as_partition(lam)
    letters = sorted(set(content))
    mult = tuple(content.count(a) for a in letters)
    base = _pattern_basis(lam, mult)
    if tuple(range(len(letters))) == tuple(letters):
        return base
    relabel = dict(enumerate(letters))

    def tr(w):
        return tuple(relabel[a] for a in w)

    return ContentBasis(
        tuple(content),
        tuple(tr(p) for p in base.pivots),
        tuple({tr(w): c for w, c in v.items()} for v in base.vectors),
    )


@lru_cache(maxsize=None)
def schur_labels(lam: Partition, n: int) -> tuple[Word, ...]:
    """Pivot words labelling the basis of S_lam(K^n), ordered by content then pivot."""
    lam = as_partition(lam)
    d = sum(lam)
    if len(lam) > n:
        return ()
    out = []
    for content in combinations_with_replacement(range(n), d):
        out.extend(content_basis(lam, content).pivots)
    return tuple(out)


def schur_vector(lam: Partition, pivot: Word) -> dict:
    """The embedded tensor {word: coeff} of the basis vector labelled by pivot."""
    cb = content_basis(lam, tuple(sorted(pivot)))
    return cb.vectors[cb.pivots.index(pivot)]


def schur_basis(lam, n: int) -> list[dict]:
    """Embedded basis of S_lam(K^n) inside T^|lam|(K^n), as {word: Fraction} dicts."""
    lam = as_partition(lam)
    return [schur_vector(lam, p) for p in schur_labels(lam, n)]


def schur_coordinates(lam: Partition, tensor: dict) -> dict:
    """Coordinates {pivot: coeff} of a tensor known to lie in the symmetrizer image."""
    out = {}
    contents = {tuple(sorted(w)) for w in tensor}
    for content in contents:
        cb = content_basis(lam, content)
        for p in cb.pivots:
            c = tensor.get(p)
            if c:
                out[p] = c
    return out


def highest_weight_vector(lam: Partition, offset: int = 0) -> dict:
    """Young symmetrizer applied to the word with letter offset+r in every row-r position."""
    lam = as_partition(lam)
    word = tuple(offset + r for r, row in enumerate(lam) for _ in range(row))
    return young_symmetrize(lam, {word: 1})
