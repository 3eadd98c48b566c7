"""Partitions, Young tableaux and Littlewood-Richardson coefficients."""

from __future__ import annotations

from functools import lru_cache
from math import factorial
from typing import Iterator, Sequence

Partition = tuple[int, ...]


def as_partition(parts: Sequence[int]) -> Partition:
    """Validate and normalise a partition (trailing zeros are dropped)."""
    parts = tuple(int(p) for p in parts)
    while parts and parts[-1] == 0:
        parts = parts[:-1]
    if any(p <= 0 for p in parts):
        raise ValueError(f"partition parts must be positive: {parts}")
    if any(a < b for a, b in zip(parts, parts[1:])):
        raise ValueError(f"partition parts must be weakly decreasing: {parts}")
    return parts


def parse_partition(text: str) -> Partition:
    text = text.strip().strip("()[]")
    if not text:
        return ()
    return as_partition(int(t) for t in text.replace(" ", "").split(","))


@lru_cache(maxsize=None)
def partitions_of(n: int, max_part: int | None = None) -> tuple[Partition, ...]:
    """All partitions of n in reverse lexicographic order."""
    if max_part is None:
        max_part = n
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions_of(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def conjugate(lam: Partition) -> Partition:
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > i) for i in range(lam[0]))


def contains(lam: Partition, mu: Partition) -> bool:
    return len(mu) <= len(lam) and all(m <= l for m, l in zip(mu, lam))


def removable_corners(lam: Partition) -> list[Partition]:
    """Partitions obtained by removing one box, in row order."""
    out = []
    for i, p in enumerate(lam):
        if i + 1 == len(lam) or lam[i + 1] < p:
            out.append(as_partition(lam[:i] + (p - 1,) + lam[i + 1:]))
    return out


def hook_length_count(lam: Partition) -> int:
    """Number of standard Young tableaux of shape lam."""
    conj = conjugate(lam)
    prod = 1
    for i, row in enumerate(lam):
        for j in range(row):
            prod *= row - j + conj[j] - i - 1
    return factorial(sum(lam)) // prod


def ssyt(lam: Partition, n: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Semistandard tableaux of shape lam with entries in range(n), as row tuples."""
    cells = [(i, j) for i, row in enumerate(lam) for j in range(row)]
    grid: dict[tuple[int, int], int] = {}

    def fill(k):
        if k == len(cells):
            yield tuple(tuple(grid[(i, j)] for j in range(row)) for i, row in enumerate(lam))
            return
        i, j = cells[k]
        lo = 0
        if j > 0:
            lo = grid[(i, j - 1)]
        if i > 0:
            lo = max(lo, grid[(i - 1, j)] + 1)
        for v in range(lo, n):
            grid[(i, j)] = v
            yield from fill(k + 1)
        grid.pop((i, j), None)

    yield from fill(0)


@lru_cache(maxsize=None)
def ssyt_count(lam: Partition, n: int) -> int:
    return sum(1 for _ in ssyt(lam, n))


def lr_coefficient(lam: Sequence[int], mu: Sequence[int], nu: Sequence[int]) -> int:
    """c^lam_{mu nu}: LR tableaux of skew shape lam/mu with content nu."""
    lam, mu, nu = as_partition(lam), as_partition(mu), as_partition(nu)
    if sum(lam) != sum(mu) + sum(nu) or not contains(lam, mu) or not contains(lam, nu):
        return 0
    return _lr(lam, mu, nu)


@lru_cache(maxsize=None)
def _lr(lam: Partition, mu: Partition, nu: Partition) -> int:
    mu_p = mu + (0,) * (len(lam) - len(mu))
    # reverse reading order: rows top to bottom, each row right to left
    cells = [(i, j) for i in range(len(lam)) for j in range(lam[i] - 1, mu_p[i] - 1, -1)]
    grid: dict[tuple[int, int], int] = {}
    counts = [0] * len(nu)
    total = 0

    def fill(k):
        nonlocal total
        if k == len(cells):
            total += 1
            return
        i, j = cells[k]
        # row entries weakly increase left to right, so the right neighbour bounds from above
        hi = grid.get((i, j + 1), len(nu) - 1)
        lo = 0
        if i > 0 and j >= mu_p[i - 1] and j < lam[i - 1]:
            lo = grid[(i - 1, j)] + 1
        for v in range(lo, hi + 1):
            if counts[v] >= nu[v]:
                continue
            # lattice condition on the reverse reading word
            if v > 0 and counts[v] + 1 > counts[v - 1]:
                continue
            grid[(i, j)] = v
            counts[v] += 1
            fill(k + 1)
            counts[v] -= 1
            del grid[(i, j)]

    fill(0)
    return total
