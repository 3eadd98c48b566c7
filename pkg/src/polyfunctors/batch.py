"""Vectorised evaluation of P(phi) over F_p for many matrices phi at once.

Used by the exhaustive searches.  Only Sym, Ext and Tensor summands are
supported (the Schur realisation needs characteristic zero).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from itertools import product
from typing import Callable, Iterator

import numpy as np

from .functors import Element, Summand, _sort_sign


@lru_cache(maxsize=None)
def fold_matrix(summand: Summand, m: int, p: int) -> np.ndarray:
    """Matrix sending T^d(K^m) word coordinates to the summand's label coordinates."""
    labels = list(summand.labels(m))
    index = {lab: i for i, lab in enumerate(labels)}
    d = summand.degree
    F = np.zeros((m ** d, len(labels)), dtype=np.int64)
    for w_idx, w in enumerate(product(range(m), repeat=d)):
        if summand.kind == "sym":
            F[w_idx, index[tuple(sorted(w))]] = 1
        elif summand.kind == "ext":
            r = _sort_sign(w)
            if r is not None:
                F[w_idx, index[r[0]]] = r[1] % p
        elif summand.kind == "tensor":
            F[w_idx, index[w]] = 1
        else:
            raise ValueError("batch evaluation supports Sym, Ext and Tensor summands only")
    return F


def batch_apply(e: Element, mats: np.ndarray) -> np.ndarray:
    """Coordinates of P(phi_b) e for every phi_b in mats (shape B x m x n), mod p.

    Output has shape B x dim P(K^m), in the canonical label order.
    """
    p = e.field.p
    B, m, n = mats.shape
    if n != e.n:
        raise ValueError("matrix width does not match the element's dimension")
    mats = mats % p
    out = []
    for idx, s in enumerate(e.spec):
        d = s.degree
        acc = np.zeros((B, m ** d), dtype=np.int64)
        for label, c in e.component(idx).items():
            t = np.full((B, 1), int(c) % p, dtype=np.int64)
            for a in label:
                t = (t[:, :, None] * mats[:, None, :, a]).reshape(B, -1) % p
            acc = (acc + t) % p
        out.append(acc @ fold_matrix(s, m, p) % p)
    return np.concatenate(out, axis=1) if out else np.zeros((B, 0), dtype=np.int64)


def element_vector(e: Element) -> np.ndarray:
    return np.array([int(v) for v in e.vector()], dtype=np.int64)


def decode_digits(codes: np.ndarray, p: int, length: int) -> np.ndarray:
    """Digit rows of codes, most significant digit first (lexicographic order)."""
    powers = p ** np.arange(length - 1, -1, -1, dtype=np.int64)
    return (codes[:, None] // powers[None, :]) % p


def iter_hits(total: int, predicate: Callable[[np.ndarray], np.ndarray], chunk: int = 1 << 14, workers: int = 1) -> Iterator[int]:
    """Codes in range(total) whose predicate holds, in increasing order.

    predicate maps an array of codes to a boolean mask.  With several workers
    the chunks are evaluated concurrently, but hits are still yielded in
    order, so the result does not depend on the worker count.
    """
    starts = list(range(0, total, chunk))

    def run(start):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
        return codes[np.flatnonzero(predicate(codes))].tolist()

    if workers <= 1:
        for s in starts:
            yield from run(s)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for i in range(0, len(starts), workers):
            for hits in pool.map(run, starts[i:i + workers]):
                yield from hits


def first_hit(total: int, predicate: Callable[[np.ndarray], np.ndarray], chunk: int = 1 << 14, workers: int = 1) -> int | None:
    """Smallest code in range(total) whose predicate holds."""
    return next(iter_hits(total, predicate, chunk, workers), None)
