"""Surjectivity of omega -> P(id_U + omega)(r) from Hom(V, U) onto P(U).

U = K^n sits on the first n coordinates and V = K^(n^(d-1)) on the next
ones.  The tensor witness is r = sum over alpha in [n]^(d-1) of
v_alpha (x) e_alpha_1 (x) ... (x) e_alpha_(d-1); for Sym, Ext and Schur
summands r is replaced by its image in P(U + V).  The map is linear in
omega because r has degree one in V.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .fields import Field, QQ
from .functors import Element, FunctorSpec, Summand, _sort_sign, apply_map
from .linalg import Matrix
from . import schur as _schur


@dataclass(frozen=True)
class OmegaReport:
    summand: str
    n: int
    rank: int
    dim: int
    matrix: Matrix

    @property
    def surjective(self) -> bool:
        return self.rank == self.dim


def project_tensor(summand: Summand, tensor: dict, field: Field = QQ) -> dict:
    """Image of a tensor {word: coeff} under the natural map T^d -> summand, as label coordinates."""
    out: dict = {}
    if summand.kind == "schur":
        if field.characteristic:
            raise ValueError("Schur summands are realised over Q only")
        return _schur.schur_coordinates(summand.shape, _schur.young_symmetrize(summand.shape, tensor))
    for w, c in tensor.items():
        if summand.kind == "sym":
            key, sgn = tuple(sorted(w)), 1
        elif summand.kind == "ext":
            r = _sort_sign(w)
            if r is None:
                continue
            key, sgn = r
        else:
            key, sgn = w, 1
        out[key] = field.reduce(out.get(key, field.zero) + sgn * c)
    return {k: v for k, v in out.items() if v}


def omega_witness(summand: Summand, n: int, field: Field = QQ) -> Element:
    """r in P(U + V) with U = K^n and V = K^(n^(d-1))."""
    d = summand.degree
    tensor = {(n + idx,) + alpha: field.one for idx, alpha in enumerate(product(range(n), repeat=d - 1))}
    coords = {(0, k): v for k, v in project_tensor(summand, tensor, field).items()}
    return Element(FunctorSpec([summand]), n + n ** (d - 1), coords, field, check=False)


def omega_matrix(summand: Summand, n: int, field: Field = QQ) -> Matrix:
    """Rows: basis of P(U) in label order.  Columns: the elementary maps E_(i, beta) in Hom(V, U)."""
    d = summand.degree
    if d < 1:
        raise ValueError("degree must be at least 1")
    r = omega_witness(summand, n, field)
    m = n ** (d - 1)
    labels = list(summand.labels(n))
    row_of = {lab: k for k, lab in enumerate(labels)}
    cols = []
    for i in range(n):
        for beta in range(m):
            phi = [[field.one if c == a else field.zero for c in range(n + m)] for a in range(n)]
            phi[i][n + beta] = field.one
            image = apply_map(Matrix.from_rows(field, phi, n + m), r)
            col = [field.zero] * len(labels)
            for (_, lab), v in image.coords.items():
                col[row_of[lab]] = v
            cols.append(col)
    return Matrix.from_columns(field, cols, len(labels)) if cols else Matrix.zeros(field, len(labels), 0)


def omega_check(spec: FunctorSpec | Summand, n: int, field: Field = QQ) -> list[OmegaReport]:
    """One rank report per summand; the map is surjective when every rank equals the dimension."""
    summands = [spec] if isinstance(spec, Summand) else list(spec)
    reports = []
    for s in summands:
        mat = omega_matrix(s, n, field)
        reports.append(OmegaReport(str(s), n, mat.rank(), s.dim(n), mat))
    return reports
