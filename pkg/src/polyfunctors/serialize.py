"""Canonical JSON for fields, elements, truncations, matrices, E elements and witnesses.

Scalars are strings ("3/4", "2 mod 5", "1/2+1/2*sqrt(5)"); variables are
1-based.  Labels: Sym as exponent maps {"1": 2, "3": 1}, Ext and Tensor as
index lists, Schur as the 0-based position in ``schur_labels``.  ``dumps`` sorts keys so that equal objects give equal
bytes.
"""

from __future__ import annotations

import json

from .fields import Field, parse_field
from .functors import Element, FunctorSpec, parse_spec
from .limits import EElement, TruncatedElement
from .linalg import Matrix
from .minimal import SpecializationWitness
from .quadratic import Quad, parse_quad
from .schur import schur_labels
from .strength import BilinearTerm, StrengthCertificate


class FormatError(ValueError):
    """A JSON document does not describe the expected object."""


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed JSON: {exc}") from exc


def _require(doc, kind: str) -> dict:
    if not isinstance(doc, dict) or doc.get("type") != kind:
        raise FormatError(f"expected a {kind!r} document")
    return doc


def scalar_out(field: Field, x) -> str:
    return str(x) if isinstance(x, Quad) else field.format(x)


def scalar_in(field: Field, text):
    if not isinstance(text, (str, int)):
        raise FormatError(f"scalars are strings or integers, got {text!r}")
    text = str(text)
    try:
        return parse_quad(text, field) if "sqrt(" in text else field.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad scalar {text!r}: {exc}") from exc


def _field_of(doc: dict) -> Field:
    try:
        return parse_field(doc["field"])
    except (KeyError, ValueError) as exc:
        raise FormatError(f"bad or missing field: {exc}") from exc


def _spec_of(doc: dict) -> FunctorSpec:
    try:
        return parse_spec(doc["spec"])
    except (KeyError, ValueError) as exc:
        raise FormatError(f"bad or missing spec: {exc}") from exc


def _label_out(spec: FunctorSpec, idx: int, label, n: int):
    s = spec[idx]
    if s.kind == "schur":
        return schur_labels(s.shape, n).index(label)
    if s.kind == "sym":
        exps: dict[str, int] = {}
        for a in label:
            exps[str(a + 1)] = exps.get(str(a + 1), 0) + 1
        return exps
    return [a + 1 for a in label]


def _label_in(spec: FunctorSpec, idx: int, label, n: int) -> tuple:
    s = spec[idx]
    if s.kind == "schur":
        labels = schur_labels(s.shape, n)
        if not isinstance(label, int) or not 0 <= label < len(labels):
            raise FormatError(f"Schur label {label!r} is not an index below {len(labels)}")
        return labels[label]
    if s.kind == "sym":
        if not isinstance(label, dict):
            raise FormatError(f"Sym labels are exponent maps like {{\"1\": 2}}, got {label!r}")
        word = []
        for var, k in label.items():
            if not str(var).isdigit() or int(var) < 1 or not isinstance(k, int) or k < 0:
                raise FormatError(f"bad exponent entry {var!r}: {k!r}")
            word += [int(var) - 1] * k
        return tuple(sorted(word))
    if not isinstance(label, list) or not all(isinstance(a, int) and a >= 1 for a in label):
        raise FormatError(f"labels are lists of 1-based indices, got {label!r}")
    return tuple(a - 1 for a in label)


def _terms_out(e: Element) -> list:
    return [[i + 1, _label_out(e.spec, i, lab, e.n), e.field.format(c)] for i, lab, c in e.terms()]


def _terms_in(spec: FunctorSpec, n: int, field: Field, terms) -> Element:
    if not isinstance(terms, list):
        raise FormatError("terms must be a list")
    out = []
    for t in terms:
        if not isinstance(t, list) or len(t) != 3 or not isinstance(t[0], int) or not 1 <= t[0] <= len(spec):
            raise FormatError(f"bad term {t!r}")
        out.append((t[0] - 1, _label_in(spec, t[0] - 1, t[1], n), scalar_in(field, t[2])))
    try:
        return Element.from_terms(spec, n, out, field)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def element_to_json(e: Element) -> dict:
    return {"type": "element", "field": e.field.tag, "spec": str(e.spec), "n": e.n, "terms": _terms_out(e)}


def element_from_json(doc) -> Element:
    doc = _require(doc, "element")
    if not isinstance(doc.get("n"), int):
        raise FormatError("element needs an integer n")
    return _terms_in(_spec_of(doc), doc["n"], _field_of(doc), doc.get("terms", []))


def truncation_to_json(t: TruncatedElement) -> dict:
    return {
        "type": "truncation",
        "field": t.field.tag,
        "spec": str(t.spec),
        "offset": t.offset,
        "levels": list(t.levels),
        "layers": [element_to_json(layer) for layer in t.layers],
    }


def truncation_from_json(doc) -> TruncatedElement:
    doc = _require(doc, "truncation")
    layers = doc.get("layers")
    if not isinstance(layers, list) or not layers:
        raise FormatError("truncation needs a nonempty list of layers")
    elems = [element_from_json(layer) for layer in layers]
    levels = doc.get("levels", [e.n for e in elems])
    if levels != [e.n for e in elems]:
        raise FormatError("levels do not match the layer dimensions")
    try:
        return TruncatedElement(elems[0].spec, levels, elems, doc.get("offset", 0))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def matrix_to_json(m: Matrix) -> dict:
    return {"type": "matrix", "field": m.field.tag, "ncols": m.ncols,
            "rows": [[m.field.format(x) for x in row] for row in m.rows]}


def matrix_from_json(doc) -> Matrix:
    doc = _require(doc, "matrix")
    field = _field_of(doc)
    rows = doc.get("rows")
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise FormatError("matrix rows must be a list of lists")
    ncols = doc.get("ncols", len(rows[0]) if rows else 0)
    if any(len(r) != ncols for r in rows):
        raise FormatError("matrix rows have inconsistent lengths")
    return Matrix.from_rows(field, [[scalar_in(field, x) for x in r] for r in rows], ncols)


def e_to_json(e: EElement) -> dict:
    """Block form when the blocks are known, explicit rows {"col": "coeff"} otherwise."""
    doc = {"type": "e_element", "field": e.field.tag, "tail": e.tail}
    if e.blocks is not None:
        doc["blocks"] = [matrix_to_json(b) for b in e.blocks]
    else:
        doc["rows"] = [{str(c + 1): e.field.format(v) for c, v in row} for row in e.rows]
        if e.tail == "identity":
            doc["shift"] = e.shift
    return doc


def e_from_json(doc) -> EElement:
    doc = _require(doc, "e_element")
    field = _field_of(doc)
    tail = doc.get("tail", "none")
    try:
        if "blocks" in doc:
            blocks = doc["blocks"]
            if not isinstance(blocks, list) or not blocks:
                raise FormatError("blocks must be a nonempty list of matrices")
            return EElement.from_blocks([matrix_from_json(b) for b in blocks], tail)
        rows = doc.get("rows")
        if not isinstance(rows, list) or not all(isinstance(r, dict) for r in rows):
            raise FormatError('E rows look like [{"1": "2/3", "4": "1"}, ...]')
        parsed = []
        for row in rows:
            if not all(str(c).isdigit() and int(c) >= 1 for c in row):
                raise FormatError(f"bad column keys in E row {row!r}")
            parsed.append({int(c) - 1: scalar_in(field, v) for c, v in row.items()})
        return EElement.from_rows(field, parsed, tail, doc.get("shift", 0))
    except ValueError as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(str(exc)) from exc


def witness_to_json(w: SpecializationWitness) -> dict:
    return {
        "type": "witness",
        "source": truncation_to_json(w.source),
        "target": truncation_to_json(w.target),
        "e": e_to_json(w.e),
        "verified_levels": list(w.verified_levels),
    }


def witness_from_json(doc) -> SpecializationWitness:
    doc = _require(doc, "witness")
    levels = doc.get("verified_levels")
    if not isinstance(levels, list) or not all(isinstance(x, int) for x in levels):
        raise FormatError("verified_levels must be a list of integers")
    return SpecializationWitness(truncation_from_json(doc.get("source")), truncation_from_json(doc.get("target")),
                                 e_from_json(doc.get("e")), tuple(levels))


def certificate_to_json(c: StrengthCertificate) -> dict:
    f = c.field
    return {
        "type": "strength_certificate",
        "field": f.tag,
        "n": c.n,
        "terms": [{"u": [scalar_out(f, x) for x in t.u], "v": [scalar_out(f, x) for x in t.v],
                   "combine": t.combine, "weights": [scalar_out(f, x) for x in t.weights]} for t in c.terms],
    }


def certificate_from_json(doc) -> StrengthCertificate:
    doc = _require(doc, "strength_certificate")
    f = _field_of(doc)
    terms = []
    for t in doc.get("terms", []):
        try:
            terms.append(BilinearTerm(tuple(scalar_in(f, x) for x in t["u"]), tuple(scalar_in(f, x) for x in t["v"]),
                                      t["combine"], tuple(scalar_in(f, x) for x in t["weights"])))
        except (KeyError, TypeError) as exc:
            raise FormatError(f"bad certificate term {t!r}") from exc
    return StrengthCertificate(f, doc.get("n", 0), tuple(terms))


def stream_from_json(doc, kind: str, field: Field) -> Element:
    """A coefficient stream {"a": {"i,j": value}} (1-based, i <= j) as a Sym2 or Ext2 element."""
    if not isinstance(doc, dict) or not isinstance(doc.get("a"), dict):
        raise FormatError('coefficient streams look like {"a": {"1,2": "3/4"}}')
    spec = parse_spec("S2" if kind == "quadric" else "E2")
    terms = []
    n = doc.get("level", 0)
    for key, value in doc["a"].items():
        try:
            i, j = (int(x) for x in key.split(","))
        except ValueError as exc:
            raise FormatError(f"bad index pair {key!r}") from exc
        if not 1 <= i <= j or (kind == "alternating" and i == j):
            raise FormatError(f"index pair {key!r} must satisfy 1 <= i {'<' if kind == 'alternating' else '<='} j")
        terms.append((0, (i - 1, j - 1), scalar_in(field, value)))
        n = max(n, j)
    return Element.from_terms(spec, n, terms, field)


def stream_to_json(e: Element) -> dict:
    return {"a": {f"{i + 1},{j + 1}": e.field.format(c) for (_, (i, j)), c in e.coords.items()}, "level": e.n}


ENCODERS = {
    Element: element_to_json,
    TruncatedElement: truncation_to_json,
    Matrix: matrix_to_json,
    EElement: e_to_json,
    SpecializationWitness: witness_to_json,
    StrengthCertificate: certificate_to_json,
}

DECODERS = {
    "element": element_from_json,
    "truncation": truncation_from_json,
    "matrix": matrix_from_json,
    "e_element": e_from_json,
    "witness": witness_from_json,
    "strength_certificate": certificate_from_json,
}


def to_json(obj) -> dict:
    try:
        return ENCODERS[type(obj)](obj)
    except KeyError:
        raise TypeError(f"no JSON form for {type(obj).__name__}") from None


def from_json(doc):
    if not isinstance(doc, dict) or doc.get("type") not in DECODERS:
        raise FormatError("document has no known 'type'")
    return DECODERS[doc["type"]](doc)
