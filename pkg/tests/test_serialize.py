from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from polyfunctors import serialize as ser
from polyfunctors.fields import GF, QQ
from polyfunctors.functors import Element, parse_spec
from polyfunctors.limits import EElement, TruncatedElement
from polyfunctors.linalg import Matrix
from polyfunctors.maximal import maximal_r
from polyfunctors.minimal import minimal_q, minimal_specializer_search
from polyfunctors.strength import strength_deg2, strength_unipotent

small = st.fractions(min_value=-9, max_value=9, max_denominator=7)


def _round_trip(obj):
    text = ser.dumps(ser.to_json(obj))
    again = ser.from_json(ser.loads(text))
    assert again == obj
    assert ser.dumps(ser.to_json(again)) == text
    return again


def test_label_grammar():
    e = Element.from_terms(parse_spec("S3+E2+T2+L(2,1)"), 3,
                           [(0, (0, 0, 2), Fraction(3, 4)), (1, (0, 2), -1), (2, (2, 0), 2), (3, (0, 0, 1), 5)])
    doc = ser.to_json(e)
    assert doc["terms"][0] == [1, {"1": 2, "3": 1}, "3/4"]
    assert doc["terms"][1] == [2, [1, 3], "-1"]
    assert doc["terms"][2] == [3, [3, 1], "2"]
    assert isinstance(doc["terms"][3][1], int)
    _round_trip(e)


def test_scalars():
    f = GF(7)
    assert ser.scalar_out(f, 3) == "3 mod 7" and ser.scalar_in(f, "3 mod 7") == 3
    assert ser.scalar_in(QQ, "-6/4") == Fraction(-3, 2)
    with pytest.raises(ser.FormatError):
        ser.scalar_in(QQ, 1.5)
    with pytest.raises(ser.FormatError):
        ser.scalar_in(QQ, "1/0")


@settings(max_examples=40)
@given(st.sampled_from(["S2", "E3", "T2", "S1+E2", "L(2,1)"]), st.integers(0, 4), st.data())
def test_elements_and_truncations(spec_text, n, data):
    spec = parse_spec(spec_text)
    terms = [(i, lab, data.draw(small)) for i, s in enumerate(spec) for lab in s.labels(n) if data.draw(st.booleans())]
    e = Element.from_terms(spec, n, terms)
    _round_trip(e)
    _round_trip(TruncatedElement.from_element(e, sorted({0, n // 2, n})))


@settings(max_examples=30)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_matrices(r, c, data):
    _round_trip(Matrix.from_rows(QQ, [[data.draw(small) for _ in range(c)] for _ in range(r)], c))
    _round_trip(Matrix.from_rows(GF(5), [[data.draw(st.integers(0, 4)) for _ in range(c)] for _ in range(r)], c))


def test_e_elements_witnesses_and_certificates():
    _round_trip(EElement.from_rows(QQ, [{0: 1, 4: Fraction(2, 3)}, {}, {2: -1}], tail="identity", shift=3))
    _round_trip(EElement.from_rows(QQ, [{1: 1}], tail="zero"))
    _round_trip(EElement.from_blocks([Matrix.identity(QQ, 2), Matrix.from_rows(QQ, [[1, 2, 3]])], tail="none"))
    _round_trip(maximal_r(2, 2))
    _round_trip(minimal_specializer_search(minimal_q(parse_spec("S2"), 2, field=GF(5)), 2))
    a = Matrix.from_rows(QQ, [[1, 2], [2, -1]])
    cert = _round_trip(strength_deg2(a, "sym").certificate)
    assert cert.verify(a)
    _round_trip(strength_unipotent(7).certificate)


def test_streams():
    doc = {"a": {"1,2": "3/4", "2,2": "-1"}, "level": 3}
    e = ser.stream_from_json(doc, "quadric", QQ)
    assert e.n == 3 and ser.stream_to_json(e) == doc
    with pytest.raises(ser.FormatError):
        ser.stream_from_json({"a": {"2,2": "1"}}, "alternating", QQ)


@pytest.mark.parametrize("doc", [
    None, {}, {"type": "nonsense"},
    {"type": "element", "field": "q", "spec": "S2"},
    {"type": "element", "field": "q", "spec": "S2", "n": 2, "terms": [[1, [1, 2], "1"]]},
    {"type": "element", "field": "q", "spec": "S2", "n": 2, "terms": [[1, {"3": 2}, "1"]]},
    {"type": "element", "field": "fp:4", "spec": "S2", "n": 2, "terms": []},
    {"type": "matrix", "field": "q", "rows": [["1"], ["1", "2"]]},
    {"type": "e_element", "field": "q", "rows": [{"0": "1"}]},
    {"type": "truncation", "layers": []},
])
def test_malformed_documents(doc):
    with pytest.raises(ser.FormatError):
        ser.from_json(doc)


def test_malformed_text():
    with pytest.raises(ser.FormatError):
        ser.loads("{bad")
