"""Round trips and rejection paths of the JSON layer."""

from fractions import Fraction

import pytest

from cliffilt.bifiltration import bideform, tensor_module
from cliffilt.deformation import deform, quotient_at
from cliffilt.graph import to_graph
from cliffilt.invariants import decompose, invariant_report
from cliffilt.serialize import (
    SerializeError,
    decode,
    dumps,
    encode,
    encode_decomposition,
    encode_search_results,
    loads,
)
from cliffilt.supermodule import (
    check_filtration,
    degree_filtration,
    exterior_module,
    hodge_filtration,
    irreducible_cl5,
)


def roundtrip(obj):
    text = dumps(obj)
    back = loads(text)
    assert dumps(back) == text
    return back


def test_module_roundtrip():
    m = irreducible_cl5()
    assert roundtrip(m) == m


def test_filtration_roundtrip_byte_identical():
    f = hodge_filtration(exterior_module(4))
    back = roundtrip(f)
    assert back.module == f.module
    assert tuple(back.even_flags) == tuple(f.even_flags)
    assert tuple(back.odd_flags) == tuple(f.odd_flags)
    # canonical flag bases make repeated dumps byte-identical
    assert dumps(f) == dumps(hodge_filtration(exterior_module(4)))


def test_offshell_and_quotient_roundtrips():
    r = deform(degree_filtration(exterior_module(3)))
    assert roundtrip(r) == r
    on = quotient_at(r, Fraction(2, 3))
    back = roundtrip(on)
    assert back.shell == Fraction(2, 3)
    assert check_filtration(back.filtration)
    gs = roundtrip(quotient_at(r, 0))
    assert gs.dims == quotient_at(r, 0).dims


def test_bifiltered_and_bigraded_roundtrips():
    bf = tensor_module(degree_filtration(exterior_module(2)),
                       degree_filtration(exterior_module(1)))
    back = roundtrip(bf)
    assert back.dims == bf.dims and back.biflags == bf.biflags
    assert back.gamma_plus == bf.gamma_plus and back.gamma_minus == bf.gamma_minus

    r = bideform(bf)
    back = roundtrip(r)
    assert back.dims == r.dims
    assert back.sp == r.sp and back.sm == r.sm
    assert back.qp == r.qp and back.qm == r.qm


def test_graph_and_certificate_roundtrips():
    g = to_graph(degree_filtration(exterior_module(3)))
    back = roundtrip(g)
    assert back.vertices == g.vertices and back.edges == g.edges

    cert = check_filtration(degree_filtration(exterior_module(2)))
    assert roundtrip(cert) == cert


def test_report_and_composites_roundtrip():
    f = hodge_filtration(exterior_module(4))
    rep = invariant_report(f)
    assert roundtrip(rep) == rep

    summands = decompose(f)
    doc = encode_decomposition(summands)
    back = loads(dumps(doc))
    assert len(back) == len(summands)
    assert {s.status for s in back} == {s.status for s in summands}

    found_doc = encode_search_results([f])
    back = loads(dumps(found_doc))
    assert len(back) == 1 and check_filtration(back[0])


def test_rationals_survive_exactly():
    r = deform(degree_filtration(exterior_module(1)))
    on = quotient_at(r, Fraction(22, 7))
    assert roundtrip(on).shell == Fraction(22, 7)


def test_zero_row_maps_keep_shape():
    # a rank-0 flag serializes with explicit ambient dimension
    f = degree_filtration(exterior_module(2))
    r = deform(f)
    back = roundtrip(r)
    for p, per in enumerate(back.q_maps):
        for q_orig, q_back in zip(r.q_maps[p], per):
            assert (q_back.rows, q_back.cols) == (q_orig.rows, q_orig.cols)


def test_malformed_documents_rejected():
    cases = [
        "not json at all",
        '[]',
        '{"kind": "module"}',
        '{"schema": "cliffilt/2", "kind": "module"}',
        '{"schema": "cliffilt/1", "kind": "mystery"}',
        '{"schema": "cliffilt/1", "kind": "module", "n": 1}',
        '{"schema": "cliffilt/1", "kind": "filtration", "n": "x"}',
    ]
    for text in cases:
        with pytest.raises(SerializeError):
            loads(text)


def test_bad_rational_rejected():
    doc = encode(degree_filtration(exterior_module(1)))
    doc["even_flags"][0]["rows"][0][0] = "1/0"
    with pytest.raises(SerializeError):
        decode(doc)


def test_unknown_object_rejected():
    with pytest.raises(SerializeError):
        encode(object())
