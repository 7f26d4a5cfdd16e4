import copy
from fractions import Fraction

import pytest

from hktorelli.connectivity import connect_weak
from hktorelli.period import make_period
from hktorelli.serialize import chain_to_json
from hktorelli.verify import _segment_nondegenerate, verify_chain
from helpers import unit


def e(i):
    return unit(4, i)


@pytest.fixture
def weak_doc(diag4):
    x = make_period(diag4, e(0), e(1))
    y = make_period(diag4, e(0), [0, 1, Fraction(1, 10), 0])
    return chain_to_json(connect_weak(x, y))


def failed(doc):
    return {c.name for c in verify_chain(doc).failures()}


def test_all_pass(weak_doc):
    rep = verify_chain(weak_doc)
    assert rep.ok
    assert rep.to_json()["ok"] is True


def test_corrupted_basis(weak_doc):
    doc = copy.deepcopy(weak_doc)
    doc["lines"][1]["basis"][2] = [["0/1"], ["0/1"], ["0/1"], ["1/1"]]
    bad = failed(doc)
    assert "line[1].positive" in bad


def test_line_that_misses_a_point(weak_doc):
    doc = copy.deepcopy(weak_doc)
    doc["lines"][0]["basis"][2] = [["0/1"], ["0/1"], ["1/1"], ["1/2"]]
    doc["lines"][0]["minors"] = [["1/1"], ["1/1"], ["3/4"]]
    bad = failed(doc)
    assert "line[0].contains[1]" in bad
    assert "line[0].positive" not in bad


def test_swapped_endpoints(weak_doc):
    doc = copy.deepcopy(weak_doc)
    doc["source"], doc["target"] = doc["target"], doc["source"]
    assert {"source", "target"} <= failed(doc)


def test_conjugated_target(weak_doc):
    doc = copy.deepcopy(weak_doc)
    t = doc["target"]
    doc["target"] = {"a": t["b"], "b": t["a"]}
    assert failed(doc) == {"target"}


def test_unknown_version(weak_doc):
    doc = dict(weak_doc, v=2)
    rep = verify_chain(doc)
    assert not rep.ok and rep.checks[0].name == "version"


def test_malformed(weak_doc):
    doc = copy.deepcopy(weak_doc)
    del doc["points"]
    assert "parse" in failed(doc)


def test_generic_flag_without_witness(weak_doc):
    doc = copy.deepcopy(weak_doc)
    doc["lines"][0]["generic_required"] = True
    assert "line[0].genericity" in failed(doc)


def test_segment_through_degenerate_plane():
    # a(s) = e1, b(s) goes from e2 to e1 - e2... crosses e1 at s = 1/2 only if aligned
    assert not _segment_nondegenerate([1, 0, 0], [1, 0, 0], [0, 1, 0], [2, -1, 0])
    assert _segment_nondegenerate([1, 0, 0], [1, 0, 0], [0, 1, 0], [0, 1, 1])
