import json
import re

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from birkhoff_completion import (
    FormalContext,
    Implication,
    birkhoff_completion_context,
    birkhoff_up,
    concept_lattice,
    make_poset,
)
from birkhoff_completion.datasets import dataset_text
from birkhoff_completion.io import (
    ParseError,
    concept_lattice_to_dot,
    format_implications,
    label_from_json,
    label_to_json,
    lattice_to_dot,
    parse_implications,
    poset_from_json,
    poset_to_json,
    read_csv,
    read_cxt,
    report_to_json,
    write_cxt,
)

from conftest import contexts, lattices


# -- lattice JSON ----------------------------------------------------------------


def test_json_round_trip_is_byte_stable(fig4):
    text = poset_to_json(fig4)
    again = poset_to_json(poset_from_json(text))
    assert text == again


def test_json_of_set_labels_round_trips(m3):
    BC = birkhoff_up(m3).completed
    back = poset_from_json(poset_to_json(BC))
    assert set(back.labels) == set(BC.labels)
    assert all(isinstance(x, frozenset) for x in back.labels)


def test_json_sorted_elements_and_covers(n5):
    obj = json.loads(poset_to_json(n5))
    assert obj["elements"] == sorted(obj["elements"])
    assert obj["covers"] == sorted(obj["covers"])


def test_non_lattice_json_rejected():
    with pytest.raises(ParseError, match="meet|join"):
        poset_from_json('{"elements": ["a", "b"], "covers": []}')
    assert len(poset_from_json('{"elements": ["a", "b"], "covers": []}', lattice=False)) == 2


def test_json_syntax_error_reports_position():
    with pytest.raises(ParseError) as exc:
        poset_from_json('{"elements": [\n  "a",, ]}')
    assert exc.value.line == 2


def test_json_cycle_rejected():
    with pytest.raises(ParseError, match="cycle"):
        poset_from_json('{"elements": ["a", "b"], "covers": [["a", "b"], ["b", "a"]]}')


def test_bad_cover_entry_rejected():
    with pytest.raises(ParseError, match="cover #0"):
        poset_from_json('{"elements": ["a"], "covers": [["a"]]}')


def test_concept_labels_round_trip(uk):
    c = concept_lattice(uk).concepts[3]
    assert label_from_json(json.loads(json.dumps(label_to_json(c)))) == c


@settings(max_examples=50, deadline=None)
@given(lattices())
def test_json_round_trip_random(L):
    text = poset_to_json(L)
    back = poset_from_json(text)
    assert poset_to_json(back) == text
    assert set(back.labels) == set(L.labels)
    assert all(back.le(x, y) == L.le(x, y) for x in L.labels for y in L.labels)


# -- .cxt ---------------------------------------------------------------------------


def test_cxt_round_trip(uk):
    text = write_cxt(uk)
    assert read_cxt(text) == uk
    assert write_cxt(read_cxt(text)) == text


def test_bundled_cxt_is_canonical(uk):
    assert write_cxt(uk) == dataset_text("uk")


def test_cxt_row_length_error():
    bad = "B\n\n1\n2\n\ng\na\nb\nX\n"
    with pytest.raises(ParseError) as exc:
        read_cxt(bad)
    assert exc.value.line == 9 and exc.value.column == 2


def test_cxt_bad_cell():
    with pytest.raises(ParseError) as exc:
        read_cxt("B\n\n1\n2\n\ng\na\nb\nX?\n")
    assert (exc.value.line, exc.value.column) == (9, 2)


def test_cxt_missing_header_and_truncation():
    with pytest.raises(ParseError, match="header"):
        read_cxt("C\n\n1\n1\n\ng\nm\nX\n")
    with pytest.raises(ParseError, match="end of file"):
        read_cxt("B\n\n2\n1\n\ng\n")
    with pytest.raises(ParseError, match="counts"):
        read_cxt("B\n\nx\n1\n")


@settings(max_examples=60, deadline=None)
@given(contexts())
def test_cxt_round_trip_random(K):
    assert read_cxt(write_cxt(K)) == K


# -- CSV ----------------------------------------------------------------------------------


def test_csv_formats():
    K = read_csv(",a,b\ng,1,0\nh,x,\n")
    assert K.objects == ("g", "h") and K.attributes == ("a", "b")
    assert K.incidence.tolist() == [[True, False], [True, False]]


def test_csv_errors():
    with pytest.raises(ParseError) as exc:
        read_csv(",a\ng,1,1\n")
    assert exc.value.line == 2
    with pytest.raises(ParseError) as exc:
        read_csv(",a\ng,maybe\n")
    assert (exc.value.line, exc.value.column) == (2, 2)
    with pytest.raises(ParseError):
        read_csv("")


# -- implications ---------------------------------------------------------------------------


def test_implication_text_round_trip():
    imps = [Implication({"b", "a"}, {"c"}), Implication({"c"}, {"a", "b"})]
    text = format_implications(imps)
    assert text == "a, b -> c\nc -> a, b\n"
    assert format_implications(parse_implications(text)) == text


def test_marked_implications_parse_back():
    imps = [Implication({"a"}, {"b"}), Implication({"a", "b"}, {"c"})]
    text = format_implications(imps, mark=True)
    assert "# distributive" in text and "# non-distributive" in text
    assert list(parse_implications(text)) == imps


def test_implication_parse_errors():
    with pytest.raises(ParseError) as exc:
        parse_implications("# comment\n\na b c\n")
    assert exc.value.line == 3


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.frozensets(st.sampled_from("pqrst"), min_size=1),
                          st.frozensets(st.sampled_from("pqrst"))), unique_by=lambda t: t[0], max_size=6))
def test_implication_round_trip_random(pairs):
    imps = [Implication(a, b) for a, b in pairs]
    text = format_implications(imps)
    assert format_implications(parse_implications(text, "pqrst")) == text


# -- reports and DOT -------------------------------------------------------------------------


def test_report_json(uk):
    _, rep = birkhoff_completion_context(uk)
    doc = json.loads(report_to_json(rep))
    assert doc["kind"] == "up"
    assert len(doc["completed"]["elements"]) == 14
    assert ["~not:British Islands", "Ireland (State)"] in doc["coincidences"]
    assert len(doc["invalidated"]) == 5
    assert all("->" in line for line in doc["invalidated"])
    assert report_to_json(rep) == report_to_json(birkhoff_completion_context(uk)[1])


def _edges(dot):
    return [tuple(map(int, m)) for m in re.findall(r"n(\d+) -> n(\d+)", dot)]


def test_dot_has_one_node_per_element_and_cover_edges_only(fig4):
    dot = lattice_to_dot(fig4)
    assert dot.count("[label=") == 7
    edges = _edges(dot)
    assert sorted(edges) == sorted(fig4.cover_pairs)
    assert "rankdir=BT" in dot


@settings(max_examples=40, deadline=None)
@given(lattices())
def test_dot_edges_form_the_hasse_diagram(L):
    edges = set(_edges(lattice_to_dot(L)))
    n = len(L)
    # no transitive edge: no edge (i, k) with a path i -> j -> k
    for i, k in edges:
        assert not any((i, j) in edges and (j, k) in edges for j in range(n))
    # the reflexive-transitive closure of the edges is the order
    reach = np.eye(n, dtype=bool)
    for i, k in edges:
        reach[i, k] = True
    for j in range(n):
        reach |= reach[:, [j]] & reach[[j], :]
    assert (reach == L.leq).all()


def test_concept_dot_labels(uk):
    cl = concept_lattice(uk)
    dot = concept_lattice_to_dot(cl, highlight=[cl.object_concept("Jersey")])
    assert dot.count("[label=") == 8
    assert "Isle of Man" in dot and "Channel Islands" in dot
    assert dot.count("BGCOLOR") == 1
    node = next(line for line in dot.splitlines() if "Jersey" in line)
    # attribute text above the circle, object text below
    assert node.index("Channel Islands") < node.index("STYLE") < node.index("Jersey")


def test_dot_escapes_html():
    L = make_poset(["<a>", "b&c"], [("<a>", "b&c")])
    from birkhoff_completion import as_lattice

    dot = lattice_to_dot(as_lattice(L))
    assert "&lt;a&gt;" in dot and "b&amp;c" in dot
