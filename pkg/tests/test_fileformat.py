import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dptangle import catalog, fileformat
from dptangle.fileformat import ParseError
from dptangle.motif import DiagramError, FreeLoop, OverMark, TorusDiagram


def same(a, b):
    """Equal up to list order; files store every list sorted by id."""
    return a.name == b.name and all(
        set(getattr(a, k)) == set(getattr(b, k)) for k in ("crossings", "edges", "free_loops"))


@pytest.mark.parametrize("name", catalog.names())
def test_catalog_round_trips_byte_for_byte(name):
    text = fileformat.dumps(catalog.get(name), catalog.source(name))
    motif = fileformat.loads(text)
    assert same(motif.diagram, catalog.get(name))
    assert motif.source == catalog.source(name)
    assert fileformat.dumps(motif) == text


def data(name="E4"):
    return json.loads(fileformat.dumps(catalog.get(name)))


def where(d):
    with pytest.raises(ParseError) as exc:
        fileformat.loads(json.dumps(d))
    return exc.value.where


def test_short_wrap_names_its_path():
    d = data("E1")
    key = "free_loops" if d["free_loops"] else "edges"
    d[key][0]["wrap"] = [1]
    assert where(d) == f"{key}[0].wrap"


def test_schema_errors_name_their_path():
    d = data()
    d["edges"][1]["from"]["port"] = "sideways"
    assert where(d) == "edges[1].from.port"
    d = data()
    d["crossings"][0]["sign"] = 0
    assert where(d) == "crossings[0].sign"
    d = data()
    d["colour"] = "red"
    assert where(d) == "colour"
    d = data()
    del d["edges"]
    assert where(d) == "top level"


def test_syntax_errors_give_line_and_column():
    with pytest.raises(ParseError) as exc:
        fileformat.loads('{\n  "name": "x",\n  oops\n}')
    assert exc.value.where == "line 3 column 3"
    with pytest.raises(ParseError, match="UTF-8"):
        fileformat.loads(b"\xff\xfe")


def test_invalid_diagram_is_rejected_unless_asked():
    d = data()
    d["edges"] = d["edges"][1:]
    text = json.dumps(d)
    with pytest.raises(DiagramError):
        fileformat.loads(text)
    assert len(fileformat.parse(text, validate=False).edges) == len(d["edges"])


def test_marks_keep_their_order(tmp_path):
    loops = [
        FreeLoop("H", (1, 0), [OverMark("V", (0, 0), True, 1), OverMark("V", (1, 0), False, -1)]),
        FreeLoop("V", (0, 1)),
    ]
    d = TorusDiagram("grid", free_loops=loops)
    path = tmp_path / "grid.json"
    fileformat.write(path, d)
    back = fileformat.read(path, validate=False).diagram
    assert back.loop_map["H"].over_marks == d.loop_map["H"].over_marks


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(catalog.names()), st.text(max_size=12))
def test_source_and_name_survive(name, source):
    d = catalog.get(name).replace(name=name + " copy")
    motif = fileformat.loads(fileformat.serialize(d, source))
    assert (motif.name, motif.source) == (name + " copy", source)
