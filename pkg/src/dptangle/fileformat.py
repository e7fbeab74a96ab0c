"""JSON motif files.

A motif file is a UTF-8 JSON object::

    {
      "name": "E4",
      "source": "built-in catalog",          # optional
      "crossings": [{"id": "c1", "sign": 1}, ...],
      "edges": [{"id": "A.00",
                 "from": {"crossing": "c1", "port": "over-out"},
                 "to": {"crossing": "c2", "port": "under-in"},
                 "wrap": [0, 0]}, ...],
      "free_loops": [{"id": "L", "wrap": [1, 0]}, ...]
    }

A free loop may carry a ``marks`` list declaring crossings with another free
loop (``{"other": "V", "translate": [0, 0], "over": true, "sign": 1}``).

:func:`serialize` sorts every list by id and writes one record per line in a fixed
layout, so serializing a parsed file reproduces it byte for byte.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .motif import (
    PORTS,
    Crossing,
    DiagramError,
    Edge,
    FreeLoop,
    OverMark,
    TorusDiagram,
    require_valid,
)


class ParseError(DiagramError):
    """Malformed motif file. ``where`` is a key path or a line/column position."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where
        self.message = message


@dataclass(frozen=True)
class MotifFile:
    diagram: TorusDiagram
    source: str | None = None

    @property
    def name(self) -> str:
        return self.diagram.name


# -- reading ------------------------------------------------------------------------

def _expect(value, kind, where: str, what: str):
    if kind is int:
        ok = isinstance(value, int) and not isinstance(value, bool)
    else:
        ok = isinstance(value, kind)
    if not ok:
        raise ParseError(where, f"expected {what}, got {json.dumps(value)}")
    return value


def _object(value, where: str, required: tuple[str, ...], optional: tuple[str, ...] = ()) -> dict:
    _expect(value, dict, where or "top level", "an object")
    for key in required:
        if key not in value:
            raise ParseError(where or "top level", f"missing key {key!r}")
    extra = sorted(set(value) - set(required) - set(optional))
    if extra:
        raise ParseError(f"{where}.{extra[0]}" if where else extra[0], "unknown key")
    return value


def _vector(value, where: str) -> tuple[int, int]:
    _expect(value, list, where, "a list [du, dv]")
    if len(value) != 2:
        raise ParseError(where, f"expected 2 integers, got {len(value)}")
    return (_expect(value[0], int, f"{where}[0]", "an integer"),
            _expect(value[1], int, f"{where}[1]", "an integer"))


def _list(data: dict, key: str) -> list:
    return _expect(data.get(key, []), list, key, "a list")


def _end(value, where: str) -> tuple[str, str]:
    _object(value, where, ("crossing", "port"))
    c = _expect(value["crossing"], str, f"{where}.crossing", "a crossing id")
    p = _expect(value["port"], str, f"{where}.port", "a port name")
    if p not in PORTS:
        raise ParseError(f"{where}.port", f"unknown port {p!r}; expected one of {', '.join(PORTS)}")
    return c, p


def from_data(data) -> MotifFile:
    """Build a :class:`MotifFile` from decoded JSON, without validating the diagram."""
    _object(data, "", ("name", "crossings", "edges", "free_loops"), ("source",))
    name = _expect(data["name"], str, "name", "a string")
    source = data.get("source")
    if source is not None:
        _expect(source, str, "source", "a string")

    crossings = []
    for k, raw in enumerate(_list(data, "crossings")):
        where = f"crossings[{k}]"
        _object(raw, where, ("id", "sign"))
        sign = _expect(raw["sign"], int, f"{where}.sign", "an integer")
        if sign not in (1, -1):
            raise ParseError(f"{where}.sign", f"sign must be 1 or -1, got {sign}")
        crossings.append(Crossing(_expect(raw["id"], str, f"{where}.id", "a string"), sign))

    edges = []
    for k, raw in enumerate(_list(data, "edges")):
        where = f"edges[{k}]"
        _object(raw, where, ("id", "from", "to", "wrap"))
        edges.append(Edge(
            _expect(raw["id"], str, f"{where}.id", "a string"),
            _end(raw["from"], f"{where}.from"),
            _end(raw["to"], f"{where}.to"),
            _vector(raw["wrap"], f"{where}.wrap"),
        ))

    loops = []
    for k, raw in enumerate(_list(data, "free_loops")):
        where = f"free_loops[{k}]"
        _object(raw, where, ("id", "wrap"), ("marks",))
        marks = []
        for m, mark in enumerate(_expect(raw.get("marks", []), list, f"{where}.marks", "a list")):
            mw = f"{where}.marks[{m}]"
            _object(mark, mw, ("other", "translate", "over", "sign"))
            sign = _expect(mark["sign"], int, f"{mw}.sign", "an integer")
            if sign not in (1, -1):
                raise ParseError(f"{mw}.sign", f"sign must be 1 or -1, got {sign}")
            marks.append(OverMark(
                _expect(mark["other"], str, f"{mw}.other", "a loop id"),
                _vector(mark["translate"], f"{mw}.translate"),
                _expect(mark["over"], bool, f"{mw}.over", "true or false"),
                sign,
            ))
        loops.append(FreeLoop(
            _expect(raw["id"], str, f"{where}.id", "a string"),
            _vector(raw["wrap"], f"{where}.wrap"),
            tuple(marks),
        ))
    return MotifFile(TorusDiagram(name, tuple(crossings), tuple(edges), tuple(loops)), source)


def loads(text: str | bytes, validate: bool = True) -> MotifFile:
    """Parse motif-file text. Raises :class:`ParseError` or, for an invalid diagram, DiagramError."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"byte {exc.start}", "input is not UTF-8") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    motif = from_data(data)
    if validate:
        require_valid(motif.diagram)
    return motif


def parse(text: str | bytes, validate: bool = True) -> TorusDiagram:
    return loads(text, validate).diagram


def read(path: str | Path, validate: bool = True) -> MotifFile:
    return loads(Path(path).read_bytes(), validate)


# -- writing ------------------------------------------------------------------------

def to_data(diagram: TorusDiagram, source: str | None = None) -> dict:
    data: dict = {"name": diagram.name}
    if source is not None:
        data["source"] = source
    data["crossings"] = [{"id": c.id, "sign": c.sign}
                         for c in sorted(diagram.crossings, key=lambda c: c.id)]
    data["edges"] = [
        {
            "id": e.id,
            "from": {"crossing": e.tail[0], "port": e.tail[1]},
            "to": {"crossing": e.head[0], "port": e.head[1]},
            "wrap": list(e.wrap),
        }
        for e in sorted(diagram.edges, key=lambda e: e.id)
    ]
    loops = []
    for f in sorted(diagram.free_loops, key=lambda f: f.id):
        entry: dict = {"id": f.id, "wrap": list(f.wrap)}
        if f.over_marks:
            # marks are kept in their given order: the order fixes which
            # passages pair up when the loop meets the same partner twice
            entry["marks"] = [
                {"other": m.other, "translate": list(m.translate), "over": m.over, "sign": m.sign}
                for m in f.over_marks
            ]
        loops.append(entry)
    data["free_loops"] = loops
    return data


def dumps(diagram: TorusDiagram | MotifFile, source: str | None = None) -> str:
    """Pretty-printed JSON with one record per line."""
    if isinstance(diagram, MotifFile):
        source = diagram.source if source is None else source
        diagram = diagram.diagram
    data = to_data(diagram, source)

    def enc(value) -> str:
        return json.dumps(value, ensure_ascii=False, separators=(", ", ": "))

    parts = []
    for key, value in data.items():
        if isinstance(value, list):
            if value:
                body = ",\n".join(f"    {enc(item)}" for item in value)
                parts.append(f"  {enc(key)}: [\n{body}\n  ]")
            else:
                parts.append(f"  {enc(key)}: []")
        else:
            parts.append(f"  {enc(key)}: {enc(value)}")
    return "{\n" + ",\n".join(parts) + "\n}\n"


def serialize(diagram: TorusDiagram | MotifFile, source: str | None = None) -> bytes:
    return dumps(diagram, source).encode("utf-8")


def write(path: str | Path, diagram: TorusDiagram | MotifFile, source: str | None = None) -> None:
    Path(path).write_bytes(serialize(diagram, source))
