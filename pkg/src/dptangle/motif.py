"""Combinatorial motifs on the flat torus.

A :class:`TorusDiagram` is a link diagram drawn on the fundamental domain of a
periodic lattice. Crossings carry a sign and four ports; oriented edges join an
out-port to an in-port and record, as a :class:`WrapVector`, how many times
they cross the identified sides of the domain. Crossing-free components are
stored as :class:`FreeLoop` records.

The functions at the bottom of the module (:func:`validate`,
:func:`trace_components`, :func:`crossing_offsets`, :func:`linking_profile`)
are the base computations the rest of the package consumes.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple

from . import lattice

UNDER_IN, UNDER_OUT, OVER_IN, OVER_OUT = "under-in", "under-out", "over-in", "over-out"
PORTS = (UNDER_IN, UNDER_OUT, OVER_IN, OVER_OUT)
IN_PORTS = frozenset({UNDER_IN, OVER_IN})
OUT_PORTS = frozenset({UNDER_OUT, OVER_OUT})

# counterclockwise port order around a crossing, fixed by its sign
ROTATION = {
    1: (UNDER_IN, OVER_OUT, UNDER_OUT, OVER_IN),
    -1: (UNDER_IN, OVER_IN, UNDER_OUT, OVER_OUT),
}
_NEXT_CCW = {
    s: {p: order[(k + 1) % 4] for k, p in enumerate(order)} for s, order in ROTATION.items()
}


def port(level: str, direction: str) -> str:
    return f"{level}-{direction}"


def level_of(p: str) -> str:
    return p.split("-", 1)[0]


def next_ccw(sign: int, p: str) -> str:
    return _NEXT_CCW[sign][p]


class DiagramError(ValueError):
    """Raised when an operation needs a valid diagram and gets an invalid one."""


class WrapVector(NamedTuple):
    """Integer displacement (du, dv) in lattice coordinates."""

    du: int
    dv: int

    def __add__(self, other):  # type: ignore[override]
        return WrapVector(self[0] + other[0], self[1] + other[1])

    def __sub__(self, other):
        return WrapVector(self[0] - other[0], self[1] - other[1])

    def __neg__(self):
        return WrapVector(-self[0], -self[1])

    def __bool__(self):
        return self[0] != 0 or self[1] != 0

    def __str__(self):
        return f"({self[0]},{self[1]})"


ZERO = WrapVector(0, 0)


def wv(v) -> WrapVector:
    if isinstance(v, WrapVector):
        return v
    du, dv = v
    if isinstance(du, bool) or isinstance(dv, bool) or not isinstance(du, int) or not isinstance(dv, int):
        raise TypeError(f"wrap vector needs two integers, got {v!r}")
    return WrapVector(du, dv)


@dataclass(frozen=True)
class Crossing:
    id: str
    sign: int


@dataclass(frozen=True)
class Edge:
    """Oriented strand piece from ``tail`` (crossing, out-port) to ``head`` (crossing, in-port)."""

    id: str
    tail: tuple[str, str]
    head: tuple[str, str]
    wrap: WrapVector = ZERO

    def __post_init__(self):
        object.__setattr__(self, "tail", tuple(self.tail))
        object.__setattr__(self, "head", tuple(self.head))
        object.__setattr__(self, "wrap", wv(self.wrap))


@dataclass(frozen=True)
class OverMark:
    """A declared crossing between a free loop and another free loop.

    ``translate`` is the lift offset of the under passage relative to the over
    passage, stated from the point of view of the loop carrying the mark (the
    partner mark carries the negated vector).
    """

    other: str
    translate: WrapVector
    over: bool
    sign: int

    def __post_init__(self):
        object.__setattr__(self, "translate", wv(self.translate))


@dataclass(frozen=True)
class FreeLoop:
    id: str
    wrap: WrapVector = ZERO
    over_marks: tuple[OverMark, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "wrap", wv(self.wrap))
        object.__setattr__(self, "over_marks", tuple(self.over_marks))


@dataclass(frozen=True)
class TorusDiagram:
    name: str
    crossings: tuple[Crossing, ...] = ()
    edges: tuple[Edge, ...] = ()
    free_loops: tuple[FreeLoop, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(self.crossings))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "free_loops", tuple(self.free_loops))

    @cached_property
    def crossing_map(self) -> dict[str, Crossing]:
        return {c.id: c for c in self.crossings}

    @cached_property
    def edge_map(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def loop_map(self) -> dict[str, FreeLoop]:
        return {f.id: f for f in self.free_loops}

    @cached_property
    def port_map(self) -> dict[tuple[str, str], str]:
        """(crossing id, port) -> id of the edge bound there."""
        out = {}
        for e in self.edges:
            out[e.tail] = e.id
            out[e.head] = e.id
        return out

    @cached_property
    def memo(self) -> dict:
        # per-instance scratch space for derived analyses; instances are immutable
        return {}

    def replace(self, **changes) -> "TorusDiagram":
        kw = dict(name=self.name, crossings=self.crossings, edges=self.edges,
                  free_loops=self.free_loops)
        kw.update(changes)
        return TorusDiagram(**kw)

    @property
    def has_marks(self) -> bool:
        return any(f.over_marks for f in self.free_loops)


# -- validation ---------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    kind: str
    id: str
    message: str

    def __str__(self):
        return f"{self.kind} [{self.id}]: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "ok"
        return "\n".join(str(v) for v in self.violations)


def _duplicates(ids: Iterable[str]) -> list[str]:
    seen, dup = set(), []
    for i in ids:
        if i in seen:
            dup.append(i)
        seen.add(i)
    return dup


def _match_marks(diagram: TorusDiagram) -> tuple[list[tuple], list[Violation]]:
    """Pair up over-marks of free loops into crossings.

    Returns records ``(over_loop, over_index, under_loop, under_index, translate, sign)``.
    """
    problems: list[Violation] = []
    loops = diagram.loop_map
    # marks keyed by (over loop, under loop) in list order
    overs: dict[tuple[str, str], list[tuple[int, OverMark]]] = defaultdict(list)
    unders: dict[tuple[str, str], list[tuple[int, OverMark]]] = defaultdict(list)
    for f in diagram.free_loops:
        for k, m in enumerate(f.over_marks):
            if m.other not in loops:
                problems.append(Violation("unknown mark partner", f.id,
                                          f"over-mark {k} names missing loop {m.other!r}"))
                continue
            if m.sign not in (1, -1):
                problems.append(Violation("bad sign", f.id, f"over-mark {k} has sign {m.sign!r}"))
            if m.over:
                overs[(f.id, m.other)].append((k, m))
            else:
                unders[(m.other, f.id)].append((k, m))
    records = []
    for key in sorted(set(overs) | set(unders)):
        a, b = overs.get(key, []), unders.get(key, [])
        if len(a) != len(b):
            problems.append(Violation("unmatched mark", key[0],
                                      f"{len(a)} over-marks on {key[0]!r} vs {len(b)} under-marks on {key[1]!r}"))
            continue
        for (i, mo), (j, mu) in zip(a, b):
            if mo.sign != mu.sign or mo.translate != -mu.translate:
                problems.append(Violation("inconsistent mark", key[0],
                                          f"marks {i} on {key[0]!r} and {j} on {key[1]!r} disagree"))
                continue
            records.append((key[0], i, key[1], j, mo.translate, mo.sign))
    return records, problems


def validate(diagram: TorusDiagram) -> ValidationReport:
    """Check structural consistency; violations are returned, never raised."""
    out: list[Violation] = []
    for dup in _duplicates(c.id for c in diagram.crossings):
        out.append(Violation("duplicate id", dup, "crossing id used twice"))
    for dup in _duplicates([e.id for e in diagram.edges] + [f.id for f in diagram.free_loops]):
        out.append(Violation("duplicate id", dup, "edge/loop id used twice"))
    for c in diagram.crossings:
        if c.sign not in (1, -1):
            out.append(Violation("bad sign", c.id, f"sign must be +1 or -1, got {c.sign!r}"))

    crossings = diagram.crossing_map
    bound: dict[tuple[str, str], list[str]] = defaultdict(list)
    for e in diagram.edges:
        for end, allowed in ((e.tail, OUT_PORTS), (e.head, IN_PORTS)):
            cid, p = end
            if cid not in crossings:
                out.append(Violation("unbound port", e.id, f"edge end references missing crossing {cid!r}"))
                continue
            if p not in allowed:
                what = "tail" if allowed is OUT_PORTS else "head"
                out.append(Violation("bad port", e.id, f"{what} bound to {p!r}"))
                continue
            bound[end].append(e.id)
    for c in diagram.crossings:
        for p in PORTS:
            users = bound.get((c.id, p), [])
            if not users:
                out.append(Violation("unbound port", c.id, f"port {p} has no edge"))
            elif len(users) > 1:
                out.append(Violation("port bound twice", c.id, f"port {p} bound by {', '.join(users)}"))
    _, mark_problems = _match_marks(diagram)
    out.extend(mark_problems)
    return ValidationReport(tuple(out))


def require_valid(diagram: TorusDiagram) -> None:
    if "valid" in diagram.memo:
        return
    report = validate(diagram)
    if not report.ok:
        raise DiagramError(f"invalid diagram {diagram.name!r}:\n{report}")
    diagram.memo["valid"] = True


def expand_marks(diagram: TorusDiagram) -> TorusDiagram:
    """Convert free loops that carry over-marks into edged components.

    Each matched pair of marks becomes a crossing; the loop is cut into one edge
    per mark, with wraps chosen so the crossing offsets equal the marked
    translates and the loop's total wrap is kept.
    """
    if not diagram.has_marks:
        return diagram
    require_valid(diagram)
    records, _ = _match_marks(diagram)
    crossings = list(diagram.crossings)
    # per loop: list of (mark index, crossing id, level, lift position)
    passages: dict[str, list[tuple[int, str, str, WrapVector]]] = defaultdict(list)
    counter: dict[tuple[str, str], int] = defaultdict(int)
    for over_loop, i, under_loop, j, translate, sign in records:
        n = counter[(over_loop, under_loop)]
        counter[(over_loop, under_loop)] += 1
        cid = f"{over_loop}*{under_loop}.{n}"
        crossings.append(Crossing(cid, sign))
        passages[over_loop].append((i, cid, "over", ZERO))
        passages[under_loop].append((j, cid, "under", translate))
    edges = list(diagram.edges)
    loops = []
    for f in diagram.free_loops:
        if not f.over_marks:
            loops.append(f)
            continue
        seq = sorted(passages[f.id])
        k = len(seq)
        for idx in range(k):
            _, cid, lvl, pos = seq[idx]
            _, ncid, nlvl, npos = seq[(idx + 1) % k]
            wrap = npos - pos
            if idx == k - 1:
                wrap = wrap + f.wrap
            eid = f.id if idx == 0 else f"{f.id}.{idx}"
            edges.append(Edge(eid, (cid, port(lvl, "out")), (ncid, port(nlvl, "in")), wrap))
    return TorusDiagram(diagram.name, crossings, edges, loops)


# -- components -----------------------------------------------------------------

@dataclass(frozen=True)
class Component:
    """Closed oriented strand; ``edge_cycle`` starts at the lowest edge id."""

    id: str
    edge_cycle: tuple[str, ...]
    homology: WrapVector
    free: bool = False

    @property
    def essential(self) -> bool:
        return bool(self.homology)


@dataclass(frozen=True)
class Traced:
    components: tuple[Component, ...]
    # (crossing id, level) -> (component id, lift position of the passage)
    passages: Mapping[tuple[str, str], tuple[str, WrapVector]]
    edge_owner: Mapping[str, str]
    # edge id -> lift position of its tail along the owning component
    tail_position: Mapping[str, WrapVector]


def _trace(diagram: TorusDiagram) -> Traced:
    memo = diagram.memo
    if "traced" in memo:
        return memo["traced"]
    if diagram.has_marks:
        raise DiagramError("expand over-marks before tracing (use expand_marks)")
    require_valid(diagram)
    emap, pmap = diagram.edge_map, diagram.port_map
    seen: set[str] = set()
    comps: list[Component] = []
    passages: dict[tuple[str, str], tuple[str, WrapVector]] = {}
    owner: dict[str, str] = {}
    tailpos: dict[str, WrapVector] = {}
    for start in sorted(emap):
        if start in seen:
            continue
        cycle = []
        pos = ZERO
        eid = start
        while eid not in seen:
            seen.add(eid)
            cycle.append(eid)
            e = emap[eid]
            passages[(e.tail[0], level_of(e.tail[1]))] = (start, pos)
            tailpos[eid] = pos
            owner[eid] = start
            pos = pos + e.wrap
            cid, p = e.head
            eid = pmap[(cid, port(level_of(p), "out"))]
        comps.append(Component(start, tuple(cycle), pos))
    for f in diagram.free_loops:
        comps.append(Component(f.id, (f.id,), f.wrap, free=True))
        owner[f.id] = f.id
        tailpos[f.id] = ZERO
    comps.sort(key=lambda c: c.id)
    out = Traced(tuple(comps), passages, owner, tailpos)
    memo["traced"] = out
    return out


def trace_components(diagram: TorusDiagram) -> list[Component]:
    """Partition the diagram into closed oriented components."""
    return list(_trace(expand_marks(diagram)).components)


def component_homology(component: Component, diagram: TorusDiagram | None = None) -> WrapVector:
    """Sum of wraps along the component; recomputed from ``diagram`` when given."""
    if diagram is None:
        return component.homology
    d = expand_marks(diagram)
    if component.free:
        return d.loop_map[component.id].wrap
    total = ZERO
    for eid in component.edge_cycle:
        total = total + d.edge_map[eid].wrap
    return total


# -- offsets and linking ----------------------------------------------------------

@dataclass(frozen=True)
class CrossingOffsetLabel:
    crossing: str
    over: str
    under: str
    offset: WrapVector
    sign: int


def crossing_offsets(diagram: TorusDiagram) -> list[CrossingOffsetLabel]:
    """Lift offsets at each crossing: under-passage position minus over-passage position.

    Positions are accumulated wraps along each component starting from the tail
    of its lowest-id edge, so the labels are deterministic; moving base points
    changes a pair's offsets by a constant.
    """
    d = expand_marks(diagram)
    memo = d.memo
    if "offsets" in memo:
        return memo["offsets"]
    t = _trace(d)
    labels = []
    for c in sorted(d.crossings, key=lambda c: c.id):
        oi, op = t.passages[(c.id, "over")]
        ui, up = t.passages[(c.id, "under")]
        labels.append(CrossingOffsetLabel(c.id, oi, ui, up - op, c.sign))
    memo["offsets"] = labels
    return labels


def pair_lattice(diagram: TorusDiagram, i: str, j: str) -> tuple:
    """Hermite basis of the ambiguity lattice <h_i, h_j> for a component pair."""
    homs = homology_map(diagram)
    return lattice.hnf_basis([homs[i], homs[j]])


def homology_map(diagram: TorusDiagram) -> dict[str, WrapVector]:
    d = expand_marks(diagram)
    return {c.id: c.homology for c in _trace(d).components}


def linking_profile(diagram: TorusDiagram) -> dict[tuple[tuple[str, str], WrapVector], int]:
    """Signed over-crossing sums per ordered component pair and offset class.

    Keys are ``((over, under), offset)`` with the offset reduced to its canonical
    representative modulo the two components' homology vectors (translating a
    strand along its own period gives the same lifted strand). Zero sums are
    dropped.
    """
    d = expand_marks(diagram)
    memo = d.memo
    if "profile" in memo:
        return memo["profile"]
    homs = homology_map(d)
    bases: dict[tuple[str, str], tuple] = {}
    acc: dict[tuple[tuple[str, str], WrapVector], int] = defaultdict(int)
    for lab in crossing_offsets(d):
        pair = (lab.over, lab.under)
        basis = bases.get(pair)
        if basis is None:
            basis = bases[pair] = lattice.hnf_basis([homs[lab.over], homs[lab.under]])
        acc[(pair, WrapVector(*lattice.reduce_mod(lab.offset, basis)))] += lab.sign
    out = {k: v for k, v in sorted(acc.items()) if v}
    memo["profile"] = out
    return out


def reverse_component(diagram: TorusDiagram, component_id: str) -> TorusDiagram:
    """Reverse the orientation of one component.

    Crossing signs flip where exactly one of the two strands is reversed.
    """
    d = expand_marks(diagram)
    t = _trace(d)
    comp = next(c for c in t.components if c.id == component_id)
    if comp.free:
        loops = [FreeLoop(f.id, -f.wrap) if f.id == component_id else f for f in d.free_loops]
        return d.replace(free_loops=loops)
    members = set(comp.edge_cycle)
    flip = {}
    for c in d.crossings:
        a = t.passages[(c.id, "over")][0] == component_id
        b = t.passages[(c.id, "under")][0] == component_id
        flip[c.id] = a != b

    def swap(end, direction):
        cid, p = end
        return (cid, port(level_of(p), direction))

    edges = []
    for e in d.edges:
        if e.id in members:
            edges.append(Edge(e.id, swap(e.head, "out"), swap(e.tail, "in"), -e.wrap))
        else:
            edges.append(e)
    crossings = [Crossing(c.id, -c.sign if flip[c.id] else c.sign) for c in d.crossings]
    return d.replace(crossings=crossings, edges=edges)
