"""Directional elements, directions, directional type and the axis-motif.

Every component of a motif belongs to exactly one directional element: an
essential component, a chain-link, a full polycatenane, or an isolated knot.
Elements carry a :class:`Direction` (a sign-normalized vector, zero, or
infinity), and the whole motif is summarized by the set of those directions.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import asdict, dataclass
from typing import Iterable

from . import lattice
from .compounds import LINKING, compounds, motif_class, resolve_policy
from .motif import DiagramError, TorusDiagram, WrapVector, expand_marks, trace_components

ZERO_KIND, VECTOR_KIND, INFINITY_KIND = "zero", "vector", "infinity"

ISOLATED_KNOT = "isolated-knot"
ESSENTIAL = "essential-component"
CHAIN_LINK = "chain-link"
FULL_POLYCATENANE = "full-polycatenane"


@dataclass(frozen=True, order=True)
class Direction:
    """Zero, Infinity, or a vector identified with its negative."""

    kind: str
    a: int = 0
    b: int = 0

    def __post_init__(self):
        if self.kind == VECTOR_KIND:
            a, b = lattice.normalize_sign((self.a, self.b))
            if (a, b) == (0, 0):
                raise ValueError("a vector direction must be nonzero")
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)
        elif self.kind in (ZERO_KIND, INFINITY_KIND):
            object.__setattr__(self, "a", 0)
            object.__setattr__(self, "b", 0)
        else:
            raise ValueError(f"unknown direction kind {self.kind!r}")

    @classmethod
    def vector(cls, a: int, b: int) -> "Direction":
        return cls(VECTOR_KIND, a, b)

    @property
    def is_vector(self) -> bool:
        return self.kind == VECTOR_KIND

    def sort_key(self):
        return ({ZERO_KIND: 0, VECTOR_KIND: 1, INFINITY_KIND: 2}[self.kind], self.a, self.b)

    def __str__(self):
        if self.kind == ZERO_KIND:
            return "(0,0)"
        if self.kind == INFINITY_KIND:
            return "(∞,∞)"
        return f"({self.a},{self.b})"

    @classmethod
    def parse(cls, text: str) -> "Direction":
        t = text.replace(" ", "")
        if t == "(0,0)":
            return ZERO_DIRECTION
        if t in ("(∞,∞)", "(inf,inf)"):
            return INFINITY_DIRECTION
        a, b = t.strip("()").split(",")
        return cls.vector(int(a), int(b))


ZERO_DIRECTION = Direction(ZERO_KIND)
INFINITY_DIRECTION = Direction(INFINITY_KIND)


def normalize(v: Iterable[int]) -> Direction:
    a, b = v
    if (a, b) == (0, 0):
        return ZERO_DIRECTION
    return Direction.vector(a, b)


@dataclass(frozen=True)
class Element:
    kind: str
    members: tuple[str, ...]
    direction: Direction
    compound: str
    # (longitude crossings, meridian crossings) summed over members
    boundary_intersections: tuple[int, int]
    # per member: the wrap vectors of its edges in traversal order
    edge_wraps: tuple[tuple[tuple[int, int], ...], ...] = ()


def _boundary_counts(wraps: Iterable[WrapVector]) -> tuple[int, int]:
    wraps = list(wraps)
    return sum(1 for w in wraps if w.dv), sum(1 for w in wraps if w.du)


def elements(diagram: TorusDiagram, policy: str = LINKING) -> list[Element]:
    """Split the motif into directional elements, grouped by compound."""
    policy = resolve_policy(policy)
    d = expand_marks(diagram)
    key = ("elements", policy)
    if key in d.memo:
        return d.memo[key]
    comp_by_id = {c.id: c for c in trace_components(d)}

    def wraps_of(cid):
        comp = comp_by_id[cid]
        if comp.free:
            return (d.loop_map[cid].wrap,)
        return tuple(d.edge_map[e].wrap for e in comp.edge_cycle)

    def make(kind, members, direction, compound):
        seqs = tuple(wraps_of(m) for m in members)
        lon = sum(_boundary_counts(s)[0] for s in seqs)
        mer = sum(_boundary_counts(s)[1] for s in seqs)
        return Element(kind, tuple(members), direction, compound, (lon, mer),
                       tuple(tuple(tuple(w) for w in s) for s in seqs))

    out = []
    for cmp in compounds(d, policy):
        for cid in cmp.essential:
            out.append(make(ESSENTIAL, (cid,), normalize(cmp.homologies[cid]), cmp.id))
        for cluster in cmp.null_clusters:
            for g in cluster.groups:
                if g.rank == 1:
                    out.append(make(CHAIN_LINK, g.components, normalize(g.direction), cmp.id))
                else:
                    out.append(make(FULL_POLYCATENANE, g.components, INFINITY_DIRECTION, cmp.id))
            for cid in cluster.isolated:
                out.append(make(ISOLATED_KNOT, (cid,), ZERO_DIRECTION, cmp.id))
    d.memo[key] = out
    return out


def direction_multiplicities(diagram: TorusDiagram, policy: str = LINKING) -> dict[Direction, int]:
    counts = Counter(e.direction for e in elements(diagram, policy))
    return {k: counts[k] for k in sorted(counts, key=Direction.sort_key)}


def motif_direction(diagram: TorusDiagram, policy: str = LINKING) -> frozenset[Direction]:
    return frozenset(e.direction for e in elements(diagram, policy))


def direction_count(diagram: TorusDiagram, policy: str = LINKING) -> int:
    return len(motif_direction(diagram, policy))


@dataclass(frozen=True)
class DirectionalType:
    n: int
    zero: bool
    infinity: bool

    def __str__(self):
        parts = []
        if self.n:
            parts.append(str(self.n))
        if self.zero:
            parts.append("0")
        if self.infinity:
            parts.append("∞")
        inner = parts[0] if len(parts) == 1 else "(" + ",".join(parts) + ")"
        return f"type {inner}"

    @classmethod
    def parse(cls, text: str) -> "DirectionalType":
        body = text.removeprefix("type").strip().strip("()")
        n, zero, inf = 0, False, False
        for part in body.split(","):
            part = part.strip()
            if part == "0":
                zero = True
            elif part in ("∞", "inf"):
                inf = True
            else:
                n = int(part)
        return cls(n, zero, inf)


def directional_type(directions: Iterable[Direction]) -> DirectionalType:
    dirs = set(directions)
    if not dirs:
        raise ValueError("no elements")
    n = sum(1 for x in dirs if x.is_vector)
    return DirectionalType(n, ZERO_DIRECTION in dirs, INFINITY_DIRECTION in dirs)


# -- axis-motif ------------------------------------------------------------------

@dataclass(frozen=True)
class AxisMotif:
    """Torus links (a, b, m), trivial knots, and noncontractible loops.

    ``noncontractible_loops`` holds one (longitude, meridian) crossing count
    pair per member of a full polycatenane.
    """

    torus_links: tuple[tuple[int, int, int], ...]
    trivial_knots: int
    noncontractible_loops: tuple[tuple[int, int], ...]

    def __eq__(self, other):
        if not isinstance(other, AxisMotif):
            return NotImplemented
        return (Counter(self.torus_links) == Counter(other.torus_links)
                and self.trivial_knots == other.trivial_knots
                and Counter(self.noncontractible_loops) == Counter(other.noncontractible_loops))

    def __hash__(self):
        return hash((tuple(sorted(self.torus_links)), self.trivial_knots,
                     tuple(sorted(self.noncontractible_loops))))

    @property
    def direction_count(self) -> int:
        return (len({(a, b) for a, b, _ in self.torus_links})
                + (1 if self.trivial_knots else 0)
                + (1 if self.noncontractible_loops else 0))

    def parts(self) -> list[str]:
        out = []
        for a, b, m in sorted(self.torus_links):
            if m == 1:
                out.append(f"({a},{b})-torus knot")
            else:
                out.append(f"({m * a},{m * b})-torus link")
        if self.trivial_knots:
            n = self.trivial_knots
            out.append(f"{n} trivial knot{'s' if n != 1 else ''}")
        if self.noncontractible_loops:
            n = len(self.noncontractible_loops)
            out.append(f"{n} noncontractible loop{'s' if n != 1 else ''}")
        return out

    def __str__(self):
        return ", ".join(self.parts()) or "empty"


def axis_motif(diagram: TorusDiagram, policy: str = LINKING) -> AxisMotif:
    """Replace every element by its axis; parallel axes merge motif-wide."""
    links: Counter = Counter()
    knots = 0
    loops = []
    for e in elements(diagram, policy):
        if e.kind in (ESSENTIAL, CHAIN_LINK):
            links[(e.direction.a, e.direction.b)] += 1
        elif e.kind == ISOLATED_KNOT:
            knots += 1
        else:
            for seq in e.edge_wraps:
                loops.append(_boundary_counts(WrapVector(*w) for w in seq))
    return AxisMotif(
        tuple(sorted((a, b, m) for (a, b), m in links.items())),
        knots,
        tuple(sorted(loops)),
    )


# -- invariant report --------------------------------------------------------------

@dataclass(frozen=True)
class CompoundSummary:
    id: str
    components: tuple[str, ...]
    compound_class: str
    subclass: str
    rank: int
    generators: tuple[tuple[int, int], ...]
    chains: tuple[tuple[str, ...], ...] = ()


@dataclass(frozen=True)
class InvariantReport:
    name: str
    policy: str
    components: int
    crossings: int
    compounds: tuple[CompoundSummary, ...]
    motif_class: str
    elements: tuple[tuple[str, tuple[str, ...], str], ...]
    directions: tuple[str, ...]
    direction_count: int
    directional_type: str
    axis_motif: tuple[tuple[tuple[int, int, int], ...], int, tuple[tuple[int, int], ...]]
    flags: tuple[str, ...] = ()

    @property
    def subclasses(self) -> tuple[str, ...]:
        return tuple(sorted(c.subclass for c in self.compounds))

    @property
    def axis(self) -> AxisMotif:
        return AxisMotif(*self.axis_motif)

    def summary(self) -> str:
        names = sorted({c.subclass.removesuffix(" compound") for c in self.compounds})
        kind = self.directional_type.removeprefix("type ")
        return f"class: {self.motif_class}; subclass: {', '.join(names)}; type: {kind}"

    def text(self) -> str:
        lines = [
            self.summary(),
            f"name: {self.name}",
            f"policy: {self.policy}-adjacency",
            f"components: {self.components}",
            f"crossings: {self.crossings}",
            f"motif class: {self.motif_class}",
            f"compounds: {len(self.compounds)}",
        ]
        for c in self.compounds:
            gens = " ".join(f"({a},{b})" for a, b in c.generators) or "-"
            lines.append(f"  {c.id} [{' '.join(c.components)}] class={c.compound_class} "
                         f"rank={c.rank} generators={gens} subclass={c.subclass}")
            for chain in c.chains:
                lines.append(f"    chain: {' '.join(chain)}")
        lines.append(f"elements: {len(self.elements)}")
        for kind, members, direction in self.elements:
            lines.append(f"  {kind} [{' '.join(members)}] direction {direction}")
        lines.append(f"direction: {{{', '.join(self.directions)}}}")
        lines.append(f"direction count: {self.direction_count}")
        lines.append(f"directional type: {self.directional_type}")
        lines.append(f"axis-motif: {self.axis}")
        if self.flags:
            lines.append(f"flags: {'; '.join(self.flags)}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "InvariantReport":
        def tup(x):
            return tuple(tup(y) for y in x) if isinstance(x, list) else x

        comps = tuple(
            CompoundSummary(
                c["id"], tup(c["components"]), c["compound_class"], c["subclass"],
                c["rank"], tup(c["generators"]), tup(c.get("chains", [])),
            )
            for c in data["compounds"]
        )
        return cls(
            name=data["name"], policy=data["policy"], components=data["components"],
            crossings=data["crossings"], compounds=comps, motif_class=data["motif_class"],
            elements=tup(data["elements"]), directions=tup(data["directions"]),
            direction_count=data["direction_count"], directional_type=data["directional_type"],
            axis_motif=tup(data["axis_motif"]), flags=tup(data.get("flags", [])),
        )

    @classmethod
    def from_json(cls, text: str) -> "InvariantReport":
        return cls.from_dict(json.loads(text))


def invariant_report(diagram: TorusDiagram, policy: str = LINKING) -> InvariantReport:
    policy = resolve_policy(policy)
    d = expand_marks(diagram)
    comps = trace_components(d)
    if not comps:
        raise DiagramError("empty motif")
    cmps = compounds(d, policy)
    els = elements(d, policy)
    dirs = sorted(motif_direction(d, policy), key=Direction.sort_key)
    ax = axis_motif(d, policy)
    flags = []
    for c in comps:
        if c.homology and lattice.primitive(c.homology) != tuple(c.homology):
            flags.append(f"component {c.id} has non-primitive homology {c.homology}")
    summaries = tuple(
        CompoundSummary(
            c.id, c.components, str(c.compound_class), c.subclass, c.rank,
            tuple(tuple(g) for g in c.generators),
            tuple(g.components for cl in c.null_clusters for g in cl.groups if g.rank == 1),
        )
        for c in cmps
    )
    return InvariantReport(
        name=diagram.name,
        policy=policy,
        components=len(comps),
        crossings=len(d.crossings),
        compounds=summaries,
        motif_class=str(motif_class(d, policy)),
        elements=tuple((e.kind, e.members, str(e.direction)) for e in els),
        directions=tuple(str(x) for x in dirs),
        direction_count=len(dirs),
        directional_type=str(directional_type(dirs)),
        axis_motif=(ax.torus_links, ax.trivial_knots, ax.noncontractible_loops),
        flags=tuple(flags),
    )


REPORT_INVARIANTS = (
    "components", "crossings", "motif_class", "subclasses", "directions",
    "direction_count", "directional_type", "axis_motif",
)


def report_differences(r1: InvariantReport, r2: InvariantReport) -> set[str]:
    """Names of the invariants on which two reports disagree."""
    out = set()
    for name in REPORT_INVARIANTS:
        a, b = getattr(r1, name), getattr(r2, name)
        if name == "directions":
            a, b = set(a), set(b)
        elif name == "axis_motif":
            a, b = AxisMotif(*a), AxisMotif(*b)
        if a != b:
            out.add(name)
    return out
