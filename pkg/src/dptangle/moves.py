"""Equivalence moves on torus diagrams and a random-walk invariance checker.

Moves: gauge shifts (moving crossings between lattice cells), rebase (a
unimodular change of lattice basis, which includes Dehn twists), finite covers
(passing to a sublattice), and Reidemeister moves R1, R2, R3 located on traced
faces of the diagram.
"""
from __future__ import annotations

import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import lattice
from .motif import (
    OUT_PORTS,
    ZERO,
    Crossing,
    Edge,
    FreeLoop,
    OverMark,
    TorusDiagram,
    WrapVector,
    expand_marks,
    level_of,
    next_ccw,
    port,
    require_valid,
    wv,
)


class MoveError(ValueError):
    """A move was requested at a site where it does not apply."""


# -- gauge, rebase, cover ------------------------------------------------------------

def gauge_shift(diagram: TorusDiagram, g: Mapping[str, Sequence[int]]) -> TorusDiagram:
    """Move each crossing ``c`` to the cell shifted by ``g[c]``.

    An edge's wrap becomes ``wrap + g(head) - g(tail)``; homologies are unchanged.
    """
    d = expand_marks(diagram)
    unknown = set(g) - set(d.crossing_map)
    if unknown:
        raise MoveError(f"gauge names unknown crossings: {', '.join(sorted(unknown))}")
    shift = {c: wv(tuple(v)) for c, v in g.items()}
    edges = [
        Edge(e.id, e.tail, e.head,
             e.wrap + shift.get(e.head[0], ZERO) - shift.get(e.tail[0], ZERO))
        for e in d.edges
    ]
    return d.replace(edges=edges)


def rebase(diagram: TorusDiagram, m, allow_reflection: bool = False) -> TorusDiagram:
    """Change lattice basis: every wrap vector ``w`` becomes ``M w``.

    ``det M`` must be +1; -1 is accepted only with ``allow_reflection`` (this
    reverses the torus orientation and is not an equivalence).
    """
    mat = lattice.as_matrix(m)
    dt = lattice.det(mat)
    if dt not in (1, -1):
        raise MoveError(f"rebase matrix {mat} is not unimodular (det={dt})")
    if dt == -1 and not allow_reflection:
        raise MoveError(f"rebase matrix {mat} reverses orientation (det=-1)")

    def act(v):
        return WrapVector(*lattice.apply(mat, v))

    edges = [Edge(e.id, e.tail, e.head, act(e.wrap)) for e in diagram.edges]
    loops = [
        FreeLoop(f.id, act(f.wrap),
                 [OverMark(k.other, act(k.translate), k.over, k.sign) for k in f.over_marks])
        for f in diagram.free_loops
    ]
    return diagram.replace(edges=edges, free_loops=loops)


def coset_representatives(m) -> list[tuple[int, int]]:
    """Representatives of Z^2 / M Z^2 (M given by its columns), in sorted order."""
    mat = lattice.as_matrix(m)
    basis = lattice.hnf_basis(lattice.columns(mat))
    if len(basis) < 2:
        raise MoveError(f"matrix {mat} is singular")
    (a, _), (_, d) = basis
    return sorted((x, y) for x in range(a) for y in range(d))


def cover(diagram: TorusDiagram, m) -> TorusDiagram:
    """The motif over the sublattice spanned by the columns of ``L``.

    Each crossing gets one copy per coset of Z^2 / L Z^2; an edge with wrap
    ``w`` leaving copy ``r`` arrives at the copy ``r + w`` reduced, and its new
    wrap is the remaining translation in the new basis.
    """
    mat = lattice.as_matrix(m)
    n = lattice.det(mat)
    if n < 1:
        raise MoveError(f"cover matrix {mat} must have positive determinant, got {n}")
    d = expand_marks(diagram)
    reps = coset_representatives(mat)
    basis = lattice.hnf_basis(lattice.columns(mat))

    def tag(x, r):
        return x if n == 1 else f"{x}@{r[0]},{r[1]}"

    def land(r, w):
        t = (r[0] + w[0], r[1] + w[1])
        r2 = lattice.reduce_mod(t, basis)
        k = lattice.solve_exact(mat, (t[0] - r2[0], t[1] - r2[1]))
        return r2, WrapVector(*k)

    crossings = [Crossing(tag(c.id, r), c.sign) for c in d.crossings for r in reps]
    edges = []
    for e in d.edges:
        for r in reps:
            r2, k = land(r, e.wrap)
            edges.append(Edge(tag(e.id, r), (tag(e.tail[0], r), e.tail[1]),
                              (tag(e.head[0], r2), e.head[1]), k))
    loops = []
    for f in d.free_loops:
        seen = set()
        for r in reps:
            if r in seen:
                continue
            t, total = r, ZERO
            while True:
                seen.add(t)
                t, k = land(t, f.wrap)
                total = total + k
                if t == r:
                    break
            loops.append(FreeLoop(tag(f.id, r), total))
    return TorusDiagram(d.name, crossings, edges, loops)


# -- faces -------------------------------------------------------------------------------

@dataclass(frozen=True)
class Face:
    """A boundary walk of the ribbon graph.

    ``darts[k]`` is the (crossing, port) the walk leaves through; ``steps[k]``
    is the edge traversed, with +1 when walked tail to head.
    """

    darts: tuple[tuple[str, str], ...]
    steps: tuple[tuple[str, int], ...]
    net: WrapVector

    @property
    def crossings(self) -> tuple[str, ...]:
        return tuple(c for c, _ in self.darts)

    @property
    def edges(self) -> tuple[str, ...]:
        return tuple(e for e, _ in self.steps)

    def __len__(self):
        return len(self.darts)


def faces(diagram: TorusDiagram) -> list[Face]:
    """Trace the faces of the diagram's rotation system (free loops excluded)."""
    d = expand_marks(diagram)
    if "faces" in d.memo:
        return d.memo["faces"]
    require_valid(d)
    cmap, emap, pmap = d.crossing_map, d.edge_map, d.port_map
    seen = set()
    out = []
    for c in sorted(cmap):
        for p in sorted(("under-in", "under-out", "over-in", "over-out")):
            start = (c, p)
            if start in seen:
                continue
            darts, steps, net = [], [], ZERO
            dart = start
            while dart not in seen:
                seen.add(dart)
                e = emap[pmap[dart]]
                if e.tail == dart:
                    other, direction = e.head, 1
                    net = net + e.wrap
                else:
                    other, direction = e.tail, -1
                    net = net - e.wrap
                darts.append(dart)
                steps.append((e.id, direction))
                dart = (other[0], next_ccw(cmap[other[0]].sign, other[1]))
            out.append(Face(tuple(darts), tuple(steps), net))
    d.memo["faces"] = out
    return out


def connected_pieces(diagram: TorusDiagram) -> dict[str, int]:
    """Map every crossing and edge id to the index of its connected piece."""
    d = expand_marks(diagram)
    if "pieces" in d.memo:
        return d.memo["pieces"]
    parent = {c: c for c in d.crossing_map}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in d.edges:
        a, b = find(e.tail[0]), find(e.head[0])
        if a != b:
            parent[max(a, b)] = min(a, b)
    roots = sorted({find(c) for c in parent})
    index = {r: k for k, r in enumerate(roots)}
    out = {c: index[find(c)] for c in parent}
    for e in d.edges:
        out[e.id] = out[e.tail[0]]
    d.memo["pieces"] = out
    return out


# -- move sites ---------------------------------------------------------------------------

R1_PLUS, R1_MINUS, R2_PLUS, R2_MINUS, R3 = "R1+", "R1-", "R2+", "R2-", "R3"
KINDS = (R1_PLUS, R1_MINUS, R2_PLUS, R2_MINUS, R3)


@dataclass(frozen=True)
class MoveSite:
    """Where and how to apply a Reidemeister move.

    R1+ needs one edge or free loop, a sign and the level the strand takes
    first; R2+ needs the over strand, the under strand, the relative offset
    and the sign of the first new crossing; the removing moves name crossings.
    """

    kind: str
    targets: tuple[str, ...]
    sign: int = 1
    level: str = "over"
    offset: WrapVector = ZERO

    def __str__(self):
        if self.kind == R1_PLUS:
            return f"R1+:{self.targets[0]}:{self.sign:+d}:{self.level}"
        if self.kind == R2_PLUS:
            return f"R2+:{self.targets[0]}:{self.targets[1]}:{self.offset.du},{self.offset.dv}:{self.sign:+d}"
        return f"{self.kind}:{','.join(self.targets)}"

    @classmethod
    def parse(cls, text: str) -> "MoveSite":
        parts = text.strip().split(":")
        kind = parts[0]
        try:
            if kind == R1_PLUS:
                _, target, sign, lvl = parts
                if lvl not in ("over", "under"):
                    raise ValueError(lvl)
                return cls(kind, (target,), _sign(sign), lvl)
            if kind == R2_PLUS:
                _, over, under, off, sign = parts
                du, dv = (int(x) for x in off.split(","))
                return cls(kind, (over, under), _sign(sign), offset=WrapVector(du, dv))
            if kind in (R1_MINUS, R2_MINUS, R3):
                _, ids = parts
                targets = tuple(x for x in ids.split(",") if x)
                want = {R1_MINUS: 1, R2_MINUS: 2, R3: 3}[kind]
                if len(targets) != want:
                    raise ValueError(ids)
                return cls(kind, targets)
        except ValueError:
            pass
        raise ValueError(
            f"bad move site {text!r}; expected e.g. R1+:e1:+1:over, R1-:c3, "
            "R2+:e1:e2:0,0:+1, R2-:c1,c2 or R3:c1,c2,c3"
        )


def _sign(text: str) -> int:
    v = int(text)
    if v not in (1, -1):
        raise ValueError(text)
    return v


def _fresh(prefix: str, used: set[str]) -> str:
    k = 1
    while f"{prefix}{k}" in used:
        k += 1
    name = f"{prefix}{k}"
    used.add(name)
    return name


def _fresh_piece(base: str, used: set[str]) -> str:
    return _fresh(f"{base}.", used)


def _used_ids(d: TorusDiagram) -> set[str]:
    return set(d.crossing_map) | set(d.edge_map) | set(d.loop_map)


def _tail_position(d: TorusDiagram, eid: str) -> WrapVector:
    from .motif import _trace
    return _trace(d).tail_position[eid]


def _remove_crossings(d: TorusDiagram, ids: Iterable[str]) -> TorusDiagram:
    """Delete crossings, joining the edges through them.

    A joined chain keeps the id of its first edge and the sum of the wraps.
    Strands that pass only through deleted crossings become free loops.
    """
    gone = set(ids)
    emap, pmap = d.edge_map, d.port_map
    used: set[str] = set()
    edges = []
    for e in d.edges:
        if e.tail[0] in gone:
            continue
        used.add(e.id)
        wrap, head = e.wrap, e.head
        while head[0] in gone:
            nxt = emap[pmap[(head[0], port(level_of(head[1]), "out"))]]
            used.add(nxt.id)
            wrap, head = wrap + nxt.wrap, nxt.head
        edges.append(Edge(e.id, e.tail, head, wrap))
    loops = list(d.free_loops)
    for e in sorted(d.edges, key=lambda e: e.id):
        if e.id in used:
            continue
        cycle, wrap, cur = [], ZERO, e
        while cur.id not in used:
            used.add(cur.id)
            cycle.append(cur.id)
            wrap = wrap + cur.wrap
            cur = emap[pmap[(cur.head[0], port(level_of(cur.head[1]), "out"))]]
        loops.append(FreeLoop(min(cycle), wrap))
    crossings = [c for c in d.crossings if c.id not in gone]
    return TorusDiagram(d.name, crossings, edges, loops)


def _other_level(lvl: str) -> str:
    return "under" if lvl == "over" else "over"


def _r1_plus(d: TorusDiagram, site: MoveSite) -> TorusDiagram:
    (target,) = site.targets
    if site.level not in ("over", "under"):
        raise MoveError(f"R1+ level must be 'over' or 'under', got {site.level!r}")
    if site.sign not in (1, -1):
        raise MoveError(f"R1+ sign must be +1 or -1, got {site.sign!r}")
    first, second = site.level, _other_level(site.level)
    used = _used_ids(d)
    c = _fresh("k", used)
    crossings = list(d.crossings) + [Crossing(c, site.sign)]
    if target in d.edge_map:
        e = d.edge_map[target]
        kink, rest = _fresh_piece(e.id, used), _fresh_piece(e.id, used)
        new = [
            Edge(e.id, e.tail, (c, port(first, "in")), ZERO),
            Edge(kink, (c, port(first, "out")), (c, port(second, "in")), ZERO),
            Edge(rest, (c, port(second, "out")), e.head, e.wrap),
        ]
        edges = [x for x in d.edges if x.id != e.id] + new
        return d.replace(crossings=crossings, edges=edges)
    if target in d.loop_map:
        f = d.loop_map[target]
        rest = _fresh_piece(f.id, used)
        new = [
            Edge(f.id, (c, port(first, "out")), (c, port(second, "in")), ZERO),
            Edge(rest, (c, port(second, "out")), (c, port(first, "in")), f.wrap),
        ]
        loops = [x for x in d.free_loops if x.id != f.id]
        return d.replace(crossings=crossings, edges=list(d.edges) + new, free_loops=loops)
    raise MoveError(f"R1+ target {target!r} is neither an edge nor a free loop")


def _r1_minus(d: TorusDiagram, site: MoveSite) -> TorusDiagram:
    (c,) = site.targets
    if c not in d.crossing_map:
        raise MoveError(f"R1-: no crossing {c!r}")
    reasons = []
    for f in faces(d):
        if len(f) != 1 or f.crossings[0] != c:
            continue
        e = d.edge_map[f.edges[0]]
        if f.net:
            reasons.append(f"monogon at {c!r} wraps {f.net}, not a disk")
        elif level_of(e.tail[1]) == level_of(e.head[1]):
            reasons.append(f"loop edge {e.id!r} stays on one level")
        else:
            return _remove_crossings(d, [c])
    if not reasons:
        raise MoveError(f"R1-: crossing {c!r} bounds no monogon face")
    raise MoveError(f"R1-: {reasons[0]}")


def _r2_plus(d: TorusDiagram, site: MoveSite) -> TorusDiagram:
    x, y = site.targets
    if x == y:
        raise MoveError("R2+: the two strands must be different edges or loops")
    if site.sign not in (1, -1):
        raise MoveError(f"R2+ sign must be +1 or -1, got {site.sign!r}")
    for t in (x, y):
        if t not in d.edge_map and t not in d.loop_map:
            raise MoveError(f"R2+: {t!r} is neither an edge nor a free loop")
    if x in d.edge_map and y in d.edge_map:
        pieces = connected_pieces(d)
        if pieces[x] == pieces[y] and not any(
            x in f.edges and y in f.edges for f in faces(d)
        ):
            raise MoveError(f"R2+: edges {x!r} and {y!r} share no face")
    off = site.offset
    used = _used_ids(d)
    c1, c2 = _fresh("k", used), _fresh("k", used)
    crossings = list(d.crossings) + [Crossing(c1, site.sign), Crossing(c2, -site.sign)]
    removed_edges, removed_loops, new = set(), set(), []

    # position of c1 along the over strand
    if x in d.edge_map:
        px = _tail_position(d, x)
    else:
        px = ZERO
    if y in d.edge_map:
        u = ZERO
        a_y = off - _tail_position(d, y) + px
    else:
        u = d.loop_map[y].wrap - off - px
        a_y = ZERO

    if x in d.edge_map:
        e = d.edge_map[x]
        removed_edges.add(x)
        m, r = _fresh_piece(x, used), _fresh_piece(x, used)
        new += [
            Edge(x, e.tail, (c1, "over-in"), ZERO),
            Edge(m, (c1, "over-out"), (c2, "over-in"), u),
            Edge(r, (c2, "over-out"), e.head, e.wrap - u),
        ]
    else:
        f = d.loop_map[x]
        removed_loops.add(x)
        r = _fresh_piece(x, used)
        new += [
            Edge(x, (c1, "over-out"), (c2, "over-in"), u),
            Edge(r, (c2, "over-out"), (c1, "over-in"), f.wrap - u),
        ]
    if y in d.edge_map:
        e = d.edge_map[y]
        removed_edges.add(y)
        m, r = _fresh_piece(y, used), _fresh_piece(y, used)
        new += [
            Edge(y, e.tail, (c1, "under-in"), a_y),
            Edge(m, (c1, "under-out"), (c2, "under-in"), u),
            Edge(r, (c2, "under-out"), e.head, e.wrap - a_y - u),
        ]
    else:
        f = d.loop_map[y]
        removed_loops.add(y)
        r = _fresh_piece(y, used)
        new += [
            Edge(y, (c2, "under-out"), (c1, "under-in"), f.wrap - u),
            Edge(r, (c1, "under-out"), (c2, "under-in"), u),
        ]
    edges = [e for e in d.edges if e.id not in removed_edges] + new
    loops = [f for f in d.free_loops if f.id not in removed_loops]
    return d.replace(crossings=crossings, edges=edges, free_loops=loops)


def _bigon_check(d: TorusDiagram, f: Face) -> str | None:
    """Return why the face cannot be removed by R2-, or None if it can."""
    if len(f) != 2:
        return "not a bigon"
    a, b = f.crossings
    if a == b:
        return "bigon touches a single crossing"
    if f.net:
        return f"bigon wraps {f.net}, not a disk"
    e1, e2 = (d.edge_map[e] for e in f.edges)
    if e1.id == e2.id:
        return "bigon bounded by a single edge"
    lv = [(level_of(e.tail[1]), level_of(e.head[1])) for e in (e1, e2)]
    if sorted(lv) != [("over", "over"), ("under", "under")]:
        return "bigon edges are not one strand over at both ends and one under at both"
    if d.crossing_map[a].sign == d.crossing_map[b].sign:
        return "bigon crossings have equal signs"
    return None


def _r2_minus(d: TorusDiagram, site: MoveSite) -> TorusDiagram:
    a, b = site.targets
    for c in (a, b):
        if c not in d.crossing_map:
            raise MoveError(f"R2-: no crossing {c!r}")
    reasons = []
    for f in faces(d):
        if len(f) == 2 and set(f.crossings) == {a, b}:
            why = _bigon_check(d, f)
            if why is None:
                return _remove_crossings(d, [a, b])
            reasons.append(why)
    if not reasons:
        raise MoveError(f"R2-: crossings {a!r} and {b!r} bound no bigon face")
    raise MoveError(f"R2-: {reasons[0]}")


def _triangle_check(d: TorusDiagram, f: Face) -> str | None:
    if len(f) != 3:
        return "not a triangle"
    if len(set(f.crossings)) != 3:
        return "triangle crossings are not distinct"
    if len(set(f.edges)) != 3:
        return "triangle edges are not distinct"
    if f.net:
        return f"triangle wraps {f.net}, not a disk"
    lv = sorted((level_of(e.tail[1]), level_of(e.head[1])) for e in (d.edge_map[x] for x in f.edges))
    if lv.count(("over", "over")) != 1 or lv.count(("under", "under")) != 1:
        return "no strand passes over both others"
    return None


def _r3(d: TorusDiagram, site: MoveSite) -> TorusDiagram:
    want = set(site.targets)
    for c in want:
        if c not in d.crossing_map:
            raise MoveError(f"R3: no crossing {c!r}")
    reasons = []
    for f in faces(d):
        if len(f) == 3 and set(f.crossings) == want:
            why = _triangle_check(d, f)
            if why is None:
                return _slide_triangle(d, f)
            reasons.append(why)
    if not reasons:
        raise MoveError(f"R3: crossings {', '.join(site.targets)} bound no triangle face")
    raise MoveError(f"R3: {reasons[0]}")


def _slide_triangle(d: TorusDiagram, f: Face) -> TorusDiagram:
    # gauge the triangle's edges to zero wrap, so the passages through its
    # corners sit at equal lift positions and can be reordered freely
    g = {f.crossings[0]: ZERO}
    for k in range(2):
        eid, direction = f.steps[k]
        w = d.edge_map[eid].wrap
        g[f.crossings[k + 1]] = g[f.crossings[k]] - w if direction == 1 else g[f.crossings[k]] + w
    flat = gauge_shift(d, g)
    emap, pmap = flat.edge_map, flat.port_map
    tails = {e.id: e.tail for e in flat.edges}
    heads = {e.id: e.head for e in flat.edges}
    for eid in f.edges:
        m = emap[eid]
        p, lp = m.tail[0], level_of(m.tail[1])
        q, lq = m.head[0], level_of(m.head[1])
        into = pmap[(p, port(lp, "in"))]
        out = pmap[(q, port(lq, "out"))]
        heads[into] = (q, port(lq, "in"))
        tails[eid] = (q, port(lq, "out"))
        heads[eid] = (p, port(lp, "in"))
        tails[out] = (p, port(lp, "out"))
    edges = [Edge(e.id, tails[e.id], heads[e.id], e.wrap) for e in flat.edges]
    moved = flat.replace(edges=edges)
    return gauge_shift(moved, {c: -v for c, v in g.items()})


def apply_move(diagram: TorusDiagram, site: MoveSite) -> TorusDiagram:
    d = expand_marks(diagram)
    require_valid(d)
    handler = {R1_PLUS: _r1_plus, R1_MINUS: _r1_minus, R2_PLUS: _r2_plus,
               R2_MINUS: _r2_minus, R3: _r3}.get(site.kind)
    if handler is None:
        raise MoveError(f"unknown move kind {site.kind!r}")
    return handler(d, site)


def find_sites(diagram: TorusDiagram, kind: str) -> list[MoveSite]:
    """Sites where a removing move (R1-, R2-, R3) applies, in a fixed order."""
    d = expand_marks(diagram)
    key = ("sites", kind)
    if key in d.memo:
        return d.memo[key]
    out: list[MoveSite] = []
    if kind == R1_MINUS:
        for f in faces(d):
            if len(f) == 1 and not f.net:
                e = d.edge_map[f.edges[0]]
                if level_of(e.tail[1]) != level_of(e.head[1]):
                    out.append(MoveSite(R1_MINUS, (f.crossings[0],)))
    elif kind == R2_MINUS:
        seen = set()
        for f in faces(d):
            if len(f) == 2 and _bigon_check(d, f) is None:
                key2 = tuple(sorted(f.crossings))
                if key2 not in seen:
                    seen.add(key2)
                    out.append(MoveSite(R2_MINUS, key2))
    elif kind == R3:
        seen = set()
        for f in faces(d):
            if len(f) == 3 and _triangle_check(d, f) is None:
                key3 = tuple(sorted(f.crossings))
                if key3 not in seen:
                    seen.add(key3)
                    out.append(MoveSite(R3, key3))
    else:
        raise ValueError(f"find_sites handles R1-, R2- and R3, not {kind!r}")
    out = sorted(set(out), key=lambda s: s.targets)
    d.memo[key] = out
    return out


def r2_partners(diagram: TorusDiagram) -> list[tuple[str, str]]:
    """Ordered pairs of distinct strands an R2+ may join."""
    d = expand_marks(diagram)
    if "r2pairs" in d.memo:
        return d.memo["r2pairs"]
    pairs = set()
    for f in faces(d):
        es = sorted(set(f.edges))
        for a in es:
            for b in es:
                if a != b:
                    pairs.add((a, b))
    strands = sorted(d.edge_map) + sorted(d.loop_map)
    pieces = connected_pieces(d)
    for a in strands:
        for b in strands:
            if a == b:
                continue
            if a in d.loop_map or b in d.loop_map or pieces[a] != pieces[b]:
                pairs.add((a, b))
    out = sorted(pairs)
    d.memo["r2pairs"] = out
    return out


# -- isomorphism --------------------------------------------------------------------------

def isomorphic(d1: TorusDiagram, d2: TorusDiagram, up_to_gauge: bool = False) -> bool:
    """Whether the diagrams agree after renaming ids (and, optionally, a gauge shift)."""
    a, b = expand_marks(d1), expand_marks(d2)
    if (len(a.crossings), len(a.edges)) != (len(b.crossings), len(b.edges)):
        return False
    if Counter(f.wrap for f in a.free_loops) != Counter(f.wrap for f in b.free_loops):
        return False
    pa, pb = connected_pieces(a), connected_pieces(b)
    groups_a: dict[int, list[str]] = defaultdict(list)
    for c in sorted(a.crossing_map):
        groups_a[pa[c]].append(c)
    free_b = set(b.crossing_map)
    pieces = sorted(groups_a.values(), key=len, reverse=True)

    def match_piece(root: str, image: str):
        """Extend root -> image across the piece; return (mapping, gauge) or None."""
        phi = {root: image}
        gauge = {root: ZERO}
        stack = [root]
        while stack:
            c = stack.pop()
            c2 = phi[c]
            if a.crossing_map[c].sign != b.crossing_map[c2].sign:
                return None
            for p in ("under-in", "under-out", "over-in", "over-out"):
                e = a.edge_map[a.port_map[(c, p)]]
                e2 = b.edge_map[b.port_map[(c2, p)]]
                far, far2 = (e.head, e2.head) if p in OUT_PORTS else (e.tail, e2.tail)
                if far[1] != far2[1]:
                    return None
                # e2.wrap = e.wrap + g(head) - g(tail)
                if p in OUT_PORTS:
                    g_far = e2.wrap - e.wrap + gauge[c]
                else:
                    g_far = e.wrap - e2.wrap + gauge[c]
                n, n2 = far[0], far2[0]
                if n in phi:
                    if phi[n] != n2 or gauge[n] != g_far:
                        return None
                else:
                    if n2 in phi.values() or n2 not in free_b:
                        return None
                    phi[n] = n2
                    gauge[n] = g_far
                    stack.append(n)
        if not up_to_gauge and any(gauge[c] != gauge[root] for c in gauge):
            return None
        return phi

    def search(k: int) -> bool:
        if k == len(pieces):
            return True
        piece = pieces[k]
        root = piece[0]
        for image in sorted(free_b):
            phi = match_piece(root, image)
            if phi is None or len(phi) != len(piece):
                continue
            free_b.difference_update(phi.values())
            if search(k + 1):
                return True
            free_b.update(phi.values())
        return False

    return search(0)


# -- random walks -----------------------------------------------------------------------

REBASE_GENERATORS = (
    ((1, 1), (0, 1)), ((1, -1), (0, 1)), ((1, 0), (1, 1)), ((1, 0), (-1, 1)),
    ((0, -1), (1, 0)), ((0, 1), (-1, 0)),
)
WALK_KINDS = ("gauge", "rebase", "cover", R1_PLUS, R1_MINUS, R2_PLUS, R2_MINUS, R3)
WALK_WEIGHTS = (2, 2, 1, 3, 3, 3, 3, 3)


@dataclass(frozen=True)
class Snapshot:
    motif_class: str
    subclasses: Counter
    direction_count: int
    directional_type: str
    compound_classes: Counter


def snapshot(diagram: TorusDiagram, policy: str = "linking") -> Snapshot:
    from .compounds import compounds, motif_class
    from .directions import direction_count, directional_type, motif_direction

    cmps = compounds(diagram, policy)
    return Snapshot(
        str(motif_class(diagram, policy)),
        Counter(c.subclass for c in cmps),
        direction_count(diagram, policy),
        str(directional_type(motif_direction(diagram, policy))),
        Counter(c.subclass for c in cmps if c.rank == 2),
    )


def compare_snapshots(before: Snapshot, after: Snapshot, covered: bool) -> list[str]:
    """Invariants that changed; a cover may duplicate null and ribbon compounds."""
    out = []
    for name in ("motif_class", "direction_count", "directional_type"):
        if getattr(before, name) != getattr(after, name):
            out.append(f"{name}: {getattr(before, name)} -> {getattr(after, name)}")
    if covered:
        same_kinds = set(before.subclasses) == set(after.subclasses)
        no_loss = all(after.subclasses[k] >= v for k, v in before.subclasses.items())
        if not (same_kinds and no_loss and before.compound_classes == after.compound_classes):
            out.append(f"subclasses: {dict(before.subclasses)} -> {dict(after.subclasses)}")
    elif before.subclasses != after.subclasses:
        out.append(f"subclasses: {dict(before.subclasses)} -> {dict(after.subclasses)}")
    return out


@dataclass
class FuzzResult:
    diagram: TorusDiagram
    passed: bool
    seed: int
    length: int
    log: list[str] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)


def _random_step(d: TorusDiagram, kind: str, rng: random.Random, max_crossings: int):
    """Return (new diagram, description) or (None, reason to skip)."""
    if kind == "gauge":
        if not d.crossings:
            return None, "no crossings to shift"
        picks = rng.sample(sorted(d.crossing_map), k=rng.randint(1, len(d.crossings)))
        g = {c: (rng.randint(-1, 1), rng.randint(-1, 1)) for c in picks}
        return gauge_shift(d, g), f"gauge {len(g)} crossings"
    if kind == "rebase":
        m = rng.choice(REBASE_GENERATORS)
        return rebase(d, m), f"rebase {m}"
    if kind == "cover":
        n = rng.choice((2, 3))
        size = len(d.crossings) + len(d.free_loops)
        if size * n > max_crossings:
            return None, f"cover of index {n} over budget"
        m = rng.choice(lattice.sublattice_matrices(n))
        return cover(d, m), f"cover {m}"
    if kind == R1_PLUS:
        if len(d.crossings) + 1 > max_crossings:
            return None, "R1+ over budget"
        strands = sorted(d.edge_map) + sorted(d.loop_map)
        if not strands:
            return None, "no strand"
        site = MoveSite(R1_PLUS, (rng.choice(strands),), rng.choice((1, -1)), rng.choice(("over", "under")))
        return apply_move(d, site), str(site)
    if kind == R2_PLUS:
        if len(d.crossings) + 2 > max_crossings:
            return None, "R2+ over budget"
        pairs = r2_partners(d)
        if not pairs:
            return None, "no R2+ pair"
        x, y = rng.choice(pairs)
        off = WrapVector(rng.randint(-1, 1), rng.randint(-1, 1))
        site = MoveSite(R2_PLUS, (x, y), rng.choice((1, -1)), offset=off)
        return apply_move(d, site), str(site)
    sites = find_sites(d, kind)
    if not sites:
        return None, f"no {kind} site"
    site = rng.choice(sites)
    return apply_move(d, site), str(site)


def fuzz_walk(diagram: TorusDiagram, length: int, seed: int, policy: str = "linking",
              max_crossings: int | None = None) -> FuzzResult:
    """Apply ``length`` random moves, checking the invariants after each one."""
    if length < 0:
        raise ValueError("length must be nonnegative")
    rng = random.Random(seed)
    d = expand_marks(diagram)
    if max_crossings is None:
        max_crossings = max(48, 2 * len(d.crossings) + 8)
    result = FuzzResult(d, True, seed, length)
    before = snapshot(d, policy)
    for step in range(length):
        kind = rng.choices(WALK_KINDS, WALK_WEIGHTS)[0]
        nd, what = _random_step(d, kind, rng, max_crossings)
        if nd is None:
            result.log.append(f"{step}: skip ({what})")
            continue
        require_valid(nd)
        after = snapshot(nd, policy)
        changed = compare_snapshots(before, after, covered=(kind == "cover"))
        result.log.append(f"{step}: {what}")
        if changed:
            result.passed = False
            result.failures.append(f"step {step} ({what}): " + "; ".join(changed))
            result.diagram = nd
            return result
        d, before = nd, after
    result.diagram = d
    return result
