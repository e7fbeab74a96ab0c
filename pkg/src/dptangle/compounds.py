"""Interlinked compounds, their translation rank, class and subclass.

The interlink graph has one node per component. An edge ``(i, j, d)`` records
that the lift copy of component ``i`` based in cell ``t`` is tied to the copy of
``j`` based in cell ``t - d``. Interlinked compounds are the connected pieces of
this graph; the translations that preserve a connected piece of the lifted
compound form a sublattice of Z^2 whose rank (0, 1 or 2) is the compound's
class.
"""
from __future__ import annotations

import enum
from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from . import lattice
from .motif import (
    ZERO,
    DiagramError,
    TorusDiagram,
    WrapVector,
    crossing_offsets,
    expand_marks,
    homology_map,
    linking_profile,
)

LINKING = "linking"
CROSSING = "crossing"
_POLICY_ALIASES = {
    "linking": LINKING, "linking-adjacency": LINKING,
    "crossing": CROSSING, "crossing-adjacency": CROSSING,
}


def resolve_policy(policy: str) -> str:
    try:
        return _POLICY_ALIASES[policy]
    except KeyError:
        raise ValueError(f"unknown policy {policy!r}; use 'linking' or 'crossing'") from None


class CompoundClass(enum.IntEnum):
    """Ordered by strength: cover > ribbon > null-homotopic."""

    NULL = 0
    RIBBON = 1
    COVER = 2

    def __str__(self):
        return ("null-homotopic", "ribbon", "cover")[self.value]


class MotifClass(str, enum.Enum):
    COVER = "cover"
    NULL_COVER = "null-cover"
    RIBBON_COVER = "ribbon-cover"
    NULL_RIBBON_COVER = "null-ribbon-cover"
    RIBBON = "ribbon"
    NULL_RIBBON = "null-ribbon"
    NULL_HOMOTOPIC = "null-homotopic"

    def __str__(self):
        return self.value


_MOTIF_TABLE = {
    frozenset({CompoundClass.COVER}): MotifClass.COVER,
    frozenset({CompoundClass.COVER, CompoundClass.NULL}): MotifClass.NULL_COVER,
    frozenset({CompoundClass.COVER, CompoundClass.RIBBON}): MotifClass.RIBBON_COVER,
    frozenset({CompoundClass.COVER, CompoundClass.RIBBON, CompoundClass.NULL}): MotifClass.NULL_RIBBON_COVER,
    frozenset({CompoundClass.RIBBON}): MotifClass.RIBBON,
    frozenset({CompoundClass.RIBBON, CompoundClass.NULL}): MotifClass.NULL_RIBBON,
    frozenset({CompoundClass.NULL}): MotifClass.NULL_HOMOTOPIC,
}


# -- interlink graph ---------------------------------------------------------------

@dataclass(frozen=True)
class GraphEdge:
    i: str
    j: str
    offset: WrapVector
    weight: int

    def reversed(self) -> "GraphEdge":
        return GraphEdge(self.j, self.i, -self.offset, self.weight)


@dataclass(frozen=True)
class InterlinkGraph:
    nodes: tuple[str, ...]
    edges: tuple[GraphEdge, ...]
    self_loops: Mapping[str, WrapVector]
    policy: str = LINKING

    def induced(self, nodes: Iterable[str]) -> "InterlinkGraph":
        keep = set(nodes)
        return InterlinkGraph(
            tuple(n for n in self.nodes if n in keep),
            tuple(e for e in self.edges if e.i in keep and e.j in keep),
            {n: h for n, h in self.self_loops.items() if n in keep},
            self.policy,
        )

    def edge_set(self) -> frozenset[tuple[str, str, WrapVector, int]]:
        return frozenset((e.i, e.j, e.offset, e.weight) for e in self.edges)


def interlink_graph(diagram: TorusDiagram, policy: str = LINKING) -> InterlinkGraph:
    """Build the interlink multigraph under ``policy``.

    ``linking``: an edge wherever the signed over-sum of the two ordered pairs
    at matching offset classes is nonzero. ``crossing``: one edge per crossing.
    """
    policy = resolve_policy(policy)
    d = expand_marks(diagram)
    key = ("graph", policy)
    if key in d.memo:
        return d.memo[key]
    homs = homology_map(d)
    nodes = tuple(sorted(homs))
    edges: list[GraphEdge] = []
    if policy == CROSSING:
        for lab in crossing_offsets(d):
            basis = lattice.hnf_basis([homs[lab.over], homs[lab.under]])
            off = WrapVector(*lattice.reduce_mod(lab.offset, basis))
            edges.append(GraphEdge(lab.over, lab.under, off, lab.sign))
    else:
        prof = linking_profile(d)
        done = set()
        for (pair, off), val in prof.items():
            i, j = pair
            basis = lattice.hnf_basis([homs[i], homs[j]])
            back = WrapVector(*lattice.reduce_mod(-off, basis))
            a, b = (pair, off), ((j, i), back)
            if a in done or b in done:
                continue
            done.update((a, b))
            total = val + prof.get(b, 0)
            if not total:
                continue
            if (j, i) < (i, j) or (i == j and back < off):
                edges.append(GraphEdge(j, i, back, total))
            else:
                edges.append(GraphEdge(i, j, off, total))
        edges.sort(key=lambda e: (e.i, e.j, e.offset))
    g = InterlinkGraph(nodes, tuple(edges), dict(homs), policy)
    d.memo[key] = g
    return g


# -- lattice of a graph piece ------------------------------------------------------

def _spanning_potentials(nodes: Sequence[str], edges: Sequence[GraphEdge]):
    adj: dict[str, list[tuple[str, WrapVector, int]]] = defaultdict(list)
    for k, e in enumerate(edges):
        adj[e.i].append((e.j, e.offset, k))
        adj[e.j].append((e.i, -e.offset, k))
    phi: dict[str, WrapVector] = {}
    tree: set[int] = set()
    for root in nodes:
        if root in phi:
            continue
        phi[root] = ZERO
        stack = [root]
        while stack:
            u = stack.pop()
            for v, off, k in adj[u]:
                if v not in phi:
                    phi[v] = phi[u] - off
                    tree.add(k)
                    stack.append(v)
    return phi, tree


def cycle_generators(nodes: Sequence[str], edges: Sequence[GraphEdge]) -> list[WrapVector]:
    """Net translations of the fundamental cycles of a spanning forest."""
    phi, tree = _spanning_potentials(nodes, edges)
    out = []
    for k, e in enumerate(edges):
        if k in tree:
            continue
        v = phi[e.i] - e.offset - phi[e.j]
        if v:
            out.append(v)
    return out


def translation_basis(graph: InterlinkGraph, nodes: Iterable[str] | None = None) -> tuple:
    if nodes is not None:
        graph = graph.induced(nodes)
    gens = cycle_generators(graph.nodes, graph.edges)
    gens.extend(graph.self_loops[n] for n in graph.nodes)
    return lattice.hnf_basis(gens)


# -- structure of null-homotopic clusters ---------------------------------------------

@dataclass(frozen=True)
class StructuralGroup:
    """Null components joined through cycles that carry a translation.

    Rank 1 groups are chain-links, rank 2 groups full polycatenanes.
    """

    components: tuple[str, ...]
    generators: tuple

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def direction(self) -> WrapVector | None:
        if self.rank != 1:
            return None
        return WrapVector(*lattice.normalize_sign(lattice.primitive(self.generators[0])))


@dataclass(frozen=True)
class NullCluster:
    components: tuple[str, ...]
    rank: int
    generators: tuple
    groups: tuple[StructuralGroup, ...]
    isolated: tuple[str, ...]

    @property
    def chain_decomposition(self) -> tuple[StructuralGroup, ...] | None:
        """The chains a rank-2 cluster splits into, or None when it does not split."""
        if self.rank == 2 and self.groups and all(g.rank == 1 for g in self.groups):
            return self.groups
        return None


def _group_cycles(adj: dict[int, set[int]], length: int):
    """Simple cycles of exactly ``length`` nodes, each listed once from its smallest node."""
    for start in sorted(adj):
        path = [start]

        def extend(u):
            if len(path) == length:
                if start in adj[u] and path[1] < path[-1]:
                    yield tuple(path)
                return
            for v in sorted(adj[u]):
                if v > start and v not in path:
                    path.append(v)
                    yield from extend(v)
                    path.pop()

        yield from extend(start)


def _merge_groups(graph: InterlinkGraph) -> tuple[tuple[StructuralGroup, ...], tuple[str, ...]]:
    """Split a null cluster into chains, full polycatenanes and isolated knots.

    Starting from single components, groups are merged by these rules, tried
    in order until none applies:

    * rank-0 groups along a cycle of the group graph whose union carries a
      translation become one group (shortest cycles first);
    * two linked chains with parallel directions merge, since parallel chains
      that touch once touch periodically (merges reaching rank 2 first);
      linked groups of rank 2 merge as well;
    * a lone rank-0 component linked at two or more places to one group
      joins it.

    Groups of rank 1 are chain-links, rank 2 full polycatenanes, and
    components left alone with rank 0 are isolated knots. The rules look at
    quotient cycles, which a finite cover can lengthen, so callers should pass
    the smallest quotient (see :func:`structural_groups`).
    """
    nodes = list(graph.nodes)
    group_of = {n: k for k, n in enumerate(nodes)}
    members: dict[int, list[str]] = {k: [n] for k, n in enumerate(nodes)}
    basis: dict[int, tuple] = {k: translation_basis(graph, [n]) for k, n in enumerate(nodes)}

    def direction(b):
        return lattice.normalize_sign(lattice.primitive(b[0]))

    def merge(ks: Sequence[int], joint: tuple) -> None:
        keep = min(ks)
        for h in ks:
            if h == keep:
                continue
            for n in members[h]:
                group_of[n] = keep
            members[keep].extend(members.pop(h))
            del basis[h]
        basis[keep] = joint

    def try_pairs() -> bool:
        candidates = []
        for e in graph.edges:
            g, h = sorted((group_of[e.i], group_of[e.j]))
            if g == h:
                continue
            bg, bh = basis[g], basis[h]
            parallel = len(bg) == len(bh) == 1 and direction(bg) == direction(bh)
            if parallel or len(bg) == len(bh) == 2:
                joint = translation_basis(graph, members[g] + members[h])
                candidates.append((-len(joint), g, h, joint))
        if not candidates:
            return False
        _, g, h, joint = min(candidates)
        merge((g, h), joint)
        return True

    def try_ties() -> bool:
        ties: dict[tuple[int, int], int] = defaultdict(int)
        for e in graph.edges:
            for a, b in ((e.i, e.j), (e.j, e.i)):
                g, h = group_of[a], group_of[b]
                if g != h and not basis[g] and basis[h]:
                    ties[(g, h)] += 1
        for (g, h), count in sorted(ties.items()):
            if count >= 2:
                merge((g, h), translation_basis(graph, members[g] + members[h]))
                return True
        return False

    def try_cycles() -> bool:
        adj: dict[int, set[int]] = {k: set() for k in members if not basis[k]}
        for e in graph.edges:
            g, h = group_of[e.i], group_of[e.j]
            if g != h and g in adj and h in adj:
                adj[g].add(h)
                adj[h].add(g)
        for length in range(2, len(adj) + 1):
            if length == 2:
                cycles = ((g, h) for g in sorted(adj) for h in sorted(adj[g]) if g < h)
            else:
                cycles = _group_cycles(adj, length)
            for cyc in cycles:
                joint = translation_basis(graph, [n for k in cyc for n in members[k]])
                if joint:
                    merge(cyc, joint)
                    return True
        return False

    while try_cycles() or try_pairs() or try_ties():
        pass
    groups = sorted(
        (StructuralGroup(tuple(sorted(members[k])), basis[k]) for k in members if basis[k]),
        key=lambda grp: grp.components,
    )
    isolated = tuple(n for n in nodes if not basis[group_of[n]])
    return tuple(groups), isolated


# -- smallest quotient of a periodic graph --------------------------------------------
#
# A lift vertex is (component, cell). An edge (i, j, d) joins (i, t) and
# (j, t - d). A symmetry (sigma, c) sends (i, t) to (sigma(i), t + c[i]); it acts
# as a translation by tau = T / k when sigma moves every vertex in cycles of a
# common length k and every orbit accumulates the same shift T.

def _oriented(edges: Sequence[GraphEdge]) -> Counter:
    out: Counter = Counter()
    for e in edges:
        out[(e.i, e.j, e.offset)] += 1
        out[(e.j, e.i, -e.offset)] += 1
    return out


def _translation_symmetry(nodes: Sequence[str], edges: Sequence[GraphEdge]):
    """A fractional translation of the lift as (sigma, c, k, T), or None."""
    if len(nodes) < 2:
        return None
    entries = _oriented(edges)
    adj: dict[str, list[tuple[str, WrapVector]]] = defaultdict(list)
    for (u, w, d) in entries:
        adj[u].append((w, d))
    root = nodes[0]
    tree: list[tuple[str, str, WrapVector]] = []
    seen = {root}
    queue = [root]
    for u in queue:
        for w, d in sorted(adj[u]):
            if w not in seen:
                seen.add(w)
                tree.append((u, w, d))
                queue.append(w)
    if len(seen) != len(nodes):
        return None

    def consistent(sigma, c, w) -> bool:
        for y, dy in adj[w]:
            if y in sigma and (sigma[w], sigma[y], dy + c[w] - c[y]) not in entries:
                return False
        return True

    def finish(sigma, c):
        image = Counter()
        for (u, w, d), n in entries.items():
            image[(sigma[u], sigma[w], d + c[u] - c[w])] += n
        if image != entries:
            return None
        k = None
        total = None
        for start in nodes:
            v, length, shift = start, 0, ZERO
            while True:
                shift = shift + c[v]
                v = sigma[v]
                length += 1
                if v == start:
                    break
            if (k is not None and length != k) or (total is not None and shift != total):
                return None
            k, total = length, shift
        if k < 2:
            return None
        # tau = total / k must have order exactly k modulo the integer lattice
        for m in range(1, k):
            if (m * total.du) % k == 0 and (m * total.dv) % k == 0:
                return None
        return sigma, c, k, total

    def extend(sigma, c, used, pos):
        if pos == len(tree):
            return finish(sigma, c)
        u, w, d = tree[pos]
        for x, dx in sorted(set(adj[sigma[u]])):
            if x in used:
                continue
            sigma[w], c[w] = x, d + c[u] - dx
            if consistent(sigma, c, w):
                used.add(x)
                found = extend(sigma, c, used, pos + 1)
                if found:
                    return found
                used.discard(x)
            del sigma[w], c[w]
        return None

    for image in nodes[1:]:
        found = extend({root: image}, {root: ZERO}, {image}, 0)
        if found:
            return found
    return None


def _quotient_by(nodes, edges, sigma, c, k, total):
    """Vertices and edges of the quotient by the translation, with the vertex map."""
    rep: dict[str, str] = {}
    scaled: dict[str, WrapVector] = {}  # k times the position relative to the representative
    for start in nodes:
        if start in rep:
            continue
        v, pos = start, ZERO
        while v not in rep:
            rep[v], scaled[v] = start, pos
            pos = pos + total - WrapVector(k * c[v].du, k * c[v].dv)
            v = sigma[v]
    (a, b), (_, dd) = lattice.hnf_basis([(k, 0), (0, k), total])
    basis = ((a, 0), (b, dd))
    counts: Counter = Counter()
    for (i, j, d), n in _oriented(edges).items():
        v = WrapVector(k * d.du, k * d.dv) + scaled[i] - scaled[j]
        counts[(rep[i], rep[j], WrapVector(*lattice.solve_exact(basis, v)))] += n
    out = []
    for (i, j, d), n in sorted(counts.items()):
        if (i, j, d) > (j, i, -d):
            continue
        copies = n // k
        if (i, j, d) == (j, i, -d):
            copies //= 2
        out.extend(GraphEdge(i, j, d, 1) for _ in range(copies))
    qnodes = tuple(n for n in nodes if rep[n] == n)
    return qnodes, out, rep


def smallest_quotient(graph: InterlinkGraph) -> tuple[InterlinkGraph, dict[str, str]]:
    """Quotient of a null cluster by every fractional translation of its lift.

    Returns the quotient graph (offsets in the coordinates of the enlarged
    lattice) and the map from each original node to its quotient node. A
    motif and any finite cover of it have isomorphic smallest quotients.
    """
    nodes, edges = tuple(graph.nodes), list(graph.edges)
    rep = {n: n for n in nodes}
    while True:
        sym = _translation_symmetry(nodes, edges)
        if sym is None:
            break
        nodes, edges, step = _quotient_by(nodes, edges, *sym)
        rep = {n: step[r] for n, r in rep.items()}
    q = InterlinkGraph(nodes, tuple(edges), {n: ZERO for n in nodes}, graph.policy)
    return q, rep


def structural_groups(graph: InterlinkGraph) -> tuple[tuple[StructuralGroup, ...], tuple[str, ...]]:
    """Chains, full polycatenanes and isolated knots of a null cluster.

    The grouping rules run on the smallest quotient of the cluster and the
    groups are pulled back, so a motif and its finite covers split the same
    way.
    """
    q, rep = smallest_quotient(graph)
    qgroups, qisolated = _merge_groups(q)
    label = {n: k for k, grp in enumerate(qgroups) for n in grp.components}
    by_label: dict[int, list[str]] = defaultdict(list)
    for n in graph.nodes:
        if rep[n] in label:
            by_label[label[rep[n]]].append(n)
    groups = []
    for members in by_label.values():
        sub = graph.induced(members)
        for piece in _connected_pieces(sub.nodes, sub.edges):
            groups.append(StructuralGroup(tuple(sorted(piece)), translation_basis(graph, piece)))
    groups.sort(key=lambda grp: grp.components)
    isolated = tuple(n for n in graph.nodes if rep[n] in set(qisolated))
    return tuple(groups), isolated


def _connected_pieces(nodes: Sequence[str], edges: Iterable[GraphEdge]) -> list[tuple[str, ...]]:
    parent = {n: n for n in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        a, b = find(e.i), find(e.j)
        if a != b:
            parent[max(a, b)] = min(a, b)
    pieces: dict[str, list[str]] = defaultdict(list)
    for n in nodes:
        pieces[find(n)].append(n)
    return sorted(tuple(sorted(p)) for p in pieces.values())


# -- compounds -----------------------------------------------------------------------

_RIBBON_NAMES = {
    (True, False, False): "essential ribbon compound",
    (False, True, False): "chain-link ribbon compound",
    (True, True, False): "chain-essential ribbon compound",
    (True, False, True): "null-essential ribbon compound",
    (False, True, True): "null-chain ribbon compound",
    (True, True, True): "mixed ribbon compound",
}
# keyed by (iso, chain)
_POLYCATENANE_NAMES = {
    (False, True): "chain-polycatenane compound",
    (True, True): "null-chain-polycatenane compound",
}
_FULL_POLYCATENANE_NAMES = {
    (False, False): "full-polycatenane compound",
    (True, False): "null-full-polycatenane compound",
    (False, True): "chain-full-polycatenane compound",
    (True, True): "null-chain-full-polycatenane compound",
}
_ESSENTIAL_COVER_NAMES = {
    (False, False): "essential cover compound",
    (True, False): "null-essential cover compound",
    (False, True): "chain-essential cover compound",
    (True, True): "null-chain-essential cover compound",
}
_ESSENTIAL_FULL_NAMES = {
    (False, False): "essential-full-polycatenane cover compound",
    (True, False): "null-essential-full-polycatenane cover compound",
    (False, True): "chain-essential-full-polycatenane cover compound",
    (True, True): "mixed cover compound",
}
NULL_COMPOUND_NAME = "null-homotopic compound"


@dataclass(frozen=True, eq=False)
class Compound:
    id: str
    components: tuple[str, ...]
    graph: InterlinkGraph

    @cached_property
    def homologies(self) -> dict[str, WrapVector]:
        return {n: self.graph.self_loops[n] for n in self.components}

    @cached_property
    def essential(self) -> tuple[str, ...]:
        return tuple(n for n in self.components if self.homologies[n])

    @cached_property
    def generators(self) -> tuple:
        return translation_rank(self)[1]

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def compound_class(self) -> CompoundClass:
        return compound_class(self)

    @property
    def direction(self) -> WrapVector | None:
        """Ribbon direction: the primitive, sign-normalized generator."""
        if self.rank != 1:
            return None
        return WrapVector(*lattice.normalize_sign(lattice.primitive(self.generators[0])))

    @cached_property
    def null_clusters(self) -> tuple[NullCluster, ...]:
        return tuple(null_clusters(self))

    @cached_property
    def subclass(self) -> str:
        return subclass(self)

    @cached_property
    def flags(self) -> dict[str, bool]:
        groups = [g for c in self.null_clusters for g in c.groups]
        return {
            "essential": bool(self.essential),
            "chain": any(g.rank == 1 for g in groups),
            "full": any(g.rank == 2 for g in groups),
            "isolated": any(c.isolated for c in self.null_clusters),
        }


def compounds(diagram: TorusDiagram, policy: str = LINKING) -> list[Compound]:
    """Partition the components into interlinked compounds (graph connectivity)."""
    policy = resolve_policy(policy)
    d = expand_marks(diagram)
    key = ("compounds", policy)
    if key in d.memo:
        return d.memo[key]
    g = interlink_graph(d, policy)
    out = [
        Compound(f"M{k}", piece, g.induced(piece))
        for k, piece in enumerate(_connected_pieces(g.nodes, g.edges))
    ]
    d.memo[key] = out
    return out


def translation_rank(compound: Compound | InterlinkGraph) -> tuple[int, tuple]:
    """Rank and Hermite generators of the translations fixing a lifted piece.

    Generators: the net offset of every fundamental cycle of a spanning tree
    plus every member's homology vector.
    """
    graph = compound.graph if isinstance(compound, Compound) else compound
    basis = translation_basis(graph)
    return len(basis), basis


def compound_class(compound: Compound) -> CompoundClass:
    return CompoundClass(compound.rank)


def null_clusters(compound: Compound) -> list[NullCluster]:
    """Connected pieces of the compound restricted to null-homotopic members."""
    nulls = [n for n in compound.components if not compound.homologies[n]]
    sub = compound.graph.induced(nulls)
    out = []
    for piece in _connected_pieces(sub.nodes, sub.edges):
        g = sub.induced(piece)
        basis = translation_basis(g)
        groups, isolated = structural_groups(g)
        out.append(NullCluster(piece, len(basis), basis, groups, isolated))
    return out


def subclass(compound: Compound) -> str:
    cls = compound.compound_class
    f = compound.flags
    ess, chain, full, iso = f["essential"], f["chain"], f["full"], f["isolated"]
    if cls is CompoundClass.NULL:
        return NULL_COMPOUND_NAME
    if cls is CompoundClass.RIBBON:
        try:
            return _RIBBON_NAMES[(ess, chain, iso)]
        except KeyError:
            raise DiagramError(f"ribbon compound {compound.id} has no chain and no essential member") from None
    if not ess and not full:
        try:
            return _POLYCATENANE_NAMES[(iso, chain)]
        except KeyError:
            raise DiagramError(f"cover compound {compound.id} has no translation-carrying part") from None
    if not ess:
        return _FULL_POLYCATENANE_NAMES[(iso, chain)]
    if not full:
        return _ESSENTIAL_COVER_NAMES[(iso, chain)]
    return _ESSENTIAL_FULL_NAMES[(iso, chain)]


def motif_class(diagram: TorusDiagram, policy: str = LINKING) -> MotifClass:
    comps = compounds(diagram, policy)
    if not comps:
        raise DiagramError("empty motif")
    return _MOTIF_TABLE[frozenset(c.compound_class for c in comps)]


def compare_class(c1: CompoundClass, c2: CompoundClass) -> int:
    """+1 if ``c1`` is stronger than ``c2``, -1 if weaker, 0 if equal."""
    return (c1 > c2) - (c1 < c2)
