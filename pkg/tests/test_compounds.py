import random
from collections import Counter
from itertools import product

import pytest
from dptangle import catalog, lattice
from dptangle.compounds import (
    CROSSING,
    LINKING,
    CompoundClass,
    MotifClass,
    compare_class,
    compound_class,
    compounds,
    interlink_graph,
    motif_class,
    null_clusters,
    resolve_policy,
    smallest_quotient,
    subclass,
    translation_rank,
)
from dptangle.motif import TorusDiagram, trace_components
from dptangle.moves import MoveSite, apply_move, cover, gauge_shift
from helpers import random_gauge, relabel
import oracles

ALL = catalog.names()


def only(name):
    (c,) = compounds(catalog.get(name))
    return c


def test_policy_names():
    assert resolve_policy("linking-adjacency") == LINKING
    assert resolve_policy("crossing") == CROSSING
    with pytest.raises(ValueError):
        resolve_policy("touching")


def test_e2_graph_has_only_self_loops():
    g = interlink_graph(catalog.get("E2"))
    assert g.edges == ()
    assert sorted(g.self_loops.values()) == [(1, 0), (1, 0)]


def test_e4_graph():
    g = interlink_graph(catalog.get("E4"))
    assert {e.offset for e in g.edges} == {(0, 0), (1, 0)}
    assert {(e.i, e.j) for e in g.edges} == {("A.00", "B.00")}


def test_e4_graph_ignores_inserted_r2_pair():
    d = catalog.get("E4")
    a, b = (c.edge_cycle[0] for c in trace_components(d))
    grown = apply_move(d, MoveSite("R2+", (a, b), -1))
    assert interlink_graph(grown).edge_set() == interlink_graph(d).edge_set()
    # the crossing policy does see the new pair
    assert len(interlink_graph(grown, CROSSING).edges) == len(interlink_graph(d, CROSSING).edges) + 2


def test_graph_is_symmetric():
    for name in ALL:
        g = interlink_graph(catalog.get(name), CROSSING)
        for e in g.edges:
            r = e.reversed()
            assert (r.i, r.j, -r.offset) == (e.j, e.i, e.offset)


@pytest.mark.parametrize("name, sizes", [("E2", [1, 1]), ("E4", [2]), ("E3", [1])])
def test_compound_partition(name, sizes):
    assert sorted(len(c.components) for c in compounds(catalog.get(name))) == sizes


@pytest.mark.parametrize("name", ["IC-c", "IC-d", "IC-f", "IC-g"])
def test_single_compound_examples(name):
    assert len(compounds(catalog.get(name))) == 1


@pytest.mark.parametrize("name", ALL)
def test_compounds_partition_components(name):
    d = catalog.get(name)
    members = [m for c in compounds(d) for m in c.components]
    assert sorted(members) == sorted(c.id for c in trace_components(d))


def test_translation_ranks():
    assert translation_rank(only("E3")) == (0, ())
    assert translation_rank(only("E4")) == (1, ((1, 0),))
    assert translation_rank(only("E5")) == (2, ((1, 0), (0, 1)))


def test_classes_and_ribbon_direction():
    assert compound_class(only("E3")) is CompoundClass.NULL
    assert compound_class(only("E4")) is CompoundClass.RIBBON
    assert only("E4").direction == (1, 0)
    assert compound_class(only("E5")) is CompoundClass.COVER
    assert only("E5").direction is None


def test_null_clusters():
    (cl,) = null_clusters(only("E4"))
    assert cl.rank == 1 and len(cl.components) == 2
    (cl,) = null_clusters(only("E5"))
    assert cl.rank == 2 and cl.chain_decomposition is None
    assert [g.rank for g in cl.groups] == [2]


def test_example_e_splits_into_two_chains():
    cover_compound = next(c for c in compounds(catalog.get("IC-e")) if c.rank == 2)
    (cl,) = [c for c in null_clusters(cover_compound) if c.rank == 2]
    chains = cl.chain_decomposition
    assert chains is not None
    assert sorted(g.direction for g in chains) == [(0, 1), (1, 0)]


@pytest.mark.parametrize("name, expected", [
    ("E4", "chain-link ribbon compound"),
    ("E5", "full-polycatenane compound"),
    ("E6", "essential cover compound"),
    ("E3", "null-homotopic compound"),
    ("E1", "essential ribbon compound"),
])
def test_subclass(name, expected):
    assert subclass(only(name)) == expected


@pytest.mark.parametrize("name, expected", [
    ("E3", MotifClass.NULL_HOMOTOPIC),
    ("E5", MotifClass.COVER),
    ("IC-e", MotifClass.NULL_COVER),
    ("E2", MotifClass.RIBBON),
    ("IC-a", MotifClass.NULL_RIBBON),
])
def test_motif_class(name, expected):
    assert motif_class(catalog.get(name)) is expected


def test_empty_motif_has_no_class():
    with pytest.raises(ValueError, match="empty motif"):
        motif_class(TorusDiagram("empty"))


def test_compare_class():
    assert compare_class(CompoundClass.COVER, CompoundClass.RIBBON) == 1
    assert compare_class(CompoundClass.RIBBON, CompoundClass.NULL) == 1
    assert compare_class(CompoundClass.NULL, CompoundClass.COVER) == -1
    assert compare_class(CompoundClass.NULL, CompoundClass.NULL) == 0


@pytest.mark.parametrize("name", ALL)
def test_chain_and_full_are_exclusive(name):
    for c in compounds(catalog.get(name)):
        for cl in c.null_clusters:
            for g in cl.groups:
                assert g.rank in (1, 2)
            # a cluster is either split into chains or holds a full polycatenane
            assert not (cl.chain_decomposition and any(g.rank == 2 for g in cl.groups))


def signature(d):
    return sorted((c.subclass, c.rank, c.generators, len(c.components)) for c in compounds(d))


@pytest.mark.parametrize("name", ALL)
def test_rank_independent_of_labels_and_gauge(name):
    d = catalog.get(name)
    want = signature(d)
    rng = random.Random(name)
    for _ in range(100):
        e = relabel(d, rng)
        if rng.random() < 0.5:
            e = gauge_shift(e, random_gauge(e, rng))
        assert signature(e) == want


@pytest.mark.parametrize("name", ALL)
def test_lift_oracle_membership(name):
    """Translates of a lifted piece in a small box are exactly the reported lattice."""
    d = catalog.get(name)
    uf = oracles.lift(d)
    for c in compounds(d):
        member = c.components[0]
        seen = set(oracles.lift_translates(d, member, uf=uf))
        for t in product(range(-2, 3), repeat=2):
            assert (t in seen) == lattice.contains(c.generators, t), (c.id, t)


def quotient_sizes(d):
    """Node counts of the smallest quotients of the motif's null clusters."""
    out = set()
    for c in compounds(d):
        for cl in c.null_clusters:
            q, rep = smallest_quotient(c.graph.induced(cl.components))
            assert set(rep.values()) == set(q.nodes)
            out.add(len(q.nodes))
    return out


@pytest.mark.parametrize("name", ["E4", "E5", "IC-g", "DP-h", "DP-n", "DP-y"])
def test_smallest_quotient_of_a_cover_matches_the_base(name):
    d = catalog.get(name)
    want = quotient_sizes(d)
    for m in (((2, 0), (0, 1)), ((1, 1), (0, 2)), ((3, 0), (0, 2))):
        assert quotient_sizes(cover(d, m)) == want


@pytest.mark.parametrize("name", ALL)
def test_cover_keeps_cover_compound_subclasses(name):
    d = catalog.get(name)
    before = Counter(c.subclass for c in compounds(d))
    for m in (((2, 0), (0, 1)), ((1, 0), (1, 2)), ((2, 1), (0, 2))):
        after = Counter(c.subclass for c in compounds(cover(d, m)))
        assert set(after) == set(before)
        for c in compounds(d):
            if c.rank == 2:
                assert after[c.subclass] == before[c.subclass]


@pytest.mark.parametrize("name", ALL)
def test_crossing_policy_is_coarser(name):
    """Crossing adjacency can only merge linking compounds, never split them."""
    d = catalog.get(name)
    coarse = {m: c.id for c in compounds(d, CROSSING) for m in c.components}
    for c in compounds(d, LINKING):
        assert len({coarse[m] for m in c.components}) == 1
