import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dptangle import catalog, lattice
from dptangle.directions import (
    CHAIN_LINK,
    ESSENTIAL,
    FULL_POLYCATENANE,
    INFINITY_DIRECTION,
    ISOLATED_KNOT,
    ZERO_DIRECTION,
    AxisMotif,
    Direction,
    DirectionalType,
    InvariantReport,
    axis_motif,
    direction_count,
    direction_multiplicities,
    directional_type,
    elements,
    invariant_report,
    motif_direction,
    normalize,
    report_differences,
)
from dptangle.motif import FreeLoop, TorusDiagram
from dptangle.moves import rebase
from helpers import random_unimodular

ALL = catalog.names()
V = Direction.vector


def dirs(*texts):
    return {Direction.parse(t) for t in texts}


@given(st.integers(-20, 20), st.integers(-20, 20))
def test_normalization(a, b):
    d = normalize((a, b))
    assert normalize((-a, -b)) == d
    if (a, b) != (0, 0):
        assert normalize((d.a, d.b)) == d
        assert d.a > 0 or (d.a == 0 and d.b > 0)


def test_direction_identities():
    assert V(-1, 2) == V(1, -2)
    assert V(1, 2) != V(2, 1)
    assert V(2, 0) != V(1, 0)
    assert str(V(-1, 2)) == "(1,-2)"
    assert Direction.parse("(∞,∞)") == INFINITY_DIRECTION
    assert Direction.parse("(0,0)") == ZERO_DIRECTION
    with pytest.raises(ValueError):
        V(0, 0)


def test_elements_of_example_a():
    kinds = Counter(e.kind for e in elements(catalog.get("IC-a")))
    assert kinds == {ISOLATED_KNOT: 2, ESSENTIAL: 3}


def test_elements_of_reference_motifs():
    (e,) = elements(catalog.get("E4"))
    assert (e.kind, e.direction) == (CHAIN_LINK, V(1, 0))
    (e,) = elements(catalog.get("E5"))
    assert (e.kind, e.direction) == (FULL_POLYCATENANE, INFINITY_DIRECTION)


def test_non_primitive_component_keeps_its_direction():
    d = TorusDiagram("double", free_loops=[FreeLoop("L", (2, 0))])
    (e,) = elements(d)
    assert e.direction == V(2, 0)
    assert axis_motif(d) == AxisMotif(((2, 0, 1),), 0, ())
    assert invariant_report(d).flags


def test_motif_directions():
    assert motif_direction(catalog.get("IC-d")) == {V(1, 0), V(1, 2), V(1, -2)}
    assert motif_direction(catalog.get("E3")) == {ZERO_DIRECTION}
    assert motif_direction(catalog.get("IC-h")) == dirs("(∞,∞)", "(0,0)", "(1,0)", "(0,1)")
    assert direction_multiplicities(catalog.get("IC-a")) == {ZERO_DIRECTION: 2, V(1, 0): 3}


def test_direction_counts():
    assert direction_count(catalog.get("E1")) == 1
    assert direction_count(catalog.get("IC-h")) == 4
    twisted = rebase(catalog.get("E1"), ((1, 0), (1, 1)))
    assert motif_direction(twisted) == {V(1, 1)}
    assert direction_count(twisted) == 1


@pytest.mark.parametrize("directions, expected", [
    ({ZERO_DIRECTION}, "type 0"),
    ({INFINITY_DIRECTION}, "type ∞"),
    ({V(1, 0), V(0, 1)}, "type 2"),
    ({ZERO_DIRECTION, INFINITY_DIRECTION}, "type (0,∞)"),
    ({ZERO_DIRECTION, V(1, 0)}, "type (1,0)"),
    ({INFINITY_DIRECTION, V(1, 0), V(1, 1), V(0, 1)}, "type (3,∞)"),
    ({INFINITY_DIRECTION, ZERO_DIRECTION, V(1, 0), V(0, 1)}, "type (2,0,∞)"),
])
def test_directional_types(directions, expected):
    t = directional_type(directions)
    assert str(t) == expected
    assert DirectionalType.parse(expected) == t


def test_directional_type_needs_elements():
    with pytest.raises(ValueError, match="no elements"):
        directional_type(set())


def test_axis_motifs_of_worked_examples():
    assert axis_motif(catalog.get("IC-a")) == AxisMotif(((1, 0, 3),), 2, ())
    assert str(axis_motif(catalog.get("IC-a"))) == "(3,0)-torus link, 2 trivial knots"
    assert axis_motif(catalog.get("IC-b")) == AxisMotif(((0, 1, 6),), 0, ())
    assert axis_motif(catalog.get("IC-c")) == AxisMotif(((2, 1, 2),), 3, ())


def test_axis_motif_equality_is_multiset_equality():
    a = AxisMotif(((1, 0, 2), (0, 1, 1)), 1, ((1, 0), (0, 1)))
    b = AxisMotif(((0, 1, 1), (1, 0, 2)), 1, ((0, 1), (1, 0)))
    assert a == b and hash(a) == hash(b)
    assert a != AxisMotif(((1, 0, 2),), 1, ((1, 0), (0, 1)))


@pytest.mark.parametrize("name, components, crossings, cls, subclass, kind", [
    ("E3", 1, 3, "null-homotopic", "null-homotopic compound", "type 0"),
    ("E5", 1, 4, "cover", "full-polycatenane compound", "type ∞"),
    ("E6", 2, 1, "cover", "essential cover compound", "type 2"),
])
def test_reports(name, components, crossings, cls, subclass, kind):
    r = invariant_report(catalog.get(name))
    assert (r.components, r.crossings, r.motif_class) == (components, crossings, cls)
    assert r.subclasses == (subclass,)
    assert r.directional_type == kind
    assert r.policy == "linking"


def test_report_summary_line():
    assert invariant_report(catalog.get("E5")).summary() == "class: cover; subclass: full-polycatenane; type: ∞"


@pytest.mark.parametrize("name", ALL)
def test_structured_report_round_trip(name):
    r = invariant_report(catalog.get(name))
    assert InvariantReport.from_json(r.to_json()) == r
    assert r.text() == invariant_report(catalog.get(name)).text()


@pytest.mark.parametrize("name", ALL)
def test_axis_motif_consistency(name):
    d = catalog.get(name)
    ax = axis_motif(d)
    els = elements(d)
    assert ax.direction_count == direction_count(d)
    assert sum(m for _, _, m in ax.torus_links) == sum(e.kind in (ESSENTIAL, CHAIN_LINK) for e in els)
    assert ax.trivial_knots == sum(e.kind == ISOLATED_KNOT for e in els)
    full_members = sum(len(e.members) for e in els if e.kind == FULL_POLYCATENANE)
    assert len(ax.noncontractible_loops) == full_members


@pytest.mark.parametrize("name", ALL)
def test_element_invariants(name):
    for e in elements(catalog.get(name)):
        if e.kind == ISOLATED_KNOT:
            assert e.direction == ZERO_DIRECTION and len(e.members) == 1
        elif e.kind == FULL_POLYCATENANE:
            assert e.direction == INFINITY_DIRECTION
        else:
            assert e.direction.is_vector


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(ALL), st.integers(0, 2**32 - 1))
def test_direction_set_equivariance(name, seed):
    m = random_unimodular(random.Random(seed))
    d = catalog.get(name)
    before = motif_direction(d)
    after = motif_direction(rebase(d, m))
    moved = {V(*lattice.apply(m, (x.a, x.b))) if x.is_vector else x for x in before}
    assert after == moved
    assert directional_type(after) == directional_type(before)


def test_report_differences():
    r1 = invariant_report(catalog.get("E4"))
    r2 = invariant_report(catalog.get("E1"))
    assert report_differences(r1, r1) == set()
    diff = report_differences(r1, r2)
    assert "subclasses" in diff and "components" in diff
    assert "motif_class" not in diff and "direction_count" not in diff
    # parallel torus links merge, so E2 differs from E1 only in counts and axis
    assert report_differences(invariant_report(catalog.get("E2")), r2) == {"components", "subclasses", "axis_motif"}
