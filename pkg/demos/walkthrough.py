"""Walk through the invariants of a few built-in motifs.

Run with ``python3 demos/walkthrough.py``.
"""
from dptangle import catalog
from dptangle.compounds import compounds
from dptangle.directions import axis_motif, invariant_report
from dptangle.moves import rebase


def show(name):
    d = catalog.get(name)
    print(f"== {name} ({catalog.source(name)})")
    for c in compounds(d):
        print(f"  compound {c.id}: {len(c.components)} components, rank {c.rank}, {c.subclass}")
    print("  " + invariant_report(d).summary())
    print(f"  axis-motif: {axis_motif(d)}")


for name in ("E3", "E4", "E5", "IC-a", "IC-h"):
    show(name)

# a shear of the lattice basis moves the direction but keeps the count
twisted = rebase(catalog.get("E1"), ((1, 0), (1, 1)))
r = invariant_report(twisted)
print(f"\nE1 after a shear: directions {', '.join(r.directions)}, count {r.direction_count}")
