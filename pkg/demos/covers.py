"""Covers of a motif: component and compound counts as the sublattice grows.

Run with ``python3 demos/covers.py [NAME]``.
"""
import sys

from dptangle import catalog, lattice
from dptangle.compounds import compounds
from dptangle.motif import trace_components
from dptangle.moves import cover

name = sys.argv[1] if len(sys.argv) > 1 else "E4"
d = catalog.get(name)
print(f"{name}: {len(trace_components(d))} components, {len(compounds(d))} compounds")
for n in range(1, 5):
    for m in lattice.sublattice_matrices(n):
        c = cover(d, m)
        subclasses = sorted({x.subclass for x in compounds(c)})
        print(f"  L={m}  components {len(trace_components(c)):2d}  "
              f"compounds {len(compounds(c)):2d}  {'; '.join(subclasses)}")
