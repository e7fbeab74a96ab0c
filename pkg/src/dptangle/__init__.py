"""Invariants of doubly periodic tangles, given as motifs on the flat torus."""
from .compounds import compounds, interlink_graph, motif_class
from .directions import axis_motif, direction_count, directional_type, invariant_report, motif_direction
from .fileformat import dumps, loads, read, write
from .motif import TorusDiagram, trace_components, validate
from .moves import apply_move, cover, fuzz_walk, gauge_shift, rebase

__version__ = "0.1.0"

__all__ = [
    "TorusDiagram", "apply_move", "axis_motif", "compounds", "cover", "direction_count",
    "directional_type", "dumps", "fuzz_walk", "gauge_shift", "interlink_graph",
    "invariant_report", "loads", "motif_class", "motif_direction", "read", "rebase",
    "trace_components", "validate", "write",
]
