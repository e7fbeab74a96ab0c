"""Shared test helpers: random unimodular matrices and randomly perturbed motifs."""
from __future__ import annotations

import random

from dptangle import lattice
from dptangle.motif import TorusDiagram, WrapVector, expand_marks
from dptangle.moves import MoveSite, apply_move, gauge_shift, r2_partners, rebase

SHEARS = (((1, 1), (0, 1)), ((1, 0), (1, 1)), ((0, -1), (1, 0)))


def random_unimodular(rng: random.Random, steps: int = 4):
    m = ((1, 0), (0, 1))
    for _ in range(steps):
        g = rng.choice(SHEARS)
        if rng.random() < 0.5:
            g = lattice.inverse_unimodular(g)
        m = lattice.matmul(m, g)
    return m


def random_gauge(d: TorusDiagram, rng: random.Random, reach: int = 2) -> dict:
    return {
        c: (rng.randint(-reach, reach), rng.randint(-reach, reach))
        for c in sorted(d.crossing_map)
        if rng.random() < 0.6
    }


def perturbed(d: TorusDiagram, rng: random.Random, insertions: int = 2) -> TorusDiagram:
    """Apply a few R1+/R2+ insertions, a random gauge and a random rebase."""
    d = expand_marks(d)
    for _ in range(insertions):
        strands = sorted(d.edge_map) + sorted(d.loop_map)
        pairs = r2_partners(d)
        if pairs and rng.random() < 0.5:
            x, y = rng.choice(pairs)
            off = WrapVector(rng.randint(-1, 1), rng.randint(-1, 1))
            site = MoveSite("R2+", (x, y), rng.choice((1, -1)), offset=off)
        else:
            site = MoveSite("R1+", (rng.choice(strands),), rng.choice((1, -1)),
                            rng.choice(("over", "under")))
        d = apply_move(d, site)
    d = gauge_shift(d, random_gauge(d, rng))
    return rebase(d, random_unimodular(rng))


def relabel(d: TorusDiagram, rng: random.Random) -> TorusDiagram:
    """Rename every crossing, edge and loop with a random permutation of fresh ids."""
    from dptangle.motif import Crossing, Edge, FreeLoop

    d = expand_marks(d)

    def fresh(ids, prefix):
        ids = sorted(ids)
        order = list(range(len(ids)))
        rng.shuffle(order)
        return {old: f"{prefix}{k:03d}" for old, k in zip(ids, order)}

    cn = fresh(d.crossing_map, "x")
    en = fresh(list(d.edge_map) + list(d.loop_map), "s")
    crossings = [Crossing(cn[c.id], c.sign) for c in d.crossings]
    edges = [Edge(en[e.id], (cn[e.tail[0]], e.tail[1]), (cn[e.head[0]], e.head[1]), e.wrap)
             for e in d.edges]
    loops = [FreeLoop(en[f.id], f.wrap) for f in d.free_loops]
    rng.shuffle(crossings)
    rng.shuffle(edges)
    return TorusDiagram(d.name, crossings, edges, loops)
