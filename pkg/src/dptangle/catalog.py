"""Built-in motifs.

``E1``..``E6`` are small reference motifs. ``IC-a``..``IC-h`` and
``DP-a``..``DP-y`` are hand-built reconstructions of standard example motifs:
one per subclass of interlinked compound and eight mixed motifs with known
directions. They are reconstructions from the stated properties of the
examples, not vectorized drawings, so crossing counts are whatever the
construction needs.

Motifs are built from strands: each strand is a list of passages
``(crossing, level, lift position)`` plus a homology vector. Consecutive
passages are joined by an edge whose wrap is the position difference; the
closing edge also adds the homology.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .motif import (
    ZERO,
    Crossing,
    Edge,
    FreeLoop,
    OverMark,
    TorusDiagram,
    WrapVector,
    port,
    wv,
)

CATALOG_VERSION = "1.0"


class Builder:
    def __init__(self, name: str):
        self.name = name
        self.strands: dict[str, tuple[WrapVector, list]] = {}
        self.signs: dict[str, int] = {}
        self.loops: list[FreeLoop] = []
        self._n = 0

    def strand(self, sid: str, homology=(0, 0)) -> str:
        self.strands[sid] = (wv(homology), [])
        return sid

    def loop(self, lid: str, wrap=(0, 0)) -> str:
        self.loops.append(FreeLoop(lid, wv(wrap)))
        return lid

    def cross(self, over: str, under: str, pos_over=(0, 0), pos_under=(0, 0), sign: int = 1) -> str:
        """Add a crossing; the offset it records is ``pos_under - pos_over``."""
        self._n += 1
        cid = f"c{self._n}"
        self.signs[cid] = sign
        self.strands[over][1].append((cid, "over", wv(pos_over)))
        self.strands[under][1].append((cid, "under", wv(pos_under)))
        return cid

    def clasp(self, a: str, b: str, pos_a=(0, 0), pos_b=(0, 0), sign: int = 1) -> None:
        """Two same-sign crossings, ``a`` over then under ``b``: one unit of linking."""
        self.cross(a, b, pos_a, pos_b, sign)
        self.cross(b, a, pos_b, pos_a, sign)

    def self_clasp(self, a: str, shift, pos=(0, 0), sign: int = 1) -> None:
        """Clasp the strand with its own translate by ``shift``."""
        p = wv(pos)
        q = p + wv(shift)
        self.cross(a, a, p, q, sign)
        self.cross(a, a, q, p, sign)

    def trefoil(self, a: str, pos=(0, 0), sign: int = 1) -> None:
        """Tie a local trefoil into the strand (three self-crossings at zero offset)."""
        c = [self.cross(a, a, pos, pos, sign) for _ in range(3)]
        # reorder the six passages into the alternating trefoil pattern
        passages = self.strands[a][1]
        tail = passages[-6:]
        by_key = {(cid, lvl): (cid, lvl, p) for cid, lvl, p in tail}
        order = [(c[0], "over"), (c[1], "under"), (c[2], "over"),
                 (c[0], "under"), (c[1], "over"), (c[2], "under")]
        passages[-6:] = [by_key[k] for k in order]

    def build(self) -> TorusDiagram:
        crossings = [Crossing(c, s) for c, s in self.signs.items()]
        edges = []
        for sid, (hom, seq) in self.strands.items():
            if not seq:
                self.loops.append(FreeLoop(sid, hom))
                continue
            k = len(seq)
            for i in range(k):
                cid, lvl, pos = seq[i]
                ncid, nlvl, npos = seq[(i + 1) % k]
                wrap = npos - pos
                if i == k - 1:
                    wrap = wrap + hom
                edges.append(Edge(f"{sid}.{i:02d}", (cid, port(lvl, "out")),
                                  (ncid, port(nlvl, "in")), wrap))
        return TorusDiagram(self.name, crossings, edges, self.loops)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    source: str
    build: Callable[[], TorusDiagram]

    def diagram(self) -> TorusDiagram:
        return self.build()


# -- reference motifs ---------------------------------------------------------------

def e1():
    return TorusDiagram("E1", free_loops=[FreeLoop("L", (1, 0))])


def e2():
    return TorusDiagram("E2", free_loops=[FreeLoop("L1", (1, 0)), FreeLoop("L2", (1, 0))])


def e3():
    b = Builder("E3")
    b.strand("K")
    b.trefoil("K")
    return b.build()


def e4():
    b = Builder("E4")
    b.strand("A")
    b.strand("B")
    b.clasp("A", "B")
    b.clasp("A", "B", (0, 0), (1, 0))
    return b.build()


def e5():
    b = Builder("E5")
    b.strand("K")
    b.self_clasp("K", (1, 0))
    b.self_clasp("K", (0, 1))
    return b.build()


def e6():
    return TorusDiagram("E6", free_loops=[
        FreeLoop("H", (1, 0), [OverMark("V", ZERO, True, 1)]),
        FreeLoop("V", (0, 1), [OverMark("H", ZERO, False, 1)]),
    ])


# -- helpers for the larger reconstructions -----------------------------------------

def _grid_rings(b: Builder, prefix: str, nx: int, ny: int) -> list[list[str]]:
    """An nx-by-ny periodic grid of rings, each clasped to its right and upper neighbour."""
    rings = [[b.strand(f"{prefix}{i}_{j}") for j in range(ny)] for i in range(nx)]
    for i in range(nx):
        for j in range(ny):
            right = rings[(i + 1) % nx][j]
            up = rings[i][(j + 1) % ny]
            b.clasp(rings[i][j], right, (0, 0), (1, 0) if i == nx - 1 else (0, 0))
            b.clasp(rings[i][j], up, (0, 0), (0, 1) if j == ny - 1 else (0, 0))
    return rings


def _crossing_essentials(b: Builder, pairs) -> None:
    """Single crossings between strands whose homologies intersect once."""
    for over, under in pairs:
        b.cross(over, under)


# -- interlinked-compound examples (mixed motifs with known directions) ------------

def ic_a():
    b = Builder("IC-a")
    for k in (1, 2, 3):
        b.strand(f"E{k}", (1, 0))
    b.clasp("E1", "E2")
    b.clasp("E2", "E3")
    b.strand("K")
    b.clasp("E1", "K")
    b.strand("T")
    b.trefoil("T")
    return b.build()


def ic_b():
    b = Builder("IC-b")
    b.strand("P1", (0, 1))
    b.strand("P2", (0, 1))
    b.clasp("P1", "P2")
    for k in (1, 2, 3):
        b.strand(f"Q{k}", (0, 1))
    b.clasp("Q1", "Q2")
    b.clasp("Q2", "Q3")
    b.strand("RA")
    b.strand("RB")
    b.clasp("RA", "RB")
    b.clasp("RA", "RB", (0, 0), (0, 1))
    return b.build()


def ic_c():
    b = Builder("IC-c")
    b.strand("E1", (2, 1))
    b.strand("E2", (2, 1))
    b.clasp("E1", "E2")
    for k, host in ((1, "E1"), (2, "E1"), (3, "E2")):
        b.strand(f"K{k}")
        b.clasp(host, f"K{k}")
    return b.build()


def ic_d():
    b = Builder("IC-d")
    b.strand("H", (1, 0))
    b.strand("P", (1, 2))
    b.strand("N", (-1, 2))
    for off in ((0, 0), (0, 1)):
        b.cross("H", "P", (0, 0), off, sign=1)
    for off in ((0, 0), (0, 1)):
        b.cross("N", "H", (0, 0), off, sign=1)
    for off in ((0, 0), (0, 1), (0, 2), (0, 3)):
        b.cross("P", "N", (0, 0), off, sign=1)
    return b.build()


def ic_e():
    b = Builder("IC-e")
    b.strand("A")
    b.self_clasp("A", (1, 0))
    b.strand("B")
    b.self_clasp("B", (0, 1))
    b.clasp("A", "B")
    b.strand("T")
    b.trefoil("T")
    return b.build()


def ic_f():
    b = Builder("IC-f")
    b.strand("K")
    b.self_clasp("K", (1, 0))
    b.trefoil("K")
    b.self_clasp("K", (0, 1))
    return b.build()


def ic_g():
    b = Builder("IC-g")
    _grid_rings(b, "R", 7, 2)
    return b.build()


def ic_h():
    b = Builder("IC-h")
    b.strand("F")
    b.self_clasp("F", (1, 0))
    b.self_clasp("F", (0, 1))
    b.strand("e1", (1, 0))
    b.strand("e2", (0, 1))
    b.strand("e3", (0, 1))
    b.strand("C")
    b.self_clasp("C", (1, 0))
    b.strand("T")
    b.clasp("e1", "F")
    b.clasp("e2", "C")
    b.clasp("e3", "T")
    _crossing_essentials(b, [("e1", "e2"), ("e3", "e1")])
    b.strand("S")
    b.trefoil("S")
    b.strand("U1")
    b.strand("U2")
    b.clasp("U1", "U2")
    return b.build()


# -- one motif per subclass ----------------------------------------------------------

def _chain(b: Builder, name: str, shift) -> str:
    b.strand(name)
    b.self_clasp(name, shift)
    return name


def _full(b: Builder, name: str) -> str:
    b.strand(name)
    b.self_clasp(name, (1, 0))
    b.self_clasp(name, (0, 1))
    return name


def _knot(b: Builder, name: str, host: str) -> str:
    b.strand(name)
    b.clasp(host, name)
    return name


def dp_a():
    b = Builder("DP-a")
    b.strand("A")
    b.strand("B")
    b.clasp("A", "B")
    return b.build()


def dp_b():
    b = Builder("DP-b")
    for k in range(1, 6):
        b.strand(f"E{k}", (1, 0))
    b.clasp("E1", "E2")
    b.clasp("E3", "E4")
    return b.build()


def dp_c():
    d = e4()
    return d.replace(name="DP-c")


def dp_d():
    b = Builder("DP-d")
    b.strand("E", (1, 0))
    _chain(b, "C", (1, 0))
    b.clasp("E", "C")
    return b.build()


def dp_e():
    b = Builder("DP-e")
    b.strand("E1", (1, 0))
    b.strand("E2", (1, 0))
    b.clasp("E1", "E2")
    for k, host in ((1, "E1"), (2, "E1"), (3, "E2")):
        _knot(b, f"K{k}", host)
    return b.build()


def dp_f():
    b = Builder("DP-f")
    _chain(b, "C", (1, 0))
    for k in (1, 2, 3):
        _knot(b, f"K{k}", "C")
    return b.build()


def dp_g():
    b = Builder("DP-g")
    b.strand("E", (1, 0))
    _chain(b, "C", (1, 0))
    b.clasp("E", "C")
    _knot(b, "K", "E")
    return b.build()


def dp_h():
    b = Builder("DP-h")
    _chain(b, "A", (1, 0))
    _chain(b, "B", (0, 1))
    b.clasp("A", "B")
    return b.build()


def dp_i():
    b = Builder("DP-i")
    _chain(b, "A", (1, 0))
    _chain(b, "B", (0, 1))
    b.clasp("A", "B")
    _knot(b, "K", "A")
    return b.build()


def dp_j():
    return e5().replace(name="DP-j")


def dp_k():
    b = Builder("DP-k")
    _grid_rings(b, "R", 2, 1)
    return b.build()


def dp_l():
    b = Builder("DP-l")
    _full(b, "F")
    _knot(b, "K1", "F")
    _knot(b, "K2", "F")
    return b.build()


def dp_m():
    b = Builder("DP-m")
    _full(b, "F")
    _chain(b, "C", (1, 0))
    b.clasp("F", "C")
    return b.build()


def dp_n():
    b = Builder("DP-n")
    _full(b, "F")
    _chain(b, "C", (0, 1))
    b.clasp("F", "C")
    _knot(b, "K1", "F")
    b.strand("K2")
    b.trefoil("K2")
    b.clasp("C", "K2")
    return b.build()


def _essential_grid(b: Builder, nh: int, nv: int) -> None:
    hs = [b.strand(f"H{k}", (1, 0)) for k in range(1, nh + 1)]
    vs = [b.strand(f"V{k}", (0, 1)) for k in range(1, nv + 1)]
    for h in hs:
        for v in vs:
            b.cross(h, v)


def dp_o():
    b = Builder("DP-o")
    _essential_grid(b, 3, 2)
    return b.build()


def dp_p():
    b = Builder("DP-p")
    _essential_grid(b, 2, 2)
    return b.build()


def dp_q():
    b = Builder("DP-q")
    _essential_grid(b, 3, 3)
    return b.build()


def dp_r():
    b = Builder("DP-r")
    _essential_grid(b, 1, 1)
    _knot(b, "K", "H1")
    return b.build()


def dp_s():
    b = Builder("DP-s")
    b.strand("E", (1, 0))
    _chain(b, "C1", (0, 1))
    _chain(b, "C2", (0, 1))
    b.clasp("E", "C1")
    b.clasp("E", "C2")
    return b.build()


def dp_t():
    b = Builder("DP-t")
    b.strand("E", (1, 0))
    _chain(b, "C", (0, 1))
    b.clasp("E", "C")
    _knot(b, "K1", "E")
    _knot(b, "K2", "C")
    return b.build()


def dp_u():
    b = Builder("DP-u")
    _full(b, "F")
    b.strand("E", (1, 0))
    b.clasp("E", "F")
    return b.build()


def dp_v():
    b = Builder("DP-v")
    _essential_grid(b, 2, 2)
    _full(b, "F")
    b.clasp("H1", "F")
    return b.build()


def dp_w():
    b = Builder("DP-w")
    _essential_grid(b, 2, 2)
    _full(b, "F")
    b.clasp("H1", "F")
    _knot(b, "K1", "V1")
    _knot(b, "K2", "F")
    return b.build()


def dp_x():
    b = Builder("DP-x")
    _full(b, "F")
    b.strand("E", (1, 0))
    _chain(b, "C", (0, 1))
    b.clasp("E", "F")
    b.clasp("E", "C")
    return b.build()


def dp_y():
    b = Builder("DP-y")
    _full(b, "F")
    b.strand("E", (1, 0))
    _chain(b, "C", (0, 1))
    b.clasp("E", "F")
    b.clasp("E", "C")
    _knot(b, "K1", "E")
    _knot(b, "K2", "C")
    return b.build()


_REF = "reference motif"
_IC = "reconstruction of interlinked-compound example ({})"
_DP = "reconstruction of single-compound example ({})"

ENTRIES: dict[str, CatalogEntry] = {}
for _name, _fn, _src in [
    ("E1", e1, "reference motif: one free loop (1,0)"),
    ("E2", e2, "reference motif: two parallel free loops (1,0)"),
    ("E3", e3, "reference motif: trefoil in a disk"),
    ("E4", e4, "reference motif: chain of clasped circles along (1,0)"),
    ("E5", e5, "reference motif: circle clasped with its (1,0) and (0,1) translates"),
    ("E6", e6, "reference motif: free loops (1,0) and (0,1) meeting once"),
]:
    ENTRIES[_name] = CatalogEntry(_name, _src, _fn)
for _letter in "abcdefgh":
    ENTRIES[f"IC-{_letter}"] = CatalogEntry(f"IC-{_letter}", _IC.format(_letter), globals()[f"ic_{_letter}"])
for _letter in "abcdefghijklmnopqrstuvwxy":
    ENTRIES[f"DP-{_letter}"] = CatalogEntry(f"DP-{_letter}", _DP.format(_letter), globals()[f"dp_{_letter}"])


def names() -> list[str]:
    return list(ENTRIES)


def get(name: str) -> TorusDiagram:
    try:
        return ENTRIES[name].build()
    except KeyError:
        raise KeyError(f"no catalog motif named {name!r}") from None


def source(name: str) -> str:
    return ENTRIES[name].source


def all_motifs() -> dict[str, TorusDiagram]:
    return {n: e.build() for n, e in ENTRIES.items()}
