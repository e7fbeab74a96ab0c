"""Integer lattices in Z^2: Hermite bases, reduction, indices and 2x2 matrices.

Everything here works on plain integer pairs. Lattices are represented by
their row Hermite basis, a tuple of zero, one or two vectors:

* rank 0: ``()``
* rank 1: ``((a, b),)`` with ``a > 0``, or ``a == 0 and b > 0``
* rank 2: ``((a, b), (0, d))`` with ``a, d > 0`` and ``0 <= b < d``

The basis is unique for a given lattice, so two lattices are equal iff their
bases compare equal.
"""
from __future__ import annotations

from itertools import product
from math import gcd
from typing import Iterable, Sequence

Vec = tuple[int, int]
Matrix = tuple[tuple[int, int], tuple[int, int]]


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hnf_basis(vectors: Iterable[Sequence[int]]) -> tuple[Vec, ...]:
    """Row Hermite basis of the lattice spanned by ``vectors``."""
    a = b = d = 0
    for x, y in vectors:
        if x == 0:
            d = gcd(d, y)
            continue
        if a == 0:
            a, b = (x, y) if x > 0 else (-x, -y)
            continue
        g, s, t = _egcd(a, x)
        zero_part = (x // g) * b - (a // g) * y
        a, b = g, s * b + t * y
        d = gcd(d, zero_part)
    basis: list[Vec] = []
    if a:
        basis.append((a, b % d if d else b))
    if d:
        basis.append((0, d))
    return tuple(basis)


def rank(basis: Sequence[Vec]) -> int:
    return len(basis)


def reduce_mod(v: Sequence[int], basis: Sequence[Vec]) -> Vec:
    """Canonical representative of ``v`` modulo the lattice with Hermite ``basis``."""
    x, y = v
    for a, b in basis:
        if a:
            k = x // a
            x, y = x - k * a, y - k * b
        else:
            y %= b
    return (x, y)


def contains(basis: Sequence[Vec], v: Sequence[int]) -> bool:
    return reduce_mod(v, basis) == (0, 0)


def index(basis: Sequence[Vec]) -> int | None:
    """|Z^2 / lattice|, or None when the lattice is not of full rank."""
    if len(basis) < 2:
        return None
    return basis[0][0] * basis[1][1]


def quotient_index(vectors: Iterable[Sequence[int]]) -> int | None:
    return index(hnf_basis(vectors))


def normalize_sign(v: Sequence[int]) -> Vec:
    """Identify v with -v: first nonzero coordinate made positive."""
    a, b = v
    if a < 0 or (a == 0 and b < 0):
        return (-a, -b)
    return (a, b)


def primitive(v: Sequence[int]) -> Vec:
    a, b = v
    g = gcd(a, b)
    if g == 0:
        return (0, 0)
    return (a // g, b // g)


# -- 2x2 integer matrices ---------------------------------------------------

def as_matrix(m: Sequence[Sequence[int]] | Sequence[int]) -> Matrix:
    """Accept ``[[m11, m12], [m21, m22]]`` or the flat ``[m11, m12, m21, m22]``."""
    flat = list(m)
    if len(flat) == 4 and all(isinstance(x, int) for x in flat):
        m11, m12, m21, m22 = flat
    else:
        (m11, m12), (m21, m22) = flat
    return ((int(m11), int(m12)), (int(m21), int(m22)))


def det(m: Matrix) -> int:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def apply(m: Matrix, v: Sequence[int]) -> Vec:
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def matmul(m: Matrix, n: Matrix) -> Matrix:
    return (
        (m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
        (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]),
    )


def adjugate(m: Matrix) -> Matrix:
    return ((m[1][1], -m[0][1]), (-m[1][0], m[0][0]))


def inverse_unimodular(m: Matrix) -> Matrix:
    dt = det(m)
    if dt not in (1, -1):
        raise ValueError(f"matrix {m} is not unimodular (det={dt})")
    adj = adjugate(m)
    return tuple(tuple(x * dt for x in row) for row in adj)  # type: ignore[return-value]


def solve_exact(m: Matrix, v: Sequence[int]) -> Vec:
    """Integer solution k of m k = v; raises if v is not in the column lattice of m."""
    dt = det(m)
    x, y = apply(adjugate(m), v)
    if dt == 0 or x % dt or y % dt:
        raise ValueError(f"{tuple(v)} is not in the lattice spanned by the columns of {m}")
    return (x // dt, y // dt)


def columns(m: Matrix) -> tuple[Vec, Vec]:
    return ((m[0][0], m[1][0]), (m[0][1], m[1][1]))


def sublattice_matrices(n: int) -> list[Matrix]:
    """Column-Hermite representatives of every index-``n`` sublattice of Z^2.

    ``[[a, b], [0, d]]`` with ``a * d == n`` and ``0 <= b < a``; one matrix per
    sublattice, sigma(n) of them.
    """
    out = []
    for a in range(1, n + 1):
        if n % a:
            continue
        d = n // a
        for b in range(a):
            out.append(((a, b), (0, d)))
    return out


def box(k: int) -> list[Vec]:
    return list(product(range(-k, k + 1), repeat=2))
