"""Exact arithmetic on invertible ideals represented as integer sublattices.

Basis matrices are kept in column Hermite normal form: lower triangular,
positive diagonal, entries left of the diagonal reduced into [0, diagonal).
The HNF is unique, so two ideals are equal iff their basis matrices are
identical, and membership reduces to exact back-substitution.  No floating
point is used anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

from . import algebra
from .algebra import Element, Ring, lattice_points_in_box, mul
from .errors import (
    EmptyInput,
    NormTooLarge,
    NotCoprime,
    RankDeficient,
    RingMismatch,
)

RESIDUE_CAP = 10 ** 7


def _hnf_columns(cols, n, track=False):
    """Column HNF by integer column operations.

    Returns (pivot_cols, pivot_ucols, zero_ucols) where the u-columns express
    the output columns as integer combinations of the input columns.  Raises
    RankDeficient if fewer than n pivots are found.
    """
    cols = [list(c) for c in cols]
    k = len(cols)
    ucols = [[1 if i == j else 0 for i in range(k)] for j in range(k)] if track else None
    work = list(range(k))
    pivots = []
    pivot_us = []
    for row in range(n):
        cand = [j for j in work if cols[j][row] != 0]
        if not cand:
            raise RankDeficient(f"no pivot available in row {row}")
        while len(cand) > 1:
            cand.sort(key=lambda j: abs(cols[j][row]))
            j0 = cand[0]
            for j in cand[1:]:
                q = cols[j][row] // cols[j0][row]
                if q:
                    cj, c0 = cols[j], cols[j0]
                    for r in range(n):
                        cj[r] -= q * c0[r]
                    if track:
                        uj, u0 = ucols[j], ucols[j0]
                        for r in range(k):
                            uj[r] -= q * u0[r]
            cand = [j for j in cand if cols[j][row] != 0]
        piv = cand[0]
        if cols[piv][row] < 0:
            cols[piv] = [-v for v in cols[piv]]
            if track:
                ucols[piv] = [-v for v in ucols[piv]]
        pivots.append(cols[piv])
        pivot_us.append(ucols[piv] if track else None)
        work.remove(piv)
    # reduce entries left of each diagonal into [0, diagonal)
    for i in range(n):
        d = pivots[i][i]
        for j in range(i):
            q = pivots[j][i] // d
            if q:
                pj, pi = pivots[j], pivots[i]
                for r in range(n):
                    pj[r] -= q * pi[r]
                if track:
                    uj, ui = pivot_us[j], pivot_us[i]
                    for r in range(k):
                        uj[r] -= q * ui[r]
    zero_us = [ucols[j] for j in work] if track else []
    return pivots, pivot_us, zero_us


def hnf(matrix: Sequence[Sequence[int]]):
    """Column HNF of an n x k integer matrix of full row rank, as row tuples."""
    n = len(matrix)
    k = len(matrix[0]) if n else 0
    cols = [[matrix[i][j] for i in range(n)] for j in range(k)]
    pivots, _, _ = _hnf_columns(cols, n)
    return tuple(tuple(pivots[j][i] for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class IdealLattice:
    """Full-rank sublattice in HNF representing an invertible ideal."""

    ring: Ring
    basis: tuple  # n x n, rows

    def __post_init__(self):
        n = self.ring.degree
        b = self.basis
        if len(b) != n or any(len(r) != n for r in b):
            raise RankDeficient("basis must be square of the ring degree")
        for i in range(n):
            if b[i][i] <= 0:
                raise RankDeficient("HNF diagonal must be positive")
            for j in range(i + 1, n):
                if b[i][j] != 0:
                    raise RankDeficient("basis must be lower triangular")
            for j in range(i):
                if not 0 <= b[i][j] < b[i][i]:
                    raise RankDeficient("off-diagonal entries not reduced")
        # closed under ring multiplication
        cols = self._columns()
        for v in cols:
            for j in range(n):
                e = tuple(1 if t == j else 0 for t in range(n))
                if not contains(self, mul(self.ring, v, e)):
                    raise RankDeficient("lattice is not an ideal (not closed)")

    def _columns(self):
        n = self.ring.degree
        return [tuple(self.basis[i][j] for i in range(n)) for j in range(n)]

    @property
    def norm(self) -> int:
        p = 1
        for i in range(self.ring.degree):
            p *= self.basis[i][i]
        return p

    def __repr__(self):
        return f"IdealLattice({self.ring.label}, basis={self.basis}, norm={self.norm})"


@dataclass(frozen=True)
class ResidueSystem:
    ideal: IdealLattice
    representatives: tuple


def ideal_from_basis(ring: Ring, rows) -> IdealLattice:
    """Ideal from an explicit generating matrix (rows), brought to HNF."""
    n = ring.degree
    cols = [tuple(r[j] for r in rows) for j in range(len(rows[0]))]
    return ideal_from_columns(ring, cols)


def ideal_from_columns(ring: Ring, cols) -> IdealLattice:
    n = ring.degree
    pivots, _, _ = _hnf_columns([list(c) for c in cols], n)
    basis = tuple(tuple(pivots[j][i] for j in range(n)) for i in range(n))
    return IdealLattice(ring, basis)


def ideal_from_generators(ring: Ring, gens: Iterable[Element]) -> IdealLattice:
    """Lattice spanned by {g * e_j} over all generators g and basis vectors."""
    gens = list(gens)
    if not gens:
        raise EmptyInput("need at least one generator")
    n = ring.degree
    cols = []
    for g in gens:
        for j in range(n):
            e = tuple(1 if t == j else 0 for t in range(n))
            cols.append(mul(ring, g, e))
    return ideal_from_columns(ring, cols)


def principal(ring: Ring, g: Element) -> IdealLattice:
    return ideal_from_generators(ring, [g])


def _same_ring(i: IdealLattice, j: IdealLattice):
    if i.ring is not j.ring and i.ring != j.ring:
        raise RingMismatch("ideals live in different rings")


def ideal_sum(i: IdealLattice, j: IdealLattice) -> IdealLattice:
    _same_ring(i, j)
    return ideal_from_columns(i.ring, i._columns() + j._columns())


def ideal_product(i: IdealLattice, j: IdealLattice) -> IdealLattice:
    _same_ring(i, j)
    cols = [mul(i.ring, a, b) for a in i._columns() for b in j._columns()]
    return ideal_from_columns(i.ring, cols)


def ideal_intersection(i: IdealLattice, j: IdealLattice) -> IdealLattice:
    """Intersection via the doubled-dimension kernel construction."""
    _same_ring(i, j)
    n = i.ring.degree
    cols = [list(c) for c in i._columns() + j._columns()]
    _, _, zero_us = _hnf_columns(cols, n, track=True)
    icols = i._columns()
    members = []
    for u in zero_us:
        w = [0] * n
        for t in range(n):
            c = u[t]
            if c:
                for r in range(n):
                    w[r] += c * icols[t][r]
        members.append(tuple(w))
    return ideal_from_columns(i.ring, members)


def is_coprime(i: IdealLattice, j: IdealLattice) -> bool:
    _same_ring(i, j)
    return ideal_sum(i, j).norm == 1


def contains(i: IdealLattice, x: Element) -> bool:
    """True iff basis * y = x has an integer solution (back-substitution)."""
    n = i.ring.degree
    b = i.basis
    rem = list(x)
    for t in range(n):
        d = b[t][t]
        if rem[t] % d != 0:
            return False
        q = rem[t] // d
        if q:
            for r in range(t, n):
                rem[r] -= q * b[r][t]
    return True


def canonical_residue(i: IdealLattice, x: Element) -> Element:
    """The representative of x + I in the fundamental box of the HNF basis."""
    n = i.ring.degree
    b = i.basis
    rem = list(x)
    for t in range(n):
        q = rem[t] // b[t][t]
        if q:
            for r in range(t, n):
                rem[r] -= q * b[r][t]
    return tuple(rem)


def residues(i: IdealLattice, cap: int = RESIDUE_CAP) -> ResidueSystem:
    """All canonical representatives, mixed-radix order over the diagonal."""
    if i.norm > cap:
        raise NormTooLarge(f"ideal norm {i.norm} exceeds residue cap {cap}")
    n = i.ring.degree
    diag = [i.basis[t][t] for t in range(n)]
    reps = []
    idx = [0] * n
    while True:
        reps.append(tuple(idx))
        d = n - 1
        while d >= 0:
            idx[d] += 1
            if idx[d] < diag[d]:
                break
            idx[d] = 0
            d -= 1
        if d < 0:
            break
    return ResidueSystem(i, tuple(reps))


def _bezout(i: IdealLattice, j: IdealLattice):
    """u in I, v in J with u + v = 1, via an exact solve of [B_I | B_J] y = 1."""
    n = i.ring.degree
    cols = [list(c) for c in i._columns() + j._columns()]
    pivots, pivot_us, _ = _hnf_columns(cols, n, track=True)
    ident = all(pivots[t][r] == (1 if t == r else 0) for t in range(n) for r in range(n))
    if not ident:
        raise NotCoprime(msg="ideals are not coprime")
    one = i.ring.one
    k = 2 * n
    y = [0] * k
    for t in range(n):
        c = one[t]
        if c:
            for r in range(k):
                y[r] += c * pivot_us[t][r]
    icols = i._columns()
    u = [0] * n
    for t in range(n):
        c = y[t]
        if c:
            for r in range(n):
                u[r] += c * icols[t][r]
    u = tuple(u)
    v = algebra.sub(one, u)
    return u, v


def crt(ring: Ring, pairs) -> Element:
    """x with x = a_k (mod I_k) for all k, canonical modulo the product ideal."""
    pairs = list(pairs)
    if not pairs:
        raise EmptyInput("crt needs at least one congruence")
    ideal, x = pairs[0]
    x = canonical_residue(ideal, x)
    for nxt, b in pairs[1:]:
        u, v = _bezout(ideal, nxt)  # u in current, v in next, u+v = 1
        x = algebra.add(mul(ring, x, v), mul(ring, b, u))
        ideal = ideal_product(ideal, nxt)
        x = canonical_residue(ideal, x)
    return x


def count_in_class(i: IdealLattice, a: Element, window) -> int:
    """|{x in window : x - a in I}| by enumerating the coset in the window's
    bounding box (cost proportional to |window| / N(I) plus boundary)."""
    lo, hi = window.bounding_box()
    cnt = 0
    if window.full_box:
        for _ in lattice_points_in_box(i.basis, a, lo, hi):
            cnt += 1
        return cnt
    for pt in lattice_points_in_box(i.basis, a, lo, hi):
        if window.contains(pt):
            cnt += 1
    return cnt
