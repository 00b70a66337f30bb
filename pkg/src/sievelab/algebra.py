"""Orders in small étale Q-algebras modelled as Z^n with explicit multiplication.

A ring is described by its structure constants (products of basis vectors),
the coordinates of 1, and the archimedean embeddings into C.  Elements are
plain tuples of arbitrary-precision ints, so the catalog sieves with moduli
like p^4 and window bounds up to 2^17 never overflow.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import mpmath

from .errors import (
    DimensionMismatch,
    InvalidDegree,
    NonSquarefreeDiscriminant,
    WindowTooLarge,
)

Element = tuple  # tuple[int, ...]

PRECISION_BITS = 96
BOUNDARY_REL_TOL = 1e-9  # ball boundary comparisons, applied in favor of inclusion
DEFAULT_POINT_CAP = 10 ** 8


@dataclass(frozen=True)
class Ring:
    """An order in an étale Q-algebra, as Z^degree with a multiplication table.

    mul_table[i][j] holds the coordinates of e_i * e_j.  embedding row k is
    (phi_k(e_1), ..., phi_k(e_n)) kept as 96-bit mpmath complex numbers.
    """

    degree: int
    mul_table: tuple
    one: Element
    embedding: tuple
    label: str
    validated: bool = True
    # "abs": degree 1, |x|; "max": identity embedding, max|coord|; "mp": general
    norm_mode: str = field(default="mp", compare=False)
    # per-unit-radius coordinate bounds for ball bounding boxes
    unit_coord_bounds: tuple = field(default=(), compare=False)
    # construction recipe, e.g. ("quadratic", -1); used for serialization
    spec: tuple = field(default=("custom",), compare=False)

    def __repr__(self):
        return f"Ring({self.label}, degree={self.degree})"


def element(coords) -> Element:
    return tuple(int(c) for c in coords)


def zero(ring: Ring) -> Element:
    return (0,) * ring.degree


def add(x: Element, y: Element) -> Element:
    return tuple(a + b for a, b in zip(x, y))


def sub(x: Element, y: Element) -> Element:
    return tuple(a - b for a, b in zip(x, y))


def neg(x: Element) -> Element:
    return tuple(-a for a in x)


def scale(k: int, x: Element) -> Element:
    return tuple(k * a for a in x)


def mul(ring: Ring, x: Element, y: Element) -> Element:
    """Bilinear extension of the structure constants; commutative."""
    n = ring.degree
    if len(x) != n or len(y) != n:
        raise DimensionMismatch(f"expected coordinate vectors of length {n}")
    out = [0] * n
    table = ring.mul_table
    for i, xi in enumerate(x):
        if xi == 0:
            continue
        row = table[i]
        for j, yj in enumerate(y):
            if yj == 0:
                continue
            c = xi * yj
            tij = row[j]
            for k in range(n):
                out[k] += c * tij[k]
    return tuple(out)


# ---------------------------------------------------------------------------
# construction


def _is_squarefree(n: int) -> bool:
    n = abs(n)
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def _complex_inverse(rows):
    """Invert a small complex matrix by Gaussian elimination (mpmath)."""
    n = len(rows)
    a = [[mpmath.mpc(v) for v in row] + [mpmath.mpc(1 if i == j else 0) for j in range(n)]
         for i, row in enumerate(rows)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(a[r][col]))
        if abs(a[piv][col]) == 0:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [vr - f * vc for vr, vc in zip(a[r], a[col])]
    return [row[n:] for row in a]


def _finish_ring(degree, mul_table, one, embedding_rows, label, validated=True,
                 spec=("custom",)):
    with mpmath.workprec(PRECISION_BITS):
        emb = tuple(tuple(mpmath.mpc(v) for v in row) for row in embedding_rows)
        inv = _complex_inverse([list(r) for r in emb])
        if inv is None:
            raise InvalidDegree("embedding matrix is singular")
        bounds = tuple(float(sum(abs(v) for v in row)) * (1 + 1e-12) for row in inv)
    if degree == 1:
        mode = "abs"
    elif all(emb[i][j] == (1 if i == j else 0) for i in range(degree) for j in range(degree)):
        mode = "max"
    else:
        mode = "mp"
    ring = Ring(
        degree=degree,
        mul_table=tuple(tuple(tuple(v) for v in row) for row in mul_table),
        one=tuple(one),
        embedding=emb,
        label=label,
        validated=validated,
        norm_mode=mode,
        unit_coord_bounds=bounds,
        spec=spec,
    )
    _check_structure(ring)
    if validated:
        _check_embedding_multiplicative(ring)
    return ring


def _check_structure(ring: Ring):
    n = ring.degree
    basis = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    for j in range(n):
        if mul(ring, ring.one, basis[j]) != basis[j]:
            raise InvalidDegree("declared identity is not a multiplicative identity")
    for i in range(n):
        for j in range(n):
            if mul(ring, basis[i], basis[j]) != mul(ring, basis[j], basis[i]):
                raise InvalidDegree("multiplication table is not commutative")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = mul(ring, basis[i], mul(ring, basis[j], basis[k]))
                rhs = mul(ring, mul(ring, basis[i], basis[j]), basis[k])
                if lhs != rhs:
                    raise InvalidDegree("multiplication table is not associative")


def _check_embedding_multiplicative(ring: Ring, pairs: int = 100):
    rng = random.Random(0xA1)
    n = ring.degree
    with mpmath.workprec(PRECISION_BITS):
        for _ in range(pairs):
            x = tuple(rng.randint(-50, 50) for _ in range(n))
            y = tuple(rng.randint(-50, 50) for _ in range(n))
            xy = mul(ring, x, y)
            for row in ring.embedding:
                px = sum(c * v for c, v in zip(row, x))
                py = sum(c * v for c, v in zip(row, y))
                pxy = sum(c * v for c, v in zip(row, xy))
                if abs(pxy - px * py) > 1e-12 * (1 + abs(px * py)):
                    raise InvalidDegree(
                        f"embedding row is not multiplicative for {ring.label}")


def make_ring(kind: str, **params) -> Ring:
    """Build one of the built-in rings.

    kind: "integers" | "product_integers" (m) | "gaussian" | "quadratic" (d).
    quadratic(d) uses basis {1, w} with w = sqrt(d) for d = 2,3 mod 4 and
    w = (1+sqrt(d))/2 for d = 1 mod 4, so the ring is the maximal order.
    """
    if kind == "integers":
        return _finish_ring(1, [[(1,)]], (1,), [[1]], "Z", spec=("integers",))
    if kind == "product_integers":
        m = int(params.get("m", 0))
        if m < 1:
            raise InvalidDegree("product_integers requires m >= 1")
        table = [[tuple(1 if (k == i and i == j) else 0 for k in range(m))
                  for j in range(m)] for i in range(m)]
        emb = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
        return _finish_ring(m, table, (1,) * m, emb, f"Z^{m}",
                            spec=("product_integers", m))
    if kind == "gaussian":
        table = [[(1, 0), (0, 1)], [(0, 1), (-1, 0)]]
        emb = [[1, mpmath.mpc(0, 1)], [1, mpmath.mpc(0, -1)]]
        return _finish_ring(2, table, (1, 0), emb, "Z[i]", spec=("gaussian",))
    if kind == "quadratic":
        d = int(params["d"])
        if d == 0 or d == 1 or not _is_squarefree(d):
            raise NonSquarefreeDiscriminant(f"d={d} must be squarefree and != 0, 1")
        with mpmath.workprec(PRECISION_BITS):
            sq = mpmath.sqrt(mpmath.mpc(d))
            if d % 4 == 1:
                # w = (1+sqrt d)/2, w^2 = (d-1)/4 + w
                table = [[(1, 0), (0, 1)], [(0, 1), ((d - 1) // 4, 1)]]
                w1, w2 = (1 + sq) / 2, (1 - sq) / 2
                label = params.get("_label", f"Z[(1+sqrt({d}))/2]")
            else:
                table = [[(1, 0), (0, 1)], [(0, 1), (d, 0)]]
                w1, w2 = sq, -sq
                label = params.get("_label", f"Z[sqrt({d})]")
            emb = [[1, w1], [1, w2]]
        return _finish_ring(2, table, (1, 0), emb, label, spec=("quadratic", d))
    raise InvalidDegree(f"unknown ring kind {kind!r}")


def custom_ring(mul_table, one, embedding, label: str) -> Ring:
    """Accept a user multiplication table; flagged as an unvalidated order."""
    n = len(one)
    return _finish_ring(n, mul_table, one, embedding,
                        f"{label} [unvalidated order]", validated=False)


# ---------------------------------------------------------------------------
# norms and balls


def _sup_norm_mp(ring: Ring, x: Element):
    with mpmath.workprec(PRECISION_BITS):
        return max(abs(sum(c * v for c, v in zip(row, x))) for row in ring.embedding)


def sup_norm(ring: Ring, x: Element) -> float:
    """max_k |phi_k(x)| over all archimedean embeddings."""
    mode = ring.norm_mode
    if mode == "abs":
        return float(abs(x[0]))
    if mode == "max":
        return float(max(abs(c) for c in x))
    return float(_sup_norm_mp(ring, x))


def _ball_box(ring: Ring, radius: float):
    bounds = [int(mpmath.floor(b * radius * (1 + 2 * BOUNDARY_REL_TOL))) + 1
              for b in ring.unit_coord_bounds]
    return [-b for b in bounds], bounds


def _box_volume(lo, hi) -> int:
    v = 1
    for a, b in zip(lo, hi):
        v *= max(0, b - a + 1)
    return v


def _in_ball(ring: Ring, x: Element, center: Element, radius: float) -> bool:
    if center is not None:
        x = sub(x, center)
    if ring.norm_mode == "abs":
        return abs(x[0]) <= radius * (1 + BOUNDARY_REL_TOL)
    if ring.norm_mode == "max":
        return max(abs(c) for c in x) <= radius * (1 + BOUNDARY_REL_TOL)
    with mpmath.workprec(PRECISION_BITS):
        return _sup_norm_mp(ring, x) <= mpmath.mpf(radius) * (1 + BOUNDARY_REL_TOL)


def ball_points(ring: Ring, radius: float, cap: int = DEFAULT_POINT_CAP) -> list:
    """All x with sup_norm(x) <= radius, in lexicographic coordinate order."""
    if radius < 0:
        return []
    lo, hi = _ball_box(ring, radius)
    if _box_volume(lo, hi) > cap:
        raise WindowTooLarge(f"ball candidate box exceeds cap {cap}")
    out = []
    for x in _box_iter(lo, hi):
        if _in_ball(ring, x, None, radius):
            out.append(x)
    return out


def _box_iter(lo, hi) -> Iterator[Element]:
    n = len(lo)
    if n == 1:
        for a in range(lo[0], hi[0] + 1):
            yield (a,)
        return
    idx = list(lo)
    while True:
        yield tuple(idx)
        d = n - 1
        while d >= 0:
            idx[d] += 1
            if idx[d] <= hi[d]:
                break
            idx[d] = lo[d]
            d -= 1
        if d < 0:
            return


def lattice_points_in_box(basis_rows, anchor: Element, lo, hi) -> Iterator[Element]:
    """Points of anchor + L inside the coordinate box, L spanned by the
    columns of the lower-triangular basis.  Runs in time proportional to the
    number of points plus the number of empty branches."""
    n = len(basis_rows)
    cols = [tuple(basis_rows[i][j] for i in range(n)) for j in range(n)]

    def rec(depth, partial):
        b = basis_rows[depth][depth]
        t = partial[depth]
        y_lo = -((t - lo[depth]) // b)      # ceil((lo - t)/b)
        y_hi = (hi[depth] - t) // b
        if depth == n - 1:
            for y in range(y_lo, y_hi + 1):
                pt = list(partial)
                col = cols[depth]
                for k in range(n):
                    pt[k] += y * col[k]
                yield tuple(pt)
            return
        for y in range(y_lo, y_hi + 1):
            nxt = list(partial)
            col = cols[depth]
            for k in range(n):
                nxt[k] += y * col[k]
            yield from rec(depth + 1, nxt)

    yield from rec(0, list(anchor))


def shortest_vector(ring: Ring, lattice, cap: int = DEFAULT_POINT_CAP) -> float:
    """lambda_1 of a full-rank ideal lattice: the minimum sup-norm over the
    nonzero lattice points, found by bounded enumeration inside the ball of
    radius min_j ||basis column j||."""
    basis = lattice.basis
    n = ring.degree
    cols = [tuple(basis[i][j] for i in range(n)) for j in range(n)]
    r = min(sup_norm(ring, c) for c in cols)
    lo, hi = _ball_box(ring, r)
    if _box_volume(lo, hi) > cap:
        raise WindowTooLarge("shortest-vector search box exceeds cap")
    best = None
    z = zero(ring)
    for pt in lattice_points_in_box(basis, z, lo, hi):
        if pt == z:
            continue
        if not _in_ball(ring, pt, None, r):
            continue
        v = sup_norm(ring, pt)
        if best is None or v < best:
            best = v
    return best if best is not None else r
