"""Empirical and theoretical densities, tail statistics, logarithmic density.

Upper/lower density estimates are the max/min of the window ratios over the
last half of the supplied schedule: limsup/liminf are not finitely observable,
so the estimator is a documented diagnostic, never an assertion about limits.
Tail statistics take an explicit L_max; the truncation bias (terms beyond
L_max are ignored) is reported, never hidden.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .algebra import Ring
from .errors import InvalidSchedule, WrongRing
from .sieve import Sieve, sieved_bitmap
from .windows import Window


def stable_product(factors) -> float:
    """Product of factors in [0, 1], invariant under permutation of the input.

    Factors are sorted before multiplying, so permuted term orders give
    bit-identical results; beyond 1000 factors the product is accumulated as a
    compensated sum of logs to avoid underflow drift.
    """
    fs = sorted(factors)
    if not fs:
        return 1.0
    if fs[0] == 0.0:
        return 0.0
    if len(fs) <= 1000:
        out = 1.0
        for f in fs:
            out *= f
        return out
    return math.exp(math.fsum(math.log(f) for f in fs))


@dataclass(frozen=True)
class WindowResult:
    window_id: str
    size: int
    count: int
    ratio: float
    theoretical: float | None = None
    abs_error: float | None = None


@dataclass(frozen=True)
class DensityReport:
    results: tuple
    upper_estimate: float
    lower_estimate: float

    def to_json_dict(self) -> dict:
        return {
            "windows": [
                {"window_id": r.window_id, "size": r.size, "count": r.count,
                 "ratio": r.ratio, "theoretical": r.theoretical,
                 "abs_error": r.abs_error}
                for r in self.results
            ],
            "upper_estimate": self.upper_estimate,
            "lower_estimate": self.lower_estimate,
        }

    def csv_rows(self):
        yield ["window_id", "size", "count", "ratio", "theoretical", "abs_error"]
        for r in self.results:
            yield [r.window_id, r.size, r.count, r.ratio, r.theoretical, r.abs_error]


def _build_report(rows) -> DensityReport:
    results = []
    for wid, size, count, theo in rows:
        ratio = count / size
        err = abs(ratio - theo) if theo is not None else None
        results.append(WindowResult(wid, size, count, ratio, theo, err))
    tail = results[len(results) // 2:]
    return DensityReport(
        results=tuple(results),
        upper_estimate=max(r.ratio for r in tail),
        lower_estimate=min(r.ratio for r in tail),
    )


def empirical_density(predicate, windows, theoretical: float | None = None) -> DensityReport:
    """Ratio |{x in W : predicate(x)}| / |W| per window, with running max/min."""
    rows = []
    for w in windows:
        size = w.size()
        count = sum(1 for pt in w.iter_points() if predicate(pt))
        rows.append((w.label(), size, count, theoretical))
    return _build_report(rows)


def rfree_density(sieve: Sieve, windows, L: int,
                  theoretical: float | None = None) -> DensityReport:
    """Density of the R-free points at truncation L, by segmented marking."""
    rows = []
    for w in windows:
        bits = sieved_bitmap(sieve, w, 1, L)
        size = len(bits)
        rows.append((w.label(), size, size - bits.count(1), theoretical))
    return _build_report(rows)


@dataclass(frozen=True)
class PartialProduct:
    value: float
    erdos_partial_sum: float
    # each omitted factor is <= 1, so the truncated product bounds the full one
    is_upper_bound: bool = True

    def __float__(self):
        return self.value


def partial_density_product(sieve: Sieve, L: int) -> PartialProduct:
    """prod_{i<=L} (1 - |R_i|/N(b_i)) plus the Erdős tail-sum proxy."""
    terms = sieve.terms(L)
    vols = [t.vol for t in terms]
    return PartialProduct(
        value=stable_product(1.0 - v for v in vols),
        erdos_partial_sum=math.fsum(vols),
    )


def tail_bitmaps(sieve: Sieve, L: int, L_max: int, window: Window):
    """(head, tail) bitmaps: head marks union of R_i for i <= L, tail for
    L < i <= L_max.  Exposed so set-nesting properties can be tested."""
    head = sieved_bitmap(sieve, window, 1, L)
    tail = sieved_bitmap(sieve, window, L + 1, L_max)
    return head, tail


def strong_tail_statistic(sieve: Sieve, L: int, L_max: int, window: Window) -> float:
    """|W ∩ union_{L<i<=L_max} R_i| / |W|; terms beyond L_max are omitted."""
    tail = sieved_bitmap(sieve, window, L + 1, L_max)
    return tail.count(1) / len(tail)


def weak_tail_statistic(sieve: Sieve, L: int, L_max: int, window: Window) -> float:
    """|W ∩ union_{L<i<=L_max} R_i \\ union_{j<=L} R_j| / |W|."""
    head, tail = tail_bitmaps(sieve, L, L_max, window)
    count = sum(1 for h, t in zip(head, tail) if t and not h)
    return count / len(tail)


def tail_report(sieve: Sieve, L: int, L_max: int, window: Window) -> dict:
    head, tail = tail_bitmaps(sieve, L, L_max, window)
    n = len(tail)
    strong = tail.count(1) / n
    weak = sum(1 for h, t in zip(head, tail) if t and not h) / n
    return {
        "L": L,
        "L_max": L_max,
        "window": window.to_spec(),
        "weak": weak,
        "strong": strong,
        "note": f"terms with index > {L_max} are omitted from the tail union",
    }


def log_density(predicate, N: int, ring: Ring | None = None) -> float:
    """(1/log N) * sum of 1/m over 1 <= m <= N with predicate(m), via
    compensated summation (exact error-free accumulation, rounded once)."""
    if ring is not None and ring.degree != 1:
        raise WrongRing("logarithmic density is defined over the integers")
    if N < 2:
        raise InvalidSchedule("log_density needs N >= 2")
    s = math.fsum(1.0 / m for m in range(1, N + 1) if predicate(m))
    return s / math.log(N)


def make_folner(ring: Ring, kind: str, schedule, shifts=None) -> list:
    """Windows of one kind along an increasing schedule of sizes."""
    sizes = list(schedule)
    if not sizes or any(s <= 0 for s in sizes) or sorted(sizes) != sizes or \
            len(set(sizes)) != len(sizes):
        raise InvalidSchedule("schedule must be a finite increasing list of sizes")
    if kind == "ball":
        return [Window.ball(ring, N) for N in sizes]
    if kind == "shifted_ball":
        if shifts is None or len(shifts) != len(sizes):
            raise InvalidSchedule("shifted_ball needs one shift per window")
        return [Window.shifted_ball(ring, a, N) for a, N in zip(shifts, sizes)]
    if kind == "interval":
        return [Window.interval(ring, 0, N) for N in sizes]
    if kind == "box":
        return [Window.box(ring, (-N,) * ring.degree, (N,) * ring.degree)
                for N in sizes]
    raise InvalidSchedule(f"unknown window kind {kind!r}")
