"""Patch counting on small windows against the closed-form entropy product.

A pattern E on a window is admissible at truncation L when no term's shifted
classes -E + R_i cover all of O_K/b_i; an optional capacity vector s further
requires |E + b_i| <= |R_i^c| - s_i.  The exhaustive counter walks the subset
tree with per-term residue tallies and prunes as soon as a constraint can no
longer be satisfied; its result is identical to the naive 2^k definition.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .algebra import sub
from .density import stable_product
from .errors import InvalidCapacity, WindowTooLarge
from .ideals import canonical_residue
from .sieve import Sieve
from .windows import Window

EXHAUSTIVE_CAP = 24


@dataclass(frozen=True)
class CapacityVector:
    """Per-term caps s_i on how many residue classes a pattern may occupy:
    |E + b_i| <= |R_i^c| - s_i, with 0 <= s_i <= |R_i^c|."""

    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))


def _caps(sieve: Sieve, L: int, s: CapacityVector | None):
    """Resolved per-term image caps, or None when unconstrained."""
    if s is None:
        return [None] * L
    vals = s.values
    if len(vals) != L:
        raise InvalidCapacity(f"capacity vector has {len(vals)} entries, L = {L}")
    caps = []
    for i, v in enumerate(vals, start=1):
        t = sieve.term(i)
        comp = t.norm - len(t.residues)
        if v < 0 or v > comp:
            raise InvalidCapacity(f"s_{i} = {v} outside [0, |R_{i}^c|] = [0, {comp}]")
        caps.append(comp - v)
    return caps


def _point_data(sieve: Sieve, L: int, points):
    """Per term: (norm, cover residue tuples per point, image residue per point)."""
    data = []
    for i in range(1, L + 1):
        t = sieve.term(i)
        ideal = t.ideal
        cover = []
        image = []
        for e in points:
            covered = {canonical_residue(ideal, sub(s, e)) for s in t.residues}
            cover.append(tuple(sorted(covered)))
            image.append(canonical_residue(ideal, e))
        data.append((t.norm, cover, image))
    return data


def count_admissible_patterns(sieve: Sieve, L: int, window: Window,
                              s: CapacityVector | None = None) -> int:
    """Number of E subset of the window admissible at L (and within capacity)."""
    points = list(window.iter_points())
    if len(points) > EXHAUSTIVE_CAP:
        raise WindowTooLarge(
            f"exhaustive count capped at {EXHAUSTIVE_CAP} points, got {len(points)}")
    caps = _caps(sieve, L, s)
    data = _point_data(sieve, L, points)
    npts = len(points)
    nterms = len(data)
    cover_cnt = [dict() for _ in range(nterms)]
    cover_sz = [0] * nterms
    img_cnt = [dict() for _ in range(nterms)]
    img_sz = [0] * nterms

    def include(j):
        """Add point j to the running pattern; undo and refuse on violation."""
        journal = []
        ok = True
        for ti in range(nterms):
            norm, cover, image = data[ti]
            cc = cover_cnt[ti]
            for r in cover[j]:
                c = cc.get(r, 0)
                cc[r] = c + 1
                journal.append((0, ti, r))
                if c == 0:
                    cover_sz[ti] += 1
            if cover_sz[ti] >= norm:
                ok = False
                break
            if caps[ti] is not None:
                r = image[j]
                ic = img_cnt[ti]
                c = ic.get(r, 0)
                ic[r] = c + 1
                journal.append((1, ti, r))
                if c == 0:
                    img_sz[ti] += 1
                if img_sz[ti] > caps[ti]:
                    ok = False
                    break
        if ok:
            return journal
        _undo(journal)
        return None

    def _undo(journal):
        for kind, ti, r in reversed(journal):
            tab = cover_cnt[ti] if kind == 0 else img_cnt[ti]
            tab[r] -= 1
            if tab[r] == 0:
                del tab[r]
                if kind == 0:
                    cover_sz[ti] -= 1
                else:
                    img_sz[ti] -= 1

    def rec(j):
        if j == npts:
            return 1
        total = rec(j + 1)  # exclude points[j]
        journal = include(j)
        if journal is not None:
            total += rec(j + 1)
            _undo(journal)
        return total

    return rec(0)


def _subset_admissible(mask, data, caps):
    for ti, (norm, cover, image) in enumerate(data):
        got = set()
        mm = mask
        j = 0
        while mm:
            if mm & 1:
                got.update(cover[j])
            mm >>= 1
            j += 1
        if len(got) >= norm:
            return False
        if caps[ti] is not None:
            img = set()
            mm = mask
            j = 0
            while mm:
                if mm & 1:
                    img.add(image[j])
                mm >>= 1
                j += 1
            if len(img) > caps[ti]:
                return False
    return True


@dataclass(frozen=True)
class McEstimate:
    fraction: float
    stderr: float
    samples: int
    seed: int


def mc_admissible_fraction(sieve: Sieve, L: int, window: Window, samples: int,
                           seed: int, s: CapacityVector | None = None) -> McEstimate:
    """Fraction of uniformly random subsets (each point kept with probability
    1/2) that are admissible; reproducible for a fixed seed."""
    points = list(window.iter_points())
    caps = _caps(sieve, L, s)
    data = _point_data(sieve, L, points)
    rng = random.Random(seed)
    npts = len(points)
    hits = 0
    for _ in range(samples):
        if _subset_admissible(rng.getrandbits(npts), data, caps):
            hits += 1
    f = hits / samples
    return McEstimate(f, math.sqrt(f * (1 - f) / samples), samples, seed)


def entropy_formula(sieve: Sieve, L: int, s: CapacityVector | None = None) -> float:
    """prod_{i<=L} (|R_i^c| - s_i) / N(b_i), in bits per lattice point.

    The truncated product is an upper bound on the full one (omitted factors
    are <= 1); L = 0 gives the free shift on two symbols, 1 bit/point.
    """
    caps = _caps(sieve, L, s)
    factors = []
    for i in range(1, L + 1):
        t = sieve.term(i)
        comp = t.norm - len(t.residues)
        eff = comp if caps[i - 1] is None else caps[i - 1]
        factors.append(eff / t.norm)
    return stable_product(factors)


@dataclass(frozen=True)
class EntropyEstimate:
    mode: str
    bits_per_point: float
    formula_bits: float
    gap: float
    count: int | None = None
    fraction: float | None = None
    stderr: float | None = None

    def to_json_dict(self) -> dict:
        out = {"mode": self.mode, "bits_per_point": self.bits_per_point,
               "formula_value": self.formula_bits, "gap": self.gap}
        if self.count is not None:
            out["count"] = self.count
        if self.fraction is not None:
            out["fraction"] = self.fraction
            out["stderr"] = self.stderr
        return out


def entropy_estimate(sieve: Sieve, L: int, window: Window, mode: str,
                     samples: int = 100000, seed: int = 0,
                     s: CapacityVector | None = None) -> EntropyEstimate:
    """Patch-counting estimate log2(count) / |window| next to the formula."""
    size = window.size()
    formula = entropy_formula(sieve, L, s)
    if mode == "exact":
        count = count_admissible_patterns(sieve, L, window, s)
        bits = math.log2(count) / size
        return EntropyEstimate("exact", bits, formula, bits - formula, count=count)
    if mode == "mc":
        est = mc_admissible_fraction(sieve, L, window, samples, seed, s)
        bits = 1.0 + (math.log2(est.fraction) / size if est.fraction > 0
                      else -math.inf)
        return EntropyEstimate("mc", bits, formula, bits - formula,
                               fraction=est.fraction, stderr=est.stderr)
    raise InvalidCapacity(f"unknown mode {mode!r}")
