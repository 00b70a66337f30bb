"""Mirsky cylinder measures, pattern admissibility, and CRT hole construction.

The measure of a cylinder (patterns required on A, forbidden on B) is the
inclusion-exclusion sum over A <= D <= A u B of signed truncated products
prod_{i<=L} (1 - |-D + R_i| / N(b_i)); with B empty this is a plain product.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from . import algebra
from .algebra import Element, ball_points, sub, sup_norm
from .density import stable_product
from .errors import (
    InsufficientTerms,
    InvalidParams,
    NotAdmissiblePattern,
    PatternTooLarge,
)
from .ideals import canonical_residue, crt
from .sieve import Sieve, SieveTerm, rfree_window, sieved_bitmap
from .windows import Window

PATTERN_CAP = 20  # 2^|B| inclusion-exclusion terms


def _canonical_elements(items):
    out = []
    seen = set()
    for x in items:
        t = tuple(int(v) for v in x)
        if t not in seen:
            seen.add(t)
            out.append(t)
    return tuple(out)


@dataclass(frozen=True)
class PatternSpec:
    """A cylinder name: required points A and forbidden points B, disjoint."""

    required: tuple
    forbidden: tuple = ()

    def __post_init__(self):
        a = _canonical_elements(self.required)
        b = _canonical_elements(self.forbidden)
        if set(a) & set(b):
            raise InvalidParams("required and forbidden sets must be disjoint")
        object.__setattr__(self, "required", a)
        object.__setattr__(self, "forbidden", b)


def shifted_residue_count(A, term: SieveTerm) -> int:
    """|-A + R_b| in O_K/b: distinct canonical residues -a+s, a in A, s in S."""
    ideal = term.ideal
    return len({canonical_residue(ideal, sub(s, tuple(a)))
                for a in A for s in term.residues})


def _term_factor(D, term: SieveTerm) -> float:
    return 1.0 - shifted_residue_count(D, term) / term.norm


@dataclass(frozen=True)
class CylinderMeasure:
    value: float
    # running products of the pure-A factors, one entry per term
    partial_products: tuple

    def __float__(self):
        return self.value


def cylinder_measure(pattern, sieve: Sieve, L: int) -> CylinderMeasure:
    """nu_R of the cylinder named by the pattern, truncated to L terms."""
    if not isinstance(pattern, PatternSpec):
        pattern = PatternSpec(*pattern)
    A, B = pattern.required, pattern.forbidden
    if len(B) > PATTERN_CAP:
        raise PatternTooLarge(f"|B| = {len(B)} exceeds {PATTERN_CAP}")
    terms = sieve.terms(L)
    partials = []
    running = 1.0
    for t in terms:
        running *= _term_factor(A, t)
        partials.append(running)
    total = 0.0
    for k in range(len(B) + 1):
        for extra in combinations(B, k):
            d = A + extra
            prod = stable_product(_term_factor(d, t) for t in terms)
            total += prod if k % 2 == 0 else -prod
    return CylinderMeasure(min(1.0, max(0.0, total)), tuple(partials))


@dataclass(frozen=True)
class TailBound:
    """Caller-supplied monotone bound: |S_i| <= max_residues and
    N(b_i) >= min_norm for every term index i beyond the checked range."""

    max_residues: int
    min_norm: int


@dataclass(frozen=True)
class AdmissibilityStatus:
    kind: str  # "not_admissible" | "admissible_up_to" | "provably_admissible"
    witness: int | None = None
    checked_L: int | None = None
    certificate: str | None = None

    def __bool__(self):
        return self.kind != "not_admissible"


def is_admissible(A, sieve: Sieve, L: int, tail_bound: TailBound | None = None
                  ) -> AdmissibilityStatus:
    """NotAdmissible(i) when term i's shifted classes cover all of O_K/b_i;
    with a tail bound satisfying |A| * max_residues < min_norm the status is
    certified for every term, else it only holds up to L."""
    A = _canonical_elements(A)
    for i in range(1, L + 1):
        t = sieve.term(i)
        if shifted_residue_count(A, t) == t.norm:
            return AdmissibilityStatus("not_admissible", witness=i)
    if tail_bound is not None and len(A) * tail_bound.max_residues < tail_bound.min_norm:
        cert = (f"|A|*max|S_i| = {len(A) * tail_bound.max_residues} < "
                f"{tail_bound.min_norm} <= N(b_i) for all i > {L}")
        return AdmissibilityStatus("provably_admissible", checked_L=L, certificate=cert)
    return AdmissibilityStatus("admissible_up_to", checked_L=L)


@dataclass(frozen=True)
class PatternExperiment:
    pattern: tuple
    L: int
    window: dict
    empirical: float
    theoretical: float
    abs_error: float
    partial_products: tuple

    def to_json_dict(self) -> dict:
        return {
            "pattern": [list(a) for a in self.pattern],
            "L": self.L,
            "window": self.window,
            "empirical": self.empirical,
            "theoretical": self.theoretical,
            "abs_error": self.abs_error,
            "partial_products": list(self.partial_products),
        }


def _hull_window(window: Window, A):
    """Smallest full box containing window + a for every a in A."""
    lo, hi = window.bounding_box()
    n = len(lo)
    lo2 = tuple(lo[k] + min(a[k] for a in A) for k in range(n))
    hi2 = tuple(hi[k] + max(a[k] for a in A) for k in range(n))
    if n == 1:
        return Window.interval(window.ring, lo2[0], hi2[0], cap=window.cap)
    return Window.box(window.ring, lo2, hi2, cap=window.cap)


def pattern_density_experiment(A, sieve: Sieve, window: Window, L: int
                               ) -> PatternExperiment:
    """Empirical density of {x in W : x + A is R-free at L} against the
    truncated product prod (1 - |-A+R_i|/N(b_i))."""
    A = _canonical_elements(A)
    if not A:
        raise NotAdmissiblePattern("pattern must be nonempty")
    status = is_admissible(A, sieve, L)
    if not status:
        raise NotAdmissiblePattern(f"term {status.witness} excludes this pattern")
    big = _hull_window(window, A)
    bits = sieved_bitmap(sieve, big, 1, L)
    index = big.point_index
    count = 0
    for x in window.iter_points():
        for a in A:
            if bits[index(algebra.add(x, a))]:
                break
        else:
            count += 1
    empirical = count / window.size()
    terms = sieve.terms(L)
    partials = []
    running = 1.0
    for t in terms:
        running *= _term_factor(A, t)
        partials.append(running)
    theoretical = stable_product(_term_factor(A, t) for t in terms)
    return PatternExperiment(
        pattern=A, L=L, window=window.to_spec(),
        empirical=empirical, theoretical=theoretical,
        abs_error=abs(empirical - theoretical),
        partial_products=tuple(partials),
    )


def find_hole(sieve: Sieve, N: float) -> Element:
    """A translate x with (x + B_N) containing no R-free number.

    B_N is enumerated by increasing sup-norm (ties lexicographic); each ball
    point x_i is matched with term i using the term's first stored residue
    a_i, and x solves x + x_i = a_i (mod b_i) by CRT.  The guarantee is
    re-checked post-hoc by sieving the shifted ball.
    """
    ring = sieve.ring
    pts = ball_points(ring, N)
    pts.sort(key=lambda p: (sup_norm(ring, p), p))
    l = len(pts)
    terms = sieve.terms(l)
    for t in terms:
        if not t.residues:
            raise InsufficientTerms(
                f"term {t.index} has no residue classes to place a hole in")
    pairs = [(t.ideal, sub(t.residues[0], x_i)) for t, x_i in zip(terms, pts)]
    x = crt(ring, pairs)
    leftover = rfree_window(sieve, Window.shifted_ball(ring, x, N), l)
    if leftover:
        raise AssertionError(f"hole construction failed at {leftover[:3]}")
    return x


def translation_check(sieve: Sieve, t: Element, window: Window, L: int) -> bool:
    """True iff R-freeness at L agrees at x and x+t for all x with both in W."""
    bits = sieved_bitmap(sieve, window, 1, L)
    index = window.point_index
    for idx, pt in enumerate(window.iter_points()):
        j = index(algebra.add(pt, tuple(t)))
        if j >= 0 and bits[idx] != bits[j]:
            return False
    return True
