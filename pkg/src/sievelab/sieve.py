"""Sieves: ordered families of (ideal, residue-set) terms over a ring.

A sieve term i removes the congruence classes R_i = S_i + b_i.  Sieves are
lazy generators of terms and every operation takes an explicit truncation
level L; nothing ever iterates an infinite family silently.  A term may carry
a small set of "protected" points which are exempt from its own classes (used
to realize sieving by r + bN rather than r + bZ).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from . import algebra, ideals
from .algebra import Element, Ring
from .errors import (
    ImproperTerm,
    InvalidParams,
    ModulusTooLarge,
    NotCoprime,
    UnknownCatalogEntry,
)
from .ideals import IdealLattice, canonical_residue
from .windows import Window

_TERM_CACHE_LIMIT = 2048
POLY_MODULUS_CAP = 10 ** 7


@dataclass(frozen=True)
class SieveTerm:
    """One sieve term: R_i = residues + ideal, with residues canonical."""

    index: int
    ideal: IdealLattice
    residues: tuple
    protected: tuple = ()

    @property
    def norm(self) -> int:
        return self.ideal.norm

    @property
    def vol(self) -> float:
        return len(self.residues) / self.ideal.norm

    def residue_set(self):
        return frozenset(self.residues)


def make_term(index: int, ideal: IdealLattice, residues, protected=()) -> SieveTerm:
    canon = []
    seen = set()
    for r in residues:
        c = canonical_residue(ideal, tuple(r))
        if c not in seen:
            seen.add(c)
            canon.append(c)
    if len(canon) >= ideal.norm:
        raise ImproperTerm(index)
    return SieveTerm(index=index, ideal=ideal, residues=tuple(canon),
                     protected=tuple(tuple(p) for p in protected))


class Sieve:
    """Lazily generated family of sieve terms (1-based indices)."""

    def __init__(self, ring: Ring, name: str, generator, params=None, n_terms=None):
        self.ring = ring
        self.name = name
        self.params = dict(params or {})
        self.n_terms = n_terms
        self._gen = generator
        self._cache = {}

    def term(self, i: int) -> SieveTerm:
        if i < 1:
            raise InvalidParams("term indices are 1-based")
        if self.n_terms is not None and i > self.n_terms:
            raise InvalidParams(f"sieve {self.name!r} has only {self.n_terms} terms")
        t = self._cache.get(i)
        if t is None:
            t = self._gen(i)
            if i <= _TERM_CACHE_LIMIT:
                self._cache[i] = t
        return t

    def terms(self, upto: int):
        return [self.term(i) for i in range(1, upto + 1)]

    def __repr__(self):
        return f"Sieve({self.name}, ring={self.ring.label})"


@dataclass(frozen=True)
class ValidationReport:
    name: str
    L: int
    erdos_partial_sum: float
    nonempty_terms: int


def validate(sieve: Sieve, L: int) -> ValidationReport:
    """Check invertibility, properness and pairwise coprimality for i <= L.

    Returns the Erdős partial sum of term volumes on success; construction
    errors (ImproperTerm, RankDeficient) and NotCoprime(i, j) propagate.
    """
    terms = sieve.terms(L)
    for a in range(L):
        for b in range(a + 1, L):
            if not ideals.is_coprime(terms[a].ideal, terms[b].ideal):
                raise NotCoprime(a + 1, b + 1)
    s = math.fsum(t.vol for t in terms)
    return ValidationReport(sieve.name, L, s, sum(1 for t in terms if t.residues))


def in_term(sieve: Sieve, i: int, x: Element) -> bool:
    t = sieve.term(i)
    if not t.residues:
        return False
    if t.protected and tuple(x) in t.protected:
        return False
    return canonical_residue(t.ideal, x) in t.residue_set()


def is_sieved(sieve: Sieve, L: int, x: Element):
    """Least witness index i <= L with x in R_i, else None (x is R-free)."""
    for i in range(1, L + 1):
        if in_term(sieve, i, x):
            return i
    return None


# ---------------------------------------------------------------------------
# window marking


def _mark_coset_generic(bits, window, basis, anchor):
    lo, hi = window.bounding_box()
    if window.full_box:
        index = window.point_index
        for pt in algebra.lattice_points_in_box(basis, anchor, lo, hi):
            bits[index(pt)] = 1
    else:
        index = window.point_index
        for pt in algebra.lattice_points_in_box(basis, anchor, lo, hi):
            j = index(pt)
            if j >= 0:
                bits[j] = 1


def _mark_coset_interval(bits, lo, hi, m, c):
    start = lo + ((c - lo) % m)
    if start <= hi:
        bits[start - lo:: m] = b"\x01" * ((hi - start) // m + 1)


def _mark_coset_box2(bits, window, basis, anchor):
    (lo0, lo1), (hi0, hi1) = window.lo, window.hi
    b00 = basis[0][0]
    b10, b11 = basis[1][0], basis[1][1]
    w1 = hi1 - lo1 + 1
    s0, s1 = anchor
    y0_lo = -((s0 - lo0) // b00)
    y0_hi = (hi0 - s0) // b00
    for y0 in range(y0_lo, y0_hi + 1):
        x = s0 + y0 * b00
        t = s1 + y0 * b10
        start = t + b11 * (-((t - lo1) // b11))
        if start > hi1:
            continue
        base = (x - lo0) * w1 - lo1
        n_pts = (hi1 - start) // b11 + 1
        bits[base + start: base + start + n_pts * b11: b11] = b"\x01" * n_pts
    return


def sieved_bitmap(sieve: Sieve, window: Window, first: int, last: int) -> bytearray:
    """Bitmap over window indices of points lying in some R_i, first <= i <= last."""
    size = window.size()
    bits = bytearray(size)
    n = sieve.ring.degree
    interval_fast = window.kind == "interval"
    box2_fast = n == 2 and window.kind == "box"
    for i in range(first, last + 1):
        t = sieve.term(i)
        if not t.residues:
            continue
        saved = []
        if t.protected:
            for p in t.protected:
                j = window.point_index(p)
                if j >= 0:
                    saved.append((j, bits[j]))
        if interval_fast:
            lo, hi = window.lo[0], window.hi[0]
            m = t.ideal.basis[0][0]
            for s in t.residues:
                _mark_coset_interval(bits, lo, hi, m, s[0])
        elif box2_fast:
            for s in t.residues:
                _mark_coset_box2(bits, window, t.ideal.basis, s)
        else:
            for s in t.residues:
                _mark_coset_generic(bits, window, t.ideal.basis, s)
        for j, old in saved:
            bits[j] = old
    return bits


def rfree_window(sieve: Sieve, window: Window, L: int) -> list:
    """All window points in no R_i for i <= L, in window iteration order."""
    bits = sieved_bitmap(sieve, window, 1, L)
    out = []
    for idx, pt in enumerate(window.iter_points()):
        if not bits[idx]:
            out.append(pt)
    return out


def rfree_count(sieve: Sieve, window: Window, L: int) -> int:
    bits = sieved_bitmap(sieve, window, 1, L)
    return len(bits) - bits.count(1)


# ---------------------------------------------------------------------------
# wrappers


def permuted(sieve: Sieve, sigma) -> Sieve:
    """Reorder terms: term i of the wrapper is term sigma(i) of the base.

    sigma is a callable or a sequence covering an initial segment (identity
    beyond its length).
    """
    if callable(sigma):
        f = sigma
    else:
        table = list(sigma)

        def f(i):
            return table[i - 1] if i <= len(table) else i

    def gen(i):
        base = sieve.term(f(i))
        return replace(base, index=i)

    return Sieve(sieve.ring, f"{sieve.name}~perm", gen, sieve.params, sieve.n_terms)


def with_term(sieve: Sieve, ideal: IdealLattice, residues) -> Sieve:
    """Prepend one extra term (it becomes term 1; old term i becomes i+1).

    The wrapper does not re-check coprimality against the base terms; validate
    reports honestly if the appended ideal collides.
    """
    new = make_term(1, ideal, residues)

    def gen(i):
        if i == 1:
            return new
        return replace(sieve.term(i - 1), index=i)

    n = None if sieve.n_terms is None else sieve.n_terms + 1
    return Sieve(sieve.ring, f"{sieve.name}+term", gen, sieve.params, n)


# ---------------------------------------------------------------------------
# primes and polynomial roots


_prime_list = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]
_prime_limit = 31


def _grow_primes(limit: int):
    global _prime_list, _prime_limit
    limit = max(limit, 2 * _prime_limit)
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    p = 2
    while p * p <= limit:
        if flags[p]:
            flags[p * p:: p] = b"\x00" * ((limit - p * p) // p + 1)
        p += 1
    _prime_list = [i for i in range(limit + 1) if flags[i]]
    _prime_limit = limit


def nth_prime(i: int) -> int:
    """The i-th prime, p_1 = 2, by incremental sieving."""
    if i < 1:
        raise InvalidParams("prime indices are 1-based")
    while len(_prime_list) < i:
        # p_i < i (ln i + ln ln i) for i >= 6
        est = max(100, int(i * (math.log(i) + math.log(math.log(i)) + 1)) if i >= 6 else 15)
        _grow_primes(est)
    return _prime_list[i - 1]


def primes_upto(x: int) -> list:
    if _prime_limit < x:
        _grow_primes(x)
    out = []
    for p in _prime_list:
        if p > x:
            break
        out.append(p)
    return out


def prime_count_upto(x: int) -> int:
    return len(primes_upto(x))


def poly_roots_mod(coeffs, m: int) -> list:
    """All x in [0, m) with f(x) = 0 (mod m); coefficients constant-first."""
    if m > POLY_MODULUS_CAP:
        raise ModulusTooLarge(f"modulus {m} exceeds brute-force cap")
    cs = [int(c) % m for c in coeffs]
    roots = []
    for x in range(m):
        acc = 0
        for c in reversed(cs):
            acc = (acc * x + c) % m
        if acc == 0:
            roots.append(x)
    return roots


# ---------------------------------------------------------------------------
# catalog


def _in_doubling_set(i: int) -> bool:
    """Membership in S = union over j >= 0 of (2^(2^(2j)), 2^(2^(2j+1))]."""
    j = 0
    while True:
        lo = 2 ** (2 ** (2 * j))
        if i <= lo:
            return False
        hi = 2 ** (2 ** (2 * j + 1))
        if i <= hi:
            return True
        j += 1


def _z_ideal(ring, m: int) -> IdealLattice:
    return IdealLattice(ring, ((m,),))


def _diag_ideal(ring, p: int) -> IdealLattice:
    return IdealLattice(ring, ((p, 0), (0, p)))


_inert_primes = []
_inert_scan = 0


def _inert_prime(i: int) -> int:
    """The i-th rational prime congruent to 3 mod 4 (inert in Z[i])."""
    global _inert_scan
    while len(_inert_primes) < i:
        _inert_scan += 1
        p = nth_prime(_inert_scan)
        if p % 4 == 3:
            _inert_primes.append(p)
    return _inert_primes[i - 1]


def _catalog_kfree(params):
    k = int(params.get("k", 2))
    if k < 1:
        raise InvalidParams("kfree requires k >= 1")
    ring = make_default_ring("integers")

    def gen(i):
        p = nth_prime(i)
        return make_term(i, _z_ideal(ring, p ** k), [(0,)])

    return Sieve(ring, "kfree", gen, {"k": k})


def _catalog_poly_squarefree(params):
    coeffs = [int(c) for c in params["coeffs"]]
    if not coeffs or all(c == 0 for c in coeffs):
        raise InvalidParams("poly_squarefree needs a nonzero polynomial")
    ring = make_default_ring("integers")

    def gen(i):
        p = nth_prime(i)
        m = p * p
        roots = poly_roots_mod(coeffs, m)
        return make_term(i, _z_ideal(ring, m), [(r,) for r in roots])

    return Sieve(ring, "poly_squarefree", gen, {"coeffs": coeffs})


def _catalog_visible_points(params):
    ring = make_default_ring("product_integers", m=2)

    def gen(i):
        p = nth_prime(i)
        return make_term(i, _diag_ideal(ring, p), [(0, 0)])

    return Sieve(ring, "visible_points", gen, {})


def _catalog_gaussian_inert(params):
    ring = make_default_ring("gaussian")

    def gen(i):
        p = _inert_prime(i)
        return make_term(i, _diag_ideal(ring, p), [(j, 0) for j in range(p)])

    return Sieve(ring, "gaussian_inert", gen, {})


def _catalog_no_density(params):
    ring = make_default_ring("integers")

    def gen(i):
        p = nth_prime(i)
        c = i if _in_doubling_set(i) else 0
        return make_term(i, _z_ideal(ring, p ** 4), [(c,)])

    return Sieve(ring, "no_density", gen, {})


def _catalog_weak_not_strong(params):
    ring = make_default_ring("integers")

    def gen(i):
        p = nth_prime(i)
        return make_term(i, _z_ideal(ring, p * p), [(1 + 4 * (i - 1),)])

    return Sieve(ring, "weak_not_strong", gen, {})


def _wns_w_residue(i: int) -> int:
    if i == 1:
        return 1
    j = i // 2
    return 1 + 4 * (j - 1) if i % 2 == 0 else 1 - 4 * (j - 1)


def _catalog_weak_not_strong_w(params):
    ring = make_default_ring("integers")

    def gen(i):
        p = nth_prime(i)
        return make_term(i, _z_ideal(ring, p * p), [(_wns_w_residue(i),)])

    return Sieve(ring, "weak_not_strong_W", gen, {})


def _catalog_weak_not_strong_wprime(params):
    ring = make_default_ring("integers")

    def gen(i):
        p = nth_prime(i + 1)
        return make_term(i, _z_ideal(ring, p * p), [(_wns_w_residue(i + 1),)])

    return Sieve(ring, "weak_not_strong_Wprime", gen, {})


def _catalog_growing_residues(params):
    ring = make_default_ring("integers")

    def gen(i):
        p = nth_prime(i)
        return make_term(i, _z_ideal(ring, p ** 4),
                         [(p ** 3 + j,) for j in range(1, p + 1)])

    return Sieve(ring, "growing_residues", gen, {})


def _catalog_v_bounded(params):
    ring = make_default_ring("integers")

    def gen(i):
        p = nth_prime(i)
        top = math.ceil(math.sqrt(math.log(i))) if i > 1 else 0
        return make_term(i, _z_ideal(ring, p * p),
                         [(j * p,) for j in range(1, top + 1)])

    return Sieve(ring, "v_bounded", gen, {})


def _catalog_erdos_shifted(params):
    b_list = [int(b) for b in params["b_list"]]
    r_list = [int(r) for r in params["r_list"]]
    if len(b_list) != len(r_list):
        raise InvalidParams("b_list and r_list must have equal length")
    ring = make_default_ring("integers")
    for b, r in zip(b_list, r_list):
        if b < 2 or not 0 <= r < b:
            raise InvalidParams("need b >= 2 and 0 <= r < b")

    def gen(i):
        b, r = b_list[i - 1], r_list[i - 1]
        return make_term(i, _z_ideal(ring, b), [(r,)], protected=[(r,)])

    return Sieve(ring, "erdos_shifted", gen,
                 {"b_list": b_list, "r_list": r_list}, n_terms=len(b_list))


_ring_cache = {}


def make_default_ring(kind, **params) -> Ring:
    key = (kind, tuple(sorted(params.items())))
    if key not in _ring_cache:
        _ring_cache[key] = algebra.make_ring(kind, **params)
    return _ring_cache[key]


CATALOG = {
    "kfree": (_catalog_kfree, {"k": "int >= 1 (exponent; k=2 is the squarefree sieve)"},
              "b_i = p_i^k Z with S = {0}"),
    "poly_squarefree": (_catalog_poly_squarefree,
                        {"coeffs": "integer coefficients, constant first"},
                        "b_p = p^2 Z, S_p = roots of f mod p^2"),
    "visible_points": (_catalog_visible_points, {},
                       "over Z^2: b_p = pZ x pZ with S = {(0,0)}"),
    "gaussian_inert": (_catalog_gaussian_inert, {},
                       "over Z[i]: b = pZ[i] for p = 3 mod 4, S = {0..p-1}"),
    "no_density": (_catalog_no_density, {},
                   "R_i = i*1_S(i) + p_i^4 Z with S a doubly-exponential interval union"),
    "weak_not_strong": (_catalog_weak_not_strong, {},
                        "R_i = 1+4(i-1) + p_i^2 Z"),
    "weak_not_strong_W": (_catalog_weak_not_strong_w, {},
                          "the W variant: W_1 = 1+4Z, alternating shifts beyond"),
    "weak_not_strong_Wprime": (_catalog_weak_not_strong_wprime, {},
                               "the W variant with its first term dropped"),
    "growing_residues": (_catalog_growing_residues, {},
                         "R_i = {p_i^3+j : 1 <= j <= p_i} + p_i^4 Z"),
    "v_bounded": (_catalog_v_bounded, {},
                  "R_i = {j p_i : 1 <= j <= ceil(sqrt(log i))} + p_i^2 Z"),
    "erdos_shifted": (_catalog_erdos_shifted,
                      {"b_list": "moduli", "r_list": "shifts, 0 <= r_i < b_i"},
                      "R_i = r_i + b_i N, realized as r_i + b_i Z with the base "
                      "point protected"),
}


def catalog(name: str, **params) -> Sieve:
    """Build a named generator from the catalog of worked examples."""
    entry = CATALOG.get(name)
    if entry is None:
        raise UnknownCatalogEntry(f"unknown catalog sieve {name!r}")
    return entry[0](params)


def catalog_schemas() -> dict:
    return {name: {"params": schema, "description": desc}
            for name, (_, schema, desc) in CATALOG.items()}


# ---------------------------------------------------------------------------
# serialization


def ring_from_spec(spec) -> Ring:
    kind = spec[0] if isinstance(spec, (tuple, list)) else spec["name"]
    if isinstance(spec, dict):
        params = {k: v for k, v in spec.items() if k != "name"}
    else:
        params = {}
        if kind == "product_integers":
            params["m"] = spec[1]
        elif kind == "quadratic":
            params["d"] = spec[1]
    return make_default_ring(kind, **params)


def ring_to_spec(ring: Ring) -> dict:
    kind = ring.spec[0]
    out = {"name": kind}
    if kind == "product_integers":
        out["m"] = ring.spec[1]
    elif kind == "quadratic":
        out["d"] = ring.spec[1]
    elif kind == "custom":
        raise InvalidParams("custom rings are not serializable")
    return out


def sieve_to_json(sieve: Sieve, explicit_terms: int = 0) -> dict:
    """Catalog sieves serialize as {ring, name, params}; pass explicit_terms
    to dump a finite term list instead."""
    out = {"ring": ring_to_spec(sieve.ring)}
    if explicit_terms:
        out["terms"] = [
            {"basis": [list(r) for r in t.ideal.basis],
             "residues": [list(s) for s in t.residues],
             **({"protected": [list(p) for p in t.protected]} if t.protected else {})}
            for t in sieve.terms(explicit_terms)
        ]
    else:
        if sieve.name not in CATALOG:
            raise InvalidParams(f"{sieve.name!r} is not a catalog sieve; "
                                "dump explicit terms instead")
        out["name"] = sieve.name
        out["params"] = dict(sieve.params)
    return out


def sieve_from_json(doc: dict) -> Sieve:
    known = {"ring", "name", "params", "terms"}
    unknown = set(doc) - known
    if unknown:
        raise InvalidParams(f"unknown keys in sieve document: {sorted(unknown)}")
    ring = ring_from_spec(doc["ring"])
    if "terms" in doc:
        terms = []
        for idx, td in enumerate(doc["terms"], start=1):
            ideal = IdealLattice(ring, tuple(tuple(int(v) for v in row)
                                             for row in td["basis"]))
            terms.append(make_term(idx, ideal,
                                   [tuple(r) for r in td["residues"]],
                                   protected=[tuple(p) for p in td.get("protected", [])]))

        def gen(i):
            return terms[i - 1]

        return Sieve(ring, doc.get("name", "custom"), gen, doc.get("params"),
                     n_terms=len(terms))
    sv = catalog(doc["name"], **doc.get("params", {}))
    if sv.ring != ring:
        raise InvalidParams("ring spec does not match the catalog entry's ring")
    return sv
