"""Finite evaluation windows: balls, shifted balls, intervals and boxes.

A window is one member of a Følner sequence.  Iteration order is
deterministic (lexicographic by coordinates; intervals ascend), and
interval/box sizes are available without materializing any points.
"""

from __future__ import annotations

from . import algebra
from .algebra import DEFAULT_POINT_CAP, Element, Ring
from .errors import WindowTooLarge, WrongRing


class Window:
    """Finite, nonempty evaluation region over a ring."""

    __slots__ = ("ring", "kind", "lo", "hi", "center", "radius", "cap",
                 "_points", "_index", "_dims", "_strides")

    def __init__(self, ring, kind, lo=None, hi=None, center=None, radius=None,
                 cap=DEFAULT_POINT_CAP):
        self.ring = ring
        self.kind = kind
        self.lo = lo
        self.hi = hi
        self.center = center
        self.radius = radius
        self.cap = cap
        self._points = None
        self._index = None
        self._dims = None
        self._strides = None
        if kind in ("interval", "box"):
            if any(a > b for a, b in zip(lo, hi)):
                raise WindowTooLarge("empty window: lo exceeds hi")
            dims = [b - a + 1 for a, b in zip(lo, hi)]
            strides = [1] * len(dims)
            for i in range(len(dims) - 2, -1, -1):
                strides[i] = strides[i + 1] * dims[i + 1]
            self._dims = dims
            self._strides = strides

    # -- constructors

    @classmethod
    def interval(cls, ring: Ring, lo: int, hi: int, cap=DEFAULT_POINT_CAP):
        if ring.degree != 1:
            raise WrongRing("interval windows require a degree-1 ring")
        return cls(ring, "interval", lo=(int(lo),), hi=(int(hi),), cap=cap)

    @classmethod
    def box(cls, ring: Ring, lo, hi, cap=DEFAULT_POINT_CAP):
        lo = tuple(int(v) for v in lo)
        hi = tuple(int(v) for v in hi)
        if len(lo) != ring.degree or len(hi) != ring.degree:
            raise WrongRing("box bounds must match the ring degree")
        return cls(ring, "box", lo=lo, hi=hi, cap=cap)

    @classmethod
    def ball(cls, ring: Ring, radius: float, cap=DEFAULT_POINT_CAP):
        return cls(ring, "ball", center=algebra.zero(ring), radius=float(radius), cap=cap)

    @classmethod
    def shifted_ball(cls, ring: Ring, center: Element, radius: float,
                     cap=DEFAULT_POINT_CAP):
        return cls(ring, "shifted_ball", center=tuple(center), radius=float(radius),
                   cap=cap)

    # -- geometry

    @property
    def full_box(self) -> bool:
        """True when every bounding-box point belongs to the window."""
        return self.kind in ("interval", "box")

    def bounding_box(self):
        if self.full_box:
            return self.lo, self.hi
        blo, bhi = algebra._ball_box(self.ring, self.radius)
        c = self.center
        return tuple(a + b for a, b in zip(blo, c)), tuple(a + b for a, b in zip(bhi, c))

    def size(self) -> int:
        if self.full_box:
            n = 1
            for d in self._dims:
                n *= d
            if n > self.cap:
                raise WindowTooLarge(f"window size {n} exceeds cap {self.cap}")
            return n
        return len(self._materialize())

    def contains(self, x: Element) -> bool:
        if self.full_box:
            return all(a <= v <= b for v, a, b in zip(x, self.lo, self.hi))
        return algebra._in_ball(self.ring, x, self.center, self.radius)

    # -- points and indexing (index order == iteration order)

    def _materialize(self):
        if self._points is None:
            lo, hi = self.bounding_box()
            if algebra._box_volume(lo, hi) > self.cap:
                raise WindowTooLarge("ball candidate box exceeds cap")
            pts = [p for p in algebra._box_iter(lo, hi) if self.contains(p)]
            self._points = pts
            self._index = {p: i for i, p in enumerate(pts)}
        return self._points

    def iter_points(self):
        if self.full_box:
            self.size()
            return algebra._box_iter(self.lo, self.hi)
        return iter(self._materialize())

    def point_at(self, idx: int) -> Element:
        if self.full_box:
            out = []
            for a, s, d in zip(self.lo, self._strides, self._dims):
                q, idx = divmod(idx, s)
                out.append(a + q)
            return tuple(out)
        return self._materialize()[idx]

    def point_index(self, x: Element) -> int:
        """Index of x in iteration order, or -1 if outside the window."""
        if self.full_box:
            idx = 0
            for v, a, b, s in zip(x, self.lo, self.hi, self._strides):
                if v < a or v > b:
                    return -1
                idx += (v - a) * s
            return idx
        self._materialize()
        return self._index.get(tuple(x), -1)

    def label(self) -> str:
        if self.kind == "interval":
            return f"interval[{self.lo[0]}..{self.hi[0]}]"
        if self.kind == "box":
            dims = "x".join(f"{a}..{b}" for a, b in zip(self.lo, self.hi))
            return f"box[{dims}]"
        if self.kind == "ball":
            return f"ball[N={self.radius:g}]"
        c = ",".join(str(v) for v in self.center)
        return f"shifted_ball[a=({c}),N={self.radius:g}]"

    def to_spec(self) -> dict:
        if self.kind == "interval":
            return {"kind": "interval", "lo": self.lo[0], "hi": self.hi[0]}
        if self.kind == "box":
            return {"kind": "box", "lo": list(self.lo), "hi": list(self.hi)}
        if self.kind == "ball":
            return {"kind": "ball", "radius": self.radius}
        return {"kind": "shifted_ball", "center": list(self.center),
                "radius": self.radius}

    def __repr__(self):
        return f"Window({self.label()} over {self.ring.label})"
