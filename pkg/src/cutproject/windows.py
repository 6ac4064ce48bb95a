"""Window classes with decidable interior, closure, measure and membership.

A window selects internal-space points by coordinate: finite unions of
intervals on real directions, finite sets on discrete factors, boxes in
fundamental coordinates on torus factors, per-residue base windows on twisted
extensions.  Augmented windows adjoin a finite star set to an open core,
which is how projection sets of almost model sets become genuine windows.
"""

from __future__ import annotations

from dataclasses import dataclass

from .internal_space import (
    FiniteCyclicFactor,
    HPoint,
    IntegerRankFactor,
    InternalSpace,
    RealFactor,
    SpaceMismatchError,
    TorusFactor,
    TwistedExtensionFactor,
)
from .scalars import Scalar


class OutOfCertifiedRangeError(LookupError):
    """Membership query outside the range an augmented window certifies."""


# ---------------------------------------------------------------------------
# One-dimensional interval sets with exact endpoints


class Interval:
    __slots__ = ("lo", "hi", "lo_closed", "hi_closed")

    def __init__(self, lo, hi, lo_closed=True, hi_closed=False):
        self.lo = Scalar.of(lo)
        self.hi = Scalar.of(hi)
        self.lo_closed = bool(lo_closed)
        self.hi_closed = bool(hi_closed)
        if self.lo > self.hi:
            raise ValueError("interval endpoints out of order")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise ValueError("degenerate interval must be closed; use IntervalSet for empty")

    def __eq__(self, other):
        return (
            isinstance(other, Interval)
            and self.lo == other.lo
            and self.hi == other.hi
            and self.lo_closed == other.lo_closed
            and self.hi_closed == other.hi_closed
        )

    def __hash__(self):
        return hash((self.lo, self.hi, self.lo_closed, self.hi_closed))

    def __repr__(self):
        return f"{'[' if self.lo_closed else '('}{self.lo}, {self.hi}{']' if self.hi_closed else ')'}"

    def contains(self, x: Scalar) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def to_obj(self):
        return {
            "lo": self.lo.to_obj(),
            "hi": self.hi.to_obj(),
            "lo_closed": self.lo_closed,
            "hi_closed": self.hi_closed,
        }

    @classmethod
    def from_obj(cls, obj):
        return cls(
            Scalar.from_obj(obj["lo"]),
            Scalar.from_obj(obj["hi"]),
            obj["lo_closed"],
            obj["hi_closed"],
        )


class IntervalSet:
    """Finite union of intervals in normal form (sorted, merged, disjoint)."""

    __slots__ = ("pieces",)

    def __init__(self, pieces=()):
        self.pieces = _normalize_pieces(pieces)

    @classmethod
    def single(cls, lo, hi, lo_closed=True, hi_closed=False):
        lo, hi = Scalar.of(lo), Scalar.of(hi)
        if lo == hi and not (lo_closed and hi_closed):
            return cls(())
        return cls((Interval(lo, hi, lo_closed, hi_closed),))

    @classmethod
    def point(cls, x):
        return cls((Interval(x, x, True, True),))

    def __eq__(self, other):
        return isinstance(other, IntervalSet) and self.pieces == other.pieces

    def __hash__(self):
        return hash(self.pieces)

    def __repr__(self):
        return "IntervalSet[" + ", ".join(map(repr, self.pieces)) + "]"

    def is_empty(self) -> bool:
        return not self.pieces

    def contains(self, x: Scalar) -> bool:
        return any(p.contains(x) for p in self.pieces)

    def interior(self) -> "IntervalSet":
        out = []
        for p in self.pieces:
            if p.lo == p.hi:
                continue
            out.append(Interval(p.lo, p.hi, False, False))
        return IntervalSet(out)

    def closure(self) -> "IntervalSet":
        return IntervalSet(Interval(p.lo, p.hi, True, True) for p in self.pieces)

    def measure(self) -> Scalar:
        total = Scalar(0)
        for p in self.pieces:
            total = total + (p.hi - p.lo)
        return total

    def translate(self, t) -> "IntervalSet":
        t = Scalar.of(t)
        return IntervalSet(
            Interval(p.lo + t, p.hi + t, p.lo_closed, p.hi_closed) for p in self.pieces
        )

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.pieces + other.pieces)

    def bounds(self):
        if not self.pieces:
            return None
        return (self.pieces[0].lo, self.pieces[-1].hi)

    def subset(self, other: "IntervalSet") -> bool:
        for q in self.pieces:
            if not any(_piece_subset(q, p) for p in other.pieces):
                return False
        return True

    def overlaps(self, other: "IntervalSet") -> bool:
        for p in self.pieces:
            for q in other.pieces:
                if _pieces_overlap(p, q):
                    return True
        return False

    def fills_gap(self, x: Scalar) -> bool:
        """True when x sits exactly between two pieces open at x."""
        for a, b in zip(self.pieces, self.pieces[1:]):
            if a.hi == x and b.lo == x and not a.hi_closed and not b.lo_closed:
                return True
        return False

    def with_point(self, x: Scalar) -> "IntervalSet":
        return IntervalSet(self.pieces + (Interval(x, x, True, True),))

    def endpoints(self) -> list[Scalar]:
        out = []
        for p in self.pieces:
            out.append(p.lo)
            out.append(p.hi)
        return out

    def is_open(self) -> bool:
        return all(
            not p.lo_closed and not p.hi_closed for p in self.pieces
        )

    def is_top_regular(self) -> bool:
        return self.interior().closure() == self.closure()

    def to_obj(self):
        return [p.to_obj() for p in self.pieces]

    @classmethod
    def from_obj(cls, obj):
        return cls(Interval.from_obj(p) for p in obj)


def _normalize_pieces(pieces) -> tuple[Interval, ...]:
    items = [p for p in pieces if isinstance(p, Interval)]
    if any(not isinstance(p, Interval) for p in pieces):
        raise TypeError("IntervalSet expects Interval pieces")
    items.sort(key=lambda p: (p.lo, not p.lo_closed))
    out: list[Interval] = []
    for p in items:
        if out and _mergeable(out[-1], p):
            out[-1] = _merge(out[-1], p)
        else:
            out.append(p)
    return tuple(out)


def _mergeable(a: Interval, b: Interval) -> bool:
    if b.lo < a.hi:
        return True
    if b.lo == a.hi and (a.hi_closed or b.lo_closed):
        return True
    return False


def _merge(a: Interval, b: Interval) -> Interval:
    lo, lo_closed = a.lo, a.lo_closed
    if b.lo == a.lo:
        lo_closed = lo_closed or b.lo_closed
    if a.hi > b.hi:
        hi, hi_closed = a.hi, a.hi_closed
    elif b.hi > a.hi:
        hi, hi_closed = b.hi, b.hi_closed
    else:
        hi, hi_closed = a.hi, a.hi_closed or b.hi_closed
    return Interval(lo, hi, lo_closed, hi_closed)


def _piece_subset(q: Interval, p: Interval) -> bool:
    if q.lo < p.lo or (q.lo == p.lo and q.lo_closed and not p.lo_closed):
        return False
    if q.hi > p.hi or (q.hi == p.hi and q.hi_closed and not p.hi_closed):
        return False
    return True


def _pieces_overlap(p: Interval, q: Interval) -> bool:
    if p.hi < q.lo or q.hi < p.lo:
        return False
    if p.hi == q.lo:
        return p.hi_closed and q.lo_closed
    if q.hi == p.lo:
        return q.hi_closed and p.lo_closed
    return True


# ---------------------------------------------------------------------------
# Per-factor regions


class RealRegion:
    __slots__ = ("axes",)

    def __init__(self, axes):
        self.axes = tuple(axes)

    def __eq__(self, other):
        return isinstance(other, RealRegion) and self.axes == other.axes

    def __hash__(self):
        return hash(self.axes)

    def is_empty(self):
        return any(a.is_empty() for a in self.axes)

    def contains(self, coord):
        return all(a.contains(x) for a, x in zip(self.axes, coord))

    def interior(self):
        return RealRegion(a.interior() for a in self.axes)

    def closure(self):
        return RealRegion(a.closure() for a in self.axes)

    def measure(self):
        total = Scalar(1)
        for a in self.axes:
            total = total * a.measure()
        return total

    def translate(self, coord):
        return RealRegion(a.translate(t) for a, t in zip(self.axes, coord))

    def is_open(self):
        return all(a.is_open() for a in self.axes)

    def is_top_regular(self):
        if self.is_empty():
            return True
        return all(a.is_top_regular() for a in self.axes)

    def subset(self, other):
        if self.is_empty():
            return True
        return all(a.subset(b) for a, b in zip(self.axes, other.axes))

    def separated_from(self, other):
        if self.is_empty() or other.is_empty():
            return True
        return any(
            not a.closure().overlaps(b.closure()) for a, b in zip(self.axes, other.axes)
        )

    def bounds(self):
        return tuple(a.bounds() for a in self.axes)

    def to_obj(self):
        return {"region": "real", "axes": [a.to_obj() for a in self.axes]}


class IntSetRegion:
    __slots__ = ("rank", "points")

    def __init__(self, rank, points):
        self.rank = rank
        self.points = frozenset(tuple(int(x) for x in p) for p in points)

    def __eq__(self, other):
        return (
            isinstance(other, IntSetRegion)
            and self.rank == other.rank
            and self.points == other.points
        )

    def __hash__(self):
        return hash((self.rank, self.points))

    def is_empty(self):
        return not self.points

    def contains(self, coord):
        return tuple(coord) in self.points

    def interior(self):
        return self

    def closure(self):
        return self

    def measure(self):
        return Scalar(len(self.points))

    def translate(self, coord):
        return IntSetRegion(
            self.rank, ((tuple(x + t for x, t in zip(p, coord))) for p in self.points)
        )

    def is_open(self):
        return True

    def is_top_regular(self):
        return True

    def subset(self, other):
        return self.points <= other.points

    def separated_from(self, other):
        return not (self.points & other.points)

    def bounds(self):
        if not self.points:
            return None
        return tuple(
            (min(p[i] for p in self.points), max(p[i] for p in self.points))
            for i in range(self.rank)
        )

    def to_obj(self):
        return {"region": "integer", "rank": self.rank, "points": sorted(map(list, self.points))}


class ResidueRegion:
    __slots__ = ("modulus", "residues")

    def __init__(self, modulus, residues):
        self.modulus = modulus
        self.residues = frozenset(int(r) % modulus for r in residues)

    def __eq__(self, other):
        return (
            isinstance(other, ResidueRegion)
            and self.modulus == other.modulus
            and self.residues == other.residues
        )

    def __hash__(self):
        return hash((self.modulus, self.residues))

    def is_empty(self):
        return not self.residues

    def contains(self, coord):
        return coord in self.residues

    def interior(self):
        return self

    def closure(self):
        return self

    def measure(self):
        return Scalar(len(self.residues))

    def translate(self, coord):
        return ResidueRegion(self.modulus, ((r + coord) % self.modulus for r in self.residues))

    def is_open(self):
        return True

    def is_top_regular(self):
        return True

    def subset(self, other):
        return self.residues <= other.residues

    def separated_from(self, other):
        return not (self.residues & other.residues)

    def bounds(self):
        return None

    def to_obj(self):
        return {"region": "cyclic", "modulus": self.modulus, "residues": sorted(self.residues)}


class TorusRegion:
    """Subset of a torus given by interval sets in fundamental coordinates."""

    __slots__ = ("factor", "axes")

    def __init__(self, factor: TorusFactor, axes):
        self.factor = factor
        self.axes = tuple(_wrap_unit(a) for a in axes)

    @classmethod
    def full(cls, factor: TorusFactor):
        return cls(factor, tuple(IntervalSet.single(0, 1) for _ in range(factor.dim)))

    def __eq__(self, other):
        return (
            isinstance(other, TorusRegion)
            and self.factor == other.factor
            and self.axes == other.axes
        )

    def __hash__(self):
        return hash((self.factor, self.axes))

    def is_empty(self):
        return any(a.is_empty() for a in self.axes)

    def contains(self, coord):
        # torus point coordinates are already fractional
        return all(a.contains(x) for a, x in zip(self.axes, coord))

    def interior(self):
        return TorusRegion(self.factor, (_circle_interior(a) for a in self.axes))

    def closure(self):
        return TorusRegion(self.factor, (_circle_closure(a) for a in self.axes))

    def measure(self):
        total = self.factor.mass()
        for a in self.axes:
            total = total * a.measure()
        return total

    def translate(self, coord):
        return TorusRegion(
            self.factor, (_circle_shift(a, s) for a, s in zip(self.axes, coord))
        )

    def is_open(self):
        return all(_is_full_circle(a) or a.is_open() for a in self.axes)

    def is_top_regular(self):
        if self.is_empty():
            return True
        return all(
            _circle_closure(_circle_interior(a)) == _circle_closure(a) for a in self.axes
        )

    def subset(self, other):
        if self.is_empty():
            return True
        return all(a.subset(b) for a, b in zip(self.axes, other.axes))

    def separated_from(self, other):
        if self.is_empty() or other.is_empty():
            return True
        return any(
            not _circle_closure(a).overlaps(_circle_closure(b))
            for a, b in zip(self.axes, other.axes)
        )

    def bounds(self):
        return None

    def to_obj(self):
        return {"region": "torus", "axes": [a.to_obj() for a in self.axes]}


class TwistedRegion:
    """Per-residue base windows inside a twisted cyclic extension."""

    __slots__ = ("factor", "per_residue")

    def __init__(self, factor: TwistedExtensionFactor, per_residue: dict):
        self.factor = factor
        self.per_residue = {
            int(r): w for r, w in per_residue.items() if not w.is_empty()
        }
        for r in self.per_residue:
            if not 0 <= r < factor.modulus:
                raise ValueError("twisted residue out of range")

    def __eq__(self, other):
        return (
            isinstance(other, TwistedRegion)
            and self.factor == other.factor
            and self.per_residue == other.per_residue
        )

    def __hash__(self):
        return hash((self.factor, tuple(sorted((r, hash(w)) for r, w in self.per_residue.items()))))

    def is_empty(self):
        return not self.per_residue

    def contains(self, coord):
        h, r = coord
        return r in self.per_residue and self.per_residue[r].contains(h)

    def interior(self):
        return TwistedRegion(
            self.factor, {r: w.interior() for r, w in self.per_residue.items()}
        )

    def closure(self):
        return TwistedRegion(
            self.factor, {r: w.closure() for r, w in self.per_residue.items()}
        )

    def measure(self):
        total = Scalar(0)
        for w in self.per_residue.values():
            total = total + w.measure()
        return total

    def translate(self, coord):
        h_t, r_t = coord
        f = self.factor
        out: dict[int, Window] = {}
        for r, w in self.per_residue.items():
            rr = r + r_t
            shifted = w.translate(h_t)
            if rr >= f.modulus:
                rr -= f.modulus
                shifted = shifted.translate(f.twist)
            out[rr] = shifted
        return TwistedRegion(f, out)

    def is_open(self):
        return all(w.is_open() for w in self.per_residue.values())

    def is_top_regular(self):
        return all(w.properties().topologically_regular for w in self.per_residue.values())

    def subset(self, other):
        for r, w in self.per_residue.items():
            if r not in other.per_residue or not window_subset(w, other.per_residue[r]):
                return False
        return True

    def separated_from(self, other):
        return not (set(self.per_residue) & set(other.per_residue))

    def bounds(self):
        return None

    def to_obj(self):
        return {
            "region": "twisted",
            "per_residue": {str(r): w.to_obj() for r, w in sorted(self.per_residue.items())},
        }


def _wrap_unit(iset: IntervalSet) -> IntervalSet:
    """Push interval pieces into [0, 1), splitting at integer boundaries."""
    out = []
    for p in iset.pieces:
        lo, hi = p.lo, p.hi
        if lo >= 0 and hi <= 1:
            if hi == 1 and p.hi_closed:
                out.append(Interval(lo, 1, p.lo_closed, False))
                out.append(Interval(0, 0, True, True))
            else:
                out.append(p)
            continue
        if hi - lo >= 1:
            return IntervalSet.single(0, 1)
        k = lo.floor()
        lo2, hi2 = lo - k, hi - k
        if hi2 <= 1:
            if hi2 == 1 and p.hi_closed:
                out.append(Interval(lo2, 1, p.lo_closed, False))
                out.append(Interval(0, 0, True, True))
            else:
                out.append(Interval(lo2, hi2, p.lo_closed, p.hi_closed))
        else:
            out.append(Interval(lo2, 1, p.lo_closed, False))
            out.append(Interval(0, hi2 - 1, True, p.hi_closed))
    result = IntervalSet(out)
    if len(result.pieces) == 1:
        p = result.pieces[0]
        if p.lo == Scalar(0) and p.lo_closed and p.hi == Scalar(1):
            return IntervalSet.single(0, 1)
    return result


def _is_full_circle(iset: IntervalSet) -> bool:
    return iset == IntervalSet.single(0, 1)


def _circle_gap_midpoint(iset: IntervalSet) -> Scalar:
    pieces = iset.pieces
    for a, b in zip(pieces, pieces[1:]):
        if b.lo > a.hi:
            return (a.hi + b.lo) / 2
    # seam gap between the last piece and the first, wrapping through 1
    last_hi = pieces[-1].hi
    first_lo = pieces[0].lo + 1
    if first_lo > last_hi:
        mid = (last_hi + first_lo) / 2
        return mid - 1 if mid >= 1 else mid
    raise ValueError("circle set has no gap")


def _circle_op(iset: IntervalSet, op) -> IntervalSet:
    if _is_full_circle(iset) or iset.is_empty():
        return iset
    t0 = _circle_gap_midpoint(iset)
    shifted = _circle_shift(iset, -t0)
    done = op(shifted)
    return _circle_shift(done, t0)


def _circle_interior(iset: IntervalSet) -> IntervalSet:
    return _circle_op(iset, lambda s: s.interior())


def _circle_closure(iset: IntervalSet) -> IntervalSet:
    return _circle_op(iset, lambda s: s.closure())


def _circle_fills_gap(iset: IntervalSet, x: Scalar) -> bool:
    if _is_full_circle(iset) or iset.is_empty():
        return False
    t0 = _circle_gap_midpoint(iset)
    shifted_x = x - t0
    shifted_x = shifted_x - shifted_x.floor()
    return _circle_shift(iset, -t0).fills_gap(shifted_x)


def _circle_with_point(iset: IntervalSet, x: Scalar) -> IntervalSet:
    return _wrap_unit(iset.with_point(x - x.floor()))


def _circle_shift(iset: IntervalSet, s) -> IntervalSet:
    s = Scalar.of(s)
    s = s - s.floor()
    if _is_full_circle(iset):
        return iset
    out = []
    for p in iset.pieces:
        lo, hi = p.lo + s, p.hi + s
        if hi <= 1:
            if hi == 1 and p.hi_closed:
                out.append(Interval(lo, 1, p.lo_closed, False))
                out.append(Interval(0, 0, True, True))
            else:
                out.append(Interval(lo, hi, p.lo_closed, p.hi_closed))
        elif lo >= 1:
            out.append(Interval(lo - 1, hi - 1, p.lo_closed, p.hi_closed))
        else:
            out.append(Interval(lo, 1, p.lo_closed, False))
            out.append(Interval(0, hi - 1, True, p.hi_closed))
    return IntervalSet(out)


# ---------------------------------------------------------------------------
# Windows


@dataclass(frozen=True)
class WindowProperties:
    precompact: bool
    has_interior: bool
    topologically_regular: bool
    measure_regular: bool
    measurable: bool = True

    def to_obj(self):
        return {
            "precompact": self.precompact,
            "has_interior": self.has_interior,
            "topologically_regular": self.topologically_regular,
            "measure_regular": self.measure_regular,
            "measurable": self.measurable,
        }


@dataclass
class EnumPiece:
    """Per-factor bound data consumed by the lattice enumerator."""

    real: dict
    ints: dict
    twists: dict


class Window:
    """Base class; see ProductWindow, UnionWindow, AugmentedWindow."""

    space: InternalSpace

    def boundary_measure(self) -> Scalar:
        return self.closure().measure() - self.interior().measure()

    def properties(self) -> WindowProperties:
        return WindowProperties(
            precompact=True,
            has_interior=not self.interior().is_empty(),
            topologically_regular=self._top_regular(),
            measure_regular=self.boundary_measure().is_zero(),
        )

    def key(self) -> str:
        import json

        return json.dumps(self.to_obj(), sort_keys=True, default=str)


class ProductWindow(Window):
    __slots__ = ("space", "regions", "_hash")

    def __init__(self, space: InternalSpace, regions):
        self.space = space
        self.regions = tuple(regions)
        if len(self.regions) != len(space.factors):
            raise SpaceMismatchError("one region per factor required")
        for f, r in zip(space.factors, self.regions):
            _check_region_type(f, r)
        self._hash = None

    def __eq__(self, other):
        if isinstance(other, ProductWindow):
            if self.is_empty() and other.is_empty():
                return True
            return self.space == other.space and self.regions == other.regions
        if isinstance(other, UnionWindow):
            return other.__eq__(self)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("empty", self.space)) if self.is_empty() else hash(self.regions)
        return self._hash

    def is_empty(self):
        return any(r.is_empty() for r in self.regions)

    def contains(self, p: HPoint) -> bool:
        if p.space != self.space:
            raise SpaceMismatchError("point lives in a different space")
        return all(r.contains(c) for r, c in zip(self.regions, p.coords))

    def interior(self):
        return ProductWindow(self.space, (r.interior() for r in self.regions))

    def closure(self):
        return ProductWindow(self.space, (r.closure() for r in self.regions))

    def measure(self):
        if self.is_empty():
            return Scalar(0)
        total = Scalar(1)
        for r in self.regions:
            total = total * r.measure()
        return total

    def translate(self, t: HPoint):
        if t.space != self.space:
            raise SpaceMismatchError("shift lives in a different space")
        return ProductWindow(
            self.space, (r.translate(c) for r, c in zip(self.regions, t.coords))
        )

    def is_open(self):
        return all(r.is_open() for r in self.regions)

    def _top_regular(self):
        if self.is_empty():
            return True
        return all(r.is_top_regular() for r in self.regions)

    def members(self):
        return [self]

    def enum_pieces(self):
        if self.is_empty():
            return []
        pieces = [EnumPiece(real={}, ints={}, twists={})]
        for idx, (f, r) in enumerate(zip(self.space.factors, self.regions)):
            if isinstance(f, RealFactor):
                b = r.closure().bounds()
                for p in pieces:
                    p.real[idx] = b
            elif isinstance(f, IntegerRankFactor):
                b = r.bounds()
                for p in pieces:
                    p.ints[idx] = b
            elif isinstance(f, TwistedExtensionFactor):
                expanded = []
                for residue, base_window in sorted(r.per_residue.items()):
                    for base_piece in base_window.enum_pieces():
                        for p in pieces:
                            q = EnumPiece(dict(p.real), dict(p.ints), dict(p.twists))
                            q.twists[idx] = (residue, base_piece)
                            expanded.append(q)
                pieces = expanded
        return pieces

    def to_obj(self):
        return {"kind": "product", "regions": [r.to_obj() for r in self.regions]}


class UnionWindow(Window):
    """Disjoint finite union; members must be separated (see module notes)."""

    __slots__ = ("space", "members_", "_hash")

    def __init__(self, space: InternalSpace, members):
        self.space = space
        flat = []
        for m in members:
            flat.extend(m.members())
        flat = [m for m in flat if not m.is_empty()]
        for i, a in enumerate(flat):
            for b in flat[i + 1:]:
                if not _separated(a, b):
                    raise ValueError(
                        "union members overlap or touch; unsupported window union"
                    )
        self.members_ = tuple(sorted(flat, key=lambda w: w.key()))
        self._hash = None

    def __eq__(self, other):
        if isinstance(other, UnionWindow):
            if self.is_empty() and other.is_empty():
                return True
            return self.members_ == other.members_
        if isinstance(other, ProductWindow):
            if self.is_empty() and other.is_empty():
                return True
            return len(self.members_) == 1 and self.members_[0] == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("empty", self.space)) if self.is_empty() else hash(self.members_)
        return self._hash

    def is_empty(self):
        return not self.members_

    def contains(self, p: HPoint) -> bool:
        return any(m.contains(p) for m in self.members_)

    def interior(self):
        return UnionWindow(self.space, [m.interior() for m in self.members_])

    def closure(self):
        return UnionWindow(self.space, [m.closure() for m in self.members_])

    def measure(self):
        total = Scalar(0)
        for m in self.members_:
            total = total + m.measure()
        return total

    def translate(self, t: HPoint):
        return UnionWindow(self.space, [m.translate(t) for m in self.members_])

    def is_open(self):
        return all(m.is_open() for m in self.members_)

    def _top_regular(self):
        return all(m._top_regular() for m in self.members_)

    def members(self):
        return list(self.members_)

    def enum_pieces(self):
        out = []
        for m in self.members_:
            out.extend(m.enum_pieces())
        return out

    def to_obj(self):
        return {"kind": "union", "members": [m.to_obj() for m in self.members_]}


class AugmentedWindow(Window):
    """An open core together with a finite set of adjoined star points."""

    __slots__ = ("space", "open_part", "stars", "certifier")

    def __init__(self, open_part: Window, stars, certifier=None):
        if not open_part.is_open():
            raise ValueError("augmented window core must be open")
        self.space = open_part.space
        self.open_part = open_part
        pruned = []
        seen = set()
        for p in stars:
            if p.space != self.space:
                raise SpaceMismatchError("star point in a different space")
            if open_part.contains(p) or p in seen:
                continue
            seen.add(p)
            pruned.append(p)
        self.stars = tuple(sorted(pruned, key=lambda p: str(p.to_obj())))
        self.certifier = certifier

    def __eq__(self, other):
        return (
            isinstance(other, AugmentedWindow)
            and self.open_part == other.open_part
            and self.stars == other.stars
        )

    def __hash__(self):
        return hash((self.open_part, self.stars))

    def is_empty(self):
        return self.open_part.is_empty() and not self.stars

    def contains(self, p: HPoint) -> bool:
        if self.open_part.contains(p):
            return True
        if p in self.stars:
            return True
        if self.certifier is not None and not self.certifier(p):
            raise OutOfCertifiedRangeError(
                "membership query outside the certified truncation range"
            )
        return False

    def interior(self):
        rho = self.space.continuous_dim
        if rho == 0:
            singles = [point_window(self.space, p) for p in self.stars]
            return UnionWindow(self.space, self.open_part.members() + singles)
        core = self.open_part
        if rho == 1:
            for p in self.stars:
                filled = _gap_fill(core, p)
                if filled is not None:
                    core = filled
        return core

    def closure(self):
        closed = self.open_part.closure()
        extra = [point_window(self.space, p) for p in self.stars if not closed.contains(p)]
        return UnionWindow(self.space, closed.members() + extra)

    def measure(self):
        return self.open_part.measure() + self.space.point_mass() * len(self.stars)

    def translate(self, t: HPoint):
        moved = [self.space.add(p, t) for p in self.stars]
        certifier = None
        if self.certifier is not None:
            neg_t = self.space.negate(t)
            orig = self.certifier
            certifier = lambda p: orig(self.space.add(p, neg_t))  # noqa: E731
        return AugmentedWindow(self.open_part.translate(t), moved, certifier)

    def is_open(self):
        return not self.stars

    def _top_regular(self):
        closed = self.open_part.closure()
        return all(closed.contains(p) for p in self.stars)

    def members(self):
        raise ValueError("augmented windows cannot be union members")

    def enum_pieces(self):
        out = self.open_part.enum_pieces()
        for p in self.stars:
            out.append(_point_piece(self.space, p))
        return out

    def to_obj(self):
        return {
            "kind": "augmented",
            "open": self.open_part.to_obj(),
            "stars": [p.to_obj() for p in self.stars],
        }


def _check_region_type(factor, region):
    ok = (
        (isinstance(factor, RealFactor) and isinstance(region, RealRegion) and len(region.axes) == factor.dim)
        or (isinstance(factor, IntegerRankFactor) and isinstance(region, IntSetRegion) and region.rank == factor.rank)
        or (isinstance(factor, FiniteCyclicFactor) and isinstance(region, ResidueRegion) and region.modulus == factor.modulus)
        or (isinstance(factor, TorusFactor) and isinstance(region, TorusRegion) and region.factor == factor)
        or (isinstance(factor, TwistedExtensionFactor) and isinstance(region, TwistedRegion) and region.factor == factor)
    )
    if not ok:
        raise SpaceMismatchError(f"region {region!r} does not fit factor {factor!r}")


def _separated(a: ProductWindow, b: ProductWindow) -> bool:
    for ra, rb in zip(a.regions, b.regions):
        if ra.separated_from(rb):
            return True
    return False


def _gap_fill(window: Window, p: HPoint):
    """Absorb an isolated point into an open window when it fills a gap.

    Only meaningful when the total continuous dimension is 1; returns the
    merged window or None when p is not two-sided-adjacent to the core.
    """
    for member in window.members():
        merged = _gap_fill_member(member, p)
        if merged is not None:
            others = [m for m in window.members() if m is not member]
            if not others:
                return merged
            return UnionWindow(window.space, others + [merged])
    return None


def _gap_fill_member(member: ProductWindow, p: HPoint):
    new_regions = list(member.regions)
    gap_at = None
    for idx, (f, r, c) in enumerate(zip(member.space.factors, member.regions, p.coords)):
        if isinstance(f, RealFactor):
            (x,) = c if isinstance(c, tuple) else (c,)
            if r.axes[0].contains(x):
                continue
            if len(r.axes) == 1 and r.axes[0].fills_gap(x):
                if gap_at is not None:
                    return None
                gap_at = (idx, RealRegion((r.axes[0].with_point(x),)))
                continue
            return None
        elif isinstance(f, TwistedExtensionFactor):
            h, res = c
            if res not in r.per_residue:
                return None
            base = r.per_residue[res]
            if base.contains(h):
                continue
            filled = _gap_fill(base, h)
            if filled is None:
                return None
            if gap_at is not None:
                return None
            per = dict(r.per_residue)
            per[res] = filled
            gap_at = (idx, TwistedRegion(f, per))
        elif isinstance(f, TorusFactor):
            if r.contains(c):
                continue
            if f.dim == 1 and _circle_fills_gap(r.axes[0], c[0]):
                if gap_at is not None:
                    return None
                gap_at = (idx, TorusRegion(f, (_circle_with_point(r.axes[0], c[0]),)))
                continue
            return None
        else:
            if not r.contains(c):
                return None
    if gap_at is None:
        return None
    idx, region = gap_at
    new_regions[idx] = region
    return ProductWindow(member.space, new_regions)


def point_window(space: InternalSpace, p: HPoint) -> ProductWindow:
    """The singleton window {p}."""
    regions = []
    for f, c in zip(space.factors, p.coords):
        if isinstance(f, RealFactor):
            regions.append(RealRegion(tuple(IntervalSet.point(x) for x in c)))
        elif isinstance(f, IntegerRankFactor):
            regions.append(IntSetRegion(f.rank, {tuple(c)}))
        elif isinstance(f, FiniteCyclicFactor):
            regions.append(ResidueRegion(f.modulus, {c}))
        elif isinstance(f, TorusFactor):
            regions.append(TorusRegion(f, tuple(IntervalSet.point(x) for x in c)))
        else:
            regions.append(TwistedRegion(f, {c[1]: point_window(f.base, c[0])}))
    return ProductWindow(space, regions)


def _point_piece(space: InternalSpace, p: HPoint) -> EnumPiece:
    piece = EnumPiece(real={}, ints={}, twists={})
    for idx, (f, c) in enumerate(zip(space.factors, p.coords)):
        if isinstance(f, RealFactor):
            piece.real[idx] = tuple((x, x) for x in c)
        elif isinstance(f, IntegerRankFactor):
            piece.ints[idx] = tuple((n, n) for n in c)
        elif isinstance(f, TwistedExtensionFactor):
            piece.twists[idx] = (c[1], _point_piece(f.base, c[0]))
    return piece


def empty_window(space: InternalSpace) -> UnionWindow:
    return UnionWindow(space, [])


def interval_window(space: InternalSpace, lo, hi, lo_closed=True, hi_closed=False) -> ProductWindow:
    """Convenience for spaces whose single factor is a real line."""
    (factor,) = space.factors
    if not isinstance(factor, RealFactor) or factor.dim != 1:
        raise SpaceMismatchError("interval_window expects a one-dimensional real space")
    return ProductWindow(
        space, (RealRegion((IntervalSet.single(lo, hi, lo_closed, hi_closed),)),)
    )


def window_subset(a: Window, b: Window) -> bool:
    """Exact containment for product/union windows (augmented via reduction)."""
    if a.is_empty():
        return True
    if isinstance(a, AugmentedWindow):
        return window_subset(a.open_part, b) and all(b.contains(p) for p in a.stars)
    for m in a.members():
        if isinstance(b, AugmentedWindow):
            if window_subset(m, b.open_part):
                continue
            return False
        if not any(_member_subset(m, n) for n in b.members()):
            return False
    return True


def _member_subset(a: ProductWindow, b: ProductWindow) -> bool:
    return all(ra.subset(rb) for ra, rb in zip(a.regions, b.regions))


def window_from_obj(space: InternalSpace, obj) -> Window:
    kind = obj["kind"]
    if kind == "product":
        regions = []
        for f, ro in zip(space.factors, obj["regions"]):
            regions.append(_region_from_obj(f, ro))
        return ProductWindow(space, regions)
    if kind == "union":
        return UnionWindow(space, [window_from_obj(space, m) for m in obj["members"]])
    if kind == "augmented":
        open_part = window_from_obj(space, obj["open"])
        stars = [HPoint.from_obj(space, po) for po in obj["stars"]]
        return AugmentedWindow(open_part, stars)
    raise ValueError(f"unknown window kind {kind!r}")


def _region_from_obj(factor, obj):
    kind = obj["region"]
    if kind == "real":
        return RealRegion(tuple(IntervalSet.from_obj(a) for a in obj["axes"]))
    if kind == "integer":
        return IntSetRegion(obj["rank"], obj["points"])
    if kind == "cyclic":
        return ResidueRegion(obj["modulus"], obj["residues"])
    if kind == "torus":
        return TorusRegion(factor, tuple(IntervalSet.from_obj(a) for a in obj["axes"]))
    if kind == "twisted":
        return TwistedRegion(
            factor,
            {int(r): window_from_obj(factor.base, w) for r, w in obj["per_residue"].items()},
        )
    raise ValueError(f"unknown region kind {kind!r}")


def check_properties(window: Window) -> WindowProperties:
    """Precompactness, interior, topological and measure regularity flags."""
    return window.properties()


def eq11_chain(base: Window, augmented: Window) -> bool:
    """The inclusion chain interior(W) in interior(W') in W' in cl(W') in cl(W)."""
    w_int = base.interior()
    a_int = augmented.interior()
    a_cl = augmented.closure()
    w_cl = base.closure()
    if not window_subset(w_int, a_int):
        return False
    # interior(W') inside W': open core plus absorbed gap points
    if isinstance(augmented, AugmentedWindow):
        if not window_subset(augmented.open_part, a_cl):
            return False
        if not all(a_cl.contains(p) for p in augmented.stars):
            return False
    if not window_subset(a_int, a_cl):
        return False
    return window_subset(a_cl, w_cl)
