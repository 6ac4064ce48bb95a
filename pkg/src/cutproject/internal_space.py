"""Internal spaces: finite products of concrete locally compact factors.

Supported factors: real lines, free integer ranks, finite cyclic groups,
torus quotients of R^d by a nonsingular lattice basis, and cyclic extensions
of a base space twisted by a carry element.  Points carry canonical
coordinates (reduced residues, fundamental-domain torus representatives), so
equality of points is plain structural comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .scalars import Scalar


class SpaceMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class RealFactor:
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("real factor needs dim >= 1")


@dataclass(frozen=True)
class IntegerRankFactor:
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("integer factor needs rank >= 1")


@dataclass(frozen=True)
class FiniteCyclicFactor:
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("cyclic factor needs modulus >= 2")


class TorusFactor:
    """R^dim modulo the lattice spanned by the rows of ``basis``.

    Point coordinates are fractional (basis coefficients in [0, 1)); the
    ambient representative in the fundamental parallelepiped is derived.
    """

    __slots__ = ("dim", "basis", "_hash")

    def __init__(self, dim: int, basis: tuple[tuple[Scalar, ...], ...]):
        self.dim = dim
        self.basis = tuple(tuple(Scalar.of(v) for v in row) for row in basis)
        if len(self.basis) != dim or any(len(r) != dim for r in self.basis):
            raise ValueError("torus basis must be a square matrix")
        if linalg.det([list(r) for r in self.basis]).is_zero():
            raise ValueError("torus basis is singular")
        self._hash = None

    def mass(self) -> Scalar:
        return abs(linalg.det([list(r) for r in self.basis]))

    def fractional(self, ambient) -> tuple[Scalar, ...]:
        """Basis coefficients of an ambient vector, reduced into [0, 1)."""
        if all(
            self.basis[i][j].is_zero()
            for i in range(self.dim)
            for j in range(self.dim)
            if i != j
        ):
            coeffs = [ambient[i] / self.basis[i][i] for i in range(self.dim)]
        else:
            mat = [[self.basis[i][j] for i in range(self.dim)] for j in range(self.dim)]
            coeffs = linalg.solve_exact(mat, list(ambient))
        return tuple(c - c.floor() for c in coeffs)

    def ambient(self, fractional) -> tuple[Scalar, ...]:
        out = []
        for j in range(self.dim):
            acc = Scalar(0)
            for i in range(self.dim):
                acc = acc + fractional[i] * self.basis[i][j]
            out.append(acc)
        return tuple(out)

    def __eq__(self, other):
        return (
            isinstance(other, TorusFactor)
            and self.dim == other.dim
            and self.basis == other.basis
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("torus", self.dim, self.basis))
        return self._hash

    def __repr__(self):
        return f"TorusFactor({self.dim}, {self.basis!r})"


class TwistedExtensionFactor:
    """Cyclic extension of ``base`` with carry element ``twist``.

    Points are pairs (h, r) with h in the base and r in [0, modulus); adding
    residues past the modulus folds the carry back in via ``twist``.
    """

    __slots__ = ("base", "modulus", "twist", "_hash")

    def __init__(self, base: "InternalSpace", modulus: int, twist: "HPoint"):
        if modulus < 1:
            raise ValueError("twisted extension needs modulus >= 1")
        if any(isinstance(f, TwistedExtensionFactor) for f in base.factors):
            raise ValueError("twisted extensions do not nest")
        if twist.space != base:
            raise SpaceMismatchError("twist element must live in the base space")
        self.base = base
        self.modulus = modulus
        self.twist = twist
        self._hash = None

    def __eq__(self, other):
        return (
            isinstance(other, TwistedExtensionFactor)
            and self.modulus == other.modulus
            and self.base == other.base
            and self.twist == other.twist
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("twist", self.modulus, self.base, self.twist))
        return self._hash

    def __repr__(self):
        return f"TwistedExtensionFactor({self.base!r}, {self.modulus}, {self.twist!r})"


Factor = RealFactor | IntegerRankFactor | FiniteCyclicFactor | TorusFactor | TwistedExtensionFactor


class InternalSpace:
    __slots__ = ("factors", "_hash")

    def __init__(self, factors=()):
        self.factors = tuple(factors)
        self._hash = None

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, InternalSpace) and self.factors == other.factors

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.factors)
        return self._hash

    def __repr__(self):
        return f"InternalSpace({list(self.factors)!r})"

    # -- structure -------------------------------------------------------

    @property
    def continuous_dim(self) -> int:
        """Total real dimension (real, torus and twisted-base directions)."""
        total = 0
        for f in self.factors:
            if isinstance(f, RealFactor):
                total += f.dim
            elif isinstance(f, TorusFactor):
                total += f.dim
            elif isinstance(f, TwistedExtensionFactor):
                total += f.base.continuous_dim
        return total

    @property
    def real_dim(self) -> int:
        total = 0
        for f in self.factors:
            if isinstance(f, RealFactor):
                total += f.dim
            elif isinstance(f, TwistedExtensionFactor):
                total += f.base.real_dim
        return total

    @property
    def integer_rank(self) -> int:
        total = 0
        for f in self.factors:
            if isinstance(f, IntegerRankFactor):
                total += f.rank
            elif isinstance(f, TwistedExtensionFactor):
                total += f.base.integer_rank
        return total

    def point_mass(self) -> Scalar:
        """Haar measure of a single point (1 on fully discrete spaces)."""
        return Scalar(0) if self.continuous_dim > 0 else Scalar(1)

    # -- point construction ------------------------------------------------

    def zero(self) -> "HPoint":
        coords = []
        for f in self.factors:
            if isinstance(f, RealFactor):
                coords.append(tuple(Scalar(0) for _ in range(f.dim)))
            elif isinstance(f, IntegerRankFactor):
                coords.append((0,) * f.rank)
            elif isinstance(f, FiniteCyclicFactor):
                coords.append(0)
            elif isinstance(f, TorusFactor):
                coords.append(tuple(Scalar(0) for _ in range(f.dim)))
            else:
                coords.append((f.base.zero(), 0))
        return HPoint(self, tuple(coords))

    def point(self, *coords) -> "HPoint":
        """Build a point, canonicalizing residues and torus representatives."""
        if len(coords) != len(self.factors):
            raise SpaceMismatchError(
                f"expected {len(self.factors)} factor coordinates, got {len(coords)}"
            )
        out = []
        for f, c in zip(self.factors, coords):
            if isinstance(f, RealFactor):
                vec = tuple(Scalar.of(v) for v in (c if isinstance(c, (tuple, list)) else (c,)))
                if len(vec) != f.dim:
                    raise SpaceMismatchError("real coordinate arity mismatch")
                out.append(vec)
            elif isinstance(f, IntegerRankFactor):
                vec_i = tuple(int(v) for v in (c if isinstance(c, (tuple, list)) else (c,)))
                if len(vec_i) != f.rank:
                    raise SpaceMismatchError("integer coordinate arity mismatch")
                out.append(vec_i)
            elif isinstance(f, FiniteCyclicFactor):
                out.append(int(c) % f.modulus)
            elif isinstance(f, TorusFactor):
                vec = tuple(Scalar.of(v) for v in (c if isinstance(c, (tuple, list)) else (c,)))
                if len(vec) != f.dim:
                    raise SpaceMismatchError("torus coordinate arity mismatch")
                out.append(f.fractional(vec))
            else:
                h, r = c
                if h.space != f.base:
                    raise SpaceMismatchError("twisted base coordinate mismatch")
                out.append(_twist_reduce(f, h, int(r)))
        return HPoint(self, tuple(out))

    # -- group operations ---------------------------------------------------

    def add(self, x: "HPoint", y: "HPoint") -> "HPoint":
        if x.space != self or y.space != self:
            raise SpaceMismatchError("operands from a different space")
        coords = []
        for f, a, b in zip(self.factors, x.coords, y.coords):
            if isinstance(f, RealFactor):
                coords.append(tuple(u + v for u, v in zip(a, b)))
            elif isinstance(f, IntegerRankFactor):
                coords.append(tuple(u + v for u, v in zip(a, b)))
            elif isinstance(f, FiniteCyclicFactor):
                coords.append((a + b) % f.modulus)
            elif isinstance(f, TorusFactor):
                summed = []
                for u, v in zip(a, b):
                    s = u + v
                    if s >= 1:
                        s = s - 1
                    summed.append(s)
                coords.append(tuple(summed))
            else:
                h1, r1 = a
                h2, r2 = b
                h = f.base.add(h1, h2)
                r = r1 + r2
                if r >= f.modulus:
                    h = f.base.add(h, f.twist)
                    r -= f.modulus
                coords.append((h, r))
        return HPoint(self, tuple(coords))

    def negate(self, x: "HPoint") -> "HPoint":
        return self.scale(x, -1)

    def scale(self, x: "HPoint", k: int) -> "HPoint":
        if x.space != self:
            raise SpaceMismatchError("operand from a different space")
        coords = []
        for f, a in zip(self.factors, x.coords):
            if isinstance(f, RealFactor):
                coords.append(tuple(v * k for v in a))
            elif isinstance(f, IntegerRankFactor):
                coords.append(tuple(v * k for v in a))
            elif isinstance(f, FiniteCyclicFactor):
                coords.append((a * k) % f.modulus)
            elif isinstance(f, TorusFactor):
                scaled = []
                for v in a:
                    s = v * k
                    scaled.append(s - s.floor())
                coords.append(tuple(scaled))
            else:
                h, r = a
                coords.append(_twist_reduce(f, f.base.scale(h, k), r * k))
        return HPoint(self, tuple(coords))

    # -- serialization -------------------------------------------------------

    def to_obj(self):
        out = []
        for f in self.factors:
            if isinstance(f, RealFactor):
                out.append({"factor": "real", "dim": f.dim})
            elif isinstance(f, IntegerRankFactor):
                out.append({"factor": "integer", "rank": f.rank})
            elif isinstance(f, FiniteCyclicFactor):
                out.append({"factor": "cyclic", "modulus": f.modulus})
            elif isinstance(f, TorusFactor):
                out.append(
                    {
                        "factor": "torus",
                        "dim": f.dim,
                        "basis": [[v.to_obj() for v in row] for row in f.basis],
                    }
                )
            else:
                out.append(
                    {
                        "factor": "twisted",
                        "modulus": f.modulus,
                        "base": f.base.to_obj(),
                        "twist": f.twist.to_obj(),
                    }
                )
        return {"factors": out}

    @classmethod
    def from_obj(cls, obj) -> "InternalSpace":
        factors: list[Factor] = []
        for fo in obj["factors"]:
            kind = fo["factor"]
            if kind == "real":
                factors.append(RealFactor(fo["dim"]))
            elif kind == "integer":
                factors.append(IntegerRankFactor(fo["rank"]))
            elif kind == "cyclic":
                factors.append(FiniteCyclicFactor(fo["modulus"]))
            elif kind == "torus":
                basis = tuple(
                    tuple(Scalar.from_obj(v) for v in row) for row in fo["basis"]
                )
                factors.append(TorusFactor(fo["dim"], basis))
            elif kind == "twisted":
                base = cls.from_obj(fo["base"])
                twist = HPoint.from_obj(base, fo["twist"])
                factors.append(TwistedExtensionFactor(base, fo["modulus"], twist))
            else:
                raise ValueError(f"unknown factor kind {kind!r}")
        return cls(factors)


class HPoint:
    __slots__ = ("space", "coords", "_hash")

    def __init__(self, space: InternalSpace, coords: tuple):
        self.space = space
        self.coords = coords
        self._hash = None

    def __eq__(self, other):
        return (
            isinstance(other, HPoint)
            and self.space == other.space
            and self.coords == other.coords
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coords)
        return self._hash

    def __repr__(self):
        return f"HPoint({self.coords!r})"

    def to_obj(self):
        out = []
        for f, c in zip(self.space.factors, self.coords):
            if isinstance(f, RealFactor):
                out.append([v.to_obj() for v in c])
            elif isinstance(f, TorusFactor):
                out.append([v.to_obj() for v in f.ambient(c)])
            elif isinstance(f, IntegerRankFactor):
                out.append(list(c))
            elif isinstance(f, FiniteCyclicFactor):
                out.append(c)
            else:
                out.append({"base": c[0].to_obj(), "r": c[1]})
        return {"coords": out}

    @classmethod
    def from_obj(cls, space: InternalSpace, obj) -> "HPoint":
        raw = []
        for f, c in zip(space.factors, obj["coords"]):
            if isinstance(f, (RealFactor, TorusFactor)):
                raw.append(tuple(Scalar.from_obj(v) for v in c))
            elif isinstance(f, IntegerRankFactor):
                raw.append(tuple(int(v) for v in c))
            elif isinstance(f, FiniteCyclicFactor):
                raw.append(int(c))
            else:
                raw.append((cls.from_obj(f.base, c["base"]), int(c["r"])))
        return space.point(*raw)


def _twist_reduce(f: TwistedExtensionFactor, h: "HPoint", r: int) -> tuple:
    s = r // f.modulus
    r -= s * f.modulus
    if s:
        h = f.base.add(h, f.base.scale(f.twist, s))
    return (h, r)


def haar_measure(space: InternalSpace, region) -> Scalar:
    """Haar measure of a window region, under the package's normalization.

    Lebesgue measure on real directions, counting measure on discrete
    factors, total mass |det basis| on each torus factor.
    """
    if region.space != space:
        raise SpaceMismatchError("region lives in a different space")
    return region.measure()
