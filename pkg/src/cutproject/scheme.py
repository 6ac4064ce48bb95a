"""Cut-and-project schemes: lattice data, star map, point enumeration.

A scheme is direct-space dimension d, an internal space H, and lattice
generator columns (g, h) indexed by free integer coordinates.  Enumeration
works on a lifted square presentation: twisted extensions are unrolled into
their base plus an explicit carry generator, so every continuous coordinate
of a lattice point is linear in the lifted integer coordinates and a
rigorous interval inverse yields exhaustive candidate boxes.  Compact factor
coordinates (finite residues, torus positions) never affect boundedness and
are handled by exact membership filtering.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction

from . import linalg, ratmath
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
from .windows import Window

DEFAULT_MAX_CANDIDATES = 5_000_000


class EnumerationOverflowError(RuntimeError):
    """Candidate box larger than the configured enumeration budget."""


class SchemeError(ValueError):
    pass


class Box:
    """Closed axis-aligned box in direct space."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        self.lo = tuple(Scalar.of(v) for v in lo)
        self.hi = tuple(Scalar.of(v) for v in hi)
        if len(self.lo) != len(self.hi):
            raise ValueError("box corner dimensions differ")
        for a, b in zip(self.lo, self.hi):
            if a > b:
                raise ValueError("box corners out of order")

    @classmethod
    def symmetric(cls, radius, dim=1):
        r = Scalar.of(radius)
        return cls([-r] * dim, [r] * dim)

    @classmethod
    def interval(cls, lo, hi):
        return cls([lo], [hi])

    @property
    def dim(self):
        return len(self.lo)

    def contains(self, point) -> bool:
        return all(a <= x <= b for a, x, b in zip(self.lo, point, self.hi))

    def translate(self, vec) -> "Box":
        return Box(
            [a + v for a, v in zip(self.lo, vec)], [b + v for b, v in zip(self.hi, vec)]
        )

    def __eq__(self, other):
        return isinstance(other, Box) and self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return f"Box({self.lo!r}, {self.hi!r})"

    def to_obj(self):
        return {"lo": [v.to_obj() for v in self.lo], "hi": [v.to_obj() for v in self.hi]}

    @classmethod
    def from_obj(cls, obj):
        return cls(
            [Scalar.from_obj(v) for v in obj["lo"]],
            [Scalar.from_obj(v) for v in obj["hi"]],
        )


@dataclass(frozen=True)
class AveragingSequence:
    """The centred cube sequence A_n = [-n, n]^d."""

    dim: int

    def box(self, n: int) -> Box:
        return Box.symmetric(n, self.dim)


class Patch:
    """Finite sorted point set in direct space with provenance."""

    __slots__ = ("points", "box", "scheme_id", "coords")

    def __init__(self, points, box: Box, scheme_id: str = "", coords=None):
        pairs = list(zip(points, coords)) if coords is not None else [(p, None) for p in points]
        pairs.sort(key=lambda pc: pc[0])
        pts = []
        crd = []
        for p, c in pairs:
            p = tuple(Scalar.of(v) for v in p)
            if pts and pts[-1] == p:
                continue
            if not box.contains(p):
                raise ValueError(f"patch point {p!r} outside its box")
            pts.append(p)
            crd.append(tuple(int(x) for x in c) if c is not None else None)
        self.points = tuple(pts)
        self.box = box
        self.scheme_id = scheme_id
        self.coords = tuple(crd) if coords is not None else None

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __eq__(self, other):
        return (
            isinstance(other, Patch)
            and self.points == other.points
            and self.box == other.box
        )

    def __hash__(self):
        return hash((self.points, self.box))

    def point_set(self) -> frozenset:
        return frozenset(self.points)

    def translate(self, vec) -> "Patch":
        vec = tuple(Scalar.of(v) for v in vec)
        return Patch(
            [tuple(x + v for x, v in zip(p, vec)) for p in self.points],
            self.box.translate(vec),
            self.scheme_id,
            self.coords,
        )

    def restrict(self, box: Box) -> "Patch":
        keep = [i for i, p in enumerate(self.points) if box.contains(p)]
        return Patch(
            [self.points[i] for i in keep],
            box,
            self.scheme_id,
            [self.coords[i] for i in keep] if self.coords is not None else None,
        )

    def to_obj(self):
        out = {
            "box": self.box.to_obj(),
            "scheme_id": self.scheme_id,
            "points": [[v.to_obj() for v in p] for p in self.points],
        }
        if self.coords is not None:
            out["coords"] = [list(c) for c in self.coords]
        return out

    @classmethod
    def from_obj(cls, obj):
        return cls(
            [[Scalar.from_obj(v) for v in p] for p in obj["points"]],
            Box.from_obj(obj["box"]),
            obj.get("scheme_id", ""),
            obj.get("coords"),
        )

    def to_csv_text(self) -> str:
        dim = len(self.box.lo)
        header = [f"x{i + 1}" for i in range(dim)]
        rank = len(self.coords[0]) if self.coords else 0
        if self.coords is not None and self.points:
            header += [f"n{j + 1}" for j in range(rank)]
        lines = [",".join(header)]
        for i, p in enumerate(self.points):
            row = [repr(float(v)) for v in p]
            if self.coords is not None and self.points:
                row += [str(x) for x in self.coords[i]]
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"


@dataclass
class Commensurability:
    """Outcome of testing whether multiples of a direct vector hit the lattice."""

    status: str  # "commensurate" | "incommensurate" | "unknown"
    m: int | None = None
    n: tuple[int, ...] | None = None
    heuristic: bool = False


class CutProjectScheme:
    def __init__(self, d: int, space: InternalSpace, generators, *, require_injective=True):
        self.d = d
        self.space = space
        gens = []
        for g, h in generators:
            gvec = tuple(Scalar.of(v) for v in (g if isinstance(g, (tuple, list)) else (g,)))
            if len(gvec) != d:
                raise SchemeError("generator direct part has wrong dimension")
            if h.space != space:
                raise SpaceMismatchError("generator internal part in a different space")
            gens.append((gvec, h))
        self.generators = tuple(gens)
        self.rank = len(gens)
        expected = d + space.real_dim + space.integer_rank
        if self.rank != expected:
            raise SchemeError(
                f"rank {self.rank} does not match d + real + integer = {expected}"
            )
        self._build_lift()
        self.direct_injective = self._check_direct_injective(require_injective)
        self._id = None
        self._density_heuristic = None
        self._inverse_rows_cache = {}

    # -- lifted presentation -------------------------------------------------

    def _build_lift(self):
        self._twist_row = {}
        cursor = self.d
        for idx, f in enumerate(self.space.factors):
            if isinstance(f, RealFactor):
                cursor += f.dim
            elif isinstance(f, IntegerRankFactor):
                cursor += f.rank
            elif isinstance(f, TwistedExtensionFactor):
                cursor += f.base.real_dim + f.base.integer_rank
                self._twist_row[idx] = cursor
                cursor += 1
        rows_per_gen = [self._row_values(g, h) for g, h in self.generators]
        aux_cols: list[list[Scalar]] = []
        for idx, f in enumerate(self.space.factors):
            if isinstance(f, TwistedExtensionFactor):
                coords = list(self.space.zero().coords)
                coords[idx] = (f.twist, 0)
                carrier = HPoint(self.space, tuple(coords))
                col = self._row_values(tuple(Scalar(0) for _ in range(self.d)), carrier)
                col[self._twist_row[idx]] = Scalar(-f.modulus)
                aux_cols.append(col)
        cols = [list(r) for r in rows_per_gen] + aux_cols
        size = len(cols)
        if size and any(len(c) != size for c in cols):
            raise SchemeError("lifted presentation is not square")
        self.lift_size = size
        self.matrix = [[cols[j][i] for j in range(size)] for i in range(size)]
        if size:
            self._det = linalg.det(self.matrix)
            if self._det.is_zero():
                raise SchemeError("lattice embedding is singular")
        else:
            self._det = Scalar(1)

    def _row_values(self, gvec, h: HPoint) -> list[Scalar]:
        """Stack direct, real, integer and twist-carry coordinates of (g, h)."""
        rows: list[Scalar] = list(gvec)
        for f, c in zip(self.space.factors, h.coords):
            if isinstance(f, RealFactor):
                rows.extend(c)
            elif isinstance(f, IntegerRankFactor):
                rows.extend(Scalar(v) for v in c)
            elif isinstance(f, TwistedExtensionFactor):
                base_pt, residue = c
                for bf, bc in zip(f.base.factors, base_pt.coords):
                    if isinstance(bf, RealFactor):
                        rows.extend(bc)
                    elif isinstance(bf, IntegerRankFactor):
                        rows.extend(Scalar(v) for v in bc)
                rows.append(Scalar(residue))
        return rows

    def _check_direct_injective(self, required: bool) -> bool:
        """Exact check that no nonzero integer combination projects to 0 in G."""
        if not all(v.is_exact for g, _ in self.generators for v in g):
            return True  # float schemes rely on the heuristic mode downstream
        mat = _monomial_matrix([[g[i] for g, _ in self.generators] for i in range(self.d)])
        for vec in ratmath.kernel(mat):
            ints = ratmath.clear_denominators(vec)
            if any(ints):
                if required:
                    raise SchemeError(
                        f"direct projection is not injective: kernel vector {ints}"
                    )
                return False
        return True

    # -- identity -------------------------------------------------------------

    @property
    def scheme_id(self) -> str:
        if self._id is None:
            blob = json.dumps(self.to_obj(), sort_keys=True).encode()
            self._id = hashlib.sha256(blob).hexdigest()[:16]
        return self._id

    def __eq__(self, other):
        return (
            isinstance(other, CutProjectScheme)
            and self.d == other.d
            and self.space == other.space
            and self.generators == other.generators
        )

    def __hash__(self):
        return hash((self.d, self.space, self.generators))

    # -- basic maps -------------------------------------------------------------

    def direct(self, n) -> tuple[Scalar, ...]:
        out = [Scalar(0)] * self.d
        for k, (g, _) in zip(n, self.generators):
            if k:
                for i in range(self.d):
                    out[i] = out[i] + g[i] * k
        return tuple(out)

    def star(self, n) -> HPoint:
        """Internal coordinate of the lattice point with coordinates n."""
        if len(n) != self.rank:
            raise SchemeError("lattice coordinate arity mismatch")
        acc = self.space.zero()
        for k, (_, h) in zip(n, self.generators):
            if k:
                acc = self.space.add(acc, self.space.scale(h, k))
        return acc

    def point_of(self, n) -> tuple[tuple[Scalar, ...], HPoint]:
        return self.direct(n), self.star(n)

    # -- density ------------------------------------------------------------------

    def covolume(self) -> Scalar:
        total = abs(self._det)
        for f in _flatten_factors(self.space):
            if isinstance(f, FiniteCyclicFactor):
                total = total * f.modulus
            elif isinstance(f, TorusFactor):
                total = total * f.mass()
        return total

    def lattice_density(self) -> Scalar:
        cov = self.covolume()
        try:
            return cov.inverse()
        except Exception:
            return Scalar.from_float(1.0 / cov.to_float())

    # -- enumeration ---------------------------------------------------------------

    def project_points(
        self, box: Box, window: Window, *, max_candidates: int = DEFAULT_MAX_CANDIDATES
    ) -> Patch:
        """All projected lattice points inside ``box`` with star inside ``window``.

        Window pieces are independent; with CUTPROJECT_THREADS > 1 they are
        evaluated on a thread pool and merged in piece order, so the result
        is deterministic either way.
        """
        if box.dim != self.d:
            raise SchemeError("box dimension mismatch")
        if window.space != self.space:
            raise SpaceMismatchError("window lives in a different internal space")
        if not window.properties().precompact:
            raise SchemeError("window closure is not compact")
        pieces = window.enum_pieces()
        threads = _thread_budget()
        if threads > 1 and len(pieces) > 1:
            from concurrent.futures import ThreadPoolExecutor

            with ThreadPoolExecutor(max_workers=threads) as pool:
                partials = list(
                    pool.map(
                        lambda p: self._enumerate_piece(box, window, p, max_candidates),
                        pieces,
                    )
                )
        else:
            partials = [
                self._enumerate_piece(box, window, p, max_candidates) for p in pieces
            ]
        found: dict[tuple[int, ...], tuple] = {}
        for part in partials:
            for n, direct in part.items():
                found.setdefault(n, direct)
        return Patch(
            list(found.values()), box, self.scheme_id, coords=list(found.keys())
        )

    def _enumerate_piece(self, box, window, piece, max_candidates):
        rhs = self._piece_rhs(box, piece)
        ranges = self._candidate_ranges(rhs)
        count = 1
        for lo, hi in ranges:
            count *= max(0, hi - lo + 1)
            if count > max_candidates:
                raise EnumerationOverflowError(
                    f"candidate box of {count}+ exceeds budget {max_candidates}"
                )
        found: dict[tuple[int, ...], tuple] = {}
        if count == 0:
            return found
        prefilter = self._row_prefilter(rhs)
        for lifted in itertools.product(*[range(lo, hi + 1) for lo, hi in ranges]):
            if not prefilter(lifted):
                continue
            n = lifted[: self.rank]
            if n in found:
                continue
            direct = self.direct(n)
            if not box.contains(direct):
                continue
            if window.contains(self.star(n)):
                found[n] = direct
        return found

    def _row_prefilter(self, rhs):
        """Cheap rigorous rejection: row enclosures outside the rhs box.

        Works in scaled integers; candidates that survive still go through
        the exact membership checks, so this only trims work.
        """
        digits = 25
        scale = 10 ** digits
        slack = 10 ** (digits - 9)
        enc = []
        for row in self.matrix:
            enc.append([_scaled_enclosure(v, digits) for v in row])
        targets = []
        for lo, hi in rhs:
            targets.append(
                (
                    (lo.numerator * scale) // lo.denominator - slack,
                    -((-hi.numerator * scale) // hi.denominator) + slack,
                )
            )

        def keep(lifted):
            for i, row in enumerate(enc):
                lo = hi = 0
                for nj, (alo, ahi) in zip(lifted, row):
                    if nj > 0:
                        lo += nj * alo
                        hi += nj * ahi
                    elif nj < 0:
                        lo += nj * ahi
                        hi += nj * alo
                tlo, thi = targets[i]
                if hi < tlo or lo > thi:
                    return False
            return True

        return keep

    def _piece_rhs(self, box: Box, piece) -> list[tuple[Fraction, Fraction]]:
        margin = Fraction(1, 10 ** 9)
        rhs: list[tuple[Fraction, Fraction]] = []
        for lo, hi in zip(box.lo, box.hi):
            rhs.append((lo.bounds(25)[0] - margin, hi.bounds(25)[1] + margin))
        for idx, f in enumerate(self.space.factors):
            if isinstance(f, RealFactor):
                bounds = piece.real[idx]
                for lo, hi in bounds:
                    rhs.append((lo.bounds(25)[0] - margin, hi.bounds(25)[1] + margin))
            elif isinstance(f, IntegerRankFactor):
                for lo, hi in piece.ints[idx]:
                    rhs.append((Fraction(lo), Fraction(hi)))
            elif isinstance(f, TwistedExtensionFactor):
                residue, base_piece = piece.twists[idx]
                for bidx, bf in enumerate(f.base.factors):
                    if isinstance(bf, RealFactor):
                        for lo, hi in base_piece.real[bidx]:
                            rhs.append((lo.bounds(25)[0] - margin, hi.bounds(25)[1] + margin))
                    elif isinstance(bf, IntegerRankFactor):
                        for lo, hi in base_piece.ints[bidx]:
                            rhs.append((Fraction(lo), Fraction(hi)))
                rhs.append((Fraction(residue), Fraction(residue)))
        return rhs

    def _inverse_enclosure(self, digits: int = 25):
        """Interval enclosure of the inverse coordinate matrix, cached.

        Exact inversion is used when the entries are algebraic; otherwise a
        rigorous interval elimination per unit column.
        """
        cached = self._inverse_rows_cache.get(digits)
        if cached is not None:
            return cached
        size = self.lift_size
        try:
            cols = [
                linalg.solve_exact(self.matrix, [Scalar(1 if i == k else 0) for i in range(size)])
                for k in range(size)
            ]
            rows = [[cols[j][i].bounds(digits) for j in range(size)] for i in range(size)]
        except Exception:
            unit = [
                linalg.interval_solve(
                    self.matrix,
                    [(Fraction(1 if i == k else 0), Fraction(1 if i == k else 0)) for i in range(size)],
                    digits,
                )
                for k in range(size)
            ]
            rows = [[unit[j][i] for j in range(size)] for i in range(size)]
        self._inverse_rows_cache[digits] = rows
        return rows

    def _candidate_ranges(self, rhs) -> list[tuple[int, int]]:
        if self.lift_size == 0:
            return []
        inv = self._inverse_enclosure()
        out = []
        for row in inv:
            lo = Fraction(0)
            hi = Fraction(0)
            for (alo, ahi), (ylo, yhi) in zip(row, rhs):
                products = (alo * ylo, alo * yhi, ahi * ylo, ahi * yhi)
                lo += min(products)
                hi += max(products)
            out.append((math.ceil(lo), math.floor(hi)))
        return out

    # -- exact lattice membership ----------------------------------------------------

    def lattice_coords_of(self, gvec, h: HPoint):
        """Integer coordinates reproducing (g, h) exactly, or None."""
        gvec = tuple(Scalar.of(v) for v in gvec)
        target = self._row_values(gvec, h)
        if not all(v.is_exact for v in target) or not all(
            v.is_exact for row in self.matrix for v in row
        ):
            return self._lattice_coords_float(gvec, h, target)
        mono_rows, mono_rhs = _monomial_system(self.matrix, target)
        sol = ratmath.solve(mono_rows, mono_rhs)
        if sol is None:
            return None
        if any(x.denominator != 1 for x in sol):
            return None
        n = tuple(int(x) for x in sol[: self.rank])
        direct, star = self.point_of(n)
        if tuple(direct) == tuple(gvec) and star == h:
            return n
        return None

    def _lattice_coords_float(self, gvec, h, target):
        mat = [[float(v) for v in row] for row in self.matrix]
        rhs = [float(v) for v in target]
        sol = _float_solve(mat, rhs)
        if sol is None:
            return None
        n = tuple(round(x) for x in sol[: self.rank])
        direct, star = self.point_of(n)
        if all(abs(float(a) - float(b)) < 1e-6 for a, b in zip(direct, gvec)) and star == h:
            return n
        return None

    def contains_lattice_point(self, gvec, h: HPoint) -> bool:
        return self.lattice_coords_of(gvec, h) is not None

    # -- commensurability ---------------------------------------------------------------

    def is_commensurate(self, a, bound: int) -> Commensurability:
        """Minimal m <= bound with m*a in the projected lattice."""
        a = tuple(Scalar.of(v) for v in (a if isinstance(a, (tuple, list)) else (a,)))
        if len(a) != self.d:
            raise SchemeError("direct vector dimension mismatch")
        if all(v.is_zero() for v in a):
            raise SchemeError("commensurability of the zero vector is undefined")
        exact = all(v.is_exact for v in a) and all(
            v.is_exact for g, _ in self.generators for v in g
        )
        if exact:
            rows = [[g[i] for g, _ in self.generators] for i in range(self.d)]
            mat, rhs = _monomial_system(rows, list(a))
            sol = ratmath.solve(mat, rhs)
            if sol is None:
                return Commensurability("incommensurate")
            m = 1
            for x in sol:
                m = m * x.denominator // math.gcd(m, x.denominator)
            if m > bound:
                return Commensurability("incommensurate")
            n = tuple(int(x * m) for x in sol)
            return Commensurability("commensurate", m=m, n=n)
        return self._commensurate_float(a, bound)

    def _commensurate_float(self, a, bound: int) -> Commensurability:
        scale = 10 ** 10
        r = self.rank
        rows = []
        for j in range(r + 1):
            row = [1 if k == j else 0 for k in range(r + 1)]
            for i in range(self.d):
                v = float(a[i]) if j == 0 else -float(self.generators[j - 1][0][i])
                row.append(round(v * scale))
            rows.append(row)
        reduced = ratmath.lll_reduce(rows)
        for vec in reduced:
            m = vec[0]
            if m == 0 or abs(m) > bound:
                continue
            n = vec[1 : r + 1]
            resid = [
                m * float(a[i]) - sum(n[j] * float(self.generators[j][0][i]) for j in range(r))
                for i in range(self.d)
            ]
            if max(abs(x) for x in resid) < 1e-6:
                if m < 0:
                    m, n = -m, [-x for x in n]
                return Commensurability("commensurate", m=m, n=tuple(n), heuristic=True)
        return Commensurability("unknown", heuristic=True)

    # -- star-map injectivity -----------------------------------------------------------

    def star_kernel_witness(self):
        """Exact search for nonzero n with star(n) = 0; None means injective.

        Builds the combined linear/congruence system over the generator
        coordinates plus one auxiliary unknown per congruence (cyclic
        modulus, torus lattice vector, twist carry) and inspects its
        rational kernel.
        """
        if not all(
            v.is_exact
            for _, h in self.generators
            for v in _all_scalars(h)
        ):
            raise SchemeError("exact star-injectivity needs exact generators")
        blocks: list[tuple[list[list[Scalar]], list[list[Scalar]]]] = []
        for idx, f in enumerate(self.space.factors):
            coords = [h.coords[idx] for _, h in self.generators]
            if isinstance(f, RealFactor):
                blocks.append(([list(c) for c in coords], []))
            elif isinstance(f, IntegerRankFactor):
                blocks.append(([[Scalar(v) for v in c] for c in coords], []))
            elif isinstance(f, FiniteCyclicFactor):
                blocks.append(([[Scalar(c)] for c in coords], [[Scalar(-f.modulus)]]))
            elif isinstance(f, TorusFactor):
                aux_cols = [
                    [-f.basis[i][j] for j in range(f.dim)] for i in range(f.dim)
                ]
                blocks.append(([list(c) for c in coords], aux_cols))
            else:
                vals = [
                    list(_flatten_scalars(c[0])) + [Scalar(c[1])] for c in coords
                ]
                twist_col = list(_flatten_scalars(f.twist)) + [Scalar(-f.modulus)]
                blocks.append((vals, [twist_col]))
        total_aux = sum(len(aux) for _, aux in blocks)
        rows_scalar: list[list[Scalar]] = []
        aux_offset = 0
        for vals, aux_cols in blocks:
            width = len(vals[0]) if vals else 0
            for w in range(width):
                row = [v[w] for v in vals]
                row += [Scalar(0)] * aux_offset
                row += [col[w] for col in aux_cols]
                row += [Scalar(0)] * (total_aux - aux_offset - len(aux_cols))
                rows_scalar.append(row)
            aux_offset += len(aux_cols)
        if not rows_scalar:
            return None
        mono, _ = _monomial_system(rows_scalar, [Scalar(0)] * len(rows_scalar))
        for vec in ratmath.kernel(mono):
            ints = ratmath.clear_denominators(vec)
            n = tuple(ints[: self.rank])
            if any(n) and self.star(n) == self.space.zero():
                return n
        return None

    # -- heuristics ------------------------------------------------------------------------

    def internal_density_heuristic(self, bound: int = 10, cells: int = 8) -> bool:
        """Star image looks dense: every coarse cell of a compact probe is hit.

        Recorded as an attribute of the scheme, not a validity condition.
        """
        if self._density_heuristic is not None:
            return self._density_heuristic
        hits: dict[tuple[int, int], set] = {}
        axes = 0
        for n in itertools.product(range(-bound, bound + 1), repeat=self.rank):
            h = self.star(n)
            values = list(_continuous_values(h))
            axes = len(values)
            for ax, v in enumerate(values):
                frac = v - v.floor()
                cell = min(int(frac.to_float() * cells), cells - 1)
                hits.setdefault(("cont", ax), set()).add(cell)
        ok = all(
            len(hits.get(("cont", ax), set())) == cells for ax in range(axes)
        )
        self._density_heuristic = ok
        return ok

    # -- serialization ------------------------------------------------------------------------

    def to_obj(self):
        return {
            "d": self.d,
            "space": self.space.to_obj(),
            "generators": [
                {"g": [v.to_obj() for v in g], "h": h.to_obj()}
                for g, h in self.generators
            ],
        }

    @classmethod
    def from_obj(cls, obj) -> "CutProjectScheme":
        space = InternalSpace.from_obj(obj["space"])
        gens = []
        for go in obj["generators"]:
            g = [Scalar.from_obj(v) for v in go["g"]]
            h = HPoint.from_obj(space, go["h"])
            gens.append((g, h))
        return cls(obj["d"], space, gens)


# ---------------------------------------------------------------------------
# helpers


def _flatten_factors(space: InternalSpace):
    for f in space.factors:
        if isinstance(f, TwistedExtensionFactor):
            yield from _flatten_factors(f.base)
        else:
            yield f


def _flatten_scalars(h: HPoint):
    """Real and integer coordinates of a point, in row order."""
    for f, c in zip(h.space.factors, h.coords):
        if isinstance(f, RealFactor):
            yield from c
        elif isinstance(f, IntegerRankFactor):
            yield from (Scalar(v) for v in c)
        elif isinstance(f, TwistedExtensionFactor):
            yield from _flatten_scalars(c[0])


def _continuous_values(h: HPoint):
    for f, c in zip(h.space.factors, h.coords):
        if isinstance(f, (RealFactor, TorusFactor)):
            yield from c
        elif isinstance(f, TwistedExtensionFactor):
            yield from _continuous_values(c[0])


def _all_scalars(h: HPoint):
    for f, c in zip(h.space.factors, h.coords):
        if isinstance(f, (RealFactor, TorusFactor)):
            yield from c
        elif isinstance(f, TwistedExtensionFactor):
            yield from _all_scalars(c[0])


def _monomial_matrix(rows) -> list[list[Fraction]]:
    """Expand a Scalar matrix into stacked rational rows, one per monomial."""
    mat, _ = _monomial_system(rows, [Scalar(0)] * len(rows))
    return mat


def _monomial_system(rows, rhs) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Rational system equivalent to the Scalar system ``rows . x = rhs``.

    Each scalar equation splits into one rational equation per monomial
    appearing anywhere on either side; unknowns are rational.
    """
    monos = set()
    for row in rows:
        for v in row:
            monos.update(v._terms.keys())
    for v in rhs:
        monos.update(v._terms.keys())
    monos = sorted(monos)
    mat = []
    vec = []
    for row, rv in zip(rows, rhs):
        for mono in monos:
            mat.append([v._terms.get(mono, Fraction(0)) for v in row])
            vec.append(rv._terms.get(mono, Fraction(0)))
    return mat, vec


def _thread_budget() -> int:
    import os

    raw = os.environ.get("CUTPROJECT_THREADS", "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise SchemeError(f"CUTPROJECT_THREADS must be an integer, got {raw!r}") from exc
    if n < 1:
        raise SchemeError("CUTPROJECT_THREADS must be at least 1")
    return n


def _scaled_enclosure(v: Scalar, digits: int) -> tuple[int, int]:
    if v._terms is not None:
        return v._bounds_scaled(digits)
    scale = 10 ** digits
    center = int(v._float * scale)
    pad = int(1e-9 * scale) + 1
    return (center - pad, center + pad)


def _float_solve(mat, rhs):
    n = len(mat)
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(a[r][col]))
        if abs(a[piv][col]) < 1e-12:
            return None
        a[col], a[piv] = a[piv], a[col]
        for r in range(n):
            if r != col:
                f = a[r][col] / a[col][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] / a[i][i] for i in range(n)]


# module-level operation aliases

def star(scheme: CutProjectScheme, n) -> HPoint:
    return scheme.star(n)


def project_points(scheme: CutProjectScheme, box: Box, window: Window, **kw) -> Patch:
    return scheme.project_points(box, window, **kw)


def dens_lattice(scheme: CutProjectScheme) -> Scalar:
    return scheme.lattice_density()


def is_commensurate(scheme: CutProjectScheme, a, bound: int) -> Commensurability:
    return scheme.is_commensurate(a, bound)
