"""Quantitative checks: densities, character sums, equidistribution, repetitivity.

Counting runs over the centred cube sequence A_n = [-n, n]^d.  Finite-n
estimates carry declared boundary-correction constants instead of limits;
tolerances are the caller's business and live in the reports.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from . import linalg
from .internal_space import (
    FiniteCyclicFactor,
    InternalSpace,
    TorusFactor,
    TwistedExtensionFactor,
)
from .scalars import Scalar
from .scheme import Box, CutProjectScheme, Patch
from .windows import Window


@dataclass
class DensityReport:
    n_values: list[int]
    counts: list[int]
    empirical: list[float]
    lower: float
    upper: float
    boundary_constant: float
    sandwich_ok: bool = field(init=False)

    def __post_init__(self):
        for a, b in zip(self.counts, self.counts[1:]):
            if b < a:
                raise ValueError("counts must be nondecreasing in n")
        self.sandwich_ok = all(
            self.lower - self.boundary_constant / n
            <= e
            <= self.upper + self.boundary_constant / n
            for n, e in zip(self.n_values, self.empirical)
        )

    def to_obj(self):
        return {
            "n": self.n_values,
            "counts": self.counts,
            "empirical": self.empirical,
            "lower": self.lower,
            "upper": self.upper,
            "boundary_constant": self.boundary_constant,
            "sandwich_ok": self.sandwich_ok,
        }

    def to_csv_text(self) -> str:
        lines = ["n,count,empirical,lower,upper"]
        for n, c, e in zip(self.n_values, self.counts, self.empirical):
            lines.append(f"{n},{c},{e!r},{self.lower!r},{self.upper!r}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CharacterRd:
    """The character x -> exp(2 pi i <chi, x>) on direct space."""

    chi: tuple[float, ...]

    def value(self, point) -> complex:
        phase = sum(c * float(x) for c, x in zip(self.chi, point))
        return cmath.exp(2j * math.pi * phase)

    @property
    def norm(self) -> float:
        return math.sqrt(sum(c * c for c in self.chi))


def annihilator_projection(scheme: CutProjectScheme, count: int) -> list[tuple[Scalar, ...]]:
    """Direct-space components of a generating set of the dual-lattice projection.

    Solves the defining integrality conditions exactly by inverting the
    transposed coordinate matrix; finite cyclic factors contribute one
    fractional shift generator each.  Only the base factor family (real,
    integer, finite cyclic) is supported.
    """
    for f in scheme.space.factors:
        if isinstance(f, (TorusFactor, TwistedExtensionFactor)):
            raise ValueError("annihilator projection needs the base factor family")
    size = scheme.lift_size
    transpose = [[scheme.matrix[j][i] for j in range(size)] for i in range(size)]
    gens: list[tuple[Scalar, ...]] = []
    for k in range(size):
        e_k = [Scalar(1 if i == k else 0) for i in range(size)]
        u = linalg.solve_exact(transpose, e_k)
        gens.append(tuple(u[: scheme.d]))
    # one fractional shift per finite cyclic factor
    for idx, f in enumerate(scheme.space.factors):
        if isinstance(f, FiniteCyclicFactor):
            target = [
                -Scalar(h.coords[idx]) / f.modulus for _, h in scheme.generators
            ]
            u = linalg.solve_exact(transpose, target)
            gens.append(tuple(u[: scheme.d]))
    return gens[:count]


def empirical_density(scheme: CutProjectScheme, window: Window, n_values) -> DensityReport:
    dens = scheme.lattice_density()
    lower = float(dens * window.interior().measure())
    upper = float(dens * window.closure().measure())
    gen_norm = max(
        (abs(float(v)) for g, _ in scheme.generators for v in g), default=1.0
    )
    constant = 2 * scheme.d * (1.0 + upper) * (1.0 + gen_norm)
    counts = []
    empirical = []
    n_values = sorted(n_values)
    for n in n_values:
        patch = scheme.project_points(Box.symmetric(n, scheme.d), window)
        counts.append(len(patch))
        empirical.append(len(patch) / (2 * n) ** scheme.d)
    return DensityReport(list(n_values), counts, empirical, lower, upper, constant)


def fourier_bohr(scheme: CutProjectScheme, window: Window, chi, n: int) -> complex:
    """Averaged character sum over the projection set along A_n."""
    if not isinstance(chi, CharacterRd):
        chi = CharacterRd(tuple(float(c) for c in chi))
    patch = scheme.project_points(Box.symmetric(n, scheme.d), window)
    total = 0j
    for p in patch.points:
        total += chi.value(p).conjugate()
    return total / (2 * n) ** scheme.d


@dataclass
class EquidistributionReport:
    status: str  # "pass" | "fail" | "inconclusive"
    cells_hit: int
    cells_total: int
    point_count: int
    max_fb: float
    fb_values: dict

    def to_obj(self):
        return {
            "status": self.status,
            "cells_hit": self.cells_hit,
            "cells_total": self.cells_total,
            "point_count": self.point_count,
            "max_fb": self.max_fb,
            "fb_values": {str(k): [v.real, v.imag] for k, v in self.fb_values.items()},
        }


def equidistribution_check(
    scheme: CutProjectScheme,
    window: Window,
    chi_bound: float,
    n: int,
    cells: int = 8,
    min_points: int | None = None,
) -> EquidistributionReport:
    """Torus coverage and nontrivial character sums for an extended scheme.

    The window may be given over the torus-free part; it is then crossed
    with the full torus.  Coverage asks every fundamental-coordinate cube of
    side 1/cells to contain a projected-point image; too small a sample
    reports "inconclusive" rather than failure.
    """
    torus_idx = None
    for idx, f in enumerate(scheme.space.factors):
        if isinstance(f, TorusFactor):
            torus_idx = idx
    if torus_idx is None:
        raise ValueError("scheme has no torus factor")
    factor = scheme.space.factors[torus_idx]
    if window.space != scheme.space:
        window = _cross_with_full_torus(scheme.space, window, torus_idx)
    patch = scheme.project_points(Box.symmetric(n, scheme.d), window)
    hit = set()
    for coords in patch.coords or []:
        h = scheme.star(coords)
        fractional = h.coords[torus_idx]
        cell = tuple(
            min(int(x.to_float() * cells) % cells, cells - 1) for x in fractional
        )
        hit.add(cell)
    cells_total = cells ** factor.dim
    # characters of the quotient: dual-lattice vectors below the norm bound
    fb_values: dict[tuple[int, ...], complex] = {}
    inv_diag = [1.0 / float(factor.basis[i][i]) for i in range(factor.dim)]
    kmax = [int(chi_bound / v) + 1 if v > 0 else 0 for v in inv_diag]
    import itertools as _it

    for kvec in _it.product(*[range(-k, k + 1) for k in kmax]):
        if not any(kvec):
            continue
        chi = CharacterRd(tuple(k * v for k, v in zip(kvec, inv_diag)))
        if chi.norm > chi_bound + 1e-12:
            continue
        total = 0j
        for p in patch.points:
            total += chi.value(p).conjugate()
        fb_values[kvec] = total / (2 * n) ** scheme.d
    max_fb = max((abs(v) for v in fb_values.values()), default=0.0)
    if min_points is None:
        min_points = 2 * cells_total
    if len(hit) == cells_total:
        status = "pass"
    elif window.is_empty():
        status = "fail"  # structurally empty, not a sampling artifact
    elif len(patch) < min_points:
        status = "inconclusive"
    else:
        status = "fail"
    return EquidistributionReport(
        status, len(hit), cells_total, len(patch), max_fb, fb_values
    )


def _cross_with_full_torus(space: InternalSpace, window: Window, torus_idx: int) -> Window:
    from .transforms import lift_window_torus

    return lift_window_torus(window, space, torus_idx)


def verify_inclusion(a: Patch, b: Patch) -> bool:
    """Exact subset test for patches over the same box (tolerant in float mode)."""
    if a.box != b.box:
        raise ValueError("patch boxes differ")
    if _all_exact(a) and _all_exact(b):
        return a.point_set() <= b.point_set()
    return _match_float(a.points, b.points, require_all_b=False)


def verify_equality(a: Patch, b: Patch):
    """Exact set equality with a first-difference witness: (ok, witness)."""
    if a.box != b.box:
        raise ValueError("patch boxes differ")
    if _all_exact(a) and _all_exact(b):
        if a.point_set() == b.point_set():
            return True, None
        diff = sorted(a.point_set() ^ b.point_set())
        return False, diff[0]
    if len(a.points) == len(b.points) and _match_float(a.points, b.points, require_all_b=True):
        return True, None
    for p in a.points:
        if not _match_float([p], b.points, require_all_b=False):
            return False, p
    for q in b.points:
        if not _match_float([q], a.points, require_all_b=False):
            return False, q
    return False, None


def _all_exact(patch: Patch) -> bool:
    return all(v.is_exact for p in patch.points for v in p)


def _match_float(points_a, points_b, require_all_b: bool, eps: float = 1e-9) -> bool:
    used = [False] * len(points_b)
    for p in points_a:
        found = False
        for i, q in enumerate(points_b):
            if used[i]:
                continue
            if all(abs(float(x) - float(y)) <= eps for x, y in zip(p, q)):
                used[i] = True
                found = True
                break
        if not found:
            return False
    return all(used) if require_all_b else True


@dataclass
class RepetitivityReport:
    ok: bool
    witness_center: tuple | None
    returns_found: int

    def to_obj(self):
        return {
            "ok": self.ok,
            "witness_center": [float(x) for x in self.witness_center]
            if self.witness_center
            else None,
            "returns_found": self.returns_found,
        }


def repetitivity_check(patch_source, K: Box, radius, probe: Box) -> RepetitivityReport:
    """Desk-scale return-vector density check on the line.

    True iff every closed ball of the given radius centred in the probe box
    contains a translation t with (-t + patch) agreeing with the patch on K.
    """
    if K.dim != 1 or probe.dim != 1:
        raise NotImplementedError("repetitivity check implemented for dimension 1")
    radius = Scalar.of(radius)
    patch = patch_source(probe)
    reference = frozenset(p for p in patch.points if K.contains(p))
    # candidate returns map the reference pattern into the patch
    valid_lo = probe.lo[0] - K.lo[0]
    valid_hi = probe.hi[0] - K.hi[0]
    if reference:
        anchor = min(reference)[0]
        candidates = {p[0] - anchor for p in patch.points}
    else:
        candidates = {Scalar(0)}
    returns = []
    patch_set = patch.point_set()
    for t in candidates:
        if t < valid_lo or t > valid_hi:
            continue
        shifted_K = Box.interval(K.lo[0] + t, K.hi[0] + t)
        expected = frozenset((p[0] + t,) for p in reference)
        actual = frozenset(p for p in patch_set if shifted_K.contains(p))
        if expected == actual:
            returns.append(t)
    returns.sort()
    if not returns:
        return RepetitivityReport(False, (probe.lo[0],), 0)
    # every ball [c - R, c + R] with c in the probe must contain a return
    if returns[0] - probe.lo[0] > radius:
        return RepetitivityReport(False, (probe.lo[0],), len(returns))
    for t_prev, t_next in zip(returns, returns[1:]):
        if t_next - t_prev > 2 * radius:
            center = (t_prev + t_next) / 2
            return RepetitivityReport(False, (center,), len(returns))
    if probe.hi[0] - returns[-1] > radius:
        return RepetitivityReport(False, (probe.hi[0],), len(returns))
    return RepetitivityReport(True, None, len(returns))
