"""Shifted projection sets and desk-scale hull checks.

Translated configurations are probed through deterministic sequences of
lattice translations whose internal parts approach a target, stabilizing to
a limit patch squeezed between the translated lower and upper windows.
Generic shifts avoid the difference set of the two windows on a stated
truncation, which is where the limit collapses to a single model set.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import transforms
from .internal_space import HPoint, InternalSpace, RealFactor
from .scalars import Scalar
from .scheme import Box, CutProjectScheme, Patch
from .windows import ProductWindow, Window

LADDER = (
    lambda: Scalar(1) / Scalar.const("pi"),
    lambda: Scalar(1) / Scalar.const("e"),
    lambda: Scalar.sqrt(3) / 7,
    lambda: Scalar.sqrt(2) / 5,
    lambda: Scalar.sqrt(7) / 9,
)


@dataclass(frozen=True)
class ShiftParameter:
    s: tuple
    t: HPoint

    @classmethod
    def of(cls, s, t: HPoint):
        return cls(tuple(Scalar.of(v) for v in (s if isinstance(s, (tuple, list)) else (s,))), t)


class GammaRule:
    """Serializable membership rule on lattice coordinates.

    Selected coordinates are those whose star lies in ``window``, plus the
    explicit ``add`` list, minus the explicit ``remove`` list.
    """

    def __init__(self, window: Window | None, add=(), remove=(), scheme: CutProjectScheme | None = None):
        self.window = window
        self.add = frozenset(tuple(int(x) for x in n) for n in add)
        self.remove = frozenset(tuple(int(x) for x in n) for n in remove)
        self._scheme = scheme

    def bind(self, scheme: CutProjectScheme) -> "GammaRule":
        return GammaRule(self.window, self.add, self.remove, scheme)

    def __call__(self, n) -> bool:
        n = tuple(n)
        if n in self.remove:
            return False
        if n in self.add:
            return True
        if self.window is None:
            return False
        return self.window.contains(self._scheme.star(n))

    def evaluate_with_star(self, n, star: HPoint) -> bool:
        n = tuple(n)
        if n in self.remove:
            return False
        if n in self.add:
            return True
        if self.window is None:
            return False
        return self.window.contains(star)

    def to_obj(self):
        return {
            "window": self.window.to_obj() if self.window is not None else None,
            "add": sorted(map(list, self.add)),
            "remove": sorted(map(list, self.remove)),
        }

    @classmethod
    def from_obj(cls, space: InternalSpace, obj) -> "GammaRule":
        from .windows import window_from_obj

        window = window_from_obj(space, obj["window"]) if obj.get("window") else None
        return cls(window, obj.get("add", ()), obj.get("remove", ()))


class AlmostModelSetWitness:
    """Open lower window, compact upper window and a membership rule.

    The bracketing of the rule between the two projection sets is verified on
    the truncation cube at construction.
    """

    def __init__(self, scheme: CutProjectScheme, lower: Window, upper: Window, rule, truncation: int):
        if not lower.is_open():
            raise ValueError("lower window must be open")
        if lower.interior().is_empty():
            raise ValueError("lower window must have interior points")
        self.scheme = scheme
        self.lower = lower
        self.upper = upper
        self.rule = rule.bind(scheme) if isinstance(rule, GammaRule) else rule
        self.truncation = truncation
        upper_cl = upper.closure()
        fast = self.rule.evaluate_with_star if isinstance(self.rule, GammaRule) else None
        for n, h in transforms.iter_lattice_stars(scheme, truncation):
            selected = fast(n, h) if fast else self.rule(n)
            if lower.contains(h) and not selected:
                raise transforms.WitnessInclusionError(
                    f"rule rejects a lower-window point at {n}"
                )
            if selected and not upper_cl.contains(h):
                raise transforms.WitnessInclusionError(
                    f"rule admits a point outside the upper window at {n}"
                )

    def gamma_patch(self, box: Box) -> Patch:
        """The rule's point set inside a box within the certified range."""
        from .windows import OutOfCertifiedRangeError

        candidates = self.scheme.project_points(box, self.upper.closure())
        points = []
        coords = []
        for p, n in zip(candidates.points, candidates.coords):
            if any(abs(x) > self.truncation for x in n):
                raise OutOfCertifiedRangeError(
                    f"box reaches lattice coordinates {n} beyond the truncation"
                )
            if self.rule(n):
                points.append(p)
                coords.append(n)
        return Patch(points, box, self.scheme.scheme_id, coords)

    def to_obj(self):
        if not isinstance(self.rule, GammaRule):
            raise TypeError("only GammaRule-based witnesses serialize")
        return {
            "lower": self.lower.to_obj(),
            "upper": self.upper.to_obj(),
            "rule": self.rule.to_obj(),
            "truncation": self.truncation,
        }

    @classmethod
    def from_obj(cls, scheme: CutProjectScheme, obj) -> "AlmostModelSetWitness":
        from .windows import window_from_obj

        return cls(
            scheme,
            window_from_obj(scheme.space, obj["lower"]),
            window_from_obj(scheme.space, obj["upper"]),
            GammaRule.from_obj(scheme.space, obj["rule"]),
            obj["truncation"],
        )


def shifted_projection(scheme: CutProjectScheme, window: Window, x: ShiftParameter, box: Box) -> Patch:
    """Projection set of the shifted lattice: s plus the -t-translated window."""
    neg_s = tuple(-v for v in x.s)
    neg_t = scheme.space.negate(x.t)
    inner = scheme.project_points(box.translate(neg_s), window.translate(neg_t))
    return inner.translate(x.s)


@dataclass
class LimitPatchReport:
    stabilized: bool
    stalled: bool
    lower_ok: bool
    upper_ok: bool
    patch: Patch | None
    sequence: list
    boundary_hits: list
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.stabilized and not self.stalled and self.lower_ok and self.upper_ok

    def to_obj(self):
        return {
            "stabilized": self.stabilized,
            "stalled": self.stalled,
            "lower_ok": self.lower_ok,
            "upper_ok": self.upper_ok,
            "points": [[float(x) for x in p] for p in self.patch.points] if self.patch else None,
            "sequence": [
                {"n": list(n), "distance": d} for n, d in self.sequence
            ],
            "boundary_hits": [list(n) for n in self.boundary_hits],
            "note": self.note,
        }


def _star_distance(h: HPoint, target: HPoint) -> float:
    total = 0.0
    for f, a, b in zip(h.space.factors, h.coords, target.coords):
        if isinstance(f, RealFactor):
            total += sum((float(x) - float(y)) ** 2 for x, y in zip(a, b))
        elif a != b:
            total += 1.0
    return total ** 0.5


def _neighborhood_window(space: InternalSpace, t: HPoint, delta) -> Window:
    """A small product window around a point: +-delta on continuous axes."""
    from .internal_space import FiniteCyclicFactor, IntegerRankFactor, TorusFactor
    from .windows import (
        IntervalSet,
        IntSetRegion,
        ProductWindow,
        RealRegion,
        ResidueRegion,
        TorusRegion,
        TwistedRegion,
    )

    delta = Scalar.of(delta)
    regions = []
    for f, c in zip(space.factors, t.coords):
        if isinstance(f, RealFactor):
            regions.append(
                RealRegion(tuple(IntervalSet.single(x - delta, x + delta, True, True) for x in c))
            )
        elif isinstance(f, IntegerRankFactor):
            regions.append(IntSetRegion(f.rank, {tuple(c)}))
        elif isinstance(f, FiniteCyclicFactor):
            regions.append(ResidueRegion(f.modulus, {c}))
        elif isinstance(f, TorusFactor):
            axes = []
            for x in c:
                lo, hi = x - delta, x + delta
                axes.append(IntervalSet.single(lo, hi, True, True))
            regions.append(TorusRegion(f, tuple(axes)))
        else:
            base = _neighborhood_window(f.base, c[0], delta)
            regions.append(TwistedRegion(f, {c[1]: base}))
    return ProductWindow(space, regions)


def limit_patch_check(
    scheme: CutProjectScheme,
    witness: AlmostModelSetWitness,
    t_target: HPoint,
    K: Box,
    tol: float = 1e-2,
    rungs: int = 7,
    max_shift=None,
) -> LimitPatchReport:
    """Translate the rule's point set along lattice stars approaching a target.

    Candidate lattice translations are found by enumerating stars inside a
    shrinking neighborhood of the target, with the direct part budgeted so
    the shifted box stays inside the witness's certified range.  The report
    states whether the patches on K stabilize between the translated window
    projections.
    """
    certified = transforms.certified_box(
        scheme, witness.upper.closure(), witness.truncation
    )
    s_lo = [k - c for k, c in zip(K.hi, certified.hi)]
    s_hi = [k - c for k, c in zip(K.lo, certified.lo)]
    if any(a > b for a, b in zip(s_lo, s_hi)):
        raise ValueError("witness truncation too small for the requested box")
    budget = min(float(b) for b in s_hi)
    if max_shift is not None:
        budget = min(budget, float(max_shift))
    lower_w = witness.lower.translate(t_target)
    upper_w = witness.upper.closure().translate(t_target)
    lower_set = scheme.project_points(K, lower_w).point_set()
    upper_set = scheme.project_points(K, upper_w).point_set()
    best = None
    sequence = []
    patches = []
    lower_ok = upper_ok = False
    # shift caps and neighborhood radii refine together so each rung
    # enumerates a handful of candidates
    cap = min(30.0, budget)
    for _ in range(rungs):
        delta = Fraction(4 * 100, int(cap * 100))
        cap_box = Box(
            [max(v, Scalar.from_float(-cap)) for v in s_lo],
            [min(v, Scalar.from_float(cap)) for v in s_hi],
        )
        nbhd = _neighborhood_window(scheme.space, t_target, delta)
        improved = False
        for n in scheme.project_points(cap_box, nbhd).coords:
            dist = _star_distance(scheme.star(n), t_target)
            if best is None or dist < best[1] - 1e-15:
                best = (n, dist)
                improved = True
        if best is not None:
            sequence.append(best)
            if improved or not patches:
                s_k = scheme.direct(best[0])
                neg = tuple(-v for v in s_k)
                gamma = witness.gamma_patch(K.translate(neg)).translate(s_k)
                patches.append(Patch(gamma.points, K))
            else:
                patches.append(patches[-1])
            final_set = patches[-1].point_set()
            lower_ok = lower_set <= final_set
            upper_ok = final_set <= upper_set
            stable = (
                len(patches) >= 2
                and patches[-1].point_set() == patches[-2].point_set()
            )
            if stable and lower_ok and upper_ok and best[1] <= tol:
                break
        if cap >= budget:
            if best is not None and len(patches) >= 2:
                break
        cap = min(cap * 2, budget)
    stalled = best is None or best[1] > tol
    stabilized = (
        len(patches) >= 2 and patches[-1].point_set() == patches[-2].point_set()
    )
    if not patches:
        return LimitPatchReport(False, True, False, False, None, sequence, [])
    final = patches[-1]
    boundary_hits = []
    for e in window_difference_points(witness.lower, witness.upper):
        shifted = scheme.space.add(t_target, e)
        n = transforms.star_preimage(scheme, shifted, 2)
        if n is not None and all(abs(x) <= witness.truncation for x in n):
            boundary_hits.append(n)
    note = "" if not boundary_hits else "translated boundary meets star points"
    return LimitPatchReport(
        stabilized, stalled, lower_ok, upper_ok, final, sequence, boundary_hits, note
    )


def window_difference_points(lower: Window, upper: Window) -> list[HPoint]:
    """The difference set upper-closure minus lower, required to be finite."""
    upper_cl = upper.closure()
    if not (upper_cl.measure() - lower.measure()).is_zero():
        raise ValueError("difference of the windows is not a finite point set")
    space = lower.space
    candidates: set[HPoint] = set()
    for member in upper_cl.members():
        candidates.update(_member_corner_points(space, member))
    if isinstance(lower, ProductWindow) or hasattr(lower, "members_"):
        for member in lower.members():
            candidates.update(_member_corner_points(space, member))
    out = []
    for p in candidates:
        if upper_cl.contains(p) and not lower.contains(p):
            out.append(p)
    return sorted(out, key=lambda p: str(p.to_obj()))


def _member_corner_points(space: InternalSpace, member: ProductWindow) -> list[HPoint]:
    """Endpoint combinations of a product window's per-factor regions."""
    import itertools as _it

    per_factor = []
    for f, r in zip(space.factors, member.regions):
        if isinstance(f, RealFactor):
            axes = [list(dict.fromkeys(a.endpoints())) for a in r.axes]
            per_factor.append([tuple(c) for c in _it.product(*axes)])
        elif hasattr(r, "points"):
            per_factor.append(sorted(r.points))
        elif hasattr(r, "residues"):
            per_factor.append(sorted(r.residues))
        else:
            raise ValueError("difference points support real and discrete factors only")
    return [space.point(*combo) for combo in _it.product(*per_factor)]


def check_shift_avoidance(
    scheme: CutProjectScheme, t: HPoint, difference_points, truncation: int
):
    """Exactly verify that no truncated star lands on the shifted difference set."""
    for e in difference_points:
        target = scheme.space.add(t, e)
        n = transforms.star_preimage(scheme, target, 2)
        if n is not None and all(abs(x) <= truncation for x in n):
            return False, n
    return True, None


def generic_shift(
    scheme: CutProjectScheme,
    lower: Window,
    upper: Window,
    truncation: int,
    attempts: int = 16,
    rng: random.Random | None = None,
) -> HPoint:
    """A shift moving the window difference set off all truncated star points.

    Walks a fixed irrational ladder first for reproducibility, then falls
    back to seeded random multiples of the first ladder entry.
    """
    diff = window_difference_points(lower, upper)
    space = scheme.space
    if not diff:
        return space.zero()
    candidates = []
    for make in LADDER:
        candidates.append(make())
    rng = rng or random.Random(0)
    while len(candidates) < attempts:
        q = Fraction(rng.randint(1, 60), rng.randint(1, 60))
        candidates.append(LADDER[0]() * q)
    for value in candidates[:attempts]:
        t = shift_point(space, value)
        ok, _ = check_shift_avoidance(scheme, t, diff, truncation)
        if ok:
            return t
    raise transforms.CertificationError(
        f"no avoiding shift found in {attempts} attempts"
    )


def shift_point(space: InternalSpace, value: Scalar) -> HPoint:
    """A point with the given value on every real axis and zeros elsewhere."""
    coords = []
    for f in space.factors:
        if isinstance(f, RealFactor):
            coords.append(tuple(value for _ in range(f.dim)))
        else:
            zero = InternalSpace([f]).zero()
            coords.append(zero.coords[0])
    return HPoint(space, tuple(coords))


@dataclass
class HullClassificationReport:
    limit: LimitPatchReport
    lower_ok: bool
    upper_ok: bool
    roundtrip_ok: bool
    witness_point: tuple | None = None
    certificate: transforms.TransformCertificate | None = None

    @property
    def ok(self) -> bool:
        return self.lower_ok and self.upper_ok and self.roundtrip_ok

    def to_obj(self):
        return {
            "limit": self.limit.to_obj(),
            "lower_ok": self.lower_ok,
            "upper_ok": self.upper_ok,
            "roundtrip_ok": self.roundtrip_ok,
            "witness_point": [float(x) for x in self.witness_point]
            if self.witness_point
            else None,
            "certificate": self.certificate.to_obj() if self.certificate else None,
        }


def hull_classification_check(
    scheme: CutProjectScheme,
    witness: AlmostModelSetWitness,
    x: ShiftParameter,
    K: Box,
    bound: int = 10 ** 6,
    corrupt=None,
) -> HullClassificationReport:
    """Verify a shifted configuration is again an almost model set and rebuild
    its window through the translation extension plus augmentation pipeline.

    ``corrupt`` optionally maps the limit patch to a tampered one, exercising
    the failure path.
    """
    limit = limit_patch_check(scheme, witness, x.t, K)
    if limit.patch is None:
        return HullClassificationReport(limit, False, False, False)
    config = limit.patch
    if corrupt is not None:
        config = corrupt(config)
    shifted_box = K.translate(x.s)
    config = Patch([tuple(c + v for c, v in zip(p, x.s)) for p in config.points], shifted_box)
    if all(v.is_zero() for v in x.s):
        scheme2 = scheme
        lift = lambda w: w  # noqa: E731
    else:
        ext = transforms.translate_cps(scheme, x.s, bound)
        scheme2 = ext.scheme
        lift = lambda w: transforms.lift_window(w, 1, scheme2)  # noqa: E731
    lower_w = lift(witness.lower.translate(x.t))
    upper_w = lift(witness.upper.closure().translate(x.t))
    lower_patch = scheme2.project_points(shifted_box, lower_w)
    upper_patch = scheme2.project_points(shifted_box, upper_w)
    lower_ok = lower_patch.point_set() <= config.point_set()
    upper_ok = config.point_set() <= upper_patch.point_set()
    witness_point = None
    if not upper_ok:
        witness_point = sorted(config.point_set() - upper_patch.point_set())[0]
    elif not lower_ok:
        witness_point = sorted(lower_patch.point_set() - config.point_set())[0]
    # rebuild the window in the extended scheme and reproduce the configuration
    roundtrip_ok = False
    certificate = None
    if lower_ok and upper_ok:
        config_set = config.point_set()

        def rule2(n2):
            g2 = scheme2.direct(n2)
            if shifted_box.contains(g2):
                return g2 in config_set
            return lower_w.contains(scheme2.star(n2))

        truncation2 = witness.truncation
        try:
            wit2 = AlmostModelSetWitness(scheme2, lower_w, upper_w, rule2, truncation2)
            aug = transforms.almost_to_model(scheme2, wit2, truncation2)
            certificate = aug.certificate
            inner = transforms.certified_box(scheme2, upper_w.closure(), truncation2)
            check_box = _box_intersection(inner, shifted_box)
            reproduced = scheme2.project_points(check_box, aug.window)
            expected = config.restrict(check_box)
            roundtrip_ok = reproduced.point_set() == expected.point_set()
            if not roundtrip_ok:
                diff = reproduced.point_set() ^ expected.point_set()
                witness_point = sorted(diff)[0]
        except (transforms.WitnessInclusionError, transforms.CertificationError):
            roundtrip_ok = False
    return HullClassificationReport(
        limit, lower_ok, upper_ok, roundtrip_ok, witness_point, certificate
    )


def _box_intersection(a: Box, b: Box) -> Box:
    lo = [max(x, y) for x, y in zip(a.lo, b.lo)]
    hi = [min(x, y) for x, y in zip(a.hi, b.hi)]
    return Box(lo, hi)
