"""Integer relation detection over exact scalars and floats.

Exact algebraic values admit a complete decision: a rational relation among
them corresponds to a kernel vector of their monomial coordinate matrix.
Float inputs fall back to a classic LLL search on a scaled value column,
which is heuristic and bounded; every candidate found that way is re-checked
exactly when the inputs allow it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import ratmath
from .scalars import Scalar


@dataclass
class RelationCertificate:
    method: str  # "exact-kernel" or "lll-heuristic"
    bound: int
    passed: bool
    witness: list[int] | None = None
    note: str = ""

    def to_obj(self):
        return {
            "method": self.method,
            "bound": self.bound,
            "passed": self.passed,
            "witness": self.witness,
            "note": self.note,
        }

    @classmethod
    def from_obj(cls, obj):
        return cls(
            obj["method"], obj["bound"], obj["passed"], obj.get("witness"), obj.get("note", "")
        )


def exact_relation(values: list[Scalar]) -> list[int] | None:
    """A nonzero integer relation among exact values, or None if independent."""
    if not all(v.is_exact for v in values):
        raise ValueError("exact_relation needs exact scalars")
    monos = set()
    for v in values:
        monos.update(v._terms.keys())
    rows = [
        [v._terms.get(mono, Fraction(0)) for v in values] for mono in sorted(monos)
    ]
    for vec in ratmath.kernel(rows):
        ints = ratmath.clear_denominators(vec)
        if any(ints):
            acc = Scalar(0)
            for c, v in zip(ints, values):
                acc = acc + v * c
            assert acc.is_zero()
            return ints
    return None


def lll_relation(values, bound: int, digits: int | None = None) -> list[int] | None:
    """Bounded heuristic relation search; None means none found at this scale.

    Values may be exact scalars (scaled to integers from rigorous enclosures,
    so the working precision can exceed the coefficient bound comfortably) or
    plain floats (precision then capped by the float mantissa, which keeps
    large bounds genuinely heuristic).  A reduced vector counts as a relation
    when its scaled residual is no larger than coefficient rounding noise.
    """
    n = len(values)
    exact = all(isinstance(v, Scalar) and v.is_exact for v in values)
    if digits is None:
        digits = max(24, 12 + 2 * n * len(str(bound))) if exact else 13
    scale = 10 ** digits
    scaled = []
    for v in values:
        if isinstance(v, Scalar) and v.is_exact:
            lo, hi = v.bounds(digits + 2)
            mid = (lo + hi) / 2
            scaled.append(round(mid * scale))
        else:
            scaled.append(round(float(v) * scale))
    rows = [
        [1 if j == i else 0 for j in range(n)] + [scaled[i]] for i in range(n)
    ]
    reduced = ratmath.lll_reduce(rows)
    for vec in reduced:
        coeffs = vec[:n]
        if not any(coeffs) or max(abs(c) for c in coeffs) > bound:
            continue
        noise = 10 + 4 * n * max(abs(c) for c in coeffs)
        if abs(vec[n]) <= noise:
            return list(coeffs)
    return None


def certify_independent(values: list[Scalar], bound: int) -> RelationCertificate:
    """Certify that no bounded integer relation exists among the values.

    With exact algebraic inputs the kernel computation is complete, so a pass
    is a proof; otherwise the certificate is an explicitly bounded LLL search.
    """
    if all(v.is_exact and v.is_algebraic for v in values):
        witness = exact_relation(values)
        return RelationCertificate(
            method="exact-kernel",
            bound=bound,
            passed=witness is None,
            witness=witness,
            note="complete over the monomial span",
        )
    witness = lll_relation(list(values), bound)
    if witness is not None and all(v.is_exact for v in values):
        acc = Scalar(0)
        for c, v in zip(witness, values):
            acc = acc + v * c
        if not acc.is_zero():
            witness = None  # numerical artifact, rejected by the exact check
    return RelationCertificate(
        method="lll-heuristic",
        bound=bound,
        passed=witness is None,
        witness=witness,
        note="bounded search, not a proof",
    )
