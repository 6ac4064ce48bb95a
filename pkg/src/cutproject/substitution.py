"""Substitution point sets on the line, used as ground truth oracles.

Tiles are laid out from a two-sided seed word around the origin with exact
tile lengths, and the patch of left endpoints is read off.  The seed must
reproduce itself under two substitution steps, so the two-sided fixed point
is well defined and successive iterates only extend outward.
"""

from __future__ import annotations

from .scalars import Scalar
from .scheme import Box, Patch


class CoverageError(ValueError):
    """The requested box is not covered at the given iteration count."""


class SubstitutionSystem:
    def __init__(self, rules: dict[str, str], lengths: dict, seed: tuple[str, str]):
        if not rules:
            raise ValueError("substitution rules must be nonempty")
        self.alphabet = sorted(rules)
        self.rules = dict(rules)
        self.lengths = {a: Scalar.of(lengths[a]) for a in self.alphabet}
        for a, ln in self.lengths.items():
            if not ln > 0:
                raise ValueError(f"tile length for {a!r} must be positive")
        for a, word in rules.items():
            if not word or any(ch not in rules for ch in word):
                raise ValueError(f"rule for {a!r} uses letters outside the alphabet")
        self.seed = seed
        if not self._primitive():
            raise ValueError("substitution is not primitive")
        left, right = seed
        l2, r2 = self._sub2(left), self._sub2(right)
        if not l2.endswith(left) or not r2.startswith(right):
            raise ValueError("seed does not extend itself under the squared substitution")

    def substitute(self, word: str) -> str:
        return "".join(self.rules[ch] for ch in word)

    def _sub2(self, word: str) -> str:
        return self.substitute(self.substitute(word))

    def _primitive(self) -> bool:
        n = len(self.alphabet)
        idx = {a: i for i, a in enumerate(self.alphabet)}
        mat = [[0] * n for _ in range(n)]
        for a, word in self.rules.items():
            for ch in word:
                mat[idx[ch]][idx[a]] += 1
        power = [row[:] for row in mat]
        for _ in range(n * n):
            if all(v > 0 for row in power for v in row):
                return True
            power = [
                [sum(power[i][k] * mat[k][j] for k in range(n)) for j in range(n)]
                for i in range(n)
            ]
        return False


def fixed_point_patch(system: SubstitutionSystem, iterations: int, box: Box) -> Patch:
    """Left tile endpoints of the two-sided fixed point, restricted to ``box``.

    ``iterations`` counts squared-substitution steps applied to the seed; the
    result is independent of it once the box is covered.
    """
    if box.dim != 1:
        raise ValueError("substitution layouts are one-dimensional")
    left, right = system.seed
    for _ in range(iterations):
        left = system._sub2(left)
        right = system._sub2(right)
    lo, hi = box.lo[0], box.hi[0]
    points = []
    pos = Scalar(0)
    for ch in right:
        if pos > hi:
            break
        if pos >= lo:
            points.append((pos,))
        pos = pos + system.lengths[ch]
    if pos <= hi:
        raise CoverageError("right side of the seed does not cover the box; raise iterations")
    pos = Scalar(0)
    covered_left = not lo < 0
    for ch in reversed(left):
        pos = pos - system.lengths[ch]
        if lo <= pos <= hi:
            points.append((pos,))
        if pos <= lo:
            covered_left = True
            break
    if not covered_left:
        raise CoverageError("left side of the seed does not cover the box; raise iterations")
    return Patch(points, box, scheme_id=f"substitution:{''.join(system.alphabet)}")
