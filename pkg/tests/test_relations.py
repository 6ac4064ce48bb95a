import pytest

from cutproject.relations import certify_independent, exact_relation, lll_relation
from cutproject.scalars import GOLDEN, SQRT5, Scalar


def test_exact_relation_found():
    # golden^2 = golden + 1
    vals = [Scalar(1), GOLDEN, GOLDEN * GOLDEN]
    rel = exact_relation(vals)
    assert rel is not None
    acc = Scalar(0)
    for c, v in zip(rel, vals):
        acc = acc + v * c
    assert acc.is_zero()


def test_exact_relation_independent():
    c = Scalar.root(2, 3)
    vals = [Scalar(1), SQRT5, c, c * c]
    assert exact_relation(vals) is None
    # the direct parts around an incommensurate translation: no relation
    assert exact_relation([Scalar.sqrt(2), Scalar(1), GOLDEN]) is None


def test_lll_relation_heuristic():
    import math

    # 2 * (1/sqrt2) - sqrt2 = 0, visible already at float precision
    rel = lll_relation([1 / math.sqrt(2), math.sqrt(2)], bound=100)
    assert rel is not None
    assert abs(rel[0] / math.sqrt(2) + rel[1] * math.sqrt(2)) < 1e-6
    # exact inputs support the large coefficient bound without false hits
    rel = lll_relation([Scalar.sqrt(2), Scalar(1), GOLDEN], bound=10 ** 6)
    assert rel is None
    rel = lll_relation([Scalar.sqrt(2), Scalar.sqrt(2).inverse()], bound=10 ** 6)
    assert rel == [1, -2] or rel == [-1, 2]


def test_certify_independent_exact_and_float():
    c = Scalar.root(2, 3)
    cert = certify_independent([Scalar(1), SQRT5, c, c.inverse()], 10 ** 6)
    assert cert.passed and cert.method == "exact-kernel"
    s = Scalar.sqrt(2)
    cert = certify_independent([Scalar(1), s, s.inverse()], 10 ** 6)
    assert not cert.passed and cert.witness is not None
    cert = certify_independent(
        [Scalar.from_float(2 ** 0.5), Scalar.from_float(1.0)], 10 ** 4
    )
    assert cert.method == "lll-heuristic"
    assert cert.passed
