import pytest

from cutproject.fibonacci import (
    derive_fibonacci_window,
    fibonacci_scheme,
    fibonacci_substitution,
    fibonacci_window,
    ring_coordinates,
)
from cutproject.scalars import GOLDEN, Scalar
from cutproject.scheme import Box
from cutproject.substitution import CoverageError, SubstitutionSystem, fixed_point_patch


def test_first_endpoints_by_hand():
    # two substitution steps by hand: a|a -> ab|ab -> aba|ab a..., so the
    # right side starts with tiles a, b, a giving endpoints 0, golden, golden+1
    system = fibonacci_substitution()
    patch = fixed_point_patch(system, 2, Box.interval(0, GOLDEN + 1))
    assert patch.points == ((Scalar(0),), (GOLDEN,), (GOLDEN + 1,))
    # golden + 1 is golden squared
    assert patch.points[2][0] == GOLDEN ** 2


def test_origin_is_endpoint():
    system = fibonacci_substitution()
    patch = fixed_point_patch(system, 1, Box.interval(0, 0))
    assert patch.points == ((Scalar(0),),)


def test_coverage_error():
    system = fibonacci_substitution()
    with pytest.raises(CoverageError):
        fixed_point_patch(system, 2, Box.interval(0, 1000))
    with pytest.raises(CoverageError):
        fixed_point_patch(system, 2, Box.interval(-1000, 0))


def test_stability_under_extra_iterations():
    system = fibonacci_substitution()
    box = Box.interval(-30, 30)
    p5 = fixed_point_patch(system, 5, box)
    p6 = fixed_point_patch(system, 6, box)
    p7 = fixed_point_patch(system, 7, box)
    assert p5 == p6 == p7


def test_gaps_are_tile_lengths():
    system = fibonacci_substitution()
    patch = fixed_point_patch(system, 7, Box.interval(-80, 80))
    gaps = {
        (b[0] - a[0])
        for a, b in zip(patch.points, patch.points[1:])
    }
    assert gaps == {Scalar(1), GOLDEN}


def test_seed_validation():
    # right seed must reproduce itself: sigma^2(b) = "ab" does not start with b
    with pytest.raises(ValueError):
        SubstitutionSystem({"a": "ab", "b": "a"}, {"a": GOLDEN, "b": 1}, ("a", "b"))
    with pytest.raises(ValueError):
        # decoupled letters: incidence matrix never becomes positive
        SubstitutionSystem({"a": "aa", "b": "bb"}, {"a": 1, "b": 1}, ("a", "a"))
    with pytest.raises(ValueError):
        SubstitutionSystem({"a": "ab", "b": "a"}, {"a": 0, "b": 1}, ("a", "a"))


def test_ring_coordinates():
    x = Scalar(3) + GOLDEN * 4
    assert ring_coordinates(x) == (3, 4)
    assert ring_coordinates(Scalar(0)) == (0, 0)
    with pytest.raises(ValueError):
        ring_coordinates(Scalar.sqrt(2))


def test_derived_window_matches_oracle_two_sided():
    window = fibonacci_window()
    scheme = fibonacci_scheme()
    system = fibonacci_substitution()
    box = Box.symmetric(34)
    oracle = fixed_point_patch(system, 7, box)
    patch = scheme.project_points(box, window)
    assert patch.point_set() == oracle.point_set()


def test_derived_window_shape():
    # derivation settles the half-open convention: the left seed tile makes
    # -golden an endpoint whose star is golden-1, so the window closes right
    window = fibonacci_window()
    piece = window.regions[0].axes[0].pieces[0]
    assert piece.lo == Scalar(-1)
    assert piece.hi == GOLDEN - 1
    assert piece.hi_closed and not piece.lo_closed
    assert window.measure() == GOLDEN
    props = window.properties()
    assert props.topologically_regular and props.measure_regular


def test_window_derivation_is_cached_and_deterministic():
    assert derive_fibonacci_window() == derive_fibonacci_window()


def test_oracle_patch_is_repetitive_at_desk_scale():
    from cutproject.analysis import repetitivity_check

    system = fibonacci_substitution()
    source = lambda box: fixed_point_patch(system, 7, box)  # noqa: E731
    report = repetitivity_check(source, Box.interval(0, 4), 15, Box.symmetric(70))
    assert report.ok
