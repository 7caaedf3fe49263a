import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from icewedge.bootstrap import BootstrapScatter
from icewedge.errors import BadConfidence, OriginObserved, OriginPoint, WedgeDegenerate
from icewedge.scale import IceOutcome, Perspective, ShadowPrice
from icewedge.wedge import compute_wedge, ice_angle, quadrant_counts, required_count, wrap_angle

LAM = ShadowPrice(1.0)


def outcome(x, y):
    return IceOutcome(x, y, LAM, Perspective.ALIAS)


def scatter(obs, xs, ys):
    return BootstrapScatter(outcome(*obs), xs, ys)


def polar_scatter(center, devs, radius=1.0):
    ang = center + np.asarray(devs, dtype=float)
    return scatter((math.cos(center), math.sin(center)), radius * np.cos(ang), radius * np.sin(ang))


def oracle_wedge(sc, confidence):
    """Brute force: try every candidate half-width, keep the smallest that covers enough."""
    c = math.atan2(sc.observed.y, sc.observed.x)
    devs = []
    for x, y in zip(sc.xs.tolist(), sc.ys.tolist()):
        d = math.atan2(y, x) - c
        while d <= -math.pi:
            d += 2 * math.pi
        while d > math.pi:
            d -= 2 * math.pi
        devs.append(d)
    need = math.ceil(round(confidence * len(devs), 9))
    for h in sorted(set(abs(d) for d in devs)):
        if sum(1 for d in devs if abs(d) <= h) >= need:
            return h, sum(d < -h for d in devs), sum(d > h for d in devs)
    raise AssertionError("unreachable")


class TestAngle:
    @pytest.mark.parametrize("x,y,want", [(1, 0, 0.0), (0, -1, -math.pi / 2), (1, -1, -math.pi / 4), (-1, 0, math.pi)])
    def test_examples(self, x, y, want):
        assert ice_angle(outcome(x, y)) == pytest.approx(want, abs=1e-15)

    def test_origin(self):
        with pytest.raises(OriginPoint):
            ice_angle(outcome(0, 0))

    @given(st.floats(-100, 100))
    def test_wrap_range(self, t):
        w = wrap_angle(t)
        assert -math.pi < w <= math.pi
        assert math.isclose(math.cos(w), math.cos(t), abs_tol=1e-9)
        arr = wrap_angle(np.array([t]))
        assert -math.pi < arr[0] <= math.pi


def test_required_count_not_fooled_by_rounding():
    assert required_count(0.95, 25000) == 23750
    assert required_count(0.9, 20) == 18
    assert required_count(0.95, 2000) == 1900


def test_zero_spread():
    sc = scatter((1.0, -2.0), [1.0, 2.0, 0.5, 4.0] * 30, [-2.0, -4.0, -1.0, -8.0] * 30)
    w = compute_wedge(sc, 0.95)
    assert w.half_angle == 0
    assert (w.count_below, w.count_above, w.count_inside) == (0, 0, 120)


def test_twenty_symmetric_deviations():
    degs = [k for k in range(1, 11)] + [-k for k in range(1, 11)]
    sc = polar_scatter(0.4, np.radians(degs))
    w = compute_wedge(sc, 0.9)
    assert math.degrees(w.half_angle) == pytest.approx(9, abs=1e-9)
    assert (w.count_below, w.count_above, w.count_inside) == (1, 1, 18)


def test_limits_wrap_across_pi():
    sc = polar_scatter(math.pi - 0.05, np.radians(np.linspace(-20, 20, 101)))
    w = compute_wedge(sc, 0.9)
    assert -math.pi < w.lower <= math.pi and -math.pi < w.upper <= math.pi
    assert w.upper < 0 < w.lower  # upper limit crossed the negative x-axis
    assert w.count_inside >= 91


@settings(max_examples=60, deadline=None)
@given(
    st.floats(-math.pi, math.pi),
    st.lists(st.floats(-2.5, 2.5), min_size=10, max_size=80),
    st.sampled_from([0.5, 0.8, 0.9, 0.95]),
)
def test_matches_brute_force_oracle(center, devs, conf):
    sc = polar_scatter(center, devs, radius=2.0)
    h, below, above = oracle_wedge(sc, conf)
    w = compute_wedge(sc, conf)
    assert w.half_angle == pytest.approx(h, abs=1e-12)
    assert (w.count_below, w.count_above) == (below, above)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.floats(0.1, 5), st.floats(-2.0, 2.0)), min_size=20, max_size=120), st.sampled_from([0.6, 0.9, 0.95]))
def test_coverage_and_minimality(polar, conf):
    r = np.array([p[0] for p in polar])
    t = np.array([p[1] for p in polar]) - 0.5
    sc = scatter((1.0, -0.5), r * np.cos(t), r * np.sin(t))
    w = compute_wedge(sc, conf)
    n = sc.r
    assert w.count_below + w.count_above + w.count_inside + w.count_origin == n
    assert w.count_inside >= required_count(conf, n)
    c = math.atan2(-0.5, 1.0)
    d = np.abs(wrap_angle(np.arctan2(sc.ys, sc.xs) - c))
    at_edge = int(np.count_nonzero(d == w.half_angle))
    assert (w.count_inside - at_edge) < required_count(conf, n)


@settings(max_examples=40, deadline=None)
@given(st.floats(-math.pi, math.pi), st.floats(0.01, 100))
def test_rotation_and_scaling_invariance(phi, k):
    rng = np.random.default_rng(1)
    xs = rng.normal(1.0, 0.4, 500)
    ys = rng.normal(-0.6, 0.3, 500)
    base = compute_wedge(scatter((1.0, -0.6), xs, ys), 0.95)
    c, s = math.cos(phi), math.sin(phi)
    rot = compute_wedge(scatter((c * 1.0 + s * 0.6, s * 1.0 - c * 0.6), c * xs - s * ys, s * xs + c * ys), 0.95)
    assert (rot.count_below, rot.count_above, rot.count_inside) == (base.count_below, base.count_above, base.count_inside)
    assert wrap_angle(rot.center - base.center - phi) == pytest.approx(0, abs=1e-9)
    scaled = compute_wedge(scatter((k * 1.0, k * -0.6), k * xs, k * ys), 0.95)
    assert (scaled.count_below, scaled.count_above, scaled.count_inside) == (base.count_below, base.count_above, base.count_inside)


def test_demo_structural_identity(demo_scatter):
    w = compute_wedge(demo_scatter, 0.95)
    assert w.count_below + w.count_above == 1250
    assert w.count_inside == 23750
    assert w.count_origin == 0


def test_equal_tails_variant(demo_scatter):
    w = compute_wedge(demo_scatter, 0.95, tails="equal")
    assert (w.count_below, w.count_above, w.count_inside) == (625, 625, 23750)
    assert w.lower_dev < 0 < w.upper_dev
    assert w.half_angle == pytest.approx((w.upper_dev - w.lower_dev) / 2)


def test_origin_replicates_count_as_inside():
    xs = np.r_[np.zeros(10), np.cos(np.linspace(-1, 1, 190))]
    ys = np.r_[np.zeros(10), np.sin(np.linspace(-1, 1, 190))]
    w = compute_wedge(scatter((1.0, 0.0), xs, ys), 0.95)
    assert w.count_origin == 10
    assert w.count_inside + w.count_origin >= 190
    assert w.count_below + w.count_above + w.count_inside + w.count_origin == 200


def test_ring_gives_wide_but_valid_wedge():
    t = np.linspace(-math.pi, math.pi, 400, endpoint=False)
    w = compute_wedge(scatter((1.0, 0.0), np.cos(t), np.sin(t)), 0.95)
    assert 0.9 * math.pi < w.half_angle < math.pi


def test_opposite_replicates_are_degenerate():
    # 10% of replicates point exactly away from the observed ray
    xs = np.r_[np.ones(180), -np.ones(20)]
    ys = np.zeros(200)
    with pytest.raises(WedgeDegenerate):
        compute_wedge(scatter((1.0, 0.0), xs, ys), 0.95)
    with pytest.raises(WedgeDegenerate):
        compute_wedge(scatter((1.0, 0.0), xs, ys), 0.95, tails="equal")


def test_origin_observed():
    with pytest.raises(OriginObserved):
        compute_wedge(scatter((0.0, 0.0), [1.0] * 5, [1.0] * 5), 0.95)


@pytest.mark.parametrize("conf", [0.4, 1.0, 1.2])
def test_bad_confidence(conf):
    with pytest.raises(BadConfidence):
        compute_wedge(scatter((1.0, 0.0), [1.0] * 5, [1.0] * 5), conf)


def test_contains_angle():
    sc = polar_scatter(0.0, np.radians(np.linspace(-10, 10, 201)))
    w = compute_wedge(sc, 0.9)
    assert w.contains_angle(0.0)
    assert not w.contains_angle(math.radians(12))


class TestQuadrants:
    def test_one_each(self):
        q = quadrant_counts(scatter((1, 1), [1, 1, -1, -1], [-1, 1, 1, -1]))
        assert (q.se, q.ne, q.nw, q.sw, q.boundary, q.origin) == (1, 1, 1, 1, 0, 0)

    def test_all_on_axis(self):
        q = quadrant_counts(scatter((1, 1), [0, 0, 0], [1, -2, 3]))
        assert q.boundary == 3 and q.total == 3

    def test_origin_separate(self):
        q = quadrant_counts(scatter((1, 1), [0, 0, 1], [0, 1, 0]))
        assert (q.origin, q.boundary) == (1, 2)

    def test_demo_mostly_south_east(self, demo_scatter):
        q = quadrant_counts(demo_scatter)
        assert q.total == demo_scatter.r
        assert q.se / q.total > 0.5
