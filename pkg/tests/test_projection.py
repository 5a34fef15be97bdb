"""Nearest-point maps, Chebyshev decisions, product and union laws."""

import math
import random

import pytest

from smaxplus import (
    BoxSet,
    MetricId,
    ProjectionResult,
    RaySet,
    SElem,
    SVector,
    Sign,
    ZERO,
    d1,
    d2,
    distance_to_set,
    find_multipoint_witness,
    grid_project,
    is_chebyshev,
    is_connected,
    is_geometrically_convex,
    is_semimodule_convex,
    parse_metric_id,
    point_on_ray,
    project_box,
    project_box_max,
    project_ray,
    project_segment_set,
    project_union,
    semimodule_segment,
)
from smaxplus.oracle import (
    GridSpec,
    random_connected_ray_set,
    random_disconnected_ray_set,
    random_ray_set,
    random_selem,
    random_semimodule_convex_ray_set,
    random_svector,
)

TRIPLE = RaySet(plus=((1, 1),), minus=((1, 1),), balanced=((1, 1),))


def base_metric(base):
    return d1 if base == 1 else d2


class TestProjectRay:
    def test_all_three_at_distance_one(self):
        for base in (1, 2):
            r = project_ray(ZERO, TRIPLE, base)
            assert set(r.points) == {SElem.pos(0), SElem.neg(0), SElem.bal(0)}
            assert r.distance == pytest.approx(1.0, abs=1e-12)
            assert not r.is_singleton

    def test_cross_ray_clamp(self):
        C = RaySet(plus=((1, 2),))
        r = project_ray(SElem.neg(0), C, 2)
        assert r.points == (SElem.pos(0),)
        assert r.distance == pytest.approx(2.0, abs=1e-12)
        r = project_ray(SElem.neg(0), C, 1)
        assert r.distance == pytest.approx(math.sqrt(3), abs=1e-12)
        # grid search agrees
        g = GridSpec(resolution=1e-3, max_magnitude=5.0, seed=0)
        for base in (1, 2):
            got = grid_project(
                SVector((SElem.neg(0),)), BoxSet((C,)), MetricId("euclid", base), g
            )
            assert got.distance == pytest.approx(
                project_ray(SElem.neg(0), C, base).distance, abs=2e-3
            )

    def test_own_ray_interior(self):
        C = RaySet(plus=((1, 2),))
        x = SElem.pos(math.log(1.5))
        r = project_ray(x, C, 2)
        assert r.points == (x,) and r.distance == 0.0 and r.is_singleton

    def test_result_invariants(self):
        rng = random.Random(41)
        for _ in range(200):
            C = random_ray_set(rng)
            x = random_selem(rng)
            for base in (1, 2):
                r = project_ray(x, C, base)
                d = base_metric(base)
                assert len(set(r.points)) == len(r.points)
                for p in r.points:
                    assert C.contains(p) or min(
                        abs(math.exp(p.exp) - e)
                        for ivs in (C.plus, C.minus, C.balanced)
                        for iv in ivs
                        for e in iv
                    ) < 1e-9 if not p.is_zero else True
                    assert d(x, p) == pytest.approx(r.distance, abs=1e-9)
                assert r.is_singleton == (len(r.points) == 1)

    def test_errors(self):
        with pytest.raises(ValueError):
            project_ray(ZERO, RaySet(), 2)
        with pytest.raises(ValueError):
            project_ray(ZERO, TRIPLE, 3)


class TestDistance:
    def test_examples(self):
        C = RaySet(balanced=((2, 3),))
        assert distance_to_set(SElem.bal(math.log(2.5)), C) == 0.0
        assert distance_to_set(ZERO, C) == pytest.approx(2.0, abs=1e-12)
        assert distance_to_set(SElem.neg(0), RaySet(plus=((1, 2),)), base=1) == pytest.approx(
            math.sqrt(3), abs=1e-12
        )

    def test_unbounded_interval(self):
        C = RaySet(plus=((1, math.inf),))
        assert distance_to_set(SElem.pos(9), C) == 0.0
        assert distance_to_set(ZERO, C) == pytest.approx(1.0)


class TestChebyshev:
    def test_examples(self):
        assert is_chebyshev(RaySet(plus=((0, 1),), minus=((0, 3),)))
        assert not is_chebyshev(TRIPLE)
        assert is_chebyshev(RaySet(minus=((1, 2),)))

    def test_connected_sets_project_uniquely(self):
        rng = random.Random(42)
        for _ in range(30):
            C = random_connected_ray_set(rng)
            for _ in range(100):
                x = random_selem(rng)
                r1 = project_ray(x, C, 1)
                r2 = project_ray(x, C, 2)
                assert r1.is_singleton and r2.is_singleton
                assert r1.points == r2.points

    def test_disconnected_sets_have_witnesses(self):
        rng = random.Random(43)
        for _ in range(30):
            C = random_disconnected_ray_set(rng)
            for base in (1, 2):
                w = find_multipoint_witness(C, base)
                assert w is not None
                assert len(project_ray(w, C, base).points) >= 2

    def test_connected_sets_have_no_witness(self):
        rng = random.Random(44)
        for _ in range(30):
            C = random_connected_ray_set(rng)
            assert find_multipoint_witness(C, 2) is None

    def test_witness_for_star_plus_detached_interval(self):
        # a star through the origin with a non-anchored interval on another
        # ray: the only gap is radial, between the origin and that interval
        C = RaySet(plus=((0, 1),), minus=((2, 3),))
        assert not is_connected(C)
        for base in (1, 2):
            w = find_multipoint_witness(C, base)
            assert w is not None
            assert len(project_ray(w, C, base).points) >= 2

    def test_geometric_convexity_matches_chebyshev(self):
        rng = random.Random(45)
        for i in range(100):
            C = random_ray_set(rng) if i % 2 else random_connected_ray_set(rng)
            assert is_geometrically_convex(C) == is_chebyshev(C)


class TestSemimoduleConvexBounds:
    def test_at_most_three_points_on_the_line(self):
        rng = random.Random(46)
        for _ in range(40):
            C = random_semimodule_convex_ray_set(rng)
            assert is_semimodule_convex(C)
            for _ in range(50):
                x = random_selem(rng)
                for base in (1, 2):
                    assert len(project_ray(x, C, base).points) <= 3

    def test_at_most_3n_points_in_boxes(self):
        rng = random.Random(47)
        for _ in range(10):
            n = rng.randint(1, 3)
            box = BoxSet(tuple(random_semimodule_convex_ray_set(rng) for _ in range(n)))
            for _ in range(10):
                x = random_svector(rng, n)
                for code in ("rho11", "rho12", "rho21", "rho22"):
                    r = project_box(x, box, parse_metric_id(code))
                    assert len(r.points) <= 3**n


class TestProjectBox:
    def test_triple_power_counts(self):
        for n in (1, 2, 3):
            box = BoxSet((TRIPLE,) * n)
            x0 = SVector((ZERO,) * n)
            for code in ("rho11", "rho12", "rho21", "rho22"):
                r = project_box(x0, box, parse_metric_id(code))
                assert len(r.points) == 3**n
        r1 = project_box(SVector((ZERO,)), BoxSet((TRIPLE,)), parse_metric_id("rho12"))
        assert set(p[0] for p in r1.points) == set(project_ray(ZERO, TRIPLE, 2).points)

    def test_connected_factors_give_singleton(self):
        rng = random.Random(48)
        for _ in range(20):
            n = rng.randint(1, 3)
            box = BoxSet(tuple(random_connected_ray_set(rng) for _ in range(n)))
            x = random_svector(rng, n)
            for code in ("rho11", "rho22"):
                assert project_box(x, box, parse_metric_id(code)).is_singleton

    def test_max_combine_refused(self):
        with pytest.raises(ValueError, match="factoriz"):
            project_box(SVector((ZERO,)), BoxSet((TRIPLE,)), parse_metric_id("rho01"))

    def test_distance_combines_coordinate_minima(self):
        box = BoxSet((TRIPLE, TRIPLE))
        x0 = SVector((ZERO, ZERO))
        assert project_box(x0, box, parse_metric_id("rho22")).distance == pytest.approx(2.0)
        assert project_box(x0, box, parse_metric_id("rho12")).distance == pytest.approx(
            math.sqrt(2.0)
        )


class TestProjectBoxMax:
    def test_interval_times_point_cloud(self):
        # a product of two path-metric balls of radius 1, queried from a
        # point at distance 0 in the first factor and 1 in the second: every
        # first-factor point within the larger distance is an argmin
        ball = RaySet(plus=((0, 1),), minus=((0, 1),))
        box = BoxSet((ball, ball))
        x = SVector((ZERO, SElem.pos(math.log(2))))
        r = project_box_max(x, box, base=2, resolution=0.05)
        assert len(r.points) > 10
        # the second coordinate pins (up to grid slack) to the ball surface
        # nearest the query, while the first sweeps its whole factor
        for p in r.points:
            assert d2(p[1], SElem.pos(0)) <= 0.15
        firsts = {p[0] for p in r.points}
        assert len(firsts) > 10
        spread = [0.0 if e.is_zero else math.exp(e.exp) for e in firsts]
        assert max(spread) - min(spread) > 0.8
        # the factorized product would be a single point
        per0 = project_ray(ZERO, ball, 2)
        per1 = project_ray(SElem.pos(math.log(2)), ball, 2)
        assert len(per0.points) * len(per1.points) == 1

    def test_membership_and_singleton(self):
        single = RaySet(plus=((2, 2),))
        box = BoxSet((single,))
        r = project_box_max(SVector((SElem.neg(0),)), box, base=2, resolution=0.01)
        assert r.points == (SVector((SElem.pos(math.log(2)),)),)
        x = SVector((SElem.pos(math.log(2)),))
        r = project_box_max(x, box, base=2, resolution=0.01)
        assert r.distance == pytest.approx(0.0, abs=1e-12)

    def test_bad_resolution(self):
        with pytest.raises(ValueError):
            project_box_max(SVector((ZERO,)), BoxSet((TRIPLE,)), resolution=0.0)


class TestFactorization:
    def test_joint_grid_matches_product(self):
        rng = random.Random(49)
        g = GridSpec(resolution=5e-3, max_magnitude=8.0, seed=0)
        for _ in range(6):
            n = rng.randint(2, 3)
            box = BoxSet(tuple(_small_ray_set(rng) for _ in range(n)))
            x = random_svector(rng, n)
            for code in ("rho11", "rho12", "rho21", "rho22"):
                mid = parse_metric_id(code)
                joint = grid_project(x, box, mid, g)
                analytic = project_box(x, box, mid)
                assert joint.distance == pytest.approx(
                    analytic.distance, abs=g.resolution * n
                )
                for p in analytic.points:
                    assert any(
                        all(d2(a, b) <= 2 * g.resolution * n for a, b in zip(p, q))
                        for q in joint.points
                    )

    def test_max_combine_does_not_factorize(self):
        ball = RaySet(plus=((0, 1),), minus=((0, 1),))
        box = BoxSet((ball, ball))
        x = SVector((ZERO, SElem.pos(math.log(2))))
        g = GridSpec(resolution=0.05, max_magnitude=4.0, seed=0)
        joint = grid_project(x, box, parse_metric_id("rho02"), g)
        per = [project_ray(xi, Ci, 2) for xi, Ci in zip(x, box.factors)]
        product_count = len(per[0].points) * len(per[1].points)
        assert len(joint.points) > product_count


def _small_ray_set(rng) -> RaySet:
    ivs = {ray: [] for ray in Sign}
    for ray in Sign:
        if rng.random() < 0.7:
            a, b = sorted(rng.uniform(0.1, 3.0) for _ in range(2))
            ivs[ray].append((a, b))
    if not any(ivs.values()):
        ivs[Sign.PLUS].append((0.5, 1.5))
    return RaySet(tuple(ivs[Sign.PLUS]), tuple(ivs[Sign.MINUS]), tuple(ivs[Sign.BALANCED]))


class TestUnions:
    def test_union_projection_selects_the_closer_part(self):
        A1 = RaySet(plus=((0, 1),))
        A2 = RaySet(plus=((1, 2),))
        x = SElem.pos(math.log(3))
        p = project_union(x, A1, A2, 2)
        assert p == SElem.pos(math.log(2))
        assert p == project_ray(x, A1.union(A2), 2).points[0]

    def test_member_projects_to_itself(self):
        A1 = RaySet(plus=((0, 2),))
        A2 = RaySet(plus=((1, 3),))
        x = SElem.pos(math.log(1.5))
        assert project_union(x, A1, A2, 2) == x
        assert project_union(x, A1, A1, 2) == project_ray(x, A1, 2).points[0]

    def test_precondition_enforced(self):
        disconnected = RaySet(plus=((1, 2), (4, 5)))
        with pytest.raises(ValueError, match="Chebyshev"):
            project_union(ZERO, disconnected, disconnected, 2)
        # two Chebyshev parts whose union is disconnected
        with pytest.raises(ValueError, match="Chebyshev"):
            project_union(ZERO, RaySet(plus=((1, 2),)), RaySet(plus=((4, 5),)), 2)

    def test_union_projection_agrees_on_each_part(self):
        # when the union projection lands inside a part, it is that part's
        # projection too
        rng = random.Random(50)
        for _ in range(50):
            lo = rng.uniform(0.1, 2.0)
            mid_ = lo + rng.uniform(0.1, 1.0)
            hi = mid_ + rng.uniform(0.1, 2.0)
            parts = [RaySet(plus=((lo, mid_),)), RaySet(plus=((mid_, hi),))]
            union = parts[0].union(parts[1])
            assert is_chebyshev(union)
            x = random_selem(rng)
            a = project_ray(x, union, 2).points[0]
            for part in parts:
                if part.contains(a):
                    assert project_ray(x, part, 2).points[0] == a

    def test_nested_chebyshev_family_union(self):
        # a nested family of intervals, pairwise contained: the union is
        # again Chebyshev
        rng = random.Random(51)
        for _ in range(20):
            center = rng.uniform(1.0, 3.0)
            family = [
                RaySet(minus=((max(center - k * 0.3, 0.0), center + k * 0.3),))
                for k in range(1, 6)
            ]
            union = family[0]
            for part in family[1:]:
                union = union.union(part)
            assert is_chebyshev(union)


class TestGraphAndContinuity:
    def test_projection_graph_is_closed(self):
        # pairs (x_k, y_k) with y_k a nearest point of x_k converge to a
        # pair in the graph, even across a tie jump
        C = RaySet(plus=((1, 2), (4, 5)))
        mid_gap = point_on_ray(Sign.PLUS, 3.0)
        xs = [point_on_ray(Sign.PLUS, 3.0 + 1.0 / k) for k in range(2, 200)]
        ys = [project_ray(x, C, 2).points[-1] for x in xs]  # the right endpoint
        assert all(y == point_on_ray(Sign.PLUS, 4.0) for y in ys)
        limit_pair = (mid_gap, point_on_ray(Sign.PLUS, 4.0))
        assert limit_pair[1] in project_ray(limit_pair[0], C, 2).points

    def test_projection_is_continuous_on_connected_sets(self):
        rng = random.Random(52)
        for _ in range(25):
            C = random_connected_ray_set(rng)
            for base in (1, 2):
                worst = {}
                for _ in range(40):
                    x = random_selem(rng)
                    px = project_ray(x, C, base).points[0]
                    for delta in (1e-2, 1e-3, 1e-4):
                        x2 = _perturb(x, delta)
                        px2 = project_ray(x2, C, base).points[0]
                        d = base_metric(base)
                        worst[delta] = max(worst.get(delta, 0.0), d(px, px2))
                assert worst[1e-2] + 1e-12 >= worst[1e-3] >= worst[1e-4] - 1e-12
                # projections onto connected sets are nonexpansive in the
                # path metric, and nearly so in the chord metric
                assert worst[1e-4] <= 3e-4


def _perturb(x: SElem, delta: float) -> SElem:
    m = 0.0 if x.is_zero else math.exp(x.exp)
    m2 = m + delta
    sign = x.sign if not x.is_zero else Sign.BALANCED
    return SElem(sign, math.log(m2))


class TestSegmentSetProjection:
    def test_non_closed_segment_example(self):
        seg = semimodule_segment(SVector((SElem.pos(1),)), SVector((SElem.neg(0),)))
        for base in (1, 2):
            r = project_segment_set(ZERO, seg, base)
            assert set(r.points) == {SElem.neg(0), SElem.bal(0)}
            assert r.distance == pytest.approx(1.0, abs=1e-12)

    def test_open_end_excluded_but_interior_attained(self):
        seg = semimodule_segment(SVector((SElem.pos(1),)), SVector((SElem.neg(0),)))
        x = SElem.pos(0.5)  # interior of the half-open arc
        r = project_segment_set(x, seg, 2)
        assert r.points == (x,) and r.distance == 0.0

    def test_unattained_infimum_raises(self):
        from smaxplus.segments import ArcPiece, SegmentSet

        chart = ((Sign.PLUS, Sign.PLUS),)
        open_arc = SegmentSet((ArcPiece(chart, (1.0,), (2.0,), False, True),))
        with pytest.raises(ValueError, match="not attained"):
            project_segment_set(ZERO, open_arc, 2)


class TestOracleAgreement:
    def test_project_ray_matches_grid(self):
        rng = random.Random(53)
        g = GridSpec(resolution=1e-3, max_magnitude=25.0, seed=0)
        for _ in range(20):
            C = random_ray_set(rng)
            box = BoxSet((C,))
            x = random_selem(rng)
            for base in (1, 2):
                analytic = project_ray(x, C, base)
                gridded = grid_project(SVector((x,)), box, MetricId("euclid", base), g)
                assert gridded.distance == pytest.approx(analytic.distance, abs=2e-3)
                for p in analytic.points:
                    assert any(d2(p, q[0]) <= 2e-3 for q in gridded.points)


def test_projection_result_json_round_trip():
    r = project_ray(ZERO, TRIPLE, 2)
    again = ProjectionResult.from_json(r.to_json())
    assert again.points == r.points
    assert again.distance == r.distance
    assert again.is_singleton == r.is_singleton
