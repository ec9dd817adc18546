"""Cayley balls, geodesics and constrained shortest paths."""

import itertools

import pytest

from src.cayley import (
    PathStatus,
    SearchRegion,
    WordMetric,
    constrained_shortest_path,
    geodesic,
    geodesic_word,
    grow_ball,
    never_forbidden,
    word_distance,
)
from src.errors import BudgetExhausted, UsageError
from src.groups import get_group

BUDGET = 1_000_000


def test_zd2_sphere_sizes(zd2):
    assert grow_ball(zd2, zd2.identity, 3, BUDGET).sphere_sizes == [1, 4, 8, 12]


def test_free2_sphere_sizes(free2):
    assert grow_ball(free2, free2.identity, 3, BUDGET).sphere_sizes == [1, 4, 12, 36]


def test_budget_exhaustion_carries_partial_spheres(zd2):
    with pytest.raises(BudgetExhausted) as info:
        grow_ball(zd2, zd2.identity, 10, node_budget=20)
    assert info.value.sphere_sizes[:3] == [1, 4, 8]
    assert info.value.stats()["radius_reached"] >= 2


def test_negative_radius_rejected(zd2):
    with pytest.raises(UsageError):
        grow_ball(zd2, zd2.identity, -1, BUDGET)


def test_geodesic_to_center(zd2):
    ball = grow_ball(zd2, zd2.identity, 2, BUDGET)
    assert geodesic(ball, zd2.identity) == [zd2.identity]


def test_geodesic_lengths(zd2, free2):
    ball = grow_ball(zd2, zd2.identity, 3, BUDGET)
    assert len(geodesic(ball, zd2.parse_element("v:2,1"))) == 4

    free_ball = grow_ball(free2, free2.identity, 3, BUDGET)
    target = free2.parse_element("w:abA")
    word = geodesic_word(free_ball, target)
    assert [free2.generator_names()[i] for i in word] == ["a", "b", "A"]


def test_geodesic_outside_ball(zd2):
    ball = grow_ball(zd2, zd2.identity, 1, BUDGET)
    with pytest.raises(UsageError):
        geodesic(ball, zd2.parse_element("v:3,0"))


def test_path_around_l1_disc(zd2):
    forbidden = lambda x: abs(x.payload[0]) + abs(x.payload[1]) < 2  # noqa: E731
    result = constrained_shortest_path(zd2, zd2.parse_element("v:-4,0"), zd2.parse_element("v:4,0"),
                                       forbidden, search_radius=12, node_budget=BUDGET)
    assert result.status is PathStatus.FOUND
    assert result.length == 12
    assert all(not forbidden(x) for x in result.path)


def _wall(x):
    # the column x = 0 below height 5
    return x.payload[0] == 0 and abs(x.payload[1]) < 5


def test_region_too_small_for_detour(zd2):
    a, b = zd2.parse_element("v:-4,0"), zd2.parse_element("v:4,0")
    result = constrained_shortest_path(zd2, a, b, _wall, search_radius=9, node_budget=BUDGET)
    assert result.status is PathStatus.NO_PATH


def test_paths_may_exceed_search_radius(zd2):
    a, b = zd2.parse_element("v:-4,0"), zd2.parse_element("v:4,0")
    result = constrained_shortest_path(zd2, a, b, _wall, search_radius=10, node_budget=BUDGET)
    assert result.found
    assert result.length == 18
    assert all(zd2.word_length(zd2.multiply(zd2.inverse(a), x)) <= 10 for x in result.path)


def test_detour_around_identity_in_small_region(zd2):
    a, b = zd2.parse_element("v:-1,0"), zd2.parse_element("v:1,0")
    result = constrained_shortest_path(zd2, a, b, lambda x: x == zd2.identity, search_radius=3,
                                       node_budget=BUDGET)
    assert result.found
    assert result.length == 4


def test_region_around_other_origin(zd2):
    a, b = zd2.parse_element("v:-4,0"), zd2.parse_element("v:4,0")
    tight = constrained_shortest_path(zd2, a, b, _wall, 5, BUDGET, origin=zd2.identity)
    assert tight.status is PathStatus.NO_PATH
    wide = constrained_shortest_path(zd2, a, b, _wall, 6, BUDGET, origin=zd2.identity)
    assert wide.length == 18
    with pytest.raises(UsageError):
        constrained_shortest_path(zd2, a, b, _wall, 2, BUDGET, origin=zd2.parse_element("v:10,10"))


def test_region_membership_without_closed_form(heis):
    region = SearchRegion(heis, heis.identity, 2, BUDGET)
    assert heis.parse_element("h:1,1,0") in region
    assert heis.parse_element("h:3,0,0") not in region
    assert region.contains(heis.parse_element("h:5,5,5"), upper=2)


def test_tree_separation(free2):
    result = constrained_shortest_path(free2, free2.parse_element("w:aa"), free2.parse_element("w:AA"),
                                       lambda x: x == free2.identity, search_radius=40, node_budget=BUDGET)
    assert result.status is PathStatus.NO_PATH


def test_unconstrained_path_is_geodesic(heis):
    a, b = heis.parse_element("h:1,-1,0"), heis.parse_element("h:-1,2,3")
    result = constrained_shortest_path(heis, a, b, never_forbidden, search_radius=20, node_budget=BUDGET)
    assert result.found
    assert result.length == word_distance(heis, a, b, 20, BUDGET)


def test_forbidden_endpoint_rejected(zd2):
    with pytest.raises(UsageError):
        constrained_shortest_path(zd2, zd2.identity, zd2.parse_element("v:1,0"),
                                  lambda x: x == zd2.identity, search_radius=4, node_budget=BUDGET)


def test_c_paths_never_longer(zd2):
    forbidden = lambda x: abs(x.payload[0]) + abs(x.payload[1]) < 2  # noqa: E731
    a, b = zd2.parse_element("v:-4,0"), zd2.parse_element("v:4,0")
    one = constrained_shortest_path(zd2, a, b, forbidden, 12, BUDGET)
    two = constrained_shortest_path(zd2, a, b, forbidden, 12, BUDGET, step_radius=2)
    assert two.found
    assert two.length <= one.length


def test_search_budget(heis):
    result = constrained_shortest_path(heis, heis.identity, heis.parse_element("h:6,6,0"),
                                       never_forbidden, search_radius=40, node_budget=50)
    assert result.status is PathStatus.BUDGET_EXHAUSTED


def test_word_metric_open_ball(zd2):
    metric = WordMetric(zd2, BUDGET)
    inside = metric.open_ball(zd2.identity, 2.0)
    assert inside(zd2.parse_element("v:1,0"))
    assert not inside(zd2.parse_element("v:1,1"))
    assert not metric.open_ball(zd2.identity, 0.0)(zd2.identity)


EVERY_GROUP = [
    ("zd:2", 4),
    ("zd:2+diag", 4),
    ("zd:3", 4),
    ("free:2", 4),
    ("free:3", 4),
    ("heis", 4),
    ("sl2z", 4),
    ("sl3z", 3),
    ("prod(zd:1,free:2)", 4),
]


def _shortest_word_lengths(group, radius):
    lengths = {}
    for k in range(radius + 1):
        for word in itertools.product(range(group.num_generators), repeat=k):
            lengths.setdefault(group.eval_word(list(word)), k)
    return lengths


@pytest.mark.parametrize("spec,radius", EVERY_GROUP)
def test_ball_matches_word_enumeration(spec, radius):
    group = get_group(spec)
    ball = grow_ball(group, group.identity, radius, BUDGET)
    assert ball.dist == _shortest_word_lengths(group, radius)


@pytest.mark.parametrize("spec,_", EVERY_GROUP)
def test_distance_is_left_invariant(spec, _):
    group = get_group(spec)
    length = 1 if spec == "sl3z" else 2
    for seed in range(3):
        a = group.eval_word(group.random_word(length, seed))
        b = group.eval_word(group.random_word(length, seed + 100))
        g = group.eval_word(group.random_word(5, seed + 200))
        base = word_distance(group, a, b, 2 * length, BUDGET)
        moved = word_distance(group, group.multiply(g, a), group.multiply(g, b), 2 * length, BUDGET)
        assert base is not None
        assert moved == base


def _assert_valid_path(group, result, a, b, forbidden):
    generators = {group.generator(i) for i in range(group.num_generators)}
    assert result.path[0] == a and result.path[-1] == b
    assert len(result.path) == result.length + 1
    for x, y in zip(result.path, result.path[1:]):
        assert group.multiply(group.inverse(x), y) in generators
    assert not any(forbidden(x) for x in result.path)


@pytest.mark.parametrize("spec,a,b,c", [
    ("zd:2", "v:-3,0", "v:3,0", "v:0,0"),
    ("zd:2+diag", "v:-3,1", "v:3,-1", "v:0,0"),
    ("heis", "h:-2,0,0", "h:2,0,0", "h:0,0,0"),
    ("prod(zd:1,free:2)", "p:v:-2|w:a", "p:v:2|w:a", "p:v:0|w:a"),
])
def test_returned_paths_revalidate(spec, a, b, c):
    group = get_group(spec)
    a, b, c = group.parse_element(a), group.parse_element(b), group.parse_element(c)
    forbidden = WordMetric(group, BUDGET).open_ball(c, 2.0)
    result = constrained_shortest_path(group, a, b, forbidden, 24, BUDGET)
    assert result.found
    _assert_valid_path(group, result, a, b, forbidden)


def _length_or_inf(result):
    return result.length if result.found else float("inf")


def test_found_length_non_increasing_in_radius(zd2):
    a, b = zd2.parse_element("v:-4,0"), zd2.parse_element("v:4,0")
    lengths = [_length_or_inf(constrained_shortest_path(zd2, a, b, _wall, r, BUDGET)) for r in range(8, 16)]
    assert lengths == sorted(lengths, reverse=True)
    assert lengths[0] == float("inf") and lengths[-1] == 18


@pytest.mark.parametrize("spec,a,b", [
    ("zd:2", "v:-5,0", "v:5,0"),
    ("heis", "h:-3,0,0", "h:3,0,0"),
])
def test_found_length_non_decreasing_in_forbidden_set(spec, a, b):
    group = get_group(spec)
    a, b = group.parse_element(a), group.parse_element(b)
    metric = WordMetric(group, BUDGET)
    lengths = []
    for radius in (0, 1, 2, 3):
        forbidden = metric.open_ball(group.identity, radius)
        result = constrained_shortest_path(group, a, b, forbidden, 30, BUDGET)
        assert result.found
        _assert_valid_path(group, result, a, b, forbidden)
        lengths.append(result.length)
    assert lengths == sorted(lengths)
