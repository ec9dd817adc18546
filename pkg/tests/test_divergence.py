"""Pointwise divergence, tables, instance checks, Morse probes and growth reports."""

import pytest

from src.cayley import WordMetric
from src.divergence import (
    CSV_COLUMNS,
    DivQuery,
    DivStatus,
    TableMode,
    check_instance_inequalities,
    div_inequality_suite,
    div_point,
    fixed_geodesic,
    gersten_div_table,
    gersten_pair,
    genset_robustness,
    growth_report,
    is_small_witness,
    midpoint_div_table,
    morse_probe,
    morse_series,
    random_queries,
    revalidate_table,
    small_div_table,
)
from src.errors import UsageError

BUDGET = 1_000_000
CERTIFIED = (DivStatus.EXACT, DivStatus.BALL_EMPTY)


def _query(group, a, b, c, **kw):
    return DivQuery(a=group.parse_element(a), b=group.parse_element(b), c=group.parse_element(c),
                    node_budget=BUDGET, **kw)


def test_div_point_z2(zd2):
    result = div_point(zd2, _query(zd2, "v:-4,0", "v:4,0", "v:0,0", delta=0.5, gamma=0.0))
    assert result.status is DivStatus.EXACT
    assert result.r == 4
    assert result.forbidden_radius == 2
    assert result.value == 12


def test_div_point_empty_ball(zd2):
    result = div_point(zd2, _query(zd2, "v:-4,0", "v:4,0", "v:0,0", delta=0.5, gamma=2.0))
    assert result.status is DivStatus.BALL_EMPTY
    assert result.value == 8
    assert result.certified


def test_div_point_free_group_is_infinite(free2):
    for factor in (1.0, 4.0, 10.0):
        result = div_point(free2, _query(free2, "w:aa", "w:AA", "w:", delta=0.5, gamma=0.0,
                                         search_radius_factor=factor))
        assert result.status is DivStatus.NO_PATH
        assert result.comparable_value() == float("inf")


def test_query_validation(zd2):
    with pytest.raises(UsageError):
        _query(zd2, "v:1,0", "v:2,0", "v:0,0", delta=1.0)
    with pytest.raises(UsageError):
        _query(zd2, "v:1,0", "v:2,0", "v:0,0", gamma=-1.0)
    with pytest.raises(UsageError):
        _query(zd2, "v:0,0", "v:0,0", "v:0,0")


def test_step_radius_never_increases_value(zd2):
    one = div_point(zd2, _query(zd2, "v:-4,0", "v:4,0", "v:0,0"))
    two = div_point(zd2, _query(zd2, "v:-4,0", "v:4,0", "v:0,0", step_radius=2))
    assert two.value <= one.value


def test_gersten_pair_matches_div_point(zd2):
    result = gersten_pair(zd2, zd2.identity, zd2.parse_element("v:4,0"), zd2.parse_element("v:-4,0"), 0.5,
                          node_budget=BUDGET)
    assert result.value == 12


def test_gersten_pair_small_ball(zd2):
    # rho * r < 1 forbids only the basepoint, which a geodesic can avoid here
    result = gersten_pair(zd2, zd2.identity, zd2.parse_element("v:2,0"), zd2.parse_element("v:0,2"), 0.25,
                          node_budget=BUDGET)
    assert result.value == result.dist_ab == 4


def test_gersten_pair_tree(free2):
    result = gersten_pair(free2, free2.identity, free2.parse_element("w:aa"), free2.parse_element("w:AA"), 0.5,
                          node_budget=BUDGET)
    assert result.status is DivStatus.NO_PATH


def test_gersten_pair_unequal_radii(zd2):
    with pytest.raises(UsageError):
        gersten_pair(zd2, zd2.identity, zd2.parse_element("v:1,0"), zd2.parse_element("v:2,0"), 0.5,
                     node_budget=BUDGET)


def test_midpoint_table_z2_is_linear(zd2):
    table = midpoint_div_table(zd2, 8, node_budget=BUDGET)
    assert [r.n for r in table.rows] == list(range(1, 9))
    for row in table.rows:
        assert row.status in CERTIFIED
        assert row.value <= 2 * row.n + 4
    assert table.row(8).value == 12
    assert growth_report(table).classification == "linear"


@pytest.mark.slow
def test_midpoint_table_z2_to_32(zd2):
    table = midpoint_div_table(zd2, 32, node_budget=BUDGET)
    assert all(r.status in CERTIFIED and r.value <= 2 * r.n + 4 for r in table.rows)


def test_midpoint_table_free_group(free2):
    table = midpoint_div_table(free2, 6, node_budget=BUDGET)
    assert all(r.status is DivStatus.NO_PATH for r in table.rows if r.n >= 2)
    assert growth_report(table).classification == "infinite-within-radius"


def test_midpoint_table_heisenberg_is_finite(heis):
    table = midpoint_div_table(heis, 4, sample_cap=10, node_budget=BUDGET)
    assert table.rows
    assert all(r.status in CERTIFIED for r in table.rows)


def test_table_exports(zd2, tmp_path):
    table = midpoint_div_table(zd2, 3, node_budget=BUDGET)
    assert list(table.to_dataframe().columns) == CSV_COLUMNS
    table.to_csv(tmp_path / "t.csv")
    assert (tmp_path / "t.csv").read_text().splitlines()[0] == ",".join(CSV_COLUMNS)
    doc = table.to_document({"seed": 0})
    assert doc["table"]["mode"] == TableMode.MIDPOINT.value
    assert doc["run_config"] == {"seed": 0}


def test_small_table_dominates_midpoint(zd2):
    small = small_div_table(zd2, 4, lam=4.0, delta=1 / 3, node_budget=BUDGET)
    midpoint = midpoint_div_table(zd2, 4, delta=1 / 3, node_budget=BUDGET)
    for row in midpoint.rows:
        other = small.row(row.n)
        if row.n >= 2 and row.status in CERTIFIED and other is not None and other.status in CERTIFIED:
            assert other.value >= row.value


def test_small_witness_predicate(zd2):
    metric = WordMetric(zd2, BUDGET)
    a, b = zd2.parse_element("v:-2,0"), zd2.parse_element("v:2,0")
    assert is_small_witness(metric, a, b, zd2.identity, 2.0)
    assert not is_small_witness(metric, a, b, zd2.parse_element("v:-1,0"), 2.0)


def test_small_table_lambda_bound(zd2):
    with pytest.raises(UsageError):
        small_div_table(zd2, 4, lam=1.5)


def test_gersten_table(zd2):
    table = gersten_div_table(zd2, 3, rho=0.5, node_budget=BUDGET)
    assert table.mode is TableMode.GERSTEN
    assert all(r.status in CERTIFIED for r in table.rows)


def test_instance_inequalities_hold():
    reports = div_inequality_suite(12, 1, group_specs=("zd:2", "heis"), max_word_length=3, node_budget=BUDGET)
    for report in reports.values():
        assert report.is_valid, report.violations[:3]


@pytest.mark.slow
def test_instance_inequalities_full_suite():
    reports = div_inequality_suite(1000, 1, node_budget=BUDGET)
    assert all(r.is_valid for r in reports.values())


def test_delta_monotonicity_with_equal_delta(zd2):
    q = _query(zd2, "v:-3,0", "v:3,0", "v:0,0", delta=0.5)
    report = check_instance_inequalities(zd2, [q], delta_prime=0.5)
    assert report.is_valid
    assert any(r.check_name == "delta_monotone" for r in report.results)


def test_genset_robustness():
    report = genset_robustness(4, node_budget=BUDGET)
    assert report.ratios
    assert report.is_valid


def test_morse_probe_z2(zd2):
    probe = morse_probe(zd2, [zd2.index_of("e1+")], 2, corridor_D=1, node_budget=BUDGET)
    assert probe.detour_length == 16
    assert probe.ratio == pytest.approx(16 / 12)


def test_morse_probe_free_group_disconnects(free2):
    probe = morse_probe(free2, [free2.index_of("a")], 2, corridor_D=0, node_budget=BUDGET)
    assert probe.disconnected


def test_morse_series_z2_is_not_morse(zd2):
    series = morse_series(zd2, [zd2.index_of("e1+")], [2, 4, 8], corridor_D=1, node_budget=BUDGET)
    assert all(p.ratio <= 1.5 for p in series.probes)
    assert series.verdict == "non-Morse-consistent"


def test_morse_probe_needs_word(zd2):
    with pytest.raises(UsageError):
        morse_probe(zd2, [], 2)


def test_div_point_is_left_invariant(zd2, heis):
    for group in (zd2, heis):
        metric = WordMetric(group, BUDGET)
        for k, q in enumerate(random_queries(group, 6, 11, max_word_length=3, node_budget=BUDGET)):
            g = group.eval_word(group.random_word(3, 100 + k))
            moved = q.with_params(a=group.multiply(g, q.a), b=group.multiply(g, q.b), c=group.multiply(g, q.c))
            base, shifted = div_point(group, q, metric=metric), div_point(group, moved, metric=metric)
            if DivStatus.BUDGET_EXHAUSTED in (base.status, shifted.status):
                continue
            assert shifted.status is base.status
            assert shifted.value == base.value


def test_value_is_distance_exactly_when_geodesic_avoids_ball(zd2):
    # the geodesic from (-4, 0) to (4, 0) is unique
    metric = WordMetric(zd2, BUDGET)
    queries = []
    for y in range(7):
        q = _query(zd2, "v:-4,0", "v:4,0", f"v:0,{y}", delta=0.5)
        result = div_point(zd2, q, metric=metric)
        forbidden = metric.open_ball(q.c, result.forbidden_radius)
        avoids = not any(forbidden(x) for x in fixed_geodesic(zd2, metric, q.a, q.b))
        assert avoids == (y >= 4)
        assert (result.value == 8) == avoids
        queries.append(q)
    report = check_instance_inequalities(zd2, queries)
    assert report.is_valid, report.violations[:3]
    assert sum(r.check_name == "geodesic_equality" for r in report.results) == 3


def test_revalidate_midpoint_table(zd2):
    table = midpoint_div_table(zd2, 6, node_budget=BUDGET)
    report = revalidate_table(table)
    assert report.is_valid
    assert report.checks_run == len(table.rows) == 6

    table.rows[-1].value += 1
    report = revalidate_table(table)
    assert not report.is_valid
    assert [v.details["query"] for v in report.violations] == [6]


def test_revalidate_keeps_no_path_rows(free2):
    table = midpoint_div_table(free2, 4, node_budget=BUDGET)
    report = revalidate_table(table)
    assert report.is_valid
    assert report.checks_run == len(table.rows)


def test_revalidate_gersten_and_small_tables(zd2):
    for table in (gersten_div_table(zd2, 3, node_budget=BUDGET),
                  small_div_table(zd2, 3, lam=4.0, delta=1 / 3, node_budget=BUDGET)):
        report = revalidate_table(table)
        assert report.is_valid, report.violations
        assert report.checks_run == len(table.rows)


@pytest.mark.slow
def test_midpoint_table_free_group_to_16(free2):
    table = midpoint_div_table(free2, 16, node_budget=BUDGET)
    assert [r.n for r in table.rows] == list(range(1, 17))
    assert all(r.status is DivStatus.NO_PATH for r in table.rows if r.n >= 2)


@pytest.mark.slow
def test_midpoint_table_heisenberg_to_12(heis):
    table = midpoint_div_table(heis, 12, sample_cap=100, node_budget=2_000_000)
    # sampled rows may find no pair at exact distance n
    assert len(table.rows) >= 8
    for row in table.rows:
        assert row.status in CERTIFIED
        assert row.value <= 8 * row.n


@pytest.mark.slow
def test_genset_robustness_to_24():
    report = genset_robustness(24, node_budget=BUDGET, sample_cap=1000)
    assert max(report.ratios) == 24
    assert report.is_valid


def test_morse_free_group_all_corridors(free2):
    for n in range(1, 9):
        for corridor in (0, 1):
            result = morse_probe(free2, [free2.index_of("a")], n, corridor_D=corridor, node_budget=BUDGET)
            assert result.disconnected, (n, corridor)


def test_morse_z2_detour_lengths(zd2):
    # around the corridor: 6n along the axis plus two steps up and two down
    for n in range(1, 9):
        result = morse_probe(zd2, [zd2.index_of("e1+")], n, corridor_D=1, node_budget=BUDGET)
        assert result.detour_length == 6 * n + 4
        if n >= 2:
            assert result.ratio <= 1.5
