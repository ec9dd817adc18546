"""Generating set, conjugate selection and logarithmic words for L and M."""

import math

import pytest

from src.errors import UsageError
from src.sl3 import (
    Mat3,
    evaluate_script,
    get_genset,
    lattice_bfs_lengths,
    length_bound,
    radix_oracle_check,
    row_angle,
    select_conjugate,
    short_word_check,
    short_word_L,
    short_word_M,
    sl3_algebra_check,
    two_sided_radix,
)


@pytest.fixture
def genset(params):
    return get_genset(params)


@pytest.fixture
def a_matrix(params):
    return tuple(tuple(r) for r in params.A)


def test_genset_layout(genset):
    names = genset.names
    assert names[:2] == ["E12+", "E12-"]
    assert {"P12+", "P23-", "UA0+", "LA0-", "LS+", "LT-"} <= set(names)
    for i in range(len(names)):
        j = genset.group.inverse_index(i)
        assert genset.eval([i, j]) == Mat3.identity()


def test_frame_word(genset):
    target = Mat3.lower(((0, -1), (1, 0)))
    word = genset.frame_word(target.rows)
    assert genset.eval(word) == target
    assert len(word) == 1


def test_radix_zero(a_matrix):
    assert two_sided_radix((0, 0), a_matrix, 8).symbols == []


def test_radix_fibonacci_vector(a_matrix):
    script = two_sided_radix((987, 610), a_matrix, 8)
    m, w = evaluate_script(script.symbols, a_matrix)
    assert m == ((1, 0), (0, 1))
    assert w == (987, 610)
    assert len(script) <= 32 * math.log2(989) + 32
    assert all(max(abs(d[0]), abs(d[1])) <= 8 for d in script.digits())


def test_radix_large_vector(a_matrix):
    v = (3 ** 80 - 17, -(2 ** 120) + 5)
    script = two_sided_radix(v, a_matrix, 8)
    assert evaluate_script(script.symbols, a_matrix)[1] == v


def test_short_word_L_literal(genset):
    assert short_word_L(0, 0) == []
    assert short_word_L(1, 0) == [genset.index("E13+")]
    assert short_word_L(1, 1) == [genset.index("E13+"), genset.index("E23+")]


def test_short_word_L_exact(genset):
    for m, n in [(5, 3), (-8, 8), (144, -89), (10 ** 9, 7)]:
        word = short_word_L(m, n)
        assert genset.eval(word) == Mat3.L(m, n)
        assert len(word) <= length_bound((m, n))


def test_short_word_M(genset):
    assert short_word_M(1, 0) == [genset.index("E21+")]
    word = short_word_M(-13, 21)
    assert genset.eval(word) == Mat3.M(-13, 21)
    assert len(word) <= length_bound((-13, 21))


def test_short_word_is_logarithmic(genset):
    v = (2 ** 100 + 1, -(3 ** 50))
    word = short_word_M(*v)
    assert genset.eval(word) == Mat3.M(*v)
    assert len(word) <= length_bound(v)
    assert len(word) < 10_000


def test_short_word_every_conjugate(genset):
    for c in range(len(genset.family.members)):
        assert genset.eval(short_word_L(400, -250, c)) == Mat3.L(400, -250)


def test_short_word_bad_conjugate():
    with pytest.raises(UsageError):
        short_word_L(100, 100, conj_index=999)


def test_conjugate_clears_row(params, genset):
    for row in [(1, 0), (0, 1), (1, 1), (3, -5), (2 ** 200, 2 ** 199 + 1), (-(10 ** 30), 7)]:
        i = select_conjugate(row, params)
        assert genset.family.members[i].clearance(row_angle(row)) >= params.angle_floor


def test_row_angle():
    assert row_angle((2 ** 300, 2 ** 300)) == pytest.approx(math.pi / 4)
    assert row_angle((-1, 0)) == pytest.approx(0.0)
    with pytest.raises(UsageError):
        row_angle((0, 0))


def test_lattice_bfs(a_matrix):
    lengths = lattice_bfs_lengths(a_matrix, max_norm=2)
    assert len(lengths) == 25
    assert lengths[(0, 0)] == 0
    assert lengths[(1, 0)] == 1
    assert lengths[(1, 1)] == 2
    assert max(lengths.values()) <= 4


def test_lattice_bfs_uses_the_block(a_matrix):
    # B^2 e1 = (5, 3) costs four block letters and one translation
    lengths = lattice_bfs_lengths(a_matrix, max_norm=5)
    assert lengths[(2, 1)] == 3
    assert lengths[(5, 3)] == 5
    assert all(d <= abs(m) + abs(n) for (m, n), d in lengths.items())


def test_radix_oracle_small():
    report = radix_oracle_check(max_norm=4)
    assert report.is_valid, report.summary()
    assert report.notes["bfs_targets"] == 81


@pytest.mark.slow
def test_radix_oracle_acceptance():
    assert radix_oracle_check(max_norm=8).is_valid


def test_algebra_identities():
    report = sl3_algebra_check(samples=20, seed=3)
    assert report.checks_run > 20
    assert report.is_valid


def test_short_word_battery():
    report = short_word_check(box=3, samples=5, bits=128, seed=1)
    assert report.is_valid, report.summary()
    assert report.notes["max_length_per_log2"] > 0


@pytest.mark.slow
def test_short_word_battery_full():
    assert short_word_check().is_valid


def test_short_word_M_zero():
    assert short_word_M(0, 0) == []


def test_conjugate_avoids_own_eigenline(params):
    # (1000, -1618) lies on the stable eigenline of A = [[2, 1], [1, 1]]
    assert select_conjugate((1000, -1618), params) != 0
    assert select_conjugate((1, 1), params) == select_conjugate((1, 1), params)
