"""SL3 matrices, parameters and the integer arithmetic of the reduction."""

import itertools
import json
import math

import pytest

from src.errors import ConfigurationError, UsageError
from src.sl3 import (
    Mat3,
    Sl3Params,
    centered_rep,
    certified_stable_range,
    is_large,
    load_sl3_params,
    stable_range_z,
    xgcd,
)
from src.sl3.checks import stable_range_check


def test_mat3_determinant_checked():
    with pytest.raises(UsageError):
        Mat3(((2, 0, 0), (0, 1, 0), (0, 0, 1)))


def test_mat3_unipotent_subgroups():
    assert Mat3.L(5, 3) == Mat3.E(1, 3, 5) @ Mat3.E(2, 3, 3)
    assert Mat3.M(-2, 7) == Mat3.E(2, 1, -2) @ Mat3.E(3, 1, 7)
    assert Mat3.M(4, 9).is_M() and Mat3.M(4, 9).m_vector() == (4, 9)
    assert not Mat3.L(1, 0).is_M()
    assert Mat3.L(2, 1) @ Mat3.L(2, 1).inverse() == Mat3.identity()


def test_mat3_json_keeps_big_entries():
    big = Mat3.E(3, 1, 2 ** 200)
    doc = json.loads(json.dumps(big.to_json()))
    assert Mat3.from_json(doc) == big
    assert big.proxy() == pytest.approx(200.0)


def test_is_large():
    params = Sl3Params()
    assert is_large(1, Mat3.identity(), params)
    gamma = Mat3.E(1, 3, 2 ** 64)
    assert is_large(2 ** 32, gamma, params)
    assert not is_large(1, gamma, params)


def test_xgcd():
    for a, b in [(240, 46), (-7, 3), (0, 5), (17, 0), (2 ** 80 + 1, 3 ** 40)]:
        g, x, y = xgcd(a, b)
        assert g == math.gcd(a, b)
        assert a * x + b * y == g


def test_centered_rep():
    assert centered_rep(10, 3) == 1
    assert centered_rep(-7, 4) == 1
    assert centered_rep(5, 11) == 5
    assert centered_rep(9, 10) == -1
    with pytest.raises(UsageError):
        centered_rep(3, 0)


def test_stable_range_small_cases():
    assert stable_range_z(6, 1, 0) == (0, 1)
    assert stable_range_z(4, 2, 9) == (0, 0)
    assert stable_range_z(3, 0, 5) == (1, 0)


def test_stable_range_rejects_common_factor():
    with pytest.raises(UsageError):
        stable_range_z(2, 4, 6)


def test_stable_range_exhaustive_small_box():
    report = stable_range_check(bound=8)
    assert report.checks_run > 0
    assert report.is_valid


def test_certified_matches_search():
    for a, b, c in itertools.product(range(-6, 7), repeat=3):
        if math.gcd(math.gcd(a, b), c) != 1:
            continue
        assert stable_range_z(a, b, c, "certified") == stable_range_z(a, b, c, "search")


def test_certified_records_primes():
    result = certified_stable_range(7, 3, 2 * 3 * 5 * 7 * 11)
    assert sorted(result.primes) == [2, 3, 5, 7, 11]
    assert abs(result.m) <= result.bound
    assert math.gcd(3 + result.m * 7, 2 * 3 * 5 * 7 * 11) == 1


def test_certified_size_limit():
    with pytest.raises(UsageError):
        certified_stable_range(1, 1, 2 ** 64 + 1)


def test_params_validation():
    with pytest.raises(ValueError):
        Sl3Params(C_large=1.5)
    with pytest.raises(ValueError):
        Sl3Params(A=[[1, 1], [0, 1]])
    with pytest.raises(ValueError):
        Sl3Params(A=[[2, 1], [1, 2]])
    assert Sl3Params().overridden(M_digit=4).M_digit == 4


def test_load_params_overrides():
    assert load_sl3_params(overrides={"kappa_min": 0.1}).kappa_min == 0.1
    with pytest.raises(ConfigurationError):
        load_sl3_params(overrides={"no_such_field": 1})
    with pytest.raises(ConfigurationError):
        load_sl3_params(overrides={"M_digit": 0})
