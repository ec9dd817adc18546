"""Reduction to M, M-to-M walks, full connection and the independent verifier."""

import json

import pytest

from src.errors import UsageError
from src.sl3 import (
    Mat3,
    Trajectory,
    TrajectoryBuilder,
    connect_M_to_M,
    connect_to_M,
    exteriorly_connect,
    gammaL_word,
    get_genset,
    sl3_stress,
    trajectory_from_document,
    verify_trajectory,
)

BIG = 2 ** 64


def test_empty_trajectory_verifies(params):
    t = TrajectoryBuilder(Mat3.identity(), params).trajectory()
    report = verify_trajectory(t, Mat3.identity(), params)
    assert report.length == 0
    assert report.endpoint_match
    assert report.passed


def test_verifier_catches_wrong_endpoint(params):
    genset = get_genset(params)
    t = Trajectory(Mat3.identity(), [genset.index("E13+")], genset)
    report = verify_trajectory(t, Mat3.E(1, 3, 2), params)
    assert report.steps_valid
    assert not report.endpoint_match
    assert not report.passed


def test_verifier_catches_bad_letter(params):
    genset = get_genset(params)
    t = Trajectory(Mat3.identity(), [0, 10 ** 6], genset)
    report = verify_trajectory(t, Mat3.identity(), params)
    assert not report.steps_valid
    assert "position 1" in report.error


def test_gammaL_identity_step(params):
    gamma = Mat3.E(2, 1, 2 ** 40)
    t = gammaL_word(gamma, 0, 0, params)
    assert len(t) == 0
    assert t.end() == gamma


def test_gammaL_word(params):
    gamma = Mat3.E(2, 1, 2 ** 40)
    t = gammaL_word(gamma, 1, 0, params)
    assert t.end() == gamma @ Mat3.E(1, 3, 1)
    for m, n in [(1000, -777), (2 ** 30, 5)]:
        t = gammaL_word(gamma, m, n, params)
        report = verify_trajectory(t, gamma @ Mat3.L(m, n), params)
        assert report.endpoint_match
        assert report.kappa_ok


def test_gammaL_needs_large_first_column(params):
    with pytest.raises(UsageError):
        gammaL_word(Mat3.E(1, 3, 2 ** 40), 1, 1, params)


def test_connect_to_M_on_M_element(params):
    t, u = connect_to_M(Mat3.M(3, -5), params)
    assert len(t) == 0
    assert u == (3, -5)


def test_connect_to_M_small(params):
    t, u = connect_to_M(Mat3.E(1, 3, 1), params)
    assert t.end() == Mat3.M(*u)
    assert verify_trajectory(t, Mat3.M(*u), params).endpoint_match


def test_connect_to_M_random_words(sl3z, params):
    for seed in (1, 2, 3):
        gamma = Mat3(sl3z.eval_word(sl3z.random_word(30, seed)).payload)
        t, u = connect_to_M(gamma, params)
        report = verify_trajectory(t, Mat3.M(*u), params)
        assert report.steps_valid and report.endpoint_match
        assert all(step.letters >= 0 for step in t.steps)


def test_connect_M_to_M_same_point(params):
    assert len(connect_M_to_M((4, 4), (4, 4), params)) == 0


def test_connect_M_to_M(params):
    t = connect_M_to_M((10, 0), (0, 10), params)
    assert t.start == Mat3.M(10, 0)
    assert t.end() == Mat3.M(0, 10)
    assert verify_trajectory(t, Mat3.M(0, 10), params).passed


def test_connect_equal_endpoints(params):
    alpha = Mat3.E(1, 2, 17)
    t, report = exteriorly_connect(alpha, alpha, params)
    assert len(t) == 0
    assert report.passed


def test_connect_large_M_elements(params):
    alpha, beta = Mat3.E(2, 1, BIG), Mat3.E(3, 1, BIG)
    t, report = exteriorly_connect(alpha, beta, params)
    assert report.steps_valid and report.endpoint_match
    assert not report.proxy_floor_hit
    assert report.kappa_achieved >= params.kappa_min
    assert report.passed


def test_trajectory_document_round_trip(params):
    t, report = exteriorly_connect(Mat3.E(1, 2, 5), Mat3.E(2, 3, -4), params)
    doc = json.loads(json.dumps(t.to_document(report)))
    again = trajectory_from_document(doc, params)
    assert again.word == t.word
    assert verify_trajectory(again, Mat3.E(2, 3, -4), params).passed
    doc["generators"] = doc["generators"][:-1]
    with pytest.raises(UsageError):
        trajectory_from_document(doc, params)


def test_trajectory_concatenation_checks_endpoints(params):
    a = TrajectoryBuilder(Mat3.identity(), params).trajectory()
    b = TrajectoryBuilder(Mat3.E(1, 2, 1), params).trajectory()
    with pytest.raises(UsageError):
        a.then(b)


def test_stress_small(params):
    report = sl3_stress(count=3, word_len=12, seed=7, params=params)
    assert report.is_valid, report.failures
    summary = report.summary()
    assert summary["passed"] == 3
    assert len(report.to_dataframe()) == 3


@pytest.mark.slow
def test_stress_acceptance(params):
    report = sl3_stress(count=200, word_len=40, seed=7, params=params)
    assert report.is_valid
    assert report.summary()["min_kappa_outside_floor"] is None or \
        report.summary()["min_kappa_outside_floor"] >= params.kappa_min


def test_gammaL_word_with_large_middle_row(params):
    gamma = Mat3.E(2, 1, 10 ** 6)
    t = gammaL_word(gamma, 17, -5, params)
    report = verify_trajectory(t, gamma @ Mat3.L(17, -5), params)
    assert report.passed
    assert report.kappa_achieved >= params.kappa_min


def test_connect_M_to_M_large(params):
    u, v = (2 ** 40, 1), (1, 2 ** 40)
    t = connect_M_to_M(u, v, params)
    report = verify_trajectory(t, Mat3.M(*v), params)
    assert report.passed
    assert report.length <= params.length_bound_C * (report.start_proxy + report.end_proxy + 1)


def test_block_compression_goes_through_gammaL(params):
    gamma = Mat3.M(2 ** 40, 0) @ Mat3.E(2, 3, 1000)
    t, u = connect_to_M(gamma, params)
    assert u == (2 ** 40, 0)
    assert [s.step for s in t.steps] == ["step10"]
    assert verify_trajectory(t, Mat3.M(*u), params).passed


def test_builder_extend_checks_start(params):
    piece = gammaL_word(Mat3.E(2, 1, 2 ** 40), 3, 0, params)
    builder = TrajectoryBuilder(Mat3.identity(), params)
    with pytest.raises(UsageError):
        builder.extend("step10", piece)
