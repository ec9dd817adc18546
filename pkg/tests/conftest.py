"""Shared fixtures for the GroDiv test suite."""

import sys

import pytest
from click.testing import CliRunner
from loguru import logger

from src.groups import get_group
from src.sl3 import default_params


@pytest.fixture(autouse=True)
def _restore_log_sink():
    # the CLI replaces the sink with the stream it sees at invocation time
    yield
    logger.remove()
    logger.add(sys.stderr, level="WARNING")


@pytest.fixture
def zd2():
    return get_group("zd:2")


@pytest.fixture
def free2():
    return get_group("free:2")


@pytest.fixture
def heis():
    return get_group("heis")


@pytest.fixture
def sl3z():
    return get_group("sl3z")


@pytest.fixture
def params():
    return default_params()


@pytest.fixture
def runner():
    return CliRunner()
