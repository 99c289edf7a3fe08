"""Tests for error types, logger and random streams"""

import logging

import numpy as np
import pytest

from expand_nets.utils.errors import CorruptionError, FormatError, ShapeError
from expand_nets.utils.logger import Logger, logger, set_verbosity
from expand_nets.utils.random_streams import StreamPurpose, random_stream


def test_error_messages():
    assert str(ShapeError("bad", 4)) == "Layer 4: bad"
    assert ShapeError("bad").layer_index is None
    assert str(FormatError("short file", 12)) == "short file (byte offset 12)"
    assert isinstance(CorruptionError("x"), FormatError)
    assert isinstance(FormatError("x"), ValueError)


def test_streams_depend_on_seed_purpose_and_keys():
    def draw(*args):
        return random_stream(*args).random(4)

    assert np.array_equal(draw(1, StreamPurpose.SHUFFLE, 3), draw(1, StreamPurpose.SHUFFLE, 3))
    assert not np.array_equal(draw(1, StreamPurpose.SHUFFLE, 3), draw(1, StreamPurpose.SHUFFLE, 4))
    assert not np.array_equal(draw(1, StreamPurpose.SHUFFLE), draw(1, StreamPurpose.AUGMENT))
    assert not np.array_equal(draw(1, StreamPurpose.SHUFFLE), draw(2, StreamPurpose.SHUFFLE))
    with pytest.raises(ValueError):
        random_stream(-1, StreamPurpose.SHUFFLE)


def test_logger_verbosity():
    previous = logger().level
    try:
        set_verbosity(verbose=True)
        assert logger().level == logging.DEBUG
        set_verbosity(quiet=True)
        assert logger().level == logging.WARNING
        set_verbosity()
        assert logger().level == logging.INFO
        with pytest.raises(ValueError):
            set_verbosity(True, True)
    finally:
        logger().setLevel(previous)
    assert logger() is Logger().logger
