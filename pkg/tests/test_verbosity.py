import logging

from crweier import verbosity
from crweier.verbosity import get_logger, level_for, sample_logger, setup_logging


def test_levels():
    assert level_for(0) == logging.WARNING
    assert level_for(1) == logging.INFO
    assert level_for(2) == logging.DEBUG
    assert level_for(5) == logging.DEBUG


def test_loggers_live_under_the_package_namespace():
    assert get_logger("suites").name == "crweier.suites"
    assert get_logger("crweier.frame").name == "crweier.frame"
    assert get_logger("crweier").name == "crweier"


def test_sample_logger_tags_messages():
    adapter = sample_logger(get_logger("sampling"), "sphere-a", 7)
    msg, _ = adapter.process("frame built", {})
    assert msg == "[sphere-a#7] frame built"


def test_setup_logging_updates_level_without_duplicate_handlers():
    setup_logging(2)
    root = logging.getLogger("crweier")
    handlers = list(root.handlers)
    assert root.level == logging.DEBUG
    setup_logging(0)
    assert root.level == logging.WARNING
    assert root.handlers == handlers
    assert verbosity._HANDLER in root.handlers
