import logging

import pytest

from clinrisk.utils import logging_config


@pytest.fixture
def clinrisk_logger():
    logger = logging.getLogger("clinrisk")
    handlers, level = list(logger.handlers), logger.level
    yield logger
    for handler in list(logger.handlers):
        if handler not in handlers:
            logger.removeHandler(handler)
            handler.close()
    logger.setLevel(level)
    logging_config.set_run_context(None)


def test_configure_logging_writes_file(clinrisk_logger, tmp_path):
    path = tmp_path / "run.log"
    logging_config.configure_logging("info", str(path))
    logging_config.set_run_context("baseline/eta=0.2/seed=0", 3)
    logging.getLogger("clinrisk.harness.runner").info("selected 0.800")
    for handler in clinrisk_logger.handlers:
        handler.flush()
    text = path.read_text()
    assert "baseline/eta=0.2/seed=0: selected 0.800" in text
    assert "<ep   3>" in text
    assert "\x1b[" not in text


def test_reconfigure_replaces_handlers(clinrisk_logger):
    logging_config.configure_logging("warning")
    count = len(clinrisk_logger.handlers)
    logging_config.configure_logging("warning")
    assert len(clinrisk_logger.handlers) == count
    assert clinrisk_logger.level == logging.WARNING


@pytest.mark.parametrize(
    "no_format,expected", [(True, "x"), (False, "\x1b[91;1mx\x1b[0m")]
)
def test_style_string(no_format, expected):
    out = logging_config.style_string("x", no_format=no_format, color="RED", bold=True)
    assert out == expected
