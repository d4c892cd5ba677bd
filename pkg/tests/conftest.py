import os

import pytest


def pytest_collection_modifyitems(config, items):
    if os.environ.get("BALMOD_LONG"):
        return
    if config.getoption("-m") and "long" in config.getoption("-m"):
        return
    skip = pytest.mark.skip(reason="set BALMOD_LONG=1 or pass -m long")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
