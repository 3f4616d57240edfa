import contextlib
import os

import pytest

_CRITERIA = {}


def pytest_addoption(parser):
    parser.addoption(
        "--mc-trials",
        type=int,
        default=int(os.environ.get("L1LDP_MC_TRIALS", "1000")),
        help="trials per Monte-Carlo configuration in the acceptance suite (10000 for the full tier)",
    )


@pytest.fixture(scope="session")
def mc_trials(request):
    return request.config.getoption("--mc-trials")


@pytest.fixture
def criterion():
    """Context manager recording one PASS/FAIL line per acceptance criterion."""

    @contextlib.contextmanager
    def record(number, title):
        try:
            yield
        except BaseException as exc:
            _CRITERIA[number] = f"FAIL criterion {number}: {title} ({type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''})"
            raise
        else:
            _CRITERIA[number] = f"PASS criterion {number}: {title}"
        finally:
            print(_CRITERIA[number])

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        terminalreporter.write_line(_CRITERIA[number])
