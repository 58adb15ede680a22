import pytest

from primerace.cli import cli
from click.testing import CliRunner

_ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in _ACCEPTANCE:
        terminalreporter.write_line(line)


@pytest.fixture
def criterion(request):
    """Record one pass/fail line per acceptance criterion."""
    def record(label: str, ok: bool, detail: str = "") -> None:
        _ACCEPTANCE.append(f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else ""))
        assert ok, f"{label}: {detail}"
    return record


@pytest.fixture
def run_cli():
    runner = CliRunner()

    def run(*args, **kwargs):
        return runner.invoke(cli, [str(a) for a in args], catch_exceptions=False, **kwargs)
    return run
