import pytest

from causal_paths import kernelreg


@pytest.fixture(params=kernelreg.available_backends())
def backend(request):
    """Run a test once per available kernel backend."""
    previous = kernelreg.BACKEND
    kernelreg.set_backend(request.param)
    yield request.param
    kernelreg.set_backend(previous)


_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_report():
    """Collects one verdict line per acceptance criterion."""

    def report(number, title, passed, detail):
        line = f"criterion {number} [{'PASS' if passed else 'FAIL'}] {title}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
