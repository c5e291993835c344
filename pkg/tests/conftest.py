import pytest


def pytest_configure(config):
    config.acceptance_results = {}


@pytest.fixture
def acceptance_log(request):
    return request.config.acceptance_results


def pytest_terminal_summary(terminalreporter, config):
    results = getattr(config, "acceptance_results", {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        status, title, detail = results[num]
        terminalreporter.write_line(f"{status} criterion {num}: {title} ({detail})")
