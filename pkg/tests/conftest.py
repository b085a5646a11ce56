import pytest

from socialbroker import fixtures


@pytest.fixture
def org_a():
    """Registry and graph of the ten-organization partnership network."""
    return fixtures.build()


@pytest.fixture
def org():
    return fixtures.ORG


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    if call.when == "call":
        item.rep_call = outcome.get_result()


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[number])
