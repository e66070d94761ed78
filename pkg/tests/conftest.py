import pytest

from npce import reference


@pytest.fixture
def r1():
    return reference.r1()


@pytest.fixture
def r2():
    return reference.r2()


@pytest.fixture
def r3():
    return reference.r3()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    criterion = item.get_closest_marker("criterion")
    if criterion is not None and report.when == "call":
        label = criterion.args[0]
        callspec = getattr(item, "callspec", None)
        if callspec is not None:
            label = f"{label} [{callspec.id}]"
        report.user_properties.append(("criterion", label))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion label")


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            for name, label in getattr(rep, "user_properties", []):
                if name == "criterion":
                    lines.append((label, "PASS" if key == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for label, status in sorted(lines):
            terminalreporter.write_line(f"{status}  {label}")
