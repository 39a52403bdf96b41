import pytest

from qheatnet import _kernels

# criterion number -> [title, list of (nodeid, passed, detail)]
_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.fixture(scope="session", autouse=True)
def _jit_warm():
    # compile outside any timed section
    _kernels.warm_up()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    entry = _ACCEPTANCE.setdefault(number, [title, []])
    detail = getattr(item, "acceptance_detail", "")
    entry[1].append((item.name, report.passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, runs = _ACCEPTANCE[number]
        ok = all(passed for _, passed, _ in runs)
        details = "; ".join(d for _, _, d in runs if d)
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
        if details:
            line += f" ({details})"
        terminalreporter.write_line(line)


@pytest.fixture
def report(request):
    """Attach a one-line measurement summary to the acceptance report."""

    def _set(text):
        prev = getattr(request.node, "acceptance_detail", "")
        request.node.acceptance_detail = f"{prev}, {text}" if prev else text

    return _set
