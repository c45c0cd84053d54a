import pytest

# criterion number -> (passed, detail); filled in by test_acceptance
ACCEPTANCE = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    num = getattr(item.function, "criterion", None)
    if num is not None and rep.when == "call":
        detail = ACCEPTANCE.get(num, (None, ""))[1]
        ACCEPTANCE[num] = (rep.passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")
