from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

# -- acceptance report ---------------------------------------------------------
# tests named test_criterion_<N>_* in test_acceptance.py are grouped by N;
# a criterion passes only if every one of its tests passed.

_ACCEPTANCE: dict[int, list[bool]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        number = int(report.nodeid.split("::")[-1].split("_")[2])
        _ACCEPTANCE.setdefault(number, []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        outcomes = _ACCEPTANCE[number]
        verdict = "PASS" if all(outcomes) else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {verdict} ({sum(outcomes)}/{len(outcomes)} checks)")
