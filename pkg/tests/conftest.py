import os

from hypothesis import HealthCheck, settings

SEED = 20240607

settings.register_profile(
    "ci",
    derandomize=True,
    deadline=None,
    max_examples=int(os.environ.get("ABELAUT_MAX_EXAMPLES", "60")),
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")

CRITERIA = {}  # filled by the acceptance tests


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        terminalreporter.write_line(f"criterion {k}: {'PASS' if CRITERIA[k] else 'FAIL'}")
