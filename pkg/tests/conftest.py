import pytest

from bcov33.lattice_fan import build_fan_pi, build_fan_sigma


@pytest.fixture(scope="session")
def fan_pi():
    return build_fan_pi()


@pytest.fixture(scope="session")
def fan_sigma():
    return build_fan_sigma()


@pytest.fixture(scope="session")
def chi_top_run(fan_pi):
    from bcov33.euler_top import total_chi_Y0

    return total_chi_Y0(fan_pi)


@pytest.fixture(scope="session")
def holo_run(fan_pi):
    from bcov33.euler_holo import holo_suite

    return holo_suite(fan_pi, guard=64)


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line per acceptance criterion."""
    lines = request.config.__dict__.setdefault("_acceptance_lines", [])

    def record(number, title, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else "")
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.__dict__.get("_acceptance_lines")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
