from __future__ import annotations

import pytest

from beauville.groups import Group, GroupSpec

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def ab5():
    return Group(GroupSpec.abelian(5))


@pytest.fixture(scope="session")
def ab7():
    return Group(GroupSpec.abelian(7))


@pytest.fixture(scope="session")
def split125():
    return Group(GroupSpec.split(5, 1, 1))


@pytest.fixture(scope="session")
def split3125():
    return Group(GroupSpec.split(5, 2, 1))


@pytest.fixture(scope="session")
def meta625():
    return Group(GroupSpec.metacyclic(5, 2, 1))


@pytest.fixture(scope="session")
def fused():
    return Group(GroupSpec.fused(5, 3, 2, 2, 1))


SMALL_SPECS = [
    GroupSpec.abelian(5),
    GroupSpec.abelian(7),
    GroupSpec.abelian(5, 2),
    GroupSpec.metacyclic(5, 2, 1),
    GroupSpec.metacyclic(5, 3, 2),
    GroupSpec.split(5, 1, 1),
    GroupSpec.split(5, 2, 1),
    GroupSpec.split(7, 1, 1),
    GroupSpec.fused(5, 3, 2, 2, 1),
]


@pytest.fixture(scope="session", params=SMALL_SPECS, ids=str)
def any_group(request):
    return Group(request.param)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
