import pytest

from setm.hfset import enumerate_universe, seeded_chooser
from setm.tapecode import code_marking, encode_tree


def codes(sets, seeds=None):
    """Multi-component marking for ``sets``; one encoding seed per set."""
    seeds = seeds or [0] * len(sets)
    return code_marking([encode_tree(x, seeded_chooser(s)) for x, s in zip(sets, seeds)])


@pytest.fixture(scope="session")
def u2():
    return enumerate_universe(2)


@pytest.fixture(scope="session")
def u3():
    return enumerate_universe(3)


def random_code(rng, max_nodes):
    """Random basic code: grow a tree by adding first-free children."""
    paths, nodes = {()}, [()]
    target = rng.randint(1, max_nodes)
    while len(paths) < target:
        p = rng.choice(nodes)
        i = 0
        while p + (i,) in paths:
            i += 1
        paths.add(p + (i,))
        nodes.append(p + (i,))
    return frozenset(paths)


_ACCEPTANCE: dict = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" not in report.nodeid:
        return
    if report.when == "call" or report.failed:
        name = report.nodeid.split("::")[-1]
        _ACCEPTANCE[name] = _ACCEPTANCE.get(name, True) and report.passed


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{'PASS' if _ACCEPTANCE[name] else 'FAIL'}  {name}")
