import pytest

from udk import catalog


class GroupCache:
    """Closed and verified catalog groups, shared across the session."""

    def __init__(self):
        self._g = {}

    def __call__(self, name):
        if name not in self._g:
            G = catalog.get_group(name).enumerate()
            catalog.verify(name, G)
            self._g[name] = G
        return self._g[name]

    def drop(self, name):
        self._g.pop(name, None)


@pytest.fixture(scope="session")
def groups():
    return GroupCache()


_LINES: list[str] = []


@pytest.fixture
def record():
    """Report one acceptance line; every line is repeated in the terminal summary."""

    def emit(number, passed, detail):
        status = passed if isinstance(passed, str) else ("PASS" if passed else "FAIL")
        line = f"criterion {number:>2}: {status:7s} {detail}"
        _LINES.append(line)
        print(line)

    return emit


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: closes groups of order above 10^4")
