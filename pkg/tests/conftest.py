import pytest

from opfree.operad import builder_assoc, builder_com, builder_e0, builder_triv, e0_to_assoc, terminal_map


@pytest.fixture(scope="session")
def ops():
    """Shared operads at cap 5 so envelope caches are reused across tests."""
    e0, assoc, com, triv = builder_e0(5), builder_assoc(5), builder_com(5), builder_triv(5)
    return {
        "e0": e0, "assoc": assoc, "com": com, "triv": triv,
        "e0_assoc": e0_to_assoc(e0, assoc),
        "e0_com": terminal_map(e0, com),
        "assoc_com": terminal_map(assoc, com),
    }


@pytest.fixture(scope="session")
def small_ops():
    return {"e0": builder_e0(3), "assoc": builder_assoc(3), "com": builder_com(3), "triv": builder_triv(3)}


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = next((m for k, m in sys.modules.items() if k.endswith("test_acceptance")), None)
    lines = getattr(mod, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
