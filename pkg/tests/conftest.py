from pathlib import Path

import pytest

from restrictomaton.compiler import compile_machine, default_layout
from restrictomaton.enzymes import load_registry
from restrictomaton.fsa import parse_automaton

DATA = Path(__file__).parent / "data"


def read_oligos():
    out = {}
    for line in (DATA / "oligos.txt").read_text().splitlines():
        if line.strip() and not line.startswith("#"):
            name, seq = line.split()
            out[name] = seq
    return out


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def oligos():
    return read_oligos()


@pytest.fixture(scope="session")
def registry():
    return load_registry()


@pytest.fixture(scope="session")
def acui(registry):
    return registry["AcuI"]


@pytest.fixture(scope="session")
def bbvi(registry):
    return registry["BbvI"]


@pytest.fixture(scope="session")
def layout():
    return default_layout()


@pytest.fixture(scope="session")
def parity():
    return parse_automaton((DATA / "parity.fsa").read_text())


@pytest.fixture(scope="session")
def experiment():
    return parse_automaton((DATA / "experiment.fsa").read_text())


@pytest.fixture(scope="session")
def experiment_machine(experiment):
    return compile_machine(experiment, seed=0)


@pytest.fixture(scope="session")
def parity_machine(parity):
    return compile_machine(parity, seed=0)


_ACCEPTANCE: list[str] = []


@pytest.fixture(scope="session")
def verdict():
    """Record one pass/fail line for an acceptance criterion."""

    def record(label: str, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
