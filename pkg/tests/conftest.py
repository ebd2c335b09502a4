from __future__ import annotations

import pytest

from prodquot.catalog import load_catalog

# criterion label -> list of (passed, detail); filled by the acceptance tests
ACCEPTANCE: dict[str, list[tuple[bool, str]]] = {}


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


@pytest.fixture
def acceptance():
    def record(label: str, passed: bool, detail: str = "") -> None:
        ACCEPTANCE.setdefault(label, []).append((bool(passed), detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for label in sorted(ACCEPTANCE, key=lambda s: (int(s.split()[0]), s)):
        results = ACCEPTANCE[label]
        ok = all(p for p, _ in results)
        details = "; ".join(d for _, d in results if d)
        tr.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {label}" + (f"  ({details})" if details else ""))
