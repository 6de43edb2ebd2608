import pytest

from lexstab.lexicon import FamilyDataset


def dataset_from_table(table, name="toy", languages=None, meanings=None):
    """``table[language][meaning]`` of form tuples (or None) -> FamilyDataset."""
    n, m = len(table), len(table[0])
    languages = languages or [f"lang{a}" for a in range(n)]
    meanings = meanings or [f"M{i}" for i in range(m)]
    entries = {(a, i): forms for a, row in enumerate(table) for i, forms in enumerate(row) if forms}
    return FamilyDataset(tuple(languages), tuple(meanings), entries, name)


@pytest.fixture
def hand_sun():
    return dataset_from_table(
        [[("mano",), ("sole",)], [("mano",), ("soleil",)]],
        languages=["Italian", "French"],
        meanings=["HAND", "SUN"],
    )


ACCEPTANCE = []


def record(criterion, ok, detail=""):
    """Log one acceptance line and fail the calling test if ``ok`` is false."""
    ACCEPTANCE.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
    assert ok, f"{criterion}: {detail}"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
