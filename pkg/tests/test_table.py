import time

from restrictomaton.table import load_ledger, load_table, table_diff


def test_fixture_shape():
    rows = load_table()
    assert [r.id for r in rows] == [f"T{i}" for i in range(1, 73)]
    assert len({r.rule for r in rows}) == 71  # one row is printed under a duplicate label
    assert rows[0].top == "GCAGCNN" and rows[0].bottom == "CGTCGNNCAGC"


def test_textually_identical_rows_are_ledgered():
    rows = {r.id: r for r in load_table()}
    assert (rows["T7"].top, rows["T7"].bottom) == (rows["T8"].top, rows["T8"].bottom) == (rows["T9"].top, rows["T9"].bottom)
    report = {r.row.id: r.status for r in table_diff().rows}
    assert report["T1"] == "exact"
    assert {report[i] for i in ("T7", "T8", "T9")} <= {"exact", "known-discrepancy"}
    assert [report[i] for i in ("T7", "T8", "T9")].count("exact") == 1


def test_partition_and_ledger():
    report = table_diff()
    c = report.counts
    assert sum(c.values()) == 72
    assert c["mismatch"] == 0 and report.ok
    ledger = load_ledger()
    ledgered = {r.row.id for r in report.rows if r.status == "known-discrepancy"}
    assert ledgered == set(ledger)
    assert {e.category for e in ledger.values()} == {"strand-count", "spacer", "label"}


def test_strand_count_rows_disagree_with_themselves():
    for r in table_diff().rows:
        if r.ledger and r.ledger.category == "strand-count":
            top_n, bottom_n = r.row.spacers
            assert top_n != bottom_n, r.row.id


def test_stable_and_fast():
    t0 = time.perf_counter()
    a = table_diff()
    assert time.perf_counter() - t0 < 1.0
    assert a == table_diff()
    assert a.format().splitlines()[-1].startswith("total 72:")
