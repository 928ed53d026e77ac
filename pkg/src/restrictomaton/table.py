"""The 72-row transition code table: fixture loading and comparison."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from importlib import resources

from .compiler import Layout, default_layout, encode_transition

_ROW = re.compile(r"5'-([ACGTN]+)-3'\s+3'-([ACGTN]+)-5'")


@dataclass(frozen=True)
class TableRow:
    id: str
    rule: tuple[str, str, str]
    top: str
    bottom: str  # printed 3'->5', left to right

    @property
    def spacers(self) -> tuple[int, int]:
        return self.top.count("N"), self.bottom.count("N")


@dataclass(frozen=True)
class LedgerEntry:
    id: str
    category: str
    note: str


@dataclass(frozen=True)
class RowDiff:
    row: TableRow
    status: str  # exact | known-discrepancy | mismatch
    got_top: str
    got_bottom: str
    ledger: LedgerEntry | None = None

    @property
    def top_matches(self) -> bool:
        return self.got_top == self.row.top


@dataclass(frozen=True)
class DiffReport:
    rows: tuple[RowDiff, ...]

    @property
    def counts(self) -> Counter:
        return Counter(r.status for r in self.rows)

    @property
    def ok(self) -> bool:
        return self.counts["mismatch"] == 0

    def format(self) -> str:
        lines = []
        for r in self.rows:
            p, x, q = r.row.rule
            line = f"{r.row.id:<4} {p} -{x}-> {q}  {r.status:<17}"
            if r.status != "exact":
                line += f" table {r.row.top}/{r.row.bottom}  derived {r.got_top}/{r.got_bottom}"
            if r.ledger:
                line += f"  [{r.ledger.category}] {r.ledger.note}"
            lines.append(line)
        c = self.counts
        lines.append(
            f"total {len(self.rows)}: exact {c['exact']}, "
            f"known-discrepancy {c['known-discrepancy']}, mismatch {c['mismatch']} "
            f"(top strand agrees on {sum(r.top_matches for r in self.rows)})"
        )
        return "\n".join(lines)


def _data(name: str) -> str:
    return resources.files("restrictomaton").joinpath(f"data/{name}").read_text()


def load_table() -> list[TableRow]:
    rows = []
    for line in _data("table1.txt").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        rid, p, x, q, rest = line.split(None, 4)
        m = _ROW.search(rest)
        if not m:
            raise ValueError(f"bad table row: {line!r}")
        rows.append(TableRow(rid, (p, x, q), m[1], m[2]))
    return rows


def load_ledger() -> dict[str, LedgerEntry]:
    out = {}
    for line in _data("table1_ledger.txt").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        rid, category, note = line.split(None, 2)
        out[rid] = LedgerEntry(rid, category, note)
    return out


def table_diff(layout: Layout | None = None) -> DiffReport:
    layout = default_layout() if layout is None else layout
    ledger = load_ledger()
    diffs = []
    for row in load_table():
        top, bottom = encode_transition(*row.rule, layout).schematic.printed()
        if (top, bottom) == (row.top, row.bottom):
            diffs.append(RowDiff(row, "exact", top, bottom))
        elif row.id in ledger:
            diffs.append(RowDiff(row, "known-discrepancy", top, bottom, ledger[row.id]))
        else:
            diffs.append(RowDiff(row, "mismatch", top, bottom))
    return DiffReport(tuple(diffs))
