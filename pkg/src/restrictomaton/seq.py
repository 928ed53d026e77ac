"""Strands, duplexes with sticky ends, and ligation.

Strands are plain ``str`` objects over ``ACGTN`` read 5'->3'.  ``N`` is a
placeholder base that pairs only with another ``N``; it lets schematic
molecules be written exactly as they appear in design tables.

A :class:`Duplex` stores both strands 5'->3' plus one integer ``align``: the
top-strand coordinate opposite the bottom strand's 3'-terminal base.  The
bottom strand therefore covers coordinates ``[align, align + len(bottom))``
and its base ``j`` sits opposite top coordinate ``align + len(bottom) - 1 - j``.
Overhangs are derived from this, never stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Literal

from .errors import DuplexError, IncompatibleEnds, MismatchedPair, NoOverlap

BASES = "ACGTN"
_COMPLEMENT = str.maketrans("ACGTN", "TGCAN")

Side = Literal["left", "right"]
Kind = Literal["five_prime", "three_prime", "blunt"]


def complement(base: str) -> str:
    if len(base) != 1 or base not in BASES:
        raise ValueError(f"not a base: {base!r}")
    return base.translate(_COMPLEMENT)


def revcomp(strand: str) -> str:
    return strand.translate(_COMPLEMENT)[::-1]


def check_strand(strand: str) -> str:
    bad = set(strand) - set(BASES)
    if bad:
        raise ValueError(f"invalid bases {sorted(bad)} in strand {strand!r}")
    return strand


@dataclass(frozen=True)
class StickyEnd:
    side: Side
    kind: Kind
    seq: str = ""

    def __post_init__(self):
        if (self.kind == "blunt") != (self.seq == ""):
            raise ValueError("a sticky end is blunt iff it has no protruding bases")

    def __len__(self):
        return len(self.seq)


@dataclass(frozen=True, order=True)
class Duplex:
    top: str
    bottom: str
    align: int = 0

    def __post_init__(self):
        check_strand(self.top)
        check_strand(self.bottom)
        if not self.top or not self.bottom:
            raise DuplexError("both strands must be non-empty")
        lo, hi = self.paired_span
        if lo >= hi:
            raise NoOverlap(
                f"strands share no coordinate (top 0..{len(self.top)}, "
                f"bottom {self.align}..{self.align + len(self.bottom)})"
            )
        for c in range(lo, hi):
            t = self.top[c]
            b = self.bottom_at(c)
            if t != complement(b):
                raise MismatchedPair(f"{t}/{b} at coordinate {c}")

    @classmethod
    def blunt(cls, top: str) -> "Duplex":
        return cls(top, revcomp(top), 0)

    def bottom_at(self, coord: int) -> str:
        """Bottom-strand base opposite top coordinate ``coord``."""
        j = self.align + len(self.bottom) - 1 - coord
        if not 0 <= j < len(self.bottom):
            raise IndexError(coord)
        return self.bottom[j]

    @property
    def bottom_end(self) -> int:
        """One past the last coordinate covered by the bottom strand."""
        return self.align + len(self.bottom)

    @property
    def paired_span(self) -> tuple[int, int]:
        """Half-open coordinate range where both strands are present."""
        return max(0, self.align), min(len(self.top), self.bottom_end)

    @property
    def span(self) -> tuple[int, int]:
        return min(0, self.align), max(len(self.top), self.bottom_end)

    @property
    def footprint(self) -> int:
        lo, hi = self.span
        return hi - lo

    @cached_property
    def left(self) -> StickyEnd:
        return end_of(self, "left")

    @cached_property
    def right(self) -> StickyEnd:
        return end_of(self, "right")

    @property
    def key(self) -> tuple[str, str, int]:
        return (self.top, self.bottom, self.align)

    def printed(self) -> tuple[str, str]:
        """Two-row rendering: top 5'->3' and bottom 3'->5', both left to right.

        Rows are padded with spaces so that paired bases line up.
        """
        lo, _ = self.span
        top = " " * (0 - lo) + self.top
        bottom = " " * (self.align - lo) + self.bottom[::-1]
        return top.rstrip(), bottom.rstrip()

    def __str__(self):
        top, bottom = self.printed()
        return f"5'-{top}-3'\n3'-{bottom}-5'"


def duplex_from_strands(top: str, bottom: str, align: int) -> Duplex:
    return Duplex(top, bottom, align)


def end_of(d: Duplex, side: Side) -> StickyEnd:
    top_len = len(d.top)
    if side == "left":
        if d.align > 0:
            return StickyEnd("left", "five_prime", d.top[: d.align])
        if d.align < 0:
            return StickyEnd("left", "three_prime", d.bottom[len(d.bottom) + d.align :])
        return StickyEnd("left", "blunt")
    if side == "right":
        extra = top_len - d.bottom_end
        if extra > 0:
            return StickyEnd("right", "three_prime", d.top[d.bottom_end :])
        if extra < 0:
            return StickyEnd("right", "five_prime", d.bottom[:-extra])
        return StickyEnd("right", "blunt")
    raise ValueError(f"side must be 'left' or 'right', not {side!r}")


def can_ligate(e1: StickyEnd, e2: StickyEnd) -> bool:
    """Whether a right end ``e1`` and a left end ``e2`` anneal and can be sealed.

    Blunt ends never ligate, and partial or mismatched overhangs never do.
    """
    if e1.side != "right" or e2.side != "left":
        return False
    if e1.kind == "blunt" or e1.kind != e2.kind:
        return False
    return len(e1.seq) == len(e2.seq) and e2.seq == revcomp(e1.seq)


def ligate(a: Duplex, b: Duplex) -> Duplex:
    """Join ``b`` onto the right end of ``a`` and seal both nicks."""
    if not can_ligate(a.right, b.left):
        raise IncompatibleEnds(f"{a.right} cannot ligate to {b.left}")
    return Duplex(a.top + b.top, b.bottom + a.bottom, a.align)


# -- record serialization ---------------------------------------------------


def format_records(records: Iterable[tuple[str, Duplex]]) -> str:
    lines = []
    for name, d in records:
        lines += [f">{name}", f"T5 {d.top}", f"B5 {d.bottom}", f"ALIGN {d.align}"]
    return "\n".join(lines) + "\n"


def parse_records(text: str) -> list[tuple[str, Duplex]]:
    """Parse duplex records; ``#`` lines and blank lines are ignored."""
    lines = [
        (n, line.strip())
        for n, line in enumerate(text.splitlines(), 1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    out = []
    it: Iterator = iter(lines)
    for n, header in it:
        if not header.startswith(">"):
            raise ValueError(f"line {n}: expected '>name', got {header!r}")
        fields = {}
        for tag in ("T5", "B5", "ALIGN"):
            try:
                m, line = next(it)
            except StopIteration:
                raise ValueError(f"record {header[1:]!r} truncated, missing {tag}") from None
            got, _, value = line.partition(" ")
            if got != tag:
                raise ValueError(f"line {m}: expected {tag}, got {got!r}")
            fields[tag] = value.strip()
        out.append(
            (header[1:].strip(), Duplex(fields["T5"], fields["B5"], int(fields["ALIGN"])))
        )
    return out
