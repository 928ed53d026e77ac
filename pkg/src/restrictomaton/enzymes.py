"""Type IIS restriction enzymes: recognition, cut geometry, cleavage, digests."""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Literal, Mapping, Sequence

from .errors import InertSite, InvalidHit, UnknownEnzyme
from .seq import Duplex, check_strand, revcomp

ENV_REGISTRY = "RESTRICTOMATON_ENZYMES"

Orientation = Literal["forward", "reverse"]


@dataclass(frozen=True)
class EnzymeSpec:
    """A Type IIS enzyme.

    ``cut_top`` and ``cut_bottom`` count nucleotides from the 3' end of the
    recognition site: ``cut_top`` along the strand carrying the site,
    ``cut_bottom`` along its complement.  BbvI, ``GCAGC(8/12)``, leaves a
    4-nt 5' overhang; AcuI, ``CTGAAG(16/14)``, a 2-nt 3' overhang.
    """

    name: str
    recognition: str
    cut_top: int
    cut_bottom: int

    def __post_init__(self):
        check_strand(self.recognition)
        if "N" in self.recognition or len(self.recognition) < 4:
            raise ValueError(f"{self.name}: recognition site must be >= 4 concrete bases")
        if self.cut_top < 0 or self.cut_bottom < 0:
            raise ValueError(f"{self.name}: cut offsets must be non-negative")

    @property
    def overhang_kind(self) -> str:
        return overhang_signature(self)[0]

    @property
    def overhang_len(self) -> int:
        return abs(self.cut_bottom - self.cut_top)

    @property
    def near_cut(self) -> int:
        """Offset of the cut closest to the site; the exposed window starts here."""
        return min(self.cut_top, self.cut_bottom)


def overhang_signature(e: EnzymeSpec) -> tuple[str, int]:
    if e.cut_bottom > e.cut_top:
        return "five_prime", e.cut_bottom - e.cut_top
    if e.cut_top > e.cut_bottom:
        return "three_prime", e.cut_top - e.cut_bottom
    return "blunt", 0


def parse_registry(text: str) -> dict[str, EnzymeSpec]:
    registry = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ValueError(f"registry line {n}: expected NAME RECOGNITION CUT_TOP CUT_BOTTOM")
        name, site, top, bottom = parts
        registry[name] = EnzymeSpec(name, site.upper(), int(top), int(bottom))
    return registry


def load_registry(path: str | os.PathLike | None = None) -> dict[str, EnzymeSpec]:
    """Load the enzyme registry.

    Precedence: explicit ``path``, then ``$RESTRICTOMATON_ENZYMES``, then the
    bundled ``data/enzymes.txt``.
    """
    if path is None:
        path = os.environ.get(ENV_REGISTRY)
    if path is not None:
        return parse_registry(Path(path).read_text())
    return _bundled_registry()


@lru_cache(maxsize=None)
def _bundled_registry() -> Mapping[str, EnzymeSpec]:
    text = resources.files("restrictomaton").joinpath("data/enzymes.txt").read_text()
    return parse_registry(text)


def lookup(names: Sequence[str], registry: Mapping[str, EnzymeSpec]) -> list[EnzymeSpec]:
    missing = [n for n in names if n not in registry]
    if missing:
        raise UnknownEnzyme(f"unknown enzyme(s): {', '.join(missing)}")
    return [registry[n] for n in names]


@dataclass(frozen=True, order=True)
class SiteHit:
    position: int
    orientation: Orientation


@lru_cache(maxsize=65536)
def find_sites(d: Duplex, e: EnzymeSpec) -> tuple[SiteHit, ...]:
    """Fully double-stranded occurrences of the site, sorted by position.

    A site (or part of one) lying in a single-stranded overhang is invisible.
    """
    lo, hi = d.paired_span
    region = d.top[lo:hi]
    r = len(e.recognition)
    hits = []
    rc = revcomp(e.recognition)
    for i in range(len(region) - r + 1):
        word = region[i : i + r]
        if word == e.recognition:
            hits.append(SiteHit(lo + i, "forward"))
        if word == rc:
            hits.append(SiteHit(lo + i, "reverse"))
    return tuple(hits)


def cut_boundaries(e: EnzymeSpec, hit: SiteHit) -> tuple[int, int]:
    """(top, bottom) cut boundaries: coordinates left of a boundary stay left."""
    r = len(e.recognition)
    if hit.orientation == "forward":
        return hit.position + r + e.cut_top, hit.position + r + e.cut_bottom
    # site on the bottom strand; it reads leftwards in top coordinates
    return hit.position - e.cut_bottom, hit.position - e.cut_top


def is_cuttable(d: Duplex, e: EnzymeSpec, hit: SiteHit) -> bool:
    lo, hi = d.paired_span
    return all(lo < b < hi for b in cut_boundaries(e, hit))


@lru_cache(maxsize=65536)
def cuttable_hits(d: Duplex, e: EnzymeSpec) -> tuple[SiteHit, ...]:
    return tuple(h for h in find_sites(d, e) if is_cuttable(d, e, h))


def cleave(d: Duplex, e: EnzymeSpec, hit: SiteHit) -> tuple[Duplex, Duplex]:
    if hit not in find_sites(d, e):
        raise InvalidHit(f"{e.name} has no {hit.orientation} site at {hit.position}")
    if not is_cuttable(d, e, hit):
        raise InertSite(
            f"{e.name} site at {hit.position} cannot cut: cut window leaves the paired region"
        )
    bt, bb = cut_boundaries(e, hit)
    split = d.bottom_end - bb
    left = Duplex(d.top[:bt], d.bottom[split:], d.align)
    right = Duplex(d.top[bt:], d.bottom[:split], bb - bt)
    return left, right


def site_bearing_fragment(hit: SiteHit) -> int:
    """Index (0 left, 1 right) of the cleavage product that keeps the site."""
    return 0 if hit.orientation == "forward" else 1


def digest(
    d: Duplex, enzymes: Sequence[EnzymeSpec], rng: random.Random | None = None
) -> list[Duplex]:
    """Cut until no cuttable site remains; fragments are returned left to right.

    By default the leftmost cuttable hit is cut first (forward before reverse,
    then registry order).  Passing ``rng`` picks a random cuttable hit at each
    step instead, which is how order independence is exercised.
    """
    hits = [(h, i) for i, e in enumerate(enzymes) for h in cuttable_hits(d, e)]
    if not hits:
        return [d]
    hits.sort()
    hit, i = rng.choice(hits) if rng is not None else hits[0]
    left, right = cleave(d, enzymes[i], hit)
    return digest(left, enzymes, rng) + digest(right, enzymes, rng)
