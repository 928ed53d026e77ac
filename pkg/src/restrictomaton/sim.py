"""One-pot ligate/cleave simulation over a multiset of duplex species.

The pot holds the input molecule, transition molecules and terminators, with
the two enzymes and ligase all active.  Transition molecules default to an
unbounded reservoir (count ``None``), standing in for molar excess.

A cleavage leaves one fragment still carrying the recognition site that was
just used.  That fragment is moved to ``byproducts``. It still counts toward
mass and shows up on the gel, but it takes no further part in reactions:
re-ligating it only rebuilds a substrate that is cut again at once.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Literal, Mapping, Sequence

from .compiler import CompiledMachine
from .enzymes import EnzymeSpec, SiteHit, cleave, cuttable_hits, load_registry, site_bearing_fragment
from .errors import AmbiguousStep, DepthExceeded
from .seq import Duplex, can_ligate, ligate

Species = tuple[tuple[Duplex, "int | None"], ...]


def _normalize(counts: Mapping[Duplex, int | None]) -> Species:
    return tuple(sorted(((d, n) for d, n in counts.items() if n is None or n > 0), key=lambda t: t[0].key))


@dataclass(frozen=True)
class Pot:
    species: Species
    enzymes: tuple[str, ...] = ("AcuI", "BbvI")
    ligase_active: bool = True
    byproducts: tuple[tuple[Duplex, int], ...] = ()
    terminators: frozenset[Duplex] = frozenset()
    drawn_bp: int = 0
    labels: Mapping[Duplex, str] = field(default_factory=dict, compare=False, hash=False)
    word: str = field(default="", compare=False)

    @classmethod
    def of(cls, counts: Mapping[Duplex, int | None], **kw) -> "Pot":
        return cls(_normalize(counts), **kw)

    def count(self, d: Duplex) -> int | None:
        for s, n in self.species:
            if s == d:
                return n
        return 0

    def label(self, d: Duplex) -> str:
        return self.labels.get(d) or f"frag{d.footprint}bp"

    def mass(self) -> int:
        """Footprint mass of finite species and byproducts, net of reservoir draws."""
        finite = sum(d.footprint * n for d, n in self.species if n is not None)
        return finite + sum(d.footprint * n for d, n in self.byproducts) - self.drawn_bp


@dataclass(frozen=True)
class Event:
    kind: Literal["ligation", "cleavage"]
    inputs: tuple[Duplex, ...]
    outputs: tuple[Duplex, ...]
    enzyme: str | None = None
    hit: SiteHit | None = None
    spent: int | None = None  # index into outputs of the site-bearing fragment

    @property
    def overhang_len(self) -> int:
        return len(self.inputs[0].right) if self.kind == "ligation" else 0

    def describe(self, labels: Mapping[Duplex, str] | None = None) -> str:
        labels = labels or {}
        names = [labels.get(d) or f"frag{d.footprint}bp" for d in self.inputs]
        if self.kind == "cleavage":
            return f"cleave({self.enzyme}, {names[0]})"
        return f"ligate({names[0]} + {names[1]})"


@dataclass(frozen=True)
class SimResult:
    accepted: bool
    halt_reason: Literal["terminator_ligated", "stalled", "depth_exceeded"]
    pot: Pot
    events: tuple[Event, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.accepted != (self.halt_reason == "terminator_ligated"):
            raise ValueError("accepted iff a terminator was ligated")

    @property
    def cleavages(self) -> int:
        return sum(e.kind == "cleavage" for e in self.events)

    @property
    def ligations(self) -> int:
        return sum(e.kind == "ligation" for e in self.events)

    def to_json(self) -> dict:
        labels = dict(self.pot.labels)
        out_events = []
        for e in self.events:
            for d in e.outputs:
                labels.setdefault(d, f"frag{d.footprint}bp")
            item = {
                "kind": e.kind,
                "species_in": [labels.get(d) or f"frag{d.footprint}bp" for d in e.inputs],
                "species_out": [labels[d] for d in e.outputs],
            }
            if e.enzyme:
                item["enzyme"] = e.enzyme
            out_events.append(item)
        return {
            "accepted": self.accepted,
            "halt_reason": self.halt_reason,
            "events": out_events,
            "bands": [{"length_bp": b.length_bp, "count": b.count} for b in gel_report(self.pot)],
        }


SIMRESULT_SCHEMA = {
    "type": "object",
    "required": ["accepted", "halt_reason", "events", "bands"],
    "additionalProperties": False,
    "properties": {
        "accepted": {"type": "boolean"},
        "halt_reason": {"enum": ["terminator_ligated", "stalled", "depth_exceeded"]},
        "events": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kind", "species_in", "species_out"],
                "additionalProperties": False,
                "properties": {
                    "kind": {"enum": ["ligation", "cleavage"]},
                    "enzyme": {"type": "string"},
                    "species_in": {"type": "array", "items": {"type": "string"}},
                    "species_out": {"type": "array", "items": {"type": "string"}},
                },
            },
        },
        "bands": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["length_bp", "count"],
                "additionalProperties": False,
                "properties": {
                    "length_bp": {"type": "integer", "minimum": 1},
                    "count": {"type": "integer", "minimum": 1},
                },
            },
        },
    },
}


def seed_pot(
    machine: CompiledMachine,
    word: str,
    fuel: int | None = None,
    terminator_count: int = 1,
) -> Pot:
    """Input (one copy), every transition molecule, and one terminator per final state."""
    counts: dict[Duplex, int | None] = {machine.input_molecule(word): 1}
    for d in machine.molecules.values():
        counts[d] = fuel
    for d in machine.terminators.values():
        counts[d] = terminator_count
    labels = {**machine.labels(), machine.input_molecule(word): "input"}
    enzymes = tuple(sorted({e.name for e in machine.layout.enzymes.values()}))
    return Pot.of(
        counts,
        enzymes=enzymes,
        terminators=frozenset(machine.terminators.values()),
        labels=labels,
        word=word,
    )


def enabled_events(
    pot: Pot, registry: Mapping[str, EnzymeSpec] | None = None
) -> list[Event]:
    """Every applicable cleavage, then every applicable ligation, in key order."""
    registry = load_registry() if registry is None else registry
    enzymes = [registry[n] for n in sorted(pot.enzymes)]
    events = []
    for d, _ in pot.species:
        for e in enzymes:
            for hit in cuttable_hits(d, e):
                left, right = cleave(d, e, hit)
                events.append(
                    Event("cleavage", (d,), (left, right), e.name, hit, site_bearing_fragment(hit))
                )
    if pot.ligase_active:
        rights = [(d, n) for d, n in pot.species if d.right.kind != "blunt"]
        lefts = [(d, n) for d, n in pot.species if d.left.kind != "blunt"]
        for a, na in rights:
            for b, nb in lefts:
                if a == b and na is not None and na < 2:
                    continue
                if can_ligate(a.right, b.left):
                    events.append(Event("ligation", (a, b), (ligate(a, b),)))
    return events


def apply_event(pot: Pot, event: Event) -> Pot:
    counts: dict[Duplex, int | None] = dict(pot.species)
    drawn = pot.drawn_bp
    for d in event.inputs:
        n = counts.get(d, 0)
        if n is None:
            drawn += d.footprint
        elif n < 1:
            raise ValueError(f"{pot.label(d)} is not present")
        else:
            counts[d] = n - 1
    waste = Counter(dict(pot.byproducts))
    for i, d in enumerate(event.outputs):
        if i == event.spent:
            waste[d] += 1
        elif counts.get(d, 0) is not None:
            counts[d] = counts.get(d, 0) + 1
    labels = pot.labels
    if event.kind == "ligation" and any(d in pot.terminators for d in event.inputs):
        labels = {**labels, event.outputs[0]: "accepted_product"}
    return Pot(
        _normalize(counts),
        pot.enzymes,
        pot.ligase_active,
        tuple(sorted(waste.items(), key=lambda t: t[0].key)),
        pot.terminators,
        drawn,
        labels,
        pot.word,
    )


def _is_acceptance(pot: Pot, event: Event) -> bool:
    return event.kind == "ligation" and any(d in pot.terminators for d in event.inputs)


def default_max_steps(word: str) -> int:
    return 4 * (len(word) + 2)


def run_deterministic(
    pot: Pot,
    max_steps: int | None = None,
    registry: Mapping[str, EnzymeSpec] | None = None,
) -> SimResult:
    registry = load_registry() if registry is None else registry
    max_steps = default_max_steps(pot.word) if max_steps is None else max_steps
    trace: list[Event] = []
    while True:
        events = enabled_events(pot, registry)
        if not events:
            return SimResult(False, "stalled", pot, tuple(trace))
        if len(events) > 1:
            raise AmbiguousStep(events)
        if len(trace) >= max_steps:
            raise DepthExceeded(SimResult(False, "depth_exceeded", pot, tuple(trace)))
        (event,) = events
        done = _is_acceptance(pot, event)
        pot = apply_event(pot, event)
        trace.append(event)
        if done:
            return SimResult(True, "terminator_ligated", pot, tuple(trace))


def _explore(pot: Pot, depth: int, registry, trace: tuple = ()) -> dict:
    results: dict[SimResult, SimResult] = {}
    best_budget: dict[Pot, int] = {}

    def visit(pot: Pot, trace: tuple):
        budget = depth - len(trace)
        if best_budget.get(pot, -1) >= budget:
            return
        best_budget[pot] = budget
        events = enabled_events(pot, registry)
        if not events:
            r = SimResult(False, "stalled", pot, trace)
        elif budget <= 0:
            r = SimResult(False, "depth_exceeded", pot, trace)
        else:
            for ev in events:
                new = apply_event(pot, ev)
                if _is_acceptance(pot, ev):
                    r = SimResult(True, "terminator_ligated", new, trace + (ev,))
                    results.setdefault(r, r)
                else:
                    visit(new, trace + (ev,))
            return
        results.setdefault(r, r)

    visit(pot, trace)
    return results


def _explore_branch(args):
    pot, depth, registry, trace = args
    return list(_explore(pot, depth, registry, trace).values())


def run_exhaustive(
    pot: Pot,
    depth: int | None = None,
    registry: Mapping[str, EnzymeSpec] | None = None,
    jobs: int = 1,
) -> set[SimResult]:
    """All outcomes over every event interleaving, up to ``depth`` events.

    Results compare by (verdict, halt reason, final pot), so the set holds one
    entry per distinct outcome.  ``jobs > 1`` explores first-level branches in
    worker processes; the merged set is the same.
    """
    registry = load_registry() if registry is None else registry
    depth = default_max_steps(pot.word) if depth is None else depth
    if jobs <= 1 or depth <= 0:
        return set(_explore(pot, depth, registry))
    events = enabled_events(pot, registry)
    if len(events) <= 1:
        return set(_explore(pot, depth, registry))
    out: set[SimResult] = set()
    tasks = []
    for ev in events:
        new = apply_event(pot, ev)
        if _is_acceptance(pot, ev):
            out.add(SimResult(True, "terminator_ligated", new, (ev,)))
        else:
            tasks.append((new, depth, dict(registry), (ev,)))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for rs in pool.map(_explore_branch, tasks):
            out.update(rs)
    return out


# -- gel ---------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class GelBand:
    length_bp: int
    count: int


def gel_report(pot: Pot) -> list[GelBand]:
    """Bands of finite species and byproducts, longest first.

    Unbounded reservoirs are left off the gel; same-length species share a band.
    """
    lengths: Counter = Counter()
    for d, n in pot.species:
        if n is not None:
            lengths[d.footprint] += n
    for d, n in pot.byproducts:
        lengths[d.footprint] += n
    return [GelBand(L, n) for L, n in sorted(lengths.items(), reverse=True)]


def render_gel(bands: Sequence[GelBand], width: int = 40, ladder_max: int = 1000) -> str:
    """ASCII gel: one row per band, bar length on a log scale, 100 bp ladder alongside."""
    rungs = list(range(100, ladder_max + 1, 100))
    top = max([b.length_bp for b in bands] + [ladder_max])

    def bar(length: int) -> str:
        return "=" * max(1, round(width * math.log(length) / math.log(top)))

    rows = [f"{'ladder':>8}  | sample"]
    marks = sorted({(r, "L") for r in rungs} | {(b.length_bp, "S") for b in bands}, reverse=True)
    counts = {b.length_bp: b.count for b in bands}
    for length, which in marks:
        if which == "L":
            rows.append(f"{length:>6}bp  |")
        else:
            rows.append(f"{'':>8}  | {bar(length)} {length} bp x{counts[length]}")
    return "\n".join(rows)
