"""Compile two-symbol automata (up to six states) into DNA molecules.

Six physical states are split into two classes by the enzyme that exposes
them.  States ``s0``-``s2`` are announced by a 4-nt 5' overhang cut by BbvI,
``s3``-``s5`` by a 2-nt 3' overhang cut by AcuI.  Every input symbol is a
6-nt block whose overlapping windows spell out the twelve <state, symbol>
codes. A transition molecule carries the enzyme of its destination state and
a spacer whose length moves the next cut onto the destination's window in the
following block.

Codes are written as they read left to right on the input: for BbvI states
on the bottom strand (so the top strand holds the complement), for AcuI
states on the top strand.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal, Mapping, Sequence

from .enzymes import (
    EnzymeSpec,
    cleave,
    cuttable_hits,
    find_sites,
    load_registry,
)
from .errors import InstantiationExhausted, NoConsistentLayout, NotCompilable
from .fsa import ALPHABET, Automaton
from .seq import Duplex, StickyEnd, can_ligate, complement, ligate, revcomp

SLOTS = ("s0", "s1", "s2", "s3", "s4", "s5")
END = "end"
SYMBOLS = ALPHABET + (END,)
FIVE_PRIME_STATES = ("s0", "s1", "s2")
THREE_PRIME_STATES = ("s3", "s4", "s5")
CLASS_ENZYME = {"C4": "BbvI", "C2": "AcuI"}
MAX_ATTEMPTS = 10_000
INITIATOR_PAD = 3
END_PAD = 10


def state_class(state: str) -> Literal["C4", "C2"]:
    if state in FIVE_PRIME_STATES:
        return "C4"
    if state in THREE_PRIME_STATES:
        return "C2"
    raise ValueError(f"{state!r} is not a physical state (s0..s5)")


@dataclass(frozen=True)
class PairCode:
    state: str
    symbol: str
    overhang: str
    kind: Literal["five_prime", "three_prime"]


_CODES = {
    ("s0", "a"): "CAGC", ("s1", "a"): "TCAG", ("s2", "a"): "ATCA",
    ("s0", "b"): "ACTA", ("s1", "b"): "GACT", ("s2", "b"): "CGAC",
    ("s3", "a"): "CG", ("s4", "a"): "TC", ("s5", "a"): "GT",
    ("s3", "b"): "AT", ("s4", "b"): "GA", ("s5", "b"): "TG",
}  # fmt: skip


def pair_codes() -> list[PairCode]:
    return [
        PairCode(q, x, code, "five_prime" if state_class(q) == "C4" else "three_prime")
        for (q, x), code in _CODES.items()
    ]


def read_code(end: StickyEnd) -> str:
    """Translate an input molecule's exposed left end back into code text."""
    if end.side != "left" or end.kind == "blunt":
        raise ValueError(f"not an exposure: {end}")
    if end.kind == "five_prime":
        return "".join(complement(b) for b in end.seq)
    return revcomp(end.seq)


@lru_cache(maxsize=None)
def _site_regex(site: str) -> re.Pattern:
    return re.compile(f"(?={site})")


def count_sites(seq: str, registry: Mapping[str, EnzymeSpec]) -> dict[str, int]:
    """Recognition-site occurrences (either orientation) in a fully paired sequence."""
    counts = {}
    for name, e in registry.items():
        n = sum(len(_site_regex(site).findall(seq)) for site in {e.recognition, revcomp(e.recognition)})
        if n:
            counts[name] = n
    return counts


@dataclass(frozen=True)
class Layout:
    """Symbol blocks (top strand), window offsets and the derived spacer rule."""

    block_len: int
    blocks: Mapping[str, str]
    window_offset: Mapping[str, int]
    end_pad: str
    enzymes: Mapping[str, EnzymeSpec]

    @property
    def a_block(self) -> str:
        return self.blocks["a"]

    @property
    def b_block(self) -> str:
        return self.blocks["b"]

    @property
    def end_block(self) -> str:
        return self.blocks[END] + self.end_pad

    def enzyme_for(self, state: str) -> EnzymeSpec:
        return self.enzymes[state_class(state)]

    def window_len(self, state: str) -> int:
        return self.enzyme_for(state).overhang_len

    def code(self, state: str, symbol: str) -> str:
        w, k = self.window_offset[state], self.window_len(state)
        text = self.blocks[symbol][w : w + k]
        if state_class(state) == "C4":
            return "".join(complement(b) for b in text)
        return text

    def spacer_len(self, src: str, dst: str) -> int:
        """Spacer between a transition's site and the window it binds."""
        shift = self.block_len + self.window_offset[dst] - self.window_offset[src]
        return self.enzyme_for(dst).near_cut - shift

    def initiator(self, state: str) -> str:
        """Leading input segment whose site exposes ``state`` in the first block.

        ``N`` positions are filled per input at encode time.
        """
        e = self.enzyme_for(state)
        filler = e.near_cut - self.window_offset[state]
        return "N" * INITIATOR_PAD + e.recognition + "N" * filler

    def input_text(self, word: str, initial: str) -> str:
        return self.initiator(initial) + "".join(self.blocks[x] for x in word) + self.end_block


def _place(block: list, start: int, text: str) -> str | None:
    for i, base in enumerate(text):
        cur = block[start + i]
        if cur is not None and cur != base:
            return f"{cur}/{base} clash at offset {start + i}"
        block[start + i] = base
    return None


def _class_enzymes(registry: Mapping[str, EnzymeSpec]) -> dict[str, EnzymeSpec]:
    return {cls: registry[name] for cls, name in CLASS_ENZYME.items()}


def derive_layout(
    registry: Mapping[str, EnzymeSpec] | None = None,
    codes: Sequence[PairCode] | None = None,
    max_block: int = 12,
) -> Layout:
    """Brute-force the smallest block length and window offsets fitting the codes.

    Among all solutions at the smallest block length the lexicographically
    least offset assignment (ordered s0..s5) is returned, so the result does
    not depend on search order.
    """
    registry = load_registry() if registry is None else registry
    codes = pair_codes() if codes is None else list(codes)
    enzymes = _class_enzymes(registry)
    by_key = {(c.state, c.symbol): c for c in codes}
    violated: list[str] = []

    for cls in ("C4", "C2"):
        states = FIVE_PRIME_STATES if cls == "C4" else THREE_PRIME_STATES
        for x in ALPHABET:
            texts = [by_key[q, x].overhang for q in states]
            if len(set(texts)) != len(texts):
                violated.append(f"codes for symbol {x} not distinct in class {cls}")
            if any(len(t) != enzymes[cls].overhang_len for t in texts):
                violated.append(f"class {cls} code length differs from {enzymes[cls].name}")
    if violated:
        raise NoConsistentLayout(violated)

    for L in range(1, max_block + 1):
        solutions = []
        k4, k2 = enzymes["C4"].overhang_len, enzymes["C2"].overhang_len
        for w4 in itertools.product(range(L - k4 + 1), repeat=3):
            for w2 in itertools.product(range(L - k2 + 1), repeat=3):
                offsets = dict(zip(FIVE_PRIME_STATES + THREE_PRIME_STATES, w4 + w2))
                blocks, why = {}, None
                for x in ALPHABET:
                    block: list = [None] * L
                    for q in SLOTS:
                        text = by_key[q, x].overhang
                        if state_class(q) == "C4":
                            text = "".join(complement(b) for b in text)
                        why = _place(block, offsets[q], text)
                        if why:
                            break
                    if why:
                        break
                    blocks[x] = "".join(b or "A" for b in block)
                if why:
                    violated.append(f"L={L} {offsets}: {why}")
                    continue
                trial = Layout(L, blocks, offsets, "", enzymes)
                bad = [
                    (p, q)
                    for p in SLOTS
                    for q in SLOTS
                    if trial.spacer_len(p, q) < 0
                ]
                if bad:
                    violated.append(f"L={L} {offsets}: negative spacer for {bad[0]}")
                    continue
                solutions.append((tuple(offsets[q] for q in SLOTS), blocks))
        if solutions:
            offs, blocks = min(solutions)
            offsets = dict(zip(SLOTS, offs))
            return _finish_layout(L, blocks, offsets, enzymes, registry)
    raise NoConsistentLayout(violated[-20:])


def _finish_layout(L, blocks, offsets, enzymes, registry) -> Layout:
    """Pick the end block and end pad: lexicographically least site-free choices."""
    used = {
        cls: {Layout(L, blocks, offsets, "", enzymes).code(q, x) for q in states for x in ALPHABET}
        for cls, states in (("C4", FIVE_PRIME_STATES), ("C2", THREE_PRIME_STATES))
    }
    for cand in itertools.product("ACGT", repeat=L):
        end = "".join(cand)
        trial = Layout(L, {**blocks, END: end}, offsets, "", enzymes)
        ok = True
        for cls, states in (("C4", FIVE_PRIME_STATES), ("C2", THREE_PRIME_STATES)):
            got = [trial.code(q, END) for q in states]
            if len(set(got)) != len(got) or used[cls] & set(got):
                ok = False
                break
        if not ok:
            continue
        texts = [blocks["a"], blocks["b"], end]
        joined = [u + v for u in texts for v in texts]
        if any(count_sites(j, registry) for j in joined):
            continue
        for pad in _pads():
            if not any(count_sites(t + end + pad, registry) for t in texts):
                return Layout(L, {**blocks, END: end}, offsets, pad, enzymes)
    raise NoConsistentLayout(["no site-free end block with distinct end codes"])


def _pads():
    for base in "ACGT":
        yield base * END_PAD
    rng = random.Random("end-pad")
    while True:
        yield "".join(rng.choice("ACGT") for _ in range(END_PAD))


_DEFAULT_LAYOUT: Layout | None = None


def default_layout() -> Layout:
    global _DEFAULT_LAYOUT
    if _DEFAULT_LAYOUT is None:
        _DEFAULT_LAYOUT = derive_layout()
    return _DEFAULT_LAYOUT


# -- transition molecules ---------------------------------------------------


@dataclass(frozen=True)
class TransitionMolecule:
    rule: tuple[str, str, str]
    schematic: Duplex
    enzyme: str

    @property
    def name(self) -> str:
        p, x, q = self.rule
        return f"T({p},{x},{q})"


def encode_transition(src: str, symbol: str, dst: str, layout: Layout) -> TransitionMolecule:
    e = layout.enzyme_for(dst)
    core = e.recognition + "N" * layout.spacer_len(src, dst)
    code = layout.code(src, symbol)
    if state_class(src) == "C4":
        # bottom strand protrudes: its 5' tail reads the code backwards
        d = Duplex(core, code[::-1] + revcomp(core), 0)
    else:
        d = Duplex(core + code, revcomp(core), 0)
    return TransitionMolecule((src, symbol, dst), d, e.name)


def _rng(seed) -> random.Random:
    return random.Random(str(seed))


def instantiate(
    d: Duplex,
    seed,
    registry: Mapping[str, EnzymeSpec] | None = None,
    expect: Mapping[str, int] | None = None,
    flanks: Sequence[str] = (),
) -> Duplex:
    """Replace every ``N`` with a concrete base, reproducibly from ``seed``.

    Candidates are drawn until the paired region carries exactly the sites in
    ``expect`` (name -> count, default: whatever the schematic already has)
    and nothing else from the registry, also when each of ``flanks`` is
    appended to the top strand.  Non-``N`` bases are never changed.
    """
    registry = load_registry() if registry is None else registry
    if "N" not in d.top and "N" not in d.bottom:
        return d
    if expect is None:
        expect = count_sites(_paired_text(d), registry)
    rng = _rng(seed)
    lo, hi = d.paired_span
    top_n = [i for i, b in enumerate(d.top) if b == "N"]
    lb = len(d.bottom)
    for _ in range(MAX_ATTEMPTS):
        top = list(d.top)
        for i in top_n:
            top[i] = rng.choice("ACGT")
        bottom = list(d.bottom)
        for j, b in enumerate(bottom):
            if b == "N":
                c = d.align + lb - 1 - j
                bottom[j] = complement(top[c]) if lo <= c < hi else rng.choice("ACGT")
        cand = Duplex("".join(top), "".join(bottom), d.align)
        if count_sites(_paired_text(cand), registry) != expect:
            continue
        if any(count_sites(cand.top + f, registry) != expect for f in flanks):
            continue
        return cand
    raise InstantiationExhausted(f"no site-clean instantiation after {MAX_ATTEMPTS} attempts")


def _paired_text(d: Duplex) -> str:
    lo, hi = d.paired_span
    return d.top[lo:hi]


def _flanks(layout: Layout, state: str, symbol: str) -> list[str]:
    """Top-strand text that follows a molecule once it is ligated at <state, symbol>."""
    start = layout.window_offset[state]
    if state_class(state) == "C2":
        start += layout.window_len(state)
    rest = layout.blocks[symbol][start:]
    if symbol == END:
        return [rest + layout.end_pad]
    out = [rest + layout.end_block]
    for y in ALPHABET:
        out += [rest + layout.blocks[y] + layout.blocks[z] for z in ALPHABET]
        out.append(rest + layout.blocks[y] + layout.end_block)
    return out


def instantiate_transition(
    m: TransitionMolecule, layout: Layout, seed, registry=None
) -> Duplex:
    p, x, _ = m.rule
    return instantiate(
        m.schematic, seed, registry, expect={m.enzyme: 1}, flanks=_flanks(layout, p, x)
    )


def encode_input(
    word: str,
    layout: Layout,
    seed,
    initial: str = "s0",
    registry: Mapping[str, EnzymeSpec] | None = None,
) -> Duplex:
    """Blunt input duplex: initiator, one block per symbol, then the end block."""
    if not word:
        raise ValueError("the empty word cannot be encoded; the machine reads at least one symbol")
    bad = set(word) - set(ALPHABET)
    if bad:
        raise ValueError(f"symbols {sorted(bad)} not in {{a, b}}")
    schematic = Duplex.blunt(layout.input_text(word, initial))
    return instantiate(
        schematic, f"{seed}:input:{initial}:{word}", registry,
        expect={layout.enzyme_for(initial).name: 1},
    )


def terminator_schematic(final_state: str, layout: Layout, tail_len: int) -> Duplex:
    tail = "N" * tail_len
    window = layout.blocks[END][layout.window_offset[final_state] :][
        : layout.window_len(final_state)
    ]
    if state_class(final_state) == "C4":
        return Duplex(tail, revcomp(window) + revcomp(tail), 0)
    return Duplex(tail + window, revcomp(tail), 0)


def encode_terminator(
    final_state: str,
    layout: Layout,
    tail_len: int = 60,
    seed=0,
    registry: Mapping[str, EnzymeSpec] | None = None,
) -> Duplex:
    """Capping molecule that only ligates to the <final_state, end> exposure."""
    schematic = terminator_schematic(final_state, layout, tail_len)
    return instantiate(
        schematic, f"{seed}:term:{final_state}", registry, expect={},
        flanks=_flanks(layout, final_state, END),
    )


# -- exposures and validation -----------------------------------------------


def exposure_fragment(layout: Layout, state: str, symbol: str, following: Sequence[str] = ()) -> Duplex:
    """The remnant of an input molecule exposing <state, symbol> at its left end."""
    text = layout.blocks[symbol] + "".join(layout.blocks[y] for y in following)
    text += layout.end_pad if (following and following[-1] == END) or symbol == END else layout.end_block
    w, k = layout.window_offset[state], layout.window_len(state)
    if state_class(state) == "C4":
        return Duplex(text[w:], revcomp(text[w + k :]), k)
    return Duplex(text[w + k :], revcomp(text[w:]), -k)


def step(layout: Layout, molecule: Duplex, enzyme: EnzymeSpec, remnant: Duplex) -> Duplex:
    """Ligate a molecule onto a remnant and cut once; returns the new remnant."""
    joined = ligate(molecule, remnant)
    hits = cuttable_hits(joined, enzyme)
    if len(hits) != 1:
        raise ValueError(f"expected one cuttable {enzyme.name} site, found {len(hits)}")
    return cleave(joined, enzyme, hits[0])[1]


@dataclass
class Check:
    name: str
    passed: bool = True
    failures: list[str] = field(default_factory=list)

    def fail(self, msg: str):
        self.passed = False
        self.failures.append(msg)


@dataclass
class ValidationReport:
    checks: list[Check]

    @property
    def errors(self) -> list[str]:
        return [f"{c.name}: {m}" for c in self.checks for m in c.failures]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def to_dict(self) -> dict:
        return {c.name: {"passed": c.passed, "failures": c.failures} for c in self.checks}


def slot_map(aut: Automaton) -> dict[str, str]:
    """Physical state for each automaton state: identity for s0..s5 names,
    otherwise declaration order."""
    if not aut.compilable:
        raise NotCompilable(f"not compilable: >6 states ({len(aut.states)})")
    if set(aut.states) <= set(SLOTS):
        return {q: q for q in aut.states}
    return dict(zip(aut.states, SLOTS))


def validate(
    aut: Automaton,
    layout: Layout,
    molecules: Mapping[tuple[str, str, str], Duplex] | None = None,
    terminators: Mapping[str, Duplex] | None = None,
    registry: Mapping[str, EnzymeSpec] | None = None,
) -> ValidationReport:
    """Run the encoding checks; failures are collected, never raised.

    Without concrete ``molecules`` the schematics are checked and the
    instantiation check is skipped.
    """
    registry = load_registry() if registry is None else registry
    slots = slot_map(aut)
    codes = Check("codes_distinct")
    exposure = Check("exposure_correctness")
    determinism = Check("determinism")
    crosstalk = Check("crosstalk")
    sites = Check("single_active_site")

    for cls, states in (("C4", FIVE_PRIME_STATES), ("C2", THREE_PRIME_STATES)):
        for x in SYMBOLS:
            got = [layout.code(q, x) for q in states]
            if len(set(got)) != len(got):
                codes.fail(f"class {cls}, symbol {x}: {got}")
        all_codes = [layout.code(q, x) for q in states for x in SYMBOLS]
        if len(set(all_codes)) != len(all_codes):
            codes.fail(f"class {cls}: codes repeat across symbols")

    phys = [(slots[p], x, slots[q], (p, x, q)) for p, x, q in aut.transitions]
    mols = {}
    for p, x, q, rule in phys:
        if molecules is not None:
            mols[rule] = molecules[rule]
        else:
            mols[rule] = encode_transition(p, x, q, layout).schematic

    for p, x, q, rule in phys:
        e = layout.enzyme_for(q)
        for y in SYMBOLS:
            remnant = exposure_fragment(layout, p, x, [y])
            try:
                new = step(layout, mols[rule], e, remnant)
                got = read_code(new.left)
            except Exception as exc:  # noqa: BLE001 - reported, not raised
                exposure.fail(f"{rule} then {y}: {exc}")
                continue
            want = layout.code(q, y)
            if got != want:
                exposure.fail(f"{rule} then {y}: exposed {got}, expected {want}")

    by_end: dict[StickyEnd, list] = {}
    for _, _, _, rule in phys:
        by_end.setdefault(mols[rule].right, []).append(rule)
    for end, rules in by_end.items():
        if len(rules) > 1:
            p, x, _ = rules[0]
            determinism.fail(f"exposure <{p},{x}> bound by {len(rules)} molecules: {rules}")

    exposures = {(q, y): exposure_fragment(layout, q, y).left for q in SLOTS for y in SYMBOLS}
    for p, x, q, rule in phys:
        for (s, y), left in exposures.items():
            if can_ligate(mols[rule].right, left) != ((s, y) == (p, x)):
                crosstalk.fail(f"{rule} vs exposure <{s},{y}>")
    finals = {slots[f] for f in aut.finals}
    for f in finals:
        term = (terminators or {}).get(f) or terminator_schematic(f, layout, 10)
        for (s, y), left in exposures.items():
            if can_ligate(term.right, left) != ((s, y) == (f, END)):
                crosstalk.fail(f"terminator {f} vs exposure <{s},{y}>")

    checks = [codes, exposure, determinism, crosstalk]
    if molecules is not None:
        for _, _, q, rule in phys:
            found = {
                name: len(find_sites(mols[rule], e))
                for name, e in registry.items()
                if find_sites(mols[rule], e)
            }
            if found != {layout.enzyme_for(q).name: 1}:
                sites.fail(f"{rule}: sites {found}")
            elif any(cuttable_hits(mols[rule], e) for e in registry.values()):
                sites.fail(f"{rule}: site cuts before ligation")
        for f, term in (terminators or {}).items():
            if any(find_sites(term, e) for e in registry.values()):
                sites.fail(f"terminator {f} carries a recognition site")
        checks.append(sites)
    return ValidationReport(checks)


# -- whole machines ----------------------------------------------------------


@dataclass
class CompiledMachine:
    automaton: Automaton
    layout: Layout
    seed: int
    slots: dict[str, str]
    transitions: dict[tuple[str, str, str], TransitionMolecule]
    molecules: dict[tuple[str, str, str], Duplex]
    terminators: dict[str, Duplex]
    report: ValidationReport
    registry: Mapping[str, EnzymeSpec]
    terminator_tail: int = 60

    @property
    def initial_slot(self) -> str:
        return self.slots[self.automaton.initial]

    def input_molecule(self, word: str) -> Duplex:
        return encode_input(word, self.layout, self.seed, self.initial_slot, self.registry)

    def labels(self) -> dict[Duplex, str]:
        out = {d: self.transitions[rule].name for rule, d in self.molecules.items()}
        out.update({d: f"term({q})" for q, d in self.terminators.items()})
        return out

    def manifest(self) -> dict:
        return {
            "automaton": {
                "states": list(self.automaton.states),
                "initial": self.automaton.initial,
                "finals": sorted(self.automaton.finals),
            },
            "seed": self.seed,
            "slots": self.slots,
            "rules": [
                {
                    "rule": list(rule),
                    "molecule": m.name,
                    "enzyme": m.enzyme,
                    "spacer_len": self.layout.spacer_len(self.slots[rule[0]], self.slots[rule[2]]),
                    "seed": f"{self.seed}:T:{':'.join(rule)}",
                }
                for rule, m in self.transitions.items()
            ],
            "terminators": {
                q: {"seed": f"{self.seed}:term:{q}", "tail_len": self.terminator_tail}
                for q in self.terminators
            },
            "input_encoder": {
                "initial_slot": self.initial_slot,
                "initiator": self.layout.initiator(self.initial_slot),
                "initiator_reconstructed": True,
                "blocks": dict(self.layout.blocks),
                "end_pad": self.layout.end_pad,
                "window_offset": dict(self.layout.window_offset),
            },
            "validation": {"ok": self.report.ok, "checks": self.report.to_dict()},
        }


def compile_machine(
    aut: Automaton,
    seed: int = 0,
    layout: Layout | None = None,
    registry: Mapping[str, EnzymeSpec] | None = None,
    terminator_tail: int = 60,
) -> CompiledMachine:
    registry = load_registry() if registry is None else registry
    layout = default_layout() if layout is None else layout
    slots = slot_map(aut)
    transitions, molecules = {}, {}
    for rule in aut.transitions:
        p, x, q = rule
        m = encode_transition(slots[p], x, slots[q], layout)
        transitions[rule] = m
        molecules[rule] = instantiate_transition(
            m, layout, f"{seed}:T:{':'.join(rule)}", registry
        )
    terminators = {
        slots[f]: encode_terminator(slots[f], layout, terminator_tail, seed, registry)
        for f in sorted(aut.finals)
    }
    report = validate(aut, layout, molecules, terminators, registry)
    return CompiledMachine(
        aut, layout, seed, slots, transitions, molecules, terminators, report, registry,
        terminator_tail,
    )
