"""Classical two-symbol finite automata: the reference semantics.

File format, one directive per line, ``#`` starts a comment::

    states: s0 s1 s2
    initial: s0
    final: s2
    trans: s0 a s1
    trans: s1 b s2

Repeating ``trans`` lines for the same (state, symbol) gives a
nondeterministic automaton.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Literal

from .errors import AutomatonSyntaxError, NoInitial, NotDeterministic, UnknownState

ALPHABET = ("a", "b")
MAX_COMPILABLE_STATES = 6


@dataclass(frozen=True)
class Automaton:
    states: tuple[str, ...]
    initial: str
    finals: frozenset[str]
    transitions: tuple[tuple[str, str, str], ...]
    alphabet: tuple[str, ...] = ALPHABET

    def __post_init__(self):
        known = set(self.states)
        if len(known) != len(self.states):
            raise ValueError("duplicate state names")
        if self.initial not in known:
            raise UnknownState(f"initial state {self.initial!r} not declared")
        for q in self.finals:
            if q not in known:
                raise UnknownState(f"final state {q!r} not declared")
        for p, x, q in self.transitions:
            for s in (p, q):
                if s not in known:
                    raise UnknownState(f"transition {p} -{x}-> {q}: state {s!r} not declared")
            if x not in self.alphabet:
                raise ValueError(f"symbol {x!r} not in alphabet {self.alphabet}")
        object.__setattr__(self, "transitions", tuple(sorted(set(self.transitions))))

    def targets(self, state: str, symbol: str) -> frozenset[str]:
        return frozenset(q for p, x, q in self.transitions if p == state and x == symbol)

    @property
    def deterministic(self) -> bool:
        pairs = [(p, x) for p, x, _ in self.transitions]
        return len(pairs) == len(set(pairs))

    @property
    def compilable(self) -> bool:
        return len(self.states) <= MAX_COMPILABLE_STATES


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    trace: tuple[tuple[str, str], ...]
    halt_reason: Literal["consumed_all", "no_transition"]
    final_state: str | None = field(default=None)


def parse_automaton(text: str) -> Automaton:
    states: list[str] | None = None
    initial = None
    finals: list[str] = []
    trans = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise AutomatonSyntaxError(n, f"expected 'key: value', got {line!r}")
        key, args = key.strip(), rest.split()
        if key == "states":
            if not args:
                raise AutomatonSyntaxError(n, "no states listed")
            states = args
        elif key == "initial":
            if len(args) != 1:
                raise AutomatonSyntaxError(n, "exactly one initial state expected")
            initial = args[0]
        elif key == "final":
            finals.extend(args)
        elif key == "trans":
            if len(args) != 3:
                raise AutomatonSyntaxError(n, "trans needs <from> <symbol> <to>")
            if args[1] not in ALPHABET:
                raise AutomatonSyntaxError(n, f"symbol {args[1]!r} not in {{a, b}}")
            trans.append(tuple(args))
        else:
            raise AutomatonSyntaxError(n, f"unknown key {key!r}")
    if states is None:
        raise AutomatonSyntaxError(0, "missing 'states:' line")
    if initial is None:
        raise NoInitial("missing 'initial:' line")
    return Automaton(tuple(states), initial, frozenset(finals), tuple(trans))


def format_automaton(aut: Automaton) -> str:
    lines = [
        "states: " + " ".join(aut.states),
        f"initial: {aut.initial}",
        "final: " + " ".join(q for q in aut.states if q in aut.finals),
    ]
    lines += [f"trans: {p} {x} {q}" for p, x, q in aut.transitions]
    return "\n".join(lines) + "\n"


def run_dfa(aut: Automaton, word: Iterable[str]) -> Verdict:
    if not aut.deterministic:
        raise NotDeterministic("run_dfa needs at most one target per (state, symbol)")
    delta = {(p, x): q for p, x, q in aut.transitions}
    state = aut.initial
    trace = []
    for x in word:
        nxt = delta.get((state, x))
        if nxt is None:
            return Verdict(False, tuple(trace), "no_transition", state)
        trace.append((state, x))
        state = nxt
    return Verdict(state in aut.finals, tuple(trace), "consumed_all", state)


def run_nfa(aut: Automaton, word: Iterable[str]) -> bool:
    current = {aut.initial}
    for x in word:
        current = {q for p in current for q in aut.targets(p, x)}
        if not current:
            return False
    return bool(current & aut.finals)


def words(max_len: int, min_len: int = 1) -> list[str]:
    """All words over {a, b} with ``min_len <= len <= max_len``, shortest first."""
    return [
        "".join(w)
        for n in range(min_len, max_len + 1)
        for w in itertools.product(ALPHABET, repeat=n)
    ]


def random_automaton(
    seed: int,
    n_states: int,
    density: Literal["full", "partial"] = "full",
    deterministic: bool = True,
) -> Automaton:
    """Seeded generator for test sweeps.

    ``full`` defines every (state, symbol) pair; ``partial`` leaves each one
    undefined with probability 1/3.  Nondeterministic automata pick a random
    non-empty target set for each defined pair.
    """
    if not 1 <= n_states <= MAX_COMPILABLE_STATES:
        raise ValueError("n_states must be in 1..6")
    rng = random.Random(f"automaton:{seed}:{n_states}:{density}:{deterministic}")
    states = tuple(f"s{i}" for i in range(n_states))
    trans = []
    for p in states:
        for x in ALPHABET:
            if density == "partial" and rng.random() < 1 / 3:
                continue
            if deterministic:
                trans.append((p, x, rng.choice(states)))
            else:
                k = rng.randint(1, n_states)
                trans.extend((p, x, q) for q in rng.sample(states, k))
    initial = rng.choice(states)
    finals = frozenset(q for q in states if rng.random() < 0.5)
    return Automaton(states, initial, finals, tuple(trans))
