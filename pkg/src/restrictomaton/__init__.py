"""Compile two-symbol finite automata into DNA molecules cut by Type IIS
enzymes (AcuI, BbvI), simulate the one-pot ligate/cleave reaction, and check
verdicts against the classical automaton."""

from .compiler import (
    CompiledMachine,
    Layout,
    compile_machine,
    default_layout,
    derive_layout,
    encode_input,
    encode_terminator,
    encode_transition,
    instantiate,
    pair_codes,
    validate,
)
from .enzymes import EnzymeSpec, cleave, digest, find_sites, load_registry, overhang_signature
from .fsa import Automaton, parse_automaton, random_automaton, run_dfa, run_nfa
from .seq import Duplex, StickyEnd, can_ligate, end_of, ligate, revcomp
from .sim import Pot, enabled_events, gel_report, run_deterministic, run_exhaustive, seed_pot
from .table import table_diff

__version__ = "0.1.0"

__all__ = [
    "Automaton",
    "CompiledMachine",
    "Duplex",
    "EnzymeSpec",
    "Layout",
    "Pot",
    "StickyEnd",
    "can_ligate",
    "cleave",
    "compile_machine",
    "default_layout",
    "derive_layout",
    "digest",
    "enabled_events",
    "encode_input",
    "encode_terminator",
    "encode_transition",
    "end_of",
    "find_sites",
    "gel_report",
    "instantiate",
    "ligate",
    "load_registry",
    "overhang_signature",
    "pair_codes",
    "parse_automaton",
    "random_automaton",
    "revcomp",
    "run_deterministic",
    "run_dfa",
    "run_exhaustive",
    "run_nfa",
    "seed_pot",
    "table_diff",
    "validate",
]
