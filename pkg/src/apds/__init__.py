"""Alternating pushdown systems: decision by saturation, with certificates."""

from .core import (
    APDSError, Atom, ParseError, Provenance, Rule, RuleKind, System, ValidationError,
    classify_rule, format_atom, instantiate, parse_atom, parse_config, parse_system,
    serialize_system,
)
from .proof import (
    Continuation, Hypothesis, Measure, ProofTree, check_proof, eliminate_cuts, find_cut,
    measure, reduce_cut, replay,
)
from .normalize import ErasureMap, erase_proof, to_small_step
from .saturate import expand_saturated_rule, extract_multi_automaton, saturate
from .complement import (
    NegationSystem, build_negation_extension, complement_rules, negate_automaton, one_step, tilde,
)
from .decide import Verdict, decide, extract_cut_free_proof, member
from .certify import ExpansionMap, build_expansion_map, hitting_index, schematic_provable, unfold
from .oracle import kleene, search

__all__ = [name for name in dir() if not name.startswith("_")]
