"""Atoms, rules and alternating pushdown systems, plus the text format.

A configuration is written ``P(a b)``; an open atom over the single tail
variable is written ``P(a b x)``; the empty word is ``eps``.  Negative atoms
carry a leading ``!``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Iterator

TAIL = "x"
EPS = "eps"
TOKEN = re.compile(r"[A-Za-z0-9_#.~]+")
RULE_ID = re.compile(r"[A-Za-z0-9_#.~:]+")

Word = tuple[str, ...]


class APDSError(Exception):
    """Base class for contract violations raised by this package."""


class ParseError(APDSError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class ValidationError(APDSError):
    pass


def natural_key(ident: str) -> tuple:
    """Sort key comparing digit runs numerically, so ``i2 < i10``."""
    return tuple((0, int(p)) if p.isdigit() else (1, p) for p in re.split(r"(\d+)", ident) if p)


@dataclass(frozen=True, order=True)
class Atom:
    """``P(prefix x)`` when ``open``, else the configuration ``P(prefix)``."""

    state: str
    prefix: Word = ()
    open: bool = True
    negative: bool = False

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))

    @property
    def closed(self) -> bool:
        return not self.open

    def negate(self) -> Atom:
        return replace(self, negative=not self.negative)

    def positive(self) -> Atom:
        return replace(self, negative=False)

    def substitute(self, word: Iterable[str] = (), open: bool = True) -> Atom:
        """Replace the tail variable by ``word`` (followed by ``x`` if ``open``)."""
        if not self.open:
            return self
        return Atom(self.state, self.prefix + tuple(word), open, self.negative)

    def __str__(self) -> str:
        return format_atom(self)


def format_atom(a: Atom) -> str:
    syms = list(a.prefix)
    if a.open:
        syms.append(TAIL)
    body = " ".join(syms) if syms else EPS
    return f"{'!' if a.negative else ''}{a.state}({body})"


def instantiate(a: Atom, w: Iterable[str]) -> Atom:
    if not a.open:
        raise APDSError(f"cannot instantiate closed atom {a}")
    return a.substitute(w, open=False)


Subst = tuple[Word, bool]


def match(pattern: Atom, target: Atom) -> Subst | None:
    """Return the substitution ``(w, open)`` with ``pattern[x := w] == target``.

    Closed patterns only match themselves; the returned substitution is then
    the identity and is never used for open atoms (closed-conclusion rules
    have closed premises).
    """
    if pattern.state != target.state or pattern.negative != target.negative:
        return None
    if not pattern.open:
        return ((), True) if pattern == target else None
    n = len(pattern.prefix)
    if target.prefix[:n] != pattern.prefix:
        return None
    return target.prefix[n:], target.open


class RuleKind(enum.Enum):
    INTRO = "intro"
    EPS_INTRO = "eps-intro"
    ELIM = "elim"
    NEUTRAL = "neutral"
    GENERAL = "general"


@dataclass(frozen=True)
class Provenance:
    """Where a rule came from.

    ``origin`` is one of original, normalization, saturation, tilde,
    complementation.  Saturation records the combination ``case`` (1, 2 or 3)
    and ``parents``: the elim id then the intro id for case 1, the neutral id
    then one intro id per neutral premise for cases 2 and 3.
    """

    origin: str = "original"
    case: int | None = None
    parents: tuple[str, ...] = ()
    choice: tuple[int, ...] = ()

    def __str__(self) -> str:
        if self.origin == "saturation":
            head, rest = self.parents[0], self.parents[1:]
            return f"case{self.case}({head}; {','.join(rest)})"
        if self.origin == "complementation":
            return f"choice({','.join(map(str, self.choice))})"
        if self.parents:
            return f"{self.origin}({','.join(self.parents)})"
        return self.origin


ORIGINAL = Provenance()


@dataclass(frozen=True)
class Rule:
    id: str
    premises: tuple[Atom, ...]
    conclusion: Atom
    provenance: Provenance = field(default=ORIGINAL, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(sorted(set(self.premises))))

    @property
    def key(self) -> tuple[Atom, tuple[Atom, ...]]:
        """Identity modulo naming: conclusion plus canonical premise set."""
        return self.conclusion, self.premises

    @property
    def negative(self) -> bool:
        return self.conclusion.negative

    @property
    def kind(self) -> RuleKind:
        return classify_rule(self)

    def instance(self, s: Subst) -> tuple[Atom, list[Atom]]:
        w, o = s
        return self.conclusion.substitute(w, o), [p.substitute(w, o) for p in self.premises]

    def __str__(self) -> str:
        return f"{self.id}: {format_rule_body(self)}"


def format_rule_body(r: Rule) -> str:
    prem = ", ".join(map(format_atom, r.premises))
    return f"{prem} => {format_atom(r.conclusion)}" if prem else f"=> {format_atom(r.conclusion)}"


def classify_rule(r: Rule) -> RuleKind:
    c = r.conclusion
    if not c.open:
        if not c.prefix and not r.premises:
            return RuleKind.EPS_INTRO
        return RuleKind.GENERAL
    if any(not p.open for p in r.premises):
        return RuleKind.GENERAL
    lens = sorted(len(p.prefix) for p in r.premises)
    if len(c.prefix) == 1 and all(n == 0 for n in lens):
        return RuleKind.INTRO
    if not c.prefix:
        if all(n == 0 for n in lens):
            return RuleKind.NEUTRAL
        if lens[-1] == 1 and all(n == 0 for n in lens[:-1]):
            return RuleKind.ELIM
    return RuleKind.GENERAL


SMALL_STEP = frozenset({RuleKind.INTRO, RuleKind.EPS_INTRO, RuleKind.ELIM, RuleKind.NEUTRAL})
AUTOMATON = frozenset({RuleKind.INTRO, RuleKind.EPS_INTRO})


def head_premise(r: Rule) -> Atom:
    """The one-symbol premise of an elimination rule."""
    return next(p for p in r.premises if p.prefix)


def strict_violation(r: Rule) -> str | None:
    """Reason ``r`` is not an APDS rule in the strict input grammar, or None."""
    if any(not p.open for p in r.premises):
        return "closed premise"
    c = r.conclusion
    if not c.open and (c.prefix or r.premises):
        return "closed conclusion other than a premise-free Q(eps)"
    return None


@dataclass(frozen=True)
class System:
    name: str
    states: tuple[str, ...]
    stack: tuple[str, ...]
    rules: tuple[Rule, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "stack", tuple(self.stack))
        object.__setattr__(self, "rules", tuple(sorted(self.rules, key=lambda r: natural_key(r.id))))
        self._validate()

    def _validate(self):
        if set(self.states) & set(self.stack):
            raise ValidationError("state and stack alphabets overlap")
        if TAIL in self.stack or EPS in self.stack:
            raise ValidationError(f"'{TAIL}' and '{EPS}' are reserved and cannot be stack symbols")
        seen = set()
        for r in self.rules:
            if r.id in seen:
                raise ValidationError(f"duplicate rule id {r.id}")
            seen.add(r.id)
            check_rule_symbols(r, self.states, self.stack)

    @cached_property
    def by_id(self) -> dict[str, Rule]:
        return {r.id: r for r in self.rules}

    def rule(self, rid: str) -> Rule:
        try:
            return self.by_id[rid]
        except KeyError:
            raise APDSError(f"unknown rule id {rid}") from None

    def __contains__(self, rid: str) -> bool:
        return rid in self.by_id

    @cached_property
    def by_key(self) -> dict:
        out: dict = {}
        for r in self.rules:
            out.setdefault(r.key, r)
        return out

    @cached_property
    def _by_state(self) -> dict[tuple[str, bool], list[Rule]]:
        out: dict = {}
        for r in self.rules:
            out.setdefault((r.conclusion.state, r.negative), []).append(r)
        return out

    def matching(self, a: Atom) -> Iterator[tuple[Rule, Subst]]:
        """Rules whose conclusion ``a`` instantiates, with the substitution."""
        for r in self._by_state.get((a.state, a.negative), ()):
            s = match(r.conclusion, a)
            if s is not None:
                yield r, s

    @cached_property
    def strict(self) -> bool:
        return all(strict_violation(r) is None for r in self.rules)

    @cached_property
    def klass(self) -> str:
        """One of general, small-step, saturated, multi-automaton, negation-extended."""
        if any(r.negative for r in self.rules):
            return "negation-extended"
        kinds = {r.kind for r in self.rules}
        if kinds <= AUTOMATON:
            return "multi-automaton"
        if not kinds <= SMALL_STEP:
            return "general"
        from .saturate import saturate

        return "saturated" if len(saturate(self).rules) == len(self.rules) else "small-step"

    @property
    def small_step(self) -> bool:
        return self.klass in ("small-step", "saturated", "multi-automaton")

    def with_rules(self, rules: Iterable[Rule], name: str | None = None,
                   states: Iterable[str] | None = None) -> System:
        return System(name or self.name, tuple(states) if states is not None else self.states,
                      self.stack, tuple(rules))

    def words(self, max_len: int) -> Iterator[Word]:
        """All words over the stack alphabet of length at most ``max_len``."""
        layer: list[Word] = [()]
        for _ in range(max_len + 1):
            yield from layer
            layer = [w + (g,) for w in layer for g in self.stack]

    def configurations(self, max_len: int, negative: bool = False) -> Iterator[Atom]:
        for w in self.words(max_len):
            for p in self.states:
                yield Atom(p, w, False, negative)


def check_rule_symbols(r: Rule, states: Iterable[str], stack: Iterable[str]):
    states, stack = set(states), set(stack)
    pol = r.conclusion.negative
    for a in (*r.premises, r.conclusion):
        if a.state not in states:
            raise ValidationError(f"rule {r.id}: undeclared state {a.state}")
        for g in a.prefix:
            if g not in stack:
                raise ValidationError(f"rule {r.id}: undeclared stack symbol {g}")
        if a.negative != pol:
            raise ValidationError(f"rule {r.id}: premise/conclusion polarity mixed")
    if not r.conclusion.open and any(p.open for p in r.premises):
        raise ValidationError(f"rule {r.id}: closed conclusion with open premise")


# ---------------------------------------------------------------- text format


class _Cursor:
    def __init__(self, text: str, line: int, offset: int = 0):
        self.text = text
        self.pos = offset
        self.line = line

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.line, self.pos + 1)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, s: str) -> bool:
        self.skip()
        return self.text.startswith(s, self.pos)

    def expect(self, s: str):
        if not self.peek(s):
            raise self.error(f"expected '{s}'")
        self.pos += len(s)

    def token(self, pattern=TOKEN, what="identifier") -> str:
        self.skip()
        m = pattern.match(self.text, self.pos)
        if not m:
            raise self.error(f"expected {what}")
        self.pos = m.end()
        return m.group()

    def at_end(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)

    def atom(self) -> Atom:
        neg = False
        if self.peek("!"):
            self.pos += 1
            neg = True
        state = self.token(what="state")
        self.expect("(")
        syms = []
        while not self.peek(")"):
            if self.at_end():
                raise self.error("unterminated atom, expected ')'")
            syms.append(self.token(what="stack symbol"))
        self.expect(")")
        if not syms:
            raise self.error("empty argument; write eps for the empty word")
        if syms == [EPS]:
            return Atom(state, (), False, neg)
        if EPS in syms:
            raise self.error("eps cannot be combined with other symbols")
        if syms[-1] == TAIL:
            if TAIL in syms[:-1]:
                raise self.error("the tail variable may only occur last")
            return Atom(state, tuple(syms[:-1]), True, neg)
        if TAIL in syms:
            raise self.error("the tail variable may only occur last")
        return Atom(state, tuple(syms), False, neg)


def _strip_comment(line: str) -> str:
    # '#' is also a token character (fresh states P#a.b), so only a '#'
    # at the start of a token opens a comment.
    for i, ch in enumerate(line):
        if ch == "#" and (i == 0 or line[i - 1].isspace()):
            return line[:i]
    return line


def parse_atom(text: str, system: System | None = None, line: int | None = None) -> Atom:
    cur = _Cursor(text, line)
    a = cur.atom()
    if not cur.at_end():
        raise cur.error("trailing characters after atom")
    if system is not None:
        check_atom_symbols(a, system)
    return a


def parse_config(text: str, system: System | None = None) -> Atom:
    """Parse a closed atom such as ``S(a b)``."""
    a = parse_atom(text, system)
    if a.open:
        raise ParseError(f"configuration must be closed: {text}")
    return a


def check_atom_symbols(a: Atom, system: System):
    if a.state not in system.states:
        raise ValidationError(f"undeclared state {a.state}")
    for g in a.prefix:
        if g not in system.stack:
            raise ValidationError(f"undeclared stack symbol {g}")


def parse_rule_line(body: str, lineno: int | None = None, offset: int = 0) -> Rule:
    cur = _Cursor(body, lineno, offset)
    rid = cur.token(RULE_ID, "rule id")
    if rid.endswith(":"):
        rid = rid[:-1]
    else:
        cur.expect(":")
    if not rid:
        raise cur.error("empty rule id")
    premises = []
    if not cur.peek("=>"):
        premises.append(cur.atom())
        while cur.peek(","):
            cur.pos += 1
            premises.append(cur.atom())
    cur.expect("=>")
    conclusion = cur.atom()
    if not cur.at_end():
        raise cur.error("trailing characters after conclusion")
    return Rule(rid, tuple(premises), conclusion)


def parse_system(text: str, relaxed: bool = False) -> System:
    """Parse and validate the line-oriented system format.

    A ``mode relaxed`` line (or ``relaxed=True``) admits closed premises and
    closed non-empty conclusions, as produced by the tilde construction.
    """
    name = None
    states: list[str] | None = None
    stack: list[str] | None = None
    rules: list[tuple[int, Rule]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        cur = _Cursor(line, lineno)
        kw = cur.token(what="keyword")
        if kw == "system":
            if name is not None:
                raise cur.error("duplicate system header")
            name = cur.token(what="system name")
            if not cur.at_end():
                raise cur.error("trailing characters after system name")
        elif kw in ("states", "stack"):
            syms = []
            while not cur.at_end():
                syms.append(cur.token(what="symbol"))
            if kw == "states":
                states = syms
            else:
                stack = syms
        elif kw == "mode":
            mode = cur.token(what="mode")
            if mode != "relaxed" or not cur.at_end():
                raise cur.error("unknown mode")
            relaxed = True
        elif kw == "rule":
            if name is None or states is None or stack is None:
                raise cur.error("rule before system/states/stack header")
            rules.append((lineno, parse_rule_line(line, lineno, cur.pos)))
        else:
            raise ParseError(f"unknown keyword '{kw}'", lineno, 1)
    if name is None:
        raise ParseError("missing 'system <name>' header")
    states = states or []
    stack = stack or []
    seen = set()
    for lineno, r in rules:
        if r.id in seen:
            raise ParseError(f"duplicate rule id {r.id}", lineno)
        seen.add(r.id)
        try:
            check_rule_symbols(r, states, stack)
        except ValidationError as e:
            raise ParseError(str(e), lineno) from None
        if not relaxed:
            why = strict_violation(r)
            if why:
                raise ParseError(f"rule {r.id}: {why}", lineno)
    try:
        return System(name, tuple(states), tuple(stack), tuple(r for _, r in rules))
    except ValidationError as e:
        raise ParseError(str(e)) from None


def serialize_system(s: System) -> str:
    out = [f"system {s.name}", " ".join(["states", *s.states]), " ".join(["stack", *s.stack])]
    if not s.strict:
        out.append("mode relaxed")
    for r in s.rules:
        out.append(f"rule {r}")
    return "\n".join(out) + "\n"
