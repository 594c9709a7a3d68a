"""Rule inversion and candidate lattices for noisy-channel correction.

``invert_ruleset`` turns a rewrite rule set into a finite table mapping
produced substrings back to the substrings that could have produced them.
``build_lattice`` then scans a noisy sentence and records, per position,
every candidate restoration as a weighted arc.

Inversion strategy, per rule:

* When a replacement reproduces its single capture verbatim at the end
  (``u([blt]+)`` -> ``ou\\1``), the capture is stripped from both sides and
  only the changed prefix is tabled (``ou`` <- ``u``). This keeps entries
  minimal and lets multi-rule rewrites be undone arc by arc.
* Otherwise classes and bounded quantifiers are enumerated literally;
  ``+`` is capped at ``max_run`` repetitions (doubled letters are the
  longest runs that occur in practice).
* Case-carrying rules contribute an uppercase-initial twin for every entry.
* A final pass replays each entry, padded with single-character probes,
  through the later stages and tables any rewrite that the existing entries
  cannot already explain. This captures stage interactions such as a
  produced ``ng`` whose ``g`` is then swallowed by ``g([ae])`` -> ``gu\\1``.

Rules that cannot be reduced to a finite entry set raise ``InversionError``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .corpus import Sentence
from .errors import InversionError
from .rules import (
    STAGES,
    RewriteRule,
    RewriteRuleSet,
    _scan_stage,
    _scan_stage_segments,
)

#: Upper bound on repetitions enumerated for ``+``-style quantifiers.
DEFAULT_MAX_RUN = 2

#: Probability mass an arc keeps for "this character is already correct".
DEFAULT_IDENTITY_PROB = 0.9

_MAX_INSTANCES = 256


@dataclass(frozen=True)
class Arc:
    """One lattice edge: consume ``span`` noisy chars, emit ``candidate``."""

    span: int
    candidate: str
    weight: float


@dataclass(frozen=True)
class CandidateLattice:
    text: str
    arcs: tuple[tuple[Arc, ...], ...]  # arcs[i] start at noisy position i

    def __post_init__(self) -> None:
        if len(self.arcs) != len(self.text):
            raise ValueError("one arc list per noisy position is required")

    def num_paths(self, cap: int = 10**9) -> int:
        """Count full paths through the lattice, saturating at ``cap``."""
        n = len(self.text)
        counts = [0] * (n + 1)
        counts[n] = 1
        for i in range(n - 1, -1, -1):
            total = 0
            for arc in self.arcs[i]:
                total += counts[i + arc.span]
                if total >= cap:
                    return cap
            counts[i] = total
        return counts[0]


@dataclass(frozen=True)
class InverseTable:
    """Maps produced substrings to weighted candidate source substrings."""

    entries: dict[str, dict[str, float]]
    identity_logp: float
    max_key_len: int

    def sources(self, key: str) -> dict[str, float]:
        return self.entries.get(key, {})


class _Atom:
    __slots__ = ("chars", "lo", "hi", "in_group")

    def __init__(self, chars: tuple[str, ...], lo: int, hi: int, in_group: bool):
        self.chars = chars
        self.lo = lo
        self.hi = hi
        self.in_group = in_group


def _parse_atoms(rule: RewriteRule, max_run: int) -> list[_Atom]:
    pattern = rule.pattern
    atoms: list[_Atom] = []
    i = 0
    in_group = False
    saw_group = False

    def fail(reason: str) -> InversionError:
        return InversionError(
            f"rule {rule.stage}:{rule.pattern!r}->{rule.replacement!r} "
            f"cannot be inverted: {reason}"
        )

    while i < len(pattern):
        c = pattern[i]
        if c == "(":
            if saw_group:
                raise fail("more than one capture group")
            in_group = True
            saw_group = True
            i += 1
            continue
        if c == ")":
            if not in_group:
                raise fail("unbalanced group")
            in_group = False
            i += 1
            if i < len(pattern) and pattern[i] in "+*?{":
                raise fail("quantified group")
            continue
        if c == "\\":
            if i + 1 >= len(pattern):
                raise fail("dangling escape")
            nxt = pattern[i + 1]
            if nxt == "b":
                i += 2
                continue  # boundary assertion: context only, no text
            if nxt.isalnum():
                raise fail(f"unsupported escape \\{nxt}")
            chars: tuple[str, ...] = (nxt,)
            i += 2
        elif c == "[":
            end = pattern.find("]", i)
            if end < 0:
                raise fail("unterminated class")
            body = pattern[i + 1 : end]
            if body.startswith("^") or "-" in body or "\\" in body:
                raise fail(f"unsupported class [{body}]")
            chars = tuple(sorted(set(body)))
            i = end + 1
        elif c in ".^$|*?":
            raise fail(f"unsupported construct {c!r}")
        elif c == "{":
            raise fail("quantifier without atom")
        else:
            chars = (c,)
            i += 1

        lo, hi = 1, 1
        if i < len(pattern):
            q = pattern[i]
            if q == "+":
                lo, hi = 1, max_run
                i += 1
            elif q == "{":
                end = pattern.find("}", i)
                if end < 0:
                    raise fail("unterminated quantifier")
                body = pattern[i + 1 : end]
                if "," in body:
                    a, b = body.split(",", 1)
                    lo = int(a)
                    hi = int(b) if b else max(lo, max_run)
                else:
                    lo = hi = int(body)
                i = end + 1
            elif q in "*?":
                raise fail(f"unsupported quantifier {q!r}")
        atoms.append(_Atom(chars, lo, hi, in_group))
    if in_group:
        raise fail("unterminated group")
    return atoms


def _expand(atoms: list[_Atom], rule: RewriteRule) -> list[str]:
    """Enumerate every literal string the atom sequence can match."""
    per_atom: list[list[str]] = []
    for atom in atoms:
        options: list[str] = []
        for count in range(atom.lo, atom.hi + 1):
            for combo in itertools.product(atom.chars, repeat=count):
                options.append("".join(combo))
        per_atom.append(options)
    total = 1
    for options in per_atom:
        total *= len(options)
        if total > _MAX_INSTANCES:
            raise InversionError(
                f"rule {rule.stage}:{rule.pattern!r}->{rule.replacement!r} "
                f"expands to more than {_MAX_INSTANCES} source strings"
            )
    return ["".join(parts) for parts in itertools.product(*per_atom)]


def _ucfirst(s: str) -> str:
    return s[0].upper() + s[1:] if s else s


def _rule_entries(rule: RewriteRule, max_run: int) -> set[tuple[str, str]]:
    """(produced key, source) pairs contributed by one rule."""
    atoms = _parse_atoms(rule, max_run)
    backrefs = rule.replacement.count("\\1")
    if "\\" in rule.replacement.replace("\\1", ""):
        raise InversionError(
            f"rule {rule.stage}:{rule.pattern!r}->{rule.replacement!r} "
            f"uses replacement escapes other than \\1"
        )
    pre = [a for a in atoms if not a.in_group]
    group = [a for a in atoms if a.in_group]

    pairs: set[tuple[str, str]] = set()
    if backrefs == 0:
        if group:
            # Captured but unused: the capture is consumed, so enumerate it.
            pre = atoms
        for source in _expand(pre, rule):
            pairs.add((rule.replacement, source))
    elif backrefs == 1 and rule.replacement.endswith("\\1") and group:
        lit = rule.replacement[:-2]
        if atoms and not atoms[-1].in_group:
            raise InversionError(
                f"rule {rule.stage}:{rule.pattern!r}->{rule.replacement!r} "
                f"reproduces its capture away from the pattern tail"
            )
        if lit:
            for source in _expand(pre, rule):
                pairs.add((lit, source))
        else:
            # Pure reordering around the capture (e.g. dropped separator):
            # instantiate the capture so keys stay non-empty.
            for g in _expand(group, rule):
                for p in _expand(pre, rule):
                    pairs.add((g, p + g))
    else:
        raise InversionError(
            f"rule {rule.stage}:{rule.pattern!r}->{rule.replacement!r} "
            f"has an unsupported replacement template"
        )

    if rule.case_carry:
        for key, source in list(pairs):
            up_src = _ucfirst(source)
            if up_src != source:
                pairs.add((_ucfirst(key), up_src))
            elif source and source[0].isupper():
                # Pattern matched the uppercase letter directly.
                pairs.discard((key, source))
                pairs.add((_ucfirst(key), source))
    return {(k, s) for k, s in pairs if k and k != s}


def _decomposable(key: str, source: str, table: dict[str, set[str]]) -> bool:
    """True if (key, source) is already explained by identity and ``table``."""
    nk, ns = len(key), len(source)
    reach = [[False] * (ns + 1) for _ in range(nk + 1)]
    reach[0][0] = True
    for i in range(nk + 1):
        for j in range(ns + 1):
            if not reach[i][j]:
                continue
            if i < nk and j < ns and key[i] == source[j]:
                reach[i + 1][j + 1] = True
            for k, sources in table.items():
                if key.startswith(k, i):
                    for s in sources:
                        if source.startswith(s, j):
                            reach[i + len(k)][j + len(s)] = True
    return reach[nk][ns]


def _probe_chars(stage_rules: tuple[RewriteRule, ...], max_run: int) -> set[str]:
    probes: set[str] = set()
    for rule in stage_rules:
        try:
            atoms = _parse_atoms(rule, max_run)
        except InversionError:
            continue
        for atom in atoms:
            probes.update(atom.chars)
    return probes


def _is_strip_shape(rule: RewriteRule, max_run: int) -> bool:
    """True when the rule reproduces its capture verbatim at the tail."""
    if not rule.replacement.endswith("\\1"):
        return False
    try:
        atoms = _parse_atoms(rule, max_run)
    except InversionError:
        return False
    return bool(atoms) and atoms[-1].in_group


def _probe_proposals(
    key: str,
    source: str,
    stage_rules: tuple[RewriteRule, ...],
    probe: str,
    max_run: int,
) -> set[tuple[str, str]]:
    """Composed entries revealed by scanning ``key`` next to one probe char.

    Only rewrites whose match crosses the key/probe boundary produce
    proposals; anything confined to one side is already covered elsewhere.
    """
    out: set[tuple[str, str]] = set()
    attempts = (
        (key + probe, len(key), False),
        (probe + key, len(probe), True),
    )
    for padded, boundary, prefix in attempts:
        segments = _scan_stage_segments(padded, stage_rules)
        crossing = [s for s in segments if s.start < boundary < s.end]
        if not crossing:
            continue
        t = "".join(s.out for s in segments)
        if prefix:
            out.add((t, probe + source))
        else:
            out.add((t, source + probe))
            seg = crossing[0]
            # When the crossing rule reproduced exactly the probe via its
            # capture, the probe keeps its own arcs: table the bare overlap.
            if (
                seg.rule is not None
                and seg.group == probe
                and t.endswith(probe)
                and _is_strip_shape(seg.rule, max_run)
            ):
                out.add((t[: -len(probe)], source))
    return out


def _compose_across_stages(
    pairs_with_stage: list[tuple[str, str, int]],
    rules: RewriteRuleSet,
    max_run: int,
) -> list[tuple[str, str, int]]:
    """Replay entries through later stages; table what is not yet explained."""
    all_pairs = list(pairs_with_stage)
    for ti, stage_name in enumerate(STAGES):
        stage_rules = rules.stage(stage_name)
        if not stage_rules:
            continue
        probes = _probe_chars(stage_rules, max_run)
        table: dict[str, set[str]] = {}
        for key, source, _ in all_pairs:
            table.setdefault(key, set()).add(source)
        proposals: set[tuple[str, str]] = set()
        for key, source, stage in all_pairs:
            if stage >= ti:
                continue
            base = _scan_stage(key, stage_rules)
            if base != key:
                proposals.add((base, source))
            for p in sorted(probes):
                proposals |= _probe_proposals(key, source, stage_rules, p, max_run)
        for key, source in sorted(proposals):
            if not key or key == source:
                continue
            if _decomposable(key, source, table):
                continue
            all_pairs.append((key, source, ti))
            table.setdefault(key, set()).add(source)
    return all_pairs


def invert_ruleset(
    rules: RewriteRuleSet,
    max_run: int = DEFAULT_MAX_RUN,
    identity_prob: float = DEFAULT_IDENTITY_PROB,
) -> InverseTable:
    """Build the produced-substring -> source-substring candidate table.

    Every key also maps to itself: the table always admits the unedited
    reading. Identity entries carry ``log(identity_prob)``; the remaining
    mass is shared uniformly by the non-identity candidates of the key.
    """
    if not 0.0 < identity_prob < 1.0:
        raise ValueError("identity_prob must lie strictly between 0 and 1")

    pairs_with_stage: list[tuple[str, str, int]] = []
    stage_index = {s: i for i, s in enumerate(STAGES)}
    for rule in rules.rules:
        for key, source in sorted(_rule_entries(rule, max_run)):
            pairs_with_stage.append((key, source, stage_index[rule.stage]))
    pairs_with_stage = _compose_across_stages(pairs_with_stage, rules, max_run)

    by_key: dict[str, set[str]] = {}
    for key, source, _ in pairs_with_stage:
        by_key.setdefault(key, set()).add(source)

    identity_logp = math.log(identity_prob)
    shared = 1.0 - identity_prob
    entries: dict[str, dict[str, float]] = {}
    for key in sorted(by_key):
        others = sorted(by_key[key] - {key})
        weights = {key: identity_logp}
        if others:
            w = math.log(shared / len(others))
            for source in others:
                weights[source] = w
        entries[key] = weights
    max_key_len = max((len(k) for k in entries), default=1)
    return InverseTable(
        entries=entries, identity_logp=identity_logp, max_key_len=max_key_len
    )


def build_lattice(noisy: Sentence, inverse: InverseTable) -> CandidateLattice:
    """Arcs for every table key matching at every position, plus identity."""
    text = noisy.text
    n = len(text)
    arc_lists: list[tuple[Arc, ...]] = []
    for i in range(n):
        best: dict[tuple[int, str], float] = {(1, text[i]): inverse.identity_logp}
        for length in range(1, min(inverse.max_key_len, n - i) + 1):
            key = text[i : i + length]
            for source, weight in inverse.sources(key).items():
                slot = (length, source)
                if weight > best.get(slot, -math.inf):
                    best[slot] = weight
        arcs = tuple(
            Arc(span=span, candidate=cand, weight=w)
            for (span, cand), w in sorted(best.items())
        )
        arc_lists.append(arcs)
    return CandidateLattice(text=text, arcs=tuple(arc_lists))
