"""Ordered orthographic rewrite rules mapping official Wolof to its informal form.

Application semantics
---------------------
Rules are grouped into three stages (``normalize`` < ``main`` < ``post``).
Each stage makes one left-to-right scan over its input: at every position the
first rule (in list order) whose pattern matches there wins, its replacement
is emitted, and scanning resumes after the matched span. Replacement text is
therefore never rescanned within its own stage, but the next stage sees it.

This is exactly what the published conversion pairs require: ``ë`` becomes
``eu`` without the fresh ``u`` being re-expanded to ``ou`` in the same pass,
while the following stage can still turn that ``ge`` into ``gue``.

Rules whose replacement starts with a letter carry case: an uppercase first
letter of the match uppercases the first letter of the replacement, and the
match itself is retried with the first character lowercased so that e.g. a
sentence-initial accented capital is still recognized.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import ParallelCorpus, Sentence
from .errors import RuleCompileError, RuleSchemaError

STAGES = ("normalize", "main", "post")


@dataclass(frozen=True)
class RewriteRule:
    stage: str
    pattern: str
    replacement: str
    case_carry: bool = False
    compiled: re.Pattern[str] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.stage not in STAGES:
            raise RuleSchemaError(f"unknown stage {self.stage!r}")
        try:
            compiled = re.compile(self.pattern)
        except re.error as exc:
            raise RuleCompileError(f"bad pattern {self.pattern!r}: {exc}") from exc
        _check_replacement(compiled, self.replacement)
        object.__setattr__(self, "compiled", compiled)

    def first_chars(self) -> set[str] | None:
        """Characters a match can start with, or None if undecidable."""
        chars = _leading_chars(self.pattern)
        if chars is not None and self.case_carry:
            chars = chars | {c.upper() for c in chars}
        return chars


def _check_replacement(compiled: re.Pattern[str], replacement: str) -> None:
    for m in re.finditer(r"\\(\d+)", replacement):
        if int(m.group(1)) > compiled.groups:
            raise RuleCompileError(
                f"replacement {replacement!r} references group {m.group(1)} "
                f"but pattern defines {compiled.groups}"
            )


def _leading_chars(pattern: str) -> set[str] | None:
    """Best-effort set of first characters matched by ``pattern``."""
    if not pattern:
        return None
    c = pattern[0]
    if c == "[":
        end = pattern.find("]", 1)
        if end < 0:
            return None
        body = pattern[1:end]
        if body.startswith("^") or "-" in body or "\\" in body:
            return None
        return set(body)
    if c == "\\":
        return None
    if c in "().^$*+?{|":
        return None
    return {c}


@dataclass(frozen=True)
class RewriteRuleSet:
    rules: tuple[RewriteRule, ...]
    name: str = ""
    version: str = ""

    def __post_init__(self) -> None:
        order = {s: i for i, s in enumerate(STAGES)}
        ranks = [order[r.stage] for r in self.rules]
        if ranks != sorted(ranks):
            raise RuleSchemaError("rules must be grouped normalize < main < post")

    def __len__(self) -> int:
        return len(self.rules)

    def stage(self, name: str) -> tuple[RewriteRule, ...]:
        return tuple(r for r in self.rules if r.stage == name)

    @property
    def stage_names(self) -> tuple[str, ...]:
        return tuple(s for s in STAGES if any(r.stage == s for r in self.rules))


# The built-in rule set. The main stage keeps its published order even though
# rules 5 (u before b/l/t) and 8 (word-final u) are shadowed by rule 4, which
# already consumes every u run.
_BEQI_V1_ROWS: tuple[tuple[str, str, str, bool], ...] = (
    ("normalize", "à", "a", True),
    ("normalize", "é", "e", True),
    ("normalize", "ó", "o", True),
    ("main", "ñ+", "gn", True),
    ("main", "ŋ+", "ng", True),
    ("main", "ë+", "eu", True),
    ("main", "u+", "ou", True),
    ("main", "u([blt]+)", "ou\\1", True),
    ("main", "q", "kh", True),
    ("main", "x", "kh", True),
    ("main", "u\\b", "ou", True),
    ("main", "c([aeiouy]+)", "th\\1", True),
    ("main", "cc\\b", "thie", True),
    ("main", "[Jj]([eao]{1,2})", "di\\1", True),
    ("main", "[Jj](i+)", "dj\\1", True),
    ("main", "[Jj](u+)", "dio\\1", True),
    ("main", "th([aeouy]+)", "thi\\1", True),
    ("post", " ([aeiou])\\b", "\\1", False),
    ("post", "g([ae])", "gu\\1", True),
)


def builtin_ruleset(name: str = "beqi-v1") -> RewriteRuleSet:
    """Return a built-in rule set by name (currently only ``beqi-v1``)."""
    if name != "beqi-v1":
        raise RuleSchemaError(f"unknown built-in rule set {name!r}")
    rules = tuple(
        RewriteRule(stage=s, pattern=p, replacement=r, case_carry=c)
        for s, p, r, c in _BEQI_V1_ROWS
    )
    return RewriteRuleSet(rules=rules, name="beqi-v1", version="1")


def parse_rule_lines(lines: list[str], name: str = "", version: str = "") -> RewriteRuleSet:
    """Parse ``stage<TAB>pattern<TAB>replacement[<TAB>flags]`` lines."""
    rules: list[RewriteRule] = []
    for lineno, line in enumerate(lines, start=1):
        stripped = line.rstrip("\n")
        if not stripped.strip() or stripped.lstrip().startswith("#"):
            continue
        cols = stripped.split("\t")
        if len(cols) < 3 or len(cols) > 4:
            raise RuleSchemaError(
                f"line {lineno}: expected 3 or 4 tab-separated columns, got {len(cols)}"
            )
        stage, pattern, replacement = cols[0], cols[1], cols[2]
        flags = cols[3].split(",") if len(cols) == 4 and cols[3] else []
        for flag in flags:
            if flag not in ("case_carry",):
                raise RuleSchemaError(f"line {lineno}: unknown flag {flag!r}")
        if stage not in STAGES:
            raise RuleSchemaError(f"line {lineno}: unknown stage {stage!r}")
        try:
            rule = RewriteRule(
                stage=stage,
                pattern=pattern,
                replacement=replacement,
                case_carry="case_carry" in flags,
            )
        except RuleCompileError as exc:
            raise RuleCompileError(
                f"rule {len(rules)} (line {lineno}): {exc}", rule_index=len(rules)
            ) from exc
        rules.append(rule)
    return RewriteRuleSet(rules=tuple(rules), name=name, version=version)


def compile_ruleset(spec_file: str | Path) -> RewriteRuleSet:
    """Compile a rule file into an ordered rule set."""
    path = Path(spec_file)
    lines = path.read_text(encoding="utf-8").split("\n")
    return parse_rule_lines(lines, name=path.stem)


def dump_ruleset(rules: RewriteRuleSet) -> str:
    """Render a rule set in the rule-file format accepted by compile_ruleset."""
    out = [f"# rule set {rules.name or '(unnamed)'} version {rules.version or '-'}"]
    for r in rules.rules:
        flags = "case_carry" if r.case_carry else ""
        out.append(f"{r.stage}\t{r.pattern}\t{r.replacement}\t{flags}")
    return "\n".join(out) + "\n"


def _match_at(rule: RewriteRule, text: str, i: int) -> tuple[re.Match[str] | None, bool]:
    """Try the rule at position i; returns (match, matched_on_lowered_copy)."""
    m = rule.compiled.match(text, i)
    if m is not None and m.end() > i:
        return m, False
    if rule.case_carry and text[i].isupper():
        lowered = text[:i] + text[i].lower() + text[i + 1 :]
        m = rule.compiled.match(lowered, i)
        if m is not None and m.end() > i:
            return m, True
    return None, False


@dataclass(frozen=True)
class ScanSegment:
    """Alignment record for one scan step: input span -> emitted text."""

    start: int
    end: int
    out: str
    rule: RewriteRule | None = None  # None for a copied character
    group: str | None = None  # text captured by group 1, if any


def _scan_stage_segments(
    text: str, stage_rules: tuple[RewriteRule, ...]
) -> list[ScanSegment]:
    # first_chars lets most positions skip a rule without a regex call.
    indexed = [(rule, rule.first_chars()) for rule in stage_rules]

    segments: list[ScanSegment] = []
    i = 0
    n = len(text)
    while i < n:
        hit = None
        for rule, chars in indexed:
            if chars is not None and text[i] not in chars:
                continue
            m, _ = _match_at(rule, text, i)
            if m is not None:
                rep = m.expand(rule.replacement)
                if rule.case_carry and text[i].isupper() and rep:
                    rep = rep[0].upper() + rep[1:]
                group = m.group(1) if rule.compiled.groups else None
                hit = ScanSegment(start=i, end=m.end(), out=rep, rule=rule, group=group)
                break
        if hit is None:
            segments.append(ScanSegment(start=i, end=i + 1, out=text[i]))
            i += 1
        else:
            segments.append(hit)
            i = hit.end
    return segments


def _scan_stage(text: str, stage_rules: tuple[RewriteRule, ...]) -> str:
    if not stage_rules or not text:
        return text
    return "".join(seg.out for seg in _scan_stage_segments(text, stage_rules))


def apply_text(text: str, rules: RewriteRuleSet) -> str:
    """Apply all stages of a rule set to raw text."""
    for stage in STAGES:
        stage_rules = rules.stage(stage)
        if stage_rules:
            text = _scan_stage(text, stage_rules)
    return text


def apply_rules(sentence: Sentence, rules: RewriteRuleSet) -> Sentence:
    """Apply the rule set to a sentence, preserving its id."""
    return Sentence(text=apply_text(sentence.text, rules), id=sentence.id)


def noise_corpus(targets: list[Sentence], rules: RewriteRuleSet) -> ParallelCorpus:
    """Pair each well-written sentence with its rewritten (noisy) form."""
    pairs = tuple((apply_rules(t, rules), t) for t in targets)
    return ParallelCorpus(pairs=pairs)
