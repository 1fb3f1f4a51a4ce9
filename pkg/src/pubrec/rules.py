"""Association-rule engine mapping user profiles to recommendation types.

A rule conditions on any combination of gender, an age range and one
activity-preference code, and yields one recommendation type. Matching a
profile against a rule set returns the union of consequents of every
firing rule, so the mapping is deliberately multi-valued (the default set
contains rows with identical conditions and different consequents).

Rule sets are data. The text format is one rule per line::

    gender=<0|1|*> age=<lo>..<hi>|>N pref=<code|*> => <type-code>

``age=0..10`` means the inclusive interval [0, 10]; ``age=>19`` means
strictly greater than 19. ``*`` means the condition is absent. The
shipped default file reproduces the built-in 24-rule table bit-exactly;
pass a different file to replace it without touching code.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Sequence

from .profiles import (
    ContextEvent,
    EventKind,
    UserProfile,
    is_valid_type_code,
    type_label,
)


class RuleParseError(ValueError):
    pass


@dataclass(frozen=True)
class AgeRange:
    """Inclusive [lower, upper] interval, or strict ``> lower`` when
    exclusive_lower is set (upper must then be None)."""

    lower: int
    upper: int | None = None
    exclusive_lower: bool = False

    def __post_init__(self) -> None:
        if self.exclusive_lower and self.upper is not None:
            raise ValueError("strict lower bound cannot carry an upper bound")
        if self.upper is not None and self.upper < self.lower:
            raise ValueError(f"empty age range: {self.lower}..{self.upper}")

    def contains(self, age: int) -> bool:
        if self.exclusive_lower:
            return age > self.lower
        if age < self.lower:
            return False
        return self.upper is None or age <= self.upper

    def __str__(self) -> str:
        if self.exclusive_lower:
            return f">{self.lower}"
        if self.upper is None:
            return f"{self.lower}.."
        return f"{self.lower}..{self.upper}"


@dataclass(frozen=True)
class AssociationRule:
    """One condition row: optional gender, age range, optional preference
    code, and the recommendation type it yields."""

    gender_cond: int | None
    age_range: AgeRange
    pref_cond: int | None
    consequent: int

    def __post_init__(self) -> None:
        if self.gender_cond not in (None, 0, 1):
            raise ValueError(f"gender condition must be 0, 1 or absent: {self.gender_cond}")
        if not is_valid_type_code(self.consequent):
            raise ValueError(f"consequent out of range: {self.consequent}")

    def matches(self, p: UserProfile) -> bool:
        if self.gender_cond is not None and p.gender_code != self.gender_cond:
            return False
        if not self.age_range.contains(p.age):
            return False
        if self.pref_cond is not None and self.pref_cond not in p.activity_prefs:
            return False
        return True


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[AssociationRule, ...]

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def with_rule(self, rule: AssociationRule) -> "RuleSet":
        return RuleSet(self.rules + (rule,))


_RULE_RE = re.compile(
    r"^gender=(?P<gender>[01*])\s+age=(?P<age>>\d+|\d+\.\.\d+)\s+"
    r"pref=(?P<pref>\d+|\*)\s+=>\s+(?P<type>\d+)$"
)


def parse_rule(line: str) -> AssociationRule:
    m = _RULE_RE.match(line.strip())
    if m is None:
        raise RuleParseError(f"unparseable rule line: {line!r}")
    gender = None if m["gender"] == "*" else int(m["gender"])
    age_text = m["age"]
    if age_text.startswith(">"):
        age = AgeRange(int(age_text[1:]), None, exclusive_lower=True)
    else:
        lo, hi = age_text.split("..")
        age = AgeRange(int(lo), int(hi))
    pref = None if m["pref"] == "*" else int(m["pref"])
    return AssociationRule(gender, age, pref, int(m["type"]))


def format_rule(rule: AssociationRule) -> str:
    gender = "*" if rule.gender_cond is None else str(rule.gender_cond)
    pref = "*" if rule.pref_cond is None else str(rule.pref_cond)
    return f"gender={gender} age={rule.age_range} pref={pref} => {rule.consequent}"


def parse_rules(text: str) -> RuleSet:
    """Parse a rule file body; blank lines and ``#`` comments are skipped."""
    rules = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rules.append(parse_rule(line))
    return RuleSet(tuple(rules))


def format_rules(rs: RuleSet) -> str:
    return "".join(format_rule(r) + "\n" for r in rs)


def load_rules(path) -> RuleSet:
    with open(path, encoding="utf-8") as f:
        return parse_rules(f.read())


def default_rules() -> RuleSet:
    """The built-in 24-rule table shipped with the package."""
    text = resources.files("pubrec.data").joinpath("default_rules.txt").read_text("utf-8")
    return parse_rules(text)


def match_rules(p: UserProfile, rs: RuleSet) -> set[int]:
    """Recommendation type codes of every rule whose conditions all hold.

    Duplicate consequents collapse; an empty result is legal.
    """
    return {rule.consequent for rule in rs if rule.matches(p)}


def rank_candidates(cands: Iterable[int], recent: Sequence[ContextEvent]) -> list[int]:
    """Order candidate type codes for presentation.

    Candidates whose label equals the genre of a recent program-watched
    event sort first; ties break by ascending code. Deterministic for
    identical inputs.
    """
    watched = {e.genre for e in recent if e.kind is EventKind.PROGRAM_WATCHED and e.genre}
    return sorted(set(cands), key=lambda c: (type_label(c) not in watched, c))
