"""Social requirements: constraint/ranking data model and its text form.

Grammar (keywords case-insensitive, whitespace free-form)::

    query      := [constraint ("AND" constraint)*] ["RANK" "BY" rank ("," rank)*]
    constraint := within_hops(actor, int) | collaborated_with(actor)
                | min_degree(int) | connected_to(actor)
    rank       := (hops(actor) | degree | closeness | betweenness) [asc | desc]
    actor      := "consumer" | quoted UUID key

``consumer`` is bound to the requesting actor when the requirement is
evaluated. Without a RANK BY clause the ranking is ``hops(consumer) asc``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Any, Mapping, Union

from .errors import RangeError, RequirementSyntaxError, ValidationError
from .registry import is_key

CONSUMER = "consumer"


class Direction(enum.Enum):
    ASC = "asc"
    DESC = "desc"


@dataclass(frozen=True)
class WithinHops:
    anchor: str
    k: int


@dataclass(frozen=True)
class CollaboratedWith:
    anchor: str


@dataclass(frozen=True)
class MinDegree:
    n: int


@dataclass(frozen=True)
class ConnectedTo:
    anchor: str


SocialConstraint = Union[WithinHops, CollaboratedWith, MinDegree, ConnectedTo]


@dataclass(frozen=True)
class HopsTo:
    anchor: str


@dataclass(frozen=True)
class Degree:
    pass


@dataclass(frozen=True)
class Closeness:
    pass


@dataclass(frozen=True)
class Betweenness:
    pass


Metric = Union[HopsTo, Degree, Closeness, Betweenness]


def default_direction(metric: Metric) -> Direction:
    return Direction.ASC if isinstance(metric, HopsTo) else Direction.DESC


@dataclass(frozen=True)
class RankingCriterion:
    metric: Metric
    direction: Direction

    def __str__(self) -> str:
        return f"{_metric_text(self.metric)} {self.direction.value}"


DEFAULT_RANKING = (RankingCriterion(HopsTo(CONSUMER), Direction.ASC),)


@dataclass(frozen=True)
class SocialRequirement:
    """Conjunction of constraints plus a lexicographic ranking.

    An empty ranking is replaced by the default hop-distance ordering, so
    ``ranking`` is never empty.
    """

    constraints: tuple[SocialConstraint, ...] = ()
    ranking: tuple[RankingCriterion, ...] = DEFAULT_RANKING

    def __post_init__(self) -> None:
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "ranking", tuple(self.ranking) or DEFAULT_RANKING)


# --- serialization -------------------------------------------------------------

def _actor_text(anchor: str) -> str:
    return CONSUMER if anchor == CONSUMER else f'"{anchor}"'


def _metric_text(metric: Metric) -> str:
    if isinstance(metric, HopsTo):
        return f"hops({_actor_text(metric.anchor)})"
    return type(metric).__name__.lower()


def _constraint_text(c: SocialConstraint) -> str:
    if isinstance(c, WithinHops):
        return f"within_hops({_actor_text(c.anchor)}, {c.k})"
    if isinstance(c, CollaboratedWith):
        return f"collaborated_with({_actor_text(c.anchor)})"
    if isinstance(c, MinDegree):
        return f"min_degree({c.n})"
    if isinstance(c, ConnectedTo):
        return f"connected_to({_actor_text(c.anchor)})"
    raise TypeError(f"not a social constraint: {c!r}")


def serialize_social_requirement(req: SocialRequirement) -> str:
    """Canonical text; ``parse_social_requirement`` inverts it exactly."""
    rank = "RANK BY " + ", ".join(str(r) for r in req.ranking)
    if not req.constraints:
        return rank
    return " AND ".join(_constraint_text(c) for c in req.constraints) + " " + rank


# --- parsing ---------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<int>-?[0-9]+)
  | (?P<word>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<str>"[^"]*"|'[^']*')
  | (?P<punct>[(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # int | word | str | punct | end
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos] in "\"'":
                raise RequirementSyntaxError("unterminated string literal", pos)
            raise RequirementSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append(_Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


_CONSTRAINTS = {"within_hops", "collaborated_with", "min_degree", "connected_to"}
_METRICS = {"hops", "degree", "closeness", "betweenness"}


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def fail(self, expected: str) -> RequirementSyntaxError:
        tok = self.tok
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        return RequirementSyntaxError(f"expected {expected}, found {found}", tok.pos)

    def is_word(self, *words: str) -> bool:
        return self.tok.kind == "word" and self.tok.text.lower() in words

    def expect_word(self, word: str) -> None:
        if not self.is_word(word):
            raise self.fail(repr(word.upper()))
        self.i += 1

    def expect_punct(self, char: str) -> None:
        if self.tok.kind != "punct" or self.tok.text != char:
            raise self.fail(repr(char))
        self.i += 1

    def integer(self) -> int:
        tok = self.tok
        if tok.kind != "int":
            raise self.fail("non-negative integer")
        value = int(tok.text)
        if value < 0:
            raise RangeError(f"integer must be non-negative, got {value}", tok.pos)
        self.i += 1
        return value

    def actor(self) -> str:
        tok = self.tok
        if self.is_word(CONSUMER):
            self.i += 1
            return CONSUMER
        if tok.kind == "str":
            key = tok.text[1:-1].strip().lower()
            if not is_key(key):
                raise RequirementSyntaxError(f"malformed actor key {tok.text}", tok.pos)
            self.i += 1
            return key
        raise self.fail("'consumer' or a quoted actor key")

    def query(self) -> SocialRequirement:
        constraints = []
        if not self.is_word("rank") and self.tok.kind != "end":
            constraints.append(self.constraint())
            while self.is_word("and"):
                self.i += 1
                constraints.append(self.constraint())
        ranking = []
        if self.is_word("rank"):
            self.i += 1
            self.expect_word("by")
            ranking.append(self.rank())
            while self.tok.kind == "punct" and self.tok.text == ",":
                self.i += 1
                ranking.append(self.rank())
        if self.tok.kind != "end":
            raise self.fail("'AND', 'RANK BY' or end of input" if not ranking else "',' or end of input")
        return SocialRequirement(tuple(constraints), tuple(ranking))

    def constraint(self) -> SocialConstraint:
        if self.tok.kind != "word" or self.tok.text.lower() not in _CONSTRAINTS:
            raise self.fail("a constraint (within_hops, collaborated_with, min_degree, connected_to)")
        name = self.tok.text.lower()
        self.i += 1
        self.expect_punct("(")
        result: SocialConstraint
        if name == "within_hops":
            anchor = self.actor()
            self.expect_punct(",")
            result = WithinHops(anchor, self.integer())
        elif name == "collaborated_with":
            result = CollaboratedWith(self.actor())
        elif name == "min_degree":
            result = MinDegree(self.integer())
        else:
            result = ConnectedTo(self.actor())
        self.expect_punct(")")
        return result

    def rank(self) -> RankingCriterion:
        if self.tok.kind != "word" or self.tok.text.lower() not in _METRICS:
            raise self.fail("a metric (hops, degree, closeness, betweenness)")
        name = self.tok.text.lower()
        self.i += 1
        metric: Metric
        if name == "hops":
            self.expect_punct("(")
            metric = HopsTo(self.actor())
            self.expect_punct(")")
        else:
            metric = {"degree": Degree, "closeness": Closeness, "betweenness": Betweenness}[name]()
        direction = default_direction(metric)
        if self.is_word("asc", "desc"):
            direction = Direction(self.tok.text.lower())
            self.i += 1
        return RankingCriterion(metric, direction)


def parse_social_requirement(text: str) -> SocialRequirement:
    """Parse the textual requirement form.

    Raises ``RequirementSyntaxError`` (with ``position``) on malformed input
    and its subclass ``RangeError`` for negative integers.
    """
    if not isinstance(text, str):
        raise RequirementSyntaxError("requirement text must be a string", 0)
    return _Parser(text).query()


# --- JSON encoding ---------------------------------------------------------------

def requirement_to_json(req: SocialRequirement) -> dict[str, Any]:
    constraints = []
    for c in req.constraints:
        item: dict[str, Any] = {"type": _constraint_text(c).split("(")[0]}
        for name in ("anchor", "k", "n"):
            if hasattr(c, name):
                item[name] = getattr(c, name)
        constraints.append(item)
    ranking = []
    for r in req.ranking:
        item = {"metric": _metric_text(r.metric).split("(")[0], "direction": r.direction.value}
        if isinstance(r.metric, HopsTo):
            item["anchor"] = r.metric.anchor
        ranking.append(item)
    return {"constraints": constraints, "ranking": ranking}


def _anchor(value: Any) -> str:
    if value == CONSUMER:
        return CONSUMER
    if isinstance(value, str) and is_key(value.lower()):
        return value.lower()
    raise ValidationError(f"bad anchor {value!r}")


def _count(value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"expected an integer, got {value!r}")
    if value < 0:
        raise ValidationError(f"integer must be non-negative, got {value}")
    return value


def requirement_from_json(data: Mapping[str, Any]) -> SocialRequirement:
    try:
        constraints: list[SocialConstraint] = []
        for item in data.get("constraints", []):
            kind = item["type"]
            if kind == "within_hops":
                constraints.append(WithinHops(_anchor(item["anchor"]), _count(item["k"])))
            elif kind == "collaborated_with":
                constraints.append(CollaboratedWith(_anchor(item["anchor"])))
            elif kind == "min_degree":
                constraints.append(MinDegree(_count(item["n"])))
            elif kind == "connected_to":
                constraints.append(ConnectedTo(_anchor(item["anchor"])))
            else:
                raise ValidationError(f"unknown constraint type {kind!r}")
        ranking = []
        for item in data.get("ranking", []):
            name = item["metric"]
            metric: Metric
            if name == "hops":
                metric = HopsTo(_anchor(item["anchor"]))
            elif name in ("degree", "closeness", "betweenness"):
                metric = {"degree": Degree, "closeness": Closeness, "betweenness": Betweenness}[name]()
            else:
                raise ValidationError(f"unknown metric {name!r}")
            direction = Direction(item["direction"]) if "direction" in item else default_direction(metric)
            ranking.append(RankingCriterion(metric, direction))
    except (KeyError, TypeError, AttributeError, ValueError) as exc:
        raise ValidationError(f"malformed social requirement: {exc}") from None
    return SocialRequirement(tuple(constraints), tuple(ranking))
