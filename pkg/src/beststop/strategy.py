"""Playable stopping strategies and their exact and simulated values.

A strategy watches the flattened prefixes of an interview order, one entry
at a time, and decides when to stop.  Four kinds are supported:

  strike      stop the moment the observed prefix is in a fixed set
  trigger     once the observed prefix is in a fixed set, accept the next
              candidate (the next entry that is a running maximum)
  positional  trigger after a fixed number of entries, regardless of what
              they were
  threshold   stop (or trigger) once the count of saturated top values
              reaches a bound that depends on how many entries remain

Strategies never look ahead: every decision is a function of the prefix
seen so far.
"""
from __future__ import annotations

from bisect import bisect_left, insort
from dataclasses import dataclass
from fractions import Fraction
from math import sqrt
from typing import Mapping, Sequence

from .closedform import ThresholdTable, continuation_triangle, optimal_boundary
from .errors import (
    DepthError,
    IncompleteStrategyError,
    InvalidInputError,
)
from .permutations import (
    DEFAULT_ENUM_CAP,
    PatternClass,
    Perm,
    enumerate_class,
    pattern_class,
    perm_from_str,
    perm_to_str,
    validate_permutation,
    value_saturated_count,
)
from .prefixtree import cached_tree
from .rng import SplitMix64
from .tallies import Tally

KINDS = ("strike", "trigger", "positional", "threshold")


@dataclass(frozen=True, eq=False)
class Strategy:
    """A stopping rule.  Which fields apply depends on kind:

    strike      members: the prefixes to stop at (ineligible full-length
                members mean a forced, losing stop)
    trigger     members: the prefixes that arm acceptance; () arms from
                the start
    positional  position: how many entries to let pass before accepting
                the next candidate (0 accepts the first entry)
    threshold   mode ("strike" or "trigger"), sigma, and optionally
                transport, a prefix relabeling applied before the
                saturated-count statistic is read off
    """

    kind: str
    members: frozenset[Perm] | None = None
    position: int | None = None
    mode: str | None = None
    sigma: ThresholdTable | None = None
    transport: Mapping[Perm, Perm] | None = None
    rank: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise InvalidInputError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.kind in ("strike", "trigger") and self.members is None:
            raise InvalidInputError(f"a {self.kind} strategy needs members")
        if self.kind == "positional" and (self.position is None or self.position < 0):
            raise InvalidInputError("a positional strategy needs position >= 0")
        if self.kind == "threshold" and (self.mode not in ("strike", "trigger") or self.sigma is None):
            raise InvalidInputError("a threshold strategy needs mode and sigma")

    def describe(self) -> str:
        if self.kind == "strike" or self.kind == "trigger":
            names = sorted(
                ("null" if p == () else perm_to_str(p) for p in self.members),
                key=lambda s: (s != "null", len(s), s),
            )
            return f"{self.kind}:{{{','.join(names)}}}"
        if self.kind == "positional":
            return f"positional:{self.position}"
        return f"threshold:{self.mode}"


@dataclass(frozen=True)
class Decision:
    """One step of play: what was seen and what the strategy did."""

    position: int
    prefix: Perm
    eligible: bool
    action: str  # "accept", "arm", or "pass"


@dataclass(frozen=True)
class PlayTrace:
    stop_position: int
    stopped_value_is_max: bool
    decisions: tuple[Decision, ...]


def _threshold_fires(s: Strategy, prefix: Perm, n: int) -> bool:
    k = len(prefix)
    i = n - k
    bound = s.sigma.get(i)
    if bound is None:
        # unresolved within the table's depth: the true bound exceeds
        # depth - i >= any column reachable at rank n <= depth
        return False
    if s.transport is not None:
        try:
            prefix = s.transport[prefix]
        except KeyError:
            raise InvalidInputError(
                f"prefix {prefix!r} is outside this strategy's transport map"
            ) from None
    return value_saturated_count(prefix) >= bound


def play(s: Strategy, pi: Sequence[int]) -> PlayTrace:
    """Run the strategy over one full interview order.

    The order is scanned left to right; only flattened prefixes are ever
    consulted.  A strike-kind strategy whose rule never fires on an order
    raises IncompleteStrategyError; trigger kinds that never accept lose
    by forced stop at the last position.
    """
    order = validate_permutation(pi)
    n = len(order)
    if n == 0:
        raise InvalidInputError("cannot play the empty order")
    if s.rank is not None and s.rank != n:
        raise InvalidInputError(f"strategy was built for rank {s.rank}, order has rank {n}")
    if s.kind == "threshold" and s.sigma.depth < n:
        raise DepthError(f"threshold table depth {s.sigma.depth} < rank {n}")

    strike_like = s.kind == "strike" or (s.kind == "threshold" and s.mode == "strike")
    decisions: list[Decision] = []
    armed = False

    if not strike_like:
        # the empty prefix may already arm acceptance
        if s.kind == "trigger" and () in s.members:
            armed = True
        elif s.kind == "positional" and s.position == 0:
            armed = True
        elif s.kind == "threshold" and _threshold_fires(s, (), n):
            armed = True
        decisions.append(Decision(0, (), False, "arm" if armed else "pass"))

    seen: list[int] = []
    running_max = 0
    for pos in range(1, n + 1):
        v = order[pos - 1]
        insort(seen, v)
        prefix = tuple(bisect_left(seen, w) + 1 for w in order[:pos])
        eligible = v > running_max
        if v > running_max:
            running_max = v

        if strike_like:
            fires = (
                prefix in s.members
                if s.kind == "strike"
                else eligible and _threshold_fires(s, prefix, n)
            )
            if fires:
                decisions.append(Decision(pos, prefix, eligible, "accept"))
                return PlayTrace(pos, v == n, tuple(decisions))
            decisions.append(Decision(pos, prefix, eligible, "pass"))
        else:
            if armed and eligible:
                decisions.append(Decision(pos, prefix, eligible, "accept"))
                return PlayTrace(pos, v == n, tuple(decisions))
            if not armed:
                if s.kind == "trigger":
                    fires = prefix in s.members
                elif s.kind == "positional":
                    fires = pos == s.position
                else:
                    fires = _threshold_fires(s, prefix, n)
                if fires:
                    armed = True
                    decisions.append(Decision(pos, prefix, eligible, "arm"))
                    continue
            decisions.append(Decision(pos, prefix, eligible, "pass"))

    if s.kind == "strike":
        raise IncompleteStrategyError(
            f"strike set never fired on {perm_to_str(order)}; the set does not cover it"
        )
    return PlayTrace(n, False, tuple(decisions))


def threshold_strategy(
    mode: str,
    cls: PatternClass | str,
    n: int,
    depth: int | None = None,
    direct_statistic: bool = False,
) -> Strategy:
    """The saturated-count threshold strategy for the 321-avoiding game,
    or its transport along the tree correspondence for the 312-avoiding
    game.  direct_statistic=True skips the transport and reads the
    statistic off the observed prefix itself (a negative control; it
    falls behind the transported strategy from rank 7 on)."""
    cl = pattern_class(cls) if isinstance(cls, str) else cls
    if cl.name not in ("321", "312"):
        raise InvalidInputError(
            "threshold strategies are defined for the 321- and 312-avoiding games"
        )
    if mode not in ("strike", "trigger"):
        raise InvalidInputError(f"mode must be strike or trigger, got {mode!r}")
    d = max(n, 60) if depth is None else depth
    if d < n:
        raise DepthError(f"threshold table depth {d} < rank {n}")
    sigma = _cached_boundary(mode, d)
    transport = None
    if cl.name == "312" and not direct_statistic:
        from .bijections import west_correspondence

        transport = {b: a for a, b in west_correspondence(n).items()}
    return Strategy(
        kind="threshold", mode=mode, sigma=sigma, transport=transport, rank=n
    )


_boundary_cache: dict[tuple[str, int], ThresholdTable] = {}


def _cached_boundary(mode: str, depth: int) -> ThresholdTable:
    key = (mode, depth)
    if key not in _boundary_cache:
        _boundary_cache[key] = optimal_boundary(continuation_triangle(mode, depth))
    return _boundary_cache[key]


def exact_success(
    s: Strategy,
    cls: PatternClass | str,
    n: int,
    cap: int = DEFAULT_ENUM_CAP,
) -> Tally:
    """Play the strategy against every order in the class and tally wins."""
    cl = pattern_class(cls) if isinstance(cls, str) else cls
    if s.rank is not None and s.rank != n:
        raise InvalidInputError(f"strategy was built for rank {s.rank}, asked for {n}")
    wins = 0
    total = 0
    for order in enumerate_class(cl, n, cap=cap):
        trace = play(s, order)
        wins += trace.stopped_value_is_max
        total += 1
    return Tally(wins, total)


def sample_uniform(cls: PatternClass | str, n: int, rng: SplitMix64) -> Perm:
    """Draw one order uniformly from the class by walking the prefix tree,
    weighting each child by its completion count."""
    cl = pattern_class(cls) if isinstance(cls, str) else cls
    tree = cached_tree(cl, n)
    node = tree.root
    while node.children:
        r = rng.below(node.strike.total)
        acc = 0
        for child in node.children:
            acc += child.strike.total
            if r < acc:
                node = child
                break
    return node.prefix


@dataclass(frozen=True)
class SimReport:
    trials: int
    wins: int
    estimate: Fraction
    std_error: float
    seed: int


def simulate(
    s: Strategy,
    cls: PatternClass | str,
    n: int,
    trials: int,
    seed: int = 0,
) -> SimReport:
    """Monte Carlo estimate of the strategy's success probability over
    uniformly random orders from the class."""
    if trials < 1:
        raise InvalidInputError(f"trials must be >= 1, got {trials}")
    cl = pattern_class(cls) if isinstance(cls, str) else cls
    rng = SplitMix64(seed)
    wins = 0
    for _ in range(trials):
        order = sample_uniform(cl, n, rng)
        if play(s, order).stopped_value_is_max:
            wins += 1
    est = Fraction(wins, trials)
    p = wins / trials
    return SimReport(
        trials=trials,
        wins=wins,
        estimate=est,
        std_error=sqrt(max(p * (1.0 - p), 0.0) / trials),
        seed=seed,
    )


def parse_strategy(text: str, cls: PatternClass | str, n: int) -> Strategy:
    """Parse a strategy descriptor.

    Forms: "strike:{12,213,3124}", "trigger:{null,1,21}",
    "trigger:{size=2}", "positional:3", "threshold:strike".

    >>> parse_strategy("positional:1", "123", 4).describe()
    'positional:1'
    """
    cl = pattern_class(cls) if isinstance(cls, str) else cls
    body = text.strip()
    if ":" not in body:
        raise InvalidInputError(f"descriptor needs a kind prefix: {text!r}")
    kind, _, rest = body.partition(":")
    kind = kind.strip()
    rest = rest.strip()

    if kind in ("strike", "trigger"):
        if not (rest.startswith("{") and rest.endswith("}")):
            raise InvalidInputError(f"{kind} descriptor needs a {{...}} member list")
        inner = rest[1:-1].strip()
        if kind == "trigger" and inner.startswith("size="):
            try:
                size = int(inner[5:])
            except ValueError:
                raise InvalidInputError(f"bad size in {text!r}") from None
            if not 0 <= size <= n:
                raise InvalidInputError(f"size {size} out of range 0..{n}")
            return Strategy(kind="positional", position=size, rank=n)
        if not inner:
            raise InvalidInputError(f"{kind} descriptor has no members: {text!r}")
        members = set()
        for token in inner.split(","):
            token = token.strip()
            if token == "null":
                if kind == "strike":
                    raise InvalidInputError("a strike set cannot contain the empty prefix")
                members.add(())
                continue
            p = perm_from_str(token)
            if not cl.is_member(p):
                raise InvalidInputError(
                    f"{perm_to_str(p)} is not a prefix of the {cl.name} game"
                )
            if len(p) > n:
                raise InvalidInputError(f"{perm_to_str(p)} is longer than rank {n}")
            members.add(p)
        return Strategy(kind=kind, members=frozenset(members), rank=n)

    if kind == "positional":
        try:
            position = int(rest)
        except ValueError:
            raise InvalidInputError(f"bad position in {text!r}") from None
        if not 0 <= position <= n:
            raise InvalidInputError(f"position {position} out of range 0..{n}")
        return Strategy(kind="positional", position=position, rank=n)

    if kind == "threshold":
        return threshold_strategy(rest, cl, n)

    raise InvalidInputError(f"unknown strategy kind {kind!r}")
