"""Materialized tree of prefix flattenings with exact strike/trigger tallies.

Nodes at depth k are the rank-k members of the class; the children of a node
are its one-entry extensions inside the class.  Leaves sit at depth N (the
rank of the game).  Each node carries two tallies over the members beneath
it:

  strike  - wins counts completions whose top value N arrives exactly at
            this prefix's last position (stopping here wins those),
  trigger - wins counts completions for which rejecting the current
            candidate and accepting the next left-to-right maximum wins.

A virtual null node above the root represents the empty prefix, which is a
legal trigger point ("accept the first candidate that is a running maximum")
but never a strike point.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import InvalidInputError, LimitError, NotFoundError
from .permutations import (
    DEFAULT_ENUM_CAP,
    PatternClass,
    Perm,
    child_indices,
    extend,
    is_eligible,
    ltr_maxima,
    perm_to_str,
)
from .tallies import Tally

# Trees are only materialized up to this rank unless the caller raises it.
DEFAULT_MAX_RANK = 12


@dataclass(eq=False)
class TreeNode:
    """One prefix flattening.  Treat as immutable once the tree is built."""

    prefix: Perm
    rank: int
    eligible: bool
    strike: Tally = None  # type: ignore[assignment]
    trigger: Tally = None  # type: ignore[assignment]
    children: tuple["TreeNode", ...] = ()

    @property
    def size(self) -> int:
        return len(self.prefix)

    def is_leaf(self) -> bool:
        return self.size == self.rank


@dataclass(frozen=True)
class StrikeSet:
    """An antichain of prefixes; complete means every member of the class
    meets exactly one element of the set along its prefix chain."""

    members: frozenset[Perm]
    complete: bool


@dataclass(eq=False)
class PrefixTree:
    pattern_class: PatternClass
    rank: int
    null: TreeNode
    root: TreeNode
    index: dict[Perm, TreeNode] = field(repr=False)

    @property
    def total(self) -> int:
        return self.root.strike.total

    def node(self, p: Sequence[int]) -> TreeNode:
        key = tuple(p)
        try:
            return self.index[key]
        except KeyError:
            raise NotFoundError(
                f"prefix {key!r} is not a node of the rank-{self.rank} "
                f"tree for class {self.pattern_class.name}"
            ) from None

    def nodes(self) -> Iterator[TreeNode]:
        """Every node except the virtual null, in depth-first order."""
        stack = [self.root]
        while stack:
            n = stack.pop()
            yield n
            stack.extend(reversed(n.children))


def build(
    cls: PatternClass,
    n: int,
    max_rank: int = DEFAULT_MAX_RANK,
    cap: int = DEFAULT_ENUM_CAP,
) -> PrefixTree:
    """Materialize the rank-n tree for cls with all tallies filled in.

    Raises LimitError when n exceeds max_rank or the class size exceeds cap.
    """
    if n < 1:
        raise InvalidInputError(f"rank must be >= 1, got {n}")
    if n > max_rank:
        raise LimitError(
            f"rank {n} exceeds the tree cap {max_rank}; "
            "use the closed-form modules for deeper ranks"
        )
    known = cls.size(n)
    if known is not None and known > cap:
        raise LimitError(
            f"class {cls.name} has {known} members at rank {n}, over the cap {cap}"
        )

    null = TreeNode(prefix=(), rank=n, eligible=False)
    strike_wins: dict[int, int] = {}
    trigger_wins: dict[int, int] = {}
    totals: dict[int, int] = {}
    seen = 0

    # path[s] is the current node of size s; path[0] is the null node
    path: list[TreeNode] = [null]

    def grow(p: Perm) -> TreeNode:
        nonlocal seen
        node = TreeNode(prefix=p, rank=n, eligible=is_eligible(p))
        path.append(node)
        if len(p) == n:
            seen += 1
            if seen > cap:
                raise LimitError(
                    f"tree for class {cls.name} at rank {n} exceeded cap {cap}"
                )
            totals[id(node)] = 1
            maxima = ltr_maxima(p)
            m_last = maxima[-1]  # position of the value n
            m_2 = maxima[-2] if len(maxima) > 1 else 0
            strike_wins[id(path[m_last])] = strike_wins.get(id(path[m_last]), 0) + 1
            # rejecting at sizes m_2 .. m_last-1 and taking the next
            # running maximum lands exactly on n
            for s in range(m_2, m_last):
                trigger_wins[id(path[s])] = trigger_wins.get(id(path[s]), 0) + 1
        else:
            kids = []
            total = 0
            for c in sorted(child_indices(p, cls)):
                child = grow(extend(p, c))
                if totals[id(child)] > 0:
                    kids.append(child)
                    total += totals[id(child)]
            node.children = tuple(kids)
            totals[id(node)] = total
        path.pop()
        return node

    root = grow((1,))
    if totals[id(root)] == 0:
        raise InvalidInputError(f"class {cls.name} has no members at rank {n}")
    null.children = (root,)
    totals[id(null)] = totals[id(root)]

    index: dict[Perm, TreeNode] = {}
    stack = [null]
    while stack:
        node = stack.pop()
        t = totals[id(node)]
        node.strike = Tally(strike_wins.get(id(node), 0) if node.eligible else 0, t)
        node.trigger = Tally(trigger_wins.get(id(node), 0), t)
        index[node.prefix] = node
        stack.extend(node.children)

    return PrefixTree(pattern_class=cls, rank=n, null=null, root=root, index=index)


def strike_prob(tree: PrefixTree, p: Sequence[int]) -> Tally:
    """Exact strike tally of the prefix p (absent prefixes raise NotFoundError)."""
    return tree.node(p).strike


def trigger_prob(tree: PrefixTree, p: Sequence[int] | None) -> Tally:
    """Exact trigger tally of p; None or () names the null prefix."""
    if p is None:
        return tree.null.trigger
    return tree.node(p).trigger


def successors(tree: PrefixTree, p: Sequence[int]) -> tuple[TreeNode, ...]:
    """The frontier after rejecting at the eligible prefix p: its minimal
    eligible strict descendants, plus any rank-N descendants reached
    without passing one (covering those orders exactly once)."""
    node = tree.node(p)
    if not node.eligible:
        raise InvalidInputError(f"prefix {tuple(p)!r} is not eligible")
    out: list[TreeNode] = []

    def scan(cur: TreeNode) -> None:
        for child in cur.children:
            if child.eligible or child.is_leaf():
                out.append(child)
            else:
                scan(child)

    scan(node)
    return tuple(out)


def _check_antichain(members: Iterable[Perm]) -> None:
    from .permutations import prefix_flattening

    ms = set(members)
    for b in ms:
        for j in range(1, len(b)):
            a = prefix_flattening(b, j)
            if a in ms:
                raise InvalidInputError(
                    f"not an antichain: {perm_to_str(a)} is a prefix "
                    f"flattening of {perm_to_str(b)}"
                )


def completion(S: Iterable[Perm], tree: PrefixTree) -> StrikeSet:
    """Extend the antichain S to a complete one by adding every rank-N leaf
    not already covered by a member of S."""
    base = {tuple(p) for p in S}
    for p in base:
        tree.node(p)  # raises NotFoundError for strays
    _check_antichain(base)
    added: list[Perm] = []

    def scan(node: TreeNode, covered: bool) -> None:
        covered = covered or node.prefix in base
        if node.is_leaf():
            if not covered:
                added.append(node.prefix)
            return
        for child in node.children:
            scan(child, covered)

    scan(tree.root, False)
    return StrikeSet(members=frozenset(base) | frozenset(added), complete=True)


def evaluate_strike(tree: PrefixTree, strategy: StrikeSet | Iterable[Perm]) -> Tally:
    """Success tally of a complete antichain strike set: the mediant of the
    members' strike tallies.  Incomplete or overlapping sets are rejected."""
    if isinstance(strategy, StrikeSet):
        members = set(strategy.members)
    else:
        members = {tuple(p) for p in strategy}
    for p in members:
        if p not in tree.index:
            raise InvalidInputError(
                f"strike set member {p!r} is not a node of the tree"
            )
    _check_antichain(members)
    wins = 0
    total = 0

    def scan(node: TreeNode) -> None:
        nonlocal wins, total
        if node.prefix in members:
            wins += node.strike.wins
            total += node.strike.total
            return
        if node.is_leaf():
            raise InvalidInputError(
                f"strike set is not complete: order {perm_to_str(node.prefix)} "
                "meets no member"
            )
        for child in node.children:
            scan(child)

    scan(tree.root)
    return Tally(wins, total)


def tree_to_dict(tree: PrefixTree, include_null: bool = False) -> dict:
    """JSON-ready nested representation of the tree."""

    def render(node: TreeNode) -> dict:
        return {
            "prefix": perm_to_str(node.prefix) if node.prefix else "null",
            "eligible": node.eligible,
            "strike": str(node.strike),
            "trigger": str(node.trigger),
            "children": [render(c) for c in node.children],
        }

    return render(tree.null if include_null else tree.root)


def tree_to_json(tree: PrefixTree, include_null: bool = False, indent: int = 2) -> str:
    return json.dumps(tree_to_dict(tree, include_null), indent=indent)


@lru_cache(maxsize=32)
def cached_tree(cls: PatternClass, n: int) -> PrefixTree:
    """Shared, memoized build for repeated lookups (sampling, tests)."""
    return build(cls, n)
