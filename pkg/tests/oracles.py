"""Brute-force reimplementations used as oracles.

Everything here recomputes quantities straight from the definitions with
itertools, independently of the package internals, so the two sides can
disagree loudly when one of them is wrong.
"""
from __future__ import annotations

from itertools import combinations, permutations, product

# name -> forbidden patterns, spelled out rather than imported
FORBIDDEN = {
    "none": (),
    "231": ((2, 3, 1),),
    "132": ((1, 3, 2),),
    "321": ((3, 2, 1),),
    "312": ((3, 1, 2),),
    "123": ((1, 2, 3),),
    "213": ((2, 1, 3),),
}


def contains(w, patt):
    """Does w contain patt as a classical pattern?"""
    m = len(patt)
    for pos in combinations(range(len(w)), m):
        vals = [w[i] for i in pos]
        if all(
            (patt[a] < patt[b]) == (vals[a] < vals[b])
            for a in range(m)
            for b in range(a + 1, m)
        ):
            return True
    return False


def members(name, n):
    """All permutations of 1..n avoiding the class's forbidden patterns."""
    patts = FORBIDDEN[name]
    return [
        w
        for w in permutations(range(1, n + 1))
        if not any(contains(w, patt) for patt in patts)
    ]


def flat(seq):
    ranked = sorted(seq)
    return tuple(ranked.index(v) + 1 for v in seq)


def ltr_max_positions(w):
    out, best = [], 0
    for i, v in enumerate(w, start=1):
        if v > best:
            out.append(i)
            best = v
    return out


def strike_tally(p, all_members):
    """(wins, total) for stopping exactly at prefix flattening p: the win
    requires the top value to sit at position len(p)."""
    p = tuple(p)
    k = len(p)
    wins = total = 0
    for w in all_members:
        if flat(w[:k]) != p:
            continue
        total += 1
        if w[k - 1] == len(w):
            wins += 1
    return wins, total


def trigger_tally(p, all_members):
    """(wins, total) for rejecting at p and accepting the next running
    maximum.  p = () is the null prefix (accept the first entry)."""
    p = tuple(p)
    k = len(p)
    wins = total = 0
    for w in all_members:
        if k and flat(w[:k]) != p:
            continue
        total += 1
        later = [j for j in ltr_max_positions(w) if j > k]
        if later and w[later[0] - 1] == len(w):
            wins += 1
    return wins, total


def winnable(p, all_members):
    """The p-winnable members: p is their prefix flattening and the top
    value arrives exactly at position len(p)."""
    p = tuple(p)
    k = len(p)
    n = len(all_members[0])
    return [
        w for w in all_members if flat(w[:k]) == p and w[k - 1] == n
    ]


def complete_antichains(tree):
    """Every complete strike antichain of the tree, as frozensets of
    prefixes.  Exponential; only call on small trees."""

    def expand(node):
        out = [frozenset((node.prefix,))]
        if node.children:
            for pick in product(*(expand(c) for c in node.children)):
                out.append(frozenset().union(*pick))
        return out

    return expand(tree.root)


def reachable_win_sums(tree, eligible_only=False):
    """Set of win totals achievable by complete strike antichains.  With
    eligible_only, interior stops are restricted to eligible prefixes
    (leaves stay allowed: they are forced stops)."""

    def sums(node):
        out = set()
        if node.eligible or not node.children or not eligible_only:
            out.add(node.strike.wins)
        if node.children:
            acc = {0}
            for c in node.children:
                cs = sums(c)
                acc = {a + b for a in acc for b in cs}
            out |= acc
        return out

    return sums(tree.root)


def random_eligible_antichain(tree, rng):
    """Draw an antichain of eligible prefixes by coin-flipping down the
    tree.  May be empty; completion() turns it into a full strike set."""
    picked = []

    def walk(node):
        if node.eligible and rng.chance(1, 2):
            picked.append(node.prefix)
            return
        for c in node.children:
            walk(c)

    walk(tree.root)
    return picked
