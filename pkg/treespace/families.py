# treespace/families.py

import logging
from fractions import Fraction
from typing import Dict, FrozenSet, List, Protocol, Tuple

from .errors import MalformedInputError, PreconditionError
from .models import ROOT, FinVector, Node, TreeKind, shortlex
from .settings import settings

logger = logging.getLogger(__name__)


class AdequateFamily(Protocol):
    name: str

    def contains(self, nodes: FrozenSet[Node]) -> bool:
        ...

    def norm(self, x: FinVector) -> Tuple[Fraction, Tuple[Node, ...]]:
        ...


def _comparable(a: Node, b: Node) -> bool:
    short, long_ = (a, b) if len(a) <= len(b) else (b, a)
    return long_[:len(short)] == short


def _is_chain(nodes: FrozenSet[Node]) -> bool:
    ordered = sorted(nodes, key=len)
    return all(_comparable(a, b) for a, b in zip(ordered, ordered[1:]))


def branch_and_bound_norm(family: AdequateFamily, x: FinVector) -> Tuple[Fraction, Tuple[Node, ...]]:
    """Largest sum of |x| over a family set inside supp(x)."""
    items = sorted(((abs(v), n) for n, v in x.items()), key=lambda p: (-p[0], shortlex(p[1])))
    if len(items) > settings.enumeration_max_support:
        logger.warning("support of size %d exceeds the enumeration cap %d",
                       len(items), settings.enumeration_max_support)
        raise PreconditionError(
            f"support size {len(items)} exceeds the enumeration cap {settings.enumeration_max_support}")
    suffix = [Fraction(0)] * (len(items) + 1)
    for i in range(len(items) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + items[i][0]
    memo: Dict[FrozenSet[Node], bool] = {}

    def admissible(nodes: FrozenSet[Node]) -> bool:
        if nodes not in memo:
            memo[nodes] = family.contains(nodes)
        return memo[nodes]

    best: List = [Fraction(0), frozenset()]

    def search(i: int, chosen: FrozenSet[Node], total: Fraction) -> None:
        if total > best[0]:
            best[0], best[1] = total, chosen
        if i == len(items) or total + suffix[i] <= best[0]:
            return
        value, node = items[i]
        grown = chosen | {node}
        if admissible(grown):
            search(i + 1, grown, total + value)
        search(i + 1, chosen, total)

    search(0, frozenset(), Fraction(0))
    logger.debug("branch and bound for %s checked %d sets", family.name, len(memo))
    return best[0], tuple(sorted(best[1], key=shortlex))


class ChainFamily:
    name = "chains"

    def contains(self, nodes: FrozenSet[Node]) -> bool:
        return _is_chain(nodes)

    def norm(self, x: FinVector) -> Tuple[Fraction, Tuple[Node, ...]]:
        from .ops.space import chain_norm
        return chain_norm(x)


class LambdaFamily:
    """Chains of the rootless binary tree plus subsets of the segments
    {u : u below-or-equal s, u != root} together with both children of s."""

    name = "lambda"

    def contains(self, nodes: FrozenSet[Node]) -> bool:
        if ROOT in nodes:
            return False
        if _is_chain(nodes):
            return True
        for s in {n[:-1] for n in nodes if n}:
            if all(n in (s + (0,), s + (1,)) or (n and _comparable(n, s) and len(n) <= len(s))
                   for n in nodes):
                return True
        return False

    def norm(self, x: FinVector) -> Tuple[Fraction, Tuple[Node, ...]]:
        from .ops.space import lambda_norm
        return lambda_norm(x)


class AntichainFamily:
    name = "antichains"

    def contains(self, nodes: FrozenSet[Node]) -> bool:
        return all(not _comparable(a, b) for a in nodes for b in nodes if a != b)

    def norm(self, x: FinVector) -> Tuple[Fraction, Tuple[Node, ...]]:
        best: Dict[Node, Tuple[Fraction, Tuple[Node, ...]]] = {}
        hull = {t[:i] for t in x.support for i in range(len(t) + 1)}
        kids: Dict[Node, List[Node]] = {}
        for t in hull:
            if t:
                kids.setdefault(t[:-1], []).append(t)
        for t in sorted(hull, key=len, reverse=True):
            below = [best[c] for c in sorted(kids.get(t, []))]
            spread = sum((b[0] for b in below), Fraction(0))
            here = abs(x[t])
            if here and here >= spread:
                best[t] = (here, (t,))
            else:
                best[t] = (spread, tuple(n for b in below for n in b[1]))
        value, picks = best.get(ROOT, (Fraction(0), ()))
        return value, tuple(sorted(picks, key=shortlex))


class SingletonFamily:
    name = "singletons"

    def contains(self, nodes: FrozenSet[Node]) -> bool:
        return len(nodes) <= 1

    def norm(self, x: FinVector) -> Tuple[Fraction, Tuple[Node, ...]]:
        if not x:
            return Fraction(0), ()
        node = min(x.support, key=lambda n: (-abs(x[n]), shortlex(n)))
        return abs(x[node]), (node,)


class AllSetsFamily:
    name = "all"

    def contains(self, nodes: FrozenSet[Node]) -> bool:
        return True

    def norm(self, x: FinVector) -> Tuple[Fraction, Tuple[Node, ...]]:
        return sum((abs(v) for _, v in x.items()), Fraction(0)), tuple(n for n, _ in x.items())


def schreier_index(node: Node) -> int:
    """Breadth-first number of a binary node, the root being 1."""
    return (1 << len(node)) + int("".join(map(str, node)) or "0", 2)


class SchreierFamily:
    name = "schreier"

    def contains(self, nodes: FrozenSet[Node]) -> bool:
        if not nodes:
            return True
        return len(nodes) <= min(schreier_index(n) for n in nodes)

    def norm(self, x: FinVector) -> Tuple[Fraction, Tuple[Node, ...]]:
        if x.kind is not TreeKind.BINARY:
            raise PreconditionError("the schreier family lives on the binary tree")
        return branch_and_bound_norm(self, x)


FAMILIES: Dict[str, AdequateFamily] = {
    "chains": ChainFamily(),
    "lambda": LambdaFamily(),
    "antichains": AntichainFamily(),
    "singletons": SingletonFamily(),
    "all": AllSetsFamily(),
    "schreier": SchreierFamily(),
}


def get_family(name: str) -> AdequateFamily:
    family = FAMILIES.get(name)
    if not family:
        raise MalformedInputError(f"Unknown adequate family: {name}")
    return family
