# treespace/ops/tree.py

import logging
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

from ..errors import MalformedInputError, PreconditionError
from ..models import (
    ROOT, Branch, FreshMode, Node, Relation, TreeKind, TreeShape, format_node, shortlex,
)
from ..settings import settings

logger = logging.getLogger(__name__)

__all__ = [
    "parse_node", "compare", "is_prefix", "ancestors", "ancestors_or_self", "hull",
    "is_chain", "is_antichain", "is_maximal_antichain", "fresh_node",
    "shape_children", "shape_contains", "shape_level", "shape_subtree", "sorted_nodes",
]


def parse_node(text: str, kind: TreeKind = TreeKind.BINARY) -> Node:
    if not isinstance(text, str) or not text:
        raise MalformedInputError(f"invalid node {text!r}")
    if text == "eps":
        return ROOT
    if kind is TreeKind.BINARY:
        if any(ch not in "01" for ch in text):
            raise MalformedInputError(f"binary nodes are bit strings, got {text!r}")
        return tuple(int(ch) for ch in text)
    parts = text.split(".")
    if any(not p.isdigit() for p in parts):
        raise MalformedInputError(f"countable nodes are dot-separated naturals, got {text!r}")
    return tuple(int(p) for p in parts)


def is_prefix(a: Node, b: Node) -> bool:
    return len(a) <= len(b) and b[:len(a)] == a


def compare(a: Node, b: Node) -> Relation:
    if a == b:
        return Relation.EQUAL
    if is_prefix(a, b):
        return Relation.LESS
    if is_prefix(b, a):
        return Relation.GREATER
    return Relation.INCOMPARABLE


def ancestors(t: Node) -> List[Node]:
    """Strict ancestors of t, root first."""
    return [t[:i] for i in range(len(t))]


def ancestors_or_self(t: Node) -> List[Node]:
    return [t[:i] for i in range(len(t) + 1)]


def hull(nodes: Iterable[Node]) -> Set[Node]:
    out: Set[Node] = set()
    for t in nodes:
        for i in range(len(t), -1, -1):
            if t[:i] in out:
                break
            out.add(t[:i])
    return out


def sorted_nodes(nodes: Iterable[Node]) -> List[Node]:
    return sorted(set(nodes), key=shortlex)


def is_chain(nodes: Iterable[Node]) -> bool:
    ordered = sorted(set(nodes), key=len)
    return all(is_prefix(a, b) for a, b in zip(ordered, ordered[1:]))


def is_antichain(nodes: Iterable[Node]) -> bool:
    ordered = sorted(set(nodes))
    # in lexicographic order a prefix sorts directly before some extension of it
    return not any(is_prefix(a, b) for a, b in zip(ordered, ordered[1:]))


def is_maximal_antichain(nodes: Iterable[Node], kind: TreeKind = TreeKind.BINARY,
                         shape: Optional[TreeShape] = None) -> bool:
    alpha = frozenset(nodes)
    if not is_antichain(alpha):
        raise MalformedInputError("nodes are not pairwise incomparable")
    if shape is None and kind is TreeKind.COUNTABLE:
        return alpha == frozenset({ROOT})
    if not alpha:
        return False
    inner = hull(alpha) - alpha

    def covers(t: Node) -> bool:
        if t in alpha:
            return True
        if t not in inner:
            return False
        kids = shape_children(shape, t) if shape is not None else (t + (0,), t + (1,))
        return all(covers(c) for c in kids)

    return covers(ROOT)


def _blocked(node: Node, avoiding: FrozenSet[Node], mode: FreshMode) -> bool:
    """True when no extension of node can satisfy the mode."""
    if mode is FreshMode.OUTSIDE:
        return False
    return any(a in avoiding for a in ancestors_or_self(node))


def _admissible(node: Node, avoiding: FrozenSet[Node], mode: FreshMode) -> bool:
    if mode is FreshMode.OUTSIDE:
        return node not in avoiding
    if mode is FreshMode.NO_ANCESTOR:
        return not _blocked(node, avoiding, mode)
    return all(compare(node, a) is Relation.INCOMPARABLE for a in avoiding)


def _nodes_at(base: Node, depth: int, arity: int, avoiding: FrozenSet[Node],
              mode: FreshMode) -> Iterator[Node]:
    if _blocked(base, avoiding, mode):
        return
    if len(base) == depth:
        yield base
        return
    for letter in range(arity):
        yield from _nodes_at(base + (letter,), depth, arity, avoiding, mode)


def fresh_node(extending: Node = ROOT, avoiding: Iterable[Node] = (), kind: TreeKind = TreeKind.BINARY,
               mode: FreshMode = FreshMode.OUTSIDE, min_depth: int = 0,
               accept: Optional[Callable[[Node], bool]] = None, letters: int = 0) -> Node:
    """Shortlex-least strict descendant of `extending` meeting the mode and `accept`.

    OUTSIDE asks for s not in avoiding, NO_ANCESTOR additionally for no ancestor
    of s in avoiding, INCOMPARABLE for s incomparable to every avoided node.
    """
    extending = tuple(extending)
    avoid = frozenset(tuple(a) for a in avoiding)
    if mode is not FreshMode.OUTSIDE and _blocked(extending, avoid, mode):
        raise PreconditionError(
            f"no node below {format_node(extending, kind)} avoids the given set")
    if kind is TreeKind.BINARY:
        arity = 2
    else:
        top = max((x for node in avoid | {extending} for x in node), default=-1)
        arity = max(top, letters - 1) + 2
    deepest = max((len(a) for a in avoid), default=0)
    start = max(len(extending) + 1, min_depth)
    limit = max(start, deepest + 1) + settings.search_slack
    for depth in range(start, limit + 1):
        for node in _nodes_at(extending, depth, arity, avoid, mode):
            if _admissible(node, avoid, mode) and (accept is None or accept(node)):
                logger.debug("fresh node %s (mode %s)", format_node(node, kind), mode.value)
                return node
    logger.warning("fresh node search exhausted %d levels below %s", limit, format_node(extending, kind))
    raise PreconditionError(f"no admissible node below {format_node(extending, kind)} within depth {limit}")


def shape_children(shape: TreeShape, t: Node) -> Tuple[Node, ...]:
    if shape.kind is TreeKind.BINARY:
        return (t + (0,), t + (1,))
    table = shape.table
    if t in table:
        return table[t]
    along = sorted({b.node_at(len(t) + 1) for b in shape.branches if b.contains(t)})
    if along:
        return tuple(along)
    return (t + (shape.padding,),)


def shape_contains(shape: TreeShape, t: Node) -> bool:
    for i in range(len(t)):
        if t[:i + 1] not in shape_children(shape, t[:i]):
            return False
    return True


def shape_level(shape: TreeShape, n: int) -> List[Node]:
    level = [ROOT]
    for _ in range(n):
        level = [c for t in level for c in shape_children(shape, t)]
    return level


def shape_subtree(shape: TreeShape, t: Node) -> TreeShape:
    """The shape re-rooted at t."""
    if shape.kind is TreeKind.BINARY:
        return shape
    k = len(t)
    explicit: Dict[Node, Tuple[Node, ...]] = {
        node[k:]: tuple(c[k:] for c in kids)
        for node, kids in shape.explicit if is_prefix(t, node)
    }
    branches = tuple(b.drop(k) for b in shape.branches if b.contains(t))
    return TreeShape(shape.kind, tuple(sorted(explicit.items(), key=lambda kv: shortlex(kv[0]))),
                     branches, shape.padding)
