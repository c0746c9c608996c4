# treespace/ops/infinite.py

import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from ..errors import PreconditionError, certify
from ..models import ROOT, FinVector, Functional, Node, Reduction, TreeKind, TreeShape, format_fraction, shortlex
from .dual import cutoff_depth, subtree_mass
from .tree import hull, is_prefix, shape_children, shape_contains

logger = logging.getLogger(__name__)

__all__ = ["padding_letter", "finitely_branching_reduction", "verify_reduction", "union_shapes"]


def padding_letter(fs: Iterable[Functional] = (), vectors: Iterable[FinVector] = ()) -> int:
    """One more than every child index occurring in the data."""
    top = -1
    for f in fs:
        for node in f.finite:
            top = max(top, *node, -1)
        for part in f.branches:
            top = max(top, part.branch.max_letter())
    for x in vectors:
        for node in x.support:
            top = max(top, *node, -1)
    return top + 1


def _relevant_children(f: Functional, t: Node) -> List[Node]:
    k = len(t)
    kids = {n[:k + 1] for n in f.finite if len(n) > k and is_prefix(t, n)}
    kids.update(p.branch.node_at(k + 1) for p in f.branches if p.branch.contains(t))
    return sorted(kids)


def finitely_branching_reduction(f: Functional, eps: Fraction, padding: Optional[int] = None,
                                 verify: bool = True) -> Reduction:
    """Greedy level-by-level subtree keeping all but eps of the dual mass of f."""
    eps = Fraction(eps)
    if eps <= 0:
        raise PreconditionError("eps must be positive")
    if f.kind is not TreeKind.COUNTABLE:
        raise PreconditionError("the reduction runs on the countably branching tree")
    padding = padding_letter([f]) if padding is None else padding
    depth = cutoff_depth(f)
    levels: List[List[Node]] = [[ROOT]]
    explicit: Dict[Node, Tuple[Node, ...]] = {}
    pruned: List[Tuple[Node, Fraction]] = []
    for k in range(depth + 1):
        candidates = [(c, subtree_mass(f, c)) for t in levels[k] for c in _relevant_children(f, t)]
        candidates = sorted(((c, m) for c, m in candidates if m > 0), key=lambda cm: (-cm[1], shortlex(cm[0])))
        budget = eps / 2 ** (k + 1)
        remaining = sum((m for _, m in candidates), Fraction(0))
        added: List[Node] = []
        for c, mass in candidates:
            if remaining < budget:
                break
            added.append(c)
            remaining -= mass
        pruned.extend(candidates[len(added):])
        for t in levels[k]:
            kids = tuple(sorted(c for c in added if c[:-1] == t))
            explicit[t] = kids or (t + (padding,),)
        levels.append(sorted(added, key=shortlex))
        logger.debug("reduction level %d keeps %d of %d children", k + 1, len(added), len(candidates))
    kept = tuple(sorted({p.branch for p in f.branches if any(p.branch.contains(u) for u in levels[-1])},
                        key=lambda b: b.sort_key()))
    shape = TreeShape(TreeKind.COUNTABLE, tuple(sorted(explicit.items(), key=lambda kv: shortlex(kv[0]))),
                      kept, padding)
    reduction = Reduction(
        shape=shape,
        levels=tuple(tuple(level) for level in levels),
        pruned=tuple(pruned),
        pruned_mass=sum((m for _, m in pruned), Fraction(0)),
        epsilon=eps,
    )
    if verify:
        verify_reduction(reduction, f)
    logger.info("finitely_branching_reduction: pruned mass %s, verified=%s",
                format_fraction(reduction.pruned_mass), verify)
    return reduction


def verify_reduction(r: Reduction, f: Functional) -> None:
    audit = Fraction(0)
    for node, mass in r.pruned:
        certify(subtree_mass(f, node) == mass, "pruned mass does not match its subtree")
        certify(not shape_contains(r.shape, node), "a pruned node is still in the tree")
        audit += mass
    certify(audit == r.pruned_mass and audit < r.epsilon, "pruned mass is not below eps")
    for node, kids in r.shape.explicit:
        certify(len(kids) >= 1, "a node of the reduced tree has no children")


def union_shapes(shapes: Sequence[TreeShape], extra: Iterable[Node], padding: int) -> TreeShape:
    """Smallest shape containing every given shape and the hull of the extra nodes."""
    kept = tuple(sorted({b for s in shapes for b in s.branches}, key=lambda b: b.sort_key()))
    keys: Set[Node] = {t for s in shapes for t, _ in s.explicit}
    table: Dict[Node, Set[Node]] = {t: set() for t in keys}
    for t in keys:
        for s in shapes:
            if shape_contains(s, t):
                table[t].update(c for c in shape_children(s, t) if c[-1] != s.padding)
    for u in sorted(hull(extra) - {ROOT}, key=len):
        parent = u[:-1]
        if parent not in table:
            partial = TreeShape(TreeKind.COUNTABLE, tuple(_freeze(table, padding).items()), kept, padding)
            table[parent] = {c for c in shape_children(partial, parent) if c[-1] != padding}
        table[parent].add(u)
    frozen = _freeze(table, padding)
    return TreeShape(TreeKind.COUNTABLE, tuple(sorted(frozen.items(), key=lambda kv: shortlex(kv[0]))),
                     kept, padding)


def _freeze(table: Dict[Node, Set[Node]], padding: int) -> Dict[Node, Tuple[Node, ...]]:
    return {t: tuple(sorted(kids)) if kids else (t + (padding,),) for t, kids in table.items()}
