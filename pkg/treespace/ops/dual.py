# treespace/ops/dual.py

import logging
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

from ..errors import CertificateError, MalformedInputError, PreconditionError
from ..models import (
    ROOT, Branch, BranchPart, DualCertificate, FinVector, Functional, Node, SetId, SliceSpec,
    SupResult, TreeKind, TreeShape, WeakNbhdSpec, format_fraction, shortlex, sign,
)
from .space import chain_norm, d_gauge, gauge_norm, in_sigma
from .tree import hull, is_prefix, shape_contains

logger = logging.getLogger(__name__)

__all__ = [
    "evaluate", "cutoff_depth", "relevant_nodes", "dual_norm", "sup_over", "l_beta",
    "branch_limit_sum", "small_tail_level", "subtree_mass", "pullback", "restrict_functional", "in_set",
    "slice_membership", "nbhd_membership",
]

Weight = Callable[[Fraction], Fraction]


def evaluate(f: Functional, x: FinVector) -> Fraction:
    if f.kind is not x.kind:
        raise MalformedInputError("functional and vector live on different trees")
    return sum((f.coefficient(t) * v for t, v in x.items()), Fraction(0))


def cutoff_depth(f: Functional) -> int:
    """Below this depth every node lies on at most one branch part and carries its tail."""
    depth = max((len(t) for t in f.finite), default=0)
    for part in f.branches:
        depth = max(depth, part.override_depth(), part.branch.stable_depth())
    for a, b in combinations(f.branches, 2):
        split = a.branch.divergence(b.branch)
        if split is not None:
            depth = max(depth, split)
    return depth


def relevant_nodes(f: Functional) -> Set[Node]:
    depth = cutoff_depth(f)
    nodes = hull(f.finite)
    for part in f.branches:
        nodes.update(part.branch.node_at(n) for n in range(depth + 1))
    nodes.add(ROOT)
    return nodes


def _part_through(f: Functional, u: Node) -> Optional[BranchPart]:
    for part in f.branches:
        if part.branch.contains(u):
            return part
    return None


def _children(f: Functional, t: Node, h: Set[Node]) -> List[Node]:
    if f.kind is TreeKind.BINARY:
        return [t + (0,), t + (1,)]
    kids = {c for c in h if len(c) == len(t) + 1 and c[:-1] == t}
    kids.update(p.branch.node_at(len(t) + 1) for p in f.branches if p.branch.contains(t))
    return sorted(kids)


def _antichain_dp(f: Functional, weight: Weight) -> Tuple[Fraction, List[Node]]:
    """V(t) = max(w(c(t)), sum of children V); picking t wins ties."""
    h = relevant_nodes(f)
    best: Dict[Node, Tuple[Fraction, List[Node]]] = {}

    def value(u: Node) -> Tuple[Fraction, List[Node]]:
        if u in best:
            return best[u]
        part = _part_through(f, u)
        return (weight(part.tail) if part else Fraction(0)), [u]

    for t in sorted(h, key=len, reverse=True):
        here = weight(f.coefficient(t))
        below = [value(c) for c in _children(f, t, h)]
        spread = sum((b[0] for b in below), Fraction(0))
        if here >= spread:
            best[t] = (here, [t])
        else:
            best[t] = (spread, [n for b in below for n in b[1]])
    logger.debug("antichain dp over %d relevant nodes", len(h))
    return best[ROOT]


def _free_dp(f: Functional, weight: Weight) -> Tuple[Fraction, List[Node]]:
    """Best weight of an antichain that leaves some branch uncovered."""
    h = relevant_nodes(f)
    full: Dict[Node, Tuple[Fraction, List[Node]]] = {}
    free: Dict[Node, Tuple[Fraction, List[Node]]] = {}

    def covered(u: Node) -> Tuple[Fraction, List[Node]]:
        if u in full:
            return full[u]
        part = _part_through(f, u)
        return (weight(part.tail) if part else Fraction(0)), [u]

    def open_(u: Node) -> Tuple[Fraction, List[Node]]:
        if u in free:
            return free[u]
        part = _part_through(f, u)
        if part is None:
            return Fraction(0), []
        return weight(part.tail), [part.branch.node_at(len(u) + 1)]

    for t in sorted(h, key=len, reverse=True):
        kids = _children(f, t, h)
        here = weight(f.coefficient(t))
        below = [covered(c) for c in kids]
        spread = sum((b[0] for b in below), Fraction(0))
        full[t] = (here, [t]) if here >= spread else (spread, [n for b in below for n in b[1]])
        choice: Optional[Tuple[Fraction, List[Node]]] = None
        for i, c in enumerate(kids):
            value, picks = open_(c)
            picks = list(picks)
            for j, other in enumerate(kids):
                if j != i:
                    value += below[j][0]
                    picks.extend(below[j][1])
            if choice is None or value > choice[0]:
                choice = (value, picks)
        free[t] = choice if choice is not None else (Fraction(0), [])
    return free[ROOT]


def _magnitude(q: Fraction) -> Fraction:
    return abs(q)


def _positive(q: Fraction) -> Fraction:
    return q if q > 0 else Fraction(0)


def _certificate_nodes(f: Functional, picks: Sequence[Node]) -> Tuple[Node, ...]:
    if f.kind is TreeKind.BINARY:
        return tuple(sorted(picks, key=shortlex))
    return tuple(sorted((t for t in picks if f.coefficient(t)), key=shortlex))


def dual_norm(f: Functional) -> Tuple[Fraction, DualCertificate]:
    value, picks = _antichain_dp(f, _magnitude)
    nodes = _certificate_nodes(f, picks)
    signs = tuple(sign(f.coefficient(t)) for t in nodes)
    return value, DualCertificate(nodes, signs, value, attained=True)


def _positive_sup(f: Functional, free: bool) -> Tuple[Fraction, FinVector, Tuple[Node, ...]]:
    value, picks = (_free_dp if free else _antichain_dp)(f, _positive)
    chosen = tuple(sorted((t for t in picks if f.coefficient(t) > 0), key=shortlex))
    return value, FinVector.indicator(chosen, f.kind), chosen


def sup_over(set_id: SetId, f: Functional) -> SupResult:
    if set_id in (SetId.BX, SetId.SIGMA):
        value, picks = _antichain_dp(f, _magnitude)
        nodes = _certificate_nodes(f, picks)
        witness = FinVector({t: sign(f.coefficient(t)) for t in nodes}, f.kind)
        return SupResult(set_id, value, witness, nodes)
    if set_id in (SetId.BPLUS, SetId.SIGMA_PLUS):
        value, witness, nodes = _positive_sup(f, free=False)
        return SupResult(set_id, value, witness, nodes)
    if set_id in (SetId.C, SetId.D):
        if set_id is SetId.D and f.kind is not TreeKind.BINARY:
            raise PreconditionError("suprema over D are computed on the binary tree space")
        free = set_id is SetId.D
        up, up_witness, up_nodes = _positive_sup(f, free)
        down, down_witness, down_nodes = _positive_sup(-f, free)
        if up >= down:
            return SupResult(set_id, up, up_witness, up_nodes)
        return SupResult(set_id, down, -down_witness, down_nodes)
    raise MalformedInputError(f"unknown set {set_id}")


def l_beta(f: Functional, beta: Branch) -> Fraction:
    for part in f.branches:
        if part.branch == beta:
            return abs(part.tail)
    return Fraction(0)


def branch_limit_sum(f: Functional, branches: Optional[Sequence[Branch]] = None) -> Fraction:
    """Sum of l_beta over distinct branches (every branch part of f by default), bounded by the dual norm."""
    listed = list(dict.fromkeys(branches)) if branches is not None else [p.branch for p in f.branches]
    total = sum((l_beta(f, b) for b in listed), Fraction(0))
    bound = dual_norm(f)[0]
    if total > bound:
        logger.error("branch limits sum to %s beyond the dual norm %s",
                     format_fraction(total), format_fraction(bound))
        raise CertificateError(
            f"branch limits sum to {format_fraction(total)}, beyond the dual norm {format_fraction(bound)}")
    return total


def small_tail_level(fs: Sequence[Functional], threshold: Fraction) -> Tuple[List[Branch], int]:
    threshold = Fraction(threshold)
    if threshold <= 0:
        raise PreconditionError("threshold must be positive")
    kept: List[Branch] = []
    for f in fs:
        for part in f.branches:
            if abs(part.tail) >= threshold and part.branch not in kept:
                kept.append(part.branch)
    kept.sort(key=Branch.sort_key)
    level = 0
    for f in fs:
        depth = cutoff_depth(f)
        candidates = set(f.finite)
        for part in f.branches:
            candidates.update(part.branch.node_at(n) for n in range(depth + 1))
        for t in candidates:
            if any(b.contains(t) for b in kept):
                continue
            if abs(f.coefficient(t)) >= threshold:
                level = max(level, len(t))
    return kept, level


def pullback(f: Functional, t: Node) -> Functional:
    t = tuple(t)
    k = len(t)
    finite = {s[k:]: v for s, v in f.finite.items() if is_prefix(t, s)}
    parts = [
        BranchPart(p.branch.drop(k), p.tail, tuple((d - k, v) for d, v in p.overrides if d >= k))
        for p in f.branches if p.branch.contains(t)
    ]
    return Functional(finite, parts, f.kind)


def subtree_mass(f: Functional, t: Node) -> Fraction:
    return dual_norm(pullback(f, t))[0]


def _padded_from(shape: TreeShape, beta: Branch) -> int:
    """Past this depth a shape path along beta can only be the padding path."""
    depth = max((len(t) + 1 for t, _ in shape.explicit), default=0)
    depth = max(depth, beta.stable_depth())
    for kept in shape.branches:
        split = beta.divergence(kept)
        if split is not None:
            depth = max(depth, split)
    return depth


def restrict_functional(f: Functional, shape: TreeShape) -> Functional:
    if shape.kind is TreeKind.BINARY:
        return f
    kept = set(shape.branches)
    finite: Dict[Node, Fraction] = {s: v for s, v in f.finite.items() if shape_contains(shape, s)}
    parts = []
    for part in f.branches:
        if part.branch in kept:
            parts.append(part)
            continue
        depth = _padded_from(shape, part.branch) + len(part.branch.period)
        if shape_contains(shape, part.branch.node_at(depth)):
            parts.append(part)
            continue
        n = 0
        while shape_contains(shape, part.branch.node_at(n)):
            node = part.branch.node_at(n)
            finite[node] = finite.get(node, Fraction(0)) + part.at_depth(n)
            n += 1
    return Functional(finite, parts, f.kind)


def in_set(set_id: SetId, x: FinVector) -> bool:
    if set_id is SetId.BX:
        return chain_norm(x)[0] <= 1
    if set_id is SetId.BPLUS:
        return x.is_nonnegative() and chain_norm(x)[0] <= 1
    if set_id is SetId.SIGMA:
        return in_sigma(x)
    if set_id is SetId.SIGMA_PLUS:
        return in_sigma(x, positive=True)
    if set_id is SetId.C:
        return gauge_norm(x) <= 1
    if set_id is SetId.D:
        g = d_gauge(x)
        return g is not None and g <= 1
    raise MalformedInputError(f"unknown set {set_id}")


def slice_membership(x: FinVector, s: SliceSpec) -> bool:
    if not in_set(s.set, x):
        return False
    return evaluate(s.functional, x) > sup_over(s.set, s.functional).value - s.delta


def nbhd_membership(x: FinVector, w: WeakNbhdSpec) -> bool:
    if not in_set(w.set, x):
        return False
    gap = x - w.center
    return all(abs(evaluate(f, gap)) < eps for f, eps in w.constraints)
