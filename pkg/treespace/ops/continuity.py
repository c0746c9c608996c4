# treespace/ops/continuity.py

import logging
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from ..errors import PreconditionError, certify
from ..models import (
    ROOT, Branch, FinVector, Functional, PcConstruction, SetId, SignProblem, TreeKind, TreeShape,
    WeakNbhdSpec, format_fraction, shortlex,
)
from ..settings import settings
from .dual import cutoff_depth, evaluate, nbhd_membership, pullback, small_tail_level
from .signs import balance_signs
from .space import chain_norm, is_point_of_continuity, prefix_mass, shift
from .tree import is_prefix, shape_level, shape_subtree

logger = logging.getLogger(__name__)

__all__ = ["stabilization_depth", "pc_construction", "pc_approximant", "verify_pc", "pc_near"]


def _settles(f: Functional, beta: Branch) -> int:
    """Least depth from which f is constant along beta."""
    last = cutoff_depth(f)
    for part in f.branches:
        split = beta.divergence(part.branch)
        if split is not None:
            last = max(last, split)
    last += 1
    tail = f.coefficient(beta.node_at(last))
    m = last
    while m > 0 and f.coefficient(beta.node_at(m - 1)) == tail:
        m -= 1
    return m


def stabilization_depth(fs: Sequence[Functional], branches: Sequence[Branch]) -> int:
    depth = 0
    for f in fs:
        for beta in branches:
            depth = max(depth, _settles(f, beta) - 1)
    for i, a in enumerate(branches):
        for b in branches[i + 1:]:
            split = a.divergence(b)
            if split is not None:
                depth = max(depth, split)
    return depth


def pc_construction(fs: Sequence[Functional], eps: Fraction, shape: Optional[TreeShape] = None) -> PcConstruction:
    eps = Fraction(eps)
    if eps <= 0:
        raise PreconditionError("eps must be positive")
    kind = fs[0].kind if fs else (shape.kind if shape else TreeKind.BINARY)
    shape = shape or TreeShape(kind)
    if not fs:
        return PcConstruction(FinVector.unit(ROOT, kind), (), 0, 0, 0, (), (), ())
    threshold = eps / 2 ** (len(fs) + 1)
    branches, level = small_tail_level(fs, threshold)
    n1 = max(level, stabilization_depth(fs, branches)) + 1
    n2 = n1 + 1
    if n2 > settings.pc_max_level:
        logger.warning("pc approximant refused: level %d is past the cap", n2)
        raise PreconditionError(f"sign columns at level {n2} exceed the cap of level {settings.pc_max_level}")
    layer = sorted(shape_level(shape, n2), key=shortlex)
    starts = [b.node_at(n1) for b in branches]
    ends = {b.node_at(n2) for b in branches}
    halved = [t for t in layer if t not in ends and any(is_prefix(s, t) for s in starts)]
    full = [t for t in layer if not any(is_prefix(s, t) for s in starts)]
    columns = [(t, Fraction(1, 2)) for t in halved] + [(t, Fraction(1)) for t in full]
    x = FinVector.zero(kind)
    for b in branches:
        x = x + FinVector({b.node_at(n2): Fraction(1, 2), b.node_at(n1): Fraction(-1, 2)}, kind)
    theta: Tuple[int, ...] = ()
    if columns:
        rows = tuple(tuple(c * f.coefficient(t) / threshold for t, c in columns) for f in fs)
        theta = balance_signs(SignProblem(rows)).theta
        x = x + FinVector({t: c * th for (t, c), th in zip(columns, theta)}, kind)
    logger.debug("pc approximant: %d branches, levels %d/%d, %d columns", len(branches), n1, n2, len(columns))
    return PcConstruction(x, tuple(branches), level, n1, n2, tuple(halved), tuple(full), theta)


def pc_approximant(fs: Sequence[Functional], eps: Fraction, shape: Optional[TreeShape] = None,
                   verify: bool = True) -> FinVector:
    built = pc_construction(fs, eps, shape)
    if verify:
        verify_pc(built.vector, fs, Fraction(eps), shape)
    logger.info("pc_approximant: %d functionals, verified=%s", len(fs), verify)
    return built.vector


def verify_pc(x: FinVector, fs: Sequence[Functional], eps: Fraction, shape: Optional[TreeShape] = None) -> None:
    pc, reason = is_point_of_continuity(x, shape)
    certify(pc, f"not a point of continuity: {reason}")
    for j, f in enumerate(fs):
        value = evaluate(f, x)
        certify(abs(value) < eps, f"functional {j} takes {format_fraction(value)} on the approximant")


def pc_near(y: FinVector, w: WeakNbhdSpec, shape: Optional[TreeShape] = None,
            verify: bool = True) -> FinVector:
    """A point of continuity inside the neighborhood w of y."""
    if w.set is not SetId.BX:
        raise PreconditionError(f"neighborhood is over {w.set.value}, expected BX")
    if w.center != y:
        raise PreconditionError("the neighborhood is not centered at y")
    if chain_norm(y)[0] > 1:
        raise PreconditionError("y is outside the unit ball")
    shape = shape or TreeShape(y.kind)
    depth = 0 if not y else y.max_depth() + 1
    layer = sorted(shape_level(shape, depth), key=shortlex)
    open_nodes = [(t, prefix_mass(y, t)) for t in layer]
    open_nodes = [(t, lam) for t, lam in open_nodes if lam < 1]
    out = y
    if open_nodes:
        budget = min((eps for _, eps in w.constraints), default=Fraction(1)) / len(open_nodes)
        for t, lam in open_nodes:
            local = [pullback(f, t) for f, _ in w.constraints]
            piece = pc_approximant(local, budget, shape_subtree(shape, t), verify=verify)
            out = out + shift(piece, t) * (1 - lam)
    if verify:
        pc, reason = is_point_of_continuity(out, shape)
        certify(pc, f"output is not a point of continuity: {reason}")
        certify(nbhd_membership(out, w), "output left the neighborhood")
    logger.info("pc_near: %d open nodes at depth %d, verified=%s", len(open_nodes), depth, verify)
    return out
