# treespace/ops/space.py

import logging
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, Iterable, List, Optional, Tuple, Union

from ..errors import MalformedInputError, PreconditionError
from ..families import ChainFamily, LambdaFamily, get_family
from ..models import (
    ROOT, Branch, ClassificationReport, FinVector, Functional, Node, NormCertificate, SpaceId,
    SpaceKind, TreeKind, TreeShape, format_fraction, format_node, shortlex, sign,
)
from ..settings import settings
from .tree import hull, is_maximal_antichain, is_prefix, shape_children, shape_contains

logger = logging.getLogger(__name__)

__all__ = [
    "norm", "norm_value", "chain_norm", "lambda_norm", "brute_force_norm", "project", "shift",
    "unshift", "lattice_parts", "gauge_norm", "d_gauge", "chain_functional", "classify",
    "exposing_functional", "is_point_of_continuity", "prefix_mass", "in_sigma",
]

Selector = Union[Callable[[Node], bool], Iterable[Node], Branch]


def _check_kind(space: SpaceId, x: FinVector) -> None:
    if x.kind is not space.tree_kind:
        raise MalformedInputError(f"vector lives on the {x.kind.value} tree, space {space} does not")


def _hull_children(nodes: Iterable[Node]) -> Dict[Node, List[Node]]:
    kids: Dict[Node, List[Node]] = {}
    for t in nodes:
        if t:
            kids.setdefault(t[:-1], []).append(t)
    for v in kids.values():
        v.sort()
    return kids


def chain_norm(x: FinVector) -> Tuple[Fraction, Tuple[Node, ...]]:
    """Heaviest root-to-leaf path over the support hull; ties go to the least child."""
    if not x:
        return Fraction(0), ()
    h = hull(x.support)
    kids = _hull_children(h)
    best: Dict[Node, Fraction] = {}
    step: Dict[Node, Optional[Node]] = {}
    for t in sorted(h, key=len, reverse=True):
        choice = None
        for c in kids.get(t, []):
            if choice is None or best[c] > best[choice]:
                choice = c
        best[t] = abs(x[t]) + (best[choice] if choice is not None else 0)
        step[t] = choice
    path, t = [], ROOT
    while t is not None:
        if x[t]:
            path.append(t)
        t = step[t]
    logger.debug("chain norm over %d hull nodes", len(h))
    return best[ROOT], tuple(path)


def lambda_norm(x: FinVector) -> Tuple[Fraction, Tuple[Node, ...]]:
    if x[ROOT]:
        raise PreconditionError("vectors of the modified tree space carry no root coordinate")
    value, cert = chain_norm(x)
    for s in sorted(hull(x.support), key=shortlex):
        stem = [s[:i] for i in range(1, len(s) + 1)]
        candidate = (sum((abs(x[u]) for u in stem), Fraction(0))
                     + abs(x[s + (0,)]) + abs(x[s + (1,)]))
        if candidate > value:
            value = candidate
            cert = tuple(u for u in stem + [s + (0,), s + (1,)] if x[u])
    return value, cert


def norm(space: SpaceId, x: FinVector) -> Tuple[Fraction, NormCertificate]:
    """Norm of x in the space, with the family set that attains it."""
    _check_kind(space, x)
    if space.kind in (SpaceKind.XT, SpaceKind.XTINF):
        value, cert = chain_norm(x)
        family = "chains"
    elif space.kind is SpaceKind.XM:
        value, cert = lambda_norm(x)
        family = "lambda"
    else:
        fam = get_family(space.family or "")
        value, cert = fam.norm(x)
        family = fam.name
    return value, NormCertificate(cert, value, family)


def norm_value(space: SpaceId, x: FinVector) -> Fraction:
    return norm(space, x)[0]


def brute_force_norm(space: SpaceId, x: FinVector) -> Tuple[Fraction, NormCertificate]:
    """Enumerate every family set inside the support."""
    _check_kind(space, x)
    if space.kind in (SpaceKind.XT, SpaceKind.XTINF):
        family = ChainFamily()
    elif space.kind is SpaceKind.XM:
        if x[ROOT]:
            raise PreconditionError("vectors of the modified tree space carry no root coordinate")
        family = LambdaFamily()
    else:
        family = get_family(space.family or "")
    support = sorted(x.support, key=shortlex)
    if len(support) > settings.enumeration_max_support:
        logger.warning("brute force norm refused: support of size %d", len(support))
        raise PreconditionError(f"support size {len(support)} exceeds the enumeration cap")
    value, best = Fraction(0), ()
    for r in range(1, len(support) + 1):
        for subset in combinations(support, r):
            if family.contains(frozenset(subset)):
                total = sum((abs(x[n]) for n in subset), Fraction(0))
                if total > value:
                    value, best = total, subset
    return value, NormCertificate(tuple(best), value, family.name)


def _as_predicate(selector: Selector) -> Callable[[Node], bool]:
    if isinstance(selector, Branch):
        return selector.contains
    if callable(selector):
        return selector
    keep = frozenset(tuple(n) for n in selector)
    return keep.__contains__


def project(x: FinVector, selector: Selector) -> FinVector:
    """Restriction of x to a node set, a branch, or a node predicate."""
    return x.restrict(_as_predicate(selector))


def shift(x: FinVector, t: Node) -> FinVector:
    """Moves x below t: e_s becomes e_(t s)."""
    return FinVector({tuple(t) + n: v for n, v in x.items()}, x.kind)


def unshift(x: FinVector, t: Node) -> FinVector:
    """Inverse of shift on vectors supported below t."""
    t = tuple(t)
    outside = [n for n in x.support if not is_prefix(t, n)]
    if outside:
        raise PreconditionError(
            f"support node {format_node(min(outside, key=shortlex), x.kind)} is not below {format_node(t, x.kind)}")
    return FinVector({n[len(t):]: v for n, v in x.items()}, x.kind)


def lattice_parts(x: FinVector) -> Tuple[FinVector, FinVector]:
    plus = FinVector({n: v for n, v in x.items() if v > 0}, x.kind)
    minus = FinVector({n: -v for n, v in x.items() if v < 0}, x.kind)
    return plus, minus


def gauge_norm(x: FinVector) -> Fraction:
    """Gauge of cconv(B+ and B-), i.e. norm(x+) + norm(x-)."""
    if x.kind is not TreeKind.BINARY:
        raise PreconditionError("gauge_norm is defined on the binary tree space")
    plus, minus = lattice_parts(x)
    return chain_norm(plus)[0] + chain_norm(minus)[0]


class _Capacity:
    """Concave piecewise linear function on [start, oo) with a final slope."""

    __slots__ = ("points", "slope")

    def __init__(self, points: List[Tuple[Fraction, Fraction]], slope: Fraction):
        self.points = points
        self.slope = slope

    @classmethod
    def identity(cls) -> "_Capacity":
        return cls([(Fraction(0), Fraction(0))], Fraction(1))

    @property
    def start(self) -> Fraction:
        return self.points[0][0]

    def __call__(self, v: Fraction) -> Fraction:
        pts = self.points
        for (v0, y0), (v1, y1) in zip(pts, pts[1:]):
            if v <= v1:
                return y0 + (y1 - y0) * (v - v0) / (v1 - v0)
        v0, y0 = pts[-1]
        return y0 + self.slope * (v - v0)

    def shifted(self, a: Fraction) -> "_Capacity":
        return _Capacity([(v + a, y) for v, y in self.points], self.slope)

    def plus(self, other: "_Capacity") -> "_Capacity":
        start = max(self.start, other.start)
        xs = sorted({start} | {v for v, _ in self.points + other.points if v > start})
        return _Capacity([(v, self(v) + other(v)) for v in xs], self.slope + other.slope)

    def capped(self) -> "_Capacity":
        """u -> min(u, self(u))."""
        xs = [v for v, _ in self.points]
        cuts = set(xs)
        for v0, v1 in zip(xs, xs[1:]):
            d0, d1 = self(v0) - v0, self(v1) - v1
            if (d0 < 0 < d1) or (d1 < 0 < d0):
                cuts.add(v0 + (v1 - v0) * d0 / (d0 - d1))
        d_last = self(xs[-1]) - xs[-1]
        rate = self.slope - 1
        if rate and d_last * rate < 0:
            cuts.add(xs[-1] - d_last / rate)
        ordered = sorted(cuts)
        far = ordered[-1]
        tail_gap = self(far) - far
        if rate > 0 or (rate == 0 and tail_gap >= 0):
            slope = Fraction(1)
        else:
            slope = self.slope
        return _Capacity([(v, min(v, self(v))) for v in ordered], slope)


def _positive_gauge(p: FinVector) -> Optional[Fraction]:
    """Gauge of cconv of the nonmaximal {0,1}-antichain indicators at p >= 0."""
    if p[ROOT]:
        return None
    if not p:
        return Fraction(0)
    h = hull(p.support)
    cap: Dict[Node, _Capacity] = {}

    def capacity(t: Node) -> _Capacity:
        return cap[t] if t in cap else _Capacity.identity()

    for t in sorted(h - {ROOT}, key=len, reverse=True):
        joint = capacity(t + (0,)).plus(capacity(t + (1,)))
        cap[t] = joint.capped().shifted(p[t])
    top = capacity((0,)).plus(capacity((1,)))
    slack = _Capacity([(v, y - v) for v, y in top.points], top.slope - 1)
    pts = slack.points
    if pts[0][1] >= 0:
        return pts[0][0]
    for (v0, y0), (v1, y1) in zip(pts, pts[1:]):
        if y1 >= 0:
            return v0 + (v1 - v0) * (-y0) / (y1 - y0)
    v0, y0 = pts[-1]
    return v0 - y0 / slack.slope


def d_gauge(x: FinVector) -> Optional[Fraction]:
    """Exact gauge of D on the binary tree space; None when x is outside every multiple of D."""
    if x.kind is not TreeKind.BINARY:
        raise PreconditionError("the gauge of D is defined on the binary tree space")
    plus, minus = lattice_parts(x)
    a, b = _positive_gauge(plus), _positive_gauge(minus)
    if a is None or b is None:
        return None
    return a + b


def chain_functional(nodes: Iterable[Node], kind: TreeKind = TreeKind.BINARY) -> Functional:
    return Functional({tuple(n): 1 for n in nodes}, kind=kind)


def prefix_mass(x: FinVector, t: Node) -> Fraction:
    return sum((abs(x[t[:i]]) for i in range(len(t) + 1)), Fraction(0))


def in_sigma(x: FinVector, positive: bool = False) -> bool:
    if any(abs(v) != 1 for _, v in x.items()):
        return False
    if positive and not x.is_nonnegative():
        return False
    return chain_norm(x)[0] <= 1


def is_point_of_continuity(x: FinVector, shape: Optional[TreeShape] = None) -> Tuple[bool, str]:
    """Unit mass along every branch of the shape through the support hull."""
    shape = shape or TreeShape(x.kind)
    value = chain_norm(x)[0]
    if value < 1:
        return False, "norm < 1"
    if value > 1:
        return False, "norm > 1"
    outside = [n for n in x.support if not shape_contains(shape, n)]
    if outside:
        return False, f"support node {format_node(min(outside, key=shortlex), x.kind)} is outside the tree"
    h = hull(x.support)
    for t in sorted(h, key=shortlex):
        if any(c not in h for c in shape_children(shape, t)):
            mass = prefix_mass(x, t)
            if mass != 1:
                return False, f"branch through {format_node(t, x.kind)} carries mass {format_fraction(mass)}"
    return True, "every branch carries mass 1"


def classify(space: SpaceId, x: FinVector) -> ClassificationReport:
    if space.kind is not SpaceKind.XT:
        raise PreconditionError(f"classify is unsupported for space {space}")
    _check_kind(space, x)
    value = chain_norm(x)[0]
    on_sphere = value == 1
    units = tuple(n for n, v in x.items() if abs(v) == 1)
    extreme = on_sphere and bool(units) and is_maximal_antichain(units, x.kind)
    sig = in_sigma(x)
    sig_plus = sig and x.is_nonnegative()
    pc, reason = is_point_of_continuity(x)
    return ClassificationReport(
        norm=value,
        in_ball=value <= 1,
        on_sphere=on_sphere,
        extreme=extreme,
        strongly_exposed=extreme,
        witness_antichain=units if extreme else (),
        unit_nodes=units,
        in_sigma=sig,
        in_sigma_plus=sig_plus,
        in_omega=sig and not extreme,
        in_omega_plus=sig_plus and not extreme,
        point_of_continuity=pc,
        pc_reason=reason,
    )


def exposing_functional(x: FinVector) -> Functional:
    report = classify(SpaceId.xt(), x)
    if not report.extreme:
        raise PreconditionError("vector is not an extreme point of the unit ball")
    alpha = report.witness_antichain
    weight = Fraction(1, len(alpha))
    return Functional({s: sign(x[s]) * weight for s in alpha}, kind=x.kind)
