# treespace/ops/adequate.py

import logging
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from ..errors import CertificateError, PreconditionError
from ..families import AdequateFamily, get_family
from ..models import FinVector, Node, SpaceId, SpaceKind, SuperAdpReport, format_fraction, shortlex
from ..settings import settings
from .space import norm

logger = logging.getLogger(__name__)

__all__ = ["family_of", "validate_family", "super_adp_bound"]


def family_of(space: SpaceId) -> AdequateFamily:
    if space.kind in (SpaceKind.XT, SpaceKind.XTINF):
        return get_family("chains")
    if space.kind is SpaceKind.XM:
        return get_family("lambda")
    return get_family(space.family or "")


def validate_family(family: AdequateFamily, nodes: Iterable[Node]) -> None:
    """Check that the family holds every singleton and is hereditary on subsets of the nodes."""
    nodes = sorted(set(nodes), key=shortlex)
    if len(nodes) > settings.enumeration_max_support:
        raise PreconditionError(f"cannot enumerate subsets of {len(nodes)} nodes")
    for n in nodes:
        if not family.contains(frozenset({n})):
            raise CertificateError(f"family {family.name} misses a singleton")
    for r in range(2, len(nodes) + 1):
        for subset in combinations(nodes, r):
            members = frozenset(subset)
            if family.contains(members) and not all(family.contains(members - {n}) for n in members):
                raise CertificateError(f"family {family.name} is not hereditary")


def super_adp_bound(space: SpaceId, m: Node, n: Node, y: FinVector, eps: Fraction,
                    verify: bool = True) -> SuperAdpReport:
    """Largest norm of x + theta y for x = (e_m + e_n)/2 over both real signs."""
    eps = Fraction(eps)
    if eps <= 0:
        raise PreconditionError("eps must be positive")
    family = family_of(space)
    if not family.contains(frozenset({m, n})):
        raise PreconditionError("the pair {m, n} is not in the family")
    half = Fraction(1, 2)
    if not (abs(y[m] - half) < eps and abs(y[n] + half) < eps):
        logger.warning("super adp refused: y is not eps-close to (e_m - e_n)/2 at m and n")
        raise PreconditionError("y must satisfy |y(m) - 1/2| < eps and |y(n) + 1/2| < eps")
    if norm(space, y)[0] > 1:
        raise PreconditionError("y is outside the unit ball")
    x = FinVector({m: half, n: half}, y.kind)
    per_theta = tuple((theta, norm(space, x + y * theta)[0]) for theta in (1, -1))
    value = max(v for _, v in per_theta)
    bound = max(Fraction(3, 2) + 2 * eps, 1 + 4 * eps)
    verdict = "< 2" if eps < Fraction(1, 4) else "inconclusive"
    if verify and value > bound:
        logger.error("super adp value %s exceeds %s", format_fraction(value), format_fraction(bound))
        raise CertificateError(f"value {format_fraction(value)} exceeds the bound {format_fraction(bound)}")
    logger.info("super_adp_bound: value %s, verdict %s", format_fraction(value), verdict)
    return SuperAdpReport(value, per_theta, bound, verdict)
