# treespace/ops/daugavet.py

import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Set

from ..errors import PreconditionError, certify
from ..models import (
    ROOT, AdpWitness, DaugavetWitness, DefianceTranscript, FinVector, FreshMode, Node, SetId,
    SliceSpec, SpaceId, TreeKind, format_node, shortlex, sign,
)
from .dual import cutoff_depth, dual_norm, evaluate, slice_membership, sup_over
from .space import chain_functional, chain_norm, classify
from .tree import ancestors, ancestors_or_self, fresh_node, is_prefix

logger = logging.getLogger(__name__)

__all__ = [
    "daugavet_witness", "verify_daugavet", "positive_slice_defiance", "verify_positive_defiance",
    "omega_witness", "adp_witness", "verify_adp",
]


def _require_binary(x: FinVector) -> None:
    if x.kind is not TreeKind.BINARY:
        raise PreconditionError("this construction runs on the binary tree space")


def _require_set(slice_: SliceSpec, expected: SetId) -> None:
    if slice_.set is not expected:
        raise PreconditionError(f"slice is over {slice_.set.value}, expected {expected.value}")


def daugavet_witness(x: FinVector, slice_: SliceSpec, verify: bool = True) -> DaugavetWitness:
    _require_binary(x)
    _require_set(slice_, SetId.BPLUS)
    value, chain = chain_norm(x)
    if not x.is_nonnegative() or value != 1:
        logger.warning("daugavet witness refused: x is not a positive unit vector")
        raise PreconditionError("x must be a nonnegative vector of norm 1")
    f = slice_.functional
    y0 = sup_over(SetId.BPLUS, f).witness
    end = chain[-1]
    depth = max(x.max_depth(), y0.max_depth(), cutoff_depth(f)) + 2
    anchor = fresh_node(end, (), x.kind, min_depth=depth, accept=lambda s: f.coefficient(s) >= 0)
    lam = sum((y0[a] for a in ancestors(anchor)), Fraction(0))
    y = y0 + FinVector.unit(anchor, x.kind, 1 - lam)
    certificate = tuple(t for t in ancestors_or_self(anchor) if x[t] or y[t])
    witness = DaugavetWitness(x, y, certificate, anchor, lam, chain_norm(x + y)[0])
    logger.debug("daugavet anchor %s with lambda %s", format_node(anchor), lam)
    if verify:
        verify_daugavet(witness, slice_)
    logger.info("daugavet_witness: 1 element, verified=%s", verify)
    return witness


def verify_daugavet(w: DaugavetWitness, slice_: SliceSpec) -> None:
    certify(slice_membership(w.y, slice_), "y is not in the slice")
    certify(w.y.is_nonnegative() and chain_norm(w.y)[0] <= 1, "y is not in the positive ball")
    certify(sum((w.x[t] for t in w.chain), Fraction(0)) == 1, "x does not sum to 1 along the chain")
    certify(sum((w.y[t] for t in w.chain), Fraction(0)) == 1, "y does not sum to 1 along the chain")
    certify(w.value == 2, "norm of x + y is not 2")


def positive_slice_defiance(slices: Sequence[SliceSpec], avoid: Optional[FinVector] = None,
                            verify: bool = True) -> DefianceTranscript:
    """Pick one point per positive slice so that all of them sum to 1 along a single chain."""
    for s in slices:
        _require_set(s, SetId.BPLUS)
    start: Optional[Node] = None
    taken: Set[Node] = set()
    if avoid is not None:
        _require_binary(avoid)
        if not classify(SpaceId.xt(), avoid).in_omega_plus:
            logger.warning("positive defiance refused: avoided vector is not in Omega+")
            raise PreconditionError("the avoided vector must be a {0,1} vector on a non-maximal antichain")
        start = fresh_node(ROOT, avoid.support, avoid.kind, FreshMode.INCOMPARABLE)
        taken |= avoid.support
    end = start if start is not None else ROOT
    elements: List[FinVector] = []
    steps: List[str] = []
    for s in slices:
        f = s.functional
        result = sup_over(SetId.BPLUS, f)
        y0, alpha = result.witness, result.antichain
        line = set(ancestors_or_self(end))
        below = sorted((a for a in alpha if is_prefix(end, a) and a != end), key=shortlex)
        if line & set(alpha):
            x, step = y0, "meets chain"
        elif below:
            end = below[0]
            x, step = y0, f"extends chain to {format_node(end)}"
        else:
            taken |= y0.support
            anchor = fresh_node(end, taken, f.kind, accept=lambda t: f.coefficient(t) >= 0)
            x = y0 + FinVector.unit(anchor, f.kind)
            end = anchor
            step = f"fresh node {format_node(anchor)}"
        taken |= x.support
        elements.append(x)
        steps.append(step)
        logger.debug("defiance step %d: %s", len(elements), step)
    chain = tuple(ancestors_or_self(end))
    transcript = DefianceTranscript(
        elements=tuple(elements),
        chain=chain,
        separator=chain_functional(chain),
        gap=Fraction(1),
        target=avoid,
        start=start,
        steps=tuple(steps),
    )
    if verify:
        verify_positive_defiance(transcript, slices)
    logger.info("positive_slice_defiance: %d elements, verified=%s", len(elements), verify)
    return transcript


def verify_positive_defiance(t: DefianceTranscript, slices: Sequence[SliceSpec]) -> None:
    g = t.separator
    certify(dual_norm(g)[0] == 1, "separator does not have dual norm 1")
    total = FinVector.zero()
    for i, (x, s) in enumerate(zip(t.elements, slices)):
        certify(slice_membership(x, s), f"element {i} is not in its slice")
        certify(evaluate(g, x) == 1, f"separator does not take the value 1 on element {i}")
        total = total + x
    certify(chain_norm(total)[0] == len(t.elements), "the elements do not add up in norm")
    if t.target is not None:
        certify(evaluate(g, t.target) == 0, "separator does not vanish on the avoided vector")


def omega_witness(x: FinVector, slices: Sequence[SliceSpec], verify: bool = True) -> DefianceTranscript:
    """Slices of B+ whose selections stay a fixed distance from a point of Omega+."""
    return positive_slice_defiance(slices, avoid=x, verify=verify)


def adp_witness(x: FinVector, slice_: SliceSpec, verify: bool = True) -> AdpWitness:
    _require_binary(x)
    _require_set(slice_, SetId.BX)
    value, chain = chain_norm(x)
    if value != 1:
        raise PreconditionError("x must have norm 1")
    result = sup_over(SetId.BX, slice_.functional)
    y, alpha = result.witness, result.antichain
    end = chain[-1]
    deepest = max(len(a) for a in alpha)
    path_end = end + (0,) * max(0, deepest - len(end))
    line = ancestors_or_self(path_end)
    meeting = next(a for a in alpha if a in set(line))
    theta = sign(x[meeting]) * sign(y[meeting])
    combined = x + y * theta
    certificate = tuple(t for t in line if combined[t])
    witness = AdpWitness(x, y, theta, alpha, certificate, meeting, chain_norm(combined)[0])
    if verify:
        verify_adp(witness, slice_)
    logger.info("adp_witness: theta=%d, verified=%s", theta, verify)
    return witness


def verify_adp(w: AdpWitness, slice_: SliceSpec) -> None:
    certify(classify(SpaceId.xt(), w.y).strongly_exposed, "y is not strongly exposed")
    certify(slice_membership(w.y, slice_), "y is not in the slice")
    combined = w.x + w.y * w.theta
    along = sum((abs(combined[t]) for t in w.chain), Fraction(0))
    certify(along == 2 and w.value == 2, "norm of x + theta y is not 2")
