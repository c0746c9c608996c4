# treespace/ops/renorming.py

import logging
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple, Union

from ..errors import CertificateError, PreconditionError, certify
from ..models import (
    DefianceTranscript, FinVector, Functional, Node, ScdZeroReport, SetId, SliceSpec, SpaceId,
    TreeKind, format_fraction,
)
from .daugavet import positive_slice_defiance
from .dual import dual_norm, evaluate, slice_membership, sup_over
from .space import chain_functional, chain_norm, classify, gauge_norm

logger = logging.getLogger(__name__)

__all__ = [
    "C_GAP", "LAMBDA_THRESHOLD", "c_non_scd_witness", "verify_c_witness", "distance_bound",
    "level_nodes", "scd_zero_constant", "scd_zero_demo", "SELECTORS",
]

C_GAP = Fraction(1, 4)
LAMBDA_THRESHOLD = Fraction(3, 4)


def c_non_scd_witness(x: FinVector, slices: Sequence[SliceSpec], verify: bool = True) -> DefianceTranscript:
    if x.kind is not TreeKind.BINARY:
        raise PreconditionError("this construction runs on the binary tree space")
    for s in slices:
        if s.set is not SetId.C:
            raise PreconditionError(f"slice is over {s.set.value}, expected C")
    report = classify(SpaceId.xt(), x)
    if not (report.in_omega_plus and report.on_sphere):
        logger.warning("c witness refused: x is not a unit vector of Omega+")
        raise PreconditionError("x must be a unit vector of Omega+")
    positive: List[Tuple[int, SliceSpec]] = []
    negative: List[Tuple[int, FinVector]] = []
    for i, s in enumerate(slices):
        top = sup_over(SetId.C, s.functional)
        inner = sup_over(SetId.BPLUS, s.functional).value
        if inner > top.value - s.delta:
            narrowed = s.delta - (top.value - inner)
            positive.append((i, SliceSpec(SetId.BPLUS, s.functional, narrowed)))
        else:
            negative.append((i, top.witness))
    defiance = positive_slice_defiance([s for _, s in positive], avoid=x, verify=verify)
    elements: List[Optional[FinVector]] = [None] * len(slices)
    signs = [0] * len(slices)
    for (i, _), element in zip(positive, defiance.elements):
        elements[i], signs[i] = element, 1
    for i, element in negative:
        elements[i], signs[i] = element, -1
    _, norming = chain_norm(x)
    transcript = DefianceTranscript(
        elements=tuple(elements),
        chain=defiance.chain,
        separator=defiance.separator,
        gap=C_GAP,
        signs=tuple(signs),
        target=x,
        auxiliary=chain_functional(norming),
        start=defiance.start,
        steps=defiance.steps,
    )
    if verify:
        verify_c_witness(transcript, slices)
    logger.info("c_non_scd_witness: %d elements (%d positive), verified=%s",
                len(elements), len(positive), verify)
    return transcript


def verify_c_witness(t: DefianceTranscript, slices: Sequence[SliceSpec]) -> None:
    g, h = t.separator, t.auxiliary
    certify(dual_norm(g)[0] == 1 and dual_norm(h)[0] == 1, "separators do not have dual norm 1")
    certify(evaluate(g, t.target) == 0, "g does not vanish on x")
    certify(evaluate(h, t.target) == 1, "h does not norm x")
    for i, (element, s, side) in enumerate(zip(t.elements, slices, t.signs)):
        certify(slice_membership(element, s), f"element {i} is not in its slice")
        if side > 0:
            certify(evaluate(g, element) == 1, f"g is not 1 on positive element {i}")
        else:
            certify(all(v < 0 for _, v in element.items()), f"element {i} is not in the negative cone")


def distance_bound(t: DefianceTranscript, weights: Sequence[Fraction]) -> Fraction:
    """Lower bound for the norm distance from x to the convex combination with these weights."""
    if len(weights) != len(t.elements) or sum(weights) != 1 or any(w < 0 for w in weights):
        raise PreconditionError("weights must be a convex combination of the selection")
    w = FinVector.zero()
    for weight, element in zip(weights, t.elements):
        w = w + element * weight
    gap = t.target - w
    lam = sum((weight for weight, side in zip(weights, t.signs) if side > 0), Fraction(0))
    probe = t.separator if lam >= LAMBDA_THRESHOLD else t.auxiliary
    bound = abs(evaluate(probe, gap))
    certify(bound >= C_GAP, f"distance certificate {format_fraction(bound)} is below 1/4")
    certify(chain_norm(gap)[0] >= bound, "norm is below its own lower bound")
    return bound


def level_nodes(n: int) -> List[Node]:
    return [tuple((m >> (n - 1 - i)) & 1 for i in range(n)) for m in range(2 ** n)]


def scd_zero_constant(n: int) -> Fraction:
    """Slack constant c(n) in r(n, k) <= 2^-n + c(n)/k.

    A point of the theta-slice of g_s keeps all but a 2^(n-1)/k share of its Omega+ mass on
    the level minus s, so each selection is within 2^n/k of that pattern plus a part below s.
    The patterns cancel between theta = 1 and theta = -1 and the parts below s average to at
    most 2^-n. Selections mixing in one missed level node reach r close to 2^(n-1)/k, so c(n)
    cannot be taken independent of n.
    """
    return Fraction(2 ** n)


Selector = Callable[[Node, int, SliceSpec], FinVector]


def _argmax_selector(s: Node, theta: int, slice_: SliceSpec) -> FinVector:
    return sup_over(SetId.D, slice_.functional).witness


def _shifted_selector(s: Node, theta: int, slice_: SliceSpec) -> FinVector:
    base = _argmax_selector(s, theta, slice_)
    child = s + ((0,) if theta > 0 else (1,))
    return base + FinVector.unit(child, TreeKind.BINARY, theta)


SELECTORS = {"argmax": _argmax_selector, "shifted": _shifted_selector}


def scd_zero_demo(n: int, k: int, selector: Union[str, Selector] = "argmax",
                  verify: bool = True) -> ScdZeroReport:
    """Average one slice point of D per functional g_s and both signs; the result stays near 0."""
    if n < 1 or k < 1:
        raise PreconditionError("n and k must be positive")
    if isinstance(selector, str):
        if selector not in SELECTORS:
            raise PreconditionError(f"unknown selector {selector!r}")
        name, choose = selector, SELECTORS[selector]
    else:
        name, choose = getattr(selector, "__name__", "custom"), selector
    level = level_nodes(n)
    scale = Fraction(1, 2 ** (n - 1))
    total = FinVector.zero()
    for s in level:
        g = Functional({t: scale for t in level if t != s})
        for theta in (1, -1):
            slice_ = SliceSpec(SetId.D, g * theta, Fraction(1, k))
            element = choose(s, theta, slice_)
            if not slice_membership(element, slice_):
                logger.warning("selector %s left the slice at theta=%d", name, theta)
                raise PreconditionError(f"selector {name} returned a point outside its slice")
            total = total + element
    r = chain_norm(total * Fraction(1, 2 ** (n + 1)))[0]
    constant = scd_zero_constant(n)
    bound = Fraction(1, 2 ** n) + constant / k
    report = ScdZeroReport(
        n=n, k=k, selector=name, r=r, envelope=Fraction(4, 2 ** n), constant=constant,
        bound=bound, asserted=bound < 1, holds=r <= bound,
    )
    if verify and report.asserted and not report.holds:
        logger.error("r(%d, %d) = %s exceeds %s", n, k, format_fraction(r), format_fraction(bound))
        raise CertificateError(f"r = {format_fraction(r)} exceeds the bound {format_fraction(bound)}")
    logger.info("scd_zero_demo: n=%d k=%d r=%s", n, k, format_fraction(r))
    return report
