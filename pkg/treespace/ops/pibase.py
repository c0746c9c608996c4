# treespace/ops/pibase.py

import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set

import numpy as np

from ..errors import PreconditionError, certify
from ..models import (
    ROOT, DefianceTranscript, FinVector, Functional, Node, PibaseTerm, PibaseWitness, Reduction,
    Relation, SetId, TreeKind, TreeShape, WeakNbhdSpec, format_fraction, format_node, shortlex, sign,
)
from .continuity import pc_near
from .dual import dual_norm, evaluate, nbhd_membership, restrict_functional
from .infinite import finitely_branching_reduction, padding_letter, union_shapes
from .space import chain_norm, in_sigma, is_point_of_continuity
from .tree import compare, fresh_node, hull

logger = logging.getLogger(__name__)

__all__ = [
    "sigma_pibase_defiance", "verify_sigma_defiance", "pibase_basic_witness", "verify_pibase",
    "sample_nbhd_members",
]


def sigma_pibase_defiance(nbhds: Sequence[WeakNbhdSpec], verify: bool = True) -> DefianceTranscript:
    """One point per neighborhood of Sigma, signed so that they add up in norm along a chain."""
    for w in nbhds:
        if w.set is not SetId.SIGMA:
            raise PreconditionError(f"neighborhood is over {w.set.value}, expected SIGMA")
        if not in_sigma(w.center):
            raise PreconditionError("neighborhood center is not in Sigma")
        if any(not f.is_finitely_supported() for f, _ in w.constraints):
            raise PreconditionError("constraint functionals must be finitely supported")
    kind = nbhds[0].center.kind if nbhds else TreeKind.BINARY
    chain: List[Node] = []
    taken: Set[Node] = set()
    z = FinVector.zero(kind)
    elements: List[FinVector] = []
    signs: List[int] = []
    steps: List[str] = []
    for w in nbhds:
        c = w.center
        units = [s for s in sorted(c.support, key=shortlex)
                 if all(compare(s, a) is not Relation.INCOMPARABLE for a in chain)]
        if units:
            s = units[0]
            x = c
            if s in chain:
                theta = sign(z[s]) * sign(c[s])
                steps.append(f"center meets chain at {format_node(s)}")
            else:
                theta = 1
                steps.append(f"center extends chain at {format_node(s)}")
        else:
            blocked = set(taken)
            for f, _ in w.constraints:
                blocked |= set(f.finite)
            start = max(chain, key=len) if chain else ROOT
            s = fresh_node(start, blocked, c.kind,
                           accept=lambda t: all(abs(f.coefficient(t)) < eps for f, eps in w.constraints))
            x = c + FinVector.unit(s, c.kind)
            theta = 1
            steps.append(f"fresh node {format_node(s)}")
        if s not in chain:
            chain.append(s)
        chain.sort(key=len)
        taken |= x.support
        z = z + x * theta
        elements.append(x)
        signs.append(theta)
        logger.debug("sigma defiance step %d: %s", len(elements), steps[-1])
    separator = Functional({t: sign(z[t]) for t in chain}, kind=kind)
    transcript = DefianceTranscript(
        elements=tuple(elements),
        chain=tuple(chain),
        separator=separator,
        gap=Fraction(1),
        signs=tuple(signs),
        steps=tuple(steps),
    )
    if verify:
        verify_sigma_defiance(transcript, nbhds)
    logger.info("sigma_pibase_defiance: %d elements, verified=%s", len(elements), verify)
    return transcript


def verify_sigma_defiance(t: DefianceTranscript, nbhds: Sequence[WeakNbhdSpec]) -> None:
    certify(dual_norm(t.separator)[0] == (1 if t.chain else 0), "separator does not have dual norm 1")
    z = FinVector.zero(t.separator.kind)
    for i, (x, theta, w) in enumerate(zip(t.elements, t.signs, nbhds)):
        certify(nbhd_membership(x, w), f"element {i} is not in its neighborhood")
        certify(evaluate(t.separator, x * theta) == 1, f"separator is not 1 on element {i}")
        z = z + x * theta
    for node in t.chain:
        values = [theta * x[node] for x, theta in zip(t.elements, t.signs) if x[node]]
        certify(all(v > 0 for v in values) or all(v < 0 for v in values),
                f"signed coordinates disagree at {format_node(node)}")
    certify(chain_norm(z)[0] == len(t.elements), "signed sum does not have norm n")


def _chain_weight(x: FinVector) -> int:
    return int(chain_norm(FinVector.indicator(x.support, x.kind))[0])


def pibase_basic_witness(w: WeakNbhdSpec, rng: Optional[np.random.Generator] = None, samples: int = 0,
                         verify: bool = True) -> PibaseWitness:
    """A basic neighborhood W(x0, delta0) inside w, for the ball of the countably branching space."""
    if w.set is not SetId.BX:
        raise PreconditionError(f"neighborhood is over {w.set.value}, expected BX")
    center = w.center
    if center.kind is not TreeKind.COUNTABLE:
        raise PreconditionError("the basic witness runs on the countably branching tree")
    if chain_norm(center)[0] > 1:
        raise PreconditionError("neighborhood center is outside the unit ball")
    fs = [f for f, _ in w.constraints]
    eps = min((e for _, e in w.constraints), default=Fraction(1))
    padding = padding_letter(fs, [center])
    reductions: List[Reduction] = [finitely_branching_reduction(f, eps / 4, padding, verify) for f in fs]
    shape = union_shapes([r.shape for r in reductions], center.support, padding)
    restricted = [restrict_functional(f, shape) for f in fs]
    local = WeakNbhdSpec(SetId.BX, center, tuple((f, eps / 4) for f in restricted))
    x0 = pc_near(center, local, shape, verify)
    m = max([Fraction(1)] + [dual_norm(f)[0] for f in fs])
    c = max(1, _chain_weight(x0))
    delta0 = eps / (8 * c * m)
    terms = tuple(
        PibaseTerm(
            residual=abs(evaluate(f, x0 - center)),
            diameter_term=eps * dual_norm(f)[0] / (4 * m),
            tail_term=2 * r.pruned_mass,
        )
        for f, r in zip(fs, reductions)
    )
    pruned = tuple(p for r in reductions for p in r.pruned)
    merged = Reduction(shape, (), pruned, sum((r.pruned_mass for r in reductions), Fraction(0)), eps / 4)
    witness = PibaseWitness(x0, delta0, eps, merged, terms)
    checked = 0
    if verify:
        verify_pibase(witness, w, shape)
        if samples:
            rng = rng if rng is not None else np.random.default_rng(0)
            for y in sample_nbhd_members(x0, delta0, rng, samples, padding):
                certify(nbhd_membership(y, w), "a sampled member of W(x0, delta0) left the neighborhood")
                checked += 1
    logger.info("pibase_basic_witness: delta0 %s, %d spot checks, verified=%s",
                format_fraction(delta0), checked, verify)
    return PibaseWitness(x0, delta0, eps, merged, terms, checked)


def verify_pibase(p: PibaseWitness, w: WeakNbhdSpec, shape: TreeShape) -> None:
    pc, reason = is_point_of_continuity(p.x0, shape)
    certify(pc, f"x0 is not a point of continuity of the reduced ball: {reason}")
    certify(nbhd_membership(p.x0, w), "x0 is not in the neighborhood")
    for (f, eps), term in zip(w.constraints, p.terms):
        certify(term.residual < p.epsilon / 4, "x0 is too far from the center")
        certify(term.tail_term < p.epsilon / 2, "pruned mass exceeds its budget")
        certify(term.total < eps, "inequality chain does not close below eps")


def sample_nbhd_members(x0: FinVector, delta0: Fraction, rng: np.random.Generator, count: int,
                        letters: int = 2) -> List[FinVector]:
    """Random points (1 - delta0/2) x0 + p of the ball with p of total mass delta0/4."""
    base = x0 * (1 - delta0 / 2)
    pool = sorted(hull(x0.support) | x0.support, key=shortlex)
    out: List[FinVector] = []
    for _ in range(count):
        size = int(rng.integers(1, 4))
        nodes: Dict[Node, int] = {}
        for _ in range(size):
            anchor = pool[int(rng.integers(0, len(pool)))] if pool else ROOT
            tail = tuple(int(v) for v in rng.integers(0, letters + 1, size=int(rng.integers(0, 3))))
            node = anchor + tail
            nodes[node] = nodes.get(node, 0) + int(rng.integers(-9, 10))
        total = sum(abs(v) for v in nodes.values())
        if not total:
            out.append(base)
            continue
        perturbation = FinVector({n: Fraction(v) * delta0 / (4 * total) for n, v in nodes.items()}, x0.kind)
        out.append(base + perturbation)
    return out
