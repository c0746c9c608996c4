# treespace/schemas.py

import re
from fractions import Fraction
from typing import List, Optional, Sequence

from pydantic import BaseModel

from .errors import MalformedInputError
from .models import (
    AdpWitness, Branch, BranchPart, ClassificationReport, DaugavetWitness, DefianceTranscript,
    DualCertificate, FinVector, Functional, Node, NormCertificate, PibaseWitness, Reduction, SetId,
    SignProblem, SignResult, ScdZeroReport, SliceSpec, SpaceId, SpaceKind, SupResult,
    SuperAdpReport, TreeKind, WeakNbhdSpec, format_fraction, format_node,
)
from .ops.tree import parse_node

_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")
_ADEQUATE = re.compile(r"^ADEQUATE[(:]([a-z_]+)\)?$")


class VectorEntry(BaseModel):
    node: str
    coeff: str


class OverrideEntry(BaseModel):
    depth: int
    coeff: str


class BranchPartSchema(BaseModel):
    prefix: str = ""
    period: str
    overrides: List[OverrideEntry] = []
    tail: str


class FunctionalSchema(BaseModel):
    finite: List[VectorEntry] = []
    branches: List[BranchPartSchema] = []


class SliceSchema(BaseModel):
    set: SetId
    functional: FunctionalSchema
    delta: str


class ConstraintSchema(BaseModel):
    functional: FunctionalSchema
    eps: str


class NbhdSchema(BaseModel):
    set: SetId
    center: List[VectorEntry] = []
    constraints: List[ConstraintSchema] = []


class NormOut(BaseModel):
    value: str
    certificate: List[str]
    family: Optional[str] = None


class DualNormOut(BaseModel):
    value: str
    antichain: List[str]
    signs: List[int]
    attained: bool = True


class SupOut(BaseModel):
    set: SetId
    value: str
    witness: List[VectorEntry]
    antichain: List[str]
    attained: bool = True


class ClassifyOut(BaseModel):
    norm: str
    in_ball: bool
    on_sphere: bool
    extreme: bool
    strongly_exposed: bool
    witness_antichain: List[str]
    in_Sigma: bool
    in_Sigma_plus: bool
    in_Omega: bool
    in_Omega_plus: bool
    point_of_continuity: bool
    pc_reason: str
    exposing_functional: Optional[FunctionalSchema] = None


class GaugeOut(BaseModel):
    norm: str
    gauge: str
    d_gauge: Optional[str] = None


class BruteForceOut(BaseModel):
    theta: List[int]
    value: str


class BalanceOut(BaseModel):
    theta: List[int]
    sums: List[str]
    bound: int
    merges: List[List[int]] = []
    brute_force: Optional[BruteForceOut] = None


class DaugavetOut(BaseModel):
    y: List[VectorEntry]
    chain: List[str]
    anchor: str
    lam: str
    value: str


class TranscriptOut(BaseModel):
    elements: List[List[VectorEntry]]
    signs: List[int] = []
    chain: List[str]
    separator: FunctionalSchema
    gap: str
    auxiliary: Optional[FunctionalSchema] = None
    start: Optional[str] = None
    steps: List[str] = []


class AdpOut(BaseModel):
    y: List[VectorEntry]
    theta: int
    antichain: List[str]
    chain: List[str]
    meeting_node: str
    value: str


class ReductionOut(BaseModel):
    levels: List[List[str]]
    children: List[dict]
    branches: List[dict]
    padding: int
    pruned: List[VectorEntry]
    pruned_mass: str


class PibaseTermOut(BaseModel):
    residual: str
    diameter_term: str
    tail_term: str
    total: str


class PibaseOut(BaseModel):
    x0: List[VectorEntry]
    delta0: str
    epsilon: str
    terms: List[PibaseTermOut]
    pruned_mass: str
    spot_checks: int = 0


class ScdZeroOut(BaseModel):
    n: int
    k: int
    selector: str
    r: str
    envelope: str
    constant: str
    bound: str
    asserted: bool
    holds: bool


class SuperAdpOut(BaseModel):
    value: str
    per_theta: List[dict]
    bound: str
    verdict: str


# --- parsing ---

def parse_rational(text: str) -> Fraction:
    if not isinstance(text, str) or not _RATIONAL.match(text.strip()):
        raise MalformedInputError(f"invalid rational {text!r}, expected p/q")
    value = text.strip()
    if "/" in value and int(value.split("/")[1]) == 0:
        raise MalformedInputError(f"zero denominator in {text!r}")
    return Fraction(value)


def parse_space(text: str) -> SpaceId:
    text = (text or "").strip()
    simple = {"T": SpaceId.xt, "XT": SpaceId.xt, "TINF": SpaceId.xtinf, "XTINF": SpaceId.xtinf,
              "M": SpaceId.xm, "XM": SpaceId.xm}
    if text.upper() in simple:
        return simple[text.upper()]()
    match = _ADEQUATE.match(text)
    if match:
        return SpaceId(SpaceKind.ADEQUATE, match.group(1))
    raise MalformedInputError(f"unknown space {text!r}")


def parse_word(text: str, kind: TreeKind) -> Node:
    return () if text in ("", "eps") else parse_node(text, kind)


def vector_from(entries: Sequence[VectorEntry], kind: TreeKind) -> FinVector:
    seen = set()
    pairs = []
    for e in entries:
        node = parse_node(e.node, kind)
        if node in seen:
            raise MalformedInputError(f"node {e.node} appears twice")
        seen.add(node)
        pairs.append((node, parse_rational(e.coeff)))
    return FinVector(pairs, kind)


def functional_from(schema: FunctionalSchema, kind: TreeKind) -> Functional:
    finite = vector_from(schema.finite, kind).entries
    parts = []
    for b in schema.branches:
        period = parse_word(b.period, kind)
        if not period:
            raise MalformedInputError("branch period must be nonempty")
        try:
            branch = Branch(parse_word(b.prefix, kind), period)
            overrides = tuple((o.depth, parse_rational(o.coeff)) for o in b.overrides)
            parts.append(BranchPart(branch, parse_rational(b.tail), overrides))
        except ValueError as e:
            raise MalformedInputError(str(e)) from e
    return Functional(finite, parts, kind)


def slice_from(schema: SliceSchema, kind: TreeKind) -> SliceSpec:
    try:
        return SliceSpec(schema.set, functional_from(schema.functional, kind), parse_rational(schema.delta))
    except ValueError as e:
        if isinstance(e, MalformedInputError):
            raise
        raise MalformedInputError(str(e)) from e


def nbhd_from(schema: NbhdSchema, kind: TreeKind) -> WeakNbhdSpec:
    constraints = tuple((functional_from(c.functional, kind), parse_rational(c.eps)) for c in schema.constraints)
    try:
        return WeakNbhdSpec(schema.set, vector_from(schema.center, kind), constraints)
    except ValueError as e:
        if isinstance(e, MalformedInputError):
            raise
        raise MalformedInputError(str(e)) from e


def rows_from(rows: Sequence[Sequence[str]]) -> SignProblem:
    if not rows or not all(isinstance(r, (list, tuple)) for r in rows):
        raise MalformedInputError("rows must be a nonempty list of lists")
    if len({len(r) for r in rows}) != 1:
        raise MalformedInputError("rows must have equal length")
    return SignProblem(tuple(tuple(parse_rational(str(a)) for a in row) for row in rows))


# --- serialization ---

def nodes_to(nodes: Sequence[Node], kind: TreeKind) -> List[str]:
    return [format_node(n, kind) for n in nodes]


def vector_to(x: FinVector) -> List[VectorEntry]:
    return [VectorEntry(node=format_node(n, x.kind), coeff=format_fraction(v)) for n, v in x.items()]


def _word_to(word: Node, kind: TreeKind) -> str:
    return format_node(word, kind) if word else ""


def functional_to(f: Functional) -> FunctionalSchema:
    finite = vector_to(FinVector(f.finite, f.kind))
    branches = [
        BranchPartSchema(
            prefix=_word_to(p.branch.prefix, f.kind),
            period=_word_to(p.branch.period, f.kind),
            overrides=[OverrideEntry(depth=d, coeff=format_fraction(v)) for d, v in p.overrides],
            tail=format_fraction(p.tail),
        )
        for p in f.branches
    ]
    return FunctionalSchema(finite=finite, branches=branches)


def norm_to(cert: NormCertificate, kind: TreeKind, family: bool = False) -> NormOut:
    return NormOut(value=format_fraction(cert.value), certificate=nodes_to(cert.optimal_set, kind),
                   family=cert.family if family else None)


def dual_norm_to(cert: DualCertificate, kind: TreeKind) -> DualNormOut:
    return DualNormOut(value=format_fraction(cert.value), antichain=nodes_to(cert.antichain, kind),
                       signs=list(cert.signs), attained=cert.attained)


def sup_to(result: SupResult, kind: TreeKind) -> SupOut:
    return SupOut(set=result.set, value=format_fraction(result.value), witness=vector_to(result.witness),
                  antichain=nodes_to(result.antichain, kind), attained=result.attained)


def classify_to(report: ClassificationReport, exposing: Optional[Functional] = None) -> ClassifyOut:
    return ClassifyOut(
        norm=format_fraction(report.norm),
        in_ball=report.in_ball,
        on_sphere=report.on_sphere,
        extreme=report.extreme,
        strongly_exposed=report.strongly_exposed,
        witness_antichain=nodes_to(report.witness_antichain, TreeKind.BINARY),
        in_Sigma=report.in_sigma,
        in_Sigma_plus=report.in_sigma_plus,
        in_Omega=report.in_omega,
        in_Omega_plus=report.in_omega_plus,
        point_of_continuity=report.point_of_continuity,
        pc_reason=report.pc_reason,
        exposing_functional=functional_to(exposing) if exposing is not None else None,
    )


def balance_to(result: SignResult) -> BalanceOut:
    return BalanceOut(theta=list(result.theta), sums=[format_fraction(s) for s in result.sums],
                      bound=result.bound, merges=[list(p) for p in result.merges])


def daugavet_to(w: DaugavetWitness) -> DaugavetOut:
    kind = w.y.kind
    return DaugavetOut(y=vector_to(w.y), chain=nodes_to(w.chain, kind), anchor=format_node(w.anchor, kind),
                       lam=format_fraction(w.lam), value=format_fraction(w.value))


def transcript_to(t: DefianceTranscript) -> TranscriptOut:
    kind = t.separator.kind
    return TranscriptOut(
        elements=[vector_to(x) for x in t.elements],
        signs=list(t.signs),
        chain=nodes_to(t.chain, kind),
        separator=functional_to(t.separator),
        gap=format_fraction(t.gap),
        auxiliary=functional_to(t.auxiliary) if t.auxiliary is not None else None,
        start=format_node(t.start, kind) if t.start is not None else None,
        steps=list(t.steps),
    )


def adp_to(w: AdpWitness) -> AdpOut:
    kind = w.y.kind
    return AdpOut(y=vector_to(w.y), theta=w.theta, antichain=nodes_to(w.antichain, kind),
                  chain=nodes_to(w.chain, kind), meeting_node=format_node(w.meeting_node, kind),
                  value=format_fraction(w.value))


def reduction_to(r: Reduction) -> ReductionOut:
    kind = r.shape.kind
    return ReductionOut(
        levels=[nodes_to(level, kind) for level in r.levels],
        children=[{"node": format_node(t, kind), "children": nodes_to(kids, kind)} for t, kids in r.shape.explicit],
        branches=[{"prefix": _word_to(b.prefix, kind), "period": _word_to(b.period, kind)} for b in r.shape.branches],
        padding=r.shape.padding,
        pruned=[VectorEntry(node=format_node(n, kind), coeff=format_fraction(m)) for n, m in r.pruned],
        pruned_mass=format_fraction(r.pruned_mass),
    )


def pibase_to(p: PibaseWitness) -> PibaseOut:
    return PibaseOut(
        x0=vector_to(p.x0),
        delta0=format_fraction(p.delta0),
        epsilon=format_fraction(p.epsilon),
        terms=[PibaseTermOut(residual=format_fraction(t.residual), diameter_term=format_fraction(t.diameter_term),
                             tail_term=format_fraction(t.tail_term), total=format_fraction(t.total))
               for t in p.terms],
        pruned_mass=format_fraction(p.reduction.pruned_mass),
        spot_checks=p.spot_checks,
    )


def scd_zero_to(r: ScdZeroReport) -> ScdZeroOut:
    return ScdZeroOut(n=r.n, k=r.k, selector=r.selector, r=format_fraction(r.r),
                      envelope=format_fraction(r.envelope), constant=format_fraction(r.constant),
                      bound=format_fraction(r.bound), asserted=r.asserted, holds=r.holds)


def super_adp_to(r: SuperAdpReport) -> SuperAdpOut:
    return SuperAdpOut(value=format_fraction(r.value),
                       per_theta=[{"theta": t, "value": format_fraction(v)} for t, v in r.per_theta],
                       bound=format_fraction(r.bound), verdict=r.verdict)


# --- request bodies ---

class VectorOut(BaseModel):
    vector: List[VectorEntry]


class ValueOut(BaseModel):
    value: str


class MembershipOut(BaseModel):
    member: bool


class SmallTailOut(BaseModel):
    branches: List[dict]
    level: int


class VectorRequest(BaseModel):
    space: str = "T"
    vector: List[VectorEntry] = []


class ProjectRequest(VectorRequest):
    nodes: List[str] = []


class ShiftRequest(VectorRequest):
    node: str = "eps"
    inverse: bool = False


class FunctionalRequest(BaseModel):
    kind: TreeKind = TreeKind.BINARY
    functional: FunctionalSchema


class SupRequest(FunctionalRequest):
    set: SetId


class LBetaRequest(FunctionalRequest):
    prefix: str = ""
    period: str


class NodeFunctionalRequest(FunctionalRequest):
    node: str = "eps"


class SmallTailRequest(BaseModel):
    kind: TreeKind = TreeKind.BINARY
    functionals: List[FunctionalSchema]
    threshold: str


class SliceMembershipRequest(BaseModel):
    kind: TreeKind = TreeKind.BINARY
    vector: List[VectorEntry] = []
    slice: SliceSchema


class RowsRequest(BaseModel):
    rows: List[List[str]]


class VectorSliceRequest(BaseModel):
    vector: List[VectorEntry] = []
    slice: SliceSchema
    verify: bool = True


class SlicesRequest(BaseModel):
    slices: List[SliceSchema]
    avoid: Optional[List[VectorEntry]] = None
    verify: bool = True


class NbhdsRequest(BaseModel):
    kind: TreeKind = TreeKind.BINARY
    nbhds: List[NbhdSchema]
    verify: bool = True


class CWitnessRequest(BaseModel):
    vector: List[VectorEntry] = []
    slices: List[SliceSchema]
    verify: bool = True


class PcApproxRequest(BaseModel):
    kind: TreeKind = TreeKind.BINARY
    functionals: List[FunctionalSchema] = []
    eps: str
    verify: bool = True


class PcNearRequest(BaseModel):
    kind: TreeKind = TreeKind.BINARY
    nbhd: NbhdSchema
    verify: bool = True


class ReduceRequest(BaseModel):
    functional: FunctionalSchema
    eps: str
    verify: bool = True


class PibaseRequest(BaseModel):
    nbhd: NbhdSchema
    samples: int = 0
    seed: int = 0
    verify: bool = True


class ScdZeroRequest(BaseModel):
    n: int
    k: int
    selector: str = "argmax"
    verify: bool = True


class SuperAdpRequest(BaseModel):
    space: str = "T"
    m: str
    n: str
    vector: List[VectorEntry] = []
    eps: str
    verify: bool = True


def branch_from(prefix: str, period: str, kind: TreeKind) -> Branch:
    word = parse_word(period, kind)
    if not word:
        raise MalformedInputError("branch period must be nonempty")
    return Branch(parse_word(prefix, kind), word)


def branch_to(b: Branch, kind: TreeKind) -> dict:
    return {"prefix": _word_to(b.prefix, kind), "period": _word_to(b.period, kind)}


class CheckOut(BaseModel):
    name: str
    cases: int
    passed: bool
    detail: str = ""


class SuiteOut(BaseModel):
    seed: int
    quick: bool
    passed: bool
    checks: List[CheckOut]
