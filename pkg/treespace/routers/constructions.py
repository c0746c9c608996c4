# treespace/routers/constructions.py

import numpy as np
from fastapi import APIRouter

from .. import ops, schemas
from ..models import TreeKind, TreeShape
from . import translate_errors

router = APIRouter(
    prefix="/constructions",
    tags=["Constructions"],
)

BINARY = TreeKind.BINARY
COUNTABLE = TreeKind.COUNTABLE


@router.post("/balance", response_model=schemas.BalanceOut)
def balance(body: schemas.RowsRequest):
    """Balances the signs of the given rows within 2^k."""
    with translate_errors():
        problem = schemas.rows_from(body.rows)
        result = ops.balance_signs(problem)
        ops.verify_signs(problem, result.theta)
        return schemas.balance_to(result)


@router.post("/daugavet", response_model=schemas.DaugavetOut)
def daugavet(body: schemas.VectorSliceRequest):
    """Builds y in the slice with norm(x + y) = 2."""
    with translate_errors():
        x = schemas.vector_from(body.vector, BINARY)
        witness = ops.daugavet_witness(x, schemas.slice_from(body.slice, BINARY), verify=body.verify)
        return schemas.daugavet_to(witness)


@router.post("/defy-slices", response_model=schemas.TranscriptOut)
def defy_slices(body: schemas.SlicesRequest):
    """Selects one point per positive slice, all summing along a single chain."""
    with translate_errors():
        slices = [schemas.slice_from(s, BINARY) for s in body.slices]
        avoid = schemas.vector_from(body.avoid, BINARY) if body.avoid is not None else None
        return schemas.transcript_to(ops.positive_slice_defiance(slices, avoid=avoid, verify=body.verify))


@router.post("/defy-pibase", response_model=schemas.TranscriptOut)
def defy_pibase(body: schemas.NbhdsRequest):
    """Selects signed points of Sigma from each neighborhood."""
    with translate_errors():
        nbhds = [schemas.nbhd_from(w, body.kind) for w in body.nbhds]
        return schemas.transcript_to(ops.sigma_pibase_defiance(nbhds, verify=body.verify))


@router.post("/adp", response_model=schemas.AdpOut)
def adp(body: schemas.VectorSliceRequest):
    """Builds a strongly exposed y and a sign theta with norm(x + theta y) = 2."""
    with translate_errors():
        x = schemas.vector_from(body.vector, BINARY)
        return schemas.adp_to(ops.adp_witness(x, schemas.slice_from(body.slice, BINARY), verify=body.verify))


@router.post("/c-witness", response_model=schemas.TranscriptOut)
def c_witness(body: schemas.CWitnessRequest):
    """Builds the selection that keeps convex combinations a quarter away from x."""
    with translate_errors():
        x = schemas.vector_from(body.vector, BINARY)
        slices = [schemas.slice_from(s, BINARY) for s in body.slices]
        return schemas.transcript_to(ops.c_non_scd_witness(x, slices, verify=body.verify))


@router.post("/pc-approx", response_model=schemas.VectorOut)
def pc_approx(body: schemas.PcApproxRequest):
    """Returns a point of continuity small on every functional."""
    with translate_errors():
        fs = [schemas.functional_from(f, body.kind) for f in body.functionals]
        shape = TreeShape(body.kind) if not fs else None
        x = ops.pc_approximant(fs, schemas.parse_rational(body.eps), shape, verify=body.verify)
        return schemas.VectorOut(vector=schemas.vector_to(x))


@router.post("/pc-near", response_model=schemas.VectorOut)
def pc_near(body: schemas.PcNearRequest):
    """Returns a point of continuity inside the neighborhood."""
    with translate_errors():
        w = schemas.nbhd_from(body.nbhd, body.kind)
        return schemas.VectorOut(vector=schemas.vector_to(ops.pc_near(w.center, w, verify=body.verify)))


@router.post("/reduce-infty", response_model=schemas.ReductionOut)
def reduce_infty(body: schemas.ReduceRequest):
    """Prunes a countably branching functional to a finitely branching tree."""
    with translate_errors():
        f = schemas.functional_from(body.functional, COUNTABLE)
        reduction = ops.finitely_branching_reduction(f, schemas.parse_rational(body.eps), verify=body.verify)
        return schemas.reduction_to(reduction)


@router.post("/pibase-infty", response_model=schemas.PibaseOut)
def pibase_infty(body: schemas.PibaseRequest):
    """Builds the basic neighborhood witness on the countable tree."""
    with translate_errors():
        w = schemas.nbhd_from(body.nbhd, COUNTABLE)
        rng = np.random.default_rng(body.seed)
        witness = ops.pibase_basic_witness(w, rng=rng, samples=body.samples, verify=body.verify)
        return schemas.pibase_to(witness)


@router.post("/scd-zero", response_model=schemas.ScdZeroOut)
def scd_zero(body: schemas.ScdZeroRequest):
    """Reports the averaged slice selections for the level-n functionals."""
    with translate_errors():
        return schemas.scd_zero_to(ops.scd_zero_demo(body.n, body.k, body.selector, verify=body.verify))


@router.post("/super-adp", response_model=schemas.SuperAdpOut)
def super_adp(body: schemas.SuperAdpRequest):
    """Reports the two-point value for an adequate family."""
    with translate_errors():
        space = schemas.parse_space(body.space)
        kind = space.tree_kind
        y = schemas.vector_from(body.vector, kind)
        m, n = schemas.parse_node(body.m, kind), schemas.parse_node(body.n, kind)
        report = ops.super_adp_bound(space, m, n, y, schemas.parse_rational(body.eps), verify=body.verify)
        return schemas.super_adp_to(report)
