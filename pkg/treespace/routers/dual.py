# treespace/routers/dual.py

from fastapi import APIRouter

from .. import ops, schemas
from ..models import format_fraction
from . import translate_errors

router = APIRouter(
    prefix="/dual",
    tags=["Dual"],
)


@router.post("/norm", response_model=schemas.DualNormOut)
def compute_dual_norm(body: schemas.FunctionalRequest):
    """Returns the dual norm with its antichain certificate."""
    with translate_errors():
        f = schemas.functional_from(body.functional, body.kind)
        _, cert = ops.dual_norm(f)
        return schemas.dual_norm_to(cert, f.kind)


@router.post("/sup", response_model=schemas.SupOut)
def compute_sup(body: schemas.SupRequest):
    """Returns the supremum over a named set with a witness."""
    with translate_errors():
        f = schemas.functional_from(body.functional, body.kind)
        return schemas.sup_to(ops.sup_over(body.set, f), f.kind)


@router.post("/l-beta", response_model=schemas.ValueOut)
def compute_l_beta(body: schemas.LBetaRequest):
    """Returns the limit of the functional along a branch."""
    with translate_errors():
        f = schemas.functional_from(body.functional, body.kind)
        beta = schemas.branch_from(body.prefix, body.period, body.kind)
        ops.branch_limit_sum(f)
        return schemas.ValueOut(value=format_fraction(ops.l_beta(f, beta)))


@router.post("/small-tail", response_model=schemas.SmallTailOut)
def compute_small_tail(body: schemas.SmallTailRequest):
    """Returns the heavy branches and the level past which the rest stays small."""
    with translate_errors():
        fs = [schemas.functional_from(f, body.kind) for f in body.functionals]
        branches, level = ops.small_tail_level(fs, schemas.parse_rational(body.threshold))
        return schemas.SmallTailOut(branches=[schemas.branch_to(b, body.kind) for b in branches], level=level)


@router.post("/subtree-mass", response_model=schemas.ValueOut)
def compute_subtree_mass(body: schemas.NodeFunctionalRequest):
    """Returns the dual norm of the functional below a node."""
    with translate_errors():
        f = schemas.functional_from(body.functional, body.kind)
        t = schemas.parse_word(body.node, body.kind)
        return schemas.ValueOut(value=format_fraction(ops.subtree_mass(f, t)))


@router.post("/pullback", response_model=schemas.FunctionalSchema)
def compute_pullback(body: schemas.NodeFunctionalRequest):
    """Returns the functional seen from a node."""
    with translate_errors():
        f = schemas.functional_from(body.functional, body.kind)
        return schemas.functional_to(ops.pullback(f, schemas.parse_word(body.node, body.kind)))


@router.post("/slice-membership", response_model=schemas.MembershipOut)
def check_slice_membership(body: schemas.SliceMembershipRequest):
    """Decides membership in a slice or weak neighborhood."""
    with translate_errors():
        x = schemas.vector_from(body.vector, body.kind)
        s = schemas.slice_from(body.slice, body.kind)
        return schemas.MembershipOut(member=ops.slice_membership(x, s))
