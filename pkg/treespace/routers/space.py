# treespace/routers/space.py

from fastapi import APIRouter

from .. import ops, schemas
from ..errors import PreconditionError
from ..models import SpaceKind, format_fraction
from . import translate_errors

router = APIRouter(
    prefix="/space",
    tags=["Space"],
)


@router.post("/norm", response_model=schemas.NormOut)
def compute_norm(body: schemas.VectorRequest):
    """Returns the norm with its certificate set."""
    with translate_errors():
        space = schemas.parse_space(body.space)
        x = schemas.vector_from(body.vector, space.tree_kind)
        _, cert = ops.norm(space, x)
        return schemas.norm_to(cert, x.kind, family=space.kind is SpaceKind.ADEQUATE)


@router.post("/classify", response_model=schemas.ClassifyOut)
def classify_vector(body: schemas.VectorRequest):
    """Classifies a vector of the unit ball."""
    with translate_errors():
        space = schemas.parse_space(body.space)
        x = schemas.vector_from(body.vector, space.tree_kind)
        report = ops.classify(space, x)
        exposing = ops.exposing_functional(x) if report.strongly_exposed else None
        return schemas.classify_to(report, exposing)


@router.post("/gauge", response_model=schemas.GaugeOut)
def compute_gauges(body: schemas.VectorRequest):
    """Returns the renorming gauges of a vector."""
    with translate_errors():
        space = schemas.parse_space(body.space)
        if space.kind is not SpaceKind.XT:
            raise PreconditionError(f"gauges are defined on T, not {space}")
        x = schemas.vector_from(body.vector, space.tree_kind)
        d = ops.d_gauge(x)
        return schemas.GaugeOut(
            norm=format_fraction(ops.norm_value(space, x)),
            gauge=format_fraction(ops.gauge_norm(x)),
            d_gauge=format_fraction(d) if d is not None else None,
        )


@router.post("/project", response_model=schemas.VectorOut)
def project_vector(body: schemas.ProjectRequest):
    """Restricts a vector to a node set."""
    with translate_errors():
        space = schemas.parse_space(body.space)
        x = schemas.vector_from(body.vector, space.tree_kind)
        nodes = {schemas.parse_word(n, space.tree_kind) for n in body.nodes}
        return schemas.VectorOut(vector=schemas.vector_to(ops.project(x, nodes)))


@router.post("/shift", response_model=schemas.VectorOut)
def shift_vector(body: schemas.ShiftRequest):
    """Moves a vector below a node, or back up."""
    with translate_errors():
        space = schemas.parse_space(body.space)
        x = schemas.vector_from(body.vector, space.tree_kind)
        t = schemas.parse_word(body.node, space.tree_kind)
        moved = ops.unshift(x, t) if body.inverse else ops.shift(x, t)
        return schemas.VectorOut(vector=schemas.vector_to(moved))
