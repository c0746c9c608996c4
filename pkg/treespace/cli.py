# treespace/cli.py

import argparse
import json
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, TypeAdapter, ValidationError

from . import ops, schemas
from .errors import MalformedInputError, PreconditionError, TreespaceError, certify
from .logging_config import configure_logging
from .models import RunConfig, SetId, SpaceKind, TreeKind, TreeShape, format_fraction
from .settings import settings


def _load(path: str, shape: Any) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as e:
        raise MalformedInputError(f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise MalformedInputError(f"{path} is not valid JSON: {e.msg}") from e
    try:
        return TypeAdapter(shape).validate_python(raw)
    except ValidationError as e:
        raise MalformedInputError(f"{path} does not have the expected shape: {e.error_count()} errors") from e


def _vector(path: str, kind: TreeKind):
    return schemas.vector_from(_load(path, List[schemas.VectorEntry]), kind)


def _functional(path: str, kind: TreeKind):
    return schemas.functional_from(_load(path, schemas.FunctionalSchema), kind)


def _functionals(path: str, kind: TreeKind):
    return [schemas.functional_from(f, kind) for f in _load(path, List[schemas.FunctionalSchema])]


def _slice(path: str, kind: TreeKind = TreeKind.BINARY):
    return schemas.slice_from(_load(path, schemas.SliceSchema), kind)


def _slices(path: str, kind: TreeKind = TreeKind.BINARY):
    return [schemas.slice_from(s, kind) for s in _load(path, List[schemas.SliceSchema])]


def _nbhd(path: str, kind: TreeKind):
    return schemas.nbhd_from(_load(path, schemas.NbhdSchema), kind)


def _nbhds(path: str, kind: TreeKind):
    return [schemas.nbhd_from(w, kind) for w in _load(path, List[schemas.NbhdSchema])]


# --- verbs ---

def cmd_norm(args, cfg: RunConfig) -> BaseModel:
    x = _vector(args.vector, cfg.space.tree_kind)
    _, cert = ops.norm(cfg.space, x)
    if cfg.verify and len(x.support) <= settings.enumeration_max_support:
        value, _ = ops.brute_force_norm(cfg.space, x)
        certify(value == cert.value, "enumeration disagrees with the norm recursion")
    return schemas.norm_to(cert, x.kind, family=cfg.space.kind is SpaceKind.ADEQUATE)


def cmd_dual_norm(args, cfg: RunConfig) -> BaseModel:
    f = _functional(args.functional, cfg.space.tree_kind)
    _, cert = ops.dual_norm(f)
    return schemas.dual_norm_to(cert, f.kind)


def cmd_sup(args, cfg: RunConfig) -> BaseModel:
    f = _functional(args.functional, cfg.space.tree_kind)
    try:
        set_id = SetId(args.set)
    except ValueError as e:
        raise MalformedInputError(f"unknown set {args.set!r}") from e
    return schemas.sup_to(ops.sup_over(set_id, f), f.kind)


def cmd_classify(args, cfg: RunConfig) -> BaseModel:
    x = _vector(args.vector, cfg.space.tree_kind)
    report = ops.classify(cfg.space, x)
    exposing = ops.exposing_functional(x) if report.strongly_exposed else None
    return schemas.classify_to(report, exposing)


def cmd_gauge(args, cfg: RunConfig) -> BaseModel:
    if cfg.space.kind is not SpaceKind.XT:
        raise PreconditionError(f"gauges are defined on T, not {cfg.space}")
    x = _vector(args.vector, TreeKind.BINARY)
    d = ops.d_gauge(x)
    return schemas.GaugeOut(
        norm=format_fraction(ops.norm_value(cfg.space, x)),
        gauge=format_fraction(ops.gauge_norm(x)),
        d_gauge=format_fraction(d) if d is not None else None,
    )


def cmd_balance(args, cfg: RunConfig) -> BaseModel:
    problem = schemas.rows_from(_load(args.rows, List[List[Any]]))
    result = ops.balance_signs(problem)
    if cfg.verify:
        ops.verify_signs(problem, result.theta)
    out = schemas.balance_to(result)
    if args.brute_force:
        theta, value = ops.brute_force_best_signs(problem)
        out.brute_force = schemas.BruteForceOut(theta=list(theta), value=format_fraction(value))
    return out


def cmd_daugavet(args, cfg: RunConfig) -> BaseModel:
    x = _vector(args.vector, TreeKind.BINARY)
    return schemas.daugavet_to(ops.daugavet_witness(x, _slice(args.slice), verify=cfg.verify))


def cmd_defy_slices(args, cfg: RunConfig) -> BaseModel:
    avoid = _vector(args.avoid, TreeKind.BINARY) if args.avoid else None
    transcript = ops.positive_slice_defiance(_slices(args.slices), avoid=avoid, verify=cfg.verify)
    return schemas.transcript_to(transcript)


def cmd_defy_pibase(args, cfg: RunConfig) -> BaseModel:
    nbhds = _nbhds(args.nbhds, cfg.space.tree_kind)
    return schemas.transcript_to(ops.sigma_pibase_defiance(nbhds, verify=cfg.verify))


def cmd_adp(args, cfg: RunConfig) -> BaseModel:
    x = _vector(args.vector, TreeKind.BINARY)
    return schemas.adp_to(ops.adp_witness(x, _slice(args.slice), verify=cfg.verify))


def cmd_omega_witness(args, cfg: RunConfig) -> BaseModel:
    x = _vector(args.vector, TreeKind.BINARY)
    return schemas.transcript_to(ops.omega_witness(x, _slices(args.slices), verify=cfg.verify))


def cmd_c_witness(args, cfg: RunConfig) -> BaseModel:
    x = _vector(args.vector, TreeKind.BINARY)
    return schemas.transcript_to(ops.c_non_scd_witness(x, _slices(args.slices), verify=cfg.verify))


def cmd_pc_approx(args, cfg: RunConfig) -> BaseModel:
    kind = cfg.space.tree_kind
    fs = _functionals(args.functionals, kind)
    x = ops.pc_approximant(fs, schemas.parse_rational(args.eps), TreeShape(kind), verify=cfg.verify)
    return schemas.VectorOut(vector=schemas.vector_to(x))


def cmd_pc_near(args, cfg: RunConfig) -> BaseModel:
    w = _nbhd(args.nbhd, cfg.space.tree_kind)
    return schemas.VectorOut(vector=schemas.vector_to(ops.pc_near(w.center, w, verify=cfg.verify)))


def cmd_reduce_infty(args, cfg: RunConfig) -> BaseModel:
    f = _functional(args.functional, TreeKind.COUNTABLE)
    reduction = ops.finitely_branching_reduction(f, schemas.parse_rational(args.eps), verify=cfg.verify)
    return schemas.reduction_to(reduction)


def cmd_pibase_infty(args, cfg: RunConfig) -> BaseModel:
    w = _nbhd(args.nbhd, TreeKind.COUNTABLE)
    rng = np.random.default_rng(cfg.seed)
    witness = ops.pibase_basic_witness(w, rng=rng, samples=args.samples, verify=cfg.verify)
    return schemas.pibase_to(witness)


def cmd_scd_zero(args, cfg: RunConfig) -> BaseModel:
    return schemas.scd_zero_to(ops.scd_zero_demo(args.n, args.k, args.selector, verify=cfg.verify))


def cmd_super_adp(args, cfg: RunConfig) -> BaseModel:
    kind = cfg.space.tree_kind
    y = _vector(args.vector, kind)
    m, n = schemas.parse_node(args.m, kind), schemas.parse_node(args.n, kind)
    report = ops.super_adp_bound(cfg.space, m, n, y, schemas.parse_rational(args.eps), verify=cfg.verify)
    return schemas.super_adp_to(report)


def cmd_suite(args, cfg: RunConfig) -> BaseModel:
    from .suite import run_suite

    return run_suite(quick=args.quick, seed=cfg.seed)


HANDLERS: Dict[str, Callable[[argparse.Namespace, RunConfig], BaseModel]] = {
    "norm": cmd_norm,
    "dual-norm": cmd_dual_norm,
    "sup": cmd_sup,
    "classify": cmd_classify,
    "gauge": cmd_gauge,
    "balance": cmd_balance,
    "daugavet": cmd_daugavet,
    "defy-slices": cmd_defy_slices,
    "defy-pibase": cmd_defy_pibase,
    "adp": cmd_adp,
    "omega-witness": cmd_omega_witness,
    "c-witness": cmd_c_witness,
    "pc-approx": cmd_pc_approx,
    "pc-near": cmd_pc_near,
    "reduce-infty": cmd_reduce_infty,
    "pibase-infty": cmd_pibase_infty,
    "scd-zero": cmd_scd_zero,
    "super-adp": cmd_super_adp,
    "suite": cmd_suite,
}


# --- output ---

def _is_vector(value: Any) -> bool:
    return isinstance(value, list) and bool(value) and all(
        isinstance(v, dict) and set(v) == {"node", "coeff"} for v in value)


def _vector_text(entries: List[Dict[str, str]]) -> str:
    terms = []
    for e in entries:
        coeff = e["coeff"]
        if terms:
            terms.append(f"- {coeff[1:]}" if coeff.startswith("-") else f"+ {coeff}")
        else:
            terms.append(coeff)
        terms[-1] += f" e_{e['node']}"
    return " ".join(terms)


def render_text(data: Dict[str, Any], indent: int = 0) -> List[str]:
    pad = "  " * indent
    lines: List[str] = []
    for key, value in data.items():
        if _is_vector(value):
            lines.append(f"{pad}{key}: {_vector_text(value)}")
        elif isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(render_text(value, indent + 1))
        elif isinstance(value, list) and value and all(isinstance(v, (list, dict)) for v in value):
            lines.append(f"{pad}{key}:")
            for i, item in enumerate(value):
                if _is_vector(item):
                    lines.append(f"{pad}  [{i}] {_vector_text(item)}")
                elif isinstance(item, dict):
                    lines.append(f"{pad}  [{i}] " + ", ".join(f"{k}={v}" for k, v in item.items()))
                else:
                    lines.append(f"{pad}  [{i}] " + ", ".join(str(v) for v in item))
        elif isinstance(value, list):
            lines.append(f"{pad}{key}: " + (", ".join(str(v) for v in value) if value else "(none)"))
        else:
            lines.append(f"{pad}{key}: {value}")
    return lines


def emit(result: BaseModel, fmt: str) -> None:
    data = result.model_dump(mode="json", exclude_none=True)
    if fmt == "text":
        print("\n".join(render_text(data)))
    else:
        print(json.dumps(data, separators=(",", ":")))


# --- parser ---

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--space", default="T", help="T, TINF, M or ADEQUATE(name) (default: T)")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized runs")
    common.add_argument("--no-verify", action="store_true", help="skip certificate rechecks")

    parser = argparse.ArgumentParser(prog="treespace", description="Exact computations on tree spaces")
    sub = parser.add_subparsers(dest="verb", metavar="VERB")

    def verb(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_text)

    for name in ("norm", "classify", "gauge"):
        verb(name, f"{name} of a vector").add_argument("--vector", required=True)
    verb("dual-norm", "dual norm of a functional").add_argument("--functional", required=True)
    p = verb("sup", "supremum of a functional over a set")
    p.add_argument("--functional", required=True)
    p.add_argument("--set", required=True, help="BX, BPLUS, SIGMA, SIGMA_PLUS, C or D")
    p = verb("balance", "balance signs of a matrix with entries in [-1, 1]")
    p.add_argument("--rows", required=True)
    p.add_argument("--brute-force", action="store_true", help="also report the exhaustive optimum")
    for name, text in (("daugavet", "Daugavet witness in a positive slice"), ("adp", "ADP witness in a slice")):
        p = verb(name, text)
        p.add_argument("--vector", required=True)
        p.add_argument("--slice", required=True)
    p = verb("defy-slices", "one point per positive slice, all adding up in norm")
    p.add_argument("--slices", required=True)
    p.add_argument("--avoid", help="a point of Omega+ the separator must vanish on")
    verb("defy-pibase", "signed points of Sigma neighborhoods adding up in norm").add_argument("--nbhds", required=True)
    for name, text in (("omega-witness", "slices selections kept away from a point of Omega+"),
                       ("c-witness", "slices of C selections kept away from a point")):
        p = verb(name, text)
        p.add_argument("--vector", required=True)
        p.add_argument("--slices", required=True)
    p = verb("pc-approx", "point of continuity where the functionals are small")
    p.add_argument("--functionals", required=True)
    p.add_argument("--eps", required=True)
    verb("pc-near", "point of continuity inside a neighborhood").add_argument("--nbhd", required=True)
    p = verb("reduce-infty", "finitely branching subtree keeping the dual mass of a functional")
    p.add_argument("--functional", required=True)
    p.add_argument("--eps", required=True)
    p = verb("pibase-infty", "basic neighborhood inside a neighborhood of the countable ball")
    p.add_argument("--nbhd", required=True)
    p.add_argument("--samples", type=int, default=0)
    p = verb("scd-zero", "average of slice selections of D near 0")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--selector", default="argmax", choices=("argmax", "shifted"))
    p = verb("super-adp", "two-point value for a weakly open set of the ball")
    p.add_argument("--m", required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--vector", required=True)
    p.add_argument("--eps", required=True)
    verb("suite", "randomized property suite").add_argument("--quick", action="store_true")
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 1
    if args.verb is None:
        parser.print_usage(sys.stderr)
        return 1
    configure_logging()
    try:
        cfg = RunConfig(
            space=schemas.parse_space(args.space),
            format=args.format,
            seed=settings.suite_seed if args.seed is None else args.seed,
            verify=not args.no_verify,
        )
        result = HANDLERS[args.verb](args, cfg)
    except TreespaceError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    emit(result, cfg.format)
    if args.verb == "suite" and not getattr(result, "passed", True):
        return 3
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
