# treespace/suite.py
"""Seeded randomized checks of every construction, with exact rational comparisons."""

import logging
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, List, Sequence, Tuple

import numpy as np

from . import ops
from .errors import TreespaceError, certify
from .models import (
    ROOT, Branch, BranchPart, FinVector, Functional, Node, SetId, SignProblem, SliceSpec, SpaceId,
    TreeKind, WeakNbhdSpec, format_fraction,
)
from .schemas import CheckOut, SuiteOut

logger = logging.getLogger(__name__)

XT = SpaceId.xt()


# --- random instances ---

def random_rational(rng: np.random.Generator, bound: int = 8, nonzero: bool = False) -> Fraction:
    while True:
        q = Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, bound + 1)))
        if q or not nonzero:
            return q


def random_node(rng: np.random.Generator, max_depth: int, letters: int = 2, min_depth: int = 0) -> Node:
    depth = int(rng.integers(min_depth, max_depth + 1))
    return tuple(int(v) for v in rng.integers(0, letters, size=depth))


def random_vector(rng: np.random.Generator, max_depth: int = 6, max_support: int = 20,
                  kind: TreeKind = TreeKind.BINARY, letters: int = 2) -> FinVector:
    size = int(rng.integers(1, max_support + 1))
    return FinVector({random_node(rng, max_depth, letters): random_rational(rng) for _ in range(size)}, kind)


def random_functional(rng: np.random.Generator, max_depth: int = 4, max_support: int = 8, branches: int = 0,
                      kind: TreeKind = TreeKind.BINARY, letters: int = 2) -> Functional:
    finite = random_vector(rng, max_depth, max_support, kind, letters).entries
    parts = []
    for _ in range(branches):
        period = random_node(rng, 2, letters, min_depth=1)
        branch = Branch(random_node(rng, 3, letters), period)
        overrides = ((int(rng.integers(0, 4)), random_rational(rng)),) if rng.integers(0, 2) else ()
        parts.append(BranchPart(branch, random_rational(rng, nonzero=True), overrides))
    return Functional(finite, parts, kind)


def into_ball(x: FinVector, rng: np.random.Generator) -> FinVector:
    value = ops.chain_norm(x)[0]
    if not value:
        return x
    return x * (Fraction(int(rng.integers(1, 5)), 4) / max(value, Fraction(1)))


def unit_vector(x: FinVector) -> FinVector:
    value = ops.chain_norm(x)[0]
    return x * (1 / value) if value else FinVector.unit(ROOT, x.kind)


def random_slice(rng: np.random.Generator, set_id: SetId, branches: int = 1,
                 kind: TreeKind = TreeKind.BINARY, letters: int = 2) -> SliceSpec:
    f = random_functional(rng, branches=int(rng.integers(0, branches + 1)), kind=kind, letters=letters)
    return SliceSpec(set_id, f, Fraction(int(rng.integers(1, 9)), 8))


def _constraints(rng: np.random.Generator, kind: TreeKind, letters: int, branches: int = 0
                 ) -> Tuple[Tuple[Functional, Fraction], ...]:
    count = int(rng.integers(0, 4))
    return tuple(
        (random_functional(rng, branches=int(rng.integers(0, branches + 1)), kind=kind, letters=letters),
         Fraction(1, int(rng.integers(1, 17))))
        for _ in range(count)
    )


def random_omega_plus(rng: np.random.Generator, max_depth: int = 4) -> FinVector:
    """Indicator of a random antichain that is not maximal, a unit vector of Omega+."""
    while True:
        picked: List[Node] = []
        for _ in range(int(rng.integers(1, 6))):
            t = random_node(rng, max_depth, min_depth=1)
            if ops.is_antichain(picked + [t]):
                picked.append(t)
        x = FinVector({t: 1 for t in picked})
        if ops.classify(XT, x).in_omega_plus:
            return x


def path_sums_norm(x: FinVector) -> Fraction:
    """Chain norm by summing |x| along the ancestors of every support node."""
    best = Fraction(0)
    for t in x.support:
        best = max(best, sum((abs(x[s]) for s in ops.ancestors_or_self(t)), Fraction(0)))
    return best


def antichain_sup(f: Functional) -> Fraction:
    """Dual norm of a finitely supported functional by enumerating antichains of its support."""
    support = sorted(f.finite)
    best = Fraction(0)
    for r in range(1, len(support) + 1):
        for subset in combinations(support, r):
            if ops.is_antichain(subset):
                best = max(best, sum((abs(f.finite[t]) for t in subset), Fraction(0)))
    return best


# --- checks ---

def check_norm_engine(rng: np.random.Generator, count: int) -> None:
    for _ in range(count):
        x = random_vector(rng)
        value = ops.norm_value(XT, x)
        certify(value == path_sums_norm(x), "norm recursion disagrees with path sums")
        if len(x.support) <= 8:
            certify(value == ops.brute_force_norm(XT, x)[0], "norm recursion disagrees with enumeration")
        flips = {t: v * int(rng.choice((-1, 1))) for t, v in x.items()}
        certify(ops.norm_value(XT, FinVector(flips)) == value, "norm is not unconditional")
        y = random_vector(rng)
        joined = ops.shift(x, (0,)) + ops.shift(y, (1,))
        certify(ops.norm_value(XT, joined) == max(value, ops.norm_value(XT, y)), "decomposition identity fails")


def check_isometries(rng: np.random.Generator, count: int) -> None:
    for _ in range(count):
        end = random_node(rng, 8)
        chain = ops.ancestors_or_self(end)
        x = FinVector({t: random_rational(rng) for t in chain if rng.integers(0, 2)})
        certify(ops.norm_value(XT, x) == sum((abs(v) for _, v in x.items()), Fraction(0)), "chain is not l1")
        depth = int(rng.integers(1, 6))
        level = {random_node(rng, depth, min_depth=depth) for _ in range(6)}
        y = FinVector({t: random_rational(rng) for t in level})
        certify(ops.norm_value(XT, y) == max((abs(v) for _, v in y.items()), default=Fraction(0)),
                "antichain is not c0")


def check_dual_norm(rng: np.random.Generator, count: int) -> None:
    for _ in range(count):
        f = random_functional(rng, max_depth=4, max_support=10)
        certify(ops.dual_norm(f)[0] == antichain_sup(f), "dual norm disagrees with antichain enumeration")
        chain = ops.ancestors_or_self(random_node(rng, 6))
        certify(ops.dual_norm(ops.chain_functional(chain))[0] == 1, "chain functional does not have dual norm 1")


def check_signs(rng: np.random.Generator, count: int) -> None:
    """Every (k, n) cell with k <= 4 and n <= 64, count // 50 random instances per cell."""
    per_cell = max(1, count // 50)
    for k, n in product(range(1, 5), range(1, 65)):
        for _ in range(per_cell):
            rows = tuple(tuple(Fraction(int(v), 16) for v in rng.integers(-16, 17, size=n)) for _ in range(k))
            problem = SignProblem(rows)
            result = ops.balance_signs(problem)
            ops.verify_signs(problem, result.theta)
            if n <= 12:
                _, best = ops.brute_force_best_signs(problem)
                certify(best <= 2 ** k, "exhaustive optimum exceeds the bound")


def check_daugavet(rng: np.random.Generator, count: int) -> None:
    for _ in range(count):
        x = unit_vector(random_vector(rng).abs())
        w = ops.daugavet_witness(x, random_slice(rng, SetId.BPLUS))
        certify(w.value == 2, "norm of x + y is not 2")
    for _ in range(max(1, count // 5)):
        slices = [random_slice(rng, SetId.BPLUS) for _ in range(10)]
        t = ops.positive_slice_defiance(slices)
        total = sum(t.elements, FinVector.zero())
        certify(ops.chain_norm(total)[0] == 10, "selections do not add up to 10")


def _sigma_center(rng: np.random.Generator) -> FinVector:
    depth = int(rng.integers(1, 5))
    level = {random_node(rng, depth, min_depth=depth) for _ in range(int(rng.integers(1, 4)))}
    return FinVector({t: int(rng.choice((-1, 1))) for t in level})


def check_sigma_defiance(rng: np.random.Generator, count: int) -> None:
    for _ in range(count):
        nbhds = [WeakNbhdSpec(SetId.SIGMA, _sigma_center(rng), _constraints(rng, TreeKind.BINARY, 2))
                 for _ in range(8)]
        t = ops.sigma_pibase_defiance(nbhds)
        total = sum((x * s for x, s in zip(t.elements, t.signs)), FinVector.zero())
        certify(ops.chain_norm(total)[0] == 8, "signed selections do not add up to 8")


def check_adp(rng: np.random.Generator, count: int) -> None:
    for _ in range(count):
        x = unit_vector(random_vector(rng))
        w = ops.adp_witness(x, random_slice(rng, SetId.BX))
        certify(w.value == 2 and ops.classify(XT, w.y).strongly_exposed, "adp witness fails")


def check_pc(rng: np.random.Generator, count: int) -> None:
    for _ in range(count):
        fs = [random_functional(rng, branches=2) for _ in range(int(rng.integers(1, 5)))]
        eps = Fraction(1, int(rng.integers(1, 33)))
        x = ops.pc_approximant(fs, eps)
        certify(all(abs(ops.evaluate(f, x)) < eps for f in fs), "approximant is not small on the functionals")
        y = into_ball(random_vector(rng, max_depth=4, max_support=6), rng)
        w = WeakNbhdSpec(SetId.BX, y, _constraints(rng, TreeKind.BINARY, 2, branches=1))
        certify(ops.nbhd_membership(ops.pc_near(y, w), w), "point of continuity left the neighborhood")


def check_countable(rng: np.random.Generator, count: int) -> None:
    kind = TreeKind.COUNTABLE
    for _ in range(count):
        f = random_functional(rng, branches=2, kind=kind, letters=5)
        eps = Fraction(1, int(rng.integers(1, 17)))
        r = ops.finitely_branching_reduction(f, eps)
        certify(r.pruned_mass < eps, "pruned mass is not below eps")
    for _ in range(max(1, count // 5)):
        center = into_ball(random_vector(rng, max_depth=3, max_support=5, kind=kind, letters=4), rng)
        w = WeakNbhdSpec(SetId.BX, center, _constraints(rng, kind, 4, branches=1))
        samples = 100 if count >= 100 else 10
        p = ops.pibase_basic_witness(w, rng=rng, samples=samples)
        certify(p.spot_checks == samples, "not every sampled member was checked")


def check_renorming(rng: np.random.Generator, count: int) -> None:
    for _ in range(count):
        x = random_vector(rng)
        value, gauge = ops.norm_value(XT, x), ops.gauge_norm(x)
        certify(value <= gauge <= 2 * value, "gauge is outside [norm, 2 norm]")
    certify(ops.gauge_norm(FinVector({(0,): 1, (1,): -1})) == 2, "the bound 2 is not attained")
    combinations_per_witness = 1000 if count >= 1000 else 20
    for _ in range(max(2, count // 1000)):
        x = random_omega_plus(rng)
        slices = [random_slice(rng, SetId.C) for _ in range(int(rng.integers(1, 6)))]
        t = ops.c_non_scd_witness(x, slices)
        for _ in range(combinations_per_witness):
            raw = [int(v) for v in rng.integers(0, 5, size=len(slices))]
            if not sum(raw):
                raw[0] = 1
            weights = [Fraction(v, sum(raw)) for v in raw]
            certify(ops.distance_bound(t, weights) >= Fraction(1, 4), "distance falls below 1/4")


def check_scd_zero(rng: np.random.Generator, count: int) -> None:
    top = 5 if count >= 100 else 3
    for selector, k in product(ops.SELECTORS, (10, 100, 1000)):
        previous = None
        for n in range(1, top + 1):
            report = ops.scd_zero_demo(n, k, selector=selector)
            certify(report.holds, f"r({n}, {k}) = {format_fraction(report.r)} exceeds its bound")
            certify(report.r <= report.envelope, f"{selector} average at level {n} is above the envelope")
            certify(previous is None or report.r <= previous, f"{selector} average grows at level {n}")
            previous = report.r


def check_super_adp(rng: np.random.Generator, count: int) -> None:
    eps = Fraction(1, 100)
    half = Fraction(1, 2)
    for _ in range(count):
        m = random_node(rng, 4)
        n = m + random_node(rng, 3, min_depth=1)
        a = Fraction(int(rng.integers(0, 100)), 10000)
        b = Fraction(int(rng.integers(0, 100)), 10000)
        entries = {m: half - a, n: b - half}
        extra = random_node(rng, 5, min_depth=1)
        if extra not in entries:
            entries[extra] = (a + b) * int(rng.choice((-1, 1)))
        y = FinVector(entries)
        report = ops.super_adp_bound(XT, m, n, y, eps)
        certify(report.value <= Fraction(3, 2) + 2 * eps and report.verdict == "< 2", "two-point value too large")


CHECKS: Sequence[Tuple[str, Callable[[np.random.Generator, int], None], int, int]] = (
    ("norm-engine", check_norm_engine, 10000, 200),
    ("isometries", check_isometries, 1000, 100),
    ("dual-norm", check_dual_norm, 1000, 100),
    ("sign-balancer", check_signs, 1000, 25),
    ("daugavet", check_daugavet, 1000, 25),
    ("sigma-defiance", check_sigma_defiance, 200, 10),
    ("adp", check_adp, 1000, 25),
    ("points-of-continuity", check_pc, 200, 10),
    ("countable-tree", check_countable, 500, 10),
    ("renorming", check_renorming, 10000, 100),
    ("scd-zero", check_scd_zero, 100, 10),
    ("super-adp", check_super_adp, 1000, 50),
)


def run_suite(quick: bool = False, seed: int = 0) -> SuiteOut:
    seeds = np.random.SeedSequence(seed).spawn(len(CHECKS))
    results: List[CheckOut] = []
    for (name, check, full, reduced), child in zip(CHECKS, seeds):
        cases = reduced if quick else full
        rng = np.random.default_rng(child)
        try:
            check(rng, cases)
            results.append(CheckOut(name=name, cases=cases, passed=True))
        except TreespaceError as e:
            logger.error("suite check %s failed: %s", name, e)
            results.append(CheckOut(name=name, cases=cases, passed=False, detail=str(e)))
        logger.info("suite check %s: %d cases", name, cases)
    return SuiteOut(seed=seed, quick=quick, passed=all(r.passed for r in results), checks=results)
