# treespace/ops/signs.py

import logging
from fractions import Fraction
from math import lcm
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..errors import CertificateError, MalformedInputError, PreconditionError
from ..models import SignProblem, SignResult, format_fraction, sign
from ..settings import settings

logger = logging.getLogger(__name__)

__all__ = ["check_problem", "balance_signs", "verify_signs", "brute_force_best_signs", "row_sums"]


def check_problem(problem: SignProblem) -> None:
    if problem.k < 1 or problem.n < 1:
        raise PreconditionError("a sign problem needs at least one row and one column")
    if any(len(row) != problem.n for row in problem.rows):
        raise MalformedInputError("rows of a sign problem must have equal length")
    for row in problem.rows:
        for a in row:
            if abs(a) > 1:
                raise PreconditionError(f"entry {format_fraction(a)} lies outside [-1, 1]")


def row_sums(problem: SignProblem, theta: Sequence[int]) -> Tuple[Fraction, ...]:
    return tuple(sum((t * a for t, a in zip(theta, row)), Fraction(0)) for row in problem.rows)


def _pattern(column: Tuple[Fraction, ...]) -> Tuple[int, ...]:
    return tuple(sign(a) for a in column)


def balance_signs(problem: SignProblem) -> SignResult:
    """Pigeonhole two columns with equal sign patterns, merge them as a difference, repeat."""
    check_problem(problem)
    bound = 2 ** problem.k
    columns: List[Tuple[Fraction, ...]] = [tuple(row[i] for row in problem.rows) for i in range(problem.n)]
    groups: List[Dict[int, int]] = [{i: 1} for i in range(problem.n)]
    merges: List[Tuple[int, int]] = []
    while len(columns) > bound:
        pair = _first_pair(columns)
        i1, i2 = pair
        merged = tuple(a - b for a, b in zip(columns[i1], columns[i2]))
        group = dict(groups[i1])
        group.update({j: -s for j, s in groups[i2].items()})
        rest = [c for idx, c in enumerate(columns) if idx not in pair]
        rest_groups = [g for idx, g in enumerate(groups) if idx not in pair]
        columns = [merged] + rest
        groups = [group] + rest_groups
        merges.append(pair)
    theta = [0] * problem.n
    for group in groups:
        for j, s in group.items():
            theta[j] = s
    sums = row_sums(problem, theta)
    logger.debug("balanced %d columns with %d merges", problem.n, len(merges))
    return SignResult(tuple(theta), sums, bound, tuple(merges))


def _first_pair(columns: List[Tuple[Fraction, ...]]) -> Tuple[int, int]:
    """Lexicographically least (first, second) pair sharing a sign pattern."""
    seen: Dict[Tuple[int, ...], List[int]] = {}
    for i, col in enumerate(columns):
        seen.setdefault(_pattern(col), []).append(i)
    return min((idx[0], idx[1]) for idx in seen.values() if len(idx) > 1)


def verify_signs(problem: SignProblem, theta: Sequence[int]) -> Tuple[Fraction, ...]:
    if len(theta) != problem.n or any(t not in (1, -1) for t in theta):
        raise CertificateError("sign vector has the wrong shape")
    sums = row_sums(problem, theta)
    bound = 2 ** problem.k
    for j, s in enumerate(sums):
        if abs(s) > bound:
            logger.error("row %d sums to %s beyond %d", j, format_fraction(s), bound)
            raise CertificateError(f"row {j} sums to {format_fraction(s)}, beyond {bound}")
    return sums


def brute_force_best_signs(problem: SignProblem) -> Tuple[Tuple[int, ...], Fraction]:
    """Exhaustive minimizer of the largest row sum, first in (1, -1) product order."""
    check_problem(problem)
    n = problem.n
    if n > settings.brute_force_max_columns:
        raise PreconditionError(f"brute force handles at most {settings.brute_force_max_columns} columns, got {n}")
    scale = lcm(*(a.denominator for row in problem.rows for a in row))
    scaled = [[int(a * scale) for a in row] for row in problem.rows]
    largest = max(abs(v) for row in scaled for v in row)
    dtype = np.int64 if largest * n < 2 ** 62 else object
    matrix = np.array(scaled, dtype=dtype)
    bits = (np.arange(2 ** n)[:, None] >> np.arange(n - 1, -1, -1)) & 1
    patterns = (1 - 2 * bits).astype(dtype)
    worst = np.abs(matrix @ patterns.T).max(axis=0)
    best = int(np.argmin(worst))
    theta = tuple(int(t) for t in patterns[best])
    return theta, Fraction(int(worst[best]), scale)
