# treespace/models.py
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Optional, Tuple, Union

Node = Tuple[int, ...]
Scalar = Union[int, Fraction]

ROOT: Node = ()


class TreeKind(str, enum.Enum):
    BINARY = "binary"
    COUNTABLE = "countable"


class Relation(str, enum.Enum):
    LESS = "LESS"
    EQUAL = "EQUAL"
    GREATER = "GREATER"
    INCOMPARABLE = "INCOMPARABLE"


class FreshMode(str, enum.Enum):
    OUTSIDE = "outside"
    NO_ANCESTOR = "no-ancestor"
    INCOMPARABLE = "incomparable"


class SpaceKind(str, enum.Enum):
    XT = "T"
    XTINF = "TINF"
    XM = "M"
    ADEQUATE = "ADEQUATE"


class SetId(str, enum.Enum):
    BX = "BX"
    BPLUS = "BPLUS"
    SIGMA = "SIGMA"
    SIGMA_PLUS = "SIGMA_PLUS"
    C = "C"
    D = "D"


def shortlex(node: Node) -> Tuple[int, Node]:
    return (len(node), node)


def format_node(node: Node, kind: TreeKind = TreeKind.BINARY) -> str:
    if not node:
        return "eps"
    if kind is TreeKind.BINARY:
        return "".join(str(i) for i in node)
    return ".".join(str(i) for i in node)


def format_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def sign(q: Scalar) -> int:
    """Sign with sign(0) = 1."""
    return -1 if q < 0 else 1


def _check_letters(node: Node, kind: TreeKind) -> None:
    for letter in node:
        if not isinstance(letter, int) or letter < 0:
            raise ValueError(f"invalid child index {letter!r}")
        if kind is TreeKind.BINARY and letter > 1:
            raise ValueError(f"binary tree nodes use indices 0 and 1, got {letter}")


@dataclass(frozen=True)
class SpaceId:
    kind: SpaceKind
    family: Optional[str] = None

    @property
    def tree_kind(self) -> TreeKind:
        return TreeKind.COUNTABLE if self.kind is SpaceKind.XTINF else TreeKind.BINARY

    @classmethod
    def xt(cls) -> "SpaceId":
        return cls(SpaceKind.XT)

    @classmethod
    def xtinf(cls) -> "SpaceId":
        return cls(SpaceKind.XTINF)

    @classmethod
    def xm(cls) -> "SpaceId":
        return cls(SpaceKind.XM)

    @classmethod
    def adequate(cls, family: str) -> "SpaceId":
        return cls(SpaceKind.ADEQUATE, family)

    def __str__(self) -> str:
        if self.kind is SpaceKind.ADEQUATE:
            return f"ADEQUATE({self.family})"
        return self.kind.value


def _minimal_period(word: Node) -> Node:
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d]
    return word


@dataclass(frozen=True)
class Branch:
    """An eventually periodic branch prefix . period . period ...

    Stored in canonical form (shortest prefix, minimal period), so dataclass
    equality is equality of the infinite words.
    """

    prefix: Node
    period: Node

    def __post_init__(self) -> None:
        prefix, period = tuple(self.prefix), tuple(self.period)
        if not period:
            raise ValueError("branch period must be nonempty")
        period = _minimal_period(period)
        while prefix and prefix[-1] == period[-1]:
            period = (period[-1],) + period[:-1]
            prefix = prefix[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)

    def letter(self, i: int) -> int:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def node_at(self, n: int) -> Node:
        if n <= len(self.prefix):
            return self.prefix[:n]
        reps = (n - len(self.prefix)) // len(self.period) + 1
        return (self.prefix + self.period * reps)[:n]

    def contains(self, node: Node) -> bool:
        return self.node_at(len(node)) == tuple(node)

    def drop(self, k: int) -> "Branch":
        """The branch read after its first k letters."""
        if k <= len(self.prefix):
            return Branch(self.prefix[k:], self.period)
        r = (k - len(self.prefix)) % len(self.period)
        return Branch((), self.period[r:] + self.period[:r])

    def stable_depth(self) -> int:
        return len(self.prefix) + len(self.period)

    def divergence(self, other: "Branch") -> Optional[int]:
        """First index where the two infinite words differ, None if equal."""
        if self == other:
            return None
        a, b = len(self.period), len(other.period)
        bound = max(len(self.prefix), len(other.prefix)) + a * b // gcd(a, b)
        for i in range(bound + 1):
            if self.letter(i) != other.letter(i):
                return i
        return None

    def max_letter(self) -> int:
        return max(self.prefix + self.period)

    def sort_key(self) -> Tuple[Node, Node]:
        return (self.prefix, self.period)


class FinVector:
    """Finitely supported rational vector on a tree."""

    __slots__ = ("_entries", "kind")

    def __init__(self, entries: Union[Mapping[Node, Scalar], Iterable[Tuple[Node, Scalar]]] = (),
                 kind: TreeKind = TreeKind.BINARY):
        items = entries.items() if isinstance(entries, Mapping) else entries
        clean: Dict[Node, Fraction] = {}
        for node, value in items:
            node = tuple(node)
            _check_letters(node, kind)
            q = Fraction(value)
            total = clean.get(node, Fraction(0)) + q
            if total:
                clean[node] = total
            else:
                clean.pop(node, None)
        self._entries = clean
        self.kind = kind

    @classmethod
    def unit(cls, node: Node, kind: TreeKind = TreeKind.BINARY, value: Scalar = 1) -> "FinVector":
        return cls({tuple(node): value}, kind)

    @classmethod
    def zero(cls, kind: TreeKind = TreeKind.BINARY) -> "FinVector":
        return cls({}, kind)

    @classmethod
    def indicator(cls, nodes: Iterable[Node], kind: TreeKind = TreeKind.BINARY, value: Scalar = 1) -> "FinVector":
        return cls({tuple(n): value for n in nodes}, kind)

    @property
    def entries(self) -> Dict[Node, Fraction]:
        return dict(self._entries)

    @property
    def support(self) -> FrozenSet[Node]:
        return frozenset(self._entries)

    def __getitem__(self, node: Node) -> Fraction:
        return self._entries.get(tuple(node), Fraction(0))

    def items(self) -> Iterator[Tuple[Node, Fraction]]:
        for node in sorted(self._entries, key=shortlex):
            yield node, self._entries[node]

    def __len__(self) -> int:
        return len(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def _coerce(self, other: "FinVector") -> None:
        if not isinstance(other, FinVector):
            raise TypeError("expected a FinVector")
        if other.kind is not self.kind:
            raise ValueError("vectors live on different trees")

    def __add__(self, other: "FinVector") -> "FinVector":
        self._coerce(other)
        return FinVector(list(self._entries.items()) + list(other._entries.items()), self.kind)

    def __sub__(self, other: "FinVector") -> "FinVector":
        return self + (-other)

    def __neg__(self) -> "FinVector":
        return FinVector({n: -v for n, v in self._entries.items()}, self.kind)

    def __mul__(self, scalar: Scalar) -> "FinVector":
        q = Fraction(scalar)
        return FinVector({n: q * v for n, v in self._entries.items()}, self.kind)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinVector):
            return NotImplemented
        return self.kind is other.kind and self._entries == other._entries

    def __hash__(self) -> int:
        return hash((self.kind, frozenset(self._entries.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{format_node(n, self.kind)}: {format_fraction(v)}" for n, v in self.items())
        return f"FinVector({{{body}}})"

    def max_depth(self) -> int:
        return max((len(n) for n in self._entries), default=-1)

    def abs(self) -> "FinVector":
        return FinVector({n: abs(v) for n, v in self._entries.items()}, self.kind)

    def is_nonnegative(self) -> bool:
        return all(v > 0 for v in self._entries.values())

    def restrict(self, keep) -> "FinVector":
        return FinVector({n: v for n, v in self._entries.items() if keep(n)}, self.kind)


@dataclass(frozen=True)
class BranchPart:
    branch: Branch
    tail: Fraction
    overrides: Tuple[Tuple[int, Fraction], ...] = ()

    def __post_init__(self) -> None:
        tail = Fraction(self.tail)
        merged: Dict[int, Fraction] = {}
        for depth, value in self.overrides:
            if depth < 0:
                raise ValueError("override depth must be nonnegative")
            merged[int(depth)] = Fraction(value)
        cleaned = tuple(sorted((d, v) for d, v in merged.items() if v != tail))
        object.__setattr__(self, "tail", tail)
        object.__setattr__(self, "overrides", cleaned)

    def at_depth(self, depth: int) -> Fraction:
        for d, v in self.overrides:
            if d == depth:
                return v
        return self.tail

    def override_depth(self) -> int:
        return max((d for d, _ in self.overrides), default=-1)

    def is_zero(self) -> bool:
        return self.tail == 0 and not self.overrides

    def scaled(self, scalar: Fraction) -> "BranchPart":
        return BranchPart(self.branch, scalar * self.tail, tuple((d, scalar * v) for d, v in self.overrides))


def _merge_parts(a: BranchPart, b: BranchPart) -> BranchPart:
    depths = {d for d, _ in a.overrides} | {d for d, _ in b.overrides}
    return BranchPart(a.branch, a.tail + b.tail,
                      tuple((d, a.at_depth(d) + b.at_depth(d)) for d in depths))


class Functional:
    """Representable dual element: finite part plus eventually constant branch parts."""

    __slots__ = ("_finite", "branches", "kind")

    def __init__(self, finite: Union[Mapping[Node, Scalar], Iterable[Tuple[Node, Scalar]]] = (),
                 branches: Iterable[BranchPart] = (), kind: TreeKind = TreeKind.BINARY):
        items = finite.items() if isinstance(finite, Mapping) else finite
        clean: Dict[Node, Fraction] = {}
        for node, value in items:
            node = tuple(node)
            _check_letters(node, kind)
            total = clean.get(node, Fraction(0)) + Fraction(value)
            if total:
                clean[node] = total
            else:
                clean.pop(node, None)
        parts: Dict[Branch, BranchPart] = {}
        for part in branches:
            _check_letters(part.branch.prefix + part.branch.period, kind)
            if part.branch in parts:
                parts[part.branch] = _merge_parts(parts[part.branch], part)
            else:
                parts[part.branch] = part
        self._finite = clean
        self.branches: Tuple[BranchPart, ...] = tuple(
            sorted((p for p in parts.values() if not p.is_zero()), key=lambda p: p.branch.sort_key()))
        self.kind = kind

    @classmethod
    def coordinate(cls, node: Node, kind: TreeKind = TreeKind.BINARY, value: Scalar = 1) -> "Functional":
        return cls({tuple(node): value}, kind=kind)

    @classmethod
    def along_branch(cls, branch: Branch, tail: Scalar, kind: TreeKind = TreeKind.BINARY,
                     overrides: Iterable[Tuple[int, Scalar]] = ()) -> "Functional":
        part = BranchPart(branch, Fraction(tail), tuple((d, Fraction(v)) for d, v in overrides))
        return cls(branches=[part], kind=kind)

    @classmethod
    def zero(cls, kind: TreeKind = TreeKind.BINARY) -> "Functional":
        return cls(kind=kind)

    @property
    def finite(self) -> Dict[Node, Fraction]:
        return dict(self._finite)

    def coefficient(self, node: Node) -> Fraction:
        node = tuple(node)
        value = self._finite.get(node, Fraction(0))
        for part in self.branches:
            if part.branch.contains(node):
                value += part.at_depth(len(node))
        return value

    def is_finitely_supported(self) -> bool:
        return not self.branches

    def is_zero(self) -> bool:
        return not self._finite and not self.branches

    def _coerce(self, other: "Functional") -> None:
        if not isinstance(other, Functional):
            raise TypeError("expected a Functional")
        if other.kind is not self.kind:
            raise ValueError("functionals live on different trees")

    def __add__(self, other: "Functional") -> "Functional":
        self._coerce(other)
        return Functional(list(self._finite.items()) + list(other._finite.items()),
                          self.branches + other.branches, self.kind)

    def __neg__(self) -> "Functional":
        return self * -1

    def __sub__(self, other: "Functional") -> "Functional":
        return self + (-other)

    def __mul__(self, scalar: Scalar) -> "Functional":
        q = Fraction(scalar)
        return Functional({n: q * v for n, v in self._finite.items()},
                          [p.scaled(q) for p in self.branches], self.kind)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Functional):
            return NotImplemented
        return (self.kind is other.kind and self._finite == other._finite
                and self.branches == other.branches)

    def __hash__(self) -> int:
        return hash((self.kind, frozenset(self._finite.items()), self.branches))

    def __repr__(self) -> str:
        finite = ", ".join(f"{format_node(n, self.kind)}: {format_fraction(v)}"
                           for n, v in sorted(self._finite.items(), key=lambda kv: shortlex(kv[0])))
        return f"Functional({{{finite}}}, branches={len(self.branches)})"


@dataclass(frozen=True)
class SliceSpec:
    set: SetId
    functional: Functional
    delta: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "delta", Fraction(self.delta))
        if self.delta <= 0:
            raise ValueError("slice delta must be positive")


@dataclass(frozen=True)
class WeakNbhdSpec:
    set: SetId
    center: FinVector
    constraints: Tuple[Tuple[Functional, Fraction], ...] = ()

    def __post_init__(self) -> None:
        cleaned = tuple((f, Fraction(eps)) for f, eps in self.constraints)
        for _, eps in cleaned:
            if eps <= 0:
                raise ValueError("neighborhood radii must be positive")
        object.__setattr__(self, "constraints", cleaned)


@dataclass(frozen=True)
class TreeShape:
    """A finitely branching tree: the binary tree, or a subtree of the countably branching one."""

    kind: TreeKind
    explicit: Tuple[Tuple[Node, Tuple[Node, ...]], ...] = ()
    branches: Tuple[Branch, ...] = ()
    padding: int = 0

    @classmethod
    def binary(cls) -> "TreeShape":
        return cls(TreeKind.BINARY)

    @property
    def table(self) -> Dict[Node, Tuple[Node, ...]]:
        return dict(self.explicit)


@dataclass(frozen=True)
class NormCertificate:
    optimal_set: Tuple[Node, ...]
    value: Fraction
    family: str = "chains"


@dataclass(frozen=True)
class DualCertificate:
    antichain: Tuple[Node, ...]
    signs: Tuple[int, ...]
    value: Fraction
    attained: bool = True


@dataclass(frozen=True)
class SupResult:
    set: SetId
    value: Fraction
    witness: FinVector
    antichain: Tuple[Node, ...]
    attained: bool = True


@dataclass(frozen=True)
class ClassificationReport:
    norm: Fraction
    in_ball: bool
    on_sphere: bool
    extreme: bool
    strongly_exposed: bool
    witness_antichain: Tuple[Node, ...]
    unit_nodes: Tuple[Node, ...]
    in_sigma: bool
    in_sigma_plus: bool
    in_omega: bool
    in_omega_plus: bool
    point_of_continuity: bool
    pc_reason: str


@dataclass(frozen=True)
class SignProblem:
    rows: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(Fraction(a) for a in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0]) if self.rows else 0


@dataclass(frozen=True)
class SignResult:
    theta: Tuple[int, ...]
    sums: Tuple[Fraction, ...]
    bound: int
    merges: Tuple[Tuple[int, int], ...] = ()


@dataclass(frozen=True)
class DaugavetWitness:
    x: FinVector
    y: FinVector
    chain: Tuple[Node, ...]
    anchor: Node
    lam: Fraction
    value: Fraction


@dataclass(frozen=True)
class DefianceTranscript:
    elements: Tuple[FinVector, ...]
    chain: Tuple[Node, ...]
    separator: Functional
    gap: Fraction
    signs: Tuple[int, ...] = ()
    target: Optional[FinVector] = None
    auxiliary: Optional[Functional] = None
    start: Optional[Node] = None
    steps: Tuple[str, ...] = ()


@dataclass(frozen=True)
class AdpWitness:
    x: FinVector
    y: FinVector
    theta: int
    antichain: Tuple[Node, ...]
    chain: Tuple[Node, ...]
    meeting_node: Node
    value: Fraction


@dataclass(frozen=True)
class PcConstruction:
    vector: FinVector
    branches: Tuple[Branch, ...]
    level: int
    n1: int
    n2: int
    halved: Tuple[Node, ...]
    full: Tuple[Node, ...]
    theta: Tuple[int, ...]


@dataclass(frozen=True)
class Reduction:
    shape: TreeShape
    levels: Tuple[Tuple[Node, ...], ...]
    pruned: Tuple[Tuple[Node, Fraction], ...]
    pruned_mass: Fraction
    epsilon: Fraction


@dataclass(frozen=True)
class PibaseTerm:
    residual: Fraction
    diameter_term: Fraction
    tail_term: Fraction

    @property
    def total(self) -> Fraction:
        return self.residual + self.diameter_term + self.tail_term


@dataclass(frozen=True)
class PibaseWitness:
    x0: FinVector
    delta0: Fraction
    epsilon: Fraction
    reduction: Reduction
    terms: Tuple[PibaseTerm, ...]
    spot_checks: int = 0


@dataclass(frozen=True)
class ScdZeroReport:
    n: int
    k: int
    selector: str
    r: Fraction
    envelope: Fraction
    constant: Fraction
    bound: Fraction
    asserted: bool
    holds: bool


@dataclass(frozen=True)
class SuperAdpReport:
    value: Fraction
    per_theta: Tuple[Tuple[int, Fraction], ...]
    bound: Fraction
    verdict: str


@dataclass(frozen=True)
class RunConfig:
    space: SpaceId = field(default_factory=SpaceId.xt)
    format: str = "json"
    seed: int = 0
    verify: bool = True
