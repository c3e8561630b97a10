"""Truth-value lattices and their algebraic operators.

Two lattices are built in: the unit interval [0,1] with the Gödel, product
and Łukasiewicz adjoint pairs, and the lattice C([0,1]) of closed
subintervals of [0,1] ordered componentwise, with the family of exponential
interval products (ei-products) and their residua.  Every operator here is a
pure function on immutable values; values from different lattices never mix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Mapping, Union


class LatticeKind(Enum):
    UNIT = "unit"
    INTERVAL = "interval"


class DomainMismatchError(TypeError):
    """Raised when values from different lattices meet in one operation."""


class UnknownOperatorError(KeyError):
    """Raised when a connective or aggregator label cannot be resolved."""


@dataclass(frozen=True)
class Unit:
    """A scalar truth value in [0,1]."""

    value: float

    def __post_init__(self) -> None:
        if not (isinstance(self.value, (int, float)) and 0.0 <= self.value <= 1.0):
            raise ValueError(f"unit truth value out of [0,1]: {self.value!r}")
        object.__setattr__(self, "value", float(self.value))

    @property
    def kind(self) -> LatticeKind:
        return LatticeKind.UNIT

    def __repr__(self) -> str:
        return f"Unit({self.value!r})"


@dataclass(frozen=True)
class Interval:
    """A closed subinterval [lo, hi] of [0,1], ordered componentwise."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        ok = (
            isinstance(self.lo, (int, float))
            and isinstance(self.hi, (int, float))
            and 0.0 <= self.lo <= self.hi <= 1.0
        )
        if not ok:
            raise ValueError(f"not a subinterval of [0,1]: [{self.lo!r}, {self.hi!r}]")
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))

    @property
    def kind(self) -> LatticeKind:
        return LatticeKind.INTERVAL

    def __repr__(self) -> str:
        return f"Interval({self.lo!r}, {self.hi!r})"


TruthValue = Union[Unit, Interval]


def bottom(kind: LatticeKind) -> TruthValue:
    return Unit(0.0) if kind is LatticeKind.UNIT else Interval(0.0, 0.0)


def top(kind: LatticeKind) -> TruthValue:
    return Unit(1.0) if kind is LatticeKind.UNIT else Interval(1.0, 1.0)


def _require_same_kind(a: TruthValue, b: TruthValue) -> None:
    if type(a) is not type(b):
        raise DomainMismatchError(f"mixed lattice kinds: {a!r} vs {b!r}")


def _require_unit(*values: TruthValue) -> None:
    for v in values:
        if not isinstance(v, Unit):
            raise DomainMismatchError(f"unit-lattice operator applied to {v!r}")


def _require_interval(*values: TruthValue) -> None:
    for v in values:
        if not isinstance(v, Interval):
            raise DomainMismatchError(f"interval operator applied to {v!r}")


def leq(a: TruthValue, b: TruthValue) -> bool:
    """Lattice order: scalar order on [0,1], componentwise on intervals.

    Intervals are only partially ordered; incomparable pairs return False
    both ways.
    """
    _require_same_kind(a, b)
    if isinstance(a, Unit):
        return a.value <= b.value
    return a.lo <= b.lo and a.hi <= b.hi


# ---------------------------------------------------------------------------
# Unit-lattice adjoint pairs.  Implications take (consequent, antecedent),
# matching the reading of z <- y.
# ---------------------------------------------------------------------------


def godel_and(x: TruthValue, y: TruthValue) -> Unit:
    _require_unit(x, y)
    return Unit(min(x.value, y.value))


def product_and(x: TruthValue, y: TruthValue) -> Unit:
    _require_unit(x, y)
    return Unit(x.value * y.value)


def lukasiewicz_and(x: TruthValue, y: TruthValue) -> Unit:
    _require_unit(x, y)
    return Unit(max(0.0, x.value + y.value - 1.0))


def godel_imp(z: TruthValue, y: TruthValue) -> Unit:
    _require_unit(z, y)
    return Unit(1.0) if y.value <= z.value else Unit(z.value)


def product_imp(z: TruthValue, y: TruthValue) -> Unit:
    # y == 0 leaves every x feasible, so the residuum is the top element.
    _require_unit(z, y)
    if y.value == 0.0:
        return Unit(1.0)
    return Unit(min(1.0, z.value / y.value))


def lukasiewicz_imp(z: TruthValue, y: TruthValue) -> Unit:
    _require_unit(z, y)
    return Unit(min(1.0, 1.0 - y.value + z.value))


# ---------------------------------------------------------------------------
# Exponential interval products on C([0,1]) and their residua.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EiParams:
    """Exponents (alpha, beta, gamma, delta) of an exponential interval product.

    The constraints beta <= alpha and delta <= gamma keep the product inside
    C([0,1]): the lower endpoint gets the larger exponents, hence the smaller
    value.
    """

    alpha: int
    beta: int
    gamma: int
    delta: int

    def __post_init__(self) -> None:
        for name in ("alpha", "beta", "gamma", "delta"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"ei exponent {name} must be a natural number >= 1, got {v!r}")
        if self.beta > self.alpha:
            raise ValueError(f"ei exponents require beta <= alpha, got beta={self.beta}, alpha={self.alpha}")
        if self.delta > self.gamma:
            raise ValueError(f"ei exponents require delta <= gamma, got delta={self.delta}, gamma={self.gamma}")

    def __repr__(self) -> str:
        return f"EiParams({self.alpha}, {self.beta}, {self.gamma}, {self.delta})"


#: Componentwise interval product, the `*` body connective.
STAR = EiParams(1, 1, 1, 1)


def ei_product(p: EiParams, x: TruthValue, y: TruthValue) -> Interval:
    """[a,b] & [c,d] = [a^alpha * c^gamma, b^beta * d^delta]."""
    _require_interval(x, y)
    return Interval(x.lo**p.alpha * y.lo**p.gamma, x.hi**p.beta * y.hi**p.delta)


def ei_residuum(p: EiParams, z: TruthValue, y: TruthValue) -> Interval:
    """Greatest x in C([0,1]) with ei_product(p, x, y) <= z.

    Each endpoint constraint is solved independently and capped at 1; a zero
    (or underflowing) antecedent power makes the constraint vacuous.  The
    lower endpoint is additionally capped by the upper one so the result
    stays a valid interval.
    """
    _require_interval(z, y)
    ylo_pow = y.lo**p.gamma
    yhi_pow = y.hi**p.delta
    u = 1.0 if ylo_pow == 0.0 else min(1.0, (z.lo / ylo_pow) ** (1.0 / p.alpha))
    v = 1.0 if yhi_pow == 0.0 else min(1.0, (z.hi / yhi_pow) ** (1.0 / p.beta))
    return Interval(min(u, v), v)


def negate(x: TruthValue) -> TruthValue:
    """Standard negation: 1-x on [0,1], endpoint flip on intervals."""
    if isinstance(x, Unit):
        return Unit(1.0 - x.value)
    return Interval(1.0 - x.hi, 1.0 - x.lo)


def sup_value(values: Iterable[TruthValue], kind: LatticeKind) -> TruthValue:
    """Componentwise supremum; the empty supremum is the bottom element."""
    values = list(values)
    if not values:
        return bottom(kind)
    if kind is LatticeKind.UNIT:
        _require_unit(*values)
        return Unit(max(v.value for v in values))
    _require_interval(*values)
    return Interval(max(v.lo for v in values), max(v.hi for v in values))


# ---------------------------------------------------------------------------
# Built-in aggregators: componentwise, monotone and continuous.
# ---------------------------------------------------------------------------


def _check_agg_args(values: tuple[TruthValue, ...]) -> None:
    if not values:
        raise ValueError("aggregator needs at least one argument")
    for v in values[1:]:
        _require_same_kind(values[0], v)


def agg_min(*values: TruthValue) -> TruthValue:
    _check_agg_args(values)
    if isinstance(values[0], Unit):
        return Unit(min(v.value for v in values))
    return Interval(min(v.lo for v in values), min(v.hi for v in values))


def agg_max(*values: TruthValue) -> TruthValue:
    _check_agg_args(values)
    if isinstance(values[0], Unit):
        return Unit(max(v.value for v in values))
    return Interval(max(v.lo for v in values), max(v.hi for v in values))


def agg_mean(*values: TruthValue) -> TruthValue:
    _check_agg_args(values)
    n = len(values)
    if isinstance(values[0], Unit):
        return Unit(math.fsum(v.value for v in values) / n)
    return Interval(
        math.fsum(v.lo for v in values) / n,
        math.fsum(v.hi for v in values) / n,
    )


# ---------------------------------------------------------------------------
# Lattice signatures: everything a program needs to resolve its labels.
# ---------------------------------------------------------------------------

BinaryOp = Callable[[TruthValue, TruthValue], TruthValue]

ImpLabel = Union[str, EiParams]


@dataclass(frozen=True)
class AdjointPair:
    conj: BinaryOp
    imp: BinaryOp


@dataclass(frozen=True)
class LatticeSignature:
    """A named lattice: adjoint pairs by label, negation, body connectives
    and aggregators."""

    kind: LatticeKind
    adjoint_pairs: Mapping[str, AdjointPair]
    body_ops: Mapping[str, BinaryOp]
    negation: Callable[[TruthValue], TruthValue]
    aggregators: Mapping[str, Callable[..., TruthValue]]

    def _pair(self, label: ImpLabel) -> AdjointPair:
        if isinstance(label, EiParams):
            if self.kind is not LatticeKind.INTERVAL:
                raise UnknownOperatorError(f"ei implication {label!r} needs the interval lattice")
            return AdjointPair(
                conj=lambda x, y: ei_product(label, x, y),
                imp=lambda z, y: ei_residuum(label, z, y),
            )
        try:
            return self.adjoint_pairs[label]
        except KeyError:
            raise UnknownOperatorError(f"no adjoint pair labelled {label!r} in the {self.kind.value} lattice") from None

    def conjunctor(self, label: ImpLabel) -> BinaryOp:
        return self._pair(label).conj

    def implication(self, label: ImpLabel) -> BinaryOp:
        return self._pair(label).imp

    def body_op(self, op: str) -> BinaryOp:
        try:
            return self.body_ops[op]
        except KeyError:
            raise UnknownOperatorError(f"no body connective {op!r} in the {self.kind.value} lattice") from None

    def aggregator(self, name: str) -> Callable[..., TruthValue]:
        try:
            return self.aggregators[name]
        except KeyError:
            raise UnknownOperatorError(f"unknown aggregator @{name}") from None


_UNIT_SIGNATURE = LatticeSignature(
    kind=LatticeKind.UNIT,
    adjoint_pairs={
        "G": AdjointPair(godel_and, godel_imp),
        "P": AdjointPair(product_and, product_imp),
        "L": AdjointPair(lukasiewicz_and, lukasiewicz_imp),
    },
    body_ops={"&G": godel_and, "&P": product_and, "&L": lukasiewicz_and},
    negation=negate,
    aggregators={"min": agg_min, "max": agg_max, "mean": agg_mean},
)


def _star(x: TruthValue, y: TruthValue) -> Interval:
    return ei_product(STAR, x, y)


_INTERVAL_SIGNATURE = LatticeSignature(
    kind=LatticeKind.INTERVAL,
    adjoint_pairs={},
    body_ops={"*": _star},
    negation=negate,
    aggregators={"min": agg_min, "max": agg_max, "mean": agg_mean},
)


def get_signature(kind: LatticeKind) -> LatticeSignature:
    return _UNIT_SIGNATURE if kind is LatticeKind.UNIT else _INTERVAL_SIGNATURE
