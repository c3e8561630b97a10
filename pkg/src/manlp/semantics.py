"""Interpretations, formula evaluation, satisfaction and model checking."""

from __future__ import annotations

from collections.abc import Mapping
from typing import Iterable, Iterator

from .lattice import (
    LatticeKind,
    TruthValue,
    Interval,
    Unit,
    bottom,
    get_signature,
    leq,
    top,
)
from .syntax import Agg, BodyExpr, Conn, Const, NegProp, Program, Prop, Rule


class SymbolMismatchError(ValueError):
    """Raised when two interpretations (or a program and an interpretation)
    do not range over the same symbols."""


class UnknownSymbolError(KeyError):
    """Raised when a body references an atom the interpretation lacks."""


class Interpretation(Mapping):
    """A total, immutable assignment of truth values to symbols."""

    __slots__ = ("kind", "_values")

    def __init__(self, kind: LatticeKind, values: Mapping[str, TruthValue]):
        for sym, val in values.items():
            if val.kind is not kind:
                raise ValueError(f"value {val!r} for {sym!r} is not in the {kind.value} lattice")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "_values", dict(values))

    def __setattr__(self, name, value):
        raise AttributeError("Interpretation is immutable")

    @classmethod
    def bottom(cls, kind: LatticeKind, symbols: Iterable[str]) -> "Interpretation":
        bot = bottom(kind)
        return cls(kind, {s: bot for s in symbols})

    @classmethod
    def top(cls, kind: LatticeKind, symbols: Iterable[str]) -> "Interpretation":
        tp = top(kind)
        return cls(kind, {s: tp for s in symbols})

    def __getitem__(self, symbol: str) -> TruthValue:
        try:
            return self._values[symbol]
        except KeyError:
            raise UnknownSymbolError(symbol) from None

    def __iter__(self) -> Iterator[str]:
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    @property
    def symbols(self) -> frozenset[str]:
        return frozenset(self._values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Interpretation):
            return NotImplemented
        return self.kind is other.kind and self._values == other._values

    def __hash__(self):
        return hash((self.kind, tuple(sorted(self._values.items(), key=lambda kv: kv[0]))))

    def __repr__(self) -> str:
        inner = ", ".join(f"{s}: {self._values[s]!r}" for s in sorted(self._values))
        return f"Interpretation({self.kind.value}, {{{inner}}})"


def _check_same_symbols(i: Interpretation, j: Interpretation) -> None:
    if i.kind is not j.kind:
        raise SymbolMismatchError(f"mixed lattice kinds: {i.kind} vs {j.kind}")
    if i.symbols != j.symbols:
        raise SymbolMismatchError(
            f"symbol sets differ: {sorted(i.symbols)} vs {sorted(j.symbols)}"
        )


def interp_leq(i: Interpretation, j: Interpretation) -> bool:
    """Pointwise lattice order on interpretations."""
    _check_same_symbols(i, j)
    return all(leq(i[s], j[s]) for s in i)


def evaluate(body: BodyExpr, interp: Interpretation) -> TruthValue:
    """Evaluate a body under an interpretation by structural recursion."""
    sig = get_signature(interp.kind)

    def rec(expr: BodyExpr) -> TruthValue:
        if isinstance(expr, Prop):
            return interp[expr.name]
        if isinstance(expr, NegProp):
            return sig.negation(interp[expr.name])
        if isinstance(expr, Const):
            return expr.value
        if isinstance(expr, Conn):
            return sig.body_op(expr.op)(rec(expr.left), rec(expr.right))
        if isinstance(expr, Agg):
            return sig.aggregator(expr.name)(*[rec(a) for a in expr.args])
        raise TypeError(f"not a body expression: {expr!r}")

    return rec(body)


def rule_value(rule: Rule, interp: Interpretation) -> TruthValue:
    """Truth value of the whole rule, head <- body, under an interpretation."""
    imp = get_signature(interp.kind).implication(rule.imp)
    return imp(interp[rule.head], evaluate(rule.body, interp))


def satisfies(rule: Rule, interp: Interpretation) -> bool:
    """A rule holds when its truth value reaches the rule weight."""
    return leq(rule.weight, rule_value(rule, interp))


def is_model(program: Program, interp: Interpretation) -> bool:
    return all(satisfies(rule, interp) for rule in program.rules)


# ---------------------------------------------------------------------------
# Flat-map serialization: symbol -> number (unit) or [lo, hi] (interval).
# ---------------------------------------------------------------------------


def interpretation_to_dict(interp: Interpretation) -> dict:
    out = {}
    for sym in sorted(interp.symbols):
        val = interp[sym]
        out[sym] = val.value if isinstance(val, Unit) else [val.lo, val.hi]
    return out


def interpretation_from_dict(
    data: Mapping, kind: LatticeKind, symbols: Iterable[str]
) -> Interpretation:
    """Decode a flat symbol map; it must cover exactly the given symbols."""
    symbols = set(symbols)
    missing = symbols - set(data)
    if missing:
        raise SymbolMismatchError(f"interpretation is missing symbols: {sorted(missing)}")
    extra = set(data) - symbols
    if extra:
        raise SymbolMismatchError(f"interpretation has extraneous symbols: {sorted(extra)}")
    values: dict[str, TruthValue] = {}
    for sym in symbols:
        raw = data[sym]
        if isinstance(raw, (int, float)) and not isinstance(raw, bool):
            if kind is not LatticeKind.UNIT:
                raise ValueError(f"scalar value for {sym!r} in an interval interpretation")
            values[sym] = Unit(float(raw))
        elif isinstance(raw, (list, tuple)) and len(raw) == 2:
            if kind is not LatticeKind.INTERVAL:
                raise ValueError(f"interval value for {sym!r} in a unit interpretation")
            values[sym] = Interval(float(raw[0]), float(raw[1]))
        else:
            raise ValueError(f"bad truth value for {sym!r}: {raw!r}")
    return Interpretation(kind, values)
