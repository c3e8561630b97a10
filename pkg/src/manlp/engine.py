"""Fixpoint machinery: immediate consequences, reducts and stable models.

The immediate consequence operator maps an interpretation I to the
interpretation that assigns each symbol the supremum, over the rules with
that head, of weight-conjoined body values.  For negation-free programs it
is monotone and its least fixpoint (reached by Kleene iteration from the
bottom interpretation) is the least model.  An interpretation is a stable
model when it equals the least fixpoint of its own reduct, the positive
program obtained by freezing every negated atom at its current value.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence

from .lattice import LatticeKind, TruthValue, Interval, Unit, get_signature, sup_value
from .semantics import Interpretation, SymbolMismatchError, evaluate, _check_same_symbols
from .syntax import Agg, BodyExpr, Conn, Const, NegProp, Program


class NonPositiveProgramError(ValueError):
    """Raised when an operation defined for negation-free programs meets a
    program containing default negation."""


@dataclass(frozen=True)
class FixpointConfig:
    tolerance: float = 1e-9
    max_iterations: int = 10000

    def __post_init__(self) -> None:
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


DEFAULT_CONFIG = FixpointConfig()

#: Distance under which a candidate counts as a fixpoint of its own reduct.
STABLE_CHECK_TOL = 1e-7


@dataclass(frozen=True)
class FixpointTrace:
    """Iterates of a fixpoint computation, bottom interpretation first."""

    iterates: tuple[Interpretation, ...]
    converged: bool
    residual: float

    @property
    def final(self) -> Interpretation:
        return self.iterates[-1]

    def effective_steps(self) -> int:
        """Number of applications that actually moved the interpretation."""
        return sum(
            1
            for a, b in zip(self.iterates, self.iterates[1:])
            if sup_norm(a, b) > 0.0
        )


def sup_norm(i: Interpretation, j: Interpretation) -> float:
    """Largest componentwise gap; interval endpoints count separately."""
    _check_same_symbols(i, j)
    worst = 0.0
    for sym in i:
        a, b = i[sym], j[sym]
        if isinstance(a, Unit):
            gap = abs(a.value - b.value)
        else:
            gap = max(abs(a.lo - b.lo), abs(a.hi - b.hi))
        if gap > worst:
            worst = gap
    return worst


def tp(program: Program, interp: Interpretation) -> Interpretation:
    """One application of the immediate consequence operator."""
    if interp.symbols != set(program.symbols):
        raise SymbolMismatchError(
            f"interpretation symbols {sorted(interp.symbols)} do not match the program's {list(program.symbols)}"
        )
    sig = get_signature(program.kind)
    out: dict[str, TruthValue] = {}
    for sym in program.symbols:
        contributions = [
            sig.conjunctor(rule.imp)(rule.weight, evaluate(rule.body, interp))
            for rule in program.rules_by_head.get(sym, ())
        ]
        out[sym] = sup_value(contributions, program.kind)
    return Interpretation(program.kind, out)


def _freeze_negations(expr: BodyExpr, interp: Interpretation) -> BodyExpr:
    sig = get_signature(interp.kind)
    if isinstance(expr, NegProp):
        return Const(sig.negation(interp[expr.name]))
    if isinstance(expr, Conn):
        return Conn(
            expr.op,
            _freeze_negations(expr.left, interp),
            _freeze_negations(expr.right, interp),
        )
    if isinstance(expr, Agg):
        return Agg(expr.name, tuple(_freeze_negations(a, interp) for a in expr.args))
    return expr


def reduct(program: Program, interp: Interpretation) -> Program:
    """Positive program obtained by replacing each negated atom with the
    constant value of its negation under ``interp``.  Heads, labels, weights,
    rule order and the symbol set are preserved."""
    new_rules = [
        replace(rule, body=_freeze_negations(rule.body, interp))
        for rule in program.rules
    ]
    return Program.of(program.kind, new_rules, extra_symbols=program.symbols)


def iterate_tp(
    program: Program,
    cfg: FixpointConfig = DEFAULT_CONFIG,
    start: Optional[Interpretation] = None,
) -> FixpointTrace:
    """Kleene iteration of the consequence operator from ``start`` (bottom by
    default) until the sup-norm step drops to the tolerance or the budget
    runs out."""
    cur = start if start is not None else Interpretation.bottom(program.kind, program.symbols)
    iterates = [cur]
    residual = float("inf")
    for _ in range(cfg.max_iterations):
        nxt = tp(program, cur)
        residual = sup_norm(nxt, cur)
        iterates.append(nxt)
        cur = nxt
        if residual <= cfg.tolerance:
            return FixpointTrace(tuple(iterates), True, residual)
    return FixpointTrace(tuple(iterates), False, residual)


def least_fixpoint(program: Program, cfg: FixpointConfig = DEFAULT_CONFIG) -> FixpointTrace:
    """Least fixpoint of a negation-free program by iteration from bottom.

    On convergence the final iterate approximates the least model.
    Non-convergence within the budget is reported on the trace, not raised.
    """
    if not program.is_positive():
        raise NonPositiveProgramError("least_fixpoint needs a negation-free program")
    return iterate_tp(program, cfg)


@dataclass(frozen=True)
class StabilityCheck:
    stable: bool
    lfp_converged: bool
    distance: float
    trace: FixpointTrace


def check_stable(
    program: Program,
    interp: Interpretation,
    cfg: FixpointConfig = DEFAULT_CONFIG,
    check_tol: float = STABLE_CHECK_TOL,
) -> StabilityCheck:
    """Stable-model test: is ``interp`` the least fixpoint of its reduct?

    A least-fixpoint run that fails to converge yields ``stable=False`` with
    the diagnostic flag ``lfp_converged=False``.
    """
    trace = least_fixpoint(reduct(program, interp), cfg)
    distance = sup_norm(trace.final, interp)
    return StabilityCheck(
        stable=trace.converged and distance <= check_tol,
        lfp_converged=trace.converged,
        distance=distance,
        trace=trace,
    )


def is_stable(
    program: Program,
    interp: Interpretation,
    cfg: FixpointConfig = DEFAULT_CONFIG,
    check_tol: float = STABLE_CHECK_TOL,
) -> bool:
    return check_stable(program, interp, cfg, check_tol).stable


def random_interpretation(
    kind: LatticeKind, symbols: Sequence[str], rng: random.Random
) -> Interpretation:
    values: dict[str, TruthValue] = {}
    for sym in symbols:
        if kind is LatticeKind.UNIT:
            values[sym] = Unit(rng.random())
        else:
            a, b = rng.random(), rng.random()
            values[sym] = Interval(min(a, b), max(a, b))
    return Interpretation(kind, values)


def default_starts(
    program: Program, seed: int = 0, n_random: int = 8
) -> list[Interpretation]:
    """Bottom, top and a seeded batch of random interpretations."""
    rng = random.Random(seed)
    starts = [
        Interpretation.bottom(program.kind, program.symbols),
        Interpretation.top(program.kind, program.symbols),
    ]
    starts += [
        random_interpretation(program.kind, program.symbols, rng) for _ in range(n_random)
    ]
    return starts


def _canonical_key(interp: Interpretation):
    out = []
    for sym in sorted(interp.symbols):
        v = interp[sym]
        out.append((v.value,) if isinstance(v, Unit) else (v.lo, v.hi))
    return tuple(out)


@dataclass(frozen=True)
class StableSearchResult:
    """Verified stable models with their search traces, plus counts of the
    starts that cycled, hit the budget, or settled on a non-stable point."""

    found: tuple[tuple[Interpretation, FixpointTrace], ...]
    nonconverged_starts: int = 0
    rejected_limits: int = 0

    def models(self) -> list[Interpretation]:
        return [interp for interp, _ in self.found]


def stable_search(
    program: Program,
    cfg: FixpointConfig = DEFAULT_CONFIG,
    starts: Optional[Iterable[Interpretation]] = None,
    seed: int = 0,
    check_tol: float = STABLE_CHECK_TOL,
    max_rounds: int = 1000,
    dedup_tol: float = 1e-6,
) -> StableSearchResult:
    """Multi-start search for stable models.

    Each start is driven by the map I -> lfp(reduct(P, I)) until the step
    falls under the tolerance, the iteration revisits an earlier point (a
    cycle), or the round budget runs out.  Converged limits are kept only if
    they pass the stability check.  An empty result means the search failed,
    not that no stable model exists.
    """
    if starts is None:
        starts = default_starts(program, seed=seed)
    found: list[tuple[Interpretation, FixpointTrace]] = []
    nonconverged = 0
    rejected = 0
    for start in starts:
        cur = start
        history = [cur]
        limit: Optional[Interpretation] = None
        residual = float("inf")
        for _ in range(max_rounds):
            nxt = least_fixpoint(reduct(program, cur), cfg).final
            residual = sup_norm(nxt, cur)
            if residual <= cfg.tolerance:
                limit = nxt
                history.append(nxt)
                break
            # a revisit of an earlier iterate while the step is still large is
            # a genuine cycle; the step guard keeps slowly converging
            # oscillations (which also pass near old iterates) iterating
            if residual > 100.0 * cfg.tolerance and any(
                sup_norm(nxt, past) <= cfg.tolerance for past in history[-100:-1]
            ):
                history.append(nxt)
                break
            history.append(nxt)
            cur = nxt
        if limit is None:
            nonconverged += 1
            continue
        if not is_stable(program, limit, cfg, check_tol):
            rejected += 1
            continue
        if any(sup_norm(limit, seen) <= dedup_tol for seen, _ in found):
            continue
        found.append((limit, FixpointTrace(tuple(history), True, residual)))
    found.sort(key=lambda pair: _canonical_key(pair[0]))
    return StableSearchResult(tuple(found), nonconverged, rejected)


def partition(program: Program) -> list[Program]:
    """Split into single-rule subprograms, each over the full symbol set, so
    that the direct consequence operator equals the supremum over the parts."""
    return [
        Program.of(program.kind, (rule,), extra_symbols=program.symbols)
        for rule in program.rules
    ]
