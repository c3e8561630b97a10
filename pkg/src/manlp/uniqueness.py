"""Uniqueness certificate for interval programs with product bodies.

For programs over C([0,1]) whose rule bodies are plain componentwise
products of atoms and negated atoms (connective ``*`` only, any ei
implications at the rule level), the consequence operator restricted below
the head-weight bound interpretation admits per-rule Lipschitz bounds
computed from the ei exponents and the componentwise maxima of the rule
weights.  When every rule's upper bound stays strictly below 1 the operator
is a contraction there, so the program has exactly one stable model and
plain iteration from the bottom interpretation finds it.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Mapping, Optional

from .engine import (
    DEFAULT_CONFIG,
    FixpointConfig,
    FixpointTrace,
    is_stable,
    iterate_tp,
    sup_norm,
    tp,
)
from .lattice import EiParams, Interval, LatticeKind, sup_value
from .semantics import Interpretation
from .syntax import Conn, BodyExpr, NegProp, Program, Prop, Rule


class IneligibleProgramError(ValueError):
    """The program is outside the certificate's scope; carries the reasons."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


class UncertifiedProgramError(ValueError):
    """Raised when a computation requiring the contraction guarantee is
    attempted on a program whose certificate verdict is negative."""


@dataclass(frozen=True)
class HeadBound:
    symbol: str
    bound: Interval


@dataclass(frozen=True)
class RuleCertificate:
    index: int
    lambda1: float
    lambda2: float

    @property
    def passes(self) -> bool:
        return self.lambda2 < 1.0


@dataclass(frozen=True)
class CertificateReport:
    per_rule: tuple[RuleCertificate, ...]
    head_bounds: tuple[HeadBound, ...]
    verdict: bool
    global_lipschitz: float


def star_decompose(body: BodyExpr) -> Optional[tuple[tuple[str, ...], tuple[str, ...]]]:
    """Split a pure ``*``-product body into (positive, negated) atoms.

    Returns None when the body contains anything else (constants,
    aggregators, other connectives).
    """
    pos: list[str] = []
    neg: list[str] = []

    def rec(expr: BodyExpr) -> bool:
        if isinstance(expr, Prop):
            pos.append(expr.name)
            return True
        if isinstance(expr, NegProp):
            neg.append(expr.name)
            return True
        if isinstance(expr, Conn) and expr.op == "*":
            return rec(expr.left) and rec(expr.right)
        return False

    if not rec(body):
        return None
    return tuple(pos), tuple(neg)


def eligibility_violations(program: Program) -> list[str]:
    """Reasons the certificate does not apply; empty means eligible."""
    if program.kind is not LatticeKind.INTERVAL:
        return ["program is not over the interval lattice C([0,1])"]
    violations = []
    for idx, rule in enumerate(program.rules):
        if not isinstance(rule.imp, EiParams):
            violations.append(f"rule {idx}: implication is not an ei implication")
        if star_decompose(rule.body) is None:
            violations.append(
                f"rule {idx}: body is not a plain product of atoms and negated atoms"
            )
    return violations


def eligible(program: Program) -> bool:
    return not eligibility_violations(program)


def head_weight_bounds(program: Program) -> tuple[HeadBound, ...]:
    """Componentwise maximum of rule weights per head symbol; symbols heading
    no rule get [0,0], which is also what the consequence operator assigns
    them."""
    bounds = []
    for sym in program.symbols:
        weights = [r.weight for r in program.rules_by_head.get(sym, ())]
        bounds.append(HeadBound(sym, sup_value(weights, LatticeKind.INTERVAL)))
    return tuple(bounds)


def bound_interpretation(program: Program) -> Interpretation:
    return Interpretation(
        LatticeKind.INTERVAL, {hb.symbol: hb.bound for hb in head_weight_bounds(program)}
    )


def _lambda_sum(theta: float, weight_exp: int, body_exp: int, atom_bounds: list[float], k: int) -> float:
    # 0**0 evaluates to 1.0, which is the convention these sums rely on
    # when body_exp == 1 and some bound is exactly zero.
    h = len(atom_bounds)
    w = theta**weight_exp
    total = 0.0
    for j in range(h):
        others = math.prod(atom_bounds[:j] + atom_bounds[j + 1 :])
        total += w * body_exp * atom_bounds[j] ** (body_exp - 1) * others**body_exp
    total += w * body_exp * (k - h) * math.prod(atom_bounds) ** body_exp
    return total


def rule_lambdas(rule: Rule, bounds: Mapping[str, Interval]) -> tuple[float, float]:
    """Per-rule Lipschitz bounds (lower-endpoint, upper-endpoint) of the
    consequence operator below the head-weight bounds.

    For a rule with weight [t1,t2], exponents (alpha,beta,gamma,delta),
    positive body atoms q_1..q_h and k total body atoms::

        lambda2 = sum_j t2^beta * delta * B2(q_j)^(delta-1) * (prod_{l!=j} B2(q_l))^delta
                  + t2^beta * delta * (k-h) * (prod_l B2(q_l))^delta

    with B2(q) the upper endpoint of q's head-weight bound, empty products
    equal to 1, and 0^0 = 1; lambda1 is the mirror image with t1, alpha,
    gamma and lower endpoints.
    """
    parts = star_decompose(rule.body)
    if parts is None or not isinstance(rule.imp, EiParams):
        raise IneligibleProgramError([f"rule {rule.head!r} is outside the certificate's scope"])
    pos, neg = parts
    k = len(pos) + len(neg)
    weight = rule.weight
    assert isinstance(weight, Interval)
    p = rule.imp
    lam1 = _lambda_sum(weight.lo, p.alpha, p.gamma, [bounds[q].lo for q in pos], k)
    lam2 = _lambda_sum(weight.hi, p.beta, p.delta, [bounds[q].hi for q in pos], k)
    return lam1, lam2


def certify(program: Program) -> CertificateReport:
    """Contraction certificate: verdict True guarantees exactly one stable
    model.  Raises IneligibleProgramError outside the certificate's scope."""
    violations = eligibility_violations(program)
    if violations:
        raise IneligibleProgramError(violations)
    head_bounds = head_weight_bounds(program)
    bound_map = {hb.symbol: hb.bound for hb in head_bounds}
    per_rule = []
    for idx, rule in enumerate(program.rules):
        lam1, lam2 = rule_lambdas(rule, bound_map)
        per_rule.append(RuleCertificate(idx, lam1, lam2))
    verdict = all(rc.passes for rc in per_rule)
    global_lipschitz = max((rc.lambda2 for rc in per_rule), default=0.0)
    return CertificateReport(tuple(per_rule), head_bounds, verdict, global_lipschitz)


def solve_unique_traced(
    program: Program, cfg: FixpointConfig = DEFAULT_CONFIG
) -> tuple[Interpretation, FixpointTrace]:
    """Compute the unique stable model of a certified program by iterating
    the consequence operator from bottom; refuses uncertified programs since
    the iteration would lack its convergence guarantee."""
    report = certify(program)
    if not report.verdict:
        raise UncertifiedProgramError(
            f"certificate fails: max per-rule bound {report.global_lipschitz} is not < 1"
        )
    trace = iterate_tp(program, cfg)
    if not trace.converged:
        raise UncertifiedProgramError(
            "iteration did not converge within the budget despite the certificate; "
            "raise max_iterations"
        )
    if not is_stable(program, trace.final, cfg):
        raise UncertifiedProgramError("computed fixpoint failed the stability check")
    return trace.final, trace


def solve_unique(program: Program, cfg: FixpointConfig = DEFAULT_CONFIG) -> Interpretation:
    return solve_unique_traced(program, cfg)[0]


def _random_below(bound: Interval, rng: random.Random) -> Interval:
    hi = rng.uniform(0.0, bound.hi)
    lo = rng.uniform(0.0, min(bound.lo, hi))
    return Interval(lo, hi)


def empirical_contraction_check(
    program: Program,
    samples: int = 1000,
    seed: int = 0,
    cfg: FixpointConfig = DEFAULT_CONFIG,
) -> float:
    """Largest observed ratio d(T(J1), T(J2)) / d(J1, J2) over random
    interpretation pairs below the head-weight bounds.  On a certified
    program it never exceeds the certificate's global Lipschitz constant."""
    report = certify(program)
    if not report.verdict:
        raise UncertifiedProgramError("contraction check needs a certified program")
    rng = random.Random(seed)
    bound_map = {hb.symbol: hb.bound for hb in report.head_bounds}
    worst = 0.0
    for _ in range(samples):
        j1 = Interpretation(
            LatticeKind.INTERVAL, {s: _random_below(bound_map[s], rng) for s in program.symbols}
        )
        j2 = Interpretation(
            LatticeKind.INTERVAL, {s: _random_below(bound_map[s], rng) for s in program.symbols}
        )
        denom = sup_norm(j1, j2)
        if denom == 0.0:
            continue
        ratio = sup_norm(tp(program, j1), tp(program, j2)) / denom
        worst = max(worst, ratio)
    return worst
