"""Afriat numbers and the utility functions built from them.

The level-ordered recursion is written once, over a generic cost matrix
``cost[t][s]`` (the expenditure at observation ``t``'s prices, or price
function, of bundle ``s``). Linear data, nonlinear expenditure tables and the
strict (SARP) variant all call into it.

Every returned certificate is re-verified exhaustively in exact arithmetic
before it leaves this module.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

from ._rational import RationalLike, to_rational
from .acyclicity import (
    ViolationWitness,
    check_garp_like,
    levels_from_reach,
    reach_bits,
)
from .dataset import (
    Bundle,
    ExpenditureTable,
    PriceVector,
    PurchaseDataset,
    build_rp,
    build_rp_nonlinear,
    build_s,
    dot,
)
from .errors import AxiomViolationError, DimensionError, VerificationError

_ZERO = Fraction(0)
_ONE = Fraction(1)
FLOAT_SLACK = 2.0**-40

CostMatrix = Sequence[Sequence[Fraction]]


@dataclass(frozen=True)
class AfriatNumbers:
    """Utility levels ``u`` and marginal utilities of money ``lam``.

    ``expenditures[t]`` is the own-cost ``cost[t][t]`` the numbers were built
    against; it anchors the piecewise utilities. ``strict_mode`` marks output
    of :func:`sarp_numbers`.
    """

    u: tuple[Fraction, ...]
    lam: tuple[Fraction, ...]
    levels: tuple[int, ...]
    strict_mode: bool = False
    expenditures: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        if len(self.u) != len(self.lam):
            raise DimensionError("u and lam must have the same length")
        if any(lam <= 0 for lam in self.lam):
            raise ValueError("marginal utilities must be strictly positive")

    def __len__(self) -> int:
        return len(self.u)


def _afriat_recursion(
    cost: CostMatrix, levels: Sequence[int], margin: Fraction
) -> tuple[list[Fraction], list[Fraction]]:
    n = len(cost)
    groups: dict[int, list[int]] = defaultdict(list)
    for t in range(n):
        groups[levels[t]].append(t)
    u: list[Fraction] = [_ZERO] * n
    lam: list[Fraction] = [_ONE] * n
    done: list[int] = []
    for level in sorted(groups):
        members = groups[level]
        level_u = min(
            (
                u[j] + lam[j] * (cost[j][k] - cost[j][j]) - margin
                for j in done
                for k in members
            ),
            default=_ZERO,
        )
        level_u = min(level_u, _ZERO)
        for i in members:
            u[i] = level_u
        for i in members:
            best = _ONE
            for j in done:
                gap = cost[i][j] - cost[i][i]
                if gap <= 0:
                    # lower level never revealed-dominated by a higher one under GARP
                    raise VerificationError(
                        f"non-positive cost gap between observations {i} and {j}"
                    )
                best = max(best, (u[j] - level_u + margin) / gap)
            lam[i] = best
        done.extend(members)
    return u, lam


def afriat_slack(cost: CostMatrix, u: Sequence[Fraction], lam: Sequence[Fraction]):
    """``slack[t][s] = u^t + lam^t (cost[t][s] - cost[t][t]) - u^s``; non-negative iff the inequalities hold."""
    n = len(cost)
    return [
        [u[t] + lam[t] * (cost[t][s] - cost[t][t]) - u[s] for s in range(n)]
        for t in range(n)
    ]


def _verify_weak(cost: CostMatrix, u, lam) -> None:
    slack = afriat_slack(cost, u, lam)
    for t, row in enumerate(slack):
        for s, value in enumerate(row):
            if value < 0:
                raise VerificationError(
                    f"Afriat inequality fails for t={t}, s={s} (slack {value})"
                )


def _levels(weak) -> tuple[int, ...]:
    return levels_from_reach(reach_bits(weak))


def _numbers_from_cost(cost: CostMatrix, rel, axiom: str) -> AfriatNumbers:
    verdict = check_garp_like(rel)
    if not verdict:
        raise AxiomViolationError(axiom, verdict.witness)
    levels = _levels(rel.weak)
    u, lam = _afriat_recursion(cost, levels, _ZERO)
    _verify_weak(cost, u, lam)
    return AfriatNumbers(
        tuple(u), tuple(lam), levels, False, tuple(cost[t][t] for t in range(len(cost)))
    )


def afriat_numbers(dataset: PurchaseDataset) -> AfriatNumbers:
    """Numbers ``(u, lam)`` with ``u^s <= u^t + lam^t p^t.(x^s - x^t)`` for all ``s, t``.

    Raises :class:`AxiomViolationError` (carrying the GARP witness) when the
    data violate GARP.
    """
    return _numbers_from_cost(dataset.costs, build_rp(dataset), "GARP")


def fm_numbers(table: ExpenditureTable) -> AfriatNumbers:
    """Afriat numbers against a nonlinear expenditure table.

    Same recursion as :func:`afriat_numbers` with ``p^j.(x^k - x^j)`` replaced
    by ``E[j][k] - E[j][j]``; on a linear table the output is identical.
    """
    return _numbers_from_cost(table.values, build_rp_nonlinear(table), "GARP")


def sarp_numbers(dataset: PurchaseDataset) -> AfriatNumbers:
    """Numbers satisfying the strict inequalities for every pair of distinct bundles.

    The recursion is run with a unit margin on the levels of the revealed
    preference relation. Equal bundles always share a level under SARP, hence
    share ``u``.
    """
    verdict = check_garp_like(build_s(dataset))
    if not verdict:
        raise AxiomViolationError("SARP", verdict.witness)
    cost = dataset.costs
    levels = _levels(build_rp(dataset).weak)
    u, lam = _afriat_recursion(cost, levels, _ONE)
    x = dataset.bundles
    slack = afriat_slack(cost, u, lam)
    for t in range(dataset.n_obs):
        for s in range(dataset.n_obs):
            if x[t] == x[s]:
                if u[t] != u[s]:
                    raise VerificationError(f"equal bundles {t}, {s} got different utility levels")
            elif slack[t][s] <= 0:
                raise VerificationError(
                    f"strict Afriat inequality fails for t={t}, s={s} (slack {slack[t][s]})"
                )
    return AfriatNumbers(
        tuple(u), tuple(lam), levels, True, tuple(cost[t][t] for t in range(len(cost)))
    )


def curvature(z: Sequence[Fraction], t_param: Fraction) -> float:
    """``sqrt(|z|^2 + T) - sqrt(T)``: strictly convex, zero only at the origin, slopes below 1."""
    sq = sum((v * v for v in z), _ZERO)
    return math.sqrt(float(sq + t_param)) - math.sqrt(float(t_param))


@dataclass(frozen=True)
class UtilityPiece:
    u: Fraction
    lam: Fraction
    prices: PriceVector
    base: Bundle


@dataclass(frozen=True)
class Perturbation:
    epsilon: Fraction
    t_param: Fraction

    def __post_init__(self) -> None:
        if self.epsilon <= 0:
            raise ValueError("perturbation epsilon must be positive")


@dataclass(frozen=True)
class PiecewiseUtility:
    """``U(x) = min_t { u^t + lam^t p^t.(x - x^t) - eps * g(x - x^t) }``.

    Without a perturbation the value is an exact :class:`Fraction`. The
    perturbed form involves a square root and is evaluated as a float.
    """

    pieces: tuple[UtilityPiece, ...]
    perturbation: Perturbation | None = None

    def __post_init__(self) -> None:
        if not self.pieces:
            raise ValueError("a piecewise utility needs at least one piece")

    @property
    def n_goods(self) -> int:
        return len(self.pieces[0].prices)

    @cached_property
    def _scaled(self) -> tuple[int, list[tuple[list[int], int]]]:
        # affine pieces a.x + b, scaled by one common denominator so that
        # evaluation runs on machine-friendly ints
        affine = []
        for piece in self.pieces:
            slope = [piece.lam * p for p in piece.prices]
            intercept = piece.u - dot(slope, piece.base)
            affine.append((slope, intercept))
        denom = 1
        for slope, intercept in affine:
            for v in slope:
                denom = math.lcm(denom, v.denominator)
            denom = math.lcm(denom, intercept.denominator)
        scaled = [
            ([int(v * denom) for v in slope], int(intercept * denom))
            for slope, intercept in affine
        ]
        return denom, scaled

    def linear_value(self, point: Sequence[RationalLike]) -> Fraction:
        """Exact value of the unperturbed piecewise minimum."""
        y = self._check(point)
        den = 1
        for v in y:
            den = math.lcm(den, v.denominator)
        k = [int(v * den) for v in y]
        denom, scaled = self._scaled
        best = min(sum(a * b for a, b in zip(slope, k)) + den * b0 for slope, b0 in scaled)
        return Fraction(best, denom * den)

    def piece_values(self, point: Sequence[RationalLike]) -> list[Fraction]:
        y = self._check(point)
        return [
            p.u + p.lam * dot(p.prices, [a - b for a, b in zip(y, p.base)])
            for p in self.pieces
        ]

    @cached_property
    def _float_pieces(self) -> list[tuple[list[float], float, list[float]]]:
        denom, scaled = self._scaled
        return [
            ([a / denom for a in slope], b / denom, [float(v) for v in piece.base])
            for (slope, b), piece in zip(scaled, self.pieces)
        ]

    def __call__(self, point: Sequence[RationalLike]):
        if self.perturbation is None:
            return self.linear_value(point)
        y = [float(v) for v in self._check(point)]
        eps = float(self.perturbation.epsilon)
        root_t = math.sqrt(float(self.perturbation.t_param))
        best = math.inf
        for slope, intercept, base in self._float_pieces:
            linear = intercept + math.fsum(a * v for a, v in zip(slope, y))
            sq = math.fsum((v - b) ** 2 for v, b in zip(y, base))
            best = min(best, linear - eps * (math.sqrt(sq + root_t**2) - root_t))
        return best

    def _check(self, point: Sequence[RationalLike]) -> tuple[Fraction, ...]:
        y = tuple(to_rational(v) for v in point)
        if len(y) != self.n_goods:
            raise DimensionError(f"point has {len(y)} goods, utility expects {self.n_goods}")
        return y


def afriat_utility(numbers: AfriatNumbers, dataset: PurchaseDataset) -> PiecewiseUtility:
    if len(numbers) != dataset.n_obs:
        raise DimensionError("numbers and dataset disagree on the number of observations")
    return PiecewiseUtility(
        tuple(
            UtilityPiece(u, lam, p, x)
            for u, lam, p, x in zip(numbers.u, numbers.lam, dataset.prices, dataset.bundles)
        )
    )


def evaluate_utility(
    numbers: AfriatNumbers, dataset: PurchaseDataset, point: Sequence[RationalLike]
) -> Fraction:
    """Exact value of the piecewise-minimum utility at ``point``."""
    return afriat_utility(numbers, dataset).linear_value(point)


def _perturbation_epsilon(
    numbers: AfriatNumbers, dataset: PurchaseDataset, t_param: Fraction
) -> Fraction:
    monotone_bound = min(
        lam * min(p) for lam, p in zip(numbers.lam, dataset.prices)
    )
    slack = afriat_slack(dataset.costs, numbers.u, numbers.lam)
    x = dataset.bundles
    ratio_bound = math.inf
    for t in range(dataset.n_obs):
        for s in range(dataset.n_obs):
            if x[s] != x[t]:
                g = curvature([a - b for a, b in zip(x[s], x[t])], t_param)
                ratio_bound = min(ratio_bound, float(slack[t][s]) / g)
    if ratio_bound > float(monotone_bound) * (1 + FLOAT_SLACK):
        return monotone_bound / 2
    # round the float bound down so eps stays below the true half-minimum
    return Fraction(ratio_bound / 2) * Fraction(2**20 - 1, 2**20)


def strict_concave_utility(
    numbers: AfriatNumbers, dataset: PurchaseDataset, grid_steps: int = 2
) -> PiecewiseUtility:
    """Perturb the SARP utility by ``-eps * g(x - x^t)`` to make it strictly concave.

    ``eps`` is half the smaller of ``min_t lam^t min_l p^t_l`` (keeps every
    piece increasing) and ``min slack[t][s] / g(x^s - x^t)`` over distinct
    bundle pairs (keeps every strict inequality). The result is checked to
    rationalize the data strictly and to increase along each axis on a grid
    spanning the observed bundles.
    """
    if not numbers.strict_mode:
        raise ValueError("strict_concave_utility needs numbers from sarp_numbers")
    if len(numbers) != dataset.n_obs:
        raise DimensionError("numbers and dataset disagree on the number of observations")
    t_param = Fraction(dataset.n_obs)
    eps = _perturbation_epsilon(numbers, dataset, t_param)
    utility = PiecewiseUtility(
        afriat_utility(numbers, dataset).pieces, Perturbation(eps, t_param)
    )
    _verify_strict_rationalization(utility, numbers, dataset)
    _verify_increasing(utility, dataset, grid_steps)
    return utility


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= FLOAT_SLACK * max(1.0, abs(a), abs(b))


def _verify_strict_rationalization(
    utility: PiecewiseUtility, numbers: AfriatNumbers, dataset: PurchaseDataset
) -> None:
    values = [utility(x) for x in dataset.bundles]
    for t, v in enumerate(values):
        if not _close(v, float(numbers.u[t])):
            raise VerificationError(f"perturbed utility moved observation {t}: {v} vs {numbers.u[t]}")
    c = dataset.costs
    x = dataset.bundles
    for t in range(dataset.n_obs):
        for s in range(dataset.n_obs):
            if c[t][s] <= c[t][t] and x[s] != x[t] and not values[t] - values[s] > 0:
                raise VerificationError(f"bundle {s} is not strictly worse than {t}")


def _verify_increasing(utility: PiecewiseUtility, dataset: PurchaseDataset, steps: int) -> None:
    n_goods = dataset.n_goods
    top = [max(x[i] for x in dataset.bundles) for i in range(n_goods)]
    axes = [
        sorted({top[i] * k / steps for k in range(steps + 1)}) for i in range(n_goods)
    ]
    for point in product(*axes):
        base = utility(point)
        for i in range(n_goods):
            step = top[i] / steps if top[i] > 0 else _ONE
            moved = list(point)
            moved[i] += step
            if not utility(moved) > base:
                raise VerificationError(f"utility not increasing in good {i} at {point}")


def fm_utility(numbers: AfriatNumbers, row_evals: Sequence[RationalLike]) -> Fraction:
    """``min_t { u^t + lam^t (g^t(x) - g^t(x^t)) }`` given ``row_evals[t] = g^t(x)``."""
    evals = [to_rational(v) for v in row_evals]
    if len(evals) != len(numbers) or len(numbers.expenditures) != len(numbers):
        raise DimensionError("need one price-function evaluation per observation")
    return min(
        u + lam * (g - own)
        for u, lam, g, own in zip(numbers.u, numbers.lam, evals, numbers.expenditures)
    )


@dataclass(frozen=True)
class QuasilinearParams:
    """Income ``m`` and divisible-good prices ``q`` for the quasilinear representation."""

    m: Fraction
    q: tuple[Fraction, ...]


def quasilinear_params(numbers: AfriatNumbers, dataset: PurchaseDataset) -> QuasilinearParams:
    """Take ``m = 1 + max_t p^t.x^t`` and ``q^t = 1 / lam^t``.

    At each observation ``t`` and each observed bundle ``x^s`` the consumer
    could afford (``p^t.x^s <= m``), spending the rest on the divisible good
    must not beat the observed choice:
    ``U(x^s) + (m - p^t.x^s)/q^t <= U(x^t) + (m - p^t.x^t)/q^t``.
    """
    c = dataset.costs
    m = 1 + max(c[t][t] for t in range(dataset.n_obs))
    q = tuple(1 / lam for lam in numbers.lam)
    utility = afriat_utility(numbers, dataset)
    values = [utility.linear_value(x) for x in dataset.bundles]
    for t in range(dataset.n_obs):
        chosen = values[t] + (m - c[t][t]) / q[t]
        for s in range(dataset.n_obs):
            if c[t][s] <= m and values[s] + (m - c[t][s]) / q[t] > chosen:
                raise VerificationError(
                    f"quasilinear chain fails at observation {t} against bundle {s}"
                )
    return QuasilinearParams(m, q)


@dataclass(frozen=True)
class DiffPreconditionReport:
    """Outcome of the differentiable-rationalization precondition.

    ``pair`` names two observations with non-proportional prices but the
    same bundle; ``sarp_witness`` is set when SARP itself fails.
    """

    passed: bool
    pair: tuple[int, int] | None = None
    sarp_witness: ViolationWitness | None = None

    def __bool__(self) -> bool:
        return self.passed


def check_differentiable_precondition(dataset: PurchaseDataset) -> DiffPreconditionReport:
    verdict = check_garp_like(build_s(dataset))
    if not verdict:
        return DiffPreconditionReport(False, sarp_witness=verdict.witness)
    x = dataset.bundles
    # price directions: proportional prices are compatible with one gradient
    p = [tuple(v / sum(prices) for v in prices) for prices in dataset.prices]
    for t in range(dataset.n_obs):
        for s in range(t + 1, dataset.n_obs):
            if p[t] != p[s] and x[t] == x[s]:
                return DiffPreconditionReport(False, pair=(t, s))
    return DiffPreconditionReport(True)


def sample_affordable(
    dataset: PurchaseDataset, t: int, rng, count: int, denominator: int = 12
) -> Iterable[Bundle]:
    """Random rational bundles on or inside observation ``t``'s budget line.

    Used by tests and the CLI's self-checks to probe rationalization away
    from the observed bundles.
    """
    p = dataset.prices[t]
    budget = dataset.costs[t][t]
    n_goods = dataset.n_goods
    for _ in range(count):
        weights = [rng.randint(0, denominator) for _ in range(n_goods)]
        total = sum(weights) or 1
        factor = Fraction(rng.randint(0, denominator), denominator * total) * budget
        yield tuple(w * factor / p[i] for i, w in enumerate(weights))
