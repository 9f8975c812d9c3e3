"""Implementability of a single-agent social choice function by contingent contracts.

``payoff[t][s]`` is the utility type ``t`` gets from the outcome assigned to
report ``s``. A linear contract pays ``u^s + lam^s * v`` after report ``s``
and realised payoff ``v``; it implements the data when truthful reporting is
optimal for every type.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._rational import RationalLike, to_rational
from .acyclicity import Verdict, check_garp_like
from .afriat import fm_numbers
from .dataset import ExpenditureTable, WeakStrictRelation
from .errors import AxiomViolationError, DimensionError, VerificationError


@dataclass(frozen=True)
class MechanismDataset:
    payoff: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(to_rational(v) for v in row) for row in self.payoff)
        if not rows:
            raise DimensionError("payoff matrix is empty")
        if any(len(row) != len(rows) for row in rows):
            raise DimensionError("payoff matrix must be square")
        object.__setattr__(self, "payoff", rows)

    @property
    def size(self) -> int:
        return len(self.payoff)


@dataclass(frozen=True)
class LinearContract:
    u: tuple[Fraction, ...]
    lam: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        u = tuple(to_rational(v) for v in self.u)
        lam = tuple(to_rational(v) for v in self.lam)
        if len(u) != len(lam):
            raise DimensionError("u and lam must have the same length")
        if any(not 0 < v <= 1 for v in lam):
            raise ValueError("every lam must lie in (0, 1]")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "lam", lam)

    def pay(self, report: int, realised: RationalLike) -> Fraction:
        return self.u[report] + self.lam[report] * to_rational(realised)


def mech_relations(data: MechanismDataset) -> WeakStrictRelation:
    """``weak(t, s)`` iff ``payoff[t][s] >= payoff[s][s]``; ``strict`` with ``>``."""
    v = data.payoff
    n = data.size
    weak = tuple(tuple(v[t][s] >= v[s][s] for s in range(n)) for t in range(n))
    strict = tuple(tuple(v[t][s] > v[s][s] for s in range(n)) for t in range(n))
    return WeakStrictRelation(weak, strict)


def check_implementable(data: MechanismDataset) -> Verdict:
    return check_garp_like(mech_relations(data))


def contract_slack(data: MechanismDataset, contract: LinearContract) -> list[list[Fraction]]:
    """``slack[t][s]``: how much type ``t`` loses by reporting ``s``; all non-negative iff incentive compatible."""
    v = data.payoff
    u, lam = contract.u, contract.lam
    n = data.size
    return [
        [u[t] + lam[t] * v[t][t] - u[s] - lam[s] * v[t][s] for s in range(n)]
        for t in range(n)
    ]


def verify_contract(data: MechanismDataset, contract: LinearContract) -> None:
    if len(contract.u) != data.size:
        raise DimensionError("contract size does not match the dataset")
    for t, row in enumerate(contract_slack(data, contract)):
        for s, value in enumerate(row):
            if value < 0:
                raise VerificationError(
                    f"type {t} gains {-value} by reporting {s}"
                )


def best_reports(data: MechanismDataset, contract: LinearContract, t: int) -> list[int]:
    """Reports maximising type ``t``'s contract payment."""
    values = [contract.pay(s, data.payoff[t][s]) for s in range(data.size)]
    top = max(values)
    return [s for s, value in enumerate(values) if value == top]


def synthesize_linear_contract(data: MechanismDataset) -> LinearContract:
    """Linear contract implementing an acyclic dataset.

    Writing ``w^t = u^t + lam^t payoff[t][t]``, incentive compatibility reads
    ``w^t >= w^s + lam^s (payoff[t][s] - payoff[s][s])``. That is exactly the
    Afriat system for the table ``E[s][t] = -payoff[t][s]``, whose revealed
    preference is the transpose of the mechanism relation. The Afriat numbers
    ``(y, mu)`` of that table are rescaled by ``max(mu)`` so every ``lam`` lands
    in ``(0, 1]``, and the contract is checked exhaustively before returning.
    The smallest ``u`` is shifted to zero.
    """
    verdict = check_implementable(data)
    if not verdict:
        raise AxiomViolationError("implementability", verdict.witness)
    v = data.payoff
    n = data.size
    table = ExpenditureTable(tuple(tuple(-v[t][s] for t in range(n)) for s in range(n)))
    numbers = fm_numbers(table)
    scale = max(numbers.lam)
    lam = tuple(mu / scale for mu in numbers.lam)
    w = tuple(-y / scale for y in numbers.u)
    u = [w[t] - lam[t] * v[t][t] for t in range(n)]
    # a common shift of u leaves every comparison unchanged; anchor the smallest at 0
    floor = min(u)
    contract = LinearContract(tuple(value - floor for value in u), lam)
    verify_contract(data, contract)
    return contract

