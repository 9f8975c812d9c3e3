"""e-GARP and the critical cost-efficiency index (CCEI).

The index is a supremum over ``e`` in ``(0, 1]``. The relations ``R_e, P_e``
only change when ``e`` crosses a cost ratio ``p^t.x^s / p^t.x^t``, so the
whole line splits into finitely many test regions: each ratio itself, and the
open gap between consecutive ratios. The verdict is monotone across regions
(pass, then fail), which pins the supremum to an exact breakpoint.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._rational import RationalLike
from .acyclicity import Verdict, ViolationWitness, check_garp_like
from .dataset import PurchaseDataset, build_rp_at_e
from .errors import VerificationError


@dataclass(frozen=True)
class CceiResult:
    """Exact CCEI and how it was reached.

    ``attained`` says whether e-GARP holds at ``value`` itself.
    ``failing_witness_above`` is the witness at the first failing test region
    above the pass region: the open gap just above ``value`` when the
    supremum is attained, otherwise ``value`` itself. It is ``None`` when the
    data pass GARP outright.
    """

    value: Fraction
    breakpoints: tuple[Fraction, ...]
    attained: bool = True
    failing_witness_above: ViolationWitness | None = None


def check_egarp(dataset: PurchaseDataset, e: RationalLike) -> Verdict:
    return check_garp_like(build_rp_at_e(dataset, e))


def efficiency_breakpoints(dataset: PurchaseDataset) -> tuple[Fraction, ...]:
    """Sorted cost ratios in ``(0, 1]``, always including 1."""
    c = dataset.costs
    ratios = {Fraction(1)}
    for t in range(dataset.n_obs):
        own = c[t][t]
        if own <= 0:
            continue
        for s in range(dataset.n_obs):
            r = c[t][s] / own
            if 0 < r <= 1:
                ratios.add(r)
    return tuple(sorted(ratios))


def _regions(breakpoints):
    # (lower, is_point): the gap below the first ratio, then alternating
    # point / open gap; no gap above 1
    regions = [(breakpoints[0], False, True)]
    for i, b in enumerate(breakpoints):
        regions.append((b, True, False))
        if i + 1 < len(breakpoints):
            regions.append((b, False, False))
    return regions


def _region_verdict(dataset: PurchaseDataset, region) -> Verdict:
    b, is_point, first_gap = region
    if is_point:
        return check_garp_like(build_rp_at_e(dataset, b))
    if first_gap:
        return check_garp_like(build_rp_at_e(dataset, b / 2))
    return check_garp_like(build_rp_at_e(dataset, b, open_interval=True))


def ccei_region_verdicts(dataset: PurchaseDataset) -> list[tuple[Fraction, bool, bool]]:
    """``(e, is_point, passed)`` for every test region, in increasing order.

    For an open gap ``e`` is its lower end (0 for the first gap).
    """
    out = []
    for region in _regions(efficiency_breakpoints(dataset)):
        b, is_point, first_gap = region
        lower = Fraction(0) if first_gap else b
        out.append((lower, is_point, _region_verdict(dataset, region).passed))
    return out


def compute_ccei(dataset: PurchaseDataset, exhaustive: bool = False) -> CceiResult:
    """Exact CCEI by locating the pass/fail switch among the test regions.

    By default the switch is found by bisection over the enumerated regions,
    which is exact because verdicts are monotone. With ``exhaustive`` every
    region is evaluated and monotonicity is asserted.
    """
    breakpoints = efficiency_breakpoints(dataset)
    regions = _regions(breakpoints)
    cache: dict[int, Verdict] = {}

    def verdict(i: int) -> Verdict:
        if i not in cache:
            cache[i] = _region_verdict(dataset, regions[i])
        return cache[i]

    if exhaustive:
        flags = [verdict(i).passed for i in range(len(regions))]
        switches = sum(1 for a, b in zip(flags, flags[1:]) if a != b)
        if switches > 1 or (switches == 1 and not flags[0]):
            raise VerificationError(f"e-GARP verdicts are not monotone: {flags}")
        last_pass = max((i for i, f in enumerate(flags) if f), default=-1)
    else:
        if verdict(len(regions) - 1):
            last_pass = len(regions) - 1
        else:
            lo, hi = -1, len(regions) - 1  # verdict(hi) fails
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if verdict(mid):
                    lo = mid
                else:
                    hi = mid
            last_pass = lo
    if last_pass < 0:
        # the gap below the smallest positive ratio never carries a strict cycle
        raise VerificationError("e-GARP fails even for the smallest efficiency levels")
    b, is_point, _ = regions[last_pass]
    if last_pass == len(regions) - 1:
        return CceiResult(Fraction(1), breakpoints)
    witness = verdict(last_pass + 1).witness
    if is_point:
        return CceiResult(b, breakpoints, True, witness)
    # pass on a gap, fail at its upper end: supremum not attained
    upper, _, _ = regions[last_pass + 1]
    return CceiResult(upper, breakpoints, False, witness)
