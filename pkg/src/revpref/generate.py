"""Seeded synthetic purchase data from known utility maximisers.

Every family produces exact rational demand, so the output is a ground truth
for the forward direction of each characterisation: optimal choices pass
GARP, and choices that waste a share ``1 - e`` of income pass e-GARP.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from ._rational import RationalLike, to_rational
from .dataset import PurchaseDataset

FAMILIES = ("cobb-douglas", "quasilinear", "discrete-divisible")

# grid resolution for random rationals
_DENOMINATOR = 8
# integer goods in the discrete family range over 0.._DISCRETE_MAX
_DISCRETE_MAX = 3


@dataclass(frozen=True)
class GeneratorConfig:
    goods: int
    observations: int
    seed: int = 0
    family: str = "cobb-douglas"
    efficiency: Fraction = Fraction(1)
    price_range: tuple[Fraction, Fraction] = (Fraction(1, 2), Fraction(4))
    income_range: tuple[Fraction, Fraction] = (Fraction(5), Fraction(20))

    def __post_init__(self) -> None:
        if self.goods < 1 or self.observations < 1:
            raise ValueError("need at least one good and one observation")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        e = to_rational(self.efficiency)
        if not 0 < e <= 1:
            raise ValueError(f"efficiency must lie in (0, 1], got {e}")
        if self.family == "discrete-divisible" and e != 1:
            raise ValueError("the discrete-divisible family is always cost efficient")
        prices = tuple(to_rational(v) for v in self.price_range)
        income = tuple(to_rational(v) for v in self.income_range)
        if not 0 < prices[0] <= prices[1] or not 0 < income[0] <= income[1]:
            raise ValueError("ranges must be positive and ordered (low, high)")
        object.__setattr__(self, "efficiency", e)
        object.__setattr__(self, "price_range", prices)
        object.__setattr__(self, "income_range", income)


def _draw(rng: random.Random, low: Fraction, high: Fraction) -> Fraction:
    lo = int(low * _DENOMINATOR)
    hi = max(lo, int(high * _DENOMINATOR))
    return max(low, Fraction(rng.randint(lo, hi), _DENOMINATOR))


def _waste(rng, bundle, prices, amount, good=None):
    # spend ``amount`` on one good; the utility must be increasing in it
    if amount == 0:
        return bundle
    k = rng.randrange(len(bundle)) if good is None else good
    out = list(bundle)
    out[k] += amount / prices[k]
    return out


def _cobb_douglas(cfg: GeneratorConfig, rng: random.Random):
    weights = [rng.randint(1, 9) for _ in range(cfg.goods)]
    shares = [Fraction(w, sum(weights)) for w in weights]
    for _ in range(cfg.observations):
        p = [_draw(rng, *cfg.price_range) for _ in range(cfg.goods)]
        m = _draw(rng, *cfg.income_range)
        spent = cfg.efficiency * m
        x = [a * spent / q for a, q in zip(shares, p)]
        yield _waste(rng, x, p, m - spent), p


def _quasilinear(cfg: GeneratorConfig, rng: random.Random):
    # sum_l (a_l x_l - x_l^2 / 2) over the first L-1 goods, linear in the last
    peaks = [_draw(rng, Fraction(1), Fraction(6)) for _ in range(cfg.goods - 1)]
    for _ in range(cfg.observations):
        p = [_draw(rng, *cfg.price_range) for _ in range(cfg.goods)]
        numeraire = p[-1]
        x = [max(Fraction(0), a - q / numeraire) for a, q in zip(peaks, p)]
        inner = sum((q * v for q, v in zip(p, x)), Fraction(0))
        spent = max(cfg.efficiency * _draw(rng, *cfg.income_range), inner)
        x.append((spent - inner) / numeraire)
        m = spent / cfg.efficiency
        yield _waste(rng, x, p, m - spent, good=cfg.goods - 1), p


def _discrete_divisible(cfg: GeneratorConfig, rng: random.Random):
    # arbitrary utility on an integer grid plus money left for a divisible good
    grid = list(itertools.product(range(_DISCRETE_MAX + 1), repeat=cfg.goods))
    utility = {point: Fraction(rng.randint(0, 40), 4) for point in grid}
    for _ in range(cfg.observations):
        p = [_draw(rng, *cfg.price_range) for _ in range(cfg.goods)]
        m = _draw(rng, *cfg.income_range)
        q = _draw(rng, *cfg.price_range)
        best, best_value = None, None
        for point in grid:
            cost = sum(a * b for a, b in zip(p, point))
            if cost > m:
                continue
            value = utility[point] + (m - cost) / q
            if best_value is None or value > best_value:
                best, best_value = point, value
        yield list(best), p


def generate(config: GeneratorConfig) -> PurchaseDataset:
    """Draw a dataset; the same config always yields the same data."""
    rng = random.Random(config.seed)
    family = {
        "cobb-douglas": _cobb_douglas,
        "quasilinear": _quasilinear,
        "discrete-divisible": _discrete_divisible,
    }[config.family]
    return PurchaseDataset.from_observations(family(config, rng))


def generate_many(
    count: int, *, seed: int = 0, efficiency: RationalLike = 1, max_goods: int = 4,
    max_obs: int = 20, family: str = "cobb-douglas",
) -> list[PurchaseDataset]:
    """A reproducible batch with sizes drawn from ``1..max_goods`` and ``2..max_obs``."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        cfg = GeneratorConfig(
            goods=rng.randint(1, max_goods),
            observations=rng.randint(2, max_obs),
            seed=seed * 100_003 + i,
            family=family,
            efficiency=to_rational(efficiency),
        )
        out.append(generate(cfg))
    return out


def converging_sequence_dataset(n_obs: int) -> PurchaseDataset:
    """First ``n_obs`` observations of a GARP-consistent sequence with a bad limit.

    Observation 1 buys ``(1, 0)`` at prices ``(1, 1)``; observation ``t >= 2``
    buys ``(3/t, 1 - 2/t)`` at prices ``(1, 2)``. Every later bundle is strictly
    revealed preferred to every earlier one, while the bundles approach
    ``(0, 1)``, which the first observation could afford.
    """
    if n_obs < 1:
        raise ValueError("need at least one observation")
    obs = [((1, 0), (1, 1))]
    for t in range(2, n_obs + 1):
        obs.append(((Fraction(3, t), 1 - Fraction(2, t)), (1, 2)))
    return PurchaseDataset.from_observations(obs)
