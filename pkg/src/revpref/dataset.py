"""Purchase data and the revealed-preference relations built from it.

Every comparison here is done on :class:`fractions.Fraction` values so that
boundary cases (a bundle costing exactly the chosen bundle's expenditure) are
decided without tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from ._rational import RationalLike, to_rational
from .errors import DimensionError, InvalidDataError, MalformedRelationError

Bundle = tuple[Fraction, ...]
PriceVector = tuple[Fraction, ...]
BoolMatrix = tuple[tuple[bool, ...], ...]

_ZERO = Fraction(0)


def as_bundle(values: Iterable[RationalLike]) -> Bundle:
    """Coerce to a bundle: at least one good, every quantity non-negative."""
    bundle = tuple(to_rational(v) for v in values)
    if not bundle:
        raise InvalidDataError("a bundle needs at least one good")
    if any(q < 0 for q in bundle):
        raise InvalidDataError(f"negative quantity in bundle {_show(bundle)}")
    return bundle


def as_prices(values: Iterable[RationalLike]) -> PriceVector:
    """Coerce to a price vector: at least one good, every price strictly positive."""
    prices = tuple(to_rational(v) for v in values)
    if not prices:
        raise InvalidDataError("a price vector needs at least one good")
    if any(p <= 0 for p in prices):
        raise InvalidDataError(f"non-positive price in {_show(prices)}")
    return prices


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    if len(a) != len(b):
        raise DimensionError(f"cannot take dot product of lengths {len(a)} and {len(b)}")
    return sum((x * y for x, y in zip(a, b)), _ZERO)


def _show(vec: Sequence[Fraction]) -> str:
    return "(" + ", ".join(str(v) for v in vec) + ")"


@dataclass(frozen=True)
class PurchaseDataset:
    """Observations ``(x^t, p^t)`` of chosen bundles and prevailing prices.

    Inputs are normalised to tuples of fractions on construction. ``costs``
    caches the matrix ``costs[t][s] = p^t . x^s`` that every relation builder
    reads from.
    """

    bundles: tuple[Bundle, ...]
    prices: tuple[PriceVector, ...]

    def __post_init__(self) -> None:
        bundles = tuple(as_bundle(x) for x in self.bundles)
        prices = tuple(as_prices(p) for p in self.prices)
        if not bundles:
            raise InvalidDataError("a dataset needs at least one observation")
        if len(bundles) != len(prices):
            raise DimensionError(
                f"{len(bundles)} bundles but {len(prices)} price vectors"
            )
        n_goods = len(bundles[0])
        for t, (x, p) in enumerate(zip(bundles, prices)):
            if len(x) != n_goods or len(p) != n_goods:
                raise DimensionError(
                    f"observation {t}: bundle has {len(x)} goods and prices have "
                    f"{len(p)}, expected {n_goods}"
                )
        object.__setattr__(self, "bundles", bundles)
        object.__setattr__(self, "prices", prices)

    @classmethod
    def from_observations(
        cls, observations: Iterable[tuple[Iterable[RationalLike], Iterable[RationalLike]]]
    ) -> PurchaseDataset:
        """Build from ``(bundle, prices)`` pairs."""
        pairs = list(observations)
        return cls(tuple(x for x, _ in pairs), tuple(p for _, p in pairs))

    @property
    def n_obs(self) -> int:
        return len(self.bundles)

    @property
    def n_goods(self) -> int:
        return len(self.bundles[0])

    @cached_property
    def costs(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(
            tuple(dot(p, x) for x in self.bundles) for p in self.prices
        )

    def expenditure(self, t: int) -> Fraction:
        return self.costs[t][t]

    def permuted(self, order: Sequence[int]) -> PurchaseDataset:
        """Dataset whose observation ``i`` is this dataset's observation ``order[i]``."""
        if sorted(order) != list(range(self.n_obs)):
            raise ValueError("order must be a permutation of the observation indices")
        return PurchaseDataset(
            tuple(self.bundles[i] for i in order), tuple(self.prices[i] for i in order)
        )

    def prefix(self, n: int) -> PurchaseDataset:
        return PurchaseDataset(self.bundles[:n], self.prices[:n])


@dataclass(frozen=True)
class ExpenditureTable:
    """Finite evaluations of nonlinear price functions.

    ``values[t][s]`` is ``g^t(x^s)``: the price function of observation ``t``
    applied to the bundle chosen at observation ``s``.
    """

    values: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(to_rational(v) for v in row) for row in self.values)
        if not rows:
            raise DimensionError("expenditure table is empty")
        if any(len(row) != len(rows) for row in rows):
            raise DimensionError("expenditure table must be square")
        object.__setattr__(self, "values", rows)

    @classmethod
    def from_dataset(cls, dataset: PurchaseDataset) -> ExpenditureTable:
        """Linear specialisation ``g^t(x) = p^t . x``."""
        return cls(dataset.costs)

    @property
    def size(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class WeakStrictRelation:
    """A pair of square boolean matrices ``(weak, strict)``.

    All the revealed-preference relations in this package (R/P, S, R_e/P_e,
    price preferences, dominance relations, mechanism relations) are stored in
    this shape so the acyclicity engine can treat them uniformly. Only the
    shape is checked here; ``strict`` being contained in ``weak`` is checked by
    the engine.
    """

    weak: BoolMatrix
    strict: BoolMatrix

    def __post_init__(self) -> None:
        weak = tuple(tuple(bool(v) for v in row) for row in self.weak)
        strict = tuple(tuple(bool(v) for v in row) for row in self.strict)
        n = len(weak)
        if len(strict) != n or any(len(r) != n for r in weak + strict):
            raise MalformedRelationError("weak and strict must be square matrices of equal size")
        object.__setattr__(self, "weak", weak)
        object.__setattr__(self, "strict", strict)

    @classmethod
    def from_pairs(
        cls,
        size: int,
        weak: Iterable[tuple[int, int]],
        strict: Iterable[tuple[int, int]] = (),
    ) -> WeakStrictRelation:
        w = [[False] * size for _ in range(size)]
        s = [[False] * size for _ in range(size)]
        for i, j in weak:
            w[i][j] = True
        for i, j in strict:
            s[i][j] = True
        return cls(tuple(map(tuple, w)), tuple(map(tuple, s)))

    @classmethod
    def symmetric_part(cls, matrix: BoolMatrix) -> WeakStrictRelation:
        """Relation with ``weak = strict = matrix``; any cycle then violates."""
        return cls(matrix, matrix)

    @property
    def size(self) -> int:
        return len(self.weak)

    def weak_pairs(self) -> set[tuple[int, int]]:
        return {(i, j) for i, row in enumerate(self.weak) for j, v in enumerate(row) if v}

    def strict_pairs(self) -> set[tuple[int, int]]:
        return {(i, j) for i, row in enumerate(self.strict) for j, v in enumerate(row) if v}

    def is_well_formed(self) -> bool:
        return all(
            w or not s
            for wrow, srow in zip(self.weak, self.strict)
            for w, s in zip(wrow, srow)
        )


def _matrix(n: int, pred) -> BoolMatrix:
    return tuple(tuple(bool(pred(t, s)) for s in range(n)) for t in range(n))


def build_rp(dataset: PurchaseDataset) -> WeakStrictRelation:
    """Direct revealed preference: ``t R s`` iff ``p^t.x^t >= p^t.x^s``; ``P`` uses ``>``."""
    c = dataset.costs
    n = dataset.n_obs
    return WeakStrictRelation(
        _matrix(n, lambda t, s: c[t][t] >= c[t][s]),
        _matrix(n, lambda t, s: c[t][t] > c[t][s]),
    )


def build_s(dataset: PurchaseDataset) -> WeakStrictRelation:
    """Affordable-and-distinct relation S, returned with ``weak = strict``."""
    c = dataset.costs
    x = dataset.bundles
    s_rel = _matrix(dataset.n_obs, lambda t, s: c[t][t] >= c[t][s] and x[t] != x[s])
    return WeakStrictRelation(s_rel, s_rel)


def build_rp_at_e(
    dataset: PurchaseDataset, e: RationalLike, open_interval: bool = False
) -> WeakStrictRelation:
    """Efficiency-scaled relations ``R_e`` / ``P_e``.

    ``t R_e s`` iff ``p^t.x^s <= e * p^t.x^t`` and ``P_e`` uses ``<``. With
    ``open_interval`` set both matrices use ``<=``: that is the relation pair
    in force for every efficiency level strictly between ``e`` and the next
    cost ratio above it.
    """
    e = to_rational(e)
    if not 0 < e <= 1:
        raise ValueError(f"efficiency level must lie in (0, 1], got {e}")
    c = dataset.costs
    n = dataset.n_obs
    weak = _matrix(n, lambda t, s: c[t][s] <= e * c[t][t])
    if open_interval:
        # a zero-expenditure observation never gains strict edges above e
        strict = _matrix(n, lambda t, s: weak[t][s] and c[t][t] > 0)
        return WeakStrictRelation(weak, strict)
    return WeakStrictRelation(weak, _matrix(n, lambda t, s: c[t][s] < e * c[t][t]))


def build_price_prefs(dataset: PurchaseDataset) -> WeakStrictRelation:
    """Revealed preference over prices.

    ``weak[s][t]`` holds iff ``p^s.x^t <= p^t.x^t`` (bundle ``x^t`` is no
    dearer at ``p^s``); ``strict`` uses ``<``. Indices refer to price
    observations.
    """
    c = dataset.costs
    n = dataset.n_obs
    return WeakStrictRelation(
        _matrix(n, lambda s, t: c[s][t] <= c[t][t]),
        _matrix(n, lambda s, t: c[s][t] < c[t][t]),
    )


def build_rp_nonlinear(table: ExpenditureTable) -> WeakStrictRelation:
    """Revealed preference under nonlinear price functions, on observed bundles only."""
    e = table.values
    n = table.size
    return WeakStrictRelation(
        _matrix(n, lambda t, s: e[t][t] >= e[t][s]),
        _matrix(n, lambda t, s: e[t][t] > e[t][s]),
    )
