"""Choice over finite abstract spaces ordered by a dominance preorder.

Alternatives live in an explicit finite ground set. A preorder on it (FOSD,
impatience, component-wise ``>=``, identity, or any user-supplied reflexive
transitive matrix) plays the role that "more is better" plays for bundles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from ._rational import RationalLike, to_rational
from .acyclicity import Verdict, check_garp_like, reach_bits
from .dataset import BoolMatrix, PurchaseDataset, WeakStrictRelation
from .errors import AxiomViolationError, DimensionError, InvalidDataError, VerificationError


@dataclass(frozen=True)
class Preorder:
    """``relation[i][j]`` reads "ground element ``i`` is at least as good as ``j``"."""

    ground_size: int
    relation: BoolMatrix

    def __post_init__(self) -> None:
        rel = tuple(tuple(bool(v) for v in row) for row in self.relation)
        if len(rel) != self.ground_size or any(len(r) != self.ground_size for r in rel):
            raise DimensionError(
                f"preorder matrix must be {self.ground_size}x{self.ground_size}"
            )
        object.__setattr__(self, "relation", rel)

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[bool]]) -> Preorder:
        return cls(len(matrix), tuple(map(tuple, matrix)))

    def geq(self, i: int, j: int) -> bool:
        return self.relation[i][j]

    def strictly(self, i: int, j: int) -> bool:
        return self.relation[i][j] and not self.relation[j][i]


@dataclass(frozen=True)
class PreorderReport:
    """Result of :func:`validate_preorder`.

    On failure exactly one of ``missing_reflexive`` (an index) or
    ``broken_triple`` ``(i, j, k)`` with ``i >= j >= k`` but not ``i >= k`` is set.
    """

    passed: bool
    missing_reflexive: int | None = None
    broken_triple: tuple[int, int, int] | None = None

    def __bool__(self) -> bool:
        return self.passed


def validate_preorder(preorder: Preorder) -> PreorderReport:
    rel = preorder.relation
    n = preorder.ground_size
    for i in range(n):
        if not rel[i][i]:
            return PreorderReport(False, missing_reflexive=i)
    for i in range(n):
        for j in range(n):
            if i == j or not rel[i][j]:
                continue
            for k in range(n):
                if rel[j][k] and not rel[i][k]:
                    return PreorderReport(False, broken_triple=(i, j, k))
    return PreorderReport(True)


def _from_predicate(n: int, pred) -> Preorder:
    return Preorder(n, tuple(tuple(bool(pred(i, j)) for j in range(n)) for i in range(n)))


def identity_preorder(n: int) -> Preorder:
    return _from_predicate(n, lambda i, j: i == j)


def _points(bundles: Iterable[Iterable[RationalLike]]) -> list[tuple[Fraction, ...]]:
    pts = [tuple(to_rational(v) for v in b) for b in bundles]
    if pts and any(len(p) != len(pts[0]) for p in pts):
        raise DimensionError("all ground elements must have the same dimension")
    return pts


def geq_preorder(bundles: Iterable[Iterable[RationalLike]]) -> Preorder:
    """Component-wise ``>=``."""
    pts = _points(bundles)
    return _from_predicate(
        len(pts), lambda i, j: all(a >= b for a, b in zip(pts[i], pts[j]))
    )


def fosd_preorder(
    bundles: Iterable[Iterable[RationalLike]], probs: Sequence[RationalLike]
) -> Preorder:
    """First-order stochastic dominance between state-contingent bundles.

    Coordinate ``l`` of a bundle is the payoff in state ``l``, which occurs with
    probability ``probs[l]``. ``x`` dominates ``y`` when ``x`` is at least as
    likely as ``y`` to exceed every threshold.
    """
    pts = _points(bundles)
    pi = tuple(to_rational(v) for v in probs)
    if any(q < 0 for q in pi) or sum(pi) != 1:
        raise InvalidDataError(f"probabilities must be non-negative and sum to 1, got {pi}")
    if pts and len(pts[0]) != len(pi):
        raise DimensionError(
            f"bundles have {len(pts[0])} states but {len(pi)} probabilities were given"
        )

    def survival(x, alpha):
        return sum((q for q, v in zip(pi, x) if v > alpha), Fraction(0))

    def dominates(i, j):
        x, y = pts[i], pts[j]
        return all(survival(x, a) >= survival(y, a) for a in set(x) | set(y))

    return _from_predicate(len(pts), dominates)


def impatience_preorder(bundles: Iterable[Iterable[RationalLike]]) -> Preorder:
    """Smallest preorder containing ``>=`` and every swap ``(M, m) -> (m, M)`` with ``M >= m``.

    The closure is taken over the whole plane and then restricted to the given
    points. In closed form ``(a, b)`` dominates ``(c, d)`` iff ``(a, b) >= (c, d)``
    component-wise, or ``c <= min(a, b)`` and ``d <= a``.
    """
    pts = _points(bundles)
    if pts and len(pts[0]) != 2:
        raise DimensionError("impatience ordering needs 2-dimensional bundles")

    def dominates(i, j):
        (a, b), (c, d) = pts[i], pts[j]
        return (c <= a and d <= b) or (c <= min(a, b) and d <= a)

    return _from_predicate(len(pts), dominates)


@dataclass(frozen=True)
class ChoiceObservation:
    chosen: frozenset[int]
    budget: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "chosen", frozenset(int(i) for i in self.chosen))
        object.__setattr__(self, "budget", frozenset(int(i) for i in self.budget))


@dataclass(frozen=True)
class ChoiceDataset:
    """Choices from finite budgets over a labelled ground set.

    ``coords`` optionally gives each ground element a numeric payload, which
    the FOSD, impatience and ``>=`` constructors read.
    """

    labels: tuple[Hashable, ...]
    observations: tuple[ChoiceObservation, ...]
    coords: tuple[tuple[Fraction, ...], ...] | None = field(default=None)

    def __post_init__(self) -> None:
        labels = tuple(self.labels)
        obs = tuple(
            o if isinstance(o, ChoiceObservation) else ChoiceObservation(*o)
            for o in self.observations
        )
        n = len(labels)
        if len(set(labels)) != n:
            raise InvalidDataError("ground labels must be distinct")
        for t, o in enumerate(obs):
            if not o.budget:
                raise InvalidDataError(f"observation {t}: empty budget")
            if not o.chosen:
                raise InvalidDataError(f"observation {t}: nothing chosen")
            if not o.chosen <= o.budget:
                raise InvalidDataError(f"observation {t}: chosen set is not inside the budget")
            if any(not 0 <= i < n for i in o.budget):
                raise InvalidDataError(f"observation {t}: budget refers to unknown ground index")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "observations", obs)
        if self.coords is not None:
            coords = tuple(_points(self.coords))
            if len(coords) != n:
                raise DimensionError(f"{len(coords)} coordinate rows for {n} ground elements")
            object.__setattr__(self, "coords", coords)

    @property
    def ground_size(self) -> int:
        return len(self.labels)

    @property
    def n_obs(self) -> int:
        return len(self.observations)

    def chosen_element(self, t: int) -> int:
        chosen = self.observations[t].chosen
        if len(chosen) != 1:
            raise InvalidDataError(
                f"observation {t} chooses {len(chosen)} elements; a single choice is required"
            )
        return next(iter(chosen))

    @classmethod
    def from_purchase_dataset(cls, dataset: PurchaseDataset) -> ChoiceDataset:
        """Finite stand-in for linear budgets.

        The ground set holds each observed bundle plus, for every pair with
        ``x^s`` strictly cheaper than ``x^t`` at prices ``p^t``, the point
        ``x^s + delta * (1, ..., 1)`` on the budget line of ``t``. Budgets are
        the affordable ground points. Under component-wise ``>=`` the induced
        dominance relations between observations coincide with ``R`` and ``P``.
        """
        c = dataset.costs
        points = list(dataset.bundles)
        n = dataset.n_obs
        for t in range(n):
            p = dataset.prices[t]
            for s in range(n):
                gap = c[t][t] - c[t][s]
                if gap > 0:
                    delta = gap / sum(p)
                    points.append(tuple(q + delta for q in dataset.bundles[s]))
        obs = []
        for t in range(n):
            p = dataset.prices[t]
            budget = frozenset(
                i for i, z in enumerate(points)
                if sum(a * b for a, b in zip(p, z)) <= c[t][t]
            )
            obs.append(ChoiceObservation(frozenset({t}), budget))
        return cls(tuple(range(len(points))), tuple(obs), tuple(points))


def _check_sizes(data: ChoiceDataset, preorder: Preorder) -> None:
    if preorder.ground_size != data.ground_size:
        raise DimensionError(
            f"preorder covers {preorder.ground_size} elements but the ground set has "
            f"{data.ground_size}"
        )
    report = validate_preorder(preorder)
    if not report:
        where = report.missing_reflexive if report.broken_triple is None else report.broken_triple
        raise InvalidDataError(f"relation is not a preorder (fails at {where})")


def build_order_relations(data: ChoiceDataset, preorder: Preorder) -> WeakStrictRelation:
    """Dominance-revealed relations between observations, self-pairs included.

    ``weak(t, s)``: some ``z`` in budget ``t`` dominates the element chosen at
    ``s``; ``strict(t, s)``: some ``z`` there strictly dominates it.
    """
    _check_sizes(data, preorder)
    chosen = [data.chosen_element(t) for t in range(data.n_obs)]
    budgets = [sorted(o.budget) for o in data.observations]
    n = data.n_obs
    weak = tuple(
        tuple(any(preorder.geq(z, chosen[s]) for z in budgets[t]) for s in range(n))
        for t in range(n)
    )
    strict = tuple(
        tuple(any(preorder.strictly(z, chosen[s]) for z in budgets[t]) for s in range(n))
        for t in range(n)
    )
    return WeakStrictRelation(weak, strict)


def check_order_garp(data: ChoiceDataset, preorder: Preorder) -> Verdict:
    return check_garp_like(build_order_relations(data, preorder))


def _ground_graph(data: ChoiceDataset, preorder: Preorder):
    """Weak and strict edge bitsets over ground elements.

    Weak edges are the preorder plus ``chosen_t -> z`` for every ``z`` in
    budget ``t``; strict edges are the strict part of the preorder. Paths
    therefore realise every dominance-revealed comparison.
    """
    n = data.ground_size
    weak = [[preorder.geq(i, j) for j in range(n)] for i in range(n)]
    strict = [[preorder.strictly(i, j) for j in range(n)] for i in range(n)]
    for t, o in enumerate(data.observations):
        x = data.chosen_element(t)
        for z in o.budget:
            weak[x][z] = True
    return weak, strict


def order_rationalize(data: ChoiceDataset, preorder: Preorder) -> dict[int, int]:
    """Integer utility on the ground set that rationalizes the data and respects the preorder.

    Ground elements are grouped into mutually reachable classes of the weak
    graph. Each class gets the largest number of strict edges on any path
    leaving it, so every strict edge drops the level by at least one and every
    weak edge never raises it.
    """
    verdict = check_order_garp(data, preorder)
    if not verdict:
        raise AxiomViolationError("order-GARP", verdict.witness)
    n = data.ground_size
    weak, strict = _ground_graph(data, preorder)
    reach = reach_bits(weak)
    # class representative: smallest mutually reachable index
    rep = list(range(n))
    for i in range(n):
        for j in range(i):
            if (reach[i] >> j) & 1 and (reach[j] >> i) & 1:
                rep[i] = rep[j]
                break
    for i in range(n):
        for j in range(n):
            if strict[i][j] and rep[i] == rep[j]:
                raise VerificationError(f"strict edge {i}->{j} inside one indifference class")
    classes = sorted(set(rep))
    # order classes so that successors come first: fewer reachable classes first
    below = {c: {rep[j] for j in range(n) if (reach[c] >> j) & 1} - {c} for c in classes}
    level: dict[int, int] = {}
    for c in sorted(classes, key=lambda c: len(below[c])):
        best = 0
        for i in range(n):
            if rep[i] != c:
                continue
            for j in range(n):
                if weak[i][j] and rep[j] != c:
                    best = max(best, level[rep[j]] + (1 if strict[i][j] else 0))
        level[c] = best
    utility = {i: level[rep[i]] for i in range(n)}
    _verify_order_utility(data, preorder, utility)
    return utility


def _verify_order_utility(
    data: ChoiceDataset, preorder: Preorder, utility: Mapping[int, int]
) -> None:
    n = data.ground_size
    for i in range(n):
        for j in range(n):
            if preorder.geq(i, j) and utility[i] < utility[j]:
                raise VerificationError(f"utility not monotone on {i} >= {j}")
            if preorder.strictly(i, j) and utility[i] <= utility[j]:
                raise VerificationError(f"utility not strictly monotone on {i} > {j}")
    for t, o in enumerate(data.observations):
        x = data.chosen_element(t)
        for z in o.budget:
            if utility[x] < utility[z]:
                raise VerificationError(f"observation {t}: {z} beats the chosen element")


def congruence_relations(data: ChoiceDataset) -> WeakStrictRelation:
    """Element-level relations: ``x`` chosen while ``y`` was available, and ``y`` not chosen."""
    n = data.ground_size
    weak = [[False] * n for _ in range(n)]
    strict = [[False] * n for _ in range(n)]
    for o in data.observations:
        for x in o.chosen:
            for y in o.budget:
                weak[x][y] = True
                if y not in o.chosen:
                    strict[x][y] = True
    return WeakStrictRelation(tuple(map(tuple, weak)), tuple(map(tuple, strict)))


def check_congruence(data: ChoiceDataset) -> Verdict:
    return check_garp_like(congruence_relations(data))
