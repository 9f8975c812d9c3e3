"""Generic "no weak cycle closed by a strict edge" engine.

GARP, WARP, SARP, e-GARP, GAPP, P-acyclicity, dominance-GARP, congruence and
mechanism acyclicity all reduce to :func:`check_garp_like` on a suitable
:class:`~revpref.dataset.WeakStrictRelation`.

Reachability is computed with a bitset Warshall pass: row ``i`` of the closure
is a Python int whose bit ``j`` is set when ``j`` is reachable from ``i``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .dataset import (
    BoolMatrix,
    PurchaseDataset,
    WeakStrictRelation,
    build_price_prefs,
    build_rp,
    build_s,
)
from .errors import MalformedRelationError


@dataclass(frozen=True)
class ViolationWitness:
    """A cycle ``t_1 -> ... -> t_K`` of weak edges closed by the strict edge ``t_K -> t_1``.

    ``K == 1`` means a strict self-loop.
    """

    cycle: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "cycle", tuple(int(i) for i in self.cycle))
        if not self.cycle:
            raise ValueError("a witness cycle needs at least one index")

    @property
    def strict_edge(self) -> tuple[int, int]:
        return (self.cycle[-1], self.cycle[0])

    def __len__(self) -> int:
        return len(self.cycle)

    def is_valid_for(self, rel: WeakStrictRelation) -> bool:
        """Replay the cycle against ``rel``: weak along the path, strict on the closing edge."""
        n = rel.size
        if any(not 0 <= i < n for i in self.cycle):
            return False
        path_ok = all(rel.weak[a][b] for a, b in zip(self.cycle, self.cycle[1:]))
        last, first = self.strict_edge
        return path_ok and rel.strict[last][first]

    def relabel(self, mapping) -> ViolationWitness:
        return ViolationWitness(tuple(mapping[i] for i in self.cycle))


@dataclass(frozen=True)
class Verdict:
    """Outcome of an axiom check. Truthy exactly when the axiom holds."""

    passed: bool
    witness: ViolationWitness | None = None

    def __bool__(self) -> bool:
        return self.passed


PASS = Verdict(True)


@dataclass(frozen=True)
class ClosureResult:
    """Transitive closure of the weak relation plus the depth ``levels``.

    ``levels[t]`` is the number of elements in the longest chain
    ``t_1 > t_2 > ... > t_K > t`` of the strict part of the closure (pairs
    reachable one way but not back), so maximal elements sit at level 0.
    """

    reachability: BoolMatrix
    levels: tuple[int, ...]


def _bits(matrix: BoolMatrix) -> list[int]:
    return [sum(1 << j for j, v in enumerate(row) if v) for row in matrix]


def reach_bits(weak: BoolMatrix) -> list[int]:
    """Bitset rows of the closure of ``weak`` (paths of length >= 1)."""
    reach = _bits(weak)
    n = len(reach)
    for k in range(n):
        bit = 1 << k
        row_k = reach[k]
        for i in range(n):
            if reach[i] & bit:
                reach[i] |= row_k
    return reach


def levels_from_reach(reach: list[int]) -> tuple[int, ...]:
    n = len(reach)
    # preds[t]: bitset of j with j reaching t but t not reaching j
    preds = [0] * n
    for j in range(n):
        for t in range(n):
            if (reach[j] >> t) & 1 and not (reach[t] >> j) & 1:
                preds[t] |= 1 << j
    # the strict part is a transitive order, so fewer strict predecessors
    # means earlier in a topological order
    order = sorted(range(n), key=lambda t: bin(preds[t]).count("1"))
    levels = [0] * n
    for t in order:
        p = preds[t]
        best = 0
        j = 0
        while p:
            if p & 1:
                best = max(best, levels[j] + 1)
            p >>= 1
            j += 1
        levels[t] = best
    return tuple(levels)


def transitive_closure(rel: WeakStrictRelation) -> ClosureResult:
    reach = reach_bits(rel.weak)
    n = rel.size
    matrix = tuple(tuple(bool((reach[i] >> j) & 1) for j in range(n)) for i in range(n))
    return ClosureResult(matrix, levels_from_reach(reach))


def _require_well_formed(rel: WeakStrictRelation) -> None:
    if not rel.is_well_formed():
        bad = sorted(rel.strict_pairs() - rel.weak_pairs())[0]
        raise MalformedRelationError(f"strict edge {bad} is missing from the weak relation")


def _shortest_cycle(rel: WeakStrictRelation) -> ViolationWitness | None:
    n = rel.size
    weak, strict = rel.weak, rel.strict
    for t in range(n):
        if strict[t][t]:
            return ViolationWitness((t,))
    best: tuple[int, ...] | None = None
    for head in range(n):
        # strict edges (tail -> head) that could close a cycle through head
        tails = {s for s in range(n) if strict[s][head]}
        if not tails:
            continue
        parent = {head: None}
        queue = deque([head])
        found = None
        while queue and found is None:
            a = queue.popleft()
            for b in range(n):
                if weak[a][b] and b not in parent:
                    parent[b] = a
                    if b in tails:
                        found = b
                        break
                    queue.append(b)
        if found is None:
            continue
        path = []
        node = found
        while node is not None:
            path.append(node)
            node = parent[node]
        path.reverse()
        if best is None or len(path) < len(best):
            best = tuple(path)
            if len(best) == 2:
                break
    return ViolationWitness(best) if best is not None else None


def check_garp_like(rel: WeakStrictRelation) -> Verdict:
    """Pass iff no ``t, s`` has ``s`` reachable from ``t`` (or ``s == t``) and ``s`` strictly above ``t``.

    On failure the verdict carries a shortest violating cycle. Passing
    ``weak == strict`` turns this into plain acyclicity, which is how SARP and
    P-acyclicity are tested.
    """
    _require_well_formed(rel)
    reach = reach_bits(rel.weak)
    n = rel.size
    for s in range(n):
        for t in range(n):
            if rel.strict[s][t] and (s == t or (reach[t] >> s) & 1):
                return Verdict(False, _shortest_cycle(rel))
    return PASS


def check_warp(rel: WeakStrictRelation) -> Verdict:
    """Two-element restriction: no pair with ``weak(t, s)`` and ``strict(s, t)``."""
    _require_well_formed(rel)
    n = rel.size
    for t in range(n):
        for s in range(n):
            if rel.weak[t][s] and rel.strict[s][t]:
                cycle = (t,) if s == t else (t, s)
                return Verdict(False, ViolationWitness(cycle))
    return PASS


def check_garp(dataset: PurchaseDataset) -> Verdict:
    return check_garp_like(build_rp(dataset))


def check_warp_dataset(dataset: PurchaseDataset) -> Verdict:
    return check_warp(build_rp(dataset))


def check_sarp(dataset: PurchaseDataset) -> Verdict:
    return check_garp_like(build_s(dataset))


def check_gapp(dataset: PurchaseDataset) -> Verdict:
    """Acyclicity of the revealed preference over prices."""
    return check_garp_like(build_price_prefs(dataset))


def check_p_acyclic(dataset: PurchaseDataset) -> Verdict:
    """Acyclicity of the strict relation ``P`` alone."""
    return check_garp_like(WeakStrictRelation.symmetric_part(build_rp(dataset).strict))
