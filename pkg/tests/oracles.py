"""Deliberately naive re-implementations used as test oracles.

Nothing here imports the package's relation builders or graph engine: each
oracle recomputes its answer from raw numbers with the most direct method
available, so agreement is meaningful evidence.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction


def costs(bundles, prices):
    return [[sum(Fraction(p) * Fraction(x) for p, x in zip(pt, xs)) for xs in bundles] for pt in prices]


def rp(bundles, prices, e=Fraction(1), open_interval=False):
    c = costs(bundles, prices)
    n = len(bundles)
    weak = [[c[t][s] <= e * c[t][t] for s in range(n)] for t in range(n)]
    if open_interval:
        strict = [[c[t][s] <= e * c[t][t] and c[t][t] > 0 for s in range(n)] for t in range(n)]
    else:
        strict = [[c[t][s] < e * c[t][t] for s in range(n)] for t in range(n)]
    return weak, strict


def closure(weak):
    """Floyd-Warshall on plain lists; paths of length at least one."""
    n = len(weak)
    reach = [row[:] for row in map(list, weak)]
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                for j in range(n):
                    if reach[k][j]:
                        reach[i][j] = True
    return reach


def garp_like(weak, strict):
    """True iff no strict edge s->t is closed by a weak path t ~> s."""
    reach = closure(weak)
    n = len(weak)
    return not any(
        strict[s][t] and (s == t or reach[t][s]) for s in range(n) for t in range(n)
    )


def garp(bundles, prices, e=Fraction(1), open_interval=False):
    return garp_like(*rp(bundles, prices, e, open_interval))


def ccei(bundles, prices):
    """Supremum of passing efficiency levels, from every ratio and every gap midpoint."""
    c = costs(bundles, prices)
    n = len(bundles)
    points = sorted(
        {Fraction(1)}
        | {c[t][s] / c[t][t] for t in range(n) for s in range(n) if c[t][t] > 0 and 0 < c[t][s] / c[t][t] <= 1}
    )
    best = Fraction(0)
    previous = Fraction(0)
    for b in points:
        if garp(bundles, prices, (previous + b) / 2):
            best = b  # passes just below b, so the supremum reaches b
        else:
            break
        if garp(bundles, prices, b):
            best = b
        else:
            break
        previous = b
    return best


def impatience_grid_closure(limit):
    """Preorder on ``{0..limit}^2`` generated by ``>=`` and swaps, closed by brute force."""
    pts = list(itertools.product(range(limit + 1), repeat=2))
    index = {p: i for i, p in enumerate(pts)}
    n = len(pts)
    rel = [[False] * n for _ in range(n)]
    for i, (a, b) in enumerate(pts):
        for j, (c, d) in enumerate(pts):
            if a >= c and b >= d:
                rel[i][j] = True
        if a >= b:
            rel[i][index[(b, a)]] = True
    return pts, closure(rel)


def random_purchase(rng: random.Random, goods: int, obs: int, top: int = 4):
    bundles = [tuple(rng.randint(0, top) for _ in range(goods)) for _ in range(obs)]
    prices = [tuple(rng.randint(1, top) for _ in range(goods)) for _ in range(obs)]
    return bundles, prices
