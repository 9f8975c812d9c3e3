"""Acceptance criteria, one test (or small group) per criterion.

Run ``pytest tests/test_acceptance.py`` to get a PASS/FAIL line per criterion
in the terminal summary.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from functools import cache

import oracles
import pytest

from revpref import (
    AxiomViolationError,
    ChoiceDataset,
    ChoiceObservation,
    ExpenditureTable,
    MechanismDataset,
    Preorder,
    PurchaseDataset,
    afriat_numbers,
    afriat_utility,
    build_rp,
    build_rp_nonlinear,
    check_differentiable_precondition,
    check_egarp,
    check_garp,
    check_implementable,
    check_order_garp,
    check_sarp,
    check_warp_dataset,
    compute_ccei,
    fm_numbers,
    fosd_preorder,
    geq_preorder,
    impatience_preorder,
    mech_relations,
    order_rationalize,
    quasilinear_params,
    synthesize_linear_contract,
    verify_contract,
)
from revpref.acyclicity import check_garp_like
from revpref.afriat import afriat_slack, sample_affordable
from revpref.generate import converging_sequence_dataset, generate_many
from revpref.io import build_preorder, parse_choice_json, parse_purchase_csv


@cache
def oracle_datasets():
    """The 200 seeded Cobb-Douglas datasets shared by criteria 6, 7 and 14."""
    return generate_many(200, seed=6, max_goods=4, max_obs=20)


def swap_bundles(dataset, t, s):
    bundles = list(dataset.bundles)
    bundles[t], bundles[s] = bundles[s], bundles[t]
    return PurchaseDataset(tuple(bundles), dataset.prices)


# ---------------------------------------------------------------- 1


@pytest.mark.criterion(1, "discrete example fails GARP, SARP and WARP with a 2-cycle")
def test_c01_discrete_example(fixture_path):
    data = parse_purchase_csv(fixture_path("discrete_example.csv"))
    garp = check_garp(data)
    assert not garp
    assert len(garp.witness) == 2
    assert garp.witness.is_valid_for(build_rp(data))
    assert not check_sarp(data)
    assert not check_warp_dataset(data)
    best = float("inf")
    for _ in range(20):
        start = time.perf_counter()
        check_garp(data)
        best = min(best, time.perf_counter() - start)
    assert best < 1e-3


# ---------------------------------------------------------------- 2


@pytest.mark.criterion(2, "CCEI of the discrete example is exactly 2/3")
def test_c02_ccei_discrete_example(fixture_path):
    data = parse_purchase_csv(fixture_path("discrete_example.csv"))
    result = compute_ccei(data)
    assert result.value == Fraction(2, 3)
    assert result.attained
    assert oracles.ccei(data.bundles, data.prices) == Fraction(2, 3)


# ---------------------------------------------------------------- 3


@pytest.mark.criterion(3, "every prefix T=2..30 of the converging sequence passes GARP")
def test_c03_converging_prefixes():
    for n_obs in range(2, 31):
        data = converging_sequence_dataset(n_obs)
        assert check_garp(data), n_obs
        assert oracles.garp(data.bundles, data.prices), n_obs


# ---------------------------------------------------------------- 4


@pytest.mark.criterion(4, "FOSD example passes GARP but fails order-GARP with a self-loop")
def test_c04_fosd_example(fixture_path):
    purchase = parse_purchase_csv(fixture_path("fosd_single_purchase.csv"))
    assert check_garp(purchase)
    choice = parse_choice_json(fixture_path("fosd_choice.json"))
    preorder = build_preorder(choice)
    assert preorder == fosd_preorder([(1, 0), (0, 2)], [Fraction(1, 2), Fraction(1, 2)])
    verdict = check_order_garp(choice.data, preorder)
    assert not verdict
    assert verdict.witness.cycle == (0,)


# ---------------------------------------------------------------- 5


@pytest.mark.criterion(5, "equal bundles at different prices: SARP passes, differentiability fails")
def test_c05_equal_bundles(fixture_path):
    data = parse_purchase_csv(fixture_path("equal_bundles.csv"))
    assert check_sarp(data)
    report = check_differentiable_precondition(data)
    assert not report
    assert report.pair == (0, 1)


# ---------------------------------------------------------------- 6


@pytest.mark.criterion(6, "Cobb-Douglas round trip: GARP, SARP, Afriat numbers, rationalizing utility")
def test_c06_oracle_round_trip():
    rng = random.Random(60)
    datasets = oracle_datasets()
    assert len(datasets) == 200
    for data in datasets:
        assert data.n_goods <= 4 and data.n_obs <= 20
        assert check_garp(data) and check_sarp(data)
        numbers = afriat_numbers(data)
        slack = afriat_slack(data.costs, numbers.u, numbers.lam)
        assert all(v >= 0 for row in slack for v in row)
        utility = afriat_utility(numbers, data)
        chosen = [utility.linear_value(x) for x in data.bundles]
        costs = data.costs
        for t in range(data.n_obs):
            for s in range(data.n_obs):
                if costs[t][s] <= costs[t][t]:
                    assert utility.linear_value(data.bundles[s]) <= chosen[t]
        samples = 0
        per_obs = -(-1000 // data.n_obs)
        for t in range(data.n_obs):
            for point in sample_affordable(data, t, rng, per_obs):
                assert utility.linear_value(point) <= chosen[t]
                samples += 1
        assert samples >= 1000


# ---------------------------------------------------------------- 7


SWAP_TITLE = "bundle swaps: >= 95% GARP failures, each with a valid witness"


def _swap_outcomes():
    rng = random.Random(70)
    outcomes = []
    for data in oracle_datasets():
        strict = sorted((t, s) for t, s in build_rp(data).strict_pairs() if t != s)
        if not strict:
            continue
        t, s = rng.choice(strict)
        perturbed = swap_bundles(data, t, s)
        outcomes.append((perturbed, check_garp(perturbed)))
    return outcomes


@pytest.mark.criterion(7, SWAP_TITLE)
def test_c07_swap_witnesses_valid():
    for perturbed, verdict in _swap_outcomes():
        if not verdict:
            assert verdict.witness.is_valid_for(build_rp(perturbed))


@pytest.mark.criterion(7, SWAP_TITLE)
def test_c07_swap_failure_rate():
    outcomes = _swap_outcomes()
    failures = sum(1 for _, verdict in outcomes if not verdict)
    rate = failures / len(outcomes)
    print(f"swap failure rate: {failures}/{len(outcomes)} = {rate:.3f}")
    assert rate >= 0.95


# ---------------------------------------------------------------- 8


@pytest.mark.criterion(8, "two goods: WARP and GARP verdicts agree on 1000 datasets")
def test_c08_rose_equivalence():
    rng = random.Random(80)
    verdicts = []
    for _ in range(1000):
        bundles, prices = oracles.random_purchase(rng, 2, rng.randint(2, 8))
        data = PurchaseDataset(tuple(bundles), tuple(prices))
        garp = bool(check_garp(data))
        assert garp == bool(check_warp_dataset(data))
        verdicts.append(garp)
    assert any(verdicts) and not all(verdicts)


# ---------------------------------------------------------------- 9


@pytest.mark.criterion(9, "e-GARP switches at most once on the e-grid; SARP implies GARP")
def test_c09_monotonicity_sweeps():
    rng = random.Random(90)
    grid = [Fraction(k, 10) for k in range(1, 11)]
    for _ in range(100):
        bundles, prices = oracles.random_purchase(rng, rng.randint(1, 4), rng.randint(2, 10))
        data = PurchaseDataset(tuple(bundles), tuple(prices))
        flags = [bool(check_egarp(data, e)) for e in grid]
        assert flags == sorted(flags, reverse=True), flags
        if check_sarp(data):
            assert check_garp(data)


# ---------------------------------------------------------------- 10


@pytest.mark.criterion(10, "e-degraded data have CCEI >= e; efficient data have CCEI 1")
def test_c10_efficiency_oracle():
    for data in generate_many(100, seed=10, efficiency=Fraction(4, 5)):
        assert compute_ccei(data).value >= Fraction(4, 5)
    for data in generate_many(100, seed=11, efficiency=1):
        assert compute_ccei(data).value == 1


# ---------------------------------------------------------------- 11


def random_acyclic_payoff(rng: random.Random, size: int):
    """Payoffs whose relations only point down a random total order."""
    rank = list(range(size))
    rng.shuffle(rank)
    own = [Fraction(rng.randint(-5, 5)) for _ in range(size)]
    payoff = [[Fraction(0)] * size for _ in range(size)]
    for t in range(size):
        for s in range(size):
            if t == s:
                payoff[t][s] = own[s]
            elif rank[t] > rank[s]:
                payoff[t][s] = own[s] + Fraction(rng.randint(-3, 3), rng.randint(1, 3))
            else:
                payoff[t][s] = own[s] - Fraction(rng.randint(1, 6), rng.randint(1, 3))
    return MechanismDataset(payoff)


def planted_cycle_payoff(rng: random.Random, size: int):
    payoff = [[Fraction(rng.randint(-5, 5)) for _ in range(size)] for _ in range(size)]
    t, s = rng.sample(range(size), 2)
    payoff[t][s] = payoff[s][s] + rng.randint(1, 4)
    payoff[s][t] = payoff[t][t] + rng.randint(1, 4)
    return MechanismDataset(payoff)


@pytest.mark.criterion(11, "mechanisms: acyclic data get verified contracts, planted cycles are rejected")
def test_c11_mechanisms():
    rng = random.Random(110)
    for _ in range(500):
        data = random_acyclic_payoff(rng, rng.randint(1, 15))
        assert check_implementable(data)
        contract = synthesize_linear_contract(data)
        verify_contract(data, contract)
        assert all(0 < lam <= 1 for lam in contract.lam)
    for _ in range(500):
        data = planted_cycle_payoff(rng, rng.randint(2, 15))
        verdict = check_implementable(data)
        assert not verdict
        assert verdict.witness.is_valid_for(mech_relations(data))
        with pytest.raises(AxiomViolationError):
            synthesize_linear_contract(data)


# ---------------------------------------------------------------- 12


def _strictly_below_count(preorder: Preorder):
    n = preorder.ground_size
    return [sum(preorder.strictly(i, j) for j in range(n)) for i in range(n)]


def random_choice_problem(rng: random.Random):
    size = rng.randint(2, 40)
    kind = rng.choice(["geq", "fosd", "impatience", "chain"])
    coords = [(rng.randint(0, 4), rng.randint(0, 4)) for _ in range(size)]
    if kind == "geq":
        preorder = geq_preorder(coords)
    elif kind == "fosd":
        w = rng.randint(0, 4)
        preorder = fosd_preorder(coords, [Fraction(w, 4), Fraction(4 - w, 4)])
    elif kind == "impatience":
        preorder = impatience_preorder(coords)
    else:
        # random weak order by integer score
        score = [rng.randint(0, 5) for _ in range(size)]
        preorder = Preorder(
            size, tuple(tuple(score[i] >= score[j] for j in range(size)) for i in range(size))
        )
    worth = _strictly_below_count(preorder)
    observations = []
    for _ in range(rng.randint(1, 12)):
        budget = rng.sample(range(size), rng.randint(1, min(size, 8)))
        if rng.random() < 0.85:
            top = max(worth[i] for i in budget)
            chosen = rng.choice([i for i in budget if worth[i] == top])
        else:
            chosen = rng.choice(budget)
        observations.append(ChoiceObservation(frozenset({chosen}), frozenset(budget)))
    data = ChoiceDataset(tuple(range(size)), tuple(observations), tuple(coords))
    return data, preorder


@pytest.mark.criterion(12, "order_rationalize meets its postconditions and rejects failures")
def test_c12_order_rationalize():
    rng = random.Random(120)
    passed = failed = 0
    while passed < 200:
        data, preorder = random_choice_problem(rng)
        if check_order_garp(data, preorder):
            utility = order_rationalize(data, preorder)
            n = data.ground_size
            for i in range(n):
                for j in range(n):
                    if preorder.geq(i, j):
                        assert utility[i] >= utility[j]
                    if preorder.strictly(i, j):
                        assert utility[i] > utility[j]
            for t, obs in enumerate(data.observations):
                x = data.chosen_element(t)
                assert all(utility[x] >= utility[z] for z in obs.budget)
            passed += 1
        else:
            with pytest.raises(AxiomViolationError):
                order_rationalize(data, preorder)
            failed += 1
    assert failed > 0


# ---------------------------------------------------------------- 13


def random_nonlinear_table(rng: random.Random):
    size = rng.randint(2, 6)
    goods = rng.randint(1, 3)
    bundles = [[rng.randint(0, 4) for _ in range(goods)] for _ in range(size)]
    table = []
    for _ in range(size):
        p = [rng.randint(1, 4) for _ in range(goods)]
        curve = Fraction(rng.randint(0, 4), 4)
        table.append([
            sum(a * b for a, b in zip(p, x)) + curve * sum(v * v for v in x) for x in bundles
        ])
    return ExpenditureTable(table)


@pytest.mark.criterion(13, "nonlinear-price numbers: identical on linear tables, valid on nonlinear ones")
def test_c13_nonlinear_price_numbers():
    for data in generate_many(100, seed=13):
        assert check_garp(data)
        assert fm_numbers(ExpenditureTable.from_dataset(data)) == afriat_numbers(data)
    rng = random.Random(130)
    checked = 0
    while checked < 100:
        table = random_nonlinear_table(rng)
        if not check_garp_like(build_rp_nonlinear(table)):
            continue
        numbers = fm_numbers(table)
        e = table.values
        for t in range(table.size):
            for s in range(table.size):
                assert numbers.u[s] <= numbers.u[t] + numbers.lam[t] * (e[t][s] - e[t][t])
        checked += 1


# ---------------------------------------------------------------- 14


@pytest.mark.criterion(14, "quasilinear parameters verify on every oracle dataset")
def test_c14_quasilinear():
    for data in oracle_datasets():
        numbers = afriat_numbers(data)
        params = quasilinear_params(numbers, data)
        assert params.m > 0 and all(q > 0 for q in params.q)
        c = data.costs
        assert params.m > max(c[t][t] for t in range(data.n_obs))
        utility = afriat_utility(numbers, data)
        values = [utility.linear_value(x) for x in data.bundles]
        for t in range(data.n_obs):
            chosen = values[t] + (params.m - c[t][t]) / params.q[t]
            for s in range(data.n_obs):
                if c[t][s] <= params.m:
                    assert values[s] + (params.m - c[t][s]) / params.q[t] <= chosen
