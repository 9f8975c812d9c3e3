"""Invariants checked on random small datasets."""

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from revpref import (
    ChoiceDataset,
    PurchaseDataset,
    build_rp,
    check_egarp,
    check_garp,
    check_order_garp,
    check_sarp,
    compute_ccei,
    fosd_preorder,
    geq_preorder,
    impatience_preorder,
    sarp_numbers,
    strict_concave_utility,
    validate_preorder,
)

import oracles

small = st.integers(min_value=0, max_value=4)
positive = st.integers(min_value=1, max_value=4)


@st.composite
def purchase_data(draw, max_goods=3, max_obs=6):
    goods = draw(st.integers(1, max_goods))
    obs = draw(st.integers(1, max_obs))
    bundles = [tuple(draw(small) for _ in range(goods)) for _ in range(obs)]
    prices = [tuple(draw(positive) for _ in range(goods)) for _ in range(obs)]
    return PurchaseDataset(bundles, prices)


efficiency = st.fractions(min_value=Fraction(1, 50), max_value=1, max_denominator=50)


@given(purchase_data(), st.randoms(use_true_random=False))
def test_verdict_is_invariant_under_relabelling(data, rng):
    order = list(range(data.n_obs))
    rng.shuffle(order)
    shuffled = data.permuted(order)
    before, after = check_garp(data), check_garp(shuffled)
    assert before.passed == after.passed
    if not after:
        # a witness in the shuffled data maps back to a witness in the original
        back = after.witness.relabel(dict(enumerate(order)))
        assert back.is_valid_for(build_rp(data))


@given(purchase_data())
def test_sarp_implies_garp(data):
    if check_sarp(data):
        assert check_garp(data)


@given(purchase_data())
def test_engine_agrees_with_naive_oracle(data):
    verdict = check_garp(data)
    assert verdict.passed == oracles.garp(data.bundles, data.prices)
    if not verdict:
        assert verdict.witness.is_valid_for(build_rp(data))


@given(purchase_data(), st.lists(positive, min_size=6, max_size=6))
def test_rescaling_prices_per_observation_changes_nothing(data, factors):
    scaled = PurchaseDataset(
        data.bundles,
        [tuple(f * v for v in p) for f, p in zip(factors, data.prices)],
    )
    assert build_rp(scaled) == build_rp(data)
    assert compute_ccei(scaled).value == compute_ccei(data).value


@given(purchase_data(), efficiency, efficiency)
def test_egarp_is_monotone_in_efficiency(data, e1, e2):
    low, high = sorted((e1, e2))
    if check_egarp(data, high):
        assert check_egarp(data, low)


@given(purchase_data(max_obs=5))
def test_ccei_matches_oracle_and_bounds_passing_levels(data):
    result = compute_ccei(data)
    assert result.value == oracles.ccei(data.bundles, data.prices)
    assert 0 < result.value <= 1
    assert check_egarp(data, result.value).passed == result.attained
    if result.value < 1 and result.attained:
        assert not check_egarp(data, result.value + Fraction(1, 10**6))


@settings(max_examples=40)
@given(purchase_data(max_goods=2, max_obs=4))
def test_order_garp_on_geq_embedding_equals_garp(data):
    choice = ChoiceDataset.from_purchase_dataset(data)
    verdict = check_order_garp(choice, geq_preorder(choice.coords))
    assert verdict.passed == check_garp(data).passed


points2 = st.lists(st.tuples(small, small), min_size=1, max_size=6)


@given(points2)
def test_constructed_preorders_are_valid(points):
    assert validate_preorder(geq_preorder(points))
    assert validate_preorder(impatience_preorder(points))
    assert validate_preorder(fosd_preorder(points, [Fraction(1, 3), Fraction(2, 3)]))


@given(points2, st.integers(0, 1))
def test_fosd_point_mass_orders_by_that_state(points, state):
    probs = [0, 0]
    probs[state] = 1
    order = fosd_preorder(points, probs)
    for i, x in enumerate(points):
        for j, y in enumerate(points):
            assert order.geq(i, j) == (x[state] >= y[state])


@settings(max_examples=25, deadline=None)
@given(purchase_data(max_goods=2, max_obs=4), st.data())
def test_strict_utility_is_increasing_and_concave(data, draw):
    if not check_sarp(data):
        return
    utility = strict_concave_utility(sarp_numbers(data), data)
    point = st.tuples(*[small] * data.n_goods)
    a, b = draw.draw(point), draw.draw(point)
    mid = tuple((x + y) / 2 for x, y in zip(a, b))
    assert utility(mid) >= (utility(a) + utility(b)) / 2 - 1e-9
    bumped = tuple(v + 1 for v in a)
    assert utility(bumped) > utility(a)


@given(purchase_data(max_obs=2))
def test_swapping_a_ranked_pair_of_two_never_breaks_garp(data):
    if data.n_obs != 2 or not check_garp(data):
        return
    strict = build_rp(data).strict_pairs() - {(0, 0), (1, 1)}
    if not strict:
        return
    swapped = PurchaseDataset(data.bundles[::-1], data.prices)
    assert check_garp(swapped)
