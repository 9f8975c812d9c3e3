from fractions import Fraction

import pytest

from revpref import check_garp, compute_ccei
from revpref.generate import (
    FAMILIES,
    GeneratorConfig,
    converging_sequence_dataset,
    generate,
    generate_many,
)


@pytest.mark.parametrize("family", FAMILIES)
def test_same_seed_same_data(family):
    config = GeneratorConfig(goods=3, observations=8, seed=17, family=family)
    assert generate(config) == generate(config)


def test_different_seeds_differ():
    a = generate(GeneratorConfig(goods=3, observations=8, seed=1))
    b = generate(GeneratorConfig(goods=3, observations=8, seed=2))
    assert a != b


@pytest.mark.parametrize("family", FAMILIES)
def test_optimal_choices_pass_garp(family):
    for seed in range(15):
        data = generate(GeneratorConfig(goods=3, observations=10, seed=seed, family=family))
        assert check_garp(data)
        assert all(isinstance(v, Fraction) for x in data.bundles for v in x)


@pytest.mark.parametrize("family", ["cobb-douglas", "quasilinear"])
def test_wasteful_choices_keep_their_efficiency(family):
    e = Fraction(4, 5)
    for seed in range(15):
        data = generate(GeneratorConfig(goods=2, observations=10, seed=seed, family=family, efficiency=e))
        assert compute_ccei(data).value >= e


def test_batch_sizes_within_bounds():
    batch = generate_many(30, seed=3, max_goods=3, max_obs=7)
    assert len(batch) == 30
    assert all(1 <= d.n_goods <= 3 and 2 <= d.n_obs <= 7 for d in batch)
    assert batch == generate_many(30, seed=3, max_goods=3, max_obs=7)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"goods": 0, "observations": 3},
        {"goods": 2, "observations": 3, "family": "leontief"},
        {"goods": 2, "observations": 3, "efficiency": 0},
        {"goods": 2, "observations": 3, "family": "discrete-divisible", "efficiency": "1/2"},
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        GeneratorConfig(**kwargs)


def test_converging_sequence():
    data = converging_sequence_dataset(5)
    assert data.bundles[0] == (1, 0)
    assert data.bundles[4] == (Fraction(3, 5), Fraction(3, 5))
    assert check_garp(data)
