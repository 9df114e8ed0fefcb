import random

from masc.harness import (TARGETS, booth_grid, compressor_contract, differential, imul_end_to_end, measure_result,
                          prepare, random_value)
from masc.frontend.types import ArrayT, NumT
from masc.numeric import ui


def test_random_values_respect_types():
    rng = random.Random(0)
    for _ in range(100):
        assert 0 <= random_value(NumT(ui(5)), rng) < 32
    arr = random_value(ArrayT(NumT(ui(3)), 4), rng)
    assert len(arr.to_list(4)) == 4


def test_differential_small_runs():
    rng = random.Random(1)
    models = {}
    for name, fn in TARGETS:
        if name not in models:
            models[name] = prepare(name)
        r = differential(models[name], fn, rng, samples=25)
        assert r.passed, r.line()
    assert measure_result(models["divide"]).passed
    assert not measure_result(models["baz"]).passed


def test_booth_and_imul_checks():
    assert booth_grid(range(2, 4), range(1, 3)).passed
    assert compressor_contract(random.Random(2), 200).passed
    r = imul_end_to_end(random.Random(3), 100)
    assert r.passed and r.cases == 136
