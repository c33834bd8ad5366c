import math

import pytest

import lzc


def test_three_level_survival():
    p = lzc.ModelParams(1.0, [0.5, 1.0, 2.0], [0.4, 0.6, 0.3])
    assert lzc.survival_probability(p) == pytest.approx(0.19853995893405127, rel=1e-12)
    value, error = lzc.converged_p00(p)
    assert abs(value - lzc.survival_probability(p)) < 1e-3
    assert error < 1e-3


def test_roots_and_polynomial():
    p = lzc.ModelParams(1.0, [0.0], [math.sqrt(2.0)])
    assert lzc.char_poly(p) == pytest.approx([-1.0, 1.0])
    assert lzc.find_roots(p).l == pytest.approx([1.0])


def test_two_level_closed_forms():
    p = lzc.ModelParams(2.02, [1.57, 12.4], [2.0, 0.425])
    p00, p10, p20 = lzc.n2_probabilities(p)
    assert p00 == pytest.approx(lzc.survival_probability(p), abs=1e-12)
    assert lzc.pq0_time_average(p, 0) == pytest.approx(p10, rel=1e-10)
    mean, _ = lzc.time_averaged_population(p, init=1, target=None)
    assert abs(mean - p20) < 1e-2


def test_special_functions():
    assert lzc.log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)))
    assert lzc.stirling2(4, 2) == 7
    assert lzc.falling_factorial(0.5 + 1j, 2) == pytest.approx(-1.25)


def test_errors():
    with pytest.raises(lzc.LzcError):
        lzc.ModelParams(1.0, [], [])
    with pytest.raises(lzc.ConfigError):
        lzc.run_config("beta = 1\nk =\ng =\n")


def test_run_config_csv():
    csv = lzc.run_config("beta = 1\nk = 0.5, 1\ng = 0.3, 0.4\n", threads=1)
    header, row = csv.strip().splitlines()
    assert header == "sweep_value,p00_analytic,p10,p20"
    assert len(row.split(",")) == 4
