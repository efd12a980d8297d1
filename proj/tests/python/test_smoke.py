from fractions import Fraction

import pytest

import freemoments as fm

SEMICIRCLE = {"kind": "density", "name": "semicircle", "params": {"center": "0", "radius": "2"}}
COIN = {"kind": "discrete", "atoms": [["-1", "1/2"], ["1", "1/2"]]}


def test_catalan_counts():
    assert [fm.nc_count(n) for n in range(1, 8)] == [1, 2, 5, 14, 42, 132, 429]
    assert fm.enumerate_nc(2) == [[[1], [2]], [[1, 2]]]
    assert not fm.is_noncrossing(4, [[1, 3], [2, 4]])


def test_ceiling_error_is_typed():
    with pytest.raises(fm.FreeMomentsError) as info:
        fm.nc_count(40)
    assert info.value.code == "size_limit"


def test_exact_transforms_round_trip():
    m = [Fraction(1, 3), 2, Fraction(-5, 7), 4, 0]
    assert fm.moments_from_free_cumulants(fm.free_cumulants(m)) == m
    assert fm.moments_from_classical_cumulants(fm.classical_cumulants(m)) == m
    assert fm.r_series(m) == fm.free_cumulants(m)
    with pytest.raises(TypeError):
        fm.free_cumulants([0.5])


def test_convolutions_of_the_coin():
    coin = fm.measure_moments(COIN, 4)
    assert coin == [0, 1, 0, 1]
    assert fm.free_convolve(coin, coin) == [0, 2, 0, 6]
    assert fm.classical_convolve(coin, coin) == [0, 2, 0, 8]


def test_series_and_bound():
    assert fm.series_inverse([0, 1, 1, 0]) == [0, 1, -1, 2]
    assert fm.support_bound([0, 1, 0, 0])["bound"] == 16


def test_cauchy_transform_semicircle():
    # G(2i) = (z - sqrt(z^2 - 4)) / 2 = i (1 - sqrt 2)
    g = fm.cauchy_transform(SEMICIRCLE, 2j)
    assert g == pytest.approx(complex(0, 1 - 2 ** 0.5), abs=1e-14)


def test_taylor_check_passes():
    report = fm.verify_taylor(SEMICIRCLE, order=4)
    assert report["pass"]
    assert float(report["max_deviation"]) < 1e-10


def test_levy_free_poisson():
    out = fm.levy("1/2", {"kind": "discrete", "atoms": [["1", "1/2"]]}, 4)
    assert out["k"] == [1, 1, 1, 1]
    assert out["m"] == [1, 2, 5, 14]
    assert fm.levy(0, {"kind": "discrete", "atoms": [["0", "1"]]}, 4, classical=True)["m"] == [0, 1, 0, 3]


def test_simulate_is_reproducible():
    spec = {"kind": "gue", "dim": 60, "trials": 5, "seed": 4}
    a = fm.simulate(spec, 4)
    assert a == fm.simulate(spec, 4)
    assert abs(a["mean"][1] - 1) < 0.1


def test_suite_filter():
    report = fm.run_suite(["lattice"])
    assert report["pass"]
    assert [c["id"] for c in report["criteria"]] == [10]


def test_cli_entry_point():
    code, text = fm.run_cli(["nc", "--count", "4"])
    assert code == 0
    assert '"count": 14' in text
    code, _ = fm.run_cli(["cumulants", "--moments", '["1/0"]'])
    assert code == 1
