"""Free moments, cumulants, R-transforms and random-matrix checks.

Exact values cross the boundary as "p/q" strings; the wrappers here accept
ints, strings and fractions.Fraction and return Fraction lists.
"""

import json
from fractions import Fraction

from . import _core
from ._core import (
    FreeMomentsError,
    enumerate_nc,
    is_noncrossing,
    kreweras_complement,
    nc_count,
    run_cli,
)

__all__ = [
    "FreeMomentsError",
    "cauchy_transform",
    "classical_convolve",
    "classical_cumulants",
    "enumerate_nc",
    "free_convolve",
    "free_cumulants",
    "is_noncrossing",
    "kreweras_complement",
    "levy",
    "measure_moments",
    "mobius",
    "moments_from_classical_cumulants",
    "moments_from_free_cumulants",
    "nc_count",
    "r_series",
    "run_cli",
    "run_suite",
    "series_inverse",
    "simulate",
    "support_bound",
    "verify_taylor",
]


def _text(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass int, str or Fraction")
    return str(x)


def _texts(xs):
    return [_text(x) for x in xs]


def _fractions(xs):
    return [Fraction(x) for x in xs]


def _measure(mu):
    return mu if isinstance(mu, str) else json.dumps(mu)


def free_cumulants(moments):
    return _fractions(_core.free_cumulants(_texts(moments)))


def moments_from_free_cumulants(cumulants):
    return _fractions(_core.moments_from_free_cumulants(_texts(cumulants)))


def classical_cumulants(moments):
    return _fractions(_core.classical_cumulants(_texts(moments)))


def moments_from_classical_cumulants(cumulants):
    return _fractions(_core.moments_from_classical_cumulants(_texts(cumulants)))


def free_convolve(a, b):
    return _fractions(_core.free_convolve(_texts(a), _texts(b)))


def classical_convolve(a, b):
    return _fractions(_core.classical_convolve(_texts(a), _texts(b)))


def r_series(moments):
    return _fractions(_core.r_series(_texts(moments)))


def series_inverse(coefficients):
    return _fractions(_core.series_inverse(_texts(coefficients)))


def mobius(n, lower, upper):
    return int(_core.mobius(n, lower, upper))


def support_bound(cumulants):
    out = json.loads(_core.support_bound_json(_texts(cumulants)))
    out["bound"] = Fraction(out["bound"])
    out["c"] = Fraction(out["c"])
    return out


def measure_moments(measure, order):
    return _fractions(_core.measure_moments(_measure(measure), order))


def cauchy_transform(measure, z):
    return _core.cauchy_transform(_measure(measure), complex(z))


def verify_taylor(measure, order=4, tol=1e-5, alpha=1.0, beta=0.1, theta=0.0, levels=40):
    return json.loads(_core.verify_taylor_json(_measure(measure), order, tol, alpha, beta, theta, levels))


def levy(gamma, sigma, order, classical=False):
    out = json.loads(_core.levy_json(_text(gamma), _measure(sigma), order, classical))
    out["k"] = _fractions(out["k"])
    out["m"] = _fractions(out["m"])
    return out


def simulate(spec, order):
    out = json.loads(_core.simulate_json(_measure(spec), order))
    out["mean"] = [float(x) for x in out["mean"]]
    out["stderr"] = [float(x) for x in out["stderr"]]
    return out


def run_suite(only=(), corrupt_semicircle=False):
    return json.loads(_core.run_suite_json(list(only), corrupt_semicircle))
