"""Fold-fold singularities of Filippov systems with a planar switching surface."""

import csv
import io
import json

from ._pwfold import (
    NormalParameters,
    PwfoldError,
    System,
    fold_map,
    normal_parameters,
    region,
    return_map,
)
from . import _pwfold

__all__ = [
    "NormalParameters",
    "PwfoldError",
    "System",
    "classify",
    "fold_map",
    "normal_parameters",
    "region",
    "return_map",
    "return_map_analysis",
    "simulate",
    "sweep",
    "verdict",
    "verify",
]


def classify(system, point, tol=None):
    """Full report for a point of Sigma, as a dict."""
    return json.loads(_pwfold._classify(system, tuple(point), tol))


def verdict(alpha, beta, gamma, delta):
    return json.loads(_pwfold._verdict(NormalParameters(alpha, beta, gamma, delta)))


def return_map_analysis(alpha, beta, gamma):
    return json.loads(_pwfold._return_map(NormalParameters(alpha, beta, gamma, -1)))


def simulate(system, p0, T):
    return json.loads(_pwfold._simulate(system, tuple(p0), T))


def sweep(gamma, delta, alpha, beta, threads=1):
    """Rows of the (alpha, beta) atlas as dicts of strings."""
    text = _pwfold._sweep(gamma, delta, tuple(alpha), tuple(beta), threads)
    return list(csv.DictReader(io.StringIO(text)))


def verify(system, suites=("all",), point=(0.0, 0.0, 0.0), expect=None, seed=1, samples=100):
    exp = NormalParameters(*expect) if expect is not None else None
    return json.loads(_pwfold._verify(system, list(suites), tuple(point), exp, seed, samples))
