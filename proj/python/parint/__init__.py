# SPDX-License-Identifier: Apache-2.0
"""Multilevel parametric integration: schedules, runs, baselines and sweeps."""

import json as _json

from . import _parint
from ._parint import NormBoundViolation, qae_error_bound, rho, test_functions

__all__ = [
    "NormBoundViolation",
    "deterministic",
    "fit_slope",
    "qae_error_bound",
    "rho",
    "run",
    "schedule",
    "sweep",
    "test_functions",
]


def schedule(n, r=2, d1=1, d2=1, mc=False):
    """Level schedule of the quantum (or, with mc=True, classical) algorithm."""
    return _json.loads(_parint.schedule_json(n, r, d1, d2, mc))


def run(function, n, seed=1, r=2, d1=1, d2=1, algorithm="quantum"):
    """One run of the multilevel algorithm; the record includes its sup-error."""
    return _json.loads(_parint.run_json(function, n, seed, r, d1, d2, algorithm))


def deterministic(function, n, r=2, d1=1, d2=1):
    """Tensor-grid baseline: {"queries", "sup_error", "approximation"}."""
    return _json.loads(_parint.deterministic_json(function, n, r, d1, d2))


def sweep(budgets, algorithms=("quantum", "det", "mc"), r=2, d1=1, d2=1, trials=1, seed=1, function="power"):
    """Sweep records as a list of dicts plus the failed rows."""
    records, failures = _parint.sweep(list(budgets), list(algorithms), r, d1, d2, trials, seed, function)
    return records, failures


def fit_slope(records):
    """Log-log slope of median error against median charged queries."""
    return _parint.fit_slope(records)
