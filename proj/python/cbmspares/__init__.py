"""Exact MDP solver for a two-echelon spare-parts network with condition-based
maintenance, plus the experiment harness.

Instances, parameters and solutions are plain dicts with the same layout as
the JSON files written by the ``cbmspares`` command-line tool; tables come
back as lists of row dicts parsed from its CSV output.
"""

import csv
import io
import json

from . import _core

__all__ = ["POLICY_CLASSES", "generate", "params", "solve", "simulate", "validate", "table1", "table2", "sweep"]

POLICY_CLASSES = ("cf", "oc", "ocr", "ocp", "ocpr")


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def generate(seed, I=2, J=2, t_star=10.0, square_side=33.0):
    """Random warehouse/machine placement with a reachable warehouse per machine."""
    return json.loads(_core.generate(seed, I, J, t_star, square_side))


def params(instance=None, *, seed=1, rho=1.0, n_phases=2, cost_setting=1, K=2, lam=0.95):
    """Model parameters for an instance (generated from ``seed`` when omitted)."""
    if instance is None:
        instance = generate(seed)
    return json.loads(_core.params(json.dumps(instance), rho, n_phases, cost_setting, K, lam))


def solve(model, policy="ocpr"):
    """Optimal policy within a class; includes per-state action, V and pi."""
    return json.loads(_core.solve(json.dumps(model), policy))


def simulate(solution, replications=10000, seed=1, horizon=0, jobs=1, start=None):
    """Monte Carlo estimate of the discounted cost from ``start`` (default: canonical state)."""
    return json.loads(_core.simulate(json.dumps(solution), replications, seed, horizon, jobs, start))


def validate(model):
    """Structural invariant report for a model."""
    return json.loads(_core.validate(json.dumps(model)))


def _table(which, seed, instances, jobs, cost_settings, rho, n_phases):
    rows, cells = _core.table(which, seed, instances, jobs, cost_settings, rho, n_phases)
    return _rows(rows), _rows(cells)


def table1(seed=1, instances=30, jobs=1, cost_settings=None, rho=None):
    """Per-instance rows and per-cell summary over cost settings and loads."""
    return _table(1, seed, instances, jobs, cost_settings, rho, None)


def table2(seed=1, instances=30, jobs=1, rho=None, n_phases=None):
    """Per-instance rows and per-cell summary over loads and phase counts."""
    return _table(2, seed, instances, jobs, None, rho, n_phases)


def sweep(seed=1, rho=0.5, n_phases=2, cost_setting=1, grid=16, max_cost=1.5, jobs=1):
    """Prevention and relocation fractions over the setup-cost grid."""
    return _rows(_core.sweep(seed, rho, n_phases, cost_setting, grid, max_cost, jobs))
