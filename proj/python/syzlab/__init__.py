"""Python front end for the syzlab core."""

import json

from . import _syzlab
from ._syzlab import Error, conventions, quotient_rank

__version__ = _syzlab.__version__

__all__ = [
    "Error",
    "conventions",
    "fibre_cohomology",
    "models",
    "quotient_rank",
    "run_scenario",
    "sheaf_cohomology",
]


def run_scenario(scenario, grid=None, tol=None, seed=None, with_timings=True):
    """Run a scenario given as a dict or JSON text and return the report dict."""
    text = scenario if isinstance(scenario, str) else json.dumps(scenario)
    return json.loads(_syzlab.run_scenario_json(text, grid, tol, seed, with_timings))


def models(type=None):
    return json.loads(_syzlab.models_json(type))


def fibre_cohomology(model, subdivisions=1):
    return json.loads(_syzlab.fibre_cohomology_json(model, subdivisions))


def sheaf_cohomology(monodromy):
    return json.loads(_syzlab.sheaf_cohomology_json(json.dumps(monodromy)))
