"""Random walks on percolation clusters of hyperbolic Cayley graphs.

Each estimator takes keyword overrides using the config-file keys and
returns the report as a dict::

    >>> import hyperwalk
    >>> hyperwalk.estimate_speed(backend="free:2", p=1, replicas=50)["estimate"]
"""

import json

from . import _hyperwalk
from ._hyperwalk import ConfigError, __version__, oracles

__all__ = [
    "ConfigError",
    "defaults",
    "estimate_dimension",
    "estimate_entropy",
    "estimate_speed",
    "oracles",
    "p_sweep",
    "pq_sweep",
    "resolve_config",
    "selftest",
    "stationarity_test",
    "verify_shadows",
]


def _overrides(kwargs):
    out = {}
    for key, value in kwargs.items():
        if isinstance(value, bool):
            value = "true" if value else "false"
        elif isinstance(value, (list, tuple)):
            value = ",".join(str(v) for v in value)
        out[key] = str(value)
    return out


def _wrap(name):
    native = getattr(_hyperwalk, name)

    def call(**kwargs):
        return json.loads(native(_overrides(kwargs)))

    call.__name__ = name
    call.__doc__ = f"Runs {name.replace('_', ' ')} with config overrides; returns a dict."
    return call


estimate_speed = _wrap("estimate_speed")
estimate_entropy = _wrap("estimate_entropy")
estimate_dimension = _wrap("estimate_dimension")
verify_shadows = _wrap("verify_shadows")
stationarity_test = _wrap("stationarity_test")
pq_sweep = _wrap("pq_sweep")
p_sweep = _wrap("p_sweep")


def defaults():
    """Every config key with its default value, as strings."""
    return dict(_hyperwalk.defaults())


def resolve_config(**kwargs):
    """Validates overrides and returns the full resolved config."""
    return dict(_hyperwalk.resolve_config(_overrides(kwargs)))


def selftest(rank=2, seed=1, threads=1):
    """Estimator-versus-oracle gaps on small instances."""
    return json.loads(_hyperwalk.selftest(rank, seed, threads))
