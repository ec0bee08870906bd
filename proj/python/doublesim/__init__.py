"""Python access to the dsim core: simulation, brackets, drift reports and verification.

Matrices, points and trajectories use the same JSON layout as the command line
tool; here they are plain dicts.
"""

import json

import numpy as np

from . import _dsim
from ._dsim import DsimError, iwasawa, suite_names

__all__ = [
    "DsimError",
    "bracket",
    "from_matrix",
    "invariants",
    "iwasawa",
    "random_point",
    "run_property",
    "simulate",
    "suite_names",
    "to_matrix",
    "verify",
]


def _text(obj):
    if obj is None:
        return ""
    return obj if isinstance(obj, str) else json.dumps(obj)


def to_matrix(m):
    """Matrix JSON dict -> complex numpy array."""
    re = np.asarray(m["re"], dtype=float)
    im = np.asarray(m.get("im", np.zeros_like(re)), dtype=float)
    return re + 1j * im


def from_matrix(a):
    """Square numpy array -> matrix JSON dict."""
    a = np.asarray(a, dtype=complex)
    return {"n": a.shape[0], "re": a.real.tolist(), "im": a.imag.tolist()}


def simulate(space, hamiltonian, point=None, *, n=2, variant="su", t_max=1.0, dt=1e-3, stride=1, seed=0,
             restore=True, form="", family=""):
    """Integrates a pullback Hamiltonian; returns the trajectory dict."""
    return json.loads(_dsim.simulate(space, _text(hamiltonian), _text(point), n, variant, t_max, dt, stride, seed,
                                     restore, form, family))


def bracket(kind, f1, f2, point=None, *, n=2, variant="su", seed=0):
    return json.loads(_dsim.bracket(kind, _text(f1), _text(f2), _text(point), n, variant, seed))


def invariants(trajectory, kinds=()):
    return json.loads(_dsim.invariants(_text(trajectory), list(kinds)))


def random_point(space, n=2, variant="su", seed=0):
    return json.loads(_dsim.random_point(space, n, variant, seed))


def verify(suite="all", seed=0):
    return json.loads(_dsim.verify(suite, seed))


def run_property(name, seed=0, samples=0):
    return json.loads(_dsim.run_property(name, seed, samples))
