"""Sensitivity, fragmentation and enveloping-semigroup diagnostics for cascades."""

import json

from . import _core
from ._core import InputError, InvariantViolation, NumericError, PreconditionError

__all__ = [
    "analyze",
    "classify",
    "envelope",
    "chain",
    "gallery_ids",
    "gallery_spec",
    "gallery_listing",
    "complexity",
    "rotation_dh",
    "morse_symbol",
    "InputError",
    "InvariantViolation",
    "NumericError",
    "PreconditionError",
]


def _spec_text(spec):
    return spec if isinstance(spec, str) else json.dumps(spec)


def _runner(fn):
    def run(spec, **scales):
        return json.loads(fn(_spec_text(spec), **scales))

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


analyze = _runner(_core.analyze)
classify = _runner(_core.classify)
envelope = _runner(_core.envelope)
chain = _runner(_core.chain)
gallery_ids = _core.gallery_ids
gallery_listing = _core.gallery_listing
rotation_dh = _core.rotation_dh
morse_symbol = _core.morse_symbol


def gallery_spec(gallery_id):
    return json.loads(_core.gallery_spec(gallery_id))


def complexity(params, n_max):
    return _core.complexity(_spec_text(params), n_max)
