"""Backend selection for the exploration kernel.

The compiled extension (``bungee._ckernel``) is used when it imports;
otherwise the pure-Python twin.  Set ``BUNGEE_KERNEL=python`` to force the
fallback, or ``BUNGEE_KERNEL=compiled`` to fail loudly when the extension is
missing.
"""
from __future__ import annotations

import os

from . import _pykernel

_choice = os.environ.get("BUNGEE_KERNEL", "auto").lower()

_compiled = None
if _choice != "python":
    try:
        from . import _ckernel as _compiled
    except ImportError:
        if _choice == "compiled":
            raise
        _compiled = None

backend = _compiled if _compiled is not None else _pykernel
BACKEND_NAME = backend.name


def get_backend(name: str | None = None):
    if name is None:
        return backend
    if name == "python":
        return _pykernel
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernel is not built")
        return _compiled
    raise ValueError(f"unknown kernel backend {name!r}")


def compiled_available() -> bool:
    return _compiled is not None


def prepare(generators):
    return backend.prepare(generators)


def explore(prog, has_pole, z, params, want_words):
    return backend.explore(prog, has_pole, z, params, want_words)


def classify_many(prog, has_pole, re, im, params):
    return backend.classify_many(prog, has_pole, re, im, params)
