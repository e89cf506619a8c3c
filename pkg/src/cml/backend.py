"""Kernel backend selection: compiled extension when built, Python otherwise.

The compiled and Python kernels are exact twins (see _pykernels docstring).
``use_backend`` exists for the benchmark subcommand and for tests; normal
code never needs it.
"""

from __future__ import annotations

from . import _pykernels

try:
    from . import _ckernels

    _DEFAULT = "compiled"
except ImportError:
    _ckernels = None
    _DEFAULT = "python"

_active = _DEFAULT


def available_backends() -> tuple[str, ...]:
    return ("python",) if _ckernels is None else ("python", "compiled")


def active_backend() -> str:
    return _active


def use_backend(name: str) -> None:
    global _active
    if name not in available_backends():
        raise ValueError(f"backend {name!r} not available (have {available_backends()})")
    _active = name


def kernels(name: str | None = None):
    """Return the kernel module for ``name`` (default: the active backend)."""
    name = name or _active
    if name == "python":
        return _pykernels
    if name == "compiled" and _ckernels is not None:
        return _ckernels
    raise ValueError(f"backend {name!r} not available")


def graph_kernel(graph, name: str | None = None):
    """Per-graph separation kernel, cached on the graph until it mutates."""
    name = name or _active
    cache = graph._kernel_cache
    if cache is not None and cache[0] == name:
        return cache[1]
    mod = kernels(name)
    handle = mod.GraphKernel(*graph.csr(), graph.p)
    graph._kernel_cache = (name, handle)
    return handle
