"""Dense products of cone factors, with a compiled kernel when available.

The compiled kernel (``kacq._cone``) stores int64 and raises on overflow; the
product is then recomputed with the pure-Python kernel on Python ints, so
results are always exact.  Set ``KACQ_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass

from . import _cone_py

log = logging.getLogger(__name__)

_compiled = None
if not os.environ.get("KACQ_PURE_PYTHON"):
    try:
        from . import _cone as _compiled  # type: ignore[attr-defined, no-redef]
    except ImportError:  # pragma: no cover - depends on build
        _compiled = None

BACKEND = _compiled.BACKEND if _compiled is not None else _cone_py.BACKEND


@dataclass(frozen=True)
class Factor:
    """``(1 - sign*u*x^root)^-1`` if ``inverse`` else ``(1 + sign*u*x^root)``, raised to ``power``.

    ``u = t^tshift s^sshift``.
    """

    root: tuple[int, ...]
    tshift: int = 0
    sshift: int = 0
    sign: int = 1
    inverse: bool = True
    power: int = 1


def _run(kernel, dims, t1, s1, factors):
    arr = kernel.new_array(dims, t1, s1)
    arr[(0,) * (len(dims) + 2)] = 1
    for f in factors:
        for _ in range(f.power):
            kernel.mul_factor(arr, f.root, f.tshift, f.sshift, f.sign, f.inverse)
    return arr


def cone_product(dims, t1, s1, factors, backend=None):
    """Expand a product of cone factors on the box ``prod(range(d) for d in dims)``.

    Returns an array of shape ``(*dims, t1, s1)``; entry ``[x, a, b]`` is the
    coefficient of ``t^a s^b x^x``.  Exact as long as every factor root is
    nonnegative, and ``t1``/``s1`` exceed the largest reachable degrees.
    """
    dims = tuple(int(d) for d in dims)
    if backend is None:
        backend = BACKEND
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernel not built")
        try:
            return _run(_compiled, dims, t1, s1, factors)
        except OverflowError:
            log.warning("int64 overflow in compiled kernel; recomputing with Python ints")
    return _run(_cone_py, dims, t1, s1, factors)
