"""Pure-Python cone kernel.

Arrays have shape ``(*lattice_dims, T1, S1)``: a box of the positive root
cone (affine simple-root coordinates) with dense coefficient polynomials in
``t`` and ``s`` on the trailing axes.  Entries are Python ints (object dtype)
so nothing here can overflow.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def new_array(dims, t1, s1):
    arr = np.zeros((*dims, t1, s1), dtype=object)
    arr[...] = 0
    return arr


def mul_factor(arr, root, tshift, sshift, coef, inverse):
    """Multiply ``arr`` in place by ``(1 - coef*u*x^root)^-1`` or ``1 + coef*u*x^root``.

    ``u = t^tshift s^sshift``.  With ``inverse`` the factor is the geometric
    series ``1/(1 - coef*u*x^root)``, otherwise the linear factor
    ``1 + coef*u*x^root``.  ``root`` must be nonnegative and nonzero.
    """
    nd = len(root)
    dims = arr.shape[:nd]
    t1, s1 = arr.shape[nd:]
    if tshift >= t1 or sshift >= s1:
        return
    if any(r >= d for r, d in zip(root, dims)):
        return
    axis = next(k for k, r in enumerate(root) if r > 0)
    step = root[axis]
    layers = range(step, dims[axis])
    if not inverse:
        layers = reversed(layers)
    for i in layers:
        dst = []
        src = []
        for k in range(nd):
            if k == axis:
                dst.append(i)
                src.append(i - step)
            else:
                dst.append(slice(root[k], dims[k]))
                src.append(slice(0, dims[k] - root[k]))
        dst += [slice(tshift, t1), slice(sshift, s1)]
        src += [slice(0, t1 - tshift), slice(0, s1 - sshift)]
        if coef == 1:
            arr[tuple(dst)] += arr[tuple(src)]
        elif coef == -1:
            arr[tuple(dst)] -= arr[tuple(src)]
        else:
            arr[tuple(dst)] += coef * arr[tuple(src)]
