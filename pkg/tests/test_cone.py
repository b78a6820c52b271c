import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kacq import _cone_py, cone
from kacq.cone import Factor, cone_product

compiled = pytest.mark.skipif(cone.BACKEND != "cython", reason="compiled kernel not built")


def brute_product(dims, t1, s1, factors):
    """Expand the product directly as dicts, one monomial at a time."""
    poly = {((0,) * len(dims), 0, 0): 1}
    for f in factors:
        for _ in range(f.power):
            new = {}
            for (x, a, b), c in poly.items():
                k = 0
                while True:
                    y = tuple(xi + k * r for xi, r in zip(x, f.root))
                    ta, sb = a + k * f.tshift, b + k * f.sshift
                    if any(yi >= d for yi, d in zip(y, dims)) or ta >= t1 or sb >= s1:
                        break
                    coef = c * f.sign**k
                    new[(y, ta, sb)] = new.get((y, ta, sb), 0) + coef
                    k += 1
                    if not f.inverse and k > 1:
                        break
            poly = {key: v for key, v in new.items() if v}
    out = np.zeros((*dims, t1, s1), dtype=object)
    out[...] = 0
    for (x, a, b), c in poly.items():
        out[(*x, a, b)] = c
    return out


factor_st = st.builds(
    Factor,
    st.tuples(st.integers(0, 2), st.integers(0, 2)).filter(any),
    st.integers(0, 2),
    st.integers(0, 1),
    st.sampled_from([1, -1]),
    st.booleans(),
    st.integers(1, 2),
)


@given(st.lists(factor_st, max_size=5))
def test_python_kernel_matches_brute_force(factors):
    dims, t1, s1 = (4, 3), 6, 3
    got = cone_product(dims, t1, s1, factors, backend="python")
    assert np.array_equal(got, brute_product(dims, t1, s1, factors))


@compiled
@given(st.lists(factor_st, max_size=6))
def test_backends_agree(factors):
    dims, t1, s1 = (5, 4), 8, 3
    a = cone_product(dims, t1, s1, factors, backend="python")
    b = cone_product(dims, t1, s1, factors, backend="cython")
    assert np.array_equal(a.astype(object), b.astype(object))


@compiled
def test_overflow_falls_back_to_python_ints(caplog):
    # 1/(1-x)^k on a long axis grows like binomials; k=60 overflows int64 near the end
    factors = [Factor((1,), power=60)]
    with caplog.at_level("WARNING"):
        arr = cone_product((80,), 1, 1, factors)
    from math import comb

    assert int(arr[79, 0, 0]) == comb(79 + 59, 59)
    assert comb(79 + 59, 59) > 2**63
    assert "overflow" in caplog.text


@compiled
def test_compiled_kernel_raises_on_overflow():
    from kacq import _cone

    arr = _cone.new_array((80,), 1, 1)
    arr[0, 0, 0] = 1
    with pytest.raises(OverflowError):
        for _ in range(60):
            _cone.mul_factor(arr, (1,), 0, 0, 1, True)


def test_pure_python_kernel_accepts_general_coefficients():
    arr = _cone_py.new_array((4,), 1, 1)
    arr[0, 0, 0] = 1
    _cone_py.mul_factor(arr, (1,), 0, 0, 3, True)
    assert list(arr[:, 0, 0]) == [1, 3, 9, 27]
