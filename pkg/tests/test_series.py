import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kacq.series import (
    CoeffPoly,
    DivergentSeriesError,
    Monomial,
    NotAQSeriesError,
    Series,
    SpecMismatchError,
    TruncationSpec,
    ct,
    inv_one_minus,
    poch,
    poch_inv,
    rescale_q,
    substitute,
)

Q3 = TruncationSpec(1, 6, 3)
t = CoeffPoly.monomial(1)


def q(spec, d2, finite=None):
    return spec.mono(d2, finite)


def qs(spec, coeffs):
    """Pure series from {q-degree: coefficient}."""
    return Series.from_q_coefficients(spec, {2 * k: c for k, c in coeffs.items()})


# strategies ----------------------------------------------------------------------

coeff_polys = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 2)), st.integers(-5, 5), max_size=4
).map(CoeffPoly)


def series_in(spec):
    mono = st.builds(
        Monomial,
        st.tuples(*[st.integers(-spec.box, spec.box)] * spec.rank),
        st.integers(0, spec.max_d2),
    )
    return st.dictionaries(mono, coeff_polys, max_size=6).map(lambda d: Series(spec, d))


SPEC2 = TruncationSpec(2, 5, 2)
small = series_in(SPEC2)


# CoeffPoly ----------------------------------------------------------------------


def test_coeffpoly_drops_zeros_and_is_exact():
    p = CoeffPoly({(1, 0): 3, (2, 0): 0})
    assert dict(p) == {(1, 0): 3}
    big = CoeffPoly({(0, 0): 2**80})
    assert (big * big)[(0, 0)] == 2**160


def test_coeffpoly_collapse_and_eval():
    p = CoeffPoly({(1, 2): 1, (3, 0): 2})
    assert p.collapse_s() == CoeffPoly({(3, 0): 3})
    assert p.at(2, 3) == 2 * 9 + 2 * 8
    assert CoeffPoly.from_json(p.to_json()) == p


@given(coeff_polys, coeff_polys, coeff_polys)
def test_coeffpoly_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == CoeffPoly()


# add / mul -----------------------------------------------------------------------


def test_add_examples():
    s = TruncationSpec(0, 4, 0)
    one_tq = Series(s, {q(s, 0): 1, q(s, 2): t})
    assert one_tq + Series(s, {q(s, 2): -t}) == Series.one(s)
    assert one_tq + Series(s) == one_tq
    t2q = Series(s, {q(s, 2): t * t})
    assert t2q + t2q == Series(s, {q(s, 2): 2 * t * t})


def test_mul_examples():
    s = TruncationSpec(1, 6, 2)
    a = Series(s, {q(s, 0): 1, q(s, 2): t})
    b = Series(s, {q(s, 0): 1, q(s, 2): -t})
    assert a * b == Series(s, {q(s, 0): 1, q(s, 4): -(t * t)})
    e = Series(s, {Monomial((1,), 1): 1})
    f = Series(s, {Monomial((-1,), 1): 1})
    assert e * f == Series(s, {q(s, 2): 1})
    geo = qs(s, {0: 1, 1: 1, 2: 1, 3: 1})
    assert geo * qs(s, {0: 1, 1: -1}) == Series.one(s)


def test_spec_mismatch():
    with pytest.raises(SpecMismatchError):
        Series.one(Q3) + Series.one(TruncationSpec(1, 4, 3))
    with pytest.raises(SpecMismatchError):
        Series.one(Q3) * Series.one(TruncationSpec(1, 6, 2))


@given(small, small, small)
def test_series_ring_axioms(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert a * Series.one(SPEC2) == a
    assert a * (b + c) == a * b + a * c
    assert a - a == Series(SPEC2)


@given(series_in(TruncationSpec(1, 6, 20)), series_in(TruncationSpec(1, 6, 20)),
       series_in(TruncationSpec(1, 6, 20)))
def test_mul_associative_when_box_is_not_binding(a, b, c):
    # supports of max-norm 6 keep every partial product inside the box
    spec = a.spec
    small_box = TruncationSpec(1, 6, 6)
    a, b, c = (Series(spec, Series(small_box, x.items()).items()) for x in (a, b, c))
    assert (a * b) * c == a * (b * c)


# geometric series and q-Pochhammer ---------------------------------------------


def test_inv_one_minus_examples():
    s = TruncationSpec(0, 6, 0)
    assert inv_one_minus(q(s, 2), 1, s) == qs(s, {0: 1, 1: 1, 2: 1, 3: 1})
    assert inv_one_minus(q(s, 4), t * t, s) == qs(s, {0: 1, 2: t * t})
    # box-terminated, C_1 lattice: e^{-2 eps} is -2 in doubled simple-root coordinates
    b = TruncationSpec(1, 0, 4)
    got = inv_one_minus(Monomial((-2,), 0), t, b)
    assert got == Series(b, {Monomial((0,), 0): 1, Monomial((-2,), 0): t, Monomial((-4,), 0): t * t})


@pytest.mark.parametrize("m", [Monomial((0,), 0), Monomial((1,), 0), Monomial((0,), -1)])
def test_inv_one_minus_rejects_divergent(m):
    with pytest.raises(DivergentSeriesError):
        inv_one_minus(m, 1, Q3)


@given(st.integers(-3, 3), st.integers(0, 6), coeff_polys)
def test_inverse_times_factor_is_one(x, d2, c):
    m = Monomial((x,), d2)
    if d2 == 0 and x >= 0:
        return
    inv = inv_one_minus(m, c, Q3)
    factor = Series(Q3, {Q3.mono(): 1, m: -c})
    prod = inv * factor
    # terms beyond the box may be missing from inv, so only its interior is exact
    inner = TruncationSpec(1, 6, 3 - abs(x))
    assert Series(inner, prod.items()) == Series.one(inner)


def test_div_one_minus_matches_inverse_product():
    a = Series(Q3, {Monomial((1,), 1): 2, Monomial((0,), 0): 1, Monomial((-1,), 3): t})
    m = Monomial((-1,), 1)
    wide = TruncationSpec(1, 6, 12)
    via_product = Series(wide, a.items()) * inv_one_minus(m, t, wide)
    assert a.div_one_minus(m, t) == Series(Q3, via_product.items())


def test_poch_examples():
    s2 = TruncationSpec(0, 4, 0)
    assert poch(q(s2, 2), q(s2, 2), s2, t) == qs(s2, {0: 1, 1: -t, 2: -t})
    s4 = TruncationSpec(0, 8, 0)
    assert poch(q(s4, 2), q(s4, 2), s4) == qs(s4, {0: 1, 1: -1, 2: -1})
    s3 = TruncationSpec(0, 6, 0)
    t3 = CoeffPoly.monomial(3)
    assert poch(q(s3, 2), q(s3, 4), s3, t3) == qs(s3, {0: 1, 1: -t3, 3: -t3})
    with pytest.raises(DivergentSeriesError):
        poch(q(s3, 2), q(s3, 0), s3)


def test_euler_pentagonal_oracle():
    # independent oracle: generalized pentagonal numbers
    n = 30
    s = TruncationSpec(0, 2 * n, 0)
    expected = {}
    k = 0
    while True:
        hits = False
        for j in (k, -k) if k else (0,):
            p = j * (3 * j - 1) // 2
            if p <= n:
                expected[p] = (-1) ** (j % 2)
                hits = True
        if not hits:
            break
        k += 1
    assert poch(q(s, 2), q(s, 2), s) == qs(s, expected)
    assert poch(q(s, 2), q(s, 2), s) * poch_inv(q(s, 2), q(s, 2), s) == Series.one(s)


def test_partition_numbers_oracle():
    def partitions(n):
        table = [1] + [0] * n
        for part in range(1, n + 1):
            for i in range(part, n + 1):
                table[i] += table[i - part]
        return table

    s = TruncationSpec(0, 40, 0)
    got = poch_inv(q(s, 2), q(s, 2), s).q_list()
    assert [c.at() for c in got] == partitions(20)


# ct / substitute / rescale --------------------------------------------------------


def _theta_z(spec):
    terms = {}
    n = 0
    while n * n <= spec.max_d2:
        terms[Monomial((n,), n * n)] = 1
        terms[Monomial((-n,), n * n)] = 1
        n += 1
    return Series(spec, terms)


def test_ct_examples():
    s = TruncationSpec(1, 8, 4)
    th = _theta_z(s)
    assert ct(th) == Series.one(s)
    assert ct(Series(s, {Monomial((-1,), 0): 1}) * th) == Series(s, {q(s, 1): 1})
    x = Series(s, {q(s, 0): 1, Monomial((1,), 2): 3, q(s, 4): 5})
    assert ct(x) == Series(s, {q(s, 0): 1, q(s, 4): 5})


@given(small, small)
def test_ct_linear_and_idempotent(a, b):
    assert ct(ct(a)) == ct(a)
    assert ct(a + b) == ct(a) + ct(b)


def test_substitute_examples():
    s = TruncationSpec(0, 20, 0)
    assert substitute(Series(s, {q(s, 2): CoeffPoly.monomial(3)}), 2) == Series(s, {q(s, 8): 1})
    x = Series(s, {q(s, 0): 1, q(s, 4): t * t})
    assert substitute(x, 6) == Series(s, {q(s, 0): 1, q(s, 16): 1})
    with pytest.raises(NotAQSeriesError):
        substitute(Series(Q3, {Monomial((1,), 0): 1}), 2)
    assert substitute(Series(Q3, {Monomial((1,), 0): t}), 2, allow_finite=True) == Series(
        Q3, {Monomial((1,), 2): 1}
    )


def test_rescale_examples():
    s = TruncationSpec(0, 8, 0)
    assert rescale_q(qs(s, {0: 1, 1: 1}), 2) == qs(s, {0: 1, 2: 1})
    assert rescale_q(Series(s, {q(s, 1): t}), 2) == Series(s, {q(s, 2): t})
    assert rescale_q(Series.one(s), 5) == Series.one(s)
    # pushed past the truncation: dropped silently
    assert rescale_q(qs(s, {0: 1, 3: 1}), 2) == Series.one(s)


# serialization -------------------------------------------------------------------


@given(small)
def test_json_round_trip(a):
    doc = json.loads(a.dumps())
    assert Series.from_json(doc) == a
    keys = [(term["d2"], term["finite"]) for term in doc["terms"]]
    assert keys == sorted(keys)


def test_json_schema_shape():
    a = Series(Q3, {Monomial((1,), 2): CoeffPoly({(2, 1): 10**30})})
    doc = a.to_json()
    assert doc == {"rank": 1, "maxD2": 6, "box": 3,
                   "terms": [{"finite": [1], "d2": 2, "coeff": [[2, 1, str(10**30)]]}]}
