"""Closed-form products for t-string functions and constant terms, and the comparison harness."""

from __future__ import annotations

from .algebras import AffineAlgebra, height_stats
from .series import ONE, CoeffPoly, Series, TruncationSpec, rescale_q, substitute
from ._report import VerificationReport, compare

__all__ = [
    "VerificationReport",
    "cmm_rhs_a2l2",
    "cmm_rhs_general",
    "compare",
    "positive_exponents",
    "product_ade",
    "product_mainthm",
    "specialization_check",
    "specialization_rhs",
    "two_var_product",
]


def _tq(spec: TruncationSpec, t: int, d2: int, s: int = 0) -> tuple:
    return spec.mono(d2), CoeffPoly.monomial(t, s)


def _times_one_minus(x: Series, spec: TruncationSpec, t: int, d2: int, s: int = 0) -> Series:
    m, c = _tq(spec, t, d2, s)
    return x * Series(spec, {spec.mono(): ONE, m: -c})


def _div_one_minus(x: Series, spec: TruncationSpec, t: int, d2: int, s: int = 0) -> Series:
    m, c = _tq(spec, t, d2, s)
    return x.div_one_minus(m, c)


def _div_poch(x: Series, spec: TruncationSpec, t: int, d2: int, step: int, s: int = 0) -> Series:
    """``x / (t^t s^s q^(d2/2); q^(step/2))_inf``."""
    while d2 <= spec.max_d2:
        x = _div_one_minus(x, spec, t, d2, s)
        d2 += step
    return x


def _times_poch(x: Series, spec: TruncationSpec, t: int, d2: int, step: int) -> Series:
    while d2 <= spec.max_d2:
        x = _times_one_minus(x, spec, t, d2)
        d2 += step
    return x


def product_mainthm(g: AffineAlgebra, max_q: int) -> Series:
    """``prod_{n >= 1} prod_{e in E_n} (1 - t^(e+1) q^n)^-1``."""
    if not g.twisted:
        raise ValueError(f"{g.label} is untwisted; use product_ade")
    return _exponent_product(g, max_q)


def _exponent_product(g: AffineAlgebra, max_q: int) -> Series:
    spec = TruncationSpec.q_order(g.l, max_q)
    out = Series.one(spec)
    for n in range(1, max_q + 1):
        for e in g.exponents(n):
            out = _div_one_minus(out, spec, e + 1, 2 * n)
    return out


def product_ade(g: AffineAlgebra, max_q: int) -> Series:
    """``prod_i prod_n (1 - t^(e_i+1) q^n)^-1`` over the exponents of a simply-laced ``g``."""
    if g.twisted or not g.finite.is_simply_laced:
        raise ValueError(f"{g.label} is not untwisted simply-laced")
    return _exponent_product(g, max_q)


def cmm_rhs_general(g: AffineAlgebra, max_q: int) -> Series:
    """``prod_{alpha > 0} prod_{j >= 1} (1 - t^ht q^(|alpha|^2 j/2)) / (1 - t^(ht+1) q^(|alpha|^2 j/2))``."""
    if g.is_a2l:
        raise ValueError("A_2l^(2) has its own constant-term product")
    spec = TruncationSpec.q_order(g.l, max_q)
    out = Series.one(spec)
    for r in g.finite.positive_roots:
        ht = int(g.finite.height(r.vector))
        for d2 in range(r.norm, spec.max_d2 + 1, r.norm):
            out = _div_one_minus(_times_one_minus(out, spec, ht, d2), spec, ht + 1, d2)
    return out


def cmm_rhs_a2l2(l: int, max_q: int) -> Series:
    """``(tq;q)^l / (prod_{j even} (t^j q^2; q^2) * prod_{j odd >= 3} (t^j q; q^2))``, ``j <= 2l+1``."""
    if l < 1:
        raise ValueError("l must be positive")
    spec = TruncationSpec.q_order(l, max_q)
    out = Series.one(spec)
    for _ in range(l):
        out = _times_poch(out, spec, 1, 2, 2)
    for j in range(2, 2 * l + 1, 2):
        out = _div_poch(out, spec, j, 4, 4)
    for j in range(3, 2 * l + 2, 2):
        out = _div_poch(out, spec, j, 2, 4)
    return out


def two_var_product(l: int, max_q: int) -> Series:
    """``prod_{j even} (t^j q^2; q^2)^-1 * prod_{j odd} (s^2 t^j q; q^2)^-1``, ``1 <= j <= 2l``."""
    if l < 1:
        raise ValueError("l must be positive")
    spec = TruncationSpec.q_order(l, max_q)
    out = Series.one(spec)
    for j in range(1, 2 * l + 1):
        if j % 2:
            out = _div_poch(out, spec, j, 2, 4, s=2)
        else:
            out = _div_poch(out, spec, j, 4, 4)
    return out


def positive_exponents(g: AffineAlgebra, bound: int) -> list[int]:
    """``{e + h n : n >= 0, e in E_n}`` up to ``bound``, as a sorted multiset."""
    out = []
    n = 0
    while min(g.exponents(n), default=0) + g.h * n <= bound:
        out += [e + g.h * n for e in g.exponents(n) if e + g.h * n <= bound]
        n += 1
    return sorted(out)


def specialization_rhs(g: AffineAlgebra, max_q: int) -> Series:
    """``prod_{finite exponents} (1 - q^(e+1)) / prod_{positive affine exponents} (1 - q^(e+1))``."""
    spec = TruncationSpec.q_order(g.l, max_q)
    out = Series.one(spec)
    for e in height_stats(g.finite).exponents():
        out = _times_one_minus(out, spec, 0, 2 * (e + 1))
    for e in positive_exponents(g, max_q):
        out = _div_one_minus(out, spec, 0, 2 * (e + 1))
    return out


def specialization_check(g: AffineAlgebra, max_q: int) -> VerificationReport:
    """Compare ``a(q, q^h)`` from the exponent product against :func:`specialization_rhs`."""
    if not g.twisted and not g.finite.is_simply_laced:
        raise ValueError(f"{g.label} is neither twisted nor simply-laced")
    spec = TruncationSpec.q_order(g.l, max_q)
    prod = _exponent_product(g, max_q // g.h)
    lhs = substitute(rescale_q(prod, g.h, spec), 2)
    return compare(lhs, specialization_rhs(g, max_q), spec.max_d2, f"a(q,q^{g.h})", "exponent quotient")
