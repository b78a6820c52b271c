"""Cherednik kernels, lattice theta functions and the constant-term route.

Two independent evaluations of ``ct(mu_hat * Theta)`` are provided: a sparse
one through :class:`~kacq.series.Series` arithmetic, and a dense one over the
positive root cone (``method="cone"``), which is what makes the larger
algebras tractable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .algebras import AffineAlgebra, build
from .cone import cone_product
from .kostka import _box_for, _poly_from_block, cone_factors
from .series import (
    ONE,
    CoeffPoly,
    Monomial,
    Series,
    TruncationSpec,
    poch,
    poch_inv,
    substitute,
)
from ._report import VerificationReport, compare

__all__ = [
    "MacdonaldParams",
    "basic_character_shifted",
    "basic_string_function_t1",
    "cherednik_kernel",
    "ct_kernel_theta",
    "imaginary_kernel",
    "jacobi_triple_product_check",
    "macdonald_kernel_cc",
    "macdonald_theta_quotient",
    "string_function_ct",
    "theta_series",
]

T = CoeffPoly.monomial(1)


def _neg(v):
    return tuple(-x for x in v)


def kernel_padding(g: AffineAlgebra, max_d2: int) -> int:
    """How far outside a box intermediate products of kernel factors can wander.

    A factor monomial with ``d2 > 0`` moves the finite part by at most
    ``ratio * d2`` in max-norm, and ``d2 = 0`` factors only move towards the
    negative cone, so a box padded by ``ratio * max_d2`` keeps every partial
    product that can still land in the original box.
    """
    ratio = Fraction(0)
    for m in g.positive_real_roots_up_to(max(4 * g.r, 4)):
        if m.d2 > 0:
            ratio = max(ratio, Fraction(max(abs(x) for x in m.finite), m.d2))
    return math.ceil(ratio * max_d2)


def _restrict(x: Series, spec: TruncationSpec) -> Series:
    return Series(spec, x.items())


def _padded(g: AffineAlgebra, spec: TruncationSpec) -> TruncationSpec:
    return TruncationSpec(spec.rank, spec.max_d2, spec.box + kernel_padding(g, spec.max_d2))


def cherednik_kernel(g: AffineAlgebra, spec: TruncationSpec, t: CoeffPoly = T) -> Series:
    """``prod (1 - e^-alpha) / (1 - t e^-alpha)`` over positive real roots, exact inside ``spec``."""
    work = _padded(g, spec)
    out = Series.one(work)
    for m in g.positive_real_roots_up_to(spec.max_d2):
        e = Monomial(_neg(m.finite), m.d2)
        out = (out * Series(work, {work.mono(): ONE, e: -1})).div_one_minus(e, t)
    return _restrict(out, spec)


def imaginary_kernel(g: AffineAlgebra, spec: TruncationSpec) -> Series:
    """``prod_n ((1 - q^n) / (1 - t q^n))^mult(n delta)``."""
    out = Series.one(spec)
    for n in range(1, spec.max_d2 // 2 + 1):
        qn = spec.mono(2 * n)
        for _ in range(g.imaginary_mult(n)):
            out = (out * Series(spec, {spec.mono(): ONE, qn: -1})).div_one_minus(qn, T)
    return out


def basic_string_function_t1(g: AffineAlgebra, spec: TruncationSpec) -> Series:
    """``prod_n (1 - q^n)^-mult(n delta)``: the string function at ``t = 1``."""
    out = Series.one(spec)
    for n in range(1, spec.max_d2 // 2 + 1):
        qn = spec.mono(2 * n)
        for _ in range(g.imaginary_mult(n)):
            out = out.div_one_minus(qn)
    return out


def theta_series(g: AffineAlgebra, spec: TruncationSpec) -> Series:
    """``sum_{gamma in M} e^gamma q^(|gamma|^2/2)``."""
    terms = {}
    for v in g.lattice_ball(spec.max_d2):
        n = g.finite.norm(v)
        assert n.denominator == 1
        terms[Monomial(tuple(v), int(n))] = ONE
    return Series(spec, terms)


def _theta_box(g: AffineAlgebra, max_d2: int) -> int:
    return max((max(abs(x) for x in v) for v in g.lattice_ball(max_d2)), default=0)


def ct_kernel_theta(g: AffineAlgebra, max_d2: int, method: str = "cone", box_padding: int = 0,
                    backend: str | None = None) -> Series:
    """``ct(mu_hat * Theta)`` as a pure series with ``d2 <= max_d2`` (half-integral q allowed)."""
    pure = TruncationSpec(g.l, max_d2, 0)
    if method == "series":
        box = _theta_box(g, max_d2) + box_padding
        spec = TruncationSpec(g.l, max_d2, box)
        prod = cherednik_kernel(g, spec) * theta_series(g, spec)
        return _restrict(prod.ct(), pure)
    if method != "cone":
        raise ValueError(f"unknown method {method!r}")
    # coefficient of e^-gamma q^(d/2) in mu_hat, paired with e^gamma q^(|gamma|^2/2)
    targets = []
    for v in g.lattice_ball(max_d2):
        n = int(g.finite.norm(v))
        for d in range(max_d2 - n + 1):
            c = g.affine_coords(v, d)
            if c is not None:
                targets.append((n + d, c))
    dims = tuple(b + 1 for b in _box_for((c for _, c in targets), g.l + 1, box_padding))
    t1 = sum(dims) - len(dims) + 1
    arr = cone_product(dims, t1, 1, cone_factors(g, max_d2, dims, numerator=True), backend=backend)
    coeffs: dict[int, CoeffPoly] = {}
    for d2, c in targets:
        coeffs[d2] = coeffs.get(d2, CoeffPoly()) + _poly_from_block(arr[c])
    return Series.from_q_coefficients(pure, coeffs)


def string_function_ct(g: AffineAlgebra, max_q: int, method: str = "cone", box_padding: int = 0,
                       backend: str | None = None) -> Series:
    """``a(1,q) * mu_hat^im * ct(mu_hat * Theta)``, to q-degree ``max_q``."""
    spec = TruncationSpec.q_order(g.l, max_q)
    ct = _restrict(ct_kernel_theta(g, 2 * max_q, method, box_padding, backend), spec)
    return basic_string_function_t1(g, spec) * imaginary_kernel(g, spec) * ct


def basic_character_shifted(g: AffineAlgebra, spec: TruncationSpec) -> Series:
    """``e^-Lambda_0 ch L(Lambda_0) = a(1,q) * Theta``."""
    return basic_string_function_t1(g, spec) * theta_series(g, spec)


# the (C_l^vee, C_l) kernel ----------------------------------------------------


def _half_units(k) -> int:
    k2 = Fraction(k) * 2
    if k2.denominator != 1 or k2 < 0:
        raise ValueError(f"parameter {k} must be a nonnegative half-integer")
    return int(k2)


@dataclass(frozen=True)
class MacdonaldParams:
    """``k_1..k_5`` as q-exponents; ``k4=None`` means ``k_4 -> infinity``."""

    k1: Fraction
    k2: Fraction
    k3: Fraction
    k4: Fraction | None
    k5: Fraction

    def __post_init__(self):
        for name in ("k1", "k2", "k3", "k4", "k5"):
            v = getattr(self, name)
            if v is not None:
                _half_units(v)
                object.__setattr__(self, name, Fraction(v))

    @classmethod
    def specialized(cls, k5, k4=0) -> MacdonaldParams:
        """``k3 = k5 = 2 k1 = 2 k2``, the choice under which ``t = q^k5`` recovers the twisted kernel."""
        k5 = Fraction(k5)
        return cls(k5 / 2, k5 / 2, k5, None if k4 is None else Fraction(k4), k5)

    @property
    def k4_infinite(self) -> bool:
        return self.k4 is None

    def u(self) -> list[tuple[int, int]]:
        """``u_1..u_4`` as ``(sign, d2)``; ``u_4`` omitted when ``k_4`` is infinite."""
        out = [(1, _half_units(self.k1)), (-1, _half_units(self.k2)), (1, _half_units(self.k3) + 1)]
        if not self.k4_infinite:
            out.append((-1, _half_units(self.k4) + 1))
        return out

    def u_prime(self) -> list[tuple[int, int]]:
        u = self.u()
        return [(s, d + 2) if i < 2 else (s, d) for i, (s, d) in enumerate(u)]

    @property
    def t_half_q(self) -> int:
        return _half_units(self.k5)


def _epsilons(g: AffineAlgebra) -> list[tuple[int, ...]]:
    """The orthonormal vectors ``e_1..e_l`` of ``M = Z^l`` (positive ones)."""
    return sorted(
        (tuple(v) for v in g.lattice_ball(1) if g.finite.norm(v) == 1 and g.finite.height(v) > 0),
        reverse=True,
    )


def macdonald_kernel_cc(l: int, params: MacdonaldParams, spec: TruncationSpec) -> Series:
    """Cherednik kernel of ``(C_l^vee, C_l)``, expressed on the lattice of ``A_{2l}^(2)``.

    Exact inside ``spec``; ``k_4 -> infinity`` drops the ``u_4`` factors.
    """
    g = build(f"A{2 * l}~2")
    if spec.rank != l:
        raise ValueError("spec rank must equal l")
    work = _padded(g, spec)
    q = work.mono(2)
    out = Series.one(work)
    for a in _epsilons(g):
        a2 = tuple(2 * x for x in a)
        out = out * poch(Monomial(_neg(a2), 0), q, work) * poch(Monomial(a2, 2), q, work)
        for (s, d), (s2, d2) in zip(params.u(), params.u_prime()):
            out = out * poch_inv(Monomial(_neg(a), d), q, work, s)
            out = out * poch_inv(Monomial(a, d2), q, work, s2)
    k5 = params.t_half_q
    for r in g.finite.positive_roots:
        if r.norm != 2:
            continue
        b = r.vector
        out = out * poch(Monomial(_neg(b), 0), q, work) * poch(Monomial(b, 2), q, work)
        out = out * poch_inv(Monomial(_neg(b), k5), q, work) * poch_inv(Monomial(b, k5 + 2), q, work)
    return _restrict(out, spec)


def macdonald_theta_quotient(l: int, k5, spec: TruncationSpec) -> Series:
    """``mu_hat * Theta_M / (q; q)^l`` for ``A_2l^(2)`` at ``t = q^k5``: the ``k_4 -> infinity`` limit."""
    g = build(f"A{2 * l}~2")
    if spec.rank != l:
        raise ValueError("spec rank must equal l")
    # coefficients inside spec only see mu_hat within the theta reach of the box
    work = TruncationSpec(l, spec.max_d2, spec.box + _theta_box(g, spec.max_d2))
    k2 = _half_units(k5)
    out = substitute(cherednik_kernel(g, work) * theta_series(g, work), k2, allow_finite=True)
    for _ in range(l):
        out = out * poch_inv(work.mono(2), work.mono(2), work)
    return _restrict(out, spec)


def jacobi_triple_product_check(spec: TruncationSpec) -> VerificationReport:
    """``(-q^1/2 z, -q^1/2 / z; q) == (q; q)^-1 sum_n q^(n^2/2) z^n`` in rank 1."""
    if spec.rank != 1:
        raise ValueError("the triple product lives in rank 1")
    work = TruncationSpec(1, spec.max_d2, spec.box + spec.max_d2)
    q = work.mono(2)
    lhs = poch(Monomial((1,), 1), q, work, -1) * poch(Monomial((-1,), 1), q, work, -1)
    n = 0
    terms = {}
    while n * n <= spec.max_d2:
        terms[Monomial((n,), n * n)] = ONE
        terms[Monomial((-n,), n * n)] = ONE
        n += 1
    rhs = poch_inv(q, q, work) * Series(work, terms)
    return compare(_restrict(lhs, spec), _restrict(rhs, spec), spec.max_d2, "(-q^1/2 z, -q^1/2/z; q)", "theta(z)/(q;q)")
