"""t-Kostant partition function, Kostka-Foulkes polynomials and Weyl-sum t-string functions.

The partition function lives on a box of the positive root cone written in
affine simple-root coordinates, where every positive root has nonnegative
coordinates.  Multiplying a factor whose root leaves the box cannot change
any entry inside it, so the table is exact on the whole box.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from .algebras import AffineAlgebra
from .cone import Factor, cone_product
from .series import CoeffPoly, Monomial, Series, TruncationSpec
from .weyl import AffineWeight, LevelMismatchError, candidates, lambda0, rho

__all__ = [
    "IncompleteTableError",
    "PartitionTable",
    "kostka_poly",
    "string_function_weylsum",
    "t_kostant",
]


class IncompleteTableError(LookupError):
    """A lookup fell outside the box the table was built on."""


def _poly_from_block(block: np.ndarray) -> CoeffPoly:
    nz = np.argwhere(block != 0)
    return CoeffPoly._raw({(int(a), int(b)): int(block[a, b]) for a, b in nz})


class PartitionTable:
    """Values of the t-Kostant partition function on a box of the positive cone."""

    def __init__(self, g: AffineAlgebra, max_d2: int, dims: tuple[int, ...], two_variable: bool, arr: np.ndarray):
        self.g = g
        self.max_d2 = max_d2
        self.dims = dims
        self.two_variable = two_variable
        self._arr = arr

    def coords(self, key) -> tuple[int, ...] | None:
        finite, d2 = _split(key)
        return self.g.affine_coords(finite, d2)

    def at_coords(self, coords: Sequence[int]) -> CoeffPoly:
        if len(coords) != len(self.dims):
            raise ValueError("coordinate length does not match the table")
        if any(c < 0 for c in coords):
            return CoeffPoly()
        if any(c >= d for c, d in zip(coords, self.dims)):
            raise IncompleteTableError(f"{tuple(coords)} lies outside the box {self.dims}")
        if self.g.from_affine_coords(coords).d2 > self.max_d2:
            raise IncompleteTableError(f"{tuple(coords)} is above the d2 window {self.max_d2}")
        return _poly_from_block(self._arr[tuple(coords)])

    def __getitem__(self, key) -> CoeffPoly:
        finite, d2 = _split(key)
        if d2 < 0:
            return CoeffPoly()
        c = self.g.affine_coords(finite, d2)
        if c is None:
            return CoeffPoly()
        return self.at_coords(c)

    def items(self) -> Iterable[tuple[Monomial, CoeffPoly]]:
        for idx in np.ndindex(*self.dims):
            m = self.g.from_affine_coords(idx)
            if m.d2 <= self.max_d2:
                p = _poly_from_block(self._arr[idx])
                if p:
                    yield m, p


def _split(key) -> tuple[tuple[int, ...], int]:
    if isinstance(key, AffineWeight):
        if key.level != 0:
            raise ValueError("partition function lives on the root lattice (level 0)")
        return tuple(key.finite), key.d2
    if isinstance(key, Monomial):
        return tuple(key.finite), key.d2
    finite, d2 = key
    return tuple(finite), int(d2)


def cone_factors(g: AffineAlgebra, max_d2: int, dims: Sequence[int], two_variable: bool = False,
                 *, numerator: bool = False) -> list[Factor]:
    """Root factors for the t-Kostant product restricted to ``dims``.

    ``numerator`` adds the linear factors ``(1 - x^alpha)`` of the real roots,
    turning the product into the Cherednik kernel expanded at ``e^-alpha = x^alpha``.
    """
    out: list[Factor] = []
    for m in g.positive_real_roots_up_to(max_d2):
        c = g.affine_coords(m.finite, m.d2)
        assert c is not None, m
        if any(x >= d for x, d in zip(c, dims)):
            continue
        s_root = two_variable and g.real_root_norm(m.finite) == 1
        out.append(Factor(c, tshift=0 if s_root else 1, sshift=1 if s_root else 0))
        if numerator:
            out.append(Factor(c, sign=-1, inverse=False))
    delta = g.delta_coords
    if not numerator:
        for n in range(1, max_d2 // 2 + 1):
            c = tuple(n * x for x in delta)
            if any(x >= d for x, d in zip(c, dims)):
                break
            out.append(Factor(c, tshift=1, power=g.imaginary_mult(n)))
    return out


def t_kostant(g: AffineAlgebra, max_d2: int, box: Sequence[int], two_variable: bool = False,
              backend: str | None = None) -> PartitionTable:
    """Partition table on ``{x : 0 <= x_i <= box[i]}`` in affine simple-root coordinates.

    Entries with ``d2 > max_d2`` are not served.
    """
    dims = tuple(int(b) + 1 for b in box)
    if len(dims) != g.l + 1 or min(dims) < 1:
        raise ValueError(f"box needs {g.l + 1} nonnegative bounds")
    max_d2 = min(max_d2, (dims[0] - 1) * g.alpha0.d2)
    # each root has coordinate sum >= 1, and norm-1 roots have alpha_0 coordinate >= 1
    t1 = sum(dims) - len(dims) + 1
    s1 = dims[0] if two_variable else 1
    arr = cone_product(dims, t1, s1, cone_factors(g, max_d2, dims, two_variable), backend=backend)
    return PartitionTable(g, max_d2, dims, two_variable, arr)


def _box_for(coords: Iterable[Sequence[int]], n: int, padding: int = 0) -> tuple[int, ...]:
    box = [0] * n
    for c in coords:
        box = [max(a, b) for a, b in zip(box, c)]
    return tuple(b + padding for b in box)


def _table(g, max_d2, box, two_variable, backend, cache):
    if cache is not None:
        return cache.table(g, max_d2, box, two_variable)
    return t_kostant(g, max_d2, box, two_variable, backend)


def kostka_poly(g: AffineAlgebra, lam: AffineWeight, mu: AffineWeight, two_variable: bool = False,
                backend: str | None = None, cache=None) -> CoeffPoly:
    """``sum_w sign(w) p_t(w(lam + rho) - (mu + rho))``."""
    if lam.level != mu.level:
        raise LevelMismatchError(f"levels {lam.level} and {mu.level} differ")
    lr, mr = lam + rho(g), mu + rho(g)
    hi = lam.d2 - mu.d2
    terms = []
    group = g.finite.weyl_group()
    for c in candidates(g, lr, mr, 0, max(hi, 0)):
        coords = g.affine_coords(c.defect.finite, c.defect.d2)
        if coords is not None:
            terms.append((group[c.finite_index][1], coords))
    if not terms:
        return CoeffPoly()
    table = _table(g, hi, _box_for((x for _, x in terms), g.l + 1), two_variable, backend, cache)
    total = CoeffPoly()
    for sgn, coords in terms:
        total = total + table.at_coords(coords) * sgn
    return total


def string_function_weylsum(g: AffineAlgebra, max_q: int, lam: AffineWeight | None = None,
                            mu: AffineWeight | None = None, two_variable: bool = False,
                            box_padding: int = 0, backend: str | None = None, cache=None) -> Series:
    """``sum_{k <= max_q} K_{lam, mu - k delta}(t) q^k`` (defaults ``lam = mu = Lambda_0``)."""
    lam = lambda0(g) if lam is None else lam
    mu = lam if mu is None else mu
    if lam.level != mu.level:
        raise LevelMismatchError(f"levels {lam.level} and {mu.level} differ")
    max_d2 = 2 * max_q
    lr, mr = lam + rho(g), mu + rho(g)
    group = g.finite.weyl_group()
    base = lam.d2 - mu.d2
    terms: list[tuple[int, int, tuple[int, ...]]] = []
    for c in candidates(g, lr, mr, base - max_d2, base + max_d2):
        sgn = group[c.finite_index][1]
        for k in range(max_q + 1):
            d2 = c.defect.d2 + 2 * k
            if d2 > base + max_d2:
                break
            coords = g.affine_coords(c.defect.finite, d2)
            if coords is not None:
                terms.append((k, sgn, coords))
    spec = TruncationSpec.q_order(g.l, max_q)
    if not terms:
        return Series(spec)
    box = _box_for((x for *_, x in terms), g.l + 1, box_padding)
    top = max(g.from_affine_coords(x).d2 for *_, x in terms)
    table = _table(g, top, box, two_variable, backend, cache)
    coeffs: dict[int, CoeffPoly] = {}
    for k, sgn, coords in terms:
        coeffs[k] = coeffs.get(k, CoeffPoly()) + table.at_coords(coords) * sgn
    return Series.from_q_coefficients(spec, {2 * k: c for k, c in coeffs.items()})
