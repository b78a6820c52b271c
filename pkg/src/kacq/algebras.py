"""Root data for the twisted affine algebras and a few untwisted ones.

Finite vectors are integer tuples in *doubled simple-root coordinates* of the
finite root system: ``v`` stands for ``sum_i (v_i / 2) alpha_i``.  Inner
products go through the Gram matrix of the simple roots, normalized so short
roots have norm 2 (long roots then have norm 4 or 6).
"""

from __future__ import annotations

import itertools
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from .cone import Factor, cone_product
from .series import Monomial

__all__ = [
    "AffineAlgebra",
    "CatalogError",
    "FiniteRootSystem",
    "HeightStats",
    "Root",
    "build",
    "catalog_ids",
    "finite_root_system",
    "generalized_exponents",
    "height_stats",
    "imaginary_mult",
    "lattice_ball",
    "ambient_exponents",
    "positive_real_roots_up_to",
    "recomputed_exponents",
]

Vec = tuple[int, ...]


class CatalogError(ValueError):
    """Unsupported algebra or root system."""


# --------------------------------------------------------------------------
# finite root systems


def _gram(kind: str, n: int) -> list[list[int]]:
    g = [[0] * n for _ in range(n)]

    def link(i, j, v):
        g[i][j] = g[j][i] = v

    if kind == "A":
        for i in range(n):
            g[i][i] = 2
        for i in range(n - 1):
            link(i, i + 1, -1)
    elif kind == "B":
        for i in range(n):
            g[i][i] = 4
        g[n - 1][n - 1] = 2
        for i in range(n - 1):
            link(i, i + 1, -2)
    elif kind == "C":
        for i in range(n):
            g[i][i] = 2
        g[n - 1][n - 1] = 4
        for i in range(n - 1):
            link(i, i + 1, -1)
        if n > 1:
            link(n - 2, n - 1, -2)
    elif kind == "D":
        for i in range(n):
            g[i][i] = 2
        for i in range(n - 2):
            link(i, i + 1, -1)
        link(n - 3, n - 1, -1)
    elif kind == "E":
        for i in range(n):
            g[i][i] = 2
        # Bourbaki: 1-3-4-5-6-7-8 with 2 attached to 4
        link(0, 2, -1)
        link(1, 3, -1)
        for i in range(2, n - 1):
            link(i, i + 1, -1)
    elif kind == "F":
        g = [[4, -2, 0, 0], [-2, 4, -2, 0], [0, -2, 2, -1], [0, 0, -1, 2]]
    elif kind == "G":
        g = [[2, -3], [-3, 6]]
    else:
        raise CatalogError(f"unknown Cartan type {kind}")
    return g


_VALID = {
    "A": lambda n: n >= 1,
    "B": lambda n: n >= 2,
    "C": lambda n: n >= 1,
    "D": lambda n: n >= 4,
    "E": lambda n: n in (6, 7, 8),
    "F": lambda n: n == 4,
    "G": lambda n: n == 2,
}


@dataclass(frozen=True)
class Root:
    vector: Vec  # doubled simple-root coordinates
    norm: int
    height: int
    is_long: bool


@dataclass(frozen=True)
class HeightStats:
    """Counts of positive roots (all, and short only) by height."""

    n: dict[int, int]
    n_short: dict[int, int]

    def exponents(self, short: bool = False) -> tuple[int, ...]:
        """Multiset with ``p`` repeated ``n_p - n_{p+1}`` times."""
        cnt = self.n_short if short else self.n
        out = []
        for p in sorted(cnt):
            out += [p] * (cnt[p] - cnt.get(p + 1, 0))
        return tuple(out)


@dataclass(frozen=True, eq=False)
class FiniteRootSystem:
    kind: str
    rank: int
    gram: tuple[tuple[int, ...], ...]
    roots: tuple[Root, ...] = field(repr=False)

    @property
    def name(self) -> str:
        return f"{self.kind}{self.rank}"

    # geometry ------------------------------------------------------------
    @cached_property
    def _g(self) -> np.ndarray:
        return np.array(self.gram, dtype=np.int64)

    def ip4(self, u, v) -> int:
        """Four times the inner product of two doubled-coordinate vectors."""
        g = self.gram
        return sum(u[i] * g[i][j] * v[j] for i in range(self.rank) for j in range(self.rank) if u[i] and v[j])

    def ip(self, u, v) -> Fraction:
        return Fraction(self.ip4(u, v), 4)

    def norm(self, v) -> Fraction:
        return self.ip(v, v)

    @cached_property
    def simple_roots(self) -> tuple[Vec, ...]:
        return tuple(tuple(2 if j == i else 0 for j in range(self.rank)) for i in range(self.rank))

    @cached_property
    def cartan(self) -> tuple[tuple[int, ...], ...]:
        """``A[i][j] = <alpha_i, alpha_j^vee>``."""
        g = self.gram
        return tuple(tuple(2 * g[i][j] // g[j][j] for j in range(self.rank)) for i in range(self.rank))

    def coroot_pairing(self, v, i: int) -> Fraction:
        """``<v, alpha_i^vee>`` for a doubled-coordinate vector ``v``."""
        return Fraction(sum(v[j] * self.gram[j][i] for j in range(self.rank)), self.gram[i][i])

    def is_dominant(self, v) -> bool:
        return all(self.coroot_pairing(v, i) >= 0 for i in range(self.rank))

    def reflect(self, v, i: int) -> Vec:
        c = self.coroot_pairing(v, i)
        if c.denominator != 1 and (2 * c).denominator != 1:
            raise ValueError(f"{v} is not in the weight lattice")
        shift = 2 * c
        if shift.denominator != 1:
            raise ValueError(f"reflection of {v} leaves the doubled lattice")
        out = list(v)
        out[i] -= int(shift)
        return tuple(out)

    @cached_property
    def reflection_matrices(self) -> tuple[np.ndarray, ...]:
        mats = []
        for i in range(self.rank):
            m = np.eye(self.rank, dtype=np.int64)
            for j in range(self.rank):
                m[i, j] -= 2 * self.gram[j][i] // self.gram[i][i]
            mats.append(m)
        return tuple(mats)

    # roots ---------------------------------------------------------------
    @cached_property
    def positive_roots(self) -> tuple[Root, ...]:
        return tuple(r for r in self.roots if r.height > 0)

    @cached_property
    def is_simply_laced(self) -> bool:
        return len({r.norm for r in self.roots}) == 1

    @cached_property
    def theta_l(self) -> Vec:
        return max(self.positive_roots, key=lambda r: r.height).vector

    @cached_property
    def theta_s(self) -> Vec:
        short = [r for r in self.positive_roots if not r.is_long] or list(self.positive_roots)
        return max(short, key=lambda r: r.height).vector

    @cached_property
    def rho(self) -> Vec:
        """Half-sum of positive roots (doubled coordinates)."""
        return tuple(sum(r.vector[i] for r in self.positive_roots) // 2 for i in range(self.rank))

    def height(self, v) -> Fraction:
        return Fraction(sum(v), 2)

    @cached_property
    def long_norm(self) -> int:
        return max(r.norm for r in self.roots)

    @cached_property
    def short_simple_count(self) -> int:
        """Short simple roots; in a simply-laced system every root counts as short."""
        if self.is_simply_laced:
            return self.rank
        return sum(1 for i in range(self.rank) if self.gram[i][i] < self.long_norm)

    # Weyl group ----------------------------------------------------------
    def weyl_group(self, limit: int = 60000) -> list[tuple[np.ndarray, int]]:
        """All elements as integer matrices on doubled coordinates, with signs."""
        return _weyl_group(self, limit)

    def __repr__(self) -> str:
        return f"FiniteRootSystem({self.name})"


@lru_cache(maxsize=None)
def _weyl_group_cached(frs_key, limit):
    frs = _FRS_CACHE[frs_key]
    rho = np.array(frs.rho, dtype=np.int64)
    ident = np.eye(frs.rank, dtype=np.int64)
    seen = {tuple(rho): 0}
    elems = [(ident, 1)]
    frontier = [0]
    while frontier:
        nxt = []
        for idx in frontier:
            m, sgn = elems[idx]
            for s in frs.reflection_matrices:
                w = m @ s
                key = tuple(w @ rho)
                if key not in seen:
                    seen[key] = len(elems)
                    elems.append((w, -sgn))
                    nxt.append(len(elems) - 1)
                    if len(elems) > limit:
                        raise CatalogError(f"Weyl group of {frs.name} exceeds {limit} elements")
        frontier = nxt
    for m, _ in elems:
        m.setflags(write=False)
    return elems


def _weyl_group(frs, limit):
    return _weyl_group_cached((frs.kind, frs.rank), limit)


_FRS_CACHE: dict = {}


def finite_root_system(kind: str, rank: int) -> FiniteRootSystem:
    """Root system of Cartan type ``kind`` and the given rank (cached)."""
    key = (kind, rank)
    if key in _FRS_CACHE:
        return _FRS_CACHE[key]
    if kind not in _VALID or not _VALID[kind](rank):
        raise CatalogError(f"unsupported root system {kind}{rank}")
    g = _gram(kind, rank)
    n = rank

    def pair(c, i):  # <beta, alpha_i^vee> for root coordinates c
        return 2 * sum(c[j] * g[j][i] for j in range(n)) // g[i][i]

    simple = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    pos = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for b in layer:
            for i in range(n):
                p = 0
                down = list(b)
                while True:
                    down[i] -= 1
                    if tuple(down) in pos:
                        p += 1
                    else:
                        break
                if p - pair(b, i) > 0:
                    up = list(b)
                    up[i] += 1
                    up = tuple(up)
                    if up not in pos:
                        pos.add(up)
                        nxt.append(up)
        layer = nxt
    norms = {c: sum(c[i] * g[i][j] * c[j] for i in range(n) for j in range(n)) for c in pos}
    long_norm = max(norms.values())
    simply_laced = len(set(norms.values())) == 1
    roots = []
    for c in sorted(pos, key=lambda c: (sum(c), c)):
        for sgn in (1, -1):
            roots.append(
                Root(
                    vector=tuple(2 * sgn * x for x in c),
                    norm=norms[c],
                    height=sgn * sum(c),
                    is_long=simply_laced or norms[c] == long_norm,
                )
            )
    roots.sort(key=lambda r: (-(r.height > 0), abs(r.height), r.vector))
    frs = FiniteRootSystem(kind, rank, tuple(tuple(r) for r in g), tuple(roots))
    if sum(1 for r in frs.positive_roots if r.height == 1) != rank:
        raise AssertionError("height-1 roots must be the simple roots")
    _FRS_CACHE[key] = frs
    return frs


def height_stats(frs: FiniteRootSystem) -> HeightStats:
    n = Counter(r.height for r in frs.positive_roots)
    ns = Counter(r.height for r in frs.positive_roots if not r.is_long or frs.is_simply_laced)
    return HeightStats(dict(n), dict(ns))


def finite_kostka_zero(frs: FiniteRootSystem, lam: Vec) -> list[int]:
    """Coefficients (constant first) of the finite t-analog ``K_{lam,0}(t)``."""
    if not frs.is_dominant(lam):
        raise ValueError(f"{lam} is not dominant for {frs.name}")
    lr = tuple(a + b for a, b in zip(lam, frs.rho))
    targets = []
    for w, sgn in frs.weyl_group():
        x = w @ np.array(lr, dtype=np.int64) - np.array(frs.rho, dtype=np.int64)
        if np.all(x >= 0) and np.all(x % 2 == 0):
            targets.append((tuple(int(a) // 2 for a in x), sgn))
    if not targets:
        return [0]
    dims = [max(t[i] for t, _ in targets) + 1 for i in range(frs.rank)]
    tdeg = sum(d - 1 for d in dims) + 1
    factors = [Factor(tuple(x // 2 for x in r.vector), 1) for r in frs.positive_roots]
    arr = cone_product(dims, tdeg, 1, factors)
    total = [0] * tdeg
    for t, sgn in targets:
        col = arr[t]
        for a in range(tdeg):
            total[a] += sgn * int(col[a, 0])
    while len(total) > 1 and total[-1] == 0:
        total.pop()
    return total


def generalized_exponents(frs: FiniteRootSystem, lam: Vec) -> tuple[int, ...]:
    """Generalized exponents of ``V(lam)``: the t-exponents of ``K_{lam,0}(t)``."""
    coeffs = finite_kostka_zero(frs, lam)
    if any(c < 0 for c in coeffs):
        raise AssertionError(f"negative coefficient in K_(lam,0) for {frs.name}: {coeffs}")
    out = []
    for p, c in enumerate(coeffs):
        out += [p] * c
    return tuple(out)


# --------------------------------------------------------------------------
# affine algebras

_COXETER_EXPONENTS = {
    "E6": (1, 4, 5, 7, 8, 11),
    "E7": (1, 5, 7, 9, 11, 13, 17),
    "E8": (1, 7, 11, 13, 17, 19, 23, 29),
}


def _ade_exponents(kind: str, n: int) -> tuple[int, ...]:
    if kind == "A":
        return tuple(range(1, n + 1))
    if kind == "D":
        return tuple(sorted(list(range(1, 2 * n - 2, 2)) + [n - 1]))
    return _COXETER_EXPONENTS[f"E{n}"]


_ADE_COXETER = {"A": lambda n: n + 1, "D": lambda n: 2 * n - 2, "E": lambda n: {6: 12, 7: 18, 8: 30}[n]}

MAX_RANK = 8


@dataclass(frozen=True, eq=False)
class AffineAlgebra:
    """Catalog record for ``X_N^(r)``."""

    label: str  # e.g. "A2~2"
    family: str  # "A2l", "A2l-1", "Dl+1", "E6", "D4", or "untwisted"
    ambient: tuple[str, int]  # X_N
    r: int
    finite: FiniteRootSystem  # underlying finite simple Lie algebra
    m0: FiniteRootSystem  # fixed-point subalgebra of the diagram automorphism
    h: int
    h_dual: int
    exponent_table: dict[int, tuple[int, ...]] = field(repr=False)
    alpha0: Monomial = field(repr=False)
    lattice_basis: tuple[Vec, ...] = field(repr=False)

    @property
    def l(self) -> int:
        return self.finite.rank

    @property
    def N(self) -> int:
        return self.ambient[1]

    @property
    def twisted(self) -> bool:
        return self.r > 1

    @property
    def is_a2l(self) -> bool:
        return self.family == "A2l"

    @property
    def short_simple_count(self) -> int:
        return self.m0.short_simple_count

    def ambient_system(self) -> FiniteRootSystem:
        return finite_root_system(*self.ambient)

    def exponents(self, n: int) -> tuple[int, ...]:
        """Table entry ``E_n`` (periodic in ``n`` with period ``r``)."""
        return self.exponent_table[n % self.r]

    def imaginary_mult(self, n: int) -> int:
        return imaginary_mult(self, n)

    # weights and roots -----------------------------------------------------
    @cached_property
    def delta_coords(self) -> tuple[int, ...]:
        """Marks: ``delta`` in affine simple-root coordinates."""
        c = self.affine_coords((0,) * self.finite.rank, 2)
        assert c is not None
        return c

    def affine_coords(self, finite, d2: int) -> tuple[int, ...] | None:
        """Coordinates in ``alpha_0, ..., alpha_l``, or None outside the positive cone."""
        a0f, a0d = self.alpha0
        if d2 < 0 or d2 % a0d:
            return None
        c0 = d2 // a0d
        out = [c0]
        for x, a in zip(finite, a0f):
            rem = x - c0 * a
            if rem < 0 or rem % 2:
                return None
            out.append(rem // 2)
        return tuple(out)

    def from_affine_coords(self, coords) -> Monomial:
        c0 = coords[0]
        a0f, a0d = self.alpha0
        return Monomial(tuple(c0 * a + 2 * c for a, c in zip(a0f, coords[1:])), c0 * a0d)

    def real_root_norm(self, finite) -> Fraction:
        return self.finite.norm(finite)

    def rho_level(self) -> Fraction:
        """Level making ``<rho, alpha_0^vee> = 1`` with ``rho = rhobar + k*Lambda_0``."""
        a0f, a0d = self.alpha0
        # <rho, alpha_0> = <rhobar, a0f> + k * a0d/2 must equal |alpha_0|^2 / 2
        n0 = self.finite.norm(a0f)
        return (n0 / 2 - self.finite.ip(self.finite.rho, a0f)) * 2 / a0d

    def positive_real_roots_up_to(self, max_d2: int) -> list[Monomial]:
        return positive_real_roots_up_to(self, max_d2)

    def lattice_ball(self, max_norm2) -> list[Vec]:
        return lattice_ball(self, max_norm2)

    def __repr__(self) -> str:
        return f"AffineAlgebra({self.label})"


def imaginary_mult(g: AffineAlgebra, n: int) -> int:
    """Multiplicity of the imaginary root ``n*delta``."""
    if n <= 0:
        raise ValueError("imaginary roots are n*delta with n >= 1")
    if g.r == 1 or g.is_a2l or n % g.r == 0:
        return g.l
    return g.short_simple_count


def positive_real_roots_up_to(g: AffineAlgebra, max_d2: int) -> list[Monomial]:
    """Positive real roots ``(finite, d2)`` with ``d2 <= max_d2``, each once."""
    out = []
    fin = g.finite
    for r in fin.roots:
        if g.is_a2l:
            if r.is_long:
                half = tuple(x // 2 for x in r.vector)
                out += [Monomial(half, d2) for d2 in range(1, max_d2 + 1, 2)]
                out += [Monomial(r.vector, d2) for d2 in range(4, max_d2 + 1, 4)]
            else:
                out += [Monomial(r.vector, d2) for d2 in range(2, max_d2 + 1, 2)]
        else:
            step = r.norm  # beta + (|beta|^2/2) j delta, in half units
            out += [Monomial(r.vector, d2) for d2 in range(step, max_d2 + 1, step)]
        if r.height > 0:
            out.append(Monomial(r.vector, 0))
    out.sort(key=lambda m: (m.d2, m.finite))
    return out


def lattice_ball(g: AffineAlgebra, max_norm2) -> list[Vec]:
    """All ``gamma`` in the translation lattice ``M`` with ``<gamma, gamma> <= max_norm2``."""
    if max_norm2 < 0:
        return []
    basis = np.array(g.lattice_basis, dtype=np.int64)
    gm = basis @ np.array(g.finite.gram, dtype=np.int64) @ basis.T  # 4 * Gram of M
    inv = np.linalg.inv(gm.astype(float) / 4)
    bounds = [int(math.floor(math.sqrt(max(max_norm2 * inv[i, i], 0)) + 1e-9)) for i in range(len(basis))]
    limit4 = 4 * Fraction(max_norm2)
    out = []
    for c in itertools.product(*(range(-b, b + 1) for b in bounds)):
        c_arr = np.array(c, dtype=np.int64)
        n4 = int(c_arr @ gm @ c_arr)
        if n4 <= limit4:
            out.append(tuple(int(x) for x in c_arr @ basis))
    out.sort(key=lambda v: (g.finite.ip4(v, v), v))
    return out


# catalog ---------------------------------------------------------------------

_LABEL = re.compile(r"^([ADE])(\d+)~([123])$")


def catalog_ids() -> list[str]:
    """Labels of a representative set of catalog algebras."""
    return ["A2~2", "A4~2", "A5~2", "D3~2", "D4~2", "E6~2", "D4~3", "A1~1", "A2~1", "D4~1"]


def _odd(l):
    return tuple(range(1, 2 * l, 2))


@lru_cache(maxsize=None)
def build(label: str) -> AffineAlgebra:
    """Catalog record for a label like ``A2~2`` (ASCII for ``A_2^(2)``)."""
    mt = _LABEL.match(label.strip())
    if not mt:
        raise CatalogError(f"cannot parse algebra id {label!r}")
    X, N, r = mt.group(1), int(mt.group(2)), int(mt.group(3))
    if r == 1:
        if not _VALID[X](N) or N > MAX_RANK:
            raise CatalogError(f"unsupported untwisted algebra {label}")
        fin = finite_root_system(X, N)
        h = _ADE_COXETER[X](N)
        family, ambient, m0, hd = "untwisted", (X, N), fin, h
        table = {0: _ade_exponents(X, N)}
    elif r == 2 and X == "A" and N % 2 == 0 and N >= 2:
        l = N // 2
        fin, m0 = finite_root_system("C", l), finite_root_system("B", l) if l >= 2 else finite_root_system("A", 1)
        family, ambient, h, hd = "A2l", ("A", N), 2 * l + 1, 2 * l + 1
        table = {0: _odd(l), 1: tuple(range(2, 2 * l + 1, 2))}
    elif r == 2 and X == "A" and N % 2 == 1 and N >= 3:
        l = (N + 1) // 2
        fin = m0 = finite_root_system("C", l)
        family, ambient, h, hd = "A2l-1", ("A", N), 2 * l - 1, 2 * l
        table = {0: _odd(l), 1: tuple(range(2, 2 * l - 1, 2))}
    elif r == 2 and X == "D" and N >= 3:
        l = N - 1
        fin = m0 = finite_root_system("B", l)
        family, ambient, h, hd = "Dl+1", ("D", N) if N >= 4 else ("A", 3), l + 1, 2 * l
        table = {0: _odd(l), 1: (l,)}
    elif r == 2 and X == "E" and N == 6:
        fin = m0 = finite_root_system("F", 4)
        family, ambient, h, hd = "E6", ("E", 6), 9, 12
        table = {0: (1, 5, 7, 11), 1: (4, 8)}
    elif r == 3 and X == "D" and N == 4:
        fin = m0 = finite_root_system("G", 2)
        family, ambient, h, hd = "D4", ("D", 4), 4, 6
        table = {0: (1, 5), 1: (3,), 2: (3,)}
    else:
        raise CatalogError(f"unsupported algebra {label}")
    if fin.rank > MAX_RANK:
        raise CatalogError(f"rank {fin.rank} exceeds catalog limit {MAX_RANK}")

    if family == "A2l":
        alpha0 = Monomial(tuple(-x // 2 for x in fin.theta_l), 1)
        # simple coroots 2*alpha_i/|alpha_i|^2 span M
        basis = tuple(
            tuple(4 // fin.gram[i][i] if j == i else 0 for j in range(fin.rank)) for i in range(fin.rank)
        )
    else:
        theta = fin.theta_l if r == 1 else fin.theta_s
        alpha0 = Monomial(tuple(-x for x in theta), 2)
        basis = fin.simple_roots
    g = AffineAlgebra(label, family, ambient, r, fin, m0, h, hd, table, alpha0, basis)
    _validate(g)
    return g


def _validate(g: AffineAlgebra) -> None:
    if sum(g.delta_coords) != g.h:
        raise AssertionError(f"{g.label}: marks sum {sum(g.delta_coords)} != h={g.h}")
    if g.rho_level() != g.h_dual:
        raise AssertionError(f"{g.label}: rho level {g.rho_level()} != h_dual={g.h_dual}")
    if g.twisted and not g.is_a2l and g.short_simple_count * (g.r - 1) != g.N - g.l:
        raise AssertionError(f"{g.label}: orbit count relation fails")
    for n in range(1, 2 * g.r + 1):
        if len(g.exponents(n)) != imaginary_mult(g, n):
            raise AssertionError(f"{g.label}: |E_{n}| != mult({n} delta)")


def recomputed_exponents(g: AffineAlgebra) -> dict[int, tuple[int, ...]]:
    """Exponent table rebuilt from finite t-analogs of the fixed-point subalgebra.

    ``E_0`` comes from the highest root of ``m0`` (its adjoint module), the
    other residues from the highest short root, doubled for ``A_2l^(2)``.
    """
    m0 = g.m0
    out = {0: generalized_exponents(m0, m0.theta_l)}
    if g.r > 1:
        lam = tuple(2 * x for x in m0.theta_s) if g.is_a2l else m0.theta_s
        e1 = generalized_exponents(m0, lam)
        for n in range(1, g.r):
            out[n] = e1
    return out


def ambient_exponents(g: AffineAlgebra) -> tuple[int, ...]:
    """Exponents of the simply-laced ambient ``X_N``, from its root heights."""
    return height_stats(g.ambient_system()).exponents()
