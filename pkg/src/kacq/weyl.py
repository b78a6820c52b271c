"""Affine Weyl group ``W = W_fin x| t_M`` acting on level-graded weights."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .algebras import AffineAlgebra

__all__ = [
    "AffineWeight",
    "LevelMismatchError",
    "WeylElement",
    "apply",
    "enumerate_contributing",
    "lambda0",
    "pairing",
    "rho",
    "translate",
]


class LevelMismatchError(ValueError):
    pass


class AffineWeight(NamedTuple):
    """``finite + level*Lambda_0 + (d2/2)*delta``; finite part in doubled coordinates."""

    finite: tuple[int, ...]
    level: int
    d2: int

    def __add__(self, other: AffineWeight) -> AffineWeight:  # type: ignore[override]
        return AffineWeight(
            tuple(a + b for a, b in zip(self.finite, other.finite)), self.level + other.level, self.d2 + other.d2
        )

    def __sub__(self, other: AffineWeight) -> AffineWeight:
        return AffineWeight(
            tuple(a - b for a, b in zip(self.finite, other.finite)), self.level - other.level, self.d2 - other.d2
        )

    def shift_delta(self, d2: int) -> AffineWeight:
        return AffineWeight(self.finite, self.level, self.d2 + d2)


def lambda0(g: AffineAlgebra) -> AffineWeight:
    return AffineWeight((0,) * g.l, 1, 0)


def rho(g: AffineAlgebra, d2: int = 0) -> AffineWeight:
    """``rhobar + h_dual*Lambda_0``, with an optional delta component."""
    return AffineWeight(g.finite.rho, g.h_dual, d2)


def pairing(g: AffineAlgebra, a: AffineWeight, b: AffineWeight) -> Fraction:
    """Normalized invariant form: ``(v|v') + k*d' + k'*d`` (d in delta units)."""
    return g.finite.ip(a.finite, b.finite) + Fraction(a.level * b.d2 + b.level * a.d2, 2)


def _in_lattice(g: AffineAlgebra, gamma) -> bool:
    return all(x % b[i] == 0 for i, (x, b) in enumerate(zip(gamma, g.lattice_basis)))


def translate(g: AffineAlgebra, gamma, lam: AffineWeight) -> AffineWeight:
    """``t_gamma``: ``(v, k, d) -> (v + k*gamma, k, d - (v|gamma) - k|gamma|^2/2)``."""
    gamma = tuple(gamma)
    if not _in_lattice(g, gamma):
        raise ValueError(f"{gamma} is not in the translation lattice of {g.label}")
    v, k, d2 = lam
    ip4 = g.finite.ip4(v, gamma)
    n4 = g.finite.ip4(gamma, gamma)
    shift, rem = divmod(2 * ip4 + k * n4, 4)
    if rem:
        raise ValueError("translation leaves the half-integral delta grading")
    return AffineWeight(tuple(a + k * c for a, c in zip(v, gamma)), k, d2 - shift)


@dataclass(frozen=True, eq=False)
class WeylElement:
    """``t_gamma o wbar``; ``wbar`` an integer matrix on doubled coordinates."""

    g: AffineAlgebra
    finite_part: np.ndarray
    translation: tuple[int, ...]
    sign: int

    @classmethod
    def identity(cls, g: AffineAlgebra) -> WeylElement:
        return cls(g, np.eye(g.l, dtype=np.int64), (0,) * g.l, 1)

    @classmethod
    def translation_by(cls, g: AffineAlgebra, gamma) -> WeylElement:
        if not _in_lattice(g, gamma):
            raise ValueError(f"{gamma} is not in the translation lattice of {g.label}")
        return cls(g, np.eye(g.l, dtype=np.int64), tuple(gamma), 1)

    @classmethod
    def simple_reflection(cls, g: AffineAlgebra, i: int) -> WeylElement:
        if i > 0:
            return cls(g, g.finite.reflection_matrices[i - 1].copy(), (0,) * g.l, -1)
        # s_{beta + j delta} = t_{-j beta^vee} o s_beta
        beta, a0d = g.alpha0
        n4 = g.finite.ip4(beta, beta)
        mat = np.eye(g.l, dtype=object)
        for c in range(g.l):
            e = [0] * g.l
            e[c] = 1
            coef = Fraction(2 * g.finite.ip4(e, beta), n4)
            for r in range(g.l):
                mat[r, c] -= coef * beta[r]
        if any(Fraction(x).denominator != 1 for x in mat.flat):
            raise AssertionError("reflection matrix is not integral")
        gamma = tuple(int(Fraction(-a0d * 4 * b, n4)) for b in beta)
        return cls(g, mat.astype(np.int64), gamma, -1)

    def __matmul__(self, other: WeylElement) -> WeylElement:
        """Composition ``self o other``."""
        m = self.finite_part @ other.finite_part
        gamma = tuple(int(a) + int(b) for a, b in zip(self.translation, self.finite_part @ np.array(other.translation)))
        return WeylElement(self.g, m, gamma, self.sign * other.sign)

    def inverse(self) -> WeylElement:
        inv = np.rint(np.linalg.inv(self.finite_part.astype(float))).astype(np.int64)
        gamma = tuple(int(-x) for x in inv @ np.array(self.translation))
        return WeylElement(self.g, inv, gamma, self.sign)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, WeylElement)
            and np.array_equal(self.finite_part, other.finite_part)
            and self.translation == other.translation
        )

    def __hash__(self):
        return hash((self.finite_part.tobytes(), self.translation))

    def determinant(self) -> int:
        return int(round(np.linalg.det(self.finite_part.astype(float))))

    def __call__(self, lam: AffineWeight) -> AffineWeight:
        return apply(self, lam)


def apply(w: WeylElement, lam: AffineWeight) -> AffineWeight:
    """Finite part first, then the translation."""
    v = tuple(int(x) for x in w.finite_part @ np.array(lam.finite, dtype=np.int64))
    return translate(w.g, w.translation, AffineWeight(v, lam.level, lam.d2))


# enumeration -----------------------------------------------------------------


class Candidate(NamedTuple):
    finite_index: int  # index into g.finite.weyl_group()
    gamma: tuple[int, ...]
    defect: AffineWeight


def _radius_norm2(g: AffineAlgebra, v, level: int, budget: int) -> float:
    """Bound on ``|gamma|^2`` from ``level*|gamma|^2 - 2|v||gamma| <= budget``."""
    if budget < 0:
        return -1.0
    nv = math.sqrt(float(g.finite.norm(v)))
    x = (nv + math.sqrt(nv * nv + level * budget)) / level
    return x * x


def candidates(g: AffineAlgebra, lam_rho: AffineWeight, mu_rho: AffineWeight, lo_d2: int, hi_d2: int,
               radius_norm2: float | None = None) -> list[Candidate]:
    """All ``(wbar, gamma)`` with ``lo_d2 <= d2(t_gamma wbar lam_rho - mu_rho) <= hi_d2``.

    The lattice ball is taken with the quadratic growth bound, then doubled
    until the candidate set no longer changes.
    """
    if lam_rho.level != mu_rho.level:
        raise LevelMismatchError(f"levels {lam_rho.level} and {mu_rho.level} differ")
    K = lam_rho.level
    if K <= 0:
        raise ValueError("enumeration needs positive level")
    budget = lam_rho.d2 - mu_rho.d2 - lo_d2
    r2 = _radius_norm2(g, lam_rho.finite, K, budget) if radius_norm2 is None else radius_norm2
    found = _candidates_in_ball(g, lam_rho, mu_rho, lo_d2, hi_d2, r2)
    while True:
        r2 = 4 * max(r2, 1.0)
        again = _candidates_in_ball(g, lam_rho, mu_rho, lo_d2, hi_d2, r2)
        if len(again) == len(found):
            return found
        found = again


def _candidates_in_ball(g, lam_rho, mu_rho, lo_d2, hi_d2, r2) -> list[Candidate]:
    if r2 < 0:
        return []
    K = lam_rho.level
    group = g.finite.weyl_group()
    mats = np.stack([m for m, _ in group])
    wv = mats @ np.array(lam_rho.finite, dtype=np.int64)  # (nW, l)
    ball = g.lattice_ball(math.floor(r2 + 1e-9))
    gam = np.array(ball, dtype=np.int64).reshape(len(ball), g.l)
    gram = np.array(g.finite.gram, dtype=np.int64)
    ip4 = wv @ gram @ gam.T  # 4 (w v | gamma)
    n4 = np.einsum("ij,jk,ik->i", gam, gram, gam)
    tot = 2 * ip4 + K * n4[None, :]
    if np.any(tot % 4):
        raise AssertionError("non-integral delta grade in translation")
    d2 = lam_rho.d2 - tot // 4 - mu_rho.d2
    iw, ig = np.nonzero((d2 >= lo_d2) & (d2 <= hi_d2))
    mu = np.array(mu_rho.finite, dtype=np.int64)
    out = []
    for a, b in zip(iw.tolist(), ig.tolist()):
        fin = wv[a] + K * gam[b] - mu
        out.append(Candidate(a, tuple(int(x) for x in gam[b]),
                             AffineWeight(tuple(int(x) for x in fin), 0, int(d2[a, b]))))
    return out


def enumerate_contributing(g: AffineAlgebra, lam_rho: AffineWeight, mu_rho: AffineWeight,
                           max_d2: int) -> list[tuple[WeylElement, AffineWeight]]:
    """Weyl elements whose defect ``w(lam_rho) - mu_rho`` lies in the positive cone with ``d2 <= max_d2``."""
    group = g.finite.weyl_group()
    out = []
    for c in candidates(g, lam_rho, mu_rho, 0, max_d2):
        if g.affine_coords(c.defect.finite, c.defect.d2) is None:
            continue
        mat, sgn = group[c.finite_index]
        out.append((WeylElement(g, mat, c.gamma, sgn), c.defect))
    out.sort(key=lambda wd: (wd[1].d2, wd[1].finite))
    return out
