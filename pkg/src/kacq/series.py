"""Truncated Laurent series in a finite lattice and a half-integral q-grade.

A monomial is ``e^v q^(d2/2)``: ``v`` an integer vector (doubled simple-root
coordinates of the finite root system, so half-weights stay integral) and
``d2`` the q-degree in half units.  Coefficients are integer polynomials in
``t`` and ``s``.  All arithmetic is exact.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from typing import NamedTuple

__all__ = [
    "CoeffPoly",
    "DivergentSeriesError",
    "Monomial",
    "NotAQSeriesError",
    "Series",
    "SpecMismatchError",
    "TruncationSpec",
    "add",
    "ct",
    "inv_one_minus",
    "mul",
    "poch",
    "poch_inv",
    "rescale_q",
    "substitute",
]


class SpecMismatchError(ValueError):
    """Operands were truncated differently."""


class DivergentSeriesError(ValueError):
    """A geometric series or q-Pochhammer product does not converge in the truncation."""


class NotAQSeriesError(ValueError):
    """A pure q,t,s series was required but a finite part is nonzero."""


class CoeffPoly(Mapping):
    """Integer polynomial in ``t`` and ``s``, keyed by ``(t_exp, s_exp)``."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], int] | Iterable | int | None = None):
        if terms is None:
            d = {}
        elif isinstance(terms, int):
            d = {(0, 0): terms} if terms else {}
        else:
            items = terms.items() if isinstance(terms, Mapping) else terms
            d = {}
            for k, c in items:
                k = (int(k[0]), int(k[1]))
                if k[0] < 0 or k[1] < 0:
                    raise ValueError(f"negative exponent {k}")
                d[k] = d.get(k, 0) + int(c)
            d = {k: c for k, c in d.items() if c}
        self._terms = d
        self._hash = None

    @classmethod
    def _raw(cls, d: dict) -> CoeffPoly:
        p = cls.__new__(cls)
        p._terms = d
        p._hash = None
        return p

    @classmethod
    def monomial(cls, t: int = 0, s: int = 0, c: int = 1) -> CoeffPoly:
        return cls({(t, s): c})

    @classmethod
    def from_t_list(cls, coeffs: Iterable[int]) -> CoeffPoly:
        """Polynomial in ``t`` from its coefficient list, constant term first."""
        return cls((((i, 0), c) for i, c in enumerate(coeffs)))

    def __getitem__(self, key):
        return self._terms.get(tuple(key), 0)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self._terms))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = CoeffPoly(other)
        if not isinstance(other, CoeffPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other) -> CoeffPoly:
        if isinstance(other, int):
            other = CoeffPoly(other)
        d = dict(self._terms)
        for k, c in other._terms.items():
            v = d.get(k, 0) + c
            if v:
                d[k] = v
            else:
                d.pop(k, None)
        return CoeffPoly._raw(d)

    __radd__ = __add__

    def __neg__(self) -> CoeffPoly:
        return CoeffPoly._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> CoeffPoly:
        if isinstance(other, int):
            other = CoeffPoly(other)
        return self + (-other)

    def __rsub__(self, other) -> CoeffPoly:
        return CoeffPoly(other) - self

    def __mul__(self, other) -> CoeffPoly:
        if isinstance(other, int):
            if not other:
                return CoeffPoly()
            return CoeffPoly._raw({k: c * other for k, c in self._terms.items()})
        d: dict = {}
        for (a, b), c in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                k = (a + a2, b + b2)
                d[k] = d.get(k, 0) + c * c2
        return CoeffPoly._raw({k: c for k, c in d.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> CoeffPoly:
        out = CoeffPoly(1)
        for _ in range(n):
            out = out * self
        return out

    def t_degree(self) -> int:
        return max((a for a, _ in self._terms), default=-1)

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self._terms.values())

    def collapse_s(self) -> CoeffPoly:
        """Set ``s = t``."""
        d: dict = {}
        for (a, b), c in self._terms.items():
            d[(a + b, 0)] = d.get((a + b, 0), 0) + c
        return CoeffPoly(d)

    def at(self, t: int = 1, s: int = 1) -> int:
        return sum(c * t**a * s**b for (a, b), c in self._terms.items())

    def to_json(self) -> list:
        return [[a, b, str(self._terms[(a, b)])] for a, b in sorted(self._terms)]

    @classmethod
    def from_json(cls, data: list) -> CoeffPoly:
        return cls((((a, b), int(c)) for a, b, c in data))

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for a, b in sorted(self._terms):
            c = self._terms[(a, b)]
            var = "*".join(
                x for x in (
                    f"t^{a}" if a > 1 else ("t" if a == 1 else ""),
                    f"s^{b}" if b > 1 else ("s" if b == 1 else ""),
                ) if x
            )
            if not var:
                parts.append(str(c))
            elif c == 1:
                parts.append(var)
            elif c == -1:
                parts.append("-" + var)
            else:
                parts.append(f"{c}*{var}")
        return " + ".join(parts).replace("+ -", "- ")


ONE = CoeffPoly(1)


class Monomial(NamedTuple):
    """``e^finite q^(d2/2)``."""

    finite: tuple[int, ...]
    d2: int

    def __mul__(self, other: Monomial) -> Monomial:  # type: ignore[override]
        return Monomial(tuple(a + b for a, b in zip(self.finite, other.finite)), self.d2 + other.d2)

    def power(self, k: int) -> Monomial:
        return Monomial(tuple(k * a for a in self.finite), k * self.d2)

    def is_zero(self) -> bool:
        return self.d2 == 0 and not any(self.finite)


@dataclass(frozen=True)
class TruncationSpec:
    """Keep monomials with ``d2 <= max_d2`` and max-norm of ``finite`` at most ``box``."""

    rank: int
    max_d2: int
    box: int

    def __post_init__(self):
        if self.max_d2 < 0 or self.box < 0 or self.rank < 0:
            raise ValueError(f"invalid truncation {self}")

    @classmethod
    def q_order(cls, rank: int, max_q: int, box: int = 0) -> TruncationSpec:
        return cls(rank, 2 * max_q, box)

    def keeps(self, finite: tuple[int, ...], d2: int) -> bool:
        return d2 <= self.max_d2 and all(-self.box <= x <= self.box for x in finite)

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def mono(self, d2: int = 0, finite: Iterable[int] | None = None) -> Monomial:
        return Monomial(tuple(finite) if finite is not None else self.zero(), d2)


class Series:
    """Immutable truncated series ``sum c_m * m`` over monomials ``m``."""

    __slots__ = ("spec", "_terms")

    def __init__(self, spec: TruncationSpec, terms: Mapping | Iterable = ()):
        self.spec = spec
        items = terms.items() if isinstance(terms, Mapping) else terms
        d: dict = {}
        for m, c in items:
            m = Monomial(tuple(m[0]), int(m[1]))
            if len(m.finite) != spec.rank:
                raise ValueError(f"monomial {m} has wrong rank for {spec}")
            if not spec.keeps(m.finite, m.d2):
                continue
            c = c if isinstance(c, CoeffPoly) else CoeffPoly(c)
            d[m] = d[m] + c if m in d else c
        self._terms = {m: c for m, c in d.items() if c}

    @classmethod
    def _raw(cls, spec: TruncationSpec, d: dict) -> Series:
        s = cls.__new__(cls)
        s.spec = spec
        s._terms = d
        return s

    @classmethod
    def one(cls, spec: TruncationSpec) -> Series:
        return cls(spec, {spec.mono(): ONE})

    @classmethod
    def monomial(cls, spec: TruncationSpec, m: Monomial, c: CoeffPoly | int = 1) -> Series:
        return cls(spec, {m: c})

    @classmethod
    def from_q_coefficients(cls, spec: TruncationSpec, coeffs: Mapping[int, CoeffPoly | int]) -> Series:
        """Pure series from ``{d2: coefficient}``."""
        return cls(spec, {spec.mono(d2): c for d2, c in coeffs.items()})

    # mapping-like access -------------------------------------------------
    def __getitem__(self, m) -> CoeffPoly:
        return self._terms.get(Monomial(tuple(m[0]), m[1]), CoeffPoly())

    def coefficient(self, finite: Iterable[int] | None = None, d2: int = 0) -> CoeffPoly:
        return self[(tuple(finite) if finite is not None else self.spec.zero(), d2)]

    def items(self) -> list[tuple[Monomial, CoeffPoly]]:
        """Terms in canonical order: by ``d2``, then the finite vector."""
        return sorted(self._terms.items(), key=lambda mc: (mc[0].d2, mc[0].finite))

    def monomials(self) -> list[Monomial]:
        return [m for m, _ in self.items()]

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return self.spec == other.spec and self._terms == other._terms

    def __hash__(self):
        return hash((self.spec, frozenset(self._terms.items())))

    def is_q_series(self) -> bool:
        return all(not any(m.finite) for m in self._terms)

    def q_coefficients(self) -> dict[int, CoeffPoly]:
        """``{d2: coefficient}`` of a pure q,t,s series."""
        if not self.is_q_series():
            raise NotAQSeriesError("series has nonzero finite parts")
        return {m.d2: c for m, c in self.items()}

    def q_list(self, max_q: int | None = None) -> list[CoeffPoly]:
        """Coefficients of ``q^0, q^1, ...`` for a series with integral q-degrees."""
        qc = self.q_coefficients()
        if any(d % 2 for d in qc):
            raise ValueError("series has half-integral q-degrees")
        top = self.spec.max_d2 // 2 if max_q is None else max_q
        return [qc.get(2 * k, CoeffPoly()) for k in range(top + 1)]

    # arithmetic ----------------------------------------------------------
    def _check(self, other: Series):
        if self.spec != other.spec:
            raise SpecMismatchError(f"{self.spec} != {other.spec}")

    def __add__(self, other: Series) -> Series:
        self._check(other)
        d = dict(self._terms)
        for m, c in other._terms.items():
            v = d[m] + c if m in d else c
            if v:
                d[m] = v
            else:
                d.pop(m, None)
        return Series._raw(self.spec, d)

    def __neg__(self) -> Series:
        return Series._raw(self.spec, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Series) -> Series:
        return self + (-other)

    def scale(self, c: CoeffPoly | int) -> Series:
        c = c if isinstance(c, CoeffPoly) else CoeffPoly(c)
        return Series._raw(self.spec, {m: v for m, v in ((m, x * c) for m, x in self._terms.items()) if v})

    def __mul__(self, other) -> Series:
        if isinstance(other, (int, CoeffPoly)):
            return self.scale(other)
        self._check(other)
        spec = self.spec
        box, top = spec.box, spec.max_d2
        d: dict = {}
        b_items = sorted(other._terms.items(), key=lambda mc: mc[0].d2)
        for (fa, da), ca in self._terms.items():
            room = top - da
            for (fb, db), cb in b_items:
                if db > room:
                    break
                f = tuple(x + y for x, y in zip(fa, fb))
                if any(x > box or x < -box for x in f):
                    continue
                m = Monomial(f, da + db)
                p = ca * cb
                if m in d:
                    d[m] = d[m] + p
                else:
                    d[m] = p
        return Series._raw(spec, {m: c for m, c in d.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Series:
        out = Series.one(self.spec)
        for _ in range(n):
            out = out * self
        return out

    def div_one_minus(self, m: Monomial, c: CoeffPoly | int = 1) -> Series:
        """``self / (1 - c*m)`` by the recurrence ``y[x] = self[x] + c*y[x - m]``."""
        c = c if isinstance(c, CoeffPoly) else CoeffPoly(c)
        _check_geometric(m, self.spec)
        spec = self.spec
        out = dict(self._terms)
        # ascending along m: every x - m precedes x
        key = _direction_key(m)
        for x in sorted(_closure(out, m, spec), key=key):
            prev = Monomial(tuple(a - b for a, b in zip(x.finite, m.finite)), x.d2 - m.d2)
            if prev in out:
                v = out.get(x, CoeffPoly()) + out[prev] * c
                if v:
                    out[x] = v
                else:
                    out.pop(x, None)
        return Series._raw(spec, out)

    def ct(self) -> Series:
        return ct(self)

    # serialization -------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "rank": self.spec.rank,
            "maxD2": self.spec.max_d2,
            "box": self.spec.box,
            "terms": [
                {"finite": list(m.finite), "d2": m.d2, "coeff": c.to_json()} for m, c in self.items()
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, data: dict) -> Series:
        spec = TruncationSpec(data["rank"], data["maxD2"], data["box"])
        return cls(
            spec,
            {Monomial(tuple(t["finite"]), t["d2"]): CoeffPoly.from_json(t["coeff"]) for t in data["terms"]},
        )

    def __repr__(self) -> str:
        if not self._terms:
            return "Series(0)"
        parts = []
        for m, c in self.items()[:12]:
            mono = []
            if any(m.finite):
                mono.append(f"e^{list(m.finite)}")
            if m.d2:
                mono.append(f"q^{m.d2 // 2}" if m.d2 % 2 == 0 else f"q^({m.d2}/2)")
            parts.append(f"({c})" + ("*" + "*".join(mono) if mono else ""))
        more = " + ..." if len(self._terms) > 12 else ""
        return "Series(" + " + ".join(parts) + more + ")"


def _direction_key(m: Monomial):
    w = list(m.finite) + [m.d2]
    return lambda x: sum(a * b for a, b in zip(list(x.finite) + [x.d2], w))


def _check_geometric(m: Monomial, spec: TruncationSpec):
    if m.is_zero():
        raise DivergentSeriesError("geometric series in the monomial 1 diverges")
    if m.d2 < 0:
        raise DivergentSeriesError(f"monomial {m} has negative q-degree")
    if m.d2 == 0 and not all(x <= 0 for x in m.finite):
        raise DivergentSeriesError(f"degree-zero monomial {m} is not in the negative cone")
    if len(m.finite) != spec.rank:
        raise ValueError("rank mismatch")


def _closure(terms: dict, m: Monomial, spec: TruncationSpec) -> set:
    """All monomials ``x + k*m`` (k >= 0) inside the truncation."""
    seen = set()
    for x in terms:
        while x not in seen and spec.keeps(x.finite, x.d2):
            seen.add(x)
            x = x * m
    return seen


def add(a: Series, b: Series) -> Series:
    return a + b


def mul(a: Series, b: Series) -> Series:
    return a * b


def inv_one_minus(m: Monomial, c: CoeffPoly | int, spec: TruncationSpec) -> Series:
    """Truncated ``sum_k c^k m^k``."""
    _check_geometric(m, spec)
    c = c if isinstance(c, CoeffPoly) else CoeffPoly(c)
    out = {}
    x, ck = spec.mono(), ONE
    while spec.keeps(x.finite, x.d2):
        out[x] = ck
        x, ck = x * m, ck * c
    return Series(spec, out)


def _check_poch(x: Monomial):
    if x.d2 <= 0:
        raise DivergentSeriesError(f"q-Pochhammer base {x} must have positive q-degree")


def poch(a: Monomial, x: Monomial, spec: TruncationSpec, c: CoeffPoly | int = 1) -> Series:
    """Truncated ``(c*a; x)_inf = prod_{n >= 0} (1 - c*a*x^n)``."""
    _check_poch(x)
    c = c if isinstance(c, CoeffPoly) else CoeffPoly(c)
    out = Series.one(spec)
    m = a
    while m.d2 <= spec.max_d2:
        if m.is_zero() and c == ONE:
            return Series(spec)
        out = out * Series(spec, {spec.mono(): ONE, m: -c})
        m = m * x
    return out


def poch_inv(a: Monomial, x: Monomial, spec: TruncationSpec, c: CoeffPoly | int = 1) -> Series:
    """Truncated ``1 / (c*a; x)_inf``."""
    _check_poch(x)
    out = Series.one(spec)
    m = a
    while m.d2 <= spec.max_d2:
        out = out.div_one_minus(m, c)
        m = m * x
    return out


def ct(x: Series) -> Series:
    """Constant term: the terms with zero finite part."""
    return Series._raw(x.spec, {m: c for m, c in x._terms.items() if not any(m.finite)})


def substitute(x: Series, t_half_q: int, s_half_q: int = 0, *, allow_finite: bool = False) -> Series:
    """Map ``t -> q^(t_half_q/2)`` and ``s -> q^(s_half_q/2)``.

    ``allow_finite`` lifts the pure-q requirement; the finite parts are then
    carried along unchanged.
    """
    if not allow_finite and not x.is_q_series():
        raise NotAQSeriesError("substitute needs a pure q,t,s series")
    if t_half_q < 0 or s_half_q < 0:
        raise ValueError("substitution exponents must be nonnegative")
    spec = x.spec
    d: dict = {}
    for m, c in x._terms.items():
        for (a, b), v in c._terms.items():
            d2 = m.d2 + a * t_half_q + b * s_half_q
            if d2 > spec.max_d2:
                continue
            key = Monomial(m.finite, d2)
            d[key] = d.get(key, 0) + v
    return Series(spec, {m: CoeffPoly(v) for m, v in d.items()})


def rescale_q(x: Series, factor: int, spec: TruncationSpec | None = None) -> Series:
    """Replace ``q`` by ``q^factor``; terms pushed past the truncation are dropped."""
    if factor <= 0:
        raise ValueError("factor must be positive")
    if not x.is_q_series():
        raise NotAQSeriesError("rescale_q needs a pure q,t,s series")
    spec = spec or x.spec
    return Series(spec, {Monomial(spec.zero(), m.d2 * factor): c for m, c in x._terms.items()})
