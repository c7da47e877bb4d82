"""Free graded-commutative algebra over Q.

Monomials are words in graded generators, kept in a fixed global order
(generator degree, then name).  Odd-degree generators anticommute and square
to zero; even-degree generators commute.  All coefficients are exact
`fractions.Fraction` values; no floating point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

Q = Fraction
ZERO = Q(0)
ONE = Q(1)


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    """A free generator with a positive degree >= 2 (1-connectedness)."""

    name: str
    degree: int

    def __post_init__(self) -> None:
        if not self.name or not all(c.isalnum() or c == "_" for c in self.name):
            raise AlgebraError(f"bad generator name {self.name!r}")
        if self.degree < 2:
            raise AlgebraError(f"generator {self.name} has degree {self.degree} < 2")

    @property
    def is_odd(self) -> bool:
        return self.degree % 2 == 1

    @property
    def sort_key(self) -> tuple[int, str]:
        return (self.degree, self.name)

    def __repr__(self) -> str:
        return f"{self.name}[{self.degree}]"


@dataclass(frozen=True)
class Monomial:
    """Canonical word: factors sorted in global order, odd exponents == 1."""

    factors: tuple[tuple[Generator, int], ...]
    degree: int = field(init=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "degree", sum(g.degree * e for g, e in self.factors)
        )

    @property
    def is_unit(self) -> bool:
        return not self.factors

    def exponent(self, gen: Generator) -> int:
        for g, e in self.factors:
            if g == gen:
                return e
        return 0

    def linear_generator(self) -> Generator | None:
        """The generator g if this monomial is the word g itself, else None."""
        if len(self.factors) == 1 and self.factors[0][1] == 1:
            return self.factors[0][0]
        return None

    @property
    def word_length(self) -> int:
        return sum(e for _, e in self.factors)

    def sort_key(self):
        # Graded, then lexicographic with higher powers of earlier generators
        # first; missing generators compare as exponent 0.
        return (self.degree, tuple((g.sort_key, -e) for g, e in self.factors))

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(
            g.name if e == 1 else f"{g.name}^{e}" for g, e in self.factors
        )

    def __repr__(self) -> str:
        return f"Monomial({self})"


UNIT = Monomial(())


def canonicalize(
    raw: Iterable[tuple[Generator, int]]
) -> tuple[int, Monomial] | None:
    """Sort a raw factor list into canonical order with its Koszul sign.

    Returns (sign, monomial), or None when the word is zero because an
    odd-degree generator acquires exponent >= 2.  The sign is (-1)^t where t
    counts transpositions of odd-degree factors needed to sort the word.
    """
    items = list(raw)
    for g, e in items:
        if e < 1:
            raise AlgebraError(f"exponent {e} < 1 for generator {g.name}")
    # Koszul sign: parity of inversions in the subsequence of odd factors
    # (each odd factor is a single odd element; exponents e >= 2 on an odd
    # generator die below anyway).
    odd_keys = []
    for g, e in items:
        if g.is_odd:
            odd_keys.extend([g.sort_key] * e)
    inversions = 0
    for i in range(len(odd_keys)):
        for j in range(i + 1, len(odd_keys)):
            if odd_keys[i] > odd_keys[j]:
                inversions += 1
    sign = -1 if inversions % 2 else 1
    items.sort(key=lambda fe: fe[0].sort_key)
    merged: list[tuple[Generator, int]] = []
    for g, e in items:
        if merged and merged[-1][0] == g:
            merged[-1] = (g, merged[-1][1] + e)
        else:
            merged.append((g, e))
    for g, e in merged:
        if g.is_odd and e >= 2:
            return None
    return sign, Monomial(tuple(merged))


class Polynomial:
    """Finite Q-linear combination of canonical monomials (immutable)."""

    __slots__ = ("_terms",)

    def __init__(self, terms: dict[Monomial, Fraction] | None = None):
        self._terms: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    self._terms[m] = Q(c)

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls()

    @classmethod
    def monomial(cls, m: Monomial, coeff=1) -> "Polynomial":
        return cls({m: Q(coeff)})

    @classmethod
    def generator(cls, g: Generator, coeff=1) -> "Polynomial":
        return cls({Monomial(((g, 1),)): Q(coeff)})

    @classmethod
    def unit(cls, coeff=1) -> "Polynomial":
        return cls({UNIT: Q(coeff)})

    @classmethod
    def from_raw_terms(
        cls, raw: Iterable[tuple[Fraction, Iterable[tuple[Generator, int]]]]
    ) -> tuple["Polynomial", list[Monomial]]:
        """Canonicalize raw (coeff, factor-list) terms.

        Returns the polynomial together with the list of raw words that
        normalized to zero (odd generator powers), so callers can report them.
        """
        acc: dict[Monomial, Fraction] = {}
        vanished: list[Monomial] = []
        for coeff, factors in raw:
            factors = tuple(factors)
            canon = canonicalize(factors)
            if canon is None:
                # keep a displayable record of the dead word
                merged: dict[Generator, int] = {}
                for g, e in factors:
                    merged[g] = merged.get(g, 0) + e
                dead = tuple(sorted(merged.items(), key=lambda fe: fe[0].sort_key))
                vanished.append(Monomial(dead))
                continue
            sign, mono = canon
            c = acc.get(mono, ZERO) + sign * Q(coeff)
            if c:
                acc[mono] = c
            else:
                acc.pop(mono, None)
        return cls(acc), vanished

    def terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda mc: mc[0].sort_key())

    def monomials(self) -> list[Monomial]:
        return [m for m, _ in self.terms()]

    def coefficient(self, m: Monomial) -> Fraction:
        return self._terms.get(m, ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_homogeneous(self) -> bool:
        degs = {m.degree for m in self._terms}
        return len(degs) <= 1

    def homogeneous_degree(self) -> int | None:
        """Common degree of all terms; None for the zero polynomial."""
        degs = {m.degree for m in self._terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise AlgebraError(f"polynomial is not homogeneous: degrees {sorted(degs)}")
        return degs.pop()

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        acc = dict(self._terms)
        for m, c in other._terms.items():
            s = acc.get(m, ZERO) + c
            if s:
                acc[m] = s
            else:
                acc.pop(m, None)
        return Polynomial(acc)

    def __neg__(self) -> "Polynomial":
        return Polynomial({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, coeff) -> "Polynomial":
        c = Q(coeff)
        if not c:
            return Polynomial()
        return Polynomial({m: c * v for m, v in self._terms.items()})

    def __rmul__(self, coeff) -> "Polynomial":
        if isinstance(coeff, (int, Fraction)):
            return self.scale(coeff)
        return NotImplemented

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return multiply(self, other)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.terms():
            if m.is_unit:
                body = str(c)
            elif c == 1:
                body = str(m)
            elif c == -1:
                body = f"-{m}"
            else:
                body = f"{c}*{m}"
            if parts and not body.startswith("-"):
                parts.append(f" + {body}")
            elif parts:
                parts.append(f" - {body[1:]}")
            else:
                parts.append(body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self})"


def multiply(a: Polynomial, b: Polynomial) -> Polynomial:
    """Graded-commutative product (bilinear, Koszul signs)."""
    acc: dict[Monomial, Fraction] = {}
    for ma, ca in a._terms.items():
        for mb, cb in b._terms.items():
            canon = canonicalize(ma.factors + mb.factors)
            if canon is None:
                continue
            sign, mono = canon
            c = acc.get(mono, ZERO) + sign * ca * cb
            if c:
                acc[mono] = c
            else:
                acc.pop(mono, None)
    return Polynomial(acc)


def power(p: Polynomial, n: int) -> Polynomial:
    if n < 0:
        raise AlgebraError("negative power")
    result = Polynomial.unit()
    for _ in range(n):
        result = multiply(result, p)
    return result


def _sorted_gens(generators: Iterable[Generator]) -> tuple[Generator, ...]:
    return tuple(sorted(generators, key=lambda g: g.sort_key))


@lru_cache(maxsize=64)
def _reach_table(degs: tuple[int, ...], dmax: int) -> tuple[bytes, ...]:
    """reach[i][m] == 1 iff degree m is a sum over generators i.. (odd <= 1)."""
    n = len(degs)
    reach = [bytearray(dmax + 1) for _ in range(n + 1)]
    reach[n][0] = 1
    for i in range(n - 1, -1, -1):
        d = degs[i]
        prev = reach[i + 1]
        cur = reach[i]
        if d % 2:
            for m in range(dmax + 1):
                cur[m] = prev[m] or (m >= d and prev[m - d])
        else:
            for m in range(dmax + 1):
                v = prev[m]
                k = m - d
                while not v and k >= 0:
                    v = prev[k]
                    k -= d
                cur[m] = v
    return tuple(bytes(r) for r in reach)


def iter_basis(
    generators: Sequence[Generator], degree: int
) -> Iterator[Monomial]:
    """All canonical monomials of the given degree, in basis order.

    Order is graded-lex: higher powers of earlier (lower-degree) generators
    come first.  basis(gens, 0) yields only the unit.
    """
    if degree < 0:
        raise AlgebraError("negative degree")
    gens = _sorted_gens(generators)
    degs = tuple(g.degree for g in gens)
    reach = _reach_table(degs, degree)
    n = len(gens)
    stack: list[tuple[Generator, int]] = []

    def rec(i: int, rem: int) -> Iterator[Monomial]:
        if rem == 0:
            yield Monomial(tuple(stack))
            return
        if i == n or not reach[i][rem]:
            return
        d = degs[i]
        if d % 2:
            if d <= rem and reach[i + 1][rem - d]:
                stack.append((gens[i], 1))
                yield from rec(i + 1, rem - d)
                stack.pop()
            yield from rec(i + 1, rem)
        else:
            for e in range(rem // d, 0, -1):
                if reach[i + 1][rem - e * d]:
                    stack.append((gens[i], e))
                    yield from rec(i + 1, rem - e * d)
                    stack.pop()
            if reach[i + 1][rem]:
                yield from rec(i + 1, rem)

    yield from rec(0, degree)


@lru_cache(maxsize=256)
def _basis_cached(gens: tuple[Generator, ...], degree: int) -> tuple[Monomial, ...]:
    return tuple(iter_basis(gens, degree))


def basis(generators: Sequence[Generator], degree: int) -> tuple[Monomial, ...]:
    """Ordered monomial basis of the degree-`degree` graded piece."""
    return _basis_cached(_sorted_gens(generators), degree)


def coordinates(
    generators: Sequence[Generator], p: Polynomial, degree: int
) -> list[Fraction]:
    """Coordinate vector of a homogeneous polynomial over basis(degree)."""
    if p and p.homogeneous_degree() != degree:
        raise AlgebraError(
            f"polynomial has degree {p.homogeneous_degree()}, expected {degree}"
        )
    b = basis(generators, degree)
    index = {m: i for i, m in enumerate(b)}
    vec = [ZERO] * len(b)
    for m, c in p._terms.items():
        try:
            vec[index[m]] = c
        except KeyError:
            raise AlgebraError(f"monomial {m} not in the degree-{degree} basis")
    return vec


def from_coordinates(
    generators: Sequence[Generator], vec: Sequence[Fraction], degree: int
) -> Polynomial:
    b = basis(generators, degree)
    if len(vec) != len(b):
        raise AlgebraError(f"vector length {len(vec)} != basis size {len(b)}")
    return Polynomial({m: Q(c) for m, c in zip(b, vec) if c})
