"""Minimal Sullivan algebras (ΛV, d) and cochain morphisms between them.

A model is a finite list of generators of degree >= 2 together with a
degree +1 differential sending each generator to a decomposable polynomial.
Models are immutable; equality and hashing are structural (generators plus
differential), ignoring the label, so equal truncations share caches.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .algebra import (
    Generator,
    Monomial,
    Polynomial,
    Q,
    basis,
    coordinates,
    iter_basis,
    multiply,
    power,
)


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    label: str
    checks: tuple[CheckResult, ...]
    warnings: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def __str__(self) -> str:
        lines = [f"validation of {self.label}: {'PASS' if self.ok else 'FAIL'}"]
        for c in self.checks:
            status = "ok" if c.ok else "FAIL"
            lines.append(f"  [{status}] {c.name}" + (f": {c.detail}" if c.detail else ""))
        for w in self.warnings:
            lines.append(f"  [warn] {w}")
        return "\n".join(lines)


class SullivanModel:
    """The pair (ΛV, d): free graded-commutative algebra with differential."""

    __slots__ = ("generators", "label", "warnings", "_diff", "_by_name", "_key", "_hash")

    def __init__(
        self,
        generators: Iterable[Generator],
        differential: Mapping[str, Polynomial] | None = None,
        label: str = "model",
        warnings: Iterable[str] = (),
    ):
        gens = tuple(sorted(generators, key=lambda g: g.sort_key))
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise ModelError(f"duplicate generator names in {label}")
        diff = {}
        for name, p in (differential or {}).items():
            if name not in names:
                raise ModelError(f"differential given for unknown generator {name}")
            if p:
                diff[name] = p
        self.generators = gens
        self.label = label
        self.warnings = tuple(warnings)
        self._diff = diff
        self._by_name = {g.name: g for g in gens}
        self._key = (
            gens,
            tuple(
                (name, tuple((m, c) for m, c in diff[name].terms()))
                for name in sorted(diff)
            ),
        )
        self._hash = hash(self._key)

    # -- identity ------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, SullivanModel) and self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"SullivanModel({self.label}: {len(self.generators)} generators)"

    # -- accessors -----------------------------------------------------------

    def generator(self, name: str) -> Generator:
        try:
            return self._by_name[name]
        except KeyError:
            raise ModelError(f"unknown generator {name!r} in {self.label}")

    def differential(self, gen: Generator | str) -> Polynomial:
        name = gen if isinstance(gen, str) else gen.name
        self.generator(name)
        return self._diff.get(name, Polynomial.zero())

    @property
    def top_degree(self) -> int:
        return self.generators[-1].degree if self.generators else 0

    def degrees(self) -> list[int]:
        return [g.degree for g in self.generators]

    def gens_of_degree(self, d: int) -> tuple[Generator, ...]:
        return tuple(g for g in self.generators if g.degree == d)

    @property
    def is_diagonal(self) -> bool:
        degs = self.degrees()
        return len(degs) == len(set(degs))

    def basis(self, degree: int) -> tuple[Monomial, ...]:
        return basis(self.generators, degree)

    def iter_basis(self, degree: int):
        return iter_basis(self.generators, degree)

    def coordinates(self, p: Polynomial, degree: int):
        return coordinates(self.generators, p, degree)

    # -- the differential as a derivation ------------------------------------

    def d(self, p: Polynomial) -> Polynomial:
        """Leibniz extension: d(ab) = d(a) b + (-1)^|a| a d(b)."""
        if p and not p.is_homogeneous():
            raise ModelError("apply_differential needs a homogeneous polynomial")
        out = Polynomial.zero()
        for mono, coeff in p.terms():
            out = out + coeff * self._d_monomial(mono)
        return out

    def _d_monomial(self, mono: Monomial) -> Polynomial:
        out = Polynomial.zero()
        prefix_deg = 0
        for i, (g, e) in enumerate(mono.factors):
            dg = self._diff.get(g.name)
            if dg is not None:
                sign = -1 if prefix_deg % 2 else 1
                if g.is_odd:
                    rest = mono.factors[:i] + mono.factors[i + 1 :]
                    head = Q(sign)
                else:
                    rest = (
                        mono.factors[:i]
                        + ((g, e - 1),) * (e > 1)
                        + mono.factors[i + 1 :]
                    )
                    head = Q(sign * e)
                term = multiply(Polynomial.monomial(Monomial(rest), head), dg)
                out = out + term
            prefix_deg += g.degree * e
        return out

    # -- construction helpers --------------------------------------------------

    def truncate(self, n: int) -> "SullivanModel":
        """Sub-model ΛV^{<=n} with the restricted differential."""
        if n < 0:
            raise ModelError("truncation cutoff must be >= 0")
        kept = tuple(g for g in self.generators if g.degree <= n)
        if len(kept) == len(self.generators):
            return self
        kept_names = {g.name for g in kept}
        diff = {}
        for g in kept:
            dg = self._diff.get(g.name)
            if dg is None:
                continue
            for mono in dg.monomials():
                if any(f.name not in kept_names for f, _ in mono.factors):
                    raise ModelError(
                        f"differential of {g.name} leaves ΛV^(<={n}); parent is not minimal"
                    )
            diff[g.name] = dg
        return SullivanModel(kept, diff, label=f"{self.label}<={n}")

    def relabel(self, label: str) -> "SullivanModel":
        return SullivanModel(self.generators, self._diff, label=label, warnings=self.warnings)

    # -- validation -------------------------------------------------------------

    def validate(self) -> ValidationReport:
        checks: list[CheckResult] = []
        bad = [g for g in self.generators if g.degree < 2]
        checks.append(
            CheckResult(
                "1-connected (all generator degrees >= 2)",
                not bad,
                ", ".join(g.name for g in bad),
            )
        )
        deg_bad = []
        for g in self.generators:
            dg = self._diff.get(g.name)
            if dg and dg.homogeneous_degree() != g.degree + 1:
                deg_bad.append(f"d({g.name}) has degree {dg.homogeneous_degree()} != {g.degree + 1}")
        checks.append(CheckResult("differential raises degree by 1", not deg_bad, "; ".join(deg_bad)))
        indec = []
        for g in self.generators:
            dg = self._diff.get(g.name)
            if dg is None:
                continue
            for mono in dg.monomials():
                if mono.word_length < 2:
                    indec.append(f"d({g.name}) contains the indecomposable term {mono}")
        checks.append(CheckResult("minimality (differential decomposable)", not indec, "; ".join(indec)))
        dd_bad = []
        for g in self.generators:
            dg = self._diff.get(g.name)
            if dg and self.d(dg):
                dd_bad.append(f"d(d({g.name})) = {self.d(dg)}")
        checks.append(CheckResult("d ∘ d = 0 on generators", not dd_bad, "; ".join(dd_bad)))
        return ValidationReport(self.label, tuple(checks), self.warnings)


def apply_differential(m: SullivanModel, p: Polynomial) -> Polynomial:
    return m.d(p)


def truncate(m: SullivanModel, n: int) -> SullivanModel:
    return m.truncate(n)


def extend_tower(
    m: SullivanModel,
    closing_generator: str,
    new_degree: int,
    exponent: int,
    name: str | None = None,
    label: str | None = None,
) -> SullivanModel:
    """Add a closed generator x of degree d and the term x^k to d(closing_generator).

    Requires d * k == |closing_generator| + 1 so the new term is homogeneous.
    When d is odd and k >= 2 the term normalizes to zero; the model is built
    as the algebra dictates and the event is recorded as a warning.
    """
    z = m.generator(closing_generator)
    if new_degree * exponent != z.degree + 1:
        raise ModelError(
            f"extension degree mismatch: {new_degree} * {exponent} != |{z.name}| + 1 = {z.degree + 1}"
        )
    if name is None:
        name = f"x{new_degree}"
        if name in {g.name for g in m.generators}:
            name = f"x{new_degree}_2"
    if name in {g.name for g in m.generators}:
        raise ModelError(f"generator name {name} already used")
    new_gen = Generator(name, new_degree)
    raw = [(c, mono.factors) for mono, c in m.differential(z).terms()]
    raw.append((Q(1), ((new_gen, exponent),)))
    dz, vanished = Polynomial.from_raw_terms(raw)
    warnings = list(m.warnings)
    for mono in vanished:
        warnings.append(
            f"term {mono} in d({z.name}) normalized to zero (odd generator power)"
        )
    diff = {g.name: m.differential(g) for g in m.generators if m.differential(g)}
    diff[z.name] = dz
    return SullivanModel(
        m.generators + (new_gen,),
        diff,
        label=label or f"{m.label}-{name}-{exponent}",
        warnings=warnings,
    )


# --- cochain morphisms -------------------------------------------------------


class MorphismError(ValueError):
    pass


class CochainMorphism:
    """Algebra morphism determined by generator images, commuting with d.

    The defining identities (degree preservation and d-commutation on every
    generator) are verified at construction time, never assumed.
    """

    __slots__ = ("source", "target", "images")

    def __init__(
        self,
        source: SullivanModel,
        target: SullivanModel,
        images: Mapping[str, Polynomial],
    ):
        self.source = source
        self.target = target
        imgs = {}
        for g in source.generators:
            img = images.get(g.name, Polynomial.zero())
            if img and img.homogeneous_degree() != g.degree:
                raise MorphismError(
                    f"image of {g.name} has degree {img.homogeneous_degree()}, expected {g.degree}"
                )
            imgs[g.name] = img
        extra = set(images) - {g.name for g in source.generators}
        if extra:
            raise MorphismError(f"images given for unknown generators {sorted(extra)}")
        self.images = imgs
        for g in source.generators:
            lhs = target.d(imgs[g.name])
            rhs = self.apply(source.differential(g))
            if lhs != rhs:
                raise MorphismError(
                    f"not a cochain morphism: d(f({g.name})) != f(d({g.name})) "
                    f"({lhs} != {rhs})"
                )

    def apply(self, p: Polynomial) -> Polynomial:
        """Multiplicative extension to arbitrary polynomials."""
        out = Polynomial.zero()
        for mono, coeff in p.terms():
            term = Polynomial.unit(coeff)
            for g, e in mono.factors:
                img = self.images[g.name]
                term = multiply(term, img if e == 1 else power(img, e))
                if not term:
                    break
            out = out + term
        return out

    def restrict(self, n: int) -> "CochainMorphism":
        """Restriction ΛV^{<=n} -> ΛW^{<=n} (valid because images preserve degree)."""
        src = self.source.truncate(n)
        tgt = self.target.truncate(n)
        return CochainMorphism(
            src, tgt, {g.name: self.images[g.name] for g in src.generators}
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CochainMorphism)
            and self.source == other.source
            and self.target == other.target
            and self.images == other.images
        )

    def __repr__(self) -> str:
        return f"CochainMorphism({self.source.label} -> {self.target.label})"


def identity(m: SullivanModel) -> CochainMorphism:
    return CochainMorphism(m, m, {g.name: Polynomial.generator(g) for g in m.generators})


def compose(f: CochainMorphism, g: CochainMorphism) -> CochainMorphism:
    """f ∘ g; morphism invariants are re-verified by the constructor."""
    if g.target != f.source:
        raise MorphismError(
            f"cannot compose: target of {g!r} differs from source of {f!r}"
        )
    images = {name: f.apply(img) for name, img in g.images.items()}
    return CochainMorphism(g.source, f.target, images)
