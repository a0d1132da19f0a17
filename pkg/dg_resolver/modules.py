"""
Free DG modules of finite rank over resolving algebras.

An element is a map basis symbol -> coefficient, read as
sum coefficient * symbol with coefficients on the left. The differential
is given on symbols and extended by d(a e) = da e + (-1)^|a| a de.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .dga import (
    Augmentation,
    DGAMorphism,
    ResolvingAlgebra,
    local_differential,
)
from .exceptions import (
    DomainMismatchError,
    InvalidElementError,
    NotAChainMapError,
    NotACocycleError,
    PreconditionError,
    UnsupportedModeError,
)
from .linalg import FiniteComplex, SparseRationalMatrix, cohomology
from .models import CohomologyMode, ValidationReport
from .polynomials import (
    Generator,
    GradedPolynomial,
    Monomial,
    apply_derivation,
    graded_partial,
    monomials_of_degree,
    substitute,
)

logger = logging.getLogger(__name__)

ModuleElement = Dict[str, GradedPolynomial]


def _accumulate(into: ModuleElement, symbol: str, coefficient: GradedPolynomial):
    total = into.get(symbol, GradedPolynomial.zero()) + coefficient
    if total:
        into[symbol] = total
    else:
        into.pop(symbol, None)


def combine(*elements: Mapping[str, GradedPolynomial]) -> ModuleElement:
    result: ModuleElement = {}
    for element in elements:
        for symbol, coefficient in element.items():
            _accumulate(result, symbol, coefficient)
    return result


def scale(
    coefficient: GradedPolynomial, element: Mapping[str, GradedPolynomial]
) -> ModuleElement:
    """coefficient * element, multiplying on the left."""
    result: ModuleElement = {}
    for symbol, value in element.items():
        _accumulate(result, symbol, coefficient * value)
    return result


def parity_parts(p: GradedPolynomial) -> Tuple[GradedPolynomial, GradedPolynomial]:
    return p.filter(lambda m: m.parity == 0), p.filter(lambda m: m.parity == 1)


def format_element(element: Mapping[str, GradedPolynomial]) -> str:
    if not element:
        return "0"
    parts = []
    for symbol in sorted(element):
        coefficient = element[symbol]
        if coefficient == 1:
            parts.append(symbol)
        elif len(coefficient) > 1:
            parts.append(f"({coefficient})*{symbol}")
        else:
            parts.append(f"{coefficient}*{symbol}")
    return " + ".join(parts)


@dataclass(frozen=True)
class BasisSymbol:
    name: str
    degree: int


class FreeDGModule:
    """
    Parameters:
        algebra (ResolvingAlgebra): The ring of coefficients.
        basis (Sequence[BasisSymbol | (name, degree)]): Basis symbols in order.
        differential (Mapping[str, Mapping[str, PolynomialLike]], optional):
            d on basis symbols; missing symbols have d = 0.
        name (str, optional): Display name.
    """

    def __init__(
        self,
        algebra: ResolvingAlgebra,
        basis: Sequence[Union[BasisSymbol, Tuple[str, int]]] = (),
        differential: Optional[Mapping[str, Mapping]] = None,
        name: str = "M",
    ):
        self.algebra = algebra
        self.name = name
        self.basis: Tuple[BasisSymbol, ...] = tuple(
            s if isinstance(s, BasisSymbol) else BasisSymbol(*s) for s in basis
        )
        self._degrees: Dict[str, int] = {}
        for symbol in self.basis:
            if symbol.name in self._degrees:
                raise InvalidElementError(
                    f"The basis symbol `{symbol.name}` appears twice "
                    f"in module `{name}`."
                )
            self._degrees[symbol.name] = symbol.degree
        self._differential: Dict[str, ModuleElement] = {}
        for symbol, value in (differential or {}).items():
            if symbol not in self._degrees:
                raise DomainMismatchError(
                    f"Module `{name}` assigns d to the unknown symbol `{symbol}`."
                )
            value = {
                s: GradedPolynomial.coerce(c)
                for s, c in value.items()
                if GradedPolynomial.coerce(c)
            }
            self.ensure_element(value)
            if value:
                self._differential[symbol] = value

    @property
    def symbols(self) -> List[str]:
        return [s.name for s in self.basis]

    def degree_of(self, symbol: str) -> int:
        return self._degrees[symbol]

    def symbols_of_degree(self, n: int) -> List[str]:
        return [s.name for s in self.basis if s.degree == n]

    @property
    def degrees(self) -> List[int]:
        return sorted({s.degree for s in self.basis})

    def __len__(self):
        return len(self.basis)

    def __repr__(self):
        symbols = ", ".join(self.symbols)
        return f"<{type(self).__name__} {self.name} with basis: {symbols}>"

    def ensure_element(self, element: Mapping[str, GradedPolynomial]) -> None:
        for symbol, coefficient in element.items():
            if symbol not in self._degrees:
                raise DomainMismatchError(
                    f"The symbol `{symbol}` is not in the basis "
                    f"of module `{self.name}`."
                )
            self.algebra.ensure_contains(coefficient, f"coefficient of `{symbol}`")

    def d_symbol(self, symbol: str) -> ModuleElement:
        return dict(self._differential.get(symbol, {}))

    def d(self, element: Mapping[str, GradedPolynomial]) -> ModuleElement:
        result: ModuleElement = {}
        for symbol, coefficient in element.items():
            _accumulate(result, symbol, self.algebra.d(coefficient))
            even, odd = parity_parts(coefficient)
            image = self._differential.get(symbol, {})
            for target, value in image.items():
                _accumulate(result, target, (even - odd) * value)
        return result

    def element_degrees(self, element: Mapping[str, GradedPolynomial]) -> set:
        return {
            m.degree + self._degrees[symbol]
            for symbol, coefficient in element.items()
            for m in coefficient.monomials()
        }

    def validate(self) -> ValidationReport:
        report = ValidationReport(self.name)
        for symbol in self.basis:
            image = self.d_symbol(symbol.name)
            degrees = self.element_degrees(image)
            if degrees - {symbol.degree + 1}:
                report.add(
                    symbol.name,
                    f"d({symbol.name}) must have degree {symbol.degree + 1}",
                    format_element(image),
                )
                continue
            residue = self.d(image)
            if residue:
                report.add(
                    symbol.name,
                    f"d^2({symbol.name}) is not zero",
                    format_element(residue),
                )
        return report

    def checked(self) -> "FreeDGModule":
        self.validate().raise_if_invalid(PreconditionError)
        return self


class ModuleMap:
    """A degree-0 map of free modules over one algebra, given on basis symbols."""

    def __init__(
        self,
        source: FreeDGModule,
        target: FreeDGModule,
        images: Optional[Mapping[str, Mapping]] = None,
        name: str = "phi",
    ):
        if source.algebra.generators != target.algebra.generators:
            raise DomainMismatchError(
                f"Module map `{name}` joins modules over different algebras."
            )
        self.source = source
        self.target = target
        self.name = name
        self.images: Dict[str, ModuleElement] = {}
        for symbol, image in (images or {}).items():
            if symbol not in source.symbols:
                raise DomainMismatchError(
                    f"Module map `{name}` assigns the unknown symbol `{symbol}`."
                )
            image = combine(
                {s: GradedPolynomial.coerce(c) for s, c in image.items()}
            )
            target.ensure_element(image)
            self.images[symbol] = image

    def apply(self, element: Mapping[str, GradedPolynomial]) -> ModuleElement:
        result: ModuleElement = {}
        for symbol, coefficient in element.items():
            for target, value in self.images.get(symbol, {}).items():
                _accumulate(result, target, coefficient * value)
        return result

    __call__ = apply

    def validate(self) -> ValidationReport:
        report = ValidationReport(self.name)
        for symbol in self.source.symbols:
            image = self.images.get(symbol, {})
            degrees = self.target.element_degrees(image)
            if degrees - {self.source.degree_of(symbol)}:
                report.add(symbol, "image has the wrong degree", format_element(image))
                continue
            residue = combine(
                self.target.d(image),
                scale(
                    GradedPolynomial.constant(-1),
                    self.apply(self.source.d_symbol(symbol)),
                ),
            )
            if residue:
                report.add(
                    symbol, "d(phi e) differs from phi(d e)", format_element(residue)
                )
        return report

    def is_chain_map(self) -> bool:
        return self.validate().ok


def shift_symbol(symbol: str) -> str:
    return f"{symbol}[1]"


def shift(module: FreeDGModule) -> FreeDGModule:
    """M[1]: degrees lowered by one, d(e[1]) = -sum (-1)^|c| c e_i[1]."""
    differential = {}
    for symbol in module.symbols:
        image = {}
        for target, coefficient in module.d_symbol(symbol).items():
            even, odd = parity_parts(coefficient)
            _accumulate(image, shift_symbol(target), odd - even)
        differential[shift_symbol(symbol)] = image
    return FreeDGModule(
        module.algebra,
        [(shift_symbol(s.name), s.degree - 1) for s in module.basis],
        differential,
        f"{module.name}[1]",
    ).checked()


def cone(phi: ModuleMap, name: Optional[str] = None) -> FreeDGModule:
    """C(phi) = N + M[1] with d(m[1]) = phi(m) + d_{M[1]}(m[1])."""
    report = phi.validate()
    if not report.ok:
        raise NotAChainMapError(
            f"Cannot build the cone of `{phi.name}`: "
            + "; ".join(f"{v.subject}: {v.message}" for v in report.violations)
        )
    source, target = phi.source, phi.target
    clashes = set(target.symbols) & {shift_symbol(s) for s in source.symbols}
    if clashes:
        raise DomainMismatchError(
            f"Cone symbols clash: `{', '.join(sorted(clashes))}`."
        )
    shifted = shift(source)
    differential = {s: target.d_symbol(s) for s in target.symbols}
    for symbol in source.symbols:
        differential[shift_symbol(symbol)] = combine(
            phi.images.get(symbol, {}), shifted.d_symbol(shift_symbol(symbol))
        )
    return FreeDGModule(
        target.algebra,
        list(target.basis) + list(shifted.basis),
        differential,
        name or f"C({phi.name})",
    ).checked()


def cone_inclusion(phi: ModuleMap, cone_module: FreeDGModule) -> ModuleMap:
    return ModuleMap(
        phi.target,
        cone_module,
        {s: {s: GradedPolynomial.one()} for s in phi.target.symbols},
        name="incl",
    )


def cone_projection(phi: ModuleMap, cone_module: FreeDGModule) -> ModuleMap:
    shifted = shift(phi.source)
    return ModuleMap(
        cone_module,
        shifted,
        {s: {s: GradedPolynomial.one()} for s in shifted.symbols},
        name="proj",
    )


def identity_map(module: FreeDGModule) -> ModuleMap:
    return ModuleMap(
        module, module, {s: {s: GradedPolynomial.one()} for s in module.symbols}, "id"
    )


def base_change(module: FreeDGModule, morphism: DGAMorphism) -> FreeDGModule:
    """M (x)_B A along f: B -> A, coefficients pushed through f."""
    if morphism.source.generators != module.algebra.generators:
        raise DomainMismatchError(
            f"`{morphism.name}` does not start at the algebra of `{module.name}`."
        )
    differential = {
        symbol: {t: morphism.apply(c) for t, c in module.d_symbol(symbol).items()}
        for symbol in module.symbols
    }
    return FreeDGModule(
        morphism.target,
        module.basis,
        differential,
        f"{module.name}(x){morphism.target.name}",
    )


@dataclass
class KaehlerModule:
    """Omega_{A/C} together with its universal derivation."""

    module: FreeDGModule
    symbols: Dict[Generator, str] = field(default_factory=dict)

    @property
    def algebra(self) -> ResolvingAlgebra:
        return self.module.algebra

    def D(self, a) -> ModuleElement:
        """D(a) = sum (right partial of a along x) * Dx."""
        a = GradedPolynomial.coerce(a)
        result: ModuleElement = {}
        for g, symbol in self.symbols.items():
            _accumulate(result, symbol, graded_partial(a, g, right=True))
        return result


def differential_symbol(generator: Generator) -> str:
    return f"D{generator.name}"


def _base_generators(algebra: ResolvingAlgebra, base) -> Tuple[Generator, ...]:
    if base is None:
        return ()
    generators = tuple(base.generators if isinstance(base, ResolvingAlgebra) else base)
    stray = [g.name for g in generators if g not in algebra]
    if stray:
        raise DomainMismatchError(
            f"The base is not a subalgebra of `{algebra.name}` by generators: "
            f"`{', '.join(stray)}` missing."
        )
    return generators


def kaehler(algebra: ResolvingAlgebra, base=None) -> KaehlerModule:
    """Omega_{A/C} with basis Dx for the generators x outside the base C."""
    base_gens = set(_base_generators(algebra, base))
    free = [g for g in algebra.generators if g not in base_gens]
    symbols = {g: differential_symbol(g) for g in free}
    kaehler_module = KaehlerModule(
        FreeDGModule(
            algebra,
            [(symbols[g], g.degree) for g in free],
            name=f"Omega_{algebra.name}",
        ),
        symbols,
    )
    differential = {symbols[g]: kaehler_module.D(algebra.d(g)) for g in free}
    kaehler_module.module = FreeDGModule(
        algebra,
        kaehler_module.module.basis,
        differential,
        kaehler_module.module.name,
    ).checked()
    return kaehler_module


def cotangent_complex(morphism: DGAMorphism) -> FreeDGModule:
    """L of f: B -> A, the cone of Omega_B (x)_B A -> Omega_A."""
    omega_source = base_change(kaehler(morphism.source).module, morphism)
    omega_target = kaehler(morphism.target)
    phi = ModuleMap(
        omega_source,
        omega_target.module,
        {
            differential_symbol(g): omega_target.D(morphism.images[g])
            for g in morphism.source.generators
        },
        name=morphism.name,
    )
    return cone(phi, name=f"L_{morphism.target.name}/{morphism.source.name}")


def fiber_at(module: FreeDGModule, augmentation: Augmentation) -> FiniteComplex:
    """M (x)_A k at a rational point, as a complex of Q-vector spaces."""
    if augmentation.algebra.generators != module.algebra.generators:
        raise DomainMismatchError(
            f"Augmentation `{augmentation.name}` is not on `{module.algebra.name}`."
        )
    degrees = module.degrees
    if not degrees:
        return FiniteComplex(dimensions={})
    window = range(degrees[0], degrees[-1] + 1)
    by_degree = {n: module.symbols_of_degree(n) for n in window}
    positions = {
        symbol: i for n in window for i, symbol in enumerate(by_degree[n])
    }
    differentials = {}
    for n in window:
        if n + 1 not in by_degree:
            continue
        entries = {}
        for j, symbol in enumerate(by_degree[n]):
            for target, coefficient in module.d_symbol(symbol).items():
                if module.degree_of(target) != n + 1:
                    continue
                value = augmentation.evaluate(coefficient)
                if value:
                    entries[(positions[target], j)] = value
        differentials[n] = SparseRationalMatrix(
            len(by_degree[n + 1]), len(by_degree[n]), entries
        )
    return FiniteComplex(
        dimensions={n: len(by_degree[n]) for n in window},
        differentials=differentials,
        labels=by_degree,
    )


@dataclass
class DerivationElement:
    """
    A derivation B -> A of degree `degree` along P, stored by its values on
    the generators outside the base; the rest of B is reached by Leibniz.
    """

    morphism: DGAMorphism
    values: Dict[Generator, GradedPolynomial]
    degree: int

    def __post_init__(self):
        self.values = {
            g: GradedPolynomial.coerce(v)
            for g, v in self.values.items()
            if GradedPolynomial.coerce(v)
        }
        for g in self.values:
            if g not in self.morphism.source:
                raise DomainMismatchError(
                    f"Derivation value given for `{g.name}` outside "
                    f"`{self.morphism.source.name}`."
                )

    def __call__(self, p) -> GradedPolynomial:
        return apply_derivation(
            GradedPolynomial.coerce(p), self.values, self.degree, self.morphism.images
        )

    def value(self, generator: Generator) -> GradedPolynomial:
        return self.values.get(generator, GradedPolynomial.zero())

    def validate(self) -> ValidationReport:
        report = ValidationReport(f"derivation of degree {self.degree}")
        for g, v in self.values.items():
            if v.degree != g.degree + self.degree:
                report.add(
                    g.name,
                    f"value must have degree {g.degree + self.degree}",
                    v,
                )
        return report

    def __add__(self, other: "DerivationElement") -> "DerivationElement":
        if other.degree != self.degree:
            raise InvalidElementError("Cannot add derivations of different degrees.")
        keys = set(self.values) | set(other.values)
        return DerivationElement(
            self.morphism,
            {g: self.value(g) + other.value(g) for g in keys},
            self.degree,
        )

    def scaled(self, factor) -> "DerivationElement":
        return DerivationElement(
            self.morphism,
            {g: v.scale(factor) for g, v in self.values.items()},
            self.degree,
        )

    def to_dict(self):
        return {g.name: str(v) for g, v in sorted(self.values.items())}


class DerTarget:
    """How the values of derivations are made finite-dimensional."""

    mode: CohomologyMode

    def __init__(self, algebra: ResolvingAlgebra):
        self.algebra = algebra

    def prepare(self, morphism: DGAMorphism) -> None:
        if morphism.target.generators != self.algebra.generators:
            raise DomainMismatchError(
                f"`{morphism.name}` does not land in `{self.algebra.name}`."
            )

    def along(self, morphism: DGAMorphism) -> Dict[Generator, GradedPolynomial]:
        return dict(morphism.images)

    def d(self, p: GradedPolynomial) -> GradedPolynomial:
        return self.algebra.d(p)

    def reduce(self, p: GradedPolynomial) -> GradedPolynomial:
        return p

    def piece(self, generator: Generator, degree: int) -> List[Monomial]:
        raise NotImplementedError


class ExactTarget(DerTarget):
    """Targets without degree-0 generators: every A^n is finite-dimensional."""

    mode = CohomologyMode.exact()

    def __init__(self, algebra: ResolvingAlgebra):
        super().__init__(algebra)
        if algebra.degree_zero_generators:
            raise UnsupportedModeError(
                f"Algebra `{algebra.name}` has degree-0 generators; use a weight "
                f"or truncated mode."
            )

    def piece(self, generator, degree):
        if degree > 0:
            return []
        return monomials_of_degree(self.algebra.generators, degree)


class WeightTarget(DerTarget):
    """
    Weight-graded targets: D(x) is taken of weight w(x) + shift, so the Der
    complex splits into finite pieces when P and d preserve weights.
    """

    mode = CohomologyMode.weight_exact()

    def __init__(self, algebra: ResolvingAlgebra, shift: int = 0):
        super().__init__(algebra)
        if algebra.weights is None:
            raise UnsupportedModeError(f"Algebra `{algebra.name}` declares no weights.")
        self.shift = shift
        self.source_weights: Dict[Generator, int] = {}

    def prepare(self, morphism):
        super().prepare(morphism)
        if morphism.source.weights is None:
            raise UnsupportedModeError(
                f"Algebra `{morphism.source.name}` declares no weights."
            )
        for g, image in morphism.images.items():
            if image.weights(self.algebra.weights) - {morphism.source.weights[g]}:
                raise UnsupportedModeError(
                    f"`{morphism.name}` does not preserve the weight of `{g.name}`."
                )
        self.source_weights = dict(morphism.source.weights)

    def piece(self, generator, degree):
        if degree > 0:
            return []
        weight = self.source_weights[generator] + self.shift
        if weight < 0:
            return []
        return monomials_of_degree(
            self.algebra.generators,
            degree,
            weights=self.algebra.weights,
            weight=weight,
        )


class TruncatedTarget(DerTarget):
    """Values in A/m^N at a point, written in coordinates centred there."""

    def __init__(self, augmentation: Augmentation, order: int):
        super().__init__(augmentation.algebra)
        if order < 1:
            raise ValueError(f"Truncation order must be at least 1, got `{order}`.")
        self.augmentation = augmentation
        self.order = order
        self.mode = CohomologyMode.truncated(order)
        self._local = local_differential(augmentation)

    def reduce(self, p):
        return p.filter(lambda m: m.total_exponent < self.order)

    def along(self, morphism):
        shift = self.augmentation.to_origin()
        return {
            g: self.reduce(substitute(image, shift, check=False))
            for g, image in morphism.images.items()
        }

    def d(self, p):
        return self.reduce(apply_derivation(p, self._local, 1))

    def piece(self, generator, degree):
        if degree > 0:
            return []
        return monomials_of_degree(
            self.algebra.generators, degree, max_exponent=self.order - 1
        )


class DerComplex:
    """
    Der_C(B, A) along P: B -> A, in the coordinates of its target.

    The degree-n part is spanned by (x, m) with x a generator of B outside C
    and m a basis monomial of A^(deg x + n); the differential is
    (dD)(x) = d_A(D x) - (-1)^n D(dx).
    """

    def __init__(
        self,
        morphism: DGAMorphism,
        base=None,
        target: Optional[DerTarget] = None,
    ):
        self.morphism = morphism
        base_gens = set(_base_generators(morphism.source, base))
        self.generators = [g for g in morphism.source.generators if g not in base_gens]
        self.target = target or ExactTarget(morphism.target)
        self.target.prepare(morphism)
        self._along = self.target.along(morphism)
        self._spaces: Dict[int, List[Tuple[Generator, Monomial]]] = {}

    @property
    def mode(self) -> CohomologyMode:
        return self.target.mode

    def space(self, n: int) -> List[Tuple[Generator, Monomial]]:
        if n not in self._spaces:
            self._spaces[n] = [
                (g, m)
                for g in self.generators
                for m in self.target.piece(g, g.degree + n)
            ]
        return self._spaces[n]

    def evaluate(self, derivation: DerivationElement, p) -> GradedPolynomial:
        return self.target.reduce(
            apply_derivation(
                GradedPolynomial.coerce(p),
                derivation.values,
                derivation.degree,
                self._along,
            )
        )

    def differential(self, derivation: DerivationElement) -> DerivationElement:
        n = derivation.degree
        sign = -1 if n % 2 else 1
        values = {}
        for g in self.generators:
            first = self.target.d(derivation.value(g))
            second = self.evaluate(derivation, self.morphism.source.d(g))
            values[g] = first - second.scale(sign)
        return DerivationElement(self.morphism, values, n + 1)

    def is_cocycle(self, derivation: DerivationElement) -> bool:
        return not self.differential(derivation).values

    def element(self, vector: Sequence[Fraction], n: int) -> DerivationElement:
        values: Dict[Generator, GradedPolynomial] = {}
        for (g, m), c in zip(self.space(n), vector):
            if c:
                values[g] = values.get(g, GradedPolynomial.zero()) + (
                    GradedPolynomial.from_monomial(m, c)
                )
        return DerivationElement(self.morphism, values, n)

    def vector(self, derivation: DerivationElement) -> List[Fraction]:
        n = derivation.degree
        position = {key: i for i, key in enumerate(self.space(n))}
        vector = [Fraction(0)] * len(position)
        for g, value in derivation.values.items():
            for m, c in value.terms.items():
                i = position.get((g, m))
                if i is None:
                    raise InvalidElementError(
                        f"The value `{value}` on `{g.name}` leaves the "
                        f"degree-{n} part of the Der complex."
                    )
                vector[i] = c
        return vector

    def matrix(self, n: int) -> SparseRationalMatrix:
        source = self.space(n)
        target = self.space(n + 1)
        position = {key: i for i, key in enumerate(target)}
        entries = {}
        for j, (g, m) in enumerate(source):
            image = self.differential(
                DerivationElement(
                    self.morphism, {g: GradedPolynomial.from_monomial(m)}, n
                )
            )
            for h, value in image.values.items():
                for monomial, c in value.terms.items():
                    entries[(position[(h, monomial)], j)] = c
        return SparseRationalMatrix(len(target), len(source), entries)

    def complex(self, degrees: Iterable[int]) -> FiniteComplex:
        degrees = sorted(set(degrees))
        dimensions = {n: len(self.space(n)) for n in degrees}
        differentials = {
            n: self.matrix(n) for n in degrees if n + 1 in dimensions
        }
        return FiniteComplex(dimensions=dimensions, differentials=differentials)


def der_complex(morphism: DGAMorphism, base=None, target: Optional[DerTarget] = None):
    return DerComplex(morphism, base, target)


@dataclass
class DerCohomology:
    degree: int
    dimension: int
    representatives: List[DerivationElement]
    mode: CohomologyMode

    def to_dict(self):
        return {
            "degree": self.degree,
            "dimension": self.dimension,
            "mode": str(self.mode),
            "representatives": [r.to_dict() for r in self.representatives],
        }


def der_cohomology(
    morphism: DGAMorphism,
    n: int,
    base=None,
    target: Optional[DerTarget] = None,
) -> DerCohomology:
    complex_ = der_complex(morphism, base, target)
    finite = complex_.complex([n - 1, n, n + 1])
    result = cohomology(finite, complex_.mode)
    representatives = [
        complex_.element(vector, n) for vector in result.representatives.get(n, [])
    ]
    logger.debug(
        "h^%s Der along %s: %s (%s)",
        n,
        morphism.name,
        result.dimension(n),
        complex_.mode,
    )
    return DerCohomology(n, result.dimension(n), representatives, complex_.mode)


def require_cocycle(complex_: DerComplex, derivation: DerivationElement) -> None:
    if not complex_.is_cocycle(derivation):
        residue = complex_.differential(derivation)
        raise NotACocycleError(
            f"The derivation {derivation.to_dict()} is not a cocycle: "
            f"dD = {residue.to_dict()}."
        )
