"""
Resolving algebras: free graded-commutative algebras on generators of
non-positive degree with a differential given on generators.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import (
    Callable,
    Dict,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from .exceptions import (
    DomainMismatchError,
    InvalidAlgebraError,
    InvalidAugmentationError,
    InvalidCellError,
    InvalidElementError,
    UnsupportedModeError,
)
from .linalg import FiniteComplex, SparseRationalMatrix
from .models import ValidationReport
from .polynomials import (
    Generator,
    GradedPolynomial,
    Monomial,
    apply_derivation,
    degree_component,
    monomials_of_degree,
    substitute,
)

logger = logging.getLogger(__name__)

PolynomialLike = Union[GradedPolynomial, Generator, int, Fraction]


class ResolvingAlgebra:
    """
    A finite resolving algebra over the rationals.

    Parameters:
        generators (Sequence[Generator]): The free generators, all of degree <= 0.
        differential (Mapping[Generator, PolynomialLike], optional): d on
            generators; generators left out have d = 0.
        weights (Mapping[Generator, int], optional): A declared positive weight
            grading that d must preserve term by term.
        name (str, optional): Display name used in reports and errors.

    The constructor rejects structural problems (positive degrees, foreign
    generators, duplicate names); mathematical ones such as d^2 != 0 are
    reported by `validate_algebra`.
    """

    def __init__(
        self,
        generators: Sequence[Generator] = (),
        differential: Optional[Mapping[Generator, PolynomialLike]] = None,
        weights: Optional[Mapping[Generator, int]] = None,
        name: str = "A",
    ):
        self.name = name
        self.generators: Tuple[Generator, ...] = tuple(generators)
        self._by_name: Dict[str, Generator] = {}
        for g in self.generators:
            if g.degree > 0:
                raise InvalidAlgebraError(
                    f"The `{g.name}` generator in algebra `{name}` has degree "
                    f"{g.degree}; resolving algebras live in degrees <= 0."
                )
            if g.name in self._by_name:
                raise InvalidAlgebraError(
                    f"The generator name `{g.name}` appears twice in algebra `{name}`."
                )
            self._by_name[g.name] = g
        members = set(self.generators)
        cleaned = {}
        for g, value in (differential or {}).items():
            if g not in members:
                raise DomainMismatchError(
                    f"Algebra `{name}` assigns d to `{g.name}`, which is not one "
                    f"of its generators."
                )
            value = GradedPolynomial.coerce(value)
            if value:
                cleaned[g] = value
        self._differential = cleaned
        for value in cleaned.values():
            self.ensure_contains(value, "differential")
        self.weights: Optional[Dict[Generator, int]] = None
        if weights is not None:
            missing = [g.name for g in self.generators if g not in weights]
            if missing:
                raise InvalidAlgebraError(
                    f"Algebra `{name}` declares weights but not for "
                    f"`{', '.join(missing)}`."
                )
            self.weights = {g: int(weights[g]) for g in self.generators}

    @property
    def differential(self) -> Mapping[Generator, GradedPolynomial]:
        return MappingProxyType(self._differential)

    def d(self, p: PolynomialLike) -> GradedPolynomial:
        if isinstance(p, Generator):
            return self._differential.get(p, GradedPolynomial.zero())
        return apply_derivation(GradedPolynomial.coerce(p), self._differential, 1)

    def generator(self, name: str) -> Generator:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"Algebra `{self.name}` has no generator `{name}`.")

    def __getitem__(self, name: str) -> GradedPolynomial:
        return self.generator(name).as_polynomial()

    @property
    def names(self) -> List[str]:
        return [g.name for g in self.generators]

    def __contains__(self, generator: Generator) -> bool:
        return self._by_name.get(getattr(generator, "name", None)) == generator

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __repr__(self):
        names = ", ".join(self.names)
        return f"<{type(self).__name__} {self.name} with generators: {names}>"

    def ensure_contains(self, p: PolynomialLike, what: str = "element") -> None:
        p = GradedPolynomial.coerce(p)
        stray = [g.name for g in p.generators() if g not in self]
        if stray:
            raise DomainMismatchError(
                f"The {what} `{p}` uses `{', '.join(stray)}`, which is not in "
                f"algebra `{self.name}`."
            )

    def generators_of_degree(self, degree: int) -> List[Generator]:
        return [g for g in self.generators if g.degree == degree]

    @property
    def degree_zero_generators(self) -> List[Generator]:
        return self.generators_of_degree(0)

    @property
    def amplitude(self) -> int:
        return max((-g.degree for g in self.generators), default=0)

    def fresh_name(self, base: str) -> str:
        if base not in self._by_name:
            return base
        index = 1
        while f"{base}{index}" in self._by_name:
            index += 1
        return f"{base}{index}"

    def renamed(self, name: str) -> "ResolvingAlgebra":
        return ResolvingAlgebra(self.generators, self._differential, self.weights, name)


class DGAMorphism:
    """
    A morphism of graded algebras given on generators.

    Parameters:
        source, target (ResolvingAlgebra): Domain and codomain.
        assignment (Mapping[Generator, PolynomialLike]): Images of source
            generators.
        fixed (Iterable[Generator], optional): Generators shared with the target
            that are sent to themselves when `assignment` leaves them out (the
            base of a morphism under C).
        name (str, optional): Display name.

    Generators neither assigned nor fixed map to zero.
    """

    def __init__(
        self,
        source: ResolvingAlgebra,
        target: ResolvingAlgebra,
        assignment: Optional[Mapping[Generator, PolynomialLike]] = None,
        fixed: Iterable[Generator] = (),
        name: Optional[str] = None,
    ):
        self.source = source
        self.target = target
        self.name = name or f"{source.name}->{target.name}"
        assignment = dict(assignment or {})
        fixed = set(fixed)
        for g in list(assignment) + list(fixed):
            if g not in source:
                raise DomainMismatchError(
                    f"Morphism `{self.name}` assigns `{g.name}`, which is not a "
                    f"generator of `{source.name}`."
                )
        images = {}
        for g in source.generators:
            if g in assignment:
                image = GradedPolynomial.coerce(assignment[g])
            elif g in fixed:
                image = g.as_polynomial()
            else:
                image = GradedPolynomial.zero()
            target.ensure_contains(image, f"image of `{g.name}`")
            images[g] = image
        self._images = images

    @property
    def images(self) -> Mapping[Generator, GradedPolynomial]:
        return MappingProxyType(self._images)

    def __getitem__(self, name: str) -> GradedPolynomial:
        return self._images[self.source.generator(name)]

    def apply(self, p: PolynomialLike) -> GradedPolynomial:
        p = GradedPolynomial.coerce(p)
        self.source.ensure_contains(p)
        return substitute(p, self._images, check=False)

    __call__ = apply

    def same_as(self, other: "DGAMorphism") -> bool:
        return (
            self.source.generators == other.source.generators
            and all(self._images[g] == other._images.get(g) for g in self.source)
        )

    def __repr__(self):
        assigned = ", ".join(f"{g.name} -> {v}" for g, v in self._images.items())
        return f"<{type(self).__name__} {self.name}: {assigned}>"


def validate_algebra(algebra: ResolvingAlgebra) -> ValidationReport:
    """
    Degree homogeneity of d on generators, d^2 = 0, and weight preservation
    when weights are declared.
    """
    report = ValidationReport(algebra.name)
    for g in algebra.generators:
        value = algebra.d(g)
        if value and value.degree != g.degree + 1:
            report.add(
                g.name,
                f"d({g.name}) must be homogeneous of degree {g.degree + 1}, "
                f"got degrees {sorted(value.degrees())}",
                value,
            )
            continue
        residue = algebra.d(value)
        if residue:
            report.add(g.name, f"d^2({g.name}) is not zero", residue)
    if algebra.weights is not None:
        for g in algebra.generators:
            if algebra.weights[g] <= 0:
                report.add(g.name, f"weight of {g.name} must be positive")
                continue
            weights = algebra.d(g).weights(algebra.weights)
            if weights - {algebra.weights[g]}:
                report.add(
                    g.name,
                    f"d({g.name}) does not preserve the weight {algebra.weights[g]}",
                    algebra.d(g),
                )
    if not report.ok:
        logger.debug("Algebra %s failed validation: %s", algebra.name, report)
    return report


def validate_morphism(morphism: DGAMorphism) -> ValidationReport:
    report = ValidationReport(morphism.name)
    for g in morphism.source.generators:
        image = morphism.images[g]
        if image and image.degree != g.degree:
            report.add(
                g.name,
                f"image of {g.name} must have degree {g.degree}, got "
                f"{sorted(image.degrees())}",
                image,
            )
            continue
        residue = morphism.apply(morphism.source.d(g)) - morphism.target.d(image)
        if residue:
            report.add(g.name, f"f(d {g.name}) differs from d(f {g.name})", residue)
    return report


def compose(second: DGAMorphism, first: DGAMorphism) -> DGAMorphism:
    """second after first."""
    if first.target.generators != second.source.generators:
        raise DomainMismatchError(
            f"Cannot compose `{second.name}` after `{first.name}`: "
            f"`{first.target.name}` is not `{second.source.name}`."
        )
    return DGAMorphism(
        first.source,
        second.target,
        {g: second.apply(image) for g, image in first.images.items()},
        name=f"{second.name}*{first.name}",
    )


def identity(algebra: ResolvingAlgebra) -> DGAMorphism:
    return DGAMorphism(
        algebra, algebra, fixed=algebra.generators, name=f"id_{algebra.name}"
    )


def inclusion(
    source: ResolvingAlgebra, target: ResolvingAlgebra, name: Optional[str] = None
) -> DGAMorphism:
    missing = [g.name for g in source.generators if g not in target]
    if missing:
        raise DomainMismatchError(
            f"`{source.name}` is not a subalgebra of `{target.name}`: "
            f"`{', '.join(missing)}` missing."
        )
    return DGAMorphism(source, target, fixed=source.generators, name=name)


def copy_algebra(
    algebra: ResolvingAlgebra,
    rename: Callable[[int, Generator], str],
    name: Optional[str] = None,
) -> Tuple[ResolvingAlgebra, Dict[Generator, Generator]]:
    """Fresh generators for `algebra`; returns the copy and old -> new."""
    mapping = {
        g: Generator.create(rename(index, g), g.degree)
        for index, g in enumerate(algebra.generators)
    }
    images = {g: new.as_polynomial() for g, new in mapping.items()}
    differential = {
        mapping[g]: substitute(value, images, check=False)
        for g, value in algebra.differential.items()
    }
    weights = None
    if algebra.weights is not None:
        weights = {mapping[g]: w for g, w in algebra.weights.items()}
    copy = ResolvingAlgebra(
        [mapping[g] for g in algebra.generators],
        differential,
        weights,
        name or algebra.name,
    )
    return copy, mapping


@dataclass
class TensorProduct:
    algebra: ResolvingAlgebra
    left: DGAMorphism
    right: DGAMorphism


def tensor(
    left: ResolvingAlgebra,
    right: ResolvingAlgebra,
    left_name: Optional[Callable[[int, Generator], str]] = None,
    right_name: Optional[Callable[[int, Generator], str]] = None,
    name: Optional[str] = None,
) -> TensorProduct:
    """
    left (x) right on fresh copies of both generator sets.

    By default left names are kept and clashing right names are primed. The
    left copies are created first, so x (x) 1 sorts before 1 (x) y and the
    Koszul signs come out of the global canonical order.
    """
    left_names = set(left.names)
    left_name = left_name or (lambda index, g: g.name)

    def default_right(index, g):
        candidate = g.name
        while candidate in left_names:
            candidate += "'"
        return candidate

    right_name = right_name or default_right
    left_copy, left_map = copy_algebra(left, left_name)
    right_copy, right_map = copy_algebra(right, right_name)
    weights = None
    if left_copy.weights is not None and right_copy.weights is not None:
        weights = {**left_copy.weights, **right_copy.weights}
    algebra = ResolvingAlgebra(
        left_copy.generators + right_copy.generators,
        {**left_copy.differential, **right_copy.differential},
        weights,
        name or f"{left.name}(x){right.name}",
    )
    return TensorProduct(
        algebra=algebra,
        left=DGAMorphism(left, algebra, {g: new for g, new in left_map.items()}),
        right=DGAMorphism(right, algebra, {g: new for g, new in right_map.items()}),
    )


@dataclass
class Extension:
    """An algebra built on top of `base` together with the inclusion."""

    algebra: ResolvingAlgebra
    inclusion: DGAMorphism
    added: Tuple[Generator, ...] = ()


def truncation(
    algebra: ResolvingAlgebra, n: int, base: Optional[ResolvingAlgebra] = None
) -> Extension:
    """The subalgebra B_(n) generated by generators of degree >= -n (and base)."""
    if n < 0:
        raise ValueError(f"Truncation level must be nonnegative, got `{n}`.")
    keep = [
        g
        for g in algebra.generators
        if g.degree >= -n or (base is not None and g in base)
    ]
    weights = None
    if algebra.weights is not None:
        weights = {g: algebra.weights[g] for g in keep}
    sub = ResolvingAlgebra(
        keep,
        {g: algebra.d(g) for g in keep},
        weights,
        f"{algebra.name}_({n})",
    )
    return Extension(sub, inclusion(sub, algebra), ())


@dataclass(frozen=True)
class Cell:
    """
    A generator to adjoin: `boundary` is d of the new generator, either a
    polynomial or a callable receiving the name -> polynomial map of every
    generator available so far.
    """

    name: str
    degree: int
    boundary: Union[
        PolynomialLike, Callable[[Dict[str, GradedPolynomial]], PolynomialLike]
    ] = 0
    weight: Optional[int] = None


def _as_cell(cell) -> Cell:
    if isinstance(cell, Cell):
        return cell
    return Cell(*cell)


def adjoin_cells(
    algebra: ResolvingAlgebra,
    cells: Sequence[Union[Cell, tuple]],
    name: Optional[str] = None,
) -> Extension:
    """A[cells] with the inclusion A -> A[cells]."""
    generators = list(algebra.generators)
    differential = dict(algebra.differential)
    weights = dict(algebra.weights) if algebra.weights is not None else None
    available = {g.name: g.as_polynomial() for g in generators}
    added = []
    for raw in cells:
        cell = _as_cell(raw)
        if cell.name in available:
            raise InvalidCellError(
                f"The cell `{cell.name}` clashes with an existing generator."
            )
        if cell.degree > 0:
            raise InvalidCellError(
                f"The cell `{cell.name}` has positive degree {cell.degree}."
            )
        boundary = cell.boundary
        if callable(boundary):
            boundary = boundary(dict(available))
        boundary = GradedPolynomial.coerce(boundary)
        partial = ResolvingAlgebra(generators, differential, name="cells")
        try:
            partial.ensure_contains(boundary, f"boundary of `{cell.name}`")
        except DomainMismatchError as exc:
            raise InvalidCellError(str(exc)) from exc
        if boundary and boundary.degree != cell.degree + 1:
            raise InvalidCellError(
                f"The boundary `{boundary}` of `{cell.name}` must be homogeneous "
                f"of degree {cell.degree + 1}."
            )
        if partial.d(boundary):
            raise InvalidCellError(
                f"The boundary `{boundary}` of `{cell.name}` is not closed: "
                f"d = {partial.d(boundary)}."
            )
        g = Generator.create(cell.name, cell.degree)
        generators.append(g)
        if boundary:
            differential[g] = boundary
        if weights is not None:
            if cell.weight is None:
                weights = None
            else:
                weights[g] = cell.weight
        available[g.name] = g.as_polynomial()
        added.append(g)
    extended = ResolvingAlgebra(
        generators, differential, weights, name or f"{algebra.name}[cells]"
    )
    return Extension(extended, inclusion(algebra, extended), tuple(added))


def standard_etale(
    algebra: ResolvingAlgebra,
    variables: Sequence[str],
    cells: Sequence[str],
    equations: Sequence,
    name: Optional[str] = None,
) -> DGAMorphism:
    """
    A -> A[x_1..x_r]{xi_1..xi_r}/d xi_i = f_i.

    Each f_i is a degree-0 polynomial or a callable receiving the name ->
    polynomial map that already contains the new x's. The Jacobian condition
    is checked separately by `criteria.jacobian_unit_check`.
    """
    if not (len(variables) == len(cells) == len(equations)):
        raise InvalidCellError(
            f"Standard étale data needs as many equations as variables and cells, "
            f"got {len(variables)}, {len(cells)} and {len(equations)}."
        )
    if not variables:
        return identity(algebra)
    specs = [Cell(x, 0) for x in variables]
    specs += [Cell(xi, -1, f) for xi, f in zip(cells, equations)]
    extension = adjoin_cells(algebra, specs, name)
    return extension.inclusion


def localize(
    algebra: ResolvingAlgebra,
    g: PolynomialLike,
    names: Tuple[str, str] = ("y", "eta"),
    name: Optional[str] = None,
) -> DGAMorphism:
    """The elementary open immersion A -> A_{g}, d eta = y*g - 1."""
    g = GradedPolynomial.coerce(g)
    if g and g.degree != 0:
        raise InvalidElementError(
            f"Localization needs a homogeneous degree-0 element, got `{g}`."
        )
    algebra.ensure_contains(g)
    y_name = algebra.fresh_name(names[0])
    eta_name = algebra.fresh_name(names[1])
    return standard_etale(
        algebra,
        [y_name],
        [eta_name],
        [lambda v: v[y_name] * g - 1],
        name or f"{algebra.name}_{{{g}}}",
    )


def koszul(
    variable_count: int,
    sections: Sequence[Callable[[List[GradedPolynomial]], PolynomialLike]],
    name: str = "K",
) -> ResolvingAlgebra:
    """
    Koszul algebra of sections s_1..s_m of the trivial rank-m bundle over
    affine n-space: x_1..x_n in degree 0, e_1..e_m in degree -1, d e_j = s_j.

    Weights (x_i of weight 1, e_j of weight deg s_j) are declared when every
    section is a nonconstant homogeneous polynomial or zero.
    """
    xs = [Generator.create(f"x{i + 1}", 0) for i in range(variable_count)]
    x_polys = [x.as_polynomial() for x in xs]
    es = [Generator.create(f"e{j + 1}", -1) for j in range(len(sections))]
    values = [GradedPolynomial.coerce(s(x_polys)) for s in sections]
    weights: Optional[Dict[Generator, int]] = {x: 1 for x in xs}
    for e, value in zip(es, values):
        totals = {m.total_exponent for m in value.monomials()}
        if not value:
            weights[e] = 1
        elif len(totals) == 1 and 0 not in totals:
            weights[e] = totals.pop()
        else:
            weights = None
            break
    return ResolvingAlgebra(
        xs + es, {e: v for e, v in zip(es, values)}, weights, name
    )


def lambda_algebra(n: int, name: Optional[str] = None) -> ResolvingAlgebra:
    """
    Lambda_n: for even n, x of degree -n and xi of degree -2n-1 with
    d xi = x^2; for odd n the free algebra on one odd x of degree -n.
    Either way h^0 = h^-n = Q and every other degree vanishes.
    """
    if n < 1:
        raise ValueError(f"Lambda_n needs n >= 1, got `{n}`.")
    x = Generator.create("x", -n)
    name = name or f"L{n}"
    if n % 2:
        return ResolvingAlgebra([x], name=name)
    xi = Generator.create("xi", -2 * n - 1)
    return ResolvingAlgebra([x, xi], {xi: x.as_polynomial() ** 2}, name=name)


@dataclass(frozen=True, eq=False)
class Augmentation:
    """
    A rational point: values for the degree-0 generators, every negative
    degree generator going to zero.
    """

    algebra: ResolvingAlgebra
    values: Mapping[Generator, Fraction] = field(default_factory=dict)
    name: str = "pt"

    def __post_init__(self):
        values = {}
        for g, value in self.values.items():
            if g not in self.algebra or g.degree != 0:
                raise InvalidAugmentationError(
                    f"Augmentation `{self.name}` gives a value to `{g.name}`, "
                    f"which is not a degree-0 generator of `{self.algebra.name}`."
                )
            values[g] = Fraction(value)
        missing = [
            g.name for g in self.algebra.degree_zero_generators if g not in values
        ]
        if missing:
            raise InvalidAugmentationError(
                f"Augmentation `{self.name}` has no value for `{', '.join(missing)}`."
            )
        object.__setattr__(self, "values", MappingProxyType(values))

    @classmethod
    def origin(cls, algebra: ResolvingAlgebra, name: str = "origin") -> "Augmentation":
        return cls(algebra, {g: 0 for g in algebra.degree_zero_generators}, name)

    @classmethod
    def from_names(
        cls, algebra: ResolvingAlgebra, values: Mapping[str, Fraction], name="pt"
    ) -> "Augmentation":
        return cls(
            algebra,
            {algebra.generator(k): Fraction(v) for k, v in values.items()},
            name,
        )

    @property
    def substitution(self) -> Dict[Generator, GradedPolynomial]:
        return {
            g: GradedPolynomial.constant(self.values[g])
            if g.degree == 0
            else GradedPolynomial.zero()
            for g in self.algebra.generators
        }

    def evaluate(self, p: PolynomialLike) -> Fraction:
        p = degree_component(GradedPolynomial.coerce(p), 0)
        return substitute(p, self.substitution, check=False).constant_term

    def to_origin(self) -> Dict[Generator, GradedPolynomial]:
        """x -> x + epsilon(x): rewrites polynomials in local coordinates."""
        return {
            g: g.as_polynomial() + value for g, value in self.values.items() if value
        }

    def from_origin(self) -> Dict[Generator, GradedPolynomial]:
        return {
            g: g.as_polynomial() - value for g, value in self.values.items() if value
        }

    def validate(self) -> ValidationReport:
        report = ValidationReport(self.name)
        for xi in self.algebra.generators_of_degree(-1):
            value = self.evaluate(self.algebra.d(xi))
            if value:
                report.add(
                    xi.name,
                    f"d({xi.name}) does not vanish at the point",
                    value,
                )
        return report

    def pullback(self, morphism: DGAMorphism) -> "Augmentation":
        if morphism.target.generators != self.algebra.generators:
            raise DomainMismatchError(
                f"Cannot pull `{self.name}` back along `{morphism.name}`."
            )
        return Augmentation(
            morphism.source,
            {
                g: self.evaluate(morphism.images[g])
                for g in morphism.source.degree_zero_generators
            },
            self.name,
        )

    def to_dict(self):
        return {g.name: str(v) for g, v in self.values.items()}


def local_differential(augmentation: Augmentation) -> Dict[Generator, GradedPolynomial]:
    """d on generators in coordinates centred at the point."""
    shift = augmentation.to_origin()
    algebra = augmentation.algebra
    return {
        g: substitute(algebra.d(g), shift, check=False)
        for g in algebra.generators
        if algebra.d(g)
    }


@dataclass
class TruncatedDGA:
    """
    A/m^N in a degree window, as a finite complex on monomials of total
    exponent < N in coordinates centred at the augmentation.
    """

    augmentation: Augmentation
    order: int
    window: Tuple[int, int]
    basis: Dict[int, List[Monomial]]
    differentials: Dict[int, SparseRationalMatrix]

    @property
    def algebra(self) -> ResolvingAlgebra:
        return self.augmentation.algebra

    def index(self, degree: int) -> Dict[Monomial, int]:
        return {m: i for i, m in enumerate(self.basis.get(degree, []))}

    def project_local(self, p: GradedPolynomial) -> Dict[int, List[Fraction]]:
        vectors = {n: [Fraction(0)] * len(ms) for n, ms in self.basis.items()}
        indices = {n: self.index(n) for n in self.basis}
        for monomial, coefficient in p.terms.items():
            position = indices.get(monomial.degree, {}).get(monomial)
            if position is not None:
                vectors[monomial.degree][position] += coefficient
        return vectors

    def project(self, p: PolynomialLike) -> Dict[int, List[Fraction]]:
        """Coordinates of p (given in the original variables) per degree."""
        local = substitute(
            GradedPolynomial.coerce(p), self.augmentation.to_origin(), check=False
        )
        return self.project_local(local)

    def complex(self) -> FiniteComplex:
        return FiniteComplex(
            dimensions={n: len(ms) for n, ms in self.basis.items()},
            differentials=dict(self.differentials),
            labels={n: [str(m) for m in ms] for n, ms in self.basis.items()},
        )


def _window_basis(generators, window, order) -> Dict[int, List[Monomial]]:
    low, high = window
    return {
        n: monomials_of_degree(generators, n, max_exponent=order - 1)
        for n in range(low, high + 1)
    }


def _matrix_between(
    source: Sequence[Monomial],
    target: Sequence[Monomial],
    image: Callable[[Monomial], GradedPolynomial],
) -> SparseRationalMatrix:
    position = {m: i for i, m in enumerate(target)}
    entries = {}
    for j, monomial in enumerate(source):
        for m, c in image(monomial).terms.items():
            i = position.get(m)
            if i is not None:
                entries[(i, j)] = c
    return SparseRationalMatrix(len(target), len(source), entries)


def madic_truncate(
    algebra: ResolvingAlgebra,
    augmentation: Augmentation,
    order: int,
    window: Tuple[int, int],
) -> TruncatedDGA:
    if order < 1:
        raise ValueError(f"Truncation order must be at least 1, got `{order}`.")
    if augmentation.algebra.generators != algebra.generators:
        raise DomainMismatchError(
            f"Augmentation `{augmentation.name}` is not on `{algebra.name}`."
        )
    augmentation.validate().raise_if_invalid(InvalidAugmentationError)
    if window[1] > 0 or window[0] > window[1]:
        raise ValueError(
            f"Degree window must be [a, b] with a <= b <= 0, got {window}."
        )
    local = local_differential(augmentation)
    basis = _window_basis(algebra.generators, window, order)

    def d_local(monomial: Monomial) -> GradedPolynomial:
        return apply_derivation(GradedPolynomial.from_monomial(monomial), local, 1)

    differentials = {
        n: _matrix_between(basis[n], basis.get(n + 1, []), d_local)
        for n in basis
        if n + 1 in basis
    }
    logger.debug(
        "Truncated %s at order %s: dims %s",
        algebra.name,
        order,
        {n: len(ms) for n, ms in basis.items()},
    )
    return TruncatedDGA(augmentation, order, tuple(window), basis, differentials)


@dataclass
class TruncationMap:
    source: TruncatedDGA
    target: TruncatedDGA
    matrices: Dict[int, SparseRationalMatrix]

    def commutes(self) -> bool:
        for n, matrix in self.matrices.items():
            if n + 1 not in self.matrices:
                continue
            left = self.matrices[n + 1] @ self.source.complex().differential(n)
            right = self.target.complex().differential(n) @ matrix
            if left != right:
                return False
        return True


def truncation_map(
    morphism: DGAMorphism,
    augmentation: Augmentation,
    order: int,
    window: Tuple[int, int],
) -> TruncationMap:
    """The chain map A/m^N -> B/m^N induced by f: A -> B at a point of B."""
    source_point = augmentation.pullback(morphism)
    source = madic_truncate(morphism.source, source_point, order, window)
    target = madic_truncate(morphism.target, augmentation, order, window)
    back = source_point.from_origin()
    forward = augmentation.to_origin()
    local_images = {
        g: substitute(
            morphism.apply(substitute(g.as_polynomial(), back, check=False)),
            forward,
            check=False,
        )
        for g in morphism.source.generators
    }

    def image(monomial: Monomial) -> GradedPolynomial:
        return substitute(
            GradedPolynomial.from_monomial(monomial), local_images, check=False
        )

    matrices = {
        n: _matrix_between(source.basis[n], target.basis[n], image)
        for n in source.basis
    }
    return TruncationMap(source, target, matrices)


def graded_quotient_dimensions(
    algebra: ResolvingAlgebra,
    augmentation: Augmentation,
    n: int,
    window: Tuple[int, int],
) -> Dict[int, int]:
    """
    dim (m^n / m^(n+1))^i for i in the window. In coordinates centred at
    the point m^n is spanned by the monomials of total exponent >= n, so
    the count does not depend on where the point is.
    """
    if augmentation.algebra.generators != algebra.generators:
        raise DomainMismatchError(
            f"Augmentation `{augmentation.name}` is not on `{algebra.name}`."
        )
    low, high = window
    dims = {}
    for degree in range(low, high + 1):
        monomials = monomials_of_degree(algebra.generators, degree, max_exponent=n)
        dims[degree] = sum(1 for m in monomials if m.total_exponent == n)
    return dims


def graded_piece(
    algebra: ResolvingAlgebra, degree: int, weight: Optional[int] = None
) -> List[Monomial]:
    """Monomial basis of A^degree, or of its weight-`weight` part."""
    if weight is None:
        if algebra.degree_zero_generators:
            raise UnsupportedModeError(
                f"Algebra `{algebra.name}` has degree-0 generators; its graded "
                f"pieces are infinite-dimensional without a weight or truncation."
            )
        return monomials_of_degree(algebra.generators, degree)
    if algebra.weights is None:
        raise UnsupportedModeError(
            f"Algebra `{algebra.name}` declares no weights."
        )
    return monomials_of_degree(
        algebra.generators, degree, weights=algebra.weights, weight=weight
    )


def algebra_complex(
    algebra: ResolvingAlgebra,
    window: Tuple[int, int],
    weight: Optional[int] = None,
) -> Tuple[FiniteComplex, Dict[int, List[Monomial]]]:
    """The graded pieces of A in a window as a finite complex."""
    low, high = window
    basis = {n: graded_piece(algebra, n, weight) for n in range(low, high + 1)}

    def d_monomial(monomial: Monomial) -> GradedPolynomial:
        return algebra.d(GradedPolynomial.from_monomial(monomial))

    differentials = {
        n: _matrix_between(basis[n], basis[n + 1], d_monomial)
        for n in basis
        if n + 1 in basis
    }
    complex_ = FiniteComplex(
        dimensions={n: len(ms) for n, ms in basis.items()},
        differentials=differentials,
        labels={n: [str(m) for m in ms] for n, ms in basis.items()},
    )
    return complex_, basis


def homotopy_check(homotopy, f, g) -> bool:
    """
    True when the 1-simplex `homotopy` has face 0 (t = 1) equal to f and
    face 1 (t = 0) equal to g.

    f and g may be DGAMorphisms or simplex morphisms of the same source;
    faces are compared generator by generator.
    """
    if homotopy.ell != 1:
        raise DomainMismatchError(
            f"A homotopy is a 1-simplex, got a {homotopy.ell}-simplex."
        )
    for morphism in (f, g):
        if morphism.source.generators != homotopy.source.generators:
            raise DomainMismatchError(
                f"`{morphism.name}` does not start at `{homotopy.source.name}`."
            )
    return all(
        homotopy.face(i).images[x] == morphism.images[x]
        for i, morphism in ((0, f), (1, g))
        for x in homotopy.source.generators
    )
