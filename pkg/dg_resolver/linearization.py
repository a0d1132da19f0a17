"""
Linearization of the mapping space at a point P: B -> A.

A degree -l derivation cocycle D along P gives the l-simplex
Xi_l(D) = P + (-1)^(l(l-1)/2) omega_l D. This module builds those simplices
and the explicit witnesses relating them: the homotopy showing that Xi_l
only depends on the class of D, the simplex exhibiting the group law, the
lift used for connecting maps, the obstruction to extending a morphism over
a new generator, and the transport of derivation classes along a homotopy.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .config import DEFAULT_LIMITS, Limits
from .constructions import bounded_d_solve
from .dga import DGAMorphism, ResolvingAlgebra, algebra_complex, validate_morphism
from .exceptions import (
    DomainMismatchError,
    FormIdentityError,
    InvalidElementError,
    InvalidMorphismError,
    NotACocycleError,
    PreconditionError,
    UnsupportedModeError,
)
from .forms import (
    SimplexForm,
    SimplexMorphism,
    _sign,
    coordinates,
    face_substitution,
    integrate,
    is_coordinate,
    omega,
    tau,
    total_differential,
)
from .linalg import SparseRationalMatrix, class_coordinates, cohomology, rank, solve
from .modules import (
    DerComplex,
    DerivationElement,
    _base_generators,
    der_cohomology,
    der_complex,
)
from .polynomials import (
    Generator,
    GradedPolynomial,
    apply_derivation,
    linear_combination,
    monomials_of_degree,
    substitute,
)

logger = logging.getLogger(__name__)


def derivation_differential(
    derivation: DerivationElement, generators: Optional[Iterable[Generator]] = None
) -> DerivationElement:
    """(dD)(x) = d_A(D x) - (-1)^n D(dx) with no finiteness assumption on A."""
    source = derivation.morphism.source
    target = derivation.morphism.target
    n = derivation.degree
    values = {}
    for g in generators if generators is not None else source.generators:
        value = target.d(derivation.value(g)) - derivation(source.d(g)).scale(
            -1 if n % 2 else 1
        )
        values[g] = value
    return DerivationElement(derivation.morphism, values, n + 1)


def _require_relative_cocycle(derivation: DerivationElement, base) -> None:
    base_gens = set(_base_generators(derivation.morphism.source, base))
    on_base = [g.name for g in derivation.values if g in base_gens]
    if on_base:
        raise PreconditionError(
            f"The derivation does not vanish on the base: `{', '.join(on_base)}`."
        )
    report = derivation.validate()
    report.raise_if_invalid(InvalidElementError)
    residue = derivation_differential(derivation)
    if residue.values:
        raise NotACocycleError(
            f"The derivation {derivation.to_dict()} is not a cocycle: "
            f"dD = {residue.to_dict()}."
        )


def _require_base_differentials(morphism: DGAMorphism, base) -> List[Generator]:
    base_gens = set(_base_generators(morphism.source, base))
    free = [g for g in morphism.source.generators if g not in base_gens]
    for g in free:
        stray = [
            h.name for h in morphism.source.d(g).generators() if h not in base_gens
        ]
        if stray:
            raise PreconditionError(
                f"d({g.name}) must lie in the base but uses `{', '.join(stray)}`."
            )
    return free


def _checked(simplex: SimplexMorphism) -> SimplexMorphism:
    report = simplex.validate()
    if not report.ok:
        raise FormIdentityError(
            f"`{simplex.name}` is not a simplex of the mapping space: "
            f"{report.to_dict()}."
        )
    return simplex


def xi_ell(
    morphism: DGAMorphism, derivation: DerivationElement, ell: int, base=None
) -> SimplexMorphism:
    """The l-simplex x -> P(x) + (-1)^(l(l-1)/2) omega_l D(x)."""
    if ell < 1:
        raise InvalidElementError(f"Xi_l needs l >= 1, got {ell}.")
    if derivation.degree != -ell:
        raise InvalidElementError(
            f"Xi_{ell} needs a derivation of degree {-ell}, got {derivation.degree}."
        )
    _require_relative_cocycle(derivation, base)
    top = omega(ell, ambient=morphism.target).value.scale(_sign(ell))
    images = {
        g: morphism.images[g] + top * derivation.value(g)
        for g in morphism.source.generators
    }
    simplex = SimplexMorphism(
        morphism.source, morphism.target, ell, images, name=f"Xi_{ell}"
    )
    return _checked(simplex)


def xi_zero(
    morphism: DGAMorphism, derivation: DerivationElement, base=None
) -> DGAMorphism:
    """x -> P(x) + D(x) on generators whose differential lies in the base."""
    if derivation.degree != 0:
        raise InvalidElementError(
            f"Xi_0 needs a derivation of degree 0, got {derivation.degree}."
        )
    free = _require_base_differentials(morphism, base)
    _require_relative_cocycle(derivation, base)
    images = dict(morphism.images)
    for g in free:
        images[g] = images[g] + derivation.value(g)
    result = DGAMorphism(morphism.source, morphism.target, images, name="Xi_0")
    validate_morphism(result).raise_if_invalid(InvalidMorphismError)
    return result


@dataclass
class HomotopyWitness:
    """Phi joining Xi(D) (face 1, s = 0) and Xi(D + dE) (face 0, s = 1)."""

    homotopy: SimplexMorphism
    shifted: DerivationElement
    start: object
    end: object

    def to_dict(self):
        return {
            "homotopy": self.homotopy.to_dict(),
            "shifted": self.shifted.to_dict(),
        }


def _coboundary(correction: DerivationElement, base) -> DerivationElement:
    base_gens = set(_base_generators(correction.morphism.source, base))
    if correction.values.keys() & base_gens:
        raise PreconditionError("The correction does not vanish on the base.")
    return derivation_differential(correction)


def well_definedness_homotopy(
    morphism: DGAMorphism,
    derivation: DerivationElement,
    correction: DerivationElement,
    ell: int,
    base=None,
) -> HomotopyWitness:
    """
    Phi = P + w((1 - s) D + s D') + w ds E with w = (-1)^(l(l-1)/2) omega_l
    and D' = D + dE, a homotopy in the parameter s between two l-simplices.
    """
    shifted = derivation + _coboundary(correction, base)
    start = xi_ell(morphism, derivation, ell, base)
    end = xi_ell(morphism, shifted, ell, base)
    (s,), (ds,) = coordinates(1, "s")
    s, ds = s.as_polynomial(), ds.as_polynomial()
    top = omega(ell, ambient=morphism.target).value.scale(_sign(ell))
    images = {}
    for g in morphism.source.generators:
        moving = (1 - s) * derivation.value(g) + s * shifted.value(g)
        images[g] = morphism.images[g] + top * moving + top * ds * correction.value(g)
    homotopy = SimplexMorphism(
        morphism.source, morphism.target, 1, images, label="s", name="Phi"
    )
    return HomotopyWitness(_checked(homotopy), shifted, start, end)


def xi_zero_homotopy(
    morphism: DGAMorphism,
    derivation: DerivationElement,
    correction: DerivationElement,
    base=None,
) -> HomotopyWitness:
    """Phi(x) = P(x) + (1 - s) D(x) + s D'(x) + ds E(x) on generators."""
    shifted = derivation + _coboundary(correction, base)
    start = xi_zero(morphism, derivation, base)
    end = xi_zero(morphism, shifted, base)
    (s,), (ds,) = coordinates(1, "s")
    s, ds = s.as_polynomial(), ds.as_polynomial()
    images = {}
    for g in morphism.source.generators:
        images[g] = (
            morphism.images[g]
            + (1 - s) * derivation.value(g)
            + s * shifted.value(g)
            + ds * correction.value(g)
        )
    homotopy = SimplexMorphism(
        morphism.source, morphism.target, 1, images, label="s", name="Phi"
    )
    return HomotopyWitness(_checked(homotopy), shifted, start, end)


def standard_derivation(
    simplex: SimplexMorphism, morphism: DGAMorphism
) -> DerivationElement:
    """
    Read D off a simplex in standard form h = P + (-1)^(l(l-1)/2) omega_l D;
    raises PreconditionError for anything else.
    """
    ell = simplex.ell
    _, dts = coordinates(ell, simplex.label)
    top = tuple(dts)
    scale = Fraction(_sign(ell), 1) / omega(ell).value.coefficient(
        omega(ell).value.monomials()[0]
    )
    values = {}
    for g in morphism.source.generators:
        rest = simplex.images[g] - morphism.images[g]
        value = GradedPolynomial.zero()
        for monomial, coefficient in rest.terms.items():
            sign, part, forms = monomial.split(lambda h: not is_coordinate(h))
            if forms.generators() != top:
                raise PreconditionError(
                    f"`{simplex.name}` is not in standard form at `{g.name}`."
                )
            if (ell * part.degree) % 2:
                sign = -sign
            value = value + GradedPolynomial.from_monomial(
                part, sign * coefficient * scale
            )
        values[g] = value
    return DerivationElement(morphism, values, -ell)


@dataclass
class ConcatWitness:
    """An (l+1)-simplex whose faces exhibit Xi(D) * Xi(D') = Xi(D + D')."""

    simplex: SimplexMorphism
    first: SimplexMorphism
    second: SimplexMorphism
    composite: SimplexMorphism
    faces: Dict[int, str] = field(default_factory=dict)

    def to_dict(self):
        return {"simplex": self.simplex.to_dict(), "faces": self.faces}


def concat_witness(
    first: SimplexMorphism,
    second: SimplexMorphism,
    morphism: DGAMorphism,
    base=None,
) -> ConcatWitness:
    """
    Face l-1 is `first`, face l+1 is `second`, face l is Xi_l(D + D') and the
    other faces are P. For l = 1 every generator outside the base needs its
    differential in the base.
    """
    ell = first.ell
    if second.ell != ell:
        raise DomainMismatchError("Both simplices must have the same dimension.")
    d1 = standard_derivation(first, morphism)
    d2 = standard_derivation(second, morphism)
    composite = xi_ell(morphism, d1 + d2, ell, base)
    _, dts = coordinates(ell + 1)
    dt = [g.as_polynomial() for g in dts]

    def wedge(indices: Sequence[int]) -> GradedPolynomial:
        result = GradedPolynomial.one()
        for i in indices:
            result = result * dt[i - 1]
        return result

    if ell == 1:
        _require_base_differentials(morphism, base)
        alpha, beta, factor = dt[1], dt[1] + dt[0], 1
    else:
        head = list(range(1, ell - 1))
        alpha = wedge(head + [ell, ell + 1]) + wedge(head + [ell - 1, ell + 1])
        beta = wedge(head + [ell - 1, ell + 1]) + wedge(head + [ell - 1, ell])
        volume = omega(ell).value
        factor = _sign(ell) * volume.coefficient(volume.monomials()[0])
    images = {
        g: morphism.images[g]
        + (alpha * d1.value(g)).scale(factor)
        + (beta * d2.value(g)).scale(factor)
        for g in morphism.source.generators
    }
    simplex = _checked(
        SimplexMorphism(morphism.source, morphism.target, ell + 1, images, name="Phi")
    )
    expected = {ell - 1: first, ell: composite, ell + 1: second}
    faces = {}
    for i in range(ell + 2):
        target = expected.get(i, morphism)
        if not simplex.face(i).same_as(target):
            raise FormIdentityError(f"Face {i} of the concatenation witness is wrong.")
        faces[i] = target.name
    return ConcatWitness(simplex, first, second, composite, faces)


@dataclass
class BoundaryWitness:
    """The lift h' and the connecting derivation realized by its face 0."""

    lift: SimplexMorphism
    face: object
    connecting: DerivationElement

    def to_dict(self):
        return {
            "lift": self.lift.to_dict(),
            "connecting": self.connecting.to_dict(),
        }


def boundary_witness(
    morphism: DGAMorphism,
    derivation: DerivationElement,
    sub: ResolvingAlgebra,
    ell: int,
) -> BoundaryWitness:
    """
    B' = `sub` inside B with dx in B' for the remaining generators x, D a
    degree -l cocycle on B'. h' is Xi_l(D) on B' and
    x -> P(x) + (-1)^(l(l-1)/2) tau_l D(dx) on the rest; its face 0 is
    Xi_(l-1) of (delta D)(x) = (-1)^(l-1) D(dx).
    """
    if derivation.degree != -ell:
        raise InvalidElementError(
            f"The derivation must have degree {-ell}, got {derivation.degree}."
        )
    free = _require_base_differentials(morphism, sub)
    outside = [g.name for g in derivation.values if g in free]
    if outside:
        raise PreconditionError(
            f"The derivation must live on `{sub.name}`; it has values on "
            f"`{', '.join(outside)}`."
        )
    residue = derivation_differential(derivation, sub.generators)
    if residue.values:
        raise NotACocycleError(
            f"The derivation {derivation.to_dict()} is not a cocycle on `{sub.name}`."
        )
    top = omega(ell, ambient=morphism.target).value.scale(_sign(ell))
    edge = tau(ell, ambient=morphism.target).value.scale(_sign(ell))
    images = {}
    for g in morphism.source.generators:
        if g in free:
            images[g] = morphism.images[g] + edge * derivation(morphism.source.d(g))
        else:
            images[g] = morphism.images[g] + top * derivation.value(g)
    lift = _checked(
        SimplexMorphism(morphism.source, morphism.target, ell, images, name="lift")
    )
    sign = -1 if (ell - 1) % 2 else 1
    connecting = DerivationElement(
        morphism,
        {g: derivation(morphism.source.d(g)).scale(sign) for g in free},
        1 - ell,
    )
    if ell == 1:
        face = xi_zero(morphism, connecting, sub)
    else:
        face = xi_ell(morphism, connecting, ell - 1, sub)
    if not lift.face(0).same_as(face):
        raise FormIdentityError("Face 0 of the lift is not Xi of the connecting map.")
    for i in range(1, ell + 1):
        if not lift.face(i).same_as(morphism):
            raise FormIdentityError(f"Face {i} of the lift is not P.")
    return BoundaryWitness(lift, face, connecting)


@dataclass
class CohomologyClass:
    """The class of a closed element of A in the representative basis."""

    degree: int
    element: GradedPolynomial
    coordinates: Optional[List[Fraction]]
    dimension: Optional[int]
    primitive: Optional[GradedPolynomial] = None

    @property
    def is_zero(self) -> bool:
        if self.coordinates is not None:
            return not any(self.coordinates)
        return self.primitive is not None

    def to_dict(self):
        data = {
            "degree": self.degree,
            "element": str(self.element),
            "zero": self.is_zero,
            "dimension": self.dimension,
            "coordinates": None
            if self.coordinates is None
            else [str(c) for c in self.coordinates],
            "primitive": None if self.primitive is None else str(self.primitive),
        }
        return {k: v for k, v in data.items() if v is not None}


def cohomology_class(
    algebra: ResolvingAlgebra, element: GradedPolynomial, degree: int
) -> CohomologyClass:
    """Exact-mode class of a closed element; needs no degree-0 generators."""
    element = GradedPolynomial.coerce(element)
    if algebra.d(element):
        raise NotACocycleError(f"`{element}` is not closed in `{algebra.name}`.")
    if element and element.degree != degree:
        raise InvalidElementError(f"`{element}` does not have degree {degree}.")
    complex_, basis = algebra_complex(algebra, (degree - 1, degree + 1))
    result = cohomology(complex_)
    position = {m: i for i, m in enumerate(basis[degree])}
    vector = [Fraction(0)] * len(position)
    for monomial, coefficient in element.terms.items():
        vector[position[monomial]] = coefficient
    coordinates_ = class_coordinates(complex_, result, degree, vector)
    primitive = None
    if coordinates_ is not None and not any(coordinates_):
        primitive = _primitive(complex_, basis, degree, vector)
    return CohomologyClass(
        degree, element, coordinates_, result.dimension(degree), primitive
    )


def _primitive(complex_, basis, degree, vector) -> GradedPolynomial:
    solved = solve(complex_.differential(degree - 1), vector)
    return linear_combination(
        solved.solution,
        [GradedPolynomial.from_monomial(m) for m in basis[degree - 1]],
    )


def xi_P(
    morphism: DGAMorphism, derivation: DerivationElement, generator: Generator
) -> CohomologyClass:
    """The class of D(dx) in h(A) for a degree -1 cocycle D on B'."""
    if derivation.degree != -1:
        raise InvalidElementError(
            f"The derivation must have degree -1, got {derivation.degree}."
        )
    target = morphism.target
    if target.degree_zero_generators:
        raise UnsupportedModeError(
            f"Classes in `{target.name}` need exact mode; it has degree-0 generators."
        )
    value = derivation(morphism.source.d(generator))
    return cohomology_class(target, value, generator.degree)


@dataclass
class Obstruction:
    """The class of h(dx); when it vanishes, an extension over x."""

    cohomology_class: CohomologyClass
    extension: Optional[DGAMorphism]

    @property
    def vanishes(self) -> bool:
        return self.cohomology_class.is_zero

    def to_dict(self):
        data = {"class": self.cohomology_class.to_dict(), "vanishes": self.vanishes}
        if self.extension is not None:
            data["extension"] = {
                g.name: str(v) for g, v in self.extension.images.items()
            }
        return data


def extension_obstruction(
    morphism: DGAMorphism,
    algebra: ResolvingAlgebra,
    generator: Generator,
    limits: Limits = DEFAULT_LIMITS,
) -> Obstruction:
    """
    For B = B'[x] (`algebra`) and h: B' -> A, the class of h(dx) in
    h^(deg x + 1)(A); when it is zero, the extension x -> a with da = h(dx).
    """
    sub = morphism.source
    if generator not in algebra:
        raise DomainMismatchError(f"`{generator.name}` is not in `{algebra.name}`.")
    extra = [g.name for g in algebra.generators if g not in sub and g != generator]
    if extra:
        raise PreconditionError(
            f"`{algebra.name}` adds more than `{generator.name}` to `{sub.name}`: "
            f"`{', '.join(extra)}`."
        )
    boundary = algebra.d(generator)
    sub.ensure_contains(boundary, f"d({generator.name})")
    value = morphism.apply(boundary)
    degree = generator.degree + 1
    target = morphism.target
    if target.degree_zero_generators:
        found = bounded_d_solve(target, value, limits=limits)
        class_ = CohomologyClass(degree, value, None, None, found.solution)
    else:
        class_ = cohomology_class(target, value, degree)
    extension = None
    if class_.is_zero:
        images = {
            g: morphism.images.get(g, GradedPolynomial.zero()) for g in sub.generators
        }
        images[generator] = class_.primitive or GradedPolynomial.zero()
        extension = DGAMorphism(
            algebra, target, images, name=f"{morphism.name}+{generator.name}"
        )
        validate_morphism(extension).raise_if_invalid(InvalidMorphismError)
    logger.debug("Obstruction for %s: %s", generator.name, class_.to_dict())
    return Obstruction(class_, extension)


@dataclass
class Transport:
    """The matrix of h^-l Der(B, A_P) -> h^-l Der(B, A_Q) in representative bases."""

    degree: int
    columns: List[Optional[List[Fraction]]]
    source_dimension: int
    target_dimension: int
    t_degree: int

    @property
    def defects(self) -> List[int]:
        return [j for j, column in enumerate(self.columns) if column is None]

    @property
    def matrix(self) -> List[List[Fraction]]:
        rows = self.target_dimension
        return [
            [
                (column[i] if column is not None else Fraction(0))
                for column in self.columns
            ]
            for i in range(rows)
        ]

    @property
    def rank(self) -> int:
        if not self.target_dimension or not self.columns:
            return 0
        return rank(SparseRationalMatrix.from_dense(self.matrix))

    @property
    def is_isomorphism(self) -> bool:
        return (
            not self.defects
            and self.source_dimension == self.target_dimension
            and self.rank == self.source_dimension
        )

    def to_dict(self):
        return {
            "degree": self.degree,
            "matrix": [[str(v) for v in row] for row in self.matrix],
            "defects": self.defects,
            "t_degree": self.t_degree,
        }


class _System:
    """A sparse linear system assembled column by column from polynomial data."""

    def __init__(self):
        self.rows: Dict[Tuple, int] = {}
        self.columns: List[Dict[int, Fraction]] = []
        self.rhs: Dict[int, Fraction] = {}

    def _row(self, key) -> int:
        if key not in self.rows:
            self.rows[key] = len(self.rows)
        return self.rows[key]

    def add_column(self, blocks: Iterable[Tuple[object, GradedPolynomial]]) -> None:
        column: Dict[int, Fraction] = {}
        for tag, value in blocks:
            for monomial, c in value.terms.items():
                i = self._row((tag, monomial))
                column[i] = column.get(i, 0) + c
        self.columns.append({i: c for i, c in column.items() if c})

    def set_rhs(self, blocks: Iterable[Tuple[object, GradedPolynomial]]) -> None:
        for tag, value in blocks:
            for monomial, c in value.terms.items():
                self.rhs[self._row((tag, monomial))] = c

    def solve(self) -> Optional[List[Fraction]]:
        matrix = SparseRationalMatrix.from_columns(len(self.rows), self.columns)
        rhs = [Fraction(0)] * len(self.rows)
        for i, c in self.rhs.items():
            rhs[i] = c
        return solve(matrix, rhs).solution


def _form_basis(
    ambient: ResolvingAlgebra, degree: int, t_degree: int, label: str
) -> List[GradedPolynomial]:
    """A^degree t^j and A^(degree - 1) t^j dt for j <= t_degree."""
    (t,), (dt,) = coordinates(1, label)
    t, dt = t.as_polynomial(), dt.as_polynomial()
    plain = monomials_of_degree(ambient.generators, degree)
    lowered = monomials_of_degree(ambient.generators, degree - 1)
    basis = []
    for j in range(t_degree + 1):
        basis.extend(t**j * GradedPolynomial.from_monomial(m) for m in plain)
        basis.extend(t**j * dt * GradedPolynomial.from_monomial(m) for m in lowered)
    return basis


def der_transport(
    homotopy: SimplexMorphism,
    ell: int,
    base=None,
    limits: Limits = DEFAULT_LIMITS,
) -> Transport:
    """
    Transport of h^-l Der along a homotopy theta from P (face 0) to Q
    (face 1): each class [D] of Der(B, A_P) is lifted to a cocycle D~ of
    Der(B, A (x) Omega_1) along theta with face 0 equal to D + dE, and
    sent to the class of face 1 of D~. The t-degree of D~ grows until the
    lift exists or the configured cap is reached; unliftable classes are
    reported as defects.
    """
    if homotopy.ell != 1:
        raise DomainMismatchError(f"A homotopy is a 1-simplex, got {homotopy.ell}.")
    ambient = homotopy.ambient
    start = homotopy.face(0).as_morphism(ambient)
    end = homotopy.face(1).as_morphism(ambient)
    n = -ell
    source_complex = DerComplex(start, base)
    target_complex = DerComplex(end, base)
    source_classes = der_cohomology(start, n, base)
    target_finite = target_complex.complex([n - 1, n, n + 1])
    target_classes = cohomology(target_finite, target_complex.mode)
    free = source_complex.generators
    along = dict(homotopy.images)
    face0 = face_substitution(1, 0, homotopy.label)
    face1 = face_substitution(1, 1, homotopy.label)
    sign = -1 if n % 2 else 1
    columns: List[Optional[List[Fraction]]] = []
    used = 0
    for representative in source_classes.representatives:
        lifted = None
        for t_degree in range(limits.transport_max_t_degree + 1):
            lifted = _lift(
                representative, homotopy, along, free, n, sign, t_degree,
                source_complex, face0,
            )
            if lifted is not None:
                used = max(used, t_degree)
                break
        if lifted is None:
            logger.warning(
                "No lift of a degree %s class up to t-degree %s",
                n,
                limits.transport_max_t_degree,
            )
            columns.append(None)
            continue
        image = DerivationElement(
            end,
            {g: substitute(v, face1, check=False) for g, v in lifted.items()},
            n,
        )
        columns.append(
            class_coordinates(
                target_finite, target_classes, n, target_complex.vector(image)
            )
        )
    logger.info(
        "Transport along %s in degree %s: %s classes", homotopy.name, n, len(columns)
    )
    return Transport(
        n, columns, source_classes.dimension, target_classes.dimension(n), used
    )


def _lift(
    representative: DerivationElement,
    homotopy: SimplexMorphism,
    along: Dict[Generator, GradedPolynomial],
    free: List[Generator],
    n: int,
    sign: int,
    t_degree: int,
    source_complex: DerComplex,
    face0: Dict[Generator, GradedPolynomial],
) -> Optional[Dict[Generator, GradedPolynomial]]:
    source, ambient = homotopy.source, homotopy.ambient
    system = _System()
    unknowns: List[Tuple[Generator, GradedPolynomial]] = []
    for g in free:
        for b in _form_basis(ambient, g.degree + n, t_degree, homotopy.label):
            unknowns.append((g, b))
            blocks = []
            for h in free:
                value = b if h == g else GradedPolynomial.zero()
                residue = total_differential(value, ambient) - apply_derivation(
                    source.d(h), {g: b}, n, along
                ).scale(sign)
                blocks.append((("cocycle", h), residue))
            blocks.append((("face", g), substitute(b, face0, check=False)))
            system.add_column(blocks)
    corrections = source_complex.space(n - 1)
    for g, m in corrections:
        unit = DerivationElement(
            representative.morphism, {g: GradedPolynomial.from_monomial(m)}, n - 1
        )
        image = source_complex.differential(unit)
        system.add_column((("face", h), -image.value(h)) for h in free)
    system.set_rhs((("face", g), representative.value(g)) for g in free)
    solution = system.solve()
    if solution is None:
        return None
    lifted: Dict[Generator, GradedPolynomial] = {}
    for (g, b), c in zip(unknowns, solution):
        if c:
            lifted[g] = lifted.get(g, GradedPolynomial.zero()) + b.scale(c)
    return lifted


def linearized_class_check(
    morphism: DGAMorphism,
    derivation: DerivationElement,
    generator: Generator,
    ell: int,
    base=None,
) -> bool:
    """
    For B = C[x], the square between pi_l at P, h^(-l) Der and h(A).

    Integrating (Xi_l D)(x) - P(x) over the simplex must land in the class
    of (-1)^(l(l-1)/2) D(x) in h^(|x| - l)(A), and the derivation read back
    off Xi_l D must differ from D by a coboundary of the Der complex.
    """
    simplex = xi_ell(morphism, derivation, ell, base)
    target = morphism.target
    moved = simplex.images[generator] - morphism.images[generator]
    integrated = integrate(SimplexForm(moved, ell, simplex.label, target))
    gap = integrated.scale(_sign(ell)) - derivation.value(generator)
    if not cohomology_class(target, gap, generator.degree - ell).is_zero:
        logger.info("Integral of %s at %s misses D(x)", simplex.name, generator.name)
        return False
    complex_ = der_complex(morphism, base)
    difference = standard_derivation(simplex, morphism) + derivation.scaled(-1)
    if not difference.values:
        return True
    finite = complex_.complex([-ell - 1, -ell])
    return solve(
        finite.differential(-ell - 1), complex_.vector(difference)
    ).consistent
