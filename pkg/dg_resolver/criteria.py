"""
Decision procedures for étale maps, quasi-isomorphisms and perfectness at
rational points, finite completion levels and in weight-graded mode.

Every verdict names the evidence it was decided on; point-wise evidence is
never promoted to a global claim.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from sympy.polys.matrices import DomainMatrix

from .config import DEFAULT_LIMITS, Limits
from .dga import (
    Augmentation,
    DGAMorphism,
    ResolvingAlgebra,
    compose,
    lambda_algebra,
    truncation_map,
    validate_morphism,
)
from .exceptions import (
    DomainMismatchError,
    InvalidMorphismError,
    ResourceLimitError,
    UnsupportedModeError,
)
from .groebner import (
    H0MapCheck,
    PolyIdeal,
    h0_map_check,
    h0_presentation,
    is_unit_mod,
)
from .linalg import SparseRationalMatrix, cohomology, cohomology_map_rank
from .models import CompletionReport, LevelResult, PerfectnessReport, Verdict
from .modules import DerComplex, DerivationElement, cotangent_complex, fiber_at, kaehler
from .polynomials import Generator, GradedPolynomial, graded_partial, substitute

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AtPoints:
    """Check L at each point and the completions up to `order`."""

    points: Tuple[Augmentation, ...]
    order: int = 4

    def __str__(self):
        names = ", ".join(p.name for p in self.points)
        return f"at points [{names}] to order {self.order}"


@dataclass(frozen=True)
class WeightExact:
    """Weight-graded algebras: the fiber at the origin decides acyclicity."""

    def __str__(self):
        return "weight-exact"


@dataclass(frozen=True)
class H0Only:
    """Only h^0; a necessary condition."""

    def __str__(self):
        return "h0 only"


QisMode = Union[AtPoints, WeightExact, H0Only]


def _require_valid(morphism: DGAMorphism) -> None:
    validate_morphism(morphism).raise_if_invalid(InvalidMorphismError)


def is_etale_at(morphism: DGAMorphism, augmentation: Augmentation) -> Verdict:
    """Acyclicity of L_{B/A} (x)_B k at a point of B."""
    if augmentation.algebra.generators != morphism.target.generators:
        raise DomainMismatchError(
            f"Augmentation `{augmentation.name}` is not on `{morphism.target.name}`."
        )
    _require_valid(morphism)
    fiber = fiber_at(cotangent_complex(morphism), augmentation)
    result = cohomology(fiber)
    degrees = result.nonzero_degrees
    return Verdict(
        check="etale",
        holds=not degrees,
        scope=f"point {augmentation.name}",
        witness={"nonzero_degrees": degrees} if degrees else None,
    )


def _default_window(morphism: DGAMorphism) -> Tuple[int, int]:
    amplitude = max(morphism.source.amplitude, morphism.target.amplitude)
    return (-amplitude - 1, 0)


def completion_compare(
    morphism: DGAMorphism,
    augmentation: Augmentation,
    levels: int,
    window: Optional[Tuple[int, int]] = None,
) -> CompletionReport:
    """
    Compare A/m^n -> B/m^n for n = 1..levels.

    The lowest degree of the window has no incoming differential, so the
    comparison covers window[0] + 1 .. window[1]; the default window sits one
    below the larger amplitude.
    """
    _require_valid(morphism)
    window = window or _default_window(morphism)
    compared = range(window[0] + 1, window[1] + 1)
    results = []
    for level in range(1, levels + 1):
        induced = truncation_map(morphism, augmentation, level, window)
        source = induced.source.complex()
        target = induced.target.complex()
        source_h = cohomology(source)
        target_h = cohomology(target)
        ranks = {
            n: cohomology_map_rank(source, target, induced.matrices[n], n, source_h)
            for n in compared
        }
        passed = all(
            source_h.dimension(n) == target_h.dimension(n) == ranks[n]
            for n in compared
        )
        results.append(
            LevelResult(
                level=level,
                passed=passed,
                source_dimensions={n: source_h.dimension(n) for n in compared},
                target_dimensions={n: target_h.dimension(n) for n in compared},
                induced_ranks=ranks,
            )
        )
        logger.debug("Completion level %s: %s", level, "pass" if passed else "fail")
    return CompletionReport(
        levels=results,
        scope=f"point {augmentation.name}, levels 1..{levels}, degrees "
        f"{compared.start}..{compared.stop - 1}",
    )


def _fresh_copy(ideal: PolyIdeal) -> Tuple[PolyIdeal, Dict[Generator, Generator]]:
    fresh = {v: Generator.create(f"{v.name}_0", 0) for v in ideal.variables}
    images = {v: g.as_polynomial() for v, g in fresh.items()}
    return (
        PolyIdeal(
            tuple(fresh.values()),
            tuple(substitute(g, images, check=False) for g in ideal.generators),
        ),
        fresh,
    )


def h0_isomorphism(
    morphism: DGAMorphism, limits: Limits = DEFAULT_LIMITS
) -> H0MapCheck:
    """Injectivity and surjectivity of h^0(f) by elimination."""
    source, fresh = _fresh_copy(h0_presentation(morphism.source))
    target = h0_presentation(morphism.target)
    images = {fresh[a]: morphism.images[a] for a in fresh}
    return h0_map_check(source, target, images, limits)


def is_qis(
    morphism: DGAMorphism, mode: QisMode, limits: Limits = DEFAULT_LIMITS
) -> Verdict:
    """
    h^0(f) an isomorphism and L_{B/A} acyclic, the latter decided in `mode`.
    Sound for the mode it names, never complete.
    """
    _require_valid(morphism)
    scope = str(mode)
    diagnostics: List[str] = []
    try:
        h0 = h0_isomorphism(morphism, limits)
    except ResourceLimitError as exc:
        logger.warning("h0 check of %s inconclusive: %s", morphism.name, exc)
        return Verdict(
            "qis", None, scope, diagnostics=[f"inconclusive(resource): {exc}"]
        )
    witness: Dict[str, object] = {
        "h0_injective": h0.injective,
        "h0_surjective": h0.surjective,
    }
    holds = h0.isomorphism
    if isinstance(mode, H0Only):
        diagnostics.append("cotangent complex not examined")
    elif isinstance(mode, WeightExact):
        if morphism.source.weights is None or morphism.target.weights is None:
            raise UnsupportedModeError(
                f"Weight-exact mode needs declared weights on `{morphism.source.name}` "
                f"and `{morphism.target.name}`."
            )
        for g, image in morphism.images.items():
            if image.weights(morphism.target.weights) - {morphism.source.weights[g]}:
                raise UnsupportedModeError(
                    f"`{morphism.name}` does not preserve the weight of `{g.name}`."
                )
        etale = is_etale_at(morphism, Augmentation.origin(morphism.target))
        witness["cotangent_fiber_acyclic"] = etale.holds
        holds = holds and etale.holds
    elif isinstance(mode, AtPoints):
        for point in mode.points:
            etale = is_etale_at(morphism, point)
            completion = completion_compare(morphism, point, mode.order)
            witness[f"etale@{point.name}"] = etale.holds
            witness[f"completion@{point.name}"] = completion.verified_to
            holds = holds and etale.holds and completion.passed
    else:
        raise UnsupportedModeError(f"Unsupported quasi-isomorphism mode `{mode}`.")
    return Verdict("qis", holds, scope, witness, diagnostics)


def perfectness_report(
    algebra: ResolvingAlgebra,
    augmentation: Augmentation,
    truncated_at: Optional[int] = None,
) -> PerfectnessReport:
    """
    dim h^i(Omega_A (x)_A k) at a point and the window [-N, 0] holding them.

    When the algebra is a truncation at level n of an infinite one, degree -n
    carries artifacts of the cut and is left out of the window.
    """
    fiber = fiber_at(kaehler(algebra).module, augmentation)
    result = cohomology(fiber)
    dimensions = {n: d for n, d in result.dimensions.items() if d}
    diagnostics = []
    considered = dict(dimensions)
    if truncated_at is not None and -truncated_at in considered:
        diagnostics.append(
            f"degree {-truncated_at} excluded: truncation edge "
            f"(dim {considered.pop(-truncated_at)})"
        )
        logger.warning("Spurious classes at the truncation edge %s", -truncated_at)
    window = None
    if considered:
        window = (min(considered), 0)
    return PerfectnessReport(dimensions, window, diagnostics)


def jacobian_determinant(
    morphism: DGAMorphism,
) -> Tuple[GradedPolynomial, PolyIdeal]:
    """det(d f_i / d x_j) of a standard étale A -> B and h^0(B)."""
    added = [g for g in morphism.target.generators if g not in morphism.source]
    variables = [g for g in added if g.degree == 0]
    cells = [g for g in added if g.degree == -1]
    if len(variables) != len(cells) or len(added) != len(variables) + len(cells):
        raise InvalidMorphismError(
            f"`{morphism.name}` does not have the shape of a standard étale map."
        )
    presentation = h0_presentation(morphism.target)
    if not variables:
        return GradedPolynomial.one(), presentation
    ring = presentation.ring
    domain = ring.to_domain()
    rows = [
        [
            presentation.to_ring(graded_partial(morphism.target.d(xi), x))
            for x in variables
        ]
        for xi in cells
    ]
    det = DomainMatrix(rows, (len(cells), len(variables)), domain).det()
    return presentation.from_ring(det), presentation


def jacobian_unit_check(
    morphism: DGAMorphism, limits: Limits = DEFAULT_LIMITS
) -> Verdict:
    """Is the Jacobian determinant a unit in h^0(A)[x]/(f)?"""
    det, presentation = jacobian_determinant(morphism)
    scope = f"h0({morphism.target.name}) = {presentation}"
    try:
        certificate = is_unit_mod(det, presentation, limits)
    except ResourceLimitError as exc:
        return Verdict(
            "jacobian_unit", None, scope, diagnostics=[f"inconclusive(resource): {exc}"]
        )
    witness = {"determinant": str(det)}
    if certificate.inverse is not None:
        witness["inverse"] = str(certificate.inverse)
    return Verdict("jacobian_unit", certificate.is_unit, scope, witness)


def point_morphism(algebra: ResolvingAlgebra, target: ResolvingAlgebra, augmentation):
    """A -> k -> target, the augmentation followed by the unit."""
    return DGAMorphism(
        algebra,
        target,
        {
            g: GradedPolynomial.constant(augmentation.values[g])
            for g in algebra.degree_zero_generators
        },
        name=f"{augmentation.name}->{target.name}",
    )


def _restriction_matrix(
    morphism: DGAMorphism,
    target_der: DerComplex,
    source_der: DerComplex,
    r: int,
) -> SparseRationalMatrix:
    """D -> D o f, from Der(B, L)^r to Der(A, L)^r."""
    columns = []
    for g, m in target_der.space(r):
        derivation = DerivationElement(
            target_der.morphism, {g: GradedPolynomial.from_monomial(m)}, r
        )
        pulled = DerivationElement(
            source_der.morphism,
            {
                a: target_der.evaluate(derivation, morphism.images[a])
                for a in morphism.source.generators
            },
            r,
        )
        vector = source_der.vector(pulled)
        columns.append({i: v for i, v in enumerate(vector) if v})
    return SparseRationalMatrix.from_columns(len(source_der.space(r)), columns)


def der_criterion(
    morphism: DGAMorphism,
    augmentation: Augmentation,
    n_max: int = 2,
    degrees: Optional[Sequence[int]] = None,
) -> Verdict:
    """
    Compare h^r Der(B, Lambda_n) -> h^r Der(A, Lambda_n) through the point
    for n = 1..n_max; all isomorphisms is the Lambda_n form of the
    acyclicity of L_{B/A} (x) k.
    """
    _require_valid(morphism)
    source_point = augmentation.pullback(morphism)
    amplitude = max(morphism.source.amplitude, morphism.target.amplitude)
    failures = []
    for n in range(1, n_max + 1):
        lam = lambda_algebra(n)
        target_der = DerComplex(point_morphism(morphism.target, lam, augmentation))
        source_der = DerComplex(point_morphism(morphism.source, lam, source_point))
        compared = degrees
        if compared is None:
            compared = range(-n - amplitude, amplitude + 1)
        for r in compared:
            window = [r - 1, r, r + 1]
            target_complex = target_der.complex(window)
            source_complex = source_der.complex(window)
            target_h = cohomology(target_complex)
            source_h = cohomology(source_complex)
            rank = cohomology_map_rank(
                target_complex,
                source_complex,
                _restriction_matrix(morphism, target_der, source_der, r),
                r,
                target_h,
            )
            if not (target_h.dimension(r) == source_h.dimension(r) == rank):
                failures.append({"n": n, "degree": r})
    return Verdict(
        check="der_criterion",
        holds=not failures,
        scope=f"point {augmentation.name}, Lambda_1..Lambda_{n_max}",
        witness={"failures": failures} if failures else None,
    )


def composite_is_etale(
    first: DGAMorphism, second: DGAMorphism, augmentation: Augmentation
) -> Verdict:
    return is_etale_at(compose(second, first), augmentation)
