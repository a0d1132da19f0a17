"""
Effective resolutions: the diagonal A (x) A[xi] -> A, resolutions of
morphisms through it, and derived tensor products.

Every existence step is a bounded linear solve for a primitive; the cap on
the total exponent of the unknown doubles on failure, and a failure after
the last round is reported, never ignored.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .config import DEFAULT_LIMITS, Limits
from .dga import (
    DGAMorphism,
    ResolvingAlgebra,
    TensorProduct,
    copy_algebra,
    tensor,
    validate_algebra,
    validate_morphism,
)
from .exceptions import (
    InvalidAlgebraError,
    InvalidElementError,
    InvalidMorphismError,
    PreconditionError,
    SolverCapExceeded,
)
from .groebner import PolyIdeal
from .linalg import SparseRationalMatrix, solve
from .polynomials import (
    Generator,
    GradedPolynomial,
    Monomial,
    linear_combination,
    monomials_of_degree,
    substitute,
)

logger = logging.getLogger(__name__)


@dataclass
class DSolveResult:
    """A primitive g with dg = target, or None when none exists up to `cap`."""

    solution: Optional[GradedPolynomial]
    cap: int

    @property
    def found(self) -> bool:
        return self.solution is not None

    def to_dict(self):
        data = {
            "found": self.found,
            "cap": self.cap,
            "solution": None if self.solution is None else str(self.solution),
        }
        return {k: v for k, v in data.items() if v is not None}


def _unknowns(algebra: ResolvingAlgebra, degree: int, cap: int) -> List[Monomial]:
    if degree > 0:
        return []
    return monomials_of_degree(algebra.generators, degree, max_exponent=cap)


def _system(
    columns: Sequence[GradedPolynomial], rows: Dict[Monomial, int]
) -> List[Dict[int, Fraction]]:
    result = []
    for column in columns:
        entries = {}
        for monomial, coefficient in column.terms.items():
            if monomial not in rows:
                rows[monomial] = len(rows)
            entries[rows[monomial]] = coefficient
        result.append(entries)
    return result


def _solve_once(
    algebra: ResolvingAlgebra, target: GradedPolynomial, degree: int, cap: int
) -> Optional[GradedPolynomial]:
    unknowns = _unknowns(algebra, degree, cap)
    rows: Dict[Monomial, int] = {}
    columns = _system(
        [algebra.d(GradedPolynomial.from_monomial(m)) for m in unknowns], rows
    )
    rhs_entries = _system([target], rows)[0]
    matrix = SparseRationalMatrix.from_columns(len(rows), columns)
    rhs = [Fraction(0)] * len(rows)
    for i, value in rhs_entries.items():
        rhs[i] = value
    logger.debug(
        "d-solve in %s: %s unknowns, %s equations, cap %s",
        algebra.name,
        len(unknowns),
        len(rows),
        cap,
    )
    solved = solve(matrix, rhs)
    if not solved.consistent:
        return None
    return linear_combination(
        solved.solution, [GradedPolynomial.from_monomial(m) for m in unknowns]
    )


def _caps(cap: Optional[int], limits: Limits) -> List[int]:
    first = limits.solver_cap if cap is None else cap
    return [first * 2**k for k in range(limits.escalation_rounds + 1)]


def bounded_d_solve(
    algebra: ResolvingAlgebra,
    target: GradedPolynomial,
    cap: Optional[int] = None,
    limits: Limits = DEFAULT_LIMITS,
    escalate: bool = True,
) -> DSolveResult:
    """
    Find g with d(g) = target among polynomials whose monomials have total
    exponent <= cap, doubling the cap on failure when `escalate` is set.
    """
    target = GradedPolynomial.coerce(target)
    algebra.ensure_contains(target, "target")
    first = limits.solver_cap if cap is None else cap
    if not target:
        return DSolveResult(GradedPolynomial.zero(), first)
    if not target.is_homogeneous:
        raise PreconditionError(f"The target `{target}` is not homogeneous.")
    if algebra.d(target):
        raise PreconditionError(
            f"The target `{target}` is not closed: d = {algebra.d(target)}."
        )
    caps = _caps(cap, limits) if escalate else [first]
    for attempt in caps:
        solution = _solve_once(algebra, target, target.degree - 1, attempt)
        if solution is not None:
            return DSolveResult(solution, attempt)
        logger.debug("No primitive of %s up to cap %s", target, attempt)
    return DSolveResult(None, caps[-1])


@dataclass
class DiagonalWitness:
    generator: str
    cell: str
    h: GradedPolynomial
    g: GradedPolynomial
    cap: int

    def to_dict(self):
        return {"cell": self.cell, "h": str(self.h), "g": str(self.g), "cap": self.cap}


@dataclass
class DiagonalResolution:
    """
    A (x) A[xi] with d xi_i = z_i - y_i + h_i and the projection
    delta: y_i, z_i -> x_i, xi_i -> g_i.
    """

    source: ResolvingAlgebra
    algebra: ResolvingAlgebra
    projection: DGAMorphism
    left: DGAMorphism
    right: DGAMorphism
    tensor: TensorProduct
    witnesses: List[DiagonalWitness]
    cells: Tuple[Generator, ...]

    def witness(self, generator: str) -> DiagonalWitness:
        for witness in self.witnesses:
            if witness.generator == generator:
                return witness
        raise KeyError(f"No witness for `{generator}`.")

    def to_dict(self):
        return {
            "algebra": self.algebra.name,
            "witnesses": {w.generator: w.to_dict() for w in self.witnesses},
            "differential": {
                c.name: str(self.algebra.d(c)) for c in self.cells
            },
        }


def _check_ordering(algebra: ResolvingAlgebra) -> None:
    seen = set()
    previous = 0
    for g in algebra.generators:
        if g.degree > previous:
            raise InvalidAlgebraError(
                f"Generators of `{algebra.name}` must come in non-increasing "
                f"degree; `{g.name}` of degree {g.degree} follows degree {previous}."
            )
        previous = g.degree
        late = [h.name for h in algebra.d(g).generators() if h not in seen]
        if late:
            raise InvalidAlgebraError(
                f"d({g.name}) in `{algebra.name}` uses the later generators "
                f"`{', '.join(late)}`."
            )
        seen.add(g)


def _joint_solve(
    sub: ResolvingAlgebra,
    algebra: ResolvingAlgebra,
    partial: Dict[Generator, GradedPolynomial],
    target: GradedPolynomial,
    degree: int,
    cap: int,
) -> Optional[Tuple[GradedPolynomial, GradedPolynomial]]:
    """
    Solve d h = target in `sub` and d g = delta(h) in `algebra` together.
    """
    h_unknowns = _unknowns(sub, degree, cap)
    g_unknowns = _unknowns(algebra, degree - 1, cap)
    top_rows: Dict[Monomial, int] = {}
    bottom_rows: Dict[Monomial, int] = {}
    h_columns = []
    for m in h_unknowns:
        p = GradedPolynomial.from_monomial(m)
        h_columns.append(
            (
                _system([sub.d(p)], top_rows)[0],
                _system([substitute(p, partial, check=False)], bottom_rows)[0],
            )
        )
    g_columns = [
        _system([-algebra.d(GradedPolynomial.from_monomial(m))], bottom_rows)[0]
        for m in g_unknowns
    ]
    rhs_top = _system([target], top_rows)[0]
    offset = len(top_rows)
    columns = []
    for top, bottom in h_columns:
        column = dict(top)
        column.update({offset + i: v for i, v in bottom.items()})
        columns.append(column)
    for bottom in g_columns:
        columns.append({offset + i: v for i, v in bottom.items()})
    matrix = SparseRationalMatrix.from_columns(offset + len(bottom_rows), columns)
    rhs = [Fraction(0)] * matrix.rows
    for i, value in rhs_top.items():
        rhs[i] = value
    solved = solve(matrix, rhs)
    if not solved.consistent:
        return None
    h = linear_combination(
        solved.solution[: len(h_unknowns)],
        [GradedPolynomial.from_monomial(m) for m in h_unknowns],
    )
    g = linear_combination(
        solved.solution[len(h_unknowns) :],
        [GradedPolynomial.from_monomial(m) for m in g_unknowns],
    )
    return h, g


def _fresh_names(taken: set, base: str, count: int) -> List[str]:
    names = []
    index = 1
    while len(names) < count:
        candidate = f"{base}{index}"
        if candidate not in taken:
            names.append(candidate)
            taken.add(candidate)
        index += 1
    return names


def diagonal_resolution(
    algebra: ResolvingAlgebra,
    cap: Optional[int] = None,
    limits: Limits = DEFAULT_LIMITS,
) -> DiagonalResolution:
    """
    Resolve the multiplication A (x) A -> A generator by generator.

    For x_i the cell xi_i gets d xi_i = z_i - y_i + h_i where h_i, a
    polynomial in the earlier y, z and xi, solves
    d h_i = f_i(y) - f_i(z) for f_i = d x_i; delta(xi_i) = g_i solves
    d g_i = delta(h_i) in A.
    """
    _check_ordering(algebra)
    validate_algebra(algebra).raise_if_invalid(InvalidAlgebraError)
    product = tensor(
        algebra,
        algebra,
        left_name=lambda index, g: f"y{index + 1}",
        right_name=lambda index, g: f"z{index + 1}",
        name=f"{algebra.name}(x){algebra.name}[xi]",
    )
    ys = [product.left.images[x].generators()[0] for x in algebra.generators]
    zs = [product.right.images[x].generators()[0] for x in algebra.generators]
    cell_names = _fresh_names(
        set(product.algebra.names), "xi'", len(algebra.generators)
    )
    cells: List[Generator] = []
    differential = dict(product.algebra.differential)
    partial: Dict[Generator, GradedPolynomial] = {}
    witnesses: List[DiagonalWitness] = []
    for index, x in enumerate(algebra.generators):
        partial[ys[index]] = x.as_polynomial()
        partial[zs[index]] = x.as_polynomial()
        sub = ResolvingAlgebra(
            ys[:index] + zs[:index] + cells,
            {
                g: differential[g]
                for g in ys[:index] + zs[:index] + cells
                if g in differential
            },
            name=f"step{index + 1}",
        )
        f = algebra.d(x)
        target = substitute(f, product.left.images, check=False) - substitute(
            f, product.right.images, check=False
        )
        found = None
        for attempt in _caps(cap, limits):
            h_result = bounded_d_solve(sub, target, attempt, limits, escalate=False)
            if h_result.found:
                image = substitute(h_result.solution, partial, check=False)
                g_result = bounded_d_solve(
                    algebra, image, attempt, limits, escalate=False
                )
                if g_result.found:
                    found = (h_result.solution, g_result.solution, attempt)
                    break
            joint = _joint_solve(sub, algebra, partial, target, x.degree, attempt)
            if joint is not None:
                found = (joint[0], joint[1], attempt)
                break
            logger.debug("Diagonal step %s failed at cap %s", x.name, attempt)
        if found is None:
            raise SolverCapExceeded(
                f"No witness for generator {index + 1} (`{x.name}`) up to cap "
                f"{_caps(cap, limits)[-1]}.",
                cap=_caps(cap, limits)[-1],
                generator=x.name,
            )
        h, g, used = found
        cell = Generator.create(cell_names[index], x.degree - 1)
        boundary = zs[index].as_polynomial() - ys[index].as_polynomial() + h
        if boundary:
            differential[cell] = boundary
        cells.append(cell)
        partial[cell] = g
        witnesses.append(DiagonalWitness(x.name, cell.name, h, g, used))
        logger.info("Diagonal cell %s: d = %s, delta = %s", cell.name, boundary, g)
    resolved = ResolvingAlgebra(
        product.algebra.generators + tuple(cells),
        differential,
        name=product.algebra.name,
    )
    validate_algebra(resolved).raise_if_invalid(InvalidAlgebraError)
    projection = DGAMorphism(resolved, algebra, partial, name="delta")
    validate_morphism(projection).raise_if_invalid(InvalidMorphismError)
    left = DGAMorphism(algebra, resolved, dict(product.left.images), name="left")
    right = DGAMorphism(algebra, resolved, dict(product.right.images), name="right")
    return DiagonalResolution(
        source=algebra,
        algebra=resolved,
        projection=projection,
        left=left,
        right=right,
        tensor=product,
        witnesses=witnesses,
        cells=tuple(cells),
    )


@dataclass
class MorphismResolution:
    """A -> B' -> B with A -> B' resolving and B' -> B a quasi-isomorphism."""

    algebra: ResolvingAlgebra
    resolving: DGAMorphism
    projection: DGAMorphism

    def to_dict(self):
        return {
            "algebra": self.algebra.name,
            "generators": {
                g.name: g.degree for g in self.algebra.generators
            },
            "differential": {
                g.name: str(self.algebra.d(g))
                for g in self.algebra.generators
                if self.algebra.d(g)
            },
            "resolving": {g.name: str(v) for g, v in self.resolving.images.items()},
            "projection": {g.name: str(v) for g, v in self.projection.images.items()},
        }


def _cell_differentials(
    diagonal: DiagonalResolution,
    left_images: Dict[Generator, GradedPolynomial],
    right_images: Dict[Generator, GradedPolynomial],
    taken: set,
) -> Tuple[List[Generator], Dict[Generator, GradedPolynomial]]:
    """
    Cells xi_i with d xi_i = c_i - b_i + h_i(b, c, xi) where y_j -> b_j,
    z_j -> c_j and the diagonal cells map to the new ones.
    """
    source = diagonal.source
    ys = [diagonal.left.images[x].generators()[0] for x in source.generators]
    zs = [diagonal.right.images[x].generators()[0] for x in source.generators]
    names = _fresh_names(taken, "xi'", len(diagonal.cells))
    cells = [
        Generator.create(name, old.degree) for name, old in zip(names, diagonal.cells)
    ]
    specialize: Dict[Generator, GradedPolynomial] = {}
    for x, y, z in zip(source.generators, ys, zs):
        specialize[y] = left_images[x]
        specialize[z] = right_images[x]
    for old, new in zip(diagonal.cells, cells):
        specialize[old] = new.as_polynomial()
    differential = {}
    for old, new in zip(diagonal.cells, cells):
        value = substitute(diagonal.algebra.d(old), specialize, check=False)
        if value:
            differential[new] = value
    return cells, differential


def resolve_morphism(
    morphism: DGAMorphism, diagonal: DiagonalResolution
) -> MorphismResolution:
    """
    A -> B (x) A[xi] -> B: the diagonal resolution of A pushed along f on
    the left factor; B keeps its generators.
    """
    if diagonal.source.generators != morphism.source.generators:
        raise InvalidMorphismError(
            f"The diagonal resolution is not for `{morphism.source.name}`."
        )
    source, target = morphism.source, morphism.target
    taken = set(target.names)

    def rename(index, g):
        candidate = g.name
        while candidate in taken:
            candidate += "'"
        taken.add(candidate)
        return candidate

    copy, mapping = copy_algebra(source, rename)
    copies = {x: mapping[x].as_polynomial() for x in source.generators}
    cells, cell_differential = _cell_differentials(
        diagonal, dict(morphism.images), copies, taken
    )
    differential = {**target.differential, **copy.differential, **cell_differential}
    algebra = ResolvingAlgebra(
        target.generators + copy.generators + tuple(cells),
        differential,
        name=f"{target.name}(x){source.name}[xi]",
    )
    validate_algebra(algebra).raise_if_invalid(InvalidAlgebraError)
    resolving = DGAMorphism(source, algebra, copies, name="resolving")
    projection_images = {g: g.as_polynomial() for g in target.generators}
    for x in source.generators:
        projection_images[mapping[x]] = morphism.images[x]
    for witness, cell in zip(diagonal.witnesses, cells):
        projection_images[cell] = morphism.apply(witness.g)
    projection = DGAMorphism(algebra, target, projection_images, name="projection")
    for candidate in (resolving, projection):
        validate_morphism(candidate).raise_if_invalid(InvalidMorphismError)
    logger.info(
        "Resolved %s through %s generators", morphism.name, len(algebra.generators)
    )
    return MorphismResolution(algebra, resolving, projection)


@dataclass
class DerivedTensor:
    """R = B (x) C[xi] with the square A -> B, C -> R."""

    algebra: ResolvingAlgebra
    left: DGAMorphism
    right: DGAMorphism
    cells: Tuple[Generator, ...] = field(default_factory=tuple)

    def to_dict(self):
        return {
            "algebra": self.algebra.name,
            "generator_count": len(self.algebra.generators),
            "cells": {c.name: str(self.algebra.d(c)) for c in self.cells},
        }


def derived_tensor(
    f: DGAMorphism, g: DGAMorphism, diagonal: DiagonalResolution
) -> DerivedTensor:
    if f.source.generators != g.source.generators:
        raise InvalidMorphismError(
            f"`{f.name}` and `{g.name}` do not share a source algebra."
        )
    if diagonal.source.generators != f.source.generators:
        raise InvalidMorphismError(
            f"The diagonal resolution is not for `{f.source.name}`."
        )
    product = tensor(f.target, g.target)
    b_images = {x: product.left.apply(f.images[x]) for x in f.source.generators}
    c_images = {x: product.right.apply(g.images[x]) for x in f.source.generators}
    cells, cell_differential = _cell_differentials(
        diagonal, b_images, c_images, set(product.algebra.names)
    )
    algebra = ResolvingAlgebra(
        product.algebra.generators + tuple(cells),
        {**product.algebra.differential, **cell_differential},
        name=f"{f.target.name}(x)L{g.target.name}",
    )
    validate_algebra(algebra).raise_if_invalid(InvalidAlgebraError)
    left = DGAMorphism(f.target, algebra, dict(product.left.images), name="left")
    right = DGAMorphism(g.target, algebra, dict(product.right.images), name="right")
    for candidate in (left, right):
        validate_morphism(candidate).raise_if_invalid(InvalidMorphismError)
    return DerivedTensor(algebra, left, right, tuple(cells))


def tor0_presentation(
    f: DGAMorphism, g: DGAMorphism, result: DerivedTensor
) -> PolyIdeal:
    """
    h^0(B) (x)_{h^0(A)} h^0(C) in the degree-0 variables of R:
    relations of B, relations of C, and f(a) - g(a) for degree-0 a.
    """
    variables = tuple(result.algebra.degree_zero_generators)
    relations = []
    for morphism, inclusion in ((f, result.left), (g, result.right)):
        for xi in morphism.target.generators_of_degree(-1):
            value = morphism.target.d(xi)
            if value:
                relations.append(inclusion.apply(value))
    for a in f.source.degree_zero_generators:
        difference = result.left.apply(f.images[a]) - result.right.apply(g.images[a])
        if difference:
            relations.append(difference)
    if any(set(r.generators()) - set(variables) for r in relations):
        raise InvalidElementError("Tor_0 relations leave the degree-0 variables.")
    return PolyIdeal(variables, tuple(relations))
