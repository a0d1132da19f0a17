"""
Exact sparse linear algebra over the rationals.

Matrices are stored as maps (row, col) -> Fraction and handed to sympy's
DomainMatrix over QQ for fraction-free Gauss-Jordan elimination. Vectors
are plain lists of Fractions; complexes use column vectors, so the
differential of degree n has shape (dim C^(n+1), dim C^n).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from .exceptions import DimensionMismatchError, PreconditionError
from .models import CohomologyMode, CohomologyResult

logger = logging.getLogger(__name__)

Vector = List[Fraction]


def to_qq(value) -> "QQ":
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def from_qq(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


@dataclass(frozen=True)
class SparseRationalMatrix:
    rows: int
    cols: int
    entries: Mapping[Tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for (i, j), value in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise DimensionMismatchError(
                    f"Entry ({i}, {j}) lies outside a {self.rows}x{self.cols} matrix."
                )
            value = Fraction(value)
            if value:
                cleaned[(i, j)] = value
        object.__setattr__(self, "entries", cleaned)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseRationalMatrix":
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "SparseRationalMatrix":
        return cls(n, n, {(i, i): Fraction(1) for i in range(n)})

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "SparseRationalMatrix":
        n_rows = len(rows)
        n_cols = len(rows[0]) if rows else 0
        return cls(
            n_rows,
            n_cols,
            {
                (i, j): Fraction(value)
                for i, row in enumerate(rows)
                for j, value in enumerate(row)
                if value
            },
        )

    @classmethod
    def from_columns(
        cls, rows: int, columns: Sequence[Mapping[int, Fraction]]
    ) -> "SparseRationalMatrix":
        return cls(
            rows,
            len(columns),
            {
                (i, j): value
                for j, column in enumerate(columns)
                for i, value in column.items()
            },
        )

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def to_domain_matrix(self) -> DomainMatrix:
        dok = {key: to_qq(value) for key, value in self.entries.items()}
        return DomainMatrix.from_dok(dok, (self.rows, self.cols), QQ)

    @classmethod
    def from_domain_matrix(cls, matrix: DomainMatrix) -> "SparseRationalMatrix":
        rows, cols = matrix.shape
        return cls(
            rows,
            cols,
            {key: from_qq(value) for key, value in matrix.to_dok().items()},
        )

    def to_dense(self) -> List[List[Fraction]]:
        dense = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), value in self.entries.items():
            dense[i][j] = value
        return dense

    def column(self, j: int) -> Vector:
        vector = [Fraction(0)] * self.rows
        for (i, k), value in self.entries.items():
            if k == j:
                vector[i] = value
        return vector

    def columns(self) -> List[Vector]:
        columns = [[Fraction(0)] * self.rows for _ in range(self.cols)]
        for (i, j), value in self.entries.items():
            columns[j][i] = value
        return columns

    def transpose(self) -> "SparseRationalMatrix":
        return SparseRationalMatrix(
            self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()}
        )

    def is_zero(self) -> bool:
        return not self.entries

    def apply(self, vector: Sequence[Fraction]) -> Vector:
        if len(vector) != self.cols:
            raise DimensionMismatchError(
                f"Cannot apply a {self.rows}x{self.cols} matrix to a vector of "
                f"length {len(vector)}."
            )
        result = [Fraction(0)] * self.rows
        for (i, j), value in self.entries.items():
            if vector[j]:
                result[i] += value * vector[j]
        return result

    def __matmul__(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        if self.cols != other.rows:
            raise DimensionMismatchError(
                f"Cannot multiply {self.rows}x{self.cols} by "
                f"{other.rows}x{other.cols}."
            )
        by_row: Dict[int, Dict[int, Fraction]] = {}
        for (k, j), value in other.entries.items():
            by_row.setdefault(k, {})[j] = value
        entries: Dict[Tuple[int, int], Fraction] = {}
        for (i, k), left in self.entries.items():
            for j, right in by_row.get(k, {}).items():
                entries[(i, j)] = entries.get((i, j), 0) + left * right
        return SparseRationalMatrix(self.rows, other.cols, entries)

    def hstack(self, *others: "SparseRationalMatrix") -> "SparseRationalMatrix":
        entries = dict(self.entries)
        offset = self.cols
        for other in others:
            if other.rows != self.rows:
                raise DimensionMismatchError(
                    f"Cannot stack a matrix with {other.rows} rows next to one "
                    f"with {self.rows} rows."
                )
            for (i, j), value in other.entries.items():
                entries[(i, j + offset)] = value
            offset += other.cols
        return SparseRationalMatrix(self.rows, offset, entries)

    def __repr__(self):
        return (
            f"{type(self).__name__}(rows={self.rows}, cols={self.cols}, "
            f"nonzero={len(self.entries)})"
        )


def _rref(matrix: SparseRationalMatrix) -> Tuple[List[Dict[int, Fraction]], Tuple]:
    """
    Reduced row echelon form by fraction-free Gauss-Jordan elimination.

    Returns the nonzero rows (as column -> value maps, pivots normalized to
    1) and the pivot columns in increasing order.
    """
    if matrix.rows == 0 or matrix.cols == 0 or not matrix.entries:
        return [], ()
    reduced, denominator, pivots = matrix.to_domain_matrix().rref_den(method="FF")
    denominator = from_qq(denominator)
    rows: List[Dict[int, Fraction]] = [{} for _ in pivots]
    for (i, j), value in reduced.to_dok().items():
        if i < len(pivots):
            rows[i][j] = from_qq(value) / denominator
    return rows, tuple(pivots)


def rank(matrix: SparseRationalMatrix) -> int:
    return len(_rref(matrix)[1])


def kernel_basis(matrix: SparseRationalMatrix) -> List[Vector]:
    """Basis of {v : Mv = 0}, one vector per free column, in column order."""
    rows, pivots = _rref(matrix)
    pivot_set = set(pivots)
    basis = []
    for free in range(matrix.cols):
        if free in pivot_set:
            continue
        vector = [Fraction(0)] * matrix.cols
        vector[free] = Fraction(1)
        for row, pivot in zip(rows, pivots):
            value = row.get(free)
            if value:
                vector[pivot] = -value
        basis.append(vector)
    return basis


@dataclass
class SolveResult:
    """
    Either one solution of Mx = b, or a certificate y with yM = 0 and
    y.b != 0 proving there is none.
    """

    solution: Optional[Vector]
    certificate: Optional[Vector] = None

    @property
    def consistent(self) -> bool:
        return self.solution is not None


def solve(matrix: SparseRationalMatrix, rhs: Sequence[Fraction]) -> SolveResult:
    if len(rhs) != matrix.rows:
        raise DimensionMismatchError(
            f"Right-hand side of length {len(rhs)} does not match "
            f"{matrix.rows} rows."
        )
    rhs = [Fraction(value) for value in rhs]
    augmented = matrix.hstack(
        SparseRationalMatrix.from_columns(
            matrix.rows, [{i: v for i, v in enumerate(rhs) if v}]
        )
    )
    rows, pivots = _rref(augmented)
    if matrix.cols in pivots:
        for candidate in kernel_basis(matrix.transpose()):
            if sum(a * b for a, b in zip(candidate, rhs)):
                return SolveResult(solution=None, certificate=candidate)
        raise PreconditionError("Inconsistent system without a certificate.")
    solution = [Fraction(0)] * matrix.cols
    for row, pivot in zip(rows, pivots):
        solution[pivot] = row.get(matrix.cols, Fraction(0))
    return SolveResult(solution=solution)


def independent_columns(matrix: SparseRationalMatrix) -> Tuple[int, ...]:
    """Greedy left-to-right choice of linearly independent columns."""
    return _rref(matrix)[1]


@dataclass
class FiniteComplex:
    """
    A cochain complex of finite-dimensional rational vector spaces.

    Attributes:
        dimensions (Dict[int, int]): dim C^n for every degree of the window.
        differentials (Dict[int, SparseRationalMatrix]): d_n : C^n -> C^(n+1);
            missing entries are zero maps.
        labels (Dict[int, List[str]], optional): Names of the basis vectors.
    """

    dimensions: Dict[int, int]
    differentials: Dict[int, SparseRationalMatrix] = field(default_factory=dict)
    labels: Optional[Dict[int, List[str]]] = None

    def __post_init__(self):
        for n, matrix in self.differentials.items():
            expected = (self.dimension(n + 1), self.dimension(n))
            if matrix.shape != expected:
                raise DimensionMismatchError(
                    f"d_{n} has shape {matrix.shape}, expected {expected}."
                )

    @property
    def degrees(self) -> List[int]:
        return sorted(self.dimensions)

    def dimension(self, n: int) -> int:
        return self.dimensions.get(n, 0)

    def differential(self, n: int) -> SparseRationalMatrix:
        matrix = self.differentials.get(n)
        if matrix is None:
            return SparseRationalMatrix.zero(self.dimension(n + 1), self.dimension(n))
        return matrix

    def squares_to_zero(self) -> bool:
        return all(
            (self.differential(n + 1) @ self.differential(n)).is_zero()
            for n in self.degrees
        )

    def euler_characteristic(self) -> int:
        return sum((-1) ** (n % 2) * dim for n, dim in self.dimensions.items())


def cohomology(
    complex_: FiniteComplex, mode: Optional[CohomologyMode] = None
) -> CohomologyResult:
    """
    dim h^n = dim ker d_n - rank d_(n-1), with representatives chosen
    greedily from the kernel basis modulo the image.
    """
    if not complex_.squares_to_zero():
        raise PreconditionError("The differentials do not square to zero.")
    dimensions = {}
    representatives = {}
    for n in complex_.degrees:
        incoming = complex_.differential(n - 1)
        kernel = kernel_basis(complex_.differential(n))
        if not kernel:
            dimensions[n] = 0
            representatives[n] = []
            continue
        stacked = incoming.hstack(
            SparseRationalMatrix.from_columns(
                complex_.dimension(n),
                [{i: v for i, v in enumerate(vector) if v} for vector in kernel],
            )
        )
        chosen = [
            kernel[j - incoming.cols]
            for j in independent_columns(stacked)
            if j >= incoming.cols
        ]
        dimensions[n] = len(chosen)
        representatives[n] = chosen
    logger.debug("Cohomology dimensions %s", dimensions)
    return CohomologyResult(
        dimensions=dimensions, representatives=representatives, mode=mode
    )


def class_coordinates(
    complex_: FiniteComplex,
    result: CohomologyResult,
    degree: int,
    vector: Sequence[Fraction],
) -> Optional[Vector]:
    """
    Coordinates of the class of a cocycle in the representative basis, or
    None when `vector` is not a cocycle.
    """
    if any(complex_.differential(degree).apply(vector)):
        return None
    reps = result.representatives.get(degree, [])
    incoming = complex_.differential(degree - 1)
    system = incoming.hstack(
        SparseRationalMatrix.from_columns(
            complex_.dimension(degree),
            [{i: v for i, v in enumerate(rep) if v} for rep in reps],
        )
    )
    solved = solve(system, vector)
    if not solved.consistent:
        return None
    return solved.solution[incoming.cols :]


def cohomology_map_rank(
    source: FiniteComplex,
    target: FiniteComplex,
    chain_map: SparseRationalMatrix,
    degree: int,
    source_cohomology: Optional[CohomologyResult] = None,
) -> int:
    """Rank of the map h^n(source) -> h^n(target) induced by `chain_map`."""
    source_cohomology = source_cohomology or cohomology(source)
    reps = source_cohomology.representatives.get(degree, [])
    incoming = target.differential(degree - 1)
    images = [chain_map.apply(rep) for rep in reps]
    stacked = incoming.hstack(
        SparseRationalMatrix.from_columns(
            target.dimension(degree),
            [{i: v for i, v in enumerate(image) if v} for image in images],
        )
    )
    return rank(stacked) - rank(incoming)
