import pytest

from dg_resolver.config import Limits
from dg_resolver.constructions import (
    bounded_d_solve,
    derived_tensor,
    diagonal_resolution,
    resolve_morphism,
    tor0_presentation,
)
from dg_resolver.criteria import AtPoints, h0_isomorphism, is_qis
from dg_resolver.dga import (
    Augmentation,
    Cell,
    ResolvingAlgebra,
    adjoin_cells,
    identity,
    validate_algebra,
    validate_morphism,
)
from dg_resolver.exceptions import (
    InvalidAlgebraError,
    InvalidMorphismError,
    PreconditionError,
    SolverCapExceeded,
)
from dg_resolver.groebner import h0_presentation, same_ideal
from dg_resolver.polynomials import Generator


def affine_line():
    return ResolvingAlgebra([Generator.create("x", 0)], name="A1")


def node():
    x = Generator.create("x", 0)
    xi = Generator.create("xi", -1)
    return ResolvingAlgebra([x, xi], {xi: x.as_polynomial() ** 2}, name="node")


def double_point(base):
    return adjoin_cells(base, [Cell("xi", -1, lambda v: v["x"] ** 2)])


class TestBoundedDSolve:
    def test_finds_primitive(self):
        algebra = node()
        result = bounded_d_solve(algebra, algebra["x"] ** 2)
        assert result.found
        assert result.solution == algebra["xi"]
        assert algebra.d(result.solution) == algebra["x"] ** 2

    def test_reports_cap_when_nothing_is_found(self):
        algebra = node()
        limits = Limits(solver_cap=2, escalation_rounds=1)
        result = bounded_d_solve(algebra, algebra["x"], limits=limits)
        assert not result.found
        assert result.cap == 4
        assert result.to_dict() == {"found": False, "cap": 4}
        fixed = bounded_d_solve(algebra, algebra["x"], 3, limits, escalate=False)
        assert fixed.cap == 3

    def test_zero_target(self):
        result = bounded_d_solve(node(), 0, cap=2)
        assert result.found
        assert not result.solution
        assert result.to_dict() == {"found": True, "cap": 2, "solution": "0"}

    def test_preconditions(self):
        algebra = node()
        with pytest.raises(PreconditionError, match="not homogeneous"):
            bounded_d_solve(algebra, algebra["x"] + algebra["xi"])
        with pytest.raises(PreconditionError, match="not closed"):
            bounded_d_solve(algebra, algebra["xi"])


class TestDiagonalResolution:
    def test_affine_line(self):
        algebra = affine_line()
        diagonal = diagonal_resolution(algebra)
        assert diagonal.algebra.names == ["y1", "z1", "xi'1"]
        resolved = diagonal.algebra
        assert resolved.d(resolved["xi'1"]) == resolved["z1"] - resolved["y1"]
        assert diagonal.projection.apply(resolved["y1"]) == algebra["x"]
        assert not diagonal.projection.apply(resolved["xi'1"])
        assert diagonal.to_dict()["witnesses"] == {
            "x": {"cell": "xi'1", "h": "0", "g": "0", "cap": 8}
        }

    def test_node(self):
        algebra = node()
        diagonal = diagonal_resolution(algebra)
        resolved = diagonal.algebra
        assert resolved.names == ["y1", "y2", "z1", "z2", "xi'1", "xi'2"]
        assert validate_algebra(resolved).ok
        assert validate_morphism(diagonal.projection).ok
        y1, z1, cell = resolved["y1"], resolved["z1"], resolved["xi'1"]
        witness = diagonal.witness("xi")
        assert witness.cell == "xi'2"
        assert witness.h == -((y1 + z1) * cell)
        assert not witness.g
        assert resolved.d(resolved["xi'2"]) == (
            resolved["z2"] - resolved["y2"] - (y1 + z1) * cell
        )
        assert [c.degree for c in diagonal.cells] == [-1, -2]

    def test_node_diagonal_is_a_quasi_isomorphism(self):
        algebra = node()
        diagonal = diagonal_resolution(algebra, cap=4)
        resolved = diagonal.algebra
        y1, z1 = resolved["y1"], resolved["z1"]
        witness = diagonal.witness("xi")
        assert resolved.d(witness.h) == y1**2 - z1**2
        origin = Augmentation.origin(algebra)
        verdict = is_qis(diagonal.projection, AtPoints((origin,), order=4))
        assert verdict.status == "pass"
        check = h0_isomorphism(diagonal.projection)
        assert check.injective
        assert check.surjective

    def test_unknown_witness(self):
        diagonal = diagonal_resolution(affine_line())
        with pytest.raises(KeyError, match="No witness"):
            diagonal.witness("nope")

    def test_generator_order(self):
        x = Generator.create("x", 0)
        xi = Generator.create("xi", -1)
        unordered = ResolvingAlgebra([xi, x], {xi: x.as_polynomial() ** 2})
        with pytest.raises(InvalidAlgebraError, match="non-increasing"):
            diagonal_resolution(unordered)

    def test_cap_exceeded(self):
        with pytest.raises(SolverCapExceeded) as info:
            diagonal_resolution(node(), cap=1, limits=Limits(escalation_rounds=0))
        assert info.value.cap == 1
        assert info.value.generator == "xi"


class TestResolveMorphism:
    def test_inclusion_of_a_double_point(self):
        base = affine_line()
        extension = double_point(base)
        resolution = resolve_morphism(
            extension.inclusion, diagonal_resolution(base)
        )
        algebra = resolution.algebra
        assert algebra.names == ["x", "xi", "x'", "xi'1"]
        assert algebra.d(algebra["xi'1"]) == algebra["x'"] - algebra["x"]
        assert resolution.resolving.apply(base["x"]) == algebra["x'"]
        assert resolution.projection.apply(algebra["x'"]) == extension.algebra["x"]
        assert resolution.to_dict()["generators"] == {
            "x": 0,
            "xi": -1,
            "x'": 0,
            "xi'1": -1,
        }

    def test_diagonal_must_match(self):
        with pytest.raises(InvalidMorphismError, match="not for"):
            resolve_morphism(identity(node()), diagonal_resolution(affine_line()))


class TestDerivedTensor:
    def test_self_intersection_of_a_double_point(self):
        base = affine_line()
        inclusion = double_point(base).inclusion
        result = derived_tensor(inclusion, inclusion, diagonal_resolution(base))
        algebra = result.algebra
        assert algebra.names == ["x", "xi", "x'", "xi'", "xi'1"]
        assert algebra.d(algebra["xi'1"]) == algebra["x'"] - algebra["x"]
        assert result.to_dict()["generator_count"] == 5
        ideal = tor0_presentation(inclusion, inclusion, result)
        assert [v.name for v in ideal.variables] == ["x", "x'"]
        assert not ideal.is_unit_ideal()
        assert ideal.contains(algebra["x"] - algebra["x'"])
        assert ideal.contains(algebra["x"] ** 2)
        assert not ideal.contains(algebra["x"])

    def test_generators_over_the_node(self):
        algebra = node()
        left = adjoin_cells(algebra, [Cell("eta", -1, lambda v: v["x"])]).inclusion
        right = adjoin_cells(algebra, [Cell("eta", -1, lambda v: v["x"])]).inclusion
        result = derived_tensor(left, right, diagonal_resolution(algebra))
        sizes = [len(m.target.generators) for m in (left, right)]
        assert sizes == [3, 3]
        assert result.to_dict()["generator_count"] == 2 + 3 + 3
        assert validate_algebra(result.algebra).ok
        presentation = tor0_presentation(left, right, result)
        assert same_ideal(h0_presentation(result.algebra), presentation)
        assert presentation.contains(result.algebra["x"])
        assert not presentation.is_unit_ideal()

    def test_sources_must_agree(self):
        base = affine_line()
        with pytest.raises(InvalidMorphismError, match="do not share"):
            derived_tensor(
                identity(base), identity(node()), diagonal_resolution(base)
            )
