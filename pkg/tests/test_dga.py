import pytest

from dg_resolver.dga import (
    Augmentation,
    Cell,
    DGAMorphism,
    ResolvingAlgebra,
    adjoin_cells,
    algebra_complex,
    compose,
    copy_algebra,
    graded_piece,
    graded_quotient_dimensions,
    identity,
    inclusion,
    koszul,
    lambda_algebra,
    localize,
    madic_truncate,
    standard_etale,
    tensor,
    truncation,
    truncation_map,
    validate_algebra,
    validate_morphism,
)
from dg_resolver.exceptions import (
    DomainMismatchError,
    InvalidAlgebraError,
    InvalidAugmentationError,
    InvalidCellError,
    InvalidElementError,
    UnsupportedModeError,
)
from dg_resolver.linalg import cohomology
from dg_resolver.polynomials import Generator


def affine_line():
    x = Generator.create("x", 0)
    return ResolvingAlgebra([x], name="A1")


def node():
    """k[x]{xi}/d xi = x^2, the double point at the origin."""
    x = Generator.create("x", 0)
    xi = Generator.create("xi", -1)
    return ResolvingAlgebra([x, xi], {xi: x.as_polynomial() ** 2}, name="node")


class TestResolvingAlgebra:
    def test_positive_degree_is_rejected(self):
        with pytest.raises(InvalidAlgebraError, match="degrees <= 0"):
            ResolvingAlgebra([Generator.create("p", 1)])

    def test_duplicate_names_are_rejected(self):
        first = Generator.create("x", 0)
        second = Generator.create("x", 0)
        with pytest.raises(InvalidAlgebraError, match="appears twice"):
            ResolvingAlgebra([first, second])

    def test_foreign_generator_in_differential(self):
        x = Generator.create("x", 0)
        xi = Generator.create("xi", -1)
        with pytest.raises(DomainMismatchError, match="not one of its generators"):
            ResolvingAlgebra([x], {xi: x.as_polynomial()})
        stray = Generator.create("y", 0)
        with pytest.raises(DomainMismatchError, match="not in algebra"):
            ResolvingAlgebra([x, xi], {xi: stray.as_polynomial()})

    def test_missing_weights(self):
        x = Generator.create("x", 0)
        xi = Generator.create("xi", -1)
        with pytest.raises(InvalidAlgebraError, match="declares weights"):
            ResolvingAlgebra([x, xi], weights={x: 1})

    def test_lookup(self):
        algebra = node()
        assert algebra.names == ["x", "xi"]
        assert algebra.generator("x") in algebra
        assert algebra.amplitude == 1
        assert [g.name for g in algebra.degree_zero_generators] == ["x"]
        assert algebra.d(algebra.generator("xi")) == algebra["x"] ** 2
        assert algebra.d(algebra["x"]) == 0
        assert algebra.fresh_name("x") == "x1"
        assert algebra.fresh_name("y") == "y"
        with pytest.raises(KeyError, match="no generator `z`"):
            algebra.generator("z")

    def test_differential_is_a_derivation(self):
        algebra = node()
        x, xi = algebra["x"], algebra["xi"]
        assert algebra.d(x * xi) == x**3
        assert algebra.d(xi * xi) == 0


class TestValidateAlgebra:
    def test_valid(self):
        assert validate_algebra(node()).ok
        assert validate_algebra(lambda_algebra(2)).ok

    def test_d_squared_nonzero(self):
        x = Generator.create("x", 0)
        a = Generator.create("a", -1)
        b = Generator.create("b", -2)
        algebra = ResolvingAlgebra(
            [x, a, b], {a: x.as_polynomial(), b: x.as_polynomial() * a.as_polynomial()}
        )
        report = validate_algebra(algebra)
        assert not report.ok
        assert report.violations[0].subject == "b"
        assert "d^2(b)" in report.violations[0].message

    def test_inhomogeneous_differential(self):
        x = Generator.create("x", 0)
        a = Generator.create("a", -1)
        b = Generator.create("b", -2)
        algebra = ResolvingAlgebra([x, a, b], {b: x.as_polynomial()})
        report = validate_algebra(algebra)
        assert "homogeneous of degree -1" in report.violations[0].message

    def test_weights_must_be_preserved(self):
        x = Generator.create("x", 0)
        xi = Generator.create("xi", -1)
        algebra = ResolvingAlgebra(
            [x, xi], {xi: x.as_polynomial() ** 2}, weights={x: 1, xi: 3}
        )
        report = validate_algebra(algebra)
        assert "does not preserve the weight 3" in report.violations[0].message

    def test_weights_must_be_positive(self):
        x = Generator.create("x", 0)
        algebra = ResolvingAlgebra([x], weights={x: 0})
        assert "must be positive" in validate_algebra(algebra).violations[0].message


class TestMorphisms:
    def test_unassigned_generators_go_to_zero(self):
        source, target = node(), node()
        morphism = DGAMorphism(source, target, {source.generator("x"): target["x"]})
        assert morphism["xi"] == 0
        assert not validate_morphism(morphism).ok

    def test_valid_morphism_and_composition(self):
        source, target = node(), node()
        morphism = DGAMorphism(
            source,
            target,
            {
                source.generator("x"): -target["x"],
                source.generator("xi"): target["xi"],
            },
        )
        assert validate_morphism(morphism).ok
        square = compose(morphism, morphism)
        assert square.same_as(identity(source))
        assert square.apply(source["x"] * source["xi"]) == source["x"] * source["xi"]

    def test_compose_checks_domains(self):
        first = identity(node())
        second = identity(node())
        with pytest.raises(DomainMismatchError, match="Cannot compose"):
            compose(second, first)

    def test_foreign_generator_in_assignment(self):
        source, target = node(), node()
        with pytest.raises(DomainMismatchError, match="not a generator"):
            DGAMorphism(source, target, {target.generator("x"): target["x"]})

    def test_image_outside_target(self):
        source, target = node(), node()
        with pytest.raises(DomainMismatchError, match="not in algebra"):
            DGAMorphism(source, target, {source.generator("x"): source["x"]})

    def test_inclusion(self):
        base = affine_line()
        extension = adjoin_cells(base, [("y", 0)])
        assert validate_morphism(inclusion(base, extension.algebra)).ok
        with pytest.raises(DomainMismatchError, match="not a subalgebra"):
            inclusion(node(), extension.algebra)


class TestConstructions:
    def test_copy_algebra(self):
        algebra = node()
        copy, mapping = copy_algebra(algebra, lambda index, g: g.name + "'")
        assert copy.names == ["x'", "xi'"]
        assert copy.d(mapping[algebra.generator("xi")]) == copy["x'"] ** 2
        assert mapping[algebra.generator("x")] != algebra.generator("x")

    def test_tensor_primes_clashing_names(self):
        product = tensor(node(), node())
        assert product.algebra.names == ["x", "xi", "x'", "xi'"]
        assert validate_algebra(product.algebra).ok
        assert validate_morphism(product.left).ok
        assert validate_morphism(product.right).ok

    def test_truncation(self):
        algebra = lambda_algebra(2)
        truncated = truncation(algebra, 2)
        assert truncated.algebra.names == ["x"]
        assert validate_morphism(truncated.inclusion).ok
        with pytest.raises(ValueError, match="nonnegative"):
            truncation(algebra, -1)

    def test_adjoin_cells(self):
        base = affine_line()
        extension = adjoin_cells(
            base,
            [
                Cell("xi", -1, lambda v: v["x"] ** 2),
                Cell("eta", -1, lambda v: v["x"] ** 2),
                Cell("zeta", -2, lambda v: v["xi"] - v["eta"]),
            ],
        )
        assert [g.name for g in extension.added] == ["xi", "eta", "zeta"]
        assert validate_algebra(extension.algebra).ok

    def test_adjoin_cells_rejects_bad_boundaries(self):
        base = node()
        with pytest.raises(InvalidCellError, match="clashes"):
            adjoin_cells(base, [("x", 0)])
        with pytest.raises(InvalidCellError, match="positive degree"):
            adjoin_cells(base, [("p", 1)])
        with pytest.raises(InvalidCellError, match="homogeneous"):
            adjoin_cells(base, [Cell("eta", -2, lambda v: v["x"])])
        with pytest.raises(InvalidCellError, match="not closed"):
            adjoin_cells(base, [Cell("eta", -2, lambda v: v["xi"])])

    def test_standard_etale(self):
        base = affine_line()
        morphism = standard_etale(
            base, ["y"], ["eta"], [lambda v: v["y"] ** 2 - v["x"]]
        )
        assert morphism.target.names == ["x", "y", "eta"]
        assert validate_morphism(morphism).ok
        with pytest.raises(InvalidCellError, match="as many equations"):
            standard_etale(base, ["y"], [], [])

    def test_localize_uses_fresh_names(self):
        base = affine_line()
        x = base["x"]
        morphism = localize(base, x)
        algebra = morphism.target
        assert algebra.d(algebra.generator("eta")) == algebra["y"] * x - 1
        with pytest.raises(InvalidElementError, match="degree-0"):
            localize(node(), node()["xi"])

    def test_koszul_weights(self):
        algebra = koszul(2, [lambda x: x[0] ** 2 + x[1] ** 2, lambda x: x[0] * x[1]])
        assert algebra.names == ["x1", "x2", "e1", "e2"]
        assert algebra.weights[algebra.generator("e1")] == 2
        assert validate_algebra(algebra).ok
        mixed = koszul(1, [lambda x: x[0] - 1])
        assert mixed.weights is None

    def test_lambda_algebra(self):
        with pytest.raises(ValueError, match="n >= 1"):
            lambda_algebra(0)
        assert lambda_algebra(1).names == ["x"]
        assert lambda_algebra(2).generator("xi").degree == -5


class TestAugmentation:
    def test_origin_and_evaluate(self):
        algebra = node()
        point = Augmentation.origin(algebra)
        assert point.evaluate(algebra["x"] + 3) == 3
        assert point.evaluate(algebra["xi"]) == 0
        assert point.validate().ok
        assert point.to_dict() == {"x": "0"}

    def test_values_are_checked(self):
        algebra = node()
        with pytest.raises(InvalidAugmentationError, match="no value for `x`"):
            Augmentation(algebra, {})
        with pytest.raises(InvalidAugmentationError, match="not a degree-0"):
            Augmentation(
                algebra, {algebra.generator("xi"): 1, algebra.generator("x"): 0}
            )

    def test_point_off_the_zero_locus(self):
        algebra = node()
        point = Augmentation.from_names(algebra, {"x": 1})
        report = point.validate()
        assert not report.ok
        assert report.violations[0].residue == "1"

    def test_pullback(self):
        base = affine_line()
        morphism = standard_etale(
            base, ["y"], ["eta"], [lambda v: v["y"] ** 2 - v["x"]]
        )
        point = Augmentation.from_names(morphism.target, {"x": 4, "y": 2})
        assert point.validate().ok
        assert point.pullback(morphism).values[base.generator("x")] == 4
        with pytest.raises(DomainMismatchError, match="Cannot pull"):
            Augmentation.origin(base).pullback(morphism)


class TestFiniteModels:
    def test_graded_piece_needs_weight_or_truncation(self):
        with pytest.raises(UnsupportedModeError, match="infinite-dimensional"):
            graded_piece(node(), 0)
        with pytest.raises(UnsupportedModeError, match="declares no weights"):
            graded_piece(node(), 0, weight=1)

    @pytest.mark.parametrize("n", [1, 2, 3], ids=["L1", "L2", "L3"])
    def test_lambda_cohomology(self, n):
        complex_, _ = algebra_complex(lambda_algebra(n), (-2 * n - 1, 0))
        result = cohomology(complex_)
        assert result.nonzero_degrees == [-n, 0]
        assert all(result.dimension(k) == 1 for k in (-n, 0))

    def test_lambda_two_basis(self):
        _, basis = algebra_complex(lambda_algebra(2), (-7, 0))
        assert [str(m) for m in basis[-4]] == ["x^2"]
        assert [str(m) for m in basis[-5]] == ["xi"]

    def test_node_truncation(self):
        algebra = node()
        point = Augmentation.origin(algebra)
        truncated = madic_truncate(algebra, point, 3, (-1, 0))
        assert truncated.complex().dimensions == {-1: 2, 0: 3}
        result = cohomology(truncated.complex())
        assert result.dimension(0) == 2
        assert result.dimension(-1) == 1
        assert sorted(truncated.project(algebra["x"] + 1)[0]) == [0, 1, 1]

    def test_truncation_rejects_bad_input(self):
        algebra = node()
        point = Augmentation.origin(algebra)
        with pytest.raises(ValueError, match="at least 1"):
            madic_truncate(algebra, point, 0, (-1, 0))
        with pytest.raises(ValueError, match="Degree window"):
            madic_truncate(algebra, point, 2, (0, 1))
        off = Augmentation.from_names(algebra, {"x": 1})
        with pytest.raises(InvalidAugmentationError, match="invalid"):
            madic_truncate(algebra, off, 2, (-1, 0))

    def test_truncation_map_commutes(self):
        base = affine_line()
        morphism = standard_etale(
            base, ["y"], ["eta"], [lambda v: v["y"] ** 2 - v["x"]]
        )
        point = Augmentation.from_names(morphism.target, {"x": 1, "y": 1})
        chain_map = truncation_map(morphism, point, 3, (-1, 0))
        assert chain_map.commutes()

    def test_graded_quotient_dimensions(self):
        algebra = node()
        point = Augmentation.origin(algebra)
        assert graded_quotient_dimensions(algebra, point, 1, (-1, 0)) == {-1: 1, 0: 1}
        assert graded_quotient_dimensions(algebra, point, 2, (-1, 0)) == {-1: 1, 0: 1}

    def test_weighted_pieces(self):
        algebra = koszul(1, [lambda x: x[0] ** 2])
        assert len(graded_piece(algebra, 0, weight=3)) == 1
        assert len(graded_piece(algebra, -1, weight=3)) == 1
