import pytest

from dg_resolver.dga import DGAMorphism, ResolvingAlgebra, identity
from dg_resolver.exceptions import (
    InvalidElementError,
    NotACocycleError,
    PreconditionError,
)
from dg_resolver.forms import SimplexForm, constant_simplex, coordinates, integrate
from dg_resolver.linearization import (
    boundary_witness,
    cohomology_class,
    concat_witness,
    der_transport,
    derivation_differential,
    extension_obstruction,
    linearized_class_check,
    standard_derivation,
    well_definedness_homotopy,
    xi_ell,
    xi_P,
    xi_zero,
    xi_zero_homotopy,
)
from dg_resolver.modules import DerivationElement
from dg_resolver.polynomials import Generator


def interval():
    (t,), (dt,) = coordinates(1)
    return t.as_polynomial(), dt.as_polynomial()


def affine_line():
    return ResolvingAlgebra([Generator.create("x", 0)], name="A1")


def odd_line():
    """Free on one class e of degree -1, so h^-1 is spanned by e."""
    return ResolvingAlgebra([Generator.create("e", -1)], name="L1")


def killed_line():
    """k{e, f} with d f = e: acyclic below degree 0."""
    e = Generator.create("e", -1)
    f = Generator.create("f", -2)
    return ResolvingAlgebra([e, f], {f: e.as_polynomial()}, name="K")


def node():
    x = Generator.create("x", 0)
    xi = Generator.create("xi", -1)
    return ResolvingAlgebra([x, xi], {xi: x.as_polynomial() ** 2}, name="node")


def point_into(target):
    source = affine_line()
    return source, DGAMorphism(source, target, name="P")


class TestXi:
    def test_xi_one(self):
        target = odd_line()
        source, morphism = point_into(target)
        x = source.generator("x")
        derivation = DerivationElement(morphism, {x: target["e"]}, -1)
        simplex = xi_ell(morphism, derivation, 1)
        _, dt = interval()
        assert simplex.images[x] == dt * target["e"]
        assert simplex.validate().ok
        assert linearized_class_check(morphism, derivation, x, 1)
        assert standard_derivation(simplex, morphism).values == {x: target["e"]}

    def test_xi_two_carries_the_sign(self):
        e = Generator.create("e", -2)
        target = ResolvingAlgebra([e], name="L2")
        source, morphism = point_into(target)
        x = source.generator("x")
        derivation = DerivationElement(morphism, {x: target["e"]}, -2)
        simplex = xi_ell(morphism, derivation, 2)
        (dt1, dt2) = [g.as_polynomial() for g in coordinates(2)[1]]
        assert simplex.images[x] == -2 * dt1 * dt2 * target["e"]
        assert standard_derivation(simplex, morphism).values == {x: target["e"]}

    def test_degree_mismatch(self):
        target = odd_line()
        source, morphism = point_into(target)
        derivation = DerivationElement(
            morphism, {source.generator("x"): target["e"]}, -1
        )
        with pytest.raises(InvalidElementError, match="degree -2"):
            xi_ell(morphism, derivation, 2)
        with pytest.raises(InvalidElementError, match="l >= 1"):
            xi_ell(morphism, derivation, 0)

    def test_non_cocycle_is_rejected(self):
        target = killed_line()
        source, morphism = point_into(target)
        derivation = DerivationElement(
            morphism, {source.generator("x"): target["f"]}, -2
        )
        assert derivation_differential(derivation).values == {
            source.generator("x"): target["e"]
        }
        with pytest.raises(NotACocycleError, match="not a cocycle"):
            xi_ell(morphism, derivation, 2)

    def test_xi_zero(self):
        algebra = affine_line()
        morphism = identity(algebra)
        x = algebra.generator("x")
        moved = xi_zero(morphism, DerivationElement(morphism, {x: 1}, 0))
        assert moved.apply(algebra["x"]) == algebra["x"] + 1

    def test_xi_zero_needs_differentials_in_the_base(self):
        x = Generator.create("x", 0)
        w = Generator.create("w", -1)
        source = ResolvingAlgebra([x, w], {w: x.as_polynomial()}, name="B")
        morphism = DGAMorphism(source, odd_line())
        with pytest.raises(PreconditionError, match="must lie in the base"):
            xi_zero(morphism, DerivationElement(morphism, {}, 0))


class TestHomotopies:
    def test_well_definedness(self):
        target = killed_line()
        source, morphism = point_into(target)
        x = source.generator("x")
        zero = DerivationElement(morphism, {}, -1)
        correction = DerivationElement(morphism, {x: target["f"]}, -2)
        witness = well_definedness_homotopy(morphism, zero, correction, 1)
        assert witness.shifted.values == {x: target["e"]}
        assert witness.homotopy.ell == 1
        assert witness.homotopy.label == "s"
        assert witness.to_dict()["shifted"] == {"x": "e"}

    def test_xi_zero_homotopy(self):
        y = Generator.create("y", 0)
        e = Generator.create("e", -1)
        target = ResolvingAlgebra([y, e], {e: y.as_polynomial()}, name="T")
        source = affine_line()
        x = source.generator("x")
        morphism = DGAMorphism(source, target, {x: target["y"]}, name="P")
        zero = DerivationElement(morphism, {}, 0)
        correction = DerivationElement(morphism, {x: target["e"]}, -1)
        witness = xi_zero_homotopy(morphism, zero, correction)
        assert witness.shifted.values == {x: target["y"]}
        assert witness.start.apply(source["x"]) == target["y"]
        assert witness.end.apply(source["x"]) == 2 * target["y"]
        assert witness.homotopy.validate().ok

    def test_concatenation(self):
        target = odd_line()
        source, morphism = point_into(target)
        x = source.generator("x")
        derivation = DerivationElement(morphism, {x: target["e"]}, -1)
        simplex = xi_ell(morphism, derivation, 1)
        witness = concat_witness(simplex, simplex, morphism)
        assert witness.simplex.ell == 2
        assert witness.faces == {0: "Xi_1", 1: "Xi_1", 2: "Xi_1"}
        assert standard_derivation(witness.composite, morphism).values == {
            x: 2 * target["e"]
        }


class TestBoundaryWitness:
    def test_connecting_derivation(self):
        x = Generator.create("x", 0)
        w = Generator.create("w", -1)
        source = ResolvingAlgebra([x, w], {w: x.as_polynomial()}, name="B")
        sub = ResolvingAlgebra([x], name="B'")
        target = odd_line()
        morphism = DGAMorphism(source, target, name="P")
        derivation = DerivationElement(morphism, {x: target["e"]}, -1)
        witness = boundary_witness(morphism, derivation, sub, 1)
        t, dt = interval()
        assert witness.lift.images[w] == t * target["e"]
        assert witness.lift.images[x] == dt * target["e"]
        assert witness.connecting.degree == 0
        assert witness.connecting.values == {w: target["e"]}
        assert witness.face.apply(source["w"]) == target["e"]

    def test_derivation_must_live_on_the_subalgebra(self):
        x = Generator.create("x", 0)
        w = Generator.create("w", -1)
        source = ResolvingAlgebra([x, w], {w: x.as_polynomial()}, name="B")
        sub = ResolvingAlgebra([x], name="B'")
        target = ResolvingAlgebra([Generator.create("e", -2)], name="L2")
        morphism = DGAMorphism(source, target)
        derivation = DerivationElement(morphism, {w: target["e"]}, -1)
        with pytest.raises(PreconditionError, match="must live on"):
            boundary_witness(morphism, derivation, sub, 1)


class TestClasses:
    def test_nonzero_class(self):
        target = odd_line()
        result = cohomology_class(target, target["e"], -1)
        assert not result.is_zero
        assert result.dimension == 1
        assert len(result.coordinates) == 1
        assert result.coordinates[0] != 0

    def test_exact_element_has_a_primitive(self):
        target = killed_line()
        result = cohomology_class(target, target["e"], -1)
        assert result.is_zero
        assert result.primitive == target["f"]
        assert result.to_dict()["primitive"] == "f"

    def test_errors(self):
        target = killed_line()
        with pytest.raises(NotACocycleError, match="not closed"):
            cohomology_class(target, target["f"], -2)
        with pytest.raises(InvalidElementError, match="does not have degree -2"):
            cohomology_class(target, target["e"], -2)

    def test_xi_p(self):
        x = Generator.create("x", 0)
        w = Generator.create("w", -1)
        source = ResolvingAlgebra([x, w], {w: x.as_polynomial()}, name="B")
        target = odd_line()
        morphism = DGAMorphism(source, target)
        derivation = DerivationElement(morphism, {x: target["e"]}, -1)
        result = xi_P(morphism, derivation, w)
        assert result.element == target["e"]
        assert not result.is_zero


class TestExtensionObstruction:
    def extension(self, boundary):
        u = Generator.create("u", 0)
        v = Generator.create("v", -1)
        sub = ResolvingAlgebra([u], name="B'")
        algebra = ResolvingAlgebra([u, v], {v: boundary(u.as_polynomial())}, name="B")
        target = node()
        morphism = DGAMorphism(sub, target, {u: target["x"]}, name="h")
        return morphism, algebra, v, target

    def test_obstruction_vanishes(self):
        morphism, algebra, v, target = self.extension(lambda u: u**2)
        obstruction = extension_obstruction(morphism, algebra, v)
        assert obstruction.vanishes
        assert obstruction.extension.apply(algebra["v"]) == target["xi"]
        assert obstruction.to_dict()["extension"] == {"u": "x", "v": "xi"}

    def test_obstruction_survives(self):
        morphism, algebra, v, _ = self.extension(lambda u: u)
        obstruction = extension_obstruction(morphism, algebra, v)
        assert not obstruction.vanishes
        assert obstruction.extension is None

    def test_one_generator_at_a_time(self):
        u = Generator.create("u", 0)
        v = Generator.create("v", -1)
        w = Generator.create("w", -1)
        sub = ResolvingAlgebra([u], name="B'")
        algebra = ResolvingAlgebra([u, v, w], name="B")
        morphism = DGAMorphism(sub, node())
        with pytest.raises(PreconditionError, match="adds more than"):
            extension_obstruction(morphism, algebra, v)


class TestTransport:
    def test_constant_homotopy_transports_identically(self):
        target = odd_line()
        _, morphism = point_into(target)
        transport = der_transport(constant_simplex(morphism, 1), 1)
        assert transport.defects == []
        assert transport.is_isomorphism
        assert transport.to_dict() == {
            "degree": -1,
            "matrix": [["1"]],
            "defects": [],
            "t_degree": 0,
        }


class TestLinearizedSquare:
    @pytest.mark.parametrize(
        "ell, sign", [(1, 1), (2, -1)], ids=["interval", "triangle"]
    )
    def test_square_commutes(self, ell, sign):
        target = ResolvingAlgebra([Generator.create("e", -ell)], name=f"L{ell}")
        source, morphism = point_into(target)
        x = source.generator("x")
        derivation = DerivationElement(morphism, {x: 3 * target["e"]}, -ell)
        assert linearized_class_check(morphism, derivation, x, ell)
        simplex = xi_ell(morphism, derivation, ell)
        moved = SimplexForm(simplex.images[x], ell, ambient=target)
        assert integrate(moved) == sign * 3 * target["e"]

    def test_exact_values_give_the_zero_class(self):
        target = killed_line()
        source, morphism = point_into(target)
        x = source.generator("x")
        derivation = DerivationElement(morphism, {x: target["e"]}, -1)
        assert linearized_class_check(morphism, derivation, x, 1)
        moved = SimplexForm(xi_ell(morphism, derivation, 1).images[x], 1)
        assert cohomology_class(target, integrate(moved), -1).is_zero

    def test_base_point_moves_with_the_simplex(self):
        y = Generator.create("y", 0)
        e = Generator.create("e", -1)
        target = ResolvingAlgebra([y, e], name="T")
        source = affine_line()
        x = source.generator("x")
        morphism = DGAMorphism(source, target, {x: target["y"]}, name="P")
        derivation = DerivationElement(morphism, {x: target["e"]}, -1)
        simplex = xi_ell(morphism, derivation, 1)
        _, dt = interval()
        assert simplex.images[x] == target["y"] + dt * target["e"]
        moved = SimplexForm(simplex.images[x], 1, ambient=target)
        assert integrate(moved) == target["e"]
