import random
from fractions import Fraction

import pytest

from dg_resolver.dga import ResolvingAlgebra, identity, lambda_algebra
from dg_resolver.exceptions import (
    DomainMismatchError,
    InvalidElementError,
    NotACocycleError,
    PreconditionError,
)
from dg_resolver.forms import (
    SimplexForm,
    SimplexMorphism,
    boundary_shift_witness,
    check_form_identities,
    cone_contraction,
    constant_simplex,
    coordinates,
    extend_from_face,
    face_substitution,
    horn_fill,
    integrate,
    normalized_class,
    omega,
    reverse_homotopy,
    sigma,
    tau,
)
from dg_resolver.polynomials import Generator


def coords(ell):
    ts, dts = coordinates(ell)
    return [t.as_polynomial() for t in ts], [dt.as_polynomial() for dt in dts]


def affine_line():
    return ResolvingAlgebra([Generator.create("x", 0)], name="A1")


def node():
    x = Generator.create("x", 0)
    xi = Generator.create("xi", -1)
    return ResolvingAlgebra([x, xi], {xi: x.as_polynomial() ** 2}, name="node")


class TestSimplexForms:
    def test_coordinates_are_shared(self):
        first = coordinates(2)
        assert coordinates(2) == first
        assert [g.degree for g in first[0] + first[1]] == [0, 0, 1, 1]

    def test_faces_of_the_interval(self):
        (t,), _ = coords(1)
        form = SimplexForm(t, 1)
        assert form.face(0) == SimplexForm(1, 0)
        assert not form.face(1)

    def test_face_zero_of_a_triangle(self):
        (t1, t2), (dt1, dt2) = coords(2)
        ts, dts = coordinates(2)
        sub = face_substitution(2, 0)
        assert sub[ts[0]] == 1 - t1
        assert sub[dts[0]] == -dt1
        assert sub[ts[1]] == t1
        with pytest.raises(InvalidElementError, match="does not exist"):
            face_substitution(1, 2)

    def test_support_is_checked(self):
        (_, t2), _ = coords(2)
        with pytest.raises(DomainMismatchError, match="not a coordinate"):
            SimplexForm(t2, 1)
        with pytest.raises(DomainMismatchError, match="which is not in"):
            SimplexForm(node()["xi"], 1, ambient=affine_line())
        with pytest.raises(DomainMismatchError, match="Cannot combine"):
            SimplexForm(1, 1) + SimplexForm(1, 2)

    def test_t_degree(self):
        (t1, t2), (dt1, _) = coords(2)
        assert SimplexForm(t1**2 * t2 + dt1, 2).t_degree == 3

    def test_total_differential_on_coefficients(self):
        algebra = node()
        (t,), (dt,) = coords(1)
        form = SimplexForm(t * algebra["xi"], 1, ambient=algebra)
        assert form.d().value == dt * algebra["xi"] + t * algebra["x"] ** 2


class TestFormIdentities:
    @pytest.mark.parametrize("ell", [1, 2, 3, 4])
    def test_identities_hold(self, ell):
        check_form_identities(ell)
        assert tau(ell).d() == omega(ell)
        assert sigma(ell).boundary() == omega(ell - 1)

    def test_low_dimensions(self):
        (t,), (dt,) = coords(1)
        assert omega(0) == SimplexForm(1, 0)
        assert omega(1).value == dt
        assert tau(1).value == t
        assert sigma(1).value == t - 1

    def test_invalid_dimensions(self):
        with pytest.raises(InvalidElementError, match="omega needs"):
            omega(-1)
        with pytest.raises(InvalidElementError, match="tau needs"):
            tau(0)
        with pytest.raises(InvalidElementError, match="sigma needs"):
            sigma(0)


class TestContractions:
    def test_cone_contraction_is_a_homotopy(self):
        (t1, t2), (dt1, _) = coords(2)
        form = SimplexForm(t1 * t2 + dt1, 2)
        assert cone_contraction(form).value == t1
        assert cone_contraction(form.d()).value == t1 * t2
        assert cone_contraction(form).d() + cone_contraction(form.d()) == form

    def test_horn_fill(self):
        (t,), _ = coords(1)
        assert horn_fill(omega(1)).value == t
        assert horn_fill(omega(1), missing_face=1).value == t - 1
        assert not horn_fill(SimplexForm.zero(1))

    def test_horn_fill_on_a_triangle(self):
        eta = omega(2)
        assert eta.vanishes_on(range(3))
        for missing in range(3):
            theta = horn_fill(eta, missing)
            assert theta.d() == eta

    def test_horn_fill_preconditions(self):
        (t,), _ = coords(1)
        with pytest.raises(PreconditionError, match="not closed"):
            horn_fill(SimplexForm(t, 1))
        with pytest.raises(PreconditionError, match="does not vanish on the horn"):
            horn_fill(SimplexForm(1, 1))
        with pytest.raises(InvalidElementError, match="does not exist"):
            horn_fill(omega(1), missing_face=3)

    def test_extend_from_a_vertex(self):
        (t,), _ = coords(1)
        extended = extend_from_face(SimplexForm(1, 0))
        assert extended == SimplexForm(1 - t, 1)

    def test_extend_needs_vanishing_boundary(self):
        (t,), _ = coords(1)
        with pytest.raises(PreconditionError, match="does not vanish"):
            extend_from_face(SimplexForm(t, 1))


class TestIntegration:
    def test_volume_forms(self):
        (t1, t2), (dt1, dt2) = coords(2)
        assert integrate(omega(1)) == 1
        assert integrate(omega(2)) == 1
        assert integrate(SimplexForm(dt1 * dt2, 2)) == Fraction(1, 2)
        assert integrate(SimplexForm(dt2 * dt1, 2)) == Fraction(-1, 2)
        assert integrate(SimplexForm(t1 * dt1 * dt2, 2)) == Fraction(1, 6)
        assert integrate(SimplexForm(t1**2 * t2 * dt1 * dt2, 2)) == Fraction(2, 120)

    def test_lower_forms_integrate_to_zero(self):
        (t1, t2), (dt1, _) = coords(2)
        assert not integrate(SimplexForm(t1 * t2 + dt1, 2))

    def test_coefficients_stay_on_the_right(self):
        algebra = node()
        (t,), (dt,) = coords(1)
        form = SimplexForm(t * dt * algebra["xi"], 1, ambient=algebra)
        assert integrate(form) == algebra["xi"].scale(Fraction(1, 2))

    @pytest.mark.parametrize("ell", [1, 2, 3])
    def test_stokes_on_tau(self, ell):
        assert integrate(tau(ell).d()) == 1


class TestNormalizedClasses:
    def test_normalized_class(self):
        algebra = affine_line()
        _, (dt,) = coords(1)
        assert normalized_class(algebra["x"], 1, algebra).value == dt * algebra["x"]
        singular = node()
        with pytest.raises(NotACocycleError, match="not closed"):
            normalized_class(singular["xi"], 1, singular)

    def test_boundary_shift_witness(self):
        algebra = node()
        psi = boundary_shift_witness(algebra["xi"], 0, algebra)
        assert psi.ell == 1
        assert not psi.d()
        assert psi.boundary().value == algebra["x"] ** 2


class TestSimplexMorphisms:
    def homotopy(self):
        base, algebra = affine_line(), node()
        (t,), (dt,) = coords(1)
        image = algebra["x"] + t * algebra["x"] ** 2 + dt * algebra["xi"]
        return base, algebra, SimplexMorphism(
            base, algebra, 1, {base.generator("x"): image}, name="H"
        )

    def test_homotopy_between_morphisms(self):
        base, algebra, homotopy = self.homotopy()
        assert homotopy.validate().ok
        start = homotopy.face(0).as_morphism()
        end = homotopy.face(1).as_morphism()
        assert start.apply(base["x"]) == algebra["x"] + algebra["x"] ** 2
        assert end.apply(base["x"]) == algebra["x"]

    def test_reverse_homotopy(self):
        _, _, homotopy = self.homotopy()
        reverse = reverse_homotopy(homotopy)
        assert reverse.validate().ok
        assert reverse.face(1).same_as(homotopy.face(0))
        assert reverse.face(0).same_as(homotopy.face(1))

    def test_validation_reports_bad_images(self):
        base, algebra = affine_line(), node()
        _, (dt,) = coords(1)
        wrong_degree = SimplexMorphism(base, algebra, 1, {base.generator("x"): dt})
        assert "must have degree 0" in wrong_degree.validate().violations[0].message
        (t,), _ = coords(1)
        not_closed = SimplexMorphism(
            base, algebra, 1, {base.generator("x"): t * algebra["x"]}
        )
        assert not_closed.validate().violations[0].message == "chain condition fails"

    def test_constant_simplex(self):
        algebra = node()
        simplex = constant_simplex(identity(algebra), 2)
        assert simplex.validate().ok
        assert simplex.face(1).face(0).as_morphism().images == identity(algebra).images
        assert simplex.to_dict() == {"ell": 2, "images": {"x": "x", "xi": "xi"}}

    def test_errors(self):
        base, algebra, homotopy = self.homotopy()
        with pytest.raises(DomainMismatchError, match="not a plain morphism"):
            homotopy.as_morphism()
        with pytest.raises(DomainMismatchError, match="not a generator"):
            SimplexMorphism(base, algebra, 1, {algebra.generator("xi"): 0})
        with pytest.raises(DomainMismatchError, match="1-simplex"):
            reverse_homotopy(constant_simplex(identity(algebra), 2))


class RandomHornForms:
    """Exact forms over a Lambda_2 ambient vanishing on prescribed faces."""

    def __init__(self, seed, ell):
        self.rng = random.Random(seed)
        self.ell = ell
        self.ambient = lambda_algebra(2)

    def vertices(self, ell):
        ts, _ = coords(ell)
        return [1 - sum(ts[1:], ts[0])] + ts

    def coefficient(self):
        return Fraction(self.rng.choice([-3, -2, -1, 1, 2, 5]), self.rng.randint(1, 3))

    def term(self, ell):
        ts, dts = coords(ell)
        value = self.coefficient() * self.ambient["x"] ** self.rng.randint(0, 2)
        if self.rng.random() < 0.3:
            value = value * self.ambient["xi"]
        for t in ts:
            if self.rng.random() < 0.5:
                value = value * t
        for dt in dts:
            if self.rng.random() < 0.4:
                value = value * dt
        return value

    def vanishing(self, ell, faces):
        """(product of the vertex coordinates t_i, i in faces) * r."""
        vertices = self.vertices(ell)
        value = sum((self.term(ell) for _ in range(self.rng.randint(1, 3))), 0)
        for i in faces:
            value = vertices[i] * value
        return SimplexForm(value, ell, ambient=self.ambient)

    def horn_form(self, missing):
        horn = [i for i in range(self.ell + 1) if i != missing]
        return self.vanishing(self.ell, horn).d()


@pytest.mark.parametrize("ell", [2, 3])
def test_random_horns_fill(ell):
    forms = RandomHornForms(seed=1000 + ell, ell=ell)
    for case in range(100):
        missing = case % (ell + 1)
        eta = forms.horn_form(missing)
        horn = [i for i in range(ell + 1) if i != missing]
        assert not eta.d()
        assert eta.vanishes_on(horn)
        theta = horn_fill(eta, missing)
        assert theta.d() == eta
        assert theta.vanishes_on(horn)


@pytest.mark.parametrize("ell", [2, 3])
def test_random_extensions_from_the_last_face(ell):
    forms = RandomHornForms(seed=2000 + ell, ell=ell)
    for _ in range(100):
        psi = forms.vanishing(ell - 1, range(ell))
        extended = extend_from_face(psi)
        assert extended.ell == ell
        assert extended.face(ell) == psi
        assert extended.vanishes_on(range(ell))
