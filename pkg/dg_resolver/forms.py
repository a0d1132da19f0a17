"""
Polynomial de Rham forms on algebraic simplices with coefficients in a
resolving algebra, and simplices of the mapping space B -> A (x) Omega_l.

The simplex of dimension l has inhomogeneous coordinates t1..tl (degree 0)
and dt1..dtl (degree +1); t0 = 1 - t1 - ... - tl is eliminated. Face 0 is
t1 -> 1 - (t1 + ... + t(l-1)) with the rest shifted up, face i >= 1 sets
ti = dti = 0 and renumbers. The total differential on a (x) w is
da (x) w + (-1)^|a| a (x) dw.
"""

import logging
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Dict, Mapping, Optional, Sequence, Tuple, Union

from .dga import DGAMorphism, ResolvingAlgebra
from .exceptions import (
    DomainMismatchError,
    FormIdentityError,
    InvalidElementError,
    NotACocycleError,
    PreconditionError,
)
from .models import ValidationReport
from .polynomials import (
    Generator,
    GradedPolynomial,
    Monomial,
    apply_derivation,
    product,
    substitute,
)

logger = logging.getLogger(__name__)

_coordinates: Dict[Tuple[str, int], Tuple[Generator, Generator]] = {}
_owners: Dict[Generator, Tuple[str, int]] = {}
_coordinate_d: Dict[Generator, GradedPolynomial] = {}
_lock = threading.Lock()

PolynomialLike = Union[GradedPolynomial, Generator, int, Fraction]


def coordinates(
    ell: int, label: str = "t"
) -> Tuple[Tuple[Generator, ...], Tuple[Generator, ...]]:
    """(t1..tl, dt1..dtl) for the simplex family `label`, shared process-wide."""
    with _lock:
        for i in range(1, ell + 1):
            if (label, i) not in _coordinates:
                t = Generator.create(f"{label}{i}", 0)
                dt = Generator.create(f"d{label}{i}", 1)
                _coordinates[(label, i)] = (t, dt)
                _owners[t] = _owners[dt] = (label, i)
                _coordinate_d[t] = dt.as_polynomial()
        pairs = [_coordinates[(label, i)] for i in range(1, ell + 1)]
    return tuple(t for t, _ in pairs), tuple(dt for _, dt in pairs)


def is_coordinate(generator: Generator, label: Optional[str] = None) -> bool:
    owner = _owners.get(generator)
    return owner is not None and (label is None or owner[0] == label)


def _coordinate_index(generator: Generator) -> int:
    return _owners[generator][1]


def total_differential(
    p: PolynomialLike, ambient: Optional[ResolvingAlgebra] = None
) -> GradedPolynomial:
    values = dict(_coordinate_d)
    if ambient is not None:
        values.update(ambient.differential)
    return apply_derivation(GradedPolynomial.coerce(p), values, 1)


def face_substitution(
    ell: int, i: int, label: str = "t"
) -> Dict[Generator, GradedPolynomial]:
    """Pullback along the i-th face inclusion of the (l-1)-simplex."""
    if ell < 1 or not 0 <= i <= ell:
        raise InvalidElementError(
            f"Face {i} does not exist on a simplex of dimension {ell}."
        )
    ts, dts = coordinates(ell, label)
    sigma: Dict[Generator, GradedPolynomial] = {}
    if i == 0:
        zero = GradedPolynomial.zero()
        sigma[ts[0]] = 1 - sum((t.as_polynomial() for t in ts[: ell - 1]), zero)
        sigma[dts[0]] = -sum((dt.as_polynomial() for dt in dts[: ell - 1]), zero)
        for k in range(1, ell):
            sigma[ts[k]] = ts[k - 1].as_polynomial()
            sigma[dts[k]] = dts[k - 1].as_polynomial()
        return sigma
    sigma[ts[i - 1]] = GradedPolynomial.zero()
    sigma[dts[i - 1]] = GradedPolynomial.zero()
    for k in range(i, ell):
        sigma[ts[k]] = ts[k - 1].as_polynomial()
        sigma[dts[k]] = dts[k - 1].as_polynomial()
    return sigma


def vertex_swap(
    ell: int, k: int, label: str = "t"
) -> Dict[Generator, GradedPolynomial]:
    """The affine involution exchanging vertices 0 and k (so faces 0 and k)."""
    ts, dts = coordinates(ell, label)
    return {
        ts[k - 1]: 1 - sum((t.as_polynomial() for t in ts), GradedPolynomial.zero()),
        dts[k - 1]: -sum((dt.as_polynomial() for dt in dts), GradedPolynomial.zero()),
    }


def _check_support(
    p: GradedPolynomial, ell: int, label: str, ambient: Optional[ResolvingAlgebra]
) -> None:
    for g in p.generators():
        owner = _owners.get(g)
        if owner is not None:
            if owner[0] == label and owner[1] > ell:
                raise DomainMismatchError(
                    f"`{g.name}` is not a coordinate of the {ell}-simplex."
                )
        elif ambient is not None and g not in ambient:
            raise DomainMismatchError(
                f"The form `{p}` uses `{g.name}`, which is not in `{ambient.name}`."
            )


@dataclass(frozen=True)
class SimplexForm:
    """An element of A (x) Q[t1..tl] (x) Lambda(dt1..dtl)."""

    value: GradedPolynomial
    ell: int
    label: str = "t"
    ambient: Optional[ResolvingAlgebra] = field(default=None, compare=False)

    def __post_init__(self):
        if self.ell < 0:
            raise InvalidElementError(f"Simplex dimension {self.ell} is negative.")
        object.__setattr__(self, "value", GradedPolynomial.coerce(self.value))
        _check_support(self.value, self.ell, self.label, self.ambient)

    @classmethod
    def zero(cls, ell: int, label: str = "t", ambient=None) -> "SimplexForm":
        return cls(GradedPolynomial.zero(), ell, label, ambient)

    def _new(self, value: GradedPolynomial, ell: Optional[int] = None) -> "SimplexForm":
        ell = self.ell if ell is None else ell
        return SimplexForm(value, ell, self.label, self.ambient)

    def _merge(self, other) -> Tuple[GradedPolynomial, Optional[ResolvingAlgebra]]:
        if isinstance(other, SimplexForm):
            if (other.ell, other.label) != (self.ell, self.label):
                raise DomainMismatchError(
                    f"Cannot combine forms on {self.label}-simplices of dimension "
                    f"{self.ell} and {other.ell}."
                )
            return other.value, self.ambient or other.ambient
        return GradedPolynomial.coerce(other), self.ambient

    @property
    def degree(self) -> Optional[int]:
        return self.value.degree

    @property
    def t_degree(self) -> int:
        return max(
            (
                sum(
                    e
                    for g, e in m.factors
                    if is_coordinate(g, self.label) and g.degree == 0
                )
                for m in self.value.terms
            ),
            default=0,
        )

    def d(self) -> "SimplexForm":
        return self._new(total_differential(self.value, self.ambient))

    def face(self, i: int) -> "SimplexForm":
        sigma = face_substitution(self.ell, i, self.label)
        return self._new(substitute(self.value, sigma, check=False), self.ell - 1)

    def boundary(self) -> "SimplexForm":
        """The last face with the alternating sign, (-1)^l d_l."""
        face = self.face(self.ell)
        return -face if self.ell % 2 else face

    def restricted(self, i: int) -> "SimplexForm":
        """Set ti = dti = 0 without renumbering: the pullback of the face along
        the projection that forgets ti."""
        ts, dts = coordinates(self.ell, self.label)
        zero = GradedPolynomial.zero()
        return self._new(
            substitute(self.value, {ts[i - 1]: zero, dts[i - 1]: zero}, check=False)
        )

    def pullback(self, sigma: Mapping[Generator, GradedPolynomial]) -> "SimplexForm":
        return self._new(substitute(self.value, sigma, check=False))

    def vanishes_on(self, faces: Sequence[int]) -> bool:
        return all(not self.face(i) for i in faces)

    def __bool__(self):
        return bool(self.value)

    def __add__(self, other):
        value, ambient = self._merge(other)
        return SimplexForm(self.value + value, self.ell, self.label, ambient)

    __radd__ = __add__

    def __neg__(self):
        return self._new(-self.value)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        value, ambient = self._merge(other)
        return SimplexForm(self.value * value, self.ell, self.label, ambient)

    def __rmul__(self, other):
        return SimplexForm(
            GradedPolynomial.coerce(other) * self.value,
            self.ell,
            self.label,
            self.ambient,
        )

    def __str__(self):
        return str(self.value)


def _wedge(generators: Sequence[Generator]) -> GradedPolynomial:
    return product(g.as_polynomial() for g in generators)


def _omega(ell: int, label: str) -> GradedPolynomial:
    _, dts = coordinates(ell, label)
    return _wedge(dts).scale(factorial(ell))


def _tau(ell: int, label: str) -> GradedPolynomial:
    ts, dts = coordinates(ell, label)
    total = GradedPolynomial.zero()
    for i in range(1, ell + 1):
        rest = [dt for k, dt in enumerate(dts, start=1) if k != i]
        sign = -1 if i % 2 else 1
        total = total + (ts[i - 1].as_polynomial() * _wedge(rest)).scale(sign)
    return total.scale(-factorial(ell - 1))


def _sigma(ell: int, label: str) -> GradedPolynomial:
    lower = _omega(ell - 1, label)
    return _tau(ell, label) + (lower if ell % 2 == 0 else -lower)


@lru_cache(maxsize=None)
def check_form_identities(ell: int, label: str = "t") -> None:
    """
    d tau = omega, d_i tau = 0 (1 <= i <= l), d_0 tau = omega_(l-1),
    d sigma = omega, d_i sigma = 0 (0 <= i < l) and the boundary of sigma
    is omega_(l-1). Raises FormIdentityError on the first failure.
    """
    om = SimplexForm(_omega(ell, label), ell, label)
    lower = SimplexForm(_omega(ell - 1, label), ell - 1, label)
    ta = SimplexForm(_tau(ell, label), ell, label)
    si = SimplexForm(_sigma(ell, label), ell, label)
    checks = [
        ("d tau = omega", ta.d() == om),
        ("d_0 tau = omega", ta.face(0) == lower),
        ("d sigma = omega", si.d() == om),
        ("boundary of sigma = omega", si.boundary() == lower),
    ]
    checks += [(f"d_{i} tau = 0", not ta.face(i)) for i in range(1, ell + 1)]
    checks += [(f"d_{i} sigma = 0", not si.face(i)) for i in range(ell)]
    for name, holds in checks:
        if not holds:
            raise FormIdentityError(f"Form identity `{name}` fails for l = {ell}.")
    logger.debug("Form identities hold for l = %s", ell)


def omega(ell: int, label: str = "t", ambient=None) -> SimplexForm:
    """omega_l = l! dt1...dtl (omega_0 = 1)."""
    if ell < 0:
        raise InvalidElementError(f"omega needs l >= 0, got {ell}.")
    return SimplexForm(_omega(ell, label), ell, label, ambient)


def tau(ell: int, label: str = "t", ambient=None) -> SimplexForm:
    if ell < 1:
        raise InvalidElementError(f"tau needs l >= 1, got {ell}.")
    if ell <= 4:
        check_form_identities(ell, label)
    return SimplexForm(_tau(ell, label), ell, label, ambient)


def sigma(ell: int, label: str = "t", ambient=None) -> SimplexForm:
    if ell < 1:
        raise InvalidElementError(f"sigma needs l >= 1, got {ell}.")
    if ell <= 4:
        check_form_identities(ell, label)
    return SimplexForm(_sigma(ell, label), ell, label, ambient)


def _split(monomial: Monomial, label: str):
    """monomial = sign * coefficient part * t-powers * (dt's in order)."""
    sign, part, forms = monomial.split(lambda g: not is_coordinate(g, label))
    t_power = Monomial(tuple((g, e) for g, e in forms.factors if g.degree == 0))
    dts = [g for g, _ in forms.factors if g.degree == 1]
    return sign, part, t_power, dts


def cone_contraction(form: SimplexForm) -> SimplexForm:
    """
    The radial homotopy K from vertex 0 (the origin t = 0), with
    dK + Kd = id - evaluation at the origin:
    K(t^a dt_I) = 1/(|a| + |I|) sum_r (-1)^(r-1) t_(i_r) t^a dt_(I - i_r),
    extended to a (x) w by (-1)^|a| a (x) K(w).
    """
    total = GradedPolynomial.zero()
    for monomial, coefficient in form.value.terms.items():
        sign, part, t_power, dts = _split(monomial, form.label)
        weight = t_power.total_exponent + len(dts)
        if not weight:
            continue
        t_value = GradedPolynomial.from_monomial(t_power)
        contracted = GradedPolynomial.zero()
        for r, dt in enumerate(dts):
            t = _coordinates[(form.label, _coordinate_index(dt))][0]
            term = t.as_polynomial() * t_value * _wedge(dts[:r] + dts[r + 1 :])
            contracted = contracted + (term if r % 2 == 0 else -term)
        factor = Fraction(sign * coefficient, weight)
        if part.degree % 2:
            factor = -factor
        term = GradedPolynomial.from_monomial(part) * contracted
        total = total + term.scale(factor)
    return SimplexForm(total, form.ell, form.label, form.ambient)


def horn_fill(eta: SimplexForm, missing_face: int = 0) -> SimplexForm:
    """
    A primitive theta of a closed form eta vanishing on the horn made of
    every face except `missing_face`, with theta vanishing on that horn too.

    theta comes from the radial contraction, which is exact, so no t-degree
    cap from `Limits` applies and there is nothing to escalate.
    """
    ell = eta.ell
    if ell < 1 or not 0 <= missing_face <= ell:
        raise InvalidElementError(
            f"Face {missing_face} does not exist on a simplex of dimension {ell}."
        )
    if not eta:
        return SimplexForm.zero(ell, eta.label, eta.ambient)
    horn = [i for i in range(ell + 1) if i != missing_face]
    if eta.d():
        raise PreconditionError(f"The form `{eta}` is not closed: d = {eta.d()}.")
    if not eta.vanishes_on(horn):
        raise PreconditionError(f"The form `{eta}` does not vanish on the horn.")
    swap = vertex_swap(ell, missing_face, eta.label) if missing_face else None
    work = eta.pullback(swap) if swap else eta
    theta = cone_contraction(work)
    for i in range(1, ell + 1):
        theta = theta - theta.restricted(i)
    if swap:
        theta = theta.pullback(swap)
    if theta.d() != eta or not theta.vanishes_on(horn):
        raise FormIdentityError(f"Horn filling of `{eta}` failed its postcondition.")
    logger.debug(
        "Filled horn %s of a %s-simplex: t-degree %s",
        missing_face,
        ell,
        theta.t_degree,
    )
    return theta


def extend_from_face(psi: SimplexForm) -> SimplexForm:
    """
    Psi on the l-simplex with last face psi and vanishing on faces 0..l-1:
    Psi = (1 - tl)^(N+1) F*psi with F(t) = t / (1 - tl), N+1 as small as
    clears the denominators.
    """
    if psi.ell and not psi.vanishes_on(range(psi.ell + 1)):
        raise PreconditionError(f"The form `{psi}` does not vanish on the boundary.")
    ell = psi.ell + 1
    ts, dts = coordinates(ell, psi.label)
    last_t, last_dt = ts[-1].as_polynomial(), dts[-1].as_polynomial()
    u = 1 - last_t
    pieces = [
        (coefficient, _split(monomial, psi.label))
        for monomial, coefficient in psi.value.terms.items()
    ]
    power = max(
        [1]
        + [
            t_power.total_exponent + len(forms) + (1 if forms else 0)
            for _, (_, _, t_power, forms) in pieces
        ]
    )
    total = GradedPolynomial.zero()
    for coefficient, (sign, part, t_power, forms) in pieces:
        base = GradedPolynomial.from_monomial(
            part, sign * coefficient
        ) * GradedPolynomial.from_monomial(t_power)
        spare = power - t_power.total_exponent - len(forms)
        term = u**spare * _wedge(forms)
        for r, dt in enumerate(forms):
            t = _coordinates[(psi.label, _coordinate_index(dt))][0]
            swapped = (
                _wedge(forms[:r])
                * (t.as_polynomial() * last_dt)
                * _wedge(forms[r + 1 :])
            )
            term = term + u ** (spare - 1) * swapped
        total = total + base * term
    extended = SimplexForm(total, ell, psi.label, psi.ambient)
    if extended.face(ell) != psi or not extended.vanishes_on(range(ell)):
        raise FormIdentityError(f"Extension of `{psi}` failed its postcondition.")
    return extended


def integrate(form: SimplexForm) -> GradedPolynomial:
    """
    Fiber integration over the l-simplex with forms to the left of the
    coefficients: w a -> (integral of w) a, and t^n dt1...dtl integrates to
    n1!...nl! / (|n| + l)!. Terms below the top form degree integrate to 0.
    """
    ell = form.ell
    total = GradedPolynomial.zero()
    for monomial, coefficient in form.value.terms.items():
        sign, forms, part = monomial.split(lambda g: is_coordinate(g, form.label))
        dts = [_coordinate_index(g) for g, _ in forms.factors if g.degree == 1]
        if len(dts) != ell:
            continue
        inversions = sum(1 for i, a in enumerate(dts) for b in dts[i + 1 :] if a > b)
        if inversions % 2:
            sign = -sign
        exponents = [e for g, e in forms.factors if g.degree == 0]
        volume = Fraction(
            prod(factorial(e) for e in exponents), factorial(sum(exponents) + ell)
        )
        total = total + GradedPolynomial.from_monomial(
            part, sign * coefficient * volume
        )
    return total


def _sign(ell: int) -> int:
    return -1 if (ell * (ell - 1) // 2) % 2 else 1


def normalized_class(
    a: PolynomialLike, ell: int, ambient: ResolvingAlgebra, label: str = "t"
) -> SimplexForm:
    """(-1)^(l(l-1)/2) omega_l a, a normalized closed form on the l-simplex."""
    a = GradedPolynomial.coerce(a)
    ambient.ensure_contains(a)
    if ambient.d(a):
        raise NotACocycleError(f"`{a}` is not closed: d = {ambient.d(a)}.")
    return omega(ell, label, ambient) * a.scale(_sign(ell))


def boundary_shift_witness(
    b: PolynomialLike, ell: int, ambient: ResolvingAlgebra, label: str = "t"
) -> SimplexForm:
    """
    psi on the (l+1)-simplex, closed and vanishing on faces 0..l, whose
    boundary is normalized_class(a + db) - normalized_class(a).
    """
    b = GradedPolynomial.coerce(b)
    ambient.ensure_contains(b)
    db = ambient.d(b)
    psi = sigma(ell + 1, label, ambient) * db
    tail = omega(ell + 1, label, ambient) * b
    psi = psi + (tail if ell % 2 == 0 else -tail)
    psi = psi * _sign(ell)
    expected = omega(ell, label, ambient) * db.scale(_sign(ell))
    if psi.d() or not psi.vanishes_on(range(ell + 1)) or psi.boundary() != expected:
        raise FormIdentityError(f"Boundary witness for `{b}` failed its checks.")
    return psi


class SimplexMorphism:
    """
    An l-simplex of the mapping space: a graded-algebra map
    B -> A (x) Omega_l given on generators.

    Images may also use coordinates of other simplex families, so a
    homotopy between simplices is a SimplexMorphism of dimension 1 whose
    faces are simplices again.
    """

    def __init__(
        self,
        source: ResolvingAlgebra,
        ambient: ResolvingAlgebra,
        ell: int,
        assignment: Optional[Mapping[Generator, PolynomialLike]] = None,
        label: str = "t",
        name: Optional[str] = None,
    ):
        self.source = source
        self.ambient = ambient
        self.ell = ell
        self.label = label
        self.name = name or f"{source.name}->{ambient.name}(x)Omega_{ell}"
        assignment = dict(assignment or {})
        for g in assignment:
            if g not in source:
                raise DomainMismatchError(
                    f"`{self.name}` assigns `{g.name}`, which is not a generator "
                    f"of `{source.name}`."
                )
        self._images = {}
        for g in source.generators:
            image = GradedPolynomial.coerce(assignment.get(g, 0))
            _check_support(image, ell, label, ambient)
            self._images[g] = image

    @property
    def images(self) -> Mapping[Generator, GradedPolynomial]:
        return dict(self._images)

    def apply(self, p: PolynomialLike) -> GradedPolynomial:
        p = GradedPolynomial.coerce(p)
        self.source.ensure_contains(p)
        return substitute(p, self._images, check=False)

    __call__ = apply

    def form(self, generator: Generator) -> SimplexForm:
        return SimplexForm(self._images[generator], self.ell, self.label, self.ambient)

    def face(self, i: int) -> "SimplexMorphism":
        sigma_ = face_substitution(self.ell, i, self.label)
        return SimplexMorphism(
            self.source,
            self.ambient,
            self.ell - 1,
            {g: substitute(v, sigma_, check=False) for g, v in self._images.items()},
            self.label,
            name=f"d{i}({self.name})",
        )

    def reparametrized(
        self, sigma_: Mapping[Generator, GradedPolynomial]
    ) -> "SimplexMorphism":
        return SimplexMorphism(
            self.source,
            self.ambient,
            self.ell,
            {g: substitute(v, sigma_, check=False) for g, v in self._images.items()},
            self.label,
            name=self.name,
        )

    def validate(self) -> ValidationReport:
        """Degrees and the chain condition for the total differential."""
        report = ValidationReport(self.name)
        for g, image in self._images.items():
            if image and (not image.is_homogeneous or image.degree != g.degree):
                report.add(g.name, f"image must have degree {g.degree}", image)
                continue
            residue = total_differential(image, self.ambient) - self.apply(
                self.source.d(g)
            )
            if residue:
                report.add(g.name, "chain condition fails", residue)
        return report

    def same_as(self, other) -> bool:
        return self.source.generators == other.source.generators and all(
            self._images[g] == other.images[g] for g in self.source.generators
        )

    def as_morphism(self, target: Optional[ResolvingAlgebra] = None) -> DGAMorphism:
        if self.ell != 0 or any(
            is_coordinate(g) for v in self._images.values() for g in v.generators()
        ):
            raise DomainMismatchError(f"`{self.name}` is not a plain morphism.")
        return DGAMorphism(
            self.source, target or self.ambient, self._images, name=self.name
        )

    def to_dict(self):
        return {
            "ell": self.ell,
            "images": {g.name: str(v) for g, v in self._images.items()},
        }

    def __repr__(self):
        assigned = ", ".join(f"{g.name} -> {v}" for g, v in self._images.items())
        return f"<{type(self).__name__} {self.name}: {assigned}>"


def constant_simplex(
    morphism: DGAMorphism, ell: int, label: str = "t"
) -> SimplexMorphism:
    return SimplexMorphism(
        morphism.source,
        morphism.target,
        ell,
        morphism.images,
        label,
        name=morphism.name,
    )


def reverse_homotopy(homotopy: SimplexMorphism) -> SimplexMorphism:
    """t -> 1 - t, exchanging the two ends of a homotopy."""
    if homotopy.ell != 1:
        raise DomainMismatchError(
            f"A homotopy is a 1-simplex, got a {homotopy.ell}-simplex."
        )
    (t,), (dt,) = coordinates(1, homotopy.label)
    return homotopy.reparametrized({t: 1 - t.as_polynomial(), dt: -dt.as_polynomial()})
