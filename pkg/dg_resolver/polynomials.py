"""
Graded-commutative polynomial arithmetic over the rationals.

Generators carry an integer degree; odd generators anticommute and square
to zero, even ones commute. Monomials are kept in a canonical form sorted
by generator creation order, and the sign of every reordering is folded
into the rational coefficient.
"""

import itertools
import logging
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import (
    Callable,
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from .exceptions import (
    DomainMismatchError,
    InvalidElementError,
    InvalidSubstitutionError,
)

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]

_generator_ids = itertools.count()
_generator_lock = threading.Lock()


@dataclass(frozen=True, order=True)
class Generator:
    """
    A free generator of a graded-commutative algebra.

    Equality, hashing and ordering only look at `id`, which is drawn from a
    process-wide counter, so two generators with the same name and degree
    are still distinct. `universe` optionally tags the generator set it was
    created for; products of elements tagged differently are refused.
    """

    id: int
    name: str = field(compare=False)
    degree: int = field(compare=False)
    universe: Optional[str] = field(default=None, compare=False)

    @classmethod
    def create(
        cls, name: str, degree: int, universe: Optional[str] = None
    ) -> "Generator":
        with _generator_lock:
            return cls(next(_generator_ids), name, degree, universe)

    @property
    def parity(self) -> int:
        return self.degree % 2

    @property
    def is_odd(self) -> bool:
        return self.degree % 2 == 1

    def as_polynomial(self) -> "GradedPolynomial":
        return GradedPolynomial({Monomial(((self, 1),)): Fraction(1)})

    def __repr__(self):
        return f"Generator({self.name!r}, {self.degree})"

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Monomial:
    factors: Tuple[Tuple[Generator, int], ...] = ()

    @property
    def degree(self) -> int:
        return sum(g.degree * e for g, e in self.factors)

    @property
    def parity(self) -> int:
        return self.degree % 2

    @property
    def total_exponent(self) -> int:
        return sum(e for _, e in self.factors)

    def exponent(self, generator: Generator) -> int:
        for g, e in self.factors:
            if g == generator:
                return e
        return 0

    def generators(self) -> Tuple[Generator, ...]:
        return tuple(g for g, _ in self.factors)

    def weight(self, weights: Mapping[Generator, int]) -> int:
        return sum(weights[g] * e for g, e in self.factors)

    def lowered(self, generator: Generator) -> "Monomial":
        """The monomial with one occurrence of `generator` removed."""
        factors = []
        for g, e in self.factors:
            if g == generator:
                if e > 1:
                    factors.append((g, e - 1))
            else:
                factors.append((g, e))
        return Monomial(tuple(factors))

    def split(self, predicate: Callable[[Generator], bool]):
        """
        Split into (sign, selected, rest) with monomial == sign * selected * rest.
        """
        selected = Monomial(tuple((g, e) for g, e in self.factors if predicate(g)))
        rest = Monomial(tuple((g, e) for g, e in self.factors if not predicate(g)))
        product = multiply_monomials(selected, rest)
        return product[0], selected, rest

    def sort_key(self):
        return (-self.total_exponent, tuple((g.id, e) for g, e in self.factors))

    def __iter__(self) -> Iterator[Tuple[Generator, int]]:
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)

    def __str__(self):
        if not self.factors:
            return "1"
        return "*".join(g.name if e == 1 else f"{g.name}^{e}" for g, e in self.factors)


UNIT = Monomial()
_UNTAGGED = object()


def multiply_monomials(
    left: Monomial, right: Monomial
) -> Optional[Tuple[int, Monomial]]:
    """
    Canonical product of two canonical monomials.

    Returns (sign, monomial), or None when a repeated odd generator kills the
    product.
    """
    lf, rf = left.factors, right.factors
    if not lf:
        return 1, right
    if not rf:
        return 1, left
    suffix_odd = [0] * (len(lf) + 1)
    for k in range(len(lf) - 1, -1, -1):
        g, e = lf[k]
        suffix_odd[k] = suffix_odd[k + 1] + (g.degree * e) % 2
    merged = []
    sign = 1
    i = j = 0
    while i < len(lf) and j < len(rf):
        a, ea = lf[i]
        b, eb = rf[j]
        if a.id < b.id:
            merged.append(lf[i])
            i += 1
        elif a.id > b.id:
            if (b.degree * eb) % 2 and suffix_odd[i] % 2:
                sign = -sign
            merged.append(rf[j])
            j += 1
        else:
            if a.is_odd:
                return None
            merged.append((a, ea + eb))
            i += 1
            j += 1
    merged.extend(lf[i:])
    merged.extend(rf[j:])
    return sign, Monomial(tuple(merged))


def canonicalize(
    factors: Iterable[Tuple[Generator, int]]
) -> Optional[Tuple[int, Monomial]]:
    """Canonical form of a word of generator powers in arbitrary order."""
    sign, result = 1, UNIT
    for g, e in factors:
        if e <= 0:
            continue
        if g.is_odd and e > 1:
            return None
        product = multiply_monomials(result, Monomial(((g, e),)))
        if product is None:
            return None
        sign *= product[0]
        result = product[1]
    return sign, result


class GradedPolynomial:
    """
    Element of a free graded-commutative algebra over the rationals.

    Parameters:
        terms (Mapping[Monomial, Scalar], optional): Canonical monomials and
            their coefficients; zero coefficients are dropped.
    """

    __slots__ = ("_terms", "_hash", "_universe")

    def __init__(self, terms: Optional[Mapping[Monomial, Scalar]] = None):
        cleaned = {}
        for monomial, coefficient in (terms or {}).items():
            coefficient = Fraction(coefficient)
            if coefficient:
                cleaned[monomial] = coefficient
        self._terms = cleaned
        self._hash = None
        self._universe = _UNTAGGED

    @classmethod
    def zero(cls) -> "GradedPolynomial":
        return cls()

    @classmethod
    def one(cls) -> "GradedPolynomial":
        return cls({UNIT: 1})

    @classmethod
    def constant(cls, value: Scalar) -> "GradedPolynomial":
        return cls({UNIT: value})

    @classmethod
    def from_monomial(cls, monomial: Monomial, coefficient: Scalar = 1):
        return cls({monomial: coefficient})

    @classmethod
    def coerce(cls, value) -> "GradedPolynomial":
        if isinstance(value, GradedPolynomial):
            return value
        if isinstance(value, Generator):
            return value.as_polynomial()
        if isinstance(value, (int, Fraction)):
            return cls.constant(value)
        raise TypeError(f"Cannot interpret `{type(value).__name__}` as a polynomial.")

    @property
    def universe(self) -> Optional[str]:
        """The universe shared by the tagged generators of this element, if any."""
        if self._universe is _UNTAGGED:
            tags = {
                g.universe
                for monomial in self._terms
                for g, _ in monomial.factors
                if g.universe is not None
            }
            if len(tags) > 1:
                raise DomainMismatchError(
                    f"`{self}` mixes the generator universes {sorted(tags)}."
                )
            self._universe = tags.pop() if tags else None
        return self._universe

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    def items(self) -> List[Tuple[Monomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda item: item[0].sort_key())

    def monomials(self) -> List[Monomial]:
        return [monomial for monomial, _ in self.items()]

    def coefficient(self, monomial: Monomial) -> Fraction:
        return self._terms.get(monomial, Fraction(0))

    def generators(self) -> Tuple[Generator, ...]:
        found = set()
        for monomial in self._terms:
            found.update(monomial.generators())
        return tuple(sorted(found))

    def degrees(self) -> set:
        return {monomial.degree for monomial in self._terms}

    @property
    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> Optional[int]:
        """The degree of a nonzero homogeneous polynomial, else None."""
        degrees = self.degrees()
        if len(degrees) == 1:
            return next(iter(degrees))
        return None

    def max_exponent(self) -> int:
        return max((m.total_exponent for m in self._terms), default=0)

    def weights(self, weights: Mapping[Generator, int]) -> set:
        return {monomial.weight(weights) for monomial in self._terms}

    @property
    def constant_term(self) -> Fraction:
        return self._terms.get(UNIT, Fraction(0))

    def is_constant(self) -> bool:
        return all(not monomial.factors for monomial in self._terms)

    def scale(self, factor: Scalar) -> "GradedPolynomial":
        factor = Fraction(factor)
        if not factor:
            return GradedPolynomial()
        return GradedPolynomial({m: c * factor for m, c in self._terms.items()})

    def filter(self, predicate: Callable[[Monomial], bool]) -> "GradedPolynomial":
        return GradedPolynomial(
            {m: c for m, c in self._terms.items() if predicate(m)}
        )

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Generator)):
            other = GradedPolynomial.coerce(other)
        if not isinstance(other, GradedPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other):
        try:
            other = GradedPolynomial.coerce(other)
        except TypeError:
            return NotImplemented
        terms = dict(self._terms)
        for monomial, coefficient in other._terms.items():
            terms[monomial] = terms.get(monomial, 0) + coefficient
        return GradedPolynomial(terms)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        try:
            other = GradedPolynomial.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return GradedPolynomial.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        try:
            other = GradedPolynomial.coerce(other)
        except TypeError:
            return NotImplemented
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return mul(GradedPolynomial.coerce(other), self)

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("Negative powers are not defined.")
        result = GradedPolynomial.one()
        for _ in range(exponent):
            result = mul(result, self)
        return result

    def __iter__(self):
        return iter(self.items())

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for index, (monomial, coefficient) in enumerate(self.items()):
            negative = coefficient < 0
            magnitude = -coefficient if negative else coefficient
            if not monomial.factors:
                body = str(magnitude)
            elif magnitude == 1:
                body = str(monomial)
            else:
                body = f"{magnitude}*{monomial}"
            if index == 0:
                parts.append(f"-{body}" if negative else body)
            else:
                parts.append(f" - {body}" if negative else f" + {body}")
        return "".join(parts)

    def __repr__(self):
        return f"GradedPolynomial({self})"


Substitution = Mapping[Generator, GradedPolynomial]


def mul(p: GradedPolynomial, q: GradedPolynomial) -> GradedPolynomial:
    left, right = p.universe, q.universe
    if left is not None and right is not None and left != right:
        raise DomainMismatchError(
            f"Cannot multiply elements of the universes `{left}` and `{right}`."
        )
    terms: Dict[Monomial, Fraction] = {}
    for m1, c1 in p._terms.items():
        for m2, c2 in q._terms.items():
            product = multiply_monomials(m1, m2)
            if product is None:
                continue
            sign, monomial = product
            terms[monomial] = terms.get(monomial, 0) + sign * c1 * c2
    return GradedPolynomial(terms)


def product(factors: Iterable[GradedPolynomial]) -> GradedPolynomial:
    result = GradedPolynomial.one()
    for factor in factors:
        result = mul(result, factor)
    return result


def graded_partial(
    p: GradedPolynomial, g: Generator, *, right: bool = False
) -> GradedPolynomial:
    """
    Graded partial derivative of `p` along `g`.

    Deleting an occurrence of an odd `g` costs the sign of moving it past
    the factors to its left (default), or to its right when `right` is set.
    The left version is a derivation of degree -deg(g) obeying
    d(pq) = d(p)q + (-1)^(deg g * deg p) p d(q).
    """
    terms: Dict[Monomial, Fraction] = {}
    for monomial, coefficient in p._terms.items():
        exponent = monomial.exponent(g)
        if not exponent:
            continue
        sign = 1
        if g.is_odd:
            before = after = 0
            seen = False
            for h, e in monomial.factors:
                if h == g:
                    seen = True
                elif seen:
                    after += h.degree * e
                else:
                    before += h.degree * e
            passed = after if right else before
            sign = -1 if passed % 2 else 1
        reduced = monomial.lowered(g)
        terms[reduced] = terms.get(reduced, 0) + sign * exponent * coefficient
    return GradedPolynomial(terms)


def _check_substitution(sigma: Substitution) -> None:
    for generator, image in sigma.items():
        if not image:
            continue
        if not image.is_homogeneous or image.degree != generator.degree:
            raise InvalidSubstitutionError(
                f"The `{generator.name}` generator has degree {generator.degree} "
                f"but is assigned `{image}` of degree "
                f"{sorted(image.degrees())}."
            )


def substitute(
    p: GradedPolynomial, sigma: Substitution, *, check: bool = True
) -> GradedPolynomial:
    """
    Image of `p` under the graded-algebra morphism defined by `sigma`.

    Generators missing from `sigma` are left in place.
    """
    if check:
        _check_substitution(sigma)
    powers: Dict[Tuple[Generator, int], GradedPolynomial] = {}

    def power(g: Generator, e: int) -> GradedPolynomial:
        key = (g, e)
        if key not in powers:
            base = sigma.get(g)
            if base is None:
                base = g.as_polynomial()
            powers[key] = base**e
        return powers[key]

    result: Dict[Monomial, Fraction] = {}
    for monomial, coefficient in p._terms.items():
        image = GradedPolynomial.constant(coefficient)
        for g, e in monomial.factors:
            image = mul(image, power(g, e))
            if not image:
                break
        for m, c in image._terms.items():
            result[m] = result.get(m, 0) + c
    return GradedPolynomial(result)


def compose_substitutions(outer: Substitution, inner: Substitution) -> Dict:
    """The substitution `outer` applied after `inner`."""
    composed = {g: substitute(image, outer, check=False) for g, image in inner.items()}
    for g, image in outer.items():
        composed.setdefault(g, image)
    return composed


def degree_component(p: GradedPolynomial, n: int) -> GradedPolynomial:
    return p.filter(lambda monomial: monomial.degree == n)


def apply_derivation(
    p: GradedPolynomial,
    values: Mapping[Generator, GradedPolynomial],
    degree: int,
    along: Optional[Substitution] = None,
) -> GradedPolynomial:
    """
    Evaluate the graded derivation given on generators by `values`.

    For a monomial x1...xk the result is
    sum_j (-1)^(degree * (deg x1 + ... + deg x(j-1))) P(x1)...D(xj)...P(xk),
    where P is the substitution `along` (the identity when omitted), so the
    same routine serves differentials, derivations into modules through a
    morphism, and the total differential on simplex forms.
    """
    along = along or {}
    powers: Dict[Tuple[Generator, int], GradedPolynomial] = {}

    def power(g: Generator, e: int) -> GradedPolynomial:
        key = (g, e)
        if key not in powers:
            base = along.get(g)
            if base is None:
                base = g.as_polynomial()
            powers[key] = base**e
        return powers[key]

    result: Dict[Monomial, Fraction] = {}
    for monomial, coefficient in p._terms.items():
        factors = monomial.factors
        active = [
            k for k, (g, _) in enumerate(factors) if values.get(g) is not None
        ]
        active = [k for k in active if values[factors[k][0]]]
        if not active:
            continue
        prefix_degrees = list(
            itertools.accumulate([0] + [g.degree * e for g, e in factors])
        )
        for k in active:
            g, e = factors[k]
            sign = -1 if (degree * prefix_degrees[k]) % 2 else 1
            term = GradedPolynomial.constant(sign * e * coefficient)
            for j in range(k):
                term = mul(term, power(*factors[j]))
            if e > 1:
                term = mul(term, power(g, e - 1))
            term = mul(term, values[g])
            for j in range(k + 1, len(factors)):
                term = mul(term, power(*factors[j]))
            for m, c in term._terms.items():
                result[m] = result.get(m, 0) + c
    return GradedPolynomial(result)


def monomials_of_degree(
    generators: Iterable[Generator],
    degree: int,
    max_exponent: Optional[int] = None,
    weights: Optional[Mapping[Generator, int]] = None,
    weight: Optional[int] = None,
) -> List[Monomial]:
    """
    All monomials of the given degree (and weight) in nonpositive generators.

    Degree-zero generators make a degree infinite; their exponents must be
    bounded by `max_exponent` or by a positive weight grading.
    """
    gens = sorted(set(generators))
    if any(g.degree > 0 for g in gens):
        raise InvalidElementError(
            "Monomial enumeration expects generators of nonpositive degree."
        )
    if weight is not None and weights is None:
        raise InvalidElementError("A target weight needs a weight grading.")
    negative_after = [False] * (len(gens) + 1)
    for k in range(len(gens) - 1, -1, -1):
        negative_after[k] = negative_after[k + 1] or gens[k].degree < 0
    results: List[Monomial] = []
    factors: List[Tuple[Generator, int]] = []

    def walk(index: int, remaining: int, exponents: Optional[int], mass):
        if remaining > 0 or (exponents is not None and exponents < 0):
            return
        if mass is not None and mass < 0:
            return
        if index == len(gens):
            if remaining == 0 and (mass is None or mass == 0):
                results.append(Monomial(tuple(factors)))
            return
        if remaining < 0 and not negative_after[index]:
            return
        g = gens[index]
        bounds = []
        if g.is_odd:
            bounds.append(1)
        if g.degree < 0:
            bounds.append(remaining // g.degree)
        if exponents is not None:
            bounds.append(exponents)
        if mass is not None:
            if weights[g] <= 0:
                raise InvalidElementError(
                    f"The `{g.name}` generator needs a positive weight."
                )
            bounds.append(mass // weights[g])
        if not bounds:
            raise InvalidElementError(
                f"The degree-0 generator `{g.name}` makes degree {degree} "
                f"infinite-dimensional; pass an exponent cap or weights."
            )
        for e in range(min(bounds) + 1):
            if e:
                factors.append((g, e))
            walk(
                index + 1,
                remaining - e * g.degree,
                None if exponents is None else exponents - e,
                None if mass is None else mass - e * weights[g],
            )
            if e:
                factors.pop()

    walk(0, degree, max_exponent, weight)
    results.sort(key=Monomial.sort_key)
    return results


def linear_combination(
    coefficients: Sequence[Scalar], elements: Sequence[GradedPolynomial]
) -> GradedPolynomial:
    terms: Dict[Monomial, Fraction] = {}
    for coefficient, element in zip(coefficients, elements):
        if not coefficient:
            continue
        for m, c in element._terms.items():
            terms[m] = terms.get(m, 0) + c * coefficient
    return GradedPolynomial(terms)
