"""
Buchberger's algorithm for the commutative degree-0 part of a resolving
algebra.

Ideals live in ordinary polynomial rings over the rationals whose variables
are even generators of degree 0. The arithmetic is delegated to sympy's
sparse `PolyRing` elements; pair selection uses the normal strategy and
pairs are pruned with the Gebauer-Moeller criteria.
"""

import functools
import hashlib
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import TYPE_CHECKING, Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.rings import PolyRing

from .config import DEFAULT_LIMITS, Limits, cache_directory
from .exceptions import InvalidElementError, ResourceLimitError
from .linalg import from_qq, to_qq
from .polynomials import Generator, GradedPolynomial, Monomial

if TYPE_CHECKING:  # pragma: no cover
    from .dga import ResolvingAlgebra

logger = logging.getLogger(__name__)

GREVLEX = "grevlex"
LEX = "lex"


@functools.lru_cache(maxsize=None)
def _ring(variable_count: int, order: str) -> PolyRing:
    # A ring needs at least one symbol; the spare one is never used.
    symbols = ",".join(f"v{i}" for i in range(max(variable_count, 1)))
    return PolyRing(symbols, QQ, order)


@dataclass(frozen=True)
class PolyIdeal:
    """
    An ideal of Q[variables] given by generators.

    Parameters:
        variables (Tuple[Generator, ...]): Even degree-0 generators, in the
            order used by lexicographic orderings (first is largest).
        generators (Tuple[GradedPolynomial, ...]): Polynomials in `variables`.
        order (str): "grevlex" (default) or "lex".
    """

    variables: Tuple[Generator, ...]
    generators: Tuple[GradedPolynomial, ...] = ()
    order: str = GREVLEX
    _basis: Dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(
            self,
            "generators",
            tuple(GradedPolynomial.coerce(g) for g in self.generators),
        )
        for variable in self.variables:
            if variable.degree != 0:
                raise InvalidElementError(
                    f"The `{variable.name}` variable has degree {variable.degree}; "
                    f"ideals only live in the even degree-0 subring."
                )
        if self.order not in (GREVLEX, LEX):
            raise ValueError(f"Unsupported monomial order `{self.order}`.")
        allowed = set(self.variables)
        for generator in self.generators:
            stray = [g.name for g in generator.generators() if g not in allowed]
            if stray:
                raise InvalidElementError(
                    f"The ideal generator `{generator}` uses `{', '.join(stray)}` "
                    f"outside the ring variables."
                )

    @property
    def ring(self) -> PolyRing:
        return _ring(len(self.variables), self.order)

    def with_order(self, order: str) -> "PolyIdeal":
        return PolyIdeal(self.variables, self.generators, order)

    def extended(self, *generators: GradedPolynomial, variables=()) -> "PolyIdeal":
        """This ideal plus more generators, optionally in a larger ring."""
        return PolyIdeal(
            tuple(variables) + self.variables,
            self.generators + tuple(generators),
            self.order,
        )

    def to_ring(self, p: GradedPolynomial):
        return to_ring(p, self.variables, self.ring)

    def from_ring(self, element) -> GradedPolynomial:
        return from_ring(element, self.variables)

    def groebner_basis(self, limits: Limits = DEFAULT_LIMITS) -> List[GradedPolynomial]:
        if "basis" not in self._basis:
            self._basis["basis"] = buchberger(self, limits=limits)
        return list(self._basis["basis"])

    def normal_form(self, p: GradedPolynomial, limits: Limits = DEFAULT_LIMITS):
        return normal_form(p, self, limits)

    def contains(self, p: GradedPolynomial, limits: Limits = DEFAULT_LIMITS) -> bool:
        return not normal_form(p, self, limits)

    def is_unit_ideal(self, limits: Limits = DEFAULT_LIMITS) -> bool:
        return self.groebner_basis(limits) == [GradedPolynomial.one()]

    def __str__(self):
        names = ", ".join(v.name for v in self.variables)
        gens = ", ".join(str(g) for g in self.generators)
        return f"Q[{names}]/({gens})"


def to_ring(p: GradedPolynomial, variables: Sequence[Generator], ring: PolyRing):
    position = {g: i for i, g in enumerate(variables)}
    terms = {}
    for monomial, coefficient in p.terms.items():
        exponents = [0] * ring.ngens
        for g, e in monomial:
            if g not in position:
                raise InvalidElementError(
                    f"The `{g.name}` generator of `{p}` is not a ring variable."
                )
            exponents[position[g]] = e
        terms[tuple(exponents)] = to_qq(coefficient)
    return ring.from_dict(terms)


def from_ring(element, variables: Sequence[Generator]) -> GradedPolynomial:
    terms: Dict[Monomial, Fraction] = {}
    for exponents, coefficient in element.terms():
        factors = tuple(
            (g, e) for g, e in zip(variables, exponents) if e
        )
        terms[Monomial(factors)] = from_qq(coefficient)
    return GradedPolynomial(terms)


def _total_degree(element) -> int:
    return max((sum(monomial) for monomial in element.itermonoms()), default=0)


def spoly(f, g, lmf=None, lmg=None):
    """S-polynomial of the monic ring elements f and g."""
    lmf = f.LM if lmf is None else lmf
    lmg = g.LM if lmg is None else lmg
    ring = f.ring
    lcm = ring.monomial_lcm(lmf, lmg)
    s1 = f.mul_monom(ring.monomial_div(lcm, lmf))
    s2 = g.mul_monom(ring.monomial_div(lcm, lmg))
    return s1 - s2


def _select(basis, pairs, leading):
    ring = basis[0].ring

    def key(pair):
        lcm = ring.monomial_lcm(leading[pair[0]], leading[pair[1]])
        return ring.order(lcm), pair

    return min(pairs, key=key)


def _update(basis, pairs, f, leading):
    """Add f to the basis and prune the pair set (Gebauer-Moeller)."""
    lmf = f.LM
    ring = f.ring
    lcm = ring.monomial_lcm
    mul = ring.monomial_mul
    div = ring.monomial_div

    pairs = {
        p
        for p in pairs
        if (
            not div(lcm(leading[p[0]], leading[p[1]]), lmf)
            or lcm(leading[p[0]], leading[p[1]]) == lcm(leading[p[0]], lmf)
            or lcm(leading[p[0]], leading[p[1]]) == lcm(leading[p[1]], lmf)
        )
    }
    by_lcm: Dict[Tuple, List[int]] = {}
    for i in range(len(basis)):
        by_lcm.setdefault(lcm(leading[i], lmf), []).append(i)
    minimal = []
    for candidate in sorted(by_lcm, key=ring.order):
        if all(not div(candidate, other) for other in minimal):
            minimal.append(candidate)
    new_pairs = set()
    for candidate in minimal:
        indices = by_lcm[candidate]
        if not any(lcm(leading[i], lmf) == mul(leading[i], lmf) for i in indices):
            new_pairs.add((min(indices), len(basis)))
    return basis + [f], leading + [lmf], pairs | new_pairs


def _minimalize(basis):
    ring = basis[0].ring
    minimal = []
    for f in sorted(basis, key=lambda h: ring.order(h.LM)):
        if all(not ring.monomial_div(f.LM, g.LM) for g in minimal):
            minimal.append(f)
    return minimal


def _interreduce(basis):
    reduced = []
    for i in range(len(basis)):
        others = basis[:i] + basis[i + 1 :]
        g = basis[i].rem(others) if others else basis[i]
        reduced.append(g.monic())
    return reduced


def reduced_basis(elements, limits: Limits = DEFAULT_LIMITS) -> list:
    """Reduced Gröbner basis of ring elements, sorted by leading monomial."""
    elements = [f for f in elements if f]
    if not elements:
        return []
    ring = elements[0].ring
    basis, leading, pairs = [], [], set()
    for f in elements:
        basis, leading, pairs = _update(basis, pairs, f.monic(), leading)
    steps = 0
    while pairs:
        i, j = _select(basis, pairs, leading)
        pairs.remove((i, j))
        steps += 1
        if steps > limits.groebner_max_steps:
            raise ResourceLimitError(
                f"Buchberger exceeded {limits.groebner_max_steps} S-pair reductions."
            )
        remainder = spoly(basis[i], basis[j], leading[i], leading[j]).rem(basis)
        if remainder:
            if _total_degree(remainder) > limits.groebner_max_degree:
                raise ResourceLimitError(
                    f"Buchberger produced a basis element of degree "
                    f"{_total_degree(remainder)} above the cap "
                    f"{limits.groebner_max_degree}."
                )
            basis, leading, pairs = _update(basis, pairs, remainder.monic(), leading)
    logger.debug(
        "Buchberger finished after %s reductions with %s elements", steps, len(basis)
    )
    result = _interreduce(_minimalize(basis))
    return sorted(result, key=lambda g: ring.order(g.LM))


def _cache_key(ideal: PolyIdeal) -> str:
    payload = {
        "variables": len(ideal.variables),
        "order": ideal.order,
        "generators": sorted(
            sorted(
                [list(exponents), str(from_qq(coefficient))]
                for exponents, coefficient in ideal.to_ring(g).terms()
            )
            for g in ideal.generators
        ),
    }
    encoded = json.dumps(payload, sort_keys=True).encode("utf-8")
    return hashlib.sha256(encoded).hexdigest()


def _read_cache(path: Path, ideal: PolyIdeal) -> Optional[List[GradedPolynomial]]:
    try:
        stored = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError):
        return None
    ring = ideal.ring
    basis = []
    for element in stored:
        terms = {
            tuple(exponents): to_qq(Fraction(coefficient))
            for exponents, coefficient in element
        }
        basis.append(ideal.from_ring(ring.from_dict(terms)))
    logger.debug("Gröbner cache hit %s", path.name)
    return basis


def _write_cache(path: Path, ideal: PolyIdeal, basis: List[GradedPolynomial]):
    stored = [
        [
            [list(exponents), str(from_qq(coefficient))]
            for exponents, coefficient in ideal.to_ring(g).terms()
        ]
        for g in basis
    ]
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(stored), encoding="utf-8")
    except OSError as exc:
        logger.warning("Could not write Gröbner cache %s: %s", path, exc)


def buchberger(
    ideal: PolyIdeal, order: Optional[str] = None, limits: Limits = DEFAULT_LIMITS
) -> List[GradedPolynomial]:
    """
    Reduced Gröbner basis of `ideal` under `order` (the ideal's own order
    when omitted), sorted by increasing leading monomial.

    Raises ResourceLimitError when the ring has more than
    `limits.groebner_max_variables` variables or a cap is hit.
    """
    if order is not None and order != ideal.order:
        ideal = ideal.with_order(order)
    if len(ideal.variables) > limits.groebner_max_variables:
        raise ResourceLimitError(
            f"The ideal lives in {len(ideal.variables)} variables, above the cap "
            f"{limits.groebner_max_variables}."
        )
    directory = cache_directory()
    path = None
    if directory is not None:
        path = directory / f"{_cache_key(ideal)}.json"
        if path.exists():
            cached = _read_cache(path, ideal)
            if cached is not None:
                return cached
    elements = [ideal.to_ring(g) for g in ideal.generators]
    basis = [ideal.from_ring(g) for g in reduced_basis(elements, limits)]
    if path is not None:
        _write_cache(path, ideal, basis)
    return basis


def normal_form(
    p: GradedPolynomial, ideal: PolyIdeal, limits: Limits = DEFAULT_LIMITS
) -> GradedPolynomial:
    """Remainder of `p` modulo the reduced Gröbner basis of `ideal`."""
    p = GradedPolynomial.coerce(p)
    basis = ideal.groebner_basis(limits)
    if not p or not basis:
        return p
    element = ideal.to_ring(p)
    return ideal.from_ring(element.rem([ideal.to_ring(g) for g in basis]))


@dataclass
class UnitCertificate:
    is_unit: bool
    inverse: Optional[GradedPolynomial] = None

    def __bool__(self):
        return self.is_unit

    def to_dict(self):
        data = {
            "is_unit": self.is_unit,
            "inverse": None if self.inverse is None else str(self.inverse),
        }
        return {k: v for k, v in data.items() if v is not None}


def is_unit_mod(
    g: GradedPolynomial, ideal: PolyIdeal, limits: Limits = DEFAULT_LIMITS
) -> UnitCertificate:
    """
    Decide whether g is invertible in Q[variables]/ideal.

    g is a unit exactly when ideal + (g) is the unit ideal. The inverse is
    read off the lex basis of ideal + (g*t - 1) with an auxiliary variable t
    ranked above the others: that basis contains t - h, and h is g^-1.
    """
    g = GradedPolynomial.coerce(g)
    if not ideal.extended(g).is_unit_ideal(limits):
        return UnitCertificate(False)
    t = Generator.create("t_inverse", 0)
    tp = t.as_polynomial()
    lifted = PolyIdeal(
        (t,) + ideal.variables, ideal.generators + (g * tp - 1,), LEX
    )
    inverse = normal_form(tp, lifted, limits)
    if t in inverse.generators():
        raise ResourceLimitError(f"Could not extract the inverse of `{g}`.")
    return UnitCertificate(True, normal_form(inverse, ideal, limits))


def same_ideal(
    first: PolyIdeal, second: PolyIdeal, limits: Limits = DEFAULT_LIMITS
) -> bool:
    if first.variables != second.variables:
        return False
    second = second.with_order(first.order)
    return first.groebner_basis(limits) == second.groebner_basis(limits)


def h0_presentation(algebra: "ResolvingAlgebra") -> PolyIdeal:
    """
    h^0 of a resolving algebra as Q[degree-0 generators]/(d xi : deg xi = -1).
    """
    variables = tuple(g for g in algebra.generators if g.degree == 0)
    relations = tuple(
        algebra.d(g) for g in algebra.generators if g.degree == -1 and algebra.d(g)
    )
    return PolyIdeal(variables, relations)


@dataclass
class H0MapCheck:
    injective: bool
    surjective: bool

    @property
    def isomorphism(self) -> bool:
        return self.injective and self.surjective


def h0_map_check(
    source: PolyIdeal,
    target: PolyIdeal,
    images: Dict[Generator, GradedPolynomial],
    limits: Limits = DEFAULT_LIMITS,
) -> H0MapCheck:
    """
    Injectivity and surjectivity of Q[a]/I -> Q[b]/J, a_i -> images[a_i].

    Both are read from the lex basis of J + (a_i - images[a_i]) in Q[b, a]
    with every b above every a: the elements free of b generate the kernel
    (to be compared with I), and the map is onto exactly when each b_j
    reduces to a polynomial in the a's.
    """
    if set(source.variables) & set(target.variables):
        raise InvalidElementError("Source and target rings must not share variables.")
    graph = tuple(
        a.as_polynomial() - images.get(a, GradedPolynomial.zero())
        for a in source.variables
    )
    elimination = PolyIdeal(
        target.variables + source.variables, target.generators + graph, LEX
    )
    basis = elimination.groebner_basis(limits)
    b_vars = set(target.variables)
    kernel = [g for g in basis if not (set(g.generators()) & b_vars)]
    injective = all(source.contains(g, limits) for g in kernel)
    surjective = all(
        not (
            set(normal_form(b.as_polynomial(), elimination, limits).generators())
            & b_vars
        )
        for b in target.variables
    )
    logger.debug(
        "h0 map check: %s kernel generators, injective=%s surjective=%s",
        len(kernel),
        injective,
        surjective,
    )
    return H0MapCheck(injective=injective, surjective=surjective)
