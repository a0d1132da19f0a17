from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple, Type


def _clean(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


@dataclass
class Violation:
    subject: str
    message: str
    residue: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {k: v for k, v in asdict(self).items() if v is not None}


@dataclass
class ValidationReport:
    """
    Outcome of a structural check. Never raised, only returned; call
    `raise_if_invalid` to turn it into an exception.
    """

    subject: str
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def add(self, subject: str, message: str, residue: Any = None) -> None:
        self.violations.append(
            Violation(
                subject=subject,
                message=message,
                residue=None if residue is None else str(residue),
            )
        )

    def extend(self, other: "ValidationReport") -> "ValidationReport":
        self.violations.extend(other.violations)
        return self

    def raise_if_invalid(self, error_class: Type[Exception]) -> None:
        if self.violations:
            details = "; ".join(
                f"{v.subject}: {v.message}" for v in self.violations
            )
            raise error_class(f"`{self.subject}` is invalid: {details}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "subject": self.subject,
            "valid": self.ok,
            "violations": [v.to_dict() for v in self.violations],
        }


@dataclass(frozen=True)
class CohomologyMode:
    """
    How a cohomology computation was made finite.

    kind is one of "exact", "weight" or "truncate"; `order` is the
    truncation level N of A/m^N for the latter.
    """

    kind: str
    order: Optional[int] = None

    EXACT = "exact"
    WEIGHT = "weight"
    TRUNCATED = "truncate"

    @classmethod
    def exact(cls) -> "CohomologyMode":
        return cls(cls.EXACT)

    @classmethod
    def weight_exact(cls) -> "CohomologyMode":
        return cls(cls.WEIGHT)

    @classmethod
    def truncated(cls, order: int) -> "CohomologyMode":
        if order < 1:
            raise ValueError(f"Truncation order must be at least 1, got `{order}`.")
        return cls(cls.TRUNCATED, order)

    @classmethod
    def parse(cls, text: str) -> "CohomologyMode":
        if text == cls.EXACT:
            return cls.exact()
        if text == cls.WEIGHT:
            return cls.weight_exact()
        if text.startswith(cls.TRUNCATED + ":"):
            return cls.truncated(int(text.split(":", 1)[1]))
        raise ValueError(
            f"Unsupported mode `{text}`, expected exact, weight or truncate:N."
        )

    def __str__(self):
        if self.kind == self.TRUNCATED:
            return f"{self.kind}:{self.order}"
        return self.kind


@dataclass
class CohomologyResult:
    dimensions: Dict[int, int]
    representatives: Dict[int, List[List[Fraction]]] = field(default_factory=dict)
    mode: Optional[CohomologyMode] = None

    def dimension(self, degree: int) -> int:
        return self.dimensions.get(degree, 0)

    @property
    def nonzero_degrees(self) -> List[int]:
        return sorted(n for n, dim in self.dimensions.items() if dim)

    @property
    def is_acyclic(self) -> bool:
        return not self.nonzero_degrees

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "dimensions": {str(n): self.dimensions[n] for n in sorted(self.dimensions)},
            "mode": None if self.mode is None else str(self.mode),
        }
        return {k: v for k, v in data.items() if v is not None}


@dataclass
class Verdict:
    """
    A decision scoped to the evidence it was made from.

    `holds` is None when the check was inconclusive (resource caps, unsupported
    shapes); the reason then sits in `diagnostics`.
    """

    check: str
    holds: Optional[bool]
    scope: str
    witness: Optional[Any] = None
    diagnostics: List[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        if self.holds is None:
            return "inconclusive"
        return "pass" if self.holds else "fail"

    def __bool__(self):
        return bool(self.holds)

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "check": self.check,
            "status": self.status,
            "scope": self.scope,
            "witness": _clean(self.witness),
            "diagnostics": list(self.diagnostics) or None,
        }
        return {k: v for k, v in data.items() if v is not None}


@dataclass
class LevelResult:
    level: int
    passed: bool
    source_dimensions: Dict[int, int]
    target_dimensions: Dict[int, int]
    induced_ranks: Dict[int, int]

    def to_dict(self) -> Dict[str, Any]:
        return _clean(asdict(self))


@dataclass
class CompletionReport:
    levels: List[LevelResult]
    scope: str

    @property
    def verified_to(self) -> int:
        verified = 0
        for level in self.levels:
            if not level.passed:
                break
            verified = level.level
        return verified

    @property
    def first_failure(self) -> Optional[int]:
        for level in self.levels:
            if not level.passed:
                return level.level
        return None

    @property
    def passed(self) -> bool:
        return self.first_failure is None

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "scope": self.scope,
            "verified_to": self.verified_to,
            "first_failure": self.first_failure,
            "levels": [level.to_dict() for level in self.levels],
        }
        return {k: v for k, v in data.items() if v is not None}


@dataclass
class PerfectnessReport:
    dimensions: Dict[int, int]
    window: Optional[Tuple[int, int]]
    diagnostics: List[str] = field(default_factory=list)

    @property
    def amplitude(self) -> Optional[int]:
        if self.window is None:
            return None
        return -self.window[0]

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "dimensions": {str(n): self.dimensions[n] for n in sorted(self.dimensions)},
            "window": None if self.window is None else list(self.window),
            "diagnostics": list(self.diagnostics) or None,
        }
        return {k: v for k, v in data.items() if v is not None}
