"""
Command line front end: reads `.dga` description files, runs one
computation and prints a JSON report on standard output.

Exit codes: 0 success, 1 negative verdict, 2 usage or input error,
3 inconclusive (resource caps).
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import click

from . import __version__
from .config import DEFAULT_LIMITS
from .constructions import (
    derived_tensor,
    diagonal_resolution,
    resolve_morphism,
    tor0_presentation,
)
from .criteria import (
    AtPoints,
    H0Only,
    WeightExact,
    completion_compare,
    is_etale_at,
    is_qis,
    perfectness_report,
)
from .dga import (
    Augmentation,
    ResolvingAlgebra,
    algebra_complex,
    koszul,
    madic_truncate,
    validate_algebra,
    validate_morphism,
)
from .dsl import Workspace, evaluate, load, parse_expression
from .exceptions import (
    DGResolverError,
    DomainMismatchError,
    DSLError,
    ResourceLimitError,
)
from .groebner import h0_presentation
from .linalg import FiniteComplex, cohomology
from .linearization import extension_obstruction, xi_ell
from .models import CohomologyMode, Verdict
from .modules import ExactTarget, TruncatedTarget, WeightTarget, der_cohomology

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3


class ClickHandler(logging.Handler):
    """Sends records to click's standard error stream."""

    def emit(self, record):
        try:
            click.echo(self.format(record), err=True)
        except Exception:
            self.handleError(record)


def configure_logging(verbose: bool) -> None:
    package = logging.getLogger("dg_resolver")
    if not any(isinstance(h, ClickHandler) for h in package.handlers):
        handler = ClickHandler()
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        package.addHandler(handler)
    package.setLevel(logging.DEBUG if verbose else logging.WARNING)


@dataclass
class Settings:
    pretty: bool = False
    verbose: bool = False


@dataclass
class Outcome:
    """What a command computed; becomes the body of the report."""

    verdict: Optional[Any] = None
    dimensions: Optional[Any] = None
    witness: Optional[Any] = None
    mode: Optional[str] = None
    diagnostics: List[str] = field(default_factory=list)
    exit_code: int = EXIT_OK


def _verdict_code(verdict: Verdict) -> int:
    if verdict.holds is None:
        return EXIT_INCONCLUSIVE
    return EXIT_OK if verdict.holds else EXIT_NEGATIVE


def _rows(value, prefix=""):
    if isinstance(value, dict):
        if not value:
            yield prefix, "{}"
        for key in sorted(value):
            yield from _rows(value[key], f"{prefix}.{key}" if prefix else str(key))
    elif isinstance(value, list):
        if all(not isinstance(v, (dict, list)) for v in value):
            yield prefix, ", ".join(str(v) for v in value)
        else:
            for index, item in enumerate(value):
                yield from _rows(item, f"{prefix}[{index}]")
    else:
        yield prefix, "null" if value is None else value


def render(report: Dict[str, Any], pretty: bool = False) -> str:
    if not pretty:
        return json.dumps(report, indent=2, sort_keys=True)
    rows = list(_rows(report))
    width = max(len(key) for key, _ in rows)
    return "\n".join(f"{key:<{width}}  {value}" for key, value in rows)


def _clean_inputs(inputs: Dict[str, Any]) -> Dict[str, Any]:
    cleaned = {}
    for key, value in inputs.items():
        if value is None or value == ():
            continue
        if isinstance(value, (list, tuple)):
            value = [str(v) if isinstance(v, Path) else v for v in value]
        cleaned[key] = value
    return cleaned


def run(
    settings: Settings,
    command: str,
    files: Tuple[Path, ...],
    inputs: Dict[str, Any],
    compute: Callable[[Workspace], Outcome],
) -> None:
    """Load the files, compute, print the report and exit with its code."""
    report: Dict[str, Any] = {
        "command": command,
        "inputs": _clean_inputs({"files": list(files), **inputs}),
        "mode": None,
        "diagnostics": [],
        "version": __version__,
    }
    try:
        workspace = load(files)
        outcome = compute(workspace)
    except DSLError as error:
        location = f"{error.path}:" if error.path else ""
        outcome = Outcome(
            diagnostics=[f"{type(error).__name__}: {location}{error}"],
            exit_code=EXIT_USAGE,
        )
    except ResourceLimitError as error:
        logger.warning("Inconclusive: %s", error)
        outcome = Outcome(
            diagnostics=[f"inconclusive(resource): {error}"],
            exit_code=EXIT_INCONCLUSIVE,
        )
    except (DGResolverError, ValueError, KeyError) as error:
        message = error.args[0] if isinstance(error, KeyError) else error
        outcome = Outcome(
            diagnostics=[f"{type(error).__name__}: {message}"], exit_code=EXIT_USAGE
        )
    for key in ("verdict", "dimensions", "witness"):
        value = getattr(outcome, key)
        if value is not None:
            report[key] = value
    report["mode"] = outcome.mode
    report["diagnostics"] = list(outcome.diagnostics)
    click.echo(render(report, settings.pretty))
    click.get_current_context().exit(outcome.exit_code)


def parse_window(ctx, param, value) -> Optional[Tuple[int, int]]:
    if value is None:
        return None
    low, separator, high = value.partition("..")
    try:
        window = (int(low), int(high))
    except ValueError:
        separator = ""
    if not separator or window[0] > window[1]:
        raise click.BadParameter(f"expected a..b with a <= b, got `{value}`")
    return window


def parse_mode(ctx, param, value) -> CohomologyMode:
    try:
        return CohomologyMode.parse(value)
    except ValueError as error:
        raise click.BadParameter(str(error))


files_argument = click.argument(
    "files",
    nargs=-1,
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
)


def _point(workspace: Workspace, algebra: ResolvingAlgebra, name: Optional[str]):
    if name is None:
        return Augmentation.origin(algebra)
    point = workspace.point(name)
    if point.algebra.generators != algebra.generators:
        raise DomainMismatchError(
            f"Point `{name}` is on `{point.algebra.name}`, not `{algebra.name}`."
        )
    return point


def _cohomology_window(algebra: ResolvingAlgebra, window) -> Tuple[int, int]:
    return window or (-algebra.amplitude, 0)


def _padded(window: Tuple[int, int]) -> Tuple[int, int]:
    # one extra degree on each side so the ends see both differentials
    return window[0] - 1, min(window[1] + 1, 0)


def _dimensions(complex_: FiniteComplex, window: Tuple[int, int]) -> Dict[str, int]:
    result = cohomology(complex_)
    return {str(n): result.dimension(n) for n in range(window[0], window[1] + 1)}


def algebra_cohomology(
    algebra: ResolvingAlgebra,
    window: Tuple[int, int],
    mode: CohomologyMode,
    point: Optional[Augmentation] = None,
    weights: Tuple[int, int] = (0, 4),
) -> Dict[str, Any]:
    """dim h^n(A) over the window, per weight in weight mode."""
    padded = _padded(window)
    if mode.kind == CohomologyMode.EXACT:
        complex_, _ = algebra_complex(algebra, padded)
        return _dimensions(complex_, window)
    if mode.kind == CohomologyMode.WEIGHT:
        return {
            str(w): _dimensions(algebra_complex(algebra, padded, w)[0], window)
            for w in range(weights[0], weights[1] + 1)
        }
    point = point or Augmentation.origin(algebra)
    truncated = madic_truncate(algebra, point, mode.order, padded)
    return _dimensions(truncated.complex(), window)


@click.group()
@click.version_option(__version__, prog_name="dg-resolver")
@click.option("--pretty", is_flag=True, help="Aligned text instead of JSON.")
@click.option("--verbose", is_flag=True, help="Debug logging on standard error.")
@click.pass_context
def main(ctx, pretty, verbose):
    """Exact computations with resolving differential graded algebras."""
    configure_logging(verbose)
    ctx.obj = Settings(pretty=pretty, verbose=verbose)


@main.command()
@files_argument
@click.option("--algebra", "algebras", multiple=True, help="Only these algebras.")
@click.pass_obj
def validate(settings, files, algebras):
    """Check d^2 = 0, weights, chain maps and points."""

    def compute(workspace: Workspace) -> Outcome:
        names = algebras or list(workspace.algebras)
        reports = [validate_algebra(workspace.algebra(name)) for name in names]
        if not algebras:
            reports += [validate_morphism(m) for m in workspace.morphisms.values()]
            reports += [p.validate() for p in workspace.points.values()]
        valid = all(report.ok for report in reports)
        return Outcome(
            verdict={"valid": valid, "reports": [r.to_dict() for r in reports]},
            exit_code=EXIT_OK if valid else EXIT_NEGATIVE,
        )

    run(settings, "validate", files, {"algebras": algebras}, compute)


@main.command("cohomology")
@files_argument
@click.option("--algebra", "algebra_name", required=True)
@click.option(
    "--degrees", callback=parse_window, help="Window a..b, default -amplitude..0."
)
@click.option(
    "--mode",
    default="exact",
    callback=parse_mode,
    help="exact, weight or truncate:N.",
)
@click.option("--at", "point_name", help="Point for truncate:N, default the origin.")
@click.option("--weights", callback=parse_window, help="Weight range for weight mode.")
@click.pass_obj
def cohomology_command(
    settings, files, algebra_name, degrees, mode, point_name, weights
):
    """dim h^n of an algebra."""

    def compute(workspace: Workspace) -> Outcome:
        algebra = workspace.algebra(algebra_name)
        window = _cohomology_window(algebra, degrees)
        point = None
        if mode.kind == CohomologyMode.TRUNCATED:
            point = _point(workspace, algebra, point_name)
        dimensions = algebra_cohomology(algebra, window, mode, point, weights or (0, 4))
        return Outcome(dimensions=dimensions, mode=str(mode))

    inputs = {
        "algebra": algebra_name,
        "degrees": list(degrees) if degrees else None,
        "at": point_name,
        "weights": list(weights) if weights else None,
    }
    run(settings, "cohomology", files, inputs, compute)


@main.command()
@files_argument
@click.option("--algebra", "algebra_name", required=True)
@click.pass_obj
def h0(settings, files, algebra_name):
    """Presentation and reduced Gröbner basis of h^0."""

    def compute(workspace: Workspace) -> Outcome:
        presentation = h0_presentation(workspace.algebra(algebra_name))
        basis = presentation.groebner_basis(DEFAULT_LIMITS)
        return Outcome(
            witness={
                "variables": [v.name for v in presentation.variables],
                "relations": [str(r) for r in presentation.generators],
                "groebner_basis": [str(b) for b in basis],
                "unit_ideal": presentation.is_unit_ideal(DEFAULT_LIMITS),
            }
        )

    run(settings, "h0", files, {"algebra": algebra_name}, compute)


@main.command("etale-at")
@files_argument
@click.option("--morphism", "morphism_name", required=True)
@click.option("--at", "point_name", required=True, help="A point of the target.")
@click.pass_obj
def etale_at(settings, files, morphism_name, point_name):
    """Acyclicity of the cotangent complex fiber at a point."""

    def compute(workspace: Workspace) -> Outcome:
        morphism = workspace.morphism(morphism_name)
        point = _point(workspace, morphism.target, point_name)
        verdict = is_etale_at(morphism, point)
        return Outcome(verdict=verdict.to_dict(), exit_code=_verdict_code(verdict))

    inputs = {"morphism": morphism_name, "at": point_name}
    run(settings, "etale-at", files, inputs, compute)


@main.command()
@files_argument
@click.option("--morphism", "morphism_name", required=True)
@click.option(
    "--mode",
    type=click.Choice(["at-points", "weight", "h0"]),
    default="at-points",
    show_default=True,
)
@click.option("--at", "point_names", multiple=True, help="Points of the target.")
@click.option("--order", default=4, show_default=True, type=click.IntRange(min=1))
@click.pass_obj
def qis(settings, files, morphism_name, mode, point_names, order):
    """Quasi-isomorphism check, sound for the chosen mode."""

    def compute(workspace: Workspace) -> Outcome:
        morphism = workspace.morphism(morphism_name)
        if mode == "weight":
            chosen = WeightExact()
        elif mode == "h0":
            chosen = H0Only()
        else:
            points = tuple(_point(workspace, morphism.target, p) for p in point_names)
            chosen = AtPoints(points or (Augmentation.origin(morphism.target),), order)
        verdict = is_qis(morphism, chosen)
        return Outcome(
            verdict=verdict.to_dict(),
            mode=mode,
            diagnostics=list(verdict.diagnostics),
            exit_code=_verdict_code(verdict),
        )

    inputs = {"morphism": morphism_name, "at": point_names, "order": order}
    run(settings, "qis", files, inputs, compute)


@main.command("completion-compare")
@files_argument
@click.option("--morphism", "morphism_name", required=True)
@click.option("--at", "point_name", help="A point of the target, default the origin.")
@click.option("--levels", default=4, show_default=True, type=click.IntRange(min=1))
@click.pass_obj
def completion_compare_command(settings, files, morphism_name, point_name, levels):
    """Compare A/m^n -> B/m^n for n = 1..levels."""

    def compute(workspace: Workspace) -> Outcome:
        morphism = workspace.morphism(morphism_name)
        point = _point(workspace, morphism.target, point_name)
        report = completion_compare(morphism, point, levels)
        return Outcome(
            verdict={"passed": report.passed, **report.to_dict()},
            exit_code=EXIT_OK if report.passed else EXIT_NEGATIVE,
        )

    inputs = {"morphism": morphism_name, "at": point_name, "levels": levels}
    run(settings, "completion-compare", files, inputs, compute)


@main.command("perfect-at")
@files_argument
@click.option("--algebra", "algebra_name", required=True)
@click.option("--at", "point_name", help="Default the origin.")
@click.option("--truncated-at", type=int, help="Level at which a tower was cut.")
@click.pass_obj
def perfect_at(settings, files, algebra_name, point_name, truncated_at):
    """Fiber cohomology of the Kähler module and its amplitude window."""

    def compute(workspace: Workspace) -> Outcome:
        algebra = workspace.algebra(algebra_name)
        report = perfectness_report(
            algebra, _point(workspace, algebra, point_name), truncated_at
        )
        return Outcome(
            verdict={"amplitude": report.amplitude, **report.to_dict()},
            diagnostics=list(report.diagnostics),
        )

    inputs = {"algebra": algebra_name, "at": point_name, "truncated_at": truncated_at}
    run(settings, "perfect-at", files, inputs, compute)


@main.command("diagonal-resolve")
@files_argument
@click.option("--algebra", "algebra_name", required=True)
@click.option("--cap", type=click.IntRange(min=1), help="First solver cap.")
@click.pass_obj
def diagonal_resolve(settings, files, algebra_name, cap):
    """Resolve A (x) A -> A cell by cell."""

    def compute(workspace: Workspace) -> Outcome:
        resolution = diagonal_resolution(workspace.algebra(algebra_name), cap)
        return Outcome(witness=resolution.to_dict())

    inputs = {"algebra": algebra_name, "cap": cap}
    run(settings, "diagonal-resolve", files, inputs, compute)


@main.command("resolve-morphism")
@files_argument
@click.option("--morphism", "morphism_name", required=True)
@click.option("--cap", type=click.IntRange(min=1))
@click.pass_obj
def resolve_morphism_command(settings, files, morphism_name, cap):
    """Factor a morphism as resolving followed by a quasi-isomorphism."""

    def compute(workspace: Workspace) -> Outcome:
        morphism = workspace.morphism(morphism_name)
        diagonal = diagonal_resolution(morphism.source, cap)
        return Outcome(witness=resolve_morphism(morphism, diagonal).to_dict())

    inputs = {"morphism": morphism_name, "cap": cap}
    run(settings, "resolve-morphism", files, inputs, compute)


@main.command("derived-tensor")
@files_argument
@click.option("--left", "left_name", required=True, help="Morphism A -> B.")
@click.option("--right", "right_name", required=True, help="Morphism A -> C.")
@click.option("--cap", type=click.IntRange(min=1))
@click.pass_obj
def derived_tensor_command(settings, files, left_name, right_name, cap):
    """B (x)^L_A C through the diagonal resolution of A."""

    def compute(workspace: Workspace) -> Outcome:
        left, right = workspace.morphism(left_name), workspace.morphism(right_name)
        result = derived_tensor(left, right, diagonal_resolution(left.source, cap))
        tor0 = tor0_presentation(left, right, result)
        witness = result.to_dict()
        witness["tor0"] = {
            "variables": [v.name for v in tor0.variables],
            "relations": [str(r) for r in tor0.generators],
        }
        return Outcome(witness=witness)

    inputs = {"left": left_name, "right": right_name, "cap": cap}
    run(settings, "derived-tensor", files, inputs, compute)


@main.command("koszul")
@click.option(
    "--variables", "variable_count", required=True, type=click.IntRange(min=1)
)
@click.option("--section", "sections", multiple=True, help="A polynomial in x1..xn.")
@click.option("--weights", callback=parse_window, help="Weight range, default 0..4.")
@click.option("--order", default=4, show_default=True, type=click.IntRange(min=1))
@click.pass_obj
def koszul_command(settings, variable_count, sections, weights, order):
    """
    Cohomology of the Koszul algebra of the sections: per weight when the
    sections are homogeneous, otherwise truncated at the origin.
    """

    def section(text):
        node = parse_expression(text)

        def value(xs):
            return evaluate(node, {f"x{i + 1}": x for i, x in enumerate(xs)})

        return value

    def compute(workspace: Workspace) -> Outcome:
        algebra = koszul(variable_count, [section(text) for text in sections])
        window = (-len(sections), 0)
        if algebra.weights is not None:
            mode = CohomologyMode.weight_exact()
        else:
            mode = CohomologyMode.truncated(order)
        dimensions = algebra_cohomology(
            algebra, window, mode, weights=weights or (0, 4)
        )
        return Outcome(
            dimensions=dimensions,
            mode=str(mode),
            diagnostics=[
                f"d {g.name} = {algebra.d(g)}"
                for g in algebra.generators
                if algebra.d(g)
            ],
        )

    inputs = {
        "variables": variable_count,
        "sections": sections,
        "weights": list(weights) if weights else None,
    }
    run(settings, "koszul", (), inputs, compute)


@main.command()
@files_argument
@click.option("--morphism", "morphism_name", required=True, help="P: B -> A.")
@click.option("--ell", required=True, type=click.IntRange(min=1))
@click.option("--base", "base_name", help="Work relative to this subalgebra of B.")
@click.option("--mode", default="exact", callback=parse_mode)
@click.option("--at", "point_name", help="Point of A for truncate:N.")
@click.pass_obj
def linearize(settings, files, morphism_name, ell, base_name, mode, point_name):
    """dim h^-l Der(B, A) along P and the simplex Xi_l of its first class."""

    def compute(workspace: Workspace) -> Outcome:
        morphism = workspace.morphism(morphism_name)
        base = workspace.algebra(base_name) if base_name else None
        if mode.kind == CohomologyMode.EXACT:
            target = ExactTarget(morphism.target)
        elif mode.kind == CohomologyMode.WEIGHT:
            target = WeightTarget(morphism.target)
        else:
            point = _point(workspace, morphism.target, point_name)
            target = TruncatedTarget(point, mode.order)
        classes = der_cohomology(morphism, -ell, base, target)
        outcome = Outcome(dimensions={str(-ell): classes.dimension}, mode=str(mode))
        if mode.kind == CohomologyMode.TRUNCATED:
            outcome.diagnostics.append("truncated classes carry no simplex witness")
        elif classes.representatives:
            derivation = classes.representatives[0]
            simplex = xi_ell(morphism, derivation, ell, base)
            outcome.witness = {
                "derivation": derivation.to_dict(),
                "simplex": simplex.to_dict(),
            }
        return outcome

    inputs = {
        "morphism": morphism_name,
        "ell": ell,
        "base": base_name,
        "at": point_name,
    }
    run(settings, "linearize", files, inputs, compute)


@main.command()
@files_argument
@click.option("--morphism", "morphism_name", required=True, help="h: B' -> A.")
@click.option("--algebra", "algebra_name", required=True, help="B = B'[x].")
@click.option("--generator", "generator_name", required=True, help="The new x.")
@click.pass_obj
def obstruction(settings, files, morphism_name, algebra_name, generator_name):
    """The class of h(dx); extends h over x when it vanishes."""

    def compute(workspace: Workspace) -> Outcome:
        algebra = workspace.algebra(algebra_name)
        result = extension_obstruction(
            workspace.morphism(morphism_name),
            algebra,
            algebra.generator(generator_name),
        )
        return Outcome(
            verdict=result.to_dict(),
            exit_code=EXIT_OK if result.vanishes else EXIT_NEGATIVE,
        )

    inputs = {
        "morphism": morphism_name,
        "algebra": algebra_name,
        "generator": generator_name,
    }
    run(settings, "obstruction", files, inputs, compute)
