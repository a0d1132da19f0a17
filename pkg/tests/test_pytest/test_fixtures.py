import pytest

from dg_resolver.criteria import is_etale_at, perfectness_report
from dg_resolver.dga import (
    Augmentation,
    algebra_complex,
    graded_piece,
    validate_algebra,
)
from dg_resolver.exceptions import DSLResolutionError
from dg_resolver.linalg import cohomology
from . import algebras


@pytest.mark.parametrize(
    "setup_algebras",
    [([algebras.Lambda2()])],
    indirect=True,
)
def test_single_algebra(setup_algebras):
    algebra_set = setup_algebras
    algebra = algebra_set["Lambda2"]

    assert validate_algebra(algebra).ok
    complex_, _ = algebra_complex(algebra, (-7, 0))
    assert cohomology(complex_).nonzero_degrees == [-2, 0]


@pytest.mark.parametrize(
    "setup_algebras",
    [
        # Scenario 1: bases listed first
        ([algebras.Line(), algebras.InvertX()]),
        # Scenario 2: the base is nested after the algebra built over it
        ([algebras.InvertX(), [algebras.Line()]]),
    ],
    indirect=True,
)
def test_localization_is_etale(setup_algebras):
    algebra_set = setup_algebras
    localization = algebra_set["InvertX"]
    point = Augmentation.from_names(localization, {"x": 1, "y": 1}, name="p")

    verdict = is_etale_at(algebra_set.inclusion("InvertX"), point)

    assert verdict.holds is True
    assert verdict.status == "pass"
    assert verdict.scope == "point p"


@pytest.mark.parametrize(
    "setup_algebras",
    [([algebras.Line(), algebras.Node(), algebras.InvertX()])],
    indirect=True,
)
def test_several_algebras_over_one_base(setup_algebras):
    algebra_set = setup_algebras

    assert len(algebra_set) == 3
    assert algebra_set.workspace.bases == {"Node": "Line", "InvertX": "Line"}
    node = algebra_set["Node"]
    report = perfectness_report(node, Augmentation.origin(node))
    assert report.dimensions == {-1: 1, 0: 1}
    assert report.window == (-1, 0)


@pytest.mark.parametrize(
    "values, expected_degrees, setup_algebras",
    [
        ({"x": 1, "y": 1}, [], [algebras.Line(), algebras.InvertX()]),
        (
            {"x": 0, "y": 0},
            [-1, 0],
            [
                algebras.Line(),
                algebras.InvertX(partial_differential={"eta": "x*y"}),
            ],
        ),
    ],
    indirect=["setup_algebras"],
)
def test_flexible_parametrization(values, expected_degrees, setup_algebras):
    algebra_set = setup_algebras
    localization = algebra_set["InvertX"]
    point = Augmentation.from_names(localization, values)

    verdict = is_etale_at(algebra_set.inclusion("InvertX"), point)

    assert verdict.holds is (not expected_degrees)
    if expected_degrees:
        assert verdict.witness == {"nonzero_degrees": expected_degrees}


@pytest.mark.parametrize(
    "setup_algebras",
    [([algebras.WeightedNode(), algebras.Plane(), algebras.CoordinateAxes()])],
    indirect=True,
)
def test_named_and_weighted_definitions(setup_algebras):
    algebra_set = setup_algebras

    assert repr(algebra_set) == (
        "<AlgebraSet with algebras: WeightedNode, Plane, Axes>"
    )
    assert algebra_set["Axes"].names == ["x", "y", "xi"]
    weighted = algebra_set["WeightedNode"]
    assert [str(m) for m in graded_piece(weighted, 0, weight=2)] == ["x^2"]
    assert [str(m) for m in graded_piece(weighted, -1, weight=2)] == ["xi"]


@pytest.mark.parametrize(
    "dsl_workspace",
    ["algebra L2 { gen x: -2; gen xi: -5; d xi = x^2; }"],
    indirect=True,
)
def test_workspace_from_a_string(dsl_workspace):
    algebra = dsl_workspace.algebra("L2")
    complex_, _ = algebra_complex(algebra, (-7, 0))
    result = cohomology(complex_)
    assert result.dimension(-2) == 1
    assert result.dimension(-4) == 0


@pytest.mark.parametrize(
    "dsl_workspace",
    [
        [
            "algebra A { gen x: 0; }",
            "algebra N over A { gen xi: -1; d xi = x^2; }\n"
            "point origin on N { x = 0; }",
        ]
    ],
    indirect=True,
)
def test_later_sources_see_earlier_names(dsl_workspace):
    node = dsl_workspace.algebra("N")
    report = perfectness_report(node, dsl_workspace.point("origin"))
    assert report.window == (-1, 0)
    with pytest.raises(DSLResolutionError, match="No morphism named"):
        dsl_workspace.morphism("N->A")
