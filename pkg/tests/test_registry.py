import pytest

from dg_resolver.definitions import AlgebraDefinition
from dg_resolver.dsl import parse
from dg_resolver.registry import AlgebraSet, group_by_base


class Line(AlgebraDefinition):
    default_generators = {"x": 0}


class InvertX(AlgebraDefinition):
    base = Line
    default_generators = {"y": 0, "eta": -1}
    default_differential = {"eta": "x*y - 1"}


class Node(AlgebraDefinition):
    base = "Line"
    default_generators = {"xi": -1}
    default_differential = {"xi": "x^2"}


# Grouping a flat list keeps the order when bases come first


def test_group_by_base_keeps_order():
    definitions = [Line(), InvertX(), Node()]
    assert group_by_base(definitions) == definitions


# Nested lists are flattened
def test_group_by_base_flattens_nested_lists():
    line, invert, node = Line(), InvertX(), Node()
    assert group_by_base([line, [invert, node]]) == [line, invert, node]


# Algebras given before their base are moved after it
def test_group_by_base_puts_bases_first():
    line, invert, node = Line(), InvertX(), Node()
    assert group_by_base([invert, node, line]) == [line, invert, node]


# A base missing from the list is left to the workspace
def test_group_by_base_with_external_base():
    node = Node()
    assert group_by_base([node]) == [node]


def test_group_by_base_rejects_duplicates():
    with pytest.raises(ValueError) as exc_info:
        group_by_base([Line(), [Line()]])

    assert str(exc_info.value) == "The algebra `Line` is defined twice."


@pytest.mark.parametrize(
    "definitions",
    [["algebra A { gen x: 0; }"], [Line(), [3]]],
    ids=["string", "nested int"],
)
def test_group_by_base_rejects_other_types(definitions):
    with pytest.raises(ValueError, match="Unsupported algebra definition type"):
        group_by_base(definitions)


def test_group_by_base_rejects_cycles():
    class First(AlgebraDefinition):
        base = "Second"
        default_generators = {"a": 0}

    class Second(AlgebraDefinition):
        base = "First"
        default_generators = {"b": 0}

    with pytest.raises(ValueError, match="depends on it"):
        group_by_base([First(), Second()])


def test_algebra_set():
    algebras = AlgebraSet(group_by_base([InvertX(), Line()]))
    assert len(algebras) == 2
    assert [algebra.name for algebra in algebras] == ["Line", "InvertX"]
    assert algebras["InvertX"].names == ["x", "y", "eta"]
    assert repr(algebras) == "<AlgebraSet with algebras: Line, InvertX>"
    assert algebras.definition("InvertX").base_name == "Line"


def test_algebra_set_inclusion():
    algebras = AlgebraSet([Line(), Node()])
    inclusion = algebras.inclusion("Node")
    assert inclusion.name == "Line->Node"
    assert inclusion.apply(algebras["Line"]["x"]) == algebras["Node"]["x"]
    assert algebras.workspace.bases == {"Node": "Line"}


def test_algebra_set_over_an_existing_workspace():
    workspace = parse("algebra Line { gen x: 0; }")
    algebras = AlgebraSet([Node()], workspace=workspace)
    assert algebras["Node"].names == ["x", "xi"]
    assert algebras.workspace is workspace
    with pytest.raises(KeyError):
        algebras["Line"]
