from typing import List, Union

import pytest

from ..definitions import AlgebraDefinition
from ..dsl import Workspace, parse
from ..registry import AlgebraSet, group_by_base


@pytest.fixture(scope="function")
def setup_algebras(request) -> AlgebraSet:
    """
    A pytest fixture that builds resolving algebras from AlgebraDefinition
    subclasses. Definitions may be passed flat or in nested lists; algebras
    built over a base come after it whatever the order they are given in.

    Parameters:
        request: The pytest request object containing parametrized test data.

    Returns:
        AlgebraSet: The built algebras, accessible by name, together with the
                    workspace holding them and the base inclusions.

    Example Usage:
        - Single algebra:
          @pytest.mark.parametrize("setup_algebras", [([Lambda2()])], indirect=True)

        - An algebra and a localization over it:
          @pytest.mark.parametrize(
              "setup_algebras", [([Line(), [InvertX()]])], indirect=True
          )
    """
    algebra_definitions: List[
        Union[AlgebraDefinition, List[AlgebraDefinition]]
    ] = request.param
    yield AlgebraSet(group_by_base(algebra_definitions))


@pytest.fixture(scope="function")
def dsl_workspace(request) -> Workspace:
    """
    A pytest fixture parsing description-language sources into a Workspace.

    The parameter is a source string or a list of them, parsed in order
    into the same workspace so later sources can refer to earlier names:

        @pytest.mark.parametrize(
            "dsl_workspace", ["algebra A { gen x: -2; }"], indirect=True
        )
    """
    sources = request.param
    if isinstance(sources, str):
        sources = [sources]
    workspace = Workspace()
    for source in sources:
        if not isinstance(source, str):
            raise ValueError(f"Unsupported workspace source type: {type(source)}")
        parse(source, workspace)
    yield workspace
