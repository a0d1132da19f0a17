from typing import Dict, List, Optional, Union

from .definitions import AlgebraDefinition
from .dga import ResolvingAlgebra
from .dsl import Workspace


class AlgebraSet:
    """
    A collection class over built algebras, keyed by name, keeping the
    definitions they came from and the workspace they were parsed into.

    Parameters:
        definitions (List[AlgebraDefinition]): The definitions, bases first.
        workspace (Workspace, optional): Where to build them; a fresh one by
                                         default. Base algebras already in it
                                         may be referred to by name.

    Attributes:
        workspace (Workspace): Holds the algebras and the inclusions of every
                               base into the algebras built over it.
    """

    def __init__(
        self,
        definitions: List[AlgebraDefinition],
        workspace: Optional[Workspace] = None,
    ):
        self.workspace = workspace if workspace is not None else Workspace()
        self._definitions = {d.name: d for d in definitions}
        self._algebra_registry: Dict[str, ResolvingAlgebra] = {
            d.name: d.build(self.workspace) for d in definitions
        }

    def __getitem__(self, name: str) -> ResolvingAlgebra:
        return self._algebra_registry[name]

    def __iter__(self):
        return iter(self._algebra_registry.values())

    def __len__(self):
        return len(self._algebra_registry)

    def __repr__(self):
        names = ", ".join(self._algebra_registry.keys())
        return f"<{self.__class__.__name__} with algebras: {names}>"

    def definition(self, name: str) -> AlgebraDefinition:
        return self._definitions[name]

    def inclusion(self, name: str):
        """The inclusion of the base of `name` into it."""
        base = self._definitions[name].base_name
        return self.workspace.morphism(f"{base}->{name}")


def group_by_base(
    definitions: List[Union[AlgebraDefinition, List[AlgebraDefinition]]]
) -> List[AlgebraDefinition]:
    """
    Flattens nested lists of definitions and orders them so that every
    algebra comes after the base it is built over. Bases that are not in
    the list are expected to exist already in the target workspace.

    Raises:
        ValueError: For entries that are not AlgebraDefinition instances, for
                    repeated names, and for bases that depend on each other.
    """
    flat: List[AlgebraDefinition] = []
    for definition in definitions:
        if isinstance(definition, list):
            for nested_definition in definition:
                if isinstance(nested_definition, AlgebraDefinition):
                    flat.append(nested_definition)
                else:
                    raise ValueError(
                        f"Unsupported algebra definition type: "
                        f"{type(nested_definition)}"
                    )
        elif isinstance(definition, AlgebraDefinition):
            flat.append(definition)
        else:
            raise ValueError(f"Unsupported algebra definition type: {type(definition)}")

    by_name: Dict[str, AlgebraDefinition] = {}
    for definition in flat:
        if definition.name in by_name:
            raise ValueError(f"The algebra `{definition.name}` is defined twice.")
        by_name[definition.name] = definition

    output: List[AlgebraDefinition] = []
    placed = set()
    visiting = set()

    def place(definition: AlgebraDefinition):
        if definition.name in placed:
            return
        if definition.name in visiting:
            raise ValueError(f"The base of `{definition.name}` depends on it.")
        visiting.add(definition.name)
        base = definition.base_name
        if base in by_name:
            place(by_name[base])
        visiting.discard(definition.name)
        placed.add(definition.name)
        output.append(definition)

    for definition in flat:
        place(definition)
    return output
