from typing import Dict, Optional, Union

from .dga import ResolvingAlgebra
from .dsl import Workspace, parse


class AlgebraDefinition:
    """
    Declarative description of a resolving algebra, meant to be subclassed
    once per algebra used in tests or scripts.

        Class Attributes:
        name (str): Algebra name. Defaults to the class name.
        base (Union[str, Type[AlgebraDefinition]]): Algebra this one is built
        over; its generators and differential are inherited.
        default_generators (Dict[str, int]): Generator names and their degrees
        (<= 0).
        default_differential (Dict[str, str]): d on generators, in the
        description language (`"x^2 - y"`).
        default_weights (Dict[str, int]): Optional positive weights for every
        generator.

    Parameters:
        name (str, optional): Overrides the class-level `name`.
        generators (Dict[str, int], optional): Replaces the class-level
                                               generators.
        differential (Dict[str, str], optional): Replaces the class-level
                                                 differential.
        partial_differential (dict, optional): Entries updating the default
                                               differential.
        weights (Dict[str, int], optional): Replaces the class-level weights.
    """

    name: str = None
    base: Optional[Union[str, type]] = None
    default_generators: Dict[str, int] = None
    default_differential: Dict[str, str] = None
    default_weights: Optional[Dict[str, int]] = None

    def __init__(
        self,
        name=None,
        generators=None,
        differential=None,
        partial_differential=None,
        weights=None,
        **kwargs,
    ):
        self.name = name or self.__class__.name or self.__class__.__name__
        self._generators = generators
        self._differential = differential
        self._partial_differential = partial_differential
        self._weights = weights
        self.kwargs = kwargs

    def __repr__(self):
        return (
            f"{type(self).__name__}("
            f"name={self.name}, base={self.base_name}, generators={self.generators})"
        )

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        cls.validate_class_attributes()

    @classmethod
    def validate_class_attributes(cls):
        expected_class_attribute_types = {
            "name": (str,),
            "base": (str, type),
            "default_generators": (dict,),
            "default_differential": (dict,),
            "default_weights": (dict, type(None)),
        }

        for attr, expected_types in expected_class_attribute_types.items():
            value = getattr(cls, attr, None)
            if not isinstance(value, expected_types) and value is not None:
                expected_type_names = [
                    t.__name__
                    for t in expected_types
                    if t is not type(None)  # noqa: E721
                ]
                if type(None) in expected_types:
                    expected_type_names.append("None")

                type_name = type(value).__name__
                message = (
                    f"The `{attr}` attribute in subclass `{cls.__name__}` "
                    f"must be of type `{', '.join(expected_type_names)}`, "
                    f"got `{type_name}`: `{value}`."
                )
                raise TypeError(message)

        # generator degrees follow their own rules
        generators = getattr(cls, "default_generators", None) or {}
        for generator, degree in generators.items():
            if not isinstance(degree, int) or isinstance(degree, bool) or degree > 0:
                raise TypeError(
                    f"The `{generator}` generator in subclass `{cls.__name__}` "
                    f"must have an integer degree <= 0, "
                    f"got `{type(degree).__name__}`: `{degree}`."
                )

        base = getattr(cls, "base", None)
        if isinstance(base, type) and not issubclass(base, AlgebraDefinition):
            raise TypeError(
                f"The `base` attribute in subclass `{cls.__name__}` "
                f"must be an algebra name or an AlgebraDefinition subclass, "
                f"got `{base.__name__}`."
            )

    @property
    def base_name(self) -> Optional[str]:
        return definition_name(self.__class__.base)

    @property
    def generators(self) -> Dict[str, int]:
        if self._generators is not None:
            return dict(self._generators)
        return dict(self.__class__.default_generators or {})

    @property
    def differential(self) -> Dict[str, str]:
        if self._differential is not None:
            return dict(self._differential)
        differential = dict(self.__class__.default_differential or {})
        if self._partial_differential:
            differential.update(self._partial_differential)
        return differential

    @property
    def weights(self) -> Optional[Dict[str, int]]:
        if self._weights is not None:
            return dict(self._weights)
        weights = self.__class__.default_weights
        return None if weights is None else dict(weights)

    def to_dsl(self) -> str:
        header = f"algebra {self.name}"
        if self.base_name:
            header += f" over {self.base_name}"
        lines = [header + " {"]
        weights = self.weights or {}
        for generator, degree in self.generators.items():
            weight = f" weight {weights[generator]}" if generator in weights else ""
            lines.append(f"  gen {generator}: {degree}{weight};")
        for generator, value in self.differential.items():
            lines.append(f"  d {generator} = {value};")
        lines.append("}")
        return "\n".join(lines)

    def build(self, workspace: Optional[Workspace] = None) -> ResolvingAlgebra:
        """Parse into `workspace` (which must already hold the base)."""
        workspace = workspace if workspace is not None else Workspace()
        parse(self.to_dsl(), workspace)
        return workspace.algebras[self.name]


def definition_name(definition) -> Optional[str]:
    if definition is None or isinstance(definition, str):
        return definition
    if isinstance(definition, type):
        return definition.name or definition.__name__
    return definition.name
