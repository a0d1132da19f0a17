from dg_resolver.definitions import AlgebraDefinition


class Line(AlgebraDefinition):
    default_generators = {"x": 0}


class Plane(AlgebraDefinition):
    default_generators = {"x": 0, "y": 0}


class InvertX(AlgebraDefinition):
    base = Line
    default_generators = {"y": 0, "eta": -1}
    default_differential = {"eta": "x*y - 1"}


class Node(AlgebraDefinition):
    base = Line
    default_generators = {"xi": -1}
    default_differential = {"xi": "x^2"}


class Lambda2(AlgebraDefinition):
    default_generators = {"x": -2, "xi": -5}
    default_differential = {"xi": "x^2"}


class CoordinateAxes(AlgebraDefinition):
    name = "Axes"
    base = Plane
    default_generators = {"xi": -1}
    default_differential = {"xi": "x*y"}
    default_weights = None


class WeightedNode(AlgebraDefinition):
    default_generators = {"x": 0, "xi": -1}
    default_differential = {"xi": "x^2"}
    default_weights = {"x": 1, "xi": 2}
