"""
A small description language for resolving algebras, morphisms and points.

    algebra L2 { gen x: -2; gen xi: -5; d xi = x^2; }
    algebra B over A { adjoin y: 0, eta: -1 with d eta = y*x - 1; }
    morphism F: A -> B { x -> x; }
    point origin on A { x = 0; }

Lines starting with `#` are comments. Errors carry the line and column of
the offending token.
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

from .dga import Augmentation, DGAMorphism, ResolvingAlgebra, inclusion
from .exceptions import (
    DGResolverError,
    DSLError,
    DSLLexicalError,
    DSLResolutionError,
    DSLSyntaxError,
)
from .polynomials import Generator, GradedPolynomial

logger = logging.getLogger(__name__)

IDENTIFIER = r"[A-Za-z_][A-Za-z0-9_']*"

_TOKEN_SPEC = [
    ("NUMBER", r"\d+"),
    ("NAME", IDENTIFIER),
    ("ARROW", r"->"),
    ("OP", r"[{}():;,=+\-*/^]"),
    ("NEWLINE", r"\n"),
    ("SKIP", r"[ \t\r]+"),
    ("COMMENT", r"#[^\n]*"),
    ("MISMATCH", r"."),
]
_TOKEN_RE = re.compile(
    "|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPEC)
)


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    line, line_start = 1, 0
    for match in _TOKEN_RE.finditer(text):
        kind, value = match.lastgroup, match.group()
        column = match.start() - line_start + 1
        if kind == "NEWLINE":
            line, line_start = line + 1, match.end()
        elif kind in ("SKIP", "COMMENT"):
            continue
        elif kind == "MISMATCH":
            raise DSLLexicalError(f"Unexpected character {value!r}.", line, column)
        else:
            tokens.append(Token(kind, value, line, column))
    tokens.append(Token("EOF", "", line, len(text) - line_start + 1))
    return tokens


# Polynomial syntax trees: (kind, payload..., token)
Node = tuple


@dataclass
class GeneratorDecl:
    name: str
    degree: int
    weight: Optional[int]
    token: Token


@dataclass
class AlgebraDecl:
    name: str
    base: Optional[str]
    generators: List[GeneratorDecl] = field(default_factory=list)
    differential: List[Tuple[str, Node, Token]] = field(default_factory=list)
    token: Optional[Token] = None


@dataclass
class MorphismDecl:
    name: str
    source: str
    target: str
    assignments: List[Tuple[str, Node, Token]]
    token: Token


@dataclass
class PointDecl:
    name: str
    algebra: str
    values: List[Tuple[str, Fraction, Token]]
    token: Token


class Parser:
    """Recursive descent over the token list."""

    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.position = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.position]

    def _advance(self) -> Token:
        token = self.current
        self.position += 1
        return token

    def _error(self, expected: str) -> DSLSyntaxError:
        token = self.current
        found = "end of input" if token.kind == "EOF" else repr(token.value)
        return DSLSyntaxError(
            f"Expected {expected}, found {found}.", token.line, token.column
        )

    def _check(self, value: str) -> bool:
        token = self.current
        return token.kind in ("OP", "ARROW", "NAME") and token.value == value

    def _expect(self, value: str) -> Token:
        if not self._check(value):
            raise self._error(f"'{value}'")
        return self._advance()

    def _name(self, what: str = "a name") -> Token:
        if self.current.kind != "NAME":
            raise self._error(what)
        return self._advance()

    def _integer(self) -> int:
        sign = -1 if self._check("-") else 1
        if sign < 0:
            self._advance()
        if self.current.kind != "NUMBER":
            raise self._error("an integer")
        return sign * int(self._advance().value)

    def _rational(self) -> Fraction:
        numerator = self._integer()
        if self._check("/"):
            self._advance()
            if self.current.kind != "NUMBER":
                raise self._error("a denominator")
            token = self._advance()
            if int(token.value) == 0:
                raise DSLSyntaxError("Zero denominator.", token.line, token.column)
            return Fraction(numerator, int(token.value))
        return Fraction(numerator)

    def parse_file(self) -> List[Union[AlgebraDecl, MorphismDecl, PointDecl]]:
        items = []
        while self.current.kind != "EOF":
            if self._check("algebra"):
                items.append(self._algebra())
            elif self._check("morphism"):
                items.append(self._morphism())
            elif self._check("point"):
                items.append(self._point())
            else:
                raise self._error("'algebra', 'morphism' or 'point'")
        return items

    def _algebra(self) -> AlgebraDecl:
        start = self._expect("algebra")
        name = self._name("an algebra name").value
        base = None
        if self._check("over"):
            self._advance()
            base = self._name("a base algebra name").value
        decl = AlgebraDecl(name, base, token=start)
        self._expect("{")
        while not self._check("}"):
            if self._check("gen"):
                self._advance()
                decl.generators.append(self._generator())
                self._expect(";")
            elif self._check("d"):
                decl.differential.append(self._d_assignment())
                self._expect(";")
            elif self._check("adjoin"):
                self._advance()
                decl.generators.append(self._generator())
                while self._check(","):
                    self._advance()
                    decl.generators.append(self._generator())
                if self._check("with"):
                    self._advance()
                    decl.differential.append(self._d_assignment())
                    while self._check(","):
                        self._advance()
                        decl.differential.append(self._d_assignment())
                self._expect(";")
            else:
                raise self._error("'gen', 'd', 'adjoin' or '}'")
        self._expect("}")
        return decl

    def _generator(self) -> GeneratorDecl:
        token = self._name("a generator name")
        self._expect(":")
        degree = self._integer()
        weight = None
        if self._check("weight"):
            self._advance()
            weight = self._integer()
        return GeneratorDecl(token.value, degree, weight, token)

    def _d_assignment(self) -> Tuple[str, Node, Token]:
        self._expect("d")
        token = self._name("a generator name")
        self._expect("=")
        return token.value, self.polynomial(), token

    def _morphism(self) -> MorphismDecl:
        start = self._expect("morphism")
        name = self._name("a morphism name").value
        self._expect(":")
        source = self._name("a source algebra").value
        if self.current.kind != "ARROW":
            raise self._error("'->'")
        self._advance()
        target = self._name("a target algebra").value
        self._expect("{")
        assignments = []
        while not self._check("}"):
            token = self._name("a generator name")
            if self.current.kind != "ARROW":
                raise self._error("'->'")
            self._advance()
            assignments.append((token.value, self.polynomial(), token))
            self._expect(";")
        self._expect("}")
        return MorphismDecl(name, source, target, assignments, start)

    def _point(self) -> PointDecl:
        start = self._expect("point")
        name = self._name("a point name").value
        self._expect("on")
        algebra = self._name("an algebra name").value
        self._expect("{")
        values = []
        while not self._check("}"):
            token = self._name("a generator name")
            self._expect("=")
            values.append((token.value, self._rational(), token))
            self._expect(";")
        self._expect("}")
        return PointDecl(name, algebra, values, start)

    def polynomial(self) -> Node:
        node = self._term()
        while self._check("+") or self._check("-"):
            op = self._advance()
            node = ("add" if op.value == "+" else "sub", node, self._term(), op)
        return node

    def _term(self) -> Node:
        node = self._factor()
        while self._check("*") or self._check("/"):
            op = self._advance()
            if op.value == "/":
                if self.current.kind != "NUMBER":
                    raise self._error("a numeric divisor")
                token = self._advance()
                if int(token.value) == 0:
                    raise DSLSyntaxError("Division by zero.", token.line, token.column)
                node = ("div", node, int(token.value), op)
            else:
                node = ("mul", node, self._factor(), op)
        return node

    def _factor(self) -> Node:
        if self._check("-"):
            op = self._advance()
            return ("neg", self._factor(), op)
        node = self._atom()
        if self._check("^"):
            op = self._advance()
            if self.current.kind != "NUMBER":
                raise self._error("an exponent")
            node = ("pow", node, int(self._advance().value), op)
        return node

    def _atom(self) -> Node:
        token = self.current
        if token.kind == "NUMBER":
            self._advance()
            return ("num", Fraction(int(token.value)), token)
        if token.kind == "NAME":
            self._advance()
            return ("name", token.value, token)
        if self._check("("):
            self._advance()
            node = self.polynomial()
            self._expect(")")
            return node
        raise self._error("a number, a generator or '('")


def evaluate(
    node: Node, scope: Mapping[str, Union[Generator, GradedPolynomial]]
) -> GradedPolynomial:
    """Evaluate a parsed polynomial; names resolve to generators or values."""
    kind = node[0]
    if kind == "num":
        return GradedPolynomial.constant(node[1])
    if kind == "name":
        token = node[2]
        if node[1] not in scope:
            raise DSLResolutionError(
                f"Unknown generator `{node[1]}`.", token.line, token.column
            )
        value = scope[node[1]]
        return value.as_polynomial() if isinstance(value, Generator) else value
    if kind == "neg":
        return -evaluate(node[1], scope)
    if kind == "pow":
        return evaluate(node[1], scope) ** node[2]
    if kind == "div":
        return evaluate(node[1], scope).scale(Fraction(1, node[2]))
    left, right = evaluate(node[1], scope), evaluate(node[2], scope)
    if kind == "add":
        return left + right
    if kind == "sub":
        return left - right
    return left * right


@dataclass
class Workspace:
    """Named algebras, morphisms and points read from one or more sources."""

    algebras: Dict[str, ResolvingAlgebra] = field(default_factory=dict)
    morphisms: Dict[str, DGAMorphism] = field(default_factory=dict)
    points: Dict[str, Augmentation] = field(default_factory=dict)
    bases: Dict[str, str] = field(default_factory=dict)

    def _lookup(self, kind: str, table: Dict, name: str):
        try:
            return table[name]
        except KeyError:
            known = ", ".join(table) or "none"
            raise DSLResolutionError(f"No {kind} named `{name}` (known: {known}).")

    def algebra(self, name: str) -> ResolvingAlgebra:
        return self._lookup("algebra", self.algebras, name)

    def morphism(self, name: str) -> DGAMorphism:
        return self._lookup("morphism", self.morphisms, name)

    def point(self, name: str) -> Augmentation:
        return self._lookup("point", self.points, name)

    def merge(self, other: "Workspace") -> "Workspace":
        for kind, mine, theirs in (
            ("algebra", self.algebras, other.algebras),
            ("morphism", self.morphisms, other.morphisms),
            ("point", self.points, other.points),
        ):
            clash = set(mine) & set(theirs)
            if clash:
                raise DSLResolutionError(
                    f"The {kind} names `{', '.join(sorted(clash))}` are defined twice."
                )
            mine.update(theirs)
        self.bases.update(other.bases)
        return self

    def __repr__(self):
        return (
            f"<{type(self).__name__} algebras: {', '.join(self.algebras)}; "
            f"morphisms: {', '.join(self.morphisms)}; points: {', '.join(self.points)}>"
        )


def _unique(table: Dict, name: str, kind: str, token: Token) -> None:
    if name in table:
        raise DSLResolutionError(
            f"The {kind} `{name}` is defined twice.", token.line, token.column
        )


def _build_algebra(decl: AlgebraDecl, workspace: Workspace) -> ResolvingAlgebra:
    base = None
    if decl.base is not None:
        if decl.base not in workspace.algebras:
            raise DSLResolutionError(
                f"Unknown base algebra `{decl.base}`.",
                decl.token.line,
                decl.token.column,
            )
        base = workspace.algebras[decl.base]
    scope: Dict[str, Generator] = {g.name: g for g in base.generators} if base else {}
    own: List[Generator] = []
    for gen in decl.generators:
        if gen.name in scope:
            raise DSLResolutionError(
                f"The generator `{gen.name}` is declared twice in `{decl.name}`.",
                gen.token.line,
                gen.token.column,
            )
        if gen.degree > 0:
            raise DSLResolutionError(
                f"The generator `{gen.name}` has positive degree {gen.degree}.",
                gen.token.line,
                gen.token.column,
            )
        scope[gen.name] = Generator.create(gen.name, gen.degree)
        own.append(scope[gen.name])
    differential = dict(base.differential) if base else {}
    assigned = set()
    for name, node, token in decl.differential:
        generator = scope.get(name)
        if generator is None:
            raise DSLResolutionError(
                f"Unknown generator `{name}`.", token.line, token.column
            )
        if generator not in own or name in assigned:
            raise DSLResolutionError(
                f"The differential of `{name}` cannot be set here.",
                token.line,
                token.column,
            )
        assigned.add(name)
        differential[generator] = evaluate(node, scope)
    declared = [gen.weight is not None for gen in decl.generators]
    weights = None
    if any(declared):
        if not all(declared) or (base is not None and base.weights is None):
            raise DSLResolutionError(
                f"Algebra `{decl.name}` gives weights to only some generators.",
                decl.token.line,
                decl.token.column,
            )
        weights = dict(base.weights) if base else {}
        weights.update({scope[gen.name]: gen.weight for gen in decl.generators})
    elif base is not None and base.weights is not None and not decl.generators:
        weights = dict(base.weights)
    generators = (list(base.generators) if base else []) + own
    try:
        return ResolvingAlgebra(generators, differential, weights, name=decl.name)
    except DGResolverError as error:
        raise DSLResolutionError(str(error), decl.token.line, decl.token.column)


def _build_morphism(decl: MorphismDecl, workspace: Workspace) -> DGAMorphism:
    for name in (decl.source, decl.target):
        if name not in workspace.algebras:
            raise DSLResolutionError(
                f"Unknown algebra `{name}`.", decl.token.line, decl.token.column
            )
    source, target = workspace.algebras[decl.source], workspace.algebras[decl.target]
    scope = {g.name: g for g in target.generators}
    assignment = {}
    for name, node, token in decl.assignments:
        if name not in source.names:
            raise DSLResolutionError(
                f"`{name}` is not a generator of `{source.name}`.",
                token.line,
                token.column,
            )
        assignment[source.generator(name)] = evaluate(node, scope)
    shared = [g for g in source.generators if g in target and g not in assignment]
    try:
        return DGAMorphism(source, target, assignment, fixed=shared, name=decl.name)
    except DGResolverError as error:
        raise DSLResolutionError(str(error), decl.token.line, decl.token.column)


def _build_point(decl: PointDecl, workspace: Workspace) -> Augmentation:
    if decl.algebra not in workspace.algebras:
        raise DSLResolutionError(
            f"Unknown algebra `{decl.algebra}`.", decl.token.line, decl.token.column
        )
    algebra = workspace.algebras[decl.algebra]
    values = {}
    for name, value, token in decl.values:
        if name not in algebra.names:
            raise DSLResolutionError(
                f"`{name}` is not a generator of `{algebra.name}`.",
                token.line,
                token.column,
            )
        values[name] = value
    try:
        return Augmentation.from_names(algebra, values, name=decl.name)
    except DGResolverError as error:
        raise DSLResolutionError(str(error), decl.token.line, decl.token.column)


def parse(text: str, workspace: Optional[Workspace] = None) -> Workspace:
    """Read `text` into a new workspace, or into `workspace` when given."""
    workspace = workspace if workspace is not None else Workspace()
    for item in Parser(tokenize(text)).parse_file():
        if isinstance(item, AlgebraDecl):
            _unique(workspace.algebras, item.name, "algebra", item.token)
            algebra = _build_algebra(item, workspace)
            workspace.algebras[item.name] = algebra
            if item.base is not None:
                workspace.bases[item.name] = item.base
                implicit = f"{item.base}->{item.name}"
                workspace.morphisms.setdefault(
                    implicit,
                    inclusion(workspace.algebras[item.base], algebra, implicit),
                )
        elif isinstance(item, MorphismDecl):
            _unique(workspace.morphisms, item.name, "morphism", item.token)
            workspace.morphisms[item.name] = _build_morphism(item, workspace)
        else:
            _unique(workspace.points, item.name, "point", item.token)
            workspace.points[item.name] = _build_point(item, workspace)
    logger.debug("Parsed %r", workspace)
    return workspace


def load(paths: Iterable[Union[str, Path]]) -> Workspace:
    workspace = Workspace()
    for path in paths:
        try:
            parse(Path(path).read_text(encoding="utf-8"), workspace)
        except DSLError as error:
            error.path = str(path)
            raise
    return workspace


def parse_expression(text: str) -> Node:
    parser = Parser(tokenize(text))
    node = parser.polynomial()
    if parser.current.kind != "EOF":
        raise parser._error("end of input")
    return node


def parse_polynomial(text: str, algebra: ResolvingAlgebra) -> GradedPolynomial:
    return evaluate(parse_expression(text), {g.name: g for g in algebra.generators})


def _generator_line(g: Generator, weights) -> str:
    weight = f" weight {weights[g]}" if weights is not None else ""
    return f"  gen {g.name}: {g.degree}{weight};"


def serialize(workspace: Workspace) -> str:
    """Text that `parse` reads back into an equivalent workspace."""
    blocks = []
    for name, algebra in workspace.algebras.items():
        base_name = workspace.bases.get(name)
        base = workspace.algebras.get(base_name) if base_name else None
        header = f"algebra {name}" + (f" over {base_name}" if base else "") + " {"
        lines = [header]
        own = [g for g in algebra.generators if base is None or g not in base]
        lines += [_generator_line(g, algebra.weights) for g in own]
        lines += [f"  d {g.name} = {algebra.d(g)};" for g in own if algebra.d(g)]
        lines.append("}")
        blocks.append("\n".join(lines))
    for name, morphism in workspace.morphisms.items():
        base_name = workspace.bases.get(morphism.target.name)
        if name == f"{base_name}->{morphism.target.name}":
            continue
        source, target = morphism.source.name, morphism.target.name
        lines = [f"morphism {name}: {source} -> {target} {{"]
        lines += [f"  {g.name} -> {v};" for g, v in morphism.images.items()]
        lines.append("}")
        blocks.append("\n".join(lines))
    for name, point in workspace.points.items():
        lines = [f"point {name} on {point.algebra.name} {{"]
        lines += [f"  {g.name} = {v};" for g, v in point.values.items()]
        lines.append("}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"
