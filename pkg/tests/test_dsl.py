from fractions import Fraction
from pathlib import Path

import pytest

from dg_resolver.dga import validate_algebra
from dg_resolver.dsl import (
    Workspace,
    load,
    parse,
    parse_expression,
    parse_polynomial,
    serialize,
    tokenize,
)
from dg_resolver.exceptions import (
    DSLError,
    DSLLexicalError,
    DSLResolutionError,
    DSLSyntaxError,
)

FIXTURES = Path(__file__).parent / "fixtures"

LOCALIZATION = """
algebra A { gen x: 0; }
algebra B over A { adjoin y: 0, eta: -1 with d eta = x*y - 1; }
morphism F: A -> B { x -> x; }
point p on B { x = 2; y = 1/2; }
"""


class TestTokenizer:
    def test_tokens(self):
        tokens = tokenize("d xi = x^2 # a comment\n")
        assert [t.value for t in tokens] == ["d", "xi", "=", "x", "^", "2", ""]
        assert [t.kind for t in tokens][-2:] == ["NUMBER", "EOF"]
        assert tokens[-1].line == 2

    def test_primes_belong_to_names(self):
        assert [t.value for t in tokenize("x' -> y''")][:3] == ["x'", "->", "y''"]

    def test_unexpected_character(self):
        with pytest.raises(DSLLexicalError) as exc_info:
            tokenize("gen x: @")
        assert str(exc_info.value) == "1:8: Unexpected character '@'."
        assert (exc_info.value.line, exc_info.value.column) == (1, 8)


class TestParser:
    def test_algebra(self):
        workspace = parse("algebra L2 { gen x: -2; gen xi: -5; d xi = x^2; }")
        algebra = workspace.algebra("L2")
        assert algebra.names == ["x", "xi"]
        assert algebra.d(algebra["xi"]) == algebra["x"] ** 2
        assert validate_algebra(algebra).ok

    def test_algebra_over_a_base(self):
        workspace = parse(LOCALIZATION)
        algebra = workspace.algebra("B")
        assert algebra.names == ["x", "y", "eta"]
        assert algebra.d(algebra["eta"]) == algebra["x"] * algebra["y"] - 1
        assert workspace.bases == {"B": "A"}
        assert set(workspace.morphisms) == {"A->B", "F"}
        assert workspace.morphism("A->B").apply(workspace.algebra("A")["x"]) == (
            algebra["x"]
        )

    def test_point(self):
        point = parse(LOCALIZATION).point("p")
        assert {g.name: v for g, v in point.values.items()} == {
            "x": 2,
            "y": Fraction(1, 2),
        }
        assert point.validate().ok

    def test_weights(self):
        workspace = parse("algebra W { gen x: 0 weight 1; gen xi: -1 weight 2; }")
        algebra = workspace.algebra("W")
        assert {g.name: w for g, w in algebra.weights.items()} == {"x": 1, "xi": 2}

    def test_polynomials(self):
        algebra = parse("algebra A { gen x: 0; gen y: 0; }").algebra("A")
        x, y = algebra["x"], algebra["y"]
        assert parse_polynomial("x^2 - 1/2*x", algebra) == x**2 - x.scale(
            Fraction(1, 2)
        )
        assert parse_polynomial("-(x + y)*(x - y)", algebra) == y**2 - x**2
        assert parse_polynomial("x/3", algebra) == x.scale(Fraction(1, 3))

    @pytest.mark.parametrize(
        "text, message",
        [
            ("algebra A { gen x 0; }", "1:19: Expected ':', found '0'."),
            ("algebra A {", "1:12: Expected 'gen', 'd', 'adjoin' or '}', found end"),
            ("morphism F A -> B { }", "1:12: Expected ':', found 'A'."),
            ("point p on A { x = 1/0; }", "1:22: Zero denominator."),
            ("hello", "1:1: Expected 'algebra', 'morphism' or 'point', found 'hello'."),
        ],
    )
    def test_syntax_errors(self, text, message):
        with pytest.raises(DSLSyntaxError) as exc_info:
            parse(text)
        assert str(exc_info.value).startswith(message)

    def test_expression_errors(self):
        with pytest.raises(DSLSyntaxError, match="end of input"):
            parse_expression("x )")
        with pytest.raises(DSLSyntaxError, match="Division by zero"):
            parse_expression("x/0")
        with pytest.raises(DSLSyntaxError, match="an exponent"):
            parse_expression("x^y")


class TestResolution:
    @pytest.mark.parametrize(
        "text, message",
        [
            ("algebra A { gen x: 0; d x = y; }", "1:29: Unknown generator `y`."),
            ("algebra A { gen x: 1; }", "positive degree 1"),
            ("algebra A { gen x: 0; gen x: -1; }", "declared twice"),
            ("algebra A { }\nalgebra A { }", "2:1: The algebra `A` is defined twice."),
            ("algebra B over Z { }", "Unknown base algebra `Z`"),
            (
                "algebra A { gen x: 0 weight 1; gen y: 0; }",
                "gives weights to only some generators",
            ),
            (
                "algebra A { gen x: 0; }\nalgebra B over A { gen y: 0; d x = y; }",
                "The differential of `x` cannot be set here.",
            ),
            (
                "algebra A { gen x: 0; }\nmorphism F: A -> A { z -> 1; }",
                "`z` is not a generator of `A`",
            ),
            ("algebra A { gen x: 0; }\npoint p on A { }", "has no value for `x`"),
            ("point p on Z { }", "Unknown algebra `Z`"),
        ],
    )
    def test_resolution_errors(self, text, message):
        with pytest.raises(DSLResolutionError, match=message.replace("`", ".")):
            parse(text)

    def test_lookup(self):
        workspace = parse("algebra A { gen x: 0; }")
        with pytest.raises(DSLResolutionError, match="No algebra named `Z`"):
            workspace.algebra("Z")
        with pytest.raises(DSLResolutionError, match="known: none"):
            workspace.point("p")

    def test_merge(self):
        first = parse("algebra A { gen x: 0; }")
        second = parse("algebra A { gen x: -1; }")
        with pytest.raises(DSLResolutionError, match="defined twice"):
            first.merge(second)
        merged = Workspace().merge(first)
        assert list(merged.algebras) == ["A"]


class TestFiles:
    def test_load(self):
        workspace = load([FIXTURES / "node.dga"])
        assert list(workspace.algebras) == ["A", "N"]
        assert "A->N" in workspace.morphisms
        assert workspace.point("origin").algebra is workspace.algebra("N")

    def test_load_several_files(self, tmp_path):
        extra = tmp_path / "extra.dga"
        extra.write_text("algebra C over N { gen w: -1; d w = x; }\n")
        workspace = load([FIXTURES / "node.dga", extra])
        assert workspace.algebra("C").names == ["x", "xi", "w"]

    def test_errors_carry_the_path(self):
        path = FIXTURES / "syntax_error.dga"
        with pytest.raises(DSLError) as exc_info:
            load([path])
        assert exc_info.value.path == str(path)
        assert exc_info.value.line == 1

    def test_serialize_round_trip(self):
        workspace = parse(LOCALIZATION)
        text = serialize(workspace)
        again = parse(text)
        assert serialize(again) == text
        assert again.algebra("B").names == ["x", "y", "eta"]
        assert "d eta = x*y - 1;" in text
        assert "algebra B over A {" in text
        assert "A->B" not in text
        assert "  y = 1/2;" in text
