from django.conf import settings

from automata.words import Word
from core.testing.testcase import TestCase
from complexes.controllers import ComplexController
from automata.controllers import AutomatonController
from catalog.tests.factories import BundledAutomatonFactory
from complexes.parsers import load_squares, parse_squares, tiles_to_dot, render_rectangle, serialize_squares

DELTA_D_SQUARES = """
states: a b
alphabet: x y
squares:
a x y b
a y y^-1 b
a y^-1 x b
a x^-1 x^-1 b^-1
"""


class TestParseSquares(TestCase):
    def test_delta_d_matches_automaton_file(self):
        complex_ = parse_squares(DELTA_D_SQUARES, name="delta_d")
        self.assertEqual(complex_, BundledAutomatonFactory(name="delta_d"))

    def test_incomplete_link(self):
        with self.assertRaisesCode("MISSING_TRANSITION"):
            parse_squares(DELTA_D_SQUARES.rsplit("\n", 2)[0])

    def test_duplicate_corner(self):
        with self.assertRaisesCode("DUPLICATE_TRANSITION"):
            parse_squares(DELTA_D_SQUARES + "a x x b\n")

    def test_bad_line(self):
        with self.assertRaisesCode("PARSE_ERROR"):
            parse_squares(DELTA_D_SQUARES + "a x b\n")
        with self.assertRaisesCode("PARSE_ERROR"):
            parse_squares("states: a\nalphabet: x\n")

    def test_bundled_complexes(self):
        for name in ("ex71", "ex72"):
            complex_ = load_squares(settings.CATALOG_DATA_DIR / f"{name}.squares")
            self.assertEqual(len(complex_.states), 8)
            self.assertTrue(AutomatonController.is_bireversible(complex_))
            self.assertEqual(len(ComplexController.square_classes(complex_)), 16)

    def test_serialize(self):
        delta_d = BundledAutomatonFactory(name="delta_d")
        text = serialize_squares(delta_d, ComplexController.square_classes(delta_d))
        self.assertEqual(parse_squares(text), delta_d)


class TestRender(TestCase):
    def test_rectangle(self):
        aleshin = BundledAutomatonFactory(name="aleshin")
        a, zero, one = aleshin.resolve("a"), aleshin.resolve("0"), aleshin.resolve("1")
        rectangle = ComplexController.tile_rectangle(aleshin, Word([a]), Word([zero, one]))
        self.assertEqual(render_rectangle(rectangle), "+--0--+--1--+\na     b     c\n+--0--+--0--+\n")

    def test_empty_rectangle(self):
        aleshin = BundledAutomatonFactory(name="aleshin")
        rectangle = ComplexController.tile_rectangle(aleshin, Word(), Word([aleshin.resolve("0")]))
        self.assertEqual(render_rectangle(rectangle), "0\n")

    def test_dot(self):
        tiles = ComplexController.tileset_export(BundledAutomatonFactory(name="aleshin"))
        dot = tiles_to_dot("aleshin", tiles)
        self.assertTrue(dot.startswith('digraph "tiles aleshin" {'))
        self.assertIn('"a" -> "b" [label="0/0"];', dot)
