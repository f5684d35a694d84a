from automata.words import KINDS, Sym, Word, parse_word
from core.testing.testcase import TestCase


def resolve(base):
    return Sym(base, 1, KINDS.LETTER if base in ("x", "y") else KINDS.STATE)


class TestSym(TestCase):
    def test_parse_inverse(self):
        """A trailing ^-1 flips the sign, twice gives back the symbol."""
        self.assertEqual(Sym.parse("a^-1"), Sym("a", -1))
        self.assertEqual(Sym.parse("a^-1^-1"), Sym("a", 1))

    def test_inverse_is_involutive(self):
        sym = Sym("x", 1, KINDS.LETTER)
        self.assertEqual(~~sym, sym)
        self.assertAttributesEqual(~sym, base="x", sign=-1, kind=KINDS.LETTER, name="x^-1")

    def test_parse_rejects_blank(self):
        with self.assertRaisesCode("PARSE_ERROR"):
            Sym.parse("^-1")


class TestWord(TestCase):
    def test_free_reduction(self):
        a, b = Sym("a"), Sym("b")
        self.assertEqual(Word([a, b, ~b, ~a, b]), Word([b]))

    def test_identity_text(self):
        self.assertWordEqual(Word(), "()")
        self.assertIsNone(Word().kind)

    def test_powers_and_inverse(self):
        word = parse_word("a b^-1", resolve)
        self.assertWordEqual(word**3, "a b^-1 a b^-1 a b^-1")
        self.assertWordEqual(word**-1, "b a^-1")
        self.assertWordEqual(word * word.inverse, "()")

    def test_parse_exponents(self):
        self.assertWordEqual(parse_word("a^3 b^-2", resolve), "a a a b^-1 b^-1")
        self.assertWordEqual(parse_word("()", resolve), "()")

    def test_mixed_kinds_rejected(self):
        with self.assertRaisesCode("MIXED_WORD"):
            parse_word("a x", resolve)

    def test_compact(self):
        self.assertEqual(parse_word("x y^-1", resolve).compact(), "xy^-1")
