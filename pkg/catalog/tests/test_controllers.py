import pytest
from django.conf import settings

from actions.models import VERDICTS
from core.testing.testcase import TestCase
from catalog.models import SYMMETRY_POLICIES
from complexes.controllers import ComplexController
from catalog.controllers import CatalogController
from automata.controllers import AutomatonController
from complexes.parsers import parse_squares, serialize_squares
from automata.parsers import parse_automaton, serialize_automaton
from catalog.tests.factories import BundledAutomatonFactory

BUNDLED = ("aleshin", "bellaterra", "delta_d", "delta_s", "lamplighter", "wise")


class TestLoad(TestCase):
    def test_bundled_names(self):
        names = CatalogController.bundled_names()
        for name in BUNDLED + ("ex71", "ex72"):
            self.assertIn(name, names)

    def test_alias(self):
        wise = CatalogController.load("bundled:wise")
        self.assertEqual(wise, CatalogController.load("bundled:aleshin"))
        self.assertEqual(wise.name, "wise")

    def test_unknown(self):
        with self.assertRaisesCode("UNKNOWN_AUTOMATON"):
            CatalogController.load("bundled:nothing")
        with self.assertRaisesCode("UNKNOWN_AUTOMATON"):
            CatalogController.load("/nonexistent/path.automaton")
        with self.assertRaisesCode("UNKNOWN_AUTOMATON"):
            CatalogController.load_presentation("bundled:nothing")

    def test_path(self):
        path = settings.CATALOG_DATA_DIR / "bellaterra.automaton"
        self.assertEqual(CatalogController.load(str(path)), BundledAutomatonFactory(name="bellaterra"))

    def test_round_trips(self):
        for name in BUNDLED:
            automaton = BundledAutomatonFactory(name=name)
            self.assertEqual(parse_automaton(serialize_automaton(automaton)), automaton, name)
        for name in ("ex71", "ex72"):
            complex_ = BundledAutomatonFactory(name=name)
            text = serialize_squares(complex_, ComplexController.square_classes(complex_))
            self.assertEqual(parse_squares(text), complex_, name)

    def test_citation(self):
        self.assertEqual(CatalogController.citation(BundledAutomatonFactory(name="wise")), "free group of rank three")
        self.assertIsNone(CatalogController.citation(BundledAutomatonFactory(name="delta_s")))


class TestSymmetry(TestCase):
    def test_iso_is_only_the_automaton(self):
        aleshin = BundledAutomatonFactory(name="aleshin")
        self.assertEqual(CatalogController.symmetric_images(aleshin, SYMMETRY_POLICIES.ISO), [aleshin])

    def test_dual_policy_identifies_the_boundary(self):
        delta_d = BundledAutomatonFactory(name="delta_d")
        boundary = AutomatonController.dual(delta_d)
        self.assertFalse(CatalogController.equivalent(delta_d, boundary, SYMMETRY_POLICIES.ISO))
        self.assertTrue(CatalogController.equivalent(delta_d, boundary, SYMMETRY_POLICIES.DUAL))

    def test_inverse_policy(self):
        aleshin = BundledAutomatonFactory(name="aleshin")
        inverse = AutomatonController.inverse(aleshin)
        self.assertTrue(CatalogController.equivalent(aleshin, inverse, SYMMETRY_POLICIES.INVERSE))

    def test_distinct_classes(self):
        aleshin, bellaterra = BundledAutomatonFactory(name="aleshin"), BundledAutomatonFactory(name="bellaterra")
        self.assertFalse(CatalogController.equivalent(aleshin, bellaterra, SYMMETRY_POLICIES.DUAL))


class TestEnumerate(TestCase):
    def test_single_state(self):
        enumeration = CatalogController.enumerate(1, 2)
        self.assertAttributesEqual(enumeration, candidates=2, bireversible=2)
        self.assertEqual(sorted(entry.verdict.order for entry in enumeration.entries), [1, 2])
        identity = enumeration.entries[0].automaton
        self.assertTrue(all(x == y for _s, x, y, _t in identity.arrows))

    def test_two_states_are_finite(self):
        enumeration = CatalogController.enumerate(2, 2)
        self.assertEqual(enumeration.candidates, 16)
        self.assertEqual(enumeration.infinite_entries, [])
        self.assertEqual(sum(entry.members for entry in enumeration.entries), enumeration.bireversible)

    def test_policies_are_monotone(self):
        counts = [len(CatalogController.enumerate(2, 2, policy).entries) for policy in SYMMETRY_POLICIES.values()]
        self.assertEqual(counts, sorted(counts, reverse=True))

    def test_three_states(self):
        enumeration = CatalogController.enumerate(3, 2, SYMMETRY_POLICIES.DUAL)
        infinite = enumeration.infinite_entries
        self.assertEqual(len(infinite), 2)
        for name in ("aleshin", "bellaterra"):
            automaton = BundledAutomatonFactory(name=name)
            matches = [e for e in infinite if CatalogController.equivalent(automaton, e.automaton, enumeration.policy)]
            self.assertEqual(len(matches), 1, name)

    def test_predicate(self):
        enumeration = CatalogController.enumerate(2, 2, predicate=lambda automaton: False)
        self.assertAttributesEqual(enumeration, candidates=16, bireversible=0, entries=[])

    def test_size_too_large(self):
        with self.assertRaisesCode("SIZE_TOO_LARGE"):
            CatalogController.enumerate(3, 3)

    def test_text(self):
        text = str(CatalogController.enumerate(1, 2))
        self.assertTrue(text.startswith("# 1 states, 2 letters, iso: 2 candidates, 2 selected, 2 classes\n"))
        self.assertIn("1x2-0\t1\tfinite 1\n", text)


class TestEnumerateVh4(TestCase):
    def test_square_sets_cover_the_link(self):
        for squares in CatalogController.vh4_square_sets():
            self.assertEqual(len(squares), 4)

    def test_classification(self):
        enumeration = CatalogController.enumerate_vh4()
        infinite = enumeration.infinite_entries
        self.assertEqual(len(infinite), 2)
        for name in ("delta_d", "delta_s"):
            automaton = BundledAutomatonFactory(name=name)
            self.assertTrue(
                any(CatalogController.equivalent(automaton, e.automaton, enumeration.policy) for e in infinite), name
            )
        for entry in enumeration.entries:
            if entry not in infinite:
                self.assertEqual(entry.verdict.kind, VERDICTS.FINITE)


def test_identity_fixture(identity_automaton):
    assert AutomatonController.is_bireversible(identity_automaton)
    minimized, _merge = AutomatonController.minimize(identity_automaton)
    assert minimized.states == identity_automaton.states


@pytest.mark.parametrize("bundled_automaton__name", ["aleshin", "bellaterra", "delta_d", "delta_s"])
def test_bundled_fixture(bundled_automaton, bundled_automaton__name):
    assert bundled_automaton.name == bundled_automaton__name
    assert AutomatonController.is_bireversible(bundled_automaton)
