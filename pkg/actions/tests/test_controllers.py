import random

from django.test import override_settings

from automata.words import Word, parse_word
from core.testing.testcase import TestCase
from actions.controllers import ActionController
from automata.controllers import AutomatonController
from actions.models import VERDICTS, Exact, AtLeast
from catalog.tests.factories import AutomatonFactory, BundledAutomatonFactory


def states(automaton, text):
    return parse_word(text, automaton.resolve_state)


def letters(automaton, text):
    return parse_word(text, automaton.resolve_letter)


class TestAct(TestCase):
    def test_single_state(self):
        aleshin = BundledAutomatonFactory(name="aleshin")
        output, section = ActionController.act_and_section(aleshin, states(aleshin, "a"), letters(aleshin, "0"))
        self.assertWordEqual(output, "0")
        self.assertWordEqual(section, "b")

    def test_rightmost_state_acts_first(self):
        """b a on 0: a writes 0 and moves to b, then b writes 1 and moves to a."""
        aleshin = BundledAutomatonFactory(name="aleshin")
        output, section = ActionController.act_and_section(aleshin, states(aleshin, "b a"), letters(aleshin, "0"))
        self.assertWordEqual(output, "1")
        self.assertWordEqual(section, "a b")

    def test_signed_action(self):
        delta_s = BundledAutomatonFactory(name="delta_s")
        self.assertWordEqual(ActionController.act(delta_s, states(delta_s, "a"), letters(delta_s, "x")), "x^-1")
        self.assertWordEqual(ActionController.act(delta_s, states(delta_s, "a^4"), letters(delta_s, "x")), "x")

    def test_identity_word_acts_trivially(self):
        aleshin = BundledAutomatonFactory(name="aleshin")
        v = letters(aleshin, "0 1 1 0")
        self.assertEqual(ActionController.act_and_section(aleshin, Word(), v), (v, Word()))

    def test_composition_and_inverse(self):
        """(gh)(v) = g(h(v)) and g^-1(g(v)) = v on random reduced words."""
        delta_d = BundledAutomatonFactory(name="delta_d")
        closure = delta_d.closure
        rng = random.Random(0)
        for _ in range(50):
            g = Word(rng.choice(closure.states) for _ in range(5))
            h = Word(rng.choice(closure.states) for _ in range(4))
            v = Word(rng.choice(closure.alphabet) for _ in range(8))
            self.assertEqual(
                ActionController.act(delta_d, g * h, v),
                ActionController.act(delta_d, g, ActionController.act(delta_d, h, v)),
            )
            self.assertEqual(ActionController.act(delta_d, g.inverse, ActionController.act(delta_d, g, v)), v)
            self.assertEqual(len(ActionController.act(delta_d, g, v)), len(v))


class TestIsTrivial(TestCase):
    def test_bellaterra_involutions(self):
        bellaterra = BundledAutomatonFactory(name="bellaterra")
        for name in "abc":
            self.assertTrue(ActionController.is_trivial(bellaterra, states(bellaterra, f"{name}^2")))
        self.assertFalse(ActionController.is_trivial(bellaterra, states(bellaterra, "a b")))

    def test_delta_d_cubes(self):
        delta_d = BundledAutomatonFactory(name="delta_d")
        self.assertTrue(ActionController.is_trivial(delta_d, states(delta_d, "a^3")))
        self.assertTrue(ActionController.is_trivial(delta_d, states(delta_d, "b^3")))
        self.assertFalse(ActionController.is_trivial(delta_d, states(delta_d, "a")))

    def test_identity_automaton(self):
        identity = AutomatonFactory()
        self.assertTrue(ActionController.is_trivial(identity, states(identity, "e")))


class TestElementOrder(TestCase):
    def test_finite_orders(self):
        bellaterra = BundledAutomatonFactory(name="bellaterra")
        delta_d = BundledAutomatonFactory(name="delta_d")
        self.assertEqual(ActionController.element_order(bellaterra, states(bellaterra, "a"), 64), Exact(2))
        self.assertEqual(ActionController.element_order(delta_d, states(delta_d, "a"), 64), Exact(3))
        self.assertEqual(ActionController.element_order(delta_d, Word(), 64), Exact(1))

    def test_cutoff(self):
        delta_s = BundledAutomatonFactory(name="delta_s")
        self.assertEqual(ActionController.element_order(delta_s, states(delta_s, "a"), 64), AtLeast(64))
        self.assertEqual(str(AtLeast(64)), ">=64")


class TestLevelTransitivity(TestCase):
    def test_delta_d(self):
        delta_d = BundledAutomatonFactory(name="delta_d")
        self.assertEqual(
            ActionController.is_level_transitive_reduced(delta_d, 5), {n: True for n in range(6)}
        )

    def test_identity_is_not_transitive(self):
        identity = AutomatonFactory()
        self.assertEqual(ActionController.is_level_transitive_reduced(identity, 1), {0: True, 1: False})

    def test_orbit_cap(self):
        delta_d = BundledAutomatonFactory(name="delta_d")
        seed = letters(delta_d, "x x x")
        with self.assertRaisesCode("ORBIT_CAP_EXCEEDED"):
            ActionController.orbit(delta_d, seed, ActionController.state_generators(delta_d), cap=5)


class TestLevelStabilizerOrbits(TestCase):
    def test_delta_d_stabilizer_moves_level_two(self):
        delta_d = BundledAutomatonFactory(name="delta_d")
        cycles = ActionController.level_stabilizer_orbits(delta_d)
        self.assertEqual([len(cycle) for cycle in cycles], [3, 3, 3, 3])
        for cycle in cycles:
            self.assertEqual({len(w) for w in cycle}, {2})
            # every word of a cycle starts with the same fixed letter
            self.assertEqual(len({w[0] for w in cycle}), 1)

    def test_dual_of_delta_d_swaps_pairs(self):
        dual = AutomatonController.dual(BundledAutomatonFactory(name="delta_d"))
        cycles = ActionController.level_stabilizer_orbits(dual)
        self.assertEqual(
            {frozenset(w.compact() for w in cycle) for cycle in cycles},
            {
                frozenset({"ab", "ab^-1"}),
                frozenset({"ba", "ba^-1"}),
                frozenset({"b^-1a", "b^-1a^-1"}),
                frozenset({"a^-1b", "a^-1b^-1"}),
            },
        )

    def test_identity_has_no_cycles(self):
        self.assertEqual(ActionController.level_stabilizer_orbits(AutomatonFactory()), [])


class TestFreeness(TestCase):
    def test_aleshin_free_on_short_words(self):
        self.assertTrue(ActionController.is_free_up_to(BundledAutomatonFactory(name="aleshin"), 4))

    def test_bellaterra_not_free(self):
        bellaterra = BundledAutomatonFactory(name="bellaterra")
        self.assertFalse(ActionController.is_free_up_to(bellaterra, 2))
        self.assertWordEqual(ActionController.first_trivial_word(bellaterra, 2), "a a")

    def test_alternating_words(self):
        bellaterra = BundledAutomatonFactory(name="bellaterra")
        factors = [[states(bellaterra, name)] for name in "abc"]
        self.assertIsNone(ActionController.first_trivial_alternating_word(bellaterra, factors, 6))
        delta_d = BundledAutomatonFactory(name="delta_d")
        factors = [
            [states(delta_d, "a"), states(delta_d, "a^-1")],
            [states(delta_d, "b"), states(delta_d, "b^-1")],
        ]
        self.assertIsNone(ActionController.first_trivial_alternating_word(delta_d, factors, 6))


class TestGroupOrder(TestCase):
    def test_identity_is_trivial_group(self):
        verdict = ActionController.group_order(AutomatonFactory())
        self.assertEqual(verdict.kind, VERDICTS.FINITE)
        self.assertEqual(verdict.order, 1)
        self.assertWordsEqual(verdict.elements, ["()"])

    def test_lamplighter_is_not_finite(self):
        automaton = BundledAutomatonFactory(name="lamplighter")
        verdict = ActionController.group_order(automaton, max_elements=50)
        self.assertNotEqual(verdict.kind, VERDICTS.FINITE)

    @override_settings(REPLICATION_MAX_K=3, REPLICATION_MAX_M=3)
    def test_infinite_group_is_certified(self):
        delta_s = BundledAutomatonFactory(name="delta_s")
        verdict = ActionController.group_order(delta_s, max_elements=200)
        self.assertEqual(verdict.kind, VERDICTS.INFINITE_CERTIFIED)
        self.assertAttributesEqual(verdict.certificate, k=3, m=3)


class TestReplicationCertificate(TestCase):
    def test_delta_s(self):
        delta_s = BundledAutomatonFactory(name="delta_s")
        certificate = ActionController.replication_certificate(delta_s)
        self.assertAttributesEqual(certificate, k=3, m=3)
        for x in delta_s.positive_alphabet:
            self.assertEqual(certificate.letter_map[x], Word([x]) ** 3)
        for s in delta_s.positive_states:
            self.assertEqual(certificate.state_map[s], Word([s]) ** -3)

    def test_none_for_identity(self):
        self.assertIsNone(ActionController.replication_certificate(AutomatonFactory()))
