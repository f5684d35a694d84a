from django.test import override_settings

from automata.words import KINDS, Word, parse_word
from core.testing.testcase import TestCase
from complexes.models import MixedWord
from actions.controllers import ActionController
from complexes.controllers import ComplexController
from automata.controllers import AutomatonController
from catalog.tests.factories import AutomatonFactory, BundledAutomatonFactory
from residual.models import STRATEGIES, NRF_VERDICTS, INCONCLUSIVE_REASONS, GeneratorMap
from residual.controllers import ResidualController, get_endomorphism_controller


def mixed(automaton, text):
    return parse_word(text, automaton.resolve, cls=MixedWord)


def generator_map(automaton, **images):
    """Images by generator name; inverses follow their base."""
    return GeneratorMap({automaton.resolve(name): mixed(automaton, text) for name, text in images.items()})


class TestStabilizerPartition(TestCase):
    def test_aleshin(self):
        partition = ResidualController.stabilizer_partition(BundledAutomatonFactory(name="aleshin"))
        self.assertWordsEqual(partition.positive, ["a"])
        self.assertWordsEqual(partition.negative, ["b"])
        self.assertWordsEqual(partition.rest, ["c"])

    def test_bellaterra(self):
        partition = ResidualController.stabilizer_partition(BundledAutomatonFactory(name="bellaterra"))
        self.assertWordsEqual(partition.positive, ["b", "c"])
        self.assertWordsEqual(partition.negative, ["a", "c"])
        self.assertEqual(partition.rest, ())

    def test_identity(self):
        partition = ResidualController.stabilizer_partition(AutomatonFactory())
        self.assertWordsEqual(partition.positive, ["e"])

    def test_not_binary(self):
        with self.assertRaisesCode("NOT_BINARY"):
            ResidualController.stabilizer_partition(BundledAutomatonFactory(name="lamplighter"))

    def test_dichotomy_violation(self):
        """In the Delta_D complex b fixes x but sends y to x^-1."""
        with self.assertRaisesCode("DICHOTOMY_VIOLATION"):
            ResidualController.stabilizer_partition(BundledAutomatonFactory(name="delta_d"))


class TestDualExponent(TestCase):
    def test_values(self):
        self.assertEqual(ResidualController.dual_exponent(BundledAutomatonFactory(name="aleshin")), 2)
        self.assertEqual(ResidualController.dual_exponent(AutomatonFactory()), 1)

    def test_least_exponent(self):
        """(y^-1 x)^n fixes every state of the closure, and no smaller power does."""
        for name in ("aleshin", "bellaterra"):
            automaton = BundledAutomatonFactory(name=name)
            x, y = automaton.letter_generators
            n = ResidualController.dual_exponent(automaton)

            def fixes_states(k):
                v = Word([~y, x]) ** k
                return all(
                    ActionController.section(automaton, Word([s]), v) == Word([s]) for s in automaton.closure.states
                )

            self.assertTrue(fixes_states(n), name)
            self.assertFalse(any(fixes_states(k) for k in range(1, n)), name)

    def test_not_binary(self):
        with self.assertRaisesCode("NOT_BINARY"):
            ResidualController.dual_exponent(BundledAutomatonFactory(name="lamplighter"))


class TestEndomorphism(TestCase):
    def test_aleshin_binary_map(self):
        aleshin = BundledAutomatonFactory(name="aleshin")
        mapping = ResidualController.build_endomorphism(aleshin)
        self.assertEqual(mapping.name, STRATEGIES.BINARY)
        self.assertEqual(str(mapping), "a->a, b->b, c->c, 0->0 1^-1 0 1^-1 0, 1->1 0^-1 1 0^-1 1")
        self.assertTrue(ResidualController.verify_morphism(aleshin, mapping))

    def test_corrupted_map(self):
        aleshin = BundledAutomatonFactory(name="aleshin")
        corrupted = generator_map(aleshin, **{"0": "0 1"})
        relator = ResidualController.failing_relator(aleshin, corrupted)
        self.assertIsNotNone(relator)
        self.assertIn(relator, ComplexController.presentation(aleshin).relators)
        self.assertFalse(ResidualController.verify_morphism(aleshin, corrupted))

    def test_bundled_binary_maps_verify(self):
        for name in ("aleshin", "bellaterra"):
            automaton = BundledAutomatonFactory(name=name)
            mapping = ResidualController.build_endomorphism(automaton, STRATEGIES.BINARY)
            self.assertTrue(ResidualController.verify_morphism(automaton, mapping), name)

    def test_delta_d_power_map(self):
        delta_d = BundledAutomatonFactory(name="delta_d")
        self.assertEqual(ResidualController.power_exponent(delta_d), 3)
        mapping = ResidualController.build_endomorphism(delta_d)
        self.assertEqual(mapping.name, STRATEGIES.POWER)
        self.assertEqual(str(mapping), "a->a a a a, b->b b b b, x->x, y->y")
        self.assertTrue(ResidualController.verify_morphism(delta_d, mapping))

    def test_delta_d_automorphism(self):
        """a <-> b with both letters inverted is an involutive automorphism of the Delta_D complex."""
        delta_d = BundledAutomatonFactory(name="delta_d")
        gamma = generator_map(delta_d, a="b", b="a", x="x^-1", y="y^-1")
        self.assertTrue(ResidualController.verify_morphism(delta_d, gamma))
        self.assertTrue(gamma.compose(gamma).is_identity())
        self.assertFalse(gamma.is_identity())

    def test_two_state_components(self):
        dual = AutomatonController.dual(BundledAutomatonFactory(name="aleshin"))
        controller = get_endomorphism_controller(dual)
        self.assertEqual(controller.strategy, STRATEGIES.TWO_STATE)
        mapping = controller.build(dual)
        self.assertTrue(ResidualController.verify_morphism(dual, mapping))
        for x in dual.letter_generators:
            self.assertEqual(mapping.image(x), MixedWord([x]))
        self.assertWordsEqual(controller.witnesses(dual, mapping), ["0^-1 1 0^-1 1 0^-1 1 0^-1 1"])
        self.assertTrue(all(w[0].kind == KINDS.STATE for w in controller.witnesses(dual, mapping)))

    def test_not_applicable(self):
        with self.assertRaisesCode("NOT_APPLICABLE"):
            get_endomorphism_controller(BundledAutomatonFactory(name="aleshin"), STRATEGIES.POWER)
        with self.assertRaisesCode("NOT_APPLICABLE"):
            get_endomorphism_controller(BundledAutomatonFactory(name="lamplighter"), "unknown")


class TestSubautomatonEmbedding(TestCase):
    def test_bellaterra_inversion(self):
        bellaterra = BundledAutomatonFactory(name="bellaterra")
        embedding = ResidualController.subautomaton_embedding(bellaterra, 1)
        self.assertEqual(str(embedding), "a->a^-1, b->b^-1, c->c^-1")
        self.assertEqual(embedding.length, 1)
        mapping = ResidualController.build_endomorphism(bellaterra, STRATEGIES.EMBEDDING)
        self.assertTrue(ResidualController.verify_morphism(bellaterra, mapping))

    def test_identity_automaton(self):
        """A single state fixing every letter is X-isomorphic to its own inverse."""
        embedding = ResidualController.subautomaton_embedding(AutomatonFactory(), 1)
        self.assertEqual(str(embedding), "e->e^-1")

    def test_transitions_match(self):
        for name in ("aleshin", "bellaterra", "delta_d"):
            automaton = BundledAutomatonFactory(name=name)
            embedding = ResidualController.subautomaton_embedding(automaton, 2)
            if embedding is None:
                continue
            words = embedding.states
            self.assertFalse(all(w == Word([s]) for s, w in words.items()), name)
            for s, x, y, t in automaton.arrows:
                if s not in words:
                    continue
                output, section = ActionController.act_and_section(automaton, words[s], Word([x]))
                self.assertEqual(output, Word([y]))
                self.assertEqual(section, words[t] if t in words else words[t.inverse].inverse)


class TestPm(TestCase):
    def test_boundary_of_delta_d(self):
        boundary = AutomatonController.dual(BundledAutomatonFactory(name="delta_d"))
        allowed = {("a", "a^-1"), ("a^-1", "a"), ("b", "b^-1"), ("b^-1", "b")}
        for m in range(1, 7):
            pairs = {(str(x), str(y)) for x, y in ResidualController.compute_pm(boundary, m).pairs}
            self.assertTrue(pairs, m)
            self.assertLessEqual(pairs, allowed, m)
        pairs = {(str(x), str(y)) for x, y in ResidualController.compute_pm(boundary, 1).pairs}
        self.assertIn(("a", "a^-1"), pairs)
        self.assertIn(("b", "b^-1"), pairs)

    def test_unrestricted_reads_every_prefix(self):
        """Without the stabilizer condition, a single generator already swaps letters of different names."""
        boundary = AutomatonController.dual(BundledAutomatonFactory(name="delta_d"))
        pm = ResidualController.compute_pm(boundary, 1, 1, 0, stabilized=False)
        self.assertTrue(any(x.base != y.base for x, y in pm.pairs))
        for (x, y), (g, u) in pm.pairs.items():
            self.assertEqual(ActionController.act(boundary, g, u * Word([x])), u * Word([y]))

    def test_witnesses_verify(self):
        aleshin = BundledAutomatonFactory(name="aleshin")
        for m in (1, 2):
            pm = ResidualController.compute_pm(aleshin, m, 4, 4)
            self.assertTrue(pm.pairs)
            for (x, y), (g, u) in pm.pairs.items():
                self.assertNotEqual(x, y)
                self.assertEqual(ActionController.act(aleshin, g**m, u * Word([x])), u * Word([y]))

    def test_larger_bounds_keep_pairs(self):
        aleshin = BundledAutomatonFactory(name="aleshin")
        small = ResidualController.compute_pm(aleshin, 2, 2, 2)
        large = ResidualController.compute_pm(aleshin, 2, 3, 3)
        self.assertLessEqual(set(small.pairs), set(large.pairs))

    def test_identity(self):
        self.assertEqual(ResidualController.compute_pm(AutomatonFactory(), 3, 3, 3).pairs, {})


class TestFixedSetEvidence(TestCase):
    def test_binary_map_moves_letter_words(self):
        aleshin = BundledAutomatonFactory(name="aleshin")
        mapping = ResidualController.build_endomorphism(aleshin)
        evidence = ResidualController.fixed_set_evidence(aleshin, mapping, KINDS.LETTER, corpus_size=50)
        self.assertAttributesEqual(evidence, fixes_generators=True, corpus_size=50, moved=50, lengthened=50)
        self.assertTrue(evidence.passed)

    def test_identity_map_fails(self):
        aleshin = BundledAutomatonFactory(name="aleshin")
        evidence = ResidualController.fixed_set_evidence(aleshin, GeneratorMap({}), KINDS.LETTER, corpus_size=20)
        self.assertEqual(evidence.moved, 0)
        self.assertFalse(evidence.passed)

    def test_letter_swap_moves_without_lengthening(self):
        aleshin = BundledAutomatonFactory(name="aleshin")
        mapping = generator_map(aleshin, **{"0": "1", "1": "0"})
        evidence = ResidualController.fixed_set_evidence(aleshin, mapping, KINDS.LETTER, corpus_size=20)
        self.assertAttributesEqual(evidence, fixes_generators=True, moved=20, lengthened=0)
        self.assertFalse(evidence.passed)

    def test_inversion_map_keeps_lengths(self):
        bellaterra = BundledAutomatonFactory(name="bellaterra")
        mapping = ResidualController.build_endomorphism(bellaterra, STRATEGIES.EMBEDDING)
        evidence = ResidualController.fixed_set_evidence(bellaterra, mapping, KINDS.STATE, corpus_size=20)
        self.assertAttributesEqual(evidence, fixes_generators=True, moved=20, lengthened=0)
        self.assertFalse(evidence.passed)
        self.assertTrue(evidence._replace(lengthens=False).passed)


class TestNrfReport(TestCase):
    def test_identity_is_inconclusive(self):
        report = ResidualController.nrf_report(AutomatonFactory())
        self.assertAttributesEqual(
            report, verdict=NRF_VERDICTS.INCONCLUSIVE, reason=INCONCLUSIVE_REASONS.FINITE_GROUP, infiniteness="finite 1"
        )

    def test_aleshin(self):
        aleshin = BundledAutomatonFactory(name="aleshin")
        report = ResidualController.nrf_report(aleshin, citation="free of rank three", max_elements=300)
        self.assertEqual(report.verdict, NRF_VERDICTS.NON_RESIDUALLY_FINITE)
        self.assertIsNone(report.reason)
        self.assertTrue(report.morphism_verified)
        self.assertTrue(report.fixed_evidence.passed)
        self.assertWordsEqual(report.witnesses, ["0^-1 1 0^-1 1 0^-1 1 0^-1 1"])
        self.assertIn("verdict: NON_RESIDUALLY_FINITE\n", report.serialize())

    def test_delta_d(self):
        delta_d = BundledAutomatonFactory(name="delta_d")
        report = ResidualController.nrf_report(delta_d, citation="anti-torus", max_elements=300)
        self.assertEqual(report.verdict, NRF_VERDICTS.NON_RESIDUALLY_FINITE)
        self.assertEqual(report.witness_mode, "any")
        self.assertWordsEqual(report.witnesses, ["a a a a a a", "b b b b b b"])

    def test_bellaterra_embedding(self):
        bellaterra = BundledAutomatonFactory(name="bellaterra")
        report = ResidualController.nrf_report(
            bellaterra, citation="C2*C2*C2", strategy=STRATEGIES.EMBEDDING, max_elements=300
        )
        self.assertEqual(report.verdict, NRF_VERDICTS.NON_RESIDUALLY_FINITE)
        self.assertWordsEqual(report.witnesses, ["a a b^-1 b^-1", "b b c^-1 c^-1", "c c a^-1 a^-1"])

    def test_uncited_lower_bound(self):
        aleshin = BundledAutomatonFactory(name="aleshin")
        with override_settings(REPLICATION_MAX_K=1, REPLICATION_MAX_M=1):
            report = ResidualController.nrf_report(aleshin, max_elements=50)
        self.assertEqual(report.reason, INCONCLUSIVE_REASONS.INFINITENESS_UNKNOWN)
        self.assertIsNone(report.endomorphism)

    def test_no_endomorphism(self):
        lamplighter = BundledAutomatonFactory(name="lamplighter")
        report = ResidualController.nrf_report(lamplighter, citation="lamplighter", strategy=STRATEGIES.BINARY)
        self.assertAttributesEqual(
            report,
            reason=INCONCLUSIVE_REASONS.NO_ENDOMORPHISM,
            infiniteness="-",
            infiniteness_source="-",
            strategy=None,
        )

    def test_default_group_order_budget(self):
        aleshin = BundledAutomatonFactory(name="aleshin")
        with override_settings(NRF_MAX_ELEMENTS=50, REPLICATION_MAX_K=1, REPLICATION_MAX_M=1):
            report = ResidualController.nrf_report(aleshin)
        self.assertEqual(report.reason, INCONCLUSIVE_REASONS.INFINITENESS_UNKNOWN)
        self.assertTrue(report.infiniteness.startswith("at least "))

    def test_serialize_field_order(self):
        report = ResidualController.nrf_report(AutomatonFactory())
        keys = [line.split(":")[0] for line in report.serialize().splitlines()]
        self.assertEqual(tuple(keys), report.FIELDS)
