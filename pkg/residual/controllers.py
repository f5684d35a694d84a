import math
import random
import logging
from abc import ABC, abstractmethod

from django.conf import settings

from automata.words import KINDS, Sym, Word, reduced_words
from actions.models import VERDICTS
from complexes.models import MixedWord
from actions.controllers import ActionController
from complexes.controllers import ComplexController
from automata.controllers import AutomatonController
from core.exceptions import NotBinary, NotApplicable, DichotomyViolation, InternalDisagreement
from residual.models import (
    STRATEGIES,
    NRF_VERDICTS,
    INCONCLUSIVE_REASONS,
    PmSet,
    NrfReport,
    Embedding,
    Partition,
    GeneratorMap,
    FixedSetEvidence,
)

logger = logging.getLogger(__name__)

EMBEDDING_MAX_DEPTH = 2


def _binary_letters(automaton):
    letters = automaton.letter_generators
    if len(letters) != 2:
        raise NotBinary(details={"automaton": automaton.name, "letters": len(letters)})
    return letters


def _swap_kind(sym):
    return Sym(sym.base, sym.sign, KINDS.LETTER if sym.kind == KINDS.STATE else KINDS.STATE)


def _random_reduced_word(rng, syms, length):
    word = [rng.choice(syms)]
    while len(word) < length:
        sym = rng.choice(syms)
        if sym != word[-1].inverse:
            word.append(sym)
    return MixedWord(word)


class ResidualController:
    @staticmethod
    def stabilizer_partition(automaton) -> Partition:
        """
        Over a binary alphabet {x, y} a state fixes x iff it fixes y (and x^-1 iff y^-1).
        """
        x, y = _binary_letters(automaton)
        table = automaton.closure.table

        def fixes(s, first, second):
            fixes_first, fixes_second = table[(s, first)][0] == first, table[(s, second)][0] == second
            if fixes_first != fixes_second:
                details = {"automaton": automaton.name, "state": s, "letters": f"{first} {second}"}
                raise DichotomyViolation(details=details)
            return fixes_first

        positive, negative, rest = [], [], []
        for s in automaton.state_generators:
            fixes_positive, fixes_negative = fixes(s, x, y), fixes(s, ~x, ~y)
            if fixes_positive:
                positive.append(s)
            if fixes_negative:
                negative.append(s)
            if not fixes_positive and not fixes_negative:
                rest.append(s)
        return Partition(tuple(positive), tuple(negative), tuple(rest))

    @staticmethod
    def dual_exponent(automaton) -> int:
        """Least n >= 1 with (y^-1 x)^n and (x^-1 y)^n fixing every state of the closure under the dual action."""
        x, y = _binary_letters(automaton)
        v = Word([~y, x])
        image = {s: ActionController.section(automaton, Word([s]), v)[0] for s in automaton.closure.states}
        n, done = 1, set()
        for s in image:
            if s in done:
                continue
            cycle, t = 0, s
            while True:
                done.add(t)
                t = image[t]
                cycle += 1
                if t == s:
                    break
            n = math.lcm(n, cycle)
        w = Word([~x, y]) ** n
        for s in automaton.closure.states:
            if ActionController.section(automaton, Word([s]), w) != Word([s]):
                raise InternalDisagreement(details={"automaton": automaton.name, "state": s, "exponent": n})
        return n

    @staticmethod
    def power_exponent(automaton, max_exponent: int | None = None) -> int | None:
        """Least n with s^n y = y t^n in the fundamental group for every arrow s -> x|y -> t of the closure."""
        max_exponent = max_exponent or settings.POWER_EXPONENT_MAX
        arrows = automaton.closure.arrows
        for n in range(1, max_exponent + 1):
            if all(
                ComplexController.pi1_is_trivial(automaton, MixedWord([s] * n + [y] + [~t] * n + [~y]))
                for s, _x, y, t in arrows
            ):
                return n
        return None

    @staticmethod
    def failing_relator(automaton, mapping: GeneratorMap) -> MixedWord | None:
        for relator in ComplexController.presentation(automaton).relators:
            if not ComplexController.pi1_is_trivial(automaton, mapping.apply(relator)):
                logger.info("%s does not preserve relator %s of %s", mapping.name or "map", relator, automaton.name)
                return relator
        return None

    @staticmethod
    def verify_morphism(automaton, mapping: GeneratorMap) -> bool:
        return ResidualController.failing_relator(automaton, mapping) is None

    @staticmethod
    def build_endomorphism(automaton, strategy: str | None = None) -> GeneratorMap:
        return get_endomorphism_controller(automaton, strategy).build(automaton)

    @staticmethod
    def subautomaton_embedding(automaton, depth: int) -> Embedding | None:
        """
        First non-identity assignment s -> w_s of equal-length reduced state words with
        w_s reading x, writing y and moving to w_t for every arrow s -> x|y -> t (letters fixed).
        """
        generators = automaton.state_generators
        arrows = {s: [arrow for arrow in automaton.arrows if arrow.source == s] for s in generators}

        def word_of(assignment, s):
            if s in assignment:
                return assignment[s]
            if s.inverse in assignment:
                return assignment[s.inverse].inverse
            return None

        def propagate(assignment, s, w):
            assignment = {**assignment, s: w}
            queue = [s]
            while queue:
                source = queue.pop(0)
                for _s, x, y, t in arrows[source]:
                    output, section = ActionController.act_and_section(automaton, assignment[source], Word([x]))
                    if output != Word([y]):
                        return None
                    expected = word_of(assignment, t)
                    if expected is None:
                        key = t if t in arrows else t.inverse
                        assignment[key] = section if key == t else section.inverse
                        queue.append(key)
                    elif expected != section:
                        return None
            return assignment

        def search(assignment, candidates):
            pending = [s for s in generators if s not in assignment]
            if not pending:
                if all(assignment[s] == Word([s]) for s in generators):
                    return None
                return assignment
            for w in candidates:
                extended = propagate(assignment, pending[0], w)
                if extended is not None:
                    res = search(extended, candidates)
                    if res is not None:
                        return res
            return None

        for length in range(1, depth + 1):
            candidates = list(reduced_words(automaton.closure.states, length))
            assignment = search({}, candidates)
            if assignment is not None:
                embedding = Embedding({s: assignment[s] for s in generators})
                logger.info("%s embeds into its word automaton: %s", automaton.name, embedding)
                return embedding
        return None

    @staticmethod
    def compute_pm(
        automaton,
        m: int,
        max_g_length: int | None = None,
        max_u_length: int | None = None,
        stabilized: bool = True,
    ) -> PmSet:
        """
        Pairs (x, y), x != y, with g^m(u x) = u y, for state words g and positive letter words u within the bounds.

        With `stabilized`, g^m must fix every letter and a pair is only read at u x when the section of g^m at
        u without its last letter also fixes every letter. Otherwise every fixed prefix u is read.
        """
        max_g_length = max_g_length or settings.PM_MAX_G_LENGTH
        max_u_length = settings.PM_MAX_U_LENGTH if max_u_length is None else max_u_length
        letters = automaton.closure.alphabet

        def outputs(section):
            return {x: ActionController.act_and_section(automaton, section, Word([x]))[0][0] for x in letters}

        pairs = {}
        for length in range(1, max_g_length + 1):
            for g in reduced_words(automaton.state_generators, length):
                power = g**m
                images = outputs(power)
                if stabilized and any(y != x for x, y in images.items()):
                    continue
                # u runs over a tree; only prefixes fixed by g^m can be extended
                stack = [(Word(), power, images, not stabilized)]
                while stack:
                    u, section, images, readable = stack.pop()
                    if readable:
                        for x, y in images.items():
                            if y != x and not (u and x == u[-1].inverse) and (x, y) not in pairs:
                                pairs[(x, y)] = (g, u)
                    if len(u) == max_u_length:
                        continue
                    fixes_letters = all(y == x for x, y in images.items())
                    for z in reversed(automaton.letter_generators):
                        output, next_section = ActionController.act_and_section(automaton, section, Word([z]))
                        if output == Word([z]):
                            child = (u * Word([z]), next_section, outputs(next_section))
                            stack.append(child + (not stabilized or fixes_letters,))
        logger.debug("P_%s of %s: %s pairs", m, automaton.name, len(pairs))
        return PmSet(m, pairs, max_g_length, max_u_length)

    @staticmethod
    def fixed_set_evidence(
        automaton, mapping, moved_kind, corpus_size=None, seed=None, lengthens=True
    ) -> FixedSetEvidence:
        """
        The map fixes every generator of the other kind, and moves random reduced words of the moved kind.
        With `lengthens`, every one of them must also get strictly longer.
        """
        corpus_size = corpus_size or settings.FIX_CORPUS_SIZE
        seed = settings.RANDOM_SEED if seed is None else seed
        if moved_kind == KINDS.STATE:
            fixed, moved_syms = automaton.letter_generators, automaton.state_generators
        else:
            fixed, moved_syms = automaton.state_generators, automaton.letter_generators
        fixes_generators = all(mapping.image(sym) == MixedWord([sym]) for sym in fixed)
        syms = list(moved_syms) + [sym.inverse for sym in moved_syms]
        rng = random.Random(seed)
        moved = lengthened = 0
        for _ in range(corpus_size):
            w = _random_reduced_word(rng, syms, rng.randint(1, settings.PROPERTY_WORD_LENGTH))
            image = mapping.apply(w)
            moved += image != w
            lengthened += len(image) > len(w)
        return FixedSetEvidence(fixes_generators, corpus_size, moved, lengthened, lengthens)

    @staticmethod
    def intersection_witnesses(automaton, strategy: str | None = None) -> list[MixedWord]:
        controller = get_endomorphism_controller(automaton, strategy)
        return controller.witnesses(automaton, controller.build(automaton))

    @staticmethod
    def nrf_report(
        automaton, citation=None, strategy=None, max_elements=None, corpus_size=None, seed=None
    ) -> NrfReport:
        """
        Non-residual finiteness follows from three checked premises: an infinite automaton group, an
        endomorphism preserving the relations, and evidence that it fixes exactly one side.
        """
        fields = {
            "automaton": automaton.name,
            "infiniteness": "-",
            "infiniteness_source": "-",
            "strategy": None,
            "endomorphism": None,
            "morphism_verified": False,
            "fixed_evidence": None,
            "witnesses": [],
            "witness_mode": "-",
            "verdict": NRF_VERDICTS.INCONCLUSIVE,
        }

        def report(reason=None):
            verdict = NRF_VERDICTS.INCONCLUSIVE if reason else NRF_VERDICTS.NON_RESIDUALLY_FINITE
            logger.info("%s: %s %s", automaton.name, verdict, reason or "")
            return NrfReport(**{**fields, "verdict": verdict, "reason": reason})

        try:
            controller = get_endomorphism_controller(automaton, strategy)
        except NotApplicable:
            return report(INCONCLUSIVE_REASONS.NO_ENDOMORPHISM)

        order = ActionController.group_order(automaton, max_elements=max_elements or settings.NRF_MAX_ELEMENTS)
        if order.kind == VERDICTS.FINITE:
            fields.update(infiniteness=f"finite {order.order}", infiniteness_source="computed")
            return report(INCONCLUSIVE_REASONS.FINITE_GROUP)
        if order.kind == VERDICTS.INFINITE_CERTIFIED:
            fields.update(infiniteness="infinite", infiniteness_source=f"certified {order.certificate}")
        elif citation:
            fields.update(infiniteness="infinite", infiniteness_source=f"cited {citation}")
        else:
            fields.update(infiniteness=f"at least {order.distinct_elements_found}", infiniteness_source="-")
            return report(INCONCLUSIVE_REASONS.INFINITENESS_UNKNOWN)

        mapping = controller.build(automaton)
        fields.update(strategy=controller.strategy, endomorphism=mapping, witness_mode=controller.witness_mode)
        if not ResidualController.verify_morphism(automaton, mapping):
            return report(INCONCLUSIVE_REASONS.MORPHISM_FAILED)
        fields["morphism_verified"] = True

        evidence = ResidualController.fixed_set_evidence(
            automaton,
            mapping,
            controller.moved_kind,
            corpus_size=corpus_size,
            seed=seed,
            lengthens=controller.lengthens,
        )
        fields["fixed_evidence"] = evidence
        if not evidence.passed:
            return report(INCONCLUSIVE_REASONS.FIXED_SET_FAILED)

        witnesses = controller.witnesses(automaton, mapping)
        fields["witnesses"] = witnesses
        if any(ComplexController.pi1_is_trivial(automaton, w) for w in witnesses):
            return report(INCONCLUSIVE_REASONS.TRIVIAL_WITNESS)
        return report()


class BaseEndomorphismController(ABC):
    strategy = None
    moved_kind = KINDS.STATE
    # Maps whose fixed set follows from length monotonicity must lengthen every moved word
    lengthens = True
    # "all": every witness lies in the intersection of finite index subgroups; "any": at least one does
    witness_mode = "all"

    @abstractmethod
    def applies(self, automaton) -> bool:
        raise NotImplementedError

    @abstractmethod
    def build(self, automaton) -> GeneratorMap:
        raise NotImplementedError

    @abstractmethod
    def witnesses(self, automaton, mapping: GeneratorMap) -> list[MixedWord]:
        raise NotImplementedError


class BinaryEndomorphismController(BaseEndomorphismController):
    """x -> x(y^-1 x)^n, y -> y(x^-1 y)^n, states fixed."""

    strategy = STRATEGIES.BINARY
    moved_kind = KINDS.LETTER

    def applies(self, automaton) -> bool:
        return not automaton.signed and len(automaton.letter_generators) == 2

    def build(self, automaton) -> GeneratorMap:
        x, y = _binary_letters(automaton)
        n = ResidualController.dual_exponent(automaton)
        images = {s: MixedWord([s]) for s in automaton.state_generators}
        images[x] = MixedWord([x]) * MixedWord([~y, x]) ** n
        images[y] = MixedWord([y]) * MixedWord([~x, y]) ** n
        return GeneratorMap(images, name=self.strategy)

    def witnesses(self, automaton, mapping):
        x, y = _binary_letters(automaton)
        n = ResidualController.dual_exponent(automaton)
        return [MixedWord([~x, y]) ** (2 * n)]


class PowerEndomorphismController(BaseEndomorphismController):
    """s -> s^(1+n) on a signed complex with two positive states, letters fixed."""

    strategy = STRATEGIES.POWER
    witness_mode = "any"

    def applies(self, automaton) -> bool:
        if not automaton.signed or len(automaton.state_generators) != 2:
            return False
        return ResidualController.power_exponent(automaton) is not None

    def build(self, automaton) -> GeneratorMap:
        n = ResidualController.power_exponent(automaton)
        if n is None:
            raise NotApplicable(details={"automaton": automaton.name, "strategy": self.strategy})
        images = {s: MixedWord([s] * (1 + n)) for s in automaton.state_generators}
        images.update({x: MixedWord([x]) for x in automaton.letter_generators})
        return GeneratorMap(images, name=self.strategy)

    def witnesses(self, automaton, mapping):
        n = ResidualController.power_exponent(automaton)
        return [MixedWord([s] * (2 * n)) for s in automaton.state_generators]


class TwoStateEndomorphismController(BaseEndomorphismController):
    """
    The binary construction applied to the dual of every two-state component, read back through
    the isomorphism between the complexes of a component and of its dual.
    """

    strategy = STRATEGIES.TWO_STATE

    def applies(self, automaton) -> bool:
        if automaton.signed:
            return False
        return all(len(c.states) == 2 for c in AutomatonController.connected_components(automaton))

    def build(self, automaton) -> GeneratorMap:
        images = {}
        for component in AutomatonController.connected_components(automaton):
            dual = AutomatonController.dual(component)
            for sym, image in BinaryEndomorphismController().build(dual).images.items():
                if sym.kind != KINDS.LETTER:
                    continue
                sym, image = _swap_kind(sym), MixedWord(map(_swap_kind, image))
                if sym.sign < 0:
                    sym, image = sym.inverse, image.inverse
                images[sym] = image
        images.update({x: MixedWord([x]) for x in automaton.letter_generators})
        return GeneratorMap(images, name=self.strategy)

    def witnesses(self, automaton, mapping):
        res = []
        for component in AutomatonController.connected_components(automaton):
            dual = AutomatonController.dual(component)
            for w in BinaryEndomorphismController().witnesses(dual, None):
                res.append(MixedWord(map(_swap_kind, w)))
        return res


class EmbeddingEndomorphismController(BaseEndomorphismController):
    """s -> w_s from an X-isomorphic subautomaton of A*, letters fixed."""

    strategy = STRATEGIES.EMBEDDING
    # The inverse subautomaton of Bellaterra maps s to s^-1: words move but keep their length
    lengthens = False

    def applies(self, automaton) -> bool:
        return ResidualController.subautomaton_embedding(automaton, EMBEDDING_MAX_DEPTH) is not None

    def build(self, automaton) -> GeneratorMap:
        embedding = ResidualController.subautomaton_embedding(automaton, EMBEDDING_MAX_DEPTH)
        if embedding is None:
            raise NotApplicable(details={"automaton": automaton.name, "strategy": self.strategy})
        images = {s: MixedWord(w) for s, w in embedding.states.items()}
        images.update({x: MixedWord([x]) for x in automaton.letter_generators})
        return GeneratorMap(images, name=self.strategy)

    def witnesses(self, automaton, mapping):
        states = automaton.state_generators
        if len(states) < 2:
            return []
        pairs = zip(states, states[1:] + states[:1]) if len(states) > 2 else [tuple(states)]
        return [MixedWord([s, s, ~t, ~t]) for s, t in pairs]


def get_endomorphism_controller(automaton, strategy: str | None = None) -> BaseEndomorphismController:
    """The requested strategy, or the first one applying in the order power, binary, two-state, embedding."""
    controllers = {
        STRATEGIES.POWER: PowerEndomorphismController(),
        STRATEGIES.BINARY: BinaryEndomorphismController(),
        STRATEGIES.TWO_STATE: TwoStateEndomorphismController(),
        STRATEGIES.EMBEDDING: EmbeddingEndomorphismController(),
    }
    if strategy is not None:
        controller = controllers.get(strategy)
        if controller is None or not controller.applies(automaton):
            raise NotApplicable(details={"automaton": automaton.name, "strategy": strategy})
        return controller
    for controller in controllers.values():
        if controller.applies(automaton):
            return controller
    raise NotApplicable(details={"automaton": automaton.name})
