import math
import random
import logging
import itertools
from collections import deque

from django.conf import settings
from sympy.combinatorics import Permutation, PermutationGroup

from core.utils import warn_if_last_more_than
from core.exceptions import OrbitCapExceeded
from automata.words import Word, reduced_words
from actions.models import Exact, Finite, AtLeast, LowerBound, ReplicationCert, InfiniteCertified

logger = logging.getLogger(__name__)


class ActionController:
    """
    The action of state words on letter words (and sections), through the signed closure of a
    bireversible automaton.
    """

    @staticmethod
    def act_and_section(automaton, g: Word, v: Word) -> tuple[Word, Word]:
        """
        (g(v), g|v): each letter of v runs through the states of g from right to left.
        """
        table = automaton.closure.table
        states = list(g)
        output = []
        for letter in v:
            for i in range(len(states) - 1, -1, -1):
                letter, states[i] = table[(states[i], letter)]
            output.append(letter)
        return Word(output), Word(states)

    @staticmethod
    def act(automaton, g: Word, v: Word) -> Word:
        return ActionController.act_and_section(automaton, g, v)[0]

    @staticmethod
    def section(automaton, g: Word, v: Word) -> Word:
        return ActionController.act_and_section(automaton, g, v)[1]

    @staticmethod
    def is_trivial(automaton, g: Word) -> bool:
        """
        Breadth-first search over the sections of g by single letters; all have length at most |g|,
        so the search is finite. False at the first section moving a letter.
        """
        if not g:
            return True
        letters = automaton.closure.alphabet
        seen = {g}
        queue = deque([g])
        while queue:
            h = queue.popleft()
            for x in letters:
                (y,), section = ActionController.act_and_section(automaton, h, Word([x]))
                if y != x:
                    return False
                if section not in seen:
                    seen.add(section)
                    queue.append(section)
        return True

    @staticmethod
    def level_order(automaton, g: Word, level: int) -> int:
        """Order of the permutation induced by g on reduced letter words of the given length."""
        order = 1
        done = set()
        for v in reduced_words(automaton.closure.alphabet, level):
            if v in done:
                continue
            cycle, w = 0, v
            while True:
                done.add(w)
                w = ActionController.act(automaton, g, w)
                cycle += 1
                if w == v:
                    break
            order = math.lcm(order, cycle)
        return order

    @staticmethod
    def element_order(automaton, g: Word, cutoff: int) -> Exact | AtLeast:
        """
        Least n <= cutoff with g^n trivial. The order is a multiple of the order on every level, so only
        the running lcm of level orders is tested.
        """
        if ActionController.is_trivial(automaton, g):
            return Exact(1)
        candidate, level = 1, 1
        while True:
            level_order = ActionController.level_order(automaton, g, level)
            candidate = math.lcm(candidate, level_order)
            if candidate > cutoff:
                return AtLeast(cutoff)
            if candidate > 1 and ActionController.is_trivial(automaton, g**candidate):
                return Exact(candidate)
            level += 1

    @staticmethod
    def orbit(automaton, seed: Word, generators: list[Word], cap: int | None = None) -> list[Word]:
        """Breadth-first closure of {seed} under the generators and their inverses."""
        cap = cap or settings.ORBIT_CAP
        moves = []
        for g in generators:
            moves += [g, g.inverse]
        seen = {seed}
        res = [seed]
        queue = deque([seed])
        while queue:
            v = queue.popleft()
            for g in moves:
                w = ActionController.act(automaton, g, v)
                if w in seen:
                    continue
                if len(seen) >= cap:
                    raise OrbitCapExceeded(details={"cap": cap, "seed": seed})
                seen.add(w)
                res.append(w)
                queue.append(w)
        return res

    @staticmethod
    def state_generators(automaton) -> list[Word]:
        return [Word([s]) for s in automaton.state_generators]

    @staticmethod
    def is_level_transitive_reduced(automaton, max_level: int) -> dict[int, bool]:
        """For each level n <= max_level, whether the group acts transitively on reduced words of length n."""
        letters = automaton.closure.alphabet
        generators = ActionController.state_generators(automaton)
        res = {0: True}
        for level in range(1, max_level + 1):
            count = len(letters) * (len(letters) - 1) ** (level - 1)
            seed = next(reduced_words(letters, level))
            res[level] = len(ActionController.orbit(automaton, seed, generators)) == count
        return res

    @staticmethod
    def level_stabilizer_orbits(automaton, level: int = 2) -> list[list[Word]]:
        """
        Distinct nontrivial cycles, on reduced words of the given level, of the elements fixing every letter.
        Computed in the permutation group induced on reduced words of length 1..level.
        """
        letters = automaton.closure.alphabet
        domain = [w for n in range(1, level + 1) for w in reduced_words(letters, n)]
        index = {w: i for i, w in enumerate(domain)}
        generators = [
            Permutation([index[ActionController.act(automaton, g, w)] for w in domain])
            for g in ActionController.state_generators(automaton)
        ]
        group = PermutationGroup(generators)
        stabilizer = group.pointwise_stabilizer([index[Word([x])] for x in letters])
        top = {i for i, w in enumerate(domain) if len(w) == level}
        cycles = set()
        for element in stabilizer.generate():
            for cycle in element.cyclic_form:
                if cycle[0] in top:
                    cycles.add(frozenset(cycle))
        return sorted(([domain[i] for i in sorted(cycle)] for cycle in cycles), key=lambda c: index[c[0]])

    @staticmethod
    def is_free_up_to(automaton, max_length: int) -> bool:
        """Every nonempty reduced state word of length <= max_length acts nontrivially."""
        return ActionController.first_trivial_word(automaton, max_length) is None

    @staticmethod
    def first_trivial_word(automaton, max_length: int) -> Word | None:
        states = automaton.closure.states
        for length in range(1, max_length + 1):
            for g in reduced_words(states, length):
                if ActionController.is_trivial(automaton, g):
                    return g
        return None

    @staticmethod
    def first_trivial_alternating_word(automaton, factors: list[list[Word]], max_length: int) -> Word | None:
        """
        Words g1 g2 ... gn (n <= max_length) whose consecutive syllables come from different factors.
        Returns the first one acting trivially.
        """
        syllables = [(i, w) for i, factor in enumerate(factors) for w in factor]
        layer = [((i, w),) for i, w in syllables]
        for _length in range(1, max_length + 1):
            for word in layer:
                g = Word(itertools.chain.from_iterable(w for _i, w in word))
                if ActionController.is_trivial(automaton, g):
                    return g
            layer = [word + ((i, w),) for word in layer for i, w in syllables if i != word[-1][0]]
        return None

    @staticmethod
    def _probes(automaton, seed):
        letters = automaton.closure.alphabet
        rng = random.Random(seed)
        probes = [Word([x]) for x in letters]
        for _ in range(settings.GROUP_ORDER_PROBES):
            word = [rng.choice(letters)]
            while len(word) < settings.GROUP_ORDER_PROBE_LENGTH:
                x = rng.choice(letters)
                if x != word[-1].inverse:
                    word.append(x)
            probes.append(Word(word))
        return probes

    @staticmethod
    def group_order(automaton, max_elements: int | None = None, max_length: int | None = None, seed=None):
        """
        Breadth-first enumeration of the group by word length, right multiplying by S^±1.
        Elements are bucketed by their action on sample words; equality inside a bucket is exact (is_trivial).
        """
        max_elements = max_elements or settings.GROUP_ORDER_MAX_ELEMENTS
        max_length = max_length or settings.GROUP_ORDER_MAX_LENGTH
        seed = settings.RANDOM_SEED if seed is None else seed
        probes = ActionController._probes(automaton, seed)
        generators = list(automaton.closure.states)

        def signature(g):
            return tuple(ActionController.act(automaton, g, p) for p in probes)

        identity = Word()
        buckets = {signature(identity): [identity]}
        elements = [identity]
        layer = [identity]
        length = 0
        with warn_if_last_more_than(tag=automaton.name, seconds=30):
            while layer:
                length += 1
                if length > max_length:
                    break
                new_layer = []
                for u in layer:
                    for s in generators:
                        if u and u[-1] == s.inverse:
                            continue
                        w = u * Word([s])
                        bucket = buckets.setdefault(signature(w), [])
                        if any(ActionController.is_trivial(automaton, w * r.inverse) for r in bucket):
                            continue
                        bucket.append(w)
                        new_layer.append(w)
                        elements.append(w)
                        if len(elements) > max_elements:
                            break
                    if len(elements) > max_elements:
                        break
                layer = new_layer
                if len(elements) > max_elements:
                    break
                logger.debug("%s: %s elements up to length %s", automaton.name, len(elements), length)
            else:
                logger.info("Group of %s is finite of order %s", automaton.name, len(elements))
                return Finite(len(elements), elements)

        certificate = ActionController.replication_certificate(automaton)
        if certificate:
            logger.info("Group of %s is infinite (replication %s)", automaton.name, certificate)
            return InfiniteCertified(certificate)
        logger.warning("Group of %s: enumeration capped at %s elements", automaton.name, len(elements))
        return LowerBound(len(elements))

    @staticmethod
    def _pumping_witness(automaton):
        closure = automaton.closure
        for level in (1, 2):
            for s in closure.states:
                for v in reduced_words(closure.alphabet, level):
                    if ActionController.act(automaton, Word([s]), v) != v:
                        return s, v
        return None

    @staticmethod
    def replication_certificate(automaton, max_k: int | None = None, max_m: int | None = None):
        """
        Search x -> x^(±k), s -> s^(±m) (k, m >= 2) carrying every arrow of the closure onto a transition
        of the power automaton: τ(s) reads σ(x), writes σ(y) and moves to τ(t).
        """
        max_k = max_k or settings.REPLICATION_MAX_K
        max_m = max_m or settings.REPLICATION_MAX_M
        witness = ActionController._pumping_witness(automaton)
        if witness is None:
            return None
        closure = automaton.closure
        states = [s for s in closure.states if s.sign > 0]
        letters = [x for x in closure.alphabet if x.sign > 0]
        pairs = sorted(itertools.product(range(2, max_k + 1), range(2, max_m + 1)), key=lambda p: (max(p), p))
        # Letter signs vary slowest, positive first: x -> x^k is preferred over x -> x^-k
        for k, m in pairs:
            for letter_signs in itertools.product((1, -1), repeat=len(letters)):
                letter_map = _power_map(letters, letter_signs, k)
                for state_signs in itertools.product((1, -1), repeat=len(states)):
                    state_map = _power_map(states, state_signs, m)
                    if ActionController._carries_arrows(automaton, state_map, letter_map):
                        return ReplicationCert(k, m, letter_map, state_map, *witness)
        return None

    @staticmethod
    def _carries_arrows(automaton, state_map, letter_map):
        for s, x, y, t in automaton.closure.arrows:
            output, section = ActionController.act_and_section(automaton, state_map[s], letter_map[x])
            if output != letter_map[y] or section != state_map[t]:
                return False
        return True


def _power_map(syms, signs, power):
    res = {}
    for sym, sign in zip(syms, signs):
        res[sym] = Word([sym]) ** (sign * power)
        res[sym.inverse] = res[sym].inverse
    return res
