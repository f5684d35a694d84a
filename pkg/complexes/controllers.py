import logging

import networkx as nx
from django.conf import settings

from automata.words import KINDS, Word, reduced_words
from actions.controllers import ActionController
from automata.controllers import AutomatonController
from core.exceptions import DegenerateTiling, InternalDisagreement
from complexes.models import ORIENTATIONS, Tile, MixedWord, Rectangle, NormalForm, Presentation, CommutationReport

logger = logging.getLogger(__name__)


class ComplexController:
    """
    The square complex of an automaton: presentation, normal forms and tilings.
    """

    @staticmethod
    def square_classes(automaton) -> list:
        """
        One arrow per square of the complex: the four arrows s -> x|y -> t, s^-1 -> y|x -> t^-1, t -> x^-1|y^-1 -> s
        and t^-1 -> y^-1|x^-1 -> s^-1 of the closure are the same square.
        """
        seen, res = set(), []
        for arrow in automaton.closure.arrows:
            if arrow in seen:
                continue
            s, x, y, t = arrow
            seen.update([arrow, (~s, y, x, ~t), (t, ~x, ~y, s), (~t, ~y, ~x, ~s)])
            res.append(arrow)
        return res

    @staticmethod
    def presentation(automaton) -> Presentation:
        """One generator per positive symbol, one relator s x t^-1 y^-1 per square."""
        generators = list(automaton.state_generators) + list(automaton.letter_generators)
        relators = [Tile.from_arrow(arrow).relator for arrow in ComplexController.square_classes(automaton)]
        return Presentation(generators, relators, name=automaton.name)

    @staticmethod
    def abelianization_check(automaton, presentation: Presentation | None = None) -> bool:
        """
        Every relator maps to (0, 0) under s -> (1, 0), x -> (0, 1). Signed complexes are checked on their
        directed view, where an inverse edge is a colour of its own.
        """
        if presentation is None:
            if automaton.signed:
                automaton = AutomatonController.as_directed(automaton)
            presentation = ComplexController.presentation(automaton)
        for relator in presentation.relators:
            if relator.exponent_sums() != (0, 0):
                logger.info("Relator %s of %s does not vanish in Z^2", relator, presentation.name)
                return False
        return True

    @staticmethod
    def normal_form(automaton, word, orientation=ORIENTATIONS.LEFT) -> NormalForm:
        """
        Exchange states and letters with the defining relations until the word reads g v (LEFT) or u h (RIGHT).
        """
        word = MixedWord(word)
        if orientation == ORIENTATIONS.RIGHT:
            letters, states = Word(), Word()
            for kind, run in word.runs():
                if kind == KINDS.STATE:
                    states = states * run
                else:
                    output, states = ActionController.act_and_section(automaton, states, run)
                    letters = letters * output
            return NormalForm(orientation, states, letters)

        states, letters = Word(), Word()
        for kind, run in word.runs():
            if kind == KINDS.LETTER:
                letters = letters * run
            else:
                # v h = section(h^-1, v^-1)^-1 act(h^-1, v^-1)^-1
                output, section = ActionController.act_and_section(automaton, run.inverse, letters.inverse)
                states = states * section.inverse
                letters = output.inverse
        return NormalForm(orientation, states, letters)

    @staticmethod
    def pi1_is_trivial(automaton, word) -> bool:
        return ComplexController.normal_form(automaton, word).is_identity

    @staticmethod
    def commutator(p: Word, q: Word) -> MixedWord:
        return MixedWord(tuple(p) + tuple(q) + tuple(p.inverse) + tuple(q.inverse))

    @staticmethod
    def commutes(automaton, p: Word, q: Word, max_n: int, max_m: int) -> CommutationReport:
        def commute(n, m):
            return ComplexController.pi1_is_trivial(automaton, ComplexController.commutator(p**n, q**m))

        matrix = [[commute(n, m) for m in range(1, max_m + 1)] for n in range(1, max_n + 1)]
        return CommutationReport(p, q, matrix)

    @staticmethod
    def anti_torus_scan(automaton, max_n: int, max_m: int) -> list[CommutationReport]:
        """Generator pairs (s, x) with no commuting powers up to (max_n, max_m)."""
        res = []
        for s in automaton.state_generators:
            for x in automaton.letter_generators:
                report = ComplexController.commutes(automaton, Word([s]), Word([x]), max_n, max_m)
                if report.anti_torus:
                    res.append(report)
        logger.info("%s: %s anti-torus candidates", automaton.name, len(res))
        return res

    @staticmethod
    def periodic_tiling(automaton, max_length: int | None = None) -> tuple[Word, Word]:
        """
        Cycle of the functional graph (v, x) -> (v|x, v(x)) over reduced state words v of length k and letters x.
        Along the cycle, w = v_n ... v_1 and u = x_1 ... x_n commute.

        Sources are tried in order, k growing from 1 to `max_length`, until both w and u reduce to nonempty words.
        """
        max_length = max_length or settings.TILING_MAX_LENGTH
        for length in range(1, max_length + 1):
            sources = [
                (v, x) for v in reduced_words(automaton.closure.states, length) for x in automaton.alphabet
            ]
            graph = nx.DiGraph()
            for v, x in sources:
                y, section = ActionController.act_and_section(automaton, v, Word([x]))
                graph.add_edge((v, x), (section, y[0]))
            for source in sources:
                try:
                    cycle = [node for node, _next in nx.find_cycle(graph, source)]
                except nx.NetworkXNoCycle:
                    continue
                w = Word(sym for v, _x in reversed(cycle) for sym in v)
                u = Word(x for _v, x in cycle)
                if not w or not u:
                    continue
                if not ComplexController.pi1_is_trivial(automaton, ComplexController.commutator(w, u)):
                    raise InternalDisagreement(details={"automaton": automaton.name, "w": w, "u": u})
                logger.debug("%s: tiling period %s over state words of length %s", automaton.name, len(cycle), length)
                return w, u
        raise DegenerateTiling(details={"automaton": automaton.name, "max_length": max_length})

    @staticmethod
    def tile_rectangle(automaton, left: Word, top: Word) -> Rectangle:
        table = automaton.closure.table
        states = list(left)
        grid = [[None] * len(top) for _s in states]
        bottom = []
        for j, letter in enumerate(top):
            for i in range(len(states) - 1, -1, -1):
                written, target = table[(states[i], letter)]
                grid[i][j] = Tile(states[i], letter, written, target)
                letter, states[i] = written, target
            bottom.append(letter)
        rows = list(reversed(grid))
        return Rectangle(rows, Word(left), Word(top), Word(bottom), Word(states))

    @staticmethod
    def tileset_export(automaton, signed: bool = False) -> list[Tile]:
        arrows = automaton.closure.arrows if signed else automaton.arrows
        return [Tile.from_arrow(arrow) for arrow in arrows]
