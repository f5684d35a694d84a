import logging
from typing import NamedTuple
from functools import cached_property

import networkx as nx

from automata.words import KINDS, INVERSE_SUFFIX, Sym
from core.exceptions import UnknownSymbol, MissingTransition, BadInverseClosure, DuplicateTransition

logger = logging.getLogger(__name__)


class Arrow(NamedTuple):
    """
    Transition `source -> read | write -> target`, i.e. the relation source·read = write·target.
    """

    source: Sym
    read: Sym
    write: Sym
    target: Sym

    def __str__(self):
        return f"{self.source} {self.read} -> {self.write} {self.target}"

    @property
    def label(self):
        return f"{self.read}|{self.write}"


class Automaton:
    """
    Complete deterministic letter-to-letter transducer.

    States and letters keep their declaration order; a signed automaton declares formal inverses
    (`a^-1`) and must be closed under the four inverse symmetries of each arrow.
    """

    def __init__(self, states, alphabet, arrows, name=""):
        self.name = name
        self.states = tuple(Sym(s.base, s.sign, KINDS.STATE) for s in states)
        self.alphabet = tuple(Sym(x.base, x.sign, KINDS.LETTER) for x in alphabet)
        self.state_index = {s: i for i, s in enumerate(self.states)}
        self.letter_index = {x: i for i, x in enumerate(self.alphabet)}
        if len(self.state_index) != len(self.states) or len(self.letter_index) != len(self.alphabet):
            raise DuplicateTransition(details={"automaton": name, "reason": "duplicate declaration"})
        self.signed = any(s.inverse in self.state_index for s in self.states) or any(
            x.inverse in self.letter_index for x in self.alphabet
        )
        self.table = {}
        for arrow in arrows:
            arrow = Arrow(
                arrow.source.as_kind(KINDS.STATE),
                arrow.read.as_kind(KINDS.LETTER),
                arrow.write.as_kind(KINDS.LETTER),
                arrow.target.as_kind(KINDS.STATE),
            )
            self._check_symbols(arrow)
            key = (arrow.source, arrow.read)
            if key in self.table:
                raise DuplicateTransition(details={"automaton": name, "state": arrow.source, "letter": arrow.read})
            self.table[key] = (arrow.write, arrow.target)
        for s in self.states:
            for x in self.alphabet:
                if (s, x) not in self.table:
                    raise MissingTransition(details={"automaton": name, "state": s, "letter": x})
        if self.signed:
            self._check_inverse_closure()

    def _check_symbols(self, arrow):
        for sym in (arrow.source, arrow.target):
            if sym not in self.state_index:
                raise UnknownSymbol(details={"automaton": self.name, "symbol": sym, "kind": "state"})
        for sym in (arrow.read, arrow.write):
            if sym not in self.letter_index:
                raise UnknownSymbol(details={"automaton": self.name, "symbol": sym, "kind": "letter"})

    def _check_inverse_closure(self):
        for sym in self.states + self.alphabet:
            if sym.inverse not in (self.state_index if sym.kind == KINDS.STATE else self.letter_index):
                raise BadInverseClosure(details={"automaton": self.name, "missing": sym.inverse})
        for s, x, y, t in self.arrows:
            expected = [(~s, y, x, ~t), (t, ~x, ~y, s), (~t, ~y, ~x, ~s)]
            for source, read, write, target in expected:
                if self.table[(source, read)] != (write, target):
                    expected_arrow = Arrow(source, read, write, target)
                    raise BadInverseClosure(
                        details={"automaton": self.name, "arrow": Arrow(s, x, y, t), "expected": expected_arrow}
                    )

    def __repr__(self):
        return f"<Automaton {self.name or '?'}: {len(self.states)} states, {len(self.alphabet)} letters>"

    def __eq__(self, other):
        if not isinstance(other, Automaton):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    @cached_property
    def key(self):
        return self.states, self.alphabet, self.arrows

    @cached_property
    def arrows(self):
        """Arrows sorted by (state index, letter index)."""
        return tuple(
            Arrow(s, x, *self.table[(s, x)])
            for s, x in sorted(self.table, key=lambda k: (self.state_index[k[0]], self.letter_index[k[1]]))
        )

    def transition(self, state, letter):
        return self.table[(state, letter)]

    @property
    def positive_states(self):
        return tuple(s for s in self.states if s.sign > 0)

    @property
    def positive_alphabet(self):
        return tuple(x for x in self.alphabet if x.sign > 0)

    @property
    def state_generators(self):
        """Declared states, or their positive halves for a signed automaton."""
        return self.positive_states if self.signed else self.states

    @property
    def letter_generators(self):
        return self.positive_alphabet if self.signed else self.alphabet

    def resolve(self, base, kind=None):
        """Sym of a declared base name, looked up among states then letters unless `kind` is given."""
        for candidate_kind, index in ((KINDS.STATE, self.state_index), (KINDS.LETTER, self.letter_index)):
            if kind not in (None, candidate_kind):
                continue
            sym = Sym(base, 1, candidate_kind)
            if sym in index or sym.inverse in index:
                return sym
        raise UnknownSymbol(details={"automaton": self.name, "symbol": base})

    def resolve_state(self, base):
        return self.resolve(base, KINDS.STATE)

    def resolve_letter(self, base):
        return self.resolve(base, KINDS.LETTER)

    @cached_property
    def closure(self):
        """Signed closure of the automaton, the table every action goes through."""
        from automata.controllers import AutomatonController

        return AutomatonController.pm_closure(self)

    @cached_property
    def link_graph(self):
        return LinkGraph(self)

    def output_permutation(self, state):
        """Letters written by `state`, indexed like the alphabet."""
        return tuple(self.table[(state, x)][0] for x in self.alphabet)


class LinkGraph:
    """
    Bipartite multigraph on (symbol, inverted) vertices: states on the left, letters on the right.
    Each arrow s -> x|y -> t contributes (s, x), (s^-1, y), (t, x^-1) and (t^-1, y^-1).
    """

    def __init__(self, automaton):
        self.automaton = automaton
        self.graph = nx.MultiGraph()
        left = [(s, inverted) for s in automaton.states for inverted in (False, True)]
        right = [(x, inverted) for x in automaton.alphabet for inverted in (False, True)]
        self.graph.add_nodes_from(left, bipartite=0)
        self.graph.add_nodes_from(right, bipartite=1)
        for s, x, y, t in automaton.arrows:
            self.graph.add_edge((s, False), (x, False))
            self.graph.add_edge((s, True), (y, False))
            self.graph.add_edge((t, False), (x, True))
            self.graph.add_edge((t, True), (y, True))
        self.left = left
        self.right = right

    def multiplicity(self, u, v):
        return self.graph.number_of_edges(u, v)

    def is_complete_bipartite(self):
        """Every left/right pair joined by exactly one edge."""
        return all(self.multiplicity(u, v) == 1 for u in self.left for v in self.right)

    @staticmethod
    def vertex_name(vertex):
        sym, inverted = vertex
        return sym.name + INVERSE_SUFFIX if inverted else sym.name


class Isomorphism(NamedTuple):
    """Pair of bijections (states, letters) carrying the arrows of one automaton onto another's."""

    states: dict
    letters: dict

    def __str__(self):
        pairs = list(self.states.items()) + list(self.letters.items())
        return ", ".join(f"{source}->{target}" for source, target in pairs if source.sign > 0)

    def inverse(self):
        return Isomorphism(
            {target: source for source, target in self.states.items()},
            {target: source for source, target in self.letters.items()},
        )

    def is_identity(self):
        return all(k == v for k, v in self.states.items()) and all(k == v for k, v in self.letters.items())


class DerivedFamily(NamedTuple):
    """
    The eight automata obtained by combining dual and inverse.
    Keys read right to left: `idA` is the inverse of the dual.
    """

    members: dict
    failures: dict

    KEYS = ("A", "dA", "iA", "idA", "diA", "didA", "idiA", "ididA")

    @property
    def complete(self):
        return not self.failures
