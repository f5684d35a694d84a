import logging

import networkx as nx

from automata.words import KINDS, Sym
from automata.models import Arrow, Automaton, Isomorphism, DerivedFamily
from core.exceptions import (
    NameCollision,
    NotInvertible,
    AlphabetMismatch,
    NotBireversible,
    InternalDisagreement,
)

logger = logging.getLogger(__name__)


def _inverted(syms, signed):
    """Formal inverses of a declared symbol list; a signed list is already closed and keeps its order."""
    return tuple(syms) if signed else tuple(sym.inverse for sym in syms)


def _retyped(syms, kind):
    return tuple(sym.as_kind(kind) for sym in syms)


class AutomatonController:
    @staticmethod
    def dual(automaton: Automaton) -> Automaton:
        """
        Exchange states and letters: each arrow s -> x|y -> t becomes x^-1 -> s^-1|t^-1 -> y^-1.
        """
        states = _retyped(_inverted(automaton.alphabet, automaton.signed), KINDS.STATE)
        alphabet = _retyped(_inverted(automaton.states, automaton.signed), KINDS.LETTER)
        arrows = [
            Arrow(
                x.inverse.as_kind(KINDS.STATE),
                s.inverse.as_kind(KINDS.LETTER),
                t.inverse.as_kind(KINDS.LETTER),
                y.inverse.as_kind(KINDS.STATE),
            )
            for s, x, y, t in automaton.arrows
        ]
        return Automaton(states, alphabet, arrows, name=f"d({automaton.name})")

    @staticmethod
    def inverse(automaton: Automaton) -> Automaton:
        """
        Each arrow s -> x|y -> t becomes s^-1 -> y|x -> t^-1; every state must permute the letters.
        """
        for s in automaton.states:
            written = automaton.output_permutation(s)
            for y in automaton.alphabet:
                preimages = written.count(y)
                if preimages != 1:
                    details = {"automaton": automaton.name, "state": s, "letter": y, "count": preimages}
                    raise NotInvertible(details=details)
        states = _inverted(automaton.states, automaton.signed)
        arrows = [Arrow(s.inverse, y, x, t.inverse) for s, x, y, t in automaton.arrows]
        return Automaton(states, automaton.alphabet, arrows, name=f"i({automaton.name})")

    @staticmethod
    def derived_family(automaton: Automaton) -> DerivedFamily:
        operations = {"d": AutomatonController.dual, "i": AutomatonController.inverse}
        members, failures = {"A": automaton}, {}
        for key in DerivedFamily.KEYS[1:]:
            parent_key = key[1:]
            parent = members.get(parent_key)
            if parent is None:
                failures[key] = failures[parent_key]
                members[key] = None
                continue
            try:
                members[key] = operations[key[0]](parent)
            except NotInvertible as e:
                failures[key] = e
                members[key] = None
        if failures:
            logger.debug("Derived family of %s: missing %s", automaton.name, ", ".join(failures))
        return DerivedFamily(members, failures)

    @staticmethod
    def is_bireversible(automaton: Automaton) -> bool:
        """
        Link-graph criterion, checked against the existence of all eight derived automata.
        """
        by_link_graph = automaton.link_graph.is_complete_bipartite()
        by_family = AutomatonController.derived_family(automaton).complete
        if by_link_graph != by_family:
            raise InternalDisagreement(
                details={"automaton": automaton.name, "link_graph": by_link_graph, "derived_family": by_family}
            )
        return by_link_graph

    @staticmethod
    def pm_closure(automaton: Automaton) -> Automaton:
        """
        Signed automaton on S^±1 and X^±1: the union of A, iA, didA and didiA.
        A signed automaton is its own closure.
        """
        if not AutomatonController.is_bireversible(automaton):
            raise NotBireversible(details={"automaton": automaton.name})
        if automaton.signed:
            return automaton
        states = automaton.states + tuple(s.inverse for s in automaton.states)
        alphabet = automaton.alphabet + tuple(x.inverse for x in automaton.alphabet)
        arrows = []
        for s, x, y, t in automaton.arrows:
            arrows += [
                Arrow(s, x, y, t),
                Arrow(~s, y, x, ~t),
                Arrow(t, ~x, ~y, s),
                Arrow(~t, ~y, ~x, ~s),
            ]
        return Automaton(states, alphabet, arrows, name=automaton.name)

    @staticmethod
    def is_isomorphism(source: Automaton, target: Automaton, isomorphism: Isomorphism) -> bool:
        states, letters = isomorphism
        if sorted(states.values()) != sorted(target.states) or sorted(letters.values()) != sorted(target.alphabet):
            return False
        return all(
            target.table.get((states[s], letters[x])) == (letters[y], states[t]) for s, x, y, t in source.arrows
        )

    @staticmethod
    def find_isomorphism(
        source: Automaton, target: Automaton, fix_alphabet: bool = False, pinned: dict | None = None
    ) -> Isomorphism | None:
        """
        First bijection pair, in the target's declaration order, carrying arrows onto arrows.

        Signed automata are matched with sign-respecting maps (the image of s^-1 is the inverse of the image of s).
        `pinned` forces the images of some source symbols.
        """
        if (
            len(source.states) != len(target.states)
            or len(source.alphabet) != len(target.alphabet)
            or source.signed != target.signed
        ):
            return None
        if fix_alphabet and set(source.alphabet) != set(target.alphabet):
            return None
        pinned = pinned or {}
        signed = source.signed

        def variables(syms):
            return [sym for sym in syms if not signed or sym.sign > 0]

        state_variables, letter_variables = variables(source.states), variables(source.alphabet)
        assignment = {}
        used = set()

        def assign(sym, image):
            pairs = [(sym, image)] + ([(sym.inverse, image.inverse)] if signed else [])
            for key, value in pairs:
                if value in used or key in assignment:
                    return None
            for key, value in pairs:
                assignment[key] = value
                used.add(value)
            return pairs

        def unassign(pairs):
            for key, value in pairs:
                del assignment[key]
                used.discard(value)

        def consistent():
            for s, x, y, t in source.arrows:
                if all(sym in assignment for sym in (s, x, y, t)):
                    if target.table[(assignment[s], assignment[x])] != (assignment[y], assignment[t]):
                        return False
            return True

        order = state_variables + letter_variables

        def search(position):
            if position == len(order):
                return True
            sym = order[position]
            if sym in pinned:
                candidates = [pinned[sym].as_kind(sym.kind)]
            elif fix_alphabet and sym.kind == KINDS.LETTER:
                candidates = [sym]
            else:
                candidates = target.states if sym.kind == KINDS.STATE else target.alphabet
            for candidate in candidates:
                pairs = assign(sym, candidate)
                if pairs is None:
                    continue
                if consistent() and search(position + 1):
                    return True
                unassign(pairs)
            return False

        if not search(0):
            return None
        states = {s: assignment[s] for s in source.states}
        letters = {x: assignment[x] for x in source.alphabet}
        return Isomorphism(states, letters)

    @staticmethod
    def is_self_dual(automaton: Automaton) -> bool:
        return AutomatonController.find_isomorphism(automaton, AutomatonController.dual(automaton)) is not None

    @staticmethod
    def is_self_inverse(automaton: Automaton) -> bool:
        inverse = AutomatonController.inverse(automaton)
        return AutomatonController.find_isomorphism(automaton, inverse, fix_alphabet=True) is not None

    @staticmethod
    def minimize(automaton: Automaton) -> tuple[Automaton, dict]:
        """
        Merge states defining the same transformation (partition refinement on outputs, then successor blocks).
        Returns the minimized automaton and the map state -> representative.
        """
        block_of = {s: automaton.output_permutation(s) for s in automaton.states}
        nb_blocks = len(set(block_of.values()))
        while True:
            refined = {
                s: (block_of[s], tuple(block_of[automaton.table[(s, x)][1]] for x in automaton.alphabet))
                for s in automaton.states
            }
            nb_refined = len(set(refined.values()))
            if nb_refined == nb_blocks:
                break
            block_of, nb_blocks = refined, nb_refined

        representatives = {}
        for s in automaton.states:
            representatives.setdefault(block_of[s], s)
        merge = {s: representatives[block_of[s]] for s in automaton.states}
        kept = [s for s in automaton.states if merge[s] == s]
        arrows = [Arrow(s, x, y, merge[t]) for s, x, y, t in automaton.arrows if merge[s] == s]
        if len(kept) < len(automaton.states):
            logger.info("Minimized %s from %s to %s states", automaton.name, len(automaton.states), len(kept))
        return Automaton(kept, automaton.alphabet, arrows, name=automaton.name), merge

    @staticmethod
    def connected_components(automaton: Automaton) -> list[Automaton]:
        """Components of the undirected arrow graph; a state and its formal inverse stay together."""
        graph = nx.Graph()
        graph.add_nodes_from(automaton.states)
        graph.add_edges_from((s, t) for s, _x, _y, t in automaton.arrows)
        if automaton.signed:
            graph.add_edges_from((s, s.inverse) for s in automaton.states)
        components = sorted(
            nx.connected_components(graph), key=lambda c: min(automaton.state_index[s] for s in c)
        )
        res = []
        for i, component in enumerate(components):
            states = [s for s in automaton.states if s in component]
            arrows = [arrow for arrow in automaton.arrows if arrow.source in component]
            name = automaton.name if len(components) == 1 else f"{automaton.name}[{i}]"
            res.append(Automaton(states, automaton.alphabet, arrows, name=name))
        return res

    @staticmethod
    def union(first: Automaton, second: Automaton, name: str | None = None) -> Automaton:
        if set(first.alphabet) != set(second.alphabet):
            raise AlphabetMismatch(details={"first": first.name, "second": second.name})
        collisions = {s.base for s in first.states} & {s.base for s in second.states}
        if collisions:
            raise NameCollision(details={"states": " ".join(sorted(collisions))})
        return Automaton(
            first.states + second.states,
            first.alphabet,
            first.arrows + second.arrows,
            name=name or f"{first.name}+{second.name}",
        )

    @staticmethod
    def relabel(automaton: Automaton, states: dict | None = None, letters: dict | None = None, name=None):
        """
        Rename symbols by name (`{"a": "u", "0^-1": "0"}`).
        An inverse without its own entry follows the renaming of its base.
        """
        states, letters = states or {}, letters or {}

        def rename(sym):
            mapping = states if sym.kind == KINDS.STATE else letters
            if sym.name in mapping:
                return Sym.parse(mapping[sym.name], sym.kind)
            if sym.sign < 0 and sym.base in mapping:
                return Sym.parse(mapping[sym.base], sym.kind).inverse
            return sym

        arrows = [Arrow(*map(rename, arrow)) for arrow in automaton.arrows]
        return Automaton(
            [rename(s) for s in automaton.states],
            [rename(x) for x in automaton.alphabet],
            arrows,
            name=name or automaton.name,
        )

    @staticmethod
    def as_directed(automaton: Automaton) -> Automaton:
        """Every signed symbol becomes its own positive colour (`a^-1` -> `a_inv`)."""

        def colour(sym):
            return sym if sym.sign > 0 else Sym(f"{sym.base}_inv", 1, sym.kind)

        arrows = [Arrow(*map(colour, arrow)) for arrow in automaton.arrows]
        return Automaton(
            [colour(s) for s in automaton.states],
            [colour(x) for x in automaton.alphabet],
            arrows,
            name=f"{automaton.name}_directed",
        )

    @staticmethod
    def doubled(automaton: Automaton) -> Automaton:
        """A together with didA, its states primed and its letters x^-1 renamed x."""
        did = AutomatonController.derived_family(automaton).members["didA"]
        if did is None:
            raise NotBireversible(details={"automaton": automaton.name})
        renamed = AutomatonController.relabel(
            did,
            states={s.base: f"{s.base}'" for s in did.states},
            letters={x.name: x.inverse.name for x in did.alphabet},
        )
        return AutomatonController.union(automaton, renamed, name=f"{automaton.name}_doubled")
