import logging
import itertools

from django.conf import settings
from sympy.combinatorics import Permutation

from automata.words import KINDS, Sym
from automata.models import Arrow, Automaton
from actions.controllers import ActionController
from complexes.parsers import load_squares, square_arrows
from automata.controllers import AutomatonController
from automata.parsers import load_automaton
from cosets.parsers import load_presentation
from core.utils import warn_if_last_more_than
from core.exceptions import InternalError, SizeTooLarge, UnknownAutomaton
from catalog.models import POLICY_MEMBERS, SYMMETRY_POLICIES, Enumeration, EnumerationEntry

logger = logging.getLogger(__name__)

BUNDLED_PREFIX = "bundled:"
ALIASES = {"wise": "aleshin"}
DATA_SUFFIXES = (".automaton", ".squares")

# Infinite groups not certified by a replication certificate
CITATIONS = {
    "aleshin": "free group of rank three",
    "bellaterra": "free product of three groups of order two",
    "delta_d": "anti-torus free complex, group C3*C3",
}

STATE_NAMES = "abcdefgh"


class _SymmetryClass:
    def __init__(self, automaton, policy):
        self.representative = automaton
        self.images = CatalogController.symmetric_images(automaton, policy)
        self.members = 1

    def contains(self, automaton):
        return any(AutomatonController.find_isomorphism(image, automaton) for image in self.images)


class CatalogController:
    @staticmethod
    def bundled_names() -> list[str]:
        names = [path.stem for suffix in DATA_SUFFIXES for path in settings.CATALOG_DATA_DIR.glob(f"*{suffix}")]
        return sorted(names + list(ALIASES))

    @staticmethod
    def load(reference: str) -> Automaton:
        """`bundled:NAME` from the catalog data, or a path to an automaton or `.squares` file."""
        if reference.startswith(BUNDLED_PREFIX):
            name = reference[len(BUNDLED_PREFIX) :]
            target = ALIASES.get(name, name)
            for suffix in DATA_SUFFIXES:
                path = settings.CATALOG_DATA_DIR / f"{target}{suffix}"
                if path.exists():
                    return CatalogController._load_path(path, name)
            raise UnknownAutomaton(details={"name": name, "known": " ".join(CatalogController.bundled_names())})
        return CatalogController._load_path(reference)

    @staticmethod
    def _load_path(path, name=None):
        path = str(path)
        try:
            if path.endswith(".squares"):
                return load_squares(path, name=name)
            return load_automaton(path, name=name)
        except OSError as e:
            raise UnknownAutomaton(details={"path": path, "reason": e.strerror}) from e

    @staticmethod
    def load_presentation(reference: str):
        """`bundled:NAME` for a catalog `.pres` file, or a path."""
        if reference.startswith(BUNDLED_PREFIX):
            name = reference[len(BUNDLED_PREFIX) :]
            path = settings.CATALOG_DATA_DIR / f"{name}.pres"
            if not path.exists():
                raise UnknownAutomaton(details={"presentation": name})
            return load_presentation(path)
        try:
            return load_presentation(reference)
        except OSError as e:
            raise UnknownAutomaton(details={"path": reference, "reason": e.strerror}) from e

    @staticmethod
    def citation(automaton) -> str | None:
        name = ALIASES.get(automaton.name, automaton.name)
        return CITATIONS.get(name)

    @staticmethod
    def symmetric_images(automaton, policy) -> list[Automaton]:
        """Derived automata identified with `automaton` by the policy, restricted to its own shape."""
        if policy == SYMMETRY_POLICIES.ISO:
            return [automaton]
        family = AutomatonController.derived_family(automaton).members
        shape = len(automaton.states), len(automaton.alphabet)
        return [
            family[key]
            for key in POLICY_MEMBERS[policy]
            if family[key] is not None and (len(family[key].states), len(family[key].alphabet)) == shape
        ]

    @staticmethod
    def equivalent(first, second, policy) -> bool:
        return _SymmetryClass(first, policy).contains(second)

    @staticmethod
    def _invariant(automaton):
        """Cycle types of the state and letter permutations, preserved by isomorphisms."""

        def cycle_type(images, index):
            return tuple(sorted(Permutation([index[sym] for sym in images]).cycle_structure.items()))

        states = sorted(cycle_type(automaton.output_permutation(s), automaton.letter_index) for s in automaton.states)
        letters = sorted(
            cycle_type([automaton.table[(s, x)][1] for s in automaton.states], automaton.state_index)
            for x in automaton.alphabet
        )
        return tuple(states), tuple(letters)

    @staticmethod
    def classify(automata, policy, max_elements=None) -> list[EnumerationEntry]:
        """Symmetry classes in order of first appearance, each tagged with the group-order verdict."""
        max_elements = max_elements or settings.ENUMERATION_MAX_ELEMENTS
        buckets = {}
        classes = []
        for automaton in automata:
            images = CatalogController.symmetric_images(automaton, policy)
            key = min(CatalogController._invariant(image) for image in images)
            bucket = buckets.setdefault(key, [])
            for symmetry_class in bucket:
                if symmetry_class.contains(automaton):
                    symmetry_class.members += 1
                    break
            else:
                symmetry_class = _SymmetryClass(automaton, policy)
                bucket.append(symmetry_class)
                classes.append(symmetry_class)
        entries = []
        for symmetry_class in classes:
            verdict = ActionController.group_order(symmetry_class.representative, max_elements=max_elements)
            entries.append(EnumerationEntry(symmetry_class.representative, verdict, symmetry_class.members))
        return entries

    @staticmethod
    def enumerate(n_states, n_letters, policy=SYMMETRY_POLICIES.ISO, predicate=None, max_elements=None):
        """
        Complete deterministic automata with every state permuting the letters and every letter permuting
        the states (the tables bireversibility can select from), filtered by `predicate`.
        """
        bound = (n_states * n_letters) ** (n_states * n_letters)
        if bound > settings.ENUMERATION_MAX_TABLES or n_states > len(STATE_NAMES):
            raise SizeTooLarge(details={"states": n_states, "letters": n_letters, "tables": bound})
        predicate = predicate or AutomatonController.is_bireversible
        states = [Sym(STATE_NAMES[i], 1, KINDS.STATE) for i in range(n_states)]
        letters = [Sym(str(i), 1, KINDS.LETTER) for i in range(n_letters)]
        selected, candidates = [], 0
        with warn_if_last_more_than(tag=f"{n_states}x{n_letters}", seconds=60):
            for outputs in itertools.product(itertools.permutations(letters), repeat=n_states):
                for targets in itertools.product(itertools.permutations(states), repeat=n_letters):
                    arrows = [
                        Arrow(s, x, outputs[i][j], targets[j][i])
                        for i, s in enumerate(states)
                        for j, x in enumerate(letters)
                    ]
                    automaton = Automaton(states, letters, arrows, name=f"{n_states}x{n_letters}-{candidates}")
                    candidates += 1
                    if predicate(automaton):
                        selected.append(automaton)
            entries = CatalogController.classify(selected, policy, max_elements=max_elements)
        logger.info(
            "Enumerated %s states x %s letters: %s candidates, %s selected, %s classes (%s)",
            n_states,
            n_letters,
            candidates,
            len(selected),
            len(entries),
            policy,
        )
        return Enumeration(n_states, n_letters, policy, candidates, len(selected), entries)

    @staticmethod
    def vh4_square_sets():
        """
        Square sets of one-vertex complexes with vertical loops a, b and horizontal loops x, y whose link is
        complete bipartite: every (state, letter) corner is covered by exactly one square.
        """
        a, b = Sym("a"), Sym("b")
        x, y = Sym("x", kind=KINDS.LETTER), Sym("y", kind=KINDS.LETTER)
        states, letters = [a, b, ~a, ~b], [x, y, ~x, ~y]
        corners = [(s, z) for s in states for z in letters]

        def square_corners(left, top, bottom, right):
            return {(left, top), (~left, bottom), (right, ~top), (~right, ~bottom)}

        def search(covered, squares):
            if len(covered) == len(corners):
                yield list(squares)
                return
            left, top = next(corner for corner in corners if corner not in covered)
            for bottom in letters:
                for right in states:
                    square = square_corners(left, top, bottom, right)
                    if len(square) == 4 and not square & covered:
                        squares.append((left, top, bottom, right))
                        yield from search(covered | square, squares)
                        squares.pop()

        yield from search(frozenset(), [])

    @staticmethod
    def enumerate_vh4(policy=SYMMETRY_POLICIES.DUAL, max_elements=None) -> Enumeration:
        a, b = Sym("a"), Sym("b")
        x, y = Sym("x", kind=KINDS.LETTER), Sym("y", kind=KINDS.LETTER)
        selected, candidates = [], 0
        for squares in CatalogController.vh4_square_sets():
            arrows = [arrow for square in squares for arrow in square_arrows(*square)]
            candidates += 1
            try:
                automaton = Automaton([a, b, ~a, ~b], [x, y, ~x, ~y], arrows, name=f"vh4-{candidates}")
            except InternalError as e:
                logger.debug("Rejected square set %s: %s", squares, e)
                continue
            if AutomatonController.is_bireversible(automaton):
                selected.append(automaton)
        entries = CatalogController.classify(selected, policy, max_elements=max_elements)
        logger.info("Enumerated %s complete VH complexes with four squares, %s classes", len(selected), len(entries))
        return Enumeration(2, 2, policy, candidates, len(selected), entries)
