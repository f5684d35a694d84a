from typing import NamedTuple

from core.utils import enum

VERDICTS = enum(
    FINITE=("FINITE", "Finite"),
    INFINITE_CERTIFIED=("INFINITE_CERTIFIED", "Infinite (certified)"),
    LOWER_BOUND=("LOWER_BOUND", "Lower bound"),
)


class Exact(NamedTuple):
    value: int

    def __str__(self):
        return str(self.value)


class AtLeast(NamedTuple):
    """Not reached within the cutoff: the quantity exceeds `value` or is infinite."""

    value: int

    def __str__(self):
        return f">={self.value}"


class ReplicationCert(NamedTuple):
    """
    Power embedding x -> x^(±k), s -> s^(±m) of the automaton into its own power extension,
    with a state moving a word so the embedding pumps ever larger moved words.
    """

    k: int
    m: int
    letter_map: dict
    state_map: dict
    pumped_state: object
    base_word: object

    def __str__(self):
        letters = ", ".join(f"{x}->{w}" for x, w in self.letter_map.items() if x.sign > 0)
        states = ", ".join(f"{s}->{w}" for s, w in self.state_map.items() if s.sign > 0)
        return f"{letters}; {states}; {self.pumped_state}({self.base_word}) moved"


class Finite(NamedTuple):
    order: int
    elements: list

    kind = VERDICTS.FINITE

    def __str__(self):
        return f"finite {self.order}"


class InfiniteCertified(NamedTuple):
    certificate: ReplicationCert

    kind = VERDICTS.INFINITE_CERTIFIED

    def __str__(self):
        return f"infinite ({self.certificate})"


class LowerBound(NamedTuple):
    distinct_elements_found: int

    kind = VERDICTS.LOWER_BOUND

    def __str__(self):
        return f"at least {self.distinct_elements_found}"
