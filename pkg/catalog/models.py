from typing import NamedTuple

from core.utils import enum

SYMMETRY_POLICIES = enum(
    ISO=("iso", "Isomorphism"),
    INVERSE=("iso+inverse", "Isomorphism and inverse"),
    DUAL=("iso+inverse+dual", "Isomorphism, inverse and dual"),
)

# Derived automata identified with A under each policy, when they have the shape of A
POLICY_MEMBERS = {
    SYMMETRY_POLICIES.ISO: ("A",),
    SYMMETRY_POLICIES.INVERSE: ("A", "iA"),
    SYMMETRY_POLICIES.DUAL: ("A", "dA", "iA", "idA", "diA", "didA", "idiA", "ididA"),
}

FORMATS = enum(
    TEXT=("text", "Human readable"),
    TSV=("tsv", "Tab separated"),
    DOT=("dot", "Graphviz"),
)


class EnumerationEntry(NamedTuple):
    """Representative of a symmetry class with its group-order verdict and class size."""

    automaton: object
    verdict: object
    members: int

    def __str__(self):
        return f"{self.automaton.name}\t{self.members}\t{self.verdict}"


class Enumeration(NamedTuple):
    n_states: int
    n_letters: int
    policy: str
    candidates: int
    bireversible: int
    entries: list

    def __str__(self):
        header = (
            f"# {self.n_states} states, {self.n_letters} letters, {self.policy}: {self.candidates} candidates, "
            f"{self.bireversible} selected, {len(self.entries)} classes"
        )
        return "\n".join([header] + [str(entry) for entry in self.entries]) + "\n"

    @property
    def infinite_entries(self):
        """Entries whose group is not proved finite."""
        from actions.models import VERDICTS

        return [entry for entry in self.entries if entry.verdict.kind != VERDICTS.FINITE]


class ExperimentRecord(NamedTuple):
    """
    Flat record of one reproduced claim. Wall time is logged, not recorded, so that
    identical inputs serialize to identical records.
    """

    name: str
    inputs: dict
    outcome: dict
    expected: dict

    @property
    def passed(self):
        return all(self.outcome.get(key) == value for key, value in self.expected.items())

    def serialize(self) -> str:
        lines = [f"name: {self.name}"]
        lines += [f"input.{key}: {value}" for key, value in self.inputs.items()]
        lines += [f"outcome.{key}: {value}" for key, value in self.outcome.items()]
        lines += [f"expected.{key}: {value}" for key, value in self.expected.items()]
        lines.append(f"passed: {str(self.passed).lower()}")
        return "\n".join(lines) + "\n"
