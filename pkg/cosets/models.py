from typing import NamedTuple

from sympy.combinatorics import Permutation

from core.utils import enum

COSET_STATUSES = enum(
    CLOSED=("CLOSED", "Closed"),
    CAPPED=("CAPPED", "Capped"),
)

COSET_STRATEGIES = enum(
    FELSCH=("felsch", "One definition at a time, deductions scanned through every relator"),
    HLT=("hlt", "Relators scanned and filled from every coset in turn"),
)


class CosetTable(NamedTuple):
    """
    Row 0 is the subgroup; columns are the generators followed by their inverses (`columns[i]`).
    Entries are row indices, or None where a capped table has no definition yet.
    """

    columns: list
    rows: list
    status: str
    defined: int = 0

    def __str__(self):
        lines = ["\t".join(["coset"] + [sym.name for sym in self.columns])]
        for i, row in enumerate(self.rows):
            lines.append("\t".join([str(i)] + ["-" if entry is None else str(entry) for entry in row]))
        return "\n".join(lines) + "\n"

    @property
    def closed(self):
        return self.status == COSET_STATUSES.CLOSED

    @property
    def index(self):
        return len(self.rows) if self.closed else None

    def column(self, sym):
        return self.columns.index(sym)

    def trace(self, coset, word):
        """Coset reached from `coset` along `word`, None when an entry is missing."""
        for sym in word:
            if coset is None:
                return None
            coset = self.rows[coset][self.column(sym)]
        return coset

    def permutations(self) -> dict:
        """Right action of every column on the cosets; only meaningful for a closed table."""
        return {sym: Permutation([row[i] for row in self.rows]) for i, sym in enumerate(self.columns)}


class PresentationFile(NamedTuple):
    """A presentation with the optional `extra:` relators and `subgroup:` generators of its file."""

    presentation: object
    extra: list
    subgroup: list
