from typing import NamedTuple

from core.utils import enum
from automata.words import KINDS, Word

ORIENTATIONS = enum(
    LEFT=("LEFT", "Left (states then letters)"),
    RIGHT=("RIGHT", "Right (letters then states)"),
)


class MixedWord(Word):
    """Element of the fundamental group of the square complex, written over states and letters."""

    mixed = True

    def runs(self):
        """Maximal single-kind runs, as (kind, Word) pairs."""
        res = []
        for sym in self:
            if res and res[-1][0] == sym.kind:
                res[-1][1].append(sym)
            else:
                res.append((sym.kind, [sym]))
        return [(kind, Word(syms)) for kind, syms in res]

    def exponent_sums(self):
        """Image under s -> (1, 0), x -> (0, 1)."""
        states = sum(sym.sign for sym in self if sym.kind == KINDS.STATE)
        letters = sum(sym.sign for sym in self if sym.kind == KINDS.LETTER)
        return states, letters


class NormalForm(NamedTuple):
    """
    Exact factorization of a group element: state_part * letter_part (LEFT) or letter_part * state_part (RIGHT).
    """

    orientation: str
    state_part: Word
    letter_part: Word

    def __str__(self):
        return str(self.word)

    @property
    def word(self) -> MixedWord:
        if self.orientation == ORIENTATIONS.LEFT:
            return MixedWord(tuple(self.state_part) + tuple(self.letter_part))
        return MixedWord(tuple(self.letter_part) + tuple(self.state_part))

    @property
    def is_identity(self):
        return not self.state_part and not self.letter_part


class Tile(NamedTuple):
    """Square with left * top = bottom * right, the geometric form of an arrow left -> top|bottom -> right."""

    left: object
    top: object
    bottom: object
    right: object

    def __str__(self):
        return f"{self.left} {self.top} {self.bottom} {self.right}"

    @classmethod
    def from_arrow(cls, arrow):
        return cls(arrow.source, arrow.read, arrow.write, arrow.target)

    @property
    def relator(self) -> MixedWord:
        return MixedWord([self.left, self.top, self.right.inverse, self.bottom.inverse])


class Rectangle(NamedTuple):
    """
    Tiling of a rectangle, rows listed top to bottom. The left side, read bottom to top, is the state word;
    the right side is its section.
    """

    rows: list
    left: Word
    top: Word
    bottom: Word
    right: Word

    @property
    def shape(self):
        return len(self.left), len(self.top)


class Presentation(NamedTuple):
    generators: list
    relators: list
    name: str = ""

    def __str__(self):
        lines = [f"name: {self.name}"] if self.name else []
        lines.append("generators: " + " ".join(sym.name for sym in self.generators))
        lines.append("relators:")
        lines += [str(relator) for relator in self.relators]
        return "\n".join(lines) + "\n"

    @property
    def total_length(self):
        return sum(len(relator) for relator in self.relators)


class CommutationReport(NamedTuple):
    """Entry [n - 1][m - 1] tells whether p^n and q^m commute."""

    p: Word
    q: Word
    matrix: list

    @property
    def anti_torus(self):
        """No commuting powers up to the computed bounds."""
        return not any(any(row) for row in self.matrix)

    def __str__(self):
        verdict = "no commutation" if self.anti_torus else "commuting powers found"
        bounds = f"{len(self.matrix)}x{len(self.matrix[0]) if self.matrix else 0}"
        return f"({self.p}, {self.q}) up to {bounds}: {verdict}"
