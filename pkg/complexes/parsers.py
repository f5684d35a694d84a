import logging
from pathlib import Path

from core.exceptions import ParseError
from automata.words import KINDS, Sym
from automata.models import Arrow, Automaton
from automata.parsers import parse_header, strip_comments

logger = logging.getLogger(__name__)


def square_arrows(left, top, bottom, right):
    """The four arrows of the signed automaton read off one square."""
    return [
        Arrow(left, top, bottom, right),
        Arrow(~left, bottom, top, ~right),
        Arrow(right, ~top, ~bottom, left),
        Arrow(~right, ~bottom, ~top, ~left),
    ]


def parse_squares(text: str, name: str | None = None) -> Automaton:
    """
    Complex file: `states:` and `alphabet:` headers with positive names, then `squares:` and one
    `<left> <top> <bottom> <right>` line per square (`^-1` reverses an edge).

    The signed automaton is complete and deterministic exactly when the link of the vertex is complete
    bipartite, which the Automaton constructor checks.
    """
    headers, squares = {}, []
    in_squares = False
    for number, line in strip_comments(text):
        if in_squares and ":" not in line:
            tokens = line.split()
            if len(tokens) != 4:
                raise ParseError(details={"line": number, "content": line})
            left, right = Sym.parse(tokens[0], KINDS.STATE), Sym.parse(tokens[3], KINDS.STATE)
            top, bottom = Sym.parse(tokens[1], KINDS.LETTER), Sym.parse(tokens[2], KINDS.LETTER)
            squares.append((left, top, bottom, right))
            continue
        key, values = parse_header(line, number)
        if key in headers:
            raise ParseError(details={"line": number, "duplicate": key})
        headers[key] = values
        in_squares = key == "squares"
    for key in ("states", "alphabet"):
        if not headers.get(key):
            raise ParseError(details={"missing": key})
    if not squares:
        raise ParseError(details={"missing": "squares"})

    states = [Sym.parse(token, KINDS.STATE) for token in headers["states"]]
    alphabet = [Sym.parse(token, KINDS.LETTER) for token in headers["alphabet"]]
    arrows = [arrow for square in squares for arrow in square_arrows(*square)]
    name = name or " ".join(headers.get("name", [])) or "complex"
    automaton = Automaton(
        states + [s.inverse for s in states], alphabet + [x.inverse for x in alphabet], arrows, name=name
    )
    logger.debug("Parsed complex %r with %s squares", automaton, len(squares))
    return automaton


def load_squares(path, name=None) -> Automaton:
    path = Path(path)
    return parse_squares(path.read_text(), name=name or path.stem)


def serialize_squares(automaton, squares) -> str:
    lines = [
        f"name: {automaton.name}",
        "states: " + " ".join(s.name for s in automaton.state_generators),
        "alphabet: " + " ".join(x.name for x in automaton.letter_generators),
        "squares:",
    ]
    lines += [f"{s} {x} {y} {t}" for s, x, y, t in squares]
    return "\n".join(lines) + "\n"


def tiles_to_text(tiles) -> str:
    return "".join(f"{tile}\n" for tile in tiles)


def tiles_to_dot(name, tiles) -> str:
    """Tiles as a Wang graph: one node per state, one edge per tile labelled top/bottom."""
    lines = [f'digraph "tiles {name}" {{', "  rankdir=LR;"]
    lines += [f'  "{tile.left}" -> "{tile.right}" [label="{tile.top}/{tile.bottom}"];' for tile in tiles]
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_rectangle(rectangle) -> str:
    """
    ASCII drawing, one cell per tile:

        +--0--+--1--+
        a     b     a
        +--0--+--0--+
    """
    if not rectangle.rows or not rectangle.top:
        return f"{rectangle.top}\n"
    labels = [str(sym) for row in rectangle.rows for tile in row for sym in tile]
    width = max(len(label) for label in labels) + 4

    def edge(letters):
        return "+" + "+".join(str(x).center(width, "-") for x in letters) + "+"

    def middle(row):
        states = [row[0].left] + [tile.right for tile in row]
        return "".join(str(s).ljust(width + 1) for s in states).rstrip()

    lines = [edge(tile.top for tile in rectangle.rows[0])]
    for row in rectangle.rows:
        lines += [middle(row), edge(tile.bottom for tile in row)]
    return "\n".join(lines) + "\n"
