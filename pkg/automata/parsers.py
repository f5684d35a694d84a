import logging
from pathlib import Path

from core.exceptions import ParseError
from automata.words import KINDS, Sym
from automata.models import Arrow, Automaton, LinkGraph

logger = logging.getLogger(__name__)

DOT_RANKDIR = "LR"


def strip_comments(text):
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if line:
            yield number, line


def parse_header(line, number):
    key, _, value = line.partition(":")
    key = key.strip()
    if not _ or not key.isidentifier():
        raise ParseError(details={"line": number, "content": line})
    return key, value.split()


def parse_automaton(text: str, name: str | None = None) -> Automaton:
    """
    Automaton file: `name:`, `alphabet:` and `states:` headers, then one `<state> <letter> -> <letter> <state>`
    line per arrow. `#` starts a comment.
    """
    headers, arrows = {}, []
    for number, line in strip_comments(text):
        if "->" in line:
            left, _, right = line.partition("->")
            left, right = left.split(), right.split()
            if len(left) != 2 or len(right) != 2:
                raise ParseError(details={"line": number, "content": line})
            arrows.append(
                Arrow(
                    Sym.parse(left[0], KINDS.STATE),
                    Sym.parse(left[1], KINDS.LETTER),
                    Sym.parse(right[0], KINDS.LETTER),
                    Sym.parse(right[1], KINDS.STATE),
                )
            )
        else:
            key, values = parse_header(line, number)
            if key in headers:
                raise ParseError(details={"line": number, "duplicate": key})
            headers[key] = values
    for key in ("alphabet", "states"):
        if not headers.get(key):
            raise ParseError(details={"missing": key})
    name = name or " ".join(headers.get("name", [])) or "automaton"
    states = [Sym.parse(token, KINDS.STATE) for token in headers["states"]]
    alphabet = [Sym.parse(token, KINDS.LETTER) for token in headers["alphabet"]]
    automaton = Automaton(states, alphabet, arrows, name=name)
    logger.debug("Parsed %r", automaton)
    return automaton


def load_automaton(path, name=None) -> Automaton:
    path = Path(path)
    return parse_automaton(path.read_text(), name=name or path.stem)


def serialize_automaton(automaton: Automaton) -> str:
    lines = [
        f"name: {automaton.name}",
        "alphabet: " + " ".join(x.name for x in automaton.alphabet),
        "states: " + " ".join(s.name for s in automaton.states),
    ]
    lines += [str(arrow) for arrow in automaton.arrows]
    return "\n".join(lines) + "\n"


def automaton_to_dot(automaton: Automaton) -> str:
    lines = [
        f'digraph "{automaton.name}" {{',
        f"  rankdir={DOT_RANKDIR};",
        "  node [shape=circle];",
    ]
    lines += [f'  "{s}";' for s in automaton.states]
    lines += [f'  "{s}" -> "{t}" [label="{x}|{y}"];' for s, x, y, t in automaton.arrows]
    lines.append("}")
    return "\n".join(lines) + "\n"


def link_graph_to_dot(link_graph: LinkGraph) -> str:
    lines = [f'graph "link {link_graph.automaton.name}" {{']
    lines += [f'  "{LinkGraph.vertex_name(v)}" [shape=box];' for v in link_graph.left]
    lines += [f'  "{LinkGraph.vertex_name(v)}" [shape=ellipse];' for v in link_graph.right]
    for u, v in link_graph.graph.edges():
        lines.append(f'  "{LinkGraph.vertex_name(u)}" -- "{LinkGraph.vertex_name(v)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
