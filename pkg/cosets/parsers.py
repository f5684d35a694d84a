import logging
from pathlib import Path

from core.exceptions import ParseError
from complexes.models import MixedWord, Presentation
from automata.words import Sym, parse_word
from automata.parsers import parse_header, strip_comments
from cosets.models import PresentationFile

logger = logging.getLogger(__name__)

WORD_SECTIONS = ("relators", "extra", "subgroup")


def parse_presentation(text: str, name: str | None = None) -> PresentationFile:
    """
    Presentation file: a `generators:` line, then `relators:` (and optionally `extra:` and `subgroup:`)
    followed by one word per line in the `^-1` / `^k` syntax.
    """
    generators, sections, current = None, {key: [] for key in WORD_SECTIONS}, None
    lines = []
    for number, line in strip_comments(text):
        if ":" in line:
            key, values = parse_header(line, number)
            if key == "generators":
                if generators is not None:
                    raise ParseError(details={"line": number, "duplicate": key})
                generators = [Sym.parse(token) for token in values]
                current = None
            elif key in WORD_SECTIONS:
                current = key
            elif key == "name":
                name = name or " ".join(values)
            else:
                raise ParseError(details={"line": number, "content": line})
            continue
        if current is None:
            raise ParseError(details={"line": number, "content": line})
        lines.append((number, current, line))
    if not generators:
        raise ParseError(details={"missing": "generators"})

    known = {sym.base: sym for sym in generators}

    def resolve(base):
        if base not in known:
            raise ParseError(details={"generator": base, "reason": "undeclared"})
        return known[base]

    for _number, section, line in lines:
        sections[section].append(parse_word(line, resolve, cls=MixedWord))
    presentation = Presentation(generators, sections["relators"], name=name or "presentation")
    logger.debug(
        "Parsed presentation %s: %s generators, %s relators",
        presentation.name,
        len(generators),
        len(presentation.relators),
    )
    return PresentationFile(presentation, sections["extra"], sections["subgroup"])


def load_presentation(path, name=None) -> PresentationFile:
    path = Path(path)
    return parse_presentation(path.read_text(), name=name or path.stem)
