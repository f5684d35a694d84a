import factory

from automata.words import KINDS, Sym
from automata.models import Arrow, Automaton


class AutomatonFactory(factory.Factory):
    """Single-state automaton fixing every letter, or any automaton given its arrows."""

    class Meta:
        model = Automaton

    name = "identity"
    states = factory.LazyFunction(lambda: [Sym("e")])
    alphabet = factory.LazyFunction(lambda: [Sym("0", kind=KINDS.LETTER), Sym("1", kind=KINDS.LETTER)])
    arrows = factory.LazyAttribute(lambda o: [Arrow(s, x, x, s) for s in o.states for x in o.alphabet])


class BundledAutomatonFactory(factory.Factory):
    """Automaton (or square complex) from the bundled catalog."""

    class Meta:
        model = Automaton

    name = "aleshin"

    @classmethod
    def _create(cls, model_class, name):
        from catalog.controllers import CatalogController

        return CatalogController.load(f"bundled:{name}")

    _build = _create


def arrows_from_text(*lines):
    """`"a 0 -> 1 b"` lines to arrows."""
    res = []
    for line in lines:
        s, x, _, y, t = line.split()
        res.append(
            Arrow(Sym.parse(s), Sym.parse(x, KINDS.LETTER), Sym.parse(y, KINDS.LETTER), Sym.parse(t))
        )
    return res


def automaton_from_text(states, alphabet, *lines, name="custom"):
    return AutomatonFactory(
        name=name,
        states=[Sym.parse(s) for s in states.split()],
        alphabet=[Sym.parse(x, KINDS.LETTER) for x in alphabet.split()],
        arrows=arrows_from_text(*lines),
    )
