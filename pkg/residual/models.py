from typing import NamedTuple

from core.utils import enum
from complexes.models import MixedWord

STRATEGIES = enum(
    BINARY=("binary", "Binary alphabet: x -> x(y^-1 x)^n"),
    POWER=("power", "Two-state signed complex: s -> s^(1+n)"),
    TWO_STATE=("two-state", "Two-state components, through the dual"),
    EMBEDDING=("embedding", "X-isomorphic subautomaton of A*"),
)

NRF_VERDICTS = enum(
    NON_RESIDUALLY_FINITE=("NON_RESIDUALLY_FINITE", "Non-residually finite"),
    INCONCLUSIVE=("INCONCLUSIVE", "Inconclusive"),
)

INCONCLUSIVE_REASONS = enum(
    FINITE_GROUP=("FINITE_GROUP", "The automaton group is finite"),
    INFINITENESS_UNKNOWN=("INFINITENESS_UNKNOWN", "Infiniteness neither certified nor cited"),
    NO_ENDOMORPHISM=("NO_ENDOMORPHISM", "No endomorphism construction applies"),
    MORPHISM_FAILED=("MORPHISM_FAILED", "The map does not preserve the defining relations"),
    FIXED_SET_FAILED=("FIXED_SET_FAILED", "Fixed-subgroup evidence failed"),
    TRIVIAL_WITNESS=("TRIVIAL_WITNESS", "A witness element is trivial"),
)


class Partition(NamedTuple):
    """States fixing both positive letters, states fixing both inverse letters, and the others."""

    positive: tuple
    negative: tuple
    rest: tuple


class GeneratorMap(NamedTuple):
    """Images of the generators; inverses map to inverse images and unlisted symbols are fixed."""

    images: dict
    name: str = ""

    def __str__(self):
        return ", ".join(f"{sym}->{image}" for sym, image in self.images.items())

    def image(self, sym) -> MixedWord:
        if sym in self.images:
            return MixedWord(self.images[sym])
        if sym.inverse in self.images:
            return MixedWord(self.images[sym.inverse]).inverse
        return MixedWord([sym])

    def apply(self, word) -> MixedWord:
        res = []
        for sym in word:
            res.extend(self.image(sym))
        return MixedWord(res)

    def compose(self, other):
        """self after other."""
        keys = list(other.images) + [sym for sym in self.images if sym not in other.images]
        return GeneratorMap({sym: self.apply(other.image(sym)) for sym in keys}, name=f"{self.name}*{other.name}")

    def is_identity(self):
        return all(self.image(sym) == MixedWord([sym]) for sym in self.images)


class Embedding(NamedTuple):
    """State s of A sent to the state word w_s of A*, letters fixed."""

    states: dict

    def __str__(self):
        return ", ".join(f"{s}->{w}" for s, w in self.states.items())

    @property
    def length(self):
        return len(next(iter(self.states.values()))) if self.states else 0


class PmSet(NamedTuple):
    """Letter pairs (x, y) with g^m(u x) = u y, each stored with one witness (g, u)."""

    m: int
    pairs: dict
    max_g_length: int
    max_u_length: int

    def __str__(self):
        return " ".join(f"({x},{y})" for x, y in self.pairs) or "()"


class FixedSetEvidence(NamedTuple):
    fixes_generators: bool
    corpus_size: int
    moved: int
    lengthened: int
    lengthens: bool = True

    @property
    def passed(self):
        lengthened = self.lengthened == self.corpus_size or not self.lengthens
        return self.fixes_generators and self.moved == self.corpus_size and lengthened


class NrfReport(NamedTuple):
    automaton: str
    infiniteness: str
    infiniteness_source: str
    strategy: str | None
    endomorphism: GeneratorMap | None
    morphism_verified: bool
    fixed_evidence: FixedSetEvidence | None
    witnesses: list
    witness_mode: str
    verdict: str
    reason: str | None

    FIELDS = (
        "automaton",
        "verdict",
        "reason",
        "infiniteness",
        "infiniteness_source",
        "strategy",
        "endomorphism",
        "morphism_verified",
        "fixed_generators",
        "fixed_corpus",
        "fixed_moved",
        "fixed_lengthened",
        "witness_mode",
        "witnesses",
    )

    def as_dict(self):
        evidence = self.fixed_evidence
        return {
            "automaton": self.automaton,
            "verdict": self.verdict,
            "reason": self.reason or "-",
            "infiniteness": self.infiniteness,
            "infiniteness_source": self.infiniteness_source,
            "strategy": self.strategy or "-",
            "endomorphism": str(self.endomorphism) if self.endomorphism else "-",
            "morphism_verified": str(self.morphism_verified).lower(),
            "fixed_generators": str(evidence.fixes_generators).lower() if evidence else "-",
            "fixed_corpus": evidence.corpus_size if evidence else "-",
            "fixed_moved": evidence.moved if evidence else "-",
            "fixed_lengthened": evidence.lengthened if evidence else "-",
            "witness_mode": self.witness_mode,
            "witnesses": "; ".join(str(w) for w in self.witnesses) or "-",
        }

    def serialize(self) -> str:
        values = self.as_dict()
        return "".join(f"{key}: {values[key]}\n" for key in self.FIELDS)
