import re
from typing import NamedTuple

from core.utils import enum
from core.exceptions import ParseError, InternalError

INVERSE_SUFFIX = "^-1"
POWER_PATTERN = re.compile(r"^(?P<name>.+?)\^(?P<power>-?\d+)$")

KINDS = enum(
    STATE=("STATE", "State"),
    LETTER=("LETTER", "Letter"),
)


class Sym(NamedTuple):
    """
    A signed symbol: a base name, a sign (+1 / -1) and a kind (state or letter).
    """

    base: str
    sign: int = 1
    kind: str = KINDS.STATE

    def __str__(self):
        return self.name

    def __invert__(self):
        return self.inverse

    @property
    def name(self):
        return self.base if self.sign > 0 else self.base + INVERSE_SUFFIX

    @property
    def inverse(self):
        return Sym(self.base, -self.sign, self.kind)

    @property
    def positive(self):
        return self if self.sign > 0 else self.inverse

    def as_kind(self, kind):
        return Sym(self.base, self.sign, kind)

    @classmethod
    def parse(cls, token, kind=KINDS.STATE):
        """`a`, `a^-1` (and `a^-1^-1` = `a`) to a Sym."""
        base, sign = token.strip(), 1
        while base.endswith(INVERSE_SUFFIX):
            base, sign = base[: -len(INVERSE_SUFFIX)], -sign
        if not base or any(c.isspace() for c in base) or "^" in base:
            raise ParseError(details={"token": token})
        return cls(base, sign, kind)


def free_reduce(syms):
    stack = []
    for sym in syms:
        if stack and stack[-1] == sym.inverse:
            stack.pop()
        else:
            stack.append(sym)
    return stack


class Word(tuple):
    """
    Freely reduced word over Syms of a single kind (an element of F_S or F_X).
    The empty word is the identity.
    """

    mixed = False

    def __new__(cls, syms=()):
        syms = free_reduce(syms)
        if not cls.mixed and len({sym.kind for sym in syms}) > 1:
            raise InternalError("MIXED_WORD", details={"word": " ".join(map(str, syms))})
        return super().__new__(cls, syms)

    def __str__(self):
        return " ".join(sym.name for sym in self) if self else "()"

    def __repr__(self):
        return f"{type(self).__name__}({str(self)!r})"

    def __mul__(self, other):
        return type(self)(tuple(self) + tuple(other))

    def __rmul__(self, other):
        return type(self)(tuple(other) + tuple(self))

    def __pow__(self, n):
        if n < 0:
            return self.inverse**-n
        return type(self)(tuple(self) * n)

    def __getitem__(self, item):
        res = super().__getitem__(item)
        return type(self)(res) if isinstance(item, slice) else res

    @property
    def kind(self):
        return self[0].kind if self else None

    @property
    def inverse(self):
        return type(self)(sym.inverse for sym in reversed(self))

    def compact(self):
        """Words written without separators when every name is a single character (`xy^-1`)."""
        if all(len(sym.base) == 1 for sym in self):
            return "".join(sym.name for sym in self) if self else "()"
        return str(self)


def expand_token(token, resolve):
    """
    Expand `name`, `name^-1` or `name^k` into a list of Syms, `resolve` mapping a base name to its Sym.
    """
    match = POWER_PATTERN.match(token)
    if match and match["power"] != "-1":
        name, power = match["name"], int(match["power"])
    else:
        name, power = token, 1
    sym = Sym.parse(name)
    resolved = resolve(sym.base)
    if sym.sign < 0:
        resolved = resolved.inverse
    if power < 0:
        return [resolved.inverse] * -power
    return [resolved] * power


def parse_word(text, resolve, cls=Word):
    """Whitespace separated tokens (`a b^-1 c^3`); `()` or an empty string is the identity."""
    text = (text or "").strip()
    if text in ("", "()"):
        return cls()
    syms = []
    for token in text.split():
        syms.extend(expand_token(token, resolve))
    return cls(syms)


def reduced_words(syms, length, cls=Word):
    """All freely reduced words of a given length over `syms` (closed under inverse), in lexicographic order."""
    if length == 0:
        yield cls()
        return
    stack = [[sym] for sym in reversed(syms)]
    while stack:
        prefix = stack.pop()
        if len(prefix) == length:
            yield cls(prefix)
            continue
        for sym in reversed(syms):
            if sym != prefix[-1].inverse:
                stack.append(prefix + [sym])
