"""
Words and finite group presentations.

A ``Word`` is a sequence of signed letters ``(generator, ±1)``. Relators are
stored exactly as given (``a b c^-1 b^-1`` stays four letters, never rotated);
free and cyclic reduction are normal forms callers ask for explicitly.

Constructors for the presentations the rest of the package studies:

- ``log_presentation(g)``: one generator per vertex and the relator
  ``a b c^-1 b^-1`` (that is, ab = bc) per edge ``(a|b|c)``;
- ``with_power(p, x, n)`` / ``with_all_powers(p, n)``: kill the n-th power of a
  meridian (or of every generator);
- ``braid_quotient(m, n)``: the Artin presentation of the m-strand braid group
  with ``s1^n`` added.

Two text formats: the plain ``gen:`` / ``rel:`` format (read and written) and
an export for computational-algebra systems (GAP syntax).
"""

from __future__ import annotations

import logging
import re
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .log_model import InvalidParameterError, LabeledOrientedGraph
from .sanitize import is_valid_name, scrub

if TYPE_CHECKING:
    from sympy.combinatorics.fp_groups import FpGroup

logger = logging.getLogger("logkit.presentation")

Letter = tuple[str, int]

_TOKEN_RE = re.compile(r"^(?P<gen>[^\s^]+?)(?:\^(?P<exp>-?\d+))?$")
_IDENTIFIER_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class PresentationError(ValueError):
    """A Presentation invariant does not hold."""


class UnknownGeneratorError(PresentationError):
    pass


class InvalidExponentError(PresentationError):
    pass


class PresentationParseError(PresentationError):
    """Input text is not in the plain presentation format."""


@dataclass(frozen=True)
class Word:
    letters: tuple[Letter, ...] = ()

    def __post_init__(self) -> None:
        for gen, sign in self.letters:
            if sign not in (1, -1):
                raise PresentationError(f"letter sign must be +1 or -1, got {sign} on {gen!r}")

    # --- construction --------------------------------------------------------

    @classmethod
    def of(cls, *letters: Letter) -> Word:
        return cls(tuple(letters))

    @classmethod
    def power(cls, gen: str, n: int) -> Word:
        sign = 1 if n >= 0 else -1
        return cls(((gen, sign),) * abs(n))

    @classmethod
    def parse(cls, text: str) -> Word:
        """Read ``a b c^-1 b^-1`` (tokens split on whitespace or ``*``; ``x^k`` expands)."""
        letters: list[Letter] = []
        for token in text.replace("*", " ").split():
            if token == "1":
                continue
            match = _TOKEN_RE.match(token)
            if match is None or not is_valid_name(match["gen"]):
                raise PresentationParseError(f"cannot read word token {scrub(token)!r}")
            exp = int(match["exp"]) if match["exp"] is not None else 1
            letters.extend(cls.power(match["gen"], exp).letters)
        return cls(tuple(letters))

    # --- sequence protocol ---------------------------------------------------

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __mul__(self, other: Word) -> Word:
        return Word(self.letters + other.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        tokens: list[str] = []
        i = 0
        while i < len(self.letters):
            j = i
            while j < len(self.letters) and self.letters[j] == self.letters[i]:
                j += 1
            gen, sign = self.letters[i]
            exp = sign * (j - i)
            tokens.append(gen if exp == 1 else f"{gen}^{exp}")
            i = j
        return " ".join(tokens)

    # --- normal forms --------------------------------------------------------

    def inverse(self) -> Word:
        return Word(tuple((g, -s) for g, s in reversed(self.letters)))

    def free_reduce(self) -> Word:
        stack: list[Letter] = []
        for gen, sign in self.letters:
            if stack and stack[-1] == (gen, -sign):
                stack.pop()
            else:
                stack.append((gen, sign))
        return Word(tuple(stack))

    def cyclic_reduce(self) -> Word:
        letters = self.free_reduce().letters
        lo, hi = 0, len(letters)
        while hi - lo >= 2 and letters[lo] == (letters[hi - 1][0], -letters[hi - 1][1]):
            lo += 1
            hi -= 1
        return Word(letters[lo:hi])

    def is_cyclically_reduced(self) -> bool:
        return self.cyclic_reduce() == self

    def letters_from(self, k: int) -> Word:
        """The cyclic rotation that starts at position ``k``."""
        if not self.letters:
            return self
        k %= len(self.letters)
        return Word(self.letters[k:] + self.letters[:k])

    def rotations(self) -> list[Word]:
        return [self.letters_from(k) for k in range(len(self.letters))]

    def exponent_sum(self, gen: str) -> int:
        return sum(s for g, s in self.letters if g == gen)

    def total_exponent(self) -> int:
        return sum(s for _, s in self.letters)

    def generators(self) -> set[str]:
        return {g for g, _ in self.letters}

    def single_generator_power(self) -> tuple[str, int] | None:
        """``(g, k)`` when the word is literally ``g^k`` with |k| >= 1, else None."""
        if not self.letters or len(set(self.letters)) != 1:
            return None
        gen, sign = self.letters[0]
        return gen, sign * len(self.letters)


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self) -> None:
        if len(set(self.generators)) != len(self.generators):
            raise PresentationError("duplicate generator names")
        known = set(self.generators)
        for i, rel in enumerate(self.relators):
            unknown = rel.generators() - known
            if unknown:
                raise UnknownGeneratorError(
                    f"relator {i} ({scrub(rel)}) uses unknown generator "
                    f"{scrub(sorted(unknown)[0])!r}"
                )

    @property
    def rank(self) -> int:
        return len(self.generators)

    def with_relators(self, extra: Iterable[Word]) -> Presentation:
        return Presentation(self.generators, self.relators + tuple(extra))

    def reduced_relators(self) -> list[Word]:
        """Cyclically reduced, nonempty relators in order; the form enumeration works on."""
        out = []
        for rel in self.relators:
            reduced = rel.cyclic_reduce()
            if reduced:
                out.append(reduced)
        return out

    def exponent_matrix(self) -> list[list[int]]:
        """Rows = relators, columns = generators, entries = exponent sums."""
        return [[rel.exponent_sum(g) for g in self.generators] for rel in self.relators]

    def __str__(self) -> str:
        gens = ", ".join(self.generators)
        rels = ", ".join(str(r) for r in self.relators)
        return f"< {gens} | {rels} >"


# --- Constructors ------------------------------------------------------------


def edge_relator(source: str, label: str, target: str) -> Word:
    """``a b c^-1 b^-1`` for the edge (a|b|c)."""
    return Word.of((source, 1), (label, 1), (target, -1), (label, -1))


def log_presentation(g: LabeledOrientedGraph) -> Presentation:
    rels = tuple(edge_relator(e.source, e.label, e.target) for e in g.edges)
    return Presentation(g.vertices, rels)


def with_power(p: Presentation, x: str, n: int) -> Presentation:
    """``p`` with the relator ``x^n`` appended."""
    if x not in p.generators:
        raise UnknownGeneratorError(f"{scrub(x)!r} is not a generator of the presentation")
    if n <= 0:
        raise InvalidExponentError(f"power exponent must be >= 1, got {n}")
    return p.with_relators([Word.power(x, n)])


def with_all_powers(p: Presentation, n: int) -> Presentation:
    """``p`` with ``g^n`` appended for every generator g, in generator order."""
    if n <= 0:
        raise InvalidExponentError(f"power exponent must be >= 1, got {n}")
    return p.with_relators(Word.power(g, n) for g in p.generators)


def braid_quotient(m: int, n: int) -> Presentation:
    """Artin's presentation of the m-strand braid group on s1..s(m-1), plus ``s1^n``."""
    if m < 2:
        raise InvalidParameterError(f"braid group needs m >= 2 strands, got {m}")
    if n < 1:
        raise InvalidExponentError(f"power exponent must be >= 1, got {n}")
    gens = tuple(f"s{i}" for i in range(1, m))
    rels: list[Word] = []
    for i in range(len(gens) - 1):
        a, b = gens[i], gens[i + 1]
        # s_i s_{i+1} s_i = s_{i+1} s_i s_{i+1}
        rels.append(Word.of((a, 1), (b, 1), (a, 1), (b, -1), (a, -1), (b, -1)))
    for i in range(len(gens)):
        for j in range(i + 2, len(gens)):
            a, b = gens[i], gens[j]
            rels.append(Word.of((a, 1), (b, 1), (a, -1), (b, -1)))
    rels.append(Word.power(gens[0], n))
    return Presentation(gens, tuple(rels))


# --- Text formats ------------------------------------------------------------


def _format_plain(p: Presentation) -> str:
    lines = ["gen: " + " ".join(p.generators)]
    lines.extend(f"rel: {r}" for r in p.relators)
    return "\n".join(lines) + "\n"


def _format_algebra(p: Presentation) -> str:
    quoted = ", ".join(f'"{g}"' for g in p.generators)
    lines = [f"F := FreeGroup({quoted});;" if p.generators else "F := FreeGroup(0);;"]
    named = all(_IDENTIFIER_RE.match(g) for g in p.generators)
    if named:
        lines.extend(f"{g} := F.{i};;" for i, g in enumerate(p.generators, start=1))
    index = {g: i for i, g in enumerate(p.generators, start=1)}

    def symbol(gen: str) -> str:
        return gen if named else f"F.{index[gen]}"

    words = []
    for rel in p.relators:
        factors = [symbol(g) if s == 1 else f"{symbol(g)}^-1" for g, s in rel]
        words.append("*".join(factors) if factors else "One(F)")
    lines.append("G := F / [ " + ", ".join(words) + " ];;")
    return "\n".join(lines) + "\n"


_FORMATS = {"plain": _format_plain, "algebra": _format_algebra}


def format_presentation(p: Presentation, fmt: str = "plain") -> str:
    try:
        render = _FORMATS[fmt]
    except KeyError:
        raise ValueError(f"unknown format {fmt!r}; expected one of {sorted(_FORMATS)}") from None
    return render(p)


def parse_presentation(text: str) -> Presentation:
    """Read the plain format: ``gen: a b c`` lines, then ``rel: ...`` lines."""
    gens: list[str] = []
    rels: list[Word] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep or key not in ("gen", "rel"):
            raise PresentationParseError(f"line {lineno}: expected 'gen:' or 'rel:'")
        if key == "gen":
            for name in rest.split():
                if not is_valid_name(name):
                    raise PresentationParseError(
                        f"line {lineno}: invalid generator {scrub(name)!r}"
                    )
                gens.append(name)
        else:
            rels.append(Word.parse(rest))
    if not gens and not rels:
        raise PresentationParseError("no generators or relators in input")
    return Presentation(tuple(gens), tuple(rels))


def looks_like_presentation(text: str) -> bool:
    """True when the first meaningful line is a ``gen:`` line."""
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            return line.startswith("gen:")
    return False


def to_sympy(p: Presentation) -> FpGroup:
    """The presentation as a sympy ``FpGroup`` (generator i becomes the symbol ``x<i>``)."""
    from sympy.combinatorics.fp_groups import FpGroup
    from sympy.combinatorics.free_groups import free_group

    if not p.generators:
        raise PresentationError("sympy free groups need at least one generator")
    free, *symbols = free_group(f"x0:{p.rank}")
    image = dict(zip(p.generators, symbols))
    relators = []
    for rel in p.relators:
        element = free.identity
        for gen, sign in rel:
            element = element * image[gen] ** sign
        relators.append(element)
    return FpGroup(free, relators)
