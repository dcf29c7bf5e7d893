"""
Reidemeister-Schreier presentations for the kernel H(n) of the map that sends
every generator to 1 in Z_n.

The Schreier transversal is ``{x0^0, x0^1, ..., x0^(n-1)}`` on the first
generator x0, so a word's coset is its total exponent mod n. The Schreier
generator for coset i and generator g is ``x0^i g x0^-(i+1 mod n)``; it is
named ``g_i``. Those for x0 itself are trivial except ``x0_(n-1) = x0^n``. Each
relator is rewritten once from every coset.

A bounded Tietze pass then tidies the result: reduce, drop trivial and repeated
relators, and eliminate generators through relators of length one or two. No
search is done, so the output is deterministic.
"""

from __future__ import annotations

import logging

from .presentation import Letter, Presentation, PresentationError, Word

logger = logging.getLogger("logkit.kernel")


class NotInKernelMapError(PresentationError):
    """A relator's total exponent is not 0 mod n, so 'every generator -> 1' is not a map."""


def schreier_name(gen: str, coset: int) -> str:
    return f"{gen}_{coset}"


def reidemeister_schreier_kernel(p: Presentation, n: int, simplify: bool = True) -> Presentation:
    if n < 2:
        raise PresentationError(f"kernel index n must be >= 2, got {n}")
    if not p.generators:
        raise PresentationError("the map to Z_n needs at least one generator")
    for i, rel in enumerate(p.relators):
        if rel.total_exponent() % n:
            raise NotInKernelMapError(
                f"relator {i} ({rel}) has total exponent {rel.total_exponent()}, not 0 mod {n}"
            )

    x0 = p.generators[0]

    def schreier(gen: str, coset: int) -> str | None:
        if gen == x0 and coset != n - 1:
            return None  # x0^i x0 x0^-(i+1) is freely trivial
        return schreier_name(gen, coset)

    gens = [schreier_name(x0, n - 1)]
    gens += [schreier_name(g, i) for g in p.generators[1:] for i in range(n)]

    rels: list[Word] = []
    for rel in p.relators:
        for start in range(n):
            rels.append(_rewrite(rel, start, n, schreier))

    kernel = Presentation(tuple(gens), tuple(rels))
    logger.debug(
        "Reidemeister-Schreier: %d generators, %d relators before simplification",
        kernel.rank,
        len(kernel.relators),
    )
    return tietze_simplify(kernel) if simplify else kernel


def _rewrite(rel: Word, start: int, n: int, schreier) -> Word:
    letters: list[Letter] = []
    coset = start
    for gen, sign in rel:
        if sign == 1:
            name = schreier(gen, coset)
            coset = (coset + 1) % n
        else:
            coset = (coset - 1) % n
            name = schreier(gen, coset)
        if name is not None:
            letters.append((name, sign))
    return Word(tuple(letters))


# --- Bounded Tietze simplification -------------------------------------------


def _canonical(word: Word) -> tuple[Letter, ...]:
    """Least rotation of the word or its inverse; equal keys define the same relation."""
    candidates = word.rotations() + word.inverse().rotations()
    return min(c.letters for c in candidates)


def _substitute(word: Word, gen: str, image: Word) -> Word:
    letters: list[Letter] = []
    for g, s in word:
        if g == gen:
            letters.extend((image if s == 1 else image.inverse()).letters)
        else:
            letters.append((g, s))
    return Word(tuple(letters))


def _tidy(relators: list[Word]) -> list[Word]:
    out: list[Word] = []
    seen: set[tuple[Letter, ...]] = set()
    for rel in relators:
        reduced = rel.cyclic_reduce()
        if not reduced:
            continue
        key = _canonical(reduced)
        if key in seen:
            continue
        seen.add(key)
        out.append(reduced)
    return out


def _elimination(relators: list[Word]) -> tuple[int, str, Word] | None:
    """First relator that expresses one generator through at most one other."""
    for i, rel in enumerate(relators):
        if len(rel) == 1:
            return i, rel.letters[0][0], Word()
        if len(rel) == 2 and rel.letters[0][0] != rel.letters[1][0]:
            (g, e), (h, d) = rel.letters
            # g^e h^d = 1  =>  g = h^(-d*e)
            return i, g, Word(((h, -d * e),))
    return None


def tietze_simplify(p: Presentation) -> Presentation:
    gens = list(p.generators)
    relators = _tidy(list(p.relators))
    eliminated = 0
    while (found := _elimination(relators)) is not None:
        index, gen, image = found
        del relators[index]
        relators = _tidy([_substitute(r, gen, image) for r in relators])
        gens.remove(gen)
        eliminated += 1
    logger.debug("Tietze: eliminated %d generators, %d relators remain", eliminated, len(relators))
    return Presentation(tuple(gens), tuple(relators))
