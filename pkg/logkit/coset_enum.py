"""
Todd-Coxeter coset enumeration.

The table has one row per coset and two columns per generator g, for g and
g^-1 (column ``2i`` and ``2i + 1``, so ``x ^ 1`` is the inverse column of x).
Coincidences are merged with a union-find array ``p``: ``p[c] == c`` marks a
live coset, and a merge always keeps the smaller number alive.

Two strategies:

- ``hlt``: scan every relator at each coset in turn, defining new cosets
  whenever a scan gets stuck, then fill the coset's remaining gaps. When the
  table hits its ceiling a lookahead scans all live cosets without defining;
  if enough cosets die the table is compacted and enumeration continues.
- ``felsch``: define the first gap in the table, then chase the consequences
  through every cyclic conjugate of every relator (the deduction stack)
  before defining anything else.

Both end with a closing pass that rescans every live coset. A closed table is
standardized (breadth-first renumbering from coset 0 in column order), so the
two strategies return identical tables for the same group, and it is
certified by ``verify_table`` before it is reported as finite.

Exhausting the ceiling is a result, not an error: it says nothing about
whether the group is infinite.
"""

from __future__ import annotations

import bisect
import json
import logging
from collections import deque
from collections.abc import Sequence
from dataclasses import asdict, dataclass, field

from . import config
from .presentation import Presentation, UnknownGeneratorError, Word
from .sanitize import scrub

logger = logging.getLogger("logkit.coset_enum")

# strategy name -> the CosetEnumerator method that processes one coset
_STRATEGIES = {"hlt": "_process_hlt", "felsch": "_process_felsch"}
STRATEGIES = tuple(sorted(_STRATEGIES))

Row = list[int | None]


class TableNotClosedError(ValueError):
    """Only closed tables can be verified."""


class EnumerationError(RuntimeError):
    """A closed table failed its own certification."""


class _CosetLimit(Exception):
    pass


@dataclass(frozen=True)
class EnumerationLimits:
    max_cosets: int = config.MAX_COSETS
    max_steps: int = config.MAX_STEPS

    def __post_init__(self) -> None:
        if self.max_cosets <= 0 or self.max_steps <= 0:
            raise ValueError(
                f"limits must be positive, got max_cosets={self.max_cosets}, "
                f"max_steps={self.max_steps}"
            )


@dataclass
class EnumerationStats:
    defined: int = 0
    collapses: int = 0
    steps: int = 0
    peak: int = 1
    lookaheads: int = 0
    stopped_by: str = ""  # "" | "max_cosets" | "max_steps"

    def as_dict(self) -> dict[str, object]:
        return asdict(self)


@dataclass(frozen=True)
class CosetTable:
    generators: tuple[str, ...]
    rows: tuple[tuple[int | None, ...], ...]
    status: str  # "closed" | "exceeded"
    stats: EnumerationStats = field(default_factory=EnumerationStats, compare=False)

    @property
    def n_cosets(self) -> int:
        return len(self.rows)

    @property
    def columns(self) -> list[str]:
        return [label for g in self.generators for label in (g, f"{g}^-1")]

    def column(self, gen: str, sign: int) -> int:
        try:
            i = self.generators.index(gen)
        except ValueError:
            raise UnknownGeneratorError(f"{scrub(gen)!r} is not a column of the table") from None
        return 2 * i + (0 if sign == 1 else 1)

    def trace(self, coset: int, word: Word) -> int | None:
        """Follow ``word`` from ``coset``; None if an entry is missing."""
        current: int | None = coset
        for gen, sign in word:
            if current is None:
                return None
            current = self.rows[current][self.column(gen, sign)]
        return current


@dataclass(frozen=True)
class EnumerationResult:
    status: str  # "finite" | "exceeded"
    order: int | None
    table: CosetTable | None
    stats: EnumerationStats

    @property
    def is_finite(self) -> bool:
        return self.status == "finite"

    def describe(self) -> str:
        if self.is_finite:
            return str(self.order)
        return "exceeded limit (consistent with infinite)"

    def as_dict(self) -> dict[str, object]:
        return {"status": self.status, "order": self.order, "stats": self.stats.as_dict()}


class CosetEnumerator:
    """One resumable enumeration of the cosets of ``subgroup`` in the group of ``p``.

    ``run(step_budget)`` processes at most ``step_budget`` cosets and returns
    ``"paused"`` when the budget runs out; calling ``run`` again resumes.
    """

    def __init__(
        self,
        p: Presentation,
        limits: EnumerationLimits | None = None,
        strategy: str = config.DEFAULT_STRATEGY,
        subgroup: Sequence[Word] = (),
    ) -> None:
        if strategy not in _STRATEGIES:
            raise ValueError(f"unknown strategy {strategy!r}; expected one of {list(STRATEGIES)}")
        self.presentation = p
        self.limits = limits or EnumerationLimits(max_cosets=config.default_max_cosets())
        self.strategy = strategy
        self._process = getattr(self, _STRATEGIES[strategy])
        self._felsch = strategy == "felsch"
        self._index = {g: i for i, g in enumerate(p.generators)}
        self.ncols = 2 * p.rank
        self.relators = [self._columns(w) for w in p.reduced_relators()]
        self.subgroup_words = tuple(w.free_reduce() for w in subgroup)
        self.subgroup = [self._columns(w) for w in self.subgroup_words if w]

        self.table: list[Row] = [[None] * self.ncols]
        self.p: list[int] = [0]
        self.stats = EnumerationStats()
        self.status = "running"
        self._alpha = 0
        self._started = False
        self._deductions: list[tuple[int, int]] = []
        self._conjugates: list[list[tuple[int, ...]]] = self._cyclic_conjugates()

    def _columns(self, word: Word) -> tuple[int, ...]:
        cols = []
        for gen, sign in word:
            if gen not in self._index:
                raise UnknownGeneratorError(f"{scrub(gen)!r} is not a generator")
            cols.append(2 * self._index[gen] + (0 if sign == 1 else 1))
        return tuple(cols)

    def _cyclic_conjugates(self) -> list[list[tuple[int, ...]]]:
        """All rotations of every relator and its inverse, grouped by first column."""
        by_first: list[list[tuple[int, ...]]] = [[] for _ in range(self.ncols)]
        if not self._felsch:
            return by_first
        seen: set[tuple[int, ...]] = set()
        for w in self.relators:
            inverse = tuple(x ^ 1 for x in reversed(w))
            for base in (w, inverse):
                for k in range(len(base)):
                    rot = base[k:] + base[:k]
                    if rot not in seen:
                        seen.add(rot)
                        by_first[rot[0]].append(rot)
        return by_first

    # --- union-find --------------------------------------------------------

    def _rep(self, k: int) -> int:
        p = self.p
        root = k
        while p[root] != root:
            root = p[root]
        while p[k] != root:
            nxt = p[k]
            p[k] = root
            k = nxt
        return root

    def _merge(self, k: int, lam: int, queue: deque[int]) -> None:
        phi, psi = self._rep(k), self._rep(lam)
        if phi == psi:
            return
        mu, v = min(phi, psi), max(phi, psi)
        self.p[v] = mu
        queue.append(v)
        self.stats.collapses += 1

    def _coincidence(self, alpha: int, beta: int) -> None:
        table = self.table
        queue: deque[int] = deque()
        self._merge(alpha, beta, queue)
        while queue:
            gamma = queue.popleft()
            for x in range(self.ncols):
                delta = table[gamma][x]
                if delta is None:
                    continue
                table[delta][x ^ 1] = None
                mu, nu = self._rep(gamma), self._rep(delta)
                if table[mu][x] is not None:
                    self._merge(nu, table[mu][x], queue)  # type: ignore[arg-type]
                elif table[nu][x ^ 1] is not None:
                    self._merge(mu, table[nu][x ^ 1], queue)  # type: ignore[arg-type]
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu
                    if self._felsch:
                        self._deductions.append((mu, x))

    # --- definitions and scans ---------------------------------------------

    def _define(self, alpha: int, x: int) -> None:
        if len(self.table) >= self.limits.max_cosets:
            raise _CosetLimit
        beta = len(self.table)
        self.table.append([None] * self.ncols)
        self.p.append(beta)
        self.table[alpha][x] = beta
        self.table[beta][x ^ 1] = alpha
        self.stats.defined += 1
        self.stats.peak = max(self.stats.peak, len(self.table))
        if self._felsch:
            self._deductions.append((alpha, x))

    def _scan(self, alpha: int, word: tuple[int, ...], fill: bool) -> None:
        """Scan ``word`` at ``alpha`` from both ends; deduce on a single gap, define if ``fill``."""
        table = self.table
        f = b = alpha
        i, j = 0, len(word) - 1
        while True:
            while i <= j and table[f][word[i]] is not None:
                f = table[f][word[i]]  # type: ignore[assignment]
                i += 1
            if i > j:
                if f != b:
                    self._coincidence(f, b)
                return
            while j >= i and table[b][word[j] ^ 1] is not None:
                b = table[b][word[j] ^ 1]  # type: ignore[assignment]
                j -= 1
            if j < i:
                self._coincidence(f, b)
                return
            if j == i:
                table[f][word[i]] = b
                table[b][word[i] ^ 1] = f
                if self._felsch:
                    self._deductions.append((f, word[i]))
                return
            if not fill:
                return
            self._define(f, word[i])

    def _process_deductions(self) -> None:
        while self._deductions:
            alpha, x = self._deductions.pop()
            if self.p[alpha] != alpha:
                continue
            for w in self._conjugates[x]:
                self._scan(alpha, w, fill=False)
                if self.p[alpha] != alpha:
                    break
            if self.p[alpha] != alpha:
                continue
            beta = self.table[alpha][x]
            if beta is None or self.p[beta] != beta:
                continue
            for w in self._conjugates[x ^ 1]:
                self._scan(beta, w, fill=False)
                if self.p[beta] != beta:
                    break

    # --- strategies ----------------------------------------------------------

    def _process_hlt(self, alpha: int) -> None:
        for w in self.relators:
            self._scan(alpha, w, fill=True)
            if self.p[alpha] != alpha:
                return
        for x in range(self.ncols):
            if self.table[alpha][x] is None:
                self._define(alpha, x)

    def _process_felsch(self, alpha: int) -> None:
        for x in range(self.ncols):
            if self.p[alpha] != alpha:
                return
            if self.table[alpha][x] is None:
                self._define(alpha, x)
                self._process_deductions()

    def _lookahead(self) -> None:
        for beta in range(len(self.table)):
            if self.p[beta] != beta:
                continue
            for w in self.relators:
                self._scan(beta, w, fill=False)
                if self.p[beta] != beta:
                    break

    def _compact(self) -> None:
        """Renumber live cosets in order, keeping the scan pointer on the next live coset."""
        live = [c for c in range(len(self.table)) if self.p[c] == c]
        new = {c: k for k, c in enumerate(live)}
        self.table = [
            [None if e is None else new[self._rep(e)] for e in self.table[c]] for c in live
        ]
        self.p = list(range(len(live)))
        self._alpha = bisect.bisect_left(live, self._alpha)

    def _recover(self) -> bool:
        """Lookahead at the ceiling; True when it freed enough room to keep going."""
        self.stats.lookaheads += 1
        self._lookahead()
        live = sum(1 for c in range(len(self.table)) if self.p[c] == c)
        freed = len(self.table) - live
        logger.debug(
            "lookahead %d freed %d of %d cosets", self.stats.lookaheads, freed, len(self.table)
        )
        if freed < config.LOOKAHEAD_FREE_FRACTION * self.limits.max_cosets:
            return False
        self._compact()
        return True

    # --- driver --------------------------------------------------------------

    def _sweep(self, budget: int | None) -> str:
        ran = 0
        while self._alpha < len(self.table):
            if self.stats.steps >= self.limits.max_steps:
                self.stats.stopped_by = "max_steps"
                return "exceeded"
            if budget is not None and ran >= budget:
                return "paused"
            alpha = self._alpha
            if self.p[alpha] == alpha:
                try:
                    self._process(alpha)
                except _CosetLimit:
                    if not self._felsch and self._recover():
                        continue
                    self.stats.stopped_by = "max_cosets"
                    return "exceeded"
            self._alpha += 1
            self.stats.steps += 1
            ran += 1
        return "done"

    def _settled(self) -> bool:
        """Closing pass: rescan everything; True when nothing collapsed and no gap is left."""
        before = self.stats.collapses
        self._lookahead()
        for w in self.subgroup:
            self._scan(0, w, fill=False)
        if self._felsch:
            self._process_deductions()
        complete = all(
            None not in self.table[c] for c in range(len(self.table)) if self.p[c] == c
        )
        return complete and self.stats.collapses == before

    def run(self, step_budget: int | None = None) -> str:
        if self.status in ("closed", "exceeded"):
            return self.status
        if not self._started:
            self._started = True
            try:
                for w in self.subgroup:
                    self._scan(0, w, fill=True)
                if self._felsch:
                    self._process_deductions()
            except _CosetLimit:
                self.stats.stopped_by = "max_cosets"
                self.status = "exceeded"
                return self.status
        while True:
            outcome = self._sweep(step_budget)
            if outcome != "done":
                self.status = "paused" if outcome == "paused" else "exceeded"
                return self.status
            if self._settled():
                break
            self._alpha = 0
        self.status = "closed"
        return self.status

    def closed_table(self) -> CosetTable:
        """The standardized table; only after ``run`` returned ``"closed"``."""
        if self.status != "closed":
            raise TableNotClosedError(f"enumeration is {self.status}, not closed")
        order = [0]
        number = {0: 0}
        for c in order:
            for x in range(self.ncols):
                d = self._rep(self.table[c][x])  # type: ignore[arg-type]
                if d not in number:
                    number[d] = len(order)
                    order.append(d)
        rep = self._rep
        rows = tuple(
            tuple(number[rep(e)] for e in self.table[c])  # type: ignore[arg-type]
            for c in order
        )
        return CosetTable(self.presentation.generators, rows, "closed", self.stats)

    def result(self) -> EnumerationResult:
        if self.status != "closed":
            return EnumerationResult("exceeded", None, None, self.stats)
        table = self.closed_table()
        check = verify_table(table, self.presentation, self.subgroup_words)
        if not check.ok:
            raise EnumerationError(f"closed table failed verification: {check}")
        return EnumerationResult("finite", table.n_cosets, table, self.stats)


def todd_coxeter(
    p: Presentation,
    limits: EnumerationLimits | None = None,
    strategy: str = config.DEFAULT_STRATEGY,
    subgroup: Sequence[Word] = (),
) -> EnumerationResult:
    """Enumerate the cosets of ``subgroup`` (trivial by default) within the limits."""
    enumerator = CosetEnumerator(p, limits, strategy, subgroup)
    enumerator.run()
    result = enumerator.result()
    stats = result.stats
    logger.info(
        "%s enumeration: %s (defined=%d, collapses=%d, peak=%d)",
        strategy,
        result.describe(),
        stats.defined,
        stats.collapses,
        stats.peak,
    )
    return result


# --- Certification -----------------------------------------------------------


@dataclass(frozen=True)
class TableCheck:
    ok: bool
    failure: str | None = None  # "not_total" | "not_injective" | "relator" | "subgroup" | "inverse"
    column: str | None = None
    coset: int | None = None
    relator: str | None = None

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        where = ", ".join(
            f"{k}={v}"
            for k, v in (("column", self.column), ("coset", self.coset), ("relator", self.relator))
            if v is not None
        )
        return f"{self.failure} ({where})"


def verify_table(t: CosetTable, p: Presentation, subgroup: Sequence[Word] = ()) -> TableCheck:
    """Every column a bijection, every relator a closed loop at every coset.

    Checks run in that order, then the subgroup words at coset 0, then that
    each inverse column really inverts its generator column.
    """
    if t.status != "closed":
        raise TableNotClosedError(f"table status is {t.status}, not closed")
    n = t.n_cosets
    labels = t.columns
    for x, label in enumerate(labels):
        values = [row[x] for row in t.rows]
        if any(v is None or not 0 <= v < n for v in values):
            return TableCheck(False, "not_total", column=label)
        if len(set(values)) != n:
            return TableCheck(False, "not_injective", column=label)
    for rel in p.reduced_relators():
        for coset in range(n):
            if t.trace(coset, rel) != coset:
                return TableCheck(False, "relator", coset=coset, relator=str(rel))
    for word in subgroup:
        if t.trace(0, word) != 0:
            return TableCheck(False, "subgroup", coset=0, relator=str(word))
    for i, gen in enumerate(t.generators):
        for coset, row in enumerate(t.rows):
            if t.rows[row[2 * i]][2 * i + 1] != coset:  # type: ignore[index]
                return TableCheck(False, "inverse", column=f"{gen}^-1", coset=coset)
    return TableCheck(True)


# --- Dumps -------------------------------------------------------------------


def _format_plain(t: CosetTable) -> str:
    header = ["coset", *t.columns]
    body = [[str(c), *("-" if v is None else str(v) for v in row)] for c, row in enumerate(t.rows)]
    widths = [max(len(r[k]) for r in [header, *body]) for k in range(len(header))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(r, widths)) for r in [header, *body]]
    return "\n".join(lines) + "\n"


def _format_json(t: CosetTable) -> str:
    payload = {
        "generators": list(t.generators),
        "columns": t.columns,
        "rows": [list(row) for row in t.rows],
        "status": t.status,
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


_TABLE_FORMATS = {"plain": _format_plain, "json": _format_json}


def format_table(t: CosetTable, fmt: str = "plain") -> str:
    try:
        render = _TABLE_FORMATS[fmt]
    except KeyError:
        raise ValueError(
            f"unknown format {fmt!r}; expected one of {sorted(_TABLE_FORMATS)}"
        ) from None
    return render(t)
