"""Type-A combinatorics: partitions, tableaux, Robinson-Schensted, Kostka numbers.

This module is the independent combinatorial oracle for the cell machinery:
Robinson-Schensted insertion classifies Kazhdan-Lusztig cells of symmetric
groups without touching the Hecke algebra, and Kostka numbers govern which
cells meet a parabolic block.  Everything here is pure and exact.

Row insertion is used throughout (an entry bumps the first strictly larger
entry of the row).  Which of the two output tableaux labels left vs right
cells is deliberately *not* decided here; the cells module calibrates that
against the Hecke-side computation at runtime.
"""

from __future__ import annotations

from bisect import bisect_right
from functools import lru_cache
from math import factorial
from typing import Iterable, Iterator

from .coxeter import GroupElement, NotTypeA


class SizeMismatch(ValueError):
    """Partitions of different sizes where equal sizes are required."""


class Partition:
    """A weakly decreasing tuple of positive integers."""

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[int]):
        p = tuple(int(x) for x in parts if x)
        if any(p[i] < p[i + 1] for i in range(len(p) - 1)):
            raise ValueError(f"parts must be weakly decreasing: {p}")
        if any(x < 0 for x in p):
            raise ValueError(f"parts must be positive: {p}")
        self.parts = p

    @property
    def n(self) -> int:
        return sum(self.parts)

    def conjugate(self) -> "Partition":
        p = self.parts
        if not p:
            return Partition(())
        return Partition(tuple(sum(1 for x in p if x > i) for i in range(p[0])))

    def dominance_leq(self, other: "Partition") -> bool:
        """True iff self is dominated by other (prefix sums never larger)."""
        if self.n != other.n:
            raise SizeMismatch(f"|{self}| != |{other}|")
        a = b = 0
        for i in range(max(len(self.parts), len(other.parts))):
            a += self.parts[i] if i < len(self.parts) else 0
            b += other.parts[i] if i < len(other.parts) else 0
            if a > b:
                return False
        return True

    def __eq__(self, other) -> bool:
        return isinstance(other, Partition) and other.parts == self.parts

    def __lt__(self, other: "Partition") -> bool:
        # plain lexicographic order, used only for deterministic sorting
        return self.parts < other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"

    __repr__ = __str__


def partitions_of(n: int) -> Iterator[Partition]:
    """All partitions of n, descending lexicographic: (n) first, (1^n) last."""

    def rec(remaining: int, maxpart: int, prefix: tuple[int, ...]):
        if remaining == 0:
            yield Partition(prefix)
            return
        for part in range(min(maxpart, remaining), 0, -1):
            yield from rec(remaining - part, part, prefix + (part,))

    yield from rec(n, n, ())


def dominance_leq(lam: Partition, mu: Partition) -> bool:
    return lam.dominance_leq(mu)


def conjugate(lam: Partition) -> Partition:
    return lam.conjugate()


class StandardTableau:
    """Rows of a standard Young tableau: strictly increasing rows and columns,
    entries exactly 1..n."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable[int]]):
        self.rows = tuple(tuple(r) for r in rows)
        self._validate()

    def _validate(self) -> None:
        rows = self.rows
        entries = [x for r in rows for x in r]
        n = len(entries)
        if sorted(entries) != list(range(1, n + 1)):
            raise ValueError(f"entries must be exactly 1..{n}")
        for r in rows:
            if any(r[i] >= r[i + 1] for i in range(len(r) - 1)):
                raise ValueError("rows must strictly increase")
        for i in range(len(rows) - 1):
            if len(rows[i + 1]) > len(rows[i]):
                raise ValueError("shape must be a partition")
            if any(rows[i + 1][j] <= rows[i][j] for j in range(len(rows[i + 1]))):
                raise ValueError("columns must strictly increase")

    @property
    def shape(self) -> Partition:
        return Partition(len(r) for r in self.rows)

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def __eq__(self, other) -> bool:
        return isinstance(other, StandardTableau) and other.rows == self.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return "/".join("".join(map(str, r)) if all(x < 10 for x in r)
                        else ",".join(map(str, r)) for r in self.rows)


def rs_insert(word: Iterable[int]) -> tuple[StandardTableau, StandardTableau]:
    """Row-insert a sequence of distinct integers; return (insertion, recording)."""
    p_rows: list[list[int]] = []
    q_rows: list[list[int]] = []
    for step, x in enumerate(word, start=1):
        r = 0
        while True:
            if r == len(p_rows):
                p_rows.append([x])
                q_rows.append([step])
                break
            row = p_rows[r]
            pos = bisect_right(row, x)
            if pos == len(row):
                row.append(x)
                q_rows[r].append(step)
                break
            row[pos], x = x, row[pos]
            r += 1
    return StandardTableau(p_rows), StandardTableau(q_rows)


def rs_correspondence(w: GroupElement) -> tuple[StandardTableau, StandardTableau]:
    """Robinson-Schensted pair of a symmetric-group element (from its one-line word)."""
    if not w.group.is_type_a:
        raise NotTypeA("Robinson-Schensted needs a one-line permutation")
    cache = w.group._rs_cache
    if cache is None:
        cache = w.group._rs_cache = [None] * w.group.size
    pair = cache[w.index]
    if pair is None:
        pair = rs_insert(w.perm)
        cache[w.index] = pair
    return pair


def shape(w: GroupElement) -> Partition:
    return rs_correspondence(w)[0].shape


@lru_cache(maxsize=None)
def _kostka(lam: tuple[int, ...], mu: tuple[int, ...]) -> int:
    """Count semistandard tableaux of shape lam and content mu by backtracking
    row by row; each row is weakly increasing with strict column increase."""
    if not lam:
        return 1 if not any(mu) else 0

    width = lam[0]

    def count(row_idx: int, prev_row: tuple[int, ...], avail: tuple[int, ...]) -> int:
        if row_idx == len(lam):
            return 1
        rowlen = lam[row_idx]
        total = 0

        def fill(col: int, minval: int, avail2: tuple[int, ...], chosen: tuple[int, ...]):
            nonlocal total
            if col == rowlen:
                total += count(row_idx + 1, chosen, avail2)
                return
            lower = max(minval, (prev_row[col] + 1) if col < len(prev_row) else 1)
            for val in range(lower, len(avail2) + 1):
                if avail2[val - 1] > 0:
                    nxt = avail2[: val - 1] + (avail2[val - 1] - 1,) + avail2[val:]
                    fill(col + 1, val, nxt, chosen + (val,))

        fill(0, 1, avail, ())
        return total

    return count(0, (0,) * width, mu)


def kostka(lam: Partition, mu: Partition) -> int:
    """Number of semistandard tableaux of shape lam and content mu."""
    if lam.n != mu.n:
        raise SizeMismatch(f"|{lam}| != |{mu}|")
    return _kostka(lam.parts, mu.parts)


def syt_count(lam: Partition) -> int:
    """Number of standard tableaux of the shape, by the hook length formula."""
    parts = lam.parts
    conj = lam.conjugate().parts
    hooks = 1
    for i, row in enumerate(parts):
        for j in range(row):
            hooks *= (row - j) + (conj[j] - i) - 1
    return factorial(lam.n) // hooks
