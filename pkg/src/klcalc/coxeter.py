"""Finite Coxeter groups: enumeration, arithmetic, Bruhat order, cosets.

Two descriptor kinds are supported.  ``TypeA(n)`` is the symmetric group
S_n acting on n letters, with the n-1 adjacent transpositions as simple
generators; elements are stored as one-line permutation tuples.
``CoxeterMatrix(rows)`` builds an arbitrary *finite* Coxeter group from
its Coxeter matrix; elements are stored as ShortLex-minimal reduced words
and word problems are decided with braid moves (two reduced words are
equal in the group iff they are connected by braid relations, and a
non-reduced word always braids into one with a repeated adjacent letter).
The matrix path is meant for small groups such as the dihedral group of
order 8; enumeration is capped to guard against infinite type.

Composition convention, fixed once and used everywhere:
    (a * b)(i) = a(b(i)),
so for one-line permutations right multiplication by the i-th generator
swaps *positions* i, i+1 and left multiplication swaps *values* i, i+1.

Elements of a built group are handles ``GroupElement(group, index)``
where the index refers to the group's canonical element order: sorted by
(length, canonical representation).  Index 0 is the identity and the last
index is the longest element.  All tables (multiplication, inverse,
descents, Bruhat) are index-based and immutable after the build, so any
number of readers may share a group.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import factorial
from typing import Iterable, Literal

DEFAULT_ELEMENT_CAP = 3_628_800  # 10!


class InvalidMatrix(ValueError):
    """Malformed Coxeter matrix."""


class InfiniteGroup(RuntimeError):
    """Enumeration exceeded the element cap; the matrix is (or behaves) infinite."""


class GroupMismatch(ValueError):
    """Operands belong to different built groups."""


class NotTypeA(TypeError):
    """Operation is only defined for symmetric groups."""


@dataclass(frozen=True)
class TypeA:
    """The symmetric group S_n on ``n`` letters (rank n-1)."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise InvalidMatrix("TypeA needs a positive number of letters")

    def canonical_json(self) -> dict:
        return {"kind": "A", "n": self.n}


@dataclass(frozen=True)
class CoxeterMatrix:
    """A symmetric Coxeter matrix; entry m_ij is the order of s_i s_j."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        r = len(self.rows)
        if r == 0:
            raise InvalidMatrix("empty Coxeter matrix")
        for i, row in enumerate(self.rows):
            if len(row) != r:
                raise InvalidMatrix("Coxeter matrix must be square")
            for j, m in enumerate(row):
                if i == j and m != 1:
                    raise InvalidMatrix("diagonal entries must be 1")
                if i != j and (m < 2):
                    raise InvalidMatrix("off-diagonal entries must be >= 2")
                if m != self.rows[j][i]:
                    raise InvalidMatrix("Coxeter matrix must be symmetric")

    def canonical_json(self) -> dict:
        return {"kind": "matrix", "rows": [list(r) for r in self.rows]}


GroupDescriptor = TypeA | CoxeterMatrix

Side = Literal["left", "right"]


class GroupElement:
    """A handle to one element of a built group.  Cheap, hashable, immutable."""

    __slots__ = ("group", "index")

    def __init__(self, group: "CoxeterGroup", index: int):
        self.group = group
        self.index = index

    @property
    def length(self) -> int:
        return self.group.length[self.index]

    @property
    def perm(self) -> tuple[int, ...]:
        if not self.group.is_type_a:
            raise NotTypeA("one-line form only exists for TypeA groups")
        return self.group.reprs[self.index]

    def word(self) -> tuple[int, ...]:
        """ShortLex-minimal reduced word, as 1-based generator indices."""
        return tuple(g + 1 for g in self.group.canonical_word(self.index))

    def inverse(self) -> "GroupElement":
        return GroupElement(self.group, self.group.inv[self.index])

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if not isinstance(other, GroupElement):
            return NotImplemented
        if other.group is not self.group:
            raise GroupMismatch("elements of different groups")
        return GroupElement(self.group, self.group.mul(self.index, other.index))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupElement)
            and other.group is self.group
            and other.index == self.index
        )

    def __hash__(self) -> int:
        return hash((id(self.group), self.index))

    def __repr__(self) -> str:
        w = self.word()
        return "e" if not w else ",".join(map(str, w))


class CoxeterGroup:
    """A fully enumerated finite Coxeter group with all query tables built."""

    def __init__(self, descriptor: GroupDescriptor, cap: int = DEFAULT_ELEMENT_CAP):
        self.descriptor = descriptor
        self.is_type_a = isinstance(descriptor, TypeA)
        if self.is_type_a:
            if factorial(descriptor.n) > cap:
                raise InfiniteGroup(
                    f"S_{descriptor.n} has {factorial(descriptor.n)} elements, "
                    f"over the cap of {cap}"
                )
            self._build_type_a(descriptor.n)
        else:
            self._build_from_matrix(descriptor, cap)
        self._finish_tables()
        self._words: list[tuple[int, ...] | None] = [None] * self.size
        self._subgroup_cache: dict[frozenset, tuple[int, ...]] = {}
        self._rs_cache = None  # filled by tableaux
        self._bar_std = None  # filled by hecke

    # -- construction --------------------------------------------------------

    def _build_type_a(self, n: int) -> None:
        self.rank = n - 1
        perms = list(itertools.permutations(range(1, n + 1)))

        def inversions(p: tuple[int, ...]) -> int:
            return sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])

        perms.sort(key=lambda p: (inversions(p), p))
        self.reprs: list[tuple[int, ...]] = perms
        self.size = len(perms)
        index = {p: i for i, p in enumerate(perms)}
        self.length = [inversions(p) for p in perms]

        rank = self.rank
        rmult = []
        lmult = []
        inv = []
        for p in perms:
            row_r = []
            row_l = []
            for g in range(rank):
                q = list(p)
                q[g], q[g + 1] = q[g + 1], q[g]
                row_r.append(index[tuple(q)])
                a, b = g + 1, g + 2
                row_l.append(index[tuple(b if x == a else a if x == b else x for x in p)])
            rmult.append(row_r)
            lmult.append(row_l)
            ip = [0] * n
            for pos, val in enumerate(p):
                ip[val - 1] = pos + 1
            inv.append(index[tuple(ip)])
        self.rmult, self.lmult, self.inv = rmult, lmult, inv

    def _build_from_matrix(self, desc: CoxeterMatrix, cap: int) -> None:
        matrix = desc.rows
        rank = len(matrix)
        self.rank = rank

        braid_pairs = []
        for i in range(rank):
            for j in range(i + 1, rank):
                m = matrix[i][j]
                a = tuple((i, j)[k % 2] for k in range(m))
                b = tuple((j, i)[k % 2] for k in range(m))
                braid_pairs.append((a, b))

        def braid_class(word: tuple[int, ...]) -> set[tuple[int, ...]]:
            seen = {word}
            queue = [word]
            while queue:
                w = queue.pop()
                for a, b in braid_pairs:
                    for pat, rep in ((a, b), (b, a)):
                        k = len(pat)
                        for pos in range(len(w) - k + 1):
                            if w[pos : pos + k] == pat:
                                w2 = w[:pos] + rep + w[pos + k :]
                                if w2 not in seen:
                                    seen.add(w2)
                                    queue.append(w2)
                if len(seen) > 200_000:
                    raise InfiniteGroup("braid class blow-up; matrix too large for the word-based builder")
            return seen

        def repeated_letter_word(cls: set[tuple[int, ...]]) -> tuple[int, ...] | None:
            for w in cls:
                for pos in range(len(w) - 1):
                    if w[pos] == w[pos + 1]:
                        return w[:pos] + w[pos + 2 :]
            return None

        words: list[tuple[int, ...]] = [()]
        index: dict[tuple[int, ...], int] = {(): 0}
        rmult_d: dict[tuple[int, int], int] = {}
        stratum = [()]
        while stratum:
            nxt: list[tuple[int, ...]] = []
            for w in stratum:
                for g in range(rank):
                    cand = w + (g,)
                    cls = braid_class(cand)
                    shorter = repeated_letter_word(cls)
                    if shorter is not None:
                        # cand is not reduced: w * s_g drops one in length
                        target = min(braid_class(shorter)) if shorter else ()
                        rmult_d[(index[w], g)] = index[target]
                    else:
                        canon = min(cls)
                        if canon not in index:
                            index[canon] = len(words)
                            words.append(canon)
                            nxt.append(canon)
                            if len(words) > cap:
                                raise InfiniteGroup(
                                    f"more than {cap} elements; not a finite Coxeter matrix?"
                                )
                        rmult_d[(index[w], g)] = index[canon]
            stratum = nxt

        # canonical order: (length, word); words of equal length sort ShortLex
        order = sorted(range(len(words)), key=lambda i: (len(words[i]), words[i]))
        old_to_new = {old: new for new, old in enumerate(order)}
        self.reprs = [words[i] for i in order]
        self.size = len(words)
        self.length = [len(w) for w in self.reprs]
        new_index = {w: i for i, w in enumerate(self.reprs)}
        self.rmult = [
            [old_to_new[rmult_d[(order[i], g)]] for g in range(rank)]
            for i in range(self.size)
        ]

        def fold(word: Iterable[int]) -> int:
            i = 0
            for g in word:
                i = self.rmult[i][g]
            return i

        self.lmult = [
            [fold((g,) + self.reprs[i]) for g in range(rank)] for i in range(self.size)
        ]
        self.inv = [fold(tuple(reversed(self.reprs[i]))) for i in range(self.size)]
        del new_index

    def _finish_tables(self) -> None:
        size, rank = self.size, self.rank
        length = self.length
        self.identity_index = 0
        maxlen = max(length)
        top = [i for i in range(size) if length[i] == maxlen]
        if len(top) != 1:
            raise InfiniteGroup("no unique longest element; group is not finite Coxeter")
        self.longest_index = top[0]

        self.rdesc = [
            sum(1 << g for g in range(rank) if length[self.rmult[i][g]] < length[i])
            for i in range(size)
        ]
        self.ldesc = [
            sum(1 << g for g in range(rank) if length[self.lmult[i][g]] < length[i])
            for i in range(size)
        ]

        # Bruhat order as bitmask rows: bit x of down[y] says x <= y.
        # Built by length induction with the lifting property: for s a right
        # descent of y and u = y s, x <= y iff (x s < x ? x s <= u : x <= u).
        asc = [
            sum(1 << i for i in range(size) if length[self.rmult[i][g]] > length[i])
            for g in range(rank)
        ]
        down = [0] * size
        down[0] = 1
        for y in range(1, size):
            g = (self.rdesc[y] & -self.rdesc[y]).bit_length() - 1
            u = self.rmult[y][g]
            part = down[u] & asc[g]
            row = part
            m = part
            while m:
                z = m & -m
                row |= 1 << self.rmult[z.bit_length() - 1][g]
                m ^= z
            down[y] = row
        self.bruhat_down = down

    # -- basic queries ---------------------------------------------------------

    def element(self, index: int) -> GroupElement:
        return GroupElement(self, index)

    @property
    def identity(self) -> GroupElement:
        return GroupElement(self, self.identity_index)

    @property
    def longest(self) -> GroupElement:
        return GroupElement(self, self.longest_index)

    def generator(self, g: int) -> GroupElement:
        """The g-th simple generator, 1-based."""
        if not 1 <= g <= self.rank:
            raise ValueError(f"generator index out of range: {g}")
        return GroupElement(self, self.rmult[0][g - 1])

    def elements(self) -> Iterable[GroupElement]:
        return (GroupElement(self, i) for i in range(self.size))

    def mul(self, a: int, b: int) -> int:
        out = a
        for g in self.canonical_word(b):
            out = self.rmult[out][g]
        return out

    def canonical_word(self, i: int) -> tuple[int, ...]:
        """ShortLex-minimal reduced word (0-based letters) for element i."""
        w = self._words[i]
        if w is None:
            if not self.is_type_a:
                w = self.reprs[i]
            else:
                letters = []
                j = i
                while self.ldesc[j]:
                    g = (self.ldesc[j] & -self.ldesc[j]).bit_length() - 1
                    letters.append(g)
                    j = self.lmult[j][g]
                w = tuple(letters)
            self._words[i] = w
        return w

    def element_from_word(self, word: Iterable[int]) -> GroupElement:
        """Fold a word of 1-based generator indices into an element."""
        i = 0
        for g in word:
            if not 1 <= g <= self.rank:
                raise ValueError(f"generator index out of range: {g}")
            i = self.rmult[i][g - 1]
        return GroupElement(self, i)

    def element_from_perm(self, perm: Iterable[int]) -> GroupElement:
        if not self.is_type_a:
            raise NotTypeA("one-line input only makes sense for TypeA groups")
        p = tuple(perm)
        try:
            return GroupElement(self, self.reprs.index(p))
        except ValueError:
            raise ValueError(f"not a permutation of this group: {p}") from None

    def bruhat_leq_i(self, x: int, y: int) -> bool:
        return bool(self.bruhat_down[y] >> x & 1)

    def descent_set(self, i: int, side: Side) -> frozenset[int]:
        mask = self.rdesc[i] if side == "right" else self.ldesc[i]
        return frozenset(g + 1 for g in range(self.rank) if mask >> g & 1)

    # -- parabolic combinatorics -------------------------------------------------

    def _subset_mask(self, subset: Iterable[int]) -> int:
        mask = 0
        for g in subset:
            if not 1 <= g <= self.rank:
                raise ValueError(f"generator index out of range: {g}")
            mask |= 1 << (g - 1)
        return mask

    def parabolic_elements(self, subset: Iterable[int]) -> tuple[int, ...]:
        """All element indices of the standard parabolic subgroup, sorted."""
        key = frozenset(subset)
        cached = self._subgroup_cache.get(key)
        if cached is None:
            gens = [g - 1 for g in key]
            seen = {0}
            queue = [0]
            while queue:
                i = queue.pop()
                for g in gens:
                    j = self.rmult[i][g]
                    if j not in seen:
                        seen.add(j)
                        queue.append(j)
            cached = tuple(sorted(seen))
            self._subgroup_cache[key] = cached
        return cached

    def longest_element_i(self, subset: Iterable[int]) -> int:
        elems = self.parabolic_elements(subset)
        best = max(elems, key=lambda i: self.length[i])
        ties = [i for i in elems if self.length[i] == self.length[best]]
        if len(ties) != 1:
            raise InfiniteGroup("parabolic subgroup has no unique longest element")
        return best

    def min_coset_reps_i(self, subset: Iterable[int]) -> tuple[int, ...]:
        """Shortest representatives of the cosets W_subset \\ W, sorted canonically."""
        mask = self._subset_mask(subset)
        return tuple(i for i in range(self.size) if not self.ldesc[i] & mask)


# ---------------------------------------------------------------------------
# spec-level operations on element handles
# ---------------------------------------------------------------------------

def build_group(descriptor: GroupDescriptor, cap: int = DEFAULT_ELEMENT_CAP) -> CoxeterGroup:
    return CoxeterGroup(descriptor, cap=cap)


def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    return a * b


def inverse(a: GroupElement) -> GroupElement:
    return a.inverse()


def length(w: GroupElement) -> int:
    return w.length


def descents(w: GroupElement, side: Side) -> frozenset[int]:
    """1-based indices of generators s with l(ws) < l(w) (right) or l(sw) < l(w)."""
    return w.group.descent_set(w.index, side)


def bruhat_leq(x: GroupElement, y: GroupElement) -> bool:
    if x.group is not y.group:
        raise GroupMismatch("elements of different groups")
    return x.group.bruhat_leq_i(x.index, y.index)


def longest_element(group: CoxeterGroup, subset: Iterable[int]) -> GroupElement:
    return GroupElement(group, group.longest_element_i(subset))


def min_coset_reps(group: CoxeterGroup, subset: Iterable[int]) -> list[GroupElement]:
    return [GroupElement(group, i) for i in group.min_coset_reps_i(subset)]
