"""The Hecke algebra of a finite Coxeter group and its Kazhdan-Lusztig basis.

Conventions (fixed package-wide):

* standard basis {H_w} over Z[v, v^-1] with H_x H_y = H_{xy} when lengths
  add, and the quadratic relation H_s^2 = H_e + (v^-1 - v) H_s;
* the bar involution sends v to v^-1 and H_x to (H_{x^-1})^-1, so
  bar(H_s) = H_s + (v - v^-1) H_e;
* the KL basis element B_x is the unique bar-invariant element of the form
  H_x + sum_{y<x} h(y,x) H_y with every h(y,x) in v Z[v].  In particular
  B_s = H_s + v H_e.

The table of coefficients h(y,x) is built by induction on length: with s a
left descent of x and w = s x,

    B_s B_w = B_x + sum_{y : s y < y} mu(y, w) B_y,

where mu(y, w) is the coefficient of v in h(y, w).  Each freshly computed
column is checked on the spot: h(x,x) = 1, h(y,x) in v Z_{>=0}[v] for
y < x, and (unless disabled) bar-invariance of B_x verified against an
independently built table of bar(H_y) expansions.  A violation raises
:class:`NormalizationViolation` rather than poisoning downstream results.

Internally a Hecke element is a dict {element index: raw poly dict}; the
:class:`HeckeElement` wrapper exposes the GroupElement/LaurentPoly view.
"""

from __future__ import annotations

from typing import Iterator

from .coxeter import CoxeterGroup, GroupElement, GroupMismatch
from .laurent import LaurentPoly, padd_into, pbar, pmul, render_poly


class NormalizationViolation(RuntimeError):
    """The computed KL table failed one of its defining checks (a bug trap)."""


# ---------------------------------------------------------------------------
# raw vector helpers: a "vec" is {element index: poly dict}
# ---------------------------------------------------------------------------

def vec_add_into(dst: dict, src: dict, scale: int = 1, shift: int = 0) -> None:
    for i, p in src.items():
        tgt = dst.get(i)
        if tgt is None:
            tgt = dst[i] = {}
        padd_into(tgt, p, shift=shift, scale=scale)
        if not tgt:
            del dst[i]


def vec_clean(vec: dict) -> dict:
    return {i: p for i, p in vec.items() if p}


def _rstep_std(group: CoxeterGroup, vec: dict, g: int) -> dict:
    """vec * H_s for the g-th generator (0-based)."""
    rmult = group.rmult
    length = group.length
    out: dict = {}
    for u, p in vec.items():
        u2 = rmult[u][g]
        t = out.get(u2)
        if t is None:
            t = out[u2] = {}
        padd_into(t, p)
        if not t:
            del out[u2]
        if length[u2] < length[u]:
            t = out.get(u)
            if t is None:
                t = out[u] = {}
            padd_into(t, p, shift=-1)
            padd_into(t, p, shift=1, scale=-1)
            if not t:
                del out[u]
    return out


def _lstep_bar(group: CoxeterGroup, vec: dict, g: int) -> dict:
    """bar(H_s) * vec = (H_s + (v - v^-1) H_e) * vec, multiplying on the left."""
    lmult = group.lmult
    length = group.length
    out: dict = {}
    for z, p in vec.items():
        z2 = lmult[z][g]
        t = out.get(z2)
        if t is None:
            t = out[z2] = {}
        padd_into(t, p)
        if not t:
            del out[z2]
        if length[z2] > length[z]:
            # the quadratic correction cancels exactly when s z < z
            t = out.get(z)
            if t is None:
                t = out[z] = {}
            padd_into(t, p, shift=1)
            padd_into(t, p, shift=-1, scale=-1)
            if not t:
                del out[z]
    return out


def bar_std_table(group: CoxeterGroup) -> list[dict]:
    """bar(H_w) expanded in the standard basis, for every w; cached on the group.

    Built by length induction from bar(H_w) = bar(H_s) * bar(H_u) for w = s u,
    entirely independent of the KL recursion (it only uses the quadratic
    relation), which is what makes it a genuine cross-check for the KL build.
    """
    table = group._bar_std
    if table is None:
        table = [None] * group.size  # type: ignore[list-item]
        table[0] = {0: {0: 1}}
        for w in range(1, group.size):
            g = (group.ldesc[w] & -group.ldesc[w]).bit_length() - 1
            u = group.lmult[w][g]
            table[w] = _lstep_bar(group, table[u], g)
        group._bar_std = table
    return table


class HeckeElement:
    """A finitely supported map GroupElement -> LaurentPoly in the H basis."""

    __slots__ = ("group", "vec")

    def __init__(self, group: CoxeterGroup, vec: dict | None = None):
        self.group = group
        self.vec = vec_clean(vec or {})

    @classmethod
    def standard(cls, w: GroupElement) -> "HeckeElement":
        return cls(w.group, {w.index: {0: 1}})

    @classmethod
    def unit(cls, group: CoxeterGroup) -> "HeckeElement":
        return cls(group, {0: {0: 1}})

    def coeff(self, w: GroupElement) -> LaurentPoly:
        if w.group is not self.group:
            raise GroupMismatch("element of a different group")
        return LaurentPoly(self.vec.get(w.index, {}))

    def items(self) -> Iterator[tuple[GroupElement, LaurentPoly]]:
        for i in sorted(self.vec):
            yield GroupElement(self.group, i), LaurentPoly(self.vec[i])

    def support(self) -> list[GroupElement]:
        return [GroupElement(self.group, i) for i in sorted(self.vec)]

    def is_zero(self) -> bool:
        return not self.vec

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        self._check(other)
        d = {i: dict(p) for i, p in self.vec.items()}
        vec_add_into(d, other.vec)
        return HeckeElement(self.group, d)

    def __sub__(self, other: "HeckeElement") -> "HeckeElement":
        self._check(other)
        d = {i: dict(p) for i, p in self.vec.items()}
        vec_add_into(d, other.vec, scale=-1)
        return HeckeElement(self.group, d)

    def scale(self, poly: LaurentPoly) -> "HeckeElement":
        return HeckeElement(
            self.group, {i: pmul(p, poly.c) for i, p in self.vec.items()}
        )

    def __mul__(self, other: "HeckeElement") -> "HeckeElement":
        self._check(other)
        return HeckeElement(self.group, mult_std_raw(self.group, self.vec, other.vec))

    def bar(self) -> "HeckeElement":
        bars = bar_std_table(self.group)
        out: dict = {}
        for y, p in self.vec.items():
            pb = pbar(p)
            for z, r in bars[y].items():
                tgt = out.get(z)
                if tgt is None:
                    tgt = out[z] = {}
                padd_into(tgt, pmul(pb, r))
                if not tgt:
                    del out[z]
        return HeckeElement(self.group, out)

    def _check(self, other: "HeckeElement") -> None:
        if other.group is not self.group:
            raise GroupMismatch("Hecke elements over different groups")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HeckeElement)
            and other.group is self.group
            and other.vec == self.vec
        )

    def __hash__(self):
        return hash((id(self.group), frozenset((i, frozenset(p.items())) for i, p in self.vec.items())))

    def __repr__(self) -> str:
        if not self.vec:
            return "0"
        bits = []
        for i in sorted(self.vec):
            w = GroupElement(self.group, i)
            bits.append(f"({render_poly(self.vec[i])})*H[{w!r}]")
        return " + ".join(bits)


def mult_std_raw(group: CoxeterGroup, a: dict, b: dict) -> dict:
    """Product of two raw Hecke vectors in the standard basis.

    Folds the canonical word of each basis element of b through a one
    generator at a time; fine at desk scale, and the KL build itself never
    calls this (it uses the cheaper single-generator steps directly).
    """
    out: dict = {}
    for w, p in b.items():
        cur = a
        for g in group.canonical_word(w):
            cur = _rstep_std(group, cur, g)
        for i, q in cur.items():
            tgt = out.get(i)
            if tgt is None:
                tgt = out[i] = {}
            padd_into(tgt, pmul(q, p))
            if not tgt:
                del out[i]
    return out


def mult_std(h1: HeckeElement, h2: HeckeElement) -> HeckeElement:
    return h1 * h2


def bar_hecke(h: HeckeElement) -> HeckeElement:
    return h.bar()


class KLTable:
    """The full table of KL basis coefficients h(y,x) and mu(y,x) for a group.

    ``cols[x]`` maps y to the raw dict of h(y,x); ``mu_cols[x]`` maps y to
    the integer mu(y,x) (only nonzero entries, only y < x).  Immutable after
    construction; safe for any number of concurrent readers.
    """

    def __init__(self, group: CoxeterGroup, cols: list[dict], mu_cols: list[dict],
                 verified: bool):
        self.group = group
        self.cols = cols
        self.mu_cols = mu_cols
        self.verified = verified
        self._rows: list[dict] | None = None

    # -- raw views -------------------------------------------------------------

    def rows(self) -> list[dict]:
        """Transposed view: rows()[y] maps x to the raw dict of h(y,x)."""
        if self._rows is None:
            rows: list[dict] = [{} for _ in range(self.group.size)]
            for x, col in enumerate(self.cols):
                for y, p in col.items():
                    rows[y][x] = p
            self._rows = rows
        return self._rows

    def h_i(self, y: int, x: int) -> dict:
        return self.cols[x].get(y, {})

    def mu_i(self, y: int, x: int) -> int:
        return self.mu_cols[x].get(y, 0)

    # -- element-handle API ------------------------------------------------------

    def h(self, y: GroupElement, x: GroupElement) -> LaurentPoly:
        self._own(y); self._own(x)
        return LaurentPoly(self.h_i(y.index, x.index))

    def mu(self, y: GroupElement, x: GroupElement) -> int:
        self._own(y); self._own(x)
        return self.mu_i(y.index, x.index)

    def kl_element(self, x: GroupElement) -> HeckeElement:
        self._own(x)
        return HeckeElement(self.group, {y: dict(p) for y, p in self.cols[x.index].items()})

    def kl_product(self, x: GroupElement, y: GroupElement) -> dict[GroupElement, LaurentPoly]:
        """Structure constants: B_x B_y = sum_w c_w B_w, with positivity checked."""
        self._own(x); self._own(y)
        prod = mult_std_raw(self.group, self.cols[x.index], self.cols[y.index])
        out: dict[GroupElement, LaurentPoly] = {}
        # Bruhat-descending elimination: the maximal surviving index carries
        # its KL coefficient because h(z,z) = 1 and lower columns sit below it.
        while prod:
            z = max(prod)
            c = prod.pop(z)
            for u, p in self.cols[z].items():
                if u == z:
                    continue
                tgt = prod.get(u)
                if tgt is None:
                    tgt = prod[u] = {}
                padd_into(tgt, pmul(c, p), scale=-1)
                if not tgt:
                    del prod[u]
            cpoly = LaurentPoly(c)
            if not cpoly.has_nonneg_coeffs():
                raise NormalizationViolation(
                    f"negative KL structure constant at {GroupElement(self.group, z)!r}: {cpoly}"
                )
            out[GroupElement(self.group, z)] = cpoly
        return out

    def _own(self, w: GroupElement) -> None:
        if w.group is not self.group:
            raise GroupMismatch("element of a different group")


def _verify_column_shape(group: CoxeterGroup, x: int, col: dict) -> None:
    diag = col.get(x)
    if diag != {0: 1}:
        raise NormalizationViolation(f"h(x,x) != 1 at index {x}")
    for y, p in col.items():
        if y == x:
            continue
        if any(e < 1 for e in p) or any(c < 0 for c in p.values()):
            raise NormalizationViolation(
                f"h(y,x) outside v*Z>=0[v] at (y={y}, x={x}): {render_poly(p)}"
            )


def _verify_bar_invariance(group: CoxeterGroup, x: int, col: dict) -> None:
    bars = bar_std_table(group)
    acc: dict = {}
    for y, p in col.items():
        pb = pbar(p)
        by = bars[y]
        for z, r in by.items():
            tgt = acc.get(z)
            if tgt is None:
                tgt = acc[z] = {}
            padd_into(tgt, pmul(pb, r))
            if not tgt:
                del acc[z]
    if acc != col:
        raise NormalizationViolation(f"KL basis element at index {x} is not bar-invariant")


def build_kl_table(group: CoxeterGroup, side: str = "left", verify: bool = True) -> KLTable:
    """Build the full KL table by induction on length.

    ``side`` selects multiplication by B_s on the left (default) or on the
    right; the two must produce the same table, which a test asserts via
    h(y,x) = h(y^-1, x^-1).  ``verify`` keeps the build-time self-checks on
    (column shape always; bar-invariance of every column when True).
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    size = group.size
    length = group.length
    mult = group.lmult if side == "left" else group.rmult
    desc = group.ldesc if side == "left" else group.rdesc

    cols: list[dict] = [None] * size  # type: ignore[list-item]
    mu_cols: list[dict] = [None] * size  # type: ignore[list-item]
    cols[0] = {0: {0: 1}}
    mu_cols[0] = {}

    for x in range(1, size):
        g = (desc[x] & -desc[x]).bit_length() - 1
        w = mult[x][g]
        new: dict = {}
        for u, p in cols[w].items():
            su = mult[u][g]
            t = new.get(su)
            if t is None:
                t = new[su] = {}
            padd_into(t, p)
            if not t:
                del new[su]
            t = new.get(u)
            if t is None:
                t = new[u] = {}
            padd_into(t, p, shift=(1 if length[su] > length[u] else -1))
            if not t:
                del new[u]
        for y, m in mu_cols[w].items():
            if length[mult[y][g]] < length[y]:
                vec_add_into(new, cols[y], scale=-m)
        new = vec_clean(new)
        _verify_column_shape(group, x, new)
        if verify:
            _verify_bar_invariance(group, x, new)
        cols[x] = new
        mu_cols[x] = {y: p[1] for y, p in new.items() if y != x and 1 in p}

    return KLTable(group, cols, mu_cols, verified=verify)
