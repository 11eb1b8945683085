"""Graded characters: Vermas, projectives, simples, and the functor action.

The graded Grothendieck group of the principal block is identified with the
Hecke algebra: the class of the standard (Verma) object indexed by w is H_w,
the grading shift <1> is multiplication by v, and the indecomposable functor
indexed by x acts by right multiplication with the KL basis element B_x.
Under the degree-zero-head normalization of graded lifts this forces

    [P(w)] = B_w,                (projectives expand in standards by column w)
    [Delta(w)] = H_w = sum_y h(w, y) [L(y)],   (standards expand in simples by row w)

and the classes of simples are read off by inverting the unitriangular
h-matrix with back-substitution; no division is ever needed.

Two computation paths for the functor action are provided and cross-checked
by the tests:

* a direct path that right-multiplies an H-expansion by B_x, walking the
  canonical words of the support (used by ``apply_functor``);
* a batched recursion over all x at once for a fixed simple, following the
  KL recursion B_x = B_{xs} B_s - sum mu(z, xs) B_z, which the verify
  suites use for exhaustive scans (``theta_tables``).

Classes of actual modules must have nonnegative coefficient polynomials;
whenever an operation promises a module class this is asserted and a
violation raises :class:`NegativeCoefficient` (it would mean a convention
bug, and nothing downstream could be trusted).
"""

from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np

from .cells import CellDecomposition, a_value, cells_via_mu
from .coxeter import CoxeterGroup, GroupElement, GroupMismatch
from .hecke import HeckeElement, KLTable, padd_into, vec_add_into, vec_clean
from .laurent import LaurentPoly, pmul, render_poly


class NegativeCoefficient(RuntimeError):
    """A promised module class came out with a negative coefficient."""


class NotStrictlyBelow(ValueError):
    """Degree-bound check called on a pair that is not strictly two-sided ordered."""


class GradedClass:
    """A class in the graded Grothendieck group, expanded in shifted simples.

    ``vec`` maps element index -> raw polynomial dict; the coefficient of
    v^k at y is the multiplicity of the simple L(y) shifted by k.
    """

    __slots__ = ("group", "vec")

    def __init__(self, group: CoxeterGroup, vec: dict | None = None):
        self.group = group
        self.vec = vec_clean(vec or {})

    def coeff(self, y: GroupElement) -> LaurentPoly:
        if y.group is not self.group:
            raise GroupMismatch("element of a different group")
        return LaurentPoly(self.vec.get(y.index, {}))

    def items(self) -> Iterator[tuple[GroupElement, LaurentPoly]]:
        for i in sorted(self.vec):
            yield GroupElement(self.group, i), LaurentPoly(self.vec[i])

    def support(self) -> list[GroupElement]:
        return [GroupElement(self.group, i) for i in sorted(self.vec)]

    def is_zero(self) -> bool:
        return not self.vec

    def has_nonneg_coeffs(self) -> bool:
        return all(c > 0 for p in self.vec.values() for c in p.values())

    def eval_at_one(self) -> dict[int, int]:
        """Ungraded multiplicities, keyed by element index."""
        return {i: sum(p.values()) for i, p in self.vec.items()}

    def degree_bounds(self) -> tuple[int, int]:
        exps = [e for p in self.vec.values() for e in p]
        if not exps:
            raise ValueError("degree bounds of the zero class")
        return (min(exps), max(exps))

    def graded_length(self) -> int:
        lo, hi = self.degree_bounds()
        return hi - lo + 1

    def __add__(self, other: "GradedClass") -> "GradedClass":
        if other.group is not self.group:
            raise GroupMismatch("classes over different groups")
        d = {i: dict(p) for i, p in self.vec.items()}
        vec_add_into(d, other.vec)
        return GradedClass(self.group, d)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GradedClass)
            and other.group is self.group
            and other.vec == self.vec
        )

    def __hash__(self):
        return hash((id(self.group),
                     frozenset((i, frozenset(p.items())) for i, p in self.vec.items())))

    def to_json(self) -> list[dict]:
        return [
            {"element": repr(GroupElement(self.group, i)), "coeff": render_poly(self.vec[i])}
            for i in sorted(self.vec)
        ]

    def __repr__(self) -> str:
        if not self.vec:
            return "0"
        bits = [
            f"({render_poly(self.vec[i])})*[L({GroupElement(self.group, i)!r})]"
            for i in sorted(self.vec)
        ]
        return " + ".join(bits)


class CharacterEngine:
    """Caching layer for one KL table: simple classes, functor tables, cells."""

    def __init__(self, table: KLTable):
        self.table = table
        self.group = table.group
        self._lvec: dict[int, dict] = {}
        self._theta: dict[int, list] = {}
        self._rows1: list[dict] | None = None
        self._h1: np.ndarray | None = None
        self._rperm: np.ndarray | None = None
        self._lvec1: np.ndarray | None = None
        self._two_sided: CellDecomposition | None = None
        self._right: CellDecomposition | None = None

    def rows_ungraded(self) -> list[dict]:
        """h(w, y) evaluated at v = 1: rows_ungraded()[w] maps y to an int."""
        if self._rows1 is None:
            self._rows1 = [
                {y: sum(p.values()) for y, p in row.items()}
                for row in self.table.rows()
            ]
        return self._rows1

    def _h1_array(self) -> np.ndarray:
        """Dense ungraded h as int64, indexed [w, y]."""
        if self._h1 is None:
            size = self.group.size
            a = np.zeros((size, size), dtype=np.int64)
            for w, row in enumerate(self.rows_ungraded()):
                for y, c in row.items():
                    a[w, y] = c
            self._h1 = a
        return self._h1

    # -- cells (cached) --------------------------------------------------------

    def two_sided_cells(self) -> CellDecomposition:
        if self._two_sided is None:
            self._two_sided = cells_via_mu(self.table, "two-sided")
        return self._two_sided

    def right_cells(self) -> CellDecomposition:
        if self._right is None:
            self._right = cells_via_mu(self.table, "right")
        return self._right

    # -- basis conversion --------------------------------------------------------

    def to_simples(self, hvec: dict) -> dict:
        """H-coordinates -> simple-coordinates via L_y = sum_w c_w h(w, y)."""
        rows = self.table.rows()
        out: dict = {}
        for w, c in hvec.items():
            for y, h in rows[w].items():
                tgt = out.get(y)
                if tgt is None:
                    tgt = out[y] = {}
                padd_into(tgt, pmul(c, h))
                if not tgt:
                    del out[y]
        return out

    def lvec(self, y: int) -> dict:
        """H-coordinates of the simple class indexed by y, by back-substitution
        from [L(y)] = [Delta(y)] - sum_{y' > y} h(y, y') [L(y')]."""
        got = self._lvec.get(y)
        if got is not None:
            return got
        out: dict = {y: {0: 1}}
        for x, h in self.table.rows()[y].items():
            if x == y:
                continue
            vec_add_into(out, self._lvec_scaled(x, h), scale=-1)
        out = vec_clean(out)
        self._lvec[y] = out
        return out

    def _lvec_scaled(self, y: int, poly: dict) -> dict:
        base = self.lvec(y)
        return {i: pmul(p, poly) for i, p in base.items()}

    # -- spec operations ---------------------------------------------------------

    def verma_class(self, w: int) -> GradedClass:
        return GradedClass(self.group, {y: dict(p) for y, p in self.table.rows()[w].items()})

    def projective_class(self, w: int) -> GradedClass:
        return GradedClass(self.group, self.to_simples(self.table.cols[w]))

    def simple_class(self, y: int) -> HeckeElement:
        return HeckeElement(self.group, {i: dict(p) for i, p in self.lvec(y).items()})

    def right_mult_kl(self, hvec: dict, x: int) -> dict:
        """hvec * B_x in the standard basis, via c*H_z walks over z <= x."""
        group = self.group
        memo: dict[int, dict] = {0: hvec}
        col = self.table.cols[x]
        order = sorted(col, key=lambda z: group.length[z])
        out: dict = {}
        for z in order:
            vz = memo.get(z)
            if vz is None:
                word = group.canonical_word(z)
                parent = group.rmult[z][word[-1]]
                vz = memo[z] = _rstep_std_vec(group, memo[parent], word[-1])
            h = col[z]
            for i, q in vz.items():
                tgt = out.get(i)
                if tgt is None:
                    tgt = out[i] = {}
                padd_into(tgt, pmul(q, h))
                if not tgt:
                    del out[i]
        return out

    def apply_functor(self, cls, x: int) -> GradedClass:
        """Act with the functor indexed by x; accepts a GradedClass (simple
        coordinates) or a HeckeElement (standard coordinates)."""
        if isinstance(cls, GradedClass):
            hvec: dict = {}
            for y, p in cls.vec.items():
                vec_add_into(hvec, self._lvec_scaled(y, p))
            hvec = vec_clean(hvec)
            input_is_module = cls.has_nonneg_coeffs()
        elif isinstance(cls, HeckeElement):
            hvec = cls.vec
            input_is_module = GradedClass(self.group, self.to_simples(hvec)).has_nonneg_coeffs()
        else:
            raise TypeError("apply_functor expects a GradedClass or HeckeElement")
        result = GradedClass(self.group, self.to_simples(self.right_mult_kl(hvec, x)))
        if input_is_module and not result.has_nonneg_coeffs():
            raise NegativeCoefficient(
                f"functor {GroupElement(self.group, x)!r} produced a negative multiplicity"
            )
        return result

    # -- batched functor-on-simple tables ------------------------------------------

    def theta_tables(self, y: int) -> list:
        """H-coordinates of [theta_x L(y)] for every x, as a list indexed by x.

        Follows the KL recursion on the right: for s the minimal right descent
        of x and u = xs,  T(x) = T(u) * B_s - sum_{z: zs<z} mu(z,u) T(z).
        Zero classes stay empty dicts, so the scan only pays for the nonzero
        region of the table.
        """
        got = self._theta.get(y)
        if got is not None:
            return got
        group = self.group
        size = group.size
        rmult, length, rdesc = group.rmult, group.length, group.rdesc
        mu_cols = self.table.mu_cols
        T: list = [None] * size
        T[0] = self.lvec(y)
        for x in range(1, size):
            g = (rdesc[x] & -rdesc[x]).bit_length() - 1
            u = rmult[x][g]
            base = T[u]
            if not base:
                vec: dict = {}
            else:
                vec = _rstep_kl_gen(group, base, g)
            for z, m in mu_cols[u].items():
                if length[rmult[z][g]] < length[z]:
                    tz = T[z]
                    if tz:
                        vec_add_into(vec, tz, scale=-m)
            T[x] = vec_clean(vec)
        self._theta[y] = T
        return T

    def _rperm_array(self) -> np.ndarray:
        if self._rperm is None:
            self._rperm = np.array(self.group.rmult, dtype=np.intp).T.copy()
        return self._rperm

    def _lvec1_array(self) -> np.ndarray:
        """Ungraded simple classes in H-coordinates: column y is [L(y)] at v = 1.

        This is the inverse transpose of the ungraded h-matrix.  The float
        inverse is rounded and then *verified exactly* against the defining
        identity; on any mismatch (never seen at desk scale) it falls back
        to exact integer back-substitution.
        """
        if self._lvec1 is None:
            h1 = self._h1_array()
            size = h1.shape[0]
            eye = np.eye(size, dtype=np.int64)
            try:
                cand = np.rint(np.linalg.inv(h1.T.astype(np.float64))).astype(np.int64)
            except np.linalg.LinAlgError:
                cand = None
            if cand is None or not np.array_equal(cand @ h1.T, eye):
                cand = np.zeros((size, size), dtype=np.int64)
                rows1 = self.rows_ungraded()
                for y in range(size - 1, -1, -1):
                    cand[y, y] = 1
                    for x, c in rows1[y].items():
                        if x != y:
                            cand[:, y] -= c * cand[:, x]
                if not np.array_equal(cand @ h1.T, eye):
                    raise NegativeCoefficient("simple-class inversion failed; table corrupt")
            self._lvec1 = cand
        return self._lvec1

    def _theta_rows_ungraded(self, y: int) -> np.ndarray:
        """H-coordinates of every [theta_x L(y)] at v = 1, as an int64 array
        indexed [x, w].  Same recursion as :meth:`theta_tables`, vectorized;
        at v = 1 the generator step is simply c[j] + c[j s]."""
        group = self.group
        size = group.size
        rmult, length, rdesc = group.rmult, group.length, group.rdesc
        mu_cols = self.table.mu_cols
        rperm = self._rperm_array()
        T = np.zeros((size, size), dtype=np.int64)
        T[0] = self._lvec1_array()[:, y]
        for x in range(1, size):
            g = (rdesc[x] & -rdesc[x]).bit_length() - 1
            u = rmult[x][g]
            row = T[u][rperm[g]]
            row += T[u]
            for z, m in mu_cols[u].items():
                if length[rmult[z][g]] < length[z]:
                    row -= m * T[z]
            T[x] = row
        return T

    def theta_columns_ungraded(self, y: int, xs: Iterable[int] | None = None,
                               ) -> dict[int, dict[int, int]]:
        """Ungraded simple-multiplicities {x: {y': m}} of [theta_x L(y)].

        ``xs`` restricts to the given functor indices (default: every x with
        a nonzero class).  The basis change to simples runs through a float
        matrix product whose integer exactness is guarded by a magnitude
        bound; S_7 data sits orders of magnitude below the bound.
        """
        T = self._theta_rows_ungraded(y)
        h1 = self._h1_array()
        if xs is None:
            sel = np.flatnonzero(np.abs(T).sum(axis=1))
        else:
            sel = np.array(sorted(set(xs)), dtype=np.intp)
        if sel.size == 0:
            return {}
        block = T[sel]
        bound = float(np.abs(block).max() or 1) * float(h1.max() or 1) * T.shape[0]
        if bound >= 2.0**52:
            l_block = block.astype(object) @ h1.astype(object)  # exact, slow
        else:
            l_block = np.rint(block.astype(np.float64) @ h1.astype(np.float64)).astype(np.int64)
        out: dict[int, dict[int, int]] = {}
        for k, x in enumerate(sel):
            row = l_block[k]
            nz = np.flatnonzero(row)
            if nz.size:
                if int(row[nz].min()) < 0:
                    raise NegativeCoefficient(
                        f"negative ungraded multiplicity at (x={int(x)}, y={y})"
                    )
                out[int(x)] = {int(i): int(row[i]) for i in nz}
        return out

    def theta_on_simple(self, x: int, y: int) -> GradedClass:
        result = GradedClass(self.group, self.to_simples(self.theta_tables(y)[x]))
        if not result.has_nonneg_coeffs():
            raise NegativeCoefficient(
                "functor applied to a simple produced a negative multiplicity "
                f"at (x={x}, y={y})"
            )
        return result

    def theta_on_simple_ungraded(self, x: int, y: int) -> dict[int, int]:
        """Ungraded simple-multiplicities of [theta_x L(y)], keyed by index."""
        return self.theta_columns_ungraded(y, xs=(x,)).get(x, {})

    # -- degree bounds ------------------------------------------------------------

    def degree_bounds_check(self, x: int, z: int) -> tuple[bool, int | None]:
        """For x strictly below z in the two-sided order: do all degrees of the
        (nonzero) class of theta_x L(z) lie strictly between -a(z) and a(z)?

        Returns (ok, graded_length); a zero class passes vacuously with
        graded length None.
        """
        two = self.two_sided_cells()
        cx, cz = two.cell_of[x], two.cell_of[z]
        if cx == cz or not two.leq_cells(cx, cz):
            raise NotStrictlyBelow("need x strictly below z in the two-sided order")
        cls = self.theta_on_simple(x, z)
        if cls.is_zero():
            return True, None
        lo, hi = cls.degree_bounds()
        a = a_value(GroupElement(self.group, z))
        return (-a < lo and hi < a), hi - lo + 1

    # -- parabolic Verma Euler characteristic ----------------------------------------

    def parabolic_verma_euler(self, subset: Iterable[int]) -> GradedClass:
        """Alternating sum of shifted Verma classes over the parabolic subgroup,
        expanded in simples: the class of the parabolic Verma of the identity.

        Asserts the result is supported on the minimal coset representatives
        with coefficients in Z>=0[v].
        """
        group = self.group
        subset = frozenset(subset)
        hvec = {
            w: {group.length[w]: (-1) ** group.length[w]}
            for w in group.parabolic_elements(subset)
        }
        cls = GradedClass(group, self.to_simples(hvec))
        reps = set(group.min_coset_reps_i(subset))
        for i, p in cls.vec.items():
            if i not in reps:
                raise NegativeCoefficient(
                    f"parabolic Euler class leaks outside the coset representatives at index {i}"
                )
            if any(c < 0 for c in p.values()) or any(e < 0 for e in p):
                raise NegativeCoefficient(
                    f"parabolic Euler class has a coefficient outside Z>=0[v] at index {i}"
                )
        return cls


def _rstep_std_vec(group: CoxeterGroup, vec: dict, g: int) -> dict:
    """vec * H_s on a raw standard-basis vector."""
    rmult, length = group.rmult, group.length
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


def _rstep_kl_gen(group: CoxeterGroup, vec: dict, g: int) -> dict:
    """vec * B_s = vec * (H_s + v H_e) on a raw standard-basis vector."""
    rmult, length = group.rmult, group.length
    out: dict = {}
    for u, p in vec.items():
        u2 = rmult[u][g]
        t = out.get(u2)
        if t is None:
            t = out[u2] = {}
        padd_into(t, p)
        if not t:
            del out[u2]
        t = out.get(u)
        if t is None:
            t = out[u] = {}
        padd_into(t, p, shift=(1 if length[u2] > length[u] else -1))
        if not t:
            del out[u]
    return out


# ---------------------------------------------------------------------------
# module-level API on element handles
# ---------------------------------------------------------------------------

def engine(table: KLTable) -> CharacterEngine:
    """The cached character engine attached to a table."""
    eng = getattr(table, "_characters", None)
    if eng is None:
        eng = table._characters = CharacterEngine(table)
    return eng


def verma_class(table: KLTable, w: GroupElement) -> GradedClass:
    return engine(table).verma_class(w.index)


def projective_class(table: KLTable, w: GroupElement) -> GradedClass:
    return engine(table).projective_class(w.index)


def simple_class(table: KLTable, y: GroupElement) -> HeckeElement:
    return engine(table).simple_class(y.index)


def apply_functor(table: KLTable, cls, x: GroupElement) -> GradedClass:
    return engine(table).apply_functor(cls, x.index)


def theta_on_simple(table: KLTable, x: GroupElement, y: GroupElement) -> GradedClass:
    return engine(table).theta_on_simple(x.index, y.index)


def degree_bounds_check(table: KLTable, x: GroupElement, z: GroupElement) -> bool:
    ok, _ = engine(table).degree_bounds_check(x.index, z.index)
    return ok


def parabolic_verma_euler(table: KLTable, subset: Iterable[int]) -> GradedClass:
    return engine(table).parabolic_verma_euler(subset)
