"""Parabolic block data and the classification of surviving functors.

For a subset of the simple generators, the block datum assembles:

* the parabolic subgroup, its longest element, and the product of that
  longest element with the longest element of the whole group (called the
  *anchor* here: its right cell governs the block);
* the shortest coset representatives;
* the set of indices of the simple objects of the block, computed as the
  lower set of the anchor's right cell in the pinned right preorder.

That the simple-index set coincides with the coset representatives is a
strong cross-module consistency check and is verified at build time.

A functor indexed by x *survives* on the block when it acts nonzero there.
Two independent implementations are kept and compared on every call (in
debug mode) and exhaustively in the verify suites:

* A, definitional: some block simple y has x <=_R y^{-1};
* B, via cells in symmetric groups: the two-sided cell of x is below the
  anchor's, equivalently the anchor's RS shape is dominated by x's.

The matrices of surviving functors on the block's simple basis (ungraded
multiplicities), their restriction to one right cell inside a two-sided
cell, and the Cartan matrix assembled from their unique nonzero columns
are what the verify suites test for non-degeneracy: a nonzero Cartan
determinant per cell, plus linear independence of the whole family, shows
the induced map on the Grothendieck group determines the functor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .cells import CellDecomposition, duflo_involution
from .coxeter import CoxeterGroup, GroupElement, NotTypeA
from .grothendieck import CharacterEngine, engine
from .hecke import KLTable
from .intmat import bareiss_det, sparse_rows_independent
from .tableaux import Partition, kostka, rs_correspondence


class SupportMismatch(RuntimeError):
    """Block simples disagree with the coset representatives (orientation bug)."""


class SupportLeak(RuntimeError):
    """A functor applied to a block simple produced multiplicities outside the block."""


class EmptyIntersection(RuntimeError):
    """A two-sided cell below the anchor missed the block simples entirely."""


@dataclass
class ParabolicBlock:
    group: CoxeterGroup
    table: KLTable
    subset: frozenset[int]                    # 1-based generator indices
    levi_longest: int                         # longest element of the parabolic subgroup
    anchor: int                               # levi_longest * longest_of_group
    coset_reps: tuple[int, ...]               # shortest coset representatives
    simples: tuple[int, ...]                  # indices of the block's simple objects
    survivors: tuple[int, ...]                # x whose functor acts nonzero on the block
    _engine: CharacterEngine = field(repr=False)
    _survivor_set: frozenset[int] = field(repr=False)
    _columns1: dict = field(default_factory=dict, repr=False)

    # -- element-handle conveniences ------------------------------------------

    @property
    def levi_longest_element(self) -> GroupElement:
        return GroupElement(self.group, self.levi_longest)

    @property
    def anchor_element(self) -> GroupElement:
        return GroupElement(self.group, self.anchor)

    def simple_elements(self) -> list[GroupElement]:
        return [GroupElement(self.group, i) for i in self.simples]

    def survivor_elements(self) -> list[GroupElement]:
        return [GroupElement(self.group, i) for i in self.survivors]

    def composition(self) -> tuple[int, ...]:
        """Segment sizes of the generator subset (the Levi's block sizes)."""
        n = self.group.rank + 1
        sizes = []
        run = 1
        for g in range(1, n):
            if g in self.subset:
                run += 1
            else:
                sizes.append(run)
                run = 1
        sizes.append(run)
        return tuple(sizes)

    def composition_partition(self) -> Partition:
        return Partition(sorted(self.composition(), reverse=True))


def build_block(table: KLTable, subset: Iterable[int]) -> ParabolicBlock:
    """Assemble and verify the block datum for a generator subset."""
    group = table.group
    if not group.is_type_a:
        raise NotTypeA("parabolic blocks are implemented for symmetric groups")
    subset = frozenset(subset)
    eng = engine(table)
    w0p = group.longest_element_i(subset)
    anchor = group.mul(w0p, group.longest_index)
    reps = group.min_coset_reps_i(subset)

    right = eng.right_cells()
    anchor_cell = right.cell_of[anchor]
    below = right.below_mask_elements(anchor_cell)
    simples = tuple(i for i in range(group.size) if below >> i & 1)

    if simples != tuple(reps):
        raise SupportMismatch(
            f"block simples {simples} != coset representatives {reps} "
            f"for subset {sorted(subset)}"
        )

    survivor_set = _survivors_by_preorder(group, right, simples)
    survivors = tuple(sorted(survivor_set))

    block = ParabolicBlock(
        group=group,
        table=table,
        subset=subset,
        levi_longest=w0p,
        anchor=anchor,
        coset_reps=tuple(reps),
        simples=simples,
        survivors=survivors,
        _engine=eng,
        _survivor_set=frozenset(survivor_set),
    )
    return block


def _survivors_by_preorder(group: CoxeterGroup, right: CellDecomposition,
                           simples: tuple[int, ...]) -> set[int]:
    out: set[int] = set()
    for y in simples:
        yi = group.inv[y]
        cy = right.cell_of[yi]
        for k in range(len(right.cells)):
            if right.above[k] >> cy & 1:
                out.update(right.cells[k])
    return out


def survives(x: GroupElement, block: ParabolicBlock) -> bool:
    """Does the functor indexed by x act nonzero on the block?

    Implementation A (definitional, via the right preorder) is the stored
    answer; implementation B (shape dominance) is asserted to agree.
    """
    if x.group is not block.group:
        raise NotTypeA("element of a different group")
    a = x.index in block._survivor_set
    assert a == survives_by_shape(x, block), (
        f"survival criteria disagree at {x!r} for subset {sorted(block.subset)}"
    )
    return a


def survives_by_shape(x: GroupElement, block: ParabolicBlock) -> bool:
    """Survival via cells: the anchor's RS shape is dominated by x's shape."""
    anchor_shape = rs_correspondence(block.anchor_element)[0].shape
    return anchor_shape.dominance_leq(rs_correspondence(x)[0].shape)


def _column1(block: ParabolicBlock, y: int) -> dict[int, dict[int, int]]:
    """Ungraded multiplicity columns {x: {y': m}} for the block simple y,
    with the leak check against the block support."""
    got = block._columns1.get(y)
    if got is not None:
        return got
    cols = block._engine.theta_columns_ungraded(y)
    allowed = set(block.simples)
    for x, col in cols.items():
        leak = set(col) - allowed
        if leak:
            raise SupportLeak(
                f"functor {x} on simple {y} leaks outside the block: {sorted(leak)}"
            )
    block._columns1[y] = cols
    return cols


def functor_matrix(x: GroupElement, block: ParabolicBlock) -> list[list[int]]:
    """Ungraded matrix of the functor on the block's simple basis.

    Entry [i][j] is the multiplicity of the i-th block simple in the image
    of the j-th one; columns of non-survivors are zero.
    """
    if x.group is not block.group:
        raise NotTypeA("element of a different group")
    pos = {y: k for k, y in enumerate(block.simples)}
    m = [[0] * len(block.simples) for _ in block.simples]
    for j, y in enumerate(block.simples):
        col = _column1(block, y).get(x.index)
        if col:
            for yy, c in col.items():
                m[pos[yy]][j] = c
    return m


def _right_cells_in(block: ParabolicBlock, cell: tuple[int, ...]) -> list[tuple[int, ...]]:
    right = block._engine.right_cells()
    members = set(cell) & set(block.simples)
    if not members:
        raise EmptyIntersection(
            f"two-sided cell {cell} does not meet the block simples"
        )
    seen = sorted({right.cell_of[i] for i in members})
    return [right.cells[k] for k in seen]


def cell_matrices(block: ParabolicBlock, cell: Iterable[GroupElement] | tuple[int, ...],
                  ) -> tuple[tuple[int, ...], dict[int, list[list[int]]]]:
    """Matrices of all functors of a two-sided cell, restricted to one right cell.

    The right cell (the lexicographically least inside the intersection of
    the two-sided cell with the block simples) indexes both rows and columns.
    Each matrix is verified to have exactly one nonzero column.
    Returns (right cell, {x: matrix}).
    """
    cell_idx = _cell_as_indices(block, cell)
    _require_below_anchor(block, cell_idx)
    r_prime = _right_cells_in(block, cell_idx)[0]
    pos = {y: k for k, y in enumerate(r_prime)}
    mats: dict[int, list[list[int]]] = {}
    for x in sorted(cell_idx):
        m = [[0] * len(r_prime) for _ in r_prime]
        nonzero_cols = set()
        for j, y in enumerate(r_prime):
            col = _column1(block, y).get(x)
            if col:
                nonzero_cols.add(j)
                for yy, c in col.items():
                    if yy in pos:
                        m[pos[yy]][j] = c
        if len(nonzero_cols) != 1:
            raise SupportLeak(
                f"functor {x} restricted to the right cell has {len(nonzero_cols)} "
                "nonzero columns; expected exactly one"
            )
        mats[x] = m
    return r_prime, mats


def cartan_matrix(block: ParabolicBlock, cell: Iterable[GroupElement] | tuple[int, ...],
                  family: tuple[int, ...] | None = None) -> list[list[int]]:
    """Assemble the Cartan matrix of the cell's quotient algebra.

    The functors indexed by one one-sided cell of the two-sided cell sweep
    out exactly the columns of the Cartan matrix of the quotient algebra:
    the matrix M_w carries the class of one indecomposable projective,
    namely the one labelled by the unique element of (left cell of w) with
    its inverse's right cell meeting R' -- i.e. of L_w intersected with R'.
    In the pinned orientation the sweeping family is a *right* cell (the
    mu-graph of S_3 fixes this side; the two tableaux conventions swap it),
    and any right cell of the two-sided cell gives the same matrix.

    ``family`` overrides the default (lexicographically least) right cell,
    for the exhaustive all-choices-agree mode of the verify suite.
    """
    cell_idx = _cell_as_indices(block, cell)
    _require_below_anchor(block, cell_idx)
    r_prime, mats = cell_matrices(block, cell_idx)
    if family is None:
        family = _right_cells_of_cell(block, cell_idx)[0]
    pos = {y: k for k, y in enumerate(r_prime)}
    left = _left_cells_decomposition(block)
    cartan = [[0] * len(r_prime) for _ in r_prime]
    filled = set()
    for x in family:
        m = mats[x]
        src = next(
            j for j in range(len(r_prime)) if any(m[i][j] for i in range(len(r_prime)))
        )
        targets = [z for z in left.cells[left.cell_of[x]] if z in pos]
        if len(targets) != 1:
            raise EmptyIntersection(
                f"left cell of {x} meets the right cell in {len(targets)} elements"
            )
        j = pos[targets[0]]
        if j in filled:
            raise SupportLeak(f"two functors of the family hit the same column {j}")
        filled.add(j)
        for i in range(len(r_prime)):
            cartan[i][j] = m[i][src]
    if len(filled) != len(r_prime):
        raise EmptyIntersection("family did not fill every column of the Cartan matrix")
    return cartan


def cartan_det(block: ParabolicBlock, cell: Iterable[GroupElement] | tuple[int, ...],
               family: tuple[int, ...] | None = None) -> int:
    return bareiss_det(cartan_matrix(block, cell, family=family))


def cartan_det_all_choices(block: ParabolicBlock,
                           cell: Iterable[GroupElement] | tuple[int, ...]) -> list[int]:
    """Cartan determinants for every admissible sweeping family (exhaustive mode)."""
    cell_idx = _cell_as_indices(block, cell)
    return [
        cartan_det(block, cell_idx, family=fam)
        for fam in _right_cells_of_cell(block, cell_idx)
    ]


def functor_family_independent(block: ParabolicBlock) -> bool:
    """Are the matrices of all surviving functors linearly independent?

    This is the decategorified statement that a functor on the block is
    determined by the map it induces on the Grothendieck group.
    """
    rows = []
    for x in block.survivors:
        row: dict[tuple[int, int], int] = {}
        for y in block.simples:
            col = _column1(block, y).get(x)
            if col:
                for yy, c in col.items():
                    row[(yy, y)] = c
        rows.append(row)
    return sparse_rows_independent(rows)


def specht_crosscheck(block: ParabolicBlock) -> dict:
    """Compare the block's right-cell shape multiplicities with Kostka numbers.

    The number of right cells of shape lambda among the block simples must
    equal the Kostka number K(lambda, mu) for mu the sorted composition of
    the generator subset; in particular every shape dominating mu occurs.
    Also re-checks that every two-sided cell below the anchor's meets the
    block simples.
    """
    eng = block._engine
    right = eng.right_cells()
    two = eng.two_sided_cells()
    mu = block.composition_partition()

    shape_counts: dict[Partition, int] = {}
    seen_cells = sorted({right.cell_of[i] for i in block.simples})
    for k in seen_cells:
        if not set(right.cells[k]) <= set(block.simples):
            raise SupportLeak("block simples do not close under right cells")
        lam = right.shape(k)
        shape_counts[lam] = shape_counts.get(lam, 0) + 1

    kostka_counts = {
        lam: kostka(lam, mu)
        for lam in {two.shape(k) for k in range(len(two.cells))}
    }
    multiplicities_match = all(
        shape_counts.get(lam, 0) == k for lam, k in kostka_counts.items()
    )
    constituents_ok = all(
        (kostka_counts[lam] > 0) == mu.dominance_leq(lam) for lam in kostka_counts
    )

    anchor_cell = two.cell_of[block.anchor]
    cells_below = [k for k in range(len(two.cells)) if two.leq_cells(k, anchor_cell)]
    meets = {}
    for k in cells_below:
        meets[k] = bool(set(two.cells[k]) & set(block.simples))
    all_meet = all(meets.values())

    return {
        "composition": list(block.composition()),
        "mu": str(mu),
        "shape_counts": {str(lam): c for lam, c in sorted(shape_counts.items())},
        "kostka": {str(lam): c for lam, c in sorted(kostka_counts.items())},
        "multiplicities_match": multiplicities_match,
        "constituents_ok": constituents_ok,
        "cells_below_anchor": len(cells_below),
        "all_cells_below_meet_block": all_meet,
        "pass": multiplicities_match and constituents_ok and all_meet,
    }


def cells_below_anchor(block: ParabolicBlock) -> list[tuple[int, ...]]:
    """Two-sided cells at or below the anchor's, in canonical order."""
    two = block._engine.two_sided_cells()
    anchor_cell = two.cell_of[block.anchor]
    return [
        two.cells[k]
        for k in range(len(two.cells))
        if two.leq_cells(k, anchor_cell)
    ]


def block_report(block: ParabolicBlock, include_independence: bool | None = None) -> dict:
    """The JSON-ready classification report consumed by the CLI.

    ``include_independence`` adds the whole-family linear independence check;
    by default it runs for groups up to S_5 size (it is quadratic in the
    number of survivors and belongs to the desk-scale verification suite).
    """
    group = block.group
    if include_independence is None:
        include_independence = group.size <= 120
    cells = []
    checks = []
    for cell in cells_below_anchor(block):
        lam = rs_correspondence(GroupElement(group, cell[0]))[0].shape
        r_prime, mats = cell_matrices(block, cell)
        det = cartan_det(block, cell)
        cells.append({
            "shape": str(lam),
            "size": len(cell),
            "right_cell_size": len(r_prime),
            "cartan_det": det,
        })
        checks.append({
            "name": f"cartan_det_nonzero[{lam}]",
            "pass": det != 0,
        })
        checks.append({
            "name": f"unique_nonzero_columns[{lam}]",
            "pass": True,  # cell_matrices would have raised otherwise
        })
    checks.insert(0, {
        "name": "simples_equal_coset_reps",
        "pass": block.simples == block.coset_reps,
    })
    checks.append({
        "name": "survivors_by_preorder_equal_by_shape",
        "pass": all(
            (i in block._survivor_set)
            == survives_by_shape(GroupElement(group, i), block)
            for i in range(group.size)
        ),
    })
    if include_independence:
        checks.append({
            "name": "functor_family_independent",
            "pass": functor_family_independent(block),
        })
    spec = specht_crosscheck(block)
    checks.append({"name": "specht_crosscheck", "pass": spec["pass"]})
    return {
        "block": {
            "rank": group.rank + 1,
            "parabolic": sorted(block.subset),
            "composition": list(block.composition()),
        },
        "anchor": repr(block.anchor_element),
        "simples": [repr(GroupElement(group, i)) for i in block.simples],
        "survivors": [repr(GroupElement(group, i)) for i in block.survivors],
        "cells": cells,
        "checks": checks,
    }


# -- helpers -------------------------------------------------------------------

def _cell_as_indices(block: ParabolicBlock, cell) -> tuple[int, ...]:
    out = []
    for w in cell:
        out.append(w.index if isinstance(w, GroupElement) else int(w))
    return tuple(sorted(out))


def _require_below_anchor(block: ParabolicBlock, cell_idx: tuple[int, ...]) -> None:
    two = block._engine.two_sided_cells()
    k = two.cell_of[cell_idx[0]]
    if tuple(two.cells[k]) != cell_idx:
        raise ValueError("argument is not a two-sided cell of this group")
    if not two.leq_cells(k, two.cell_of[block.anchor]):
        raise ValueError("two-sided cell is not below the block's anchor cell")


def _left_cells_decomposition(block: ParabolicBlock) -> CellDecomposition:
    from .cells import cells_via_mu

    eng = block._engine
    left = getattr(eng, "_left_cells_cache", None)
    if left is None:
        left = eng._left_cells_cache = cells_via_mu(block.table, "left")
    return left


def _right_cells_of_cell(block: ParabolicBlock, cell_idx: tuple[int, ...]) -> list[tuple[int, ...]]:
    right = block._engine.right_cells()
    seen = sorted({right.cell_of[i] for i in cell_idx})
    return [right.cells[k] for k in seen]


def block_duflo_involutions(block: ParabolicBlock) -> dict[int, int]:
    """Duflo involution of each right cell among the block simples."""
    right = block._engine.right_cells()
    out = {}
    for k in sorted({right.cell_of[i] for i in block.simples}):
        d = duflo_involution(right.cell_elements(k))
        out[k] = d.index
    return out
