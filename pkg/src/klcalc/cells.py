"""Kazhdan-Lusztig preorders and cells, the a-function, and Duflo involutions.

The preorders are generated by single-generator KL products.  With
B_x B_s = B_{xs} + sum_{y: ys<y} mu(y,x) B_y when xs > x (and a multiple of
B_x otherwise), the right preorder is the reachability relation of the
directed graph with edges

    x -> xs            for every s with xs > x, and
    x -> y             for every y with mu(y,x) != 0 and ys < y;

so only the mu table is needed, never full KL products.  Left edges use
left multiplication, the two-sided graph takes both edge sets.  Cells are
the strongly connected components, and the order on cells is the partial
order induced on the condensation.

Orientation is pinned so that ``x <= y`` means "y is reachable from x";
the cell of the identity is then the unique minimum and the cell of the
longest element the unique maximum.  The same orientation makes the
nonvanishing criterion for functors acting on simples read
"theta_x L(y) != 0 iff x <=_R y^{-1}", which is the package's master
convention test (see the grothendieck module and the verify suites).

In symmetric groups the decomposition is also computable from the
Robinson-Schensted correspondence alone: equal shape classifies two-sided
cells, and sharing one of the two tableaux classifies left/right cells.
Which tableau goes with which side depends on the composition convention,
so it is calibrated at import-from-first-use time against the mu-graph of
S_3 and then fixed.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Literal

from .coxeter import CoxeterGroup, GroupElement, NotTypeA, TypeA, build_group
from .hecke import KLTable, build_kl_table
from .tableaux import Partition, rs_correspondence

CellKind = Literal["left", "right", "two-sided"]


class NoInvolution(RuntimeError):
    """A left/right cell without an involution; indicates a convention bug."""


class MultipleInvolutions(RuntimeError):
    """A left/right cell with several involutions; indicates a convention bug."""


class CellDecomposition:
    """Disjoint cells covering the group plus the partial order between them.

    Cells are tuples of element indices; cell k is ``cells[k]``.  The order
    is stored as closure bitmasks: bit j of ``above[i]`` says cell_i <= cell_j.
    Decompositions built from Robinson-Schensted data carry an order only
    for the two-sided kind (reversed dominance of shapes); left/right RS
    decompositions have ``above = None``.
    """

    def __init__(self, group: CoxeterGroup, kind: CellKind,
                 cells: list[tuple[int, ...]], above: list[int] | None):
        order = sorted(range(len(cells)), key=lambda k: cells[k][0])
        remap = {old: new for new, old in enumerate(order)}
        self.group = group
        self.kind = kind
        self.cells: list[tuple[int, ...]] = [cells[k] for k in order]
        if above is None:
            self.above = None
        else:
            self.above = [
                sum(1 << remap[j] for j in range(len(cells)) if above[order[i]] >> j & 1)
                for i in range(len(cells))
            ]
        self.cell_of: list[int] = [0] * group.size
        for k, members in enumerate(self.cells):
            for i in members:
                self.cell_of[i] = k

    def __len__(self) -> int:
        return len(self.cells)

    def cell_index(self, w: GroupElement) -> int:
        return self.cell_of[w.index]

    def cell_elements(self, k: int) -> list[GroupElement]:
        return [GroupElement(self.group, i) for i in self.cells[k]]

    def leq_cells(self, i: int, j: int) -> bool:
        if self.above is None:
            raise ValueError("this decomposition carries no order")
        return bool(self.above[i] >> j & 1)

    def leq(self, x: GroupElement, y: GroupElement) -> bool:
        """The preorder on elements: x <= y iff cell(x) <= cell(y)."""
        return self.leq_cells(self.cell_of[x.index], self.cell_of[y.index])

    def below_mask_elements(self, i: int) -> int:
        """Bitmask over *elements* x with cell(x) <= cell_i."""
        if self.above is None:
            raise ValueError("this decomposition carries no order")
        mask = 0
        for k in range(len(self.cells)):
            if self.above[k] >> i & 1:
                for e in self.cells[k]:
                    mask |= 1 << e
        return mask

    def partition_key(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(c) for c in self.cells)

    def shape(self, k: int) -> Partition:
        if not self.group.is_type_a:
            raise NotTypeA("cell shapes only exist for symmetric groups")
        return rs_correspondence(GroupElement(self.group, self.cells[k][0]))[0].shape


def _tarjan_scc(n: int, succ: list[list[int]]) -> list[list[int]]:
    """Iterative Tarjan; returns components as lists of vertices."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            for k in range(pi, len(succ[v])):
                u = succ[v][k]
                if index[u] == -1:
                    work[-1] = (v, k + 1)
                    work.append((u, 0))
                    advanced = True
                    break
                if on_stack[u] and index[u] < low[v]:
                    low[v] = index[u]
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    u = stack.pop()
                    on_stack[u] = False
                    comp.append(u)
                    if u == v:
                        break
                comps.append(comp)
    return comps


def _edges_from_mu(table: KLTable, kind: CellKind) -> list[list[int]]:
    group = table.group
    size, rank = group.size, group.rank
    length = group.length
    succ: list[set[int]] = [set() for _ in range(size)]
    sides = []
    if kind in ("right", "two-sided"):
        sides.append((group.rmult,))
    if kind in ("left", "two-sided"):
        sides.append((group.lmult,))
    for (mult,) in sides:
        for x in range(size):
            mu_x = table.mu_cols[x]
            for g in range(rank):
                xg = mult[x][g]
                if length[xg] > length[x]:
                    succ[x].add(xg)
                    for y, _m in mu_x.items():
                        if length[mult[y][g]] < length[y]:
                            succ[x].add(y)
    return [sorted(s - {x}) for x, s in enumerate(succ)]


def _closure_from_components(comps: list[list[int]], succ: list[list[int]],
                             cell_of: list[int]) -> list[int]:
    ncells = len(comps)
    cell_succ: list[set[int]] = [set() for _ in range(ncells)]
    for x, targets in enumerate(succ):
        cx = cell_of[x]
        for y in targets:
            cy = cell_of[y]
            if cy != cx:
                cell_succ[cx].add(cy)
    # Kahn order, then closure masks from the back
    indeg = [0] * ncells
    for s in cell_succ:
        for j in s:
            indeg[j] += 1
    queue = sorted(i for i in range(ncells) if indeg[i] == 0)
    topo: list[int] = []
    while queue:
        i = queue.pop(0)
        topo.append(i)
        for j in sorted(cell_succ[i]):
            indeg[j] -= 1
            if indeg[j] == 0:
                queue.append(j)
    above = [0] * ncells
    for i in reversed(topo):
        mask = 1 << i
        for j in cell_succ[i]:
            mask |= above[j]
        above[i] = mask
    return above


def cells_via_mu(table: KLTable, kind: CellKind) -> CellDecomposition:
    """Cells and their order from the mu-coefficient graph."""
    group = table.group
    succ = _edges_from_mu(table, kind)
    comps = _tarjan_scc(group.size, succ)
    cell_of = [0] * group.size
    for k, comp in enumerate(comps):
        for v in comp:
            cell_of[v] = k
    above = _closure_from_components(comps, succ, cell_of)
    cells = [tuple(sorted(c)) for c in comps]
    return CellDecomposition(group, kind, cells, above)


@lru_cache(maxsize=1)
def _right_cells_use_insertion_tableau() -> bool:
    """Calibrate: do right mu-cells of S_3 group elements by equal insertion
    tableau (True) or equal recording tableau (False)?"""
    group = build_group(TypeA(3))
    table = build_kl_table(group, verify=False)
    mu_right = cells_via_mu(table, "right").partition_key()
    by_p: dict = {}
    by_q: dict = {}
    for i in range(group.size):
        p, q = rs_correspondence(GroupElement(group, i))
        by_p.setdefault(p, []).append(i)
        by_q.setdefault(q, []).append(i)
    p_key = frozenset(frozenset(v) for v in by_p.values())
    q_key = frozenset(frozenset(v) for v in by_q.values())
    if mu_right == p_key and mu_right != q_key:
        return True
    if mu_right == q_key and mu_right != p_key:
        return False
    raise RuntimeError("could not calibrate tableau sides against the mu graph")


def cells_via_rs(group: CoxeterGroup, kind: CellKind) -> CellDecomposition:
    """Cells from the Robinson-Schensted correspondence (symmetric groups only).

    Two-sided cells come with their order (reversed dominance of shapes, so
    the identity's cell is minimal); left/right decompositions carry no order.
    """
    if not group.is_type_a:
        raise NotTypeA("Robinson-Schensted cells need a symmetric group")
    insertion_is_right = _right_cells_use_insertion_tableau()
    groups: dict = {}
    for i in range(group.size):
        p, q = rs_correspondence(GroupElement(group, i))
        if kind == "two-sided":
            key = p.shape
        elif kind == "right":
            key = p if insertion_is_right else q
        else:
            key = q if insertion_is_right else p
        groups.setdefault(key, []).append(i)
    cells = [tuple(sorted(members)) for members in groups.values()]
    if kind != "two-sided":
        return CellDecomposition(group, kind, cells, None)
    shapes = [rs_correspondence(GroupElement(group, c[0]))[0].shape for c in cells]
    above = [
        sum(
            1 << j
            for j in range(len(cells))
            if shapes[j].dominance_leq(shapes[i])
        )
        for i in range(len(cells))
    ]
    return CellDecomposition(group, kind, cells, above)


def a_value(w: GroupElement) -> int:
    """Lusztig's a-function on a symmetric group, via the conjugate shape.

    Computed as sum_i C(nu_i, 2) for nu the conjugate of the RS shape; the
    verify suites pin this formula against the two defining properties
    (constancy on two-sided cells, a = length on parabolic longest elements).
    """
    if not w.group.is_type_a:
        raise NotTypeA("the a-function is implemented for symmetric groups only")
    nu = rs_correspondence(w)[0].shape.conjugate()
    return sum(k * (k - 1) // 2 for k in nu)


def duflo_involution(cell_elements: list[GroupElement]) -> GroupElement:
    """The unique involution of a left (or right) cell of a symmetric group."""
    if not cell_elements:
        raise ValueError("empty cell")
    group = cell_elements[0].group
    if not group.is_type_a:
        raise NotTypeA("Duflo involutions are only classified here in type A")
    found = [w for w in cell_elements if group.inv[w.index] == w.index]
    if not found:
        raise NoInvolution(f"cell {cell_elements!r} contains no involution")
    if len(found) > 1:
        raise MultipleInvolutions(f"cell {cell_elements!r} contains several involutions")
    return found[0]
