"""Core-distances, mutual reachability, the MST and dc-dist queries.

All outputs are pure functions of the input points. Edge ties are broken by
the strict total order (weight, min index, max index); under a strict order
the minimum spanning tree is unique, so Kruskal and Prim return the same
tree. dc-dist rows are produced one source at a time and no n x n dc-dist
matrix is kept around.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order
from scipy.spatial.distance import cdist

from ..config import settings
from ..errors import InputError, ParameterError
from ..models import CoreDistances, MrdMst, MstAlgorithm, PointSet

logger = logging.getLogger(__name__)


def _row_blocks(n: int, block_size: int | None) -> Iterator[tuple[int, int]]:
    size = block_size or settings.row_block_size
    for start in range(0, n, size):
        yield start, min(start + size, n)


def euclidean_rows(ps: PointSet, start: int, stop: int) -> NDArray[np.float64]:
    """Euclidean distances from points ``start..stop-1`` to every point."""
    return cdist(ps.points[start:stop], ps.points)


def pairwise_euclidean(ps: PointSet) -> NDArray[np.float64]:
    """Full n x n Euclidean distance matrix (symmetric, zero diagonal)."""
    return cdist(ps.points, ps.points)


def check_mu(n: int, mu: int, include_self: bool = False) -> None:
    """Raise ParameterError unless mu is a valid neighborhood size for n points."""
    upper = n if include_self else n - 1
    if mu < 1 or mu > upper:
        convention = "counting the point itself" if include_self else "excluding the point itself"
        raise ParameterError(
            f"mu={mu} violates 1 <= mu <= {upper} for n={n} points ({convention})"
        )


def core_distances(
    ps: PointSet,
    mu: int,
    include_self: bool = False,
    block_size: int | None = None,
) -> CoreDistances:
    """Distance from every point to its mu-th nearest neighbor.

    By default the point itself is not a neighbor, so kappa[i] == 0 exactly
    when point i has at least mu duplicates among the other points.
    """
    check_mu(ps.n, mu, include_self)
    kappa = np.empty(ps.n, dtype=np.float64)
    kth = mu - 1
    for start, stop in _row_blocks(ps.n, block_size):
        block = euclidean_rows(ps, start, stop)
        if not include_self:
            block[np.arange(stop - start), np.arange(start, stop)] = np.inf
        kappa[start:stop] = np.partition(block, kth, axis=1)[:, kth]
    kappa.setflags(write=False)
    return CoreDistances(kappa=kappa, mu=mu, include_self=include_self)


def _check_sizes(ps: PointSet, cd: CoreDistances) -> None:
    if cd.n != ps.n:
        raise InputError(f"Core-distances cover {cd.n} points but the point set has {ps.n}")


def mutual_reachability_rows(
    ps: PointSet, cd: CoreDistances, start: int, stop: int
) -> NDArray[np.float64]:
    """Rows ``start..stop-1`` of the mutual reachability matrix."""
    rows = euclidean_rows(ps, start, stop)
    np.maximum(rows, cd.kappa[start:stop, None], out=rows)
    np.maximum(rows, cd.kappa[None, :], out=rows)
    rows[np.arange(stop - start), np.arange(start, stop)] = 0.0
    return rows


def mutual_reachability(ps: PointSet, cd: CoreDistances) -> NDArray[np.float64]:
    """d_m(i, j) = max(kappa[i], kappa[j], euclidean(i, j)); zero diagonal."""
    _check_sizes(ps, cd)
    return mutual_reachability_rows(ps, cd, 0, ps.n)


class UnionFind:
    """Disjoint sets over 0..n-1 with union by size and path halving."""

    def __init__(self, n: int):
        self.parents: list[int] = list(range(n))
        self.sizes: list[int] = [1] * n

    def root(self, v: int) -> int:
        parents = self.parents
        while parents[v] != v:
            parents[v] = parents[parents[v]]
            v = parents[v]
        return v

    def join(self, v1: int, v2: int) -> bool:
        """Merge the sets of v1 and v2; False if they were already one set."""
        r1 = self.root(v1)
        r2 = self.root(v2)
        if r1 == r2:
            return False
        if self.sizes[r1] < self.sizes[r2]:
            r1, r2 = r2, r1
        self.parents[r2] = r1
        self.sizes[r1] += self.sizes[r2]
        return True


def _sorted_tree(n: int, a: list[int], b: list[int], w: list[float]) -> MrdMst:
    lo = np.minimum(np.asarray(a, dtype=np.intp), np.asarray(b, dtype=np.intp))
    hi = np.maximum(np.asarray(a, dtype=np.intp), np.asarray(b, dtype=np.intp))
    weight = np.asarray(w, dtype=np.float64)
    order = np.lexsort((hi, lo, weight))
    return MrdMst(n=n, a=lo[order], b=hi[order], weight=weight[order])


def kruskal_mst(ps: PointSet, cd: CoreDistances) -> MrdMst:
    """Kruskal over the complete d_m graph in strict (weight, a, b) order."""
    n = ps.n
    iu, ju = np.triu_indices(n, k=1)
    weight = mutual_reachability(ps, cd)[iu, ju]
    order = np.lexsort((ju, iu, weight))
    forest = UnionFind(n)
    a: list[int] = []
    b: list[int] = []
    w: list[float] = []
    for e in order:
        if len(a) == n - 1:
            break
        u, v = int(iu[e]), int(ju[e])
        if forest.join(u, v):
            a.append(u)
            b.append(v)
            w.append(float(weight[e]))
    return _sorted_tree(n, a, b, w)


def prim_mst(ps: PointSet, cd: CoreDistances) -> MrdMst:
    """Dense Prim over d_m rows, choosing edges in strict (weight, a, b) order.

    Memory is O(n); each step computes one row of d_m.
    """
    _check_sizes(ps, cd)
    n = ps.n
    idx = np.arange(n, dtype=np.intp)
    best_w = mutual_reachability_rows(ps, cd, 0, 1)[0]
    best_src = np.zeros(n, dtype=np.intp)
    best_w[0] = np.inf
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    a: list[int] = []
    b: list[int] = []
    w: list[float] = []
    for _ in range(n - 1):
        w_min = best_w.min()
        tied = np.flatnonzero(best_w == w_min)
        if tied.size > 1:
            lo = np.minimum(best_src[tied], tied)
            hi = np.maximum(best_src[tied], tied)
            pick = int(tied[np.lexsort((hi, lo))[0]])
        else:
            pick = int(tied[0])
        a.append(int(best_src[pick]))
        b.append(pick)
        w.append(float(w_min))
        in_tree[pick] = True
        best_w[pick] = np.inf

        row = mutual_reachability_rows(ps, cd, pick, pick + 1)[0]
        cur_lo = np.minimum(best_src, idx)
        cur_hi = np.maximum(best_src, idx)
        new_lo = np.minimum(pick, idx)
        new_hi = np.maximum(pick, idx)
        smaller_key = (new_lo < cur_lo) | ((new_lo == cur_lo) & (new_hi < cur_hi))
        better = ((row < best_w) | ((row == best_w) & smaller_key)) & ~in_tree
        best_w[better] = row[better]
        best_src[better] = pick
    return _sorted_tree(n, a, b, w)


def build_mst(
    ps: PointSet,
    cd: CoreDistances,
    algorithm: MstAlgorithm = MstAlgorithm.AUTO,
) -> MrdMst:
    """Minimum spanning tree over mutual reachability distances.

    ``auto`` uses Kruskal while the complete graph has at most
    ``settings.kruskal_max_edges`` edges and Prim beyond that.
    """
    _check_sizes(ps, cd)
    n = ps.n
    if n == 1:
        empty = np.empty(0, dtype=np.intp)
        return MrdMst(n=1, a=empty, b=empty.copy(), weight=np.empty(0, dtype=np.float64))
    if algorithm == MstAlgorithm.AUTO:
        n_edges = n * (n - 1) // 2
        algorithm = (
            MstAlgorithm.KRUSKAL if n_edges <= settings.kruskal_max_edges else MstAlgorithm.PRIM
        )
    mst = kruskal_mst(ps, cd) if algorithm == MstAlgorithm.KRUSKAL else prim_mst(ps, cd)
    logger.debug(
        f"Built MST with {algorithm.value}: n={n}, mu={cd.mu}, total weight={mst.total_weight:.6g}"
    )
    return mst


class DcDistIndex:
    """Answers minimax (dc-dist) queries on an MST.

    A row is computed by a breadth-first traversal from the source followed
    by pointer jumping over the parent array, carrying the running maximum
    edge weight towards the source. Rows are independent, so callers may
    compute them concurrently.
    """

    def __init__(self, mst: MrdMst):
        self.mst = mst
        n = mst.n
        self.n = n
        rows = np.concatenate([mst.a, mst.b])
        cols = np.concatenate([mst.b, mst.a])
        self._graph = csr_matrix(
            (np.ones(rows.shape[0], dtype=np.float64), (rows, cols)), shape=(n, n)
        )
        keys = rows.astype(np.int64) * n + cols.astype(np.int64)
        order = np.argsort(keys, kind="stable")
        self._keys = keys[order]
        self._key_weight = np.concatenate([mst.weight, mst.weight])[order]

    def check_index(self, i: int) -> None:
        if not 0 <= i < self.n:
            raise InputError(f"Point index {i} is out of range for n={self.n}")

    def row(self, i: int) -> NDArray[np.float64]:
        """dc-dist from point i to every point."""
        self.check_index(i)
        n = self.n
        out = np.zeros(n, dtype=np.float64)
        if n == 1:
            return out
        _, pred = breadth_first_order(
            self._graph, i, directed=False, return_predecessors=True
        )
        parent = pred.astype(np.intp)
        parent[i] = i
        nodes = np.arange(n, dtype=np.int64)
        others = nodes != i
        keys = nodes[others] * n + parent[others]
        out[others] = self._key_weight[np.searchsorted(self._keys, keys)]
        up = parent
        while not np.all(up == i):
            np.maximum(out, out[up], out=out)
            up = up[up]
        return out

    def dist(self, i: int, j: int) -> float:
        self.check_index(j)
        return float(self.row(i)[j])


def dc_dist(idx: DcDistIndex, i: int, j: int) -> float:
    """Largest edge weight on the MST path between i and j; 0 when i == j."""
    return idx.dist(i, j)


def dc_rows_from(idx: DcDistIndex, i: int) -> NDArray[np.float64]:
    """All dc-dists from point i in O(n) memory."""
    return idx.row(i)


def dc_matrix(idx: DcDistIndex) -> NDArray[np.float64]:
    """Full dc-dist matrix; for small n diagnostics and tests only."""
    return np.vstack([idx.row(i) for i in range(idx.n)])


@dataclass(frozen=True)
class DensityGraph:
    """Core-distances, MST and dc-dist index over one point set."""

    points: PointSet
    core: CoreDistances
    mst: MrdMst
    index: DcDistIndex

    @property
    def mu(self) -> int:
        return self.core.mu

    @property
    def n(self) -> int:
        return self.points.n


def build_density_graph(
    ps: PointSet,
    mu: int,
    include_self: bool = False,
    algorithm: MstAlgorithm = MstAlgorithm.AUTO,
) -> DensityGraph:
    """Build everything DISCO needs from the points, once."""
    core = core_distances(ps, mu, include_self=include_self)
    mst = build_mst(ps, core, algorithm=algorithm)
    return DensityGraph(points=ps, core=core, mst=mst, index=DcDistIndex(mst))

