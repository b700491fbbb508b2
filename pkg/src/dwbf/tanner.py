"""Sparse parity-check (Tanner graph) representation and utilities.

Covers alist file I/O, random regular code generation with a girth target,
girth computation, and syndrome evaluation.  Graphs are immutable after
construction and safe to share across concurrently decoded frames.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels

#: Returned by :func:`girth` when the graph has no cycle.
ACYCLIC = float("inf")


class AlistFormatError(ValueError):
    """Malformed or inconsistent alist input."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class GraphConstructionError(ValueError):
    """Invalid adjacency handed to the graph constructor or generator."""


class GirthTargetError(RuntimeError):
    """Girth target not reached within the retry budget."""


@dataclass(frozen=True)
class Syndrome:
    """Checksum vector s and its Hamming weight."""

    bits: np.ndarray
    weight: int

    @property
    def all_satisfied(self):
        return self.weight == 0


@dataclass(frozen=True)
class TannerGraph:
    """Bipartite code graph in CSR form over both node classes.

    Edges carry a flat id given by their position in check-node (row-major)
    order, so per-edge weights are plain arrays; ``var_eid`` maps each
    variable-side slot to that id.
    """

    M: int
    N: int
    chk_ptr: np.ndarray   # (M+1,) int64 offsets into chk_vn
    chk_vn: np.ndarray    # edge-ordered VN indices, the sets N(m)
    var_ptr: np.ndarray   # (N+1,) int64 offsets into var_cn
    var_cn: np.ndarray    # per-VN CN indices, the sets M(n)
    var_eid: np.ndarray   # flat edge id of each variable-side slot
    _row_of_edge: np.ndarray = field(repr=False, default=None)

    @classmethod
    def from_rows(cls, M, N, rows):
        """Build from per-check adjacency lists (each the index set N(m))."""
        if len(rows) != M:
            raise GraphConstructionError(f"expected {M} rows, got {len(rows)}")
        chk_ptr = np.zeros(M + 1, dtype=np.int64)
        for m, row in enumerate(rows):
            if len(row) == 0:
                raise GraphConstructionError(f"row {m} is empty")
            if len(set(row)) != len(row):
                raise GraphConstructionError(f"duplicate entry in row {m}")
            for n in row:
                if not 0 <= n < N:
                    raise GraphConstructionError(
                        f"row {m}: variable index {n} out of range [0,{N})")
            chk_ptr[m + 1] = chk_ptr[m] + len(row)
        n_edges = int(chk_ptr[-1])
        chk_vn = np.empty(n_edges, dtype=np.int64)
        row_of_edge = np.empty(n_edges, dtype=np.int64)
        for m, row in enumerate(rows):
            chk_vn[chk_ptr[m]:chk_ptr[m + 1]] = row
            row_of_edge[chk_ptr[m]:chk_ptr[m + 1]] = m

        order = np.lexsort((row_of_edge, chk_vn))
        var_cn = row_of_edge[order]
        var_eid = order.astype(np.int64)
        col_deg = np.bincount(chk_vn, minlength=N)
        if col_deg.min() == 0:
            n0 = int(np.argmin(col_deg))
            raise GraphConstructionError(
                f"variable {n0} participates in no check")
        var_ptr = np.zeros(N + 1, dtype=np.int64)
        np.cumsum(col_deg, out=var_ptr[1:])
        g = cls(M=M, N=N, chk_ptr=chk_ptr, chk_vn=chk_vn,
                var_ptr=var_ptr, var_cn=var_cn, var_eid=var_eid,
                _row_of_edge=row_of_edge)
        for arr in (g.chk_ptr, g.chk_vn, g.var_ptr, g.var_cn, g.var_eid):
            arr.setflags(write=False)
        return g

    @classmethod
    def from_dense(cls, H):
        H = np.asarray(H)
        rows = [list(np.flatnonzero(H[m])) for m in range(H.shape[0])]
        return cls.from_rows(H.shape[0], H.shape[1], rows)

    # -- adjacency accessors ------------------------------------------------

    def row_adj(self, m):
        """The index set N(m)."""
        return self.chk_vn[self.chk_ptr[m]:self.chk_ptr[m + 1]]

    def col_adj(self, n):
        """The index set M(n)."""
        return self.var_cn[self.var_ptr[n]:self.var_ptr[n + 1]]

    def col_eids(self, n):
        return self.var_eid[self.var_ptr[n]:self.var_ptr[n + 1]]

    def edge_id(self, m, n):
        row = self.row_adj(m)
        hit = np.flatnonzero(row == n)
        if len(hit) == 0:
            raise KeyError(f"no edge ({m},{n})")
        return int(self.chk_ptr[m] + hit[0])

    @property
    def num_edges(self):
        return len(self.chk_vn)

    @property
    def row_of_edge(self):
        return self._row_of_edge

    def row_degrees(self):
        return np.diff(self.chk_ptr)

    def col_degrees(self):
        return np.diff(self.var_ptr)

    @property
    def is_regular(self):
        rd, cd = self.row_degrees(), self.col_degrees()
        return len(np.unique(rd)) == 1 and len(np.unique(cd)) == 1

    @property
    def dc(self):
        """Check-node degree (maximum, uniform for regular codes)."""
        return int(self.row_degrees().max())

    @property
    def dv(self):
        """Variable-node degree (maximum, uniform for regular codes)."""
        return int(self.col_degrees().max())

    @property
    def rate(self):
        """Design rate (N - M) / N, assuming full-rank H."""
        return (self.N - self.M) / self.N

    def to_dense(self):
        H = np.zeros((self.M, self.N), dtype=np.uint8)
        for m in range(self.M):
            H[m, self.row_adj(m)] = 1
        return H

    def sgn_repeat(self, per_row):
        """Expand a per-check array to edge order."""
        return np.repeat(per_row, self.row_degrees())


# -- syndrome ---------------------------------------------------------------

def compute_syndrome(graph, u_hat):
    """Parity of the tentative word on each check: s_m = XOR of u over N(m)."""
    u_hat = np.asarray(u_hat)
    if len(u_hat) != graph.N:
        raise ValueError(f"expected length-{graph.N} word, got {len(u_hat)}")
    s = kernels.syndrome(graph.chk_ptr, graph.chk_vn, u_hat.astype(np.uint8))
    return Syndrome(bits=s, weight=int(s.sum()))


# -- alist I/O --------------------------------------------------------------

def parse_alist(text):
    """Parse the alist interchange format into a TannerGraph.

    Zero-padded adjacency entries (used by some published files to keep
    fixed-width lists) are ignored.
    """
    lines = text.splitlines()
    tokens = []
    for i, line in enumerate(lines):
        parts = line.split()
        if parts:
            tokens.append((i + 1, parts))
    if len(tokens) < 4:
        raise AlistFormatError("truncated file: need at least 4 content lines")

    def ints(idx, expect=None):
        lineno, parts = tokens[idx]
        try:
            vals = [int(p) for p in parts]
        except ValueError:
            raise AlistFormatError("non-integer token", line=lineno)
        if expect is not None and len(vals) != expect:
            raise AlistFormatError(
                f"expected {expect} values, got {len(vals)}", line=lineno)
        return lineno, vals

    _, (N, M) = ints(0, expect=2)
    if N <= 0 or M <= 0:
        raise AlistFormatError("header dimensions must be positive",
                               line=tokens[0][0])
    _, (dv_max, dc_max) = ints(1, expect=2)
    _, col_deg = ints(2, expect=N)
    _, row_deg = ints(3, expect=M)
    if len(tokens) < 4 + N + M:
        raise AlistFormatError(
            f"expected {4 + N + M} content lines, got {len(tokens)}")

    cols = []
    for n in range(N):
        lineno, vals = ints(4 + n)
        entries = [v - 1 for v in vals if v != 0]
        if len(entries) != col_deg[n]:
            raise AlistFormatError(
                f"column {n}: degree list says {col_deg[n]}, "
                f"found {len(entries)} entries", line=lineno)
        for m in entries:
            if not 0 <= m < M:
                raise AlistFormatError(
                    f"column {n}: check index {m + 1} out of range",
                    line=lineno)
        cols.append(entries)

    rows = []
    for m in range(M):
        lineno, vals = ints(4 + N + m)
        entries = [v - 1 for v in vals if v != 0]
        if len(entries) != row_deg[m]:
            raise AlistFormatError(
                f"row {m}: degree list says {row_deg[m]}, "
                f"found {len(entries)} entries", line=lineno)
        for n in entries:
            if not 0 <= n < N:
                raise AlistFormatError(
                    f"row {m}: variable index {n + 1} out of range",
                    line=lineno)
        rows.append(entries)

    # cross-check the two adjacency blocks
    from_cols = {(m, n) for n, ms in enumerate(cols) for m in ms}
    from_rows = {(m, n) for m, ns in enumerate(rows) for n in ns}
    if from_cols != from_rows:
        diff = from_cols.symmetric_difference(from_rows)
        m, n = sorted(diff)[0]
        raise AlistFormatError(
            f"row/column adjacency disagree, e.g. edge (check {m + 1}, "
            f"variable {n + 1}) listed on one side only")

    return TannerGraph.from_rows(M, N, rows)


def emit_alist(graph):
    """Serialize to alist text (1-based, no zero padding)."""
    out = [f"{graph.N} {graph.M}", f"{graph.dv} {graph.dc}"]
    out.append(" ".join(str(int(d)) for d in graph.col_degrees()))
    out.append(" ".join(str(int(d)) for d in graph.row_degrees()))
    for n in range(graph.N):
        out.append(" ".join(str(int(m) + 1) for m in graph.col_adj(n)))
    for m in range(graph.M):
        out.append(" ".join(str(int(n) + 1) for n in graph.row_adj(m)))
    return "\n".join(out) + "\n"


# -- girth ------------------------------------------------------------------

def _shortest_cycle_from(adj_v, adj_c, root, cap):
    """BFS from VN ``root``; return (cycle_len, (vn, cn) closing edge).

    Distances count edges; VNs sit at even, CNs at odd distance.  Only
    cycles of length <= cap are reported (cap may be inf).  Exact for the
    shortest cycle when ``root`` lies on it, which suffices for girth when
    every VN is tried.
    """
    dist = {(0, root): 0}        # keys: (is_cn, index)
    par = {(0, root): None}
    frontier = [(0, root)]
    best = float("inf")
    best_edge = None
    depth = 0
    while frontier and 2 * depth <= min(best, cap):
        nxt = []
        for node in frontier:
            is_cn, i = node
            nbrs = adj_c[i] if is_cn else adj_v[i]
            for j in nbrs:
                other = (1 - is_cn, j)
                if other == par[node]:
                    continue
                if other in dist:
                    cyc = dist[node] + dist[other] + 1
                    if cyc < best:
                        best = cyc
                        # normalize the closing edge to (vn, cn)
                        best_edge = (j, i) if is_cn else (i, j)
                else:
                    dist[other] = depth + 1
                    par[other] = node
                    nxt.append(other)
        frontier = nxt
        depth += 1
    if best > cap:
        return None, None
    return best, best_edge


def girth(graph):
    """Length of the shortest cycle (always even), or ACYCLIC."""
    adj_v = [list(graph.col_adj(n)) for n in range(graph.N)]
    adj_c = [list(graph.row_adj(m)) for m in range(graph.M)]
    best = float("inf")
    for v in range(graph.N):
        length, _ = _shortest_cycle_from(adj_v, adj_c, v, best)
        if length is not None and length < best:
            best = length
            if best == 4:
                break
    return best if best != float("inf") else ACYCLIC


# -- regular code generation ------------------------------------------------

def generate_regular(N, dv, dc, seed=0, min_girth=4, max_restarts=12,
                     swap_budget=None):
    """Random regular (dv, dc) Tanner graph with girth >= min_girth.

    Configuration-model socket permutation followed by cycle-avoiding edge
    swaps; deterministic given ``seed``.
    """
    if min_girth not in (4, 6, 8, 10, 12):
        raise GraphConstructionError("min_girth must be one of 4,6,8,10,12")
    if (N * dv) % dc != 0:
        raise GraphConstructionError(
            f"degree equation infeasible: N*dv = {N * dv} not divisible by "
            f"dc = {dc}")
    M = N * dv // dc
    if swap_budget is None:
        swap_budget = 400 + 60 * N
    rng = np.random.default_rng(seed)

    for _ in range(max_restarts):
        rows = _random_regular_rows(N, dv, dc, M, rng)
        if rows is None:
            continue
        if _repair_girth(rows, N, dv, M, min_girth, rng, swap_budget):
            return TannerGraph.from_rows(M, N, rows)
    raise GirthTargetError(
        f"girth target {min_girth} not reached for (N={N}, dv={dv}, dc={dc}) "
        f"within the retry budget")


def _random_regular_rows(N, dv, dc, M, rng):
    sockets = np.repeat(np.arange(N), dv)
    rng.shuffle(sockets)
    rows = [list(sockets[m * dc:(m + 1) * dc]) for m in range(M)]
    # repair duplicate entries within a row by swapping with other rows
    for _ in range(40 * M):
        dup = None
        for m, row in enumerate(rows):
            seen = set()
            for j, n in enumerate(row):
                if n in seen:
                    dup = (m, j)
                    break
                seen.add(n)
            if dup:
                break
        if dup is None:
            return [sorted(int(x) for x in row) for row in rows]
        m, j = dup
        m2 = int(rng.integers(M))
        j2 = int(rng.integers(dc))
        if m2 == m:
            continue
        if rows[m][j] in rows[m2] or rows[m2][j2] in rows[m]:
            continue
        rows[m][j], rows[m2][j2] = rows[m2][j2], rows[m][j]
    return None


def _repair_girth(rows, N, dv, M, min_girth, rng, budget):
    adj_c = [list(r) for r in rows]
    adj_v = [[] for _ in range(N)]
    for m, r in enumerate(adj_c):
        for n in r:
            adj_v[n].append(m)
    cap = min_girth - 2

    def find_offender():
        order = rng.permutation(N)
        for v in order:
            length, edge = _shortest_cycle_from(adj_v, adj_c, int(v), cap)
            if length is not None:
                return edge
        return None

    for _ in range(budget):
        edge = find_offender()
        if edge is None:
            for m in range(M):
                rows[m] = sorted(adj_c[m])
            return True
        v1, c1 = edge
        # swap the closing edge's CN endpoint with a random other edge
        done = False
        for _ in range(50):
            c2 = int(rng.integers(M))
            if c2 == c1 or not adj_c[c2]:
                continue
            v2 = int(adj_c[c2][rng.integers(len(adj_c[c2]))])
            if v2 == v1 or v1 in adj_c[c2] or v2 in adj_c[c1]:
                continue
            adj_c[c1].remove(v1)
            adj_c[c2].remove(v2)
            adj_c[c1].append(v2)
            adj_c[c2].append(v1)
            adj_v[v1].remove(c1)
            adj_v[v2].remove(c2)
            adj_v[v1].append(c2)
            adj_v[v2].append(c1)
            done = True
            break
        if not done:
            return False
    return False


# -- GF(2) helpers (test oracles) ------------------------------------------

def gf2_nullspace(H):
    """Basis of the right nullspace of a dense binary matrix over GF(2)."""
    H = np.array(H, dtype=np.uint8) % 2
    m, n = H.shape
    A = H.copy()
    pivots = []
    r = 0
    for c in range(n):
        rows_below = np.flatnonzero(A[r:, c]) + r if r < m else []
        if len(rows_below) == 0:
            continue
        pr = rows_below[0]
        if pr != r:
            A[[r, pr]] = A[[pr, r]]
        for i in range(m):
            if i != r and A[i, c]:
                A[i] ^= A[r]
        pivots.append(c)
        r += 1
        if r == m:
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.uint8)
        v[f] = 1
        for i, c in enumerate(pivots):
            if A[i, f]:
                v[c] = 1
        basis.append(v)
    return np.array(basis, dtype=np.uint8).reshape(len(basis), n)
