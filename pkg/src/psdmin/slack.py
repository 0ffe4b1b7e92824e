"""Slack matrices, their supports, gauge fixing and projective equivalence."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .exact import ExactMatrix, exact_rank, format_rational, parse_rational
from .iso import iter_isomorphisms
from .polytope import VPolytope


class InternalConsistencyError(RuntimeError):
    pass


Grid = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class SlackMatrix:
    matrix: Grid
    vertex_labels: tuple[str, ...]
    facet_labels: tuple[str, ...]
    dim: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], dim: int | None = None,
                  vertex_labels=None, facet_labels=None) -> SlackMatrix:
        grid = tuple(tuple(Fraction(x) for x in r) for r in rows)
        n = len(grid)
        m = len(grid[0]) if n else 0
        if any(len(r) != m for r in grid):
            raise ValueError("ragged matrix")
        if any(x < 0 for r in grid for x in r):
            raise ValueError("slack matrices are nonnegative")
        vl = tuple(vertex_labels) if vertex_labels else tuple(f"v{i}" for i in range(n))
        fl = tuple(facet_labels) if facet_labels else tuple(f"F{j}" for j in range(m))
        if dim is None:
            dim = exact_rank(ExactMatrix(grid)) - 1
        return cls(grid, vl, fl, dim)

    @property
    def rows(self) -> int:
        return len(self.matrix)

    @property
    def cols(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        return self.matrix[ij[0]][ij[1]]

    def nonzeros(self) -> list[tuple[int, int]]:
        return [(i, j) for i, r in enumerate(self.matrix) for j, x in enumerate(r) if x]

    def mask(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(1 if x else 0 for x in r) for r in self.matrix)

    def transpose(self) -> SlackMatrix:
        return SlackMatrix(tuple(zip(*self.matrix)), self.facet_labels, self.vertex_labels, self.dim)

    def permuted(self, row_order: Sequence[int], col_order: Sequence[int]) -> SlackMatrix:
        """Matrix whose row k is old row ``row_order[k]`` (same for columns)."""
        grid = tuple(tuple(self.matrix[i][j] for j in col_order) for i in row_order)
        return SlackMatrix(grid, tuple(self.vertex_labels[i] for i in row_order),
                           tuple(self.facet_labels[j] for j in col_order), self.dim)

    def scaled(self, row_scale: Sequence, col_scale: Sequence) -> SlackMatrix:
        grid = tuple(tuple(r * x * c for x, c in zip(row, col_scale))
                     for r, row in zip(row_scale, self.matrix))
        return SlackMatrix(grid, self.vertex_labels, self.facet_labels, self.dim)

    def exact(self) -> ExactMatrix:
        return ExactMatrix(self.matrix)


def slack_matrix(P: VPolytope) -> SlackMatrix:
    """Entry (i, j) is the slack of vertex i in facet inequality j."""
    fs = P.facets()
    grid = tuple(tuple(f.slack(v) for f in fs) for v in P.vertices)
    S = SlackMatrix(grid, tuple(f"v{i}" for i in range(P.n)),
                    tuple(f"F{j}" for j in range(len(fs))), P.dim)
    r = exact_rank(S.exact())
    if r != P.dim + 1:
        raise InternalConsistencyError(f"slack matrix of {P.name} has rank {r}, expected {P.dim + 1}")
    return S


# ---------------------------------------------------------------------------
# symbolic support


@dataclass(frozen=True)
class SupportPattern:
    """Zero pattern with the nonzeros numbered 1..t in row-major order."""

    grid: tuple[tuple[int, ...], ...]

    @classmethod
    def from_mask(cls, mask: Sequence[Sequence]) -> SupportPattern:
        t = 0
        rows = []
        for r in mask:
            out = []
            for x in r:
                if x:
                    t += 1
                    out.append(t)
                else:
                    out.append(0)
            rows.append(tuple(out))
        return cls(tuple(rows))

    @property
    def rows(self) -> int:
        return len(self.grid)

    @property
    def cols(self) -> int:
        return len(self.grid[0]) if self.grid else 0

    @property
    def nvars(self) -> int:
        return sum(1 for r in self.grid for x in r if x)

    def mask(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(1 if x else 0 for x in r) for r in self.grid)

    def position(self, var: int) -> tuple[int, int]:
        for i, r in enumerate(self.grid):
            for j, x in enumerate(r):
                if x == var:
                    return i, j
        raise KeyError(var)

    def transpose(self) -> SupportPattern:
        return SupportPattern.from_mask(list(zip(*self.mask())))

    def __str__(self) -> str:
        return "\n".join(" ".join(f"x{x}" if x else "0" for x in r) for r in self.grid)


def support(S: SlackMatrix | Sequence[Sequence]) -> SupportPattern:
    mask = S.mask() if isinstance(S, SlackMatrix) else [[1 if x else 0 for x in r] for r in S]
    return SupportPattern.from_mask(mask)


# ---------------------------------------------------------------------------
# gauge fixing


@dataclass(frozen=True)
class GaugeForest:
    """Spanning forest of the bipartite support graph.

    ``edges`` are (row, col) positions; ``coforest`` lists the remaining
    nonzeros sorted by (row, col).
    """

    edges: tuple[tuple[int, int], ...]
    coforest: tuple[tuple[int, int], ...]
    components: int

    def transported(self, row_map: Sequence[int], col_map: Sequence[int]) -> GaugeForest:
        e = tuple((row_map[i], col_map[j]) for i, j in self.edges)
        c = tuple(sorted((row_map[i], col_map[j]) for i, j in self.coforest))
        return GaugeForest(e, c, self.components)


def gauge_forest(mask: Sequence[Sequence], allowed: set[tuple[int, int]] | None = None) -> GaugeForest:
    """Breadth-first forest from the smallest row, scanning nonzeros row-major.

    With ``allowed`` the tree edges are drawn only from those positions (the
    remaining nonzeros still count as co-forest edges).
    """
    n = len(mask)
    m = len(mask[0]) if n else 0
    nz = [(i, j) for i in range(n) for j in range(m) if mask[i][j]]
    usable = set(nz) if allowed is None else set(nz) & set(allowed)
    row_adj = {i: [j for j in range(m) if (i, j) in usable] for i in range(n)}
    col_adj = {j: [i for i in range(n) if (i, j) in usable] for j in range(m)}
    seen_r = [False] * n
    seen_c = [False] * m
    edges: list[tuple[int, int]] = []
    comps = 0
    touched_rows = sorted({i for i, _ in nz})
    touched_cols = sorted({j for _, j in nz})
    for start in touched_rows + [("c", j) for j in touched_cols]:
        if isinstance(start, tuple):
            j0 = start[1]
            if seen_c[j0]:
                continue
            seen_c[j0] = True
            queue = deque([("c", j0)])
        else:
            if seen_r[start]:
                continue
            seen_r[start] = True
            queue = deque([("r", start)])
        comps += 1
        while queue:
            kind, x = queue.popleft()
            if kind == "r":
                for j in row_adj[x]:
                    if not seen_c[j]:
                        seen_c[j] = True
                        edges.append((x, j))
                        queue.append(("c", j))
            else:
                for i in col_adj[x]:
                    if not seen_r[i]:
                        seen_r[i] = True
                        edges.append((i, x))
                        queue.append(("r", i))
    eset = set(edges)
    co = tuple(p for p in nz if p not in eset)
    return GaugeForest(tuple(edges), co, comps)


def _scalings(matrix, forest: GaugeForest, n: int, m: int):
    """Row and column scalings making every forest entry 1."""
    one = Fraction(1)
    rs: list = [None] * n
    cs: list = [None] * m
    adj_r: dict[int, list[int]] = {}
    adj_c: dict[int, list[int]] = {}
    for i, j in forest.edges:
        adj_r.setdefault(i, []).append(j)
        adj_c.setdefault(j, []).append(i)
    for i0, j0 in forest.edges:
        if rs[i0] is not None or cs[j0] is not None:
            continue
        rs[i0] = one
        queue = deque([("r", i0)])
        while queue:
            kind, x = queue.popleft()
            if kind == "r":
                for j in adj_r.get(x, ()):
                    if cs[j] is None:
                        cs[j] = 1 / (rs[x] * matrix[x][j])
                        queue.append(("c", j))
            else:
                for i in adj_c.get(x, ()):
                    if rs[i] is None:
                        rs[i] = 1 / (matrix[i][x] * cs[x])
                        queue.append(("r", i))
    rs = [one if r is None else r for r in rs]
    cs = [one if c is None else c for c in cs]
    return rs, cs


def gauge_normalize(S: SlackMatrix, F: GaugeForest | None = None) -> SlackMatrix:
    """Positive diagonal scaling of rows and columns setting forest entries to 1."""
    if F is None:
        F = gauge_forest(S.mask())
    rs, cs = _scalings(S.matrix, F, S.rows, S.cols)
    return S.scaled(rs, cs)


def gauge_normalize_grid(grid, F: GaugeForest):
    """Same as :func:`gauge_normalize` for a bare grid over any field."""
    n = len(grid)
    m = len(grid[0]) if n else 0
    rs, cs = _scalings(grid, F, n, m)
    return [[rs[i] * grid[i][j] * cs[j] for j in range(m)] for i in range(n)]


def cycle_invariants(S: SlackMatrix, F: GaugeForest | None = None) -> dict[tuple[int, int], Fraction]:
    """Alternating product around the fundamental cycle of each co-forest edge.

    For co-forest edge (i, j) the forest path from column j back to row i is
    walked, dividing and multiplying entries in turn.  These products are
    invariant under positive row/column scaling.
    """
    if F is None:
        F = gauge_forest(S.mask())
    adj: dict = {}
    for i, j in F.edges:
        adj.setdefault(("r", i), []).append(("c", j))
        adj.setdefault(("c", j), []).append(("r", i))
    out = {}
    for i, j in F.coforest:
        # path from ("c", j) to ("r", i) in the forest
        prev = {("c", j): None}
        queue = deque([("c", j)])
        while queue:
            u = queue.popleft()
            if u == ("r", i):
                break
            for w in adj.get(u, ()):
                if w not in prev:
                    prev[w] = u
                    queue.append(w)
        path = [("r", i)]
        while prev[path[-1]] is not None:
            path.append(prev[path[-1]])
        # path: r_i, ..., c_j ; edges alternate and the closing edge is (i, j)
        value = S.matrix[i][j]
        for k in range(len(path) - 1):
            a, b = path[k], path[k + 1]
            r, c = (a[1], b[1]) if a[0] == "r" else (b[1], a[1])
            value = value / S.matrix[r][c] if k % 2 == 0 else value * S.matrix[r][c]
        out[(i, j)] = value
    return out


def scaling_equivalent(A: SlackMatrix, B: SlackMatrix):
    """Whether B is A up to row/column permutations and positive scalings.

    Returns ``(True, (row_map, col_map))`` with the witness permutations
    (row i of A goes to row ``row_map[i]`` of B), or ``(False, None)``.
    """
    if A.shape != B.shape:
        return False, None
    FA = gauge_forest(A.mask())
    NA = gauge_normalize(A, FA)
    for row_map, col_map in iter_isomorphisms(A.mask(), B.mask()):
        FB = FA.transported(row_map, col_map)
        NB = gauge_normalize(B, FB)
        if all(NB.matrix[row_map[i]][col_map[j]] == NA.matrix[i][j] for i, j in FA.coforest):
            return True, (row_map, col_map)
    return False, None


def is_two_level(S: SlackMatrix) -> bool:
    for j in range(S.cols):
        vals = {S.matrix[i][j] for i in range(S.rows) if S.matrix[i][j]}
        if len(vals) > 1:
            return False
    return True


# ---------------------------------------------------------------------------
# matrix file


def dumps_matrix(S: SlackMatrix) -> str:
    lines = [f"{S.rows} {S.cols}"]
    lines += [" ".join(format_rational(x) for x in r) for r in S.matrix]
    return "\n".join(lines) + "\n"


def loads_matrix(text: str, labels: dict | None = None) -> SlackMatrix:
    tokens = text.split()
    if len(tokens) < 2:
        raise ValueError("matrix file needs a 'rows cols' header")
    try:
        n, m = int(tokens[0]), int(tokens[1])
    except ValueError:
        raise ValueError("matrix header must be two integers") from None
    body = tokens[2:]
    if len(body) != n * m:
        raise ValueError(f"expected {n * m} entries, found {len(body)}")
    vals = [parse_rational(t) for t in body]
    rows = [vals[i * m:(i + 1) * m] for i in range(n)]
    labels = labels or {}
    return SlackMatrix.from_rows(rows, dim=labels.get("dim"),
                                 vertex_labels=labels.get("vertex_labels"),
                                 facet_labels=labels.get("facet_labels"))


def read_matrix(path: str | Path, sidecar: str | Path | None = None) -> SlackMatrix:
    labels = json.loads(Path(sidecar).read_text()) if sidecar else None
    return loads_matrix(Path(path).read_text(), labels)


def labels_document(S: SlackMatrix) -> dict:
    return {"dim": S.dim, "vertex_labels": list(S.vertex_labels), "facet_labels": list(S.facet_labels)}
