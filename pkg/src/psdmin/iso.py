"""Isomorphisms of 0/1 incidence patterns (rows to rows, columns to columns).

Colour refinement on the bipartite graph narrows the candidates, then rows
are assigned by backtracking while the multiset of partial column
signatures is kept equal on both sides.
"""

from __future__ import annotations

from collections import Counter, deque
from itertools import permutations, product
from typing import Iterator, Sequence

Mask = Sequence[Sequence[int]]


def _as_mask(M: Mask) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(1 if x else 0 for x in row) for row in M)


def _refine(A, B):
    """Joint colour refinement; returns (rowcolA, colcolA, rowcolB, colcolB)."""
    n, m = len(A), len(A[0]) if A else 0
    rows = {0: A, 1: B}
    rc = {s: [0] * n for s in (0, 1)}
    cc = {s: [0] * m for s in (0, 1)}
    classes = 0
    while True:
        table: dict = {}
        new_rc = {s: [0] * n for s in (0, 1)}
        new_cc = {s: [0] * m for s in (0, 1)}
        for s in (0, 1):
            M = rows[s]
            for i in range(n):
                key = ("r", rc[s][i], tuple(sorted(cc[s][j] for j in range(m) if M[i][j])))
                new_rc[s][i] = table.setdefault(key, len(table))
            for j in range(m):
                key = ("c", cc[s][j], tuple(sorted(rc[s][i] for i in range(n) if M[i][j])))
                new_cc[s][j] = table.setdefault(key, len(table))
        rc, cc = new_rc, new_cc
        if len(table) == classes:
            return rc[0], cc[0], rc[1], cc[1]
        classes = len(table)


def iter_isomorphisms(A: Mask, B: Mask) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Yield ``(row_map, col_map)`` with ``B[row_map[i]][col_map[j]] == A[i][j]``."""
    A, B = _as_mask(A), _as_mask(B)
    n = len(A)
    if n != len(B):
        return
    m = len(A[0]) if n else 0
    if n and m != len(B[0]):
        return
    if n == 0 or m == 0:
        yield tuple(range(n)), tuple(range(m))
        return
    if sum(map(sum, A)) != sum(map(sum, B)):
        return
    rcA, ccA, rcB, ccB = _refine(A, B)
    if Counter(rcA) != Counter(rcB) or Counter(ccA) != Counter(ccB):
        return

    order = _row_order(A, rcA)
    cand = {i: [k for k in range(n) if rcB[k] == rcA[i]] for i in range(n)}
    colsA = [[j for j in range(m) if A[i][j]] for i in range(n)]
    colsB = [[j for j in range(m) if B[k][j]] for k in range(n)]

    sigA = [0] * m
    sigB = [0] * m
    used = [False] * n
    row_map = [-1] * n

    def consistent() -> bool:
        return Counter(zip(ccA, sigA)) == Counter(zip(ccB, sigB))

    def finish():
        groupsA: dict = {}
        groupsB: dict = {}
        for j in range(m):
            groupsA.setdefault((ccA[j], sigA[j]), []).append(j)
            groupsB.setdefault((ccB[j], sigB[j]), []).append(j)
        keys = sorted(groupsA)
        choices = [permutations(groupsB[k]) for k in keys]
        for combo in product(*choices):
            col_map = [-1] * m
            for k, img in zip(keys, combo):
                for j, jj in zip(groupsA[k], img):
                    col_map[j] = jj
            yield tuple(row_map), tuple(col_map)

    def extend(depth: int):
        if depth == n:
            yield from finish()
            return
        i = order[depth]
        bit = 1 << depth
        for k in cand[i]:
            if used[k]:
                continue
            used[k] = True
            row_map[i] = k
            for j in colsA[i]:
                sigA[j] |= bit
            for j in colsB[k]:
                sigB[j] |= bit
            if consistent():
                yield from extend(depth + 1)
            for j in colsA[i]:
                sigA[j] &= ~bit
            for j in colsB[k]:
                sigB[j] &= ~bit
            used[k] = False
            row_map[i] = -1

    yield from extend(0)


def _row_order(A, rc) -> list[int]:
    """Rarest colour first, then breadth-first through shared columns."""
    n, m = len(A), len(A[0])
    freq = Counter(rc)
    seen = [False] * n
    order: list[int] = []
    for start in sorted(range(n), key=lambda i: (freq[rc[i]], i)):
        if seen[start]:
            continue
        seen[start] = True
        queue = deque([start])
        while queue:
            i = queue.popleft()
            order.append(i)
            nbrs = {k for j in range(m) if A[i][j] for k in range(n) if A[k][j] and not seen[k]}
            for k in sorted(nbrs, key=lambda k: (freq[rc[k]], k)):
                seen[k] = True
                queue.append(k)
    return order


def find_isomorphism(A: Mask, B: Mask):
    """First isomorphism or ``None``."""
    return next(iter_isomorphisms(A, B), None)


def automorphisms(A: Mask):
    return iter_isomorphisms(A, A)
