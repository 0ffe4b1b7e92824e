"""Symbolic minors of support patterns and the trinomial scan.

Every nonzero of a support pattern is its own variable, so distinct perfect
matchings of a square submatrix give distinct monomials and nothing cancels:
the number of terms of a minor is the permanent of its 0/1 pattern.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

from .slack import SupportPattern


@dataclass(frozen=True, order=True)
class SignedMonomial:
    variables: tuple[int, ...]
    sign: int

    def __str__(self) -> str:
        body = "*".join(f"x{v}" for v in self.variables) or "1"
        return ("+" if self.sign > 0 else "-") + body

    def evaluate(self, values: dict[int, object]):
        out = self.sign
        for v in self.variables:
            out = out * values[v]
        return out


@dataclass(frozen=True)
class SymbolicMinor:
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    terms: tuple[SignedMonomial, ...]

    @property
    def order(self) -> int:
        return len(self.rows)

    def __len__(self) -> int:
        return len(self.terms)

    def polynomial(self) -> str:
        if not self.terms:
            return "0"
        s = " ".join(str(t) for t in self.terms)
        return s[1:] if s.startswith("+") else s

    def evaluate(self, values: dict[int, object]):
        return sum((t.evaluate(values) for t in self.terms), 0)

    def report_line(self) -> str:
        r = ",".join(map(str, self.rows))
        c = ",".join(map(str, self.cols))
        return f"rows {{{r}}} cols {{{c}}}: {' '.join(str(t) for t in self.terms)}"


def _inversions(perm: Sequence[int]) -> int:
    return sum(1 for a, b in combinations(perm, 2) if a > b)


def symbolic_det(pat: SupportPattern, rows: Sequence[int], cols: Sequence[int]) -> SymbolicMinor:
    """All perfect matchings of the submatrix, each with its permutation sign."""
    rows, cols = tuple(rows), tuple(cols)
    if len(rows) != len(cols):
        raise ValueError("minor needs as many rows as columns")
    k = len(rows)
    g = pat.grid
    options = [[(p, g[r][c]) for p, c in enumerate(cols) if g[r][c]] for r in rows]
    terms: list[SignedMonomial] = []
    perm = [0] * k
    chosen = [0] * k
    used = [False] * k

    def dfs(i: int) -> None:
        if i == k:
            sign = -1 if _inversions(perm) % 2 else 1
            terms.append(SignedMonomial(tuple(sorted(chosen)), sign))
            return
        for p, var in options[i]:
            if not used[p]:
                used[p] = True
                perm[i] = p
                chosen[i] = var
                dfs(i + 1)
                used[p] = False

    if all(options):
        dfs(0)
    terms.sort()
    return SymbolicMinor(rows, cols, tuple(terms))


def _count_matchings(masks: tuple[int, ...], cap: int | None) -> int:
    """Perfect matchings of rows (bitmasks over k columns), stopping past ``cap``."""
    k = len(masks)
    if cap is None:
        # subset dynamic programme, exact permanent of a 0/1 matrix
        ways = {0: 1}
        for m in masks:
            nxt: dict[int, int] = {}
            for used, w in ways.items():
                free = m & ~used
                while free:
                    b = free & -free
                    free ^= b
                    key = used | b
                    nxt[key] = nxt.get(key, 0) + w
            ways = nxt
        return ways.get((1 << k) - 1, 0)
    count = 0

    def dfs(i: int, used: int) -> bool:
        nonlocal count
        if i == k:
            count += 1
            return count > cap
        free = masks[i] & ~used
        while free:
            b = free & -free
            free ^= b
            if dfs(i + 1, used | b):
                return True
        return False

    dfs(0, 0)
    return count


def _minor_masks(pat: SupportPattern, k: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]]:
    """Column subsets outer, row subsets inner, skipping minors with an empty row or column.

    An order above min(rows, cols) simply has no minors.
    """
    n, m = pat.rows, pat.cols
    g = pat.grid
    for cols in combinations(range(m), k):
        row_mask = []
        for i in range(n):
            bits = 0
            for p, c in enumerate(cols):
                if g[i][c]:
                    bits |= 1 << p
            row_mask.append(bits)
        live = [i for i in range(n) if row_mask[i]]
        full = (1 << k) - 1
        for rows in combinations(live, k):
            masks = tuple(row_mask[i] for i in rows)
            acc = 0
            for x in masks:
                acc |= x
            if acc != full:
                continue
            yield rows, cols, masks


def scan_minors(pat: SupportPattern, k: int, *, terms: int | None = None,
                max_terms: int | None = None, first: bool = False) -> list[SymbolicMinor]:
    """k-minors with exactly ``terms`` terms, or with 1..``max_terms`` terms."""
    if k < 1:
        raise ValueError(f"minor order {k} must be positive")
    if (terms is None) == (max_terms is None):
        raise ValueError("give exactly one of terms / max_terms")
    cap = terms if terms is not None else max_terms
    cache: dict[tuple[int, ...], int] = {}
    hits: list[SymbolicMinor] = []
    for rows, cols, masks in _minor_masks(pat, k):
        key = tuple(sorted(masks))
        cnt = cache.get(key)
        if cnt is None:
            cnt = cache[key] = _count_matchings(key, cap)
        ok = cnt == terms if terms is not None else 1 <= cnt <= max_terms
        if ok:
            hits.append(symbolic_det(pat, rows, cols))
            if first:
                break
    return hits


def trinomial_scan(pat: SupportPattern, k: int, first: bool = False) -> list[SymbolicMinor]:
    return scan_minors(pat, k, terms=3, first=first)


def term_count_profile(pat: SupportPattern, k: int) -> dict[int, int]:
    """Histogram term count -> number of k-minors (minors with zero terms omitted)."""
    cache: dict[tuple[int, ...], int] = {}
    hist: Counter = Counter()
    for _, _, masks in _minor_masks(pat, k):
        key = tuple(sorted(masks))
        cnt = cache.get(key)
        if cnt is None:
            cnt = cache[key] = _count_matchings(key, None)
        if cnt:
            hist[cnt] += 1
    return dict(sorted(hist.items()))
