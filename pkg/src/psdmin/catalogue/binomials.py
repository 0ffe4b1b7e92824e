"""Binomial generators of slack ideals, evaluated on concrete slack matrices.

Classes 3 and 10 (and 11, the transpose of 10) carry explicit generator
lists over a fixed symbolic pattern.  The classes with d+2 vertices or
facets are repeated pyramids over a free sum of two simplices; after the
apex/base pairs are removed their support is the vertex-edge incidence of
a complete bipartite graph and the generators are the cycle binomials.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations

from ..exact import DomainError
from ..iso import find_isomorphism
from ..obstruction import SymbolicMinor, symbolic_det
from ..slack import SlackMatrix, SupportPattern
from .records import _data

FREE_SUM_CLASSES = (2, 4, 5, 6, 7, 8, 9)
LISTED_CLASSES = (3, 10, 11)


@dataclass(frozen=True)
class Binomial:
    plus: tuple[int, ...]
    minus: tuple[int, ...]

    @classmethod
    def parse(cls, text: str) -> Binomial:
        m = re.fullmatch(r"\s*(\S+?)\s*-\s*(\S+)\s*", text)
        if not m:
            raise ValueError(f"not a binomial: {text!r}")

        def mono(s: str) -> tuple[int, ...]:
            return tuple(sorted(int(v) for v in re.findall(r"x(\d+)", s)))

        return cls(mono(m.group(1)), mono(m.group(2)))

    @classmethod
    def from_minor(cls, minor: SymbolicMinor) -> Binomial:
        if len(minor.terms) != 2:
            raise ValueError("minor is not a binomial")
        a, b = minor.terms
        pos, neg = (a, b) if a.sign > 0 else (b, a)
        return cls(pos.variables, neg.variables)

    def evaluate(self, values: dict[int, Fraction]) -> Fraction:
        p = Fraction(1)
        for v in self.plus:
            p *= values[v]
        q = Fraction(1)
        for v in self.minus:
            q *= values[v]
        return p - q

    def __str__(self) -> str:
        return "*".join(f"x{v}" for v in self.plus) + " - " + "*".join(f"x{v}" for v in self.minus)


def _pattern(rows: list[str]) -> SupportPattern:
    grid = []
    for r in rows:
        grid.append(tuple(int(c[1:]) if c.startswith("x") else 0 for c in r.split()))
    return SupportPattern(tuple(grid))


@lru_cache(maxsize=None)
def listed_generators(k: int) -> tuple[SupportPattern, tuple[Binomial, ...]]:
    doc = _data("binomials.json")["classes"][str(k)]
    return _pattern(doc["pattern"]), tuple(Binomial.parse(g) for g in doc["generators"])


def bipartite_pattern(a: int, b: int) -> SupportPattern:
    """Vertex-edge incidence of K_{a+1,b+1}.

    Rows are the a+1 vertices of one side then the b+1 of the other; the
    edge between side-one vertex i and side-two vertex j is column
    ``i*(b+1) + j``.  Variables are numbered row-major.
    """
    p, q = a + 1, b + 1
    mask = [[0] * (p * q) for _ in range(p + q)]
    for i in range(p):
        for j in range(q):
            mask[i][i * q + j] = 1
            mask[p + j][i * q + j] = 1
    return SupportPattern.from_mask(mask)


def _simple_cycles(p: int, q: int):
    """Simple cycles of K_{p,q} as (side-one sequence, side-two sequence)."""
    seen = set()
    for length in range(2, min(p, q) + 1):
        for A in combinations(range(p), length):
            for B in permutations(range(q), length):
                # fix the rotation by starting at the smallest side-one vertex
                for rest in permutations(A[1:]):
                    seq_a = (A[0],) + rest
                    edges = frozenset(
                        [(seq_a[t], B[t]) for t in range(length)]
                        + [(seq_a[(t + 1) % length], B[t]) for t in range(length)])
                    if edges not in seen:
                        seen.add(edges)
                        yield seq_a, B


def cycle_binomials(a: int, b: int) -> list[Binomial]:
    """One binomial per simple cycle of K_{a+1,b+1}, over :func:`bipartite_pattern`."""
    if a < 1 or b < 1:
        raise DomainError("simplex sizes must be at least 1")
    p, q = a + 1, b + 1
    pat = bipartite_pattern(a, b)
    out = []
    for seq_a, seq_b in _simple_cycles(p, q):
        L = len(seq_a)
        rows = sorted(list(seq_a) + [p + j for j in seq_b])
        cols = sorted({seq_a[t] * q + seq_b[t] for t in range(L)}
                      | {seq_a[(t + 1) % L] * q + seq_b[t] for t in range(L)})
        out.append(Binomial.from_minor(symbolic_det(pat, rows, cols)))
    return out


def _strip_pyramids(grid: list[list[Fraction]]) -> list[list[Fraction]]:
    """Remove apex/base pairs: a row and a column whose only nonzero they share."""
    rows = list(range(len(grid)))
    cols = list(range(len(grid[0])))
    changed = True
    while changed:
        changed = False
        for i in rows:
            nz = [j for j in cols if grid[i][j]]
            if len(nz) == 1:
                j = nz[0]
                if [k for k in rows if grid[k][j]] == [i]:
                    rows.remove(i)
                    cols.remove(j)
                    changed = True
                    break
    return [[grid[i][j] for j in cols] for i in rows]


def _free_sum_core(S: SlackMatrix):
    """The K_{p,q} incidence core of S (or its transpose) and the sizes (a, b)."""
    core = _strip_pyramids([list(r) for r in S.matrix])
    if core and len(core) > len(core[0]):
        core = [list(r) for r in zip(*core)]
    n = len(core)
    if n == 0 or any(sum(1 for i in range(n) if core[i][j]) != 2 for j in range(len(core[0]))):
        raise DomainError("slack matrix is not a pyramid over a free sum of simplices")
    # 2-colour the rows through the edge columns
    colour = {0: 0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j, x in enumerate(core[i]):
            if x:
                for k in range(n):
                    if k != i and core[k][j] and k not in colour:
                        colour[k] = 1 - colour[i]
                        stack.append(k)
    p = sum(1 for c in colour.values() if c == 0)
    q = n - p
    if len(colour) != n or p * q != len(core[0]):
        raise DomainError("support is not a complete bipartite incidence")
    a, b = sorted((p - 1, q - 1))
    return core, a, b


def free_sum_generators(S: SlackMatrix):
    """Evaluation map and cycle binomials for a d+2 class."""
    core, a, b = _free_sum_core(S)
    pat = bipartite_pattern(a, b)
    return core, pat, cycle_binomials(a, b)


def _values(pattern: SupportPattern, grid) -> dict[int, Fraction] | None:
    mask = [[1 if x else 0 for x in r] for r in grid]
    iso = find_isomorphism(pattern.mask(), mask)
    if iso is None:
        return None
    rm, cm = iso
    return {v: grid[rm[i]][cm[j]] for i, r in enumerate(pattern.grid) for j, v in enumerate(r) if v}


@dataclass(frozen=True)
class BinomialReport:
    generators: int
    vanishing: int

    @property
    def ok(self) -> bool:
        return self.generators > 0 and self.generators == self.vanishing


def binomial_report(k: int, S: SlackMatrix) -> BinomialReport:
    if k in FREE_SUM_CLASSES:
        core, pat, gens = free_sum_generators(S)
        vals = _values(pat, core)
    elif k in LISTED_CLASSES:
        pat, gens = listed_generators(10 if k == 11 else k)
        grid = S.transpose().matrix if k == 11 else S.matrix
        vals = _values(pat, grid)
        if vals is None and k == 3:
            vals = _values(pat, S.transpose().matrix)
    else:
        raise DomainError(f"no binomial generators stored for class {k}")
    if vals is None:
        raise DomainError(f"support does not match the class {k} pattern")
    zero = sum(1 for g in gens if g.evaluate(vals) == 0)
    return BinomialReport(len(gens), zero)


def binomial_check(k: int, S: SlackMatrix) -> bool:
    """Whether every stored generator for class ``k`` vanishes on ``S``."""
    return binomial_report(k, S).ok
