"""Parametrized slack-matrix forms and matching of concrete slack matrices.

A template is a grid of polynomial expressions in a few named parameters.
Its constant-1 entries contain a spanning forest of the support graph, so
gauge-normalizing a candidate on that forest fixes the row and column
scaling completely.  Bare-parameter entries then determine the parameters
and every remaining entry is checked against its expression.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ..exact import DomainError
from ..iso import iter_isomorphisms
from ..slack import GaugeForest, SlackMatrix, gauge_forest, gauge_normalize_grid
from .conditions import CONDITIONS
from .records import _data


class TemplateMismatch(ValueError):
    """The slack matrix does not have the support of the requested class."""


_TERM = re.compile(r"[+-]?[^+-]+")


@dataclass(frozen=True)
class Expr:
    """Sum of ``coef * prod(vars)`` terms."""

    terms: tuple[tuple[Fraction, tuple[str, ...]], ...]
    text: str

    @classmethod
    def parse(cls, text: str) -> Expr:
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty template entry")
        terms = []
        for tok in _TERM.findall(s):
            coef = Fraction(-1) if tok.startswith("-") else Fraction(1)
            names = []
            for f in tok.lstrip("+-").split("*"):
                if re.fullmatch(r"\d+(/\d+)?", f):
                    coef *= Fraction(f)
                elif re.fullmatch(r"[a-z]\d*", f):
                    names.append(f)
                else:
                    raise ValueError(f"bad factor {f!r} in template entry {text!r}")
            terms.append((coef, tuple(sorted(names))))
        return cls(tuple(terms), s)

    @property
    def variables(self) -> set[str]:
        return {v for _, vs in self.terms for v in vs}

    def is_zero(self) -> bool:
        return all(c == 0 for c, _ in self.terms)

    def constant(self) -> Fraction | None:
        return None if self.variables else sum((c for c, _ in self.terms), Fraction(0))

    def bare(self) -> str | None:
        if len(self.terms) == 1 and self.terms[0][0] == 1 and len(self.terms[0][1]) == 1:
            return self.terms[0][1][0]
        return None

    def evaluate(self, params: dict[str, Fraction]) -> Fraction:
        total = Fraction(0)
        for c, vs in self.terms:
            t = c
            for v in vs:
                t *= params[v]
            total += t
        return total


@dataclass(frozen=True)
class Template:
    family: str
    branch: int
    classes: tuple[int, ...]
    dim: int
    condition: str | None
    grid: tuple[tuple[Expr, ...], ...]
    params: tuple[str, ...]
    forest: GaugeForest

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.grid), len(self.grid[0])

    def mask(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(0 if e.is_zero() else 1 for e in r) for r in self.grid)

    def instantiate(self, **params) -> SlackMatrix:
        vals = {k: Fraction(v) for k, v in params.items()}
        missing = set(self.params) - set(vals)
        if missing:
            raise ValueError(f"missing template parameters {sorted(missing)}")
        rows = [[e.evaluate(vals) for e in r] for r in self.grid]
        return SlackMatrix.from_rows(rows, dim=self.dim)


def _build(family: dict, b: int, rows: list[str]) -> Template:
    grid = tuple(tuple(Expr.parse(c) for c in r.split()) for r in rows)
    if len({len(r) for r in grid}) != 1:
        raise ValueError(f"template {family['name']} branch {b} is ragged")
    params = sorted({v for r in grid for e in r for v in e.variables}, key=lambda s: (len(s), s))
    mask = [[0 if e.is_zero() else 1 for e in r] for r in grid]
    ones = {(i, j) for i, r in enumerate(grid) for j, e in enumerate(r) if e.constant() == 1}
    F = gauge_forest(mask, allowed=ones)
    if F.components != gauge_forest(mask).components:
        raise ValueError(f"constant entries of {family['name']} do not fix the gauge")
    bare = {e.bare() for r in grid for e in r} - {None}
    if bare != set(params):
        raise ValueError(f"parameters of {family['name']} without a bare entry")
    return Template(family["name"], b, tuple(family["classes"]), family["dim"],
                    family.get("condition"), grid, tuple(params), F)


@lru_cache(maxsize=None)
def load_templates() -> dict[str, tuple[Template, ...]]:
    out = {}
    for fam in _data("templates.json")["families"]:
        out[fam["name"]] = tuple(_build(fam, b, rows) for b, rows in enumerate(fam["branches"]))
    return out


def family_for(k: int | str) -> tuple[str, bool]:
    """Template family for class ``k`` and whether the transpose is matched."""
    if k == "cube":
        return "cube", False
    if k == "octahedron":
        return "cube", True
    for name, branches in load_templates().items():
        cls = branches[0].classes
        if k in cls:
            return name, k == cls[-1] and len(cls) == 2
    raise DomainError(f"no template for class {k!r}; templates cover classes 12-31")


@dataclass(frozen=True)
class TemplateMatch:
    family: str
    branch: int
    transposed: bool
    params: dict[str, Fraction]
    solutions: tuple[dict[str, Fraction], ...]
    row_map: tuple[int, ...]
    col_map: tuple[int, ...]

    def to_document(self) -> dict:
        return {
            "family": self.family,
            "branch": self.branch,
            "transposed": self.transposed,
            "params": {k: str(v) for k, v in self.params.items()},
            "solutions": [{k: str(v) for k, v in s.items()} for s in self.solutions],
        }


def _solve(T: Template, grid, row_map, col_map) -> dict[str, Fraction] | None:
    n, m = T.shape
    P = [[Fraction(0)] * m for _ in range(n)]
    for i, r in enumerate(grid):
        for j, x in enumerate(r):
            if x:
                P[row_map[i]][col_map[j]] = x
    N = gauge_normalize_grid(P, T.forest)
    params: dict[str, Fraction] = {}
    for i, r in enumerate(T.grid):
        for j, e in enumerate(r):
            v = e.bare()
            if v is not None:
                if params.setdefault(v, N[i][j]) != N[i][j]:
                    return None
    for i, r in enumerate(T.grid):
        for j, e in enumerate(r):
            if not e.is_zero() and e.evaluate(params) != N[i][j]:
                return None
    return params


def _key(T: Template, sol: dict[str, Fraction]) -> tuple:
    return tuple(sol[p] for p in T.params)


def match_template(S: SlackMatrix, k: int | str, first: bool = False) -> TemplateMatch | None:
    """Parameters putting ``S`` into the form for class ``k``, or ``None``.

    All support isomorphisms are tried unless ``first``; distinct parameter
    solutions are ordered by branch, then by decreasing parameter tuple, and
    the first of them is reported as ``params``.  Raises :class:`TemplateMismatch` when the
    support of ``S`` is not that of the class.
    """
    name, transposed = family_for(k)
    grid = S.transpose().matrix if transposed else S.matrix
    mask = [[1 if x else 0 for x in r] for r in grid]
    supported = False
    found: dict[tuple, tuple] = {}
    for T in load_templates()[name]:
        for row_map, col_map in iter_isomorphisms(mask, T.mask()):
            supported = True
            sol = _solve(T, grid, row_map, col_map)
            if sol is None:
                continue
            key = (T.branch,) + _key(T, sol)
            found.setdefault(key, (T, sol, row_map, col_map))
            if first:
                break
        if first and found:
            break
    if not supported:
        raise TemplateMismatch(f"support does not match the template for class {k}")
    if not found:
        return None
    keys = sorted(found, key=lambda kk: (kk[0], tuple(-v for v in kk[1:])))
    T, sol, rm, cm = found[keys[0]]
    sols = tuple(found[kk][1] for kk in keys if kk[0] == T.branch)
    return TemplateMatch(name, T.branch, transposed, sol, sols, rm, cm)


def condition_value(match: TemplateMatch) -> Fraction | None:
    T = load_templates()[match.family][match.branch]
    if T.condition is None:
        return None
    return CONDITIONS[T.condition](*(match.params[p] for p in T.params))


def template_hook(S: SlackMatrix) -> dict | None:
    """psd-minimality through a characterizing form, for the certifier.

    Tries every family whose support fits ``S`` (or its transpose).  A fit
    of a condition-free family, or of a class 12-15 form whose condition
    vanishes, proves psd-minimality.
    """
    candidates: list[int | str] = ["cube", "octahedron"] if S.dim == 3 else []
    if S.dim == 4:
        candidates = list(range(12, 32))
    for k in candidates:
        name, transposed = family_for(k)
        T0 = load_templates()[name][0]
        shape = (S.cols, S.rows) if transposed else S.shape
        if shape != T0.shape:
            continue
        try:
            m = match_template(S, k, first=True)
        except TemplateMismatch:
            continue
        if m is None:
            continue
        val = condition_value(m)
        if val is not None and val != 0:
            continue
        doc = m.to_document()
        doc["class"] = k
        if val is not None:
            doc["condition_value"] = str(val)
        return doc
    return None
