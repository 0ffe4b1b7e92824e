"""Hadamard square roots and the search for a low-rank sign pattern.

Flipping every sign in a row or a column of a square root does not change
its rank, so signs on a spanning forest of the support graph can be fixed
to +1.  Only the 2^c co-forest signs remain, visited in Gray-code order.
Each candidate is first reduced modulo a prime where all radicands are
squares: a homomorphic image never gains rank, so a modular rank above the
target rejects the candidate outright.  Survivors are confirmed exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from .exact import DomainError, ExactMatrix, ModularImage, QuadElem, exact_rank, modular_rank
from .polytope import VPolytope
from .slack import GaugeForest, SlackMatrix, gauge_forest, slack_matrix

WITNESS = "witness-found"
EXHAUSTED = "exhausted-no-witness"
BUDGET = "budget-exceeded"

DEFAULT_BUDGET = 1 << 16

_SYMBOL = {1: "+", -1: "-", 0: "0"}
_VALUE = {"+": 1, "-": -1, "0": 0}


@dataclass(frozen=True)
class SignPattern:
    grid: tuple[tuple[int, ...], ...]

    @classmethod
    def ones(cls, S: SlackMatrix) -> SignPattern:
        return cls(tuple(tuple(1 if x else 0 for x in r) for r in S.matrix))

    @classmethod
    def from_string(cls, text: str, rows: int, cols: int) -> SignPattern:
        flat = "".join(text.split()).replace("−", "-")
        if len(flat) != rows * cols or any(ch not in _VALUE for ch in flat):
            raise ValueError(f"sign string must have {rows * cols} symbols from '+-0'")
        vals = [_VALUE[ch] for ch in flat]
        return cls(tuple(tuple(vals[i * cols:(i + 1) * cols]) for i in range(rows)))

    def to_string(self) -> str:
        return "".join(_SYMBOL[x] for r in self.grid for x in r)

    def fits(self, S: SlackMatrix) -> bool:
        return len(self.grid) == S.rows and all(
            len(r) == S.cols and all((e != 0) == (x != 0) for e, x in zip(r, row))
            for r, row in zip(self.grid, S.matrix))

    def negatives(self) -> int:
        return sum(1 for r in self.grid for x in r if x < 0)


@dataclass(frozen=True)
class RootCertificate:
    rows: int
    cols: int
    target: int
    status: str
    signs: SignPattern | None
    rank: int | None
    explored: int
    coforest: int

    @property
    def found(self) -> bool:
        return self.status == WITNESS

    def to_document(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "target": self.target,
            "status": self.status,
            "rank": self.rank,
            "signs": self.signs.to_string() if self.signs else None,
            "explored": self.explored,
            "coforest_edges": self.coforest,
        }

    @classmethod
    def from_document(cls, doc: dict) -> RootCertificate:
        signs = doc.get("signs")
        pat = SignPattern.from_string(signs, doc["rows"], doc["cols"]) if signs else None
        return cls(doc["rows"], doc["cols"], doc["target"], doc["status"], pat,
                   doc.get("rank"), doc.get("explored", 0), doc.get("coforest_edges", 0))


def write_certificate(cert: RootCertificate, path: str | Path) -> None:
    Path(path).write_text(json.dumps(cert.to_document(), indent=2) + "\n")


def read_certificate(path: str | Path) -> RootCertificate:
    return RootCertificate.from_document(json.loads(Path(path).read_text()))


def _grid(eps) -> Sequence[Sequence[int]] | None:
    if eps is None:
        return None
    return eps.grid if isinstance(eps, SignPattern) else eps


def hadamard_root(S: SlackMatrix, eps: SignPattern | Sequence[Sequence[int]] | None = None) -> ExactMatrix:
    """Entrywise ``eps_ij * sqrt(S_ij)``; ``eps=None`` is the positive root."""
    g = _grid(eps)
    rows = []
    for i, r in enumerate(S.matrix):
        out = []
        for j, x in enumerate(r):
            if x < 0:
                raise DomainError("Hadamard roots need a nonnegative matrix")
            root = QuadElem.sqrt(x) if x else QuadElem()
            if g is not None and g[i][j] < 0:
                root = -root
            out.append(root)
        rows.append(out)
    return ExactMatrix(rows)


def positive_root_rank(S: SlackMatrix) -> int:
    return exact_rank(hadamard_root(S))


def _root_primes(S: SlackMatrix) -> set[int]:
    out: set[int] = set()
    for r in S.matrix:
        for x in r:
            if x:
                out |= QuadElem.sqrt(x).primes()
    return out


def sqrt_rank_search(S: SlackMatrix, target: int, budget: int | None = DEFAULT_BUDGET,
                     forest: GaugeForest | None = None) -> RootCertificate:
    """Look for a sign pattern whose Hadamard root has rank at most ``target``.

    ``budget=None`` means no limit.  The full co-forest sign space is covered
    before ``exhausted-no-witness`` is reported.
    """
    if target < 1:
        raise DomainError("target rank must be at least 1")
    F = forest or gauge_forest(S.mask())
    co = sorted(F.coforest)
    c = len(co)
    root = hadamard_root(S)
    image = ModularImage(_root_primes(S))
    q = image.q
    mod = [[image.image(x) for x in row] for row in root.entries]
    signs = [list(r) for r in SignPattern.ones(S).grid]
    total = 1 << c
    limit = total if budget is None else min(total, budget)
    explored = 0
    gray = 0
    for step in range(limit):
        if step:
            g = step ^ (step >> 1)
            bit = (g ^ gray).bit_length() - 1
            gray = g
            i, j = co[bit]
            signs[i][j] = -signs[i][j]
            mod[i][j] = (q - mod[i][j]) % q
        explored += 1
        mr = modular_rank(mod, q, stop_above=target)
        if mr > target:
            continue
        pattern = SignPattern(tuple(map(tuple, signs)))
        # mod-q rank <= exact rank <= min(shape), so a full modular rank is exact
        if mr == min(S.rows, S.cols):
            r = mr
        else:
            r = exact_rank(hadamard_root(S, pattern), stop_above=target)
        if r <= target:
            return RootCertificate(S.rows, S.cols, target, WITNESS, pattern, r, explored, c)
    status = EXHAUSTED if limit == total else BUDGET
    return RootCertificate(S.rows, S.cols, target, status, None, None, explored, c)


PSD_MINIMAL = "psd-minimal"
NOT_PSD_MINIMAL = "not-psd-minimal"
INCONCLUSIVE = "inconclusive"


@dataclass
class Verdict:
    status: str
    method: str
    certificate: RootCertificate | None = None
    details: dict = field(default_factory=dict)

    def to_document(self) -> dict:
        return {
            "status": self.status,
            "method": self.method,
            "certificate": self.certificate.to_document() if self.certificate else None,
            "details": self.details,
        }


TemplateHook = Callable[[SlackMatrix], "dict | None"]


def certify_psd_minimal(P: VPolytope | SlackMatrix, budget: int | None = DEFAULT_BUDGET,
                        exhaustive: bool = False, template: TemplateHook | None = None) -> Verdict:
    """Positive root first, then an optional template hook, then the sign search.

    A negative verdict is only returned after the whole sign space has been
    covered; a search cut short by the budget is inconclusive.
    """
    S = P if isinstance(P, SlackMatrix) else slack_matrix(P)
    target = S.dim + 1
    ones = SignPattern.ones(S)
    r = positive_root_rank(S)
    if r <= target:
        F = gauge_forest(S.mask())
        cert = RootCertificate(S.rows, S.cols, target, WITNESS, ones, r, 1, len(F.coforest))
        return Verdict(PSD_MINIMAL, "positive-root", cert)
    if template is not None and not exhaustive:
        found = template(S)
        if found is not None:
            return Verdict(PSD_MINIMAL, "template", None, found)
    cert = sqrt_rank_search(S, target, None if exhaustive else budget)
    if cert.status == WITNESS:
        return Verdict(PSD_MINIMAL, "search", cert)
    if cert.status == EXHAUSTED:
        return Verdict(NOT_PSD_MINIMAL, "search", cert)
    return Verdict(INCONCLUSIVE, "search", cert)
