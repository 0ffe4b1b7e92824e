"""Recompute every catalogue entry from its vertex list."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ..exact import exact_rank
from ..polytope import comb_equivalent, f_vector, facet_type_counts, polar
from ..slack import slack_matrix
from ..sqrtrank import SignPattern, hadamard_root
from .binomials import FREE_SUM_CLASSES, LISTED_CLASSES, binomial_report
from .records import CLASS_IDS, build_class, record
from .templates import condition_value, match_template


@dataclass
class ClassReport:
    id: int
    checks: dict[str, bool] = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    @property
    def failures(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]

    def to_document(self) -> dict:
        return {"id": self.id, "ok": self.ok, "checks": dict(self.checks), "details": self.details}


def verify_class(k: int) -> ClassReport:
    rec = record(k)
    P = build_class(k)
    rep = ClassReport(k)

    fv = f_vector(P)
    rep.details["f_vector"] = list(fv)
    rep.checks["f_vector"] = fv == rec.f_vector

    ft = facet_type_counts(P)
    rep.details["facet_types"] = dict(sorted(ft.items()))
    rep.checks["facet_types"] = ft == rec.facet_types

    rep.details["dual"] = rec.dual
    rep.checks["dual"] = comb_equivalent(polar(P), build_class(rec.dual)) is not None

    S = slack_matrix(P)
    target = S.dim + 1
    ok = False
    if rec.witness:
        eps = SignPattern.from_string(rec.witness, S.rows, S.cols)
        if eps.fits(S):
            r = exact_rank(hadamard_root(S, eps))
            rep.details["witness_rank"] = r
            rep.details["witness_negatives"] = eps.negatives()
            ok = r == target
    rep.checks["certificate"] = ok

    if k in FREE_SUM_CLASSES or k in LISTED_CLASSES:
        b = binomial_report(k, S)
        rep.details["binomials"] = {"generators": b.generators, "vanishing": b.vanishing}
        rep.checks["binomials"] = b.ok
    elif k >= 12:
        m = match_template(S, k, first=True)
        rep.checks["template"] = m is not None
        if m is not None:
            rep.details["template"] = m.to_document()
            val = condition_value(m)
            if val is not None:
                rep.details["condition"] = rec.condition
                rep.details["condition_value"] = str(val)
                rep.checks["condition"] = val == 0
    return rep


def thread_cap() -> int:
    env = os.environ.get("PSDMIN_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def verify_all(workers: int | None = None) -> list[ClassReport]:
    """All 31 reports, ordered by class id."""
    n = workers or thread_cap()
    ids = list(CLASS_IDS)
    if n <= 1:
        return [verify_class(k) for k in ids]
    with ProcessPoolExecutor(max_workers=min(n, len(ids))) as pool:
        return list(pool.map(verify_class, ids))
