"""psdmin command line.

Every subcommand builds a :class:`Report`; the JSON document is the
primary output and the text form is rendered from it.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .exact import DomainError
from .obstruction import trinomial_scan
from .polytope import GeometryError, VPolytope, facet_type_counts, f_vector, loads_polytope
from .slack import InternalConsistencyError, SlackMatrix, loads_matrix, slack_matrix, support
from .sqrtrank import (
    DEFAULT_BUDGET,
    INCONCLUSIVE,
    NOT_PSD_MINIMAL,
    certify_psd_minimal,
    write_certificate,
)

OK, FAIL = "ok", "fail"
EXIT = {OK: 0, FAIL: 1, "inconclusive": 4}
EXIT_USAGE, EXIT_INVARIANT = 2, 3


@dataclass
class Report:
    command: str
    inputs: dict
    findings: dict = field(default_factory=dict)
    status: str = OK

    @property
    def exit_code(self) -> int:
        return EXIT[self.status]

    def to_document(self) -> dict:
        return {"command": self.command, "inputs": self.inputs,
                "status": self.status, "findings": self.findings}

    def to_json(self) -> str:
        return json.dumps(self.to_document(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = [f"{self.command}: {self.status}"]
        for k, v in sorted(self.inputs.items()):
            lines.append(f"  {k} = {v}")
        lines += _render(self.findings, 1)
        return "\n".join(lines) + "\n"


def _render(obj, depth: int) -> list[str]:
    pad = "  " * depth
    out = []
    for k, v in obj.items():
        if isinstance(v, dict):
            out.append(f"{pad}{k}:")
            out += _render(v, depth + 1)
        elif isinstance(v, list) and v and isinstance(v[0], (dict, list)):
            out.append(f"{pad}{k}:")
            for item in v:
                if isinstance(item, dict):
                    out += _render(item, depth + 1)
                    out.append("")
                else:
                    out.append(f"{pad}  {' '.join(str(x) for x in item)}")
        elif isinstance(v, list) and any(isinstance(x, str) and " " in x for x in v):
            out.append(f"{pad}{k}:")
            out += [f"{pad}  {x}" for x in v]
        elif isinstance(v, list):
            out.append(f"{pad}{k}: {' '.join(str(x) for x in v)}")
        else:
            out.append(f"{pad}{k}: {v}")
    return out


# ---------------------------------------------------------------------------
# input


def load_input(path: str | Path) -> VPolytope | SlackMatrix:
    """Polytope JSON document or plain slack-matrix file, decided by content."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return loads_polytope(text)
    return loads_matrix(text)


def _slack(obj: VPolytope | SlackMatrix) -> SlackMatrix:
    return obj if isinstance(obj, SlackMatrix) else slack_matrix(obj)


# ---------------------------------------------------------------------------
# commands


def cmd_hull(path: str) -> Report:
    P = load_input(path)
    if not isinstance(P, VPolytope):
        raise ValueError("hull needs a polytope file, not a matrix")
    F = P.facets()
    found = {
        "dimension": P.dim,
        "vertices": P.n,
        "facets": [str(f) for f in F],
        "f_vector": list(f_vector(P)),
    }
    if P.dim == 4:
        found["facet_types"] = dict(sorted(facet_type_counts(P).items()))
    return Report("hull", {"file": str(path)}, found)


def cmd_trinomial(path: str, order: int | None = None, first: bool = False) -> Report:
    S = _slack(load_input(path))
    k = order if order is not None else S.dim + 2
    hits = trinomial_scan(support(S), k, first=first)
    found = {
        "shape": list(S.shape),
        "order": k,
        "hits": len(hits),
        "minors": [m.report_line() for m in hits],
    }
    return Report("trinomial", {"file": str(path), "order": k, "first": first},
                  found, FAIL if hits else OK)


def cmd_certify(path: str, budget: int = DEFAULT_BUDGET, exhaustive: bool = False,
                certificate: str | None = None, templates: bool = True) -> Report:
    S = _slack(load_input(path))
    if S.dim > 4:
        raise DomainError("certification is implemented for dimension at most 4")
    hook = None
    if templates:
        from .catalogue import template_hook
        hook = template_hook
    v = certify_psd_minimal(S, budget, exhaustive=exhaustive, template=hook)
    found = v.to_document()
    if certificate and v.certificate is not None:
        write_certificate(v.certificate, certificate)
        found["certificate_file"] = str(certificate)
    status = {NOT_PSD_MINIMAL: FAIL, INCONCLUSIVE: "inconclusive"}.get(v.status, OK)
    inputs = {"file": str(path), "budget": budget, "exhaustive": exhaustive, "templates": templates}
    return Report("certify", inputs, found, status)


def cmd_catalogue(k: int | None = None, all_classes: bool = False) -> Report:
    from .catalogue import record, verify_all, verify_class
    if all_classes:
        reps = verify_all()
        found = {
            "passed": sum(r.ok for r in reps),
            "total": len(reps),
            "classes": [{"id": r.id, "ok": r.ok, "failures": r.failures} for r in reps],
        }
        return Report("catalogue", {"all": True}, found, OK if all(r.ok for r in reps) else FAIL)
    rec = record(k)
    rep = verify_class(k)
    found = {"record": rec.to_document(), "checks": rep.checks, "details": rep.details}
    return Report("catalogue", {"class": k}, found, OK if rep.ok else FAIL)


# ---------------------------------------------------------------------------
# entry point


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="psdmin", description="Exact tools for psd-minimal polytopes.")
    p.add_argument("--json", action="store_true", help="print the machine-readable report")
    sub = p.add_subparsers(dest="command", required=True)

    h = sub.add_parser("hull", help="facets, f-vector and facet types of a polytope file")
    h.add_argument("file")

    t = sub.add_parser("trinomial", help="scan the symbolic slack matrix for trinomial minors")
    t.add_argument("file")
    t.add_argument("--order", type=int, default=None, help="minor order (default d+2)")
    t.add_argument("--first", action="store_true", help="stop at the first hit")

    c = sub.add_parser("certify", help="decide psd-minimality through Hadamard square roots")
    c.add_argument("file")
    c.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="sign patterns to try")
    c.add_argument("--exhaustive", action="store_true", help="ignore the budget and skip templates")
    c.add_argument("--certificate", metavar="OUT", help="write the root certificate here")
    c.add_argument("--no-templates", action="store_true", help="disable the template fast path")

    g = sub.add_parser("catalogue", help="verify catalogue classes")
    grp = g.add_mutually_exclusive_group(required=True)
    grp.add_argument("--class", dest="cls", type=int, metavar="K")
    grp.add_argument("--all", action="store_true")
    return p


def run(argv: list[str] | None = None) -> tuple[int, str, str]:
    """Run the CLI and return (exit code, stdout, stderr) without printing."""
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else EXIT_USAGE), "", ""
    try:
        if args.command == "hull":
            rep = cmd_hull(args.file)
        elif args.command == "trinomial":
            rep = cmd_trinomial(args.file, args.order, args.first)
        elif args.command == "certify":
            rep = cmd_certify(args.file, args.budget, args.exhaustive, args.certificate,
                              not args.no_templates)
        else:
            rep = cmd_catalogue(args.cls, args.all)
    except (GeometryError, InternalConsistencyError) as exc:
        return EXIT_INVARIANT, "", f"psdmin: invariant violation: {exc}\n"
    except (DomainError, ValueError, OSError) as exc:
        return EXIT_USAGE, "", f"psdmin: {exc}\n"
    out = rep.to_json() if args.json else rep.to_text()
    return rep.exit_code, out, ""


def main(argv: list[str] | None = None) -> int:
    code, out, err = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
