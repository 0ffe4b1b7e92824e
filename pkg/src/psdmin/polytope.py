"""V-representation geometry for polytopes of dimension at most four.

Facets are found by brute force: every affinely independent d-subset of the
vertices spans a candidate hyperplane, which is kept when all vertices lie
on one closed side.  Everything is exact over :class:`fractions.Fraction`.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd, lcm
from pathlib import Path
from typing import Sequence

from .exact import DomainError, format_rational, parse_rational
from .iso import find_isomorphism

Vector = tuple[Fraction, ...]


class GeometryError(ValueError):
    """A polytope invariant is violated."""


class DimensionError(GeometryError):
    pass


class RedundancyError(GeometryError):
    pass


# ---------------------------------------------------------------------------
# small exact linear algebra on Fraction vectors


def _nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the right nullspace (reduced row echelon form)."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def rational_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows:
        return 0
    ncols = len(rows[0])
    return ncols - len(_nullspace([list(map(Fraction, r)) for r in rows], ncols))


def affine_rank(points: Sequence[Vector]) -> int:
    """Dimension of the affine hull (-1 for no points)."""
    if not points:
        return -1
    p0 = points[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    return rational_rank(diffs) if diffs else 0


def _primitive(vec: Sequence[Fraction]) -> tuple[int, ...]:
    den = reduce(lcm, (x.denominator for x in vec), 1)
    ints = [int(x * den) for x in vec]
    g = reduce(gcd, (abs(x) for x in ints), 0)
    return tuple(x // g for x in ints) if g else tuple(ints)


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class Facet:
    """Inequality ``normal . x <= offset`` with its incident vertex indices."""

    normal: tuple[int, ...]
    offset: int
    incident: frozenset[int]

    def slack(self, v: Sequence[Fraction]) -> Fraction:
        return self.offset - sum(a * x for a, x in zip(self.normal, v))

    def __str__(self) -> str:
        terms = " ".join(f"{a:+d}*x{k + 1}" for k, a in enumerate(self.normal) if a)
        return f"{terms} <= {self.offset}"


@dataclass(frozen=True)
class VPolytope:
    name: str
    dim: int
    vertices: tuple[Vector, ...]
    _facets: tuple[Facet, ...] | None = field(default=None, compare=False, repr=False)

    @classmethod
    def make(cls, name: str, vertices: Sequence[Sequence], dim: int | None = None) -> VPolytope:
        verts = tuple(tuple(Fraction(x) for x in v) for v in vertices)
        if not verts:
            raise DimensionError("polytope without vertices")
        d = len(verts[0]) if dim is None else dim
        if any(len(v) != d for v in verts):
            raise DimensionError("vertex coordinates do not match the dimension")
        if not 1 <= d <= 4:
            raise DomainError(f"dimension {d} outside 1..4")
        if len(set(verts)) != len(verts):
            raise GeometryError("repeated vertex")
        P = cls(name, d, verts)
        object.__setattr__(P, "_facets", tuple(_enumerate_facets(verts, d)))
        return P

    @property
    def n(self) -> int:
        return len(self.vertices)

    def facets(self) -> tuple[Facet, ...]:
        return self._facets

    def incidence(self) -> tuple[tuple[int, ...], ...]:
        fs = self.facets()
        return tuple(tuple(1 if i in f.incident else 0 for f in fs) for i in range(self.n))

    def relabel(self, order: Sequence[int], name: str | None = None) -> VPolytope:
        return VPolytope.make(name or self.name, [self.vertices[i] for i in order], self.dim)


def _enumerate_facets(verts: tuple[Vector, ...], d: int) -> list[Facet]:
    n = len(verts)
    if affine_rank(list(verts)) != d:
        raise DimensionError(f"points do not span a {d}-dimensional affine space")
    found: dict[tuple[int, ...], Facet] = {}
    covered: list[frozenset[int]] = []
    for sub in combinations(range(n), d):
        if any(set(sub) <= c for c in covered):
            continue
        rows = [list(verts[i]) + [Fraction(-1)] for i in sub]
        ns = _nullspace(rows, d + 1)
        if len(ns) != 1:
            continue
        vec = ns[0]
        a, beta = vec[:d], vec[d]
        vals = [sum(x * y for x, y in zip(a, v)) - beta for v in verts]
        if all(v <= 0 for v in vals):
            sign = 1
        elif all(v >= 0 for v in vals):
            sign = -1
        else:
            continue
        prim = _primitive([sign * x for x in a] + [sign * beta])
        inc = frozenset(i for i, v in enumerate(vals) if v == 0)
        covered.append(inc)
        found.setdefault(prim, Facet(prim[:d], prim[d], inc))
    facets = sorted(found.values(), key=lambda f: (f.normal, f.offset))
    # a point is a vertex iff the normals of the facets through it span R^d
    for i in range(n):
        normals = [list(map(Fraction, f.normal)) for f in facets if i in f.incident]
        if rational_rank(normals) < d if normals else True:
            raise RedundancyError(f"point {i} is not a vertex of the hull")
    return facets


# ---------------------------------------------------------------------------
# operations


def facets(P: VPolytope) -> tuple[Facet, ...]:
    return P.facets()


def face_lattice(P: VPolytope) -> dict[frozenset[int], int]:
    """All faces (as vertex sets, including the empty face and P) -> dimension.

    Faces are the closed sets of the vertex-facet Galois connection, i.e. the
    intersections of facet vertex sets; dimension is the height in the lattice.
    """
    full = frozenset(range(P.n))
    fsets = [f.incident for f in P.facets()]
    faces = {full}
    frontier = [full]
    while frontier:
        nxt = []
        for F in frontier:
            for G in fsets:
                H = F & G
                if H not in faces:
                    faces.add(H)
                    nxt.append(H)
        frontier = nxt
    faces.add(frozenset())
    dims: dict[frozenset[int], int] = {}
    for F in sorted(faces, key=len):
        below = [dims[G] for G in dims if G < F]
        dims[F] = max(below) + 1 if below else -1
    return dims


def f_vector(P: VPolytope) -> tuple[int, ...]:
    counts = Counter(face_lattice(P).values())
    return tuple(counts[k] for k in range(P.dim))


FACET_TYPES = {
    (4, 4, (3, 3, 3, 3)): "S",
    (5, 5, (3, 3, 3, 3, 4)): "Py",
    (5, 6, (3, 3, 3, 3, 3, 3)): "B",
    (6, 5, (3, 3, 4, 4, 4)): "Pr",
    (6, 8, (3,) * 8): "O",
    (8, 6, (4,) * 6): "C",
}


def facet_polytope(P: VPolytope, f: Facet) -> VPolytope:
    """The facet as a full-dimensional polytope in d-1 coordinates.

    Dropping a coordinate where the normal is nonzero is an affine
    isomorphism of the facet hyperplane onto R^(d-1).
    """
    k = next(i for i, a in enumerate(f.normal) if a)
    pts = [tuple(x for j, x in enumerate(P.vertices[i]) if j != k) for i in sorted(f.incident)]
    return VPolytope.make(f"{P.name}/facet", pts, P.dim - 1)


def combinatorial_key(Q: VPolytope) -> tuple:
    fs = Q.facets()
    return (Q.n, len(fs), tuple(sorted(len(g.incident) for g in fs)))


def facet_type(P: VPolytope, f: Facet) -> str:
    if P.dim != 4:
        raise DomainError("facet types are defined for 4-polytopes")
    return FACET_TYPES.get(combinatorial_key(facet_polytope(P, f)), "other")


def facet_type_counts(P: VPolytope) -> dict[str, int]:
    return dict(Counter(facet_type(P, f) for f in P.facets()))


def centroid(P: VPolytope) -> Vector:
    return tuple(sum(v[k] for v in P.vertices) / P.n for k in range(P.dim))


def polar(P: VPolytope, name: str | None = None) -> VPolytope:
    """Polar after translating the vertex centroid to the origin."""
    c = centroid(P)
    verts = []
    for f in P.facets():
        gap = f.offset - sum(a * x for a, x in zip(f.normal, c))
        verts.append(tuple(Fraction(a) / gap for a in f.normal))
    return VPolytope.make(name or f"polar({P.name})", verts, P.dim)


def comb_equivalent(P: VPolytope, Q: VPolytope):
    """Vertex and facet bijections carrying the incidence of P onto Q, or None."""
    if P.dim != Q.dim or P.n != Q.n or len(P.facets()) != len(Q.facets()):
        return None
    return find_isomorphism(P.incidence(), Q.incidence())


# ---------------------------------------------------------------------------
# file format


def polytope_to_document(P: VPolytope) -> dict:
    return {
        "name": P.name,
        "dimension": P.dim,
        "vertices": [[format_rational(x) for x in v] for v in P.vertices],
    }


def polytope_from_document(doc: dict) -> VPolytope:
    try:
        name = str(doc["name"])
        dim = int(doc["dimension"])
        raw = doc["vertices"]
        verts = [[parse_rational(str(x)) for x in v] for v in raw]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed polytope document: {exc}") from None
    return VPolytope.make(name, verts, dim)


def dumps_polytope(P: VPolytope) -> str:
    return json.dumps(polytope_to_document(P), indent=2) + "\n"


def loads_polytope(text: str) -> VPolytope:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"not a JSON document: {exc}") from None
    return polytope_from_document(doc)


def read_polytope(path: str | Path) -> VPolytope:
    return loads_polytope(Path(path).read_text())


def write_polytope(P: VPolytope, path: str | Path) -> None:
    Path(path).write_text(dumps_polytope(P))
