"""Exact scalars and matrices over the rationals and multiquadratic fields.

Every number here is either a :class:`fractions.Fraction` or a
:class:`QuadElem`, a finite sum ``sum(c_m * sqrt(m))`` over squarefree
positive integers ``m``.  Square roots of distinct squarefree integers are
linearly independent over Q, so a ``QuadElem`` is zero exactly when its
term map is empty; this is what makes exact rank computation possible.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Sequence

from sympy import factorint, isprime
from sympy.ntheory import sqrt_mod

Number = "int | Fraction | QuadElem"


class DomainError(ValueError):
    """Raised when an argument lies outside an operation's domain."""


# ---------------------------------------------------------------------------
# rationals


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (base 10, optional leading minus)."""
    s = text.strip().replace("−", "-")
    if not s:
        raise ValueError("empty rational")
    num, sep, den = s.partition("/")
    try:
        if sep:
            if den.strip() == "":
                raise ValueError
            return Fraction(int(num), int(den))
        return Fraction(int(num))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational: {text!r}") from None


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# squarefree normal form


def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(s, r)`` with ``n == r*r*s`` and ``s`` squarefree."""
    if isinstance(n, bool) or not isinstance(n, int):
        raise DomainError(f"squarefree_split needs a positive integer, got {n!r}")
    if n <= 0:
        raise DomainError(f"squarefree_split needs n >= 1, got {n}")
    return _squarefree_split(n)


@lru_cache(maxsize=65536)
def _squarefree_split(n: int) -> tuple[int, int]:
    r = isqrt(n)
    if r * r == n:
        return 1, r
    s, r = 1, 1
    for p, e in factorint(n).items():
        r *= p ** (e // 2)
        if e % 2:
            s *= p
    return s, r


@lru_cache(maxsize=65536)
def _prime_factors(m: int) -> tuple[int, ...]:
    return tuple(sorted(factorint(m))) if m > 1 else ()


# ---------------------------------------------------------------------------
# multiquadratic field elements


class QuadElem:
    """Immutable element of Q(sqrt(m1), ..., sqrt(mk))."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: dict[int, Fraction] | None = None):
        # caller guarantees squarefree keys and nonzero coefficients
        self._terms: dict[int, Fraction] = terms or {}
        self._hash: int | None = None

    # construction -------------------------------------------------------

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, Fraction | int]]) -> QuadElem:
        """Build from arbitrary ``(m, c)`` pairs, normalizing every key."""
        out: dict[int, Fraction] = {}
        for m, c in terms:
            if m <= 0:
                raise DomainError(f"radicand must be positive, got {m}")
            s, r = _squarefree_split(m)
            v = out.get(s, Fraction(0)) + Fraction(c) * r
            if v:
                out[s] = v
            else:
                out.pop(s, None)
        return cls(out)

    @classmethod
    def rational(cls, x: Fraction | int) -> QuadElem:
        x = Fraction(x)
        return cls({1: x}) if x else cls()

    @classmethod
    def sqrt(cls, x: Fraction | int) -> QuadElem:
        """Nonnegative square root of a nonnegative rational."""
        x = Fraction(x)
        if x < 0:
            raise DomainError(f"square root of negative rational {x}")
        if x == 0:
            return cls()
        # sqrt(p/q) = sqrt(p*q)/q
        s, r = _squarefree_split(x.numerator * x.denominator)
        return cls({s: Fraction(r, x.denominator)})

    # inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 1 in self._terms)

    def rational_part(self) -> Fraction:
        return self._terms.get(1, Fraction(0))

    def radicands(self) -> tuple[int, ...]:
        return tuple(sorted(m for m in self._terms if m != 1))

    def primes(self) -> set[int]:
        out: set[int] = set()
        for m in self._terms:
            out.update(_prime_factors(m))
        return out

    def __float__(self) -> float:
        return float(sum(float(c) * (m ** 0.5) for m, c in self._terms.items()))

    def sign(self) -> int:
        """Sign of the real number, decided exactly."""
        if not self._terms:
            return 0
        # Split on one radical: a + b*sqrt(p) with a, b in a smaller field.
        primes = sorted(self.primes())
        if not primes:
            return (self._terms[1] > 0) - (self._terms[1] < 0)
        p = primes[-1]
        a: dict[int, Fraction] = {}
        b: dict[int, Fraction] = {}
        for m, c in self._terms.items():
            if m % p == 0:
                b[m // p] = c
            else:
                a[m] = c
        qa, qb = QuadElem(a), QuadElem(b)
        sa, sb = qa.sign(), qb.sign()
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb if sa == 0 else sa
        # opposite signs: compare a^2 with p*b^2
        d = (qa * qa - qb * qb * p).sign()
        return sa * d

    # arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> QuadElem | None:
        if isinstance(other, QuadElem):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElem.rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for m, c in o._terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return QuadElem(out)

    __radd__ = __add__

    def __neg__(self) -> QuadElem:
        return QuadElem({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return QuadElem()
            return QuadElem({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, QuadElem):
            return NotImplemented
        return quad_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_rational():
            r = o.rational_part()
            if not r:
                raise ZeroDivisionError("division by zero QuadElem")
            return self * (1 / r)
        return quad_mul(self, quad_inv(o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def conjugate(self, p: int) -> QuadElem:
        """Image under the automorphism sqrt(p) -> -sqrt(p) for prime ``p``."""
        return QuadElem({m: (-c if m % p == 0 else c) for m, c in self._terms.items()})

    # comparison ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        return f"QuadElem({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m in sorted(self._terms):
            c = self._terms[m]
            if m == 1:
                parts.append(format_rational(c))
            elif c == 1:
                parts.append(f"sqrt({m})")
            elif c == -1:
                parts.append(f"-sqrt({m})")
            else:
                parts.append(f"{format_rational(c)}*sqrt({m})")
        return " + ".join(parts).replace("+ -", "- ")


def quad_mul(a: QuadElem, b: QuadElem) -> QuadElem:
    """Exact product; sqrt(m)*sqrt(n) = g*sqrt(mn/g^2) with g = gcd(m, n)."""
    out: dict[int, Fraction] = {}
    for m, c in a._terms.items():
        for n, d in b._terms.items():
            if m == 1:
                key, coef = n, c * d
            elif n == 1:
                key, coef = m, c * d
            else:
                g = gcd(m, n)
                key, coef = (m // g) * (n // g), c * d * g
            v = out.get(key)
            if v is None:
                out[key] = coef
            else:
                v += coef
                if v:
                    out[key] = v
                else:
                    del out[key]
    return QuadElem(out)


def quad_inv(a: QuadElem) -> QuadElem:
    """Multiplicative inverse via the product of all nontrivial conjugates.

    Multiplying by the conjugate over each prime in turn kills that radical;
    the accumulated multiplier is the product of the 2^k - 1 conjugates.
    """
    if not isinstance(a, QuadElem):
        a = QuadElem.rational(a)
    if a.is_zero():
        raise ZeroDivisionError("inverse of zero QuadElem")
    multiplier = QuadElem.rational(1)
    cur = a
    for p in sorted(a.primes()):
        c = cur.conjugate(p)
        multiplier = quad_mul(multiplier, c)
        cur = quad_mul(cur, c)
    assert cur.is_rational() and cur, "norm must be a nonzero rational"
    return multiplier * (1 / cur.rational_part())


def as_quad(x) -> QuadElem:
    if isinstance(x, QuadElem):
        return x
    return QuadElem.rational(x)


# ---------------------------------------------------------------------------
# matrices


class ExactMatrix:
    """Dense immutable matrix of QuadElem entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence]):
        grid = tuple(tuple(as_quad(x) for x in row) for row in entries)
        widths = {len(r) for r in grid}
        if len(widths) > 1:
            raise DomainError("ragged matrix")
        self.entries = grid
        self.rows = len(grid)
        self.cols = widths.pop() if widths else 0

    def __getitem__(self, ij: tuple[int, int]) -> QuadElem:
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, ExactMatrix) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(x) for x in row) for row in self.entries)
        return f"ExactMatrix({self.rows}x{self.cols}: {body})"

    def transpose(self) -> ExactMatrix:
        return ExactMatrix(list(zip(*self.entries)) if self.rows else [])

    def to_float(self) -> list[list[float]]:
        return [[float(x) for x in row] for row in self.entries]


def exact_rank(M: ExactMatrix | Sequence[Sequence], stop_above: int | None = None) -> int:
    """Rank over the multiquadratic field by Gaussian elimination.

    With ``stop_above`` set, elimination stops as soon as more than that many
    independent rows are found and returns ``stop_above + 1``.
    """
    if not isinstance(M, ExactMatrix):
        M = ExactMatrix(M)
    rows = [list(r) for r in M.entries]
    ncols = M.cols
    rank = 0
    col = 0
    pending = rows
    for col in range(ncols):
        if not pending:
            break
        piv_idx = None
        # prefer rational pivots: their inverse is cheap
        for idx, r in enumerate(pending):
            x = r[col]
            if x and x.is_rational():
                piv_idx = idx
                break
        if piv_idx is None:
            for idx, r in enumerate(pending):
                if r[col]:
                    piv_idx = idx
                    break
        if piv_idx is None:
            continue
        piv = pending.pop(piv_idx)
        rank += 1
        if stop_above is not None and rank > stop_above:
            return rank
        inv = quad_inv(piv[col])
        nxt = []
        for r in pending:
            f = r[col]
            if f:
                f = f * inv
                r = [r[j] - f * piv[j] if piv[j] else r[j] for j in range(ncols)]
            if any(r[col + 1:]):
                nxt.append(r)
        pending = nxt
    return rank


# ---------------------------------------------------------------------------
# modular images: a rank lower bound by a ring homomorphism into F_q


class ModularImage:
    """A homomorphism Z_(q)[sqrt(p) : p in primes] -> F_q.

    Each prime radicand p is sent to a fixed square root of p mod q, chosen
    so that every prime involved is a quadratic residue.  A homomorphic image
    of a matrix can only lose rank, so ``rank mod q > r`` proves
    ``rank > r`` over the field.
    """

    def __init__(self, primes: Iterable[int], seed: int = 0x5EED, bits: int = 61):
        self.primes = tuple(sorted(set(primes)))
        rng = random.Random(seed)
        # q = 1 mod 8 and q = 1 mod p makes every p a square by reciprocity
        M = 8
        for p in self.primes:
            if p != 2:
                M *= p
        kmin = max((1 << (bits - 1)) // M, 1 << 20)
        while True:
            q = rng.randrange(kmin, kmin << 1) * M + 1
            if not isprime(q):
                continue
            # Euler criterion as a guard
            if all(pow(p, (q - 1) // 2, q) == 1 for p in self.primes):
                break
        self.q = q
        self.root = {p: sqrt_mod(p, q) for p in self.primes}
        self._key_cache: dict[int, int] = {1: 1}

    def _key(self, m: int) -> int:
        v = self._key_cache.get(m)
        if v is None:
            v = 1
            for p in _prime_factors(m):
                v = v * self.root[p] % self.q
            self._key_cache[m] = v
        return v

    def image(self, x) -> int:
        q = self.q
        if isinstance(x, (int, Fraction)):
            x = Fraction(x)
            return x.numerator % q * pow(x.denominator, -1, q) % q
        acc = 0
        for m, c in x._terms.items():
            acc += c.numerator % q * pow(c.denominator, -1, q) % q * self._key(m)
        return acc % q


def modular_rank(rows: Sequence[Sequence[int]], q: int, stop_above: int | None = None) -> int:
    """Rank of an integer matrix over F_q (entries already reduced)."""
    pending = [list(r) for r in rows]
    if not pending:
        return 0
    ncols = len(pending[0])
    rank = 0
    for col in range(ncols):
        piv = None
        for idx, r in enumerate(pending):
            if r[col]:
                piv = pending.pop(idx)
                break
        if piv is None:
            continue
        rank += 1
        if stop_above is not None and rank > stop_above:
            return rank
        inv = pow(piv[col], -1, q)
        nxt = []
        for r in pending:
            f = r[col]
            if f:
                f = f * inv % q
                r = [(a - f * b) % q for a, b in zip(r, piv)]
            for a in r[col + 1:]:
                if a:
                    nxt.append(r)
                    break
        pending = nxt
        if not pending:
            break
    return rank


def matrix_primes(M: ExactMatrix) -> set[int]:
    out: set[int] = set()
    for row in M.entries:
        for x in row:
            out |= x.primes()
    return out


def rank_at_most(M: ExactMatrix, r: int, image: ModularImage | None = None) -> bool:
    """Exact test ``rank(M) <= r``; a modular image rejects cheaply first."""
    if image is None:
        image = ModularImage(matrix_primes(M))
    q = image.q
    rows = [[image.image(x) for x in row] for row in M.entries]
    if modular_rank(rows, q, stop_above=r) > r:
        return False
    return exact_rank(M, stop_above=r) <= r
