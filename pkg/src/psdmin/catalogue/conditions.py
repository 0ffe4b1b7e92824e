"""Polynomial conditions for psd-minimality in classes 12-15."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .records import _data


@lru_cache(maxsize=None)
def _terms(name: str) -> tuple[tuple[tuple[int, ...], Fraction], ...]:
    doc = _data("conditions.json")[name]
    return tuple((tuple(e), Fraction(c)) for e, c in doc["terms"])


def condition_variables(name: str) -> tuple[str, ...]:
    return tuple(_data("conditions.json")[name]["variables"])


def evaluate_condition(name: str, *point) -> Fraction:
    pt = [Fraction(x) for x in point]
    total = Fraction(0)
    for exps, c in _terms(name):
        t = c
        for x, e in zip(pt, exps):
            if e:
                t *= x ** e
        total += t
    return total


def quartic_12(x1, x2) -> Fraction:
    return evaluate_condition("quartic-12/13", x1, x2)


def octic_14(x10, x11, x12) -> Fraction:
    return evaluate_condition("octic-14/15", x10, x11, x12)


CONDITIONS = {
    "quartic-12/13": quartic_12,
    "octic-14/15": octic_14,
}
