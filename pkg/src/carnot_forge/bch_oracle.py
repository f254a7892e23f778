"""Reference Baker-Campbell-Hausdorff product via truncated series in the free associative algebra.

Independent of :func:`carnot_forge.nilpotent.dynkin`: it multiplies ``exp(A) exp(B)`` as
non-commutative power series in two letters, takes the series logarithm, and turns each
homogeneous degree-``m`` piece into a Lie element with the Dynkin-Specht-Wever projection
``w_1 ... w_m -> (1/m) [[...[w_1, w_2], ...], w_m]``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial


def _mul(p: dict, q: dict, depth: int) -> dict:
    out: dict = {}
    for u, a in p.items():
        for v, b in q.items():
            if len(u) + len(v) > depth:
                continue
            key = u + v
            out[key] = out.get(key, 0) + a * b
    return {k: c for k, c in out.items() if c}


def _series_exp(letter: str, depth: int) -> dict:
    return {(letter,) * k: Fraction(1, factorial(k)) for k in range(depth + 1)}


@lru_cache(maxsize=None)
def bch_words(depth: int) -> tuple:
    """Words of ``log(exp(A) exp(B))`` up to length ``depth`` with their coefficients."""
    prod = _mul(_series_exp("A", depth), _series_exp("B", depth), depth)
    Z = {k: c for k, c in prod.items() if k}  # prod - 1
    log: dict = {}
    power = {(): Fraction(1)}
    for k in range(1, depth + 1):
        power = _mul(power, Z, depth)
        sign = Fraction((-1) ** (k + 1), k)
        for word, c in power.items():
            log[word] = log.get(word, 0) + sign * c
    return tuple(sorted((w, c) for w, c in log.items() if c))


def bch_oracle(bracket, xi, eta, depth: int):
    """``log(exp(xi) exp(eta))`` in a nilpotent algebra of step ``<= depth``.

    ``bracket(u, v)`` must return the bracket of two coefficient vectors.
    """
    letters = {"A": list(xi), "B": list(eta)}
    total = [x * 0 for x in xi]
    for word, c in bch_words(depth):
        v = letters[word[0]]
        for letter in word[1:]:
            v = bracket(v, letters[letter])
        scale = c / len(word)
        total = [t + scale * x for t, x in zip(total, v)]
    return total
