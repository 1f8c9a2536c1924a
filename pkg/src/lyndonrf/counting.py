"""Exact counts of primitive and Lyndon words (Möbius inversion)."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache


def _factorize(d: int) -> dict[int, int]:
    factors: dict[int, int] = {}
    p = 2
    while p * p <= d:
        while d % p == 0:
            factors[p] = factors.get(p, 0) + 1
            d //= p
        p += 1
    if d > 1:
        factors[d] = factors.get(d, 0) + 1
    return factors


def mobius(d: int) -> int:
    if d < 1:
        raise ValueError(f"Möbius function is defined for d >= 1, got {d}")
    factors = _factorize(d)
    if any(e > 1 for e in factors.values()):
        return 0
    return -1 if len(factors) % 2 else 1


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _check(n: int, q: int) -> None:
    if n < 1 or q < 2:
        raise ValueError(f"need n >= 1 and q >= 2, got n={n}, q={q}")


@lru_cache(maxsize=None)
def count_primitive(n: int, q: int = 2) -> int:
    _check(n, q)
    return sum(mobius(d) * q ** (n // d) for d in divisors(n))


def count_lyndon(n: int, q: int = 2) -> int:
    p = count_primitive(n, q)
    assert p % n == 0, f"{n} does not divide the primitive count {p}"
    return p // n


def count_nonprimitive(n: int, q: int = 2) -> int:
    return q ** n - count_primitive(n, q)


def atom_mass(n: int, q: int = 2) -> Fraction:
    """Exact probability that a uniform Lyndon word has right factor of length n-1.

    Those words are ``c v`` with ``v`` a Lyndon word over the letters
    ``>= c``, for every letter ``c`` except the largest; ``v`` ranges over
    Lyndon words on ``q, q-1, ..., 2`` letters.
    """
    _check(n, q)
    if n < 2:
        raise ValueError("atom mass needs n >= 2")
    if n == 2:
        # every Lyndon word xy (x < y) splits as x . y
        return Fraction(1)
    top = sum(count_lyndon(n - 1, k) for k in range(2, q + 1))
    return Fraction(top, count_lyndon(n, q))


@dataclass(frozen=True)
class CountReport:
    n: int
    q: int
    primitive_count: int
    lyndon_count: int
    nonprimitive_count: int

    def to_dict(self) -> dict:
        return asdict(self)


def count_report(n: int, q: int = 2) -> CountReport:
    return CountReport(n, q, count_primitive(n, q), count_lyndon(n, q),
                       count_nonprimitive(n, q))
