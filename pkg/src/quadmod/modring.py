"""Arithmetic helpers for the ring Z/p^k.

Everything downstream works with plain Python ints as ring elements,
canonically reduced into ``range(p**k)`` at the boundaries.  A
:class:`PrimePower` instance carries the modulus around.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import NamedTuple

INF = math.inf  # p-adic order of 0

# Any deterministic seeded RNG with randrange(); random.Random is the one we use.
RandomSource = random.Random


class DomainError(ValueError):
    """An argument is outside the domain of the operation."""


class NotAUnit(DomainError):
    """Inversion was attempted on a non-unit."""


_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with a fixed witness set.

    Deterministic for n < 3.3e24; for larger n it is a standard
    probabilistic test with 12 fixed rounds.
    """
    if n < 2:
        return False
    for sp in _SMALL_PRIMES:
        if n % sp == 0:
            return n == sp
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimePower:
    """The modulus p^k with p prime and k >= 1."""

    p: int
    k: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise DomainError(f"exponent must be >= 1, got {self.k}")
        if not is_probable_prime(self.p):
            raise DomainError(f"{self.p} is not prime")

    @property
    def q(self) -> int:
        """The modulus itself, p**k."""
        return self.p**self.k


class Valuation(NamedTuple):
    """ord = p-adic order, cop = coprime part, so a = cop * p**ord."""

    ord: int | float
    cop: int


def valuation(pp: PrimePower, a: int) -> Valuation:
    """Split the integer a as cop * p**ord with p not dividing cop.

    The order of 0 is INF (with coprime part 0 by convention).
    """
    if a == 0:
        return Valuation(INF, 0)
    p = pp.p
    ord_ = 0
    while a % p == 0:
        a //= p
        ord_ += 1
    return Valuation(ord_, a)


def legendre(t: int, p: int) -> int:
    """Legendre symbol (t/p) for odd prime p and t coprime to p."""
    if p == 2:
        raise DomainError("Legendre symbol needs an odd prime")
    t %= p
    if t == 0:
        raise DomainError("Legendre symbol needs gcd(t, p) = 1")
    return 1 if pow(t, (p - 1) // 2, p) == 1 else -1


def kronecker2(t: int) -> int:
    """Kronecker symbol (t/2) restricted to odd t: +1 iff t = +-1 mod 8."""
    if t % 2 == 0:
        raise DomainError("kronecker2 needs odd t")
    return 1 if t % 8 in (1, 7) else -1


def sign_p(pp: PrimePower, t: int) -> int:
    """Square-class sign of t mod p^k.

    0 when t = 0 mod p^k; otherwise the Legendre symbol of the coprime
    part for odd p, and the coprime part mod 8 for p = 2.
    """
    r = t % pp.q
    if r == 0:
        return 0
    cop = valuation(pp, r).cop
    if pp.p == 2:
        return cop % 8
    return legendre(cop, pp.p)


def digits(pp: PrimePower, x: int) -> list[int]:
    """The k base-p digits of x mod p^k, least significant first."""
    r = x % pp.q
    out = []
    for _ in range(pp.k):
        out.append(r % pp.p)
        r //= pp.p
    return out


def recompose(pp: PrimePower, ds: list[int]) -> int:
    """Inverse of digits: sum of ds[i] * p**i, reduced mod p^k."""
    x = 0
    for d in reversed(ds):
        x = x * pp.p + d
    return x % pp.q


def inverse(pp: PrimePower, u: int) -> int:
    """Multiplicative inverse of u in Z/p^k."""
    if u % pp.p == 0:
        raise NotAUnit(f"{u} is divisible by {pp.p}, not a unit mod {pp.p}^{pp.k}")
    return pow(u, -1, pp.q)


def uniform_below(n: int, rng: RandomSource) -> int:
    """Uniform integer in [0, n).  Exact: no floating point involved."""
    if n < 1:
        raise DomainError(f"uniform_below needs n >= 1, got {n}")
    return rng.randrange(n)
