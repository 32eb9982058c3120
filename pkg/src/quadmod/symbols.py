"""p^k-symbols: square classes of Z/p^k and their pair-splitting counts.

The symbol of t mod p^k is the pair (ord, sgn): p-adic order together
with the sign of the coprime part (Legendre symbol for odd p, residue
mod 8 for p = 2).  Two elements share a symbol iff they differ by a
unit-square factor, so representation counts depend on targets only
through their symbol.  ``split_class_size`` counts, for a target t of
symbol gamma, the pairs (a, b) with prescribed symbols and a + b = t;
it is the convolution kernel that glues per-block counts together.
"""

from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple

from .modring import INF, DomainError, PrimePower, legendre, valuation

Ordinal = int | float  # finite order or INF


class PkSymbol(NamedTuple):
    """(p-adic order, square-class sign) of an element of Z/p^k."""

    ord: Ordinal
    sgn: int


SYMBOL_ZERO = PkSymbol(INF, 0)


def _check_symbol(pp: PrimePower, g: PkSymbol) -> None:
    if g.ord == INF:
        if g.sgn != 0:
            raise DomainError(f"order INF must carry sign 0, got {g}")
        return
    if not (isinstance(g.ord, int) and 0 <= g.ord < pp.k):
        raise DomainError(f"order {g.ord} out of range for k={pp.k}")
    allowed = (1, 3, 5, 7) if pp.p == 2 else (1, -1)
    if g.sgn not in allowed:
        raise DomainError(f"sign {g.sgn} invalid for p={pp.p}")


def symbol_of(pp: PrimePower, t: int) -> PkSymbol:
    """The symbol (ord, sgn) of t mod p^k."""
    r = t % pp.q
    if r == 0:
        return SYMBOL_ZERO
    ord_, cop = valuation(pp, r)
    sgn = cop % 8 if pp.p == 2 else legendre(cop, pp.p)
    return PkSymbol(ord_, sgn)


def enumerate_symbols(pp: PrimePower) -> list[PkSymbol]:
    """All formal symbols: 4k+1 of them for p=2, 2k+1 for odd p.

    For p = 2 the classes with k - ord <= 2 admit fewer sign values, so
    some listed symbols have empty classes; class_size reports 0 there.
    """
    signs = (1, 3, 5, 7) if pp.p == 2 else (1, -1)
    out = [SYMBOL_ZERO]
    for i in range(pp.k):
        out.extend(PkSymbol(i, s) for s in signs)
    return out


@lru_cache(maxsize=None)
def class_size(pp: PrimePower, g: PkSymbol) -> int:
    """|{x in Z/p^k : symbol(x) = g}|.

    Odd p: (p-1)/2 * p^(k-ord-1).  p = 2: 2^(k-ord-3) once k-ord >= 3;
    below that the coprime part lives mod 2 or mod 4, so only sgn = 1
    (resp. 1 or 3) is inhabited, with one element each.  Empty formal
    symbols report 0, keeping the partition sum equal to p^k.
    """
    _check_symbol(pp, g)
    if g.ord == INF:
        return 1
    m = pp.k - g.ord
    if pp.p != 2:
        return (pp.p - 1) // 2 * pp.p ** (m - 1)
    if m >= 3:
        return 2 ** (m - 3)
    # cop is canonical below 2^m: sgn is its value mod 8, so only
    # residues below 2^m occur.
    return 1 if g.sgn < 2**m else 0


def split_pair_count_mod_p(p: int, leg_a: int, s1: int, s2: int) -> int:
    """Count x mod p (odd p) with (x/p) = s1 and ((x+a)/p) = s2, given (a/p) = leg_a.

    Closed form: (p - (p mod 4) - (leg_a + s1)(leg_a*(-1/p) + s2)) / 4.
    """
    if p == 2:
        raise DomainError("split_pair_count_mod_p needs an odd prime")
    leg_minus1 = 1 if p % 4 == 1 else -1
    return (p - (p % 4) - (leg_a + s1) * (leg_a * leg_minus1 + s2)) // 4


def _negated_symbol(pp: PrimePower, g: PkSymbol) -> PkSymbol:
    """Symbol of -a for a in the (inhabited, finite-order) class g."""
    if pp.p != 2:
        return PkSymbol(g.ord, legendre(-1, pp.p) * g.sgn)
    # cop(-a) = 2^(k-ord) - cop(a) as a canonical residue; mod 8 that is
    # 8-s, 4-s, 2-s depending on how much room k-ord leaves.
    return PkSymbol(g.ord, (2 ** (pp.k - g.ord) - g.sgn) % 8)


def _difference_symbol(pp: PrimePower, g: PkSymbol, g1: PkSymbol) -> PkSymbol:
    """Symbol of t - a when symbol(t) = g, symbol(a) = g1, ord(g) != ord(g1).

    The lower order wins; the sign comes from the leading coprime part.
    For p = 2 the subtraction must be read modulo min(8, 2^(k - ord)):
    near the top of the ring fewer than three bits of the coprime part
    survive.
    """
    p, k = pp.p, pp.k
    if g.ord < g1.ord:
        o = g.ord
        delta = g1.ord - g.ord
        if p != 2:
            return PkSymbol(o, g.sgn)
        s = (g.sgn - 2**delta * g1.sgn) % min(8, 2 ** (k - o))
    else:
        o = g1.ord
        delta = g.ord - g1.ord
        if p != 2:
            return PkSymbol(o, legendre(-1, p) * g1.sgn)
        s = (2**delta * g.sgn - g1.sgn) % min(8, 2 ** (k - o))
    return PkSymbol(o, s)


@lru_cache(maxsize=None)
def split_class_size(pp: PrimePower, g: PkSymbol, g1: PkSymbol, g2: PkSymbol) -> int:
    """|{(a, b) : symbol(a) = g1, symbol(b) = g2, a + b = t mod p^k}|.

    Well-defined for any t with symbol g.  A target symbol with an empty
    class is vacuous and reports 0.

    Case analysis on the orders (a + b = t forces the two smallest of
    the three orders to be equal):

    * t = 0: pairs are (a, -a), so g2 must be the negated class of g1
      and every a in the g1-class works.
    * exactly one of g1, g2 is (INF, 0): the pair is (0, t) or (t, 0),
      one pair, present iff the other symbol is exactly g.
    * all three orders equal (odd p only; for p = 2 the sum of two
      elements of equal order has strictly larger order): reduce to the
      mod-p unit count with the Legendre substitution, then scale by
      p^(k-ord-1) free digits.
    * ord(g1) != ord(t): a determines b = t - a, so the count is the
      g1-class size provided symbol(t - a) = g2, which is a single
      symbol computable from g and g1.
    """
    for s in (g, g1, g2):
        _check_symbol(pp, s)
    p, k = pp.p, pp.k

    if g.ord == INF:
        if g1.ord == INF:
            return 1 if g2.ord == INF else 0
        if g2.ord == INF or g1.ord != g2.ord:
            return 0
        n1 = class_size(pp, g1)
        if n1 == 0:
            return 0
        return n1 if g2 == _negated_symbol(pp, g1) else 0

    # t is nonzero from here on.
    if g1.ord == INF:
        return 1 if g2 == g else 0
    if g2.ord == INF:
        return 1 if g1 == g else 0

    if g.ord == g1.ord == g2.ord:
        if p == 2:
            return 0
        mod_p = split_pair_count_mod_p(p, g1.sgn, g2.sgn, g.sgn)
        return mod_p * p ** (k - g.ord - 1)

    if g.ord == g1.ord:
        g1, g2 = g2, g1  # put the order mismatch on g1

    n1 = class_size(pp, g1)
    if n1 == 0:
        return 0
    return n1 if _difference_symbol(pp, g, g1) == g2 else 0
