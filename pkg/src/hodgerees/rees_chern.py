"""Chern characters of Rees bundles on P² and on its blow-up.

Classes are carried as coefficient tuples.  On P² the basis is ``1, w², w⁴``;
on the blow-up it is ``1``, the three divisor classes ``η_{D̃_i}`` and ``w̃⁴``.
Everything is assembled from the graded dimensions ``δ_{p,q,r}`` of a
tri-filtered space and the double-graded numbers ``t^{p,q}`` of its last two
filtrations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .filtration import Filtration, are_opposed, double_graded_dims, triple_graded_dims

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class ChernP2:
    """``rank + c1w2·w² + ch2w4·w⁴``."""

    rank: int
    c1w2: int
    ch2w4: Fraction

    def __add__(self, other: "ChernP2") -> "ChernP2":
        return ChernP2(self.rank + other.rank, self.c1w2 + other.c1w2, self.ch2w4 + other.ch2w4)


@dataclass(frozen=True)
class ChernBlowup:
    """``rank + d0·η_{D̃0} + d1·η_{D̃1} + d2·η_{D̃2} + ch2w4·w̃⁴``."""

    rank: int
    d0: int
    d1: int
    d2: int
    ch2w4: Fraction

    def __add__(self, other: "ChernBlowup") -> "ChernBlowup":
        return ChernBlowup(self.rank + other.rank, self.d0 + other.d0, self.d1 + other.d1,
                           self.d2 + other.d2, self.ch2w4 + other.ch2w4)


class NotOpposed(ValueError):
    """The three filtrations are not opposed."""


def chern_line_p2(r: int, p: int, q: int) -> ChernP2:
    s = r + p + q
    return ChernP2(1, s, HALF * s * s)


def chern_line_blowup(r: int, p: int, q: int) -> ChernBlowup:
    return ChernBlowup(1, r, p, q, HALF * (r * r + 2 * r * p + 2 * r * q))


def _check(f0: Filtration, f1: Filtration, f2: Filtration) -> None:
    dims = {f0.ambient_dim, f1.ambient_dim, f2.ambient_dim}
    if len(dims) != 1:
        raise ValueError(f"ambient dimension mismatch: {sorted(dims)}")


def chern_rees_blowup(f0: Filtration, f1: Filtration, f2: Filtration) -> ChernBlowup:
    _check(f0, f1, f2)
    total = ChernBlowup(0, 0, 0, 0, Fraction(0))
    for (p, q, r), d in triple_graded_dims(f0, f1, f2).items():
        line = chern_line_blowup(r, p, q)
        total += ChernBlowup(d, d * line.d0, d * line.d1, d * line.d2, d * line.ch2w4)
    return total


def chern_quotient_sheaf(f1: Filtration, f2: Filtration) -> ChernP2:
    """Torsion sheaf supported at the blown-up point: rank 0, ``½ Σ t^{p,q}(p+q)²``."""
    if f1.ambient_dim != f2.ambient_dim:
        raise ValueError(f"ambient dimension mismatch: {f1.ambient_dim} vs {f2.ambient_dim}")
    ch2 = sum((HALF * t * (p + q) ** 2 for (p, q), t in double_graded_dims(f1, f2).items()),
              Fraction(0))
    return ChernP2(0, 0, ch2)


def chern_rees_p2(f0: Filtration, f1: Filtration, f2: Filtration) -> ChernP2:
    _check(f0, f1, f2)
    c1 = 0
    ch2 = Fraction(0)
    for (p, q, r), d in triple_graded_dims(f0, f1, f2).items():
        c1 += d * (r + p + q)
        ch2 += d * HALF * (r * r + 2 * r * p + 2 * r * q)
    ch2 += chern_quotient_sheaf(f1, f2).ch2w4
    return ChernP2(f0.ambient_dim, c1, ch2)


def chern_rees_p2_opposed(f0: Filtration, f1: Filtration, f2: Filtration) -> ChernP2:
    """Closed form for opposed filtrations: ``½ Σ (t^{p,q} - δ_{p,q,-p-q})(p+q)²``."""
    _check(f0, f1, f2)
    delta = triple_graded_dims(f0, f1, f2)
    bad = sorted(k for k in delta if sum(k) != 0)
    if bad:
        p, q, r = bad[0]
        raise NotOpposed(f"filtrations are not opposed: δ_{{{p},{q},{r}}} = {delta[bad[0]]}")
    t = double_graded_dims(f1, f2)
    keys = set(t) | {(p, q) for p, q, _ in delta}
    ch2 = Fraction(0)
    for p, q in keys:
        ch2 += HALF * (t.get((p, q), 0) - delta.get((p, q, -p - q), 0)) * (p + q) ** 2
    return ChernP2(f0.ambient_dim, 0, ch2)


def mhs_filtrations(h) -> tuple[Filtration, Filtration, Filtration]:
    """``(W^•, F^•, F̄^•)`` of a mixed Hodge structure, with ``W^p = W_{-p}``."""
    return h.W, h.F, h.Fbar


__all__ = [
    "ChernP2",
    "ChernBlowup",
    "NotOpposed",
    "chern_line_p2",
    "chern_line_blowup",
    "chern_rees_blowup",
    "chern_quotient_sheaf",
    "chern_rees_p2",
    "chern_rees_p2_opposed",
    "mhs_filtrations",
    "are_opposed",
]
