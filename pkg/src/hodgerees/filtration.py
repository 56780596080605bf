"""Decreasing filtrations, their graded dimensions and simultaneous splittings."""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from itertools import product
from typing import Callable, Iterable, Mapping, Sequence

from .linalg import (
    EXACT,
    Backend,
    Subspace,
    complement_in,
    dim_of_intersection,
    dim_of_sum,
    kron,
    subspace_intersect,
    sum_all,
)
from .linalg import direct_sum as _block_sum

GradedDims = Counter


class Filtration:
    """A decreasing exhaustive filtration ``F^p`` of a finite-dimensional space.

    Stored by its jumps: ``F^p`` is the full space for ``p <= lowest`` and zero
    for ``p > highest``; the proper nonzero steps in between are kept in a tuple.
    Two filtrations are equal when all their steps are equal.
    """

    __slots__ = ("ambient_dim", "backend", "_first", "_steps")

    def __init__(self, ambient_dim: int, steps: Mapping[int, Subspace] | None = None,
                 backend: Backend = EXACT):
        self.ambient_dim = ambient_dim
        self.backend = backend
        steps = dict(steps or {})
        for p, s in steps.items():
            if not isinstance(p, int):
                raise TypeError("filtration levels must be integers")
            if s.ambient_dim != ambient_dim:
                raise ValueError(f"level {p}: ambient dimension {s.ambient_dim} != {ambient_dim}")
        if ambient_dim == 0 or not steps:
            # no stored levels means the trivial filtration jumping at 1
            self._first, self._steps = 1, ()
            return
        lo, hi = min(steps), max(steps)
        values = []
        current = None
        for p in range(lo, hi + 1):
            if p in steps:
                current = steps[p]
            values.append(current)
        for p, (big, small) in enumerate(zip(values, values[1:]), start=lo):
            if not small <= big:
                raise ValueError(f"filtration is not decreasing at level {p + 1}")
        # trim full prefix and zero suffix
        k = 0
        while k < len(values) and values[k].dim == ambient_dim:
            k += 1
        end = len(values)
        while end > k and values[end - 1].dim == 0:
            end -= 1
        self._first = lo + k
        self._steps = tuple(values[k:end])

    @classmethod
    def _raw(cls, ambient_dim: int, first: int, steps: Sequence[Subspace], backend: Backend):
        """Build from already-canonical data: ``steps[k] = F^{first+k}``."""
        f = cls.__new__(cls)
        f.ambient_dim, f.backend = ambient_dim, backend
        steps = list(steps)
        k = 0
        while k < len(steps) and steps[k].dim == ambient_dim:
            k += 1
        end = len(steps)
        while end > k and steps[end - 1].dim == 0:
            end -= 1
        f._first, f._steps = first + k, tuple(steps[k:end])
        return f

    # levels ---------------------------------------------------------------

    @property
    def lowest(self) -> int:
        """Largest ``p`` with ``F^p`` the full space."""
        return self._first - 1

    @property
    def highest(self) -> int:
        """Largest ``p`` with ``F^p`` nonzero (equals ``lowest`` for a one-step filtration)."""
        return self._first - 1 + len(self._steps)

    def __getitem__(self, p: int) -> Subspace:
        if p < self._first:
            return Subspace.full(self.ambient_dim, self.backend)
        k = p - self._first
        if k < len(self._steps):
            return self._steps[k]
        return Subspace.zero(self.ambient_dim, self.backend)

    def levels(self) -> range:
        """Levels that can carry a nonzero graded piece."""
        if self.ambient_dim == 0:
            return range(0)
        return range(self.lowest, self.highest + 1)

    def steps(self) -> dict[int, Subspace]:
        """Explicit map of levels from ``lowest`` to ``highest + 1``."""
        if self.ambient_dim == 0:
            return {}
        return {p: self[p] for p in range(self.lowest, self.highest + 2)}

    def dim_at(self, p: int) -> int:
        return self[p].dim

    def graded_dim(self, p: int) -> int:
        return self[p].dim - self[p + 1].dim

    def graded_dims(self) -> GradedDims:
        return Counter({(p,): d for p in self.levels() if (d := self.graded_dim(p))})

    def map(self, fn: Callable[[Subspace], Subspace], ambient_dim: int | None = None) -> "Filtration":
        n = self.ambient_dim if ambient_dim is None else ambient_dim
        if self.ambient_dim == 0:
            return Filtration(n, {}, self.backend) if n == 0 else trivial(n, self.backend)
        return Filtration(n, {p: fn(s) for p, s in self.steps().items()}, self.backend)

    def conjugate(self) -> "Filtration":
        return Filtration._raw(self.ambient_dim, self._first,
                               [s.conjugate() for s in self._steps], self.backend)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Filtration):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim
                and (self.ambient_dim == 0 or (self._first == other._first
                                               and self._steps == other._steps)))

    def __hash__(self):
        return hash((self.ambient_dim, self._first, self._steps))

    def __repr__(self) -> str:
        if self.ambient_dim == 0:
            return "Filtration(dim=0)"
        dims = ", ".join(f"{p}:{self[p].dim}" for p in range(self.lowest, self.highest + 2))
        return f"Filtration(dim={self.ambient_dim}, dims {{{dims}}})"


def _same_ambient(*fs: Filtration) -> None:
    dims = {f.ambient_dim for f in fs}
    if len(dims) > 1:
        raise ValueError(f"ambient dimension mismatch: {sorted(dims)}")


# ---------------------------------------------------------------------------
# constructors


def trivial(ambient_dim: int, backend: Backend = EXACT) -> Filtration:
    """``Triv^0`` full, ``Triv^1`` zero."""
    return Filtration._raw(ambient_dim, 1, [], backend)


def dec_shift(f: Filtration, r: int) -> Filtration:
    """Shifted filtration with ``Dec^r F^p = F^{p-r}``."""
    return Filtration._raw(f.ambient_dim, f._first + r, f._steps, f.backend)


def from_increasing(weights: Mapping[int, Subspace], ambient_dim: int,
                    backend: Backend = EXACT) -> Filtration:
    """Decreasing avatar ``W^p = W_{-p}`` of an increasing filtration.

    ``weights`` maps some weights ``m`` to ``W_m``.  Below the smallest key the
    filtration is zero, above the largest it is the full space, and in between
    ``W_m`` keeps the value of the nearest key ``<= m``.
    """
    if ambient_dim == 0 or not weights:
        return trivial(ambient_dim, backend)
    lo, hi = min(weights), max(weights)
    values = {}
    current = None
    for m in range(lo, hi + 1):
        if m in weights:
            current = weights[m]
        values[m] = current
    for m in range(lo, hi):
        if not values[m] <= values[m + 1]:
            raise ValueError(f"weight filtration is not increasing at weight {m + 1}")
    steps = {-m: values[m] for m in values}
    steps[-hi - 1] = Subspace.full(ambient_dim, backend)
    steps[-lo + 1] = Subspace.zero(ambient_dim, backend)
    return Filtration(ambient_dim, steps, backend)


def to_increasing(f: Filtration) -> dict[int, Subspace]:
    """Inverse of :func:`from_increasing`: ``{m: W_m}`` over the jump range."""
    return {-p: s for p, s in f.steps().items()}


def filtration_direct_sum(f: Filtration, g: Filtration) -> Filtration:
    if f.backend.exact != g.backend.exact:
        raise ValueError("backend mismatch")
    n = f.ambient_dim + g.ambient_dim
    if n == 0:
        return trivial(0, f.backend)
    levels = [p for h in (f, g) if h.ambient_dim for p in (h.lowest, h.highest + 1)]
    lo, hi = min(levels), max(levels)
    return Filtration(n, {p: _block_sum(f[p], g[p]) for p in range(lo, hi + 1)}, f.backend)


def filtration_tensor(f: Filtration, g: Filtration) -> Filtration:
    """``(F ⊗ G)^p = Σ_{a+b=p} F^a ⊗ G^b`` on the Kronecker ambient space."""
    n = f.ambient_dim * g.ambient_dim
    if n == 0:
        return trivial(0, f.backend)
    lo, hi = f.lowest + g.lowest, f.highest + g.highest
    steps = {}
    for p in range(lo + 1, hi + 1):
        parts = []
        for a in range(f.lowest, f.highest + 1):
            b = p - a
            if b > g.highest:
                continue
            parts.append(kron(f[a], g[max(b, g.lowest)]))
        steps[p] = sum_all(parts, n, f.backend)
    steps[lo] = Subspace.full(n, f.backend)
    steps[hi + 1] = Subspace.zero(n, f.backend)
    return Filtration(n, steps, f.backend)


# ---------------------------------------------------------------------------
# graded dimensions


def graded_dim(f: Filtration, p: int) -> int:
    return f.graded_dim(p)


def _f_table(f1: Filtration, f2: Filtration) -> dict[tuple[int, int], int]:
    """``dim(F1^p ∩ F2^q)`` on the box where it can vary (plus one step beyond)."""
    table = {}
    for p in range(f1.lowest, f1.highest + 2):
        a = f1[p]
        for q in range(f2.lowest, f2.highest + 2):
            b = f2[q]
            if a.dim == 0 or b.dim == 0:
                table[p, q] = 0
            elif a.is_full:
                table[p, q] = b.dim
            elif b.is_full:
                table[p, q] = a.dim
            else:
                table[p, q] = dim_of_intersection(a, b)
    return table


def intersection_dims(f1: Filtration, f2: Filtration) -> dict[tuple[int, int], int]:
    """The table ``f^{p,q} = dim(F1^p ∩ F2^q)`` over the jump box."""
    _same_ambient(f1, f2)
    if f1.ambient_dim == 0:
        return {}
    return _f_table(f1, f2)


def t_from_f(table: Mapping[tuple[int, int], int]) -> GradedDims:
    """Inclusion–exclusion ``t = f^{p,q} - f^{p+1,q} - f^{p,q+1} + f^{p+1,q+1}``."""
    out = Counter()
    for (p, q), v in table.items():
        if (p + 1, q + 1) not in table:
            continue
        t = v - table[p + 1, q] - table[p, q + 1] + table[p + 1, q + 1]
        if t:
            out[p, q] = t
    return out


def double_graded_dims(f1: Filtration, f2: Filtration) -> GradedDims:
    """``t^{p,q} = dim Gr_{F2}^q Gr_{F1}^p V`` keyed by ``(p, q)``."""
    _same_ambient(f1, f2)
    if f1.ambient_dim == 0:
        return Counter()
    return t_from_f(_f_table(f1, f2))


def triple_graded_dims(f0: Filtration, f1: Filtration, f2: Filtration) -> GradedDims:
    """``δ_{p,q,r} = dim Gr_{F2}^q Gr_{F1}^p Gr_{F0}^r V`` keyed by ``(p, q, r)``.

    On each ``Gr_{F0}^r = F0^r / F0^{r+1}`` the induced filtrations are lifted to
    ``(Fi^· ∩ F0^r) + F0^{r+1}`` and everything is measured in the ambient space.
    """
    _same_ambient(f0, f1, f2)
    out = Counter()
    if f0.ambient_dim == 0:
        return out
    for r in f0.levels():
        top, bottom = f0[r], f0[r + 1]
        g = top.dim - bottom.dim
        if g == 0:
            continue
        lifts1 = {p: subspace_intersect(f1[p], top) for p in range(f1.lowest, f1.highest + 2)}
        lifts2 = {q: subspace_intersect(f2[q], top) for q in range(f2.lowest, f2.highest + 2)}
        dims1 = {p: dim_of_sum(s, bottom) for p, s in lifts1.items()}
        dims2 = {q: dim_of_sum(s, bottom) for q, s in lifts2.items()}
        table = {}
        for p, a in lifts1.items():
            for q, b in lifts2.items():
                both = dim_of_sum(a, b, bottom)
                table[p, q] = dims1[p] + dims2[q] - both - bottom.dim
        for (p, q), t in t_from_f(table).items():
            out[p, q, r] = t
    return out


def multifilt_dim_fn(filtrations: Sequence[Filtration]) -> Callable[..., int]:
    """Dimension function of the Rees module: ``levels -> dim ∩_i F_i^{p_i}``."""
    filtrations = list(filtrations)
    _same_ambient(*filtrations)

    @lru_cache(maxsize=None)
    def D(*levels: int) -> int:
        if len(levels) == 1 and isinstance(levels[0], tuple):
            levels = levels[0]
        if len(levels) != len(filtrations):
            raise ValueError(f"expected {len(filtrations)} levels, got {len(levels)}")
        parts = [f[p] for f, p in zip(filtrations, levels)]
        if any(s.dim == 0 for s in parts):
            return 0
        proper = [s for s in parts if not s.is_full]
        if not proper:
            return filtrations[0].ambient_dim if filtrations else 0
        acc = proper[0]
        for s in proper[1:]:
            acc = subspace_intersect(acc, s)
        return acc.dim

    return D


# ---------------------------------------------------------------------------
# splittings


def simultaneous_bigrading(f1: Filtration, f2: Filtration) -> dict[tuple[int, int], Subspace]:
    """A bigrading ``V = ⊕ V^{p,q}`` compatible with two filtrations.

    Walks the lattice of intersections ``G(p,q) = F1^p ∩ F2^q`` from the top
    levels downwards and lets ``V^{p,q}`` complete a basis of
    ``G(p+1,q) + G(p,q+1)`` to a basis of ``G(p,q)``.  Only nonzero pieces are
    returned.
    """
    _same_ambient(f1, f2)
    out: dict[tuple[int, int], Subspace] = {}
    if f1.ambient_dim == 0:
        return out
    n, backend = f1.ambient_dim, f1.backend
    ps = range(f1.highest + 1, f1.lowest - 1, -1)
    qs = range(f2.highest + 1, f2.lowest - 1, -1)
    grid: dict[tuple[int, int], Subspace] = {}
    for p in ps:
        for q in qs:
            grid[p, q] = subspace_intersect(f1[p], f2[q])
    zero = Subspace.zero(n, backend)
    for p in ps:
        for q in qs:
            below = sum_all([grid.get((p + 1, q), zero), grid.get((p, q + 1), zero)], n, backend)
            piece = complement_in(below, grid[p, q])
            if piece.dim:
                out[p, q] = piece
    return out


def are_opposed(f0: Filtration, f1: Filtration, f2: Filtration) -> bool:
    """True iff ``δ_{p,q,r} = 0`` whenever ``p + q + r != 0``."""
    return all(p + q + r == 0 for (p, q, r) in triple_graded_dims(f0, f1, f2))


def split_compatibility_check(f0: Filtration, f1: Filtration, f2: Filtration) -> bool:
    """Necessary condition for the three filtrations to split simultaneously.

    Compares ``dim(F0^r ∩ F1^p ∩ F2^q)`` with the sum of ``δ`` over all
    componentwise larger multi-indices, on the whole box where either side can
    change.
    """
    _same_ambient(f0, f1, f2)
    if f0.ambient_dim == 0:
        return True
    delta = triple_graded_dims(f0, f1, f2)
    D = multifilt_dim_fn([f0, f1, f2])
    rs = range(f0.lowest, f0.highest + 2)
    ps = range(f1.lowest, f1.highest + 2)
    qs = range(f2.lowest, f2.highest + 2)
    for r, p, q in product(rs, ps, qs):
        predicted = sum(v for (a, b, c), v in delta.items() if a >= p and b >= q and c >= r)
        if D(r, p, q) != predicted:
            return False
    return True


def bigrading_filtrations(pieces: Mapping[tuple[int, int], Subspace], ambient_dim: int,
                          backend: Backend = EXACT) -> tuple[Filtration, Filtration]:
    """Rebuild ``(F1, F2)`` from a bigrading via the compatibility sums."""
    if not pieces:
        return trivial(ambient_dim, backend), trivial(ambient_dim, backend)
    p_lo = min(p for p, _ in pieces)
    p_hi = max(p for p, _ in pieces)
    q_lo = min(q for _, q in pieces)
    q_hi = max(q for _, q in pieces)
    f1 = {p: sum_all([s for (a, _), s in pieces.items() if a >= p], ambient_dim, backend)
          for p in range(p_lo, p_hi + 2)}
    f2 = {q: sum_all([s for (_, b), s in pieces.items() if b >= q], ambient_dim, backend)
          for q in range(q_lo, q_hi + 2)}
    return Filtration(ambient_dim, f1, backend), Filtration(ambient_dim, f2, backend)


def filtration_from_grading(pieces: Mapping[int, Subspace], ambient_dim: int,
                            backend: Backend = EXACT) -> Filtration:
    """``F^p = ⊕_{a >= p} V^a`` for a grading ``{a: V^a}``."""
    if not pieces:
        return trivial(ambient_dim, backend)
    lo, hi = min(pieces), max(pieces)
    return Filtration(ambient_dim, {
        p: sum_all([s for a, s in pieces.items() if a >= p], ambient_dim, backend)
        for p in range(lo, hi + 2)
    }, backend)


def levels_union(fs: Iterable[Filtration]) -> range:
    fs = [f for f in fs if f.ambient_dim]
    if not fs:
        return range(0)
    return range(min(f.lowest for f in fs), max(f.highest for f in fs) + 1)
