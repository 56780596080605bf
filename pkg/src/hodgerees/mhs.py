"""Mixed Hodge structures over a fixed real basis.

The real structure is coordinatewise complex conjugation, so ``F̄`` is simply
the entrywise conjugate of ``F`` and a weight step is real when it equals its
own conjugate.  All dimension counts reduce to ranks of stacked bases.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

from .filtration import (
    Filtration,
    _f_table,
    dec_shift,
    filtration_direct_sum,
    filtration_from_grading,
    from_increasing,
    t_from_f,
    to_increasing,
    trivial,
)
from .linalg import (
    EXACT,
    Backend,
    Matrix,
    Subspace,
    annihilator,
    complement_in,
    dim_of_sum,
    image,
    kron,
    subspace_intersect,
    sum_all,
)


class InvalidStructure(ValueError):
    """Raised when an operation needs a valid mixed Hodge structure and did not get one."""


class MixedHodgeStructure:
    """``(H_C, W_•, F^•)`` with ``W`` real and ``F`` pure on every ``Gr^W_n``.

    Parameters
    ----------
    ambient_dim:
        Dimension of ``H_C``.
    weight:
        Map ``m -> W_m`` of real subspaces (increasing).  Missing weights take
        the value of the nearest smaller key; below all keys ``W`` is zero and
        above all keys it is the full space.
    hodge:
        Map ``p -> F^p`` (decreasing), or a :class:`Filtration`.
    """

    def __init__(self, ambient_dim: int, weight: Mapping[int, Subspace] | Filtration,
                 hodge: Mapping[int, Subspace] | Filtration, backend: Backend = EXACT):
        self.ambient_dim = ambient_dim
        self.backend = backend
        if isinstance(weight, Filtration):
            self.W = weight  # decreasing avatar W^p = W_{-p}
        else:
            self.W = from_increasing(weight, ambient_dim, backend)
        self.F = hodge if isinstance(hodge, Filtration) else Filtration(ambient_dim, hodge, backend)
        if self.W.ambient_dim != ambient_dim or self.F.ambient_dim != ambient_dim:
            raise ValueError("filtrations do not live on the ambient space")
        self._trusted = False

    @classmethod
    def _build(cls, w_dec: Filtration, hodge: Filtration, trusted: bool) -> "MixedHodgeStructure":
        h = cls(w_dec.ambient_dim, w_dec, hodge, w_dec.backend)
        h._trusted = trusted
        return h

    # accessors ------------------------------------------------------------

    def weight_step(self, m: int) -> Subspace:
        """``W_m``."""
        return self.W[-m]

    def weights(self) -> range:
        """Weights ``n`` for which ``Gr^W_n`` can be nonzero."""
        if self.ambient_dim == 0:
            return range(0)
        return range(-self.W.highest, -self.W.lowest + 1)

    def weight_steps(self) -> dict[int, Subspace]:
        return dict(sorted(to_increasing(self.W).items()))

    @cached_property
    def Fbar(self) -> Filtration:
        return self.F.conjugate()

    def __repr__(self) -> str:
        gr = {n: self.weight_step(n).dim - self.weight_step(n - 1).dim for n in self.weights()}
        gr = {n: d for n, d in gr.items() if d}
        return f"MixedHodgeStructure(dim={self.ambient_dim}, Gr^W dims={gr})"

    # validity -------------------------------------------------------------

    @cached_property
    def problem(self) -> str | None:
        """``None`` for a valid structure, otherwise a description of the first defect."""
        if self._trusted:
            return None
        return _first_defect(self)

    def require_valid(self) -> None:
        if self.problem is not None:
            raise InvalidStructure(self.problem)


def _first_defect(h: MixedHodgeStructure) -> str | None:
    for m, s in h.weight_steps().items():
        if not s.is_real():
            return f"weight filtration not real: W_{m} is not conjugation-stable"
    F = h.F
    for n in h.weights():
        wn, wprev = h.weight_step(n), h.weight_step(n - 1)
        g = wn.dim - wprev.dim
        if g == 0:
            continue
        lo, hi = F.lowest, F.highest + 1
        cut = {p: subspace_intersect(F[p], wn) for p in range(lo, hi + 1)}

        def X(p):
            return cut[min(max(p, lo), hi)]

        induced = {p: dim_of_sum(X(p), wprev) - wprev.dim for p in range(lo, hi + 1)}

        def d(p):
            return induced[min(max(p, lo), hi)]

        for p in range(lo, hi + 1):
            q = n - p + 1
            if d(p) + d(q) != g or dim_of_sum(X(p), X(q).conjugate(), wprev) != wn.dim:
                return (f"F does not induce a pure Hodge structure of weight {n} "
                        f"on Gr^W_{n} (fails at F^{p} against conj F^{q})")
    return None


def validate(h: MixedHodgeStructure) -> bool:
    """True iff ``W`` is real and ``F`` induces pure structures on each ``Gr^W_n``."""
    return h.problem is None


def diagnose(h: MixedHodgeStructure) -> str | None:
    return h.problem


# ---------------------------------------------------------------------------
# numerical invariants


@dataclass(frozen=True)
class HodgeNumbers:
    """Hodge numbers ``h``, double-graded numbers ``t`` and the table ``f``.

    ``f`` is stored on the box ``[lo, hi]^2`` of Hodge levels; :meth:`f_at`
    extends it to all of ``Z^2``.
    """

    h: Counter
    t: Counter
    f: dict = field(default_factory=dict)
    box: tuple[int, int] = (0, 0)

    def f_at(self, p: int, q: int) -> int:
        lo, hi = self.box
        if not self.f:
            return 0
        return self.f[min(max(p, lo), hi), min(max(q, lo), hi)]


def _hodge_table(h: MixedHodgeStructure) -> Counter:
    """``h^{p,q} = dim Gr_F^p Gr^W_{p+q}`` from ranks of sums only.

    Uses ``dim(F^p ∩ W_n + W_{n-1}) = dim W_n - dim(F^p + W_n) + dim(F^p + W_{n-1})``.
    """
    out = Counter()
    F = h.F
    for n in h.weights():
        wn, wprev = h.weight_step(n), h.weight_step(n - 1)
        if wn.dim == wprev.dim:
            continue
        e = {}
        for p in range(F.lowest, F.highest + 2):
            fp = F[p]
            if fp.is_full:
                e[p] = wn.dim - wprev.dim
            elif fp.dim == 0:
                e[p] = 0
            else:
                e[p] = wn.dim - dim_of_sum(fp, wn) + dim_of_sum(fp, wprev) - wprev.dim
        for p in range(F.lowest, F.highest + 1):
            v = e[p] - e[p + 1]
            if v:
                out[p, n - p] = v
    return out


def hodge_numbers(h: MixedHodgeStructure) -> HodgeNumbers:
    h.require_valid()
    return _numbers(h)


def _numbers(h: MixedHodgeStructure) -> HodgeNumbers:
    cached = h.__dict__.get("_numbers_cache")
    if cached is not None:
        return cached
    if h.ambient_dim == 0:
        out = HodgeNumbers(Counter(), Counter(), {}, (0, 0))
    else:
        f = _f_table(h.F, h.Fbar)
        out = HodgeNumbers(_hodge_table(h), t_from_f(f), f, (h.F.lowest, h.F.highest + 1))
    h.__dict__["_numbers_cache"] = out
    return out


def t_numbers_direct(h: MixedHodgeStructure) -> Counter:
    """``t^{p,q} = dim Gr_{F̄}^q Gr_F^p`` measured on the quotients themselves.

    ``dim((F^p ∩ F̄^q) + F^{p+1}) - dim((F^p ∩ F̄^{q+1}) + F^{p+1})``; an
    independent route to the inclusion–exclusion formula.
    """
    out = Counter()
    F, Fb = h.F, h.Fbar
    for p in F.levels():
        below = F[p + 1]
        for q in Fb.levels():
            top = dim_of_sum(subspace_intersect(F[p], Fb[q]), below)
            bottom = dim_of_sum(subspace_intersect(F[p], Fb[q + 1]), below)
            if top - bottom:
                out[p, q] = top - bottom
    return out


def alpha_from_tables(hn: HodgeNumbers) -> int:
    twice = sum((p + q) ** 2 * v for (p, q), v in hn.h.items())
    twice -= sum((p + q) ** 2 * v for (p, q), v in hn.t.items())
    if twice % 2:
        raise ArithmeticError("R-splitting level is not an integer; tables are inconsistent")
    return twice // 2


def alpha(h: MixedHodgeStructure) -> int:
    """R-splitting level ``α = ½ Σ (p+q)^2 (h^{p,q} - t^{p,q})``."""
    return alpha_from_tables(hodge_numbers(h))


# ---------------------------------------------------------------------------
# Deligne splitting


def deligne_splitting(h: MixedHodgeStructure) -> dict[tuple[int, int], Subspace]:
    """``I^{p,q} = (F^p ∩ W_{p+q}) ∩ (F̄^q ∩ W_{p+q} + Σ_{i≥1} F̄^{q-i} ∩ W_{p+q-i-1})``.

    Only the nonzero pieces are returned.
    """
    h.require_valid()
    if h.ambient_dim == 0:
        return {}
    F, Fb = h.F, h.Fbar
    n_lo = min(h.weights())
    cache: dict = {}

    def cut(filt, tag, p, m):
        key = (tag, p, m)
        if key not in cache:
            cache[key] = subspace_intersect(filt[p], h.weight_step(m))
        return cache[key]

    out = {}
    for p in F.levels():
        for q in F.levels():
            n = p + q
            if n not in h.weights():
                continue
            a = cut(F, "F", p, n)
            if a.dim == 0:
                continue
            parts = [cut(Fb, "Fb", q, n)]
            i = 1
            while n - i - 1 >= n_lo:
                parts.append(cut(Fb, "Fb", q - i, n - i - 1))
                i += 1
            piece = subspace_intersect(a, sum_all(parts, h.ambient_dim, h.backend))
            if piece.dim:
                out[p, q] = piece
    return out


def deligne_lemma_failures(h: MixedHodgeStructure,
                           split: Mapping[tuple[int, int], Subspace] | None = None) -> list[str]:
    """Check the four clauses of Deligne's lemma; returns the failed ones."""
    split = deligne_splitting(h) if split is None else split
    n, backend = h.ambient_dim, h.backend
    zero = Subspace.zero(n, backend)
    failures = []
    for (p, q), piece in split.items():
        target = sum_all([split.get((q, p), zero).conjugate(), h.weight_step(p + q - 2)], n, backend)
        if not piece <= target:
            failures.append(f"(i) I^{p},{q} not congruent to conj I^{q},{p} mod W_{p + q - 2}")
    for m in h.weights():
        parts = [s for (p, q), s in split.items() if p + q <= m]
        total = sum(s.dim for s in parts)
        if total != h.weight_step(m).dim or sum_all(parts, n, backend) != h.weight_step(m):
            failures.append(f"(ii) W_{m} is not the direct sum of I^p,q with p+q <= {m}")
    for p in range(h.F.lowest, h.F.highest + 2):
        parts = [s for (a, _), s in split.items() if a >= p]
        if sum(s.dim for s in parts) != h.F[p].dim or sum_all(parts, n, backend) != h.F[p]:
            failures.append(f"(iii) F^{p} is not the direct sum of I^a,b with a >= {p}")
    hn = _numbers(h).h
    keys = set(hn) | set(split)
    for key in sorted(keys):
        got = split[key].dim if key in split else 0
        if got != hn.get(key, 0):
            failures.append(f"(iv) dim I^{key[0]},{key[1]} = {got} but h = {hn.get(key, 0)}")
    return failures


def is_r_split(h: MixedHodgeStructure) -> bool:
    """True iff ``I^{p,q} = conj(I^{q,p})`` for all ``(p, q)``."""
    split = deligne_splitting(h)
    for (p, q), piece in split.items():
        other = split.get((q, p))
        if other is None or other.conjugate() != piece:
            return False
    return True


# ---------------------------------------------------------------------------
# operations


def tate(k: int, backend: Backend = EXACT) -> MixedHodgeStructure:
    """Tate structure ``T⟨k⟩``: rank one, type ``(-k, -k)``, weight ``-2k``."""
    full = Subspace.full(1, backend)
    return MixedHodgeStructure(1, {-2 * k: full}, dec_shift(trivial(1, backend), -k), backend)


def tate_twist(h: MixedHodgeStructure, k: int) -> MixedHodgeStructure:
    """``H ⊗ T⟨k⟩``: ``F^p ↦ F^{p+k}`` and ``W_n ↦ W_{n+2k}`` on the same space."""
    return MixedHodgeStructure._build(dec_shift(h.W, 2 * k), dec_shift(h.F, -k), h._trusted)


def _dual_filtration(f: Filtration) -> Filtration:
    # F*^p = ann F^{1-p}
    n = f.ambient_dim
    if n == 0:
        return f
    return Filtration(n, {p: annihilator(f[1 - p]) for p in range(-f.highest, 1 - f.lowest + 1)},
                      f.backend)


def dual(h: MixedHodgeStructure) -> MixedHodgeStructure:
    """``Hom(H, T⟨0⟩)`` in the dual basis."""
    h.require_valid()
    return MixedHodgeStructure._build(_dual_filtration(h.W), _dual_filtration(h.F), True)


def direct_sum(h1: MixedHodgeStructure, h2: MixedHodgeStructure) -> MixedHodgeStructure:
    trusted = h1.problem is None and h2.problem is None
    return MixedHodgeStructure._build(filtration_direct_sum(h1.W, h2.W),
                                      filtration_direct_sum(h1.F, h2.F), trusted)


def _grading(f: Filtration) -> dict[int, Subspace]:
    """Complements ``V^a`` with ``F^p = ⊕_{a≥p} V^a``."""
    return {p: complement_in(f[p + 1], f[p]) for p in f.levels()}


def _tensor_filtration(f: Filtration, g: Filtration) -> Filtration:
    # with gradings of both factors the tensor steps are direct sums of
    # products of graded pieces
    n = f.ambient_dim * g.ambient_dim
    if n == 0:
        return trivial(0, f.backend)
    gf, gg = _grading(f), _grading(g)
    pieces: dict[int, list] = {}
    for a, x in gf.items():
        if x.dim == 0:
            continue
        for b, y in gg.items():
            if y.dim:
                pieces.setdefault(a + b, []).append(kron(x, y))
    graded = {c: sum_all(parts, n, f.backend) for c, parts in pieces.items()}
    return filtration_from_grading(graded, n, f.backend)


def zero_structure(backend: Backend = EXACT) -> MixedHodgeStructure:
    return MixedHodgeStructure(0, {}, {}, backend)


def tensor(h1: MixedHodgeStructure, h2: MixedHodgeStructure) -> MixedHodgeStructure:
    """``H ⊗ H'`` on the Kronecker ambient space."""
    h1.require_valid()
    h2.require_valid()
    return MixedHodgeStructure._build(_tensor_filtration(h1.W, h2.W),
                                      _tensor_filtration(h1.F, h2.F), True)


def kunneth_piece(xs: list[MixedHodgeStructure], ys: list[MixedHodgeStructure],
                  k: int) -> MixedHodgeStructure:
    """``⊕_{i+j=k} H^i(X) ⊗ H^j(Y)``."""
    out = zero_structure(xs[0].backend if xs else EXACT)
    for i, x in enumerate(xs):
        if 0 <= k - i < len(ys):
            out = direct_sum(out, tensor(x, ys[k - i]))
    return out


def kunneth_alpha_formula(xs: list[MixedHodgeStructure], ys: list[MixedHodgeStructure],
                          k: int) -> int:
    """``Σ_i dim H^{k-i}(Y) α_i(X) + dim H^i(X) α_{k-i}(Y)``."""
    total = 0
    for i, x in enumerate(xs):
        if 0 <= k - i < len(ys):
            y = ys[k - i]
            total += y.ambient_dim * alpha(x) + x.ambient_dim * alpha(y)
    return total


@dataclass(frozen=True)
class ExtensionData:
    """Linear map ``θ: B -> A`` as a ``dim A x dim B`` matrix acting on columns."""

    theta: Matrix


def _apply(theta: Matrix, y) -> list:
    zero = theta.entries[0][0] * 0 if theta.nrows and theta.ncols else 0
    out = []
    for row in theta.entries:
        s = zero
        for a, b in zip(row, y):
            if b:
                s = s + a * b
        out.append(s)
    return out


def extension_build(a: MixedHodgeStructure, b: MixedHodgeStructure,
                    ext: ExtensionData | Matrix) -> MixedHodgeStructure:
    """Extension ``0 -> A -> H -> B -> 0`` in normal form on ``A ⊕ B``.

    ``W_m(H) = W_m(A) ⊕ W_m(B)`` and
    ``F^p(H) = {(x + θ y, y) : x ∈ F^p(A), y ∈ F^p(B)}``.
    θ must send ``W_m(B)`` into ``W_m(A)`` for every ``m``.
    """
    a.require_valid()
    b.require_valid()
    theta = ext.theta if isinstance(ext, ExtensionData) else ext
    na, nb = a.ambient_dim, b.ambient_dim
    if theta.shape != (na, nb):
        raise ValueError(f"θ must be a {na}x{nb} matrix, got {theta.shape[0]}x{theta.shape[1]}")
    backend = a.backend
    n = na + nb
    for m in b.weights():
        wb = b.weight_step(m)
        if wb.dim == 0:
            continue
        image = Subspace.span([_apply(theta, y) for y in wb.basis.entries], na, backend)
        if not image <= a.weight_step(m):
            raise ValueError(f"θ is not weight-compatible: θ(W_{m}(B)) is not inside W_{m}(A)")
    lo = min(a.F.lowest, b.F.lowest) if na and nb else (a.F.lowest if na else b.F.lowest)
    hi = max(a.F.highest, b.F.highest) + 1
    steps = {}
    zeros_b = [0] * nb
    for p in range(lo, hi + 1):
        rows = [list(x) + zeros_b for x in a.F[p].basis.entries]
        rows += [_apply(theta, y) + list(y) for y in b.F[p].basis.entries]
        steps[p] = Subspace.span(rows, n, backend)
    w = filtration_direct_sum(a.W, b.W)
    return MixedHodgeStructure._build(w, Filtration(n, steps, backend), True)


def change_basis(h: MixedHodgeStructure, g: Matrix) -> MixedHodgeStructure:
    """Transport ``h`` along the real invertible map ``v -> v g``."""
    for row in g.entries:
        for x in row:
            if not x.is_real():
                raise ValueError("basis change must be real to preserve the real structure")
    return MixedHodgeStructure._build(h.W.map(lambda s: image(s, g)),
                                      h.F.map(lambda s: image(s, g)), h._trusted)
