"""Seeded random mixed Hodge structures for property checks.

Instances are towers of extensions of random pure structures, optionally
transported by a random real change of basis so that no coordinate block
structure survives.  Entries are small Gaussian rationals.
"""

from __future__ import annotations

import random
from collections import Counter
from fractions import Fraction

from .filtration import Filtration
from .linalg import GaussianRational, Matrix, Subspace, _complex_rows, _realify, rank
from .mhs import ExtensionData, MixedHodgeStructure, change_basis, extension_build, zero_structure


def random_rational(rng: random.Random, bound: int = 10) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_scalar(rng: random.Random, bound: int = 10, real: bool = False) -> GaussianRational:
    if real:
        return GaussianRational(random_rational(rng, bound))
    return GaussianRational(random_rational(rng, bound), random_rational(rng, bound))


def random_hodge_types(rng: random.Random, weight: int, dim: int) -> list[tuple[int, int]]:
    """A symmetric multiset of types ``(p, weight - p)`` with ``dim`` elements."""
    if weight % 2 and dim % 2:
        raise ValueError("odd weight needs even dimension")
    types = []
    if weight % 2 == 0:
        mid = weight // 2
        pairs = rng.randint(0, dim // 2)
        for _ in range(pairs):
            p = mid + rng.randint(1, 2)
            types += [(p, weight - p), (weight - p, p)]
        types += [(mid, mid)] * (dim - 2 * pairs)
    else:
        for _ in range(dim // 2):
            p = (weight + 1) // 2 + rng.randint(0, 1)
            types += [(p, weight - p), (weight - p, p)]
    return sorted(types, reverse=True)


def random_pure(rng: random.Random, weight: int, types: list[tuple[int, int]],
                bound: int = 10) -> MixedHodgeStructure:
    """Pure structure of the given weight with a random basis adapted to ``types``."""
    dim = len(types)
    while True:
        vectors: list[tuple[int, list]] = []  # (hodge level p, vector)
        pending = Counter(types)
        for (p, q), count in sorted(pending.items(), reverse=True):
            if p < q:
                continue
            for _ in range(count):
                if p == q:
                    v = [random_scalar(rng, bound, real=True) for _ in range(dim)]
                    vectors.append((p, v))
                else:
                    v = [random_scalar(rng, bound) for _ in range(dim)]
                    vectors.append((p, v))
                    vectors.append((q, [x.conjugate() for x in v]))
        if rank(Matrix.of([v for _, v in vectors], dim)) == dim:
            break
    levels = sorted({p for p, _ in vectors})
    steps = {}
    for a in range(levels[0], levels[-1] + 2):
        steps[a] = Subspace.span([v for p, v in vectors if p >= a], dim)
    full = Subspace.full(dim)
    return MixedHodgeStructure(dim, {weight: full, weight - 1: Subspace.zero(dim)},
                               Filtration(dim, steps))


def random_theta(rng: random.Random, rows: int, cols: int, bound: int = 10) -> Matrix:
    mode = rng.random()
    entries = []
    for _ in range(rows):
        row = []
        for _ in range(cols):
            if mode < 0.15:
                row.append(GaussianRational(0))
            elif mode < 0.4:
                row.append(random_scalar(rng, bound, real=True))
            else:
                row.append(random_scalar(rng, bound))
        entries.append(row)
    return Matrix.of(entries, cols)


def random_real_invertible(rng: random.Random, dim: int, bound: int = 5) -> Matrix:
    while True:
        g = Matrix.of([[random_scalar(rng, bound, real=True) for _ in range(dim)] for _ in range(dim)], dim)
        if rank(g) == dim:
            return g


def random_weight_layout(rng: random.Random, max_dim: int = 8, max_length: int = 4,
                         weight_range: tuple[int, int] = (-2, 4),
                         min_length: int = 1) -> list[tuple[int, int]]:
    """Random list of ``(weight, dim)`` with distinct increasing weights."""
    length = rng.randint(min_length, max_length)
    weights = sorted(rng.sample(range(weight_range[0], weight_range[1] + 1), length))
    layout = []
    budget = max_dim
    for k, w in enumerate(weights):
        lo = 2 if w % 2 else 1
        # keep room for the remaining weights (odd weights need 2)
        cap = budget - sum(2 if v % 2 else 1 for v in weights[k + 1:])
        if cap < lo:
            continue
        d = rng.randint(lo, min(cap, lo + 3))
        if w % 2 and d % 2:
            d -= 1
        layout.append((w, d))
        budget -= d
    if not layout:
        evens = [w for w in range(weight_range[0], weight_range[1] + 1) if w % 2 == 0]
        if evens and max_dim >= 1:
            layout = [(rng.choice(evens), rng.randint(1, min(max_dim, 4)))]
    return layout


def random_mhs(rng: random.Random, max_dim: int = 8, max_length: int = 4,
               mix_basis: bool = True,
               weight_range: tuple[int, int] = (-2, 4), min_length: int = 1) -> MixedHodgeStructure:
    """Tower of extensions of random pure structures; ``dim <= max_dim``."""
    layout = random_weight_layout(rng, max_dim, max_length, weight_range, min_length)
    if not layout:
        raise ValueError(f"no weight layout fits in dimension {max_dim}")
    h = None
    for w, d in layout:
        piece = random_pure(rng, w, random_hodge_types(rng, w, d))
        if h is None:
            h = piece
        else:
            theta = random_theta(rng, h.ambient_dim, d)
            h = extension_build(h, piece, ExtensionData(theta))
    if mix_basis and rng.random() < 0.5:
        h = change_basis(h, random_real_invertible(rng, h.ambient_dim))
    return h


def random_extension_triple(rng: random.Random, max_dim: int = 8):
    """Random ``(A, B, θ)`` with θ compatible with the weight filtrations."""
    da = rng.randint(1, max_dim - 1)
    a = random_mhs(rng, max_dim=da, max_length=3)
    b = random_mhs(rng, max_dim=max_dim - a.ambient_dim, max_length=3)
    return a, b, ExtensionData(compatible_theta(rng, a, b))


def compatible_theta(rng: random.Random, a: MixedHodgeStructure, b: MixedHodgeStructure) -> Matrix:
    """Random θ: B -> A with ``θ(W_m B) ⊆ W_m A`` for all ``m``.

    Built on a basis of B adapted to its weight filtration: a basis vector
    entering at weight ``m`` is sent to a random vector of ``W_m(A)``.  The
    matrix is then expressed in the standard basis of B.
    """
    na, nb = a.ambient_dim, b.ambient_dim
    adapted: list[list] = []
    targets: list[list] = []
    current = Subspace.zero(nb)
    for m in b.weights():
        step = b.weight_step(m)
        for row in step.basis.entries:
            line = Subspace.span([row], nb)
            if line <= current:
                continue
            current = current + line
            adapted.append(list(row))
            wa = a.weight_step(m)
            if wa.dim == 0 or rng.random() < 0.1:
                targets.append([GaussianRational(0)] * na)
            else:
                coeffs = [random_scalar(rng, 5, real=rng.random() < 0.3) for _ in range(wa.dim)]
                vec = [GaussianRational(0)] * na
                for c, r in zip(coeffs, wa.basis.entries):
                    vec = [x + c * y for x, y in zip(vec, r)]
                targets.append(vec)
    # θ maps adapted[k] to targets[k]; solve θ = T^t (M^t)^{-1} column-wise
    return _solve_map(adapted, targets, na, nb)


def random_cohomology(rng: random.Random, degrees: int = 4, max_dim: int = 4) -> list[MixedHodgeStructure]:
    """Mixed Hodge structures ``H^0 .. H^{degrees-1}`` with weights of ``H^d`` in ``[0, 2d]``.

    Some degrees are left zero-dimensional.
    """
    out = []
    for d in range(degrees):
        if rng.random() < 0.2:
            out.append(zero_structure())
            continue
        length = min(d + 1, 3)
        out.append(random_mhs(rng, max_dim=max_dim, max_length=length, weight_range=(0, 2 * d),
                              min_length=min(2, length)))
    return out


def random_subspace(rng: random.Random, n: int, dim: int | None = None,
                    bound: int = 3) -> Subspace:
    """Span of ``dim`` random vectors (so possibly smaller than ``dim``)."""
    if dim is None:
        dim = rng.randint(0, n)
    rows = [[random_scalar(rng, bound) for _ in range(n)] for _ in range(dim)]
    return Subspace.span(rows, n)


def lift(w1: Subspace, w2: Subspace, coupling: list[list]) -> Subspace:
    """Rows ``(x, 0)`` for ``x ∈ w1`` and ``(c_k, y_k)`` for a basis ``y_k`` of ``w2``.

    The result meets ``V1`` in ``w1`` and projects onto ``w2``.
    """
    n1, n2 = w1.ambient_dim, w2.ambient_dim
    rows = [list(x) + [0] * n2 for x in w1.basis.entries]
    rows += [list(c) + list(y) for c, y in zip(coupling, w2.basis.entries)]
    return Subspace.span(rows, n1 + n2)


def random_lift_quadruple(rng: random.Random, max_dim: int = 6):
    """``(W1, W1', W2, W2', W, W')`` for the intersection-dimension bounds."""
    n = rng.randint(2, max_dim)
    n1 = rng.randint(1, n - 1)
    n2 = n - n1
    w1, w1p = random_subspace(rng, n1), random_subspace(rng, n1)
    w2, w2p = random_subspace(rng, n2), random_subspace(rng, n2)

    def coupling(w):
        mode = rng.random()
        return [[GaussianRational(0) if mode < 0.2 else random_scalar(rng, 3) for _ in range(n1)]
                for _ in range(w.dim)]

    return w1, w1p, w2, w2p, lift(w1, w2, coupling(w2)), lift(w1p, w2p, coupling(w2p))


def _solve_map(sources: list[list], targets: list[list], na: int, nb: int) -> Matrix:
    # realified inverse of the source matrix (rows are a basis of C^nb)
    m = _realify([[GaussianRational.coerce(x) for x in r] for r in sources], nb)
    inv = m.inv()
    t = _realify([[GaussianRational.coerce(x) for x in r] for r in targets], na)
    # rows: y = Σ c_k s_k  => θ(y) = Σ c_k t_k; for the standard basis e_j,
    # the coefficient rows are the rows of inv(M) (realified) applied to T
    prod = inv * t
    rows = _complex_rows(prod)
    # rows[j] = θ(e_j) as a row vector; θ as dim A x dim B matrix is its transpose
    return Matrix.of([[rows[j][i] for j in range(nb)] for i in range(na)], nb)


__all__ = [
    "random_mhs",
    "random_extension_triple",
    "random_pure",
    "random_theta",
    "compatible_theta",
    "random_real_invertible",
    "random_hodge_types",
    "random_cohomology",
    "random_subspace",
    "random_lift_quadruple",
    "lift",
]
