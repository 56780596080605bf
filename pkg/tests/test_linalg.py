import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hodgerees.generators import random_lift_quadruple, random_scalar, random_subspace
from hodgerees.linalg import (
    EXACT,
    I,
    GaussianRational,
    Matrix,
    Subspace,
    annihilator,
    default_tolerance,
    dim_of_sum,
    float_rank,
    floating,
    kron,
    rank,
    rref,
    subspace_conjugate,
    subspace_intersect,
    subspace_sum,
)

from conftest import seeds


def span(*rows):
    return Subspace.span(rows, len(rows[0]))


# scalars


def test_gaussian_parse_and_print():
    assert GaussianRational.parse("1/2-3/4 i") == GaussianRational(Fraction(1, 2), Fraction(-3, 4))
    assert GaussianRational.parse("i") == I
    assert GaussianRational.parse("-i") == -I
    assert GaussianRational.parse(str(GaussianRational(Fraction(5, 3), Fraction(-2)))) == \
        GaussianRational(Fraction(5, 3), Fraction(-2))
    with pytest.raises(ValueError):
        GaussianRational.parse("1/0")
    with pytest.raises(ValueError):
        GaussianRational.parse("x")


def test_gaussian_arithmetic():
    assert I * I == -1
    assert (1 + I) * (1 - I) == 2
    assert (1 + I) / (1 - I) == I
    assert (2 + 3 * I).conjugate() == 2 - 3 * I


@given(seeds)
def test_gaussian_field_laws(rng):
    a, b, c = (random_scalar(rng) for _ in range(3))
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    if b != 0:
        assert (a / b) * b == a
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()


def test_tolerance_env(monkeypatch):
    monkeypatch.delenv("HODGEREES_TOL", raising=False)
    assert default_tolerance() == 1e-9
    monkeypatch.setenv("HODGEREES_TOL", "1e-6")
    assert default_tolerance() == 1e-6
    assert floating().tol == 1e-6
    monkeypatch.setenv("HODGEREES_TOL", "-1")
    with pytest.raises(ValueError):
        default_tolerance()


# rref and rank


def test_rref_examples():
    assert rref(Matrix.of([[0, 1], [1, 0]])) == Matrix.of([[1, 0], [0, 1]])
    assert rref(Matrix.of([[1, I], [I, -1]])) == Matrix.of([[1, I]])
    assert rref(Matrix.of([[2, 4]])) == Matrix.of([[1, 2]])


def test_rref_complex_pivot_normalised():
    m = rref(Matrix.of([[2 * I, 4, 0], [0, 0, 3]]))
    assert m == Matrix.of([[1, -2 * I, 0], [0, 0, 1]])


@given(seeds)
def test_rref_idempotent_and_row_space(rng):
    n = rng.randint(1, 5)
    rows = [[random_scalar(rng, 4) for _ in range(n)] for _ in range(rng.randint(1, 5))]
    m = Matrix.of(rows)
    r = rref(m)
    assert rref(r) == r
    assert Subspace.span(r.entries, n) == Subspace.span(rows, n)
    assert r.nrows == rank(m)


def test_rank_examples():
    assert rank(Matrix.of([[0, 0], [0, 0]])) == 0
    assert rank(Matrix.of([[1, 0, 0], [0, 1, 0], [0, 0, 1]])) == 3
    t = 0.37
    a = Matrix.of([[2j * math.pi, 1j * t]], backend=floating())
    assert rank(a.stack(a.conjugate())) == 1
    b = Matrix.of([[2j * math.pi, 1]], backend=floating())
    assert rank(b.stack(b.conjugate())) == 2


def test_float_rank_relative_tolerance():
    # pivots are compared with the largest entry, not with 1
    a = np.array([[1e6, 0], [0, 1e-5]])
    assert float_rank(a, 1e-9) == 1
    assert float_rank(a, 1e-12) == 2
    assert float_rank(a * 1e-9, 1e-12) == 2
    assert float_rank(np.zeros((2, 2)), 1e-9) == 0


# subspaces


def test_sum_examples():
    assert span([1, 0]) + span([0, 1]) == Subspace.full(2)
    a = span([1, 2, I])
    assert a + a == a
    s = span([1, I, 0]) + span([1, -I, 0])
    assert s.basis == Matrix.of([[1, 0, 0], [0, 1, 0]])


def test_intersect_examples():
    assert (span([1, 0]) & span([0, 1])).is_zero
    a = span([1, I, 3])
    assert a & a == a
    left = span([1, 0, 0], [0, 1, 0])
    right = span([0, 1, 0], [0, 0, 1])
    assert (left & right).basis == Matrix.of([[0, 1, 0]])


def test_conjugate_examples():
    assert span([1, I]).conjugate() == span([1, -I])
    assert span([1, 2]).conjugate() == span([1, 2])
    assert span([1, 2]).is_real()
    assert not span([1, I]).is_real()


def test_zero_dimensional_ambient():
    z = Subspace.zero(0)
    assert z.dim == 0
    assert z + z == z
    assert z == Subspace.full(0)


def test_span_rejects_wrong_length():
    with pytest.raises(ValueError):
        Subspace.span([[1, 2, 3]], 2)


@given(seeds)
def test_dimension_formula(rng):
    n = rng.randint(1, 6)
    a, b = random_subspace(rng, n), random_subspace(rng, n)
    assert (a & b).dim + (a + b).dim == a.dim + b.dim
    assert (a & b) <= a <= a + b


@given(seeds)
def test_rref_canonical_across_generating_sets(rng):
    n = rng.randint(1, 5)
    a = random_subspace(rng, n)
    # random invertible recombination of the basis rows plus redundant rows
    rows = [list(r) for r in a.basis.entries]
    mixed = []
    for _ in range(len(rows) + 2):
        coeffs = [random_scalar(rng, 3) for _ in rows]
        mixed.append([sum((c * r[j] for c, r in zip(coeffs, rows)), GaussianRational(0))
                      for j in range(n)])
    b = Subspace.span(mixed + rows[::-1], n)
    assert b.basis == a.basis
    assert b == a


@given(seeds)
def test_conjugation_is_an_involution_and_a_lattice_map(rng):
    n = rng.randint(1, 5)
    a, b = random_subspace(rng, n), random_subspace(rng, n)
    assert a.conjugate().conjugate() == a
    assert (a + b).conjugate() == a.conjugate() + b.conjugate()
    assert (a & b).conjugate() == a.conjugate() & b.conjugate()
    assert subspace_conjugate(a).basis == a.basis.conjugate() or subspace_conjugate(a) == Subspace.span(
        a.basis.conjugate().entries, n)


@given(seeds)
def test_annihilator_dimension_and_pairing(rng):
    n = rng.randint(1, 5)
    a = random_subspace(rng, n)
    ann = annihilator(a)
    assert ann.dim == n - a.dim
    for x in a.basis.entries:
        for y in ann.basis.entries:
            assert sum((u * v for u, v in zip(x, y)), GaussianRational(0)) == 0
    assert annihilator(ann) == a


@given(seeds)
def test_kron_dimension(rng):
    a = random_subspace(rng, rng.randint(1, 3))
    b = random_subspace(rng, rng.randint(1, 3))
    assert kron(a, b).dim == a.dim * b.dim


@given(seeds)
def test_float_backend_agrees_with_exact(rng):
    n = rng.randint(1, 5)
    a, b = random_subspace(rng, n), random_subspace(rng, n)
    fa = Subspace.span([[complex(x) for x in r] for r in a.basis.entries], n, floating())
    fb = Subspace.span([[complex(x) for x in r] for r in b.basis.entries], n, floating())
    assert (fa + fb).dim == (a + b).dim
    assert (fa & fb).dim == (a & b).dim
    assert np.allclose((fa + fb).basis.to_numpy(), (a + b).basis.to_numpy())


@pytest.mark.parametrize("seed", range(15))
def test_modular_ranks_match_certified_ranks(seed, monkeypatch):
    def dims():
        rng = random.Random(seed)
        n = rng.randint(2, 7)
        parts = [random_subspace(rng, n, bound=50) for _ in range(4)]
        out = [p.dim for p in parts]
        out.append(dim_of_sum(*parts[:3]))
        out.append(subspace_intersect(parts[0] + parts[1], parts[2] + parts[3]).dim)
        out.append(subspace_sum(parts[0], parts[1].conjugate()).dim)
        return out

    monkeypatch.setenv("HODGEREES_RANKS", "modular")
    fast = dims()
    monkeypatch.setenv("HODGEREES_RANKS", "certified")
    assert dims() == fast


def test_rank_mode_env_rejects_garbage(monkeypatch):
    monkeypatch.setenv("HODGEREES_RANKS", "guess")
    with pytest.raises(ValueError):
        span([1, 2], [3, 5]).dim


def test_nearly_dependent_rows_with_large_entries():
    # rows that agree modulo many primes but are independent over Q(i)
    big = 2**70
    a = Subspace.span([[1, big], [1, big + 1]], 2)
    assert a.dim == 2
    b = Subspace.span([[big, big * big + I], [1, big]], 2)
    assert b.dim == 2


# intersection bounds for lifted subspaces


def test_lift_example_by_hand():
    # V1 = C^2, V2 = C^1; W1 = W1' = <e1>, W2 = W2' = V2 with different couplings
    from hodgerees.generators import lift
    w1 = span([1, 0])
    w2 = Subspace.full(1)
    w = lift(w1, w2, [[0, 1]])
    wp = lift(w1, w2, [[0, 2]])
    assert w.dim == wp.dim == 2
    # meet is <e1>: 1 + 1 - min(1, 2) = 1 <= 1 <= 2
    assert (w & wp).dim == 1
    assert (lift(w1, w2, [[0, 1]]) & lift(w1, w2, [[0, 1]])).dim == 2


@given(seeds)
def test_lift_intersection_bounds(rng):
    w1, w1p, w2, w2p, w, wp = random_lift_quadruple(rng)
    n1 = w1.ambient_dim
    a, b = (w1 & w1p).dim, (w2 & w2p).dim
    got = (w & wp).dim
    assert a + b - min(b, n1) <= got <= a + b
