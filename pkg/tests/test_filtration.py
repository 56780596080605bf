from collections import Counter

import pytest
from hypothesis import given

from hodgerees.filtration import (
    Filtration,
    are_opposed,
    bigrading_filtrations,
    dec_shift,
    double_graded_dims,
    filtration_direct_sum,
    from_increasing,
    graded_dim,
    multifilt_dim_fn,
    simultaneous_bigrading,
    split_compatibility_check,
    to_increasing,
    triple_graded_dims,
    trivial,
)
from hodgerees.generators import random_scalar, random_subspace
from hodgerees.linalg import I, Subspace

from conftest import seeds


def line(*v):
    return Subspace.span([v], len(v))


def at_one(s):
    """Full at 0, ``s`` at 1, zero at 2."""
    return Filtration(s.ambient_dim, {1: s})


def random_filtration(rng, n, length=3):
    """Chain of sums of random subspaces, read from the top."""
    chain = []
    acc = Subspace.zero(n)
    for _ in range(rng.randint(0, length)):
        acc = acc + random_subspace(rng, n, rng.randint(0, 2))
        chain.append(acc)
    top = rng.randint(-2, 3)
    steps = {top - k: s for k, s in enumerate(chain)}
    return Filtration(n, steps)


# the three lines κ, λ, μ in C^2 at level 1 of three filtrations
KAPPA, LAMBDA, MU = line(1, 0), line(0, 1), line(1, 1)


def test_trivial():
    f = trivial(3)
    assert f[0].is_full and f[1].is_zero
    assert graded_dim(f, 0) == 3
    assert f[1].dim == 0
    z = trivial(0)
    assert z[0].dim == z[5].dim == 0
    assert double_graded_dims(z, z) == Counter()


def test_dec_shift():
    f = at_one(line(1, I))
    assert dec_shift(f, 0) == f
    assert dec_shift(dec_shift(f, 2), -5) == dec_shift(f, -3)
    assert dec_shift(trivial(2), 5)[5].dim == 2
    assert dec_shift(trivial(2), 5)[6].dim == 0
    assert dec_shift(f, 3)[4] == f[1]


def test_from_increasing_two_step():
    w0 = line(1, 0)
    f = from_increasing({0: w0, 2: Subspace.full(2)}, 2)
    assert f[-2].is_full
    assert f[-1] == w0 and f[0] == w0
    assert f[1].is_zero
    back = to_increasing(f)
    assert back[0] == w0 and back[2].is_full


def test_from_increasing_single_weight_is_a_shift():
    assert from_increasing({3: Subspace.full(2)}, 2) == dec_shift(trivial(2), -3)


def test_filtration_rejects_increasing_chain():
    with pytest.raises(ValueError):
        Filtration(2, {0: line(1, 0), 1: Subspace.full(2)})


def test_double_graded_examples():
    t = dec_shift(trivial(1), 1)
    assert double_graded_dims(t, t) == Counter({(1, 1): 1})
    f1, f2 = at_one(line(1, I)), at_one(line(1, -I))
    assert double_graded_dims(f1, f2) == Counter({(1, 0): 1, (0, 1): 1})
    f = at_one(line(1, I))
    assert double_graded_dims(f, f) == Counter({(1, 1): 1, (0, 0): 1})


def test_triple_graded_three_lines():
    delta = triple_graded_dims(at_one(MU), at_one(KAPPA), at_one(LAMBDA))
    assert delta == Counter({(0, 0, 1): 1, (1, 1, 0): 1})


def test_triple_graded_trivial():
    assert triple_graded_dims(trivial(3), trivial(3), trivial(3)) == Counter({(0, 0, 0): 3})
    s = dec_shift(trivial(1), 4)
    assert triple_graded_dims(s, s, s) == Counter({(4, 4, 4): 1})


def test_multifilt_dim_fn():
    D = multifilt_dim_fn([at_one(KAPPA), at_one(LAMBDA), at_one(MU)])
    assert D(-3, -3, -3) == 2
    assert D(1, 0, 0) == 1
    assert D(1, 1, 0) == 0
    assert D(1, 1, 1) == 0
    assert D(2, 0, 0) == 0


def test_bigrading_examples():
    # one filtration trivial: everything sits in q = 0
    f = Filtration(3, {1: line(1, 0, 0), 0: Subspace.span([[1, 0, 0], [0, 1, 0]], 3)})
    f = dec_shift(f, 1)
    pieces = simultaneous_bigrading(f, trivial(3))
    assert {q for _, q in pieces} == {0}
    assert sorted(p for p, _ in pieces) == [0, 1, 2]
    # equal filtrations: only diagonal pieces
    g = at_one(line(1, I))
    assert set(simultaneous_bigrading(g, g)) == {(0, 0), (1, 1)}


def test_opposedness_examples():
    t = trivial(1)
    assert are_opposed(trivial(3), trivial(3), trivial(3))
    assert are_opposed(dec_shift(t, -2), dec_shift(t, 1), dec_shift(t, 1))
    assert not are_opposed(t, dec_shift(t, 1), t)


def test_split_check_examples():
    f1, f2 = at_one(line(1, I)), at_one(line(1, 3))
    assert split_compatibility_check(f1, f2, trivial(2))
    assert not split_compatibility_check(at_one(KAPPA), at_one(LAMBDA), at_one(MU))
    # a direct sum of lines with shifts is split
    one = trivial(1)
    parts = [(dec_shift(one, a), dec_shift(one, b), dec_shift(one, c))
             for a, b, c in ((0, 1, 2), (1, -1, 0), (3, 3, -2))]
    acc = parts[0]
    for p in parts[1:]:
        acc = tuple(filtration_direct_sum(x, y) for x, y in zip(acc, p))
    assert split_compatibility_check(*acc)


@given(seeds)
def test_graded_dims_sum_to_dimension(rng):
    n = rng.randint(0, 5)
    f = random_filtration(rng, n)
    assert sum(graded_dim(f, p) for p in range(-6, 7)) == n


@given(seeds)
def test_double_grading_symmetric(rng):
    n = rng.randint(1, 5)
    f1, f2 = random_filtration(rng, n), random_filtration(rng, n)
    t12, t21 = double_graded_dims(f1, f2), double_graded_dims(f2, f1)
    assert t12 == Counter({(q, p): v for (p, q), v in t21.items()})
    assert sum(t12.values()) == n


@given(seeds)
def test_bigrading_reconstructs_filtrations(rng):
    n = rng.randint(1, 5)
    f1, f2 = random_filtration(rng, n), random_filtration(rng, n)
    pieces = simultaneous_bigrading(f1, f2)
    assert sum(s.dim for s in pieces.values()) == n
    g1, g2 = bigrading_filtrations(pieces, n)
    assert g1 == f1 and g2 == f2
    assert Counter({k: s.dim for k, s in pieces.items()}) == double_graded_dims(f1, f2)


@given(seeds)
def test_triple_graded_nonnegative_and_complete(rng):
    n = rng.randint(1, 4)
    fs = [random_filtration(rng, n, 2) for _ in range(3)]
    delta = triple_graded_dims(*fs)
    assert all(v > 0 for v in delta.values())
    assert sum(delta.values()) == n
    # the outermost grading is by f0
    for r in range(-5, 6):
        assert sum(v for (_, _, c), v in delta.items() if c == r) == graded_dim(fs[0], r)


@given(seeds)
def test_opposedness_index_orders_agree(rng):
    n = rng.randint(1, 4)
    f0, f1, f2 = (random_filtration(rng, n, 2) for _ in range(3))
    a = triple_graded_dims(f0, f1, f2)
    b = triple_graded_dims(f0, f2, f1)
    assert a == Counter({(p, q, r): v for (q, p, r), v in b.items()})


@given(seeds)
def test_rees_dimension_function_laws(rng):
    n, m = rng.randint(1, 3), rng.randint(1, 3)
    fs = [random_filtration(rng, n, 2) for _ in range(2)]
    gs = [random_filtration(rng, m, 2) for _ in range(2)]
    sums = [filtration_direct_sum(f, g) for f, g in zip(fs, gs)]
    Df, Dg, Ds = multifilt_dim_fn(fs), multifilt_dim_fn(gs), multifilt_dim_fn(sums)
    k = rng.randint(-3, 3)
    Dk = multifilt_dim_fn([dec_shift(f, k) for f in fs])
    for a in range(-4, 5):
        for b in range(-4, 5):
            assert Ds(a, b) == Df(a, b) + Dg(a, b)
            assert Dk(a + k, b + k) == Df(a, b)


@given(seeds)
def test_split_check_holds_for_split_triples(rng):
    n = rng.randint(1, 4)
    acc = None
    for _ in range(n):
        one = trivial(1)
        triple = tuple(dec_shift(one, rng.randint(-2, 2)) for _ in range(3))
        acc = triple if acc is None else tuple(filtration_direct_sum(x, y) for x, y in zip(acc, triple))
    assert split_compatibility_check(*acc)
