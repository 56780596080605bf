from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given

from hodgerees.generators import (
    random_extension_triple,
    random_mhs,
    random_real_invertible,
)
from hodgerees.linalg import I, GaussianRational, Matrix, Subspace
from hodgerees.mhs import (
    ExtensionData,
    InvalidStructure,
    MixedHodgeStructure,
    alpha,
    change_basis,
    deligne_lemma_failures,
    deligne_splitting,
    diagnose,
    direct_sum,
    dual,
    extension_build,
    hodge_numbers,
    is_r_split,
    t_numbers_direct,
    tate,
    tate_twist,
    tensor,
    validate,
    zero_structure,
)

from conftest import h_c, seeds


def tables(h):
    hn = hodge_numbers(h)
    return +hn.h, +hn.t


def negated(table):
    return Counter({(-p, -q): v for (p, q), v in table.items()})


# the two-dimensional examples


def test_hodge_numbers_of_h_c(hci, hc0):
    assert tables(hci) == (Counter({(0, 0): 1, (1, 1): 1}), Counter({(1, 0): 1, (0, 1): 1}))
    assert tables(hc0) == (Counter({(0, 0): 1, (1, 1): 1}), Counter({(1, 1): 1, (0, 0): 1}))


def test_deligne_splitting_of_h_c(hci, hc0):
    split = deligne_splitting(hci)
    assert set(split) == {(0, 0), (1, 1)}
    assert split[1, 1] == Subspace.span([[I, 1]], 2)
    assert split[0, 0] == Subspace.span([[1, 0]], 2)
    split0 = deligne_splitting(hc0)
    assert split0[1, 1] == Subspace.span([[0, 1]], 2)
    assert split0[1, 1].is_real()
    assert split0[0, 0] == Subspace.span([[1, 0]], 2)


def test_r_split_and_alpha_of_h_c(hci, hc0):
    assert not is_r_split(hci)
    assert is_r_split(hc0)
    assert alpha(hci) == 1
    assert alpha(hc0) == 0


def test_alpha_of_h_c_with_rational_and_imaginary_offsets():
    assert alpha(h_c(GaussianRational(Fraction(7, 3)))) == 0
    assert alpha(h_c(2 - 5 * I)) == 1


# validation


def test_pure_structures_are_valid():
    # weight 2 with types (2,0), (0,2) from a conjugate pair
    line = Subspace.span([[1, I]], 2)
    h = MixedHodgeStructure(2, {2: Subspace.full(2)}, {0: Subspace.full(2), 1: line, 2: line})
    assert validate(h)
    assert tables(h)[0] == Counter({(2, 0): 1, (0, 2): 1})
    assert alpha(h) == 0
    assert alpha(tate(3)) == 0


def test_validate_rejects_unbalanced_types():
    # weight 0 but F^1 is everything: type (1, -1) without its mirror
    h = MixedHodgeStructure(1, {0: Subspace.full(1)}, {1: Subspace.full(1)})
    assert not validate(h)
    assert "weight 0" in diagnose(h)
    with pytest.raises(InvalidStructure):
        alpha(h)


def test_validate_rejects_complex_weight_step():
    h = MixedHodgeStructure(2, {0: Subspace.span([[1, I]], 2), 2: Subspace.full(2)}, {})
    assert not validate(h)
    assert "not real" in diagnose(h)


def test_validate_rejects_real_line_in_weight_two():
    # F^1 = conj F^1 is a line, so F^1 and conj F^2 = 0 do not span
    h = MixedHodgeStructure(2, {2: Subspace.full(2)}, {1: Subspace.span([[1, 2]], 2)})
    assert not validate(h)
    assert "weight 2" in diagnose(h)


def test_zero_structure():
    z = zero_structure()
    assert validate(z)
    assert alpha(z) == 0
    assert deligne_splitting(z) == {}


# operations


def test_tate_twist_examples(hci):
    assert tables(tate_twist(hci, 0)) == tables(hci)
    h, t = tables(tate_twist(hci, 1))
    assert h == Counter({(-1, -1): 1, (0, 0): 1})
    assert t == Counter({(0, -1): 1, (-1, 0): 1})
    assert tables(tate_twist(tate_twist(hci, 2), -5)) == tables(tate_twist(hci, -3))


def test_dual_examples(hci):
    assert tables(dual(tate(2))) == tables(tate(-2))
    assert alpha(dual(hci)) == 1
    assert tables(dual(dual(hci))) == tables(hci)


def test_direct_sum_examples(hci, hc0):
    assert tables(direct_sum(hci, zero_structure())) == tables(hci)
    s = direct_sum(tate(0), tate(-1))
    assert tables(s)[0] == Counter({(0, 0): 1, (1, 1): 1})
    assert alpha(s) == 0
    assert alpha(direct_sum(hci, hc0)) == 1


def test_tensor_examples(hci):
    assert tables(tensor(hci, tate(0))) == tables(hci)
    # dim H' = 2, alpha = 1 on both sides
    assert alpha(tensor(hci, hci)) == 4
    assert alpha(tensor(hci, tate(3))) == 1


def test_extension_examples(hci):
    a, b = tate(0), tate(-1)
    assert tables(extension_build(a, b, Matrix.of([[0]]))) == tables(direct_sum(a, b))
    assert alpha(extension_build(a, b, Matrix.of([[0]]))) == 0
    for c, want in ((I, 1), (GaussianRational(Fraction(3, 4)), 0), (1 - 2 * I, 1)):
        h = extension_build(a, b, ExtensionData(Matrix.of([[c]])))
        assert tables(h) == tables(h_c(c))
        assert alpha(h) == want


def test_extension_rejects_weight_incompatible_theta():
    # theta would have to send W_{-2}(B) = B into W_{-2}(A) = 0
    with pytest.raises(ValueError, match="weight"):
        extension_build(tate(0), tate(1), Matrix.of([[1]]))
    assert validate(extension_build(tate(1), tate(0), Matrix.of([[1]])))
    with pytest.raises(ValueError):
        extension_build(tate(0), tate(-1), Matrix.of([[1, 2]]))


# properties


@given(seeds)
def test_generated_structures_are_valid(rng):
    h = random_mhs(rng)
    assert validate(h), diagnose(h)
    assert h.ambient_dim <= 8


@given(seeds)
def test_hodge_number_symmetries(rng):
    h = random_mhs(rng, max_dim=6)
    hn = hodge_numbers(h)
    assert sum(hn.h.values()) == sum(hn.t.values()) == h.ambient_dim
    assert all(hn.h[p, q] == hn.h[q, p] for p, q in hn.h)
    assert all(hn.t[p, q] == hn.t[q, p] for p, q in hn.t)
    assert sum((p + q) * v for (p, q), v in hn.h.items()) == sum((p + q) * v for (p, q), v in hn.t.items())


@given(seeds)
def test_t_numbers_by_two_routes(rng):
    h = random_mhs(rng, max_dim=6)
    assert +hodge_numbers(h).t == +t_numbers_direct(h)


@given(seeds)
def test_deligne_lemma(rng):
    h = random_mhs(rng, max_dim=6)
    assert deligne_lemma_failures(h) == []


@given(seeds)
def test_alpha_zero_iff_r_split(rng):
    h = random_mhs(rng, max_dim=6)
    a = alpha(h)
    assert isinstance(a, int) and a >= 0
    assert (a == 0) == is_r_split(h)


@given(seeds)
def test_alpha_ignores_real_change_of_basis(rng):
    h = random_mhs(rng, max_dim=5)
    g = random_real_invertible(rng, h.ambient_dim)
    moved = change_basis(h, g)
    assert validate(moved)
    assert tables(moved) == tables(h)


@given(seeds)
def test_dual_negates_types(rng):
    h = random_mhs(rng, max_dim=6)
    hh, ht = tables(h)
    dh, dt = tables(dual(h))
    assert dh == negated(hh) and dt == negated(ht)
    assert alpha(dual(h)) == alpha(h)


@given(seeds)
def test_extension_superadditive(rng):
    a, b, theta = random_extension_triple(rng, max_dim=6)
    h = extension_build(a, b, theta)
    assert validate(h)
    assert alpha(h) >= alpha(a) + alpha(b)
    nh, na, nb = hodge_numbers(h), hodge_numbers(a), hodge_numbers(b)
    for p in range(-4, 6):
        for q in range(-4, 6):
            assert nh.f_at(p, q) <= na.f_at(p, q) + nb.f_at(p, q)
