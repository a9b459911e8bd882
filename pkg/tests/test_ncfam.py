"""Tensor-leg families: brackets, minors, Hamiltonians, proof identities."""

import random

import pytest

from commfam.exact import QMatrix, Rat, Singular, kron
from commfam import ncfam
from commfam.ncfam import (LegFamily, TensorElem, bracket, check_identity_2a,
                           check_identity_2b, check_laplace_expansion,
                           check_main_id, check_pairwise_commute, delta,
                           hamiltonians, leg_embed, sample_family)

E11 = QMatrix.from_rows([[1, 0], [0, 0]])
E12 = QMatrix.from_rows([[0, 1], [0, 0]])
E21 = QMatrix.from_rows([[0, 0], [1, 0]])
E22 = QMatrix.from_rows([[0, 0], [0, 1]])


def rand_mat(rng, d=2, bound=5):
    return ncfam.random_matrix(rng, d, bound)


def varying_rows(rng, count, n, d=2, bound=5):
    return [[rand_mat(rng, d, bound) for _ in range(n)] for _ in range(count)]


def test_leg_embed_identity_and_single_leg():
    eye = QMatrix.identity(2)
    assert leg_embed(eye, 2, 3).mat == QMatrix.identity(8)
    b = QMatrix.from_rows([[1, 2], [3, 4]])
    assert leg_embed(b, 1, 1).mat == b
    # explicit Kronecker: b on leg 1 of 2 is b (x) I
    assert leg_embed(b, 1, 2).mat == kron(b, QMatrix.identity(2))
    assert leg_embed(b, 2, 2).mat == kron(QMatrix.identity(2), b)


def test_leg_embed_distinct_legs_commute():
    a = leg_embed(E11, 1, 2)
    b = leg_embed(E22, 2, 2)
    assert (a * b - b * a).is_zero()
    # and the product is the Kronecker product of the pieces
    assert (a * b).mat == kron(E11, E22)


def test_bracket_scalar_collapse():
    f = QMatrix.from_rows([[3]])
    g = QMatrix.from_rows([[5]])
    assert bracket([f, g], [1, 2], 2).is_zero()


def test_bracket_single_entry_is_embedding():
    b = QMatrix.from_rows([[1, 2], [3, 4]])
    assert bracket([b], [2], 3) == leg_embed(b, 2, 3)


def test_bracket_frozen_expansion():
    # [E11, E22] = E11 (x) E22 - E22 (x) E11 = diag(0, 1, -1, 0)
    br = bracket([E11, E22], [1, 2], 2)
    want = QMatrix.from_rows([[0, 0, 0, 0],
                              [0, 1, 0, 0],
                              [0, 0, -1, 0],
                              [0, 0, 0, 0]])
    assert br.mat == want


def test_bracket_alternating_and_multilinear():
    rng = random.Random(7)
    for _ in range(10):
        f, g, h = (rand_mat(rng) for _ in range(3))
        fg = bracket([f, g], [1, 2], 2)
        gf = bracket([g, f], [1, 2], 2)
        assert (fg + gf).is_zero()
        assert bracket([f, f], [1, 2], 2).is_zero()
        c = Rat(rng.randint(-5, 5))
        lhs = bracket([f.scale(c) + g, h], [1, 2], 2)
        rhs = bracket([f, h], [1, 2], 2).scale(c) + bracket([g, h], [1, 2], 2)
        assert (lhs - rhs).is_zero()


def test_delta_singletons_and_constant_shape():
    rng = random.Random(9)
    fs = [rand_mat(rng) for _ in range(3)]
    fam = LegFamily.from_generators(fs, 2)
    assert delta(fam, [1], [2]) == leg_embed(fs[1], 2, 2)
    # full minor over rows 1..n equals the antisymmetrised bracket
    assert delta(fam, [1, 2], [1, 2]) == bracket([fs[1], fs[2]], [1, 2], 2)


def test_delta_repeated_row_vanishes():
    rng = random.Random(13)
    row = [rand_mat(rng) for _ in range(2)]
    other = [rand_mat(rng) for _ in range(2)]
    fam = LegFamily(2, 2, (tuple(row), tuple(other), tuple(row)))
    assert delta(fam, [0, 2], [1, 2]).is_zero()


def test_hamiltonians_single_leg_closed_form():
    rng = random.Random(15)
    while True:
        f0, f1 = rand_mat(rng), rand_mat(rng)
        fam = LegFamily(1, 2, ((f0,), (f1,)))
        try:
            hs = hamiltonians(fam)
            break
        except Singular:
            continue
    want = mat = None
    from commfam.exact import mat_inverse
    want = mat_inverse(f1) * f0
    assert hs[0].mat == want


def test_hamiltonians_scalar_legs_commute():
    rng = random.Random(17)
    fam = LegFamily(3, 1, tuple(
        tuple(QMatrix.from_rows([[rng.randint(1, 9)]]) for _ in range(3))
        for _ in range(4)))
    hs = hamiltonians(fam)
    assert check_pairwise_commute(hs).status == "pass"


def test_hamiltonians_commute_varying_legs():
    rng = random.Random(19)
    for n, d in ((2, 2), (3, 2), (2, 3)):
        outcome = sample_family(rng, n, d)
        assert outcome.family is not None
        hs = hamiltonians(outcome.family)
        assert check_pairwise_commute(hs).status == "pass"


def test_constant_leg_family_is_structurally_singular():
    # squares span Sym^n but the bracket lands in the smaller antisymmetric
    # part, so the skew-field-shaped family can never satisfy invertibility
    rng = random.Random(21)
    for _ in range(5):
        fs = [rand_mat(rng, 2, 9) for _ in range(3)]
        fam = LegFamily.from_generators(fs, 2)
        with pytest.raises(Singular):
            hamiltonians(fam)


def test_pairwise_commute_diagonal_passes():
    diag1 = TensorElem(1, 2, QMatrix.from_rows([[2, 0], [0, 3]]))
    diag2 = TensorElem(1, 2, QMatrix.from_rows([[5, 0], [0, 7]]))
    assert check_pairwise_commute([diag1, diag2]).status == "pass"


def test_pairwise_commute_detects_failure_with_witness():
    hs = [TensorElem(1, 2, E12), TensorElem(1, 2, E21)]
    record = check_pairwise_commute(hs)
    assert record.status == "fail"
    assert "entry" in record.witness


def test_identity_2a_n2_per_leg_and_singular_cases():
    rng = random.Random(23)
    outcome = sample_family(rng, 2, 2)
    rows = [list(outcome.family.entries[i]) for i in (1, 2)]
    assert check_identity_2a(rows).status == "pass"
    # constant rows: the full bracket is singular, reported not fudged
    f = QMatrix.from_rows([[1, 1], [0, 1]])
    g = QMatrix.from_rows([[1, 0], [1, 1]])
    with pytest.raises(Singular):
        check_identity_2a([f, g])
    # repeated rows are singular as well ([f, f] = 0)
    with pytest.raises(Singular):
        check_identity_2a([rows[0], rows[0]])


def test_identity_2b_admissible_legs():
    rng = random.Random(29)
    outcome = sample_family(rng, 2, 2)
    rows = [list(outcome.family.entries[i]) for i in (1, 2)]
    assert check_identity_2b(rows, 1).status == "pass"
    with pytest.raises(ValueError):
        check_identity_2b(rows, 2)


def test_identity_suite_n3_d2():
    rng = random.Random(31)
    outcome = sample_family(rng, 3, 2)
    fam = outcome.family
    rows = [list(fam.entries[i]) for i in (1, 2, 3)]
    assert check_identity_2a(rows).status == "pass"
    assert check_identity_2b(rows, 1).status == "pass"
    assert check_laplace_expansion(rows).status == "pass"
    assert check_main_id([list(r) for r in fam.entries]).status == "pass"


def test_laplace_expansion_constant_rows():
    # no inverses involved: the expansion holds verbatim for constant rows
    rng = random.Random(37)
    for n in (1, 2, 3):
        fs = [rand_mat(rng) for _ in range(n)]
        assert check_laplace_expansion(fs).status == "pass"


def test_main_id_trivial_equal_indices():
    rng = random.Random(41)
    outcome = sample_family(rng, 2, 2)
    fam = outcome.family
    minors = ncfam.family_minors(fam)
    inv0 = minors[0].inverse()
    lhs = minors[1] * inv0 * minors[1]
    assert (lhs - lhs).is_zero()


def test_sample_family_logs_exhaustion_for_constant_legs():
    rng = random.Random(43)
    outcome = sample_family(rng, 2, 2, constant_legs=True, retries=4)
    assert outcome.exhausted
    assert outcome.resamples == 5
    assert outcome.family is None
