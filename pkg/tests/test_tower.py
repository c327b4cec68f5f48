"""Hilbert towers: structure checks, labeled subspaces, normality, generators."""

import random
from fractions import Fraction

import pytest

from cosimplex.errors import NotNormalError
from cosimplex.fixtures import (
    example2_scs,
    figure2_scs,
    identity_shift_tower,
    layered_scs,
    prototypical,
    random_rational_rotation,
    random_signed_permutation,
    rotate_tower,
)
from cosimplex.labels import Label
from cosimplex.linalg import Matrix, subspace_equal
from cosimplex.scs import TruncatedSCS
from cosimplex.tower import (
    HessenbergData,
    build_symmetric_rep,
    check_adjoint_intertwining,
    check_hessenberg,
    check_normal,
    check_toy_definetti,
    check_tower,
    fixed_space,
    from_scs,
    innovation_basis,
    labeled_subspaces,
    permutation_unitary,
    root_dimension_sequence,
    root_space,
    unitary_equivalence,
)


def e(i, dim):
    return tuple(Fraction(1) if r == i else Fraction(0) for r in range(dim))


def fig2_tower_and_ids():
    scs = figure2_scs()
    tower = from_scs(scs)
    order = sorted(scs.levels, key=lambda x: (scs.levels[x], x))
    pos = {scs.names[x]: i for i, x in enumerate(order)}
    return tower, pos


# -- construction -----------------------------------------------------------------


def test_from_scs_prototypical_unilateral_shift():
    tower = from_scs(prototypical(3))
    assert check_tower(tower).ok
    A0 = tower.shifts[0]
    for n in range(3):
        assert A0 * e(n, 4) == e(n + 1, 4)


def test_from_scs_figure2_dimensions():
    tower, _ = fig2_tower_and_ids()
    assert tower.ambient_dim == 5
    assert tower.dim(2) == 2 and tower.dim(3) == 5
    assert check_tower(tower).ok


def test_from_scs_empty():
    tower = from_scs(TruncatedSCS(1, {}, ({},)))
    assert tower.ambient_dim == 0
    assert check_tower(tower).ok


def test_check_tower_flags_broken_isometry():
    tower = from_scs(prototypical(3))
    tower.shifts[0].rows[1][0] = Fraction(2)
    assert not check_tower(tower).ok


# -- innovations and fixed spaces ------------------------------------------------------


def test_innovation_basis_scs_towers():
    tower = from_scs(example2_scs(5))
    for k in (2, 3):
        vs = innovation_basis(tower, k)
        assert len(vs) == 2
    assert innovation_basis(tower, 0) == []  # H_0 = H_{-1}


def test_fixed_space_prototypical():
    tower = from_scs(prototypical(6))
    for n in range(5):
        basis, flag = fixed_space(tower, n)
        assert subspace_equal(basis, [e(i, 7) for i in range(n)])
        assert flag  # top innovation nonzero: could extend beyond ambient


def test_fixed_space_identity_shift_tower():
    tower = identity_shift_tower(4)
    basis, flag = fixed_space(tower, 0)
    assert subspace_equal(basis, [e(0, 1)])
    assert not flag


# -- saturation dictionary ---------------------------------------------------------------


def test_definetti_prototypical_tower():
    report = check_toy_definetti(from_scs(prototypical(5)))
    assert report.ok
    sat = [c for c in report.checks if c["check"] == "saturated-at-level"]
    assert all(c["holds"] for c in sat)


def test_definetti_identity_shift_tower():
    # innovations shift at the bottom yet the tower is not saturated there
    report = check_toy_definetti(identity_shift_tower(4))
    assert report.ok
    conv = [c for c in report.checks if c["check"] == "converse-second-implication-fails"]
    assert any(c["n"] == 0 for c in conv)
    sat = {c["level"]: c["holds"] for c in report.checks if c["check"] == "saturated-at-level"}
    assert sat[-1] is False


def test_definetti_example2_tower():
    report = check_toy_definetti(from_scs(example2_scs(5)))
    assert report.ok
    conv = [
        c
        for c in report.checks
        if c["check"] == "converse-first-implication-fails-or-truncation"
    ]
    assert any(c["n"] == 0 for c in conv)


# -- labeled subspaces ----------------------------------------------------------------------


def test_labeled_subspaces_figure2():
    tower, pos = fig2_tower_and_ids()
    subs = labeled_subspaces(tower)
    by_str = {str(lab): vs for lab, vs in subs.items()}
    dim = tower.ambient_dim
    assert subspace_equal(by_str["111"], [e(pos["a"], dim), e(pos["b"], dim)])
    assert subspace_equal(by_str["0111"], [e(pos["x"], dim), e(pos["y"], dim)])
    assert subspace_equal(by_str["1011"], [e(pos["x"], dim), e(pos["z"], dim)])
    assert subspace_equal(by_str["1101"], [e(pos["y"], dim), e(pos["z"], dim)])


def test_labeled_subspaces_prototypical():
    tower = from_scs(prototypical(4))
    subs = labeled_subspaces(tower)
    assert subspace_equal(subs[Label.parse("1")], [e(0, 5)])
    for lab, vs in subs.items():
        assert len(vs) == 1  # all level singletons
    assert len(subs) == 5  # the rank-1 labels of level <= 4


def test_root_spaces_example2():
    tower = from_scs(example2_scs(5))
    assert len(root_space(tower, 2)) == 2
    assert root_space(tower, 3) == []  # level-3 innovation is all shifted


# -- normality criteria -------------------------------------------------------------------------


def test_normal_prototypical():
    report = check_normal(from_scs(prototypical(5)))
    assert report.criteria_agree and report.normal
    details = report.details["decomposition"]
    assert all(details.values())


def test_normal_layered():
    tower = from_scs(layered_scs([1, 2, 1], 3))
    report = check_normal(tower)
    assert report.criteria_agree and report.normal


def test_non_normal_figure2_all_three_criteria():
    tower, _ = fig2_tower_and_ids()
    report = check_normal(tower)
    assert not report.adjoint_exchange
    assert not report.complement_shift
    assert not report.orthogonal_labels
    assert report.criteria_agree and not report.normal
    assert "overlap_witness" in report.details


def test_non_normal_example2():
    report = check_normal(from_scs(example2_scs(5)))
    assert report.criteria_agree and not report.normal


def test_normal_rotated_tower():
    rng = random.Random(4)
    tower = from_scs(layered_scs([0, 1, 1], 3))
    Q = random_rational_rotation(tower.ambient_dim, rng)
    report = check_normal(rotate_tower(tower, Q))
    assert report.criteria_agree and report.normal


# -- symmetric generators ----------------------------------------------------------------------------


def test_symmetric_rep_prototypical_transpositions():
    tower = from_scs(prototypical(5))
    data = build_symmetric_rep(tower)
    dim = tower.ambient_dim
    for j in range(1, 6):
        U = data.u(j)
        expect = Matrix.identity(dim)
        expect.rows[j - 1][j - 1] = Fraction(0)
        expect.rows[j][j] = Fraction(0)
        expect.rows[j - 1][j] = Fraction(1)
        expect.rows[j][j - 1] = Fraction(1)
        assert U == expect


def test_symmetric_rep_identity_permutation():
    tower = from_scs(prototypical(4))
    data = build_symmetric_rep(tower)
    assert permutation_unitary(data, []) == Matrix.identity(5)
    # an inverse pair composes to the identity
    assert permutation_unitary(data, [2, 2]) == Matrix.identity(5)


def test_symmetric_rep_rejects_non_normal():
    tower, _ = fig2_tower_and_ids()
    with pytest.raises(NotNormalError):
        build_symmetric_rep(tower)


def test_hessenberg_checks_pass_on_symmetric_rep():
    for scs in (prototypical(4), layered_scs([1, 1, 1], 3)):
        tower = from_scs(scs)
        data = build_symmetric_rep(tower)
        report = check_hessenberg(data)
        assert report.ok, report.failures[:4]


def test_hessenberg_on_rotated_rep():
    rng = random.Random(17)
    tower = from_scs(layered_scs([0, 2], 3))
    Q = random_rational_rotation(tower.ambient_dim, rng)
    rotated = rotate_tower(tower, Q)
    data = build_symmetric_rep(rotated)
    assert check_hessenberg(data).ok


def test_adjoint_intertwining_saturated():
    tower = from_scs(prototypical(5))
    data = build_symmetric_rep(tower)
    report = check_adjoint_intertwining(data)
    assert report.ok and report.checks


def test_hessenberg_negative_control_breaks_far_commutation():
    tower = from_scs(prototypical(5))
    data = build_symmetric_rep(tower)
    # replace one generator by a distant transposition: far commutation dies
    bad = Matrix.identity(tower.ambient_dim)
    bad.rows[0][0] = Fraction(0)
    bad.rows[4][4] = Fraction(0)
    bad.rows[0][4] = Fraction(1)
    bad.rows[4][0] = Fraction(1)
    control = HessenbergData(tower, [data.u(1), data.u(2), data.u(3), bad, data.u(5)])
    report = check_hessenberg(control)
    far = [c for c in report.checks if c["check"] == "far-commutation"]
    assert any(not c["ok"] for c in far)
    verdicts = {
        c["check"]: c["ok"]
        for c in report.checks
        if c["check"].startswith("exchange-condition-")
    }
    assert len(set(verdicts.values())) == 1  # the three conditions agree
    agree = [c for c in report.checks if c["check"] == "exchange-conditions-agree"]
    assert agree and agree[0]["ok"]


# -- unitary equivalence --------------------------------------------------------------------------------


def test_unitary_equivalence_same_dims():
    a = from_scs(layered_scs([1, 2], 3))
    b = from_scs(layered_scs([1, 2], 3))
    rng = random.Random(8)
    b = rotate_tower(b, random_signed_permutation(b.ambient_dim, rng))
    result = unitary_equivalence(a, b)
    assert result.equivalent and result.verified
    assert result.root_dims_a == result.root_dims_b


def test_unitary_equivalence_different_dims():
    a = from_scs(layered_scs([1, 2], 3))
    b = from_scs(layered_scs([2, 2], 3))
    # pad not needed: decision is by root dimensions
    result = unitary_equivalence(a, b)
    assert not result.equivalent


def test_root_dimension_sequence():
    tower = from_scs(layered_scs([2, 1, 3], 3))
    assert root_dimension_sequence(tower)[:3] == (2, 1, 3)


# -- property suites --------------------------------------------------------------------------------


def test_scs_derived_towers_satisfy_all_invariants():
    rng = random.Random(55)
    for _ in range(25):
        N = rng.randint(1, 5)
        values = [rng.randint(0, N)]
        for n in range(1, N + 1):
            values.append(rng.randint(n, values[n - 1] + 1))
        from cosimplex.scs import from_ell

        tower = from_scs(from_ell(values, N))
        assert check_tower(tower).ok, values


def test_generators_permute_labeled_subspaces():
    rng = random.Random(66)
    tower = from_scs(layered_scs([1, 2], 3))
    tower = rotate_tower(tower, random_signed_permutation(tower.ambient_dim, rng))
    data = build_symmetric_rep(tower)
    subs = labeled_subspaces(tower)
    for j in range(1, tower.max_level + 1):
        for lab, vs in subs.items():
            target = lab.transpose(j)
            image = [data.u(j) * v for v in vs]
            assert subspace_equal(image, subs[target]), (str(lab), j)
