"""Normal labels, equivalence classes, extensions and classification."""

import random

import pytest

from cosimplex.errors import TruncationError
from cosimplex.fixtures import (
    example2_scs,
    figure2_scs,
    layer_minus_root_scs,
    layered_scs,
    prototypical,
)
from cosimplex.labels import Label
from cosimplex.normal_ext import (
    check_epsilon_lemma,
    classify,
    equivalence_classes,
    is_isomorphic,
    is_normal_scs,
    labeled_subsets,
    layer_scs,
    minimal_normal_extension,
    normal_label,
    normal_label_table,
    root_elements,
)
from cosimplex.scs import check_saturation, disjoint_union, from_ell, saturate, validate


def random_valid_ell(rng, N):
    values = [rng.randint(0, N)]
    for n in range(1, N + 1):
        values.append(rng.randint(n, values[n - 1] + 1))
    return values


# -- normal labels ------------------------------------------------------------------


def test_normal_labels_prototypical():
    scs = prototypical(6)
    for n in range(6):
        assert normal_label(scs, n) == Label.from_support([n])


def test_normal_labels_example2():
    scs = example2_scs(5)
    assert normal_label(scs, 1) == Label.from_support([1])
    table = normal_label_table(scs)
    assert table.labels[5] == Label.from_support([5])  # inferred through a shift
    assert 5 in table.inferred
    assert not table.unknown


def test_normal_labels_figure2():
    scs = figure2_scs()
    ids = {name: x for x, name in scs.names.items()}
    assert normal_label(scs, ids["a"]) == Label.parse("011")
    assert normal_label(scs, ids["b"]) == Label.parse("101")
    table = normal_label_table(scs)
    assert table.labels[ids["x"]] == Label.parse("0011")
    assert table.labels[ids["y"]] == Label.parse("0101")
    assert table.labels[ids["z"]] == Label.parse("1001")
    assert table.inferred == {ids["x"], ids["y"], ids["z"]}


# -- the insertion identity for labels of shift images ----------------------------------


def test_epsilon_lemma_fixtures():
    for scs in (prototypical(6), example2_scs(5), figure2_scs(), layered_scs([1, 2, 1], 4)):
        report = check_epsilon_lemma(scs)
        assert report.ok, report.failures


def test_epsilon_lemma_random():
    rng = random.Random(13)
    for _ in range(80):
        N = rng.randint(1, 6)
        scs = from_ell(random_valid_ell(rng, N), N)
        report = check_epsilon_lemma(scs)
        assert report.ok, report.failures


def test_epsilon_lemma_counts_cases():
    report = check_epsilon_lemma(prototypical(4))
    assert report.cases > 0


# -- saturation criterion through labels ---------------------------------------------------


def test_saturated_iff_elements_sit_at_label_level():
    rng = random.Random(3)
    for _ in range(40):
        N = rng.randint(2, 6)
        scs = from_ell(random_valid_ell(rng, N), N)
        table = normal_label_table(scs)
        sits = all(
            scs.levels[y] <= table.labels[y].level
            for y in scs.levels
            if y in table.labels
        )
        saturated = all(check_saturation(scs, n).holds for n in range(-1, N - 1))
        if not sits:
            assert not saturated
        if saturated and not table.unknown:
            assert sits


# -- labeled subsets and set-level normality ---------------------------------------------------


def test_labeled_subsets_figure2():
    scs = figure2_scs()
    ids = {name: x for x, name in scs.names.items()}
    subsets = {str(lab): set(v) for lab, v in labeled_subsets(scs).items()}
    assert subsets["111"] == {ids["a"], ids["b"]}
    assert subsets["0111"] == {ids["x"], ids["y"]}
    assert subsets["1011"] == {ids["x"], ids["z"]}
    assert subsets["1101"] == {ids["y"], ids["z"]}
    normal, overlaps = is_normal_scs(scs)
    assert not normal
    assert any(o["element"] == ids["x"] for o in overlaps)


def test_prototypical_is_normal():
    normal, overlaps = is_normal_scs(prototypical(5))
    assert normal and not overlaps


def test_layered_is_normal():
    normal, _ = is_normal_scs(layered_scs([1, 2], 4))
    assert normal


def test_root_elements_example2():
    assert root_elements(example2_scs(5)) == {0, 2}
    assert root_elements(prototypical(5)) == {0}


# -- equivalence classes -------------------------------------------------------------------------


def test_equivalence_classes_prototypical():
    part = equivalence_classes(prototypical(5))
    assert len(part.classes) == 1
    assert not part.undecided_pairs


def test_equivalence_classes_figure2():
    scs = figure2_scs()
    part = equivalence_classes(scs)
    assert len(part.classes) == 1
    assert sorted(part.classes[0]) == sorted(scs.levels)


def test_equivalence_classes_disjoint_union():
    scs = disjoint_union(prototypical(4), prototypical(4))
    part = equivalence_classes(scs)
    assert len(part.classes) == 2


# -- minimal normal extension ----------------------------------------------------------------------


def assert_extension_well_formed(scs, result):
    ext = result.extension
    assert validate(ext).ok
    normal, _ = is_normal_scs(ext)
    assert normal
    for n in range(-1, ext.max_level - 1):
        assert check_saturation(ext, n).holds
    # embedding is injective and shift equivariant
    assert len(set(result.embedding.values())) == len(result.embedding)
    for i, mapping in enumerate(scs.shifts):
        for x, y in mapping.items():
            assert ext.alpha(i, result.embedding[x]) == result.embedding[y]
    # the input is a sub-structure: levels can only drop
    for x, lv in scs.levels.items():
        assert ext.levels[result.embedding[x]] <= lv


def test_extension_of_prototypical_is_itself():
    scs = prototypical(5)
    result = minimal_normal_extension(scs)
    assert_extension_well_formed(scs, result)
    assert result.layer_ranks == [1]
    assert len(result.extension.levels) == len(scs.levels)
    assert is_isomorphic(result.extension, scs)


def test_extension_of_example2_is_the_rank1_layer():
    scs = example2_scs(5)
    result = minimal_normal_extension(scs)
    assert_extension_well_formed(scs, result)
    assert result.layer_ranks == [1]
    assert is_isomorphic(result.extension, prototypical(5))
    # the embedding sends element n to the label {n}
    ext = result.extension
    for n in range(6):
        assert ext.levels[result.embedding[n]] == n


def test_extension_of_figure2():
    scs = figure2_scs()
    result = minimal_normal_extension(scs)
    assert_extension_well_formed(scs, result)
    assert result.layer_ranks == [2]
    assert len(result.extension.levels) == len(layer_scs(2, 3).levels)


def test_extension_idempotent():
    for scs in (prototypical(4), example2_scs(5), figure2_scs()):
        once = minimal_normal_extension(scs).extension
        twice = minimal_normal_extension(once).extension
        assert is_isomorphic(once, twice)


def test_extension_distinct_labels_within_class():
    # within one class all normal labels are distinct
    for scs in (prototypical(5), example2_scs(5), figure2_scs()):
        part = equivalence_classes(scs)
        for cls in part.classes:
            labels = [part.table.require(y) for y in cls]
            assert len(set(labels)) == len(labels)


def test_extension_truncation_error_on_undecidable():
    # an isolated top-level element has no inferable label
    from cosimplex.scs import TruncatedSCS

    scs = TruncatedSCS(1, {7: 1}, ({},))
    assert validate(scs).ok
    with pytest.raises(TruncationError):
        minimal_normal_extension(scs)


# -- classification -----------------------------------------------------------------------------------


def test_classify_prototypical():
    inv = classify(prototypical(5))
    assert len(inv.layers) == 1
    layer = inv.layers[0]
    assert layer.rank == 1
    assert layer.root_labels == ("1",)
    assert layer.is_antichain


def test_classify_two_copies():
    inv = classify(disjoint_union(prototypical(4), prototypical(4)))
    assert inv.multiplicities() == {1: 2}


def test_classify_example2_roots():
    inv = classify(example2_scs(5))
    assert len(inv.layers) == 1
    layer = inv.layers[0]
    assert layer.rank == 1
    assert layer.root_labels == ("1", "001")
    assert layer.minimal_root_labels == ("1",)
    assert not layer.is_antichain


def test_classify_figure2_antichain():
    inv = classify(figure2_scs())
    (layer,) = inv.layers
    assert layer.rank == 2
    assert layer.root_labels == ("011", "101")
    assert layer.is_antichain


def test_isomorphism_decisions():
    proto = prototypical(5)
    ex2 = example2_scs(5)
    assert is_isomorphic(proto, saturate(ex2))
    assert not is_isomorphic(proto, ex2)
    for scs in (proto, ex2, figure2_scs()):
        assert is_isomorphic(scs, scs)


def test_antichain_finiteness_small_layers():
    # sub-structure roots inside one layer form a finite antichain; check
    # against brute enumeration for small ranks
    rng = random.Random(23)
    for rank in (1, 2, 3):
        scs = layer_minus_root_scs(rank, 5)
        inv = classify(scs)
        for layer in inv.layers:
            mins = [Label.parse(s) for s in layer.minimal_root_labels]
            assert mins
            for a in mins:
                for b in mins:
                    if a != b:
                        assert not a.leq(b)
