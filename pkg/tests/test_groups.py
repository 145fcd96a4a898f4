import numpy as np
import pytest

from gelfand_scope.errors import ResourceCapError, UsageError
from gelfand_scope.services.corpus import corpus_names, dump_group, load_corpus_data
from gelfand_scope.services.groups import (
    all_subgroups,
    closure,
    derived_subgroup,
    group_from_json,
    normalizer,
    structure_label,
    subgroup_embed,
)

ORDERS_AND_CLASSES = {
    "s3": (6, 3),
    "c6": (6, 6),
    "c12": (12, 12),
    "d8": (8, 5),
    "d10": (10, 4),
    "d12": (12, 6),
    "q8": (8, 5),
    "a4": (12, 4),
    "s4": (24, 5),
    "s5": (120, 7),
    "f20": (20, 5),
    "sl23": (24, 7),
}


def test_corpus_is_complete():
    assert sorted(ORDERS_AND_CLASSES) == corpus_names()


@pytest.mark.parametrize("name", sorted(ORDERS_AND_CLASSES))
def test_order_and_class_count(corpus, name):
    group = corpus(name)
    order, count = ORDERS_AND_CLASSES[name]
    assert group.order == order
    classes = group.classes
    assert classes.count == count
    assert sum(classes.sizes) == order
    assert classes.sizes[0] == 1 and classes.element_orders[0] == 1


def test_inverses_multiply_to_identity(corpus):
    group = corpus("s4")
    products = group.kind.mul_rows(group.elements, group.elements[group.inverse_indices])
    assert all(np.array_equal(row, group.elements[0]) for row in products)


def test_non_bijection_is_rejected():
    with pytest.raises(UsageError, match="bijection"):
        group_from_json({"kind": "perm", "degree": 3, "generators": [[0, 0, 1]]})


def test_unknown_kind_is_rejected():
    with pytest.raises(UsageError):
        group_from_json({"kind": "braid", "generators": []})


def test_closure_cap_is_enforced():
    with pytest.raises(ResourceCapError):
        group_from_json(load_corpus_data("s5"), cap=50)


def test_fingerprint_ignores_generators():
    a = group_from_json({"kind": "perm", "degree": 3, "generators": [[1, 0, 2], [1, 2, 0]]})
    b = group_from_json({"kind": "perm", "degree": 3, "generators": [[0, 2, 1], [1, 0, 2]]})
    assert a.fingerprint() == b.fingerprint()
    assert a.same_elements(b)


def test_emitted_group_parses_back(corpus):
    group = corpus("sl23")
    again = group_from_json(dump_group(group))
    assert again.same_elements(group)


@pytest.mark.parametrize(
    "name, orders",
    [
        ("s3", [1, 2, 3, 6]),
        ("f20", [1, 2, 4, 5, 10, 20]),
        ("a4", [1, 2, 3, 4, 12]),
        ("q8", [1, 2, 4, 4, 4, 8]),
        ("d8", [1, 2, 2, 2, 4, 4, 4, 8]),
    ],
)
def test_subgroup_classes(corpus, name, orders):
    assert [cls.order for cls in all_subgroups(corpus(name))] == orders


def test_subgroup_count_of_s4(corpus):
    classes = all_subgroups(corpus("s4"))
    assert len(classes) == 11
    assert sum(cls.conjugate_count for cls in classes) == 30


def test_lattice_cap(corpus):
    with pytest.raises(ResourceCapError):
        all_subgroups(corpus("s5"), cap=100)


def test_foreign_generator_is_rejected(corpus):
    group = corpus("c6")
    with pytest.raises(UsageError):
        subgroup_embed(group, [np.array([1, 0, 2, 3, 4, 5])])


def test_fusion_of_transposition_subgroup(corpus):
    group = corpus("s3")
    embedding = subgroup_embed(group, [np.array([1, 0, 2])])
    assert embedding.order == 2 and embedding.index == 3
    # identity -> identity class, involution -> transpositions
    assert embedding.fusion == [0, 1]


@pytest.mark.parametrize(
    "name, label",
    [("c6", "C6"), ("c12", "C12"), ("s3", "D6"), ("d10", "D10"), ("d12", "D12"), ("q8", "G8"), ("s4", "G24")],
)
def test_structure_label(corpus, name, label):
    assert structure_label(corpus(name)) == label


@pytest.mark.parametrize("name, order", [("s3", 3), ("s4", 12), ("d10", 5), ("a4", 4), ("sl23", 8)])
def test_derived_subgroup(corpus, name, order):
    assert derived_subgroup(corpus(name)).order == order


def test_normalizer_of_four_cycle_in_s4(corpus):
    group = corpus("s4")
    cycle = np.array([1, 2, 3, 0], dtype=group.kind.dtype)
    powers = closure(group.kind, [cycle]).elements
    assert normalizer(group, list(powers)).order == 8


def test_element_orders_and_exponent(corpus):
    group = corpus("sl23")
    assert sorted(set(group.classes.element_orders)) == [1, 2, 3, 4, 6]
    assert group.exponent() == 12
    assert group.centralizer_order(0) == 24


@pytest.mark.parametrize("name", ["s4", "f20", "sl23"])
def test_lattice_of_each_subgroup_lands_in_the_parent_lattice(corpus, name):
    classes = all_subgroups(corpus(name))
    known = {members for cls in classes for members in cls.conjugates}
    for cls in classes:
        inside = cls.embedding.parent_indices
        for smaller in all_subgroups(cls.embedding.sub):
            image = tuple(sorted(int(inside[i]) for i in smaller.members))
            assert image in known, (cls.embedding.label, smaller.embedding.label)


@pytest.mark.parametrize(
    "field_data",
    [
        {"m": "three", "modulus": 11},
        {"m": None, "modulus": 11},
        {"m": 3, "modulus": "0b1011"},
        {"m": 3.9, "modulus": 11},
        {"m": True, "modulus": 11},
    ],
)
def test_bad_field_parameters_are_usage_errors(field_data):
    with pytest.raises(UsageError, match="field"):
        group_from_json({"kind": "mat4", "field": field_data, "generators": []})
