import itertools

import numpy as np
import pytest

from gelfand_scope.errors import UsageError
from gelfand_scope.services import suzuki
from gelfand_scope.services.groups import MatrixKind, derived_subgroup


def test_unitriangular_family_composition_law():
    params = suzuki.SuzukiParams.for_degree(3)
    f = params.field
    kind = MatrixKind(f)
    for a, c in itertools.product(range(8), repeat=2):
        for b, d in [(0, 0), (1, 5), (6, 3)]:
            product = kind.mul(suzuki.s_matrix(params, a, b), suzuki.s_matrix(params, c, d))
            expected = suzuki.s_matrix(params, a ^ c, b ^ d ^ f.mul_bits(f.theta_bits(a), c))
            assert np.array_equal(product, expected)


def test_params():
    params = suzuki.SuzukiParams.for_degree(3)
    assert (params.q, params.r, params.expected_order) == (8, 4, 29120)
    assert params.r ** 2 == 2 * params.q
    assert params.torus_order(1) == 13 and params.torus_order(-1) == 5


def test_even_degree_is_rejected():
    with pytest.raises(UsageError):
        suzuki.suzuki_group(2)


def test_sz2_is_the_frobenius_group_of_order_20(sz2, corpus):
    assert sz2.matrices.order == 20
    assert sz2.matrices.classes.count == 5
    assert sorted(sz2.matrices.classes.sizes) == sorted(corpus("f20").classes.sizes)
    assert sz2.certificate["checks"] == {"order": True, "class_count": True, "element_orders": True}


def test_sz2_ovoid_action(sz2):
    assert sz2.ovoid.degree == 5
    assert sz2.permutations.order == 20
    assert sz2.ovoid.pair_orbit_size() == 5 * 4


def test_sz2_subgroups(sz2):
    assert suzuki.borel(sz2).order == 4
    assert suzuki.dihedral_max(sz2).order == 2
    assert suzuki.torus_normalizer(sz2, 1).order == 20
    with pytest.raises(UsageError):
        suzuki.torus_normalizer(sz2, -1)


def test_matrix_and_perm_forms_agree(sz2):
    for which in ("borel", "dihedral", "torus+"):
        perm = suzuki.maximal_subgroup(sz2, which, form="perm")
        matrix = suzuki.maximal_subgroup(sz2, which, form="matrix")
        assert perm.order == matrix.order
        assert sorted(perm.parent_indices.tolist()) == sorted(matrix.parent_indices.tolist())


def test_total_degree_formula():
    assert suzuki.sz_total_degree_formula(8) == 484
    assert suzuki.sz_total_degree_formula(32) == 32024
    for bad in (2, 4, 16, 12):
        with pytest.raises(UsageError):
            suzuki.sz_total_degree_formula(bad)


@pytest.mark.parametrize("q0, r", [(8, 3), (8, 5), (32, 3)])
def test_total_degree_bound(q0, r):
    assert suzuki.sz_total_degree_bound_holds(q0, r)


def test_bound_needs_odd_prime():
    with pytest.raises(UsageError):
        suzuki.sz_total_degree_bound_holds(8, 4)


def test_closed_forms_at_q8():
    assert suzuki.maximal_subgroup_orders(8) == {"borel": 448, "dihedral": 14, "torus+": 52, "torus-": 20}
    assert suzuki.expected_total_degrees(8) == {"borel": 42, "dihedral": 8, "torus+": 16, "torus-": 8}
    assert suzuki.stated_borel_total_degree(8) == 28


@pytest.mark.slow
def test_sz8_certificate(sz8):
    certificate = sz8.certificate
    assert certificate["order"] == 29120
    assert certificate["class_count"] == 11
    assert max(certificate["element_orders"]) == 13
    assert all(certificate["checks"].values())


@pytest.mark.slow
def test_sz8_ovoid_is_faithful_and_two_transitive(sz8):
    assert sz8.ovoid.degree == 65
    assert sz8.permutations.order == 29120
    assert sz8.ovoid.pair_orbit_size() == 65 * 64


@pytest.mark.slow
def test_sz8_maximal_subgroups(sz8):
    orders = {which: suzuki.maximal_subgroup(sz8, which).order for which in suzuki.MAXIMAL_FAMILIES}
    assert orders == suzuki.maximal_subgroup_orders(8)
    assert all(29120 % order == 0 for order in orders.values())


@pytest.mark.slow
def test_sz8_borel_and_dihedral_structure(sz8):
    b = suzuki.borel(sz8)
    assert b.sub.classes.count == 10
    d = suzuki.dihedral_max(sz8)
    # abelianization of D14 has order 2
    assert d.order // derived_subgroup(d.sub).order == 2
