import numpy as np
import pytest

from conftest import FILTER_CORPUS, SMALL_CORPUS
from gelfand_scope.errors import ResourceCapError, UsageError
from gelfand_scope.services import suzuki
from gelfand_scope.services.chartab import character_table, dixon_prime
from gelfand_scope.services.corpus import load_corpus_group
from gelfand_scope.services.gelfand import (
    contained_up_to_conjugacy,
    double_coset_count,
    hecke_commutes,
    is_gelfand,
    is_strong_gelfand,
    maximal_scan,
    restriction_multiplicities,
    schur_ring_commutes,
    sgp_scan,
    tables_for_pair,
)
from gelfand_scope.services.groups import all_subgroups, subgroup_embed


def _signature(matrix):
    # row and column order follow residues, which depend on the prime
    values = matrix.values
    rows = sorted(np.sort(values, axis=1).tolist())
    columns = sorted(np.sort(values, axis=0).T.tolist())
    return rows, columns


def pair(group, *generators):
    embedding = subgroup_embed(group, [np.array(g, dtype=group.kind.dtype) for g in generators])
    tG, tH = tables_for_pair(group, embedding)
    return tG, embedding, tH


def test_s3_over_a3(corpus):
    tG, emb, tH = pair(corpus("s3"), [1, 2, 0])
    matrix = restriction_multiplicities(tG, emb, tH)
    assert matrix.values.tolist()[0] == [1, 0, 0]
    assert matrix.values.tolist()[2] == [0, 1, 1]


def test_f20_over_c5(corpus):
    tG, emb, tH = pair(corpus("f20"), [1, 2, 3, 4, 0])
    matrix = restriction_multiplicities(tG, emb, tH)
    assert tG.degrees[-1] == 4
    assert matrix.values.tolist()[-1] == [0, 1, 1, 1, 1]


def test_group_over_itself(corpus):
    group = corpus("sl23")
    tG, emb, tH = pair(group, *group.generators)
    report = is_strong_gelfand(tG, emb, tH)
    assert report.verdict and report.max_multiplicity == 1 and report.method == "full"
    assert is_gelfand(tG, emb, tH).verdict


def test_mismatched_primes_are_rejected(corpus):
    group = corpus("s3")
    emb = subgroup_embed(group, [np.array([1, 0, 2], dtype=group.kind.dtype)])
    tG = character_table(group)
    tH = character_table(emb.sub, dixon_prime(group.order, group.exponent(), 1))
    with pytest.raises(UsageError):
        restriction_multiplicities(tG, emb, tH)


def test_table_of_another_group_object_is_rejected(corpus):
    group = corpus("s3")
    emb = subgroup_embed(group, [np.array([1, 0, 2], dtype=group.kind.dtype)])
    other = subgroup_embed(group, [np.array([1, 0, 2], dtype=group.kind.dtype)])
    tG, _ = tables_for_pair(group, emb)
    tH = character_table(other.sub, tG.context)
    with pytest.raises(UsageError):
        restriction_multiplicities(tG, emb, tH)


def test_s3_over_c2(corpus):
    tG, emb, tH = pair(corpus("s3"), [1, 0, 2])
    gelfand = is_gelfand(tG, emb, tH)
    assert gelfand.verdict
    assert gelfand.trivial_column == [1, 0, 1]
    assert is_strong_gelfand(tG, emb, tH).verdict


def test_sz2_over_c4_and_c2(sz2):
    group = sz2.permutations
    classes = all_subgroups(group)
    by_order = {cls.order: cls.embedding for cls in classes}
    tG = character_table(group)
    _, tH = tables_for_pair(group, by_order[4], tG=tG)
    assert is_strong_gelfand(tG, by_order[4], tH).verdict
    _, tH = tables_for_pair(group, by_order[2], tG=tG)
    report = is_strong_gelfand(tG, by_order[2], tH, force_full=True)
    assert not report.verdict
    assert report.max_multiplicity >= 2 and report.witness is not None


def test_double_cosets(corpus):
    s3 = corpus("s3")
    assert double_coset_count(s3, [np.array([1, 0, 2], dtype=np.uint8)], trivial_column=[1, 0, 1]) == 2
    assert double_coset_count(s3, s3.generators) == 1
    f20 = corpus("f20")
    assert double_coset_count(f20, [np.array([1, 2, 3, 4, 0], dtype=np.uint8)]) == 4


def test_schur_ring_on_small_groups(corpus):
    f20 = corpus("f20")
    assert schur_ring_commutes(f20, f20.generators)
    assert schur_ring_commutes(f20, [np.array([0, 2, 4, 1, 3], dtype=np.uint8)])
    assert not schur_ring_commutes(f20, [np.array([0, 4, 3, 2, 1], dtype=np.uint8)])


def test_oracle_cap(corpus):
    with pytest.raises(ResourceCapError):
        schur_ring_commutes(corpus("s5"), corpus("s5").generators, cap=100)


@pytest.mark.parametrize("name", SMALL_CORPUS)
def test_oracles_match_character_verdicts(corpus, name):
    group = corpus(name)
    tG = character_table(group)
    for cls in all_subgroups(group):
        emb = cls.embedding
        _, tH = tables_for_pair(group, emb, tG=tG)
        strong = is_strong_gelfand(tG, emb, tH, force_full=True).verdict
        assert schur_ring_commutes(group, emb.sub.generators) == strong, cls.embedding.label
        plain = is_gelfand(tG, emb, tH)
        assert hecke_commutes(group, emb.sub.generators) == plain.verdict, cls.embedding.label
        if strong:
            assert plain.verdict
        double_coset_count(group, emb.sub.generators, trivial_column=plain.trivial_column)


@pytest.mark.parametrize("name", FILTER_CORPUS)
def test_filter_never_rejects_a_strong_gelfand_pair(corpus, name):
    group = corpus(name)
    tG = character_table(group)
    for cls in all_subgroups(group):
        _, tH = tables_for_pair(group, cls.embedding, tG=tG)
        report = is_strong_gelfand(tG, cls.embedding, tH, force_full=True)
        if report.filter_fires:
            assert not report.verdict
        quick = is_strong_gelfand(tG, cls.embedding, tH)
        assert quick.verdict == report.verdict
        assert quick.method == ("filter" if report.filter_fires else "full")


@pytest.mark.parametrize(
    "name, point_stabilizer",
    [
        ("s3", [[1, 0, 2]]),
        ("s4", [[1, 0, 2, 3], [1, 2, 0, 3]]),
        ("s5", [[1, 0, 2, 3, 4], [1, 2, 3, 0, 4]]),
    ],
)
def test_symmetric_branching_is_multiplicity_free(corpus, name, point_stabilizer):
    tG, emb, tH = pair(corpus(name), *point_stabilizer)
    report = is_strong_gelfand(tG, emb, tH, force_full=True)
    assert report.verdict and report.max_multiplicity == 1


@pytest.mark.parametrize("name", ["s4", "f20"])
def test_multiplicities_do_not_depend_on_the_prime(corpus, name):
    group = corpus(name)
    e = group.exponent()
    for cls in all_subgroups(group):
        mats = []
        for skip in (0, 1):
            tG = character_table(group, dixon_prime(group.order, e, skip))
            _, tH = tables_for_pair(group, cls.embedding, tG=tG)
            mats.append(restriction_multiplicities(tG, cls.embedding, tH))
        assert _signature(mats[0]) == _signature(mats[1])


def test_s3_scan(corpus):
    report = sgp_scan(corpus("s3"))
    assert sorted(entry.order for entry in report.strong_gelfand) == [2, 3, 6]
    assert report.monotone


def test_sz2_scan(sz2):
    report = sgp_scan(sz2.permutations)
    assert sorted(entry.order for entry in report.strong_gelfand) == [4, 5, 10, 20]
    assert len(report.strong_gelfand) == 4
    assert report.raw_count == 8
    assert report.monotone and report.audit_pairs > 0


@pytest.mark.parametrize("name", ["s4", "f20"])
def test_scan_is_monotone(corpus, name):
    report = sgp_scan(corpus(name))
    assert report.monotone
    assert report.audit_pairs > 0


def test_containment_up_to_conjugacy(corpus):
    group = corpus("s4")
    classes = {cls.order: cls for cls in all_subgroups(group) if cls.order in (3, 6, 12)}
    c3, s3, a4 = classes[3].embedding, classes[6].embedding, classes[12].embedding
    assert contained_up_to_conjugacy(c3, s3)
    assert contained_up_to_conjugacy(c3, a4)
    assert not contained_up_to_conjugacy(s3, a4)


@pytest.mark.slow
def test_sz8_has_no_strong_gelfand_maximal_subgroup(sz8):
    report = maximal_scan(sz8)
    assert report.no_strong_gelfand
    assert report.sz_total_degree == 484
    assert report.total_degrees == {"borel": 42, "dihedral": 8, "torus+": 16, "torus-": 8}
    assert report.borel_discrepancy
    assert report.ovoid_character_degree == 65
    assert report.ovoid_character_exceeds_totals
    for entry in report.scan.entries:
        assert entry.report.filter_fires
        assert entry.report.filter_detail[1] == 91
        assert not entry.report.verdict
        assert entry.report.max_multiplicity >= 2
        assert entry.report.witness is not None
    assert report.scan.monotone


@pytest.mark.slow
def test_sz8_borel_filter_path(sz8, sz8_table):
    b = suzuki.borel(sz8)
    _, tH = tables_for_pair(sz8.permutations, b, tG=sz8_table)
    quick = is_strong_gelfand(sz8_table, b, tH)
    assert quick.method == "filter" and quick.filter_detail == (42, 91)
    assert not quick.verdict


@pytest.mark.slow
def test_sz8_borel_multiplicities_do_not_depend_on_the_prime(sz8, sz8_table):
    group = sz8.permutations
    b = suzuki.borel(sz8)
    second = character_table(group, dixon_prime(group.order, group.exponent(), 1))
    mats = []
    for tG in (sz8_table, second):
        _, tH = tables_for_pair(group, b, tG=tG)
        mats.append(restriction_multiplicities(tG, b, tH))
    assert mats[0].max() == mats[1].max()
    assert _signature(mats[0]) == _signature(mats[1])


def test_cayley_table_limit_follows_the_oracle_cap():
    s5 = load_corpus_group("s5")
    with pytest.raises(ResourceCapError, match="cayley table") as excinfo:
        s5.multiplication_table(cap=119)
    assert excinfo.value.cap_value == 119
    fresh = load_corpus_group("s5")
    assert hecke_commutes(fresh, fresh.generators, cap=120)
    assert fresh.multiplication_table(cap=1).shape == (120, 120)


def test_sz2_maximal_scan_has_no_ovoid_character(sz2):
    report = maximal_scan(sz2)
    assert "torus-" not in report.total_degrees
    assert report.ovoid_character_degree is None
    payload = report.to_json()
    assert payload["ovoid_character_degree"] is None
    assert payload["ovoid_character_exceeds_totals"] is False
