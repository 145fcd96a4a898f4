"""Restriction multiplicities and (strong) Gelfand pair decisions.

A pair (G, H) is strong Gelfand when every irreducible of G restricts to H
multiplicity-free. The total-degree filter rejects H early when the sum of
its irreducible degrees is below the largest degree of G: a restriction of
that irreducible then needs some constituent at least twice.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional, Sequence

import numpy as np

from ..config import Caps
from ..errors import InternalError, ResourceCapError, UsageError
from .chartab import CharacterTable, character_table
from .groups import Group, SubgroupEmbedding, all_subgroups, orbit_labels
from .modlinalg import inverse_mod

if TYPE_CHECKING:
    from ..repositories import CharacterTableRepository
    from .suzuki import SuzukiGroup

logger = logging.getLogger(__name__)


@dataclass
class MultiplicityMatrix:
    """``values[i, j] = <chi_i restricted to H, psi_j>``."""

    values: np.ndarray
    g_degrees: list[int]
    h_degrees: list[int]

    def max(self) -> int:
        return int(self.values.max())

    def witness(self) -> Optional[tuple[int, int]]:
        hits = np.argwhere(self.values > 1)
        if not len(hits):
            return None
        return int(hits[0][0]), int(hits[0][1])

    def trivial_column(self) -> list[int]:
        return self.values[:, 0].tolist()

    def to_json(self) -> dict:
        return {
            "g_degrees": list(self.g_degrees),
            "h_degrees": list(self.h_degrees),
            "values": self.values.tolist(),
        }


@dataclass
class SgpReport:
    verdict: bool
    method: str
    max_multiplicity: Optional[int]
    witness: Optional[tuple[int, int]]
    filter_detail: tuple[int, int]
    filter_fires: bool
    order_bound: bool = False

    def to_json(self) -> dict:
        return {
            "verdict": "yes" if self.verdict else "no",
            "method": self.method,
            "max_multiplicity": self.max_multiplicity,
            "witness": list(self.witness) if self.witness else None,
            "filter_detail": list(self.filter_detail),
            "filter_fires": self.filter_fires,
            "order_bound": self.order_bound,
        }


@dataclass
class GelfandReport:
    verdict: bool
    trivial_column: list[int]
    witness: Optional[int]

    def to_json(self) -> dict:
        return {
            "verdict": "yes" if self.verdict else "no",
            "trivial_column": list(self.trivial_column),
            "witness": self.witness,
        }


def _check_pair(tG: CharacterTable, emb: SubgroupEmbedding, tH: CharacterTable) -> None:
    if tG.p != tH.p:
        raise UsageError(f"Character tables use different primes: {tG.p} and {tH.p}")
    if emb.parent is not tG.group:
        raise UsageError("Subgroup embedding does not belong to the group of the table")
    if emb.sub is not tH.group:
        raise UsageError("Subgroup table was computed for a different group object")
    if len(emb.fusion) != tH.size:
        raise UsageError("Class fusion is missing for some subgroup classes")


def restriction_multiplicities(
    tG: CharacterTable, emb: SubgroupEmbedding, tH: CharacterTable
) -> MultiplicityMatrix:
    _check_pair(tG, emb, tH)
    p = tG.p
    h_classes = tH.classes
    restricted = tG.values[:, emb.fusion] % p
    sizes = np.asarray(h_classes.sizes, dtype=np.int64) % p
    conjugate = tH.values[:, h_classes.inverse_class] % p
    products = (restricted * sizes % p) @ conjugate.T % p
    raw = products * inverse_mod(emb.order, p) % p

    if np.any(raw > p // 2):
        raise InternalError(f"Multiplicity does not lift to a non-negative integer modulo {p}")
    values = raw.astype(np.int64)
    matrix = MultiplicityMatrix(values, list(tG.degrees), list(tH.degrees))
    if not np.array_equal(values @ np.asarray(tH.degrees), np.asarray(tG.degrees)):
        raise InternalError("Degree bookkeeping fails for the restriction matrix")
    if values[0, 0] != 1 or values[0, 1:].any():
        raise InternalError("Trivial character does not restrict to the trivial character")
    return matrix


def is_strong_gelfand(
    tG: CharacterTable,
    emb: SubgroupEmbedding,
    tH: CharacterTable,
    force_full: bool = False,
) -> SgpReport:
    detail = (tH.total_degree(), tG.max_degree())
    fires = detail[0] < detail[1]
    order_bound = emb.order < detail[1]
    if fires and not force_full:
        logger.debug("Фильтр по полной степени: %d < %d", *detail)
        return SgpReport(False, "filter", None, None, detail, True, order_bound)
    matrix = restriction_multiplicities(tG, emb, tH)
    top = matrix.max()
    verdict = top <= 1
    if fires and verdict:
        raise InternalError(f"Total-degree filter fired ({detail[0]} < {detail[1]}) on a strong Gelfand pair")
    return SgpReport(verdict, "full", top, matrix.witness(), detail, fires, order_bound)


def is_gelfand(tG: CharacterTable, emb: SubgroupEmbedding, tH: CharacterTable) -> GelfandReport:
    column = restriction_multiplicities(tG, emb, tH).trivial_column()
    witness = next((i for i, m in enumerate(column) if m > 1), None)
    return GelfandReport(witness is None, column, witness)


def tables_for_pair(
    group: Group,
    emb: SubgroupEmbedding,
    *,
    caps: Optional[Caps] = None,
    prime: Optional[int] = None,
    repository: Optional["CharacterTableRepository"] = None,
    tG: Optional[CharacterTable] = None,
) -> tuple[CharacterTable, CharacterTable]:
    """Tables of G and H over one shared prime (the one chosen for G)."""
    if tG is None:
        tG = character_table(group, prime=prime, caps=caps, repository=repository)
    tH = character_table(emb.sub, tG.context, caps=caps, repository=repository)
    return tG, tH


def _partition_commutes(group: Group, labels: np.ndarray, blocks: list[list[int]], cap: int) -> bool:
    """``N_AB(t) == N_BA(t)`` for all blocks A, B and one ``t`` per block.

    ``N_AB(t) = #{(a, b) in A x B : ab = t}``; the blocks are invariant, so
    one representative per block suffices.
    """
    table = group.multiplication_table(cap)
    inverses = group.inverse_indices
    k = len(blocks)
    left_labels = labels * k
    for block in blocks:
        t = block[0]
        partners = table[inverses, t]
        counts = np.bincount(left_labels + labels[partners], minlength=k * k).reshape(k, k)
        if not np.array_equal(counts, counts.T):
            return False
    return True


def schur_ring_commutes(group: Group, sub_generators: Sequence[np.ndarray], cap: int = 5000) -> bool:
    """Commutativity of the Schur ring spanned by the H-class sums."""
    if group.order > cap:
        raise ResourceCapError("oracle", cap, f"group of order {group.order}")
    labels, blocks = orbit_labels(group.order, group.conjugation_maps(sub_generators))
    return _partition_commutes(group, labels, blocks, cap)


def _double_cosets(group: Group, sub_generators: Sequence[np.ndarray]) -> tuple[np.ndarray, list[list[int]]]:
    kind = group.kind
    maps = []
    for h in sub_generators:
        maps.append(group.indices_of(kind.lmul_many(h, group.elements)).tolist())
        maps.append(group.indices_of(kind.mul_many(group.elements, h)).tolist())
    return orbit_labels(group.order, maps)


def hecke_commutes(group: Group, sub_generators: Sequence[np.ndarray], cap: int = 5000) -> bool:
    """Commutativity of the double-coset algebra; equivalent to the plain Gelfand property."""
    if group.order > cap:
        raise ResourceCapError("oracle", cap, f"group of order {group.order}")
    labels, blocks = _double_cosets(group, sub_generators)
    return _partition_commutes(group, labels, blocks, cap)


def double_coset_count(
    group: Group,
    sub_generators: Sequence[np.ndarray],
    cap: int = 100_000,
    trivial_column: Optional[Sequence[int]] = None,
) -> int:
    if group.order > cap:
        raise ResourceCapError("double cosets", cap, f"group of order {group.order}")
    _, blocks = _double_cosets(group, sub_generators)
    count = len(blocks)
    if trivial_column is not None:
        expected = sum(m * m for m in trivial_column)
        if expected != count:
            raise InternalError(f"{count} double cosets, but the permutation character gives {expected}")
    return count


@dataclass
class ScanEntry:
    embedding: SubgroupEmbedding
    report: SgpReport
    conjugate_count: Optional[int] = None

    @property
    def label(self) -> str:
        return self.embedding.label

    @property
    def order(self) -> int:
        return self.embedding.order

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "order": self.order,
            "conjugates": self.conjugate_count,
            "generators": [self.embedding.parent.kind.to_json(g) for g in self.embedding.sub.generators],
            **self.report.to_json(),
        }


@dataclass
class ScanReport:
    group_order: int
    prime: int
    entries: list[ScanEntry]
    audit_pairs: int = 0
    audit_violations: list[tuple[str, str]] = field(default_factory=list)

    @property
    def strong_gelfand(self) -> list[ScanEntry]:
        return [entry for entry in self.entries if entry.report.verdict]

    @property
    def raw_count(self) -> Optional[int]:
        counts = [entry.conjugate_count for entry in self.strong_gelfand]
        if any(c is None for c in counts):
            return None
        return sum(counts)  # type: ignore[arg-type]

    @property
    def monotone(self) -> bool:
        return not self.audit_violations

    def to_json(self) -> dict:
        return {
            "group_order": self.group_order,
            "prime": self.prime,
            "subgroups": [entry.to_json() for entry in self.entries],
            "strong_gelfand_classes": len(self.strong_gelfand),
            "strong_gelfand_raw": self.raw_count,
            "audit": {
                "pairs": self.audit_pairs,
                "monotone": self.monotone,
                "violations": [list(v) for v in self.audit_violations],
            },
        }


def contained_up_to_conjugacy(small: SubgroupEmbedding, big: SubgroupEmbedding) -> bool:
    """Whether some conjugate of ``small`` lies inside ``big``."""
    parent = big.parent
    if big.order % small.order:
        return False
    inside = np.zeros(parent.order, dtype=bool)
    inside[big.parent_indices] = True
    possible = np.ones(parent.order, dtype=bool)
    for k in small.sub.generators:
        possible &= inside[parent.conjugates_by_all(k)]
        if not possible.any():
            return False
    return True


def _audit(entries: list[ScanEntry]) -> tuple[int, list[tuple[str, str]]]:
    pairs = 0
    violations = []
    for big in entries:
        if big.report.verdict:
            continue
        for small in entries:
            if small is big or small.order >= big.order:
                continue
            if not contained_up_to_conjugacy(small.embedding, big.embedding):
                continue
            pairs += 1
            if small.report.verdict:
                violations.append((small.label, big.label))
    return pairs, violations


def sgp_scan(
    group: Group,
    subgroups: Optional[Sequence[SubgroupEmbedding]] = None,
    *,
    caps: Optional[Caps] = None,
    prime: Optional[int] = None,
    repository: Optional["CharacterTableRepository"] = None,
    tG: Optional[CharacterTable] = None,
) -> ScanReport:
    """Strong Gelfand verdict for every subgroup class, largest first.

    Every verdict is computed in full; the filter outcome is recorded next
    to it and the containment monotonicity is audited afterwards.
    """
    caps = caps or Caps()
    started = time.perf_counter()
    if tG is None:
        tG = character_table(group, prime=prime, caps=caps, repository=repository)
    if subgroups is None:
        candidates = [(cls.embedding, cls.conjugate_count) for cls in all_subgroups(group, cap=caps.lattice)]
    else:
        candidates = [(emb, None) for emb in subgroups]
    candidates.sort(key=lambda item: -item[0].order)

    entries = []
    for emb, conjugates in candidates:
        _, tH = tables_for_pair(group, emb, caps=caps, repository=repository, tG=tG)
        report = is_strong_gelfand(tG, emb, tH, force_full=True)
        entries.append(ScanEntry(emb, report, conjugates))
        logger.debug("Подгруппа %s порядка %d: %s", emb.label, emb.order, "да" if report.verdict else "нет")

    pairs, violations = _audit(entries)
    if violations:
        logger.warning("Нарушена монотонность по включению: %s", violations)
    logger.info(
        "Скан %r: %d классов подгрупп, %d сильных пар Гельфанда, %.2f с",
        group,
        len(entries),
        sum(1 for e in entries if e.report.verdict),
        time.perf_counter() - started,
    )
    return ScanReport(group.order, tG.p, entries, pairs, violations)


@dataclass
class MaximalScanReport:
    q: int
    scan: ScanReport
    total_degrees: dict[str, int]
    expected_total_degrees: dict[str, int]
    stated_borel_total: int
    sz_total_degree: int
    ovoid_character_degree: Optional[int] = None

    @property
    def no_strong_gelfand(self) -> bool:
        return not any(entry.report.verdict for entry in self.scan.entries if entry.order < self.scan.group_order)

    @property
    def borel_discrepancy(self) -> bool:
        return self.total_degrees.get("borel") != self.stated_borel_total

    @property
    def ovoid_character_exceeds_totals(self) -> bool:
        """A degree q^2+1 character above every maximal total degree restricts with a repeat everywhere."""
        if self.ovoid_character_degree is None:
            return False
        return all(self.ovoid_character_degree > total for total in self.total_degrees.values())

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "group_total_degree": self.sz_total_degree,
            "no_strong_gelfand_maximal": self.no_strong_gelfand,
            "total_degrees": dict(self.total_degrees),
            "expected_total_degrees": dict(self.expected_total_degrees),
            "borel_total_degree_stated": self.stated_borel_total,
            "borel_discrepancy": self.borel_discrepancy,
            "ovoid_character_degree": self.ovoid_character_degree,
            "ovoid_character_exceeds_totals": self.ovoid_character_exceeds_totals,
            **self.scan.to_json(),
        }


def maximal_scan(
    sz: "SuzukiGroup",
    *,
    caps: Optional[Caps] = None,
    prime: Optional[int] = None,
    repository: Optional["CharacterTableRepository"] = None,
) -> MaximalScanReport:
    """Strong Gelfand check of Sz(q) against each constructed maximal family."""
    from .suzuki import MAXIMAL_FAMILIES, expected_total_degrees, maximal_subgroup, stated_borel_total_degree

    caps = caps or Caps()
    q = sz.params.q
    group = sz.permutations
    tG = character_table(group, prime=prime, caps=caps, repository=repository)
    families = [f for f in MAXIMAL_FAMILIES if not (f == "torus-" and sz.params.torus_order(-1) == 1)]
    embeddings = [maximal_subgroup(sz, which, cap=caps.closure) for which in families]
    scan = sgp_scan(group, embeddings, caps=caps, repository=repository, tG=tG)

    totals = {entry.label: entry.report.filter_detail[0] for entry in scan.entries}
    expected = {k: v for k, v in expected_total_degrees(q).items() if k in totals}
    mismatched = {k for k in expected if expected[k] != totals[k]}
    if mismatched:
        raise InternalError(f"Computed total degrees disagree with the closed forms for {sorted(mismatched)}")
    ovoid_degree = q * q + 1 if q * q + 1 in tG.degrees else None
    report = MaximalScanReport(
        q, scan, totals, expected, stated_borel_total_degree(q), tG.total_degree(), ovoid_degree
    )
    if report.borel_discrepancy:
        logger.warning(
            "Полная степень борелевской подгруппы %d не совпадает с выражением 2(q-1)+2^n(q-1) = %d",
            totals.get("borel"),
            report.stated_borel_total,
        )
    return report

