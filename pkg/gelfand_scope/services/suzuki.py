"""Sz(q) as 4x4 matrices over GF(q), its ovoid action and maximal subgroups.

Conventions: row vectors, ``v -> v g``. The unitriangular family satisfies
``S(a, b) S(c, d) = S(a + c, b + d + a^theta c)`` and is normalised by the
torus ``M(l) = diag(l^(2^n+1), l^(2^n), l^(-2^n), l^(-2^n-1))``.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from functools import cached_property
from typing import Literal, Optional

import numpy as np

from ..errors import ConstructionError, UsageError
from .ff2m import FieldParams
from .numtheory import is_prime
from .groups import (
    DEFAULT_CLOSURE_CAP,
    Group,
    MatrixKind,
    PermutationKind,
    SubgroupEmbedding,
    closure,
    normalizer,
    subgroup_embed,
)

logger = logging.getLogger(__name__)

Form = Literal["perm", "matrix"]


@dataclass(frozen=True)
class SuzukiParams:
    field: FieldParams

    @classmethod
    def for_degree(cls, m: int) -> "SuzukiParams":
        return cls(FieldParams.for_degree(m))

    @property
    def m(self) -> int:
        return self.field.m

    @property
    def n(self) -> int:
        return self.field.n

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def r(self) -> int:
        """sqrt(2q) = 2^(n+1)."""
        return 1 << (self.n + 1)

    @property
    def expected_order(self) -> int:
        q = self.q
        return q * q * (q * q + 1) * (q - 1)

    @property
    def ovoid_size(self) -> int:
        return self.q * self.q + 1

    def torus_order(self, sign: int) -> int:
        if sign not in (1, -1):
            raise UsageError(f"Torus sign must be +1 or -1, got {sign}")
        return self.q + sign * self.r + 1


def s_matrix(params: SuzukiParams, a: int, b: int) -> np.ndarray:
    f = params.field
    a_theta = f.theta_bits(a)
    top = f.mul_bits(f.mul_bits(a, a), a_theta) ^ f.mul_bits(a, b) ^ f.theta_bits(b)
    middle = f.mul_bits(a, a_theta) ^ b
    rows = [
        [1, 0, 0, 0],
        [a, 1, 0, 0],
        [b, a_theta, 1, 0],
        [top, middle, a, 1],
    ]
    return np.asarray(rows, dtype=np.uint16).reshape(16)


def m_matrix(params: SuzukiParams, lam: int) -> np.ndarray:
    f = params.field
    half = 1 << params.n
    diagonal = [f.pow_bits(lam, e) for e in (half + 1, half, -half, -half - 1)]
    matrix = np.zeros((4, 4), dtype=np.uint16)
    for i, value in enumerate(diagonal):
        matrix[i, i] = value
    return matrix.reshape(16)


def tau_matrix() -> np.ndarray:
    return np.fliplr(np.eye(4, dtype=np.uint16)).copy().reshape(16)


def _certify(group: Group, params: SuzukiParams) -> dict:
    classes = group.classes
    q, r = params.q, params.r
    periods = (4, q - 1, q - r + 1, q + r + 1)
    orders_ok = all(any(p % o == 0 for p in periods) for o in classes.element_orders)
    return {
        "order": group.order,
        "expected_order": params.expected_order,
        "class_count": classes.count,
        "expected_class_count": q + 3,
        "element_orders": sorted(set(classes.element_orders)),
        "checks": {
            "order": group.order == params.expected_order,
            "class_count": classes.count == q + 3,
            "element_orders": orders_ok,
        },
    }


@dataclass
class OvoidAction:
    group: Group
    points: list[tuple[int, int, int, int]]
    correspondence: np.ndarray

    @property
    def degree(self) -> int:
        return len(self.points)

    def pair_orbit_size(self, first: int = 0, second: int = 1) -> int:
        """Orbit length of the ordered pair; (q^2+1)q^2 for a 2-transitive action."""
        n = self.degree
        gens = [g.astype(np.int64) for g in self.group.generators]
        start = first * n + second
        seen = {start}
        frontier = [start]
        while frontier:
            fresh = []
            for code in frontier:
                a, b = divmod(code, n)
                for g in gens:
                    image = int(g[a]) * n + int(g[b])
                    if image not in seen:
                        seen.add(image)
                        fresh.append(image)
            frontier = fresh
        return len(seen)


class SuzukiGroup:
    """Sz(q) in matrix form with a lazily built permutation form."""

    def __init__(self, params: SuzukiParams, matrices: Group) -> None:
        self.params = params
        self.matrices = matrices

    def __repr__(self) -> str:
        return f"SuzukiGroup(q={self.params.q}, order={self.matrices.order})"

    @cached_property
    def certificate(self) -> dict:
        return _certify(self.matrices, self.params)

    @cached_property
    def ovoid(self) -> OvoidAction:
        return ovoid_action(self)

    @property
    def permutations(self) -> Group:
        return self.ovoid.group

    def form(self, form: Form) -> Group:
        if form == "matrix":
            return self.matrices
        if form == "perm":
            return self.permutations
        raise UsageError(f"Unknown form: {form!r}")

    def translate(self, matrix_elements: list[np.ndarray], form: Form) -> list[np.ndarray]:
        """Map matrix elements to the requested form through the index correspondence."""
        if form == "matrix":
            return matrix_elements
        target = self.form(form)
        return [target.elements[self.ovoid.correspondence[self.matrices.index_of(g)]] for g in matrix_elements]


def suzuki_group(m: int, cap: int = DEFAULT_CLOSURE_CAP) -> SuzukiGroup:
    """Closure of ``S(1,0), S(0,1), M(l0), tau``, checked against the contract."""
    if m % 2 == 0 or m < 1:
        raise UsageError(f"Sz(2^m) needs odd m >= 1, got {m}")
    params = SuzukiParams.for_degree(m)
    started = time.perf_counter()
    generators = [
        s_matrix(params, 1, 0),
        s_matrix(params, 0, 1),
        m_matrix(params, params.field.primitive_bits),
        tau_matrix(),
    ]
    matrices = closure(MatrixKind(params.field), generators, cap=cap, name=f"Sz({params.q})")
    sz = SuzukiGroup(params, matrices)
    certificate = sz.certificate
    failed = [name for name, ok in certificate["checks"].items() if not ok]
    if failed:
        raise ConstructionError(
            f"Sz({params.q}) failed its contract ({', '.join(failed)}): "
            f"order {certificate['order']}, {certificate['class_count']} classes"
        )
    logger.info("Построена Sz(%d) порядка %d за %.2f с", params.q, matrices.order, time.perf_counter() - started)
    return sz


def _normalize_point(field: FieldParams, vector: list[int]) -> tuple[int, int, int, int]:
    lead = next(v for v in vector if v)
    scale = field.inv_bits(lead)
    return tuple(field.mul_bits(v, scale) for v in vector)  # type: ignore[return-value]


def _act(field: FieldParams, vector: tuple[int, ...], matrix: np.ndarray) -> tuple[int, int, int, int]:
    result = [0, 0, 0, 0]
    for k, coefficient in enumerate(vector):
        if not coefficient:
            continue
        for j in range(4):
            result[j] ^= field.mul_bits(coefficient, int(matrix[4 * k + j]))
    return _normalize_point(field, result)


def ovoid_action(sz: SuzukiGroup) -> OvoidAction:
    """Permutation action on the orbit of the Borel-fixed point <e0>."""
    params = sz.params
    field = params.field
    matrices = sz.matrices
    start: tuple[int, int, int, int] = (1, 0, 0, 0)
    points = [start]
    position = {start: 0}
    frontier = [start]
    while frontier:
        fresh = []
        for point in frontier:
            for g in matrices.generators:
                image = _act(field, point, g)
                if image not in position:
                    position[image] = len(points)
                    points.append(image)
                    fresh.append(image)
        frontier = fresh
    if len(points) != params.ovoid_size:
        raise ConstructionError(f"Ovoid orbit has {len(points)} points, expected {params.ovoid_size}")

    kind = PermutationKind(len(points))
    perm_generators = [
        np.asarray([position[_act(field, point, g)] for point in points], dtype=kind.dtype)
        for g in matrices.generators
    ]
    image = closure(kind, perm_generators, cap=matrices.order + 1, name=f"Sz({params.q}) on {len(points)} points")
    if image.order != matrices.order:
        raise ConstructionError(f"Ovoid action is not faithful: image order {image.order}")
    # identical closure schedules on isomorphic groups give index-aligned elements
    correspondence = np.arange(matrices.order, dtype=np.int64)
    for i in (1, matrices.order // 2, matrices.order - 1):
        point_images = [position[_act(field, point, matrices.elements[i])] for point in points]
        if point_images != image.elements[i].tolist():
            raise ConstructionError("Permutation image is not index-aligned with the matrix group")
    return OvoidAction(image, points, correspondence)


def _embed(sz: SuzukiGroup, generators: list[np.ndarray], form: Form, label: str, cap: int) -> SubgroupEmbedding:
    parent = sz.form(form)
    return subgroup_embed(parent, sz.translate(generators, form), cap=cap, label=label)


def borel(sz: SuzukiGroup, form: Form = "perm", cap: int = DEFAULT_CLOSURE_CAP) -> SubgroupEmbedding:
    """Point stabiliser E_q^{1+1}: C_{q-1} of order q^2(q-1)."""
    params = sz.params
    basis = [1 << i for i in range(params.m)]
    generators = [s_matrix(params, b, 0) for b in basis] + [s_matrix(params, 0, b) for b in basis]
    generators.append(m_matrix(params, params.field.primitive_bits))
    embedding = _embed(sz, generators, form, "borel", cap)
    q = params.q
    if embedding.order != q * q * (q - 1):
        raise ConstructionError(f"Borel subgroup has order {embedding.order}, expected {q * q * (q - 1)}")
    if embedding.sub.classes.count != q + 2:
        raise ConstructionError(f"Borel subgroup has {embedding.sub.classes.count} classes, expected {q + 2}")
    return embedding


def dihedral_max(sz: SuzukiGroup, form: Form = "perm", cap: int = DEFAULT_CLOSURE_CAP) -> SubgroupEmbedding:
    """D_{2(q-1)} = <M(l0), tau>."""
    params = sz.params
    generators = [m_matrix(params, params.field.primitive_bits), tau_matrix()]
    embedding = _embed(sz, generators, form, "dihedral", cap)
    if embedding.order != 2 * (params.q - 1):
        raise ConstructionError(f"Dihedral subgroup has order {embedding.order}, expected {2 * (params.q - 1)}")
    return embedding


def torus_normalizer(
    sz: SuzukiGroup, sign: int, form: Form = "perm", cap: int = DEFAULT_CLOSURE_CAP
) -> SubgroupEmbedding:
    """Normaliser (q + sign*sqrt(2q) + 1): 4 of the first cyclic torus element met."""
    params = sz.params
    target = params.torus_order(sign)
    if target == 1:
        raise UsageError(f"The torus of sign {sign:+d} is trivial for q = {params.q}")
    group = sz.form(form)
    classes = group.classes
    per_element = np.asarray(classes.element_orders)[classes.class_of]
    hits = np.flatnonzero(per_element == target)
    if not len(hits):
        raise ConstructionError(f"No element of order {target} in Sz({params.q})")
    x = group.elements[hits[0]]
    powers = [x]
    while not np.array_equal(powers[-1], group.elements[0]):
        powers.append(group.kind.mul(powers[-1], x))
    label = "torus+" if sign > 0 else "torus-"
    found = normalizer(group, powers, name=label)
    embedding = subgroup_embed(group, found.generators, cap=cap, label=label)
    if embedding.order != 4 * target:
        raise ConstructionError(f"{label} normaliser has order {embedding.order}, expected {4 * target}")
    return embedding


MAXIMAL_FAMILIES = ("borel", "dihedral", "torus+", "torus-")


def maximal_subgroup(sz: SuzukiGroup, which: str, form: Form = "perm", cap: int = DEFAULT_CLOSURE_CAP) -> SubgroupEmbedding:
    if which == "borel":
        return borel(sz, form, cap)
    if which == "dihedral":
        return dihedral_max(sz, form, cap)
    if which == "torus+":
        return torus_normalizer(sz, 1, form, cap)
    if which == "torus-":
        return torus_normalizer(sz, -1, form, cap)
    raise UsageError(f"Unknown maximal subgroup family: {which!r}")


def maximal_subgroup_orders(q: int) -> dict[str, int]:
    r = _sqrt_2q(q)
    return {
        "borel": q * q * (q - 1),
        "dihedral": 2 * (q - 1),
        "torus+": 4 * (q + r + 1),
        "torus-": 4 * (q - r + 1),
    }


def expected_total_degrees(q: int) -> dict[str, int]:
    """Total character degrees of the constructible maximal families.

    Borel: q-1 linear characters, one of degree q-1 and two of degree
    (q-1)sqrt(q/2). Dihedral of order 2(q-1): two linear, (q-2)/2 of degree 2.
    t:4 with t = q +- sqrt(2q) + 1: four linear, (t-1)/4 of degree 4.
    """
    r = _sqrt_2q(q)
    return {
        "borel": (q - 1) * (2 + r),
        "dihedral": q,
        "torus+": (q + r + 1) + 3,
        "torus-": (q - r + 1) + 3,
    }


def stated_borel_total_degree(q: int) -> int:
    """The expression 2(q-1) + 2^n(q-1), which disagrees with its own constituents."""
    return 2 * (q - 1) + (_sqrt_2q(q) // 2) * (q - 1)


def _sqrt_2q(q: int) -> int:
    e = q.bit_length() - 1
    if q < 2 or q != 1 << e or e % 2 == 0:
        raise UsageError(f"q must be an odd power of 2, got {q}")
    return 1 << ((e + 1) // 2)


def sz_total_degree_formula(q0: int) -> int:
    """Total character degree of Sz(q0): 2^(k+1)(q0-1) - q0(q0-1) + q0^3, q0 = 2^(2k+1)."""
    e = q0.bit_length() - 1
    if q0 < 8 or q0 != 1 << e or e % 2 == 0:
        raise UsageError(f"q0 must be an odd power of 2 that is at least 8, got {q0}")
    k = (e - 1) // 2
    return (1 << (k + 1)) * (q0 - 1) - q0 * (q0 - 1) + q0 ** 3


def sz_total_degree_bound_holds(q0: int, r: int) -> bool:
    """q^2 + 1 >= total degree of Sz(q0) for q = q0^r, r an odd prime."""
    if r < 3 or not is_prime(r):
        raise UsageError(f"r must be a prime of at least 3, got {r}")
    q = q0 ** r
    return q * q + 1 >= sz_total_degree_formula(q0)


def subgroup_certificate(embedding: SubgroupEmbedding, expected_order: Optional[int] = None) -> dict:
    classes = embedding.sub.classes
    payload = {
        "label": embedding.label,
        "order": embedding.order,
        "index": embedding.index,
        "class_count": classes.count,
        "fusion": list(embedding.fusion),
        "divides_parent": embedding.parent.order % embedding.order == 0,
    }
    if expected_order is not None:
        payload["expected_order"] = expected_order
        payload["order_ok"] = embedding.order == expected_order
    return payload
