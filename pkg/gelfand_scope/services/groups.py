"""Finite groups by full element enumeration.

Elements are stored as rows of a numpy array; the canonical encoding of an
element is the raw bytes of its row. Every group is built by a layered
breadth-first closure, so element order is a pure function of the generator
list.
"""
from __future__ import annotations

import hashlib
import json
import logging
import math
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from ..errors import ConstructionError, InternalError, ResourceCapError, UsageError
from .ff2m import FieldParams

logger = logging.getLogger(__name__)

DEFAULT_CLOSURE_CAP = 2_000_000
DEFAULT_LATTICE_CAP = 500
DEFAULT_CAYLEY_CAP = 5000


class ElementKind(ABC):
    """Element representation plus vectorised products on stacks of rows."""

    tag: str
    width: int
    dtype: np.dtype

    @abstractmethod
    def identity(self) -> np.ndarray: ...

    @abstractmethod
    def mul_many(self, rows: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Each row times ``b``."""

    @abstractmethod
    def lmul_many(self, b: np.ndarray, rows: np.ndarray) -> np.ndarray:
        """``b`` times each row."""

    @abstractmethod
    def mul_rows(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        """Row-wise products ``left[x] * right[x]``."""

    @abstractmethod
    def inverse(self, a: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def coerce(self, raw: Sequence[int]) -> np.ndarray:
        """Validate and convert raw JSON data to an element row."""

    @abstractmethod
    def descriptor(self) -> dict: ...

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.mul_many(a[None, :], b)[0]

    def to_json(self, a: np.ndarray) -> list[int]:
        return [int(v) for v in a]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ElementKind) and self.descriptor() == other.descriptor()

    def __hash__(self) -> int:
        return hash(json.dumps(self.descriptor(), sort_keys=True))


class PermutationKind(ElementKind):
    """Permutations of ``0..degree-1``; ``(a*b)[i] = b[a[i]]`` (apply a, then b)."""

    tag = "perm"

    def __init__(self, degree: int) -> None:
        if degree < 1:
            raise UsageError(f"Permutation degree must be positive, got {degree}")
        self.degree = degree
        self.width = degree
        self.dtype = np.dtype(np.uint8 if degree <= 256 else np.uint16)

    def identity(self) -> np.ndarray:
        return np.arange(self.degree, dtype=self.dtype)

    def mul_many(self, rows: np.ndarray, b: np.ndarray) -> np.ndarray:
        return b[rows]

    def lmul_many(self, b: np.ndarray, rows: np.ndarray) -> np.ndarray:
        return np.ascontiguousarray(rows[:, b])

    def mul_rows(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        return np.take_along_axis(right, left.astype(np.intp), axis=1)

    def inverse(self, a: np.ndarray) -> np.ndarray:
        return np.argsort(a, kind="stable").astype(self.dtype)

    def coerce(self, raw: Sequence[int]) -> np.ndarray:
        images = list(raw)
        if len(images) != self.degree:
            raise UsageError(f"Permutation has {len(images)} images, expected {self.degree}")
        seen: dict[int, int] = {}
        for position, image in enumerate(images):
            if not isinstance(image, (int, np.integer)) or not 0 <= image < self.degree:
                raise UsageError(f"Image at position {position} is out of range: {image!r}")
            if image in seen:
                raise UsageError(
                    f"Not a bijection: positions {seen[image]} and {position} both map to {image}"
                )
            seen[image] = position
        return np.asarray(images, dtype=self.dtype)

    def descriptor(self) -> dict:
        return {"kind": "perm", "degree": self.degree}


class MatrixKind(ElementKind):
    """Invertible ``dim x dim`` matrices over GF(2^m), row-major bitmasks."""

    tag = "mat4"

    def __init__(self, field_params: FieldParams, dim: int = 4) -> None:
        self.field = field_params
        self.dim = dim
        self.width = dim * dim
        self.dtype = np.dtype(np.uint16)

    def _square(self, rows: np.ndarray) -> np.ndarray:
        return rows.reshape(-1, self.dim, self.dim).astype(np.int64)

    def _flat(self, cube: np.ndarray) -> np.ndarray:
        return np.ascontiguousarray(cube.reshape(-1, self.width).astype(self.dtype))

    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=self.dtype).reshape(self.width)

    def mul_many(self, rows: np.ndarray, b: np.ndarray) -> np.ndarray:
        a3 = self._square(rows)
        b3 = self._square(b)[0]
        products = self.field.mul_arrays(a3[:, :, :, None], b3[None, None, :, :])
        return self._flat(np.bitwise_xor.reduce(products, axis=2))

    def lmul_many(self, b: np.ndarray, rows: np.ndarray) -> np.ndarray:
        a3 = self._square(rows)
        b3 = self._square(b)[0]
        products = self.field.mul_arrays(b3[None, :, :, None], a3[:, None, :, :])
        return self._flat(np.bitwise_xor.reduce(products, axis=2))

    def mul_rows(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        l3 = self._square(left)
        r3 = self._square(right)
        products = self.field.mul_arrays(l3[:, :, :, None], r3[:, None, :, :])
        return self._flat(np.bitwise_xor.reduce(products, axis=2))

    def inverse(self, a: np.ndarray) -> np.ndarray:
        field = self.field
        n = self.dim
        work = [[int(a[i * n + j]) for j in range(n)] + [int(i == j) for j in range(n)] for i in range(n)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if work[r][col]), None)
            if pivot is None:
                raise UsageError("Matrix is singular over the field")
            work[col], work[pivot] = work[pivot], work[col]
            scale = field.inv_bits(work[col][col])
            work[col] = [field.mul_bits(v, scale) for v in work[col]]
            for r in range(n):
                if r != col and work[r][col]:
                    factor = work[r][col]
                    work[r] = [v ^ field.mul_bits(factor, w) for v, w in zip(work[r], work[col])]
        return np.asarray([work[i][n + j] for i in range(n) for j in range(n)], dtype=self.dtype)

    def coerce(self, raw: Sequence[int]) -> np.ndarray:
        entries = list(raw)
        if len(entries) != self.width:
            raise UsageError(f"Matrix has {len(entries)} entries, expected {self.width}")
        for position, value in enumerate(entries):
            if not isinstance(value, (int, np.integer)) or not 0 <= value < self.field.q:
                raise UsageError(f"Entry {position} is not an element of GF({self.field.q}): {value!r}")
        matrix = np.asarray(entries, dtype=self.dtype)
        self.inverse(matrix)
        return matrix

    def descriptor(self) -> dict:
        return {"kind": "mat4", "field": self.field.to_json()}


@dataclass(frozen=True)
class ConjClasses:
    reps: list[int]
    sizes: list[int]
    class_of: np.ndarray
    inverse_class: list[int]
    element_orders: list[int]

    @property
    def count(self) -> int:
        return len(self.reps)

    def is_real(self, k: int) -> bool:
        return self.inverse_class[k] == k


class Group:
    """Generators plus the fully enumerated, closed element set."""

    def __init__(
        self,
        kind: ElementKind,
        generators: list[np.ndarray],
        elements: np.ndarray,
        index: dict[bytes, int],
        parents: np.ndarray,
        via: np.ndarray,
        layers: list[tuple[int, int]],
        name: str | None = None,
    ) -> None:
        self.kind = kind
        self.generators = generators
        self.elements = elements
        self.index = index
        self._parents = parents
        self._via = via
        self._layers = layers
        self.name = name
        self._table: np.ndarray | None = None
        self._rows: list[list[int]] = []

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        label = self.name or self.kind.tag
        return f"Group({label}, order={self.order})"

    @cached_property
    def keys(self) -> list[bytes]:
        return [row.tobytes() for row in self.elements]

    @cached_property
    def generator_indices(self) -> list[int]:
        return [self.index[g.tobytes()] for g in self.generators]

    def contains(self, element: np.ndarray) -> bool:
        return element.tobytes() in self.index

    def index_of(self, element: np.ndarray) -> int:
        try:
            return self.index[element.tobytes()]
        except KeyError as exc:
            raise UsageError("Element does not belong to the group") from exc

    def indices_of(self, rows: np.ndarray) -> np.ndarray:
        index = self.index
        try:
            return np.fromiter((index[row.tobytes()] for row in rows), dtype=np.int64, count=len(rows))
        except KeyError as exc:
            raise InternalError("Product left the enumerated group") from exc

    @cached_property
    def inverse_indices(self) -> np.ndarray:
        """Inverse of every element, rebuilt from the closure parents."""
        kind = self.kind
        inverses = np.full(self.order, -1, dtype=np.int64)
        inverses[0] = 0
        gen_inverses = [kind.inverse(g) for g in self.generators]
        for start, stop in self._layers[1:]:
            rows = np.arange(start, stop)
            for gi, g_inv in enumerate(gen_inverses):
                selected = rows[self._via[rows] == gi]
                if not len(selected):
                    continue
                parent_inverses = self.elements[inverses[self._parents[selected]]]
                # (p * g)^-1 = g^-1 * p^-1
                inverses[selected] = self.indices_of(kind.lmul_many(g_inv, parent_inverses))
        return inverses

    @cached_property
    def classes(self) -> ConjClasses:
        return conjugacy_classes(self)

    def multiplication_table(self, cap: int = DEFAULT_CAYLEY_CAP) -> np.ndarray:
        """Cayley table ``table[i, j] = index(e_i * e_j)``, built once for groups of order <= ``cap``."""
        if self._table is None:
            if self.order > cap:
                raise ResourceCapError("cayley table", cap, f"group of order {self.order}")
            table = np.empty((self.order, self.order), dtype=np.int64)
            for j, element in enumerate(self.elements):
                table[:, j] = self.indices_of(self.kind.mul_many(self.elements, element))
            self._table = table
            self._rows = table.tolist()
        return self._table

    def cayley_rows(self, cap: int = DEFAULT_CAYLEY_CAP) -> list[list[int]]:
        self.multiplication_table(cap)
        return self._rows

    def element_order(self, i: int) -> int:
        identity = self.elements[0]
        element = self.elements[i]
        power = element
        for k in range(1, self.order + 1):
            if np.array_equal(power, identity):
                return k
            power = self.kind.mul(power, element)
        raise InternalError(f"Element {i} has no finite order within the group")

    def centralizer_order(self, i: int) -> int:
        classes = self.classes
        return self.order // classes.sizes[int(classes.class_of[i])]

    def exponent(self) -> int:
        return math.lcm(*self.classes.element_orders)

    def conjugation_maps(self, elements: Iterable[np.ndarray]) -> list[list[int]]:
        """For each ``g``: the map ``x -> g^-1 x g`` on element indices."""
        maps = []
        for g in elements:
            g_inv = self.kind.inverse(g)
            conjugated = self.kind.lmul_many(g_inv, self.kind.mul_many(self.elements, g))
            maps.append(self.indices_of(conjugated).tolist())
        return maps

    def conjugates_by_all(self, h: np.ndarray) -> np.ndarray:
        """Indices of ``g^-1 h g`` for every element ``g`` (in element order)."""
        inverses = self.elements[self.inverse_indices]
        return self.indices_of(self.kind.mul_rows(self.kind.mul_many(inverses, h), self.elements))

    def fingerprint(self) -> str:
        digest = hashlib.sha256(json.dumps(self.kind.descriptor(), sort_keys=True).encode())
        for key in sorted(self.keys):
            digest.update(key)
        return digest.hexdigest()

    def same_elements(self, other: "Group") -> bool:
        return self.kind == other.kind and set(self.keys) == set(other.keys)


def closure(
    kind: ElementKind,
    generators: Sequence[np.ndarray],
    cap: int = DEFAULT_CLOSURE_CAP,
    name: str | None = None,
) -> Group:
    """Layered breadth-first product closure of ``generators``."""
    if cap < 1:
        raise UsageError(f"Closure cap must be positive, got {cap}")
    started = time.perf_counter()
    gens = [np.ascontiguousarray(np.asarray(g, dtype=kind.dtype)) for g in generators]
    for g in gens:
        kind.inverse(g)
    identity = kind.identity()
    index: dict[bytes, int] = {identity.tobytes(): 0}
    blocks = [identity[None, :]]
    parents: list[int] = [-1]
    via: list[int] = [-1]
    layers: list[tuple[int, int]] = [(0, 1)]
    frontier_rows = identity[None, :]
    frontier = [0]
    count = 1
    while len(frontier) and gens:
        new_rows: list[np.ndarray] = []
        new_indices: list[int] = []
        for gi, g in enumerate(gens):
            products = kind.mul_many(frontier_rows, g)
            for position, row in enumerate(products):
                key = row.tobytes()
                if key in index:
                    continue
                if count >= cap:
                    raise ResourceCapError("closure", cap, f"{count} elements reached")
                index[key] = count
                new_rows.append(row)
                new_indices.append(count)
                parents.append(frontier[position])
                via.append(gi)
                count += 1
        if not new_rows:
            break
        frontier_rows = np.ascontiguousarray(np.stack(new_rows))
        frontier = new_indices
        blocks.append(frontier_rows)
        layers.append((new_indices[0], new_indices[-1] + 1))
    elements = np.ascontiguousarray(np.concatenate(blocks))
    logger.info(
        "Замыкание %s: %d элементов за %.2f с", name or kind.tag, count, time.perf_counter() - started
    )
    return Group(
        kind,
        gens,
        elements,
        index,
        np.asarray(parents, dtype=np.int64),
        np.asarray(via, dtype=np.int64),
        layers,
        name=name,
    )


def orbit_labels(size: int, maps: Sequence[Sequence[int]]) -> tuple[np.ndarray, list[list[int]]]:
    """Orbits of the group generated by ``maps`` acting on ``range(size)``."""
    labels = [-1] * size
    orbits: list[list[int]] = []
    for start in range(size):
        if labels[start] >= 0:
            continue
        label = len(orbits)
        labels[start] = label
        members = [start]
        stack = [start]
        while stack:
            x = stack.pop()
            for action in maps:
                y = action[x]
                if labels[y] < 0:
                    labels[y] = label
                    members.append(y)
                    stack.append(y)
        orbits.append(members)
    return np.asarray(labels, dtype=np.int64), orbits


def conjugacy_classes(group: Group) -> ConjClasses:
    """Orbit partition under conjugation by the generators.

    Classes are ordered by (element order, size, representative encoding);
    the identity class is always first.
    """
    started = time.perf_counter()
    maps = group.conjugation_maps(group.generators)
    _, orbits = orbit_labels(group.order, maps)
    keys = group.keys
    described = []
    for members in orbits:
        rep = min(members, key=keys.__getitem__)
        described.append((group.element_order(rep), len(members), keys[rep], rep, members))
    described.sort(key=lambda item: item[:3])

    class_of = np.empty(group.order, dtype=np.int64)
    for k, item in enumerate(described):
        class_of[item[4]] = k
    reps = [item[3] for item in described]
    sizes = [item[1] for item in described]
    orders = [item[0] for item in described]
    inverse_class = [
        int(class_of[group.index_of(group.kind.inverse(group.elements[rep]))]) for rep in reps
    ]
    if sum(sizes) != group.order or any(group.order % s for s in sizes) or sizes[0] != 1:
        raise InternalError("Class sizes do not partition the group")
    logger.info(
        "Классы сопряжённости %r: %d классов за %.2f с",
        group,
        len(reps),
        time.perf_counter() - started,
    )
    return ConjClasses(reps, sizes, class_of, inverse_class, orders)


@dataclass
class SubgroupEmbedding:
    parent: Group
    sub: Group
    parent_indices: np.ndarray
    fusion: list[int]
    label: str = ""

    @property
    def order(self) -> int:
        return self.sub.order

    @property
    def index(self) -> int:
        return self.parent.order // self.sub.order


def subgroup_embed(
    parent: Group,
    generators: Sequence[np.ndarray],
    cap: int = DEFAULT_CLOSURE_CAP,
    label: str = "",
) -> SubgroupEmbedding:
    gens = []
    for position, g in enumerate(generators):
        row = np.ascontiguousarray(np.asarray(g, dtype=parent.kind.dtype))
        if row.shape != (parent.kind.width,) or not parent.contains(row):
            raise UsageError(f"Subgroup generator {position} is not an element of the group")
        gens.append(row)
    sub = closure(parent.kind, gens, cap=cap, name=label or None)
    if parent.order % sub.order:
        raise ConstructionError(f"Subgroup order {sub.order} does not divide {parent.order}")
    parent_indices = parent.indices_of(sub.elements)
    parent_classes = parent.classes
    sub_classes = sub.classes
    fusion = [int(parent_classes.class_of[parent_indices[rep]]) for rep in sub_classes.reps]
    fused = np.asarray(fusion, dtype=np.int64)[sub_classes.class_of]
    if not np.array_equal(parent_classes.class_of[parent_indices], fused):
        raise ConstructionError("Class fusion is not well defined")
    return SubgroupEmbedding(parent, sub, parent_indices, fusion, label=label)


def generating_set(group: Group, members: Sequence[int], cap: int = DEFAULT_CAYLEY_CAP) -> list[int]:
    """Greedy generating set of the subgroup ``members`` (indices into ``group``)."""
    rows = group.cayley_rows(cap)
    chosen: list[int] = []
    span = {0}
    for candidate in sorted(members):
        if candidate in span:
            continue
        chosen.append(candidate)
        span = _close_indices(rows, chosen)
    return chosen


def _close_indices(rows: Sequence[Sequence[int]], generators: Sequence[int]) -> set[int]:
    members = {0}
    frontier = [0]
    while frontier:
        fresh = []
        for x in frontier:
            row = rows[x]
            for g in generators:
                y = row[g]
                if y not in members:
                    members.add(y)
                    fresh.append(y)
        frontier = fresh
    return members


@dataclass
class SubgroupClass:
    embedding: SubgroupEmbedding
    members: tuple[int, ...]
    conjugate_count: int
    conjugates: list[tuple[int, ...]] = field(repr=False, default_factory=list)

    @property
    def order(self) -> int:
        return len(self.members)


def all_subgroups(group: Group, cap: int = DEFAULT_LATTICE_CAP) -> list[SubgroupClass]:
    """Every subgroup up to conjugacy, ordered by (order, least element-set)."""
    if group.order > cap:
        raise ResourceCapError("lattice", cap, f"group of order {group.order}")
    started = time.perf_counter()
    table = group.multiplication_table(cap)
    rows = group.cayley_rows(cap)
    order = group.order

    def close(generators: list[int]) -> frozenset[int]:
        return frozenset(_close_indices(rows, generators))

    known: dict[frozenset[int], list[int]] = {}
    for g in range(order):
        subgroup = close([g])
        known.setdefault(subgroup, [g])
    queue = list(known)
    while queue:
        current = queue.pop(0)
        current_gens = known[current]
        for g in range(order):
            if g in current:
                continue
            bigger = close(current_gens + [g])
            if bigger not in known:
                known[bigger] = current_gens + [g]
                queue.append(bigger)

    inverses = group.inverse_indices
    left = table[inverses, :]
    conj = table[left, np.arange(order)[:, None]]
    buckets: dict[tuple[int, ...], set[tuple[int, ...]]] = {}
    for subgroup in known:
        members = np.fromiter(subgroup, dtype=np.int64)
        images = {tuple(sorted(conj[g, members].tolist())) for g in range(order)}
        canonical = min(images)
        buckets.setdefault(canonical, images)

    result = []
    for canonical in sorted(buckets, key=lambda members: (len(members), members)):
        gens = generating_set(group, canonical, cap)
        embedding = subgroup_embed(group, [group.elements[i] for i in gens])
        embedding.label = structure_label(embedding.sub)
        conjugates = sorted(buckets[canonical])
        result.append(SubgroupClass(embedding, canonical, len(conjugates), conjugates))
    logger.info(
        "Решётка подгрупп %r: %d классов (%d подгрупп) за %.2f с",
        group,
        len(result),
        len(known),
        time.perf_counter() - started,
    )
    return result


def normalizer(group: Group, subset: Sequence[np.ndarray], name: str | None = None) -> Group:
    """Brute-force normalizer ``{g : subset^g = subset}``."""
    subset_indices = np.asarray(sorted({group.index_of(np.asarray(h, dtype=group.kind.dtype)) for h in subset}))
    keep = np.ones(group.order, dtype=bool)
    for i in subset_indices:
        keep &= np.isin(group.conjugates_by_all(group.elements[i]), subset_indices)
    members = np.flatnonzero(keep)
    gens: list[np.ndarray] = []
    span: Group | None = None
    for i in members:
        if span is not None and span.contains(group.elements[i]):
            continue
        gens.append(group.elements[i])
        span = closure(group.kind, gens, name=name)
        if span.order == len(members):
            break
    if span is None:
        span = closure(group.kind, [], name=name)
    if span.order != len(members):
        raise InternalError("Normalizer scan is not closed under products")
    return span


def element_order(group: Group, x: np.ndarray) -> int:
    return group.element_order(group.index_of(x))


def centralizer_order(group: Group, x: np.ndarray) -> int:
    return group.centralizer_order(group.index_of(x))


def derived_subgroup(group: Group, cap: int = DEFAULT_CLOSURE_CAP) -> Group:
    """Normal closure of the commutators of generator pairs."""
    kind = group.kind
    commutators = []
    for a in group.generators:
        for b in group.generators:
            c = kind.mul(kind.mul(kind.inverse(a), kind.inverse(b)), kind.mul(a, b))
            commutators.append(c)
    gens = [c for c in commutators if not np.array_equal(c, kind.identity())]
    sub = closure(kind, gens, cap=cap)
    changed = True
    while changed:
        changed = False
        for s in group.generators:
            s_inv = kind.inverse(s)
            for t in list(sub.generators):
                conjugate = kind.mul(kind.mul(s_inv, t), s)
                if not sub.contains(conjugate):
                    gens.append(conjugate)
                    sub = closure(kind, gens, cap=cap)
                    changed = True
    return sub


def structure_label(group: Group) -> str:
    order = group.order
    classes = group.classes
    per_element = np.asarray(classes.element_orders)[classes.class_of]
    if per_element.max() == order:
        return f"C{order}"
    half = order // 2
    if order % 2 == 0 and half >= 3:
        candidates = np.flatnonzero(per_element == half)
        if len(candidates):
            x = group.elements[candidates[0]]
            cyclic = {group.elements[0].tobytes()}
            power = x
            while power.tobytes() not in cyclic:
                cyclic.add(power.tobytes())
                power = group.kind.mul(power, x)
            outside = [i for i, key in enumerate(group.keys) if key not in cyclic]
            if all(per_element[i] == 2 for i in outside):
                return f"D{order}"
    return f"G{order}"


def group_to_json(group: Group) -> dict:
    payload = dict(group.kind.descriptor())
    payload["generators"] = [group.kind.to_json(g) for g in group.generators]
    return payload


def kind_from_json(data: dict) -> ElementKind:
    kind = data.get("kind")
    if kind == "perm":
        degree = data.get("degree")
        if isinstance(degree, bool) or not isinstance(degree, int):
            raise UsageError("Field 'degree' must be an integer")
        return PermutationKind(degree)
    if kind == "mat4":
        field_data = data.get("field")
        if not isinstance(field_data, dict) or not {"m", "modulus"} <= set(field_data):
            raise UsageError("Field 'field' must be an object with 'm' and 'modulus'")
        for name in ("m", "modulus"):
            value = field_data[name]
            if isinstance(value, bool) or not isinstance(value, int):
                raise UsageError(f"Field 'field.{name}' must be an integer, got {value!r}")
        return MatrixKind(FieldParams(m=field_data["m"], modulus=field_data["modulus"]))
    raise UsageError(f"Unknown group kind: {kind!r}")


def group_from_json(data: dict, cap: int = DEFAULT_CLOSURE_CAP, name: str | None = None) -> Group:
    if not isinstance(data, dict):
        raise UsageError("Group input must be a JSON object")
    kind = kind_from_json(data)
    raw_generators = data.get("generators")
    if not isinstance(raw_generators, list):
        raise UsageError("Field 'generators' must be a list")
    generators = []
    for position, raw in enumerate(raw_generators):
        if not isinstance(raw, list):
            raise UsageError(f"Generator {position} must be a list")
        try:
            generators.append(kind.coerce(raw))
        except UsageError as exc:
            raise UsageError(f"Generator {position}: {exc}") from exc
    return closure(kind, generators, cap=cap, name=name or data.get("name"))
