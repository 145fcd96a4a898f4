"""Character tables by the Dixon-Schneider method over Z/p.

Every character value is kept as a residue modulo a Dixon prime
``p = 1 (mod exp G)`` with ``p > 2|G|``; quantities that are rational
integers in ``[0, 2|G|)`` (degrees, multiplicities) lift uniquely.
"""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterator, Optional

import numpy as np

from ..config import Caps
from ..errors import InternalError, ResourceCapError, UsageError
from .groups import ConjClasses, Group
from .modlinalg import charpoly_mod, column_echelon, inverse_mod, nullspace_mod, roots_mod
from .numtheory import is_prime, prime_factors

if TYPE_CHECKING:
    from ..repositories import CharacterTableRepository

logger = logging.getLogger(__name__)


def _has_order(x: int, e: int, p: int) -> bool:
    if pow(x, e, p) != 1:
        return False
    return all(pow(x, e // ell, p) != 1 for ell in prime_factors(e))


def primitive_root(p: int) -> int:
    divisors = prime_factors(p - 1)
    return next(g for g in range(1, p) if all(pow(g, (p - 1) // ell, p) != 1 for ell in divisors))


@dataclass(frozen=True)
class DixonContext:
    p: int
    e: int
    omega: int

    def validate(self, order: int) -> None:
        if not is_prime(self.p):
            raise UsageError(f"{self.p} is not prime")
        if (self.p - 1) % self.e:
            raise UsageError(f"Prime {self.p} is not 1 modulo the exponent {self.e}")
        if self.p <= 2 * order:
            raise UsageError(f"Prime {self.p} does not exceed 2|G| = {2 * order}")
        if not _has_order(self.omega, self.e, self.p):
            raise UsageError(f"{self.omega} does not have order {self.e} modulo {self.p}")

    def to_json(self) -> dict[str, int]:
        return {"p": self.p, "e": self.e, "omega": self.omega}


def exponent(group: Group) -> int:
    return group.exponent()


def admissible_primes(order: int, e: int) -> Iterator[int]:
    """Primes ``p = 1 (mod e)`` with ``p > 2 * order``, ascending."""
    candidate = (2 * order // e) * e + 1
    while True:
        if candidate > 2 * order and is_prime(candidate):
            yield candidate
        candidate += e


def context_for_prime(order: int, e: int, p: int) -> DixonContext:
    if not is_prime(p) or (p - 1) % e:
        raise UsageError(f"Prime {p} is not admissible for exponent {e}")
    omega = pow(primitive_root(p), (p - 1) // e, p)
    context = DixonContext(p=p, e=e, omega=omega)
    context.validate(order)
    return context


def dixon_prime(order: int, e: int, skip: int = 0) -> DixonContext:
    """The ``skip``-th smallest admissible prime (0 = least) with its ``omega``."""
    primes = admissible_primes(order, e)
    for _ in range(skip):
        next(primes)
    return context_for_prime(order, e, next(primes))


def class_matrices(group: Group) -> np.ndarray:
    """Structure constants ``a[i, j, k] = #{(x, y) in C_i x C_j : xy = z_k}``.

    Counted through ``u = x^-1``: ``x^-1 z_k in C_j`` becomes ``u z_k in C_j``
    with ``u`` in the inverse class of ``C_i``.
    """
    classes = group.classes
    r = classes.count
    constants = np.zeros((r, r, r), dtype=np.int64)
    inverse = np.asarray(classes.inverse_class)
    for k, rep in enumerate(classes.reps):
        products = group.indices_of(group.kind.mul_many(group.elements, group.elements[rep]))
        landing = classes.class_of[products]
        counts = np.bincount(classes.class_of * r + landing, minlength=r * r).reshape(r, r)
        constants[inverse, :, k] = counts
    return constants


@dataclass
class CharacterTable:
    group: Group
    context: DixonContext
    classes: ConjClasses
    values: np.ndarray
    degrees: list[int]

    @property
    def p(self) -> int:
        return self.context.p

    @property
    def size(self) -> int:
        return len(self.degrees)

    def total_degree(self) -> int:
        return sum(self.degrees)

    def max_degree(self) -> int:
        return max(self.degrees)

    def linear_count(self) -> int:
        return sum(1 for d in self.degrees if d == 1)

    def nonlinear_degrees(self) -> list[int]:
        return [d for d in self.degrees if d > 1]

    def is_real(self, row: int) -> bool:
        inverse = self.classes.inverse_class
        return all(self.values[row, k] == self.values[row, inverse[k]] for k in range(self.size))

    def real_rows(self) -> list[int]:
        return [r for r in range(self.size) if self.is_real(r)]

    def to_json(self) -> dict:
        return {
            **self.context.to_json(),
            "order": self.group.order,
            "class_sizes": list(self.classes.sizes),
            "element_orders": list(self.classes.element_orders),
            "degrees": list(self.degrees),
            "values": self.values.tolist(),
        }


def total_character_degree(table: CharacterTable) -> int:
    return table.total_degree()


def _split(matrix: np.ndarray, basis: np.ndarray, pivots: list[int], p: int) -> list[tuple[np.ndarray, list[int]]]:
    """Eigenspaces of ``matrix`` restricted to the invariant span of ``basis``."""
    dim = basis.shape[1]
    image = matrix @ basis % p
    restricted = image[pivots, :]
    pieces = []
    found = 0
    for root in roots_mod(charpoly_mod(restricted, p), p):
        kernel = nullspace_mod((image - root * basis) % p, p)
        if not kernel.shape[1]:
            continue
        found += kernel.shape[1]
        pieces.append(column_echelon(basis @ kernel % p, p))
    if found != dim:
        raise InternalError(f"Eigenspaces of dimension {found} do not fill a space of dimension {dim}")
    return pieces


def _candidate_matrices(constants: np.ndarray) -> Iterator[np.ndarray]:
    r = constants.shape[0]
    for j in range(1, r):
        yield constants[j]
    for i in range(1, r):
        for j in range(i + 1, r):
            yield constants[i] + constants[j]


def _compute_table(group: Group, context: DixonContext) -> CharacterTable:
    p = context.p
    classes = group.classes
    r = classes.count
    constants = class_matrices(group) % p
    spaces = [(np.eye(r, dtype=np.int64), list(range(r)))]
    for matrix in _candidate_matrices(constants):
        if all(basis.shape[1] == 1 for basis, _ in spaces):
            break
        refined = []
        for basis, pivots in spaces:
            if basis.shape[1] == 1:
                refined.append((basis, pivots))
            else:
                refined.extend(_split(matrix, basis, pivots, p))
        spaces = refined
    if any(basis.shape[1] != 1 for basis, _ in spaces):
        raise InternalError(
            f"Eigenspace splitting stalled for {group!r} at p={p}: "
            f"dimensions {[basis.shape[1] for basis, _ in spaces]}"
        )

    inv_sizes = np.asarray([inverse_mod(s, p) for s in classes.sizes], dtype=np.int64)
    inverse = np.asarray(classes.inverse_class)
    bound = math.isqrt(group.order)
    rows = []
    for basis, _ in spaces:
        w = basis[:, 0] * inverse_mod(basis[0, 0], p) % p
        norm = int(np.sum(w * w[inverse] % p * inv_sizes % p) % p)
        if norm == 0:
            raise InternalError("Central character has zero norm")
        square = group.order * inverse_mod(norm, p) % p
        degree = next((d for d in range(1, bound + 1) if d * d % p == square), None)
        if degree is None:
            raise InternalError(f"No integer degree squares to {square} modulo {p}")
        rows.append((degree, tuple((degree * w % p * inv_sizes % p).tolist())))
    rows.sort()
    values = np.asarray([row[1] for row in rows], dtype=np.int64)
    degrees = [row[0] for row in rows]
    table = CharacterTable(group, context, classes, values, degrees)
    validate_table(table)
    return table


def validate_table(table: CharacterTable) -> None:
    """Row and column orthogonality mod p, plus the degree identities."""
    group, p = table.group, table.p
    classes = table.classes
    r = classes.count
    if table.values.shape != (r, r):
        raise InternalError(f"Table has shape {table.values.shape}, expected {(r, r)}")
    if sum(d * d for d in table.degrees) != group.order:
        raise InternalError("Squared degrees do not sum to the group order")
    bound = math.isqrt(group.order)
    if any(d < 1 or d > bound for d in table.degrees):
        raise InternalError("Degree outside [1, sqrt|G|]")
    if any(int(table.values[i, 0]) != d for i, d in enumerate(table.degrees)):
        raise InternalError("Identity column does not match the degrees")
    values = table.values % p
    sizes = np.asarray(classes.sizes, dtype=np.int64) % p
    conjugate = values[:, classes.inverse_class]
    rows = (values * sizes % p) @ conjugate.T % p
    if not np.array_equal(rows, np.eye(r, dtype=np.int64) * (group.order % p)):
        raise InternalError("Row orthogonality fails modulo p")
    columns = values.T @ conjugate % p
    expected = np.diag([group.order // s % p for s in classes.sizes])
    if not np.array_equal(columns, expected):
        raise InternalError("Column orthogonality fails modulo p")


def character_table(
    group: Group,
    context: Optional[DixonContext] = None,
    *,
    prime: Optional[int] = None,
    caps: Optional[Caps] = None,
    repository: Optional["CharacterTableRepository"] = None,
) -> CharacterTable:
    caps = caps or Caps()
    if group.order > caps.table_order:
        raise ResourceCapError("table order", caps.table_order, f"group of order {group.order}")
    classes = group.classes
    if classes.count > caps.table_classes:
        raise ResourceCapError("table classes", caps.table_classes, f"{classes.count} classes")
    e = group.exponent()
    if context is None:
        context = context_for_prime(group.order, e, prime) if prime else dixon_prime(group.order, e)
    elif context.e != e:
        context = context_for_prime(group.order, e, context.p)
    context.validate(group.order)

    fingerprint = group.fingerprint() if repository is not None else None
    if repository is not None:
        cached = repository.get(fingerprint, context.p)
        if cached is not None:
            table = CharacterTable(
                group,
                context,
                classes,
                np.asarray(cached.values, dtype=np.int64),
                list(cached.degrees),
            )
            try:
                validate_table(table)
                logger.info("Таблица характеров %r взята из кэша (p=%d)", group, context.p)
                return table
            except InternalError as exc:
                logger.warning("Запись кэша для %r повреждена, пересчитываем: %s", group, exc)

    started = time.perf_counter()
    table = _compute_table(group, context)
    logger.info(
        "Таблица характеров %r: %d неприводимых, p=%d, %.2f с",
        group,
        table.size,
        context.p,
        time.perf_counter() - started,
    )
    if repository is not None:
        repository.add(fingerprint, context.p, table.degrees, table.values.tolist())
    return table
