"""Arithmetic in GF(2^m), m odd, in polynomial-basis bitmask form."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from ..errors import FieldDomainError
from .numtheory import prime_factors

logger = logging.getLogger(__name__)

SUPPORTED_DEGREES = (1, 3, 5, 7, 9, 11, 13, 15)


def _degree(poly: int) -> int:
    return poly.bit_length() - 1


def poly_mod(a: int, mod: int) -> int:
    """Remainder of ``a`` modulo ``mod`` as polynomials over GF(2)."""
    mod_degree = _degree(mod)
    while a and _degree(a) >= mod_degree:
        a ^= mod << (_degree(a) - mod_degree)
    return a


def poly_mulmod(a: int, b: int, mod: int) -> int:
    result = 0
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
    return poly_mod(result, mod)


def is_irreducible(poly: int) -> bool:
    """Exhaustive factor check: no polynomial of degree 1..deg/2 divides ``poly``."""
    degree = _degree(poly)
    if degree < 1:
        return False
    for d in range(1, degree // 2 + 1):
        for candidate in range(1 << d, 1 << (d + 1)):
            if poly_mod(poly, candidate) == 0:
                return False
    return True


@lru_cache(maxsize=None)
def default_modulus(m: int) -> int:
    """Lexicographically least irreducible polynomial of degree ``m``."""
    if m not in SUPPORTED_DEGREES:
        raise FieldDomainError(f"Field degree must be odd and at most 15, got {m}")
    for candidate in range(1 << m, 1 << (m + 1)):
        if is_irreducible(candidate):
            return candidate
    raise FieldDomainError(f"No irreducible polynomial of degree {m}")


@dataclass(frozen=True)
class FieldParams:
    """GF(2^m) with a fixed irreducible modulus; m = 2n + 1."""

    m: int
    modulus: int

    def __post_init__(self) -> None:
        if self.m not in SUPPORTED_DEGREES:
            raise FieldDomainError(f"Field degree must be odd and at most 15, got {self.m}")
        if self.modulus <= 0:
            raise FieldDomainError(f"Modulus must be a positive bitmask, got {self.modulus}")
        if _degree(self.modulus) != self.m:
            raise FieldDomainError(
                f"Modulus {self.modulus:#b} has degree {_degree(self.modulus)}, expected {self.m}"
            )
        if not is_irreducible(self.modulus):
            raise FieldDomainError(f"Modulus {self.modulus:#b} is reducible over GF(2)")

    @classmethod
    def for_degree(cls, m: int) -> "FieldParams":
        return cls(m=m, modulus=default_modulus(m))

    @property
    def n(self) -> int:
        return (self.m - 1) // 2

    @property
    def q(self) -> int:
        return 1 << self.m

    @property
    def theta_exp(self) -> int:
        return 1 << (self.n + 1)

    def element(self, bits: int) -> "FieldElement":
        return FieldElement(self, bits)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, bits) for bits in range(self.q)]

    def to_json(self) -> dict[str, int]:
        return {"m": self.m, "modulus": self.modulus}

    # Scalar arithmetic on raw bitmasks

    def mul_bits(self, a: int, b: int) -> int:
        return poly_mulmod(a, b, self.modulus)

    def pow_bits(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise FieldDomainError("Zero has no inverse")
            return 1 if k == 0 else 0
        k %= self.q - 1
        result = 1
        while k:
            if k & 1:
                result = self.mul_bits(result, a)
            a = self.mul_bits(a, a)
            k >>= 1
        return result

    def inv_bits(self, a: int) -> int:
        if a == 0:
            raise FieldDomainError("Zero has no inverse")
        return self.pow_bits(a, self.q - 2)

    def theta_bits(self, a: int) -> int:
        for _ in range(self.n + 1):
            a = self.mul_bits(a, a)
        return a

    def multiplicative_order(self, a: int) -> int:
        if a == 0:
            raise FieldDomainError("Zero has no multiplicative order")
        order = self.q - 1
        for prime in prime_factors(self.q - 1):
            while order % prime == 0 and self.pow_bits(a, order // prime) == 1:
                order //= prime
        return order

    @cached_property
    def primitive_bits(self) -> int:
        # smallest bitmask of full multiplicative order
        for candidate in range(1, self.q):
            if self.multiplicative_order(candidate) == self.q - 1:
                return candidate
        raise FieldDomainError(f"No primitive element in GF(2^{self.m})")

    # Vectorised tables

    @cached_property
    def exp_table(self) -> np.ndarray:
        """Powers of the primitive element, doubled so log sums need no reduction."""
        size = self.q - 1
        table = np.empty(2 * size, dtype=np.int64)
        value = 1
        for i in range(size):
            table[i] = value
            value = self.mul_bits(value, self.primitive_bits)
        table[size:] = table[:size]
        return table

    @cached_property
    def log_table(self) -> np.ndarray:
        table = np.zeros(self.q, dtype=np.int64)
        exp = self.exp_table
        for i in range(self.q - 1):
            table[exp[i]] = i
        return table

    def mul_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        product = self.exp_table[self.log_table[a] + self.log_table[b]]
        return np.where((a == 0) | (b == 0), 0, product)


@dataclass(frozen=True)
class FieldElement:
    params: FieldParams
    bits: int

    def __post_init__(self) -> None:
        if not 0 <= self.bits < self.params.q:
            raise FieldDomainError(f"Bitmask {self.bits} out of range for GF(2^{self.params.m})")

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise FieldDomainError(f"Expected a field element, got {type(other).__name__}")
        if other.params != self.params:
            raise FieldDomainError("Field elements belong to different fields")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.params, self.bits ^ other.bits)

    __sub__ = __add__

    def __neg__(self) -> "FieldElement":
        return self

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement(self.params, self.params.mul_bits(self.bits, other.bits))

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        return self * other.inverse()

    def __pow__(self, k: int) -> "FieldElement":
        return FieldElement(self.params, self.params.pow_bits(self.bits, k))

    def __bool__(self) -> bool:
        return self.bits != 0

    def __int__(self) -> int:
        return self.bits

    def inverse(self) -> "FieldElement":
        return FieldElement(self.params, self.params.inv_bits(self.bits))

    def theta(self) -> "FieldElement":
        return FieldElement(self.params, self.params.theta_bits(self.bits))

    def trace(self) -> int:
        total, power = 0, self.bits
        for _ in range(self.params.m):
            total ^= power
            power = self.params.mul_bits(power, power)
        return total

    def __repr__(self) -> str:
        return f"GF(2^{self.params.m})[{self.bits:#b}]"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def power(a: FieldElement, k: int) -> FieldElement:
    return a ** k


def theta(x: FieldElement) -> FieldElement:
    """Tits twist x -> x^(2^(n+1)); theta(theta(x)) == x^2."""
    return x.theta()


def primitive_element(params: FieldParams) -> FieldElement:
    return FieldElement(params, params.primitive_bits)
