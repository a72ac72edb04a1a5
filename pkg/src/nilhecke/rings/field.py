"""Finite fields F_q with q = p^m as lookup tables over integer codes.

An element of F_q is encoded as the integer ``sum(c_i * p**i)`` where
``c_0 + c_1 x + ... + c_{m-1} x^{m-1}`` is its residue modulo the field's
defining polynomial. All arithmetic goes through numpy tables so that whole
coefficient arrays can be combined at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from nilhecke.errors import NotAUnit


# Conway polynomials, coefficients from degree 0 upwards (monic).
CONWAY_POLYNOMIALS: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 4, 1),
}


def is_prime(n: int) -> bool:
    """Trial-division primality test for small moduli."""
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _poly_mulmod(
    a: list[int], b: list[int], modulus: tuple[int, ...], p: int
) -> list[int]:
    m = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, m - 1, -1):
        c = prod[k]
        if c:
            for j in range(m + 1):
                prod[k - m + j] = (prod[k - m + j] - c * modulus[j]) % p
    return (prod + [0] * m)[:m]


class FiniteField:
    """The field F_q, q = p^m, realised by a Conway polynomial.

    Args:
        p: Characteristic, a prime.
        m: Extension degree; tabulated for q <= 27.

    Raises:
        ValueError: If p is not prime or (p, m) is not tabulated.
    """

    def __init__(self, p: int, m: int = 1) -> None:
        if not is_prime(p):
            msg = f"characteristic must be prime, got {p}"
            raise ValueError(msg)
        if m < 1:
            msg = f"extension degree must be positive, got {m}"
            raise ValueError(msg)
        if m > 1 and (p, m) not in CONWAY_POLYNOMIALS:
            msg = f"no defining polynomial tabulated for F_{p}^{m}"
            raise ValueError(msg)
        self.p = p
        self.m = m
        self.q = p**m
        self.modulus: tuple[int, ...] = CONWAY_POLYNOMIALS.get((p, m), (0, 1))

        q = self.q
        codes = np.arange(q, dtype=np.int64)
        self.digits = np.zeros((q, m), dtype=np.int64)
        rest = codes.copy()
        for i in range(m):
            self.digits[:, i] = rest % p
            rest //= p
        self._weights = p ** np.arange(m, dtype=np.int64)

        d = self.digits
        self.add_table = ((d[:, None, :] + d[None, :, :]) % p) @ self._weights
        self.neg_table = ((-d) % p) @ self._weights
        if m == 1:
            self.mul_table = np.outer(codes, codes) % p
        else:
            self.mul_table = np.zeros((q, q), dtype=np.int64)
            for a in range(q):
                for b in range(a, q):
                    c = self.from_digits(
                        _poly_mulmod(
                            list(d[a]), list(d[b]), self.modulus, p
                        )
                    )
                    self.mul_table[a, b] = c
                    self.mul_table[b, a] = c
        self.inv_table = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            self.inv_table[a] = int(np.nonzero(self.mul_table[a] == 1)[0][0])
        self.trace_table = np.array(
            [self._trace_slow(int(a)) for a in codes], dtype=np.int64
        )
        self.generator = self._find_generator()
        self.squares = frozenset(
            int(self.mul_table[a, a]) for a in range(1, q)
        )

    def __repr__(self) -> str:
        return f"F_{self.q}"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FiniteField)
            and self.p == other.p
            and self.m == other.m
        )

    def __hash__(self) -> int:
        return hash((self.p, self.m))

    def __reduce__(self) -> tuple[object, tuple[int, int]]:
        return (get_field, (self.p, self.m))

    # scalar arithmetic on codes

    def from_digits(self, digits: list[int] | tuple[int, ...]) -> int:
        """Encode F_p digits (low degree first) as an element code."""
        return int(sum((int(c) % self.p) * self.p**i for i, c in enumerate(digits)))

    def from_int(self, n: int) -> int:
        """Image of an integer in the prime subfield."""
        return n % self.p

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            msg = f"0 has no inverse in {self!r}"
            raise NotAUnit(msg)
        return int(self.inv_table[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def trace(self, a: int) -> int:
        """Absolute trace Tr_{F_q/F_p}, returned as an integer in [0, p)."""
        return int(self.trace_table[a])

    def is_square(self, a: int) -> bool:
        return a == 0 or a in self.squares

    def elements(self) -> range:
        return range(self.q)

    def units(self) -> range:
        return range(1, self.q)

    def fp_basis(self) -> list[int]:
        """The F_p-basis 1, x, ..., x^{m-1} as element codes."""
        return [self.p**i for i in range(self.m)]

    # vectorised arithmetic on code arrays

    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.m == 1:
            return (a + b) % self.p
        return self.add_table[a, b]

    def vneg(self, a: np.ndarray) -> np.ndarray:
        if self.m == 1:
            return (-a) % self.p
        return self.neg_table[a]

    def vsub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.vadd(a, self.vneg(b))

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.m == 1:
            return (a * b) % self.p
        return self.mul_table[a, b]

    def vscale(self, c: int, a: np.ndarray) -> np.ndarray:
        if self.m == 1:
            return (c * a) % self.p
        return self.mul_table[c][a]

    def convolve(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Coefficient array of the product of two polynomials."""
        if len(a) == 0 or len(b) == 0:
            return np.zeros(0, dtype=np.int64)
        if self.m == 1:
            return np.convolve(a, b) % self.p
        out = np.zeros((len(a) + len(b) - 1, self.m), dtype=np.int64)
        for i, x in enumerate(a):
            if x:
                out[i : i + len(b)] += self.digits[self.mul_table[x][b]]
        return (out % self.p) @ self._weights

    def to_fp(self, a: np.ndarray) -> np.ndarray:
        """Digits of each code, shape ``a.shape + (m,)``."""
        return self.digits[a]

    def from_fp(self, digits: np.ndarray) -> np.ndarray:
        """Inverse of :meth:`to_fp` along the last axis."""
        return (digits % self.p) @ self._weights

    # helpers

    def _trace_slow(self, a: int) -> int:
        total, x = 0, a
        for _ in range(self.m):
            total = self._add_slow(total, x)
            x = self._pow_slow(x, self.p)
        return total

    def _add_slow(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def _pow_slow(self, a: int, e: int) -> int:
        result = 1
        for _ in range(e):
            result = int(self.mul_table[result, a])
        return result

    def _find_generator(self) -> int:
        order = self.q - 1
        if order == 1:
            return 1
        prime_factors = [d for d in range(2, order + 1) if order % d == 0 and is_prime(d)]
        for g in range(2 if self.q > 2 else 1, self.q):
            if all(self._pow_slow(g, order // r) != 1 for r in prime_factors):
                return g
        msg = f"no primitive element found in {self!r}"
        raise ArithmeticError(msg)


@lru_cache(maxsize=None)
def get_field(p: int, m: int = 1) -> FiniteField:
    """Shared FiniteField instance for (p, m)."""
    return FiniteField(p, m)


@dataclass(frozen=True)
class FqElem:
    """A single element of F_q with operator overloading."""

    field: FiniteField
    value: int

    def __add__(self, other: FqElem) -> FqElem:
        return FqElem(self.field, self.field.add(self.value, other.value))

    def __sub__(self, other: FqElem) -> FqElem:
        return FqElem(self.field, self.field.sub(self.value, other.value))

    def __neg__(self) -> FqElem:
        return FqElem(self.field, self.field.neg(self.value))

    def __mul__(self, other: FqElem) -> FqElem:
        return FqElem(self.field, self.field.mul(self.value, other.value))

    def __truediv__(self, other: FqElem) -> FqElem:
        return FqElem(self.field, self.field.div(self.value, other.value))

    def __pow__(self, e: int) -> FqElem:
        return FqElem(self.field, self.field.pow(self.value, e))

    def __bool__(self) -> bool:
        return self.value != 0

    def inverse(self) -> FqElem:
        return FqElem(self.field, self.field.inv(self.value))

    def frobenius(self) -> FqElem:
        return self ** self.field.p

    def trace(self) -> int:
        return self.field.trace(self.value)

    def __repr__(self) -> str:
        return str(self.value)
