"""Exact arithmetic in GF(p^e) for the small orders used by the coordinate models.

Elements are integer codes 0..q-1: the code of c_0 + c_1 x + ... + c_{e-1} x^{e-1}
is sum c_i p^i.  All operations are table lookups built once per field.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from .errors import FieldDivisionByZero, NotAPrimePower, Unsupported

MAX_ORDER = 16

# monic reduction polynomials, coefficients from the constant term upwards
REDUCTION_POLYS: dict[int, tuple[int, ...]] = {
    4: (1, 1, 1),  # x^2 + x + 1
    8: (1, 1, 0, 1),  # x^3 + x + 1
    9: (1, 0, 1),  # x^2 + 1
    16: (1, 1, 0, 0, 1),  # x^4 + x + 1
}


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q == p**e, or raise NotAPrimePower."""
    if q < 2:
        raise NotAPrimePower(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise NotAPrimePower(f"{q} has at least two distinct prime divisors")
    return p, e


def _poly_mod(a: list[int], m: tuple[int, ...], p: int) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return [c % p for c in a[:dm]]


def is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    deg = len(poly) - 1
    if deg < 1 or poly[-1] % p != 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in product(range(p), repeat=d):
            divisor = tuple(low) + (1,)
            if not any(_poly_mod(list(poly), divisor, p)):
                return False
    return True


class Field:
    """GF(q) with precomputed addition, multiplication, negation and inverse tables."""

    def __init__(self, q: int):
        p, e = prime_power(q)
        if q > MAX_ORDER:
            raise Unsupported(f"GF({q}) is beyond the supported range q <= {MAX_ORDER}")
        self.p, self.e, self.q = p, e, q
        self.reduction_poly = REDUCTION_POLYS.get(q, (0, 1))
        if not is_irreducible(self.reduction_poly, p):
            raise AssertionError(f"reduction polynomial for GF({q}) is reducible")

        digits = [self._digits(a) for a in range(q)]
        self.add_table = [[self._code([(x + y) % p for x, y in zip(da, db)]) for db in digits] for da in digits]
        self.neg_table = [self._code([(-x) % p for x in da]) for da in digits]
        self.mul_table = [[0] * q for _ in range(q)]
        for a in range(q):
            for b in range(a, q):
                full = [0] * (2 * e - 1)
                for i, x in enumerate(digits[a]):
                    for j, y in enumerate(digits[b]):
                        full[i + j] += x * y
                c = self._code(_poly_mod(full, self.reduction_poly, p) if e > 1 else [full[0] % p])
                self.mul_table[a][b] = self.mul_table[b][a] = c
        self.inv_table = [0] * q
        for a in range(1, q):
            self.inv_table[a] = next(b for b in range(1, q) if self.mul_table[a][b] == 1)

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def _code(self, digits) -> int:
        return sum(c * self.p**i for i, c in enumerate(digits))

    def __repr__(self) -> str:
        return f"Field(q={self.q})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("GF", self.q))

    @property
    def elements(self) -> range:
        return range(self.q)

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a][self.neg_table[b]]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldDivisionByZero(f"0 has no inverse in GF({self.q})")
        return self.inv_table[a]

    def div(self, a: int, b: int) -> int:
        return self.mul_table[a][self.inv(b)]

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        result = 1
        while n:
            if n & 1:
                result = self.mul_table[result][a]
            a = self.mul_table[a][a]
            n >>= 1
        return result

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise FieldDivisionByZero("0 has no multiplicative order")
        n, x = 1, a
        while x != 1:
            x = self.mul_table[x][a]
            n += 1
        return n

    def has_root(self, coeffs: tuple[int, ...]) -> bool:
        """True if the polynomial sum coeffs[i] t^i has a root in this field."""
        for t in range(self.q):
            acc = 0
            for c in reversed(coeffs):
                acc = self.add_table[self.mul_table[acc][t]][c]
            if acc == 0:
                return True
        return False


@lru_cache(maxsize=None)
def field_make(q: int) -> Field:
    return Field(q)


def field_arithmetic(F: Field, op: str, a: int, b: int | None = None) -> int:
    if not (0 <= a < F.q) or (b is not None and not 0 <= b < F.q):
        raise ValueError("element code out of range")
    if op == "add":
        return F.add(a, b)
    if op == "mul":
        return F.mul(a, b)
    if op == "neg":
        return F.neg(a)
    if op == "inv":
        return F.inv(a)
    raise ValueError(f"unknown field operation {op!r}")
