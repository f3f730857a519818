"""Arithmetic in GF(q), q = p^e.

Elements are plain integers in ``[0, q)``: the polynomial ``sum c_i x^i`` over
GF(p) is stored as ``sum c_i p^i``.  A :class:`FieldCtx` owns the modulus and
the lookup tables; it is immutable once built and safe to share.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from .errors import ParamError, ScidForgeError

MAX_Q = 2**20
LOG_TABLE_MAX_Q = 2**16
FULL_TABLE_MAX_Q = 256


class NotPrime(ParamError):
    pass


class NotIrreducible(ParamError):
    pass


class FieldTooLarge(ParamError):
    pass


class DivisionByZero(ScidForgeError, ZeroDivisionError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, e)`` with ``q == p**e``, or None if q is not a prime power."""
    if q < 2:
        return None
    p = 2
    while p * p <= q and q % p:
        p += 1
    if q % p:
        p = q
    e = 0
    while q % p == 0:
        q //= p
        e += 1
    return (p, e) if q == 1 else None


# --- polynomials over GF(p): little-endian coefficient lists -------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial m."""
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _trim([x % p for x in a[:dm]])


def _monic_polys(p: int, deg: int):
    for low in product(range(p), repeat=deg):
        yield list(low) + [1]


def is_irreducible(modulus: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    deg = len(modulus) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for f in _monic_polys(p, d):
            if not _poly_mod(modulus, f, p):
                return False
    return True


def smallest_irreducible(p: int, e: int) -> list[int]:
    """Lexicographically smallest monic irreducible of degree e, low degree first."""
    # product() varies the last position fastest, so c_0 is the most significant key
    for low in product(range(p), repeat=e):
        cand = list(low) + [1]
        if is_irreducible(cand, p):
            return cand
    raise NotIrreducible(f"no irreducible polynomial of degree {e} over GF({p})")


def _factor(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


class FieldCtx:
    """The field GF(p^e) with a fixed irreducible modulus."""

    __slots__ = ("p", "e", "q", "modulus", "_add", "_mul", "_log", "_exp", "_inv")

    def __init__(self, p: int, e: int, modulus: list[int]):
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = tuple(modulus)
        self._add = self._mul = self._log = self._exp = self._inv = None
        if self.q <= LOG_TABLE_MAX_Q:
            self._build_log_tables()
        if self.q <= FULL_TABLE_MAX_Q:
            q = self.q
            self._add = [[self._add_digits(a, b) for b in range(q)] for a in range(q)]
            self._mul = [[self.mul_schoolbook(a, b) for b in range(q)] for a in range(q)]
            self._inv = [0] + [self._inv_slow(a) for a in range(1, q)]

    def __repr__(self):
        return f"FieldCtx(p={self.p}, e={self.e}, modulus={list(self.modulus)})"

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.p, self.e, self.modulus) == (
            other.p, other.e, other.modulus)

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    # encoding
    def decode(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def encode(self, coeffs) -> int:
        v = 0
        for c in reversed(list(coeffs)):
            v = v * self.p + (c % self.p)
        return v

    def to_dict(self) -> dict:
        return {"p": self.p, "e": self.e, "modulus": list(self.modulus)}

    # arithmetic
    def _add_digits(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.e == 1:
            return (a + b) % self.p
        return self.encode(x + y for x, y in zip(self.decode(a), self.decode(b)))

    def add(self, a: int, b: int) -> int:
        if self._add is not None:
            return self._add[a][b]
        return self._add_digits(a, b)

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.e == 1:
            return (-a) % self.p
        return self.encode(-x for x in self.decode(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul_schoolbook(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        x, y = self.decode(a), self.decode(b)
        prod = [0] * (2 * self.e - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    prod[i + j] += xi * yj
        return self.encode(_poly_mod(prod, list(self.modulus), self.p))

    def mul(self, a: int, b: int) -> int:
        if self._mul is not None:
            return self._mul[a][b]
        if a == 0 or b == 0:
            return 0
        if self._log is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self.mul_schoolbook(a, b)

    def mul_log(self, a: int, b: int) -> int:
        """Product through the log/antilog tables (q <= 2^16 only)."""
        if self._log is None:
            raise ParamError("no log tables for this field size")
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def pow(self, a: int, n: int) -> int:
        result = 1
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result

    def _inv_slow(self, a: int) -> int:
        return self.pow(a, self.q - 2)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self._inv is not None:
            return self._inv[a]
        if self._log is not None:
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return self._inv_slow(a)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise DivisionByZero("zero has no multiplicative order")
        n = self.q - 1
        for f in _factor(self.q - 1):
            while n % f == 0 and self._pow_school(a, n // f) == 1:
                n //= f
        return n

    def _pow_school(self, a: int, n: int) -> int:
        result = 1
        while n:
            if n & 1:
                result = self.mul_schoolbook(result, a)
            a = self.mul_schoolbook(a, a)
            n >>= 1
        return result

    def primitive_element(self) -> int:
        for g in range(1, self.q):
            if self.order(g) == self.q - 1:
                return g
        raise ScidForgeError("no primitive element found")  # unreachable for a field

    def _build_log_tables(self):
        q = self.q
        g = self.primitive_element()
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = self.mul_schoolbook(x, g)
        for i in range(q - 1, 2 * (q - 1)):
            exp[i] = exp[i - (q - 1)]
        self._exp, self._log = exp, log

    def elements(self) -> range:
        return range(self.q)


def field_create(p: int, e: int = 1, modulus: list[int] | None = None) -> FieldCtx:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if e < 1:
        raise ParamError(f"extension degree must be >= 1, got {e}")
    if p**e > MAX_Q:
        raise FieldTooLarge(f"q = {p}^{e} exceeds the cap 2^20")
    if modulus is None:
        modulus = smallest_irreducible(p, e)
    else:
        modulus = [int(c) % p for c in modulus]
        if len(modulus) != e + 1 or modulus[-1] != 1:
            raise NotIrreducible(f"modulus {modulus} is not monic of degree {e}")
        if not is_irreducible(modulus, p):
            raise NotIrreducible(f"modulus {modulus} is reducible over GF({p})")
    return _cached_field(p, e, tuple(modulus))


@lru_cache(maxsize=None)
def _cached_field(p: int, e: int, modulus: tuple[int, ...]) -> FieldCtx:
    return FieldCtx(p, e, list(modulus))


def field_for_q(q: int) -> FieldCtx:
    pe = prime_power(q)
    if pe is None:
        raise NotPrime(f"{q} is not a prime power")
    return field_create(*pe)


def field_from_dict(doc: dict) -> FieldCtx:
    return field_create(int(doc["p"]), int(doc["e"]), [int(c) for c in doc["modulus"]])
