"""Exact arithmetic in F_p[x]/(f).

Elements are coefficient tuples, lowest power first.  Every element also has a
dense integer code ``sum(c_j * p**j)`` which the group layer uses as an array
index; 0 encodes zero and 1 encodes one.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .errors import ContextMismatch, DegreeTooLarge, DivisionByZero, NotPrime

FIELD_ORDER_CAP = int(os.environ.get("UTAUT_FIELD_CAP", 1 << 16))
# Full q x q operation tables are only built up to this order.
TABLE_FIELD_CAP = 1 << 12


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


# --- polynomial helpers over F_p (coefficient lists, low degree first) -----

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo f over F_p; f need not be monic."""
    r = _trim([c % p for c in a])
    f = _trim([c % p for c in f])
    df = len(f) - 1
    lead_inv = pow(f[-1], p - 2, p)
    while len(r) - 1 >= df and r:
        shift = len(r) - 1 - df
        coef = r[-1] * lead_inv % p
        for t, fc in enumerate(f):
            r[shift + t] = (r[shift + t] - coef * fc) % p
        _trim(r)
    return r


def poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _poly_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = _trim(list(a))
    b = _trim(list(b))
    q = [0] * max(len(a) - len(b) + 1, 1)
    inv_lead = pow(b[-1], p - 2, p)
    while a and len(a) >= len(b):
        shift = len(a) - len(b)
        coef = a[-1] * inv_lead % p
        q[shift] = coef
        for t, bc in enumerate(b):
            a[shift + t] = (a[shift + t] - coef * bc) % p
        _trim(a)
    return _trim(q), a


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg(f)//2."""
    f = _trim([c % p for c in f])
    deg = len(f) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not poly_mod(f, list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree m (low coefficients compared first)."""
    for low in itertools.product(range(p), repeat=m):
        f = list(low) + [1]
        if is_irreducible(f, p):
            return tuple(f)
    raise AssertionError(f"no irreducible polynomial of degree {m} over F_{p}")  # pragma: no cover


@dataclass(frozen=True)
class FieldCtx:
    p: int
    m: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrime(f"{self.p} is not prime")
        if self.m < 1:
            raise DegreeTooLarge(f"extension degree must be positive, got {self.m}")
        if len(self.modulus) != self.m + 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree m")
        if not is_irreducible(self.modulus, self.p):
            raise ValueError(f"modulus {self.modulus} is reducible over F_{self.p}")

    @property
    def order(self) -> int:
        return self.p ** self.m

    def __repr__(self) -> str:
        return f"FieldCtx(p={self.p}, m={self.m}, modulus={self.modulus})"

    def __str__(self) -> str:
        return f"F_{self.p}" if self.m == 1 else f"F_{self.p}^{self.m}"

    # -- element construction --

    def __call__(self, value: int | Sequence[int] | "FieldElement") -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.ctx != self:
                raise ContextMismatch("element belongs to another field")
            return value
        if isinstance(value, (int, np.integer)):
            # integers embed through the prime subfield
            return FieldElement(self, (int(value) % self.p,) + (0,) * (self.m - 1))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.m:
            coeffs = poly_mod(coeffs, self.modulus, self.p)
        coeffs = coeffs + [0] * (self.m - len(coeffs))
        return FieldElement(self, tuple(coeffs))

    def from_int(self, code: int) -> "FieldElement":
        if not 0 <= code < self.order:
            raise IndexError(f"field code {code} outside [0, {self.order})")
        coeffs = []
        for _ in range(self.m):
            code, r = divmod(code, self.p)
            coeffs.append(r)
        return FieldElement(self, tuple(coeffs))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.m)

    @property
    def one(self) -> "FieldElement":
        return self(1)

    @property
    def theta(self) -> "FieldElement":
        """The class of x; equals the root of x for m = 1, i.e. zero."""
        return self([0, 1])

    def basis(self) -> list["FieldElement"]:
        """theta**0, ..., theta**(m-1)."""
        return [self.from_int(self.p ** j) for j in range(self.m)]

    def elements(self) -> Iterator["FieldElement"]:
        for code in range(self.order):
            yield self.from_int(code)

    def parse(self, literal: str) -> "FieldElement":
        """Comma-separated base-p digits, lowest power first: ``"0,1"`` is theta."""
        parts = [s.strip() for s in literal.split(",") if s.strip()]
        if not parts or len(parts) > self.m:
            raise ValueError(f"field literal {literal!r} needs 1..{self.m} digits")
        digits = [int(s) for s in parts]
        if any(not 0 <= d < self.p for d in digits):
            raise ValueError(f"digits of {literal!r} must lie in [0, {self.p})")
        return self(digits)

    # -- dense tables for the group kernels --

    @cached_property
    def tables(self) -> "FieldTables":
        if self.order > TABLE_FIELD_CAP:
            raise DegreeTooLarge(f"field of order {self.order} too large for operation tables")
        return FieldTables.build(self)


@dataclass(frozen=True, eq=False)
class FieldTables:
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray  # inv[0] is a placeholder 0

    @classmethod
    def build(cls, F: FieldCtx) -> "FieldTables":
        q, p = F.order, F.p
        codes = np.arange(q, dtype=np.int64)
        digits = (codes[:, None] // (p ** np.arange(F.m, dtype=np.int64))) % p
        weights = p ** np.arange(F.m, dtype=np.int64)
        add = (((digits[:, None, :] + digits[None, :, :]) % p) @ weights).astype(np.int32)
        neg = (((-digits) % p) @ weights).astype(np.int32)
        # mul via discrete log against a primitive element
        log = np.full(q, -1, dtype=np.int64)
        exp = np.zeros(max(q - 1, 1), dtype=np.int64)
        for cand in range(1, q):
            g = F.from_int(cand)
            x = F.one
            seen = 0
            while True:
                c = int(x)
                if log[c] >= 0:
                    break
                log[c] = seen
                exp[seen] = c
                seen += 1
                x = x * g
            if seen == q - 1:
                break
            log[:] = -1
        a = log[1:, None] + log[None, 1:]
        mul = np.zeros((q, q), dtype=np.int32)
        mul[1:, 1:] = exp[a % (q - 1)]
        inv = np.zeros(q, dtype=np.int32)
        inv[1:] = exp[(-log[1:]) % (q - 1)]
        for arr in (add, mul, neg, inv):
            arr.setflags(write=False)
        return cls(add, mul, neg, inv)


@dataclass(frozen=True)
class FieldElement:
    ctx: FieldCtx
    coeffs: tuple[int, ...]

    def _check(self, other) -> "FieldElement":
        if isinstance(other, (int, np.integer)):
            return self.ctx(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.ctx != self.ctx:
            raise ContextMismatch(f"{self.ctx} vs {other.ctx}")
        return other

    def __int__(self) -> int:
        code = 0
        for c in reversed(self.coeffs):
            code = code * self.ctx.p + c
        return code

    __index__ = __int__

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        p = self.ctx.p
        return FieldElement(self.ctx, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.ctx.p
        return FieldElement(self.ctx, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        F = self.ctx
        prod = poly_mul(self.coeffs, other.coeffs, F.p)
        return F(poly_mod(prod, F.modulus, F.p))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        """Extended Euclid on polynomials."""
        if not self:
            raise DivisionByZero("zero has no inverse")
        F = self.ctx
        p = F.p
        r0, r1 = list(F.modulus), _trim(list(self.coeffs))
        s0, s1 = [], [1]
        while r1:
            q, r = _poly_divmod(r0, r1, p)
            r0, r1 = r1, r
            qs = poly_mul(q, s1, p)
            n = max(len(s0), len(qs))
            s0, s1 = s1, _trim([((s0[i] if i < len(s0) else 0) - (qs[i] if i < len(qs) else 0)) % p
                                for i in range(n)])
        # r0 is a nonzero constant
        c = pow(r0[0], p - 2, p)
        return F([x * c for x in s0])

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._check(other) / self

    def __pow__(self, e: int) -> "FieldElement":
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.ctx.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __repr__(self) -> str:
        if self.ctx.m == 1:
            return f"{self.coeffs[0]}"
        terms = []
        for j, c in enumerate(self.coeffs):
            if c:
                mon = "" if j == 0 else ("t" if j == 1 else f"t^{j}")
                terms.append(f"{c}{mon}" if (c != 1 or j == 0) else mon)
        return " + ".join(terms) if terms else "0"


def field_create(p: int, m: int = 1) -> FieldCtx:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if m < 1:
        raise DegreeTooLarge(f"extension degree must be positive, got {m}")
    if p ** m > FIELD_ORDER_CAP:
        raise DegreeTooLarge(f"p^m = {p ** m} exceeds field cap {FIELD_ORDER_CAP}")
    return FieldCtx(p, m, smallest_irreducible(p, m))


def field_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def field_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def field_inv(a: FieldElement) -> FieldElement:
    return a.inverse()
