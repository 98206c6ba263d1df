"""Arithmetic over GF(2): binary polynomials, GF(2^k) and subfield embeddings.

Binary polynomials are plain Python ints, bit ``i`` holding the coefficient of
``x**i``.  A field ``GF(2^k)`` is the quotient of GF(2)[x] by the smallest
irreducible polynomial of degree ``k`` (see :func:`find_irreducible`), and its
elements are ints in ``range(2**k)`` with the same bit convention, so the
residue class of ``x`` (the value ``2``, or ``1`` when ``k == 1``) is the
canonical generator.

Polynomials *over* a field are lists of element ints, lowest degree first,
with no trailing zeros (the zero polynomial is ``[]``).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from sympy import factorint, primefactors

#: Degree of the zero polynomial.  Compares below every integer degree.
DEG_ZERO = -math.inf

# Fields up to this degree get exp/log tables (scalar and numpy paths).
TABLE_MAX_DEGREE = 16


# ---------------------------------------------------------------------------
# BinPoly: polynomials over GF(2) packed into ints
# ---------------------------------------------------------------------------

def bp_degree(a: int) -> int | float:
    return a.bit_length() - 1 if a else DEG_ZERO


def clmul(a: int, b: int) -> int:
    """Carry-less product of two bit vectors."""
    if a < b:
        a, b = b, a
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def bp_divmod(a: int, b: int) -> tuple[int, int]:
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    db = b.bit_length()
    q = 0
    while a.bit_length() >= db:
        shift = a.bit_length() - db
        q |= 1 << shift
        a ^= b << shift
    return q, a


def bp_mod(a: int, b: int) -> int:
    return bp_divmod(a, b)[1]


def bp_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, bp_mod(a, b)
    return a


def bp_mulmod(a: int, b: int, m: int) -> int:
    return bp_mod(clmul(a, b), m)


def bp_powmod(a: int, e: int, m: int) -> int:
    r = 1
    a = bp_mod(a, m)
    while e:
        if e & 1:
            r = bp_mulmod(r, a, m)
        a = bp_mulmod(a, a, m)
        e >>= 1
    return bp_mod(r, m)


def is_irreducible(f: int) -> bool:
    """Rabin's test for irreducibility over GF(2)."""
    k = bp_degree(f)
    if k == DEG_ZERO or k < 1:
        return False
    if k == 1:
        return True
    x = 2
    if bp_powmod(x, 1 << k, f) != x:
        return False
    for ell in primefactors(k):
        h = bp_powmod(x, 1 << (k // ell), f) ^ x
        if bp_gcd(f, h) != 1:
            return False
    return True


@functools.lru_cache(maxsize=None)
def find_irreducible(degree: int) -> int:
    """Smallest-encoding irreducible polynomial of ``degree`` with constant term 1.

    The constant-term condition only bites in degree 1, where it selects
    ``x + 1`` over ``x`` (the latter would make the generator zero).
    """
    if degree < 1:
        raise ValueError(f"degree must be positive, got {degree}")
    for f in range((1 << degree) | 1, 1 << (degree + 1), 2):
        if is_irreducible(f):
            return f
    raise AssertionError(f"no irreducible polynomial of degree {degree}")  # pragma: no cover


def bp_str(a: int, var: str = "x") -> str:
    if not a:
        return "0"
    terms = []
    for i in range(a.bit_length() - 1, -1, -1):
        if (a >> i) & 1:
            terms.append("1" if i == 0 else var if i == 1 else f"{var}^{i}")
    return " + ".join(terms)


# ---------------------------------------------------------------------------
# Fields
# ---------------------------------------------------------------------------

class FieldCtx:
    """The field GF(2^degree) modulo the canonical (or a given) irreducible.

    Immutable after construction.  Elements are ints; :meth:`__call__` wraps
    one in a :class:`FieldElem` for operator-style use.
    """

    def __init__(self, degree: int, modulus: int | None = None):
        if modulus is None:
            modulus = find_irreducible(degree)
        if bp_degree(modulus) != degree or not is_irreducible(modulus):
            raise ValueError(f"modulus {modulus:#x} is not irreducible of degree {degree}")
        self.degree = degree
        self.modulus = modulus
        self.order = 1 << degree
        self._tables = None

    # identity -------------------------------------------------------------
    def _key(self):
        return (self.degree, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"GF(2^{self.degree})[{bp_str(self.modulus)}]"

    def to_json(self) -> dict:
        return {"degree": self.degree, "modulus": format(self.modulus, "x")}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldCtx":
        return cls(int(obj["degree"]), int(obj["modulus"], 16))

    # elements -------------------------------------------------------------
    @property
    def alpha(self) -> int:
        """Residue class of x."""
        return bp_mod(2, self.modulus)

    def __call__(self, value: int) -> "FieldElem":
        return FieldElem(self, self.check(value))

    def check(self, value: int) -> int:
        if not 0 <= value < self.order:
            raise ValueError(f"{value:#x} is not an element of {self!r}")
        return value

    def elements(self) -> range:
        return range(self.order)

    # arithmetic on ints ---------------------------------------------------
    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        t = self.tables
        if t is not None:
            if not a or not b:
                return 0
            return t[0][t[1][a] + t[1][b]]
        return bp_mod(clmul(a, b), self.modulus)

    def square(self, a: int) -> int:
        return self.mul(a, a)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a = self.inv(a)
            e = -e
        if e == 0:
            return 1
        if not a:
            return 0
        t = self.tables
        if t is not None:
            return t[0][(t[1][a] * e) % (self.order - 1)]
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def inv(self, a: int) -> int:
        if not a:
            raise ZeroDivisionError("inverse of zero field element")
        t = self.tables
        if t is not None:
            return t[0][(self.order - 1 - t[1][a]) % (self.order - 1)]
        return self.pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def frobenius(self, a: int, times: int = 1) -> int:
        """a ** (2 ** times)."""
        for _ in range(times % self.degree):
            a = self.mul(a, a)
        return a

    # multiplicative structure ---------------------------------------------
    @functools.cached_property
    def _group_factors(self) -> dict[int, int]:
        return factorint(self.order - 1)

    def element_order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if not a:
            raise ValueError("zero has no multiplicative order")
        e = self.order - 1
        for ell in self._group_factors:
            while e % ell == 0 and self._pow_raw(a, e // ell) == 1:
                e //= ell
        return e

    def _pow_raw(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = bp_mod(clmul(r, a), self.modulus)
            a = bp_mod(clmul(a, a), self.modulus)
            e >>= 1
        return r

    @functools.cached_property
    def generator(self) -> int:
        """Smallest-encoding generator of the multiplicative group."""
        if self.order == 2:
            return 1
        for g in range(2, self.order):
            if all(self._pow_raw(g, (self.order - 1) // ell) != 1 for ell in self._group_factors):
                return g
        raise AssertionError("multiplicative group has no generator")  # pragma: no cover

    @property
    def tables(self):
        """(exp, log) lists, or None for fields too large to tabulate."""
        if self.degree > TABLE_MAX_DEGREE:
            return None
        if self._tables is None:
            q1 = self.order - 1
            g = self.generator
            exp = [0] * (2 * q1 + 1)
            log = [0] * self.order
            v = 1
            for i in range(q1):
                exp[i] = v
                log[v] = i
                v = bp_mod(clmul(v, g), self.modulus)
            for i in range(q1, 2 * q1 + 1):
                exp[i] = exp[i - q1]
            self._tables = (exp, log, np.array(exp, dtype=np.int64), np.array(log, dtype=np.int64))
        return self._tables

    # vectorized ------------------------------------------------------------
    def mul_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise product of integer arrays of field elements."""
        if self.degree == 1:
            return a & b
        t = self.tables
        if t is None:
            f = np.frompyfunc(self.mul, 2, 1)
            return f(a, b).astype(np.int64)
        exp, log = t[2], t[3]
        r = exp[log[a] + log[b]]
        return np.where((a == 0) | (b == 0), 0, r)

    def scale_array(self, c: int, a: np.ndarray) -> np.ndarray:
        if not c:
            return np.zeros_like(a)
        if c == 1:
            return a.copy()
        return self.mul_arrays(np.full_like(a, c), a)


@functools.lru_cache(maxsize=None)
def field(degree: int) -> FieldCtx:
    """Canonical GF(2^degree), shared."""
    return FieldCtx(degree)


@functools.total_ordering
@dataclass(frozen=True)
class FieldElem:
    ctx: FieldCtx
    value: int

    def _other(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.ctx != self.ctx:
                raise ValueError(f"context mismatch: {self.ctx!r} vs {other.ctx!r}")
            return other.value
        if isinstance(other, int):
            return self.ctx.check(other)
        return NotImplemented

    def __add__(self, other):
        v = self._other(other)
        return NotImplemented if v is NotImplemented else FieldElem(self.ctx, self.value ^ v)

    __radd__ = __sub__ = __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        v = self._other(other)
        return NotImplemented if v is NotImplemented else FieldElem(self.ctx, self.ctx.mul(self.value, v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._other(other)
        return NotImplemented if v is NotImplemented else FieldElem(self.ctx, self.ctx.div(self.value, v))

    def __pow__(self, e: int):
        return FieldElem(self.ctx, self.ctx.pow(self.value, e))

    def inverse(self) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.inv(self.value))

    def order(self) -> int:
        return self.ctx.element_order(self.value)

    def __bool__(self):
        return bool(self.value)

    def __int__(self):
        return self.value

    def __lt__(self, other):
        return self.value < self._other(other)

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.ctx == other.ctx and self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx, self.value))

    def hex(self) -> str:
        return format(self.value, "x")

    def __repr__(self):
        return f"{self.ctx!r}({self.value:#x})"


def field_arith(a: FieldElem, b: FieldElem | int | None, op: str) -> FieldElem:
    """Dispatch helper: op in {add, mul, inv, pow} (b is the exponent for pow)."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a ** int(b)
    raise ValueError(f"unknown field operation {op!r}")


def element_order(a: FieldElem) -> int:
    return a.order()


def primitive_root_of_unity(order: int, ambient: FieldCtx) -> int:
    """Element of exact multiplicative ``order``: generator ** ((|L|-1) / order)."""
    q1 = ambient.order - 1
    if order < 1 or q1 % order:
        raise ValueError(f"{order} does not divide {q1}; no root of unity of that order in {ambient!r}")
    return ambient.pow(ambient.generator, q1 // order)


# ---------------------------------------------------------------------------
# Polynomials over a field
# ---------------------------------------------------------------------------

def poly_trim(a: Sequence[int]) -> list[int]:
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def poly_add(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    r = list(a)
    for i, c in enumerate(b):
        r[i] ^= c
    return poly_trim(r)


def poly_mul(ctx: FieldCtx, a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    r = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    r[i + j] ^= ctx.mul(x, y)
    return poly_trim(r)


def poly_scale(ctx: FieldCtx, c: int, a: Sequence[int]) -> list[int]:
    return poly_trim(ctx.mul(c, x) for x in a)


def poly_divmod(ctx: FieldCtx, a: Sequence[int], b: Sequence[int]) -> tuple[list[int], list[int]]:
    b = poly_trim(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    r = poly_trim(a)
    lead_inv = ctx.inv(b[-1])
    q = [0] * max(len(r) - len(b) + 1, 0)
    while len(r) >= len(b):
        c = ctx.mul(r[-1], lead_inv)
        shift = len(r) - len(b)
        q[shift] = c
        for i, y in enumerate(b):
            r[i + shift] ^= ctx.mul(c, y)
        r = poly_trim(r)
    return poly_trim(q), r


def poly_mod(ctx: FieldCtx, a: Sequence[int], b: Sequence[int]) -> list[int]:
    return poly_divmod(ctx, a, b)[1]


def poly_gcd(ctx: FieldCtx, a: Sequence[int], b: Sequence[int]) -> list[int]:
    a, b = poly_trim(a), poly_trim(b)
    while b:
        a, b = b, poly_mod(ctx, a, b)
    if a:
        a = poly_scale(ctx, ctx.inv(a[-1]), a)
    return a


def poly_inverse_mod(ctx: FieldCtx, a: Sequence[int], m: Sequence[int]) -> list[int]:
    """Inverse of a modulo m (extended Euclid); raises if not coprime."""
    r0, r1 = poly_trim(m), poly_mod(ctx, a, m)
    s0, s1 = [], [1]
    while r1:
        q, r = poly_divmod(ctx, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_add(s0, poly_mul(ctx, q, s1))
    if len(r0) != 1:
        raise ValueError("polynomial is not invertible modulo the given modulus")
    return poly_mod(ctx, poly_scale(ctx, ctx.inv(r0[0]), s0), m)


def poly_eval(ctx: FieldCtx, a: Sequence[int], x: int) -> int:
    r = 0
    for c in reversed(a):
        r = ctx.mul(r, x) ^ c
    return r


def poly_str(a: Sequence[int], var: str = "x") -> str:
    if not poly_trim(a):
        return "0"
    terms = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if not c:
            continue
        mono = "" if i == 0 else var if i == 1 else f"{var}^{i}"
        if c == 1:
            terms.append(mono or "1")
        else:
            terms.append(f"{c:#x}" + ("*" + mono if mono else ""))
    return " + ".join(terms)


def poly_from_binpoly(f: int) -> list[int]:
    return [(f >> i) & 1 for i in range(f.bit_length())]


def _trace_poly_mod(ctx: FieldCtx, beta: int, f: list[int]) -> list[int]:
    # Tr(beta x) = sum_{i<k} (beta x)^(2^i), reduced mod f
    t = poly_mod(ctx, [0, beta], f)
    acc = list(t)
    for _ in range(ctx.degree - 1):
        t = poly_mod(ctx, poly_mul(ctx, t, t), f)
        acc = poly_add(acc, t)
    return acc


def _split_roots(ctx: FieldCtx, f: list[int]) -> list[int]:
    if len(f) == 1:
        return []
    if len(f) == 2:
        return [ctx.div(f[0], f[1])]
    beta = 1
    for _ in range(8 * ctx.degree + 8):
        h = poly_gcd(ctx, f, _trace_poly_mod(ctx, beta, f))
        if 1 < len(h) < len(f):
            return _split_roots(ctx, h) + _split_roots(ctx, poly_divmod(ctx, f, h)[0])
        beta = ctx.mul(beta, ctx.generator) if ctx.order > 2 else beta
    raise AssertionError("trace splitting failed")  # pragma: no cover


def roots_in_field(ctx: FieldCtx, f: Sequence[int]) -> list[int]:
    """All roots in ``ctx`` of a polynomial with coefficients in ``ctx``, sorted."""
    f = poly_trim(f)
    if not f:
        raise ValueError("the zero polynomial has every element as a root")
    # restrict to the product of distinct linear factors: gcd(f, x^|L| - x)
    xq = [0, 1]
    for _ in range(ctx.degree):
        xq = poly_mod(ctx, poly_mul(ctx, xq, xq), f)
    g = poly_gcd(ctx, f, poly_add(xq, [0, 1]))
    return sorted(set(_split_roots(ctx, g)))


# ---------------------------------------------------------------------------
# GF(2)-linear helpers on bit vectors
# ---------------------------------------------------------------------------

class BitSpan:
    """Row-reduced span of GF(2) bit vectors, remembering how each was built.

    ``express(v)`` returns a bitmask over the inserted vectors whose XOR is v.
    """

    def __init__(self, vectors: Iterable[int] = ()):
        self._rows: dict[int, tuple[int, int]] = {}  # pivot bit -> (vector, combo)
        self.count = 0
        self.rank = 0
        for v in vectors:
            self.add(v)

    def _reduce(self, v: int, combo: int) -> tuple[int, int]:
        while v:
            top = v.bit_length() - 1
            row = self._rows.get(top)
            if row is None:
                break
            v ^= row[0]
            combo ^= row[1]
        return v, combo

    def add(self, v: int) -> bool:
        """Insert a vector; return True if it increased the rank."""
        idx = self.count
        self.count += 1
        v, combo = self._reduce(v, 1 << idx)
        if not v:
            return False
        self._rows[v.bit_length() - 1] = (v, combo)
        self.rank += 1
        return True

    def express(self, v: int) -> int | None:
        r, combo = self._reduce(v, 0)
        return None if r else combo


class Embedding:
    """Embedding of the canonical field ``sub`` into ``ambient`` (as a subfield).

    The generator of ``sub`` maps to the smallest-encoding root of its modulus
    in ``ambient``.
    """

    def __init__(self, sub: FieldCtx, ambient: FieldCtx):
        if ambient.degree % sub.degree:
            raise ValueError(f"{sub!r} does not embed in {ambient!r}")
        self.sub = sub
        self.ambient = ambient
        roots = roots_in_field(ambient, poly_from_binpoly(sub.modulus))
        self.root = roots[0]
        basis = [1]
        for _ in range(sub.degree - 1):
            basis.append(ambient.mul(basis[-1], self.root))
        self.basis = basis
        self._span = BitSpan(basis)
        assert self._span.rank == sub.degree

    def embed(self, v: int) -> int:
        r = 0
        i = 0
        while v:
            if v & 1:
                r ^= self.basis[i]
            v >>= 1
            i += 1
        return r

    def contains(self, y: int) -> bool:
        return self.ambient.frobenius(y, self.sub.degree) == y

    def section(self, y: int) -> int:
        """Inverse of :meth:`embed` on its image."""
        combo = self._span.express(y)
        if combo is None:
            raise ValueError(f"{y:#x} is not in the image of {self.sub!r}")
        return combo

    def embed_poly(self, f: Sequence[int]) -> list[int]:
        return [self.embed(c) for c in f]


@functools.lru_cache(maxsize=None)
def embedding(sub_degree: int, ambient_degree: int) -> Embedding:
    return Embedding(field(sub_degree), field(ambient_degree))


def min_poly_over_subfield(a: int, emb: Embedding) -> list[int]:
    """Minimal polynomial over ``emb.sub`` of an element ``a`` of ``emb.ambient``.

    Product of (x - c) over the orbit of a under c -> c^|sub|; coefficients
    are returned in the subfield's own encoding.
    """
    L = emb.ambient
    orbit = [a]
    c = L.frobenius(a, emb.sub.degree)
    while c != a:
        orbit.append(c)
        c = L.frobenius(c, emb.sub.degree)
    f = [1]
    for c in orbit:
        f = poly_mul(L, f, [c, 1])
    return [emb.section(x) for x in f]
