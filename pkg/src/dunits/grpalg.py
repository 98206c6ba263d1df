"""The group algebra F D_{2N} over F = GF(2^n), N = p^m.

Group elements are indexed 0..2N-1: index i < N is a^i, index N + i is a^i b.
An element of the algebra is the dense tuple of its 2N coefficients (field
element ints), rotations first.  Multiplication follows b a^i = a^{-i} b.
"""

from __future__ import annotations

import functools
import json
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .ff import FieldCtx, FieldElem, field
from .numtheory import check_params


class ParseError(ValueError):
    def __init__(self, message: str, text: str, column: int, line: int = 1):
        self.line = line
        self.column = column
        self.text = text
        super().__init__(f"line {line}, column {column}: {message}")


class GroupAlgebra:
    """F D_{2p^m} for a fixed (p, m, n); holds the precomputed group tables."""

    def __init__(self, p: int, m: int, n: int):
        check_params(p, m, n)
        self.p, self.m, self.n = p, m, n
        self.N = p ** m
        self.size = 2 * self.N
        self.field: FieldCtx = field(n)
        N = self.N
        table = [[0] * self.size for _ in range(self.size)]
        for g in range(self.size):
            for h in range(self.size):
                table[g][h] = self._gmul(g, h)
        self.gmul = table
        self.ginv = [(-g) % N if g < N else g for g in range(self.size)]

    def _gmul(self, g: int, h: int) -> int:
        N = self.N
        if g < N:
            return (g + h) % N if h < N else N + (g + h - N) % N
        if h < N:
            return N + (g - N - h) % N
        return (g - h) % N

    def __eq__(self, other):
        return isinstance(other, GroupAlgebra) and (self.p, self.m, self.n) == (other.p, other.m, other.n)

    def __hash__(self):
        return hash((self.p, self.m, self.n))

    def __repr__(self):
        return f"GF(2^{self.n})D_{self.size}"

    # construction -----------------------------------------------------------
    def element(self, coeffs: Iterable[int]) -> "AlgebraElem":
        c = tuple(int(v) for v in coeffs)
        if len(c) != self.size:
            raise ValueError(f"expected {self.size} coefficients, got {len(c)}")
        for v in c:
            self.field.check(v)
        return AlgebraElem(self, c)

    def from_parts(self, rot: Sequence[int], ref: Sequence[int]) -> "AlgebraElem":
        if len(rot) != self.N or len(ref) != self.N:
            raise ValueError(f"rot and ref must each have length {self.N}")
        return self.element(list(rot) + list(ref))

    def zero(self) -> "AlgebraElem":
        return AlgebraElem(self, (0,) * self.size)

    def one(self) -> "AlgebraElem":
        return self.basis(0)

    def scalar(self, c: int) -> "AlgebraElem":
        return self.basis(0, c)

    def basis(self, g: int, coeff: int = 1) -> "AlgebraElem":
        c = [0] * self.size
        c[g] = self.field.check(coeff)
        return AlgebraElem(self, tuple(c))

    def group_index(self, i: int, reflect: bool = False) -> int:
        return (self.N if reflect else 0) + i % self.N

    def g(self, i: int, reflect: bool = False, coeff: int = 1) -> "AlgebraElem":
        """coeff * a^i (times b if ``reflect``)."""
        return self.basis(self.group_index(i, reflect), coeff)

    @property
    def a(self) -> "AlgebraElem":
        return self.g(1)

    @property
    def b(self) -> "AlgebraElem":
        return self.g(0, True)

    def ghat(self) -> "AlgebraElem":
        """Sum of all group elements."""
        return AlgebraElem(self, (1,) * self.size)

    def random(self, rng: np.random.Generator) -> "AlgebraElem":
        return AlgebraElem(self, tuple(int(v) for v in rng.integers(0, self.field.order, self.size)))

    def polynomial_in_trace(self, f: Sequence[int]) -> "AlgebraElem":
        """f(a + a^-1) for a polynomial f over F (coefficient list, low first)."""
        s = self.a + self.g(-1)
        out = self.zero()
        for c in reversed(list(f)):
            out = out * s + self.scalar(c)
        return out

    # bit encoding used by the exhaustive sweep --------------------------------
    @property
    def nbits(self) -> int:
        return self.size * self.n

    def from_index(self, idx: int) -> "AlgebraElem":
        n = self.n
        mask = (1 << n) - 1
        return AlgebraElem(self, tuple((idx >> (g * n)) & mask for g in range(self.size)))

    def to_index(self, x: "AlgebraElem") -> int:
        out = 0
        for g, c in enumerate(x.coeffs):
            out |= c << (g * self.n)
        return out

    # arithmetic on coefficient tuples ---------------------------------------
    def mul(self, x: "AlgebraElem", y: "AlgebraElem") -> "AlgebraElem":
        if x.alg != self or y.alg != self:
            raise ValueError("operands belong to different group algebras")
        F = self.field
        out = [0] * self.size
        ynz = [(h, c) for h, c in enumerate(y.coeffs) if c]
        table = self.gmul
        for g, a in enumerate(x.coeffs):
            if not a:
                continue
            row = table[g]
            if a == 1:
                for h, c in ynz:
                    out[row[h]] ^= c
            else:
                for h, c in ynz:
                    out[row[h]] ^= F.mul(a, c)
        return AlgebraElem(self, tuple(out))

    def mul_batch(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Row-wise products of two (B, 2N) coefficient arrays."""
        F = self.field
        out = np.zeros(np.broadcast_shapes(X.shape, Y.shape), dtype=np.int64)
        for g in range(self.size):
            xg = X[:, g]
            if not xg.any():
                continue
            row = self.gmul[g]
            for h in range(self.size):
                out[:, row[h]] ^= F.mul_arrays(xg, Y[:, h])
        return out

    def star_batch(self, X: np.ndarray) -> np.ndarray:
        return X[:, self.ginv]

    @functools.cached_property
    def _regular_index(self) -> np.ndarray:
        # column h of the left-regular matrix of x holds x*h; entry k is x_{k h^-1}
        s = self.size
        return np.array([[self.gmul[k][self.ginv[h]] for h in range(s)] for k in range(s)], dtype=np.int64)

    def regular_matrix(self, x: "AlgebraElem") -> np.ndarray:
        return np.asarray(x.coeffs, dtype=np.int64)[self._regular_index]

    # parsing / printing ------------------------------------------------------
    _TOKEN = re.compile(r"0[xX][0-9a-fA-F]+|[0-9]+|[ab^*+\-]")

    def parse(self, text: str) -> "AlgebraElem":
        """Parse expressions like ``1 + a^2*b + 0x3*a + 2 b``.

        Coefficients start with a digit and are read in hexadecimal (``0x``
        prefix allows the letters a-f).  Exponents are decimal and reduced
        mod p^m.
        """
        return _Parser(self, text).parse()

    def format(self, x: "AlgebraElem") -> str:
        terms = []
        for g, c in enumerate(x.coeffs):
            if not c:
                continue
            i = g % self.N
            if g < self.N:
                gen = "1" if i == 0 else "a" if i == 1 else f"a^{i}"
            else:
                gen = "b" if i == 0 else "a*b" if i == 1 else f"a^{i}*b"
            if c == 1:
                terms.append(gen)
            else:
                terms.append(f"{c:#x}" if gen == "1" else f"{c:#x}*{gen}")
        return " + ".join(terms) if terms else "0"

    def to_json(self, x: "AlgebraElem") -> dict:
        return {"rot": [format(v, "x") for v in x.rot], "ref": [format(v, "x") for v in x.ref]}

    def from_json(self, obj: dict | str) -> "AlgebraElem":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return self.from_parts([int(v, 16) for v in obj["rot"]], [int(v, 16) for v in obj["ref"]])


class _Parser:
    def __init__(self, alg: GroupAlgebra, text: str):
        self.alg = alg
        self.text = text
        self.tokens: list[tuple[str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            mt = GroupAlgebra._TOKEN.match(text, pos)
            if not mt:
                raise ParseError(f"unexpected character {text[pos]!r}", text, pos + 1)
            self.tokens.append((mt.group(), pos + 1))
            pos = mt.end()
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def col(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text) + 1

    def take(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def fail(self, msg: str):
        raise ParseError(msg, self.text, self.col())

    def parse(self) -> "AlgebraElem":
        if not self.tokens:
            self.fail("empty expression")
        out = [0] * self.alg.size
        while True:
            coeff, g = self.term()
            out[g] ^= coeff
            if self.peek() is None:
                break
            if self.peek() != "+":
                self.fail(f"expected '+', got {self.peek()!r}")
            self.take()
        return AlgebraElem(self.alg, tuple(out))

    def term(self) -> tuple[int, int]:
        tok = self.peek()
        coeff = None
        if tok is not None and tok[0].isdigit():
            c0 = self.col()
            self.take()
            coeff = int(tok, 16)
            if coeff >= self.alg.field.order:
                raise ParseError(f"coefficient {tok} is not in GF(2^{self.alg.n})", self.text, c0)
            if self.peek() == "*":
                self.take()
                if self.peek() not in ("a", "b") and not (self.peek() or "").isdigit():
                    self.fail("expected a group element after '*'")
            if self.peek() not in ("a", "b") and self.peek() != "1":
                return coeff, 0
        g = self.gen()
        return (1 if coeff is None else coeff), g

    def gen(self) -> int:
        tok = self.peek()
        N = self.alg.N
        if tok == "1":
            self.take()
            return 0
        if tok == "b":
            self.take()
            return N
        if tok != "a":
            self.fail(f"expected a term, got {tok!r}" if tok else "unexpected end of expression")
        self.take()
        e = 1
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() == "-":
                self.take()
                sign = -1
            tok = self.peek()
            if tok is None or not tok.isdigit():
                self.fail("expected an integer exponent")
            e = sign * int(self.take())
        reflect = False
        if self.peek() == "*" and self.i + 1 < len(self.tokens) and self.tokens[self.i + 1][0] == "b":
            self.take()
        if self.peek() == "b":
            self.take()
            reflect = True
        return (N if reflect else 0) + e % N


@dataclass(frozen=True, eq=False)
class AlgebraElem:
    alg: GroupAlgebra
    coeffs: tuple[int, ...]

    @property
    def rot(self) -> tuple[int, ...]:
        return self.coeffs[: self.alg.N]

    @property
    def ref(self) -> tuple[int, ...]:
        return self.coeffs[self.alg.N:]

    def coeff(self, g: int) -> FieldElem:
        return self.alg.field(self.coeffs[g])

    def __eq__(self, other):
        return isinstance(other, AlgebraElem) and self.alg == other.alg and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "AlgebraElem") -> "AlgebraElem":
        if other.alg != self.alg:
            raise ValueError("operands belong to different group algebras")
        return AlgebraElem(self.alg, tuple(u ^ v for u, v in zip(self.coeffs, other.coeffs)))

    __sub__ = __add__

    def __mul__(self, other) -> "AlgebraElem":
        if isinstance(other, AlgebraElem):
            return self.alg.mul(self, other)
        if isinstance(other, (int, FieldElem)):
            return self.scale(int(other))
        return NotImplemented

    def __rmul__(self, other) -> "AlgebraElem":
        if isinstance(other, (int, FieldElem)):
            return self.scale(int(other))
        return NotImplemented

    def scale(self, c: int) -> "AlgebraElem":
        F = self.alg.field
        return AlgebraElem(self.alg, tuple(F.mul(c, v) for v in self.coeffs))

    def __pow__(self, e: int) -> "AlgebraElem":
        if e < 0:
            inv = self.inverse()
            if inv is None:
                raise ZeroDivisionError("element is not a unit")
            return inv ** (-e)
        out = self.alg.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def star(self) -> "AlgebraElem":
        """Canonical involution: sum x_g g^-1."""
        ginv = self.alg.ginv
        c = self.coeffs
        return AlgebraElem(self.alg, tuple(c[ginv[g]] for g in range(self.alg.size)))

    def augmentation(self) -> int:
        out = 0
        for v in self.coeffs:
            out ^= v
        return out

    def support_size(self) -> int:
        return sum(1 for v in self.coeffs if v)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    def inverse(self) -> "AlgebraElem | None":
        return try_invert(self)

    def is_unit(self) -> bool:
        return try_invert(self) is not None

    def is_unitary(self) -> bool:
        return is_unitary(self)

    def commutes_with(self, other: "AlgebraElem") -> bool:
        return self * other == other * self

    def __str__(self):
        return self.alg.format(self)

    def __repr__(self):
        return f"<{self.alg!r}: {self.alg.format(self)}>"


def mul(x: AlgebraElem, y: AlgebraElem) -> AlgebraElem:
    return x.alg.mul(x, y)


def star(x: AlgebraElem) -> AlgebraElem:
    return x.star()


def augmentation(x: AlgebraElem) -> FieldElem:
    return x.alg.field(x.augmentation())


def try_invert(x: AlgebraElem) -> AlgebraElem | None:
    """Two-sided inverse via the left-regular representation, or None for a non-unit."""
    alg = x.alg
    e = np.zeros(alg.size, dtype=np.int64)
    e[0] = 1
    y = linalg.solve(alg.field, alg.regular_matrix(x), e)
    if y is None:
        return None
    return AlgebraElem(alg, tuple(int(v) for v in y))


def is_unitary(x: AlgebraElem) -> bool:
    return (x * x.star()).is_one()


@functools.lru_cache(maxsize=None)
def group_algebra(p: int, m: int, n: int) -> GroupAlgebra:
    return GroupAlgebra(p, m, n)
