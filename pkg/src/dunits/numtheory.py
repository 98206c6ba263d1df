"""Order towers of 2^n modulo p^r, cyclotomic cosets and the closed-form
orders of the unit group and the unitary subgroup of GF(2^n)D_{2p^m}.

Everything here is exact integer arithmetic.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np
from sympy import factorint, isprime


def mult_order(base: int, modulus: int) -> int:
    """Least e >= 1 with base**e == 1 (mod modulus).

    Starts from Euler's phi(modulus) and strips prime factors while the
    reduced exponent still annihilates ``base``.
    """
    if modulus < 2:
        raise ValueError(f"modulus must be at least 2, got {modulus}")
    if math.gcd(base, modulus) != 1:
        raise ValueError(f"{base} and {modulus} are not coprime")
    phi = 1
    for ell, k in factorint(modulus).items():
        phi *= (ell - 1) * ell ** (k - 1)
    e = phi
    for ell in factorint(phi):
        while e % ell == 0 and pow(base, e // ell, modulus) == 1:
            e //= ell
    return e


def euler_phi_prime_power(p: int, r: int) -> int:
    return (p - 1) * p ** (r - 1)


@dataclass(frozen=True)
class OrderTower:
    """Orders o_r of 2^n mod p^r for r = 1..m and everything derived from them.

    Lists are indexed by level ``r - 1``.  ``q`` holds the component field
    sizes 2^(n t_r), ``kp`` the number of matrix components per level.
    """

    p: int
    m: int
    n: int
    d: int
    jump: int
    o: tuple[int, ...]
    k: tuple[int, ...]
    t: tuple[int, ...]
    q: tuple[int, ...]
    kp: tuple[int, ...]

    @property
    def d_even(self) -> bool:
        return self.d % 2 == 0

    @property
    def group_order(self) -> int:
        return 2 * self.p ** self.m

    @property
    def levels(self) -> range:
        return range(1, self.m + 1)

    def to_json(self) -> dict:
        obj = asdict(self)
        for key in ("o", "k", "t", "q", "kp"):
            obj[key] = list(obj[key])
        obj["d_even"] = self.d_even
        return obj

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, obj: dict) -> "OrderTower":
        return build_tower(int(obj["p"]), int(obj["m"]), int(obj["n"]))


def check_params(p: int, m: int, n: int) -> None:
    if not (isinstance(p, int) and p > 2 and isprime(p)):
        raise ValueError(f"p must be an odd prime, got {p}")
    if m < 1 or n < 1:
        raise ValueError(f"m and n must be positive, got m={m}, n={n}")


def tower_orders_by_recurrence(p: int, m: int, n: int) -> tuple[list[int], int]:
    """o_1..o_m via the stabilize-then-multiply-by-p pattern, and the jump index.

    Only one congruence test per level is made before the jump; afterwards
    the orders are p^(r - i) d without further testing.
    """
    base = pow(2, n)
    d = mult_order(base, p)
    orders = [d]
    jump = m
    for r in range(1, m):
        if jump < m:
            orders.append(orders[-1] * p)
        elif pow(base, orders[-1], p ** (r + 1)) == 1:
            orders.append(orders[-1])
        else:
            jump = r
            orders.append(orders[-1] * p)
    return orders, jump


def build_tower(p: int, m: int, n: int) -> OrderTower:
    check_params(p, m, n)
    base = pow(2, n)
    direct = [mult_order(base, p ** r) for r in range(1, m + 1)]
    orders, jump = tower_orders_by_recurrence(p, m, n)
    if orders != direct:
        raise AssertionError(f"order tower mismatch for p={p}, n={n}: {orders} vs {direct}")
    d = orders[0]
    for r in range(1, m):
        step = orders[r] // orders[r - 1]
        assert orders[r] % orders[r - 1] == 0 and step in (1, p)
        if r >= jump:
            assert orders[r] == p ** (r + 1 - jump) * d
    ks = []
    for r, o in enumerate(orders, start=1):
        phi = euler_phi_prime_power(p, r)
        assert phi % o == 0
        ks.append(phi // o)
    even = d % 2 == 0
    if even:
        ts = [o // 2 for o in orders]
        kps = list(ks)
    else:
        if any(k % 2 for k in ks):
            raise AssertionError(f"odd factor count with odd d: {ks}")
        ts = list(orders)
        kps = [k // 2 for k in ks]
    qs = [2 ** (n * t) for t in ts]
    return OrderTower(p, m, n, d, jump, tuple(orders), tuple(ks), tuple(ts), tuple(qs), tuple(kps))


# ---------------------------------------------------------------------------
# cyclotomic cosets
# ---------------------------------------------------------------------------

def coset_of(j: int, q: int, modulus: int) -> np.ndarray:
    """Orbit of j under multiplication by q mod modulus, as a sorted array."""
    if math.gcd(q, modulus) != 1:
        raise ValueError("multiplier must be a unit")
    q %= modulus
    block = 1024
    pw = np.empty(block, dtype=np.int64)
    pw[0] = j % modulus
    for i in range(1, block):
        pw[i] = pw[i - 1] * q % modulus
    first = int(pw[0])
    hits = np.nonzero(pw[1:] == first)[0]
    if hits.size:
        return np.unique(pw[: hits[0] + 1])
    step = pow(q, block, modulus)
    chunks = [pw]
    cur = pw
    while True:
        cur = cur * step % modulus
        hits = np.nonzero(cur == first)[0]
        if hits.size:
            chunks.append(cur[: hits[0]])
            return np.unique(np.concatenate(chunks))
        chunks.append(cur)


def cyclotomic_cosets(q: int, modulus: int) -> list[list[int]]:
    """Cosets of the units mod ``modulus`` under multiplication by q, each
    sorted, listed by smallest element."""
    q %= modulus
    seen = set()
    out = []
    for j in range(1, modulus):
        if j in seen or math.gcd(j, modulus) != 1:
            continue
        c = []
        x = j
        while x not in seen:
            seen.add(x)
            c.append(x)
            x = x * q % modulus
        out.append(sorted(c))
    return out


def pairs_with_inverse(tower: OrderTower) -> bool:
    """Whether each root of unity shares its irreducible factor with its inverse."""
    return tower.d_even


def inverse_in_coset(p: int, r: int, n: int, j: int = 1) -> bool:
    """Direct check: is -j in the coset of j under 2^n mod p^r?"""
    modulus = p ** r
    c = coset_of(j, pow(2, n, modulus), modulus)
    target = (-j) % modulus
    i = np.searchsorted(c, target)
    return bool(i < c.size and c[i] == target)


# ---------------------------------------------------------------------------
# closed-form orders
# ---------------------------------------------------------------------------

def sl2_order(q: int) -> int:
    return q * (q * q - 1)


def gl2_order(q: int) -> int:
    return (q * q - 1) * (q * q - q)


def unit_group_order(tower: OrderTower) -> int:
    """2^n (2^n - 1) prod_r ((q_r^2 - 1)(q_r^2 - q_r))^{k'_r}."""
    f = 2 ** tower.n
    out = f * (f - 1)
    for q, kp in zip(tower.q, tower.kp):
        out *= gl2_order(q) ** kp
    return out


def sl2_product_order(tower: OrderTower) -> int:
    out = 1
    for q, kp in zip(tower.q, tower.kp):
        out *= sl2_order(q) ** kp
    return out


def unitary_group_order(tower: OrderTower) -> int:
    """2^n prod_r |SL_2(q_r)|^{k'_r}."""
    return 2 ** tower.n * sl2_product_order(tower)


def central_complement_order(tower: OrderTower) -> int:
    """prod_r (q_r - 1)^{k'_r}: order of the group generated by the per-component
    central units."""
    out = 1
    for q, kp in zip(tower.q, tower.kp):
        out *= (q - 1) ** kp
    return out
