"""Exhaustive ground truth over every element of F D_{2p^m} for tiny parameters.

Elements are enumerated by their bit index (see GroupAlgebra.from_index).
Decomposition images are GF(2)-linear in those bits, so the images of a block
of consecutive indices come from a doubling table: each new basis bit XORs
one precomputed image row into the previous half.  The unit test on every
element is the block-determinant test; a regular sample is re-checked by
Gaussian elimination on the left-regular matrix.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .grpalg import AlgebraElem, GroupAlgebra, try_invert
from .numtheory import build_tower, unit_group_order, unitary_group_order
from .unitary import CapExceeded
from .wedderburn import Decomposition, decomposition

log = logging.getLogger(__name__)

MAX_SWEEP_BITS = 20
MAX_COMMUTATOR_GROUP = 10 ** 5
_LOW_BITS = 14


class GuardExceeded(ValueError):
    def __init__(self, guard: str, value: int, limit: int):
        self.guard = guard
        super().__init__(f"guard {guard!r} exceeded: {value} > {limit}")


def threads_from_env(default: int = 1) -> int:
    try:
        return max(1, int(os.environ.get("DUNITS_THREADS", default)))
    except ValueError:
        return default


@dataclass
class SweepResult:
    p: int
    m: int
    n: int
    total: int
    units: int
    unitary: int
    elapsed: float
    units_formula: int
    unitary_formula: int
    spot_checks: int
    spot_mismatches: int
    unit_mask: np.ndarray | None = field(default=None, repr=False)
    unitary_mask: np.ndarray | None = field(default=None, repr=False)

    @property
    def units_agree(self) -> bool:
        return self.units == self.units_formula

    @property
    def unitary_agree(self) -> bool:
        return self.unitary == self.unitary_formula

    @property
    def ok(self) -> bool:
        return self.units_agree and self.unitary_agree and self.spot_mismatches == 0

    def to_json(self) -> dict:
        return {
            "p": self.p, "m": self.m, "n": self.n,
            "total": str(self.total),
            "units": str(self.units),
            "unitary": str(self.unitary),
            "units_formula": str(self.units_formula),
            "unitary_formula": str(self.unitary_formula),
            "units_agree": self.units_agree,
            "unitary_agree": self.unitary_agree,
            "spot_checks": self.spot_checks,
            "spot_mismatches": self.spot_mismatches,
            "elapsed": round(self.elapsed, 3),
        }

    CSV_FIELDS = ("p", "m", "n", "total", "units", "unitary", "units_formula",
                  "unitary_formula", "units_agree", "unitary_agree", "elapsed")

    @classmethod
    def to_csv(cls, results: list["SweepResult"]) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cls.CSV_FIELDS, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in results:
            w.writerow(r.to_json())
        return buf.getvalue()


def _doubling_table(rows: np.ndarray) -> np.ndarray:
    """XOR of every subset of ``rows``; entry i uses the rows at set bits of i."""
    k, cols = rows.shape
    out = np.zeros((1 << k, cols), dtype=np.int64)
    for b in range(k):
        half = 1 << b
        out[half: 2 * half] = out[:half] ^ rows[b]
    return out


def _unit_mask(dec: Decomposition, imgs: np.ndarray) -> np.ndarray:
    mask = imgs[:, 0] != 0
    for ci, comp in enumerate(dec.comps):
        L = comp.ambient
        a, b, c, d = (imgs[:, 1 + 4 * ci + e] for e in range(4))
        det = L.mul_arrays(a, d) ^ L.mul_arrays(b, c)
        mask &= det != 0
    return mask


def decode_indices(alg: GroupAlgebra, idx: np.ndarray) -> np.ndarray:
    """(B,) element indices -> (B, 2N) coefficient array."""
    n = alg.n
    mask = (1 << n) - 1
    shifts = np.arange(alg.size, dtype=np.int64) * n
    return (idx[:, None] >> shifts[None, :]) & mask


def unitary_mask(alg: GroupAlgebra, X: np.ndarray) -> np.ndarray:
    """Rows x of X with x * x^* = 1, by direct multiplication."""
    P = alg.mul_batch(X, alg.star_batch(X))
    return (P[:, 0] == 1) & ~P[:, 1:].any(axis=1)


def sweep(p: int, m: int, n: int, threads: int | None = None, check_every: int = 1024,
          keep_masks: bool = False) -> SweepResult:
    """Count units and unitary units of GF(2^n) D_{2p^m} by exhaustion."""
    dec = decomposition(p, m, n)
    alg = dec.alg
    nbits = alg.nbits
    if nbits > MAX_SWEEP_BITS:
        raise GuardExceeded("2n*p^m <= 20", nbits, MAX_SWEEP_BITS)
    threads = threads or threads_from_env()
    t0 = time.perf_counter()
    basis = dec.basis_images
    low = min(nbits, _LOW_BITS)
    low_table = _doubling_table(basis[:low])
    high_table = _doubling_table(basis[low:])
    nchunks = high_table.shape[0]
    lo_idx = np.arange(1 << low, dtype=np.int64)

    def work(hi_range):
        units = unitary = checks = bad = 0
        umasks, vmasks = [], []
        for hi in hi_range:
            imgs = low_table ^ high_table[hi]
            mask = _unit_mask(dec, imgs)
            idx = (hi << low) | lo_idx
            unit_idx = idx[mask]
            units += int(unit_idx.size)
            vmask = unitary_mask(alg, decode_indices(alg, unit_idx))
            unitary += int(vmask.sum())
            for j in np.nonzero(idx % check_every == 0)[0]:
                checks += 1
                x = alg.from_index(int(idx[j]))
                if (try_invert(x) is not None) != bool(mask[j]):
                    bad += 1
            if keep_masks:
                full_v = np.zeros_like(mask)
                full_v[np.nonzero(mask)[0][vmask]] = True
                umasks.append(mask)
                vmasks.append(full_v)
        return units, unitary, checks, bad, umasks, vmasks

    parts = [range(s, nchunks, threads) for s in range(threads)] if threads > 1 else [range(nchunks)]
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(work, parts))
    else:
        results = [work(parts[0])]
    units = sum(r[0] for r in results)
    unitary = sum(r[1] for r in results)
    checks = sum(r[2] for r in results)
    bad = sum(r[3] for r in results)
    umask = vmask = None
    if keep_masks:
        umask = np.zeros(1 << nbits, dtype=bool)
        vmask = np.zeros(1 << nbits, dtype=bool)
        for part, r in zip(parts, results):
            for hi, um, vm in zip(part, r[4], r[5]):
                umask[hi << low: (hi + 1) << low] = um
                vmask[hi << low: (hi + 1) << low] = vm
    tower = build_tower(p, m, n)
    res = SweepResult(
        p=p, m=m, n=n, total=1 << nbits, units=units, unitary=unitary,
        elapsed=time.perf_counter() - t0,
        units_formula=unit_group_order(tower), unitary_formula=unitary_group_order(tower),
        spot_checks=checks, spot_mismatches=bad, unit_mask=umask, unitary_mask=vmask,
    )
    log.info("sweep %s: %d units, %d unitary of %d in %.2fs", (p, m, n), units, unitary, res.total, res.elapsed)
    return res


def enumerate_units(p: int, m: int, n: int, unitary_only: bool = False) -> list[AlgebraElem]:
    res = sweep(p, m, n, keep_masks=True)
    alg = decomposition(p, m, n).alg
    mask = res.unitary_mask if unitary_only else res.unit_mask
    return [alg.from_index(int(i)) for i in np.nonzero(mask)[0]]


# ---------------------------------------------------------------------------
# commutator subgroups
# ---------------------------------------------------------------------------

def _closure(gens: list[AlgebraElem], one: AlgebraElem, cap: int) -> set[AlgebraElem]:
    seen = {one}
    frontier = [one]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    if len(seen) > cap:
                        raise CapExceeded(cap)
                    nxt.append(y)
        frontier = nxt
    return seen


def generating_set(elements: list[AlgebraElem]) -> list[AlgebraElem]:
    """Greedy generating set of the group formed by ``elements``."""
    one = elements[0].alg.one()
    gens: list[AlgebraElem] = []
    H = {one}
    for u in elements:
        if u not in H:
            gens.append(u)
            try:
                H = _closure(gens, one, len(elements))
            except CapExceeded:
                raise ValueError("elements do not form a group") from None
    if len(H) != len(set(elements)):
        raise ValueError("elements do not form a group")
    return gens


def commutator_subgroup(elements: list[AlgebraElem]) -> set[AlgebraElem]:
    """Derived subgroup: normal closure of the commutators of a generating set."""
    if len(elements) > MAX_COMMUTATOR_GROUP:
        raise GuardExceeded("unit group order <= 1e5", len(elements), MAX_COMMUTATOR_GROUP)
    alg = elements[0].alg
    one = alg.one()
    cap = len(elements)
    gens = generating_set(elements)
    inv = {g: try_invert(g) for g in gens}
    cgens = []
    for g in gens:
        for h in gens:
            c = inv[g] * inv[h] * g * h
            if not c.is_one() and c not in cgens:
                cgens.append(c)
    if not cgens:
        return {one}
    N = _closure(cgens, one, cap)
    changed = True
    while changed:
        changed = False
        for c in list(cgens):
            for g in gens:
                conj = inv[g] * c * g
                if conj not in N:
                    cgens.append(conj)
                    N = _closure(cgens, one, cap)
                    changed = True
    return N


def commutator_closure(elements: list[AlgebraElem]) -> int:
    return len(commutator_subgroup(elements))


@dataclass
class CommutatorCheck:
    p: int
    m: int
    n: int
    units: int
    unitary: int
    derived_units: int
    derived_unitary: int
    same_subgroup: bool

    @property
    def ok(self) -> bool:
        return self.same_subgroup and self.derived_units == self.derived_unitary

    def to_json(self) -> dict:
        return {k: (str(v) if isinstance(v, int) and not isinstance(v, bool) else v)
                for k, v in self.__dict__.items()}


def derived_subgroup_check(p: int, m: int, n: int) -> CommutatorCheck:
    U = enumerate_units(p, m, n)
    V = enumerate_units(p, m, n, unitary_only=True)
    dU = commutator_subgroup(U)
    dV = commutator_subgroup(V)
    return CommutatorCheck(p, m, n, len(U), len(V), len(dU), len(dV), dU == dV)


def dumps(obj) -> str:
    return json.dumps(obj.to_json(), sort_keys=True)
