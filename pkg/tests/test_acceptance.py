"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the summary lines
interleaved with pytest's own output (they are printed with capture disabled,
so ``-s`` is optional).
"""

import time

import numpy as np
import pytest
from sympy import primerange

from dunits.grpalg import try_invert
from dunits.numtheory import (
    build_tower,
    coset_of,
    mult_order,
    pairs_with_inverse,
    tower_orders_by_recurrence,
)
from dunits.oracle import derived_subgroup_check, sweep
from dunits.unitary import build_B, closure_order, product_identities, structure_report
from dunits.wedderburn import (
    IDENTITY,
    decomposition,
    diag_conjugacy_check,
    exact_order,
    m2_det,
    m2_inv,
    m2_mul,
    m2_pow,
    rep_T,
)

FIVE_SETS = [(3, 1, 1), (5, 1, 1), (7, 1, 1), (3, 1, 2), (3, 2, 1)]
SWEEP_BUDGET = {(3, 1, 1): 1.0, (5, 1, 1): 1.0, (7, 1, 1): 1.0, (3, 1, 2): 1.0, (3, 2, 1): 120.0}


@pytest.fixture
def verdict(capsys):
    def emit(number: int, title: str, ok: bool, detail: str = "") -> None:
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'}  criterion {number:2d}: {title}" + (f"  [{detail}]" if detail else ""))
        assert ok, f"criterion {number} failed: {detail}"

    return emit


@pytest.fixture(scope="module")
def sweeps():
    return {params: sweep(*params, keep_masks=True) for params in FIVE_SETS}


def test_criterion_01_unit_counts(verdict, sweeps):
    problems = []
    for params, res in sweeps.items():
        if res.units != res.units_formula:
            problems.append(f"{params}: sweep {res.units} vs formula {res.units_formula}")
        if res.elapsed >= SWEEP_BUDGET[params]:
            problems.append(f"{params}: {res.elapsed:.2f}s over budget")
        if res.spot_mismatches:
            problems.append(f"{params}: {res.spot_mismatches} spot-check mismatches")
    detail = ", ".join(f"{p}={r.units} ({r.elapsed:.2f}s)" for p, r in sweeps.items())
    verdict(1, "sweep unit count equals the closed-form order", not problems, "; ".join(problems) or detail)


def test_criterion_02_unitary_counts(verdict, sweeps):
    problems = [f"{p}: sweep {r.unitary} vs formula {r.unitary_formula}"
                for p, r in sweeps.items() if r.unitary != r.unitary_formula]
    detail = ", ".join(f"{p}={r.unitary}" for p, r in sweeps.items())
    verdict(2, "sweep unitary count equals 2^n prod |SL_2(q_r)|^k'_r", not problems, "; ".join(problems) or detail)


def test_criterion_03_kernel_and_dimension(verdict):
    problems = []
    for params in FIVE_SETS:
        dec = decomposition(*params)
        N = dec.alg.N
        if dec.target_dimension() != 2 * N - 1:
            problems.append(f"{params}: target dimension {dec.target_dimension()}")
        rank, kdim = dec.linear_rank()
        if (rank, kdim) != (2 * N - 1, 1) or not dec.kernel_is_ghat_span():
            problems.append(f"{params}: rank {rank}, kernel dim {kdim}")
    verdict(3, "1 + 4 sum t_r k'_r = 2p^m - 1 and kernel is exactly F*Ghat", not problems, "; ".join(problems))


def test_criterion_04_product_identities(verdict):
    problems = []
    for p, m in [(3, 1), (5, 1), (7, 1), (3, 2)]:
        result = product_identities(decomposition(p, m, 1).alg)
        problems += [f"p^m={p ** m}: {name}" for name, ok in result.items() if not ok]
    verdict(4, "product identities for a, ab(1+Ghat), b(1+Ghat) at p^m in {3,5,7,9}", not problems, "; ".join(problems))


def test_criterion_05_closure(verdict):
    expected = {(3, 1, 1): 6, (5, 1, 1): 60, (7, 1, 1): 504, (3, 1, 2): 60, (3, 2, 1): 3024}
    problems, parts = [], []
    for params, want in expected.items():
        dec = decomposition(*params)
        t0 = time.perf_counter()
        got = closure_order(dec, build_B(dec.alg))
        dt = time.perf_counter() - t0
        parts.append(f"{params}={got} ({dt:.2f}s)")
        if got != want or got != structure_report(dec.tower).b_order:
            problems.append(f"{params}: closure {got}, expected {want}")
        if dt >= 30:
            problems.append(f"{params}: {dt:.1f}s")
    verdict(5, "|<B>| equals prod |SL_2(q_r)|^k'_r", not problems, "; ".join(problems) or ", ".join(parts))


def test_criterion_06_central_units(verdict):
    problems = []
    for params in FIVE_SETS:
        dec = decomposition(*params)
        alg = dec.alg
        cu = dec.central_units()
        units = [cu["x"]] + cu["x_rs"]
        if not all(u.commutes_with(alg.a) and u.commutes_with(alg.b) for u in units):
            problems.append(f"{params}: not central")
        if not exact_order(cu["x"], 2 ** alg.n - 1):
            problems.append(f"{params}: order of x")
        for u, comp in zip(cu["x_rs"], dec.comps):
            if not exact_order(u, 2 ** (alg.n * dec.tower.t[comp.level - 1]) - 1):
                problems.append(f"{params}: order of x_{comp.label}")
        rep = structure_report(dec.tower)
        if rep.unitary * rep.w * (2 ** alg.n - 1) != rep.units:
            problems.append(f"{params}: |U_*||W|(2^n-1) != |U|")
    verdict(6, "central units have the stated orders; |U| = |U_*| |W| (2^n - 1)", not problems, "; ".join(problems))


def test_criterion_07_tower(verdict):
    problems = []
    cases = 0
    for p in primerange(3, 50):
        for n in range(1, 9):
            t = build_tower(p, 4, n)
            recurrence, _jump = tower_orders_by_recurrence(p, 4, n)
            for r in range(1, 5):
                modulus = p ** r
                orbit = coset_of(1, pow(2, n, modulus), modulus)
                direct = mult_order(2 ** n, modulus)
                cases += 1
                if not (recurrence[r - 1] == direct == orbit.size == t.o[r - 1]):
                    problems.append(f"p={p} n={n} r={r}: orders differ")
                i = np.searchsorted(orbit, modulus - 1)
                member = bool(i < orbit.size and orbit[i] == modulus - 1)
                if member != pairs_with_inverse(t):
                    problems.append(f"p={p} n={n} r={r}: parity predicate disagrees with coset")
    verdict(7, "order-tower recurrence and parity predicate match direct computation",
            not problems, "; ".join(problems[:5]) or f"{cases} (p, n, r) cases")


def test_criterion_08_representation(verdict):
    problems = []
    for params in FIVE_SETS:
        dec = decomposition(*params)
        N = dec.alg.N
        for comp, images in zip(dec.comps, dec.group_images):
            L = comp.ambient
            Ta, Tb = rep_T(comp, 1), rep_T(comp, 0, True)
            ok = (m2_pow(L, Ta, N) == IDENTITY
                  and m2_mul(L, Tb, Tb) == IDENTITY
                  and m2_mul(L, m2_mul(L, Tb, Ta), Tb) == m2_inv(L, Ta)
                  and all(m2_det(L, M) == 1 for M in images)
                  and diag_conjugacy_check(comp))
            if not ok:
                problems.append(f"{params} component {comp.label}")
    verdict(8, "T(a)^(p^m) = I, T(b)^2 = I, T(b)T(a)T(b) = T(a)^-1, det 1, diagonalization",
            not problems, "; ".join(problems))


def test_criterion_09_commutators(verdict):
    problems, parts = [], []
    for p in (3, 5):
        t0 = time.perf_counter()
        chk = derived_subgroup_check(p, 1, 1)
        dt = time.perf_counter() - t0
        parts.append(f"D{2 * p}: |U'|={chk.derived_units}, |U_*'|={chk.derived_unitary} ({dt:.2f}s)")
        if not chk.ok:
            problems.append(f"p={p}: derived subgroups differ")
        if dt >= 10:
            problems.append(f"p={p}: {dt:.1f}s")
    verdict(9, "commutator subgroups of U and U_* coincide", not problems, "; ".join(problems) or ", ".join(parts))


def test_criterion_10_three_way_unit_test(verdict, sweeps):
    problems = []
    checked = 0
    for params in FIVE_SETS:
        dec = decomposition(*params)
        alg = dec.alg
        mask = sweeps[params].unit_mask
        if params == (3, 1, 1):
            elements = [alg.from_index(i) for i in range(1 << alg.nbits)]
        else:
            rng = np.random.default_rng(20240 + sum(params))
            elements = [alg.random(rng) for _ in range(10 ** 4)]
        bad = 0
        for x in elements:
            a = try_invert(x) is not None
            b = dec.image_is_unit(dec.decompose(x))
            c = bool(mask[alg.to_index(x)])
            bad += not (a == b == c)
        checked += len(elements)
        if bad:
            problems.append(f"{params}: {bad} disagreements")
    verdict(10, "regular representation, block determinants and sweep membership agree",
            not problems, "; ".join(problems) or f"{checked} elements")
