"""Command-line front end: ``dunits <command> --p P --m M --n N [options]``."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np
from sympy import isprime

from .grpalg import ParseError
from .numtheory import build_tower, unit_group_order, unitary_group_order
from .oracle import GuardExceeded, SweepResult, sweep, threads_from_env
from .unitary import (
    DEFAULT_CAP,
    CapExceeded,
    build_B,
    closure_order,
    product_identities,
    structure_report,
)
from .wedderburn import decomposition, diag_conjugacy_check, exact_order, rep_T, m2_det, m2_mul, m2_pow

COMMANDS = ("order", "tower", "decompose", "generators", "closure", "verify", "sweep", "report")


class UsageError(Exception):
    pass


def _emit(args, obj, text: str) -> None:
    if args.json:
        print(json.dumps(obj, sort_keys=True))
    else:
        print(text)


def _hexmat(entries) -> str:
    a, b, c, d = entries
    return f"[[{a},{b}],[{c},{d}]]"


def cmd_order(args) -> int:
    t = build_tower(args.p, args.m, args.n)
    u, v = unit_group_order(t), unitary_group_order(t)
    _emit(args, {"units": str(u), "unitary": str(v)}, f"|U| = {u}, |U_*| = {v}")
    return 0


def cmd_tower(args) -> int:
    t = build_tower(args.p, args.m, args.n)
    lines = [f"p={t.p} m={t.m} n={t.n} d={t.d} ({'even' if t.d_even else 'odd'}) jump={t.jump}"]
    for r in t.levels:
        i = r - 1
        lines.append(f"  r={r}: o={t.o[i]} k={t.k[i]} t={t.t[i]} q={t.q[i]} k'={t.kp[i]}")
    _emit(args, t.to_json(), "\n".join(lines))
    return 0


def cmd_decompose(args) -> int:
    if args.element is None:
        raise UsageError("decompose needs --element")
    dec = decomposition(args.p, args.m, args.n)
    x = dec.alg.parse(args.element)
    img = dec.decompose(x)
    obj = dec.image_to_json(img)
    lines = [f"element: {x}", f"scalar: {obj['scalar']}"]
    for b in obj["blocks"]:
        lines.append(f"block ({b['r']},{b['s']}): {_hexmat(b['entries'])}")
    lines.append(f"unit: {'yes' if dec.image_is_unit(img) else 'no'}")
    _emit(args, obj, "\n".join(lines))
    return 0


def cmd_generators(args) -> int:
    dec = decomposition(args.p, args.m, args.n)
    B = build_B(dec.alg)
    lines = [f"{len(B)} generators"]
    for (i, j, k), x in zip(B.triples, B.elements):
        lines.append(f"  ({i},{j},{k}): {x}")
    _emit(args, B.to_json(), "\n".join(lines))
    return 0


def cmd_closure(args) -> int:
    dec = decomposition(args.p, args.m, args.n)
    B = build_B(dec.alg)
    try:
        order = closure_order(dec, B, args.cap)
    except CapExceeded as e:
        _emit(args, {"cap_exceeded": args.cap}, str(e))
        return 1
    expected = structure_report(dec.tower).b_order
    obj = {"order": str(order), "expected": str(expected), "agree": order == expected}
    _emit(args, obj, f"|<B>| = {order} (expected {expected}){'' if order == expected else '  MISMATCH'}")
    return 0 if order == expected else 1


def verify_checks(p: int, m: int, n: int, seed: int = 0, samples: int = 200) -> list[tuple[str, bool]]:
    dec = decomposition(p, m, n)
    alg = dec.alg
    N = alg.N
    checks: list[tuple[str, bool]] = []
    for name, ok in product_identities(alg).items():
        checks.append((f"product identity {name}", ok))
    for comp in dec.comps:
        L = comp.ambient
        Ta, Tb = rep_T(comp, 1), rep_T(comp, 0, True)
        checks.append((f"T{comp.label}(a)^(p^m) = I", m2_pow(L, Ta, N) == (1, 0, 0, 1)))
        checks.append((f"T{comp.label}(b)^2 = I", m2_mul(L, Tb, Tb) == (1, 0, 0, 1)))
        checks.append((f"T{comp.label}(b)T(a)T(b) = T(a)^-1",
                       m2_mul(L, m2_mul(L, Tb, Ta), Tb) == m2_pow(L, Ta, N - 1)))
        checks.append((f"det T{comp.label}(g) = 1",
                       all(m2_det(L, M) == 1 for M in dec.group_images[dec.comps.index(comp)])))
        checks.append((f"diagonalization M S M^-1 = T at {comp.label}", diag_conjugacy_check(comp)))
    rank, kdim = dec.linear_rank()
    checks.append(("dimension count 1 + 4 sum t_r k'_r = 2p^m - 1", dec.target_dimension() == 2 * N - 1))
    checks.append(("rank 2p^m - 1 with kernel F*Ghat", rank == 2 * N - 1 and dec.kernel_is_ghat_span()))
    rng = np.random.default_rng(seed)
    mult = True
    anti = True
    for _ in range(samples):
        x, y = alg.random(rng), alg.random(rng)
        xy = x * y
        mult &= dec.decompose(xy) == dec.image_mul(dec.decompose(x), dec.decompose(y))
        anti &= xy.star() == y.star() * x.star()
    checks.append((f"decomposition multiplicative ({samples} seeded pairs)", mult))
    checks.append((f"star anti-automorphism ({samples} seeded pairs)", anti))
    cu = dec.central_units()
    xi, xr = dec.expected_central_images()
    a, b = alg.a, alg.b
    units = [cu["x"]] + cu["x_rs"]
    checks.append(("central units are central", all(u.commutes_with(a) and u.commutes_with(b) for u in units)))
    checks.append(("central unit images", dec.decompose(cu["x"]) == xi
                   and all(dec.decompose(u) == e for u, e in zip(cu["x_rs"], xr))))
    checks.append(("central unit orders", exact_order(cu["x"], alg.field.order - 1)
                   and all(exact_order(u, c.unit_order) for u, c in zip(cu["x_rs"], dec.comps))))
    checks.append(("|U| = |U_*| |W| (2^n - 1)", structure_report(dec.tower).check()))
    return checks


def cmd_verify(args) -> int:
    checks = verify_checks(args.p, args.m, args.n, args.seed)
    ok = all(c[1] for c in checks)
    obj = {"checks": [{"name": n, "pass": v} for n, v in checks], "pass": ok}
    text = "\n".join(f"{'PASS' if v else 'FAIL'}  {n}" for n, v in checks)
    _emit(args, obj, text)
    return 0 if ok else 1


def cmd_sweep(args) -> int:
    res = sweep(args.p, args.m, args.n, threads=args.threads)
    obj = res.to_json()
    obj.pop("elapsed")
    if args.csv:
        print(SweepResult.to_csv([res]), end="")
        return 0 if res.ok else 1
    text = (f"{res.total} elements: {res.units} units (formula {res.units_formula}, "
            f"{'agree' if res.units_agree else 'DISAGREE'}), {res.unitary} unitary "
            f"(formula {res.unitary_formula}, {'agree' if res.unitary_agree else 'DISAGREE'}); "
            f"{res.spot_checks} spot checks, {res.spot_mismatches} mismatches")
    _emit(args, obj, text)
    return 0 if res.ok else 1


def cmd_report(args) -> int:
    rep = structure_report(build_tower(args.p, args.m, args.n))
    text = "\n".join([
        f"|U|        = {rep.units}",
        f"|U_*|      = {rep.unitary}",
        f"|<B>|      = {rep.b_order}",
        f"|1+F Ghat| = {rep.kernel}",
        f"|W|        = {rep.w}",
        f"|<x>|      = {rep.x_order}",
        "U = U_* x W x <x>,  U_* = <B> x (1 + F Ghat)",
    ])
    _emit(args, rep.to_json(), text)
    return 0


HANDLERS = {
    "order": cmd_order, "tower": cmd_tower, "decompose": cmd_decompose,
    "generators": cmd_generators, "closure": cmd_closure, "verify": cmd_verify,
    "sweep": cmd_sweep, "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dunits",
        description="Unit groups of GF(2^n) D_{2p^m}: orders, decomposition, generators, checks.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, required=True, help="odd prime")
    common.add_argument("--m", type=int, default=1, help="exponent of p (default 1)")
    common.add_argument("--n", type=int, default=1, help="field degree over GF(2) (default 1)")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="closure size cap")
    common.add_argument("--threads", type=int, default=None, help="sweep workers (env DUNITS_THREADS)")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "decompose":
            sp.add_argument("--element", help='element expression, e.g. "1 + a^2*b"')
        if name == "sweep":
            sp.add_argument("--csv", action="store_true", help="CSV row instead of text")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not (args.p > 2 and isprime(args.p)):
        parser.error(f"--p must be an odd prime, got {args.p}")
    if args.m < 1 or args.n < 1:
        parser.error("--m and --n must be positive")
    if args.threads is None:
        args.threads = threads_from_env()
    try:
        return HANDLERS[args.command](args)
    except ParseError as e:
        print(f"dunits: parse error: {e}\n  {e.text}\n  {' ' * (e.column - 1)}^", file=sys.stderr)
        return 2
    except GuardExceeded as e:
        print(f"dunits: {e}", file=sys.stderr)
        return 2
    except UsageError as e:
        print(f"dunits: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
