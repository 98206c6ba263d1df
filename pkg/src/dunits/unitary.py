"""The unitary generators B, the group they generate, and the structure report.

A generator is indexed by a triple (i, j, k) and equals

    1 + alpha^i (a^j + a^-j)(1 + a^k b),  0 <= i < n, 1 <= j <= (p^m-1)/2, 0 <= k < p^m

where alpha is the canonical generator of F.  Every generator squares to 1,
so a word's inverse is its reversal.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import ff
from .grpalg import AlgebraElem, GroupAlgebra
from .numtheory import (
    OrderTower,
    central_complement_order,
    sl2_product_order,
    unit_group_order,
    unitary_group_order,
)
from .wedderburn import IDENTITY, Decomposition, Mat2, WedderburnImage

DEFAULT_CAP = 10 ** 7

Triple = tuple[int, int, int]
Letter = tuple[int, int, int, bool]  # (i, j, k, inverted)


class CapExceeded(RuntimeError):
    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"closure exceeded the cap of {cap} elements")


def generator(alg: GroupAlgebra, i: int, j: int, k: int) -> AlgebraElem:
    coeff = alg.field.pow(alg.field.alpha, i)
    s = alg.g(j, coeff=coeff) + alg.g(-j, coeff=coeff)
    return alg.one() + s * (alg.one() + alg.g(k, True))


def u_elem(alg: GroupAlgebra, j: int, i: int) -> AlgebraElem:
    """1 + (a^i + a^-i)(1 + a^j b)."""
    return generator(alg, 0, i, j)


@dataclass
class GeneratorSet:
    alg: GroupAlgebra
    triples: list[Triple]
    elements: list[AlgebraElem]

    def __len__(self):
        return len(self.triples)

    def __iter__(self):
        return iter(self.elements)

    def to_json(self) -> list[dict]:
        return [
            {"i": i, "j": j, "k": k, "element": self.alg.to_json(x)}
            for (i, j, k), x in zip(self.triples, self.elements)
        ]


def build_B(alg: GroupAlgebra) -> GeneratorSet:
    h = (alg.N - 1) // 2
    triples = [(i, j, k) for i in range(alg.n) for j in range(1, h + 1) for k in range(alg.N)]
    elements = []
    for t in triples:
        x = generator(alg, *t)
        if not x.is_unitary():
            raise AssertionError(f"generator {t} is not unitary")
        elements.append(x)
    return GeneratorSet(alg, triples, elements)


def parity_image(x: AlgebraElem) -> tuple[int, int]:
    """Image in F<g>, g^2 = 1, under a^i -> 1, a^i b -> g: (coeff of 1, coeff of g)."""
    s0 = s1 = 0
    for v in x.rot:
        s0 ^= v
    for v in x.ref:
        s1 ^= v
    return s0, s1


# ---------------------------------------------------------------------------
# product identities for a, ab(1+Ghat) and b(1+Ghat)
# ---------------------------------------------------------------------------

def _product(alg: GroupAlgebra, factors: Iterable[AlgebraElem]) -> AlgebraElem:
    out = alg.one()
    for f in factors:
        out = out * f
    return out


def product_identities(alg: GroupAlgebra) -> dict[str, bool]:
    h = (alg.N - 1) // 2
    one_ghat = alg.one() + alg.ghat()
    a, b = alg.a, alg.b
    p_ab = _product(alg, (u_elem(alg, 1, i) for i in range(1, h + 1)))
    p_b = _product(alg, (u_elem(alg, 0, i) for i in range(1, h + 1)))
    p_b_rev = _product(alg, (u_elem(alg, 0, i) for i in range(h, 0, -1)))
    return {
        "ab(1+G)": p_ab == a * b * one_ghat,
        "b(1+G)": p_b == b * one_ghat,
        "1+G": b * p_b == one_ghat,
        "a": p_ab * p_b_rev == a,
    }


def verify_product_identities(alg: GroupAlgebra) -> bool:
    return all(product_identities(alg).values())


def word_for_a(alg: GroupAlgebra) -> list[Letter]:
    h = (alg.N - 1) // 2
    return [(0, i, 1, False) for i in range(1, h + 1)] + [(0, i, 0, False) for i in range(h, 0, -1)]


def invert_word(word: Sequence[Letter]) -> list[Letter]:
    return [(i, j, k, not inv) for (i, j, k, inv) in reversed(word)]


def word_product(alg: GroupAlgebra, word: Sequence[Letter]) -> AlgebraElem:
    out = alg.one()
    for i, j, k, _inv in word:
        # generators are involutions, so the inverse letter is the letter itself
        out = out * generator(alg, i, j, k)
    return out


def word_to_json(word: Sequence[Letter]) -> list[dict]:
    return [{"i": i, "j": j, "k": k, "inverse": inv} for i, j, k, inv in word]


# ---------------------------------------------------------------------------
# closure in the image space
# ---------------------------------------------------------------------------

Blocks = tuple[Mat2, ...]


def generator_images(dec: Decomposition, gens: GeneratorSet) -> list[Blocks]:
    out = []
    for x in gens:
        img = dec.decompose(x)
        assert img.scalar == 1
        out.append(img.blocks)
    return out


def closure_order(dec: Decomposition, gens: GeneratorSet, cap: int = DEFAULT_CAP) -> int:
    """Order of <B>, by breadth-first closure of the block images."""
    return len(closure_images(dec, gens, cap))


def closure_images(dec: Decomposition, gens: GeneratorSet, cap: int = DEFAULT_CAP) -> set[Blocks]:
    images = list(dict.fromkeys(generator_images(dec, gens)))
    start: Blocks = (IDENTITY,) * len(dec.comps)
    seen = {start}
    frontier = [start]
    mul = dec.blocks_mul
    while frontier:
        nxt = []
        for x in frontier:
            for g in images:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > cap:
                        raise CapExceeded(cap)
                    nxt.append(y)
        frontier = nxt
    return seen


def closure_elements(gens: Sequence[AlgebraElem], cap: int = DEFAULT_CAP) -> set[AlgebraElem]:
    """Subgroup generated by units, computed on algebra elements directly."""
    gens = list(dict.fromkeys(gens))
    if not gens:
        raise ValueError("need at least one generator")
    one = gens[0].alg.one()
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


def bfs_word(dec: Decomposition, gens: GeneratorSet, target: Blocks, cap: int = DEFAULT_CAP) -> list[Letter] | None:
    """Shortest word in B whose image is ``target``, or None if unreachable."""
    images = generator_images(dec, gens)
    start: Blocks = (IDENTITY,) * len(dec.comps)
    parent: dict[Blocks, tuple[Blocks, int] | None] = {start: None}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        if x == target:
            word = []
            while parent[x] is not None:
                x, gi = parent[x]
                word.append((*gens.triples[gi], False))
            return word[::-1]
        for gi, g in enumerate(images):
            y = dec.blocks_mul(x, g)
            if y not in parent:
                parent[y] = (x, gi)
                if len(parent) > cap:
                    raise CapExceeded(cap)
                queue.append(y)
    return None


# ---------------------------------------------------------------------------
# constructive preimages of elementary matrices
# ---------------------------------------------------------------------------

def _lower_word_for_poly(dec: Decomposition, Q: Sequence[int]) -> list[Letter]:
    """Word for 1 + Q(a + a^-1)(1 + b): image [[1,0],[c Q(c),1]] in every
    component.  The constant term is spread over all a^q + a^-q, which
    changes the element only by a multiple of Ghat."""
    alg = dec.alg
    E = alg.polynomial_in_trace(Q)
    h = (alg.N - 1) // 2
    rot = E.rot
    beta0 = rot[0]
    word = []
    for q in range(1, h + 1):
        assert rot[q] == rot[alg.N - q]
        beta = rot[q] ^ beta0
        for i in range(alg.n):
            if (beta >> i) & 1:
                word.append((i, q, 0, False))
    return word


def elementary_target(dec: Decomposition, comp_index: int, value: int, upper: bool = False) -> WedderburnImage:
    blocks = [IDENTITY] * len(dec.comps)
    blocks[comp_index] = (1, value, 0, 1) if upper else (1, 0, value, 1)
    return WedderburnImage(1, tuple(blocks))


def sl2_preimage(dec: Decomposition, comp_index: int, value: int, upper: bool = False) -> list[Letter]:
    """Word in B mapping to the elementary matrix with off-diagonal ``value``
    (an ambient element of the component field) in component ``comp_index``
    and identity elsewhere.

    Lower targets: interpolate u'(x) = sum a_h x^h vanishing at every other
    component's trace and equal to ``value`` at this one, then realize each
    x -> a_h x^h as 1 + Q_h(a + a^-1)(1 + b) with Q_h = a_h x^(h-1), where
    x^-1 is taken modulo the product of all component minimal polynomials.
    Upper targets: conjugate the lower word by the word for a.
    """
    comp = dec.comps[comp_index]
    if not comp.component_embedding.contains(value):
        raise ValueError(f"{value:#x} is not in the component field of {comp.label}")
    if upper:
        wa = word_for_a(dec.alg)
        return invert_word(wa) + sl2_preimage(dec, comp_index, value) + wa
    if not value:
        return []
    F = dec.field
    u = dec.interpolate(comp, value)
    Y = dec.all_minpolys_product()
    x_inv = ff.poly_inverse_mod(F, [0, 1], Y)
    word: list[Letter] = []
    for h, ah in enumerate(u):
        if not ah:
            continue
        Q = ff.poly_scale(F, ah, x_inv) if h == 0 else [0] * (h - 1) + [ah]
        word += _lower_word_for_poly(dec, Q)
    return word


def check_word(dec: Decomposition, word: Sequence[Letter], target: WedderburnImage) -> bool:
    return dec.decompose(word_product(dec.alg, word)) == target


# ---------------------------------------------------------------------------
# structure report
# ---------------------------------------------------------------------------

@dataclass
class StructureReport:
    p: int
    m: int
    n: int
    units: int
    unitary: int
    b_order: int
    kernel: int
    w: int
    x_order: int
    labels: dict = field(default_factory=lambda: {
        "units": "|U|",
        "unitary": "|U_*| = |<B>| * |1+F Ghat|",
        "b_order": "|<B>| = prod |SL_2(q_r)|^k'_r",
        "kernel": "|1+F Ghat| = 2^n",
        "w": "|W| = prod (q_r - 1)^k'_r",
        "x_order": "|<x>| = 2^n - 1",
    })

    def check(self) -> bool:
        return (self.units == self.unitary * self.w * self.x_order
                and self.unitary == self.b_order * self.kernel)

    def to_json(self) -> dict:
        out = {"p": self.p, "m": self.m, "n": self.n}
        for key in ("units", "unitary", "b_order", "kernel", "w", "x_order"):
            out[key] = str(getattr(self, key))
        out["labels"] = dict(self.labels)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, obj: dict) -> "StructureReport":
        return cls(
            p=int(obj["p"]), m=int(obj["m"]), n=int(obj["n"]),
            **{k: int(obj[k]) for k in ("units", "unitary", "b_order", "kernel", "w", "x_order")},
            labels=dict(obj.get("labels", {})),
        )


def structure_report(tower: OrderTower) -> StructureReport:
    rep = StructureReport(
        p=tower.p, m=tower.m, n=tower.n,
        units=unit_group_order(tower),
        unitary=unitary_group_order(tower),
        b_order=sl2_product_order(tower),
        kernel=2 ** tower.n,
        w=central_complement_order(tower),
        x_order=2 ** tower.n - 1,
    )
    if not rep.check():
        raise AssertionError(f"inconsistent structure report: {rep}")
    return rep
