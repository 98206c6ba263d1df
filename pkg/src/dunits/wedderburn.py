"""The algebra map F D_{2p^m} -> F + sum_{r,s} M_2(F(c_rs)) and what hangs off it.

Each matrix component (r, s) is attached to a root of unity gamma of order
p^r living in the level's ambient field GF(2^(n o_r)); its trace
c = gamma + gamma^-1 generates the component field, a subfield of degree t_r
over F.  Block entries are stored as ambient-field ints throughout.

The scalar component is the augmentation.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from sympy import primefactors

from . import ff
from .ff import BitSpan, Embedding, FieldCtx, embedding, field
from .grpalg import AlgebraElem, GroupAlgebra, group_algebra
from .numtheory import OrderTower, build_tower, cyclotomic_cosets

Mat2 = tuple[int, int, int, int]  # (a, b, c, d) = [[a, b], [c, d]]

IDENTITY: Mat2 = (1, 0, 0, 1)
ZERO: Mat2 = (0, 0, 0, 0)


def m2_mul(L: FieldCtx, X: Mat2, Y: Mat2) -> Mat2:
    mul = L.mul
    return (
        mul(X[0], Y[0]) ^ mul(X[1], Y[2]),
        mul(X[0], Y[1]) ^ mul(X[1], Y[3]),
        mul(X[2], Y[0]) ^ mul(X[3], Y[2]),
        mul(X[2], Y[1]) ^ mul(X[3], Y[3]),
    )


def m2_add(X: Mat2, Y: Mat2) -> Mat2:
    return (X[0] ^ Y[0], X[1] ^ Y[1], X[2] ^ Y[2], X[3] ^ Y[3])


def m2_scale(L: FieldCtx, c: int, X: Mat2) -> Mat2:
    return (L.mul(c, X[0]), L.mul(c, X[1]), L.mul(c, X[2]), L.mul(c, X[3]))


def m2_det(L: FieldCtx, X: Mat2) -> int:
    return L.mul(X[0], X[3]) ^ L.mul(X[1], X[2])


def m2_inv(L: FieldCtx, X: Mat2) -> Mat2:
    di = L.inv(m2_det(L, X))
    # char 2: adjugate has no signs
    return (L.mul(di, X[3]), L.mul(di, X[1]), L.mul(di, X[2]), L.mul(di, X[0]))


def m2_pow(L: FieldCtx, X: Mat2, e: int) -> Mat2:
    out = IDENTITY
    while e:
        if e & 1:
            out = m2_mul(L, out, X)
        X = m2_mul(L, X, X)
        e >>= 1
    return out


@dataclass(frozen=True)
class ComponentSpec:
    """One 2x2 matrix component, labelled (level, index)."""

    level: int
    index: int
    rep: int
    coset: tuple[int, ...]
    ambient: FieldCtx
    gamma: int
    trace: int
    degree: int
    minpoly: tuple[int, ...]
    field_embedding: Embedding
    component_embedding: Embedding

    @property
    def label(self) -> tuple[int, int]:
        return (self.level, self.index)

    @property
    def component_field(self) -> FieldCtx:
        return self.component_embedding.sub

    @property
    def unit_order(self) -> int:
        """Order of the component field's multiplicative group."""
        return self.component_field.order - 1

    def to_json(self) -> dict:
        return {
            "r": self.level,
            "s": self.index,
            "rep": self.rep,
            "coset": list(self.coset),
            "ambient": self.ambient.to_json(),
            "gamma": format(self.gamma, "x"),
            "trace": format(self.trace, "x"),
            "degree": self.degree,
            "minpoly": [format(c, "x") for c in self.minpoly],
        }


def build_components(tower: OrderTower) -> list[ComponentSpec]:
    """One component per merged cyclotomic coset at every level.

    Coset representatives are the smallest exponents; for odd d the coset of
    j is merged with that of -j.
    """
    p, n = tower.p, tower.n
    comps = []
    for r in tower.levels:
        modulus = p ** r
        o = tower.o[r - 1]
        L = field(n * o)
        fe = embedding(n, n * o)
        ce = embedding(n * tower.t[r - 1], n * o)
        zeta = ff.primitive_root_of_unity(modulus, L)
        cosets = cyclotomic_cosets(2 ** n, modulus)
        used: set[int] = set()
        index = 0
        for c in cosets:
            if c[0] in used:
                continue
            merged = set(c)
            if (-c[0]) % modulus not in merged:
                partner = next(cc for cc in cosets if (-c[0]) % modulus in cc)
                merged |= set(partner)
            used |= merged
            index += 1
            j = c[0]
            gamma = L.pow(zeta, j)
            trace = gamma ^ L.inv(gamma)
            mp = ff.min_poly_over_subfield(trace, fe)
            assert len(mp) - 1 == tower.t[r - 1], (r, j, mp)
            assert ce.contains(trace)
            comps.append(ComponentSpec(
                level=r, index=index, rep=j, coset=tuple(sorted(merged)), ambient=L,
                gamma=gamma, trace=trace, degree=len(mp) - 1, minpoly=tuple(mp),
                field_embedding=fe, component_embedding=ce,
            ))
        assert index == tower.kp[r - 1], (r, index, tower.kp)
    polys = [c.minpoly for c in comps]
    assert len(set(polys)) == len(polys), "component minimal polynomials must be distinct"
    return comps


def rep_T(comp: ComponentSpec, i: int, reflect: bool = False) -> Mat2:
    """Image of a^i (times b) under a -> [[0,1],[1,c]], b -> [[1,0],[c,1]]."""
    L, c = comp.ambient, comp.trace
    m = m2_pow(L, (0, 1, 1, c), i)
    if reflect:
        m = m2_mul(L, m, (1, 0, c, 1))
    return m


def diag_conjugacy_check(comp: ComponentSpec) -> bool:
    """T(g) = M S(g) M^-1 for g = a, b, with S(a) = diag(gamma, gamma^-1),
    S(b) = [[0,1],[1,0]] and M = [[1,1],[gamma, gamma^-1]]."""
    L, g = comp.ambient, comp.gamma
    gi = L.inv(g)
    M = (1, 1, g, gi)
    if not m2_det(L, M):
        return False
    Mi = m2_inv(L, M)
    for S, T in (((g, 0, 0, gi), rep_T(comp, 1)), ((0, 1, 1, 0), rep_T(comp, 0, True))):
        if m2_mul(L, m2_mul(L, M, S), Mi) != T:
            return False
    return True


@dataclass(frozen=True)
class WedderburnImage:
    scalar: int
    blocks: tuple[Mat2, ...]


class Decomposition:
    """Wedderburn-style decomposition of F D_{2p^m} for one parameter set."""

    def __init__(self, p: int, m: int, n: int):
        self.tower = build_tower(p, m, n)
        self.alg: GroupAlgebra = group_algebra(p, m, n)
        self.field = self.alg.field
        self.comps = build_components(self.tower)
        size = self.alg.size
        N = self.alg.N
        # T(g) for every group element and component
        self.group_images: list[list[Mat2]] = []
        for comp in self.comps:
            self.group_images.append([rep_T(comp, g % N, g >= N) for g in range(size)])
        # F -> ambient per component
        self._fe_tables = [[c.field_embedding.embed(v) for v in range(self.field.order)] for c in self.comps]

    # images -------------------------------------------------------------------
    def decompose(self, x: AlgebraElem) -> WedderburnImage:
        if x.alg != self.alg:
            raise ValueError("element belongs to a different group algebra")
        blocks = []
        for comp, images, fe in zip(self.comps, self.group_images, self._fe_tables):
            L = comp.ambient
            acc = ZERO
            for g, v in enumerate(x.coeffs):
                if v:
                    m = images[g]
                    acc = m2_add(acc, m if v == 1 else m2_scale(L, fe[v], m))
            blocks.append(acc)
        return WedderburnImage(x.augmentation(), tuple(blocks))

    def identity(self) -> WedderburnImage:
        return WedderburnImage(1, (IDENTITY,) * len(self.comps))

    def image_mul(self, X: WedderburnImage, Y: WedderburnImage) -> WedderburnImage:
        return WedderburnImage(
            self.field.mul(X.scalar, Y.scalar),
            tuple(m2_mul(c.ambient, A, B) for c, A, B in zip(self.comps, X.blocks, Y.blocks)),
        )

    def blocks_mul(self, X: tuple[Mat2, ...], Y: tuple[Mat2, ...]) -> tuple[Mat2, ...]:
        return tuple(m2_mul(c.ambient, A, B) for c, A, B in zip(self.comps, X, Y))

    def image_is_unit(self, img: WedderburnImage) -> bool:
        if not img.scalar:
            return False
        return all(m2_det(c.ambient, B) for c, B in zip(self.comps, img.blocks))

    def is_unit(self, x: AlgebraElem) -> bool:
        return self.image_is_unit(self.decompose(x))

    def image_to_json(self, img: WedderburnImage) -> dict:
        blocks = []
        for comp, B in zip(self.comps, img.blocks):
            ce = comp.component_embedding
            blocks.append({
                "r": comp.level,
                "s": comp.index,
                "entries": [format(ce.section(v), "x") for v in B],
            })
        return {"scalar": format(img.scalar, "x"), "blocks": blocks}

    def image_from_json(self, obj: dict) -> WedderburnImage:
        blocks = []
        for comp, b in zip(self.comps, obj["blocks"]):
            if (b["r"], b["s"]) != comp.label:
                raise ValueError(f"block label {(b['r'], b['s'])} does not match {comp.label}")
            ce = comp.component_embedding
            blocks.append(tuple(ce.embed(int(v, 16)) for v in b["entries"]))
        if len(blocks) != len(self.comps):
            raise ValueError("wrong number of blocks")
        return WedderburnImage(int(obj["scalar"], 16), tuple(blocks))

    # GF(2)-linearization --------------------------------------------------------
    @functools.cached_property
    def basis_images(self) -> np.ndarray:
        """Image columns (scalar, then 4 entries per component) of every GF(2)
        basis vector alpha^i * g, row index g * n + i."""
        alg, n = self.alg, self.n
        rows = []
        for g in range(alg.size):
            for i in range(n):
                img = self.decompose(alg.basis(g, 1 << i))
                row = [img.scalar]
                for B in img.blocks:
                    row.extend(B)
                rows.append(row)
        return np.array(rows, dtype=np.int64)

    @property
    def n(self) -> int:
        return self.tower.n

    def linear_rank(self) -> tuple[int, int]:
        """(rank over F, kernel dimension over F) of the decomposition map.

        Computed over GF(2): each image is packed into one bit vector, and
        ranks over GF(2) are n times the ranks over F.
        """
        widths = [self.n] + [c.ambient.degree for c in self.comps for _ in range(4)]
        span = BitSpan()
        for row in self.basis_images:
            v = 0
            shift = 0
            for w, e in zip(widths, row):
                v |= int(e) << shift
                shift += w
            span.add(v)
        rank2 = span.rank
        total = self.alg.nbits
        assert rank2 % self.n == 0
        return rank2 // self.n, (total - rank2) // self.n

    def target_dimension(self) -> int:
        return 1 + 4 * sum(t * kp for t, kp in zip(self.tower.t, self.tower.kp))

    def kernel_is_ghat_span(self) -> bool:
        rank, kdim = self.linear_rank()
        if kdim != 1:
            return False
        alg = self.alg
        for c in range(1, self.field.order):
            img = self.decompose(alg.ghat().scale(c))
            if img.scalar or any(B != ZERO for B in img.blocks):
                return False
        return True

    # component-field helpers ---------------------------------------------------
    def embed_poly(self, comp: ComponentSpec, f: Sequence[int]) -> list[int]:
        fe = self._fe_tables[self.comps.index(comp)]
        return [fe[v] for v in f]

    def eval_at_trace(self, comp: ComponentSpec, f: Sequence[int]) -> int:
        """f(c) in the ambient field, for f over F."""
        return ff.poly_eval(comp.ambient, self.embed_poly(comp, f), comp.trace)

    def power_basis_coords(self, comp: ComponentSpec, w: int) -> list[int]:
        """Coefficients (in F) of w = sum_q beta_q c^q, q < t."""
        L = comp.ambient
        fe = comp.field_embedding
        vecs = []
        cq = 1
        for _q in range(comp.degree):
            for i in range(self.n):
                vecs.append(L.mul(fe.basis[i], cq))
            cq = L.mul(cq, comp.trace)
        combo = BitSpan(vecs).express(w)
        if combo is None:
            raise ValueError(f"{w:#x} is not in the component field of {comp.label}")
        coeffs = []
        for q in range(comp.degree):
            coeffs.append((combo >> (q * self.n)) & ((1 << self.n) - 1))
        return coeffs

    def other_minpolys_product(self, comp: ComponentSpec) -> list[int]:
        """g(x): product of the minimal polynomials of all other components."""
        F = self.field
        g = [1]
        for c in self.comps:
            if c is not comp:
                g = ff.poly_mul(F, g, list(c.minpoly))
        return g

    def all_minpolys_product(self) -> list[int]:
        F = self.field
        Y = [1]
        for c in self.comps:
            Y = ff.poly_mul(F, Y, list(c.minpoly))
        return Y

    def interpolate(self, comp: ComponentSpec, w: int) -> list[int]:
        """Polynomial u' over F with u'(c_comp) = w and u'(c_other) = 0."""
        g = self.other_minpolys_product(comp)
        y = self.eval_at_trace(comp, g)
        assert y, "product of other minimal polynomials vanishes at this trace"
        u = self.power_basis_coords(comp, comp.ambient.div(w, y))
        return ff.poly_mul(self.field, g, u)

    # central units ---------------------------------------------------------------
    def central_units(self) -> dict:
        """Central units x (image (eta, I, ..., I)) and x_rs (image eta_rs I at
        (r, s), identity elsewhere), with eta, eta_rs multiplicative generators.

        Elements are polynomials in a + a^-1 assembled from interpolation
        polynomials, then projected to their odd-order part so that the
        1 + F*Ghat factor picked up along the way is removed.
        """
        alg, F = self.alg, self.field
        Y = self.all_minpolys_product()
        assert Y[0], "Y(0) must be nonzero"
        Y = ff.poly_scale(F, F.inv(Y[0]), Y)
        Y_elem = alg.polynomial_in_trace(Y)
        h_terms = []
        for comp in self.comps:
            eta = comp.component_embedding.embed(comp.component_field.generator)
            hp = self.interpolate(comp, eta)
            P = alg.polynomial_in_trace(hp)
            h_terms.append((P, P ** comp.unit_order))

        def fix_scalar(z: AlgebraElem, want: int) -> AlgebraElem:
            return z + Y_elem.scale(z.augmentation() ^ want)

        def odd_part(u: AlgebraElem, e: int) -> AlgebraElem:
            # u^e lies in 1 + F*Ghat, so u^(2e) = 1 and u^(e+1) has odd order
            return u ** (e + 1)

        x_rs = []
        for idx, comp in enumerate(self.comps):
            z = alg.zero()
            for j, (P, Pe) in enumerate(h_terms):
                z = z + (P if j == idx else Pe)
            x_rs.append(odd_part(fix_scalar(z, 1), comp.unit_order))
        z = alg.zero()
        for _P, Pe in h_terms:
            z = z + Pe
        x = odd_part(fix_scalar(z, F.generator), F.order - 1)
        return {"x": x, "x_rs": x_rs}

    def expected_central_images(self) -> tuple[WedderburnImage, list[WedderburnImage]]:
        k = len(self.comps)
        xi = WedderburnImage(self.field.generator, (IDENTITY,) * k)
        out = []
        for idx, comp in enumerate(self.comps):
            eta = comp.component_embedding.embed(comp.component_field.generator)
            blocks = [IDENTITY] * k
            blocks[idx] = (eta, 0, 0, eta)
            out.append(WedderburnImage(1, tuple(blocks)))
        return xi, out


def exact_order(u: AlgebraElem, e: int) -> bool:
    """Whether u has multiplicative order exactly e."""
    if not (u ** e).is_one():
        return False
    return all(not (u ** (e // ell)).is_one() for ell in primefactors(e)) if e > 1 else True


@functools.lru_cache(maxsize=None)
def decomposition(p: int, m: int, n: int) -> Decomposition:
    return Decomposition(p, m, n)
