import json

import pytest

from dunits.numtheory import build_tower
from dunits.oracle import enumerate_units
from dunits.unitary import (
    CapExceeded,
    StructureReport,
    bfs_word,
    build_B,
    check_word,
    closure_elements,
    closure_images,
    closure_order,
    elementary_target,
    generator,
    invert_word,
    parity_image,
    product_identities,
    sl2_preimage,
    structure_report,
    verify_product_identities,
    word_for_a,
    word_product,
    word_to_json,
)
from dunits.wedderburn import IDENTITY, decomposition, m2_det

FIVE_SETS = [(3, 1, 1), (5, 1, 1), (7, 1, 1), (3, 1, 2), (3, 2, 1)]


class TestGenerators:
    def test_311_explicit(self):
        alg = decomposition(3, 1, 1).alg
        B = build_B(alg)
        assert B.triples == [(0, 1, 0), (0, 1, 1), (0, 1, 2)]
        for k, x in enumerate(B.elements):
            assert x == alg.one() + (alg.a + alg.g(2)) * (alg.one() + alg.g(k, True))

    @pytest.mark.parametrize("params,count", [
        ((3, 1, 1), 3), ((5, 1, 1), 10), ((3, 1, 2), 6), ((7, 1, 1), 21), ((3, 2, 1), 36), ((5, 1, 3), 30),
    ])
    def test_count(self, params, count):
        assert len(build_B(decomposition(*params).alg)) == count

    @pytest.mark.parametrize("params", FIVE_SETS)
    def test_unitary_involutions_in_sl2(self, params):
        dec = decomposition(*params)
        for x in build_B(dec.alg):
            assert x.is_unitary()
            assert (x * x).is_one()
            img = dec.decompose(x)
            assert img.scalar == 1
            assert all(m2_det(c.ambient, M) == 1 for c, M in zip(dec.comps, img.blocks))

    def test_json(self):
        B = build_B(decomposition(3, 1, 2).alg)
        obj = json.loads(json.dumps(B.to_json()))
        assert len(obj) == 6
        assert {"i", "j", "k", "element"} <= set(obj[0])
        assert B.alg.from_json(obj[3]["element"]) == B.elements[3]


class TestProductIdentities:
    @pytest.mark.parametrize("p,m", [(3, 1), (5, 1), (7, 1), (3, 2)])
    def test_identities(self, p, m):
        alg = decomposition(p, m, 1).alg
        result = product_identities(alg)
        assert set(result) == {"ab(1+G)", "b(1+G)", "1+G", "a"}
        assert all(result.values())
        assert verify_product_identities(alg)

    @pytest.mark.parametrize("n", [2, 3])
    def test_identities_over_larger_fields(self, n):
        assert verify_product_identities(decomposition(5, 1, n).alg)

    @pytest.mark.parametrize("params", FIVE_SETS)
    def test_word_for_a(self, params):
        alg = decomposition(*params).alg
        w = word_for_a(alg)
        assert word_product(alg, w) == alg.a
        assert word_product(alg, invert_word(w)) == alg.g(-1)


class TestClosure:
    @pytest.mark.parametrize("params,order", [
        ((3, 1, 1), 6), ((5, 1, 1), 60), ((7, 1, 1), 504), ((3, 1, 2), 60), ((3, 2, 1), 3024),
    ])
    def test_orders(self, params, order):
        dec = decomposition(*params)
        B = build_B(dec.alg)
        assert closure_order(dec, B) == order
        assert order == structure_report(dec.tower).b_order

    def test_cap(self):
        dec = decomposition(5, 1, 1)
        with pytest.raises(CapExceeded) as exc:
            closure_order(dec, build_B(dec.alg), cap=10)
        assert exc.value.cap == 10

    @pytest.mark.parametrize("params", [(3, 1, 1), (5, 1, 1), (3, 1, 2)])
    def test_algebra_closure_is_faithful(self, params):
        # closing on algebra elements gives the same group as closing on images
        dec = decomposition(*params)
        B = build_B(dec.alg)
        H = closure_elements(B.elements)
        imgs = closure_images(dec, B)
        assert len(H) == len(imgs)
        assert {dec.decompose(h).blocks for h in H} == imgs

    @pytest.mark.parametrize("params", [(3, 1, 1), (5, 1, 1), (7, 1, 1)])
    def test_dihedral_intersection_is_rotations(self, params):
        alg = decomposition(*params).alg
        H = closure_elements(build_B(alg).elements)
        group = {alg.basis(g) for g in range(alg.size)}
        assert H & group == {alg.g(i) for i in range(alg.N)}

    @pytest.mark.parametrize("params", FIVE_SETS)
    def test_parity_image(self, params):
        # every generator lands on the identity of F<g>, while b lands on g
        alg = decomposition(*params).alg
        for x in build_B(alg):
            assert parity_image(x) == (1, 0)
        assert parity_image(alg.b) == (0, 1)
        assert parity_image(alg.a) == (1, 0)

    @pytest.mark.parametrize("params", [(3, 1, 1), (5, 1, 1), (7, 1, 1)])
    def test_odd_support_over_gf2(self, params):
        alg = decomposition(*params).alg
        for h in closure_elements(build_B(alg).elements):
            assert h.support_size() % 2 == 1

    @pytest.mark.parametrize("params", [(3, 1, 1), (5, 1, 1), (3, 1, 2), (7, 1, 1)])
    def test_unique_factorisation_of_unitary_units(self, params):
        """Each unitary unit is v(1 + alpha Ghat) for exactly one v in <B> and alpha in F."""
        alg = decomposition(*params).alg
        H = closure_elements(build_B(alg).elements)
        K = [alg.one() + alg.ghat().scale(c) for c in range(alg.field.order)]
        products = [h * k for h in H for k in K]
        V = set(enumerate_units(*params, unitary_only=True))
        assert set(products) == V
        assert len(products) == len(V)


class TestPreimages:
    def test_identity_target_is_empty_word(self):
        dec = decomposition(3, 1, 1)
        assert sl2_preimage(dec, 0, 0) == []
        assert check_word(dec, [], dec.identity())

    @pytest.mark.parametrize("params", FIVE_SETS)
    def test_every_elementary_target(self, params):
        dec = decomposition(*params)
        B = build_B(dec.alg)
        for ci, comp in enumerate(dec.comps):
            ce = comp.component_embedding
            for v in range(comp.component_field.order):
                value = ce.embed(v)
                for upper in (False, True):
                    target = elementary_target(dec, ci, value, upper)
                    word = sl2_preimage(dec, ci, value, upper)
                    assert check_word(dec, word, target), (ci, v, upper)
                    if params in ((3, 1, 1), (5, 1, 1), (3, 1, 2)):
                        found = bfs_word(dec, B, target.blocks)
                        assert found is not None
                        assert check_word(dec, found, target)

    def test_321_level_two_only(self):
        dec = decomposition(3, 2, 1)
        comp = dec.comps[1]
        c = comp.trace
        word = sl2_preimage(dec, 1, c)
        img = dec.decompose(word_product(dec.alg, word))
        assert img.blocks[0] == IDENTITY
        assert img.blocks[1] == (1, 0, c, 1)

    def test_value_outside_component_field(self):
        dec = decomposition(3, 2, 1)
        comp = dec.comps[0]
        outside = next(v for v in range(comp.ambient.order) if not comp.component_embedding.contains(v))
        with pytest.raises(ValueError):
            sl2_preimage(dec, 0, outside)

    def test_bfs_unreachable(self):
        dec = decomposition(3, 1, 1)
        B = build_B(dec.alg)
        # a scalar-matrix block with determinant 0 is never reached
        assert bfs_word(dec, B, ((0, 0, 0, 0),)) is None

    def test_word_json(self):
        w = [(0, 1, 2, False), (1, 1, 0, True)]
        assert word_to_json(w) == [
            {"i": 0, "j": 1, "k": 2, "inverse": False},
            {"i": 1, "j": 1, "k": 0, "inverse": True},
        ]
        assert invert_word(w) == [(1, 1, 0, False), (0, 1, 2, True)]

    def test_generator_matches_triple(self):
        alg = decomposition(5, 1, 2).alg
        F = alg.field
        x = generator(alg, 1, 2, 3)
        s = alg.g(2, coeff=F.alpha) + alg.g(-2, coeff=F.alpha)
        assert x == alg.one() + s + s * alg.g(3, True)


class TestReport:
    @pytest.mark.parametrize("params,units,unitary,w,x", [
        ((3, 1, 2), 2160, 240, 3, 3),
        ((5, 1, 1), 360, 120, 3, 1),
        ((3, 1, 1), 12, 12, 1, 1),
        ((3, 2, 1), 42336, 6048, 7, 1),
    ])
    def test_examples(self, params, units, unitary, w, x):
        rep = structure_report(build_tower(*params))
        assert (rep.units, rep.unitary, rep.w, rep.x_order) == (units, unitary, w, x)
        assert rep.kernel == 2 ** params[2]
        assert rep.check()

    def test_json_roundtrip(self):
        rep = structure_report(build_tower(11, 2, 2))
        obj = json.loads(rep.dumps())
        assert isinstance(obj["units"], str)
        assert StructureReport.from_json(obj) == rep
