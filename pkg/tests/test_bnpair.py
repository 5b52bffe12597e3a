from collections import Counter
from functools import lru_cache

import pytest
from hypothesis import given, strategies as st

from acdual.bnpair import (
    GroupTooLarge,
    balancing_dimension,
    block_iso,
    build_bn,
    build_xg,
    check_xg_bimodule,
    duality_character_check,
    ga_mul,
    group_duality_check,
    idempotent,
    idempotent_checks,
    idempotent_product_check,
    levi_restriction_certificate,
    parse_group,
    st_complex,
    steinberg_restriction_certificate,
)
from acdual.complexes import euler_characteristic, homology_int, verify_complex, verify_equivalence

GROUPS = {"GL2(2)": (6, 2, 2), "SL2(3)": (24, 6, 3), "GL3(2)": (168, 8, 8), "GL2(3)": (48, 12, 3), "SL2(2)": (6, 2, 2)}


cached_bn = lru_cache(maxsize=None)(build_bn)


@pytest.fixture(scope="module")
def bns():
    return {name: cached_bn(name) for name in GROUPS}


@pytest.mark.parametrize("name", GROUPS)
def test_orders(bns, name):
    order, b, u = GROUPS[name]
    bn = bns[name]
    assert (bn.G.order, len(bn.B), len(bn.U)) == (order, b, u)


@pytest.mark.parametrize("bad", ["SL3(3)", "GL3(3)"])
def test_too_large(bad):
    with pytest.raises(GroupTooLarge):
        build_bn(bad)


@pytest.mark.parametrize("bad", ["GL4(2)", "PSL2(7)", "GL2(5)", "gl2(2)"])
def test_unsupported_groups(bad):
    with pytest.raises(ValueError):
        parse_group(bad)


def test_bruhat_cells_gl32(bns):
    # brute force: partition G into B g B and record cell sizes
    bn = bns["GL3(2)"]
    seen, sizes = set(), []
    for g in range(bn.G.order):
        if g not in seen:
            cell = bn.double_coset(bn.B, g, bn.B)
            seen |= cell
            sizes.append(len(cell))
    assert sorted(sizes) == [8, 16, 16, 32, 32, 64]
    W = bn.W
    assert Counter(len(bn.double_coset(bn.B, bn.dot(w), bn.B)) for w in range(W.order)) == Counter(
        8 * 2 ** W.length[w] for w in range(W.order)
    )


@pytest.mark.parametrize("name", ["GL2(2)", "SL2(3)", "GL3(2)"])
def test_parabolics_are_generated_by_b_and_w(bns, name):
    bn = bns[name]
    G, W = bn.G, bn.W
    for mask in range(1 << W.rank):
        gens = sorted(bn.B) + [bn.dot(W.gen_elem[s]) for s in range(W.rank) if mask >> s & 1]
        assert G.generated(gens) == bn.P(mask)
        assert len(bn.P(mask)) == len(bn.Ur(mask)) * len(bn.L(mask))


def test_idempotents(bns):
    bn = bns["GL3(2)"]
    assert idempotent(bn, bn.W.all_gens) == {0: 1}
    assert idempotent_checks(bn) > 0
    e = idempotent(bn, 0)
    assert ga_mul(bn.G, e, e) == e


def test_idempotent_product_identity_gl22(bns):
    assert idempotent_product_check(bns["GL2(2)"], 0, 0) >= 1


def test_idempotent_product_identities_gl32(bns):
    bn = bns["GL3(2)"]
    assert sum(idempotent_product_check(bn, i, j) for i in range(4) for j in range(4)) == 33


@pytest.mark.parametrize("name, dims, h0", [
    ("GL2(2)", {0: 3, 1: 1}, 2), ("SL2(3)", {0: 4, 1: 1}, 3), ("GL3(2)", {0: 21, 1: 14, 2: 1}, 8),
])
@pytest.mark.parametrize("variant", ["plus", "minus"])
def test_steinberg(bns, name, dims, h0, variant):
    x = st_complex(bns[name], variant)
    assert x.dims() == dims
    assert verify_complex(x)
    h = homology_int(x)
    assert h[0].free_rank == h0 == euler_characteristic(x)
    assert all(g.free_rank == 0 and not g.torsion for d, g in h.items() if d)


@pytest.mark.parametrize("name, i0", [("GL2(2)", 0), ("SL2(3)", 0), ("GL2(3)", 0), ("GL3(2)", 0), ("GL3(2)", 1), ("GL3(2)", 2)])
def test_steinberg_restriction(bns, name, i0):
    r = steinberg_restriction_certificate(bns[name], i0)
    assert verify_equivalence(r.cert)
    if i0 == 0:
        assert r.cert.yp.degrees == [0]
        assert r.cert.yp.dim(0) == len(bns[name].U)


@pytest.mark.parametrize("name", ["GL2(2)", "SL2(3)"])
def test_xg_dims_match_balancing_quotient(bns, name):
    bn = bns[name]
    x, mods = build_xg(bn)
    assert x.dim(1) == bn.G.order
    assert x.dim(0) == balancing_dimension(bn, 0)
    assert check_xg_bimodule(bn, x, mods) > 0


def test_xg_gl22(bns):
    x, _ = build_xg(bns["GL2(2)"])
    assert x.dims() == {0: 9, 1: 6}


def test_block_iso_gl22(bns):
    bn = bns["GL2(2)"]
    out = block_iso(bn, 0, bn.W.gen_elem[0], 0)
    assert out["dim"] > 0


@pytest.mark.slow
def test_block_iso_gl32(bns):
    bn = bns["GL3(2)"]
    for w in bn.W.dist_reps(1, 2):
        assert block_iso(bn, 1, w, 2)["dim"] > 0


@pytest.mark.parametrize("name", ["GL2(2)", "SL2(3)"])
def test_levi_restriction(bns, name):
    r = levi_restriction_certificate(bns[name], 0)
    assert verify_equivalence(r.cert)
    assert r.report["choice_checks"] > 0


def test_alternate_dots_only_for_nontrivial_torus(bns):
    assert bns["GL2(2)"].alternate_dots(1) == []
    assert len(bns["SL2(3)"].alternate_dots(1)) == 1


@pytest.mark.parametrize("name, order", [("GL2(2)", 6), ("SL2(3)", 24)])
def test_group_duality(bns, name, order):
    rep = group_duality_check(bns[name])
    assert rep["ok"] and rep["ranks"][0] == order
    assert duality_character_check(bns[name], 5, 0)["ok"]


def test_group_duality_limited_to_rank_one(bns):
    with pytest.raises(ValueError):
        group_duality_check(bns["GL3(2)"])


# properties -------------------------------------------------------------------------------


@given(st.sampled_from(["GL2(2)", "SL2(3)", "GL3(2)"]), st.data())
def test_levi_decomposition(name, data):
    bn = cached_bn(name)
    W = bn.W
    mask = data.draw(st.integers(0, W.all_gens))
    P = sorted(bn.P(mask))
    g = P[data.draw(st.integers(0, len(P) - 1))]
    # g = u l with u in U_I and l in L_I, uniquely
    hits = [(u, l) for u in bn.Ur(mask) for l in bn.L(mask) if bn.G.mul(u, l) == g]
    assert len(hits) == 1


@given(st.sampled_from(["GL2(2)", "SL2(3)", "GL3(2)"]), st.data())
def test_idempotent_absorbs_radical(name, data):
    bn = cached_bn(name)
    mask = data.draw(st.integers(0, bn.W.all_gens))
    U = sorted(bn.Ur(mask))
    u = U[data.draw(st.integers(0, len(U) - 1))]
    e = idempotent(bn, mask)
    assert ga_mul(bn.G, e, {u: 1}) == e == ga_mul(bn.G, {u: 1}, e)
