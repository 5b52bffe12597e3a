import random

import pytest
from hypothesis import given, strategies as st

from acdual.complexes import homology_rank_at, verify_equivalence
from acdual.coxeter import build_group
from acdual.hecke import (
    HeckeAlgebra,
    balanced_check,
    braid_consistency,
    build_xh,
    check_bimodule,
    duality_homology_check,
    hecke_restriction_certificate,
    inverse_check,
    random_element,
    tensor_normalize,
    xi_suite,
)
from acdual.rings import specialize


def algebra(t):
    return HeckeAlgebra(build_group(t))


def at(x: dict, vals):
    return {w: specialize(c, vals) for w, c in x.items() if specialize(c, vals)}


def test_parameters_follow_conjugacy_classes():
    assert algebra("A3").names == ("q",)
    assert algebra("B2").names == ("q1", "q2")
    assert algebra("I2(5)").names == ("q",)
    assert algebra("I2(6)").names == ("q1", "q2")
    with pytest.raises(ValueError):
        HeckeAlgebra(build_group("B2"), ("q",))


@pytest.mark.parametrize("t", ["A1", "A2", "B2", "I2(5)"])
def test_quadratic_relation(t):
    H = algebra(t)
    for s, g in enumerate(H.group.gen_elem):
        q = H.q[s]
        assert H.mul(H.h(g), H.h(g)) == {g: q - 1, 0: q}


@pytest.mark.parametrize("t", ["A2", "A3", "B2", "B3", "I2(5)"])
def test_q_equal_one_is_the_group_algebra(t):
    H = algebra(t)
    G = H.group
    ones = {n: 1 for n in H.names}
    rng = random.Random(1)
    for _ in range(60):
        u, v = rng.randrange(G.order), rng.randrange(G.order)
        assert at(H.mul(H.h(u), H.h(v)), ones) == {G.mult[u][v]: 1}


@pytest.mark.parametrize("t", ["A2", "B2", "I2(4)"])
def test_standard_trace(t):
    # tau(h_u h_v) = q_u if v = u^-1 and 0 otherwise
    H = algebra(t)
    G = H.group
    for u in range(G.order):
        qu = 1
        for s in G.reduced_word(u):
            qu = qu * H.q[s]
        for v in range(G.order):
            c = H.mul(H.h(u), H.h(v)).get(0, 0)
            assert c == (qu if v == G.inverse[u] else 0)


@pytest.mark.parametrize("t", ["A3", "B2"])
def test_well_defined(t):
    H = algebra(t)
    assert braid_consistency(H) > 0
    assert inverse_check(H) == H.group.order


def test_tensor_normal_form_example():
    H = algebra("A2")
    s1 = H.group.gen_elem[0]
    assert tensor_normalize(H, 0b01, H.h(s1), H.one()) == {(0, s1): 1}


def test_tensor_normal_form_trivial_level():
    H = algebra("A2")
    x = {3: 2, 1: 1}
    y = {4: 1}
    out = tensor_normalize(H, 0, x, y)
    assert out == {(3, 4): 2, (1, 4): 1}


@pytest.mark.parametrize("t, mask", [("A2", 0b01), ("A3", 0b101), ("B2", 0b10)])
def test_tensor_is_balanced(t, mask):
    assert balanced_check(algebra(t), mask, trials=20) == 20


@pytest.mark.parametrize("t, dims", [("A1", {0: 4, 1: 2}), ("A2", {0: 36, 1: 36, 2: 6})])
def test_xh_dims_and_bimodule(t, dims):
    m = build_xh(algebra(t))
    assert m.complex.dims() == dims
    assert check_bimodule(m)


def test_xh_homology_a1():
    x = build_xh(algebra("A1")).complex
    assert homology_rank_at(x, {"q": 2}) == {0: 2, 1: 0}


def test_xh_homology_a2():
    x = build_xh(algebra("A2")).complex
    assert homology_rank_at(x, {"q": 3}) == {0: 6, 1: 0, 2: 0}


def test_zero_specialization_rejected():
    x = build_xh(algebra("A1")).complex
    with pytest.raises(ValueError):
        homology_rank_at(x, {"q": 0})


@pytest.mark.parametrize("t, points, rank_d0", [
    ("A1", [{"q": 2}], [2]),
    ("A2", [{"q": 2}, {"q": 3}, {"q": 5}], [30, 30, 30]),
    ("B2", [{"q1": 2, "q2": 3}], [56]),
])
def test_xi_suite(t, points, rank_d0):
    rep = xi_suite(algebra(t), points)
    assert rep["rank_d0"] == rank_d0
    assert rep["d0_xi_zero"] and rep["hs_xi_hs"] and rep["twist"]


def test_restriction_a2():
    H = algebra("A2")
    r = hecke_restriction_certificate(H, 0b01)
    assert verify_equivalence(r.cert)
    assert r.cert.yp.dims() == {0: 12, 1: 6}


@pytest.mark.parametrize("t", ["A1", "A2", "B2"])
def test_restriction_empty_i0_is_concentrated(t):
    H = algebra(t)
    r = hecke_restriction_certificate(H, 0)
    assert r.cert.yp.degrees == [0]
    assert r.cert.yp.dim(0) == H.group.order


@pytest.mark.parametrize("t, values, h0", [("A1", {"q": 2}, 2), ("A2", {"q": 2}, 6), ("A2", {"q": 5}, 6)])
def test_duality_homology(t, values, h0):
    rep = duality_homology_check(algebra(t), values)
    assert rep["ok"]
    assert rep["ranks"][0] == h0
    assert all(r == 0 for d, r in rep["ranks"].items() if d)


# properties -------------------------------------------------------------------------------


@st.composite
def elements(draw, t):
    H = algebra(t)
    rng = random.Random(draw(st.integers(0, 10**6)))
    return H, [random_element(H, rng) for _ in range(3)]


@given(elements("B2"))
def test_associativity(data):
    H, (x, y, z) = data
    assert H.mul(H.mul(x, y), z) == H.mul(x, H.mul(y, z))


@given(elements("A3"))
def test_alpha_is_multiplicative(data):
    H, (x, y, _) = data
    assert H.alpha(H.mul(x, y)) == H.mul(H.alpha(x), H.alpha(y))


@given(st.sampled_from(["A2", "B2", "I2(5)"]), st.data())
def test_inverses(t, data):
    H = algebra(t)
    w = data.draw(st.integers(0, H.group.order - 1))
    assert H.mul(H.h(w), H.inverse(w)) == H.one()
    assert H.mul(H.inverse(w), H.h(w)) == H.one()
