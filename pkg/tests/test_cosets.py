import pytest
from hypothesis import given, strategies as st

from acdual.certificates import sigma_certificate
from acdual.complexes import VerificationError, homology_int, verify_complex, verify_contraction
from acdual.coxeter import build_group
from acdual.cosets import (
    Coset,
    b_cosets,
    build_sigma,
    build_system,
    check_sigma_invariants,
    coset_elements,
    coset_union,
    coxeter_complex,
    literal_refinement_failures,
    make_coset,
    s_choice,
    tau,
    tau_report,
    theta,
)
from acdual.verify import verify_certificate

SMALL = ["A1", "A2", "A3", "B2", "B3", "I2(3)", "I2(4)", "I2(5)", "I2(6)"]


def instances(types):
    for t in types:
        G = build_group(t)
        for i0 in range(G.all_gens):
            yield t, i0


INSTANCES = list(instances(SMALL))


def test_union_with_identity_coset():
    G = build_group("A2")
    assert coset_union(G, Coset(0, 0), 0b01) == Coset(0b01, 0)


def test_union_of_singleton():
    G = build_group("A2")
    s1 = G.gen_elem[0]
    assert coset_union(G, make_coset(G, 0, s1), 0b01) == Coset(0b01, 0)


def test_union_to_whole_group():
    G = build_group("A2")
    a = make_coset(G, 0b01, G.from_word([1, 0]))
    assert coset_union(G, a, 0b10) == Coset(0b11, 0)


def test_a2_system_counts():
    sys = build_system(build_group("A2"), 0b10)
    assert len(sys.a_i0) == 8
    assert len(sys.a_plus) == 6
    assert [a.degree for a in sys.a_plus].count(0) == 2
    assert [a.degree for a in sys.a_plus].count(1) == 3
    assert [a.degree for a in sys.a_plus].count(2) == 1


@pytest.mark.parametrize("t", SMALL)
def test_empty_i0_gives_all_cosets(t):
    G = build_group(t)
    sys = build_system(G, 0)
    everything = {make_coset(G, m, w) for m in range(1 << G.rank) for w in range(G.order)}
    assert set(sys.a_i0) == everything
    assert set(sys.a_plus) == everything - {Coset(0, 0)}


def test_i0_equal_to_s_rejected():
    G = build_group("A2")
    with pytest.raises(ValueError):
        build_system(G, G.all_gens)


@pytest.mark.parametrize("t, dims", [("A1", {0: 2, 1: 1}), ("A2", {0: 6, 1: 6, 2: 1}), ("B2", {0: 8, 1: 8, 2: 1})])
def test_coxeter_complex(t, dims):
    x = coxeter_complex(build_group(t))
    assert x.dims() == dims
    assert verify_complex(x)
    h = homology_int(x)
    assert h[0].free_rank == 1 and all(g.free_rank == 0 and not g.torsion for d, g in h.items() if d)


def test_a1_coxeter_differential():
    x = coxeter_complex(build_group("A1"))
    assert x.d(0).to_dense() == [[1, 1]]


def test_tau_example():
    G = build_group("A2")
    sys = build_system(G, 0b10)
    assert tau(sys, [1, 0], Coset(0b01, 0)) == (1, Coset(0, 0))


def test_tau_vanishes_without_its_generator():
    G = build_group("A2")
    sys = build_system(G, 0b10)
    for b in b_cosets(sys):
        if tau(sys, [1, 0], b) is None:
            assert not b.I >> s_choice(sys, b.d) & 1


def test_sigma_a2():
    G = build_group("A2")
    cert = build_sigma(build_system(G, 0b10))
    assert cert.complex.dims() == {0: 2, 1: 3, 2: 1}
    assert verify_contraction(cert.contraction)
    rep = verify_certificate(sigma_certificate(cert))
    assert rep.ok, rep.error


def test_sigma_a1():
    G = build_group("A1")
    cert = build_sigma(build_system(G, 0))
    s = Coset(0, G.gen_elem[0])
    assert cert.complex.basis == {0: [s], 1: [Coset(1, 0)]}
    assert cert.complex.d(0).to_dense() == [[1]]
    assert {k: v for k, v in cert.m.items() if v} == {(Coset(1, 0), s): 1}


@pytest.mark.parametrize("t, i0", INSTANCES)
def test_sigma_invariants(t, i0):
    cert = build_sigma(build_system(build_group(t), i0))
    assert check_sigma_invariants(cert)
    assert cert.iterations <= 4 * build_group(t).length[cert.system.w_s]


@pytest.mark.parametrize("t, i0", INSTANCES)
def test_tau_report(t, i0):
    rep = tau_report(build_system(build_group(t), i0))
    assert rep["checked"] > 0


# the element-wise refinement: counts from the pipeline and from the independent verifier
@pytest.mark.parametrize(
    "t, i0, count",
    [("A2", 0, 0), ("A2", 2, 0), ("A3", 0, 2), ("A3", 4, 1), ("B3", 0, 4), ("B3", 1, 2), ("A4", 0, 50), ("A4", 8, 26)],
)
def test_literal_refinement_counts(t, i0, count):
    cert = build_sigma(build_system(build_group(t), i0))
    assert len(literal_refinement_failures(cert)) == count
    assert verify_certificate(sigma_certificate(cert)).notes["literal_refinement_failures"] == count


@pytest.mark.parametrize("t, i0", [("A2", 0), ("A3", 3), ("I2(5)", 1), ("A4", 7)])
def test_plain_reading_fails_when_conjugation_is_nontrivial(t, i0):
    sys = build_system(build_group(t), i0)
    with pytest.raises((VerificationError, AssertionError)):
        build_sigma(sys, reading="plain")


@pytest.mark.parametrize("t, i0", [("B2", 0), ("B3", 5), ("I2(6)", 1)])
def test_readings_agree_when_w_s_is_central(t, i0):
    sys = build_system(build_group(t), i0)
    assert build_sigma(sys, reading="plain").m == build_sigma(sys).m


def test_sigma_is_deterministic():
    sys = build_system(build_group("B3"), 0b010)
    assert sigma_certificate(build_sigma(sys)) == sigma_certificate(build_sigma(sys))


@pytest.mark.parametrize("t", ["A2", "A3"])
def test_other_orders(t):
    G = build_group(t)
    for order in ([1, 0], [2, 0, 1])[G.rank - 2:G.rank - 1]:
        cert = build_sigma(build_system(G, 0), order)
        assert verify_certificate(sigma_certificate(cert)).ok


# properties ----------------------------------------------------------------------------------------


@st.composite
def system(draw):
    t = draw(st.sampled_from(SMALL + ["A4"]))
    G = build_group(t)
    return build_system(G, draw(st.integers(0, G.all_gens - 1)))


@given(system(), st.data())
def test_plus_cosets_closed_under_supsets(sys, data):
    G = sys.group
    a = data.draw(st.sampled_from(sys.a_plus))
    extra = data.draw(st.integers(0, G.all_gens))
    assert coset_union(G, a, extra) in set(sys.a_plus)


@given(system(), st.data())
def test_cosets_as_element_sets(sys, data):
    G = sys.group
    a = data.draw(st.sampled_from(sys.a_i0))
    elems = coset_elements(G, a)
    assert min(elems, key=lambda w: (G.length[w], w)) == a.d
    # a meets D_{S(a),I0} in exactly its minimal element
    assert [w for w in elems if not G.left_descents(w) & a.I and not G.right_descents(w) & sys.i0] == [a.d]


@given(system(), st.data())
def test_theta_is_an_involution(sys, data):
    a = data.draw(st.sampled_from(sys.a_plus))
    assert theta(sys, theta(sys, a)) == a


@given(system(), st.data())
def test_tau_triangularity(sys, data):
    G = sys.group
    order_b = sorted(range(G.rank), key=lambda t: data.draw(st.integers(0, 9), label="key"))
    bs = b_cosets(sys)
    b = data.draw(st.sampled_from(bs))
    out = tau(sys, order_b, b)
    if out is None:
        return
    _, b2 = out
    assert G.length[b2.d] == G.length[b.d]
    assert tau(sys, order_b, b2) is None
