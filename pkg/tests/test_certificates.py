import json
import random
from functools import lru_cache

import pytest
from hypothesis import given, settings, strategies as st

from acdual.acceptance import fuzz_certificates
from acdual.bnpair import build_bn, steinberg_restriction_certificate
from acdual.certificates import (
    dumps,
    perturb,
    read,
    sigma_certificate,
    steinberg_restriction_json,
    write,
)
from acdual.coxeter import build_group
from acdual.cosets import build_sigma, build_system
from acdual.verify import verify_certificate


def sigma_json(t, i0, order=None):
    return sigma_certificate(build_sigma(build_system(build_group(t), i0), order))


@lru_cache(maxsize=None)
def corpus():
    return tuple(fuzz_certificates())


def test_schema_fields():
    c = sigma_json("A2", 0b10)
    assert c["kind"] == "contraction" and c["schema"] == 1
    assert c["group"] == "A2" and c["i0"] == [2] and c["order"] == [1, 2]
    assert c["basis"]["2"] == [[[1, 2], []]]
    assert all(len(e) == 3 for e in c["mcoeffs"])


def test_output_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    write(sigma_json("B3", 0b001), a)
    write(sigma_json("B3", 0b001), b)
    assert a.read_bytes() == b.read_bytes()
    assert dumps(read(a)) == a.read_text()


@pytest.mark.parametrize("idx", range(7))
def test_pipeline_certificates_verify(idx):
    name, cert = corpus()[idx]
    rep = verify_certificate(json.loads(dumps(cert)))
    assert rep.ok, (name, rep.error)


def test_m_coefficient_bump_names_the_basis_element():
    c = sigma_json("A2", 0b10)
    c["mcoeffs"][0][2] = str(int(c["mcoeffs"][0][2]) + 1)
    rep = verify_certificate(c)
    assert not rep.ok
    assert "[[" in rep.error  # the failing coset label is part of the message


@pytest.mark.parametrize("mutate, msg", [
    (lambda c: c["basis"]["0"].pop(), "basis"),
    (lambda c: c.update(group="E8"), "unknown group"),
    (lambda c: c.update(i0=[1, 2]), "proper subset"),
    (lambda c: c.update(order=[1, 1]), "permutation"),
    (lambda c: c["maps"]["sigma"]["1"]["entries"].append([0, 0, "5"]), "sigma"),
    (lambda c: c["mcoeffs"].append(c["mcoeffs"][0]), "repeated"),
])
def test_malformed_certificates(mutate, msg):
    c = sigma_json("A2", 0b10)
    mutate(c)
    rep = verify_certificate(c)
    assert not rep.ok and msg in rep.error


def test_equivalence_certificate_tampering():
    bn = build_bn("GL2(2)")
    c = steinberg_restriction_json(bn, steinberg_restriction_certificate(bn, 0), 0)
    assert verify_certificate(c).ok
    c["maps"]["k"] = {}
    assert not verify_certificate(c).ok


def test_unknown_kind():
    assert not verify_certificate({"kind": "proof"}).ok


@settings(max_examples=60)
@given(st.integers(0, 6), st.integers(0, 2**32))
def test_single_entry_perturbations_are_rejected(idx, seed):
    name, cert = corpus()[idx]
    bad, where = perturb(cert, random.Random(seed))
    assert not verify_certificate(bad).ok, (name, where)


@given(st.sampled_from(["A2", "A3", "B2", "I2(5)"]), st.data())
def test_random_orders_verify(t, data):
    G = build_group(t)
    order = data.draw(st.permutations(range(G.rank)))
    i0 = data.draw(st.integers(0, G.all_gens - 1))
    assert verify_certificate(sigma_json(t, i0, list(order))).ok
