"""Parabolic cosets, the involution theta and explicit contracting homotopies.

For I0 a proper subset of S the cosets W_I w with w in D_{I,I0} span a
subcomplex of the Coxeter complex; removing the cosets contained in W_{I0}
leaves a contractible complex.  :func:`build_sigma` produces an integral
contraction sigma of it together with the bookkeeping needed to push that
contraction through any coefficient system on 2^I0 (:func:`kernel_contract`).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import (
    CoeffSystem,
    Complex,
    Contraction,
    VerificationError,
    positions,
    sign_exponent,
    verify_complex,
    verify_contraction,
)
from .coxeter import CoxGroup, bits, members, word_str
from .linalg import LinMap


@dataclass(frozen=True, order=True)
class Coset:
    """W_I d with d the minimal-length element of the coset."""

    I: int
    d: int

    @property
    def degree(self) -> int:
        return bin(self.I).count("1")

    def label(self, G: CoxGroup):
        return [[s + 1 for s in members(self.I)], [s + 1 for s in G.reduced_word(self.d)]]

    def show(self, G: CoxGroup) -> str:
        gens = ",".join(f"s{s + 1}" for s in members(self.I))
        return f"W{{{gens}}}.{word_str(G.reduced_word(self.d))}"


def make_coset(G: CoxGroup, mask: int, w: int) -> Coset:
    return Coset(mask, G.coset_min_rep(mask, w, "right")[0])


def coset_union(G: CoxGroup, a: Coset, J: int) -> Coset:
    """a u J = W_{J u S(a)} a."""
    return make_coset(G, a.I | J, a.d)


def coset_elements(G: CoxGroup, a: Coset) -> frozenset:
    return frozenset(G.mult[u][a.d] for u in G.parabolic(a.I))


def coset_key(G: CoxGroup, a: Coset):
    return (a.degree, a.I, G.length[a.d], a.d)


@dataclass
class CosetSystem:
    group: CoxGroup
    i0: int
    a_i0: list[Coset]
    a_plus: list[Coset]
    i0_sets: dict[Coset, int] = field(repr=False)

    def v0(self, a: Coset) -> int:
        return a.d

    def i0_of(self, a: Coset) -> int:
        return self.i0_sets[a]

    def is_plus(self, a: Coset) -> bool:
        return not (a.I & ~self.i0 == 0 and a.d == 0)

    @property
    def w_s(self) -> int:
        return self.group.longest(self.group.all_gens)

    @property
    def w_i0(self) -> int:
        return self.group.longest(self.i0)


def i0_of_coset(G: CoxGroup, i0: int, a: Coset) -> int:
    """{s in I0 : d s d^-1 in W_I}, which is I0 intersected with I^d."""
    return bits(s for s in members(i0) if G.in_parabolic(G.conj(a.d, G.gen_elem[s]), a.I))


def build_system(G: CoxGroup, i0: int) -> CosetSystem:
    if i0 == G.all_gens:
        raise ValueError("I0 = S is the trivial case and is not supported")
    if i0 & ~G.all_gens:
        raise ValueError(f"I0 mask {i0:b} has generators outside S")
    cosets = []
    for mask in range(1 << G.rank):
        for w in G.dist_reps(mask, i0):
            cosets.append(Coset(mask, w))
    cosets.sort(key=lambda a: coset_key(G, a))
    sets = {a: i0_of_coset(G, i0, a) for a in cosets}
    plus = [a for a in cosets if not (a.I & ~i0 == 0 and a.d == 0)]
    return CosetSystem(G, i0, cosets, plus, sets)


# the Coxeter complex ------------------------------------------------------------


def all_cosets(G: CoxGroup) -> list[Coset]:
    out = [Coset(mask, w) for mask in range(1 << G.rank) for w in G.dist_reps(mask, 0)]
    return sorted(out, key=lambda a: coset_key(G, a))


def coset_complex(G: CoxGroup, cosets: list[Coset], order) -> Complex:
    """Z-span of a supset-closed family of cosets with the inclusion differential."""
    pos = positions(order)
    basis: dict[int, list] = {}
    for a in cosets:
        basis.setdefault(a.degree, []).append(a)
    x = Complex(basis)
    for deg in sorted(basis):
        if deg + 1 not in basis:
            continue
        idx = x.index(deg + 1)
        m = LinMap.zero(len(basis[deg + 1]), len(basis[deg]))
        for j, a in enumerate(basis[deg]):
            for s in members(G.all_gens & ~a.I):
                b = coset_union(G, a, 1 << s)
                if b not in idx:
                    raise VerificationError("coset family is not closed under unions", a.show(G))
                m.add_entry(idx[b], j, -1 if sign_exponent(pos, a.I, s) % 2 else 1)
        x.diff[deg] = m
    verify_complex(x)
    return x


def coxeter_complex(G: CoxGroup, order=None) -> Complex:
    return coset_complex(G, all_cosets(G), order or list(range(G.rank)))


# theta, s_w and tau -----------------------------------------------------------------


def theta_elem(sys: CosetSystem, w: int) -> int:
    G = sys.group
    return G.mult[G.mult[sys.w_s][w]][sys.w_i0]


def conj_mask(G: CoxGroup, x: int, mask: int) -> int:
    """x I x^-1 as a generator mask (x must normalise S, e.g. x = w_S)."""
    out = 0
    for s in members(mask):
        g = G.gen_of(G.conj(x, G.gen_elem[s]))
        if g is None:
            raise ValueError("conjugate of a generator is not a generator")
        out |= 1 << g
    return out


def theta(sys: CosetSystem, a: Coset) -> Coset:
    G = sys.group
    return make_coset(G, conj_mask(G, sys.w_s, a.I), theta_elem(sys, a.d))


def conjugated_order(sys: CosetSystem, order) -> list[int]:
    """t <' t' iff w_S t w_S < w_S t' w_S."""
    G = sys.group
    pos = positions(order)
    return sorted(range(G.rank), key=lambda t: pos[G.gen_of(G.conj(sys.w_s, G.gen_elem[t]))])


def s_choice(sys: CosetSystem, w: int) -> int:
    G = sys.group
    top = G.mult[sys.w_s][sys.w_i0]
    if w == top:
        raise ValueError("s_w is undefined for w = w_S w_I0")
    if G.right_descents(w) & sys.i0:
        raise ValueError("s_w needs w in D_{0,I0}")
    first = G.reduced_word(theta_elem(sys, w))[0]
    s = G.gen_of(G.conj(sys.w_s, G.gen_elem[first]))
    sw = G.gen_elem[s]
    assert G.length[G.mult[sw][w]] > G.length[w], "s_w does not lengthen w"
    assert not G.in_parabolic(G.conj(G.inverse[w], sw), sys.i0), "s_w lies in w I0 w^-1"
    return s


def b_cosets(sys: CosetSystem) -> list[Coset]:
    G = sys.group
    return sorted((theta(sys, a) for a in sys.a_plus), key=lambda b: coset_key(G, b))


def tau(sys: CosetSystem, order_b, b: Coset):
    """(sign, coset) or None."""
    s = s_choice(sys, b.d)
    if not b.I >> s & 1:
        return None
    sign = -1 if sign_exponent(positions(order_b), b.I, s) % 2 else 1
    return sign, Coset(b.I & ~(1 << s), b.d)


# the contraction ------------------------------------------------------------------


@dataclass
class SigmaCert:
    system: CosetSystem
    order: list[int]
    order_b: list[int]
    m: dict[tuple[Coset, Coset], int]
    complex: Complex
    contraction: Contraction
    iterations: int = 0
    reading: str = "conjugated"

    def coeffs(self):
        """Nonzero m(a, b) sorted by (a, b)."""
        G = self.system.group
        return sorted(self.m.items(), key=lambda kv: (coset_key(G, kv[0][0]), coset_key(G, kv[0][1])))


def _graded_map(x: Complex, y: Complex, deg_shift: int, fn) -> dict[int, LinMap]:
    """Per-degree map built from fn(label) -> {label: coeff}."""
    out = {}
    for d in x.degrees:
        idx = y.index(d + deg_shift)
        m = LinMap.zero(y.dim(d + deg_shift), x.dim(d))
        for j, lab in enumerate(x.basis[d]):
            for lab2, c in fn(lab).items():
                m.add_entry(idx[lab2], j, c)
        out[d] = m
    return out


READINGS = ("conjugated", "plain")


def build_sigma(sys: CosetSystem, order=None, reading: str = "conjugated") -> SigmaCert:
    """Contraction of Z A(I0)^+ via theta, tau and a Neumann series.

    ``reading`` picks the order used on the theta side: the w_S-conjugate of
    ``order`` (the default) or ``order`` itself.  Only the conjugated reading
    verifies on every instance; the other is kept to record that fact.
    """
    G = sys.group
    order = list(order) if order is not None else list(range(G.rank))
    if reading not in READINGS:
        raise ValueError(f"reading must be one of {READINGS}, not {reading!r}")
    order_b = conjugated_order(sys, order) if reading == "conjugated" else list(order)
    bset = b_cosets(sys)
    xb = coset_complex(G, bset, order_b)
    t_map = _graded_map(
        xb, xb, -1, lambda b: {} if (r := tau(sys, order_b, b)) is None else {r[1]: r[0]}
    )
    cap = 4 * G.length[sys.w_s]
    tau_prime = {}
    iterations = 0
    for d in xb.degrees:
        n = xb.dim(d)
        t_d = t_map.get(d, LinMap.zero(xb.dim(d - 1), n))
        t_up = t_map.get(d + 1, LinMap.zero(n, xb.dim(d + 1)))
        rho = t_up @ xb.d(d) + xb.d(d - 1) @ t_d - LinMap.identity(n)
        total = LinMap.identity(n)
        power = LinMap.identity(n)
        k = 0
        while True:
            power = rho @ power
            k += 1
            if power.is_zero():
                break
            if k > cap:
                raise VerificationError("rho is not nilpotent within the iteration cap", d)
            total = total + power.scale(-1 if k % 2 else 1)
        iterations = max(iterations, k)
        tau_prime[d] = t_d @ total
    # sigma = theta tau' theta, on the basis of A(I0)^+
    x = coset_complex(G, sys.a_plus, order)
    m: dict = {}
    sigma = {}
    for d in x.degrees:
        out = LinMap.zero(x.dim(d - 1), x.dim(d))
        tp = tau_prime.get(d)
        if tp is not None:
            bidx = xb.index(d)
            aidx = x.index(d - 1)
            for j, a in enumerate(x.basis[d]):
                for i, c in tp.cols[bidx[theta(sys, a)]].items():
                    target = theta(sys, xb.basis[d - 1][i])
                    out.add_entry(aidx[target], j, c)
                    m[(a, target)] = c
        sigma[d] = out
    contraction = Contraction(x, sigma)
    cert = SigmaCert(sys, order, order_b, m, x, contraction, iterations, reading)
    verify_contraction(contraction)
    check_sigma_invariants(cert)
    return cert


def check_sigma_invariants(cert: SigmaCert) -> bool:
    sys = cert.system
    G = sys.group
    for (a, b), c in cert.m.items():
        if not c:
            continue
        if b.degree != a.degree - 1:
            raise VerificationError("sigma is not of degree -1", (a.show(G), b.show(G)))
        if sys.i0_of(a) & ~sys.i0_of(b):
            raise VerificationError("I0(b) does not contain I0(a)", (a.show(G), b.show(G)))
        if not G.right_divides(theta(sys, b).d, theta(sys, a).d):
            raise VerificationError("right-divisibility refinement fails", (a.show(G), b.show(G)))
    return True


def literal_refinement_failures(cert: SigmaCert) -> list[tuple[Coset, Coset]]:
    """Entries violating w_S v0(b) w_I0 <=_r w_S v0(a) w_I0 taken element-wise.

    theta sends the minimal element of a coset to the longest element of the
    image coset meeting D_{0,I0}, so this element-wise form is stronger than
    what the construction guarantees (v0(theta b) <=_r v0(theta a)); the
    offending entries are reported rather than treated as errors.
    """
    sys = cert.system
    G = sys.group
    return [
        (a, b)
        for (a, b), c in cert.coeffs()
        if c and not G.right_divides(theta_elem(sys, b.d), theta_elem(sys, a.d))
    ]


def tau_report(sys: CosetSystem, order=None) -> dict:
    """Check tau^2 = 0, property (i) and the refined triangularity on every b."""
    G = sys.group
    order = list(order) if order is not None else list(range(G.rank))
    order_b = conjugated_order(sys, order)
    bset = b_cosets(sys)
    bsetset = set(bset)
    xb = coset_complex(G, bset, order_b)
    checked = 0
    for b in bset:
        r = tau(sys, order_b, b)
        if r is not None:
            b1 = r[1]
            if b1 not in bsetset:
                raise VerificationError("tau leaves B", b.show(G))
            if G.length[b1.d] != G.length[b.d] or sys.i0_of(b1) != sys.i0_of(b):
                raise VerificationError("tau breaks length or I0-set", b.show(G))
            if tau(sys, order_b, b1) is not None:
                raise VerificationError("tau^2 != 0", b.show(G))
        # (tau d + d tau)(b) - b is supported on strictly smaller v0 under <=_r
        img = {}
        for lab, c in _apply_d(xb, b).items():
            rr = tau(sys, order_b, lab)
            if rr is not None:
                img[rr[1]] = img.get(rr[1], 0) + c * rr[0]
        if r is not None:
            for lab, c in _apply_d(xb, r[1]).items():
                img[lab] = img.get(lab, 0) + c * r[0]
        img[b] = img.get(b, 0) - 1
        for lab, c in img.items():
            if not c:
                continue
            ok = (
                lab.d != b.d
                and G.right_divides(lab.d, b.d)
                and not sys.i0_of(b) & ~sys.i0_of(lab)
                and G.length[lab.d] < G.length[b.d]
            )
            if not ok:
                raise VerificationError("tau d + d tau - Id is not strictly triangular", b.show(G))
        checked += 1
    return {"checked": checked, "order_b": order_b}


def _apply_d(x: Complex, lab) -> dict:
    d = lab.degree
    j = x.index(d)[lab]
    if d + 1 not in x.basis:
        return {}
    return {x.basis[d + 1][i]: c for i, c in x.d(d).cols[j].items()}


# coefficient systems indexed by cosets --------------------------------------------------


def block_complex(sys: CosetSystem, cosets: list[Coset], M: CoeffSystem, order, zsub=None) -> Complex:
    """The complex with blocks Z_b (b in ``cosets``) inside M^{I0(b)}.

    Basis labels are (b, z) for z a basis label of M^{I0(b)}; ``zsub(b)``
    optionally restricts to a subset of those labels.  The differential sends
    (b, z) to sum_s (-1)^n(S(b), s) phi^M_{I0(b u s), I0(b)}(z) placed at b u s.
    """
    G = sys.group
    pos = positions(order)
    present = set(cosets)
    basis: dict[int, list] = {}
    for b in cosets:
        labels = M.mod[sys.i0_of(b)]
        keep = labels if zsub is None else zsub(b)
        basis.setdefault(b.degree, []).extend((b, z) for z in keep)
    x = Complex(basis)
    mod_index = {mask: {z: i for i, z in enumerate(labs)} for mask, labs in M.mod.items()}
    for deg in sorted(basis):
        if deg + 1 not in basis:
            continue
        idx = x.index(deg + 1)
        out = LinMap.zero(x.dim(deg + 1), x.dim(deg))
        for j, (b, z) in enumerate(basis[deg]):
            i0b = sys.i0_of(b)
            col = mod_index[i0b][z]
            for s in members(G.all_gens & ~b.I):
                b2 = coset_union(G, b, 1 << s)
                if b2 not in present:
                    continue
                i0b2 = sys.i0_of(b2)
                sign = -1 if sign_exponent(pos, b.I, s) % 2 else 1
                for r, v in M.phi(i0b2, i0b).cols[col].items():
                    key = (b2, M.mod[i0b2][r])
                    if key not in idx:
                        raise VerificationError("restriction leaves the sub-blocks", (b.show(G), b2.show(G)))
                    out.add_entry(idx[key], j, sign * v)
        x.diff[deg] = out
    verify_complex(x)
    return x


def kernel_contract(sys: CosetSystem, cert: SigmaCert, M: CoeffSystem, zsub=None):
    """Complex of the blocks Z_b, b in A(I0)^+, and its contraction sigma-bar."""
    G = sys.group
    z = block_complex(sys, sys.a_plus, M, cert.order, zsub)
    by_source: dict[Coset, list] = {}
    for (a, b), c in cert.m.items():
        if c:
            by_source.setdefault(a, []).append((b, c))
    mod_index = {mask: {lab: i for i, lab in enumerate(labs)} for mask, labs in M.mod.items()}
    maps = {}
    for d in z.degrees:
        if d - 1 not in z.basis:
            continue
        idx = z.index(d - 1)
        out = LinMap.zero(z.dim(d - 1), z.dim(d))
        for j, (b, lab) in enumerate(z.basis[d]):
            i0b = sys.i0_of(b)
            col = mod_index[i0b][lab]
            for b2, c in by_source.get(b, ()):
                i0b2 = sys.i0_of(b2)
                if i0b & ~i0b2:
                    raise VerificationError("m-coefficient violates I0-monotonicity", (b.show(G), b2.show(G)))
                for r, v in M.phi(i0b2, i0b).cols[col].items():
                    key = (b2, M.mod[i0b2][r])
                    if key not in idx:
                        raise VerificationError("sigma-bar leaves the sub-blocks", (b.show(G), b2.show(G)))
                    out.add_entry(idx[key], j, c * v)
        maps[d] = out
    contraction = Contraction(z, maps)
    verify_contraction(contraction)
    return z, contraction
