"""Iwahori-Hecke algebras over Laurent rings and the complex X(H).

Elements of H are dicts w -> scalar on the basis h_w.  One Laurent variable
is used per W-conjugacy class of generators.  H (x)_{H_I} H is realized on
the basis h_d (x) h_w with d ranging over the left-reduced representatives
D_{0,I}, so the restriction maps only rewrite the left factor.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product

from .complexes import (
    CoeffSystem,
    Complex,
    EquivCert,
    VerificationError,
    assemble,
    chain_map_defect,
    homology_rank_at,
    split_equivalence,
    verify_complex,
)
from .coxeter import CoxGroup, members
from .cosets import SigmaCert, block_complex, build_sigma, build_system, kernel_contract
from .linalg import LinMap, rank
from .rings import Laurent


def generator_classes(G: CoxGroup) -> list[int]:
    """Class index of each generator under W-conjugacy (classes numbered by first member)."""
    parent = list(range(G.rank))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for w in range(G.order):
        for s in range(G.rank):
            t = G.gen_of(G.conj(w, G.gen_elem[s]))
            if t is not None:
                a, b = find(s), find(t)
                if a != b:
                    parent[max(a, b)] = min(a, b)
    roots = sorted({find(s) for s in range(G.rank)})
    return [roots.index(find(s)) for s in range(G.rank)]


def _acc(out: dict, key, c):
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def add_scaled(out: dict, vec: dict, c=1):
    for k, v in vec.items():
        _acc(out, k, v * c)
    return out


class HeckeAlgebra:
    def __init__(self, G: CoxGroup, names: tuple[str, ...] | None = None):
        self.group = G
        cls = generator_classes(G)
        n = max(cls) + 1
        if names is None:
            names = ("q",) if n == 1 else tuple(f"q{i + 1}" for i in range(n))
        if len(names) != n:
            raise ValueError(f"{G.type} needs {n} parameters, got {names}")
        self.names = tuple(names)
        self.param_of = cls
        self.q = [Laurent.var(self.names, cls[s]) for s in range(G.rank)]
        self.q_inv = [Laurent.var(self.names, cls[s], -1) for s in range(G.rank)]
        self._prod: dict = {}
        self._inv: dict = {}

    def param_name(self, s: int) -> str:
        return self.names[self.param_of[s]]

    def one(self) -> dict:
        return {0: 1}

    def h(self, w: int) -> dict:
        return {w: 1}

    def right_gen(self, x: dict, s: int) -> dict:
        """x * h_s."""
        G = self.group
        out: dict = {}
        q = self.q[s]
        for w, c in x.items():
            ws = G.rmul[w][s]
            if G.length[ws] > G.length[w]:
                _acc(out, ws, c)
            else:
                _acc(out, w, c * (q - 1))
                _acc(out, ws, c * q)
        return out

    def left_gen(self, s: int, x: dict) -> dict:
        """h_s * x."""
        G = self.group
        out: dict = {}
        q = self.q[s]
        for w, c in x.items():
            sw = G.lmul[s][w]
            if G.length[sw] > G.length[w]:
                _acc(out, sw, c)
            else:
                _acc(out, w, c * (q - 1))
                _acc(out, sw, c * q)
        return out

    def along_word(self, x: dict, word) -> dict:
        for s in word:
            x = self.right_gen(x, s)
        return x

    def basis_product(self, u: int, v: int) -> dict:
        key = (u, v)
        if key not in self._prod:
            self._prod[key] = self.along_word({u: 1}, self.group.reduced_word(v))
        return self._prod[key]

    def mul(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for u, a in x.items():
            for v, b in y.items():
                add_scaled(out, self.basis_product(u, v), a * b)
        return out

    def gen_inverse(self, s: int) -> dict:
        """h_s^-1 = q_s^-1 h_s - (1 - q_s^-1) h_e."""
        qi = self.q_inv[s]
        out = {self.group.gen_elem[s]: qi}
        _acc(out, 0, qi - 1)
        return out

    def inverse(self, w: int) -> dict:
        if w not in self._inv:
            x = self.one()
            for s in reversed(self.group.reduced_word(w)):
                x = self.mul(x, self.gen_inverse(s))
            self._inv[w] = x
        return self._inv[w]

    def alpha_gen(self, s: int) -> dict:
        """-q_s h_s^-1 = -h_s + (q_s - 1) h_e."""
        out = {self.group.gen_elem[s]: -1}
        _acc(out, 0, self.q[s] - 1)
        return out

    def alpha(self, x: dict) -> dict:
        out: dict = {}
        for w, c in x.items():
            img = self.one()
            for s in self.group.reduced_word(w):
                img = self.mul(img, self.alpha_gen(s))
            add_scaled(out, img, c)
        return out

    def specialization_ok(self, values: dict) -> bool:
        return all(values.get(n) for n in self.names)


def reduced_words(G: CoxGroup, w: int) -> list[list[int]]:
    if w == 0:
        return [[]]
    out = []
    for s in range(G.rank):
        ws = G.rmul[w][s]
        if G.length[ws] < G.length[w]:
            out.extend(rw + [s] for rw in reduced_words(G, ws))
    return out


def braid_consistency(H: HeckeAlgebra, elems=None) -> int:
    """For every x and w, x * h_w computed along every reduced word of w agrees."""
    G = H.group
    checked = 0
    for w in range(G.order) if elems is None else elems:
        words = reduced_words(G, w)
        if len(words) < 2:
            continue
        for x in range(G.order):
            ref = H.along_word({x: 1}, words[0])
            for word in words[1:]:
                if H.along_word({x: 1}, word) != ref:
                    raise VerificationError("products along reduced words disagree", (x, w, word))
            checked += 1
    return checked


def random_element(H: HeckeAlgebra, rng: random.Random, terms: int = 3) -> dict:
    G = H.group
    x: dict = {}
    for _ in range(terms):
        w = rng.randrange(G.order)
        c = rng.randint(-3, 3)
        s = rng.randrange(G.rank)
        coeff = c + H.q[s] ** rng.randint(-1, 2) if rng.random() < 0.5 else c
        _acc(x, w, coeff)
    return x


def associativity_check(H: HeckeAlgebra, trials: int = 200, seed: int = 0) -> int:
    rng = random.Random(seed)
    for k in range(trials):
        x, y, z = (random_element(H, rng) for _ in range(3))
        if H.mul(H.mul(x, y), z) != H.mul(x, H.mul(y, z)):
            raise VerificationError("associativity fails", k)
    return trials


def inverse_check(H: HeckeAlgebra) -> int:
    for w in range(H.group.order):
        if H.mul({w: 1}, H.inverse(w)) != H.one() or H.mul(H.inverse(w), {w: 1}) != H.one():
            raise VerificationError("h_w h_w^-1 != 1", w)
    return H.group.order


# tensor products over parabolic subalgebras -------------------------------------------


def left_reps(G: CoxGroup, mask: int) -> list[int]:
    """D_{0,I}: minimal representatives of the left cosets w W_I."""
    return G.dist_reps(0, mask)


def tensor_normalize(H: HeckeAlgebra, mask: int, x: dict, y: dict) -> dict:
    """x (x)_{H_I} y in the basis (d, w), d in D_{0,I}."""
    G = H.group
    out: dict = {}
    for z, a in x.items():
        d, u = G.coset_min_rep(mask, z, "left")
        for w, b in H.mul({u: 1}, y).items():
            _acc(out, (d, w), a * b)
    return out


def tensor_left(H: HeckeAlgebra, mask: int, h: dict, t: dict) -> dict:
    out: dict = {}
    for (d, w), c in t.items():
        add_scaled(out, tensor_normalize(H, mask, H.mul(h, {d: 1}), {w: 1}), c)
    return out


def tensor_right(H: HeckeAlgebra, t: dict, h: dict) -> dict:
    out: dict = {}
    for (d, w), c in t.items():
        for v, b in H.mul({w: 1}, h).items():
            _acc(out, (d, v), c * b)
    return out


def balanced_check(H: HeckeAlgebra, mask: int, trials: int = 50, seed: int = 0) -> int:
    """tensor_normalize(x h, y) == tensor_normalize(x, h y) for h in H_I."""
    G = H.group
    rng = random.Random(seed)
    sub = G.parabolic(mask)
    for k in range(trials):
        x = random_element(H, rng)
        y = random_element(H, rng)
        h = {rng.choice(sub): 1}
        if len(sub) > 1:
            _acc(h, rng.choice(sub), rng.randint(-2, 2))
        if tensor_normalize(H, mask, H.mul(x, h), y) != tensor_normalize(H, mask, x, H.mul(h, y)):
            raise VerificationError("tensor normal form is not balanced", k)
    return trials


@dataclass
class XHModel:
    """X(H) with left/right action operators on each degree."""

    algebra: HeckeAlgebra
    system: CoeffSystem
    complex: Complex
    order: list[int]

    def left_action(self, h: dict) -> dict[int, LinMap]:
        H = self.algebra
        return self._action(lambda mask, t: tensor_left(H, mask, h, t))

    def right_action(self, h: dict) -> dict[int, LinMap]:
        H = self.algebra
        return self._action(lambda mask, t: tensor_right(H, t, h))

    def _action(self, fn) -> dict[int, LinMap]:
        x = self.complex
        out = {}
        for d in x.degrees:
            idx = x.index(d)
            m = LinMap.zero(x.dim(d), x.dim(d))
            for j, (mask, lab) in enumerate(x.basis[d]):
                for lab2, c in fn(mask, {lab: 1}).items():
                    m.add_entry(idx[(mask, lab2)], j, c)
            out[d] = m
        return out


def xh_system(H: HeckeAlgebra, masks=None) -> CoeffSystem:
    G = H.group
    masks = range(1 << G.rank) if masks is None else masks
    mod = {m: [(d, w) for d in left_reps(G, m) for w in range(G.order)] for m in masks}

    def rest(j, i):
        idx = {lab: k for k, lab in enumerate(mod[j])}
        out = LinMap.zero(len(mod[j]), len(mod[i]))
        for c, (d, w) in enumerate(mod[i]):
            for lab, v in tensor_normalize(H, j, {d: 1}, {w: 1}).items():
                out.add_entry(idx[lab], c, v)
        return out

    return CoeffSystem(G.rank, mod, rest)


def build_xh(H: HeckeAlgebra, order=None, check: bool = True) -> XHModel:
    G = H.group
    order = list(order) if order is not None else list(range(G.rank))
    cs = xh_system(H)
    x = assemble(cs, order, check=check)
    model = XHModel(H, cs, x, order)
    if check:
        check_bimodule(model)
    return model


def check_bimodule(model: XHModel) -> bool:
    """Left and right generator actions commute with d and with each other."""
    H = model.algebra
    x = model.complex
    lefts = [model.left_action({g: 1}) for g in H.group.gen_elem]
    rights = [model.right_action({g: 1}) for g in H.group.gen_elem]
    for act in lefts + rights:
        bad = chain_map_defect(x, x, act)
        if bad:
            raise VerificationError("action does not commute with d", bad)
    for L in lefts:
        for R in rights:
            for d in x.degrees:
                if L[d] @ R[d] != R[d] @ L[d]:
                    raise VerificationError("left and right actions do not commute", d)
    return True


# xi and the twist alpha -----------------------------------------------------------------------------


def xi(H: HeckeAlgebra) -> dict:
    """sum_w (-1)^l(w) h_w (x) h_w^-1 at level 0, as {(w, v): coeff}."""
    G = H.group
    out: dict = {}
    for w in range(G.order):
        sign = -1 if G.length[w] % 2 else 1
        for v, c in H.inverse(w).items():
            _acc(out, (w, v), sign * c)
    return out


def _vector(model: XHModel, deg: int, t: dict, mask: int = 0) -> dict:
    idx = model.complex.index(deg)
    return {idx[(mask, lab)]: c for lab, c in t.items() if c}


def alpha_relations(H: HeckeAlgebra) -> bool:
    G = H.group
    mat = G.coxeter_matrix()
    for s in range(G.rank):
        a = H.alpha_gen(s)
        lhs = H.mul(a, a)
        rhs = add_scaled({k: v * (H.q[s] - 1) for k, v in a.items()}, {0: H.q[s]})
        if lhs != rhs:
            raise VerificationError("alpha breaks the quadratic relation", s)
        if H.alpha(H.alpha({G.gen_elem[s]: 1})) != {G.gen_elem[s]: 1}:
            raise VerificationError("alpha is not an involution", s)
    for s in range(G.rank):
        for t in range(s + 1, G.rank):
            m = mat[s][t]
            x, y = H.one(), H.one()
            for k in range(m):
                x = H.mul(x, H.alpha_gen(s if k % 2 == 0 else t))
                y = H.mul(y, H.alpha_gen(t if k % 2 == 0 else s))
            if x != y:
                raise VerificationError("alpha breaks a braid relation", (s, t))
    return True


DEFAULT_POINTS = {1: [{"q": 2}, {"q": 3}, {"q": 5}], 2: [{"q1": 2, "q2": 3}, {"q1": 3, "q2": 5}]}


def xi_suite(H: HeckeAlgebra, points=None, model: XHModel | None = None) -> dict:
    G = H.group
    model = model or build_xh(H)
    x = model.complex
    points = points or DEFAULT_POINTS[len(H.names)]
    report: dict = {"group": str(G.type), "params": list(H.names)}
    z = xi(H)
    zv = _vector(model, 0, z)
    if x.d(0).apply(zv):
        raise VerificationError("d0(xi) != 0")
    report["d0_xi_zero"] = True
    for s in range(G.rank):
        g = {G.gen_elem[s]: 1}
        lhs = tensor_right(H, tensor_left(H, 0, g, z), g)
        if lhs != {k: -H.q[s] * v for k, v in z.items()}:
            raise VerificationError("h_s xi h_s != -q_s xi", s)
        if tensor_left(H, 0, g, z) != tensor_right(H, z, H.alpha(g)):
            raise VerificationError("h_s xi != xi alpha(h_s)", s)
    report["hs_xi_hs"] = True
    report["twist"] = True
    alpha_relations(H)
    report["alpha_relations"] = True
    n = G.order
    ranks, indep = [], []
    d0 = x.d(0)
    for vals in points:
        r = rank(d0.specialize(vals))
        if r != n * n - n:
            raise VerificationError(f"rank d0 = {r} != |W|^2 - |W|", vals)
        ranks.append(r)
        vecs = LinMap(x.dim(0), n)
        for w in range(n):
            col = _vector(model, 0, tensor_right(H, z, {w: 1}))
            vecs.cols[w] = {i: v for i, v in col.items()}
        ri = rank(vecs.specialize(vals))
        if ri != n:
            raise VerificationError("xi h_w are dependent", vals)
        indep.append(ri)
    report["points"] = points
    report["rank_d0"] = ranks
    report["rank_xi_h"] = indep
    return report


# restriction to H_I0 --------------------------------------------------------------------------------


def module_system(H: HeckeAlgebra, i0: int) -> CoeffSystem:
    """K -> H (x)_{H_K} H_{I0} on 2^I0, basis (d in D_{0,K}, v in W_I0)."""
    G = H.group
    sub = G.parabolic(i0)
    masks = [m for m in range(1 << G.rank) if not m & ~i0]
    mod = {m: [(d, v) for d in left_reps(G, m) for v in sub] for m in masks}

    def rest(j, i):
        idx = {lab: k for k, lab in enumerate(mod[j])}
        out = LinMap.zero(len(mod[j]), len(mod[i]))
        for c, (d, v) in enumerate(mod[i]):
            for lab, val in tensor_normalize(H, j, {d: 1}, {v: 1}).items():
                out.add_entry(idx[lab], c, val)
        return out

    return CoeffSystem(G.rank, mod, rest)


def double_coset_split(G: CoxGroup, mask: int, w: int, i0: int, k: int, y: int):
    """y = u w v with u in W_I, v in W_I0 minimal in W_K v, lengths adding."""
    v_full_d, u = G.coset_min_rep(mask, y, "right")  # y = u * r, r minimal in W_I y
    r = v_full_d
    v = G.mult[G.inverse[w]][r]
    if not G.in_parabolic(v, i0) or G.length[w] + G.length[v] != G.length[r]:
        raise VerificationError("element outside the double coset", (y, w))
    return u, v


@dataclass
class HeckeRestrictionResult:
    cert: EquivCert
    sigma: SigmaCert
    x: Complex
    phi: dict[int, LinMap]
    psi: dict[int, LinMap]
    z_coords: dict[int, list[int]]
    report: dict


def hecke_restriction_certificate(H: HeckeAlgebra, i0: int, order=None, xh: XHModel | None = None) -> HeckeRestrictionResult:
    G = H.group
    order = list(order) if order is not None else list(range(G.rank))
    sys = build_system(G, i0)
    sigma = build_sigma(sys, order)
    M = module_system(H, i0)
    M.check_functorial()
    yc = block_complex(sys, sys.a_i0, M, order)
    levi = [a for a in sys.a_i0 if not sys.is_plus(a)]
    ypc = block_complex(sys, levi, M, order)
    zc, sigma_z = kernel_contract(sys, sigma, M)
    report = {"group": str(G.type), "i0": [s + 1 for s in members(i0)], "order": [s + 1 for s in order]}

    # double coset decomposition, checked by dimension
    for mask in range(1 << G.rank):
        total = sum(
            len(left_reps(G, sys.i0_of(a))) * len(G.parabolic(i0)) for a in sys.a_i0 if a.I == mask
        )
        if total != len(left_reps(G, mask)) * G.order:
            raise VerificationError("double coset decomposition has the wrong dimension", mask)
    report["double_coset_dims"] = True

    # p, s and the kernel coordinates, all coordinate maps
    p, s, zco = {}, {}, {}
    for d in yc.degrees:
        yidx = yc.index(d)
        m = LinMap.zero(ypc.dim(d), yc.dim(d))
        for i, lab in enumerate(ypc.basis.get(d, [])):
            m.cols[yidx[lab]] = {i: 1}
        p[d] = m
        s[d] = m.transpose()
        zco[d] = [yidx[lab] for lab in zc.basis.get(d, [])]
    cert = split_equivalence(yc, ypc, p, s, zco, sigma_z)

    xm = xh or build_xh(H, order)
    x = xm.complex
    phi, psi = xh_to_y(H, sys, x, yc)
    check_iso(x, yc, phi, psi)
    report["iso"] = True
    report["equivariance"] = check_hecke_equivariance(H, sys, xm, yc, ypc, cert, phi, i0)
    report["dims"] = {"X": x.dims(), "Y": yc.dims(), "Y'": ypc.dims(), "Z": zc.dims()}
    return HeckeRestrictionResult(cert, sigma, x, phi, psi, zco, report)


def xh_to_y(H: HeckeAlgebra, sys, x: Complex, yc: Complex):
    """Mutually inverse maps between X(H) (restricted) and the block model Y."""
    G = H.group
    i0 = sys.i0
    rep_of = {}
    for a in sys.a_i0:
        rep_of[a.I, a.d] = a
    # double coset of y for each I: y -> (w, coset)
    dc = {}
    for mask in range(1 << G.rank):
        ws = [a for a in sys.a_i0 if a.I == mask]
        for a in ws:
            for u in G.parabolic(mask):
                for v in G.parabolic(i0):
                    dc[mask, G.mult[G.mult[u][a.d]][v]] = a
    phi, psi = {}, {}
    for deg in x.degrees:
        xidx, yidx = x.index(deg), yc.index(deg)
        f = LinMap.zero(yc.dim(deg), x.dim(deg))
        for j, (mask, (d, y)) in enumerate(x.basis[deg]):
            a = dc[mask, y]
            w = a.d
            k = sys.i0_of(a)
            u, v = double_coset_split(G, mask, w, i0, k, y)
            left = H.mul({G.mult[d][u]: 1}, {w: 1})
            for (d2, v2), c in tensor_normalize(H, k, left, {v: 1}).items():
                f.add_entry(yidx[(a, (d2, v2))], j, c)
        phi[deg] = f
        g = LinMap.zero(x.dim(deg), yc.dim(deg))
        for j, (a, (d2, v2)) in enumerate(yc.basis[deg]):
            w = a.d
            left = H.mul({d2: 1}, H.inverse(w))
            right = H.mul({w: 1}, {v2: 1})
            for lab, c in tensor_normalize(H, a.I, left, right).items():
                g.add_entry(xidx[(a.I, lab)], j, c)
        psi[deg] = g
    return phi, psi


def check_iso(x: Complex, y: Complex, phi, psi) -> bool:
    bad = chain_map_defect(x, y, phi)
    if bad:
        raise VerificationError("phi is not a chain map", bad)
    for d in x.degrees:
        if (psi[d] @ phi[d]).first_difference(LinMap.identity(x.dim(d))) is not None:
            raise VerificationError("psi phi != Id", d)
        if (phi[d] @ psi[d]).first_difference(LinMap.identity(y.dim(d))) is not None:
            raise VerificationError("phi psi != Id", d)
    return True


def _block_action(H: HeckeAlgebra, y: Complex, fn) -> dict[int, LinMap]:
    out = {}
    for d in y.degrees:
        idx = y.index(d)
        m = LinMap.zero(y.dim(d), y.dim(d))
        for j, (a, lab) in enumerate(y.basis[d]):
            for lab2, c in fn(a, lab).items():
                m.add_entry(idx[(a, lab2)], j, c)
        out[d] = m
    return out


def check_hecke_equivariance(H, sys, xm: XHModel, yc, ypc, cert: EquivCert, phi, i0) -> int:
    G = H.group
    checked = 0
    acts = []
    for s in range(G.rank):
        g = {G.gen_elem[s]: 1}
        acts.append(("left", g, xm.left_action(g),
                     lambda a, lab, g=g: tensor_left(H, sys.i0_of(a), g, {lab: 1})))
    for t in members(i0):
        g = {G.gen_elem[t]: 1}
        acts.append(("right", g, xm.right_action(g), lambda a, lab, g=g: tensor_right(H, {lab: 1}, g)))
    for side, g, ax, fn in acts:
        ay = _block_action(H, yc, fn)
        ayp = _block_action(H, ypc, fn)
        for d in yc.degrees:
            if phi[d] @ ax[d] != ay[d] @ phi[d]:
                raise VerificationError(f"phi does not commute with the {side} action", d)
            if ypc.dim(d):
                if cert.p[d] @ ay[d] != ayp[d] @ cert.p[d]:
                    raise VerificationError(f"p does not commute with the {side} action", d)
                if cert.g[d] @ ayp[d] != ay[d] @ cert.g[d]:
                    raise VerificationError(f"g does not commute with the {side} action", d)
            checked += 1
    return checked


# duality --------------------------------------------------------------------------------


def duality_complex(H: HeckeAlgebra, values: dict, model: XHModel | None = None) -> Complex:
    """X (x)_H X^dual at a specialization, realized as sums of copies of the duals."""
    G = H.group
    model = model or build_xh(H, check=False)
    cs = model.system
    masks = sorted(cs.mod, key=lambda m: (bin(m).count("1"), m))
    reps = {m: left_reps(G, m) for m in masks}
    # right actions of h_u on each X^J, specialized
    right_mats: dict = {}

    def right_op(j, u):
        key = (j, u)
        if key not in right_mats:
            labs = cs.mod[j]
            idx = {lab: k for k, lab in enumerate(labs)}
            m = LinMap.zero(len(labs), len(labs))
            for c, lab in enumerate(labs):
                for lab2, v in tensor_right(H, {lab: 1}, {u: 1}).items():
                    m.add_entry(idx[lab2], c, v)
            right_mats[key] = m.specialize(values).transpose()
        return right_mats[key]

    basis: dict[int, list] = {}
    for i_mask, j_mask in product(masks, masks):
        deg = bin(i_mask).count("1") - bin(j_mask).count("1")
        for d in reps[i_mask]:
            for f in range(len(cs.mod[j_mask])):
                basis.setdefault(deg, []).append((i_mask, d, j_mask, f))
    x = Complex(basis)
    pos = [0] * G.rank
    for k, s in enumerate(model.order):
        pos[s] = k
    dual_d = {}
    for j in masks:
        for s in members(G.all_gens & ~j):
            # transpose of phi_{j+s, j}
            dual_d[j, j | 1 << s] = cs.phi(j | 1 << s, j).specialize(values).transpose()
    for deg in sorted(basis):
        if deg + 1 not in basis:
            continue
        idx = x.index(deg + 1)
        out = LinMap.zero(x.dim(deg + 1), x.dim(deg))
        for col, (i, d, j, f) in enumerate(basis[deg]):
            ideg = bin(i).count("1")
            for s in members(G.all_gens & ~i):
                sign = -1 if sum(1 for t in members(i) if pos[t] < pos[s]) % 2 else 1
                i2 = i | 1 << s
                d2, u = G.coset_min_rep(i2, d, "left")
                for r, v in right_op(j, u).cols[f].items():
                    out.add_entry(idx[(i2, d2, j, r)], col, sign * v)
            for t in members(j):
                j2 = j & ~(1 << t)
                sign_t = -1 if sum(1 for r in members(j2) if pos[r] < pos[t]) % 2 else 1
                sign = sign_t * (-1 if ideg % 2 else 1)
                for r, v in dual_d[j2, j].cols[f].items():
                    out.add_entry(idx[(i, d, j2, r)], col, sign * v)
        x.diff[deg] = out
    return x


def duality_homology_check(H: HeckeAlgebra, values: dict, model: XHModel | None = None) -> dict:
    if not H.specialization_ok(values):
        raise ValueError(f"specialization {values} makes a parameter zero")
    x = duality_complex(H, values, model)
    verify_complex(x)
    ranks = homology_rank_at(x)
    expected = {d: (H.group.order if d == 0 else 0) for d in ranks}
    return {"values": values, "ranks": ranks, "dims": x.dims(), "ok": ranks == expected}
