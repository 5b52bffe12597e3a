"""Independent checker for serialized certificates.

Nothing here imports the pipeline modules: the Coxeter group, its cosets,
the differential of the coset complex and all matrix products are rebuilt
from scratch.  Only scalar parsing and arithmetic come from :mod:`rings`.

A contraction certificate is re-derived as follows: the basis is compared
with an independent enumeration of the cosets meeting D_{0,I0} and not
contained in W_I0 (cosets are handled as sets of group elements), the
differential is rebuilt with the sign rule, sigma is rebuilt from the
m-coefficients and must agree with the stored matrices, then
sigma d + d sigma = Id, the I0-monotonicity and the right-divisibility
refinement are checked.  Equivalence certificates carry their complexes and
are checked for d^2 = 0, chain maps, p g = Id and Id - g p = d k + k d (plus
phi/psi inverse chain isomorphisms when present).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations

from .rings import parse_scalar


class CertificateError(Exception):
    def __init__(self, what: str, where=None):
        super().__init__(what if where is None else f"{what} at {where}")
        self.what = what
        self.where = where


@dataclass
class VerifyReport:
    ok: bool
    kind: str
    checks: list[str] = field(default_factory=list)
    error: str | None = None
    notes: dict = field(default_factory=dict)


# a self-contained Coxeter group -------------------------------------------------------------


def _models(spec: str):
    hit = re.fullmatch(r"([ABD])(\d+)|I2\((\d+)\)", spec.strip())
    if not hit:
        raise CertificateError(f"unknown group {spec!r}")
    if hit.group(3):
        m = int(hit.group(3))
        # dihedral group of order 2m as permutations of the m-gon's vertices
        r = tuple((1 - i) % m for i in range(m))
        t = tuple((-i) % m for i in range(m))
        return [t, r], tuple(range(m))
    fam, n = hit.group(1), int(hit.group(2))
    if fam == "A":
        ident = tuple(range(n + 1))
        gens = []
        for i in range(n):
            g = list(ident)
            g[i], g[i + 1] = g[i + 1], g[i]
            gens.append(tuple(g))
        return gens, ident
    # signed permutations of {+-1..+-n} encoded as permutations of 2n points
    size = 2 * n

    def enc(images):
        out = [0] * size
        for i, v in enumerate(images):
            a = abs(v) - 1
            out[i] = a if v > 0 else a + n
            out[i + n] = a + n if v > 0 else a
        return tuple(out)

    ident_signed = list(range(1, n + 1))
    gens = []
    for i in range(n - 1):
        g = list(ident_signed)
        g[i], g[i + 1] = g[i + 1], g[i]
        gens.append(enc(g))
    last = list(ident_signed)
    if fam == "B":
        last[-1] = -n
    else:
        last[-2], last[-1] = -n, -(n - 1)
    gens.append(enc(last))
    return gens, tuple(range(size))


class _Group:
    def __init__(self, spec: str):
        gens, ident = _models(spec)
        self.gens = gens
        self.rank = len(gens)
        self.e = ident
        self.length = {ident: 0}
        layer = [ident]
        while layer:
            nxt = []
            for x in layer:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in self.length:
                        self.length[y] = self.length[x] + 1
                        nxt.append(y)
            layer = nxt
        self.top = max(self.length, key=self.length.get)

    @staticmethod
    def mul(a, b):
        return tuple(a[i] for i in b)

    def inv(self, a):
        out = [0] * len(a)
        for i, v in enumerate(a):
            out[v] = i
        return tuple(out)

    def word(self, w):
        x = self.e
        for s in w:
            if not 1 <= s <= self.rank:
                raise CertificateError(f"generator s{s} out of range")
            x = self.mul(x, self.gens[s - 1])
        return x

    def subgroup(self, gens: frozenset):
        seen = {self.e}
        layer = [self.e]
        while layer:
            nxt = []
            for x in layer:
                for s in gens:
                    y = self.mul(x, self.gens[s])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            layer = nxt
        return frozenset(seen)

    def longest(self, gens: frozenset):
        return max(self.subgroup(gens), key=self.length.get)

    def right_divides(self, a, b) -> bool:
        x = self.mul(b, self.inv(a))
        return self.length[x] + self.length[a] == self.length[b]


# sparse matrices ---------------------------------------------------------------------------------


class _Mat:
    def __init__(self, nrows, ncols, entries=None):
        self.nrows, self.ncols = nrows, ncols
        self.rows: dict[int, dict[int, object]] = {}
        for r, c, v in entries or ():
            self.add(r, c, v)

    def add(self, r, c, v):
        if not (0 <= r < self.nrows and 0 <= c < self.ncols):
            raise CertificateError("matrix entry out of range", (r, c))
        row = self.rows.setdefault(r, {})
        x = row.get(c, 0) + v
        if x == 0:
            row.pop(c, None)
        else:
            row[c] = x

    def __matmul__(self, other: "_Mat") -> "_Mat":
        if self.ncols != other.nrows:
            raise CertificateError("shape mismatch in product", (self.ncols, other.nrows))
        out = _Mat(self.nrows, other.ncols)
        for r, row in self.rows.items():
            for k, v in row.items():
                for c, w in other.rows.get(k, {}).items():
                    out.add(r, c, v * w)
        return out

    def __add__(self, other):
        out = _Mat(self.nrows, self.ncols)
        for m in (self, other):
            for r, row in m.rows.items():
                for c, v in row.items():
                    out.add(r, c, v)
        return out

    def __neg__(self):
        out = _Mat(self.nrows, self.ncols)
        for r, row in self.rows.items():
            for c, v in row.items():
                out.add(r, c, -v)
        return out

    def __sub__(self, other):
        return self + (-other)

    def first_nonzero(self):
        for r in sorted(self.rows):
            if self.rows[r]:
                return r, min(self.rows[r])
        return None

    def same(self, other) -> bool:
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and (self - other).first_nonzero() is None


def _ident(n):
    return _Mat(n, n, [(i, i, 1) for i in range(n)])


def _zero(r, c):
    return _Mat(r, c)


def _parse_mat(obj, names) -> _Mat:
    try:
        nrows, ncols = obj["shape"]
        return _Mat(nrows, ncols, [(r, c, parse_scalar(v, names)) for r, c, v in obj["entries"]])
    except CertificateError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateError(f"malformed matrix: {exc}") from exc


def _parse_graded(obj, names) -> dict[int, _Mat]:
    return {int(d): _parse_mat(m, names) for d, m in obj.items()}


# contraction certificates ----------------------------------------------------------------------------


def _coset_of(G: _Group, label):
    gens, word = label
    mask = frozenset(s - 1 for s in gens)
    if len(mask) != len(gens):
        raise CertificateError("repeated generator in label", label)
    w = G.word(word)
    return mask, frozenset(G.mul(u, w) for u in G.subgroup(mask))


def verify_contraction_cert(cert: dict) -> VerifyReport:
    rep = VerifyReport(False, "contraction")
    G = _Group(cert["group"])
    n = G.rank
    i0 = frozenset(s - 1 for s in cert["i0"])
    order = [s - 1 for s in cert["order"]]
    if sorted(order) != list(range(n)):
        raise CertificateError("order is not a permutation of S")
    if len(i0) == n or any(not 0 <= s < n for s in i0):
        raise CertificateError("I0 must be a proper subset of S")
    pos = {s: k for k, s in enumerate(order)}

    basis: dict[int, list] = {}
    where: dict = {}
    for d, labels in cert["basis"].items():
        d = int(d)
        basis[d] = []
        for k, lab in enumerate(labels):
            a = _coset_of(G, lab)
            if len(a[0]) != d:
                raise CertificateError("label in wrong degree", lab)
            if a in where:
                raise CertificateError("repeated coset in basis", lab)
            where[a] = (d, k)
            basis[d].append(a)
    # independent enumeration of A(I0)^+
    w_i0 = G.longest(i0)
    sub_i0 = G.subgroup(i0)
    dmin = {w for w in G.length if all(G.length[G.mul(w, G.gens[t])] > G.length[w] for t in i0)}
    expected = set()
    for k in range(n + 1):
        for gens in combinations(range(n), k):
            mask = frozenset(gens)
            par = G.subgroup(mask)
            done = set()
            for w in G.length:
                if w in done:
                    continue
                cos = frozenset(G.mul(u, w) for u in par)
                done |= cos
                if cos & dmin and not cos <= sub_i0:
                    expected.add((mask, cos))
    if expected != set(where):
        raise CertificateError("basis is not the set of cosets in A(I0)^+",
                               f"{len(expected - set(where))} missing, {len(set(where) - expected)} extra")
    rep.checks.append("basis")

    # differential with the sign rule
    diff: dict[int, _Mat] = {}
    for d, labs in basis.items():
        if d + 1 not in basis:
            continue
        m = _Mat(len(basis[d + 1]), len(labs))
        for c, (mask, cos) in enumerate(labs):
            w = next(iter(cos))
            for s in range(n):
                if s in mask:
                    continue
                big = mask | {s}
                tgt = (big, frozenset(G.mul(u, w) for u in G.subgroup(big)))
                if tgt not in where:
                    raise CertificateError("complex is not closed under unions", cert["basis"][str(d)][c])
                sign = -1 if sum(1 for t in mask if pos[t] < pos[s]) % 2 else 1
                m.add(where[tgt][1], c, sign)
        diff[d] = m
    for d in diff:
        if d + 1 in diff and (diff[d + 1] @ diff[d]).first_nonzero() is not None:
            raise CertificateError("d^2 != 0", d)
    rep.checks.append("differential")

    # sigma from the m-coefficients, compared with the stored matrices
    sigma: dict[int, _Mat] = {}
    for d in basis:
        if d - 1 in basis:
            sigma[d] = _Mat(len(basis[d - 1]), len(basis[d]))
    pairs = {}
    for a_lab, b_lab, v in cert["mcoeffs"]:
        a, b = _coset_of(G, a_lab), _coset_of(G, b_lab)
        if a not in where or b not in where:
            raise CertificateError("m-coefficient on a coset outside the basis", (a_lab, b_lab))
        (da, ia), (db, ib) = where[a], where[b]
        if db != da - 1:
            raise CertificateError("m-coefficient not of degree -1", (a_lab, b_lab))
        if (a, b) in pairs:
            raise CertificateError("repeated m-coefficient", (a_lab, b_lab))
        val = parse_scalar(v)
        pairs[a, b] = val
        sigma[da].add(ib, ia, val)
    stored = _parse_graded(cert["maps"]["sigma"], ())
    for d in set(stored) | set(sigma):
        mine = sigma.get(d, _zero(len(basis.get(d - 1, [])), len(basis.get(d, []))))
        theirs = stored.get(d, _zero(mine.nrows, mine.ncols))
        if not mine.same(theirs):
            hit = (mine - theirs).first_nonzero() if (mine.nrows, mine.ncols) == (theirs.nrows, theirs.ncols) else None
            raise CertificateError("sigma matrix disagrees with m-coefficients",
                                   (d, cert["basis"][str(d)][hit[1]]) if hit else d)
    rep.checks.append("mcoeffs")

    for d, labs in basis.items():
        size = len(labs)
        lhs = _zero(size, size)
        if d + 1 in sigma and d in diff:
            lhs = lhs + sigma[d + 1] @ diff[d]
        if d in sigma and d - 1 in diff:
            lhs = lhs + diff[d - 1] @ sigma[d]
        bad = (lhs - _ident(size)).first_nonzero()
        if bad is not None:
            raise CertificateError("sigma d + d sigma != Id", (d, cert["basis"][str(d)][bad[1]]))
    rep.checks.append("contraction")

    # I0-monotonicity and the right-divisibility refinement
    w_s = G.top

    def v0(cos):
        return min(cos, key=lambda x: (G.length[x], x))

    def i0_set(a):
        mask, cos = a
        v = v0(cos)
        par = G.subgroup(mask)
        return frozenset(s for s in i0 if G.mul(G.mul(v, G.gens[s]), G.inv(v)) in par)

    def theta_v0(a):
        return v0(frozenset(G.mul(G.mul(w_s, x), w_i0) for x in a[1]))

    literal = 0
    for (a, b), v in pairs.items():
        if not v:
            continue
        if i0_set(a) - i0_set(b):
            raise CertificateError("I0(b) does not contain I0(a)", where[a])
        if not G.right_divides(theta_v0(b), theta_v0(a)):
            raise CertificateError("right-divisibility refinement fails", where[a])
        if not G.right_divides(G.mul(G.mul(w_s, v0(b[1])), w_i0), G.mul(G.mul(w_s, v0(a[1])), w_i0)):
            literal += 1
    rep.checks += ["monotone", "refinement"]
    rep.notes["literal_refinement_failures"] = literal
    rep.notes["nonzero_m"] = sum(1 for v in pairs.values() if v)
    rep.ok = True
    return rep


# equivalence certificates ------------------------------------------------------------------------------


def _dims(basis: dict) -> dict[int, int]:
    return {int(d): len(v) for d, v in basis.items()}


def _get(maps, d, r, c):
    m = maps.get(d)
    if m is None:
        return _zero(r, c)
    if (m.nrows, m.ncols) != (r, c):
        raise CertificateError("matrix has the wrong shape", d)
    return m


def _check_complex(name, dims, diff):
    for d, m in diff.items():
        if (m.nrows, m.ncols) != (dims.get(d + 1, 0), dims.get(d, 0)):
            raise CertificateError(f"differential of {name} has the wrong shape", d)
    for d in diff:
        if d + 1 in diff and (diff[d + 1] @ diff[d]).first_nonzero() is not None:
            raise CertificateError(f"d^2 != 0 on {name}", d)


def _dd(diff, dims, d):
    return _get(diff, d, dims.get(d + 1, 0), dims.get(d, 0))


def _check_chain_map(name, f, src_dims, src_diff, dst_dims, dst_diff):
    for d in sorted(set(src_dims) | set(dst_dims)):
        fd = _get(f, d, dst_dims.get(d, 0), src_dims.get(d, 0))
        f1 = _get(f, d + 1, dst_dims.get(d + 1, 0), src_dims.get(d + 1, 0))
        bad = (f1 @ _dd(src_diff, src_dims, d) - _dd(dst_diff, dst_dims, d) @ fd).first_nonzero()
        if bad is not None:
            raise CertificateError(f"{name} is not a chain map", (d, bad[1]))


def verify_equivalence_cert(cert: dict) -> VerifyReport:
    rep = VerifyReport(False, "equivalence")
    names = tuple(cert.get("params", []))
    ydims, pdims = _dims(cert["basis"]["Y"]), _dims(cert["basis"]["Y'"])
    ydiff = _parse_graded(cert["diffs"]["Y"], names)
    pdiff = _parse_graded(cert["diffs"]["Y'"], names)
    _check_complex("Y", ydims, ydiff)
    _check_complex("Y'", pdims, pdiff)
    rep.checks.append("complexes")
    maps = {k: _parse_graded(v, names) for k, v in cert["maps"].items()}
    p, g, k = maps["p"], maps["g"], maps["k"]
    _check_chain_map("p", p, ydims, ydiff, pdims, pdiff)
    _check_chain_map("g", g, pdims, pdiff, ydims, ydiff)
    rep.checks.append("chain maps")
    for d in sorted(set(ydims) | set(pdims)):
        n, m = ydims.get(d, 0), pdims.get(d, 0)
        pg = _get(p, d, m, n) @ _get(g, d, n, m)
        bad = (pg - _ident(m)).first_nonzero()
        if bad is not None:
            raise CertificateError("p g != Id", (d, bad[1]))
    rep.checks.append("pg = Id")
    for d in sorted(ydims):
        n = ydims[d]
        lhs = _ident(n) - _get(g, d, n, pdims.get(d, 0)) @ _get(p, d, pdims.get(d, 0), n)
        rhs = _dd(ydiff, ydims, d - 1) @ _get(k, d, ydims.get(d - 1, 0), n)
        rhs = rhs + _get(k, d + 1, n, ydims.get(d + 1, 0)) @ _dd(ydiff, ydims, d)
        bad = (lhs - rhs).first_nonzero()
        if bad is not None:
            raise CertificateError("Id - g p != d k + k d", (d, bad[1]))
    rep.checks.append("homotopy")
    for d in k:
        _get(k, d, ydims.get(d - 1, 0), ydims.get(d, 0))
    if "X" in cert["basis"]:
        xdims = _dims(cert["basis"]["X"])
        xdiff = _parse_graded(cert["diffs"]["X"], names)
        _check_complex("X", xdims, xdiff)
        phi, psi = maps["phi"], maps["psi"]
        _check_chain_map("phi", phi, xdims, xdiff, ydims, ydiff)
        for d in sorted(set(xdims) | set(ydims)):
            a, b = xdims.get(d, 0), ydims.get(d, 0)
            f, h = _get(phi, d, b, a), _get(psi, d, a, b)
            for prod, size, what in ((h @ f, a, "psi phi"), (f @ h, b, "phi psi")):
                bad = (prod - _ident(size)).first_nonzero()
                if bad is not None:
                    raise CertificateError(f"{what} != Id", (d, bad[1]))
        rep.checks.append("isomorphism")
    rep.ok = True
    return rep


def verify_certificate(cert: dict) -> VerifyReport:
    """Check a certificate; failures come back as a report with ``ok=False``."""
    kind = cert.get("kind") if isinstance(cert, dict) else None
    try:
        if kind == "contraction":
            return verify_contraction_cert(cert)
        if kind == "equivalence":
            return verify_equivalence_cert(cert)
        raise CertificateError(f"unknown certificate kind {kind!r}")
    except CertificateError as exc:
        return VerifyReport(False, str(kind), error=str(exc))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        return VerifyReport(False, str(kind), error=f"malformed certificate: {exc!r}")
