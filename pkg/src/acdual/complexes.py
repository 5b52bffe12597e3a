"""Bounded cochain complexes of free modules and the tools built on them.

A complex stores, for each degree d, an ordered list of basis labels and the
differential d -> d+1 as a :class:`LinMap`.  Coefficient systems on 2^S are
assembled with the sign rule (-1)^n(I, s), where n(I, s) counts the elements
of I placed before s in a chosen total order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Hashable

from .coxeter import members
from .linalg import LinMap, rank, rank_mod_p, smith_normal_form
from .rings import Laurent


class VerificationError(AssertionError):
    """An exact identity failed; ``where`` names the first failing spot."""

    def __init__(self, what: str, where=None):
        super().__init__(f"{what}" + (f" at {where}" if where is not None else ""))
        self.what = what
        self.where = where


# complexes --------------------------------------------------------------------


@dataclass
class Complex:
    basis: dict[int, list]
    diff: dict[int, LinMap] = field(default_factory=dict)

    def __post_init__(self):
        self._index = {}

    @property
    def degrees(self) -> list[int]:
        return sorted(d for d, b in self.basis.items() if b)

    def dim(self, d: int) -> int:
        return len(self.basis.get(d, ()))

    def dims(self) -> dict[int, int]:
        return {d: self.dim(d) for d in self.degrees}

    def index(self, d: int) -> dict:
        if d not in self._index:
            self._index[d] = {lab: i for i, lab in enumerate(self.basis.get(d, ()))}
        return self._index[d]

    def d(self, deg: int) -> LinMap:
        """Differential out of degree ``deg`` (zero map if not stored)."""
        m = self.diff.get(deg)
        if m is None:
            return LinMap.zero(self.dim(deg + 1), self.dim(deg))
        return m

    def all_degrees(self) -> range:
        ds = self.degrees
        return range(ds[0] - 1, ds[-1] + 2) if ds else range(0)


def zero_complex() -> Complex:
    return Complex({})


def chain_map_defect(src: Complex, dst: Complex, f: dict[int, LinMap]):
    """First (degree, column) with dst.d f != f src.d, else None."""
    for d in src.all_degrees():
        lhs = dst.d(d) @ _get(f, d, dst.dim(d), src.dim(d))
        rhs = _get(f, d + 1, dst.dim(d + 1), src.dim(d + 1)) @ src.d(d)
        diff = lhs.first_difference(rhs)
        if diff is not None:
            return d, diff[1]
    return None


def _get(maps: dict, d: int, nrows: int, ncols: int) -> LinMap:
    m = maps.get(d)
    if m is None:
        return LinMap.zero(nrows, ncols)
    if m.shape != (nrows, ncols):
        raise ValueError(f"degree {d}: map has shape {m.shape}, expected {(nrows, ncols)}")
    return m


def verify_complex(x: Complex) -> bool:
    for d in x.all_degrees():
        sq = x.d(d + 1) @ x.d(d)
        if not sq.is_zero():
            i, j = next((i, j) for i, j, _ in sq.entries())
            raise VerificationError("d^2 != 0", (d, x.basis[d][j]))
    return True


# coefficient systems -------------------------------------------------------------


@dataclass
class CoeffSystem:
    """A coefficient system on 2^S for |S| = ``rank``.

    ``mod[I]`` lists the basis labels of M^I (I a bitmask) and ``rest(J, I)``
    returns the restriction M^I -> M^J for I a subset of J.
    """

    rank: int
    mod: dict[int, list]
    rest: Callable[[int, int], LinMap]

    def __post_init__(self):
        self._cache: dict = {}

    def phi(self, j: int, i: int) -> LinMap:
        if (j, i) not in self._cache:
            if i & ~j:
                raise ValueError(f"restriction needs I subset of J, got {i:b}, {j:b}")
            if i == j:
                m = LinMap.identity(len(self.mod.get(i, ())))
            else:
                m = self.rest(j, i)
            self._cache[(j, i)] = m
        return self._cache[(j, i)]

    def check_functorial(self):
        masks = sorted(self.mod, key=lambda m: (bin(m).count("1"), m))
        for i in masks:
            for j in masks:
                if i & ~j or i == j:
                    continue
                for k in masks:
                    if j & ~k or j == k:
                        continue
                    if self.phi(k, j) @ self.phi(j, i) != self.phi(k, i):
                        raise VerificationError("restriction maps not functorial", (i, j, k))
        return True


def sign_exponent(pos: list[int], mask: int, s: int) -> int:
    """n(I, s): the number of elements of I placed before s."""
    return sum(1 for t in members(mask) if pos[t] < pos[s])


def positions(order) -> list[int]:
    pos = [0] * len(order)
    for k, s in enumerate(order):
        pos[s] = k
    return pos


def assemble(cs: CoeffSystem, order, check: bool = True) -> Complex:
    """The complex M^0 -> M^1 -> ... of a coefficient system."""
    if check:
        cs.check_functorial()
    pos = positions(order)
    full = (1 << cs.rank) - 1
    basis: dict[int, list] = {}
    offset: dict[int, int] = {}
    for deg in range(cs.rank + 1):
        labels = []
        for combo in combinations(range(cs.rank), deg):
            m = sum(1 << s for s in combo)
            if m not in cs.mod:
                continue
            offset[m] = len(labels)
            labels.extend((m, lab) for lab in cs.mod[m])
        basis[deg] = labels
    diff = {}
    for deg in range(cs.rank):
        out = LinMap.zero(len(basis[deg + 1]), len(basis[deg]))
        for m in cs.mod:
            if bin(m).count("1") != deg:
                continue
            for s in members(full & ~m):
                j = m | (1 << s)
                if j not in cs.mod:
                    continue
                sign = -1 if sign_exponent(pos, m, s) % 2 else 1
                for r, c, v in cs.phi(j, m).entries():
                    out.add_entry(offset[j] + r, offset[m] + c, sign * v)
        diff[deg] = out
    x = Complex({d: b for d, b in basis.items() if b}, diff)
    verify_complex(x)
    return x


# contractions -------------------------------------------------------------------


@dataclass
class Contraction:
    target: Complex
    maps: dict[int, LinMap]  # degree d -> d-1


def verify_contraction(c: Contraction) -> bool:
    """Exact check of sigma d + d sigma = Id; raises on the first failure."""
    x = c.target
    for d in x.degrees:
        n = x.dim(d)
        lhs = _get(c.maps, d + 1, n, x.dim(d + 1)) @ x.d(d)
        lhs = lhs + x.d(d - 1) @ _get(c.maps, d, x.dim(d - 1), n)
        diff = lhs.first_difference(LinMap.identity(n))
        if diff is not None:
            raise VerificationError("sigma d + d sigma != Id", (d, x.basis[d][diff[1]]))
    return True


# homotopy equivalences --------------------------------------------------------------


@dataclass
class EquivCert:
    """Y and Y' with chain maps p, g and a homotopy k: Id - g p = d k + k d."""

    y: Complex
    yp: Complex
    p: dict[int, LinMap]
    g: dict[int, LinMap]
    k: dict[int, LinMap]


def verify_equivalence(e: EquivCert) -> bool:
    y, yp = e.y, e.yp
    verify_complex(y)
    verify_complex(yp)
    bad = chain_map_defect(y, yp, e.p)
    if bad:
        raise VerificationError("p is not a chain map", bad)
    bad = chain_map_defect(yp, y, e.g)
    if bad:
        raise VerificationError("g is not a chain map", bad)
    for d in sorted(set(y.degrees) | set(yp.degrees)):
        pg = _get(e.p, d, yp.dim(d), y.dim(d)) @ _get(e.g, d, y.dim(d), yp.dim(d))
        diff = pg.first_difference(LinMap.identity(yp.dim(d)))
        if diff is not None:
            raise VerificationError("p g != Id", (d, yp.basis[d][diff[1]]))
    for d in y.degrees:
        n = y.dim(d)
        lhs = LinMap.identity(n) - _get(e.g, d, n, yp.dim(d)) @ _get(e.p, d, yp.dim(d), n)
        rhs = y.d(d - 1) @ _get(e.k, d, y.dim(d - 1), n) + _get(e.k, d + 1, n, y.dim(d + 1)) @ y.d(d)
        diff = lhs.first_difference(rhs)
        if diff is not None:
            raise VerificationError("Id - g p != d k + k d", (d, y.basis[d][diff[1]]))
    return True


def split_equivalence(y: Complex, yp: Complex, p, s, z_coords: dict[int, list[int]],
                      sigma_z: Contraction) -> EquivCert:
    """Turn a degreewise split surjection with contractible kernel into a homotopy equivalence.

    ``z_coords[d]`` lists the coordinates of Y^d spanning ker p; ``sigma_z``
    contracts the subcomplex on those coordinates (in that order).
    """
    z = sigma_z.target
    verify_contraction(sigma_z)
    for d in sorted(set(y.degrees) | set(yp.degrees)):
        pd = _get(p, d, yp.dim(d), y.dim(d))
        sd = _get(s, d, y.dim(d), yp.dim(d))
        diff = (pd @ sd).first_difference(LinMap.identity(yp.dim(d)))
        if diff is not None:
            raise VerificationError("p s != Id", (d, diff[1]))
        zc = z_coords.get(d, [])
        if len(zc) != z.dim(d) or yp.dim(d) + len(zc) != y.dim(d):
            raise VerificationError("kernel coordinates do not complement Y'", d)
        if not pd.restrict(list(range(yp.dim(d))), zc).is_zero():
            raise VerificationError("p does not vanish on the kernel coordinates", d)
    bad = chain_map_defect(y, yp, p)
    if bad:
        raise VerificationError("p is not a chain map", bad)

    def incl(d):
        m = LinMap.zero(y.dim(d), z.dim(d))
        for k, c in enumerate(z_coords.get(d, [])):
            m.cols[k] = {c: 1}
        return m

    def proj(d):
        m = LinMap.zero(z.dim(d), y.dim(d))
        for k, c in enumerate(z_coords.get(d, [])):
            m.cols[c] = {k: 1}
        return m

    degs = sorted(set(y.degrees) | set(yp.degrees))
    g, k = {}, {}
    for d in degs:
        sd = _get(s, d, y.dim(d), yp.dim(d))
        # D = d s - s d : Y'^d -> Z^{d+1}
        dd = y.d(d) @ sd - _get(s, d + 1, y.dim(d + 1), yp.dim(d + 1)) @ yp.d(d)
        dz = proj(d + 1) @ dd
        if not (incl(d + 1) @ dz - dd).is_zero():
            raise VerificationError("d s - s d leaves the kernel", d)
        corr = incl(d) @ _get(sigma_z.maps, d + 1, z.dim(d), z.dim(d + 1)) @ dz
        g[d] = sd - corr
    for d in degs:
        n = y.dim(d)
        q = proj(d) @ (LinMap.identity(n) - g[d] @ _get(p, d, yp.dim(d), n))
        k[d] = incl(d - 1) @ _get(sigma_z.maps, d, z.dim(d - 1), z.dim(d)) @ q
    cert = EquivCert(y, yp, {d: _get(p, d, yp.dim(d), y.dim(d)) for d in degs}, g, k)
    verify_equivalence(cert)
    return cert


# homology -------------------------------------------------------------------------


@dataclass
class HomologyGroup:
    free_rank: int
    torsion: list[int]

    def __str__(self):
        parts = [f"Z^{self.free_rank}"] if self.free_rank else []
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"


def _integer_matrix(m: LinMap):
    for _, _, v in m.entries():
        if not isinstance(v, int):
            raise TypeError(f"homology over Z needs integer entries, found {v!r}")
    return m.to_dense()


def homology_int(x: Complex) -> dict[int, HomologyGroup]:
    """Cohomology H^d = ker d^d / im d^(d-1) over Z via Smith normal form."""
    factors = {}
    for d in x.all_degrees():
        m = x.d(d)
        if m.nrows and m.ncols and not m.is_zero():
            factors[d] = smith_normal_form(_integer_matrix(m))
        else:
            factors[d] = []
    out = {}
    for d in x.degrees:
        free = x.dim(d) - len(factors[d]) - len(factors[d - 1])
        tors = [f for f in factors[d - 1] if f > 1]
        out[d] = HomologyGroup(free, tors)
    return out


def homology_rank_at(x: Complex, values: dict | None = None, exact: bool = True) -> dict[int, int]:
    """Ranks of H^d over Q after substituting ``values`` for the parameters.

    With ``exact=False`` the ranks of the differentials are computed modulo a
    large prime, which can only underestimate them, so the returned homology
    ranks are then upper bounds.
    """
    values = values or {}
    ranks = {}
    for d in x.all_degrees():
        m = x.d(d)
        if values:
            for _, _, v in m.entries():
                if isinstance(v, Laurent):
                    for name in v.names:
                        if not values.get(name):
                            raise ValueError(f"specialization sends unit {name} to zero")
            m = m.specialize(values)
        ranks[d] = rank(m) if exact else rank_mod_p(m)
    return {d: x.dim(d) - ranks[d] - ranks[d - 1] for d in x.degrees}


def euler_characteristic(x: Complex) -> int:
    return sum((-1) ** d * x.dim(d) for d in x.degrees)


def specialize_complex(x: Complex, values: dict) -> Complex:
    return Complex(dict(x.basis), {d: m.specialize(values) for d, m in x.diff.items()})


Label = Hashable
