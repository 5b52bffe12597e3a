"""Finite Coxeter groups built from concrete faithful models.

Types A_n (permutations), B_n (signed permutations), D_n (even-signed
permutations) and I2(m) (dihedral) are supported.  Elements are integer
indices assigned by breadth-first search from the identity along right
multiplication by the generators, so index 0 is the identity and the BFS
depth is the Coxeter length.  Subsets of generators are bitmasks.

>>> W = build_group(CoxType.parse("A2"))
>>> W.order, W.reduced_word(W.longest(W.all_gens))
(6, [0, 1, 0])
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property

SUPPORTED = {"A": range(1, 5), "B": range(2, 4), "D": range(4, 5)}
MAX_DIHEDRAL = 12


class UnsupportedType(ValueError):
    pass


@dataclass(frozen=True)
class CoxType:
    family: str
    rank: int
    m: int | None = None

    _PATTERN = re.compile(r"^\s*([ABD])(\d+)\s*$|^\s*I2\((\d+)\)\s*$")

    @classmethod
    def parse(cls, s: str) -> "CoxType":
        hit = cls._PATTERN.match(s)
        if not hit:
            raise UnsupportedType(f"unsupported Coxeter type {s!r}")
        if hit.group(1):
            t = cls(hit.group(1), int(hit.group(2)))
        else:
            t = cls("I2", 2, int(hit.group(3)))
        t.check()
        return t

    def check(self):
        if self.family == "I2":
            if self.rank != 2 or self.m is None or not 3 <= self.m <= MAX_DIHEDRAL:
                raise UnsupportedType(f"unsupported dihedral type I2({self.m})")
        elif self.family not in SUPPORTED or self.rank not in SUPPORTED[self.family]:
            raise UnsupportedType(f"unsupported Coxeter type {self}")

    def __str__(self):
        return f"I2({self.m})" if self.family == "I2" else f"{self.family}{self.rank}"

    def degrees(self) -> list[int]:
        """Degrees of the basic invariants."""
        n = self.rank
        if self.family == "A":
            return list(range(2, n + 2))
        if self.family == "B":
            return [2 * i for i in range(1, n + 1)]
        if self.family == "D":
            return [2 * i for i in range(1, n)] + [n]
        return [2, self.m]


# concrete models --------------------------------------------------------------
# Each model returns (identity, generators, compose) with compose(a, b) = a o b.


def _perm_model(n):
    ident = tuple(range(n + 1))
    gens = []
    for i in range(n):
        g = list(ident)
        g[i], g[i + 1] = g[i + 1], g[i]
        gens.append(tuple(g))
    return ident, gens, lambda a, b: tuple(a[x] for x in b)


def _signed_apply(a, x):
    v = a[abs(x) - 1]
    return v if x > 0 else -v


def _signed_compose(a, b):
    return tuple(_signed_apply(a, x) for x in b)


def _signed_transpositions(n):
    ident = tuple(range(1, n + 1))
    gens = []
    for i in range(n - 1):
        g = list(ident)
        g[i], g[i + 1] = g[i + 1], g[i]
        gens.append(tuple(g))
    return ident, gens


def _typeB_model(n):
    ident, gens = _signed_transpositions(n)
    last = list(ident)
    last[-1] = -n
    return ident, gens + [tuple(last)], _signed_compose


def _typeD_model(n):
    ident, gens = _signed_transpositions(n)
    last = list(ident)
    last[-2], last[-1] = -n, -(n - 1)
    return ident, gens + [tuple(last)], _signed_compose


def _dihedral_model(m):
    # (k, e) acts on Z/m as x -> e*x + k
    def compose(a, b):
        return ((a[1] * b[0] + a[0]) % m, a[1] * b[1])

    return (0, 1), [(0, -1), (1, -1)], compose


def _model(t: CoxType):
    if t.family == "A":
        return _perm_model(t.rank)
    if t.family == "B":
        return _typeB_model(t.rank)
    if t.family == "D":
        return _typeD_model(t.rank)
    return _dihedral_model(t.m)


# the group ----------------------------------------------------------------------


def bits(gens) -> int:
    mask = 0
    for s in gens:
        mask |= 1 << s
    return mask


def members(mask: int) -> list[int]:
    out, s = [], 0
    while mask:
        if mask & 1:
            out.append(s)
        mask >>= 1
        s += 1
    return out


class CoxGroup:
    """Immutable finite Coxeter group with precomputed tables."""

    def __init__(self, ctype: CoxType):
        ident, gens, compose = _model(ctype)
        self.type = ctype
        self.rank = len(gens)
        self.all_gens = (1 << self.rank) - 1
        elems = [ident]
        index = {ident: 0}
        length = [0]
        queue = deque([0])
        while queue:
            w = queue.popleft()
            for g in gens:
                x = compose(elems[w], g)
                if x not in index:
                    index[x] = len(elems)
                    elems.append(x)
                    length.append(length[w] + 1)
                    queue.append(len(elems) - 1)
        self.model = elems
        self.order = len(elems)
        self.length = length
        self.gen_elem = [index[g] for g in gens]
        self.mult = [[index[compose(a, b)] for b in elems] for a in elems]
        self.inverse = [row.index(0) for row in self.mult]
        self.rmul = [[self.mult[w][g] for g in self.gen_elem] for w in range(self.order)]
        self.lmul = [[self.mult[g][w] for w in range(self.order)] for g in self.gen_elem]
        self._rw: dict[int, list[int]] = {}
        self._parabolic: dict[int, list[int]] = {}

    identity = 0

    @property
    def n_elems(self):
        return self.order

    @property
    def gen_count(self):
        return self.rank

    # basic operations -------------------------------------------------------------

    def mul(self, u: int, v: int) -> int:
        return self.mult[u][v]

    def inv(self, w: int) -> int:
        return self.inverse[w]

    def conj(self, w: int, x: int) -> int:
        """w x w^-1."""
        return self.mult[self.mult[w][x]][self.inverse[w]]

    def right_descents(self, w: int) -> int:
        lw = self.length[w]
        return bits(s for s in range(self.rank) if self.length[self.rmul[w][s]] < lw)

    def left_descents(self, w: int) -> int:
        lw = self.length[w]
        return bits(s for s in range(self.rank) if self.length[self.lmul[s][w]] < lw)

    def reduced_word(self, w: int) -> list[int]:
        """Lexicographically least reduced word (generator indices)."""
        if w not in self._rw:
            word, x = [], w
            while x:
                lx = self.length[x]
                s = next(s for s in range(self.rank) if self.length[self.lmul[s][x]] < lx)
                word.append(s)
                x = self.lmul[s][x]
            self._rw[w] = word
        return list(self._rw[w])

    def from_word(self, word) -> int:
        w = 0
        for s in word:
            w = self.rmul[w][s]
        return w

    def gen_of(self, w: int):
        """The generator index s with w = s, or None."""
        try:
            return self.gen_elem.index(w)
        except ValueError:
            return None

    # parabolic machinery ----------------------------------------------------------

    def parabolic(self, mask: int) -> list[int]:
        """Elements of W_I, sorted by (length, index)."""
        if mask not in self._parabolic:
            gens = members(mask)
            seen = {0}
            queue = deque([0])
            while queue:
                w = queue.popleft()
                for s in gens:
                    x = self.rmul[w][s]
                    if x not in seen:
                        seen.add(x)
                        queue.append(x)
            self._parabolic[mask] = sorted(seen, key=lambda w: (self.length[w], w))
        return self._parabolic[mask]

    @cached_property
    def _parabolic_sets(self):
        return {}

    def in_parabolic(self, w: int, mask: int) -> bool:
        sets = self._parabolic_sets
        if mask not in sets:
            sets[mask] = frozenset(self.parabolic(mask))
        return w in sets[mask]

    def longest(self, mask: int) -> int:
        return self.parabolic(mask)[-1]

    def coset_min_rep(self, mask: int, w: int, side: str = "right"):
        """Minimal representative of W_I w (side='right') or w W_I (side='left').

        Returns (d, u) with w = u*d (right) or w = d*u (left), u in W_I and
        lengths adding.
        """
        gens = members(mask)
        d = w
        if side == "right":
            while True:
                ld = self.length[d]
                s = next((s for s in gens if self.length[self.lmul[s][d]] < ld), None)
                if s is None:
                    break
                d = self.lmul[s][d]
            u = self.mult[w][self.inverse[d]]
        elif side == "left":
            while True:
                ld = self.length[d]
                s = next((s for s in gens if self.length[self.rmul[d][s]] < ld), None)
                if s is None:
                    break
                d = self.rmul[d][s]
            u = self.mult[self.inverse[d]][w]
        else:
            raise ValueError(f"side must be 'left' or 'right', not {side!r}")
        return d, u

    def dist_reps(self, imask: int, jmask: int) -> list[int]:
        """D_{IJ}: elements with no left descent in I and no right descent in J."""
        return [
            w
            for w in sorted(range(self.order), key=lambda w: (self.length[w], w))
            if not (self.left_descents(w) & imask) and not (self.right_descents(w) & jmask)
        ]

    def right_divides(self, w1: int, w2: int) -> bool:
        """w1 <=_r w2: w2 = w'' w1 with l(w'') + l(w1) = l(w2)."""
        x = self.mult[w2][self.inverse[w1]]
        return self.length[x] + self.length[w1] == self.length[w2]

    def conj_gens(self, w: int, mask: int) -> int:
        """{s : w^-1 s w is a generator} image: returns the mask of w^-1 I w ∩ S."""
        out = 0
        winv = self.inverse[w]
        for s in members(mask):
            g = self.gen_of(self.conj(winv, self.gen_elem[s]))
            if g is not None:
                out |= 1 << g
        return out

    def coxeter_matrix(self) -> list[list[int]]:
        out = [[1] * self.rank for _ in range(self.rank)]
        for s in range(self.rank):
            for t in range(self.rank):
                if s != t:
                    st = self.mult[self.gen_elem[s]][self.gen_elem[t]]
                    x, k = st, 1
                    while x:
                        x = self.mult[x][st]
                        k += 1
                    out[s][t] = k
        return out

    def __repr__(self):
        return f"CoxGroup({self.type}, order={self.order})"


_CACHE: dict[str, CoxGroup] = {}


def build_group(t: CoxType | str) -> CoxGroup:
    if isinstance(t, str):
        t = CoxType.parse(t)
    t.check()
    key = str(t)
    if key not in _CACHE:
        _CACHE[key] = CoxGroup(t)
    return _CACHE[key]


def poincare_counts(t: CoxType) -> list[int]:
    """Coefficients of prod_i (1 + q + ... + q^(d_i - 1))."""
    poly = [1]
    for d in t.degrees():
        new = [0] * (len(poly) + d - 1)
        for i, c in enumerate(poly):
            for k in range(d):
                new[i + k] += c
        poly = new
    return poly


def word_str(word) -> str:
    """1-based display form, e.g. [0, 1] -> 's1s2'; the empty word is 'e'."""
    return "".join(f"s{s + 1}" for s in word) or "e"
