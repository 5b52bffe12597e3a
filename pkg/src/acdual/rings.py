"""Exact scalars: integers, rationals and multivariate Laurent polynomials over Z.

Integers and ``fractions.Fraction`` are used as-is.  Laurent polynomials are
instances of :class:`Laurent`; any Laurent polynomial that happens to be a
constant is demoted to a plain ``int``, so ``Laurent`` objects are never
constant and ``x == 1`` behaves as expected throughout.

>>> q = Laurent.var(("q",), 0)
>>> (q - 1) * (q + 1)
q^2 - 1
>>> q * q**-1
1
>>> format_scalar(q**-2 * 3 - q)
{'q^-2': 3, 'q': -1}
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational


class Laurent:
    """Sparse Laurent polynomial: exponent tuple -> nonzero integer."""

    __slots__ = ("names", "terms", "_hash")

    def __init__(self, names: tuple[str, ...], terms: dict):
        self.names = names
        self.terms = terms
        self._hash = None

    @staticmethod
    def var(names, i: int, power: int = 1):
        exps = [0] * len(names)
        exps[i] = power
        return _wrap(tuple(names), {tuple(exps): 1})

    @staticmethod
    def monomial(names, exps, coeff: int = 1):
        return _wrap(tuple(names), {tuple(exps): coeff} if coeff else {})

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Laurent):
            if other.names != self.names:
                raise ValueError(f"mixing Laurent rings {self.names} and {other.names}")
            return other.terms
        if isinstance(other, int):
            return {(0,) * len(self.names): other} if other else {}
        return NotImplemented

    def __add__(self, other):
        t = self._coerce(other)
        if t is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in t.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return _wrap(self.names, out)

    __radd__ = __add__

    def __neg__(self):
        return Laurent(self.names, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        t = self._coerce(other)
        if t is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in t.items():
            v = out.get(e, 0) - c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return _wrap(self.names, out)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return 0
            return Laurent(self.names, {e: c * other for e, c in self.terms.items()})
        t = self._coerce(other)
        if t is NotImplemented:
            return NotImplemented
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in t.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return _wrap(self.names, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self.terms) != 1:
                raise ZeroDivisionError("only monomials are invertible")
            ((e, c),) = self.terms.items()
            if c not in (1, -1):
                raise ZeroDivisionError("monomial coefficient is not a unit")
            return _wrap(self.names, {tuple(x * n for x in e): c if n % 2 else 1})
        out = 1
        for _ in range(n):
            out = out * self
        return out

    def is_unit(self) -> bool:
        return len(self.terms) == 1 and next(iter(self.terms.values())) in (1, -1)

    # comparison -------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Laurent):
            return self.names == other.names and self.terms == other.terms
        return False

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.names, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # evaluation -------------------------------------------------------------

    def evaluate(self, values: dict) -> Fraction:
        vals = [Fraction(values[n]) for n in self.names]
        total = Fraction(0)
        for e, c in self.terms.items():
            m = Fraction(c)
            for v, k in zip(vals, e):
                if k:
                    m *= v ** k
            total += m
        return total

    def __repr__(self):
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = _monomial_str(self.names, e)
            if mono == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")


def _wrap(names, terms):
    if not terms:
        return 0
    if len(terms) == 1:
        ((e, c),) = terms.items()
        if not any(e):
            return c
    return Laurent(names, terms)


def _monomial_str(names, exps) -> str:
    out = []
    for n, k in zip(names, exps):
        if k == 1:
            out.append(n)
        elif k:
            out.append(f"{n}^{k}")
    return "*".join(out) if out else "1"


def is_zero(x) -> bool:
    return not x


def specialize(x, values: dict):
    """Substitute rational values for the Laurent variables of ``x``."""
    if isinstance(x, Laurent):
        return x.evaluate(values)
    return x


# serialization --------------------------------------------------------------


def format_scalar(x):
    """JSON form: decimal string for Z and Q, monomial map for Laurent."""
    if isinstance(x, Laurent):
        return {
            _monomial_str(x.names, e): c
            for e, c in sorted(x.terms.items(), key=lambda kv: kv[0])
        }
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    raise TypeError(f"not a scalar: {x!r}")


def parse_scalar(obj, names: tuple[str, ...] = ()):
    if isinstance(obj, str):
        if "/" in obj:
            f = Fraction(obj)
            return f.numerator if f.denominator == 1 else f
        return int(obj)
    if isinstance(obj, dict):
        terms = {}
        for mono, c in obj.items():
            if not isinstance(c, int) or isinstance(c, bool):
                raise ValueError(f"bad Laurent coefficient {c!r}")
            exps = [0] * len(names)
            if mono != "1":
                for factor in mono.split("*"):
                    name, _, power = factor.partition("^")
                    if name not in names:
                        raise ValueError(f"unknown parameter {name!r}")
                    exps[names.index(name)] += int(power) if power else 1
            e = tuple(exps)
            terms[e] = terms.get(e, 0) + c
        terms = {e: c for e, c in terms.items() if c}
        return _wrap(tuple(names), terms)
    raise ValueError(f"cannot parse scalar {obj!r}")


def as_fraction(x) -> Fraction:
    if isinstance(x, Laurent):
        raise TypeError("Laurent polynomial must be specialized first")
    if isinstance(x, Rational):
        return Fraction(x)
    raise TypeError(f"not a rational scalar: {x!r}")
