"""Exact scalar arithmetic for lattice and window computations.

An exact scalar is a finite rational combination of *monomials*.  A monomial
is a product of prime powers with fractional exponents in (0, 1) (for example
``5^(1/2)`` or ``2^(2/3)``) optionally multiplied by an integer power of a
single named constant (``pi`` or ``e``).  Distinct monomials of this kind are
linearly independent over the rationals, so the representation is a normal
form: equality is a dictionary comparison and a nonzero value stays provably
nonzero, which makes sign determination by interval refinement terminate.

A scalar may instead carry a plain float; float scalars are contagious and
compare with a global tolerance.  Exact mode is authoritative everywhere.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

from .ratmath import factorize, iroot, solve

Rad = tuple[tuple[int, Fraction], ...]
Sym = tuple[tuple[str, int], ...]
Mono = tuple[Rad, Sym]

_UNIT: Mono = ((), ())
_DIGITS_LADDER = (12, 24, 48, 96, 192, 384, 768, 1536)

FLOAT_EPS = 1e-9


def set_float_tolerance(eps: float) -> None:
    global FLOAT_EPS
    if eps <= 0:
        raise ValueError("tolerance must be positive")
    FLOAT_EPS = eps


class ExactnessError(ArithmeticError):
    """Raised when an operation cannot be carried out exactly."""


def _mono_mul(a: Mono, b: Mono) -> tuple[Mono, Fraction]:
    """Product of two monomials, returning (monomial, rational carry)."""
    carry = Fraction(1)
    exps: dict[int, Fraction] = dict(a[0])
    for p, e in b[0]:
        exps[p] = exps.get(p, Fraction(0)) + e
    rad = []
    for p in sorted(exps):
        e = exps[p]
        k = e.numerator // e.denominator
        e -= k
        if k:
            carry *= Fraction(p) ** k
        if e:
            rad.append((p, e))
    syms: dict[str, int] = dict(a[1])
    for s, k in b[1]:
        syms[s] = syms.get(s, 0) + k
    sym = tuple((s, syms[s]) for s in sorted(syms) if syms[s])
    return (tuple(rad), sym), carry


def _mono_inv(m: Mono) -> tuple[Mono, Fraction]:
    carry = Fraction(1)
    rad = []
    for p, e in m[0]:
        # p^-e = p^(1-e) / p
        carry /= p
        rad.append((p, 1 - e))
    sym = tuple((s, -k) for s, k in m[1])
    return (tuple(rad), sym), carry


# ---------------------------------------------------------------------------
# Interval enclosures of monomials, cached per precision


_ENCLOSURES: dict[tuple, tuple[Fraction, Fraction]] = {}


def _pow_bounds(p: int, e: Fraction, digits: int) -> tuple[Fraction, Fraction]:
    key = ("pow", p, e, digits)
    if key not in _ENCLOSURES:
        scale = 10 ** digits
        r = iroot(p ** e.numerator * scale ** e.denominator, e.denominator)
        _ENCLOSURES[key] = (Fraction(r, scale), Fraction(r + 1, scale))
    return _ENCLOSURES[key]


def _atan_inv_scaled(x: int, scale: int) -> tuple[int, int]:
    total = 0
    err = 0
    k = 0
    while True:
        t = scale // ((2 * k + 1) * x ** (2 * k + 1))
        if t == 0:
            err += 1
            break
        total += -t if k % 2 else t
        err += 1
        k += 1
    return total - err, total + err


def _const_bounds(name: str, digits: int) -> tuple[Fraction, Fraction]:
    key = ("const", name, digits)
    if key in _ENCLOSURES:
        return _ENCLOSURES[key]
    scale = 10 ** (digits + 4)
    if name == "pi":
        lo5, hi5 = _atan_inv_scaled(5, scale)
        lo239, hi239 = _atan_inv_scaled(239, scale)
        lo, hi = 16 * lo5 - 4 * hi239, 16 * hi5 - 4 * lo239
    elif name == "e":
        total, term, k = 0, scale, 0
        while term:
            total += term
            k += 1
            term //= k
        lo, hi = total - k, total + k + 2
    else:
        raise ValueError(f"unknown constant {name!r}")
    out = (Fraction(lo, scale), Fraction(hi, scale))
    _ENCLOSURES[key] = out
    return out


def _mono_bounds(m: Mono, digits: int) -> tuple[Fraction, Fraction]:
    key = (m, digits)
    if key in _ENCLOSURES:
        return _ENCLOSURES[key]
    lo, hi = Fraction(1), Fraction(1)
    for p, e in m[0]:
        plo, phi = _pow_bounds(p, e, digits)
        lo, hi = lo * plo, hi * phi
    for s, k in m[1]:
        clo, chi = _const_bounds(s, digits)
        if k > 0:
            lo, hi = lo * clo ** k, hi * chi ** k
        else:
            lo, hi = lo / chi ** (-k), hi / clo ** (-k)
    _ENCLOSURES[key] = (lo, hi)
    return lo, hi


_MONO_INT: dict[tuple, tuple[int, int]] = {}


def _mono_int_bounds(m: Mono, digits: int) -> tuple[int, int]:
    """Integer enclosure of a monomial at scale 10**digits."""
    key = (m, digits)
    out = _MONO_INT.get(key)
    if out is None:
        lo, hi = _mono_bounds(m, digits)
        scale = 10 ** digits
        out = (
            (lo.numerator * scale) // lo.denominator,
            -((-hi.numerator * scale) // hi.denominator),
        )
        _MONO_INT[key] = out
    return out


Number = Union[int, Fraction, "Scalar"]


class Scalar:
    __slots__ = ("_terms", "_float", "_hash")

    def __init__(self, value: int | float | Fraction = 0):
        if isinstance(value, float):
            self._terms = None
            self._float = value
        else:
            v = Fraction(value)
            self._terms = {_UNIT: v} if v else {}
            self._float = None
        self._hash = None

    # -- constructors -------------------------------------------------

    @classmethod
    def _make(cls, terms: dict[Mono, Fraction]) -> "Scalar":
        s = cls.__new__(cls)
        s._terms = {m: c for m, c in terms.items() if c}
        s._float = None
        s._hash = None
        symbols = {name for m in s._terms for name, _ in m[1]}
        if len(symbols) > 1:
            raise ExactnessError(f"cannot mix constants {sorted(symbols)} in one value")
        return s

    @classmethod
    def from_float(cls, value: float) -> "Scalar":
        return cls(float(value))

    @classmethod
    def rational(cls, num: int, den: int = 1) -> "Scalar":
        return cls(Fraction(num, den))

    @classmethod
    def root(cls, radicand: int | Fraction, index: int) -> "Scalar":
        """The positive real ``radicand ** (1/index)``."""
        if index < 1:
            raise ValueError("index must be >= 1")
        radicand = Fraction(radicand)
        if radicand <= 0:
            raise ValueError("radicand must be positive")
        if index == 1:
            return cls(radicand)
        terms = {_UNIT: Fraction(1)}
        out = cls._make(terms)
        for n, top in ((radicand.numerator, True), (radicand.denominator, False)):
            exps: dict[int, Fraction] = {}
            carry = Fraction(1)
            for p, k in factorize(n).items():
                e = Fraction(k, index)
                w = e.numerator // e.denominator
                e -= w
                carry *= Fraction(p) ** w
                if e:
                    exps[p] = e
            mono: Mono = (tuple(sorted(exps.items())), ())
            piece = cls._make({mono: carry})
            out = out * piece if top else out / piece
        return out

    @classmethod
    def sqrt(cls, radicand: int | Fraction) -> "Scalar":
        return cls.root(radicand, 2)

    @classmethod
    def const(cls, name: str) -> "Scalar":
        if name not in ("pi", "e"):
            raise ValueError(f"unknown constant {name!r}")
        return cls._make({((), ((name, 1),)): Fraction(1)})

    @classmethod
    def of(cls, value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, float):
            return cls.from_float(value)
        return cls(Fraction(value))

    # -- predicates ----------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self._terms is not None

    @property
    def is_rational(self) -> bool:
        return self._terms is not None and all(m == _UNIT for m in self._terms)

    @property
    def is_algebraic(self) -> bool:
        return self._terms is not None and all(not m[1] for m in self._terms)

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ExactnessError(f"{self} is not rational")
        return self._terms.get(_UNIT, Fraction(0))

    def is_zero(self) -> bool:
        if self._terms is not None:
            return not self._terms
        return abs(self._float) <= FLOAT_EPS

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other) -> "Scalar | None":
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self._terms is None or o._terms is None:
            return Scalar.from_float(self.to_float() + o.to_float())
        terms = dict(self._terms)
        for m, c in o._terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return Scalar._make(terms)

    __radd__ = __add__

    def __neg__(self):
        if self._terms is None:
            return Scalar.from_float(-self._float)
        return Scalar._make({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self._terms is None or o._terms is None:
            return Scalar.from_float(self.to_float() * o.to_float())
        terms: dict[Mono, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in o._terms.items():
                m, carry = _mono_mul(m1, m2)
                terms[m] = terms.get(m, Fraction(0)) + c1 * c2 * carry
        return Scalar._make(terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self._terms is None or o._terms is None:
            return Scalar.from_float(self.to_float() / o.to_float())
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = Scalar(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "Scalar":
        if self._terms is None:
            return Scalar.from_float(1.0 / self._float)
        if not self._terms:
            raise ZeroDivisionError("scalar division by zero")
        if len(self._terms) == 1:
            ((m, c),) = self._terms.items()
            mi, carry = _mono_inv(m)
            return Scalar._make({mi: carry / c})
        if not self.is_algebraic:
            raise ExactnessError("cannot invert a sum involving pi or e exactly")
        return self._algebraic_inverse()

    def _algebraic_inverse(self) -> "Scalar":
        orders: dict[int, int] = {}
        for m in self._terms:
            for p, e in m[0]:
                orders[p] = math.lcm(orders.get(p, 1), e.denominator)
        primes = sorted(orders)
        dim = math.prod(orders[p] for p in primes)
        if dim > 256:
            raise ExactnessError("radical extension too large to invert")
        basis: list[Mono] = []
        index: dict[Mono, int] = {}

        def build(i: int, acc: list[tuple[int, Fraction]]):
            if i == len(primes):
                mono: Mono = (tuple(acc), ())
                index[mono] = len(basis)
                basis.append(mono)
                return
            p = primes[i]
            for a in range(orders[p]):
                build(i + 1, acc + ([(p, Fraction(a, orders[p]))] if a else []))

        build(0, [])
        mat = [[Fraction(0)] * dim for _ in range(dim)]
        for j, bj in enumerate(basis):
            for m, c in self._terms.items():
                mm, carry = _mono_mul(m, bj)
                mat[index[mm]][j] += c * carry
        rhs = [Fraction(0)] * dim
        rhs[index[_UNIT]] = Fraction(1)
        sol = solve(mat, rhs)
        if sol is None:
            raise ZeroDivisionError("scalar is not invertible")
        return Scalar._make({basis[i]: sol[i] for i in range(dim)})

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- order, sign, floor ---------------------------------------------

    def _bounds_scaled(self, digits: int) -> tuple[int, int]:
        """Integer enclosure at scale 10**digits; rigorous and allocation-light."""
        lo = 0
        hi = 0
        for m, c in self._terms.items():
            mlo, mhi = _mono_int_bounds(m, digits)
            p, q = c.numerator, c.denominator
            if p >= 0:
                a, b = p * mlo, p * mhi
            else:
                a, b = p * mhi, p * mlo
            lo += a // q
            hi += -((-b) // q)
        return lo, hi

    def bounds(self, digits: int) -> tuple[Fraction, Fraction]:
        """A rigorous rational enclosure, roughly ``digits`` decimals wide."""
        if self._terms is None:
            v = Fraction(self._float)
            return v, v
        lo, hi = self._bounds_scaled(digits)
        scale = 10 ** digits
        return Fraction(lo, scale), Fraction(hi, scale)

    def sign(self) -> int:
        if self._terms is None:
            if abs(self._float) <= FLOAT_EPS:
                return 0
            return 1 if self._float > 0 else -1
        if not self._terms:
            return 0
        if len(self._terms) == 1:
            ((_, c),) = self._terms.items()
            return 1 if c > 0 else -1
        for digits in _DIGITS_LADDER:
            lo, hi = self._bounds_scaled(digits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
        raise ExactnessError(f"sign undecided for {self!r}")

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self._terms is not None and o._terms is not None:
            return self._terms == o._terms
        return abs(self.to_float() - o.to_float()) <= FLOAT_EPS

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self == o:
            return False
        return (self - o).sign() < 0

    def __le__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self == o or (self - o).sign() < 0

    def __gt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o.__lt__(self)

    def __ge__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o.__le__(self)

    def __hash__(self):
        if self._hash is None:
            if self._terms is None:
                self._hash = hash(("float", self._float))
            elif self.is_rational:
                self._hash = hash(self._terms.get(_UNIT, Fraction(0)))
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def floor(self) -> int:
        if self._terms is None:
            return math.floor(self._float)
        if self.is_rational:
            return math.floor(self.as_fraction())
        for digits in _DIGITS_LADDER:
            lo, hi = self._bounds_scaled(digits)
            scale = 10 ** digits
            flo, fhi = lo // scale, hi // scale
            if flo == fhi:
                return flo
        raise ExactnessError(f"floor undecided for {self!r}")

    __floor__ = floor

    def to_float(self) -> float:
        if self._terms is None:
            return self._float
        lo, hi = self.bounds(18)
        return float((lo + hi) / 2)

    __float__ = to_float

    # -- presentation & serialization -----------------------------------

    def __repr__(self):
        if self._terms is None:
            return f"Scalar.from_float({self._float!r})"
        if not self._terms:
            return "0"
        parts = []
        for m, c in sorted(self._terms.items(), key=lambda kv: (kv[0] != _UNIT, kv[0])):
            factors = [str(c)] if (c != 1 or m == _UNIT) else []
            for p, e in m[0]:
                factors.append(f"{p}^({e})")
            for s, k in m[1]:
                factors.append(s if k == 1 else f"{s}^{k}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def _as_quad(self) -> tuple[int, Fraction, Fraction] | None:
        """Decompose as a + b*sqrt(D) when possible (D squarefree > 1)."""
        if self._terms is None or not self._terms:
            return None
        a = Fraction(0)
        b = None
        d = None
        for m, c in self._terms.items():
            if m == _UNIT:
                a = c
            elif not m[1] and all(e == Fraction(1, 2) for _, e in m[0]):
                if b is not None:
                    return None
                b = c
                d = math.prod(p for p, _ in m[0])
            else:
                return None
        if b is None:
            return None
        return d, a, b

    def to_obj(self):
        if self._terms is None:
            return {"type": "float", "value": self._float}
        if self.is_rational:
            return {"type": "rat", "v": str(self.as_fraction())}
        quad = self._as_quad()
        if quad is not None:
            d, a, b = quad
            return {"type": "quad", "d": d, "a": str(a), "b": str(b)}
        terms = []
        for m, c in sorted(self._terms.items()):
            terms.append(
                {
                    "c": str(c),
                    "rad": [[p, str(e)] for p, e in m[0]],
                    "sym": [[s, k] for s, k in m[1]],
                }
            )
        return {"type": "alg", "terms": terms}

    @classmethod
    def from_obj(cls, obj) -> "Scalar":
        if isinstance(obj, (int, str)):
            return cls(Fraction(obj))
        kind = obj["type"]
        if kind == "float":
            return cls.from_float(obj["value"])
        if kind == "rat":
            return cls(Fraction(obj["v"]))
        if kind == "quad":
            root = cls.sqrt(obj["d"])
            return cls(Fraction(obj["a"])) + cls(Fraction(obj["b"])) * root
        if kind == "alg":
            terms: dict[Mono, Fraction] = {}
            for t in obj["terms"]:
                rad = tuple((int(p), Fraction(e)) for p, e in t["rad"])
                sym = tuple((str(s), int(k)) for s, k in t["sym"])
                terms[(rad, sym)] = Fraction(t["c"])
            return cls._make(terms)
        raise ValueError(f"unknown scalar encoding {kind!r}")


ZERO = Scalar(0)
ONE = Scalar(1)
SQRT5 = Scalar.sqrt(5)
GOLDEN = (ONE + SQRT5) / 2
GOLDEN_CONJ = (ONE - SQRT5) / 2


# ---------------------------------------------------------------------------
# A small expression grammar for CLI flags and window files:
#   atoms: integers, pi, e, golden, sqrt(n), root(n, k)
#   operators: + - * / ^ and parentheses


def parse_scalar(text: str) -> Scalar:
    tokens = _tokenize(text)
    pos = [0]

    def peek():
        return tokens[pos[0]] if pos[0] < len(tokens) else None

    def take(expected=None):
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"bad scalar expression {text!r}")
        pos[0] += 1
        return tok

    def atom() -> Scalar:
        tok = take()
        if tok == "(":
            v = expr()
            take(")")
            return v
        if tok == "-":
            return -atom()
        if isinstance(tok, int):
            return Scalar(tok)
        if tok in ("pi", "e"):
            return Scalar.const(tok)
        if tok == "golden":
            return GOLDEN
        if tok in ("sqrt", "root"):
            take("(")
            args = [expr()]
            while peek() == ",":
                take(",")
                args.append(expr())
            take(")")
            if tok == "sqrt":
                (arg,) = args
                return Scalar.root(arg.as_fraction(), 2)
            base, k = args
            return Scalar.root(base.as_fraction(), int(k.as_fraction()))
        raise ValueError(f"bad token {tok!r} in {text!r}")

    def power() -> Scalar:
        v = atom()
        while peek() == "^":
            take("^")
            e = atom()
            v = v ** int(e.as_fraction())
        return v

    def term() -> Scalar:
        v = power()
        while peek() in ("*", "/"):
            op = take()
            rhs = power()
            v = v * rhs if op == "*" else v / rhs
        return v

    def expr() -> Scalar:
        v = term()
        while peek() in ("+", "-"):
            op = take()
            rhs = term()
            v = v + rhs if op == "+" else v - rhs
        return v

    out = expr()
    if pos[0] != len(tokens):
        raise ValueError(f"trailing input in scalar expression {text!r}")
    return out


def _tokenize(text: str):
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append(int(text[i:j]))
            i = j
        elif ch.isalpha():
            j = i
            while j < len(text) and text[j].isalpha():
                j += 1
            out.append(text[i:j])
            i = j
        elif ch in "+-*/^(),":
            out.append(ch)
            i += 1
        else:
            raise ValueError(f"bad character {ch!r} in scalar expression")
    return out
