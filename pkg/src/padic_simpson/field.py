"""Finite-precision arithmetic in a finite extension K = Q_p[x]/(f).

Elements are stored as ``p**t * sum(c_i * x**i)`` with integer coordinates
``c_i`` in the power basis of ``f``. Because ``f`` is either irreducible mod
``p`` (unramified) or Eisenstein, the power basis is an integral basis and the
valuation is read off coordinate-wise::

    v(sum c_i x^i) = min_i (e * v_p(c_i) + o_i)      (in units of v(pi))

with ``o_i = i`` in the Eisenstein case and ``o_i = 0`` otherwise.  All
internal valuations and precisions are integers counted in powers of the
uniformizer ``pi``; the public ``valuation()``/``precision`` accessors return
rationals normalized by ``v(p) = 1``.

Precision is absolute and tracked per value.  A value carries ``prec`` and is
known modulo ``pi**prec``; every operation computes the worst-case precision
of its result and no value is ever known beyond ``FieldConfig.precision``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import (
    CharacterAdmissibilityError,
    DivisionBelowPrecision,
    ExpDomainError,
    InvalidFieldConfig,
    LogDomainError,
)

MAX_RESIDUE_FIELD = 64


@lru_cache(maxsize=None)
def _pp(p: int, k: int) -> int:
    return p ** k


def vp_int(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _floor_log(k: int, p: int) -> int:
    r = 0
    q = p
    while q <= k:
        q *= p
        r += 1
    return r


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# -- polynomials over F_p (low -> high), used only for config validation ----

def _fp_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a, f, p):
    a = [x % p for x in a]
    a = _fp_trim(a)
    df = len(f) - 1
    inv = pow(f[-1], -1, p)
    while len(a) - 1 >= df and a:
        q = a[-1] * inv % p
        shift = len(a) - 1 - df
        for i, fi in enumerate(f):
            a[shift + i] = (a[shift + i] - q * fi) % p
        a = _fp_trim(a)
    return a


def _fp_mulmod(a, b, f, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _fp_mod(out, f, p)


def _fp_powmod(a, n, f, p):
    result = [1]
    base = _fp_mod(a, f, p)
    while n:
        if n & 1:
            result = _fp_mulmod(result, base, f, p)
        base = _fp_mulmod(base, base, f, p)
        n >>= 1
    return result


def _fp_gcd(a, b, p):
    a, b = _fp_trim([x % p for x in a]), _fp_trim([x % p for x in b])
    while b:
        a, b = b, _fp_mod(a, b, p)
    return a


def _fp_sub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _fp_trim([(x - y) % p for x, y in zip(a, b)])


def irreducible_mod_p(poly: Sequence[int], p: int) -> bool:
    """Rabin's irreducibility test for a monic integer polynomial mod p."""
    f = [c % p for c in poly]
    d = len(f) - 1
    if d == 1:
        return True
    x = [0, 1]
    if _fp_sub(_fp_powmod(x, p ** d, f, p), x, p):
        return False
    for q in range(2, d + 1):
        if d % q == 0 and _is_prime(q):
            h = _fp_sub(_fp_powmod(x, p ** (d // q), f, p), x, p)
            if len(_fp_gcd(f, h, p)) > 1:
                return False
    return True


@dataclass(frozen=True)
class FieldConfig:
    """A finite extension ``Q_p[x]/(f)`` with an absolute precision cap.

    ``poly`` lists the coefficients of the monic defining polynomial from the
    constant term upward; the default ``x`` gives ``K = Q_p``.  ``precision``
    is measured in powers of the uniformizer.
    """

    p: int
    precision: int
    poly: tuple = (0, 1)
    mode: str = "unramified"
    d: int = dc_field(init=False, repr=False, compare=False)
    e: int = dc_field(init=False, repr=False, compare=False)
    offsets: tuple = dc_field(init=False, repr=False, compare=False)

    def __post_init__(self):
        poly = tuple(int(c) for c in self.poly)
        object.__setattr__(self, "poly", poly)
        if not _is_prime(self.p):
            raise InvalidFieldConfig(f"p={self.p} is not prime")
        if self.precision < 4:
            raise InvalidFieldConfig("precision must be at least 4")
        if len(poly) < 2 or poly[-1] != 1:
            raise InvalidFieldConfig("defining polynomial must be monic of degree >= 1")
        d = len(poly) - 1
        if self.mode == "unramified":
            if not irreducible_mod_p(poly, self.p):
                raise InvalidFieldConfig("defining polynomial is not irreducible mod p")
            e, offsets, residue_degree = 1, (0,) * d, d
        elif self.mode == "eisenstein":
            if poly[0] == 0 or vp_int(poly[0], self.p) != 1:
                raise InvalidFieldConfig("constant term must have valuation exactly 1")
            if any(c % self.p for c in poly[1:-1]):
                raise InvalidFieldConfig("non-leading coefficients must be divisible by p")
            e, offsets, residue_degree = d, tuple(range(d)), 1
        else:
            raise InvalidFieldConfig(f"unknown ramification mode {self.mode!r}")
        if self.p ** residue_degree > MAX_RESIDUE_FIELD:
            raise InvalidFieldConfig(
                f"residue field of size {self.p ** residue_degree} exceeds {MAX_RESIDUE_FIELD}")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "offsets", offsets)

    # -- constructors -----------------------------------------------------

    @property
    def residue_degree(self) -> int:
        return self.d if self.mode == "unramified" else 1

    @property
    def zero(self) -> "Scalar":
        return _zero(self, self.precision)

    @property
    def one(self) -> "Scalar":
        return self(1)

    def __call__(self, value, prec: int | None = None) -> "Scalar":
        """Embed an int, Fraction, ``"a/b"`` string, Scalar or coordinate list."""
        if isinstance(value, Scalar):
            s = value
        elif isinstance(value, bool):
            raise TypeError("bool is not a field element")
        elif isinstance(value, int):
            s = _make(self, [value] + [0] * (self.d - 1), 0, self.precision)
        elif isinstance(value, (Fraction, str)):
            s = _from_fractions(self, [Fraction(value)] + [Fraction(0)] * (self.d - 1),
                                self.precision)
        elif isinstance(value, (list, tuple)):
            if len(value) != self.d:
                raise ValueError(f"expected {self.d} coordinates, got {len(value)}")
            s = _from_fractions(self, [Fraction(v) for v in value], self.precision)
        else:
            raise TypeError(f"cannot embed {type(value).__name__} into K")
        if prec is not None:
            s = s.add_bigoh(prec)
        return s

    def uniformizer(self) -> "Scalar":
        return _uniformizer(self)

    def residue_lifts(self) -> list["Scalar"]:
        """Exact representatives of every residue class of O_K / pi."""
        if self.mode == "eisenstein":
            return [self(a) for a in range(self.p)]
        out = []
        for n in range(self.p ** self.d):
            coords = []
            for _ in range(self.d):
                coords.append(n % self.p)
                n //= self.p
            out.append(_make(self, coords, 0, self.precision))
        return out

    def from_zp(self, z: "ZpElement") -> "Scalar":
        if z.p != self.p:
            raise ValueError("Z_p element belongs to a different prime")
        return self(z.value, prec=self.e * z.precision)


# -- low level constructors -------------------------------------------------

def _zero(F: FieldConfig, prec: int) -> "Scalar":
    s = object.__new__(Scalar)
    s.field = F
    s.c = (0,) * F.d
    s.t = 0
    s.prec = min(prec, F.precision)
    s._v = s.prec
    return s


def _make(F: FieldConfig, coeffs, t: int, prec: int) -> "Scalar":
    N = F.precision
    if prec > N:
        prec = N
    p = F.p
    if F.d == 1:
        c = coeffs[0]
        k = prec - t
        if k <= 0 or c == 0:
            return _zero(F, prec)
        c %= _pp(p, k)
        if c == 0:
            return _zero(F, prec)
        while c % p == 0:
            c //= p
            t += 1
        s = object.__new__(Scalar)
        s.field = F
        s.c = (c,)
        s.t = t
        s.prec = prec
        s._v = t
        return s
    e = F.e
    off = F.offsets
    out = []
    nonzero = False
    for i, ci in enumerate(coeffs):
        if ci:
            k = -((off[i] - prec) // e) - t
            if k <= 0:
                ci = 0
            else:
                ci %= _pp(p, k)
                if ci:
                    nonzero = True
        out.append(ci)
    if not nonzero:
        return _zero(F, prec)
    while all(ci % p == 0 for ci in out):
        out = [ci // p for ci in out]
        t += 1
    v = min(e * (t + vp_int(ci, p)) + off[i] for i, ci in enumerate(out) if ci)
    s = object.__new__(Scalar)
    s.field = F
    s.c = tuple(out)
    s.t = t
    s.prec = prec
    s._v = v
    return s


def _from_fractions(F: FieldConfig, qs: Sequence[Fraction], prec: int) -> "Scalar":
    p = F.p
    nonzero = [q for q in qs if q]
    if not nonzero:
        return _zero(F, prec)
    s = max(vp_int(q.denominator, p) if q.denominator % p == 0 else 0 for q in nonzero)
    t = -s
    prec = min(prec, F.precision)
    K = max(1, -(-prec // F.e) - t + 1)
    mod = _pp(p, K)
    coords = []
    for q in qs:
        if not q:
            coords.append(0)
            continue
        den = q.denominator
        dv = vp_int(den, p) if den % p == 0 else 0
        unit = den // _pp(p, dv)
        coords.append(q.numerator * _pp(p, s - dv) * pow(unit, -1, mod) % mod)
    return _make(F, coords, t, prec)


def _polymulmod(a, b, f):
    d = len(f) - 1
    prod = [0] * (2 * d - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] += ai * bj
    for k in range(2 * d - 2, d - 1, -1):
        ck = prod[k]
        if ck:
            prod[k] = 0
            base = k - d
            for i in range(d):
                if f[i]:
                    prod[base + i] -= ck * f[i]
    return prod[:d]


def _rational_inverse(F: FieldConfig, coords) -> list[Fraction]:
    """Exact inverse of sum(c_i x^i) in Q[x]/(f) by solving M y = e_0."""
    d = F.d
    cols = []
    cur = list(coords)
    for _ in range(d):
        cols.append([Fraction(x) for x in cur])
        cur = _polymulmod(cur, [0, 1] + [0] * (d - 2), F.poly)
    A = [[cols[j][i] for j in range(d)] + [Fraction(1 if i == 0 else 0)] for i in range(d)]
    for col in range(d):
        piv = next(r for r in range(col, d) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        pv = A[col][col]
        A[col] = [x / pv for x in A[col]]
        for r in range(d):
            if r != col and A[r][col] != 0:
                m = A[r][col]
                A[r] = [x - m * y for x, y in zip(A[r], A[col])]
    return [A[i][d] for i in range(d)]


@lru_cache(maxsize=None)
def _uniformizer(F: FieldConfig) -> "Scalar":
    if F.mode == "unramified":
        return F(F.p)
    if F.d == 1:
        return F(-F.poly[0])
    return _make(F, [0, 1] + [0] * (F.d - 2), 0, F.precision)


@lru_cache(maxsize=None)
def _uniformizer_inverse_coords(F: FieldConfig) -> tuple:
    if F.d == 1:
        return (Fraction(-1, F.poly[0]),)
    return tuple(_rational_inverse(F, [0, 1] + [0] * (F.d - 2)))


@lru_cache(maxsize=None)
def _widened(F: FieldConfig, extra: int) -> FieldConfig:
    return FieldConfig(F.p, F.precision + extra, F.poly, F.mode)


def widened(F: FieldConfig, extra: int) -> FieldConfig:
    """The same field with ``extra`` more digits of room."""
    return _widened(F, extra)


def rebase(s: "Scalar", F: FieldConfig, prec: int | None = None) -> "Scalar":
    """The stored digits of ``s`` as an element of the compatible field ``F``."""
    return _make(F, s.c, s.t, s.prec if prec is None else prec)


def pi_power_coords(F: FieldConfig, k: int) -> list[Fraction]:
    """Exact rational coordinates of ``pi**k``."""
    if F.mode == "unramified":
        return [Fraction(F.p) ** k] + [Fraction(0)] * (F.d - 1)
    if F.d == 1:
        return [Fraction(-F.poly[0]) ** k]
    step = [Fraction(0), Fraction(1)] + [Fraction(0)] * (F.d - 2) if k >= 0 else list(_uniformizer_inverse_coords(F))
    out = [Fraction(1)] + [Fraction(0)] * (F.d - 1)
    for _ in range(abs(k)):
        out = _polymulmod(out, step, F.poly)
    return out


def rational_mul_coords(F: FieldConfig, a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    return _polymulmod(list(a), list(b), F.poly)


class Scalar:
    """An element of K known modulo ``pi**prec``.

    Equality is congruence at the smaller of the two known precisions, so
    ``==`` is not transitive and scalars are unhashable.  Use ``key()`` for
    deterministic sorting.
    """

    __slots__ = ("field", "c", "t", "prec", "_v")
    __hash__ = None

    # -- inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.c)

    @property
    def vpi(self) -> int:
        """Valuation in powers of pi (the precision for values known to be 0)."""
        return self._v

    def valuation(self):
        if self.is_zero():
            return math.inf
        return Fraction(self._v, self.field.e)

    @property
    def precision(self) -> Fraction:
        return Fraction(self.prec, self.field.e)

    def is_unit(self) -> bool:
        return not self.is_zero() and self._v == 0

    def residue(self):
        """Reduction mod pi of an integral element (int or coordinate tuple)."""
        if self._v < 0 and not self.is_zero():
            raise ValueError("residue of a non-integral element")
        F = self.field
        if self.is_zero() or self.t > 0 or self._v > 0:
            return 0 if F.mode == "eisenstein" or F.d == 1 else (0,) * F.d
        p = F.p
        if F.mode == "eisenstein" or F.d == 1:
            return self.c[0] % p
        return tuple(ci % p for ci in self.c)

    def key(self, prec: int | None = None):
        """Canonical tuple for ordering, optionally after truncation."""
        s = self if prec is None else self.add_bigoh(prec)
        if s.is_zero():
            return (1, 0, ())
        return (0, s.t, s.c)

    # -- precision manipulation ------------------------------------------

    def add_bigoh(self, prec: int) -> "Scalar":
        """Forget everything beyond ``pi**prec``."""
        if prec >= self.prec:
            return self
        return _make(self.field, self.c, self.t, prec)

    def lift_exact(self) -> "Scalar":
        """Same digits, but treated as known to the full cap."""
        return _make(self.field, self.c, self.t, self.field.precision)

    def shift(self, k: int) -> "Scalar":
        """Exact multiplication by ``pi**k``."""
        F = self.field
        if k == 0:
            return self
        if self.is_zero():
            return _zero(F, self.prec + k)
        if F.mode == "unramified":
            return _make(F, self.c, self.t + k, self.prec + k)
        if F.d == 1:
            pi = Fraction(-F.poly[0])
            q = Fraction(self.c[0]) * pi ** k
            return _from_fractions(F, [q * Fraction(F.p) ** self.t], self.prec + k)
        if k > 0:
            coords = list(self.c)
            xk = [0, 1] + [0] * (F.d - 2)
            for _ in range(k):
                coords = _polymulmod(coords, xk, F.poly)
            return _make(F, coords, self.t, self.prec + k)
        inv = _uniformizer_inverse_coords(F)
        coords = [Fraction(c) for c in self.c]
        for _ in range(-k):
            coords = _polymulmod(coords, inv, F.poly)
        scale = Fraction(F.p) ** self.t
        return _from_fractions(F, [c * scale for c in coords], self.prec + k)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise ValueError("scalars live in different fields")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        F = self.field
        prec = min(self.prec, other.prec)
        ta, tb = self.t, other.t
        if ta == tb:
            coeffs = [x + y for x, y in zip(self.c, other.c)]
            t = ta
        elif ta < tb:
            m = _pp(F.p, tb - ta)
            coeffs = [x + y * m for x, y in zip(self.c, other.c)]
            t = ta
        else:
            m = _pp(F.p, ta - tb)
            coeffs = [x * m + y for x, y in zip(self.c, other.c)]
            t = tb
        return _make(F, coeffs, t, prec)

    __radd__ = __add__

    def __neg__(self):
        return _make(self.field, [-x for x in self.c], self.t, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return self.mul_int(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        F = self.field
        prec = min(self.prec + other._v, other.prec + self._v)
        if self.is_zero() or other.is_zero():
            return _zero(F, prec)
        if F.d == 1:
            return _make(F, [self.c[0] * other.c[0]], self.t + other.t, prec)
        return _make(F, _polymulmod(self.c, other.c, F.poly), self.t + other.t, prec)

    __rmul__ = __mul__

    def mul_int(self, k: int) -> "Scalar":
        """Multiplication by an exact integer."""
        F = self.field
        if k == 0:
            return _zero(F, F.precision)
        s = vp_int(k, F.p)
        return _make(F, [x * k for x in self.c], self.t, self.prec + F.e * s)

    def div_int(self, k: int) -> "Scalar":
        """Division by an exact nonzero integer; loses ``v_p(k)`` digits."""
        F = self.field
        if k == 0:
            raise ZeroDivisionError("division by the integer 0")
        s = vp_int(k, F.p)
        unit = k // _pp(F.p, s)
        prec = self.prec - F.e * s
        if self.is_zero():
            return _zero(F, prec)
        t = self.t - s
        K = max(1, -(-prec // F.e) - t + 1)
        mod = _pp(F.p, K)
        inv = pow(unit, -1, mod)
        return _make(F, [x * inv % mod for x in self.c], t, prec)

    def inverse(self) -> "Scalar":
        F = self.field
        if self.is_zero():
            raise DivisionBelowPrecision("inverse of a value indistinguishable from 0")
        v = self._v
        prec = min(self.prec - 2 * v, F.precision)
        if F.d == 1:
            t = -self.t
            K = max(1, prec - t + 1)
            return _make(F, [pow(self.c[0], -1, _pp(F.p, K))], t, prec)
        fr = _rational_inverse(F, self.c)
        r = _from_fractions(F, fr, prec + F.e * self.t + 1)
        return _make(F, r.c, r.t - self.t, prec)

    def __truediv__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return self.div_int(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    # -- display ----------------------------------------------------------

    def expansion(self) -> list[tuple[int, object]]:
        """Nonzero digits ``(k, digit)`` of the pi-adic expansion below ``prec``."""
        if self.is_zero():
            return []
        F = self.field
        v = self._v
        x = self
        if v < 0:
            # shifting up by -v needs room above the cap
            W = _widened(F, -v)
            x = W([c * Fraction(F.p) ** self.t for c in self.c], prec=self.prec)
            F = W
        x = x.shift(-v)
        out = []
        for k in range(v, self.prec):
            r = x.residue()
            if (any(r) if isinstance(r, tuple) else r):
                out.append((k, r))
                lift = F(r) if isinstance(r, int) else _make(F, list(r), 0, F.precision)
                x = x - lift
            x = x.shift(-1)
        return out

    def __str__(self) -> str:
        return format_expansion(self)

    def __repr__(self) -> str:
        return f"Scalar({self})"


def _format_digit(r) -> str:
    if isinstance(r, int):
        return str(r)
    parts = []
    for i, a in enumerate(r):
        if a:
            parts.append(str(a) if i == 0 else (f"{a}*x" if i == 1 else f"{a}*x^{i}"))
    return parts[0] if len(parts) == 1 and r[0] else "(" + " + ".join(parts) + ")"


def format_expansion(s: Scalar, symbol: str = "π") -> str:
    terms = []
    for k, r in s.expansion():
        dig = _format_digit(r)
        if k == 0:
            terms.append(dig)
        elif k == 1:
            terms.append(f"{dig}*{symbol}")
        else:
            terms.append(f"{dig}*{symbol}^{k}")
    terms.append(f"O({symbol})" if s.prec == 1 else f"O({symbol}^{s.prec})")
    return " + ".join(terms)


# -- Z_p ----------------------------------------------------------------------

@dataclass(frozen=True)
class ZpElement:
    """An element of Z_p known modulo ``p**precision``."""

    value: int
    p: int
    precision: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p ** self.precision)

    @classmethod
    def from_rational(cls, q, p: int, precision: int) -> "ZpElement":
        q = Fraction(q)
        if q.denominator % p == 0:
            raise ValueError(f"{q} is not a p-adic integer")
        mod = p ** precision
        return cls(q.numerator * pow(q.denominator, -1, mod), p, precision)

    @property
    def digits(self) -> tuple[int, ...]:
        n, out = self.value, []
        for _ in range(self.precision):
            out.append(n % self.p)
            n //= self.p
        return tuple(out)

    def _other(self, other) -> "ZpElement":
        if isinstance(other, ZpElement):
            if other.p != self.p:
                raise ValueError("different primes")
            return other
        return ZpElement.from_rational(other, self.p, self.precision)

    def __add__(self, other):
        o = self._other(other)
        return ZpElement(self.value + o.value, self.p, min(self.precision, o.precision))

    __radd__ = __add__

    def __neg__(self):
        return ZpElement(-self.value, self.p, self.precision)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __mul__(self, other):
        o = self._other(other)
        return ZpElement(self.value * o.value, self.p, min(self.precision, o.precision))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, (ZpElement, int, Fraction)):
            return NotImplemented
        o = self._other(other)
        prec = min(self.precision, o.precision)
        return (self.value - o.value) % self.p ** prec == 0

    __hash__ = None


def binomial_zp(gamma: ZpElement, k: int, F: FieldConfig, cap: int = 64) -> Scalar:
    """``gamma (gamma-1) ... (gamma-k+1) / k!`` as an element of K.

    Computed as an integer binomial on the nonnegative representative of
    ``gamma``; changing ``gamma`` by ``p**M`` moves the result by at least
    ``p**(M - floor(log_p k))``.
    """
    if k < 0 or k > cap:
        raise ValueError(f"binomial index {k} outside [0, {cap}]")
    lost = _floor_log(k, F.p) if k > 0 else 0
    return F(math.comb(gamma.value, k), prec=F.e * (gamma.precision - lost))


# -- log / exp ------------------------------------------------------------------

def padic_log(a: Scalar) -> Scalar:
    """``sum (-1)^(k+1) (a-1)^k / k`` for ``a`` in ``1 + m``."""
    F = a.field
    z = a - 1
    if z.is_zero():
        if z.prec <= 0:
            raise LogDomainError("argument not known to be a principal unit")
        return z
    w = z.vpi
    if w <= 0:
        raise LogDomainError(f"log needs v(a-1) > 0, got {z.valuation()}")
    N = F.precision
    e, p = F.e, F.p
    k0 = e / (w * math.log(p))
    result = F.zero
    power = z
    k = 1
    while True:
        term = power.div_int(k)
        result = result + term if k % 2 else result - term
        k += 1
        if k >= k0 and k * w - e * math.log(k, p) >= N + 1:
            break
        power = power * z
    return result.add_bigoh(min(a.prec, N))


def padic_exp(a: Scalar) -> Scalar:
    """``sum a^k / k!`` on the convergence disc ``v(a) > 1/(p-1)``."""
    F = a.field
    p, e = F.p, F.e
    v = a.vpi
    if v * (p - 1) <= e:
        raise ExpDomainError(f"exp needs v(a) > 1/(p-1), got {a.valuation()}")
    N = F.precision
    result = F.one
    term = F.one
    k = 1
    while True:
        term = (term * a).div_int(k)
        result = result + term
        # v(a^j / j!) >= j*v - e*(j-1)/(p-1), increasing in j
        if (k + 1) * v * (p - 1) - e * k >= N * (p - 1):
            break
        k += 1
    return result


def is_admissible(value: Scalar) -> bool:
    """Whether ``value`` is congruent to 1 mod p (mod 4 when p = 2)."""
    F = value.field
    need = F.e * (2 if F.p == 2 else 1)
    z = value - 1
    if z.is_zero():
        return z.prec >= need
    return z.vpi >= need


def zp_scalar_power(lam: Scalar, z: ZpElement) -> Scalar:
    """``lam**z = exp(z log lam)`` for admissible ``lam``."""
    if not is_admissible(lam):
        raise CharacterAdmissibilityError(
            f"{lam} is not congruent to 1 mod {'4' if lam.field.p == 2 else 'p'}")
    F = lam.field
    return padic_exp(F.from_zp(z) * padic_log(lam))


def precision_floor(values: Iterable[Scalar]) -> int:
    """Minimum absolute precision (pi units) of a family of scalars."""
    return min(s.prec for s in values)
