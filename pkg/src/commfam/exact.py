"""Exact scalar and linear-algebra tower.

Everything downstream (tensor-leg families, Poisson brackets, differential
operators) reduces to arithmetic in this module, and every identity is decided
with zero tolerance:

* ``Rat`` -- arbitrary-precision rationals (``fractions.Fraction``).
* ``MPoly`` -- sparse multivariate polynomials with rational coefficients.
* ``RatFunc`` -- quotients of polynomials; equality is decided by
  cross-multiplication, never by normalisation to a canonical form.
* ``QMatrix`` -- dense matrices over an exact field, with Gaussian-elimination
  inversion and an independent determinant oracle.

Monomial order: graded lexicographic, fixed once.  Monomials are compared
first by total degree, ties broken by the packed exponent integer, which reads
the variables from the highest index down.  This order is used only to pick a
deterministic sign normalisation for denominators; it is not configurable.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Mapping, Sequence
from fractions import Fraction

import numpy as np

Rat = Fraction

__all__ = [
    "Rat",
    "Singular",
    "MPoly",
    "RatFunc",
    "QMatrix",
    "mat_inverse",
    "det",
    "rank",
    "kron",
    "ratfunc_equal",
    "partial_derivative",
]


class Singular(ArithmeticError):
    """Matrix has no inverse (an invertibility hypothesis failed)."""


# ---------------------------------------------------------------------------
# Exponent packing.
#
# An exponent vector (e_0, ..., e_{k-1}) is packed into a single integer with
# _SHIFT bits per variable; monomial multiplication is then integer addition.
# Per-variable exponents must stay below 2**_SHIFT; public constructors check
# a safety margin so that one multiplication cannot overflow a field.

_SHIFT = 10
_MASK = (1 << _SHIFT) - 1
_MAX_EXP = _MASK  # 1023

# numpy fast-path thresholds for polynomial multiplication
_NP_PAIR_CUTOFF = 50_000
_NP_COEF_BOUND = 1 << 62


def _pack(exps: Sequence[int]) -> int:
    key = 0
    for i, e in enumerate(exps):
        key |= e << (_SHIFT * i)
    return key


def _unpack(key: int, nvars: int) -> tuple[int, ...]:
    return tuple((key >> (_SHIFT * i)) & _MASK for i in range(nvars))


def _key_degree(key: int) -> int:
    deg = 0
    while key:
        deg += key & _MASK
        key >>= _SHIFT
    return deg


def _dict_mul_py(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    if len(a) > len(b):
        a, b = b, a
    out: dict[int, int] = {}
    get = out.get
    for ka, va in a.items():
        for kb, vb in b.items():
            k = ka + kb
            out[k] = get(k, 0) + va * vb
    return out


def _dict_mul_np(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    ka = np.fromiter(a.keys(), dtype=np.int64, count=len(a))
    va = np.fromiter(a.values(), dtype=np.int64, count=len(a))
    kb = np.fromiter(b.keys(), dtype=np.int64, count=len(b))
    vb = np.fromiter(b.values(), dtype=np.int64, count=len(b))
    keys = np.add.outer(ka, kb).ravel()
    vals = np.multiply.outer(va, vb).ravel()
    order = np.argsort(keys, kind="stable")
    keys = keys[order]
    vals = vals[order]
    starts = np.concatenate(([0], np.flatnonzero(np.diff(keys)) + 1))
    sums = np.add.reduceat(vals, starts)
    out: dict[int, int] = {}
    for k, v in zip(keys[starts].tolist(), sums.tolist()):
        if v:
            out[k] = v
    return out


def _dict_mul(a: dict[int, int], b: dict[int, int], nvars: int,
              abound: int, bbound: int) -> dict[int, int]:
    if not a or not b:
        return {}
    pairs = len(a) * len(b)
    if (pairs >= _NP_PAIR_CUTOFF and _SHIFT * nvars <= 62
            and abound * bbound * min(len(a), len(b)) < _NP_COEF_BOUND):
        return _dict_mul_np(a, b)
    return _dict_mul_py(a, b)


class MPoly:
    """Sparse multivariate polynomial with exact rational coefficients.

    Internally a polynomial is stored as ``content * primitive`` where
    ``content`` is a single rational scalar and ``primitive`` maps packed
    exponent keys to integers with gcd one and positive leading coefficient
    (graded-lex order).  This keeps the hot convolution kernels in machine/big
    integer arithmetic; ``terms()`` exposes the conventional view of the
    polynomial as a map from exponent vectors to nonzero rationals.
    """

    __slots__ = ("nvars", "content", "_coeffs", "_vmax", "_tdeg")

    def __init__(self, nvars: int, content: Fraction, coeffs: dict[int, int],
                 _internal: bool = False):
        if not _internal:
            raise TypeError("use MPoly.zero/const/var/from_terms to build polynomials")
        self.nvars = nvars
        self.content = content
        self._coeffs = coeffs
        self._vmax: tuple[int, ...] | None = None
        self._tdeg: int | None = None

    # -- constructors -------------------------------------------------------

    @staticmethod
    def _build(nvars: int, raw: dict[int, int], content: Fraction) -> "MPoly":
        raw = {k: v for k, v in raw.items() if v}
        if not raw or content == 0:
            return MPoly(nvars, Fraction(0), {}, _internal=True)
        g = 0
        for v in raw.values():
            g = math.gcd(g, v)
            if g == 1:
                break
        lead = max(raw, key=lambda k: (_key_degree(k), k))
        if raw[lead] < 0:
            g = -g
        if g != 1:
            raw = {k: v // g for k, v in raw.items()}
        return MPoly(nvars, content * g, raw, _internal=True)

    @classmethod
    def zero(cls, nvars: int) -> "MPoly":
        return cls(nvars, Fraction(0), {}, _internal=True)

    @classmethod
    def one(cls, nvars: int) -> "MPoly":
        return cls(nvars, Fraction(1), {0: 1}, _internal=True)

    @classmethod
    def const(cls, nvars: int, c) -> "MPoly":
        c = Fraction(c)
        if c == 0:
            return cls.zero(nvars)
        return cls(nvars, c, {0: 1}, _internal=True)

    @classmethod
    def var(cls, nvars: int, i: int, power: int = 1) -> "MPoly":
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} variables")
        if power < 0 or power > _MAX_EXP:
            raise ValueError(f"exponent {power} out of supported range")
        if power == 0:
            return cls.one(nvars)
        return cls(nvars, Fraction(1), {power << (_SHIFT * i): 1}, _internal=True)

    @classmethod
    def from_terms(cls, nvars: int, terms: Mapping[Sequence[int], object] |
                   Iterable[tuple[Sequence[int], object]]) -> "MPoly":
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Fraction] = {}
        for exps, coeff in items:
            exps = tuple(exps)
            if len(exps) != nvars:
                raise ValueError(f"exponent vector {exps} has length {len(exps)}, expected {nvars}")
            if any(e < 0 or e > _MAX_EXP for e in exps):
                raise ValueError(f"exponent vector {exps} out of supported range")
            key = _pack(exps)
            acc[key] = acc.get(key, Fraction(0)) + Fraction(coeff)
        acc = {k: v for k, v in acc.items() if v}
        if not acc:
            return cls.zero(nvars)
        den_lcm = 1
        for v in acc.values():
            den_lcm = den_lcm * v.denominator // math.gcd(den_lcm, v.denominator)
        raw = {k: int(v * den_lcm) for k, v in acc.items()}
        return cls._build(nvars, raw, Fraction(1, den_lcm))

    # -- views --------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def term_count(self) -> int:
        return len(self._coeffs)

    def terms(self) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        for k, v in self._coeffs.items():
            yield _unpack(k, self.nvars), self.content * v

    def coeff(self, exps: Sequence[int]) -> Fraction:
        return self.content * self._coeffs.get(_pack(exps), 0)

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if self._tdeg is None:
            self._tdeg = max((_key_degree(k) for k in self._coeffs), default=-1)
        return self._tdeg

    def _var_maxima(self) -> tuple[int, ...]:
        if self._vmax is None:
            vm = [0] * self.nvars
            for k in self._coeffs:
                i = 0
                while k:
                    e = k & _MASK
                    if e > vm[i]:
                        vm[i] = e
                    k >>= _SHIFT
                    i += 1
            self._vmax = tuple(vm)
        return self._vmax

    def _max_abs_coeff(self) -> int:
        if not self._coeffs:
            return 0
        return max(abs(v) for v in self._coeffs.values())

    def leading_term(self) -> tuple[tuple[int, ...], Fraction]:
        """Leading (monomial, coefficient) under the fixed graded-lex order."""
        if self.is_zero:
            raise ValueError("zero polynomial has no leading term")
        lead = max(self._coeffs, key=lambda k: (_key_degree(k), k))
        return _unpack(lead, self.nvars), self.content * self._coeffs[lead]

    # -- arithmetic ---------------------------------------------------------

    def _check_compat(self, other: "MPoly") -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"variable-count mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(self.nvars, other)
        if not isinstance(other, MPoly):
            return NotImplemented
        self._check_compat(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        ca, cb = self.content, other.content
        den = ca.denominator * cb.denominator // math.gcd(ca.denominator, cb.denominator)
        sa = ca.numerator * (den // ca.denominator)
        sb = cb.numerator * (den // cb.denominator)
        raw = {k: sa * v for k, v in self._coeffs.items()}
        get = raw.get
        for k, v in other._coeffs.items():
            raw[k] = get(k, 0) + sb * v
        return MPoly._build(self.nvars, raw, Fraction(1, den))

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero:
            return self
        return MPoly(self.nvars, -self.content, self._coeffs, _internal=True)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(self.nvars, other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0 or self.is_zero:
                return MPoly.zero(self.nvars)
            return MPoly(self.nvars, self.content * c, self._coeffs, _internal=True)
        if not isinstance(other, MPoly):
            return NotImplemented
        self._check_compat(other)
        if self.is_zero or other.is_zero:
            return MPoly.zero(self.nvars)
        va, vb = self._var_maxima(), other._var_maxima()
        if any(x + y > _MAX_EXP for x, y in zip(va, vb)):
            raise OverflowError("per-variable degree exceeds supported packing range")
        raw = _dict_mul(self._coeffs, other._coeffs, self.nvars,
                        self._max_abs_coeff(), other._max_abs_coeff())
        return MPoly._build(self.nvars, raw, self.content * other.content)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial; use RatFunc")
        result = MPoly.one(self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n = base_needed
        return result

    def partial(self, i: int) -> "MPoly":
        """Exact partial derivative with respect to variable ``i``."""
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range")
        shift = _SHIFT * i
        step = 1 << shift
        raw: dict[int, int] = {}
        for k, v in self._coeffs.items():
            e = (k >> shift) & _MASK
            if e:
                raw[k - step] = raw.get(k - step, 0) + e * v
        return MPoly._build(self.nvars, raw, self.content)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError("point has wrong number of coordinates")
        point = [Fraction(p) for p in point]
        total = Fraction(0)
        for k, v in self._coeffs.items():
            term = Fraction(v)
            i = 0
            while k:
                e = k & _MASK
                if e:
                    term *= point[i] ** e
                k >>= _SHIFT
                i += 1
            total += term
        return self.content * total

    def embed(self, nvars: int, var_map: Sequence[int]) -> "MPoly":
        """Relabel variables into a ring with ``nvars`` variables.

        ``var_map[i]`` is the new index of old variable ``i``.  Used to place
        a per-leg polynomial into the full tensor-product variable set.
        """
        if len(var_map) != self.nvars:
            raise ValueError("var_map must cover every old variable")
        if len(set(var_map)) != len(var_map):
            raise ValueError("var_map must be injective")
        raw: dict[int, int] = {}
        for k, v in self._coeffs.items():
            new_key = 0
            i = 0
            while k:
                e = k & _MASK
                if e:
                    new_key |= e << (_SHIFT * var_map[i])
                k >>= _SHIFT
                i += 1
            raw[new_key] = v
        return MPoly(nvars, self.content, raw, _internal=True)

    # -- comparison / display -----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(self.nvars, other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return (self.nvars == other.nvars and self.content == other.content
                and self._coeffs == other._coeffs)

    __hash__ = None  # mutable-dict backed; not intended as a mapping key

    def to_text(self, names: Sequence[str] | None = None) -> str:
        """Sparse text form: ``c`` or ``c x1^2 x3`` terms joined by `` + ``."""
        if self.is_zero:
            return "0"
        if names is None:
            names = [f"x{i + 1}" for i in range(self.nvars)]
        parts = []
        for key in sorted(self._coeffs, key=lambda k: (_key_degree(k), k), reverse=True):
            c = self.content * self._coeffs[key]
            factors = [str(c)]
            exps = _unpack(key, self.nvars)
            for i, e in enumerate(exps):
                if e == 1:
                    factors.append(names[i])
                elif e > 1:
                    factors.append(f"{names[i]}^{e}")
            parts.append(" ".join(factors))
        return " + ".join(parts)

    @classmethod
    def from_text(cls, text: str, nvars: int,
                  names: Sequence[str] | None = None) -> "MPoly":
        if names is None:
            names = [f"x{i + 1}" for i in range(nvars)]
        index = {name: i for i, name in enumerate(names)}
        text = text.strip()
        if text == "0":
            return cls.zero(nvars)
        terms = []
        for chunk in text.split(" + "):
            factors = chunk.split()
            coeff = Fraction(factors[0])
            exps = [0] * nvars
            for factor in factors[1:]:
                name, _, exp = factor.partition("^")
                exps[index[name]] += int(exp) if exp else 1
            terms.append((tuple(exps), coeff))
        return cls.from_terms(nvars, terms)

    def __repr__(self):
        return f"MPoly({self.to_text()})"


# ---------------------------------------------------------------------------
# Rational functions.


class RatFunc:
    """Quotient of two polynomials over the same variable set.

    The representation keeps the denominator primitive with positive leading
    coefficient (graded-lex) and cancels the rational content and any common
    monomial factor.  No full polynomial-GCD reduction is performed: equality
    is decided by cross-multiplication, which needs no canonical form.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: MPoly | None = None):
        if den is None:
            den = MPoly.one(num.nvars)
        if num.nvars != den.nvars:
            raise ValueError("numerator and denominator variable counts differ")
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if num.is_zero:
            self.num = num
            self.den = MPoly.one(num.nvars)
            return
        # cancel a common monomial factor (cheap, keeps negative-power
        # substitutions like xi^-d manageable without polynomial GCD)
        shift_key = _common_monomial_key(num, den)
        if shift_key:
            num = _shift_down(num, shift_key)
            den = _shift_down(den, shift_key)
        self.num = num * (1 / den.content)
        self.den = MPoly(den.nvars, Fraction(1), den._coeffs, _internal=True)

    # -- constructors -------------------------------------------------------

    @classmethod
    def const(cls, nvars: int, c) -> "RatFunc":
        return cls(MPoly.const(nvars, c))

    @classmethod
    def var(cls, nvars: int, i: int) -> "RatFunc":
        return cls(MPoly.var(nvars, i))

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def is_polynomial(self) -> bool:
        return self.den == MPoly.one(self.nvars)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "RatFunc | None":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, MPoly):
            return RatFunc(other)
        if isinstance(other, (int, Fraction)):
            return RatFunc.const(self.nvars, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den,
                       self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        out = RatFunc.__new__(RatFunc)
        out.num = -self.num
        out.den = self.den
        return out

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            out = RatFunc.__new__(RatFunc)
            out.num = self.num * other
            out.den = self.den if not out.num.is_zero else MPoly.one(self.nvars)
            return out
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if n == 0:
            return RatFunc.const(self.nvars, 1)
        if n < 0:
            if self.is_zero:
                raise ZeroDivisionError("negative power of zero")
            return RatFunc(self.den, self.num) ** (-n)
        return RatFunc(self.num ** n, self.den ** n)

    def partial(self, i: int) -> "RatFunc":
        """Quotient-rule partial derivative, exact."""
        num = self.num.partial(i) * self.den - self.num * self.den.partial(i)
        return RatFunc(num, self.den * self.den)

    def evaluate(self, point: Sequence) -> Fraction:
        den = self.den.evaluate(point)
        if den == 0:
            raise ZeroDivisionError("denominator vanishes at the evaluation point")
        return self.num.evaluate(point) / den

    def embed(self, nvars: int, var_map: Sequence[int]) -> "RatFunc":
        return RatFunc(self.num.embed(nvars, var_map), self.den.embed(nvars, var_map))

    # -- comparison / display -----------------------------------------------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.nvars != other.nvars:
            raise ValueError("variable-count mismatch")
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def to_text(self, names: Sequence[str] | None = None) -> str:
        return f"{self.num.to_text(names)} | {self.den.to_text(names)}"

    @classmethod
    def from_text(cls, text: str, nvars: int,
                  names: Sequence[str] | None = None) -> "RatFunc":
        num_text, _, den_text = text.partition("|")
        num = MPoly.from_text(num_text.strip(), nvars, names)
        den = MPoly.from_text(den_text.strip(), nvars, names) if den_text.strip() else None
        return cls(num, den)

    def __repr__(self):
        if self.is_polynomial():
            return f"RatFunc({self.num.to_text()})"
        return f"RatFunc(({self.num.to_text()}) / ({self.den.to_text()}))"


def _common_monomial_key(a: MPoly, b: MPoly) -> int:
    """Packed exponent vector of the largest monomial dividing every term."""
    mins: list[int] | None = None
    for poly in (a, b):
        if 0 in poly._coeffs:
            return 0
        for k in poly._coeffs:
            exps = list(_unpack(k, poly.nvars))
            if mins is None:
                mins = exps
            else:
                mins = [min(x, y) for x, y in zip(mins, exps)]
            if not any(mins):
                return 0
    return _pack(mins) if mins else 0


def _shift_down(poly: MPoly, shift_key: int) -> MPoly:
    coeffs = {k - shift_key: v for k, v in poly._coeffs.items()}
    return MPoly(poly.nvars, poly.content, coeffs, _internal=True)


def ratfunc_equal(a: RatFunc, b: RatFunc) -> bool:
    """True iff a.num * b.den = b.num * a.den as polynomials."""
    return a == b


def partial_derivative(f: RatFunc, var: int) -> RatFunc:
    """Exact quotient-rule derivative of ``f`` with respect to variable ``var``."""
    return f.partial(var)


# ---------------------------------------------------------------------------
# Dense exact matrices.


def _zero_like(entry):
    return entry * 0


def _complexity(entry) -> int:
    """Pivot-selection cost of an entry: prefer structurally simple pivots."""
    if isinstance(entry, Fraction):
        return entry.numerator.bit_length() + entry.denominator.bit_length()
    if isinstance(entry, RatFunc):
        return entry.num.term_count + entry.den.term_count
    return 1


class QMatrix:
    """Dense matrix over an exact field (``Rat`` or ``RatFunc`` entries)."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Sequence):
        data = [Fraction(e) if isinstance(e, int) else e for e in data]
        if len(data) != rows * cols:
            raise ValueError(f"need {rows * cols} entries, got {len(data)}")
        self.rows = rows
        self.cols = cols
        self.data = data

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "QMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = []
        for row in rows:
            if len(row) != c:
                raise ValueError("ragged rows")
            flat.extend(Fraction(x) if isinstance(x, (int, str)) else x for x in row)
        return cls(r, c, flat)

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(n, n, [Fraction(int(i == j)) for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls(rows, cols, [Fraction(0)] * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        return self.data[i * self.cols + j]

    def row(self, i: int) -> list:
        return self.data[i * self.cols:(i + 1) * self.cols]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return QMatrix(self.rows, self.cols,
                       [a + b for a, b in zip(self.data, other.data)])

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return QMatrix(self.rows, self.cols,
                       [a - b for a, b in zip(self.data, other.data)])

    def __neg__(self) -> "QMatrix":
        return QMatrix(self.rows, self.cols, [-a for a in self.data])

    def scale(self, c) -> "QMatrix":
        return QMatrix(self.rows, self.cols, [a * c for a in self.data])

    def __mul__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError("shape mismatch for matrix product")
        n, m, p = self.rows, self.cols, other.cols
        a, b = self.data, other.data
        out = []
        for i in range(n):
            arow = a[i * m:(i + 1) * m]
            for j in range(p):
                acc = None
                for k in range(m):
                    aik = arow[k]
                    term = aik * b[k * p + j]
                    acc = term if acc is None else acc + term
                out.append(acc)
        return QMatrix(n, p, out)

    def __eq__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and all(
            a == b for a, b in zip(self.data, other.data))

    __hash__ = None

    def is_identity(self) -> bool:
        if not self.is_square():
            return False
        for i in range(self.rows):
            for j in range(self.cols):
                want = 1 if i == j else 0
                if self[i, j] != want:
                    return False
        return True

    def first_nonzero(self) -> tuple[int, int, object] | None:
        """Row-major first nonzero entry, as a failure witness."""
        for i in range(self.rows):
            for j in range(self.cols):
                e = self[i, j]
                if e != 0 if not isinstance(e, RatFunc) else not e.is_zero:
                    return i, j, e
        return None

    def __repr__(self):
        body = "; ".join(" ".join(str(self[i, j]) for j in range(self.cols))
                         for i in range(self.rows))
        return f"QMatrix({self.rows}x{self.cols}: {body})"


def kron(a: QMatrix, b: QMatrix) -> QMatrix:
    """Kronecker product, first factor on the slower index."""
    out = []
    for i in range(a.rows):
        for k in range(b.rows):
            for j in range(a.cols):
                aij = a[i, j]
                brow = b.row(k)
                out.extend(aij * x for x in brow)
    return QMatrix(a.rows * b.rows, a.cols * b.cols, out)


def mat_inverse(m: QMatrix) -> QMatrix:
    """Exact inverse by Gaussian elimination with simplest-pivot preference.

    Raises ``Singular`` when no nonzero pivot exists in some column.
    """
    if not m.is_square():
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    a = [m.row(i) for i in range(n)]
    one = Fraction(1)
    zero = Fraction(0)
    e = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot_row = None
        pivot_cost = None
        for r in range(col, n):
            entry = a[r][col]
            nz = (not entry.is_zero) if isinstance(entry, RatFunc) else entry != 0
            if nz:
                cost = _complexity(entry)
                if pivot_cost is None or cost < pivot_cost:
                    pivot_row, pivot_cost = r, cost
        if pivot_row is None:
            raise Singular(f"no nonzero pivot in column {col}")
        if pivot_row != col:
            a[col], a[pivot_row] = a[pivot_row], a[col]
            e[col], e[pivot_row] = e[pivot_row], e[col]
        pivot = a[col][col]
        if not (isinstance(pivot, Fraction) and pivot == 1):
            inv = 1 / pivot
            a[col] = [x * inv for x in a[col]]
            e[col] = [x * inv for x in e[col]]
        for r in range(n):
            if r == col:
                continue
            factor = a[r][col]
            nz = (not factor.is_zero) if isinstance(factor, RatFunc) else factor != 0
            if nz:
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
                e[r] = [x - factor * y for x, y in zip(e[r], e[col])]
    return QMatrix(n, n, [x for row in e for x in row])


def det(m: QMatrix):
    """Determinant by column-subset expansion (independent of elimination).

    Dynamic programming over row subsets: O(2^n * n) field operations.  Used
    as the oracle that cross-checks ``mat_inverse`` singularity decisions.
    """
    if not m.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return Fraction(1)
    # level k: map (bitmask of rows used, over first k columns) -> minor value
    current = {0: Fraction(1)}
    for col in range(n):
        nxt: dict[int, object] = {}
        for mask, value in current.items():
            sign_toggle = 1
            for r in range(n):
                bit = 1 << r
                if mask & bit:
                    continue
                entry = m[r, col]
                term = value * entry if sign_toggle > 0 else -(value * entry)
                key = mask | bit
                if key in nxt:
                    nxt[key] = nxt[key] + term
                else:
                    nxt[key] = term
                sign_toggle = -sign_toggle
        current = nxt
    return current[(1 << n) - 1]


def rank(m: QMatrix) -> int:
    """Exact rank by fraction elimination."""
    a = [list(m.row(i)) for i in range(m.rows)]
    r = 0
    for col in range(m.cols):
        pivot = None
        for i in range(r, m.rows):
            entry = a[i][col]
            nz = (not entry.is_zero) if isinstance(entry, RatFunc) else entry != 0
            if nz:
                pivot = i
                break
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = 1 / a[r][col]
        a[r] = [x * inv for x in a[r]]
        for i in range(m.rows):
            if i != r:
                f = a[i][col]
                nz = (not f.is_zero) if isinstance(f, RatFunc) else f != 0
                if nz:
                    a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == m.rows:
            break
    return r
