"""Deformation bridge: dual-number quantization and truncated localization.

Two desk-scale renderings of first-order quantization live here.

* Dual numbers: on k[eps]/(eps^2) the product  f * g = fg + eps {f, g}  is
  associative because the bracket is a biderivation, and an element is
  invertible iff its body is nonzero.  Building the determinant family
  H_i = Delta_0^{-1} Delta_i inside this algebra and watching the commutators
  vanish is precisely the epsilon-route to Poisson commutativity: the soul of
  a commutator of body-only elements is 2 {body, body}.

* hbar-localization: the coefficient algebra A_h is the Rees construction on
  one-variable differential operators (each derivative carries one power of
  hbar, so the stored (order, power) pairs satisfy power >= order).  Adjoining
  a formal X with the rule

      (a X^n)(b X^m) = sum_{al >= 0} C(-n, al) a ad(f)^al(b) X^(n+m+al)

  makes X a two-sided inverse of the chosen lift f.  Iterating ad(f) strictly
  increases 2*(hbar power) - (derivative order), so the alpha-sum terminates
  at any finite truncation M.  Because f is already invertible inside A_h
  (its body is a nonzero rational function), the substitution X -> f^{-1} is
  a faithful algebra map mod hbar^M; it is the equality oracle for series.

Everything is truncated at a fixed hbar order M and asserted exactly there.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .exact import MPoly, RatFunc
from .ncfam import perm_sign
from .poisson import PoissonElem, classical_hamiltonians, poisson_bracket
from .reports import CheckRecord, failed, passed

ANCHOR_DUAL_ASSOC = "(a.b).c = a.(b.c) for a.b = ab + eps{a,b}"
ANCHOR_DUAL_COMM = "H_i H_j - H_j H_i = 0 in dual numbers (body and soul)"
ANCHOR_SOUL_FACTOR = "soul(a.b - b.a) = 2 {a, b}"
ANCHOR_SOUL_MATCH = "soul([H_i, H_j]) = 2 {H_i^cl, H_j^cl}"
ANCHOR_LOCAL_INV = "X f = f X = 1 (mod hbar^M)"
ANCHOR_LOCAL_ASSOC = "(u v) w = u (v w) (mod hbar^M)"
ANCHOR_XD = "X D = D X + hbar X^2 (D = hbar d/dz, f = z)"
ANCHOR_LIFT_FREE = "localization independent of the lift: X' inverts f + hbar g"
ANCHOR_DEGEN = "hbar^1 part of [F, G] = canonical bracket of the shadows"


class ZeroBody(ArithmeticError):
    """Dual number or hbar element with vanishing body is not invertible."""


class TruncationMismatch(ValueError):
    """Operands disagree on the truncation order or the localized element."""


# ---------------------------------------------------------------------------
# Dual numbers over the symplectic function field.


@dataclass(frozen=True)
class DualNum:
    """body + eps * soul over the 2n-variable symplectic function field."""

    body: PoissonElem
    soul: PoissonElem

    def __post_init__(self):
        if self.body.n != self.soul.n:
            raise ValueError("body and soul live on different symplectic powers")

    @classmethod
    def classical(cls, p: PoissonElem) -> "DualNum":
        return cls(p, PoissonElem.const(p.n, 0))

    @classmethod
    def const(cls, n: int, c) -> "DualNum":
        return cls.classical(PoissonElem.const(n, c))

    def __add__(self, other: "DualNum") -> "DualNum":
        return DualNum(self.body + other.body, self.soul + other.soul)

    def __sub__(self, other: "DualNum") -> "DualNum":
        return DualNum(self.body - other.body, self.soul - other.soul)

    def __neg__(self) -> "DualNum":
        return DualNum(-self.body, -self.soul)

    @property
    def is_zero(self) -> bool:
        return self.body.is_zero and self.soul.is_zero


def dual_mul(a: DualNum, b: DualNum) -> DualNum:
    """The eps-deformed product: bodies multiply, souls pick up the bracket."""
    body = a.body * b.body
    soul = a.body * b.soul + a.soul * b.body + poisson_bracket(a.body, b.body)
    return DualNum(body, soul)


def dual_inverse(a: DualNum) -> DualNum:
    """Two-sided inverse: (1/body, -soul/body^2).

    The bracket correction {body, 1/body} vanishes identically, so the naive
    commutative inverse works on both sides; raises ``ZeroBody`` otherwise.
    """
    if a.body.is_zero:
        raise ZeroBody("body vanishes; not invertible in dual numbers")
    inv_body = PoissonElem.const(a.body.n, 1) / a.body
    soul = -(a.soul * inv_body * inv_body)
    return DualNum(inv_body, soul)


def _dual_lift_leg(f: RatFunc, leg: int, n: int) -> DualNum:
    return DualNum.classical(PoissonElem.from_leg(f, leg, n))


def _dual_minor(lifts, skip: int, n: int) -> DualNum:
    """Determinant over rows != skip computed entirely with dual products."""
    rows = [r for r in range(n + 1) if r != skip]
    total = DualNum.const(n, 0)
    for perm in itertools.permutations(range(n)):
        term = DualNum.const(n, 1)
        for t in range(n):
            term = dual_mul(term, lifts[rows[t]][perm[t]])
        total = total + (term if perm_sign(perm) > 0 else -term)
    return total


def dual_commuting_family(fs: list[RatFunc]) -> list[CheckRecord]:
    """Build H_i = Delta_0^{-1} Delta_i inside dual numbers and check both
    that the commutators vanish identically and that the souls reproduce the
    classically computed brackets (two independent code paths)."""
    n = len(fs) - 1
    lifts = [[_dual_lift_leg(f, j, n) for j in range(1, n + 1)] for f in fs]
    minors = [_dual_minor(lifts, skip, n) for skip in range(n + 1)]
    inv0 = dual_inverse(minors[0])  # ZeroBody propagates
    hs = [dual_mul(inv0, minors[i]) for i in range(1, n + 1)]
    records = []
    if len(hs) == 1:
        comm = dual_mul(hs[0], hs[0]) - dual_mul(hs[0], hs[0])
        records.append(passed("dual-commutator-11", ANCHOR_DUAL_COMM)
                       if comm.is_zero else
                       failed("dual-commutator-11", ANCHOR_DUAL_COMM, "self"))
        return records
    for i in range(len(hs)):
        for j in range(i + 1, len(hs)):
            comm = dual_mul(hs[i], hs[j]) - dual_mul(hs[j], hs[i])
            if comm.is_zero:
                records.append(passed(f"dual-commutator-{i + 1}{j + 1}",
                                      ANCHOR_DUAL_COMM))
            else:
                part = "body" if not comm.body.is_zero else "soul"
                records.append(failed(f"dual-commutator-{i + 1}{j + 1}",
                                      ANCHOR_DUAL_COMM, f"nonzero {part}"))
    classical = classical_hamiltonians(fs)
    for i in range(len(hs)):
        for j in range(i + 1, len(hs)):
            lifted_i = DualNum.classical(classical[i])
            lifted_j = DualNum.classical(classical[j])
            comm = dual_mul(lifted_i, lifted_j) - dual_mul(lifted_j, lifted_i)
            want = poisson_bracket(classical[i], classical[j]) * 2
            ok = comm.body.is_zero and comm.soul == want
            if ok:
                records.append(passed(f"dual-soul-vs-bracket-{i + 1}{j + 1}",
                                      ANCHOR_SOUL_MATCH))
            else:
                records.append(failed(f"dual-soul-vs-bracket-{i + 1}{j + 1}",
                                      ANCHOR_SOUL_MATCH, "soul mismatch"))
    return records


# ---------------------------------------------------------------------------
# The Rees coefficient algebra A_h.


@dataclass(frozen=True)
class HElem:
    """Finite sum of c(z) hbar^m (d/dz)^k with m >= k, truncated at m <= M."""

    trunc: int
    terms: dict[tuple[int, int], RatFunc]  # (k, m) -> one-variable coefficient

    def __post_init__(self):
        for (k, m), c in self.terms.items():
            if k < 0 or m < k:
                raise ValueError(f"term ({k},{m}) violates the Rees condition m >= k")
            if m > self.trunc:
                raise ValueError(f"term ({k},{m}) exceeds truncation {self.trunc}")
            if c.nvars != 1 or c.is_zero:
                raise ValueError("coefficients are nonzero one-variable functions")

    @classmethod
    def build(cls, trunc: int, items) -> "HElem":
        acc: dict[tuple[int, int], RatFunc] = {}
        for key, c in items:
            if key[1] > trunc:
                continue
            if key in acc:
                acc[key] = acc[key] + c
            else:
                acc[key] = c
        return cls(trunc, {k: c for k, c in acc.items() if not c.is_zero})

    @classmethod
    def zero(cls, trunc: int) -> "HElem":
        return cls(trunc, {})

    @classmethod
    def function(cls, f: RatFunc, trunc: int) -> "HElem":
        if f.is_zero:
            return cls.zero(trunc)
        return cls(trunc, {(0, 0): f})

    @classmethod
    def one(cls, trunc: int) -> "HElem":
        return cls.function(RatFunc.const(1, 1), trunc)

    @classmethod
    def hbar_derivative(cls, trunc: int, order: int = 1) -> "HElem":
        """(hbar d/dz)^order."""
        return cls(trunc, {(order, order): RatFunc.const(1, 1)})

    @classmethod
    def hbar(cls, trunc: int, power: int = 1) -> "HElem":
        return cls(trunc, {(0, power): RatFunc.const(1, 1)})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def body(self) -> RatFunc:
        """The hbar^0 part (always a plain function by the Rees condition)."""
        return self.terms.get((0, 0), RatFunc.const(1, 0))

    def min_hbar_order(self) -> int | None:
        return min((m for (_, m) in self.terms), default=None)

    def shadow(self) -> RatFunc:
        """Classical limit in (z, xi): terms with m = k survive as c xi^k."""
        total = RatFunc.const(2, 0)
        for (k, m), c in self.terms.items():
            if m == k:
                total = total + c.embed(2, [0]) * (RatFunc.var(2, 1) ** k)
        return total

    def __add__(self, other: "HElem") -> "HElem":
        self._compat(other)
        return HElem.build(self.trunc,
                           itertools.chain(self.terms.items(), other.terms.items()))

    def __sub__(self, other: "HElem") -> "HElem":
        return self + (-other)

    def __neg__(self) -> "HElem":
        return HElem(self.trunc, {k: -c for k, c in self.terms.items()})

    def scale(self, factor) -> "HElem":
        if isinstance(factor, (int, Fraction)):
            factor = RatFunc.const(1, factor)
        if factor.is_zero:
            return HElem.zero(self.trunc)
        return HElem(self.trunc, {k: c * factor for k, c in self.terms.items()})

    def shift_hbar(self, powers: int = 1) -> "HElem":
        """Multiply by hbar^powers (drops what leaves the truncation window)."""
        return HElem.build(self.trunc, (((k, m + powers), c)
                                        for (k, m), c in self.terms.items()))

    def __mul__(self, other: "HElem") -> "HElem":
        """Composition; hbar powers add, derivatives pass by Leibniz."""
        self._compat(other)
        items = []
        for (k1, m1), c1 in self.terms.items():
            for (k2, m2), c2 in other.terms.items():
                m = m1 + m2
                if m > self.trunc:
                    continue
                g = c2
                for i in range(k1 + 1):
                    coeff = c1 * g
                    binom = math.comb(k1, i)
                    if binom != 1:
                        coeff = coeff * binom
                    items.append(((k1 + k2 - i, m), coeff))
                    if i < k1:
                        g = g.partial(0)
        return HElem.build(self.trunc, items)

    def __eq__(self, other):
        if not isinstance(other, HElem):
            return NotImplemented
        return (self - other).is_zero

    __hash__ = None

    def _compat(self, other: "HElem") -> None:
        if self.trunc != other.trunc:
            raise TruncationMismatch(
                f"truncation orders differ: {self.trunc} vs {other.trunc}")


def h_ad(f: HElem, b: HElem) -> HElem:
    """ad(f)(b) = f b - b f, computed in A_h."""
    return f * b - b * f


def h_inverse(f: HElem) -> HElem:
    """Inverse of f mod hbar^M via the geometric series around the body.

    Requires a nonzero body; the correction f - body carries at least one
    power of hbar, so the series stops at the truncation order.
    """
    b = f.body()
    if b.is_zero:
        raise ZeroBody("hbar element with zero body is not invertible")
    binv = HElem.function(RatFunc.const(1, 1) / b, f.trunc)
    higher = f - HElem.function(b, f.trunc)
    out = binv
    power = binv
    for _ in range(f.trunc):
        power = -(binv * (higher * power))
        if power.is_zero:
            break
        out = out + power
    return out


# ---------------------------------------------------------------------------
# Truncated localization: finite sums  sum_k a_k X^k  with a_k in A_h.


@dataclass(frozen=True)
class LocalSeries:
    """Element of the localization of A_h at f, normal-ordered in X."""

    f: HElem
    trunc: int
    coeffs: dict[int, HElem]

    def __post_init__(self):
        if self.f.body().is_zero:
            raise ZeroBody("the localized element must have an invertible body")
        for k, a in self.coeffs.items():
            if k < 0:
                raise ValueError("X-powers are nonnegative")
            if a.trunc != self.trunc or a.is_zero:
                raise ValueError("coefficients must share the truncation and be nonzero")

    @classmethod
    def build(cls, f: HElem, trunc: int, items) -> "LocalSeries":
        acc: dict[int, HElem] = {}
        for k, a in items:
            if k in acc:
                acc[k] = acc[k] + a
            else:
                acc[k] = a
        return cls(f, trunc, {k: a for k, a in acc.items() if not a.is_zero})

    @classmethod
    def from_helem(cls, a: HElem, f: HElem) -> "LocalSeries":
        return cls.build(f, a.trunc, [(0, a)])

    @classmethod
    def x_power(cls, f: HElem, power: int = 1) -> "LocalSeries":
        return cls.build(f, f.trunc, [(power, HElem.one(f.trunc))])

    @classmethod
    def one(cls, f: HElem) -> "LocalSeries":
        return cls.build(f, f.trunc, [(0, HElem.one(f.trunc))])

    def __add__(self, other: "LocalSeries") -> "LocalSeries":
        self._compat(other)
        return LocalSeries.build(self.f, self.trunc,
                                 itertools.chain(self.coeffs.items(), other.coeffs.items()))

    def __neg__(self) -> "LocalSeries":
        return LocalSeries(self.f, self.trunc,
                           {k: -a for k, a in self.coeffs.items()})

    def __sub__(self, other: "LocalSeries") -> "LocalSeries":
        return self + (-other)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def _compat(self, other: "LocalSeries") -> None:
        if self.trunc != other.trunc:
            raise TruncationMismatch("truncation orders differ")
        if not (self.f - other.f).is_zero:
            raise TruncationMismatch("series localize different elements")

    def evaluate(self) -> HElem:
        """Faithful image under X -> f^{-1} in A_h, mod hbar^M."""
        inv = h_inverse(self.f)
        out = HElem.zero(self.trunc)
        power_cache = {0: HElem.one(self.trunc)}
        top = max(self.coeffs, default=0)
        for k in range(1, top + 1):
            power_cache[k] = power_cache[k - 1] * inv
        for k, a in self.coeffs.items():
            out = out + a * power_cache[k]
        return out


def _neg_binomial(n: int, alpha: int) -> int:
    """C(-n, alpha) = (-1)^alpha C(n + alpha - 1, alpha) for n >= 0."""
    value = math.comb(n + alpha - 1, alpha) if n > 0 else (1 if alpha == 0 else 0)
    return -value if alpha % 2 else value


def localize_product(u: LocalSeries, v: LocalSeries) -> LocalSeries:
    """Bilinear extension of the monomial rule; the ad(f)-sum terminates
    because each application strictly raises 2*(hbar power) - (order)."""
    u._compat(v)
    f = u.f
    cap = 2 * u.trunc + 16
    items = []
    for n, a in u.coeffs.items():
        for m, b in v.coeffs.items():
            if n == 0:
                items.append((m, a * b))
                continue
            adb = b
            alpha = 0
            while not adb.is_zero:
                if alpha > cap:
                    raise RuntimeError("ad(f) iteration failed to terminate")
                binom = _neg_binomial(n, alpha)
                if binom:
                    items.append((n + m + alpha, (a * adb).scale(binom)))
                adb = h_ad(f, adb)
                alpha += 1
    return LocalSeries.build(f, u.trunc, items)


def series_equal(u: LocalSeries, v: LocalSeries) -> bool:
    """Equality in the localization, decided through the X -> f^{-1} oracle."""
    u._compat(v)
    return ((u - v).is_zero or (u - v).evaluate().is_zero)


# ---------------------------------------------------------------------------
# Checks.


def _diff_witness(u: LocalSeries, v: LocalSeries) -> str:
    diff = (u - v).evaluate()
    order = diff.min_hbar_order()
    return f"difference starts at hbar^{order}"


def check_localization_axioms(f: HElem, rng: random.Random,
                              triples: int = 5) -> list[CheckRecord]:
    """X inverts f on both sides and the product rule is associative,
    all decided mod hbar^M through the evaluation oracle."""
    records = []
    trunc = f.trunc
    X = LocalSeries.x_power(f)
    F = LocalSeries.from_helem(f, f)
    one = LocalSeries.one(f)
    for label, prod in (("X.f", localize_product(X, F)),
                        ("f.X", localize_product(F, X))):
        if series_equal(prod, one):
            records.append(passed(f"localize-inverse-{label}", ANCHOR_LOCAL_INV))
        else:
            records.append(failed(f"localize-inverse-{label}", ANCHOR_LOCAL_INV,
                                  _diff_witness(prod, one)))
    for t in range(triples):
        u = random_series(f, rng)
        v = random_series(f, rng)
        w = random_series(f, rng)
        lhs = localize_product(localize_product(u, v), w)
        rhs = localize_product(u, localize_product(v, w))
        if series_equal(lhs, rhs):
            records.append(passed(f"localize-assoc-{t}", ANCHOR_LOCAL_ASSOC))
        else:
            records.append(failed(f"localize-assoc-{t}", ANCHOR_LOCAL_ASSOC,
                                  _diff_witness(lhs, rhs)))
    return records


def check_x_derivative_identity(trunc: int) -> CheckRecord:
    """X D = D X + hbar X^2 for f = z and D = hbar d/dz, cross-checked
    against the explicit rational-operator identity with X -> 1/z."""
    z = RatFunc.var(1, 0)
    f = HElem.function(z, trunc)
    D = HElem.hbar_derivative(trunc)
    X = LocalSeries.x_power(f)
    lhs = localize_product(X, LocalSeries.from_helem(D, f))
    rhs = localize_product(LocalSeries.from_helem(D, f), X) + LocalSeries.build(
        f, trunc, [(2, HElem.hbar(trunc))])
    literal = (set(lhs.coeffs) == {1, 2}
               and lhs.coeffs[1] == D and lhs.coeffs[2] == HElem.hbar(trunc))
    # independent oracle: substitute X = 1/z and compare in A_h directly
    inv_z = HElem.function(RatFunc.const(1, 1) / z, trunc)
    oracle = (inv_z * D) == (D * inv_z + HElem.hbar(trunc) * (inv_z * inv_z))
    if literal and oracle and series_equal(lhs, rhs):
        return passed("localize-x-derivative", ANCHOR_XD)
    return failed("localize-x-derivative", ANCHOR_XD,
                  f"literal={literal} oracle={oracle}")


def check_lift_independence(f: HElem, g: HElem,
                            name: str = "localize-lift-independence") -> CheckRecord:
    """The geometric X-series for f' = f + hbar g inverts f' inside the
    f-localization, so both lifts generate the same algebra (spot check)."""
    trunc = f.trunc
    fprime = f + g.shift_hbar()
    X = LocalSeries.x_power(f)
    G = LocalSeries.from_helem(g.shift_hbar(), f)
    xg = localize_product(X, G)
    xprime = X
    power = X
    for _ in range(trunc):
        power = -localize_product(xg, power)
        if power.is_zero:
            break
        xprime = xprime + power
    expected = h_inverse(fprime)
    if xprime.evaluate() == expected:
        return passed(name, ANCHOR_LIFT_FREE)
    return failed(name, ANCHOR_LIFT_FREE, "series inverse does not match the lift")


def _truncate_xi_degree(f: RatFunc, bound: int) -> RatFunc:
    """Drop numerator terms of xi-degree > bound (denominators are xi-free)."""
    kept = {exps: c for exps, c in f.num.terms() if exps[1] <= bound}
    return RatFunc(MPoly.from_terms(2, kept), f.den)


def check_degeneration(a: HElem, b: HElem,
                       name: str = "hbar-degeneration") -> CheckRecord:
    """The hbar-linear part of a commutator reproduces the canonical bracket
    of the classical shadows (with the operator orientation {xi, z} = +1,
    i.e. minus the (x, xi) convention of the Poisson module).

    Working mod hbar^M only determines shadow coefficients of xi-degree up to
    M - 1, so both sides are compared on that window; they agree exactly
    there.
    """
    comm = a * b - b * a
    linear = HElem.build(a.trunc, (((k, m - 1), c) for (k, m), c in comm.terms.items()
                                   if m >= 1))
    sa = PoissonElem(1, a.shadow())
    sb = PoissonElem(1, b.shadow())
    want = _truncate_xi_degree(poisson_bracket(sb, sa).value, a.trunc - 1)
    got = _truncate_xi_degree(linear.shadow(), a.trunc - 1)
    if got == want:
        return passed(name, ANCHOR_DEGEN)
    return failed(name, ANCHOR_DEGEN,
                  f"hbar-linear shadow {got.to_text()} vs {want.to_text()}")


def random_helem(rng: random.Random, trunc: int, max_order: int = 2,
                 coeff_degree: int = 2, bound: int = 3) -> HElem:
    """Random Rees element with small polynomial coefficients."""
    items = []
    for k in range(max_order + 1):
        for m in range(k, min(trunc, k + 1) + 1):
            if rng.random() < 0.6:
                poly = MPoly.from_terms(1, [((e,), Fraction(rng.randint(-bound, bound)))
                                            for e in range(coeff_degree + 1)])
                if not poly.is_zero:
                    items.append(((k, m), RatFunc(poly)))
    elem = HElem.build(trunc, items)
    if elem.is_zero:
        return HElem.one(trunc)
    return elem


def random_series(f: HElem, rng: random.Random, max_x: int = 2) -> LocalSeries:
    items = []
    for k in range(max_x + 1):
        if rng.random() < 0.7:
            items.append((k, random_helem(rng, f.trunc)))
    series = LocalSeries.build(f, f.trunc, items)
    if series.is_zero:
        return LocalSeries.one(f)
    return series
