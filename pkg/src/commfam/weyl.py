"""Rational differential operators in N variables, exactly.

An operator is a finite sum  sum_a  f_a(z_1..z_N) D^a  over derivative
multi-indices a, with rational-function coefficients.  Composition follows
the multi-index Leibniz rule and stays exact; the symbol map sends the top
total-degree part to a polynomial in (xi_1..xi_N) over Q(z_1..z_N), matching
the variable layout of the Poisson module so symbols can be bracketed there.

Two constructions of commuting families live here:

* ``rational_hamiltonians`` -- the closed-form family attached to N distinct
  marked points P_1..P_N and a one-variable seed operator T:

      H_k = sum_i [prod_{(i',k'): i'=i or k'=k} (z_i' - P_k')
                   / prod_{i' != i} (z_i - z_i')] * T_{z_i}.

* ``hamiltonians_from_basis`` -- the function-determinant (cofactor) form
  built from N one-variable functions: with F = det(f_i(z_j)) and F_i^(j)
  the minor omitting f_i and leg j,

      H_i = sum_j (-1)^(j+1) (F_i^(j) / F) * T_{z_j}.

On the basis f_i = 1/(z - P_i) the two agree exactly up to the constant
c_k = (-1)^(k+1) prod_{l != k} (P_l - P_k) per index k, i.e.
``c_k * hamiltonians_from_basis(...)[k-1] == rational_hamiltonians(...)[k-1]``.
That constant is fixed by the marked points and is asserted, not normalised
away.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import MPoly, RatFunc
from .ncfam import perm_sign
from .poisson import PoissonElem, classical_hamiltonians, poisson_bracket
from .reports import CheckRecord, failed, passed

ANCHOR_OP_COMMUTE = "[H_k, H_l] = 0"
ANCHOR_CLOSED_FORM = ("H_k = sum_i [prod_{(i',k'): i'=i or k'=k}(z_i' - P_k') "
                      "/ prod_{i' != i}(z_i - z_i')] T_{z_i}")
ANCHOR_SYMBOL_MATCH = "symbol(H_k) = c_k * H_k^cl (c_k fixed by the points)"
ANCHOR_SYMBOL_COMMUTE = "{symbol(H_k), symbol(H_l)} = 0"
ANCHOR_BASIS_MATCH = ("sum_j (-1)^(j+1) (F_i^(j)/F) T_{z_j} matches the "
                      "closed form up to c_k")


class ZeroOperator(ValueError):
    """The zero operator has no symbol."""


class ZeroPhi(ArithmeticError):
    """The function determinant of the chosen basis vanishes."""


def _multi_binom(alpha: tuple[int, ...], gamma: tuple[int, ...]) -> int:
    out = 1
    for a, g in zip(alpha, gamma):
        out *= math.comb(a, g)
    return out


@dataclass(frozen=True)
class RatDiffOp:
    """Finite map from derivative multi-indices to rational coefficients."""

    nvars: int
    coeffs: dict[tuple[int, ...], RatFunc]

    def __post_init__(self):
        for alpha, c in self.coeffs.items():
            if len(alpha) != self.nvars or any(a < 0 for a in alpha):
                raise ValueError(f"bad multi-index {alpha}")
            if c.nvars != self.nvars:
                raise ValueError("coefficient variable count mismatch")
            if c.is_zero:
                raise ValueError("zero coefficients must not be stored")

    # -- constructors -------------------------------------------------------

    @classmethod
    def build(cls, nvars, items) -> "RatDiffOp":
        """Collect (multi-index, coefficient) pairs, dropping zero sums."""
        acc: dict[tuple[int, ...], RatFunc] = {}
        for alpha, c in items:
            alpha = tuple(alpha)
            if alpha in acc:
                acc[alpha] = acc[alpha] + c
            else:
                acc[alpha] = c
        return cls(nvars, {a: c for a, c in acc.items() if not c.is_zero})

    @classmethod
    def zero(cls, nvars: int) -> "RatDiffOp":
        return cls(nvars, {})

    @classmethod
    def identity(cls, nvars: int) -> "RatDiffOp":
        return cls.multiplication(RatFunc.const(nvars, 1))

    @classmethod
    def multiplication(cls, f: RatFunc) -> "RatDiffOp":
        if f.is_zero:
            return cls.zero(f.nvars)
        return cls(f.nvars, {(0,) * f.nvars: f})

    @classmethod
    def partial(cls, nvars: int, j: int, order: int = 1) -> "RatDiffOp":
        """The operator d^order/dz_j^order (legs are 1-based)."""
        alpha = tuple(order if t == j - 1 else 0 for t in range(nvars))
        return cls(nvars, {alpha: RatFunc.const(nvars, 1)})

    def lift_to_leg(self, leg: int, nvars: int) -> "RatDiffOp":
        """Embed a one-variable operator so it acts in variable z_leg."""
        if self.nvars != 1:
            raise ValueError("only one-variable operators can be lifted")
        if not 1 <= leg <= nvars:
            raise ValueError("leg out of range")
        out = {}
        for (k,), c in self.coeffs.items():
            alpha = tuple(k if t == leg - 1 else 0 for t in range(nvars))
            out[alpha] = c.embed(nvars, [leg - 1])
        return RatDiffOp(nvars, out)

    # -- ring operations ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def order(self) -> int:
        """Top total derivative degree; -1 for the zero operator."""
        return max((sum(a) for a in self.coeffs), default=-1)

    def __add__(self, other: "RatDiffOp") -> "RatDiffOp":
        self._compat(other)
        return RatDiffOp.build(self.nvars,
                               itertools.chain(self.coeffs.items(), other.coeffs.items()))

    def __sub__(self, other: "RatDiffOp") -> "RatDiffOp":
        return self + (-other)

    def __neg__(self) -> "RatDiffOp":
        return RatDiffOp(self.nvars, {a: -c for a, c in self.coeffs.items()})

    def scale(self, factor) -> "RatDiffOp":
        if isinstance(factor, (int, Fraction)):
            factor = RatFunc.const(self.nvars, factor)
        if factor.is_zero:
            return RatDiffOp.zero(self.nvars)
        return RatDiffOp(self.nvars, {a: c * factor for a, c in self.coeffs.items()})

    def _compat(self, other: "RatDiffOp") -> None:
        if self.nvars != other.nvars:
            raise ValueError("operator variable counts differ")

    def __eq__(self, other):
        if not isinstance(other, RatDiffOp):
            return NotImplemented
        self._compat(other)
        if set(self.coeffs) != set(other.coeffs):
            return (self - other).is_zero
        return all(self.coeffs[a] == other.coeffs[a] for a in self.coeffs)

    __hash__ = None

    def apply(self, f: RatFunc) -> RatFunc:
        """Act on a rational function: the defining action of the algebra."""
        if f.nvars != self.nvars:
            raise ValueError("function variable count mismatch")
        total = RatFunc.const(self.nvars, 0)
        for alpha, c in self.coeffs.items():
            g = f
            for j, k in enumerate(alpha):
                for _ in range(k):
                    g = g.partial(j)
            total = total + c * g
        return total

    def to_text(self) -> str:
        """One line per term: ``a_1 .. a_N | num | den`` (sparse polynomials)."""
        lines = []
        for alpha in sorted(self.coeffs):
            c = self.coeffs[alpha]
            idx = " ".join(str(a) for a in alpha)
            names = [f"z{i + 1}" for i in range(self.nvars)]
            lines.append(f"{idx} | {c.num.to_text(names)} | {c.den.to_text(names)}")
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text: str, nvars: int) -> "RatDiffOp":
        names = [f"z{i + 1}" for i in range(nvars)]
        out = {}
        for line in text.strip().splitlines():
            if not line.strip():
                continue
            idx_part, num_part, den_part = (p.strip() for p in line.split("|"))
            alpha = tuple(int(t) for t in idx_part.split())
            num = MPoly.from_text(num_part, nvars, names)
            den = MPoly.from_text(den_part, nvars, names)
            out[alpha] = RatFunc(num, den)
        return cls(nvars, out)

    def __repr__(self):
        if self.is_zero:
            return "RatDiffOp(0)"
        return f"RatDiffOp:\n{self.to_text()}"


def do_compose(a: RatDiffOp, b: RatDiffOp) -> RatDiffOp:
    """Operator composition by the multi-index Leibniz rule, exact."""
    a._compat(b)
    nvars = a.nvars
    derivative_cache: dict[tuple[tuple[int, ...], tuple[int, ...]], RatFunc] = {}

    def derived(beta: tuple[int, ...], gamma: tuple[int, ...]) -> RatFunc:
        key = (beta, gamma)
        if key in derivative_cache:
            return derivative_cache[key]
        if all(g == 0 for g in gamma):
            value = b.coeffs[beta]
        else:
            j = next(i for i, g in enumerate(gamma) if g > 0)
            prev = tuple(g - (1 if i == j else 0) for i, g in enumerate(gamma))
            value = derived(beta, prev).partial(j)
        derivative_cache[key] = value
        return value

    items = []
    for alpha, f in a.coeffs.items():
        for beta, _ in b.coeffs.items():
            for gamma in itertools.product(*(range(x + 1) for x in alpha)):
                g = derived(beta, gamma)
                if g.is_zero:
                    continue
                coeff = f * g
                binom = _multi_binom(alpha, gamma)
                if binom != 1:
                    coeff = coeff * binom
                target = tuple(x - y + z for x, y, z in zip(alpha, gamma, beta))
                items.append((target, coeff))
    return RatDiffOp.build(nvars, items)


def do_commutator(a: RatDiffOp, b: RatDiffOp) -> RatDiffOp:
    return do_compose(a, b) - do_compose(b, a)


def symbol(a: RatDiffOp) -> RatFunc:
    """Top-degree part with each d/dz_j replaced by xi_j.

    Returns a rational function in 2N variables laid out (z_1, xi_1, ...,
    z_N, xi_N), polynomial in the xi's, ready for the canonical bracket.
    """
    if a.is_zero:
        raise ZeroOperator("the zero operator has no symbol")
    top = a.order()
    nv = 2 * a.nvars
    total = RatFunc.const(nv, 0)
    for alpha, c in a.coeffs.items():
        if sum(alpha) != top:
            continue
        term = c.embed(nv, [2 * j for j in range(a.nvars)])
        for j, k in enumerate(alpha):
            if k:
                term = term * (RatFunc.var(nv, 2 * j + 1) ** k)
        total = total + term
    return total


# ---------------------------------------------------------------------------
# The two families.


@dataclass(frozen=True)
class OpFamilySpec:
    """N distinct marked points plus a one-variable seed operator."""

    N: int
    points: tuple[Fraction, ...]
    T: RatDiffOp

    def __post_init__(self):
        if len(self.points) != self.N:
            raise ValueError("need one point per leg")
        if len(set(self.points)) != self.N:
            raise ValueError("marked points must be pairwise distinct")
        if self.T.nvars != 1:
            raise ValueError("the seed operator acts on one variable")

    @classmethod
    def make(cls, points, T: RatDiffOp) -> "OpFamilySpec":
        return cls(len(points), tuple(Fraction(p) for p in points), T)


def _linear(nvars: int, j: int, shift: Fraction) -> MPoly:
    """The polynomial z_j - shift (legs 1-based)."""
    return MPoly.from_terms(nvars, [
        (tuple(1 if t == j - 1 else 0 for t in range(nvars)), Fraction(1)),
        ((0,) * nvars, -shift),
    ])


def closed_form_coefficient(spec: OpFamilySpec, i: int, k: int) -> RatFunc:
    """Coefficient of T_{z_i} in H_k, literally from the displayed product."""
    N = spec.N
    num = MPoly.one(N)
    for ip in range(1, N + 1):
        for kp in range(1, N + 1):
            if ip == i or kp == k:
                num = num * _linear(N, ip, spec.points[kp - 1])
    den = MPoly.one(N)
    for ip in range(1, N + 1):
        if ip != i:
            den = den * MPoly.from_terms(N, [
                (tuple(1 if t == i - 1 else 0 for t in range(N)), Fraction(1)),
                (tuple(1 if t == ip - 1 else 0 for t in range(N)), Fraction(-1)),
            ])
    return RatFunc(num, den)


def rational_hamiltonians(spec: OpFamilySpec) -> list[RatDiffOp]:
    """The closed-form commuting family H_1..H_N for the marked points."""
    out = []
    for k in range(1, spec.N + 1):
        terms = RatDiffOp.zero(spec.N)
        for i in range(1, spec.N + 1):
            q = closed_form_coefficient(spec, i, k)
            lifted = spec.T.lift_to_leg(i, spec.N)
            terms = terms + do_compose(RatDiffOp.multiplication(q), lifted)
        out.append(terms)
    return out


def hamiltonians_from_basis(fs: list[RatFunc], T: RatDiffOp) -> list[RatDiffOp]:
    """Cofactor family from one-variable functions f_1..f_N and seed T.

    With F = det(f_i(z_j)) and F_i^(j) the minor omitting row i and leg j
    (rows and legs in increasing order), returns

        H_i = sum_j (-1)^(j+1) (F_i^(j) / F) * T_{z_j}.

    Raises ``ZeroPhi`` when F vanishes identically.
    """
    N = len(fs)
    for f in fs:
        if f.nvars != 1:
            raise ValueError("basis functions are one-variable")
    if T.nvars != 1:
        raise ValueError("the seed operator acts on one variable")
    table = [[fs[i].embed(N, [j]) for j in range(N)] for i in range(N)]
    phi = _det_ratfunc(table, list(range(N)), list(range(N)), N)
    if phi.is_zero:
        raise ZeroPhi("function determinant det(f_i(z_j)) = 0")
    lifted = [T.lift_to_leg(j, N) for j in range(1, N + 1)]
    out = []
    for i in range(N):
        h = RatDiffOp.zero(N)
        for j in range(N):
            minor = _det_ratfunc(table,
                                 [r for r in range(N) if r != i],
                                 [c for c in range(N) if c != j], N)
            coeff = minor / phi
            if j % 2 == 1:
                coeff = -coeff
            if coeff.is_zero:
                continue
            h = h + do_compose(RatDiffOp.multiplication(coeff), lifted[j])
        out.append(h)
    return out


def _det_ratfunc(table, rows, cols, nvars) -> RatFunc:
    k = len(rows)
    total = RatFunc.const(nvars, 0)
    for perm in itertools.permutations(range(k)):
        term = RatFunc.const(nvars, 1)
        for t in range(k):
            term = term * table[rows[t]][cols[perm[t]]]
        total = total + (term if perm_sign(perm) > 0 else -term)
    return total


def basis_match_constant(points, k: int) -> Fraction:
    """c_k = (-1)^(k+1) prod_{l != k} (P_l - P_k)."""
    c = Fraction(-1) ** (k + 1)
    for l, p in enumerate(points, start=1):
        if l != k:
            c *= Fraction(p) - Fraction(points[k - 1])
    return c


# ---------------------------------------------------------------------------
# Checks.


def check_commute(hs: list[RatDiffOp], name: str = "operator-commute") -> CheckRecord:
    for a in range(len(hs)):
        for b in range(a + 1, len(hs)):
            comm = do_commutator(hs[a], hs[b])
            if not comm.is_zero:
                alpha = sorted(comm.coeffs)[0]
                witness = f"[H_{a + 1}, H_{b + 1}] term {alpha}: {comm.coeffs[alpha].to_text()}"
                return failed(name, ANCHOR_OP_COMMUTE, witness[:300])
    return passed(name, ANCHOR_OP_COMMUTE)


def principal_symbol_1var(T: RatDiffOp) -> RatFunc:
    """sigma(T) as a rational function of (x, xi) (two variables)."""
    if T.nvars != 1:
        raise ValueError("expects a one-variable operator")
    d = T.order()
    nv = 2
    total = RatFunc.const(nv, 0)
    for (k,), c in T.coeffs.items():
        if k == d:
            total = total + c.embed(nv, [0]) * (RatFunc.var(nv, 1) ** k)
    return total


def classical_family_for(spec: OpFamilySpec) -> list[RatFunc]:
    """f_0 = 1 and f_i = 1 / ((x - P_i) sigma(T)): the classical data whose
    determinant Hamiltonians the operator symbols must reproduce."""
    sigma = principal_symbol_1var(spec.T)
    one = RatFunc.const(2, 1)
    fs = [one]
    x = RatFunc.var(2, 0)
    for p in spec.points:
        fs.append(one / ((x - RatFunc.const(2, p)) * sigma))
    return fs


def check_symbol_matches_classical(hs: list[RatDiffOp], spec: OpFamilySpec,
                                   name: str = "symbol-vs-classical") -> list[CheckRecord]:
    """symbol(H_k) equals c_k times the determinant Hamiltonian, plus the
    independent cross-check that the symbols Poisson-commute."""
    records = []
    classical = classical_hamiltonians(classical_family_for(spec))
    symbols = [symbol(h) for h in hs]
    for k in range(1, spec.N + 1):
        c_k = basis_match_constant(spec.points, k)
        want = classical[k - 1].value * c_k
        if symbols[k - 1] == want:
            records.append(passed(f"{name}-H{k}", ANCHOR_SYMBOL_MATCH))
        else:
            records.append(failed(
                f"{name}-H{k}", ANCHOR_SYMBOL_MATCH,
                f"symbol(H_{k}) != c_{k} * H^cl_{k} with c_{k} = {c_k}"))
    elems = [PoissonElem(spec.N, s) for s in symbols]
    for a in range(len(elems)):
        for b in range(a + 1, len(elems)):
            br = poisson_bracket(elems[a], elems[b])
            if br.is_zero:
                records.append(passed(f"{name}-bracket-{a + 1}{b + 1}",
                                      ANCHOR_SYMBOL_COMMUTE))
            else:
                records.append(failed(f"{name}-bracket-{a + 1}{b + 1}",
                                      ANCHOR_SYMBOL_COMMUTE,
                                      f"bracket = {br.value.to_text()[:200]}"))
    return records


def check_basis_matches_closed_form(spec: OpFamilySpec,
                                    name: str = "basis-vs-closed-form") -> list[CheckRecord]:
    """On f_i = 1/(z - P_i) the cofactor family times c_k is the closed form."""
    one = RatFunc.const(1, 1)
    z = RatFunc.var(1, 0)
    fs = [one / (z - RatFunc.const(1, p)) for p in spec.points]
    from_basis = hamiltonians_from_basis(fs, spec.T)
    closed = rational_hamiltonians(spec)
    records = []
    for k in range(1, spec.N + 1):
        c_k = basis_match_constant(spec.points, k)
        if from_basis[k - 1].scale(c_k) == closed[k - 1]:
            records.append(passed(f"{name}-H{k}", ANCHOR_BASIS_MATCH))
        else:
            records.append(failed(f"{name}-H{k}", ANCHOR_BASIS_MATCH,
                                  f"mismatch at k = {k}, c_k = {c_k}"))
    return records
