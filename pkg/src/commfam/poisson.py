"""Classical side: canonical Poisson brackets, determinant Hamiltonians,
Grassmann identities, hyperplane geometry, and the cone bracket on the line.

The symplectic 2n-space carries variables ordered (x_1, xi_1, ..., x_n, xi_n)
with the canonical bracket normalised to {x_j, xi_j} = +1:

    {f, g} = sum_j (df/dx_j dg/dxi_j - df/dxi_j dg/dx_j).

Each leg of a tensor power occupies one (x_j, xi_j) block, so functions on
distinct legs Poisson-commute.  All zero tests go through polynomial
cross-multiplication; nothing is approximated.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .exact import MPoly, QMatrix, RatFunc, det, rank
from .ncfam import perm_sign
from .reports import CheckRecord, failed, passed

ANCHOR_POISSON_COMMUTE = "{H_i, H_j} = 0"
ANCHOR_GRASSMANN = {
    2: "L(a,b)L(c,d) - L(a,c)L(b,d) + L(a,d)L(b,c) = 0",
    3: ("L(b,c,c')L(a,c,b')L(b,b',c') + L(b,c,b')L(c,b',c')L(a,b,c') "
        "- L(b,c,b')L(a,c,c')L(b,b',c') - L(b,c,c')L(c,b',c')L(a,b,b') = 0"),
    4: ("L(b,c,b',c')L(a,c,a',c')L(a,b,a',b') + L(b,c,a',c')L(a,c,a',b')L(a,b,b',c') "
        "+ L(b,c,a',b')L(a,c,b',c')L(a,b,a',c') - L(b,c,b',c')L(a,c,a',b')L(a,b,a',c') "
        "- L(b,c,a',b')L(a,c,a',c')L(a,b,b',c') - L(b,c,a',c')L(a,c,b',c')L(a,b,a',b') = 0"),
}
ANCHOR_INCIDENCE = "1 + sum_{i=1..g} (-1)^i h_i x_i(P_j) = 0"
ANCHOR_CONE_ALPHA = "i w grad_a(w') - i' w' grad_a(w) independent of a"


class DependentFamily(ValueError):
    """The chosen functions are linearly dependent over the rationals."""


class ZeroDelta0(ArithmeticError):
    """Delta_0 vanishes identically (points or functions degenerate)."""


class ZeroAlpha(ValueError):
    """The reference one-differential is zero."""


# ---------------------------------------------------------------------------
# Symplectic rational functions.


@dataclass(frozen=True)
class PoissonElem:
    """Rational function in 2n variables ordered (x_1, xi_1, ..., x_n, xi_n)."""

    n: int
    value: RatFunc

    def __post_init__(self):
        if self.value.nvars != 2 * self.n:
            raise ValueError(f"expected {2 * self.n} variables, got {self.value.nvars}")

    @classmethod
    def x(cls, n: int, j: int) -> "PoissonElem":
        return cls(n, RatFunc.var(2 * n, 2 * (j - 1)))

    @classmethod
    def xi(cls, n: int, j: int) -> "PoissonElem":
        return cls(n, RatFunc.var(2 * n, 2 * (j - 1) + 1))

    @classmethod
    def const(cls, n: int, c) -> "PoissonElem":
        return cls(n, RatFunc.const(2 * n, c))

    @classmethod
    def from_leg(cls, f: RatFunc, leg: int, n: int) -> "PoissonElem":
        """Place a two-variable function of (x, xi) on symplectic leg ``leg``."""
        if f.nvars != 2:
            raise ValueError("leg functions live in two variables (x, xi)")
        return cls(n, f.embed(2 * n, [2 * (leg - 1), 2 * (leg - 1) + 1]))

    @property
    def is_zero(self) -> bool:
        return self.value.is_zero

    def _lift(self, other) -> "PoissonElem":
        if isinstance(other, PoissonElem):
            if other.n != self.n:
                raise ValueError("leg counts differ")
            return other
        return PoissonElem(self.n, RatFunc.const(2 * self.n, other))

    def __add__(self, other):
        other = self._lift(other)
        return PoissonElem(self.n, self.value + other.value)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        return PoissonElem(self.n, self.value - other.value)

    def __neg__(self):
        return PoissonElem(self.n, -self.value)

    def __mul__(self, other):
        other = self._lift(other)
        return PoissonElem(self.n, self.value * other.value)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        return PoissonElem(self.n, self.value / other.value)

    def __eq__(self, other):
        other = self._lift(other)
        return self.value == other.value

    __hash__ = None


def _pairwise_kernel(u: MPoly, v: MPoly, n: int) -> MPoly:
    """P(u, v) = sum_j (u_x_j v_xi_j - u_xi_j v_x_j) on polynomials."""
    total = MPoly.zero(2 * n)
    for j in range(n):
        x, xi = 2 * j, 2 * j + 1
        total = total + (u.partial(x) * v.partial(xi) - u.partial(xi) * v.partial(x))
    return total


def poisson_bracket(f: PoissonElem, g: PoissonElem) -> PoissonElem:
    """Canonical bracket, exact on rational functions.

    Quotients are handled by the extension laws of the fraction field
    ({1/f, g} = -{f, g}/f^2 and its consequences), organised so that the
    common-denominator case costs one cubic instead of a quartic power.
    """
    if f.n != g.n:
        raise ValueError("leg counts differ")
    n = f.n
    a, c = f.value.num, f.value.den
    b, d = g.value.num, g.value.den
    if c == d:
        num = (c * _pairwise_kernel(a, b, n)
               - a * _pairwise_kernel(c, b, n)
               - b * _pairwise_kernel(a, c, n))
        return PoissonElem(n, RatFunc(num, c * c * c))
    num = MPoly.zero(2 * n)
    for j in range(n):
        x, xi = 2 * j, 2 * j + 1
        fx = a.partial(x) * c - a * c.partial(x)
        fxi = a.partial(xi) * c - a * c.partial(xi)
        gx = b.partial(x) * d - b * d.partial(x)
        gxi = b.partial(xi) * d - b * d.partial(xi)
        num = num + (fx * gxi - fxi * gx)
    return PoissonElem(n, RatFunc(num, (c * c) * (d * d)))


# ---------------------------------------------------------------------------
# Determinant Hamiltonians.


def _clear_denominators(fs: list[RatFunc]) -> list[MPoly]:
    common = MPoly.one(fs[0].nvars)
    for f in fs:
        common = common * f.den
    cleared = []
    for f in fs:
        others = MPoly.one(f.nvars)
        for g in fs:
            if g is not f:
                others = others * g.den
        cleared.append(f.num * others)
    return cleared


def _assert_independent(fs: list[RatFunc]) -> None:
    """Exact rank test on the coefficient vectors, after clearing denominators."""
    polys = fs if all(f.is_polynomial() for f in fs) else None
    cleared = [f.num for f in polys] if polys else _clear_denominators(fs)
    monomials = sorted({m for p in cleared for m, _ in p.terms()})
    index = {m: i for i, m in enumerate(monomials)}
    rows = []
    for p in cleared:
        row = [Fraction(0)] * len(monomials)
        for m, coeff in p.terms():
            row[index[m]] = coeff
        rows.append(row)
    if rank(QMatrix.from_rows(rows)) < len(fs):
        raise DependentFamily("functions are linearly dependent over Q")


def classical_hamiltonians(fs: list[RatFunc]) -> list[PoissonElem]:
    """H_i = Delta_i / Delta_0 on the n-fold symplectic power.

    ``fs`` lists n+1 rational functions of one (x, xi) pair; Delta_i is the
    n x n determinant whose (row, leg) entry places f_row on symplectic leg
    ``leg``, rows running over all indices except i.  Raises
    ``DependentFamily`` or ``ZeroDelta0`` when the hypotheses fail.
    """
    n = len(fs) - 1
    if n < 1:
        raise ValueError("need at least two functions")
    for f in fs:
        if f.nvars != 2:
            raise ValueError("family functions live in two variables (x, xi)")
    _assert_independent(fs)
    nv = 2 * n
    if all(f.is_polynomial() for f in fs):
        # determinants stay polynomial; every H_i shares the Delta_0 denominator
        embedded = [[f.num.embed(nv, [2 * j, 2 * j + 1]) for j in range(n)] for f in fs]
        minors = [_poly_minor_det(embedded, skip, n) for skip in range(n + 1)]
        if minors[0].is_zero:
            raise ZeroDelta0("Delta_0 = 0")
        return [PoissonElem(n, RatFunc(minors[i], minors[0])) for i in range(1, n + 1)]
    embedded = [[f.embed(nv, [2 * j, 2 * j + 1]) for j in range(n)] for f in fs]
    minors = [_ratfunc_minor_det(embedded, skip, n, nv) for skip in range(n + 1)]
    if minors[0].is_zero:
        raise ZeroDelta0("Delta_0 = 0")
    return [PoissonElem(n, minors[i] / minors[0]) for i in range(1, n + 1)]


def _poly_minor_det(embedded: list[list[MPoly]], skip: int, n: int) -> MPoly:
    rows = [r for r in range(n + 1) if r != skip]
    total = MPoly.zero(2 * n)
    for perm in itertools.permutations(range(n)):
        term = MPoly.one(2 * n)
        for t in range(n):
            term = term * embedded[rows[t]][perm[t]]
        total = total + (term if perm_sign(perm) > 0 else -term)
    return total


def _ratfunc_minor_det(embedded: list[list[RatFunc]], skip: int, n: int, nv: int) -> RatFunc:
    rows = [r for r in range(n + 1) if r != skip]
    total = RatFunc.const(nv, 0)
    for perm in itertools.permutations(range(n)):
        term = RatFunc.const(nv, 1)
        for t in range(n):
            term = term * embedded[rows[t]][perm[t]]
        total = total + (term if perm_sign(perm) > 0 else -term)
    return total


def check_poisson_commute(hs: list[PoissonElem],
                          name: str = "poisson-commute") -> CheckRecord:
    """Every pairwise bracket must vanish, decided by cross-multiplication."""
    for i in range(len(hs)):
        for j in range(i + 1, len(hs)):
            br = poisson_bracket(hs[i], hs[j])
            if not br.is_zero:
                text = br.value.to_text()
                if len(text) > 200:
                    text = text[:200] + "..."
                return failed(name, ANCHOR_POISSON_COMMUTE,
                              f"{{H_{i + 1}, H_{j + 1}}} = {text}")
    return passed(name, ANCHOR_POISSON_COMMUTE)


# ---------------------------------------------------------------------------
# Grassmann identities (decided exactly on rational vectors).


@dataclass(frozen=True)
class WedgeForm:
    """Alternating k-form on a rational m-space, coefficients on increasing
    k-tuples of basis indices.

    The three-term, five-vector and six-vector identities decided by
    ``check_grassmann`` hold for forms arising as systems of minors, i.e.
    decomposable forms; ``from_covectors`` builds exactly these.
    """

    dim: int
    arity: int
    coeffs: dict[tuple[int, ...], Fraction]

    def __post_init__(self):
        for idx, c in self.coeffs.items():
            if len(idx) != self.arity or list(idx) != sorted(set(idx)):
                raise ValueError(f"index tuple {idx} must be strictly increasing")
            if not 0 <= idx[0] <= idx[-1] < self.dim:
                raise ValueError(f"index tuple {idx} out of range")
            if c == 0:
                raise ValueError("zero coefficients must not be stored")

    @classmethod
    def from_covectors(cls, ws: list[list[Fraction]]) -> "WedgeForm":
        """The decomposable form w_1 ^ ... ^ w_k."""
        k = len(ws)
        m = len(ws[0])
        coeffs = {}
        for idx in itertools.combinations(range(m), k):
            minor = _small_det([[w[i] for i in idx] for w in ws])
            if minor != 0:
                coeffs[idx] = minor
        return cls(m, k, coeffs)

    def __call__(self, *vectors) -> Fraction:
        if len(vectors) != self.arity:
            raise ValueError(f"form expects {self.arity} vectors")
        for v in vectors:
            if len(v) != self.dim:
                raise ValueError("vector dimension mismatch")
        total = Fraction(0)
        for idx, c in self.coeffs.items():
            total += c * _small_det([[v[i] for i in idx] for v in vectors])
        return total


def _small_det(rows) -> Fraction:
    k = len(rows)
    total = Fraction(0)
    for perm in itertools.permutations(range(k)):
        term = Fraction(1)
        for i in range(k):
            term *= rows[i][perm[i]]
        total += term if perm_sign(perm) > 0 else -term
    return total


def check_grassmann(form: WedgeForm, vectors: list[list[Fraction]],
                    name: str = "grassmann") -> CheckRecord:
    """Evaluate the alternating-form identity for the form's arity; must be 0."""
    k = form.arity
    anchor = ANCHOR_GRASSMANN[k]
    L = form
    if k == 2:
        if len(vectors) != 4:
            raise ValueError("arity 2 takes four vectors")
        a, b, c, d = vectors
        value = L(a, b) * L(c, d) - L(a, c) * L(b, d) + L(a, d) * L(b, c)
    elif k == 3:
        if len(vectors) != 5:
            raise ValueError("arity 3 takes five vectors")
        a, b, c, bp, cp = vectors
        value = (L(b, c, cp) * L(a, c, bp) * L(b, bp, cp)
                 + L(b, c, bp) * L(c, bp, cp) * L(a, b, cp)
                 - L(b, c, bp) * L(a, c, cp) * L(b, bp, cp)
                 - L(b, c, cp) * L(c, bp, cp) * L(a, b, bp))
    elif k == 4:
        if len(vectors) != 6:
            raise ValueError("arity 4 takes six vectors")
        a, b, c, ap, bp, cp = vectors
        value = (L(b, c, bp, cp) * L(a, c, ap, cp) * L(a, b, ap, bp)
                 + L(b, c, ap, cp) * L(a, c, ap, bp) * L(a, b, bp, cp)
                 + L(b, c, ap, bp) * L(a, c, bp, cp) * L(a, b, ap, cp)
                 - L(b, c, bp, cp) * L(a, c, ap, bp) * L(a, b, ap, cp)
                 - L(b, c, ap, bp) * L(a, c, ap, cp) * L(a, b, bp, cp)
                 - L(b, c, ap, cp) * L(a, c, bp, cp) * L(a, b, ap, bp))
    else:
        raise ValueError("supported arities are 2, 3, 4")
    if value == 0:
        return passed(name, anchor)
    return failed(name, anchor, f"identity value = {value}")


def random_vector(rng: random.Random, m: int, bound: int = 5) -> list[Fraction]:
    return [Fraction(rng.randint(-bound, bound)) for _ in range(m)]


def random_decomposable(rng: random.Random, m: int, k: int,
                        bound: int = 5) -> WedgeForm:
    """A nonzero decomposable k-form from random rational covectors."""
    while True:
        form = WedgeForm.from_covectors([random_vector(rng, m, bound) for _ in range(k)])
        if form.coeffs:
            return form


# ---------------------------------------------------------------------------
# Hyperplane through g points of affine g-space.


def hyperplane_coefficients(points: list[list]) -> list[Fraction]:
    """Exact (h_1, ..., h_g) with h_i = Delta_i / Delta_0.

    Delta_i deletes row i of the (g+1) x g array whose row 0 is all ones and
    whose row alpha >= 1 lists the alpha-th affine coordinate of each point.
    The affine coordinates of the spanned hyperplane are ((-1)^i h_i).
    """
    g = len(points)
    rows = [[Fraction(1)] * g]
    for alpha in range(1, g + 1):
        if any(len(p) != g for p in points):
            raise ValueError("points must have g coordinates")
        rows.append([Fraction(p[alpha - 1]) for p in points])
    minors = []
    for skip in range(g + 1):
        m = QMatrix.from_rows([rows[r] for r in range(g + 1) if r != skip])
        minors.append(det(m))
    if minors[0] == 0:
        raise ZeroDelta0("the points do not span (Delta_0 = 0)")
    return [minors[i] / minors[0] for i in range(1, g + 1)]


def check_hyperplane_incidence(points: list[list], hs: list[Fraction],
                               name: str = "hyperplane-incidence") -> CheckRecord:
    """Each point satisfies 1 + sum_i (-1)^i h_i x_i = 0 exactly.

    This is the cofactor expansion of a determinant with a repeated column,
    so it is the defining property of the spanned hyperplane.
    """
    g = len(points)
    for j, p in enumerate(points):
        value = Fraction(1)
        for i in range(1, g + 1):
            term = hs[i - 1] * Fraction(p[i - 1])
            value += term if i % 2 == 0 else -term
        if value != 0:
            return failed(name, ANCHOR_INCIDENCE,
                          f"point {j + 1}: incidence value = {value}")
    return passed(name, ANCHOR_INCIDENCE)


# ---------------------------------------------------------------------------
# Cone bracket for rational differentials on the projective line.


@dataclass(frozen=True)
class ConeDifferential:
    """A rational weight-i differential f(z) (dz)^i on the line."""

    f: RatFunc  # one variable z
    weight: int

    def __post_init__(self):
        if self.f.nvars != 1:
            raise ValueError("cone differentials live on a single chart z")

    def __add__(self, other: "ConeDifferential") -> "ConeDifferential":
        if self.weight != other.weight:
            raise ValueError("weights differ")
        return ConeDifferential(self.f + other.f, self.weight)

    def __neg__(self) -> "ConeDifferential":
        return ConeDifferential(-self.f, self.weight)

    def __sub__(self, other: "ConeDifferential") -> "ConeDifferential":
        return self + (-other)

    @property
    def is_zero(self) -> bool:
        return self.f.is_zero


def nabla(alpha: ConeDifferential, omega: ConeDifferential) -> ConeDifferential:
    """grad_alpha(w) = alpha^i d(w / alpha^i): weight i in, weight i+1 out."""
    if alpha.weight != 1:
        raise ValueError("the reference differential must have weight 1")
    if alpha.f.is_zero:
        raise ZeroAlpha("reference differential is zero")
    i = omega.weight
    scaled = omega.f / (alpha.f ** i) if i else omega.f
    derived = scaled.partial(0)
    result = (alpha.f ** i) * derived if i else derived
    return ConeDifferential(result, i + 1)


def cone_bracket(omega: ConeDifferential, omega2: ConeDifferential,
                 alpha: ConeDifferential) -> ConeDifferential:
    """{w, w'} = i w grad_alpha(w') - i' w' grad_alpha(w), weight i + i' + 1.

    The value does not depend on the choice of alpha; under the substitution
    f(z)(dz)^i <-> f(z) xi^(-i) it agrees with the canonical (z, xi) bracket
    with no extra sign (see ``cone_to_symplectic``).
    """
    i, i2 = omega.weight, omega2.weight
    lhs = omega.f * nabla(alpha, omega2).f * i
    rhs = omega2.f * nabla(alpha, omega).f * i2
    return ConeDifferential(lhs - rhs, i + i2 + 1)


def cone_to_symplectic(omega: ConeDifferential) -> RatFunc:
    """f(z) (dz)^i -> f(x) xi^(-i) in the two variables (x, xi)."""
    lifted = omega.f.embed(2, [0])
    return lifted * (RatFunc.var(2, 1) ** (-omega.weight))


def check_alpha_independence(omega: ConeDifferential, omega2: ConeDifferential,
                             alphas: list[ConeDifferential],
                             name: str = "cone-alpha-independence") -> CheckRecord:
    """The bracket of a fixed pair agrees across all reference differentials."""
    if len(alphas) < 2:
        raise ValueError("need at least two reference differentials")
    first = cone_bracket(omega, omega2, alphas[0])
    for alt in alphas[1:]:
        other = cone_bracket(omega, omega2, alt)
        if not (first - other).is_zero:
            return failed(name, ANCHOR_CONE_ALPHA,
                          f"brackets differ: {first.f.to_text()} vs {other.f.to_text()}")
    return passed(name, ANCHOR_CONE_ALPHA)
