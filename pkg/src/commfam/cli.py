"""Scenario runner: seeded verification suites with machine-readable reports.

A scenario is a kind plus a flat parameter map and a seed.  Config files are
plain text, one ``key = value`` per line (``#`` comments allowed); lists are
written in brackets, rationals as ``p/q``.  Example::

    kind = weyl-rational
    seed = 3
    N = 2
    T = d1
    points = [0, 1]
    trials = 5

Reports are JSON documents (see ``reports``).  Identical (kind, params, seed)
produce byte-identical reports apart from the duration field.  Trials are
seeded independently through SplitMix64, so they are order-independent and
``--jobs`` can fan them out across processes without changing any result.

Seed-operator grammar for ``T``: ``d`` or ``d<k>`` for the k-th derivative,
``z*d1+<c>`` for the first-order operator z d/dz + c with rational c.
"""

from __future__ import annotations

import argparse
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import __version__, exact, ncfam, poisson, quantize, weyl
from .exact import QMatrix, Rat, RatFunc, Singular, det, mat_inverse
from .reports import (CheckRecord, Report, emit_report, failed, passed,
                      skipped)
from .rng import trial_rng


class ConfigError(ValueError):
    """A scenario configuration is invalid; the message names the field."""


@dataclass(frozen=True)
class Scenario:
    kind: str
    params: dict
    seed: int


# ---------------------------------------------------------------------------
# Config parsing.


def _parse_scalar(text: str):
    text = text.strip()
    if re.fullmatch(r"-?\d+", text):
        return int(text)
    if re.fullmatch(r"-?\d+/\d+", text):
        return text  # keep rationals as strings; runners convert with Fraction
    return text


def parse_config_text(text: str) -> dict:
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if value.startswith("[") and value.endswith("]"):
            inner = value[1:-1].strip()
            out[key] = [_parse_scalar(v) for v in inner.split(",")] if inner else []
        else:
            out[key] = _parse_scalar(value)
    return out


def scenario_from_config(config: dict, seed_override: int | None = None,
                         trials_override: int | None = None) -> Scenario:
    config = dict(config)
    kind = config.pop("kind", None)
    if kind is None:
        raise ConfigError("field 'kind' is required")
    if kind not in RUNNERS:
        raise ConfigError(f"field 'kind': unknown scenario kind {kind!r}")
    seed = config.pop("seed", None)
    if seed_override is not None:
        seed = seed_override
    if seed is None:
        raise ConfigError("field 'seed' is required")
    if not isinstance(seed, int):
        raise ConfigError("field 'seed': expected an integer")
    if trials_override is not None:
        config["trials"] = trials_override
    spec = SCENARIO_PARAMS[kind]
    params = {}
    for key, value in config.items():
        if key not in spec:
            raise ConfigError(f"field {key!r}: not a parameter of kind {kind!r}")
        params[key] = value
    for key, default in spec.items():
        if key not in params:
            if default is REQUIRED:
                raise ConfigError(f"field {key!r}: required for kind {kind!r}")
            params[key] = default
    return Scenario(kind, params, seed)


def load_scenario(path, seed_override=None, trials_override=None) -> Scenario:
    with open(path, "r", encoding="utf-8") as handle:
        return scenario_from_config(parse_config_text(handle.read()),
                                    seed_override, trials_override)


def parse_operator_spec(text: str) -> weyl.RatDiffOp:
    """One-variable seed operators: ``d``/``d<k>`` or ``z*d1+<c>``."""
    s = str(text).replace(" ", "")
    m = re.fullmatch(r"d(\d*)", s)
    if m:
        order = int(m.group(1)) if m.group(1) else 1
        if order < 1:
            raise ConfigError("field 'T': derivative order must be >= 1")
        return weyl.RatDiffOp.partial(1, 1, order)
    m = re.fullmatch(r"z\*?d1?\+(-?\d+(?:/\d+)?)", s)
    if m:
        c = Fraction(m.group(1))
        z = RatFunc.var(1, 0)
        zd = weyl.do_compose(weyl.RatDiffOp.multiplication(z),
                             weyl.RatDiffOp.partial(1, 1))
        return zd + weyl.RatDiffOp.multiplication(RatFunc.const(1, c))
    raise ConfigError(f"field 'T': cannot parse operator spec {text!r}")


def _as_fraction(value, field: str) -> Fraction:
    try:
        return Fraction(value)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"field {field!r}: expected a rational, got {value!r}") from exc


# ---------------------------------------------------------------------------
# Runners.  Each consumes a list of trial indices; every trial draws its own
# generator, so any partition of the trial list yields identical records.


def _run_skew_matrix(params, seed, trials) -> list[CheckRecord]:
    size = params["size"]
    bound = params["bound"]
    records = []
    for t in trials:
        rng = trial_rng(seed, t)
        m = QMatrix(size, size,
                    [Rat(rng.randint(-bound, bound)) for _ in range(size * size)])
        determinant = det(m)
        if determinant == 0:
            try:
                mat_inverse(m)
                records.append(failed(f"inverse-t{t}", "det(m) = 0 => Singular",
                                      "inverse returned for a singular matrix"))
            except Singular:
                records.append(passed(f"inverse-t{t}", "det(m) = 0 => Singular"))
            continue
        inv = mat_inverse(m)
        if (m * inv).is_identity() and (inv * m).is_identity():
            records.append(passed(f"inverse-t{t}", "m m^-1 = m^-1 m = 1"))
        else:
            records.append(failed(f"inverse-t{t}", "m m^-1 = m^-1 m = 1",
                                  "product is not the identity"))
    return records


def _run_identity_suite(params, seed, trials) -> list[CheckRecord]:
    n, d, bound = params["n"], params["d"], params["bound"]
    records = []
    for t in trials:
        rng = trial_rng(seed, t)
        outcome = ncfam.sample_family(rng, n, d, bound)
        if outcome.resamples:
            records.append(CheckRecord(f"resample-log-t{t}",
                                       "invertible [f_1..f_n] found",
                                       "pass" if not outcome.exhausted else "fail",
                                       f"resamples = {outcome.resamples}"))
        if outcome.exhausted:
            records.append(failed(f"identity-suite-t{t}", "precondition",
                                  f"no invertible bracket after {outcome.resamples} draws"))
            continue
        fam = outcome.family
        fs = [list(fam.entries[i]) for i in range(1, n + 1)]
        records.append(_tag(ncfam.check_identity_2a(fs), t))
        admissible = list(range(1, n - 1)) if n >= 3 else [1]
        for a in admissible:
            records.append(_tag(ncfam.check_identity_2b(fs, a), t))
        records.append(_tag(ncfam.check_laplace_expansion(fs), t))
        records.append(_tag(ncfam.check_main_id([list(row) for row in fam.entries]), t))
    return records


def _tag(record: CheckRecord, trial: int) -> CheckRecord:
    return CheckRecord(f"{record.name}-t{trial}", record.anchor,
                       record.status, record.witness)


def _run_corollary_legs(params, seed, trials) -> list[CheckRecord]:
    n, d, bound = params["n"], params["d"], params["bound"]
    constant = params["legs"] == "constant"
    records = []
    for t in trials:
        rng = trial_rng(seed, t)
        outcome = ncfam.sample_family(rng, n, d, bound, constant_legs=constant)
        if outcome.resamples and not outcome.exhausted:
            records.append(CheckRecord(
                f"resample-log-t{t}", "invertible Delta_0 found", "pass",
                f"resamples = {outcome.resamples}"))
        if outcome.exhausted:
            if constant and n >= 2:
                # structural: constant-leg Delta_0 is singular for every draw;
                # the required behaviour is an explicit Singular report
                records.append(passed(f"singular-reported-t{t}",
                                      "constant-leg Delta_0 raises Singular"))
            else:
                records.append(failed(f"commute-t{t}", ncfam.ANCHOR_COMMUTE,
                                      f"Delta_0 singular for all {outcome.resamples} draws"))
            continue
        hs = ncfam.hamiltonians(outcome.family)
        records.append(_tag(ncfam.check_pairwise_commute(hs), t))
    return records


def _random_poly_2vars(rng, degree, bound) -> RatFunc:
    terms = {}
    for dx in range(degree + 1):
        for dxi in range(degree + 1 - dx):
            c = rng.randint(-bound, bound)
            if c:
                terms[(dx, dxi)] = Fraction(c)
    if not terms:
        terms[(0, 0)] = Fraction(1)
    return RatFunc(exact.MPoly.from_terms(2, terms))


def _run_poisson_classical(params, seed, trials) -> list[CheckRecord]:
    n, degree, bound = params["n"], params["degree"], params["bound"]
    records = []
    for t in trials:
        rng = trial_rng(seed, t)
        resamples = 0
        hs = None
        while hs is None and resamples <= 20:
            fs = [_random_poly_2vars(rng, degree, bound) for _ in range(n + 1)]
            try:
                hs = poisson.classical_hamiltonians(fs)
            except (poisson.DependentFamily, poisson.ZeroDelta0):
                resamples += 1
        if resamples:
            records.append(CheckRecord(
                f"resample-log-t{t}", "independent family with Delta_0 != 0",
                "pass" if hs is not None else "fail", f"resamples = {resamples}"))
        if hs is None:
            records.append(failed(f"poisson-commute-t{t}",
                                  poisson.ANCHOR_POISSON_COMMUTE,
                                  "no usable family after 20 draws"))
            continue
        records.append(_tag(poisson.check_poisson_commute(hs), t))
    return records


def _run_grassmann(params, seed, trials) -> list[CheckRecord]:
    arity, dim, bound = params["arity"], params["dim"], params["bound"]
    if arity not in (2, 3, 4):
        raise ConfigError("field 'arity': supported arities are 2, 3, 4")
    if dim < arity:
        raise ConfigError("field 'dim': must be at least the arity")
    count = {2: 4, 3: 5, 4: 6}[arity]
    records = []
    for t in trials:
        rng = trial_rng(seed, t)
        form = poisson.random_decomposable(rng, dim, arity, bound)
        vectors = [poisson.random_vector(rng, dim, bound) for _ in range(count)]
        records.append(_tag(poisson.check_grassmann(form, vectors,
                                                    name=f"grassmann-{arity}"), t))
    return records


def _run_hyperplane(params, seed, trials) -> list[CheckRecord]:
    g, bound = params["g"], params["bound"]
    records = []
    for t in trials:
        rng = trial_rng(seed, t)
        resamples = 0
        hs = points = None
        while hs is None and resamples <= 20:
            points = [[Fraction(rng.randint(-bound, bound)) for _ in range(g)]
                      for _ in range(g)]
            try:
                hs = poisson.hyperplane_coefficients(points)
            except poisson.ZeroDelta0:
                resamples += 1
        if resamples:
            records.append(CheckRecord(
                f"resample-log-t{t}", "points in general position found",
                "pass" if hs is not None else "fail", f"resamples = {resamples}"))
        if hs is None:
            records.append(failed(f"hyperplane-t{t}", poisson.ANCHOR_INCIDENCE,
                                  "degenerate points for every draw"))
            continue
        records.append(_tag(poisson.check_hyperplane_incidence(points, hs), t))
    return records


def _random_cone_diff(rng, bound=4, max_weight=3) -> poisson.ConeDifferential:
    weight = rng.randint(-2, max_weight)
    num = exact.MPoly.from_terms(1, [((e,), Fraction(rng.randint(-bound, bound)))
                                     for e in range(3)])
    if num.is_zero:
        num = exact.MPoly.one(1)
    den_choice = rng.randint(0, 2)
    den = exact.MPoly.one(1)
    if den_choice == 1:
        den = exact.MPoly.from_terms(1, {(1,): Fraction(1), (0,): Fraction(rng.randint(1, bound))})
    return poisson.ConeDifferential(RatFunc(num, den), weight)


def _run_cone_p1(params, seed, trials) -> list[CheckRecord]:
    bound = params["bound"]
    records = []
    z = RatFunc.var(1, 0)
    for t in trials:
        rng = trial_rng(seed, t)
        w1 = _random_cone_diff(rng, bound)
        w2 = _random_cone_diff(rng, bound)
        alphas = [
            poisson.ConeDifferential(RatFunc.const(1, 1), 1),
            poisson.ConeDifferential(z + RatFunc.const(1, rng.randint(1, bound)), 1),
            poisson.ConeDifferential(z * z + RatFunc.const(1, 1), 1),
        ]
        records.append(_tag(poisson.check_alpha_independence(w1, w2, alphas), t))
        anti = poisson.cone_bracket(w1, w1, alphas[0])
        records.append(CheckRecord(
            f"cone-antisymmetry-t{t}", "{w, w} = 0",
            "pass" if anti.is_zero else "fail",
            None if anti.is_zero else anti.f.to_text()))
        w3 = _random_cone_diff(rng, bound)
        jac = (poisson.cone_bracket(w1, poisson.cone_bracket(w2, w3, alphas[0]), alphas[0])
               + poisson.cone_bracket(w2, poisson.cone_bracket(w3, w1, alphas[0]), alphas[0])
               + poisson.cone_bracket(w3, poisson.cone_bracket(w1, w2, alphas[0]), alphas[0]))
        records.append(CheckRecord(
            f"cone-jacobi-t{t}", "{a,{b,c}} + {b,{c,a}} + {c,{a,b}} = 0",
            "pass" if jac.is_zero else "fail",
            None if jac.is_zero else jac.f.to_text()))
        lhs = poisson.cone_to_symplectic(poisson.cone_bracket(w1, w2, alphas[1]))
        sym1 = poisson.PoissonElem(1, poisson.cone_to_symplectic(w1))
        sym2 = poisson.PoissonElem(1, poisson.cone_to_symplectic(w2))
        rhs = poisson.poisson_bracket(sym1, sym2).value
        records.append(CheckRecord(
            f"cone-vs-canonical-t{t}",
            "cone bracket = canonical (z, xi) bracket under f (dz)^i <-> f xi^-i",
            "pass" if lhs == rhs else "fail"))
    return records


def _run_dual_number(params, seed, trials) -> list[CheckRecord]:
    n, degree, bound = params["n"], params["degree"], params["bound"]
    family_every = params["family_every"]
    records = []
    for t in trials:
        rng = trial_rng(seed, t)
        elems = []
        for _ in range(3):
            body = poisson.PoissonElem(n, _random_poly_2vars(rng, degree, bound)
                                       .embed(2 * n, [0, 1]))
            soul = poisson.PoissonElem(n, _random_poly_2vars(rng, degree, bound)
                                       .embed(2 * n, [0, 1]))
            elems.append(quantize.DualNum(body, soul))
        a, b, c = elems
        lhs = quantize.dual_mul(quantize.dual_mul(a, b), c)
        rhs = quantize.dual_mul(a, quantize.dual_mul(b, c))
        diff = lhs - rhs
        records.append(CheckRecord(
            f"dual-assoc-t{t}", quantize.ANCHOR_DUAL_ASSOC,
            "pass" if diff.is_zero else "fail"))
        ab = quantize.dual_mul(quantize.DualNum.classical(a.body),
                               quantize.DualNum.classical(b.body))
        ba = quantize.dual_mul(quantize.DualNum.classical(b.body),
                               quantize.DualNum.classical(a.body))
        soul = (ab - ba).soul
        want = poisson.poisson_bracket(a.body, b.body) * 2
        records.append(CheckRecord(
            f"dual-soul-factor-t{t}", quantize.ANCHOR_SOUL_FACTOR,
            "pass" if soul == want else "fail"))
        if t % family_every == 0:
            fs = None
            for _ in range(20):
                cand = [_random_poly_2vars(rng, degree, bound) for _ in range(n + 1)]
                try:
                    poisson.classical_hamiltonians(cand)
                    fs = cand
                    break
                except (poisson.DependentFamily, poisson.ZeroDelta0):
                    continue
            if fs is None:
                records.append(failed(f"dual-family-t{t}", quantize.ANCHOR_DUAL_COMM,
                                      "no usable family after 20 draws"))
            else:
                records.extend(_tag(r, t) for r in quantize.dual_commuting_family(fs))
    return records


def _distinct_points(rng, count, bound=6) -> list[Fraction]:
    points: set[Fraction] = set()
    while len(points) < count:
        points.add(Fraction(rng.randint(-bound, bound)))
    return sorted(points)


def _run_weyl_rational(params, seed, trials) -> list[CheckRecord]:
    N = params["N"]
    T = parse_operator_spec(params["T"])
    fixed_points = params["points"]
    records = []
    for t in trials:
        rng = trial_rng(seed, t)
        if fixed_points:
            pts = [_as_fraction(p, "points") for p in fixed_points]
        else:
            pts = _distinct_points(rng, N)
        spec = weyl.OpFamilySpec.make(pts, T)
        hs = weyl.rational_hamiltonians(spec)
        records.append(_tag(weyl.check_commute(hs), t))
        if params["symbols"]:
            records.extend(_tag(r, t)
                           for r in weyl.check_symbol_matches_classical(hs, spec))
    return records


def _run_weyl_basis(params, seed, trials) -> list[CheckRecord]:
    N = params["N"]
    T = parse_operator_spec(params["T"])
    fixed_points = params["points"]
    records = []
    for t in trials:
        rng = trial_rng(seed, t)
        if fixed_points:
            pts = [_as_fraction(p, "points") for p in fixed_points]
        else:
            pts = _distinct_points(rng, N)
        spec = weyl.OpFamilySpec.make(pts, T)
        records.extend(_tag(r, t) for r in weyl.check_basis_matches_closed_form(spec))
        one = RatFunc.const(1, 1)
        z = RatFunc.var(1, 0)
        degenerate = [one / (z - RatFunc.const(1, pts[0]))] * N
        try:
            weyl.hamiltonians_from_basis(degenerate, T)
            if N > 1:
                records.append(failed(f"zero-phi-t{t}", "repeated f_i => ZeroPhi",
                                      "degenerate basis accepted"))
            else:
                records.append(passed(f"zero-phi-t{t}", "repeated f_i => ZeroPhi"))
        except weyl.ZeroPhi:
            records.append(passed(f"zero-phi-t{t}", "repeated f_i => ZeroPhi"))
    return records


def _run_hbar_localization(params, seed, trials) -> list[CheckRecord]:
    trunc = params["M"]
    f_text = str(params["f"]).replace(" ", "")
    z = RatFunc.var(1, 0)
    if f_text == "x":
        f_func = z
    elif f_text in ("x^2+1", "x**2+1"):
        f_func = z * z + RatFunc.const(1, 1)
    else:
        raise ConfigError(f"field 'f': supported localized elements are x and x^2+1, got {params['f']!r}")
    f = quantize.HElem.function(f_func, trunc)
    records = []
    for t in trials:
        rng = trial_rng(seed, t)
        records.extend(_tag(r, t)
                       for r in quantize.check_localization_axioms(f, rng, triples=1))
        if t == 0:  # one-time checks, pinned to trial 0 so --jobs cannot duplicate them
            records.append(quantize.check_x_derivative_identity(trunc))
            g = quantize.random_helem(rng, trunc)
            records.append(quantize.check_lift_independence(f, g))
            a = quantize.random_helem(rng, trunc)
            b = quantize.random_helem(rng, trunc)
            records.append(quantize.check_degeneration(a, b))
    return records


REQUIRED = object()

SCENARIO_PARAMS: dict[str, dict] = {
    "skew-matrix": {"size": 8, "trials": 5, "bound": 9},
    "corollary-legs": {"n": REQUIRED, "d": REQUIRED, "trials": 10, "bound": 5,
                       "legs": "varying"},
    "identity-suite": {"n": REQUIRED, "d": REQUIRED, "trials": 10, "bound": 5},
    "poisson-classical": {"n": REQUIRED, "degree": 2, "trials": 20, "bound": 5},
    "grassmann": {"arity": REQUIRED, "dim": 6, "trials": 100, "bound": 5},
    "hyperplane": {"g": REQUIRED, "trials": 20, "bound": 7},
    "cone-p1": {"trials": 20, "bound": 4},
    "dual-number": {"n": REQUIRED, "degree": 2, "trials": 50, "bound": 4,
                    "family_every": 10},
    "weyl-rational": {"N": REQUIRED, "T": "d1", "points": [], "trials": 10,
                      "symbols": 1},
    "weyl-basis": {"N": REQUIRED, "T": "d1", "points": [], "trials": 5},
    "hbar-localization": {"f": "x", "M": 5, "trials": 20},
}

RUNNERS = {
    "skew-matrix": _run_skew_matrix,
    "corollary-legs": _run_corollary_legs,
    "identity-suite": _run_identity_suite,
    "poisson-classical": _run_poisson_classical,
    "grassmann": _run_grassmann,
    "hyperplane": _run_hyperplane,
    "cone-p1": _run_cone_p1,
    "dual-number": _run_dual_number,
    "weyl-rational": _run_weyl_rational,
    "weyl-basis": _run_weyl_basis,
    "hbar-localization": _run_hbar_localization,
}


def _run_trial_chunk(kind: str, params: dict, seed: int, trials: list[int]):
    return RUNNERS[kind](params, seed, trials)


def run_scenario(scenario: Scenario, jobs: int = 1) -> Report:
    """Execute a scenario deterministically; precondition failures become
    skipped/fail records, never exceptions."""
    if scenario.kind not in RUNNERS:
        raise ConfigError(f"field 'kind': unknown scenario kind {scenario.kind!r}")
    start = time.monotonic()
    trials = list(range(int(scenario.params.get("trials", 1))))
    records: list[CheckRecord] = []
    try:
        if jobs > 1 and len(trials) > 1:
            chunks = [trials[i::jobs] for i in range(jobs)]
            chunks = [c for c in chunks if c]
            with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
                futures = [pool.submit(_run_trial_chunk, scenario.kind,
                                       scenario.params, scenario.seed, chunk)
                           for chunk in chunks]
                per_chunk = [f.result() for f in futures]
            tagged: list[tuple[int, int, CheckRecord]] = []
            for chunk, recs in zip(chunks, per_chunk):
                split = _split_records_by_trial(chunk, recs)
                for trial, trial_records in split.items():
                    for pos, record in enumerate(trial_records):
                        tagged.append((trial, pos, record))
            tagged.sort(key=lambda item: (item[0], item[1]))
            records = [record for _, _, record in tagged]
        else:
            records = RUNNERS[scenario.kind](scenario.params, scenario.seed, trials)
    except ConfigError:
        raise
    except (Singular, poisson.DependentFamily, poisson.ZeroDelta0,
            poisson.ZeroAlpha, weyl.ZeroOperator, weyl.ZeroPhi,
            quantize.ZeroBody, quantize.TruncationMismatch) as exc:
        records.append(skipped("precondition", "declared error surfaced",
                               f"{type(exc).__name__}: {exc}"))
    duration_ms = int((time.monotonic() - start) * 1000)
    return Report(scenario={"kind": scenario.kind, "params": scenario.params,
                            "seed": scenario.seed},
                  seed=scenario.seed, checks=records,
                  duration_ms=duration_ms, version=__version__)


def _split_records_by_trial(chunk: list[int], records: list[CheckRecord]):
    """Group chunk output by trial using the -t<k> suffix convention."""
    by_trial: dict[int, list[CheckRecord]] = {t: [] for t in chunk}
    current = None
    for record in records:
        m = re.search(r"-t(\d+)\b", record.name)
        trial = int(m.group(1)) if m else current
        if trial is None or trial not in by_trial:
            trial = chunk[0]
        current = trial
        by_trial[trial].append(record)
    return by_trial


# ---------------------------------------------------------------------------
# The full verification sweep (mirrors the acceptance suite).


def verify_all_scenarios(seed: int = 1) -> list[Scenario]:
    out = []

    def add(kind, _seed=None, **params):
        merged = dict(SCENARIO_PARAMS[kind])
        for key in list(merged):
            if merged[key] is REQUIRED:
                del merged[key]
        merged.update(params)
        out.append(scenario_from_config(
            {"kind": kind, "seed": seed if _seed is None else _seed, **merged}))

    for n, d in ((2, 2), (3, 2), (4, 2), (2, 3), (3, 3)):
        add("corollary-legs", n=n, d=d, legs="varying", trials=30)
    for n in (2, 3, 4):
        add("identity-suite", n=n, d=2, trials=10)
    # fresh samples for the per-leg generalization, plus the structural
    # singular witness (constant legs) that must be reported, never passed
    for n, d in ((2, 2), (3, 2), (4, 2), (2, 3), (3, 3)):
        add("corollary-legs", _seed=seed + 1, n=n, d=d, legs="varying", trials=30)
    add("corollary-legs", n=2, d=2, legs="constant", trials=3)
    for n in (2, 3):
        add("poisson-classical", n=n, trials=20)
    for arity in (2, 3, 4):
        add("grassmann", arity=arity, dim=6, trials=100)
    for g in (1, 2, 3, 4):
        add("hyperplane", g=g, trials=20)
    add("dual-number", n=2, trials=50)
    add("dual-number", n=3, trials=10, family_every=5)
    for N in (2, 3):
        for T in ("d1", "d2", "z*d1+1"):
            add("weyl-rational", N=N, T=T, trials=10)
    for N in (2, 3):
        add("weyl-basis", N=N, trials=5)
    for f in ("x", "x^2+1"):
        for M in (3, 4, 5):
            add("hbar-localization", f=f, M=M, trials=20)
    add("cone-p1", trials=20)
    add("skew-matrix", trials=5)
    return out


# ---------------------------------------------------------------------------
# Entry point.


def _print_summary(report: Report) -> None:
    counts = report.counts()
    kind = report.scenario["kind"]
    for check in report.checks:
        if check.status != "pass":
            print(f"  {check.status.upper():7s} {check.name}: {check.witness}")
    print(f"{kind}: {counts['pass']} pass, {counts['fail']} fail, "
          f"{counts['skipped']} skipped ({report.duration_ms} ms)")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="commfam",
        description="Seeded exact verification of commuting Hamiltonian families.")
    parser.add_argument("--verify-all", action="store_true",
                        help="run the full acceptance sweep across all scenario kinds")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the scenario seed")
    parser.add_argument("--jobs", type=int, default=1,
                        help="worker processes for independent trials/scenarios")
    sub = parser.add_subparsers(dest="command")
    run_p = sub.add_parser("run", help="run one scenario from a config file")
    run_p.add_argument("config", help="path to a key = value config file")
    run_p.add_argument("--out", default=None, help="write the JSON report here")
    run_p.add_argument("--trials", type=int, default=None,
                       help="override the trial count")
    run_p.add_argument("--seed", type=int, default=None, dest="run_seed")
    run_p.add_argument("--jobs", type=int, default=None, dest="run_jobs")
    sub.add_parser("list-scenarios", help="list scenario kinds and parameters")
    args = parser.parse_args(argv)

    if args.verify_all:
        all_ok = True
        for scenario in verify_all_scenarios(seed=args.seed if args.seed is not None else 1):
            report = run_scenario(scenario, jobs=args.jobs)
            _print_summary(report)
            all_ok = all_ok and report.all_passed()
        print("VERIFY-ALL:", "PASS" if all_ok else "FAIL")
        return 0 if all_ok else 1

    if args.command == "list-scenarios":
        for kind in sorted(SCENARIO_PARAMS):
            spec = SCENARIO_PARAMS[kind]
            rendered = ", ".join(
                f"{k} (required)" if v is REQUIRED else f"{k}={v!r}"
                for k, v in spec.items())
            print(f"{kind}: {rendered}")
        return 0

    if args.command == "run":
        try:
            scenario = load_scenario(args.config,
                                     seed_override=args.run_seed if args.run_seed is not None else args.seed,
                                     trials_override=args.trials)
            jobs = args.run_jobs if args.run_jobs is not None else args.jobs
            report = run_scenario(scenario, jobs=jobs)
        except ConfigError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 2
        if args.out:
            emit_report(report, args.out)
        _print_summary(report)
        return 0 if report.all_passed() else 1

    parser.print_help()
    return 2


if __name__ == "__main__":
    sys.exit(main())
