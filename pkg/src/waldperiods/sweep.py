"""Parameter sweeps over (theta, chi) pairs on a ramified quadratic extension.

Every pair with theta|_F = 1, c(theta) in the configured conductors, chi
trivial on F with c(chi) <= c(theta), and c(theta chi-bar) <= c(theta chi)
(the other half follows from :func:`periods.bar_symmetry_check`) is checked
against the closed forms for minimal vectors and newforms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator


from .characters import MultChar, enumerate_characters
from .cyclotomic import CycloNumber
from .errors import ConfigError
from .induction import SupercuspidalData, classify
from .padic import FieldDescriptor, QuadExtDescriptor, legendre
from .periods import (
    DEFAULT_MAX_REFINE,
    clear_profile_cache,
    diagonal_value,
    exact_solutions,
    newform_depth,
    newform_period,
    period_integral,
    period_integral_pointwise,
    phase_prediction,
    solve_test_vector_equation,
    support_of_integral,
    TestVectorSpec,
    unit_residues,
)


@dataclass(frozen=True)
class SweepConfig:
    p: int
    conductors: tuple = (2, 4)
    K: int = 14
    max_refine: int = DEFAULT_MAX_REFINE
    theta_limit: int | None = None  # cap on thetas per field (None = all)

    def __post_init__(self):
        if self.p < 3 or self.p % 2 == 0:
            raise ConfigError("p must be an odd prime")
        if any(c < 2 or c % 2 for c in self.conductors):
            raise ConfigError("conductors must be even and >= 2")


def nonresidue(p: int) -> int:
    return next(x for x in range(2, p) if legendre(x, p) == -1)


def ramified_fields(p: int, K: int = 14) -> list[QuadExtDescriptor]:
    """Both ramified quadratic extensions F(sqrt p), F(sqrt(xi p))."""
    F = FieldDescriptor(p, K)
    return [QuadExtDescriptor(F, Fraction(p)), QuadExtDescriptor(F, Fraction(nonresidue(p) * p))]


@dataclass(frozen=True)
class Configuration:
    data: SupercuspidalData
    chi: MultChar
    index: tuple  # (field index, conductor, theta index, chi index)

    @property
    def nu(self) -> MultChar:
        return self.data.theta * self.chi.bar()

    @property
    def l(self) -> int:
        return self.nu.conductor // 2


def configurations(cfg: SweepConfig) -> Iterator[Configuration]:
    for fi, L in enumerate(ramified_fields(cfg.p, cfg.K)):
        for c in cfg.conductors:
            thetas = [t for t in enumerate_characters(L, c, trivial_on_F=True) if t.conductor == c]
            chis = enumerate_characters(L, c, trivial_on_F=True)
            if cfg.theta_limit is not None:
                thetas = thetas[: cfg.theta_limit]
            for ti, theta in enumerate(thetas):
                data = classify(theta)
                for ci, chi in enumerate(chis):
                    if (theta * chi.bar()).conductor > (theta * chi).conductor:
                        continue
                    yield Configuration(data, chi, (fi, c, ti, ci))


# -- minimal vectors -------------------------------------------------------------------


@dataclass
class DiagonalRecord:
    index: tuple
    n: int
    l: int
    kind: str
    u: int
    values: dict  # v -> CycloNumber
    predicted: dict  # v -> Fraction
    solutions: tuple

    @property
    def ok(self) -> bool:
        if self.kind == "trivial-ambiguous":
            return False
        return all(self.values[v] == self.predicted[v] for v in self.values)


def diagonal_records(conf: Configuration, max_refine: int = DEFAULT_MAX_REFINE) -> list[DiagonalRecord]:
    """Diagonal periods I(pi(n(u) diag(v,1)) phi_0) for all v, with predictions."""
    data, chi = conf.data, conf.chi
    p = data.F.p
    n = data.n
    k = newform_depth(data)
    vs = unit_residues(p, k)
    nu = conf.nu
    l = conf.l
    out = []
    if l == 0:
        values = {v: diagonal_value(data, chi, v).value for v in vs}
        if nu.is_trivial():
            # exactly one v carries the full volume 2; which one is found by the sweep
            hits = [v for v in vs if values[v] != 0]
            star = hits[0] if len(hits) == 1 else None
            predicted = {v: Fraction(2) if v == star else Fraction(0) for v in vs}
            kind = "trivial" if star is not None else "trivial-ambiguous"
        else:
            predicted = {v: Fraction(0) for v in vs}
            kind = "unramified-nontrivial"
        out.append(DiagonalRecord(conf.index, n, 0, kind, 0, values, predicted, ()))
        return out
    us = [0] if (n - l) % 2 == 0 else list(range(p ** (n // 2)))
    for u in us:
        sol = solve_test_vector_equation(data, chi, u)
        values = {v: diagonal_value(data, chi, v, u).value for v in vs}
        target = Fraction(1, p ** (l // 2))
        predicted = {v: target if v in sol.solutions else Fraction(0) for v in vs}
        kind = "even" if (n - l) % 2 == 0 else "odd"
        out.append(DiagonalRecord(conf.index, n, l, kind, u, values, predicted, sol.solutions))
    return out


# -- newforms ------------------------------------------------------------------------


def cross_term_verdicts(diag: dict, off: dict) -> tuple[bool, bool]:
    """(vanishing rule, magnitude rule) over all pairs x != x'."""
    vanish_ok = True
    magnitude_ok = True
    for (x, y), val in off.items():
        dx, dy = diag[(x, x)], diag[(y, y)]
        if dx.is_zero() or dy.is_zero():
            vanish_ok &= val.is_zero()
        ax, ay = dx.norm_squared(), dy.norm_squared()
        if ax == ay and not ax.is_zero():
            magnitude_ok &= val.norm_squared() == ax
    return vanish_ok, magnitude_ok


@dataclass
class NewformRecord:
    index: tuple
    n: int
    l: int
    rule: str
    direct: CycloNumber
    double_sum: CycloNumber
    prediction: CycloNumber | None
    phase_ok: bool | None
    phase: CycloNumber | None
    support_ok: bool | None
    cross_vanishing_ok: bool
    cross_magnitude_ok: bool
    certificate: dict
    formula: CycloNumber | None = None  # (1 + theta chi(sqrt D))^2 / (N q^{floor(l/2)}) for n - l even, l > 0
    solvable: bool | None = None  # the test-vector equation has roots in F (n - l even, l > 0)

    @property
    def closed_form_ok(self) -> bool:
        return self.direct == self.double_sum and (self.prediction is None or self.prediction == self.direct)

    @property
    def dichotomy_ok(self) -> bool | None:
        """Direct period = formula when the equation is solvable, 0 otherwise."""
        if self.formula is None:
            return None
        return self.direct == (self.formula if self.solvable else 0)


@dataclass
class SupportRecord:
    index: tuple
    match: bool
    volume: Fraction
    predicted_volume: Fraction
    product_identity: bool
    valuation_gap: int
    expected_gap: int

    @property
    def ok(self) -> bool:
        return (self.match and self.volume == self.predicted_volume and self.product_identity
                and self.valuation_gap == self.expected_gap)


def support_record(conf: Configuration) -> SupportRecord:
    v, vp = exact_solutions(conf.data, conf.chi)
    rep = support_of_integral(conf.data, conf.chi, v, vp)
    return SupportRecord(conf.index, rep.match, rep.volume, rep.predicted_volume,
                         rep.product_identity, rep.valuation_gap, (conf.data.n - conf.l) // 2)


def newform_record(conf: Configuration) -> tuple[NewformRecord, SupportRecord | None]:
    data, chi = conf.data, conf.chi
    res = newform_period(data, chi)
    vanish, mag = cross_term_verdicts(res.diagonal, res.off_diagonal)
    sup = support_record(conf) if res.rule == "closed-form" else None
    formula = solvable = None
    n, l = data.n, conf.l
    if l > 0 and (n - l) % 2 == 0:
        q = data.F.p
        N = len(unit_residues(q, newform_depth(data)))
        formula = (CycloNumber.one() + phase_prediction(data, chi)) ** 2 * Fraction(1, N * q ** (l // 2))
        solvable = bool(solve_test_vector_equation(data, chi).solutions)
    rec = NewformRecord(
        conf.index, n, l, res.rule, res.direct.value, res.double_sum, res.prediction,
        None if res.phase is None else res.phase.agree and res.phase.direct ** 2 == 1,
        None if res.phase is None else res.phase.direct,
        None if sup is None else sup.ok, vanish, mag, res.direct.certificate, formula, solvable,
    )
    return rec, sup


# -- expansion identity ------------------------------------------------------------------


@dataclass
class ExpansionRecord:
    index: tuple
    lhs: CycloNumber
    rhs: CycloNumber

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs


def expansion_record(conf: Configuration) -> ExpansionRecord:
    """Pointwise integral of the expanded newform against the prefactored double sum."""
    data, chi = conf.data, conf.chi
    spec = TestVectorSpec.translated_newform(data)
    lhs = period_integral_pointwise(data, chi, spec).value
    F = data.F
    xs = unit_residues(F.p, newform_depth(data))
    total = CycloNumber.zero()
    for x in xs:
        for y in xs:
            total = total + period_integral(data, chi, TestVectorSpec.translate(F, 0, x),
                                            TestVectorSpec.translate(F, 0, y)).value
    return ExpansionRecord(conf.index, lhs, total * Fraction(1, len(xs)))


def sample_configurations(cfgs: list[SweepConfig], count: int, seed: int = 0) -> list[Configuration]:
    pool = [conf for cfg in cfgs for conf in configurations(cfg)]
    rng = random.Random(seed)
    return rng.sample(pool, min(count, len(pool)))


# -- full sweep -----------------------------------------------------------------------


@dataclass
class SweepReport:
    config: SweepConfig
    diagonal: list = field(default_factory=list)
    newform: list = field(default_factory=list)
    support: list = field(default_factory=list)

    @property
    def diagonal_ok(self) -> bool:
        return all(r.ok for r in self.diagonal)

    @property
    def closed_form_ok(self) -> bool:
        return all(r.closed_form_ok and r.phase_ok is not False and r.dichotomy_ok is not False
                   for r in self.newform)

    @property
    def support_ok(self) -> bool:
        return all(r.ok for r in self.support)

    @property
    def cross_ok(self) -> bool:
        return all(r.cross_vanishing_ok and r.cross_magnitude_ok for r in self.newform)

    def counts(self) -> dict:
        out = {}
        for r in self.diagonal:
            key = f"diagonal:{r.kind}"
            out[key] = out.get(key, 0) + 1
        for r in self.newform:
            key = f"newform:{r.rule}"
            out[key] = out.get(key, 0) + 1
        out["support"] = len(self.support)
        return out


def run_sweep(cfg: SweepConfig, diagonal: bool = True, newform: bool = True) -> SweepReport:
    report = SweepReport(cfg)
    current = None
    for conf in configurations(cfg):
        if conf.data is not current:
            # profiles are keyed per theta; drop the previous theta's tables
            clear_profile_cache()
            current = conf.data
        if diagonal:
            report.diagonal.extend(diagonal_records(conf, cfg.max_refine))
        if newform:
            rec, sup = newform_record(conf)
            report.newform.append(rec)
            if sup is not None:
                report.support.append(sup)
    return report
