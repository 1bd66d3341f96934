"""Command-line front end.

    waldperiods verify {sec24-diagonal,cor-expansion,prop-single,prop-newform,lemma-support,sylvester}
    waldperiods compute --theta SPEC --chi SPEC [--vector SPEC] [--phase]
    waldperiods cache {put,list,show,clear}

Exit codes: 0 ok, 1 configuration error, 2 budget exceeded, 3 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

from .characters import MultChar, load_char, save_char
from .cyclotomic import CycloNumber, order_cap
from .errors import (
    BudgetError,
    ConfigError,
    HypothesisViolation,
    NotASquare,
    PrecisionLoss,
    VerificationError,
    WaldError,
)
from .induction import classify
from .padic import FieldDescriptor, Mat2, QuadExtDescriptor
from .periods import (
    EmbeddingSpec,
    TestVectorSpec,
    exact_solutions,
    period_integral,
    phase_factor,
)

EXIT_OK, EXIT_CONFIG, EXIT_BUDGET, EXIT_MISMATCH = 0, 1, 2, 3
CACHE_ENV = "WALDPERIODS_CACHE_DIR"
TARGETS = ("sec24-diagonal", "cor-expansion", "prop-single", "prop-newform", "lemma-support", "sylvester")


@dataclass(frozen=True)
class RunConfig:
    p: int = 3
    precision: int = 14
    max_refine: int = 3
    cyclo_cap: int = 360
    cache_dir: str = ""
    format: str = "json"
    conductors: tuple = (2, 4)
    theta_limit: int | None = None
    samples: int = 20
    seed: int = 0

    def __post_init__(self):
        from sympy import isprime

        if self.p < 3 or not isprime(self.p):
            raise ConfigError("--p must be an odd prime")
        if self.precision < 2 or self.max_refine < 1 or self.cyclo_cap < 1 or self.samples < 1:
            raise ConfigError("precision and caps must be positive")
        if self.format not in ("json", "table"):
            raise ConfigError("--format must be json or table")

    def echo(self) -> dict:
        d = asdict(self)
        d["conductors"] = list(self.conductors)
        return d


def default_cache_dir() -> str:
    return os.environ.get(CACHE_ENV) or str(Path.home() / ".cache" / "waldperiods")


# -- output -----------------------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, CycloNumber):
        z = x.approx()
        return {"value": x.to_json(), "approx": {"re": round(z.real, 12) + 0.0, "im": round(z.imag, 12) + 0.0}}
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def emit(report: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(_jsonable(report), sort_keys=True, indent=1) + "\n")
        return
    rows = report.get("rows", [])
    out.write(f"{report.get('target', report.get('command', ''))}: {'PASS' if report.get('ok') else 'FAIL'}\n")
    for row in rows:
        out.write("  " + "  ".join(f"{k}={_short(v)}" for k, v in sorted(row.items())) + "\n")
    for k, v in sorted(report.items()):
        if k not in ("rows", "config"):
            out.write(f"{k}: {_short(v)}\n")


def _short(v) -> str:
    if isinstance(v, CycloNumber):
        r = v.reduce_order()
        return str(r.coeffs[0]) if r.is_rational() else repr(r)
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_short(x)}" for k, x in v.items()) + "}"
    return str(v)


# -- verify ----------------------------------------------------------------------------------


def _sweep_cfg(cfg: RunConfig):
    from .sweep import SweepConfig

    return SweepConfig(cfg.p, tuple(cfg.conductors), cfg.precision, cfg.max_refine, cfg.theta_limit)


def verify(target: str, cfg: RunConfig) -> dict:
    from . import sweep

    if target == "sylvester":
        from .sylvester import beta3_newform

        r = beta3_newform(cfg.p, cfg.precision, cfg.max_refine)
        return {
            "target": target, "ok": r.ok, "p": r.p, "p_mod_9": r.p_mod_9,
            "beta": r.beta, "beta_conjugated": r.beta_conjugated,
            "expected_beta": r.expected_beta, "ratio": r.ratio, "expected_ratio": r.expected_ratio,
            "branch": r.branch, "certificate": r.result.certificate, "Dprime": r.Dprime,
            "twist": {"trivial": r.twist.trivial, "conductor": r.twist.conductor, "ok": r.twist.ok},
        }
    scfg = _sweep_cfg(cfg)
    rows = []
    if target == "sec24-diagonal":
        for conf in sweep.configurations(scfg):
            for rec in sweep.diagonal_records(conf, cfg.max_refine):
                rows.append({"index": list(rec.index), "n": rec.n, "l": rec.l, "kind": rec.kind, "u": rec.u,
                             "computed": rec.values, "predicted": rec.predicted, "ok": rec.ok})
    elif target in ("prop-single", "prop-newform"):
        want = "single-term" if target == "prop-single" else "closed-form"
        for conf in sweep.configurations(scfg):
            rec, _ = sweep.newform_record(conf)
            if rec.rule != want:
                continue
            ok = rec.closed_form_ok and rec.phase_ok is not False
            rows.append({"index": list(rec.index), "n": rec.n, "l": rec.l, "computed": rec.direct,
                         "double_sum": rec.double_sum, "predicted": rec.prediction,
                         "phase": rec.phase, "certificate": rec.certificate, "ok": ok})
    elif target == "lemma-support":
        for conf in sweep.configurations(scfg):
            if conf.l == 0 or (conf.data.n - conf.l) % 2:
                continue
            from .periods import solve_test_vector_equation

            if not solve_test_vector_equation(conf.data, conf.chi).solutions:
                continue
            rec = sweep.support_record(conf)
            rows.append({"index": list(rec.index), "volume": rec.volume, "predicted_volume": rec.predicted_volume,
                         "scan_matches_predicate": rec.match, "vv'D = D'": rec.product_identity,
                         "valuation_gap": rec.valuation_gap, "ok": rec.ok})
    elif target == "cor-expansion":
        for conf in sweep.sample_configurations([scfg], cfg.samples, cfg.seed):
            rec = sweep.expansion_record(conf)
            rows.append({"index": list(rec.index), "lhs": rec.lhs, "rhs": rec.rhs, "ok": rec.ok})
    else:
        raise ConfigError(f"unknown target {target!r}")
    return {"target": target, "ok": all(r["ok"] for r in rows), "count": len(rows), "rows": rows}


# -- character and vector specs ----------------------------------------------------------------


def parse_char(spec: str, L: QuadExtDescriptor, cache_dir: str) -> MultChar:
    """Character spec.

    * ``cache:NAME``: a table stored with ``cache put``;
    * ``sylvester-theta`` / ``sylvester-chi4`` / ``sylvester-chi7``: the 3-adic example;
    * JSON ``{"c": 4, "generators": [[a, b], ...], "values": ["1/2", ...], "unif": "1/4"}``
      with generator values as angles (fractions of a full turn).
    """
    if spec.startswith("cache:"):
        path = Path(cache_dir) / (spec[6:] + ".chartable")
        if not path.exists():
            raise ConfigError(f"no cached character {spec[6:]!r} in {cache_dir}")
        return load_char(str(path), L)
    if spec.startswith("sylvester-"):
        from . import sylvester

        if L.p != 3 or L.D != sylvester.D:
            raise ConfigError("the Sylvester characters live on Q_3(sqrt -3)")
        if spec == "sylvester-theta":
            return sylvester.build_theta3(L).theta
        if spec in ("sylvester-chi4", "sylvester-chi7"):
            return sylvester.chi3_from_table(int(spec[-1]), L)
        raise ConfigError(f"unknown character {spec!r}")
    try:
        obj = json.loads(spec)
        gens = [L(Fraction(a), Fraction(b)) for a, b in obj["generators"]]
        vals = [Fraction(v) for v in obj["values"]]
        return MultChar.from_generators(L, int(obj["c"]), gens, vals, Fraction(obj.get("unif", 0)))
    except (ValueError, KeyError, TypeError) as exc:
        if isinstance(exc, WaldError):
            raise
        raise ConfigError(f"cannot parse character spec: {exc}") from exc


def parse_vector(spec: str, data) -> TestVectorSpec:
    """``minimal``, ``newform`` (translated newform) or ``translate:u,v``."""
    F = data.F
    if spec == "minimal":
        return TestVectorSpec.minimal(F)
    if spec == "newform":
        return TestVectorSpec.translated_newform(data)
    if spec.startswith("translate:"):
        try:
            u, v = (Fraction(x) for x in spec[10:].split(","))
        except ValueError as exc:
            raise ConfigError("translate spec is translate:u,v") from exc
        return TestVectorSpec.translate(F, u, v)
    raise ConfigError(f"unknown vector spec {spec!r}")


def compute(args, cfg: RunConfig) -> dict:
    F = FieldDescriptor(cfg.p, cfg.precision)
    L = QuadExtDescriptor(F, Fraction(args.D) if args.D else Fraction(cfg.p))
    theta = parse_char(args.theta, L, cfg.cache_dir)
    chi = parse_char(args.chi, L, cfg.cache_dir)
    data = classify(theta)
    spec = parse_vector(args.vector, data)
    res = period_integral(data, chi, spec, spec, EmbeddingSpec(L), max_refine=cfg.max_refine)
    report = {"command": "compute", "ok": True, **res.to_json(),
              "support_trace": [list(t[:2]) + [list(t[2])] for t in res.support_trace]}
    if args.phase:
        try:
            v, vp = exact_solutions(data, chi)
        except (NotASquare, ConfigError) as exc:
            raise ConfigError(f"no phase factor: the test vector equation has no roots in F ({exc})") from exc
        ph = phase_factor(data, chi, v, vp)
        report["phase"] = {"direct": ph.direct, "predicted": ph.predicted, "agree": ph.agree}
        report["ok"] = ph.agree
    return report


# -- cache ----------------------------------------------------------------------------------------


def cache_cmd(args, cfg: RunConfig) -> dict:
    d = Path(cfg.cache_dir)
    if args.action == "list":
        names = sorted(p.stem for p in d.glob("*.chartable")) if d.exists() else []
        return {"command": "cache list", "ok": True, "names": names}
    if args.action == "clear":
        removed = 0
        if d.exists():
            for p in d.glob("*.chartable"):
                p.unlink()
                removed += 1
        return {"command": "cache clear", "ok": True, "removed": removed}
    if not args.name:
        raise ConfigError("cache put/show need --name")
    F = FieldDescriptor(cfg.p, cfg.precision)
    L = QuadExtDescriptor(F, Fraction(args.D) if args.D else Fraction(cfg.p))
    path = d / (args.name + ".chartable")
    if args.action == "put":
        if not args.char:
            raise ConfigError("cache put needs --char")
        chi = parse_char(args.char, L, cfg.cache_dir)
        d.mkdir(parents=True, exist_ok=True)
        save_char(str(path), chi)
        return {"command": "cache put", "ok": True, "path": str(path), "conductor": chi.conductor}
    if not path.exists():
        raise ConfigError(f"no cached character {args.name!r}")
    chi = load_char(str(path), L)
    return {"command": "cache show", "ok": True, "conductor": chi.conductor, "order": chi.order,
            "unif": str(chi.unif), "header": chi.header()}


# -- entry point ----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=3, help="residue characteristic (odd prime)")
    common.add_argument("--precision", type=int, default=14, help="relative p-adic precision K")
    common.add_argument("--max-refine", type=int, default=3, help="refinement steps beyond the analytic depth")
    common.add_argument("--cyclo-cap", type=int, default=360, help="largest cyclotomic order allowed")
    common.add_argument("--cache-dir", default=None, help=f"character cache (default ${CACHE_ENV})")
    common.add_argument("--format", choices=("json", "table"), default="json")

    parser = argparse.ArgumentParser(prog="waldperiods", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("target", choices=TARGETS)
    v.add_argument("--conductors", default="2,4", help="comma separated c(theta) values for sweeps")
    v.add_argument("--theta-limit", type=int, default=None, help="cap thetas per field in sweeps")
    v.add_argument("--samples", type=int, default=20, help="sample size for cor-expansion")
    v.add_argument("--seed", type=int, default=0)

    c = sub.add_parser("compute", parents=[common], help="compute one period integral")
    c.add_argument("--D", default=None, help="the field F(sqrt D) (default D = p)")
    c.add_argument("--theta", required=True, help="character spec for theta")
    c.add_argument("--chi", required=True, help="character spec for chi")
    c.add_argument("--vector", default="minimal", help="minimal | newform | translate:u,v")
    c.add_argument("--phase", action="store_true", help="also report the phase factor")

    k = sub.add_parser("cache", parents=[common], help="manage cached character tables")
    k.add_argument("action", choices=("put", "list", "show", "clear"))
    k.add_argument("--name")
    k.add_argument("--char", help="character spec to store")
    k.add_argument("--D", default=None)
    return parser


def main(argv=None, out=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = out or sys.stdout
    try:
        extra = {}
        if args.command == "verify":
            try:
                extra["conductors"] = tuple(int(x) for x in args.conductors.split(","))
            except ValueError as exc:
                raise ConfigError("--conductors expects integers") from exc
            extra.update(theta_limit=args.theta_limit, samples=args.samples, seed=args.seed)
        cfg = RunConfig(args.p, args.precision, args.max_refine, args.cyclo_cap,
                        args.cache_dir or default_cache_dir(), args.format, **extra)
        with order_cap(cfg.cyclo_cap):
            if args.command == "verify":
                report = verify(args.target, cfg)
            elif args.command == "compute":
                report = compute(args, cfg)
            else:
                report = cache_cmd(args, cfg)
        report["config"] = cfg.echo()
        emit(report, cfg.format, out)
        return EXIT_OK if report.get("ok") else EXIT_MISMATCH
    except ConfigError as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return EXIT_CONFIG
    except (BudgetError, PrecisionLoss) as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except (VerificationError, HypothesisViolation, WaldError) as exc:
        sys.stderr.write(f"verification failed: {exc}\n")
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
