"""Batch front-end: validate run configs, run verification suites, write JSON reports.

Usage::

    tau2pf run config.json [--backend exact|float] [--suite NAME ...] [--out PATH]
                           [--dim-cap N] [--jobs J]
    tau2pf schema
    tau2pf registry

Exit status: 0 when every non-conjecture check passes, 1 on any failure,
2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .checks import REGISTRY, CheckResult, timed
from .errors import CapacityError, ConfigError, Tau2Error
from .tau2core import RapiditySet, Tau2Model, core_checks

SUITES = ("core", "parafermion", "ybe", "spectral", "fendley")
BACKENDS = ("exact", "float")
DEFAULT_DIM_CAP = 1024
GENERATOR_VERSION = 1
YBE_SAMPLES = 20


# --------------------------------------------------------------------------
# configuration

def _rational(x, where):
    if isinstance(x, bool):
        raise ConfigError(where, f"not a number: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(str(x))
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError:
            pass
    raise ConfigError(where, f"not a rational number: {x!r}")


def seeded_rapidities(seed, bounds, N, L, backend="exact"):
    """Reproducible rational rapidities (generator version 1).

    ``bounds`` is (numerator_bound, denominator_bound) or a single int used
    for both.  With ``rng = random.Random(seed)``, for j = 0..2L-1 and for
    each of a, b, c, d in turn: numerator = rng.choice of the nonzero
    integers in [-nb, nb] (ascending), denominator = rng.randint(1, db).
    """
    nb, db = (bounds, bounds) if isinstance(bounds, int) else bounds
    if nb < 1 or db < 1:
        raise ConfigError("rapidities.random_rational", "bounds must be >= 1")
    return RapiditySet.build(N, L, _seeded_points(seed, nb, db, 2 * L), backend)


def _seeded_points(seed, nb, db, count):
    rng = random.Random(seed)
    nums = [k for k in range(-nb, nb + 1) if k != 0]
    return [tuple(Fraction(rng.choice(nums), rng.randint(1, db)) for _ in range(4))
            for _ in range(count)]


@dataclass
class RunConfig:
    N: int
    L: int
    backend: str = "exact"
    rapidities: object = None
    suites: list = field(default_factory=lambda: list(SUITES))
    float_residual: float = 1e-8
    degeneracy_gap: float = 1e-7
    output: str | None = None
    dim_cap: int = DEFAULT_DIM_CAP
    points: list = field(default_factory=list)   # resolved (a, b, c, d) Fractions
    seed: int = 0

    @classmethod
    def from_dict(cls, raw, backend=None, suites=None, output=None, dim_cap=None):
        if not isinstance(raw, dict):
            raise ConfigError("config", "expected a JSON object")
        known = {"N", "L", "backend", "rapidities", "suites", "tolerances", "output", "dim_cap"}
        extra = set(raw) - known
        if extra:
            raise ConfigError(sorted(extra)[0], "unknown key")
        for key in ("N", "L"):
            if key not in raw:
                raise ConfigError(key, "missing")
            if not isinstance(raw[key], int) or isinstance(raw[key], bool):
                raise ConfigError(key, "must be an integer")
        N, L = raw["N"], raw["L"]
        if N < 2:
            raise ConfigError("N", "must be >= 2")
        if L < 1:
            raise ConfigError("L", "must be >= 1")
        cap = dim_cap if dim_cap is not None else raw.get("dim_cap", DEFAULT_DIM_CAP)
        if not isinstance(cap, int) or cap < 1:
            raise ConfigError("dim_cap", "must be a positive integer")
        if N ** L > cap:
            raise CapacityError(f"dimension N^L = {N ** L} exceeds the cap {cap} (use --dim-cap)")
        be = backend or raw.get("backend", "exact")
        if be not in BACKENDS:
            raise ConfigError("backend", f"must be one of {BACKENDS}")
        sl = suites or raw.get("suites", list(SUITES))
        if isinstance(sl, str):
            sl = [sl]
        if not isinstance(sl, list) or not sl:
            raise ConfigError("suites", "must be a non-empty list")
        for s in sl:
            if s not in SUITES:
                raise ConfigError("suites", f"unknown suite {s!r}; choose from {SUITES}")
        tol = raw.get("tolerances", {})
        if not isinstance(tol, dict):
            raise ConfigError("tolerances", "must be an object")
        for key in tol:
            if key not in ("float_residual", "degeneracy_gap"):
                raise ConfigError(f"tolerances.{key}", "unknown tolerance")
            if not isinstance(tol[key], (int, float)) or tol[key] <= 0:
                raise ConfigError(f"tolerances.{key}", "must be a positive number")
        cfg = cls(N, L, be, raw.get("rapidities"), list(dict.fromkeys(sl)),
                  float(tol.get("float_residual", 1e-8)), float(tol.get("degeneracy_gap", 1e-7)),
                  output or raw.get("output"), cap)
        cfg.points, cfg.seed = _resolve_points(cfg.rapidities, N, L)
        return cfg

    def rapidity_set(self, backend=None):
        return RapiditySet.build(self.N, self.L, self.points, backend or self.backend)

    def echo(self):
        return {"N": self.N, "L": self.L, "backend": self.backend,
                "rapidities": self.rapidities, "suites": self.suites,
                "tolerances": {"float_residual": self.float_residual,
                               "degeneracy_gap": self.degeneracy_gap},
                "dim_cap": self.dim_cap,
                "resolved_points": [[str(x) for x in p] for p in self.points],
                "generator_version": GENERATOR_VERSION}


def _bounds(spec, where):
    if not isinstance(spec, dict):
        raise ConfigError(where, "expected an object with seed and bounds")
    seed = spec.get("seed", 0)
    nb = spec.get("numerator_bound", 5)
    db = spec.get("denominator_bound", 5)
    for key, v in (("seed", seed), ("numerator_bound", nb), ("denominator_bound", db)):
        if not isinstance(v, int) or isinstance(v, bool):
            raise ConfigError(f"{where}.{key}", "must be an integer")
    if nb < 1 or db < 1:
        raise ConfigError(where, "bounds must be >= 1")
    return seed, nb, db


def _resolve_points(rap, N, L):
    """Turn the rapidities entry into 2L (a, b, c, d) tuples and a seed."""
    n = 2 * L
    if rap is None:
        rap = {"random_rational": {"seed": 0}}
    if isinstance(rap, list):
        if len(rap) != n:
            raise ConfigError("rapidities", f"expected {n} points, got {len(rap)}")
        pts = []
        for j, p in enumerate(rap):
            if not isinstance(p, list) or len(p) != 4:
                raise ConfigError(f"rapidities[{j}]", "each point is [a, b, c, d]")
            pts.append(tuple(_rational(x, f"rapidities[{j}]") for x in p))
            if pts[-1][1] == 0:
                raise ConfigError(f"rapidities[{j}]", "b must be nonzero")
        return pts, 0
    if not isinstance(rap, dict) or len(rap) != 1:
        raise ConfigError("rapidities", "expected a list, {random_rational: ...} or {fendley_limit: ...}")
    kind, spec = next(iter(rap.items()))
    if kind == "random_rational":
        seed, nb, db = _bounds(spec, "rapidities.random_rational")
        return _seeded_points(seed, nb, db, n), seed
    if kind == "fendley_limit":
        if not isinstance(spec, dict):
            raise ConfigError("rapidities.fendley_limit", "expected an object")
        if "random_rational" in spec:
            seed, nb, db = _bounds(spec["random_rational"], "rapidities.fendley_limit.random_rational")
            base = _seeded_points(seed, nb, db, n)
            return [(Fraction(0), Fraction(1), p[2], p[3]) for p in base], seed
        cd = []
        for key in ("c", "d"):
            vals = spec.get(key)
            if not isinstance(vals, list) or len(vals) != n:
                raise ConfigError(f"rapidities.fendley_limit.{key}", f"expected {n} values")
            cd.append([_rational(x, f"rapidities.fendley_limit.{key}") for x in vals])
        return [(Fraction(0), Fraction(1), c, d) for c, d in zip(*cd)], 0
    raise ConfigError("rapidities", f"unknown rapidity source {kind!r}")


# --------------------------------------------------------------------------
# suites

def _jsonable(x):
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, complex) or type(x).__name__ in ("complex128", "complex64"):
        x = complex(x)
        return [x.real, x.imag]
    if hasattr(x, "rational"):
        r = x.rational()
        return str(r) if r is not None else [str(c) for c in x.coeffs]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "tolist"):
        return _jsonable(x.tolist())
    if hasattr(x, "item"):
        return _jsonable(x.item())
    return str(x)


def _stage(results, fn):
    """Run one group of checks; a library error becomes a failed suite_error result."""
    with timed(results):
        try:
            out = fn()
        except Tau2Error as exc:
            out = [CheckResult("suite_error", False, float("inf"), {},
                               f"{type(exc).__name__}: {exc}")]
        results.extend(out)


def _core(cfg, model, extras):
    results = []
    _stage(results, lambda: core_checks(model, cfg.float_residual))
    extras["A0"] = model.A0
    return results


def _parafermion(cfg, model, extras):
    from . import parafermions as pf
    tol, NL = cfg.float_residual, cfg.N * cfg.L
    results = []
    holder = {}

    def scal():
        holder["s"] = pf.s_scalars(model, tol)
        extras["s"] = list(holder["s"].values)
        return holder["s"].checks

    _stage(results, lambda: pf.proof_step_checks(model, tol))
    _stage(results, lambda: pf.recursion_check(model, NL, tol))
    _stage(results, lambda: pf.closed_form_check(model, NL, tol))
    _stage(results, lambda: pf.mu_nu_check(model, NL, tol))
    _stage(results, lambda: pf.hmn_check(model, min(NL, 3), tol))
    _stage(results, lambda: pf.q0_check(model, 2 * cfg.L, tol))
    _stage(results, lambda: pf.commutator_R_check(model, tol))
    _stage(results, scal)
    _stage(results, lambda: pf.truncation_check(model, cfg.N, holder.get("s"), tol))
    trunc = [r.residual for r in results if r.name == "truncation"]
    extras["truncation_max_residual"] = max(trunc, default=None)
    return results


def _ybe(cfg, model, extras):
    from .ybe import verify_exchange_relations, verify_site_ybe
    results = []
    f = model.field
    rng = random.Random(cfg.seed)
    nums = [k for k in range(-5, 6) if k != 0]

    def rnd():
        return Fraction(rng.choice(nums), rng.randint(1, 5))

    def site():
        out = []
        for i in range(YBE_SAMPLES):
            p = tuple(rnd() for _ in range(4))
            p2 = tuple(rnd() for _ in range(4))
            tr, tq = rnd(), rnd()
            for r in verify_site_ybe(p, p2, tr, tq, f, cfg.float_residual):
                r.indices["sample"] = i
                out.append(r)
        return out

    _stage(results, site)
    _stage(results, lambda: verify_exchange_relations(model, cfg.float_residual))
    extras["site_ybe_samples"] = YBE_SAMPLES
    return results


def _spectral(cfg, model, extras):
    from .spectral import spectral_suite
    results = []

    def run():
        spec, checks = spectral_suite(model, cfg.float_residual, cfg.degeneracy_gap)
        extras["roots"] = list(spec.roots)
        extras["mu"] = list(spec.companion.mu)
        b54 = [r for r in checks if r.name == "b54"]
        if b54:
            extras["b54_max_residual"] = b54[0].residual
        return checks

    _stage(results, run)
    return results


def _fendley(cfg, model, extras):
    from . import fendley as fd
    from .spectral import labeled_eigenbasis
    results = []
    rap = model.rap
    if not fd.is_limit(rap):
        # keep the configured c_j, d_j and impose a_j = 0, b_j = 1
        pts = [(0, 1, p[2], p[3]) for p in cfg.points]
        rap = RapiditySet.build(cfg.N, cfg.L, pts, cfg.backend)
        extras["derived_limit"] = True
    lim = Tau2Model(rap)
    holder = {}

    def spectrum():
        holder["spec"] = labeled_eigenbasis(lim, cfg.degeneracy_gap, tol=cfg.float_residual)
        return fd.u_roots_check(lim, holder["spec"])

    _stage(results, lambda: fd.limit_checks(lim, cfg.float_residual))
    _stage(results, spectrum)
    if "spec" in holder:
        _stage(results, lambda: fd.phi_shift_decomposition(lim, holder["spec"])["checks"])
    return results


SUITE_FUNCS = {"core": _core, "parafermion": _parafermion, "ybe": _ybe,
               "spectral": _spectral, "fendley": _fendley}


def run(cfg):
    """Run every requested suite; returns the report dict (JSON-ready)."""
    model = Tau2Model(cfg.rapidity_set())
    report = {"config": cfg.echo(), "suites": {}}
    total = passed = failed = conj_failed = 0
    for name in cfg.suites:
        extras = {}
        t0 = time.perf_counter()
        results = SUITE_FUNCS[name](cfg, model, extras)
        for r in results:
            total += 1
            if r.passed:
                passed += 1
            elif r.kind == "conjecture":
                conj_failed += 1
            else:
                failed += 1
        report["suites"][name] = {
            "results": [_jsonable(r.to_json()) for r in results],
            "extras": _jsonable(extras),
            "wall_time": time.perf_counter() - t0,
        }
    report["summary"] = {"total": total, "passed": passed, "failed": failed,
                         "conjecture_failed": conj_failed,
                         "status": "pass" if failed == 0 else "fail"}
    return report


def _run_dict(args):
    raw, overrides = args
    return run(RunConfig.from_dict(raw, **overrides))


def config_schema():
    num = {"oneOf": [{"type": "integer"}, {"type": "number"},
                     {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}]}
    seeded = {"type": "object", "properties": {
        "seed": {"type": "integer"}, "numerator_bound": {"type": "integer", "minimum": 1},
        "denominator_bound": {"type": "integer", "minimum": 1}}}
    return {
        "type": "object",
        "required": ["N", "L"],
        "additionalProperties": False,
        "properties": {
            "N": {"type": "integer", "minimum": 2},
            "L": {"type": "integer", "minimum": 1},
            "backend": {"enum": list(BACKENDS), "default": "exact"},
            "rapidities": {"oneOf": [
                {"type": "array", "description": "2L points [a, b, c, d]",
                 "items": {"type": "array", "items": num, "minItems": 4, "maxItems": 4}},
                {"type": "object", "properties": {"random_rational": seeded},
                 "required": ["random_rational"]},
                {"type": "object", "properties": {"fendley_limit": {"oneOf": [
                    {"type": "object", "properties": {"c": {"type": "array", "items": num},
                                                      "d": {"type": "array", "items": num}},
                     "required": ["c", "d"]},
                    {"type": "object", "properties": {"random_rational": seeded},
                     "required": ["random_rational"]}]}},
                 "required": ["fendley_limit"]}]},
            "suites": {"type": "array", "items": {"enum": list(SUITES)}},
            "tolerances": {"type": "object", "properties": {
                "float_residual": {"type": "number", "default": 1e-8},
                "degeneracy_gap": {"type": "number", "default": 1e-7}}},
            "output": {"type": "string"},
            "dim_cap": {"type": "integer", "default": DEFAULT_DIM_CAP},
        },
    }


def _parser():
    p = argparse.ArgumentParser(prog="tau2pf", description="Verify tau2-model parafermion identities.")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run suites from a JSON config (object or list of objects)")
    r.add_argument("config")
    r.add_argument("--backend", choices=BACKENDS)
    r.add_argument("--suite", action="append", choices=SUITES)
    r.add_argument("--out")
    r.add_argument("--dim-cap", type=int)
    r.add_argument("--jobs", type=int, default=1, help="parameter sets run in parallel")
    sub.add_parser("schema", help="print the config JSON schema")
    sub.add_parser("registry", help="print the identity -> equation tag map")
    return p


def main(argv=None):
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    if args.command == "schema":
        print(json.dumps(config_schema(), indent=2))
        return 0
    if args.command == "registry":
        print(json.dumps({k: {"paper_eq_tag": t, "kind": kind}
                          for k, (t, kind) in REGISTRY.items()}, indent=2))
        return 0
    try:
        with open(args.config) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    overrides = {"backend": args.backend, "suites": args.suite, "output": args.out,
                 "dim_cap": args.dim_cap}
    batch = raw if isinstance(raw, list) else [raw]
    try:
        # validate everything before running anything
        cfgs = [RunConfig.from_dict(item, **overrides) for item in batch]
    except (ConfigError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.jobs > 1 and len(batch) > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            reports = list(ex.map(_run_dict, [(item, overrides) for item in batch]))
    else:
        reports = [run(c) for c in cfgs]
    doc = reports[0] if not isinstance(raw, list) else {
        "runs": reports,
        "summary": {"runs": len(reports),
                    "failed_runs": sum(r["summary"]["status"] != "pass" for r in reports)}}
    text = json.dumps(doc, indent=2)
    out = args.out or cfgs[0].output
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    for cfg, rep in zip(cfgs, reports):
        s = rep["summary"]
        print(f"N={cfg.N} L={cfg.L} {cfg.backend}: {s['passed']}/{s['total']} passed, "
              f"{s['failed']} failed, {s['conjecture_failed']} conjecture residuals above tol",
              file=sys.stderr)
    return 0 if all(r["summary"]["status"] == "pass" for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
