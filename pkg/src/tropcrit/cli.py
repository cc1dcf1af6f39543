"""Command-line surface: JSON in, JSON out.

Commands run the pipeline on a variety spec (ideal, parametrization or
arrangement), write a machine-readable report to stdout (or --out) and a
human summary to stderr.  All randomness flows from one seeded generator;
the seed is echoed in every report so runs are reproducible.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from dataclasses import dataclass
from fractions import Fraction
from random import Random

from . import errors
from .arrangement import Arrangement
from .asymptotics import (
    DataCurve,
    branch_seeds,
    refine_seed_exact,
    series_newton_lift,
    valuation_vector,
)
from .bs_lct import BSFixture, bs_slope_intersection, conjecture_check
from .groebner import Ideal
from .mle import VarietySpec, critical_system, ml_degree, mle_closed_form
from .rings import Polynomial, dot
from .tropical import (
    TropicalEngine,
    critical_slopes,
    find_rigid_rays,
    stratum_euler_char,
    weighted_ray_sum,
)

VERSION = "0.1.0"
DEFAULT_SEED = 20240
DEFAULT_BOUND = 3
DEFAULT_ORDER = 8
DEFAULT_PRECISION = 53

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_VALIDATION = 2
EXIT_RESOURCE = 3
EXIT_DEGENERATE = 4
EXIT_PRECONDITION = 5
EXIT_NUMERIC = 6

EXIT_CODES = {
    errors.SpecValidationError: EXIT_VALIDATION,
    errors.PolyParseError: EXIT_VALIDATION,
    errors.ResourceBudgetExceeded: EXIT_RESOURCE,
    errors.DegenerateSample: EXIT_DEGENERATE,
    errors.NotZeroDimensional: EXIT_DEGENERATE,
    errors.MLDegreeNotOne: EXIT_PRECONDITION,
    errors.NotInTropicalVariety: EXIT_PRECONDITION,
    errors.AlphaNotOnHyperplane: EXIT_PRECONDITION,
    errors.NotCentral: EXIT_PRECONDITION,
    errors.NotIndecomposable: EXIT_PRECONDITION,
    errors.MissingDiscrepancy: EXIT_PRECONDITION,
    errors.DimensionTooLarge: EXIT_PRECONDITION,
    errors.SingularJacobian: EXIT_NUMERIC,
    errors.NoConvergence: EXIT_NUMERIC,
    errors.TruncationTooShort: EXIT_NUMERIC,
}

SPEC_SCHEMA = {
    "oneOf": [
        {
            "kind": "ideal",
            "required": {"variables": "list of names", "generators": "list of polynomial strings"},
        },
        {
            "kind": "parametrization",
            "required": {"parameters": "list of names", "functions": "list of polynomial strings"},
            "optional": {"coordinates": "list of names (default t1..tp)"},
        },
        {
            "kind": "arrangement",
            "required": {"variables": "list of names", "matrix": "rows [a_1..a_n, constant]"},
            "optional": {"projective_closure": "bool (default true)"},
        },
    ]
}
CURVE_SCHEMA = {"components": "list of polynomial strings in t"}
BS_FIXTURE_SCHEMA = {"factors": [{"normal": "integer vector", "offsets": "optional list of rationals"}]}
K_SCHEMA = {"rays": [{"ray": "integer vector", "k": "positive rational"}]}


# -- input loading -----------------------------------------------------------------


def _expect(obj, key, pointer, types=None):
    if key not in obj:
        raise errors.SpecValidationError(f"missing field {key!r}", pointer)
    val = obj[key]
    if types and not isinstance(val, types):
        raise errors.SpecValidationError(
            f"field {key!r} has wrong type {type(val).__name__}", f"{pointer}/{key}"
        )
    return val


def load_spec(source) -> VarietySpec:
    """Parse a variety spec from a JSON object, string or file path."""
    if isinstance(source, str):
        if source.lstrip().startswith("{"):
            obj = json.loads(source)
        else:
            with open(source) as fh:
                obj = json.load(fh)
    else:
        obj = source
    if not isinstance(obj, dict):
        raise errors.SpecValidationError("spec must be a JSON object", "")
    kind = _expect(obj, "kind", "", str)
    if kind == "ideal":
        vars = tuple(_expect(obj, "variables", "", list))
        gens = _expect(obj, "generators", "", list)
        polys = []
        for i, text in enumerate(gens):
            try:
                polys.append(Polynomial.parse(text, vars))
            except errors.PolyParseError as exc:
                raise errors.SpecValidationError(str(exc), f"/generators/{i}")
        return VarietySpec(kind="ideal", ideal=Ideal(polys, vars))
    if kind == "parametrization":
        params = tuple(_expect(obj, "parameters", "", list))
        texts = _expect(obj, "functions", "", list)
        funcs = []
        for i, text in enumerate(texts):
            try:
                funcs.append(Polynomial.parse(text, params))
            except errors.PolyParseError as exc:
                raise errors.SpecValidationError(str(exc), f"/functions/{i}")
        coords = tuple(obj.get("coordinates") or ())
        return VarietySpec(kind="parametrization", functions=funcs, coordinates=coords)
    if kind == "arrangement":
        vars = tuple(_expect(obj, "variables", "", list))
        matrix = _expect(obj, "matrix", "", list)
        rows = []
        for i, row in enumerate(matrix):
            if not isinstance(row, list) or len(row) != len(vars) + 1:
                raise errors.SpecValidationError(
                    f"row must have {len(vars)+1} entries (coefficients + constant)",
                    f"/matrix/{i}",
                )
            coeffs = tuple(Fraction(str(x)) for x in row[:-1])
            rows.append((coeffs, Fraction(str(row[-1]))))
        arr = Arrangement(
            rows=rows,
            nvars=len(vars),
            projective_closure=obj.get("projective_closure", True),
            vars=vars,
        )
        return VarietySpec(kind="arrangement", arrangement=arr)
    raise errors.SpecValidationError(f"unknown kind {kind!r}", "/kind")


def serialize_spec(spec: VarietySpec):
    if spec.kind == "ideal":
        return {
            "kind": "ideal",
            "variables": list(spec.ideal.vars),
            "generators": [str(g) for g in spec.ideal.gens],
        }
    if spec.kind == "parametrization":
        return {
            "kind": "parametrization",
            "parameters": list(spec.params),
            "functions": [str(f) for f in spec.functions],
            "coordinates": list(spec.coordinates),
        }
    arr = spec.arrangement
    return {
        "kind": "arrangement",
        "variables": list(arr.vars),
        "matrix": [
            [str(x) for x in coeffs] + [str(const)] for coeffs, const in arr.rows
        ],
        "projective_closure": arr.projective_closure,
    }


def load_curve(path) -> DataCurve:
    with open(path) as fh:
        obj = json.load(fh)
    comps = _expect(obj, "components", "", list)
    try:
        return DataCurve.parse(comps)
    except errors.PolyParseError as exc:
        raise errors.SpecValidationError(str(exc), "/components")


def load_k_map(path):
    with open(path) as fh:
        obj = json.load(fh)
    out = {}
    for i, item in enumerate(_expect(obj, "rays", "", list)):
        ray = tuple(int(x) for x in _expect(item, "ray", f"/rays/{i}", list))
        out[ray] = Fraction(str(_expect(item, "k", f"/rays/{i}")))
    return out


# -- job configuration ------------------------------------------------------------


@dataclass
class JobConfig:
    command: str
    spec_source: str
    bound: int = DEFAULT_BOUND
    order: int = DEFAULT_ORDER
    seed: int = DEFAULT_SEED
    budget: int | None = None
    precision: int = DEFAULT_PRECISION
    out: str | None = None
    curve_path: str | None = None
    bs_fixture_path: str | None = None
    k_path: str | None = None

    def __post_init__(self):
        if self.budget is None:
            env = os.environ.get("TROPCRIT_BUDGET")
            if env is not None:
                self.budget = int(env)
        if self.bound < 1:
            raise errors.SpecValidationError("bound must be >= 1", "/options/bound")
        if self.order < 1:
            raise errors.SpecValidationError("order must be >= 1", "/options/order")
        if self.precision < 1:
            raise errors.SpecValidationError(
                "precision must be >= 1", "/options/precision"
            )
        if self.budget is not None and self.budget < 0:
            raise errors.SpecValidationError(
                "budget must be >= 0", "/options/budget"
            )

    def options_dict(self):
        return {
            "bound": self.bound,
            "order": self.order,
            "seed": self.seed,
            "budget": self.budget,
            "precision": self.precision,
        }


WARNING_CODES = {
    "ConnectednessAssumed": "connectedness_unverified",
    "BoundLimitedSearch": "bound_limited_search",
    "ApproximateBranch": "approximate_coefficients",
    "SquarefreeCheckFailed": "squarefree_check_failed",
}


def _frac_str(x) -> str:
    return str(Fraction(x))


def _coeff_json(c):
    if isinstance(c, (int, Fraction)):
        return {"value": _frac_str(c), "exact": True}
    c = complex(c)
    if abs(c.imag) < 1e-14 * max(1.0, abs(c.real)):
        return {"value": repr(c.real), "exact": False}
    return {"value": repr(c), "exact": False}


def _series_json(series):
    return {
        "valuation": series.valuation,
        "truncation_order": series.truncation_order,
        "coefficients": [_coeff_json(c) for c in series.coeffs],
        "exact": series.exact,
    }


def _ray_json(ray, chi=None):
    out = {"v": list(ray.v), "rigid": ray.rigid, "source": ray.source}
    if chi is not None:
        out["euler_char"] = chi
    return out


def _slope_json(h, svars):
    return {"normal": list(h.normal), "form": h.form_string(svars)}


def frac_decimal(x: Fraction, digits: int) -> str:
    """Decimal expansion of a rational to the given number of digits."""
    sign = "-" if x < 0 else ""
    x = abs(x)
    whole = x.numerator // x.denominator
    rem = x.numerator - whole * x.denominator
    frac_digits = []
    for _ in range(digits):
        rem *= 10
        d = rem // x.denominator
        frac_digits.append(str(d))
        rem -= d * x.denominator
    return f"{sign}{whole}." + "".join(frac_digits)


# -- pipeline ----------------------------------------------------------------------


def _unknown_valuations(spec: VarietySpec, ray):
    """Valuation ansatz for the unknowns induced by a ray in data space."""
    if spec.kind == "ideal":
        return tuple(ray), []
    vals = [0] * len(spec.unknowns)
    matched = set()
    notes = []
    for i, f in enumerate(spec.tuple_polys()):
        if f.is_term() and f.total_degree() == 1:
            ((e, c),) = f.terms.items()
            j = next(k for k, x in enumerate(e) if x)
            vals[j] = ray[i]
            matched.add(j)
    for j, name in enumerate(spec.unknowns):
        if j not in matched:
            notes.append(
                f"no coordinate function equals unknown {name}; valuation 0 assumed"
            )
    return tuple(vals), notes


def _branches(spec, curve, rays, cfg, rng, notes):
    system = critical_system(
        spec, None, formulation="minors" if spec.kind == "ideal" else "auto"
    )
    alpha0 = curve.value_at_zero()
    out = []
    # interior branches (valuation zero ansatz)
    jobs = [((0,) * len(spec.unknowns), None)]
    for ray in rays:
        if dot(alpha0, ray.v) == 0:
            vals, warn = _unknown_valuations(spec, ray.v)
            notes.extend(warn)
            if any(vals):
                jobs.append((vals, ray))
    for vals, ray in jobs:
        try:
            exact, numeric = branch_seeds(
                system, curve, valuations=vals, rng=rng, budget=cfg.budget
            )
        except errors.NotZeroDimensional:
            continue
        for seed in exact + numeric:
            try:
                sol = series_newton_lift(
                    system, curve, seed=seed, order=cfg.order, valuations=vals
                )
            except (errors.SingularJacobian, errors.NoConvergence) as exc:
                notes.append(f"branch at {vals} failed to lift: {exc}")
                continue
            try:
                vv = valuation_vector(sol, spec)
            except errors.TruncationTooShort:
                sol = series_newton_lift(
                    system, curve, seed=seed, order=2 * cfg.order, valuations=vals
                )
                vv = valuation_vector(sol, spec)
            entry = {
                "unknown_valuations": list(vals),
                "series": [_series_json(s) for s in sol.branch],
                "valuation_vector": list(vv),
                "exact": sol.exact,
                "residual_order": sol.residual_order,
                "nonnegative_certificate": all(v >= 0 for v in vv),
            }
            if ray is not None:
                entry["ray"] = list(ray.v)
            if not sol.exact and cfg.precision > 53:
                refined = refine_seed_exact(
                    system, curve, seed, valuations=vals, bits=cfg.precision
                )
                if all(isinstance(r, Fraction) for r in refined):
                    digits = max(1, cfg.precision * 30 // 100)
                    entry["refined_leading"] = [
                        frac_decimal(r, digits) for r in refined
                    ]
            out.append(entry)
    return out


def run_report(cfg: JobConfig):
    """Execute the requested pipeline; returns (report dict, exit code)."""
    rng = Random(cfg.seed)
    report = {
        "tool": "tropcrit",
        "version": VERSION,
        "command": cfg.command,
        "options": cfg.options_dict(),
        "warnings": [],
    }
    notes = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        spec = load_spec(cfg.spec_source)
        report["inputs"] = serialize_spec(spec)
        svars = list(spec.svars)
        ideal = spec.to_ideal(cfg.budget)
        engine = TropicalEngine(ideal, cfg.budget)

        needs_rays = cfg.command in (
            "rigid-rays",
            "slopes",
            "euler",
            "asymptotics",
            "bs-slopes",
            "lct",
            "report",
            "mle",
        )
        rays = []
        if needs_rays:
            rays = find_rigid_rays(ideal, bound=cfg.bound, engine=engine)
            report["exhaustive_within_bound"] = cfg.bound

        if cfg.command in ("rigid-rays", "report"):
            report["rays"] = [_ray_json(r) for r in rays]

        if cfg.command in ("slopes", "report"):
            report["slopes"] = [
                _slope_json(h, svars) for h in critical_slopes(rays)
            ]

        if cfg.command in ("euler", "report"):
            chis = [
                stratum_euler_char(ideal, r, rng=rng, budget=cfg.budget, engine=engine)
                for r in rays
            ]
            report["rays"] = [_ray_json(r, chi) for r, chi in zip(rays, chis)]
            report["weighted_ray_sum"] = list(
                weighted_ray_sum(ideal, rays, rng=rng, budget=cfg.budget, engine=engine)
            )

        if cfg.command in ("mle", "report"):
            degree = ml_degree(spec, rng=rng, budget=cfg.budget)
            report["ml_degree"] = degree
            if degree == 1 and rays:
                formula = mle_closed_form(spec, rays, rng=rng, budget=cfg.budget)
                report["mle"] = {
                    "constants": [_frac_str(c) for c in formula.constants],
                    "coordinates": [
                        formula.coordinate_str(i) for i in range(len(formula.constants))
                    ],
                    "factors": formula.to_json(),
                }

        if cfg.command == "asymptotics":
            if not cfg.curve_path:
                raise errors.SpecValidationError(
                    "asymptotics requires --curve", "/curve"
                )
            curve = load_curve(cfg.curve_path)
            slopes = critical_slopes(rays)
            alpha0 = curve.value_at_zero()
            on = [r for r in rays if dot(alpha0, r.v) == 0]
            if on:
                curve.validate(ray=on[0], slopes=slopes, rng=rng)
            report["curve"] = {"components": [str(c) for c in curve.components]}
            report["branches"] = _branches(spec, curve, rays, cfg, rng, notes)

        if cfg.command in ("bs-slopes", "report"):
            fixture = (
                BSFixture.load(cfg.bs_fixture_path) if cfg.bs_fixture_path else None
            )
            bs = bs_slope_intersection(rays, fixture=fixture)
            entry = {
                "intersection_with_critical_slopes": [
                    _slope_json(h, svars) for h in bs.intersection_with_sf
                ]
            }
            if fixture is not None:
                entry["fixture_slopes"] = [
                    _slope_json(h, svars) for h in bs.fixture_slopes
                ]
                entry["fixture_only"] = [_slope_json(h, svars) for h in bs.bs_only]
                entry["critical_only"] = [_slope_json(h, svars) for h in bs.sf_only]
                entry["consistent_with_fixture"] = bs.consistent_with_fixture
            report["bs"] = entry

        if cfg.command in ("lct", "report"):
            kmap = load_k_map(cfg.k_path) if cfg.k_path else None
            arrangement = (
                spec.arrangement if spec.kind == "arrangement" else None
            )
            nonneg = [r for r in rays if all(x >= 0 for x in r.v)]
            if arrangement is None and not kmap:
                if cfg.command == "lct":
                    raise errors.MissingDiscrepancy(
                        "lct needs an arrangement spec or --k with discrepancies"
                    )
                notes.append("lct skipped: no discrepancy data for this spec kind")
            elif nonneg:
                report["lct"] = conjecture_check(
                    nonneg, k=kmap, arrangement=arrangement
                )

    seen = set()
    for w in caught:
        code = WARNING_CODES.get(type(w.message).__name__, "warning")
        msg = str(w.message)
        if (code, msg) not in seen:
            seen.add((code, msg))
            report["warnings"].append({"code": code, "message": msg})
    for msg in notes:
        report["warnings"].append({"code": "note", "message": msg})
    report["seed"] = cfg.seed
    return report, EXIT_OK


def _summarize(report, stream):
    print(f"tropcrit {report['version']} :: {report['command']}", file=stream)
    if "rays" in report:
        for r in report["rays"]:
            chi = f"  chi={r['euler_char']}" if "euler_char" in r else ""
            print(f"  ray {tuple(r['v'])}  rigid={r['rigid']}{chi}", file=stream)
    if "slopes" in report:
        forms = ", ".join(s["form"] for s in report["slopes"])
        print(f"  slopes: {forms}", file=stream)
    if "weighted_ray_sum" in report:
        print(f"  weighted ray sum: {tuple(report['weighted_ray_sum'])}", file=stream)
    if "ml_degree" in report:
        print(f"  ML degree: {report['ml_degree']}", file=stream)
    if "mle" in report:
        for i, c in enumerate(report["mle"]["coordinates"]):
            print(f"  psi_{i + 1} = {c}", file=stream)
    if "branches" in report:
        for b in report["branches"]:
            print(
                f"  branch valuations {tuple(b['valuation_vector'])} "
                f"exact={b['exact']}",
                file=stream,
            )
    if "bs" in report:
        forms = ", ".join(
            s["form"] for s in report["bs"]["intersection_with_critical_slopes"]
        )
        print(f"  BS-slope intersection: {forms}", file=stream)
        if "fixture_only" in report["bs"]:
            fo = ", ".join(s["form"] for s in report["bs"]["fixture_only"])
            so = ", ".join(s["form"] for s in report["bs"]["critical_only"])
            print(f"  fixture-only: {fo or '-'} | critical-only: {so or '-'}", file=stream)
    if "lct" in report:
        for item in report["lct"]:
            print(
                f"  lct ray {tuple(item['ray'])} k={item['k']} "
                f"facet={item['facet_defining']}",
                file=stream,
            )
    for w in report["warnings"]:
        print(f"  [{w['code']}] {w['message']}", file=stream)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tropcrit",
        description="rigid tropical rays, critical slopes, closed-form MLE, "
        "series asymptotics and LCT facet tests for very affine varieties",
    )
    parser.add_argument("--schema", action="store_true", help="print the JSON schemas and exit")
    sub = parser.add_subparsers(dest="command")
    for name, doc in [
        ("rigid-rays", "exhaustive rigid-ray search within the bound"),
        ("slopes", "critical slope hyperplanes of the rigid rays"),
        ("euler", "stratum Euler characteristics and the weighted ray sum"),
        ("mle", "ML degree and, when it is one, the closed-form estimator"),
        ("asymptotics", "series branches along a data curve"),
        ("bs-slopes", "intersection with the Bernstein-Sato slope locus"),
        ("lct", "LCT-polytope facet predicate per nonnegative ray"),
        ("report", "full pipeline"),
    ]:
        p = sub.add_parser(name, help=doc)
        p.add_argument("--spec", required=True, help="spec file path or inline JSON")
        p.add_argument("--bound", type=int, default=DEFAULT_BOUND)
        p.add_argument("--order", type=int, default=DEFAULT_ORDER)
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--budget", type=int, default=None)
        p.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
        p.add_argument("--out", default=None)
        p.add_argument("--curve", default=None, help="data curve JSON (asymptotics)")
        p.add_argument("--bs-fixture", default=None, help="external factor list JSON")
        p.add_argument("--k", default=None, help="discrepancy map JSON (lct)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.schema:
        json.dump(
            {
                "spec": SPEC_SCHEMA,
                "curve": CURVE_SCHEMA,
                "bs_fixture": BS_FIXTURE_SCHEMA,
                "k": K_SCHEMA,
            },
            sys.stdout,
            indent=2,
            sort_keys=True,
        )
        print()
        return EXIT_OK
    if not args.command:
        parser.print_help()
        return EXIT_VALIDATION
    try:
        cfg = JobConfig(
            command=args.command,
            spec_source=args.spec,
            bound=args.bound,
            order=args.order,
            seed=args.seed,
            budget=args.budget,
            precision=args.precision,
            out=args.out,
            curve_path=args.curve,
            bs_fixture_path=getattr(args, "bs_fixture"),
            k_path=args.k,
        )
        report, code = run_report(cfg)
    except Exception as exc:  # noqa: BLE001 - mapped to exit codes
        for cls, code in EXIT_CODES.items():
            if isinstance(exc, cls):
                print(f"error: {exc}", file=sys.stderr)
                return code
        raise
    payload = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    _summarize(report, sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
