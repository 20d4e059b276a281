"""Command-line front end for the energy laboratory.

Subcommands:

    energy        evaluate selected functionals for one map / parameter grid
    sweep         parameter sweep with region labels and classifications
    examples      run the built-in counterexample studies
    weights-check estimate an A_p constant and verify the factorization
    orlicz-check  resolve gauge breakpoints and verify gauge properties

Exit codes: 0 success, 1 bad configuration / usage, 2 an ``examples``
signature check failed (observed behaviour contradicts the expected one).

Map grammar (``--map``):

    identity
    rotation:<rho>
    piecewise_linear:<x0>,<y0>;<x1>,<y1>;...
    cantor_log:s=<s>,depth=<N>
    cantor_loglog:p=<p>,depth=<N>

Outputs are deterministic for a fixed seed: JSON is emitted with sorted
keys, CSV rows in a fixed order, and all randomness flows through
``--seed``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import boundary, cantor, discrete
from .circle_map import from_description
from .errors import LabError
from .orlicz import resolve_breakpoints, verify_properties
from .poisson import PoissonExtension
from .report import SCHEMA_VERSION, EnergyParams
from .weights import WeightSpec, estimate_ap_constant, jones_factors, weight

FUNCTIONALS = {
    "e1": "length_power",
    "e2": "gauge_ratio",
    "i1": "kernel_weight",
    "i2": "kernel_gauge",
    "u": "gauge_pair",
    "v": "inverse_kernel",
}


def region_label(p: float, alpha: float, lam: float) -> str:
    """Predicted behaviour of the weighted integrals for a homeomorphism.

    comparable: alpha in (-1, p-1) -- the regime where the integral,
    discrete and boundary energies control each other; finite: above the
    critical exponent alpha = p-2 (or on it with lam < -1) the energies
    are finite outright; divergent: alpha < -1, or alpha = -1 with
    lam >= -1; the remaining edge (alpha = -1, lam < -1) is uncovered.
    """
    if -1 < alpha < p - 1:
        return "comparable"
    if alpha > p - 2 or (alpha == p - 2 and lam < -1):
        return "finite"
    if alpha < -1 or (alpha == -1 and lam >= -1):
        return "divergent"
    return "uncovered"


def _emit(args, payload: dict, rows: list):
    if args.format == "json":
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["functional", "j", "level_sum", "cumulative", "classification"])
        writer.writerows(rows)
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _compute_reports(args, circle_map, params: EnergyParams, levels: int):
    wanted = [f.strip() for f in args.functionals.split(",") if f.strip()]
    bad = [f for f in wanted if f not in FUNCTIONALS]
    if bad:
        raise LabError(f"unknown functionals {bad}; choose from "
                       f"{sorted(FUNCTIONALS)}")
    reports = []
    ext = None
    for f in wanted:
        if f == "e1":
            reports.append(discrete.length_power_energy(
                circle_map, params, levels))
        elif f == "e2":
            reports.append(discrete.gauge_ratio_energy(
                circle_map, params, levels))
        elif f in ("i1", "i2"):
            if ext is None:
                ext = PoissonExtension(circle_map)
            fn = ext.kernel_weight_integral if f == "i1" \
                else ext.kernel_gauge_integral
            reports.append(fn(params, min(levels, 14)))
        elif f == "u":
            reports.append(boundary.gauge_pair_energy(
                circle_map, params, diagonal_rings=min(levels, 14)))
        elif f == "v":
            reports.append(boundary.inverse_kernel_energy(circle_map, params))
    return reports


def _ratio_summary(reports, p: float) -> dict:
    """Ratios of every computed functional against the dyadic length energy.

    The inverse-kernel value enters through its (p-1)-th root so that it is
    commensurable with the others.
    """
    values = {r.functional: r.value for r in reports}
    base = values.get("length_power")
    out = {}
    if not base or base <= 0:
        return out
    for name, val in values.items():
        if name == "length_power":
            continue
        if name == "inverse_kernel":
            out["inverse_kernel_root_over_length_power"] = \
                float(max(val, 0.0) ** (1.0 / (p - 1.0)) / base)
        else:
            out[f"{name}_over_length_power"] = float(val / base)
    return out


def cmd_energy(args) -> int:
    circle_map = from_description(args.map)
    params = EnergyParams(args.p[0], args.alpha[0], args.lam[0])
    reports = _compute_reports(args, circle_map, params, args.levels)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "energy",
        "map": circle_map.description,
        "seed": args.seed,
        "reports": [r.to_json_dict() for r in reports],
        "ratios": _ratio_summary(reports, params.p),
    }
    rows = [row for r in reports for row in r.to_csv_rows()]
    _emit(args, payload, rows)
    return 0


def cmd_sweep(args) -> int:
    circle_map = from_description(args.map)
    entries = []
    rows = []
    for p in args.p:
        for alpha in args.alpha:
            for lam in args.lam:
                params = EnergyParams(p, alpha, lam)
                reports = _compute_reports(args, circle_map, params,
                                           args.levels)
                entry = {
                    "p": p, "alpha": alpha, "lambda": lam,
                    "region": region_label(p, alpha, lam),
                    "results": [r.to_json_dict() for r in reports],
                }
                entries.append(entry)
                rows.extend(row for r in reports for row in r.to_csv_rows())
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "sweep",
        "map": circle_map.description,
        "seed": args.seed,
        "grid": entries,
    }
    _emit(args, payload, rows)
    return 0


def cmd_examples(args) -> int:
    checks = []

    # Study 1: shallow power schedule, p in (1, 2).  The boundary kernel
    # integral stays bounded while the dyadic length energy grows along
    # schedule blocks like 2^(n (1 - p + 1/s)).
    p, s = 1.5, 4.0 / 3.0
    m = cantor.make_staircase_map("power", s, 11)
    sch = m.lift.tree.schedule
    edges = [sch.j[n - 1] for n in range(sch.n0, sch.n0 + 5)]
    B = discrete.block_sums(m, EnergyParams(p, p - 2, 0.0), edges)
    slope = float(np.polyfit(np.arange(B.size), np.log2(B), 1)[0])
    predicted = 1.0 - p + s ** -1
    checks.append({
        "study": "shallow_schedule_blowup",
        "block_sums": [float(b) for b in B],
        "fitted_block_exponent": slope,
        "predicted_block_exponent": predicted,
        "ok": bool(abs(slope - predicted) <= 0.25 * abs(predicted)),
    })

    # Study 2: steep power schedule, p > 2.  The dyadic energy converges
    # while the kernel-integral surrogate sum j_n 2^-n has unbounded,
    # fast-growing partial sums.
    p2, s2 = 3.0, 2.0 / 3.0
    m2 = cantor.make_staircase_map("power", s2, 8)
    sch2 = m2.lift.tree.schedule
    edges2 = [sch2.j[n - 1] for n in range(sch2.n0, sch2.n0 + 5)]
    B2 = discrete.block_sums(m2, EnergyParams(p2, p2 - 2, 0.0), edges2)
    ratios = B2[1:] / B2[:-1]
    part = cantor.gap_rise_partial_sums(sch2, sch2.n0, 4)
    growth = part[1:] / part[:-1] - 1.0
    checks.append({
        "study": "steep_schedule_kernel_blowup",
        "e1_block_sums": [float(b) for b in B2],
        "e1_block_ratios": [float(r) for r in ratios],
        "surrogate_partials": [float(x) for x in part],
        "surrogate_growth": [float(g) for g in growth],
        "ok": bool(np.all(ratios <= 0.9) and np.all(growth[:3] >= 0.5)),
    })

    # Study 3: doubly exponential schedule at the critical exponent pair
    # (p, p-2, -1): identity stays finite, the staircase map's block sums
    # do not decay.
    p3 = 2.0
    m3 = cantor.make_staircase_map("double_exp", p3, 3)
    sch3 = m3.lift.tree.schedule
    edges3 = list(sch3.j)
    B3 = discrete.block_sums(m3, EnergyParams(p3, p3 - 2, -1.0), edges3)
    ident = from_description("identity")
    e1_id = discrete.length_power_energy(
        ident, EnergyParams(p3, p3 - 2, -1.0), 20)
    checks.append({
        "study": "double_exp_critical_line",
        "identity_classification": e1_id.classification,
        "block_sums": [float(b) for b in B3],
        "ok": bool(e1_id.classification == "converged"
                   and B3[1] >= 0.5 * B3[0]),
    })

    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "examples",
        "seed": args.seed,
        "checks": checks,
    }
    rows = [(c["study"], 0, 0.0, 0.0, "ok" if c["ok"] else "failed")
            for c in checks]
    _emit(args, payload, rows)
    return 0 if all(c["ok"] for c in checks) else 2


def cmd_weights_check(args) -> int:
    p, alpha, lam = args.p[0], args.alpha[0], args.lam[0]
    spec = WeightSpec(alpha=alpha, lam=lam)
    w1, w2 = jones_factors(p, alpha, lam)
    radii = np.linspace(0.05, 2.5, 64)
    recon = weight(w1, radii) * weight(w2, radii) ** (1 - p)
    direct = weight(spec, radii)
    mask = np.isfinite(direct) & (direct > 0)
    fact_err = float(np.max(np.abs(recon[mask] / direct[mask] - 1.0)))
    est = estimate_ap_constant(spec, p, trials=args.trials,
                               rng_seed=args.seed)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "weights-check",
        "p": p, "alpha": alpha, "lambda": lam,
        "seed": args.seed,
        "factor_exponents": {
            "alpha1": w1.alpha, "lambda1": w1.lam,
            "alpha2": w2.alpha, "lambda2": w2.lam,
        },
        "factorization_max_rel_error": fact_err,
        "ap_estimate": est.value,
        "trials": est.trials,
    }
    rows = [("ap_estimate", 0, est.value, est.value, "estimated")]
    _emit(args, payload, rows)
    return 0


def cmd_orlicz_check(args) -> int:
    p, lam = args.p[0], args.lam[0]
    spec = resolve_breakpoints(p, lam)
    rep = verify_properties(spec, use_psi=spec.needs_repair)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "orlicz-check",
        "p": p, "lambda": lam,
        "seed": args.seed,
        "breakpoints": {"t1": spec.t1, "t2": spec.t2, "k": spec.k_slope},
        "monotonicity_violations": rep.monotonicity_violations,
        "convexity_violations": rep.convexity_violations,
        "doubling_sup": rep.doubling_sup,
        "derivative_ratio_sup": rep.derivative_ratio_sup,
        "quasi_power_sup": {f"{k:g}": v
                            for k, v in rep.quasi_power_sup.items()},
        "comparability_sup": rep.comparability_sup,
    }
    rows = [("orlicz_doubling", 0, rep.doubling_sup, rep.doubling_sup,
             "checked")]
    _emit(args, payload, rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="harmext-lab",
        description="numerical laboratory for circle-map energy functionals")
    sub = parser.add_subparsers(dest="command", required=True)

    # flag defaults stay None so that a config file can fill any flag the
    # command line left out; the fallbacks are applied in _apply_config
    def common(sp, with_map=True):
        if with_map:
            sp.add_argument("--map", default=None,
                            help="map description (see module docstring)")
        sp.add_argument("--p", type=float, action="append", default=None)
        sp.add_argument("--alpha", type=float, action="append", default=None)
        sp.add_argument("--lambda", dest="lam", type=float, action="append",
                        default=None)
        sp.add_argument("--levels", type=int, default=None)
        sp.add_argument("--functionals", default=None)
        sp.add_argument("--out", default=None)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--format", choices=("json", "csv"), default=None)
        sp.add_argument("--config", default=None,
                        help="JSON file supplying defaults for the flags")

    sp = sub.add_parser("energy", help="evaluate functionals at one point")
    common(sp)
    sp.set_defaults(func=cmd_energy, single_point=True)

    sp = sub.add_parser("sweep", help="evaluate over a parameter grid")
    common(sp)
    sp.set_defaults(func=cmd_sweep, single_point=False)

    sp = sub.add_parser("examples", help="run the counterexample studies")
    common(sp, with_map=False)
    sp.set_defaults(func=cmd_examples, single_point=False)

    sp = sub.add_parser("weights-check", help="A_p estimate + factorization")
    common(sp, with_map=False)
    sp.add_argument("--trials", type=int, default=100)
    sp.set_defaults(func=cmd_weights_check, single_point=True)

    sp = sub.add_parser("orlicz-check", help="gauge breakpoints + properties")
    common(sp, with_map=False)
    sp.set_defaults(func=cmd_orlicz_check, single_point=True)
    return parser


def _apply_config(args):
    if getattr(args, "config", None):
        with open(args.config) as fh:
            cfg = json.load(fh)
        if not isinstance(cfg, dict):
            raise LabError("config file must contain a JSON object")
        for key, val in cfg.items():
            attr = "lam" if key == "lambda" else key
            if not hasattr(args, attr):
                raise LabError(f"unknown config key {key!r}")
            if getattr(args, attr) is None:
                if attr in ("p", "alpha", "lam") and not isinstance(val, list):
                    val = [val]
                setattr(args, attr, val)
    # fallbacks for everything still unset
    defaults = {"map": "identity", "p": [2.0], "alpha": [0.0], "lam": [0.0],
                "levels": 12, "functionals": "e1,e2", "seed": 0,
                "format": "json"}
    for attr, val in defaults.items():
        if hasattr(args, attr) and getattr(args, attr) is None:
            setattr(args, attr, val)
    if getattr(args, "single_point", False):
        for name in ("p", "alpha", "lam"):
            if len(getattr(args, name)) != 1:
                raise LabError(
                    f"this command takes exactly one --{name} value")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        return args.func(args)
    except LabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
