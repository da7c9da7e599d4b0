"""Batch command-line front end.

Subcommands: simulate, fit, errors, lwlr, prf, setfam, mutinfo, repro.
Every run is reproducible from its flags (or --config JSON) plus --seed;
artifacts are CSV/JSON written atomically under --out-dir. Module errors
exit 1 with a machine-readable JSON object on stderr; usage errors exit 2.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import artifacts, figures, setfam
from .channel import (ChannelParams, FuncSpec, StarTopology, agree_secret,
                      simulate_exchange, stream)
from .lwlr import lwlr_vs_lwr_report, sample_lwlr
from .mutualinfo import OverlapDesign, closed_form_mi, covariance_oracle, monte_carlo_mi
from .oracle import build_error_oracle, error_statistics
from .prf import (PrfKey, PrfParams, collision_probability_bound,
                  homomorphism_gap, prf_eval, star_collision_rate)
from .regression import fit_dataset
from .regression import transform_dataset
from .statcheck import sigma_hat
from .transforms import transform_for_func


def _out(args, name: str) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out / name


def _load_fitted(args):
    """Read a dataset artifact and return (dataset, linearized view)."""
    dataset = artifacts.read_dataset(args.dataset)
    kind = dataset.meta.func.kind if dataset.meta else "linear"
    return dataset, transform_dataset(dataset, transform_for_func(kind))


def cmd_simulate(args) -> int:
    func = FuncSpec(args.kind, args.beta0, args.beta1)
    params = ChannelParams(sigma=args.sigma, modulus=args.modulus)
    topo = StarTopology.single_star(args.parties)
    ds = simulate_exchange(topo, 0, func, params, args.ell,
                           coverage=args.coverage, master_seed=args.seed)
    artifacts.write_dataset(ds, _out(args, "dataset.csv"),
                            _out(args, "dataset.meta.json"))
    artifacts.read_dataset(_out(args, "dataset.csv"),
                           _out(args, "dataset.meta.json"))  # self-check round trip
    return 0


def cmd_fit(args) -> int:
    _, fitted = _load_fitted(args)
    hyp = fit_dataset(fitted, refine=not args.no_refine)
    artifacts.write_json(_out(args, "hypothesis.json"), hyp.to_json_obj())
    return 0


def cmd_errors(args) -> int:
    _, fitted = _load_fitted(args)
    hyp = fit_dataset(fitted, refine=not args.no_refine)
    oracle = build_error_oracle(fitted, hyp)
    artifacts.write_error_table(oracle, _out(args, "errors.csv"))
    artifacts.write_json(_out(args, "error_stats.json"), error_statistics(oracle))
    return 0


def cmd_lwlr(args) -> int:
    _, fitted = _load_fitted(args)
    hyp = fit_dataset(fitted)
    oracle = build_error_oracle(fitted, hyp)
    m = oracle.modulus
    rng = stream(args.seed, 0x17)
    s = rng.integers(0, m, size=args.w, dtype=np.int64)
    rows = []
    for i in range(args.count):
        smp = sample_lwlr(s, oracle, rng)
        rows.append(list(smp.a) + [smp.b])
    header = [f"a_{i}" for i in range(args.w)] + ["b"]
    artifacts.write_csv(_out(args, "lwlr_samples.csv"), header, rows)
    if args.compare_lwr is not None:
        rep = lwlr_vs_lwr_report(s, oracle, m, args.compare_lwr,
                                 args.count, stream(args.seed, 0x18))
        artifacts.write_csv(_out(args, "lwlr_vs_lwr.csv"),
                            ["trial", "x", "lwlr_abs_err", "lwr_abs_err"],
                            ([r["trial"], r["x"], r["lwlr_abs_err"], r["lwr_abs_err"]]
                             for r in rep))
    if args.export_secret:
        artifacts.write_json(_out(args, "secret.json"),
                             {"modulus": m, "w": args.w, "s": [int(v) for v in s]})
    return 0


def _prf_setup(args):
    func = FuncSpec("linear", 0, args.beta1)
    params = ChannelParams(sigma=args.sigma, modulus=args.modulus)
    topo = StarTopology.single_star(args.parties)
    prf_params = PrfParams.from_seed(args.modulus, args.w, nleaves=args.leaves,
                                     seed=args.seed)

    def make_oracle(run: int):
        ds = simulate_exchange(topo, 0, func, params, args.ell,
                               coverage="complete", master_seed=args.seed + run)
        fitted = transform_dataset(ds, transform_for_func("linear"))
        return build_error_oracle(fitted, fit_dataset(fitted))

    return prf_params, make_oracle


def cmd_prf(args) -> int:
    prf_params, make_oracle = _prf_setup(args)
    artifacts.write_json(_out(args, "prf_params.json"), prf_params.to_json_obj())
    rng = stream(args.seed, 0x5F)
    if args.prf_cmd == "eval":
        oracle = make_oracle(0)
        key = PrfKey.random(args.modulus, args.w, rng)
        x = args.x if args.x else "".join(
            "1" if b else "0" for b in rng.integers(0, 2, size=args.leaves))
        out = prf_eval(prf_params, oracle, key, x)
        artifacts.write_csv(_out(args, "prf_output.csv"),
                            ["x_bits", "coord", "value"],
                            ((x, i, int(v)) for i, v in enumerate(out)))
        return 0
    if args.prf_cmd == "homtest":
        oracle = make_oracle(0)
        sh = sigma_hat(args.sigma)
        tau = 300.0 ** 0.5
        bound = 3.0 * tau * sh
        rows = []
        within = 0
        total = 0
        for t in range(args.trials):
            k1 = PrfKey.random(args.modulus, args.w, rng)
            k2 = PrfKey.random(args.modulus, args.w, rng)
            x = "".join("1" if b else "0" for b in rng.integers(0, 2, size=args.leaves))
            gap = homomorphism_gap(prf_params, oracle, k1, k2, x)
            within += int(np.count_nonzero(np.abs(gap) <= bound))
            total += gap.size
            rows.append([t, float(np.max(np.abs(gap)))])
        artifacts.write_csv(_out(args, "hom_gap.csv"), ["trial", "max_abs_gap"], rows)
        artifacts.write_json(_out(args, "hom_summary.json"), {
            "trials": args.trials, "coordinates": total, "tau": tau,
            "sigma_hat": sh, "bound": bound, "within_bound_rate": within / total,
        })
        return 0
    if args.prf_cmd == "startest":
        oracle_i = make_oracle(0)
        oracle_j = make_oracle(1)
        key = PrfKey.random(args.modulus, args.w, rng)
        rate = star_collision_rate(prf_params, oracle_i, oracle_j, key,
                                   args.trials, rng)
        artifacts.write_json(_out(args, "star_summary.json"), {
            "trials": args.trials, "sigma": args.sigma, "collision_rate": rate,
            "bound": collision_probability_bound(args.sigma) + 0.02,
        })
        return 0
    raise ValueError(f"unknown prf subcommand {args.prf_cmd!r}")


def cmd_setfam(args) -> int:
    if args.setfam_cmd == "construct":
        if args.scheme == "small_n":
            fam = setfam.construct_small_n(args.m, args.k, args.t)
        elif args.scheme == "exact_t":
            fam = setfam.construct_exact_t(args.k, args.t)
        elif args.scheme == "fano":
            fam = setfam.FANO_PLANE
        elif args.scheme == "double":
            base = setfam.SetFamily.from_json_obj(artifacts.read_json(args.family))
            fam = setfam.double_family(base, args.k, args.t)
        else:
            raise ValueError(f"unknown scheme {args.scheme!r}")
        artifacts.write_json(_out(args, "family.json"), fam.to_json_obj())
        return 0
    if args.setfam_cmd == "verify":
        fam = setfam.SetFamily.from_json_obj(artifacts.read_json(args.family),
                                             allow_duplicates=True)
        rep = setfam.verify_family(fam, args.k, args.t)
        artifacts.write_json(_out(args, "family_report.json"), rep.to_json_obj())
        return 0
    if args.setfam_cmd == "bounds":
        small = setfam.bound_small_n(args.n, args.k, args.t)
        simple = setfam.bound_simple(args.n, args.k, args.t)
        obj = {
            "n": args.n, "k": args.k, "t": args.t,
            "small_n": small if small is not None else "not covered",
            "simple": f"{simple.numerator}/{simple.denominator}",
            "simple_float": float(simple),
        }
        if args.k % args.t == 0:
            om = setfam.bound_one_more(args.k, args.t)
            obj["one_more"] = f"{om.numerator}/{om.denominator}"
            obj["one_more_float"] = float(om)
        if args.m is not None:
            obj["feasibility"] = setfam.feasibility_check(args.n, args.k, args.t, args.m)
        if args.model is not None:
            obj["max_prfs"] = setfam.max_sskh_prfs(args.n, args.k, args.t, args.model)
        artifacts.write_json(_out(args, "bounds.json"), obj)
        return 0
    if args.setfam_cmd == "brute":
        size, fam = setfam.brute_force_max(args.n, args.k, args.t)
        obj = {"n": args.n, "k": args.k, "t": args.t, "brute_force": size}
        artifacts.write_json(_out(args, "bounds.json"), obj)
        artifacts.write_json(_out(args, "family.json"), fam.to_json_obj())
        return 0
    raise ValueError(f"unknown setfam subcommand {args.setfam_cmd!r}")


def cmd_mutinfo(args) -> int:
    if args.design:
        design = OverlapDesign.from_json_obj(artifacts.read_json(args.design))
    else:
        design = OverlapDesign(xs=tuple(args.xs), ws=tuple(args.ws),
                               a=args.a, sigma=args.sigma)
    oracle = covariance_oracle(design)
    report = {
        "mi_closed": closed_form_mi(design),
        "mi_oracle": oracle.mi,
        "mi_mc": None,
        "mc_stderr": None,
        "sigma_matrix": [float(v) for v in oracle.sigma_matrix.ravel()],
    }
    if args.trials:
        est, se = monte_carlo_mi(design, args.trials, stream(args.seed, 0x3A))
        report["mi_mc"] = est
        report["mc_stderr"] = se
    artifacts.write_json(_out(args, "mutinfo_report.json"), report)
    return 0


def cmd_repro(args) -> int:
    run = figures.run_figure(args.figure, seed=args.seed, sigma=args.sigma,
                             ell=args.ell)
    artifacts.write_json(_out(args, f"{args.figure}_slope.json"),
                         run.slope_json_obj())
    artifacts.write_histogram(run.oracle.table,
                              _out(args, f"{args.figure}_hist.csv"))
    artifacts.write_json(_out(args, f"{args.figure}_error_stats.json"),
                         error_statistics(run.oracle))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="starlwlr",
        description="Gaussian-channel regression workbench: simulate, fit, "
                    "derive error oracles, sample, and verify bounds.")
    parser.add_argument("--config", help="JSON file with default option values")
    parser.add_argument("--seed", type=int, default=0, help="master seed")
    parser.add_argument("--out-dir", default=".", help="artifact directory")
    parser.add_argument("--format", choices=["csv", "json"], default="csv",
                        help="preferred tabular format (csv artifacts always "
                             "written; json adds nothing today)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate a star's exchange round")
    p.add_argument("--kind", default="linear",
                   choices=["linear", "sqrt", "square", "cbrt", "log1p"])
    p.add_argument("--beta0", type=int, default=0)
    p.add_argument("--beta1", type=int, required=True)
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--sigma", type=float, default=30.0)
    p.add_argument("--ell", type=int, default=2**16)
    p.add_argument("--coverage", choices=["random", "complete"], default="random")
    p.add_argument("--parties", type=int, default=4)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fit", help="grid-search hypothesis for a dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--no-refine", action="store_true")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("errors", help="error table and statistics")
    p.add_argument("--dataset", required=True)
    p.add_argument("--no-refine", action="store_true")
    p.set_defaults(func=cmd_errors)

    p = sub.add_parser("lwlr", help="sample (a, <a,s> + e) batches")
    p.add_argument("--dataset", required=True)
    p.add_argument("--w", type=int, default=16)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--compare-lwr", type=int, default=None, metavar="P",
                   help="also write the rounding-baseline comparison at "
                        "target modulus P")
    p.add_argument("--export-secret", action="store_true",
                   help="write secret.json (never written by default)")
    p.set_defaults(func=cmd_lwlr)

    p = sub.add_parser("prf", help="gadget-tree PRF harnesses")
    p.add_argument("prf_cmd", choices=["eval", "homtest", "startest"])
    p.add_argument("--modulus", type=int, default=12288)
    p.add_argument("--sigma", type=float, default=30.0)
    p.add_argument("--beta1", type=int, default=546)
    p.add_argument("--ell", type=int, default=2**16)
    p.add_argument("--w", type=int, default=4)
    p.add_argument("--leaves", type=int, default=8)
    p.add_argument("--parties", type=int, default=4)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--x", default=None, help="input bits for eval")
    p.set_defaults(func=cmd_prf)

    p = sub.add_parser("setfam", help="set-family constructions and bounds")
    p.add_argument("setfam_cmd", choices=["construct", "verify", "bounds", "brute"])
    p.add_argument("--scheme", choices=["small_n", "exact_t", "double", "fano"],
                   default="small_n")
    p.add_argument("--family", help="family JSON path (verify / double)")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--m", type=int, default=None,
                   help="family size for construct/feasibility")
    p.add_argument("--model", choices=list(setfam.ADVERSARY_MODELS), default=None)
    p.set_defaults(func=cmd_setfam)

    p = sub.add_parser("mutinfo", help="mutual information of overlapping fits")
    p.add_argument("--design", help="design JSON path")
    p.add_argument("--xs", type=float, nargs="*")
    p.add_argument("--ws", type=float, nargs="*")
    p.add_argument("--a", type=int, default=0)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--trials", type=int, default=0,
                   help="Monte Carlo trials (0 disables)")
    p.set_defaults(func=cmd_mutinfo)

    p = sub.add_parser("repro", help="one-shot benchmark reproduction")
    p.add_argument("figure", choices=sorted(figures.FIGURE_EXPERIMENTS))
    p.add_argument("--sigma", type=float, default=figures.DEFAULT_SIGMA)
    p.add_argument("--ell", type=int, default=figures.DEFAULT_ELL)
    p.set_defaults(func=cmd_repro)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    if "--config" in argv:
        idx = argv.index("--config")
        try:
            config = artifacts.read_json(argv[idx + 1])
        except (IndexError, OSError, json.JSONDecodeError) as exc:
            parser.error(f"cannot read --config: {exc}")
        parser.set_defaults(**config)
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # module errors: machine-readable, exit 1
        payload = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(payload), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
