"""Command-line frontend: ``unimetric <command> [flags]``.

Exit codes: 0 success, 1 usage/config error, 2 exact-solver capability
error, 3 a ``--check`` verdict failed.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import covering, fields, grr, measure
from .covering import BRANCH_WIDTH, EXACT_LIMIT, CapabilityError
from .io import read_distance_csv_unchecked, read_values_csv, rows_to_csv, to_json
from .metric_core import AxiomError, StructuralError, make_space, validate
from .orlicz import young_from_config

THREADS_ENV = "UNIMETRIC_THREADS"

DEFAULTS = {
    "space": None, "measure": "uniform", "phi": "exp_quadratic", "mode": "exact",
    "exact_limit": EXACT_LIMIT, "eps": None, "r": None, "u": "1,2,3,4", "R": 100000,
    "seed": 0, "out": None, "format": None, "check": False, "threads": None, "f": None,
    "cov": "ou", "natural": "analytic",
}

COMMANDS = ("validate", "profile", "net", "measure", "homogeneity", "grr", "gamma", "entropy",
            "tailbound", "mc-verify")


class ConfigError(ValueError):
    pass


class CheckFailure(RuntimeError):
    pass


# ------------------------------------------------------------------ config ----

def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with default values for the flags")
    common.add_argument("--space", help="grid:l:points[:alpha[:c]] | cycle:n | file:path | cloud:path")
    common.add_argument("--measure", help="uniform | counting | file:path (label,weight rows)")
    common.add_argument("--phi", help="exp_quadratic | power:p | inline JSON | file:path.json")
    common.add_argument("--mode", choices=covering.MODES)
    common.add_argument("--exact-limit", dest="exact_limit", type=int)
    common.add_argument("--eps", type=float)
    common.add_argument("--r", type=float)
    common.add_argument("--u", help="comma-separated levels")
    common.add_argument("--R", type=int, help="Monte-Carlo replications")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--check", action="store_true", default=None)
    common.add_argument("--threads", type=int)
    common.add_argument("--f", help="function values CSV (one value or label,value per line)")
    common.add_argument("--cov", help="ou | fbm(H) | iid | file:path")
    common.add_argument("--natural", choices=("analytic", "empirical"))
    p = argparse.ArgumentParser(prog="unimetric", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for c in COMMANDS:
        sub.add_parser(c, parents=[common])
    return p


def resolve_config(ns: argparse.Namespace) -> dict:
    """Flags override the config file, which overrides defaults."""
    cfg = dict(DEFAULTS)
    if ns.config:
        try:
            with open(ns.config) as fh:
                file_cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {ns.config}: {exc}") from None
        unknown = set(file_cfg) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(file_cfg)
    for key in DEFAULTS:
        val = getattr(ns, key, None)
        if val is not None:
            cfg[key] = val
    if cfg["threads"] is None:
        env = os.environ.get(THREADS_ENV)
        cfg["threads"] = int(env) if env else (os.cpu_count() or 1)
    cfg["command"] = ns.command
    _check_ranges(cfg)
    return cfg


def _check_ranges(cfg):
    if cfg["mode"] not in covering.MODES:
        raise ConfigError(f"mode must be one of {covering.MODES}")
    if int(cfg["exact_limit"]) < 1:
        raise ConfigError("exact-limit must be >= 1")
    if cfg["eps"] is not None and not float(cfg["eps"]) > 0:
        raise ConfigError("eps must be positive")
    if cfg["r"] is not None and not float(cfg["r"]) >= 0:
        raise ConfigError("r must be nonnegative")
    if int(cfg["R"]) < 1:
        raise ConfigError("R must be >= 1")
    if int(cfg["threads"]) < 1:
        raise ConfigError("threads must be >= 1")
    if cfg["format"] not in (None, "csv", "json"):
        raise ConfigError("format must be csv or json")
    if cfg["space"] is None:
        raise ConfigError("--space is required")


def _u_grid(cfg):
    try:
        return [float(x) for x in str(cfg["u"]).split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"bad --u list {cfg['u']!r}") from None


def _load_phi(desc):
    if isinstance(desc, dict):
        return young_from_config(desc)
    desc = str(desc)
    if desc.startswith("file:"):
        with open(desc[5:]) as fh:
            return young_from_config(json.load(fh))
    if desc.lstrip().startswith("{"):
        return young_from_config(json.loads(desc))
    return young_from_config(desc)


def _load_measure(desc, space):
    if desc == "uniform":
        return measure.stabilized_uniform_measure(space)
    if desc == "counting":
        return measure.counting_measure(space)
    if str(desc).startswith("file:"):
        import csv
        with open(desc[5:], newline="") as fh:
            rows = [r for r in csv.reader(fh) if r]
        weights = dict((r[0].strip(), float(r[1])) for r in rows)
        missing = [l for l in space.labels if l not in weights]
        if missing:
            raise ConfigError(f"measure file lacks weights for {missing[:3]}")
        return measure.DiscreteMeasure(space, np.array([weights[l] for l in space.labels]))
    raise ConfigError(f"unknown measure {desc!r}")


def _load_cov(desc, space):
    if str(desc).startswith("file:"):
        _, data = read_distance_csv_unchecked(desc[5:])
        return data
    return desc


def _echo(cfg):
    return {k: v for k, v in sorted(cfg.items()) if k not in ("out",)}


# ---------------------------------------------------------------- commands ----

def _kw(cfg):
    return {"mode": cfg["mode"], "exact_limit": int(cfg["exact_limit"]),
            "branch_width": BRANCH_WIDTH}


def cmd_validate(cfg):
    desc = cfg["space"]
    if str(desc).startswith("file:"):
        labels, data = read_distance_csv_unchecked(desc[5:])
        if data.ndim != 2 or data.shape != (len(labels), len(labels)):
            raise StructuralError(f"{desc}: matrix shape {data.shape} does not match {len(labels)} labels")
        rep = validate(data)
    else:
        rep = validate(make_space(desc))
    payload = {"ok": rep.ok, "violations": [
        {"axiom": v.axiom, "indices": list(v.indices), "detail": v.detail} for v in rep.violations],
        "config": _echo(cfg)}
    rows = [(v.axiom, " ".join(map(str, v.indices)), v.detail) for v in rep.violations]
    text = to_json(payload) if cfg["format"] == "json" else rows_to_csv(("axiom", "indices", "detail"), rows)
    if not rep.ok:
        raise ConfigError(f"invalid distance matrix: {rep.summary()}")
    return text


def cmd_profile(cfg):
    space = make_space(cfg["space"])
    prof = covering.cover_profile(space, threads=int(cfg["threads"]), **_kw(cfg))
    rows = list(zip(prof.r.tolist(), prof.N.tolist(), prof.M.tolist()))
    if cfg["check"]:
        for r, N, M in rows:
            if r > 0:
                N2 = int(covering.cover_numbers_at(space, [2 * r], **_kw(cfg))[0])
                if not (N2 <= M <= N) and prof.exact:
                    raise CheckFailure(f"covering/packing sandwich violated at r={r}")
    if cfg["format"] == "json":
        return to_json({"quantity": "covering_packing_profile", "exact": prof.exact,
                        "rows": [{"r": r, "N": N, "M": M, "H": math.log(N)} for r, N, M in rows],
                        "config": _echo(cfg)})
    flag = "exact" if prof.exact else "greedy"
    return rows_to_csv(("r", "N", "M", "H", "exact_flag"),
                       [(r, N, M, math.log(N), flag) for r, N, M in rows])


def cmd_net(cfg):
    space = make_space(cfg["space"])
    if cfg["eps"] is None:
        raise ConfigError("net needs --eps")
    eps = float(cfg["eps"])
    mode = covering._resolve(cfg["mode"], space.n, int(cfg["exact_limit"]))
    net = (covering.exact_net(space, eps, int(cfg["exact_limit"]), BRANCH_WIDTH) if mode == "exact"
           else covering.greedy_net(space, eps))
    rows = [(space.labels[i], space.labels[net.assignment[i]]) for i in range(space.n)]
    if cfg["format"] == "json":
        return to_json({"quantity": "epsilon_net", "epsilon": eps, "exact": net.exact,
                        "centers": [space.labels[c] for c in net.centers], "size": net.size,
                        "config": _echo(cfg)})
    return rows_to_csv(("label", "center"), rows)


def cmd_measure(cfg):
    space = make_space(cfg["space"])
    diag = None
    if cfg["eps"] is not None:
        mu = measure.nu_eps(space, float(cfg["eps"]), **_kw(cfg))
    elif cfg["measure"] == "uniform":
        mu, diag = measure.uniform_measure(space, mode=cfg["mode"],
                                           exact_limit=int(cfg["exact_limit"]))
    else:
        mu = _load_measure(cfg["measure"], space)
    if cfg["check"]:
        for r in measure.breakpoints(space)[1:]:
            if not measure.packing_sandwich(mu, float(r), **_kw(cfg))[3]:
                raise CheckFailure(f"packing/ball-mass sandwich violated at eps={r}")
    if cfg["format"] == "json":
        out = {"quantity": "net_measure" if cfg["eps"] is not None else "uniform_measure",
               "weights": dict(zip(space.labels, mu.weights.tolist())), "config": _echo(cfg)}
        if diag is not None:
            out["diagnostics"] = {"epsilons": diag.epsilons, "support_sizes": diag.support_sizes,
                                  "gaps": diag.gaps, "converged": diag.converged}
        return to_json(out)
    return rows_to_csv(("label", "weight"), zip(space.labels, mu.weights.tolist()))


def cmd_homogeneity(cfg):
    space = make_space(cfg["space"])
    mu = _load_measure(cfg["measure"], space)
    rep = measure.weak_homogeneity(space, measure=mu, **_kw(cfg))
    table = measure.check_thm21(space, mu, rep.C_minus, cfg["mode"]) if rep.C_minus else []
    if cfg["check"] and not all(row[3] for row in table):
        raise CheckFailure("ball-mass lower bound h_minus >= C_minus/N(r) violated")
    return to_json({
        "quantity": "weak_homogeneity",
        "C_minus": str(rep.C_minus), "C_minus_float": float(rep.C_minus) if rep.C_minus else None,
        "witnesses": [{"r": r, "eps": e, "center": space.labels[x]} for r, e, x in rep.witnesses],
        "quasi_ratio": float(rep.quasi_ratio), "weakly_homogeneous": rep.weakly_homogeneous,
        "lower_bound_table": [{"r": r, "h_minus": float(h), "C_over_N": float(c), "pass": p}
                              for r, h, c, p in table],
        "config": _echo(cfg)})


def _grr_context(cfg):
    space = make_space(cfg["space"])
    if not cfg["f"]:
        raise ConfigError("grr needs --f values.csv")
    f = read_values_csv(cfg["f"])
    mu = _load_measure(cfg["measure"], space)
    return grr.make_context(space, f, mu, _load_phi(cfg["phi"]))


def cmd_grr(cfg):
    ctx = _grr_context(cfg)
    if not ctx.minorizing:
        raise (CheckFailure if cfg["check"] else ConfigError)(
            "V is infinite: the measure is not minorizing")
    ai = grr.check_arnold_imkeller(ctx)
    wbar = grr.w_bar_matrix(ctx)
    if cfg["check"] and (not ai.ok or (ai.w > wbar).any()):
        raise CheckFailure("modulus inequality or w <= w_bar violated")
    labels = ctx.space.labels
    if cfg["format"] == "json":
        return to_json({"quantity": "modulus_distance", "V": ctx.V, "exponent": ctx.exponent,
                        "all_pass": ai.ok, "worst_ratio": ai.worst_ratio,
                        "worst_pair": [labels[i] for i in ai.worst_pair],
                        "pairs": [{"x1": labels[i], "x2": labels[j], "rho": r, "w": w, "pass": p}
                                  for i, j, r, w, p in ai.rows()],
                        "config": _echo(cfg)})
    return rows_to_csv(("label",) + tuple(labels),
                       [(labels[i],) + tuple(ai.w[i].tolist()) for i in range(ctx.space.n)])


def cmd_gamma(cfg):
    space = make_space(cfg["space"])
    mu = _load_measure(cfg["measure"], space)
    Phi = _load_phi(cfg["phi"])
    out = {"quantity": "majorizing_functional", "gamma": fields.gamma_m(space, mu, Phi),
           "config": _echo(cfg)}
    try:
        rep = measure.weak_homogeneity(space, measure=mu, **_kw(cfg))
    except CapabilityError:
        rep = None
    if rep is not None and rep.weakly_homogeneous:
        chain = fields.bound_chain(space, mu, Phi, rep.C_minus, **_kw(cfg))
        out.update({"C_minus": float(rep.C_minus), "bound_ball_mass": chain["bound_ball_mass"],
                    "bound_net_fixed_eps": chain["bound_net"], "bound_net_inf": chain["bound_net_inf"],
                    "bound_net_liminf_surrogate": chain["bound_net_liminf_surrogate"],
                    "bound_homogeneity": chain["bound_homogeneity"]})
        if cfg["check"] and not (chain["gamma"] <= chain["bound_ball_mass"] <= chain["bound_homogeneity"]):
            raise CheckFailure("gamma <= ball-mass bound <= homogeneity bound violated")
    return to_json(out)


def cmd_entropy(cfg):
    space = make_space(cfg["space"])
    val = fields.entropy_integral(space, _load_phi(cfg["phi"]), **_kw(cfg))
    if cfg["format"] == "csv":
        return rows_to_csv(("entropy_integral",), [(val,)])
    return to_json({"quantity": "entropy_integral", "value": val, "config": _echo(cfg)})


def _model(cfg):
    space = make_space(cfg["space"])
    return fields.gaussian_model(space, _load_cov(cfg["cov"], space), seed=int(cfg["seed"]))


def _tail(cfg, empirical: bool):
    model = _model(cfg)
    Phi = None if cfg["phi"] in ("exp_quadratic", None) else _load_phi(cfg["phi"])
    rep = fields.mc_verify(model, _u_grid(cfg), int(cfg["R"]), Phi=Phi, natural=cfg["natural"],
                           mode="auto" if cfg["mode"] == "exact" else cfg["mode"],
                           threads=int(cfg["threads"]))
    if cfg["check"]:
        if not np.array_equal(rep.bound_abs, 2 * rep.bound):
            raise CheckFailure("two-sided bound is not twice the one-sided bound")
        if empirical and not rep.dominated.all():
            raise CheckFailure("tail bound below the empirical tail")
        if empirical and not rep.diagnostics["z_check"]:
            raise CheckFailure("mean of Z differs from 1 by more than 4 standard errors")
    if not empirical:
        rep.empirical = rep.se = rep.dominated = None
    if cfg["format"] == "json":
        cf = {k: {"u": c.u, "values": c.values, "valid": c.valid, "params": c.params}
              for k, c in rep.closed_forms.items()}
        return to_json({"quantity": "chaining_tail_bound", "K": rep.K, "D_zeta": rep.D_zeta,
                        "rows": [dict(zip(rep.HEADER, r)) for r in rep.rows()],
                        "closed_forms": cf, "diagnostics": rep.diagnostics, "config": _echo(cfg)})
    return rows_to_csv(rep.HEADER, rep.rows())


def cmd_tailbound(cfg):
    return _tail(cfg, empirical=False)


def cmd_mc_verify(cfg):
    return _tail(cfg, empirical=True)


HANDLERS = {
    "validate": cmd_validate, "profile": cmd_profile, "net": cmd_net, "measure": cmd_measure,
    "homogeneity": cmd_homogeneity, "grr": cmd_grr, "gamma": cmd_gamma, "entropy": cmd_entropy,
    "tailbound": cmd_tailbound, "mc-verify": cmd_mc_verify,
}


def run(cfg: dict) -> str:
    return HANDLERS[cfg["command"]](cfg)


def main(argv=None) -> int:
    parser = _parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        cfg = resolve_config(ns)
        text = run(cfg)
    except CapabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CheckFailure as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, StructuralError, AxiomError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if cfg["out"]:
        with open(cfg["out"], "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
