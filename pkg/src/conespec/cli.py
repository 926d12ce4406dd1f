"""Batch front end: JSON-configured runs, JSON reports, CSV profiles.

Commands
--------
spectrum       per-mode eigenvalue scan and lambda_1
reduce         full reducibility pipeline: eigenfunction -> field -> one-form
               -> residues/divisor -> reconstructed map -> verification
series-verify  exact rational identity suite for the series coefficients
eigenspace     dimension of the real eigenvalue-2 eigenspace
bochner-check  curvature balance quadrature
profile        CSV radial profile for plotting

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 theorem-assertion violation (a solver bug, not a math surprise).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import bochner, oneform, spectral
from .errors import ConespecError, NonRationalInput, TheoremViolation
from .extensions import ExtensionType, singular_count
from .frobenius import RadialProblem, build_series, closed_form_lambda2
from .metric import (Football, PowerCover, canonical_eigenfunction,
                     geodesic_radius)
from .moebius import MoebiusTransform, is_infinity


class ConfigError(ConespecError):
    pass


@dataclass
class RunConfig:
    family: str = "football"
    beta: object = None           # Fraction (exact) or float
    beta_raw: object = None       # value as given, echoed back verbatim
    n: int | None = None
    mobius: list | None = None    # four [re, im] pairs
    extension: str = "holomorphic"
    k_max: int | None = None
    lambda_min: float = 0.05
    lambda_max: float = 30.0
    grid_step: float = 0.05
    integration_rel_tol: float = 1e-11
    root_tol: float = 1e-10
    quadrature_rel_tol: float = 1e-10
    exact: bool = False

    def echo(self) -> dict:
        out = {"family": self.family}
        if self.family == "football":
            out["beta"] = self.beta_raw
        else:
            out["n"] = self.n
            if self.mobius is not None:
                out["mobius"] = self.mobius
        out.update({
            "extension": self.extension,
            "k_max": self.k_max,
            "lambda_min": self.lambda_min,
            "lambda_max": self.lambda_max,
            "grid_step": self.grid_step,
            "tolerances": {
                "integration_rel_tol": self.integration_rel_tol,
                "root_tol": self.root_tol,
                "quadrature_rel_tol": self.quadrature_rel_tol,
            },
            "exact": self.exact,
        })
        return out


def _parse_beta(raw, exact: bool):
    if raw is None:
        raise ConfigError("football family needs a beta value")
    if isinstance(raw, str):
        try:
            value = Fraction(raw)
        except (ValueError, ZeroDivisionError) as err:
            raise ConfigError(f"cannot parse beta {raw!r} as a rational") from err
        if value <= 0:
            raise ConfigError("beta must be positive")
        return value, raw
    if isinstance(raw, int):
        if raw <= 0:
            raise ConfigError("beta must be positive")
        return Fraction(raw), raw
    if exact:
        raise NonRationalInput(
            "exact mode needs beta as a rational string 'p/q', not a decimal")
    value = float(raw)
    if value <= 0:
        raise ConfigError("beta must be positive")
    return value, raw


def parse_config(data: dict) -> RunConfig:
    cfg = RunConfig()
    known = {"family", "beta", "n", "mobius", "extension", "k_max", "lambda_min",
             "lambda_max", "grid_step", "tolerances", "exact"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    cfg.family = data.get("family", "football")
    cfg.exact = bool(data.get("exact", False))
    if cfg.family == "football":
        cfg.beta, cfg.beta_raw = _parse_beta(data.get("beta"), cfg.exact)
    elif cfg.family == "power_cover":
        n = data.get("n")
        if not isinstance(n, int) or n < 2:
            raise ConfigError("power_cover family needs an integer n >= 2")
        cfg.n = n
        cfg.beta = Fraction(n)
        cfg.beta_raw = n
        if data.get("mobius") is not None:
            mob = data["mobius"]
            if len(mob) != 4 or any(len(entry) != 2 for entry in mob):
                raise ConfigError("mobius must be four [re, im] pairs")
            cfg.mobius = [[float(entry[0]), float(entry[1])] for entry in mob]
    else:
        raise ConfigError(f"unknown family {data.get('family')!r}")
    cfg.extension = data.get("extension", "holomorphic")
    if cfg.extension not in ("friedrichs", "holomorphic"):
        raise ConfigError("extension must be 'friedrichs' or 'holomorphic'")
    cfg.k_max = data.get("k_max")
    if cfg.k_max is not None and (not isinstance(cfg.k_max, int) or cfg.k_max < 0):
        raise ConfigError("k_max must be a nonnegative integer")
    cfg.lambda_min = float(data.get("lambda_min", 0.05))
    cfg.lambda_max = float(data.get("lambda_max", 30.0))
    cfg.grid_step = float(data.get("grid_step", 0.05))
    tols = data.get("tolerances", {})
    cfg.integration_rel_tol = float(tols.get("integration_rel_tol", 1e-11))
    cfg.root_tol = float(tols.get("root_tol", 1e-10))
    cfg.quadrature_rel_tol = float(tols.get("quadrature_rel_tol", 1e-10))
    return cfg


def build_spec(cfg: RunConfig):
    if cfg.family == "football":
        return Football(cfg.beta)
    if cfg.mobius is None:
        return PowerCover(cfg.n)
    entries = [complex(re, im) for re, im in cfg.mobius]
    return PowerCover(cfg.n, MoebiusTransform(*entries))


def _extension(cfg: RunConfig) -> ExtensionType:
    return ExtensionType(cfg.extension)


def _point_str(point) -> str:
    if is_infinity(point):
        return "inf"
    z = complex(point)
    return f"{z.real:.12g}{z.imag:+.12g}j"


# ---- commands --------------------------------------------------------------

def run_spectrum(cfg: RunConfig) -> dict:
    j = singular_count(cfg.beta)
    k_max = cfg.k_max if cfg.k_max is not None else j + 2
    report = spectral.spectrum_report(
        cfg.beta, _extension(cfg), k_max,
        lambda_lo=cfg.lambda_min, lambda_hi=cfg.lambda_max,
        rel_tol=cfg.integration_rel_tol, root_tol=cfg.root_tol,
        grid_step=cfg.grid_step)
    modes = []
    for k in sorted(report.modes):
        modes.append({
            "k": k,
            "eigenvalues": [
                {"lambda": hit.lam, "parity": hit.parity, "residual": hit.residual}
                for hit in report.modes[k]],
        })
    lam1 = report.lambda1 if math.isfinite(report.lambda1) else None
    return {"config": cfg.echo(), "modes": modes, "lambda1": lam1}


def run_reduce(cfg: RunConfig) -> dict:
    spec = build_spec(cfg)
    stage = "eigenfunction"
    try:
        constant = oneform.extremal_constant(spec)
        stage = "field"
        field_fn = bochner.closed_form_field(spec, "canonical")
        stage = "one_form"
        form = oneform.one_form_from_field(field_fn, constant)
        stage = "residues"
        residue_list = oneform.residues(form)
        stage = "divisor"
        div = oneform.divisor_relation_check(form, spec)
        stage = "monodromy"
        monodromy = oneform.classify_monodromy(form)
        stage = "eigenspace"
        radial = spec.radial if isinstance(spec, PowerCover) else True
        dim = spectral.real_two_eigenspace_dimension(spec) if radial else None
        stage = "reconstruction"
        basepoint = 1.0 + 0.0j
        zs, phis = [], []
        for r in (0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8):
            for idx in range(16):
                theta = (idx + 0.5) * 2.0 * math.pi / 16.0
                target = r * complex(math.cos(theta), math.sin(theta))
                zs.append(target)
                phis.append(constant * canonical_eigenfunction(spec, target))
        fs = oneform.normalized_reconstruction(form, spec, basepoint, zs)
        stage = "verification"
        pullback = oneform.verify_pullback(zs, fs, form, spec, constant)
        eigen_err = oneform.verify_eigen_identity(phis, fs, constant)
        if radial:
            balance = bochner.bochner_balance(spec, bochner.canonical_modes(spec), 2.0)
            balance_pair = [balance.lhs, balance.rhs]
        else:
            balance_pair = None
        stage = "identity_suite"
        loop_checks = []
        for center, radius in ((0.35 + 0.1j, 0.12), (-0.25 + 0.3j, 0.1), (0.1 - 0.45j, 0.15)):
            value = oneform.loop_integral(form, center, radius)
            loop_checks.append(abs(value.real))
        suite = [
            {"name": "residues-real", "passed": True},
            {"name": "residue-sum-zero",
             "passed": abs(sum(v for _, v in residue_list)) < 1e-8},
            {"name": "re-omega-exact-on-loops",
             "passed": max(loop_checks) < 1e-10},
            {"name": "divisor-relation", "passed": bool(div.passed)},
        ]
    except ConespecError as err:
        err.stage = stage
        raise
    return {
        "config": cfg.echo(),
        "monodromy": monodromy.value,
        "extremal_constant": constant,
        "residues": [{"point": _point_str(p), "residue": v} for p, v in residue_list],
        "divisor_check": {
            "passed": bool(div.passed),
            "degree": div.degree,
            "entries": [{"point": _point_str(e.point), "order": e.order,
                         "residue": e.residue} for e in div.entries],
        },
        "two_eigenspace_real_dim": dim,
        "verification": {
            "pullback_max_rel_err": pullback.max_density_rel_err,
            "modulus_max_abs_err": pullback.max_modulus_abs_err,
            "eigen_identity_max_err": eigen_err,
            "bochner_balance": balance_pair,
        },
        "identity_suite": suite,
    }


def run_series_verify(cfg: RunConfig, j_max: int = 50) -> dict:
    if not cfg.exact:
        raise ConfigError("series-verify requires exact = true")
    if not isinstance(cfg.beta, (int, Fraction)):
        raise NonRationalInput("series-verify needs a rational beta")
    beta = Fraction(cfg.beta)
    j = singular_count(beta)
    rows = []
    for k in range(-j, j + 1):
        problem = RadialProblem(beta=beta, k=k, lam=Fraction(2))
        series = build_series(problem, sigma=k, n_terms=j_max)
        bad = next((idx for idx in range(j_max + 1)
                    if series.coeffs[idx] != closed_form_lambda2(beta, k, Fraction(1), idx)),
                   None)
        rows.append({"name": "closed-form-lambda2", "beta": str(beta), "k": k,
                     "j_max": j_max,
                     "status": "exact-pass" if bad is None else f"counterexample j={bad}"})
        tilde = bochner.tilde_coefficients(series)
        bad = next((idx for idx in range(2, j_max + 1) if tilde[idx] != 0), None)
        rows.append({"name": "tilde-vanishing", "beta": str(beta), "k": k,
                     "j_max": j_max,
                     "status": "exact-pass" if bad is None else f"counterexample j={bad}"})
    # negative control: lambda != 2 must break both identities immediately
    control = build_series(RadialProblem(beta=beta, k=0, lam=Fraction(21, 10)),
                           sigma=0, n_terms=4)
    closed_mismatch = control.coeffs[1] != closed_form_lambda2(beta, 0, Fraction(1), 1)
    tilde_nonzero = bochner.tilde_coefficients(control)[2] != 0
    rows.append({"name": "closed-form-negative-control", "lambda": "21/10",
                 "status": "exact-pass" if closed_mismatch else "counterexample j=1"})
    rows.append({"name": "tilde-negative-control", "lambda": "21/10",
                 "status": "exact-pass" if tilde_nonzero else "counterexample j=2"})
    return {"config": cfg.echo(), "rows": rows}


def run_eigenspace(cfg: RunConfig) -> dict:
    spec = build_spec(cfg)
    dim = spectral.real_two_eigenspace_dimension(
        spec, k_max=cfg.k_max, rel_tol=cfg.integration_rel_tol,
        root_tol=cfg.root_tol)
    beta = spec.order
    j = singular_count(beta)
    k_max = cfg.k_max if cfg.k_max is not None else j + 2
    extra = [k for k in range(j + 1, k_max + 1)
             if spectral.has_eigenvalue_two(beta, k, ExtensionType.HOLOMORPHIC,
                                             rel_tol=cfg.integration_rel_tol,
                                             root_tol=cfg.root_tol)]
    return {"config": cfg.echo(), "dimension": dim,
            "modes_with_eigenvalue_2": extra}


def run_bochner_check(cfg: RunConfig) -> dict:
    spec = build_spec(cfg)
    cases = []
    balance = bochner.bochner_balance(spec, bochner.canonical_modes(spec), 2.0,
                                      rel_tol=cfg.quadrature_rel_tol)
    cases.append({"name": "canonical", "lambda": 2.0, "lhs": balance.lhs,
                  "rhs": balance.rhs, "x_norm_sq": balance.x_norm_sq})
    if float(spec.order) == 1.0:
        def p2(r):
            x = (1.0 - r * r) / (1.0 + r * r)
            return 0.5 * (3.0 * x * x - 1.0)

        def dp2(r):
            x = (1.0 - r * r) / (1.0 + r * r)
            dx = -4.0 * r / (1.0 + r * r) ** 2
            return 3.0 * x * dx

        harmonic = bochner.bochner_balance(
            spec, [bochner.RadialMode(0, p2, dp2)], 6.0,
            rel_tol=cfg.quadrature_rel_tol)
        cases.append({"name": "degree-two-harmonic", "lambda": 6.0,
                      "lhs": harmonic.lhs, "rhs": harmonic.rhs,
                      "x_norm_sq": harmonic.x_norm_sq})
    return {"config": cfg.echo(), "cases": cases}


def run_profile(cfg: RunConfig, csv_path: str) -> dict:
    spec = build_spec(cfg)
    field_fn = bochner.closed_form_field(spec, "canonical")
    rows = ["r,phi_0,X_coeff,geodesic_r"]
    for idx in range(1, 21):
        r = 0.05 * idx
        phi = canonical_eigenfunction(spec, complex(r, 0.0))
        x_val = complex(field_fn(complex(r, 0.0))).real
        geo = geodesic_radius(spec, r)
        rows.append(",".join(f"{v:.17g}" for v in (r, phi, x_val, geo)))
    text = "\n".join(rows) + "\n"
    with open(csv_path, "w", encoding="ascii") as handle:
        handle.write(text)
    return {"config": cfg.echo(), "csv": csv_path, "rows": len(rows) - 1}


# ---- driver ----------------------------------------------------------------

def _load_config(args) -> RunConfig:
    data = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    if args.beta is not None:
        data["beta"] = args.beta
        data.setdefault("family", "football")
    if args.n is not None:
        data["n"] = args.n
        data["family"] = "power_cover"
    if args.mobius is not None:
        vals = [float(x) for x in args.mobius.split(",")]
        if len(vals) != 8:
            raise ConfigError("--mobius needs 8 comma-separated reals")
        data["mobius"] = [[vals[2 * i], vals[2 * i + 1]] for i in range(4)]
    if args.extension is not None:
        data["extension"] = args.extension
    if args.k_max is not None:
        data["k_max"] = args.k_max
    if args.lambda_max is not None:
        data["lambda_max"] = args.lambda_max
    if args.tol is not None:
        data.setdefault("tolerances", {})["root_tol"] = args.tol
    if args.exact:
        data["exact"] = True
    return parse_config(data)


def _emit(payload: dict, out_path: str | None):
    text = json.dumps(payload, indent=2, allow_nan=True) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conespec",
        description="spectral and monodromy computations for two-cone spherical metrics")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("spectrum", "reduce", "series-verify", "eigenspace",
                 "bochner-check", "profile"):
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--beta", help="football cone parameter ('p/q' or decimal)")
        p.add_argument("--n", type=int, help="power-cover order")
        p.add_argument("--mobius", help="8 comma-separated reals: re,im per entry")
        p.add_argument("--extension", choices=["friedrichs", "holomorphic"])
        p.add_argument("--k-max", dest="k_max", type=int)
        p.add_argument("--lambda-max", dest="lambda_max", type=float)
        p.add_argument("--tol", type=float, help="root tolerance")
        p.add_argument("--exact", action="store_true")
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        if name == "profile":
            p.add_argument("--profile-csv", dest="profile_csv", required=True)
    return parser


_COMMANDS = {
    "spectrum": run_spectrum,
    "reduce": run_reduce,
    "series-verify": run_series_verify,
    "eigenspace": run_eigenspace,
    "bochner-check": run_bochner_check,
}


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args)
    except (ConfigError, NonRationalInput, ValueError, OSError, json.JSONDecodeError) as err:
        _emit({"error": {"stage": "config", "kind": type(err).__name__,
                         "message": str(err)}}, None)
        return 2
    try:
        if args.command == "profile":
            payload = run_profile(cfg, args.profile_csv)
        else:
            payload = _COMMANDS[args.command](cfg)
    except TheoremViolation as err:
        _emit({"error": {"stage": getattr(err, "stage", args.command),
                         "kind": type(err).__name__, "message": str(err)}}, None)
        return 4
    except (ConfigError, NonRationalInput) as err:
        _emit({"error": {"stage": "config", "kind": type(err).__name__,
                         "message": str(err)}}, None)
        return 2
    except ConespecError as err:
        _emit({"error": {"stage": getattr(err, "stage", args.command),
                         "kind": type(err).__name__, "message": str(err)}}, None)
        return 3
    _emit(payload, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
