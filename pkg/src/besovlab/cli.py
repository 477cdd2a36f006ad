"""Command line front end: corpus emission, seminorm estimation, semigroup
curves, certificate suites, the slice-blowup study and measure reports.

Configuration is a flat key=value text file plus ``key=value`` overrides on
the command line.  Every artifact embeds the effective configuration, the
library version and the seed, and identical configurations produce
byte-identical outputs.  Exit codes: 0 success, 1 a non-informative
certificate entry failed, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import __version__
from .certify import (
    certify_gaussian_suite,
    certify_lebesgue_suite,
    certify_projection_suite,
    failures,
    write_certificates,
)
from .corpus import build_corpus
from .counterexample import (
    CounterexampleSpec,
    build_counterexample,
    directional_bound_scan,
    profile_to_csv,
    slice_blowup_profile,
)
from .grid import GAUSSIAN, LEBESGUE, Direction, GridFunction, to_csv
from .heat import default_t_grid, u_functional
from .measures import (
    chaining_check,
    chaining_report_json,
    conditional_slices,
    holder_profile,
    measure_from_density,
    tv_distance,
)
from .ou import u_gamma_functional
from .seminorms import besov_seminorm, v_lower_bound

OUTPUT_DIR_ENV = "BESOVLAB_OUTPUT_DIR"

DEFAULT_CERTIFY_LEBESGUE = ("indicator", "hat", "bump", "weierstrass(0.5)")
DEFAULT_CERTIFY_GAUSSIAN = ("hermite(1)", "hermite(2)", "hermite(3)")
DEFAULT_CERTIFY_2D = ("x2d", "xy2d", "xplusysq2d")


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Validated settings shared by all subcommands."""

    corpus: tuple = ("default",)
    pairs: tuple = ((1.0, 1.0), (2.0, 0.5))
    shape1d: int = 4097
    shape2d: int = 257
    t_points: int = 16
    budget: int = 1
    seed: int = 20240
    output_dir: str = "out"
    alpha: float = 0.5
    n_terms: int = 1000
    n_list: tuple = (100, 1000)
    beta_list: tuple = (0.25, 0.4)
    depth: int = 5

    def echo(self):
        return {
            "corpus": ",".join(self.corpus),
            "pairs": ",".join(f"{p:g}:{a:g}" for p, a in self.pairs),
            "shape1d": self.shape1d,
            "shape2d": self.shape2d,
            "t_points": self.t_points,
            "budget": self.budget,
            "seed": self.seed,
            "output_dir": self.output_dir,
            "alpha": self.alpha,
            "n_terms": self.n_terms,
            "n_list": ",".join(str(n) for n in self.n_list),
            "beta_list": ",".join(f"{b:g}" for b in self.beta_list),
            "depth": self.depth,
            "library_version": __version__,
        }


def _parse_pairs(text):
    pairs = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        try:
            p_text, a_text = token.split(":")
            pairs.append((float(p_text), float(a_text)))
        except ValueError:
            raise ConfigError(f"pairs: cannot parse '{token}', "
                              "expected p:alpha")
    if not pairs:
        raise ConfigError("pairs: empty list")
    return tuple(pairs)


def _parse_int_list(text, field):
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise ConfigError(f"{field}: expected comma-separated integers")


def _parse_float_list(text, field):
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise ConfigError(f"{field}: expected comma-separated reals")


_PARSERS = {
    "corpus": lambda v: tuple(t.strip() for t in v.split(",") if t.strip()),
    "pairs": _parse_pairs,
    "shape1d": lambda v: int(v),
    "shape2d": lambda v: int(v),
    "t_points": lambda v: int(v),
    "budget": lambda v: int(v),
    "seed": lambda v: int(v),
    "output_dir": lambda v: v,
    "alpha": lambda v: float(v),
    "n_terms": lambda v: int(v),
    "n_list": lambda v: _parse_int_list(v, "n_list"),
    "beta_list": lambda v: _parse_float_list(v, "beta_list"),
    "depth": lambda v: int(v),
}


def load_config(config_path=None, overrides=()):
    """Flat key=value file plus overrides; unknown keys are diagnosed."""
    settings = {}
    if config_path is not None:
        path = Path(config_path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        for lineno, line in enumerate(path.read_text().splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, value = line.split("=", 1)
            settings[key.strip()] = value.strip()
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override '{item}': expected key=value")
        key, value = item.split("=", 1)
        settings[key.strip()] = value.strip()

    config = RunConfig()
    for key, raw in settings.items():
        if key not in _PARSERS:
            raise ConfigError(f"unknown configuration field '{key}'")
        try:
            config = replace(config, **{key: _PARSERS[key](raw)})
        except ConfigError:
            raise
        except (TypeError, ValueError):
            raise ConfigError(f"{key}: cannot parse value '{raw}'")
    validate(config)
    return config


def validate(config: RunConfig):
    for p, a in config.pairs:
        if p < 1.0:
            raise ConfigError(f"pairs: p = {p:g} must be >= 1")
        if not 0.0 < a <= 1.0:
            raise ConfigError(f"pairs: alpha = {a:g} must lie in (0, 1]")
    for name, value in (("shape1d", config.shape1d),
                        ("shape2d", config.shape2d)):
        if value < 9:
            raise ConfigError(f"{name}: {value} is too small")
    if config.t_points < 2:
        raise ConfigError(f"t_points: {config.t_points} must be >= 2")
    if config.budget < 0:
        raise ConfigError(f"budget: {config.budget} must be >= 0")
    if not 0.0 < config.alpha < 1.0:
        raise ConfigError(f"alpha: {config.alpha:g} must lie in (0, 1)")
    if config.n_terms < 2:
        raise ConfigError(f"n_terms: {config.n_terms} must be >= 2")
    if config.depth < 1:
        raise ConfigError(f"depth: {config.depth} must be >= 1")
    for b in config.beta_list:
        if not 0.0 < b <= 1.0:
            raise ConfigError(f"beta_list: {b:g} must lie in (0, 1]")


def output_dir(config: RunConfig) -> Path:
    path = Path(os.environ.get(OUTPUT_DIR_ENV, config.output_dir))
    path.mkdir(parents=True, exist_ok=True)
    return path


def _selected(config: RunConfig, default_names):
    return default_names if config.corpus == ("default",) else config.corpus


def _resolve_corpus(config: RunConfig, names):
    out = []
    for name in names:
        if name == "zero":
            out.append((name, GridFunction(((-8.0, 8.0),),
                                           np.zeros(config.shape1d))))
            continue
        try:
            if name.startswith(("indicator2d", "hat2d", "bump2d", "x2d",
                                "xy2d", "xplusysq2d", "hermite2d")):
                out.append((name, build_corpus(
                    name, shape=(config.shape2d, config.shape2d))))
            else:
                out.append((name, build_corpus(name,
                                               shape=(config.shape1d,))))
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"corpus: {exc}")
    return out


def _write_manifest(path: Path, config: RunConfig, extra=None):
    payload = {"config": config.echo()}
    if extra:
        payload.update(extra)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# Subcommands


def run_corpus(config: RunConfig) -> int:
    out = output_dir(config)
    names = []
    default_names = DEFAULT_CERTIFY_LEBESGUE + DEFAULT_CERTIFY_GAUSSIAN
    for name, f in _resolve_corpus(config, _selected(config, default_names)):
        stem = name.replace("(", "_").replace(")", "").replace(".", "p")
        to_csv(f, out / f"{stem}.csv")
        names.append(stem)
    _write_manifest(out / "corpus_manifest.json", config, {"files": names})
    return 0


def run_seminorm(config: RunConfig) -> int:
    out = output_dir(config)
    rows = []
    for name, f in _resolve_corpus(
            config, _selected(config, DEFAULT_CERTIFY_LEBESGUE)):
        for p, alpha in config.pairs:
            est = besov_seminorm(f, p, alpha)
            row = {"function": name, "p": p, "alpha": alpha,
                   "value": est.value, "witness_h": list(est.witness_h),
                   "cap_limited": est.cap_limited}
            if est.value > 0.0 and f.measure == LEBESGUE:
                witness = v_lower_bound(f, p, alpha, budget=config.budget,
                                        seed=config.seed)
                row["v_witness_quotient"] = witness.quotient
            rows.append(row)
    payload = {"config": config.echo(), "results": rows}
    (out / "seminorms.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return 0


def run_semigroup(config: RunConfig) -> int:
    out = output_dir(config)
    t_grid = default_t_grid(config.t_points)
    summary = []
    default_names = DEFAULT_CERTIFY_LEBESGUE + DEFAULT_CERTIFY_GAUSSIAN
    for name, f in _resolve_corpus(config, _selected(config, default_names)):
        stem = name.replace("(", "_").replace(")", "").replace(".", "p")
        for p, alpha in config.pairs:
            if f.measure == GAUSSIAN:
                value, t_star, curve = u_gamma_functional(f, p, alpha,
                                                          t_grid)
                kind = "ou"
            else:
                value, t_star, curve = u_functional(f, p, alpha, t_grid)
                kind = "heat"
            path = out / f"{stem}_{kind}_p{p:g}_a{alpha:g}.csv"
            curve.to_csv(path)
            summary.append({"function": name, "kind": kind, "p": p,
                            "alpha": alpha, "value": value,
                            "argmax_t": t_star, "file": path.name})
    _write_manifest(out / "semigroup_manifest.json", config,
                    {"curves": summary})
    return 0


def run_certify(config: RunConfig) -> int:
    out = output_dir(config)
    entries = []
    lebesgue = (DEFAULT_CERTIFY_LEBESGUE if config.corpus == ("default",)
                else tuple(n for n in config.corpus
                           if not n.startswith("hermite")
                           and not n.endswith("2d")))
    gaussian = (DEFAULT_CERTIFY_GAUSSIAN if config.corpus == ("default",)
                else tuple(n for n in config.corpus
                           if n.startswith("hermite(")))
    planar = (DEFAULT_CERTIFY_2D if config.corpus == ("default",)
              else tuple(n for n in config.corpus if n.endswith("2d")))
    t_grid = default_t_grid(config.t_points)
    for name, f in _resolve_corpus(config, lebesgue):
        for p, alpha in config.pairs:
            entries.extend(certify_lebesgue_suite(
                f, p, alpha, t_grid=t_grid, f_name=name,
                budget=config.budget, seed=config.seed))
    for name, f in _resolve_corpus(config, gaussian):
        for p, alpha in config.pairs:
            entries.extend(certify_gaussian_suite(
                f, p, alpha, t_grid=t_grid, f_name=name,
                budget=config.budget, seed=config.seed))
    for name, f in _resolve_corpus(config, planar):
        p, alpha = config.pairs[0]
        entries.extend(certify_projection_suite(f, p, alpha, f_name=name))
    write_certificates(entries, out / "certificates.json",
                       config=config.echo())
    bad = failures(entries)
    for entry in bad:
        print(f"FAIL {entry.name} [{entry.inputs}] lhs={entry.lhs:.6g} "
              f"rhs={entry.rhs:.6g}", file=sys.stderr)
    print(f"certify: {len(entries)} entries, {len(bad)} failures")
    return 1 if bad else 0


def run_counterexample(config: RunConfig) -> int:
    out = output_dir(config)
    spec = CounterexampleSpec(config.alpha, config.n_terms)
    f, tail = build_counterexample(
        spec, shape=(config.shape2d, config.shape2d))
    ys = (np.arange(20) + 0.5) / 20.0
    profile_rows = []
    for y in ys:
        value, k_star = slice_blowup_profile(f, float(y), config.alpha)
        profile_rows.append((float(y), value, k_star))
    profile_to_csv(profile_rows, out / "blowup_profile.csv",
                   header=("y", "value", "argmax_k"))
    scan = directional_bound_scan(
        spec, config.n_list, shape=(config.shape2d, config.shape2d))
    profile_to_csv([(n, float(q)) for n, q, _ in scan],
                   out / "directional_scan.csv",
                   header=("N", "max_quotient"))
    _write_manifest(out / "counterexample_manifest.json", config,
                    {"spec": spec.to_dict(), "tail_energy": tail})
    return 0


def run_measure(config: RunConfig) -> int:
    out = output_dir(config)
    x = np.linspace(-8.0, 8.0, config.shape1d)
    density = np.exp(-x * x / 2.0) / np.sqrt(2.0 * np.pi)
    mu = measure_from_density(GridFunction(((-8.0, 8.0),), density))
    curve, fit = holder_profile(mu, Direction((1.0,)))
    with open(out / "holder_profile.csv", "w") as fh:
        fh.write("t,tv\n")
        for t, v in curve:
            fh.write(f"{t:.17g},{v:.17g}\n")
    spec = CounterexampleSpec(config.alpha, config.n_terms)
    f, _ = build_counterexample(spec,
                                shape=(config.shape2d, config.shape2d))
    nu = measure_from_density(f.with_samples(1.0 + 0.2 * f.samples))
    slices, _ = conditional_slices(nu, axis=1)
    step = max(1, len(slices) // 8)
    sub = slices[step::step]
    reports = {}
    for beta in config.beta_list:
        report = chaining_check(sub, beta, config.depth, seed=config.seed)
        reports[f"beta={beta:g}"] = json.loads(
            chaining_report_json(report))
    payload = {
        "config": config.echo(),
        "holder_fit": {"exponent": fit.exponent, "constant": fit.constant,
                       "t_range": list(fit.t_range),
                       "residual": fit.residual},
        "tv_self": tv_distance(mu, mu),
        "chaining": reports,
    }
    (out / "measure_report.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n")
    all_pass = all(r["pass"] for r in reports.values())
    return 0 if all_pass else 1


_SUBCOMMANDS = {
    "corpus": run_corpus,
    "seminorm": run_seminorm,
    "semigroup": run_semigroup,
    "certify": run_certify,
    "counterexample": run_counterexample,
    "measure": run_measure,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="besovlab",
        description="Fractional smoothness functionals on grids")
    parser.add_argument("subcommand", choices=sorted(_SUBCOMMANDS))
    parser.add_argument("--config", default=None,
                        help="flat key=value configuration file")
    parser.add_argument("overrides", nargs="*",
                        help="key=value overrides applied after the file")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config, args.overrides)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    try:
        return _SUBCOMMANDS[args.subcommand](config)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
