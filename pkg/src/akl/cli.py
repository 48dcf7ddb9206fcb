"""Command-line front end: configuration, basis caching, verification suites.

Configuration precedence is flags > config file > defaults.  The config file
holds flat ``key = value`` lines with ``#`` comments; unknown keys are
rejected.  Exit status: 0 when every selected verdict passes, 1 when any
verdict fails, 2 on configuration errors (including cache mismatches).
"""
from __future__ import annotations

import argparse
import hashlib
import os
import struct
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

from threadpoolctl import threadpool_limits

from akl import verify as vf
from akl.oscillator import OscillatorSpec
from akl.reports import summary_lines, write_report_files
from akl.spectral import BasisCacheError, SpectralBasis, load_basis, save_basis, solve

ENV_CACHE_DIR = "AKL_CACHE_DIR"
ALL_SUITES = ("paley", "hyp", "multiplier", "heat", "sobolev", "trace", "modulation")


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    k: int = 1
    l: int = 1
    n_dim: int = 1
    grid_n: int = 1025
    domain_l: float = 10.0
    modes: int = 32
    p: float = 1.5
    q: float = 3.0
    t: float = 1.0
    m: float | None = None
    r: float = 1.0
    weight_s: float = 0.0
    trials: int = 200
    seed: int = 42
    cache: str | None = None
    out: str = "reports"
    recompute: bool = False

    def spec(self) -> OscillatorSpec:
        try:
            return OscillatorSpec(
                k=self.k,
                l=self.l,
                half_width=self.domain_l,
                grid_points=self.grid_n,
                modes=self.modes,
                n=self.n_dim,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def cache_dir(self) -> Path | None:
        if self.cache:
            return Path(self.cache)
        env = os.environ.get(ENV_CACHE_DIR)
        return Path(env) if env else None


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if key in ("k", "l", "n_dim", "grid_n", "modes", "trials", "seed"):
        try:
            return int(raw)
        except ValueError as exc:
            raise ConfigError(f"config key '{key}' expects an integer, got {raw!r}") from exc
    if key in ("domain_l", "p", "q", "t", "m", "r", "weight_s"):
        try:
            return float(raw)
        except ValueError as exc:
            raise ConfigError(f"config key '{key}' expects a number, got {raw!r}") from exc
    if key == "recompute":
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"config key 'recompute' expects a boolean, got {raw!r}")
    return raw


def parse_config_file(path: Path) -> dict:
    """Flat UTF-8 ``key = value`` lines; '#' starts a comment."""
    values = {}
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in _FIELD_TYPES:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = _parse_value(key, raw)
    return values


def build_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        for key, value in parse_config_file(Path(args.config)).items():
            setattr(cfg, key, value)
    for f in fields(RunConfig):
        flag_value = getattr(args, f.name, None)
        if flag_value is not None and flag_value is not False:
            setattr(cfg, f.name, flag_value)
    if cfg.seed < 0:
        raise ConfigError(f"seed must be non-negative, got {cfg.seed}")
    if cfg.trials < 1:
        raise ConfigError(f"trials must be positive, got {cfg.trials}")
    return cfg


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key = value config file")
    parser.add_argument("--k", type=int, help="potential half-power")
    parser.add_argument("--l", type=int, help="Laplacian power")
    parser.add_argument("--n-dim", dest="n_dim", type=int, help="spatial dimension (1 or 2)")
    parser.add_argument("--grid-n", dest="grid_n", type=int, help="grid points per axis")
    parser.add_argument("--domain-l", dest="domain_l", type=float, help="box half-width")
    parser.add_argument("--modes", type=int, help="eigenpairs to compute")
    parser.add_argument("--p", type=float, help="source Lebesgue exponent")
    parser.add_argument("--q", type=float, help="target Lebesgue exponent")
    parser.add_argument("--t", type=float, help="heat/trace time parameter")
    parser.add_argument("--m", type=float, help="power exponent for multiplier/embedding suites")
    parser.add_argument("--r", type=float, help="summability order for the modulation suite")
    parser.add_argument("--weight-s", dest="weight_s", type=float, help="phase-space weight order")
    parser.add_argument("--trials", type=int, help="seeded probes per check")
    parser.add_argument("--seed", type=int, help="master seed")
    parser.add_argument("--cache", help="basis cache directory")
    parser.add_argument("--out", help="report output directory")
    parser.add_argument("--recompute", action="store_true", default=None, help="rebuild cached bases")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="akl",
        description="Eigenfunction-expansion analysis and verification for the "
        "oscillator (-Lap)^l + |x|^(2k) + 1",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="solve and report spectral asymptotics")
    _add_common_flags(sp)

    tp = sub.add_parser("transform", help="coefficient-transform identities demo")
    _add_common_flags(tp)

    vp = sub.add_parser("verify", help="run verification suites")
    vp.add_argument("suite", choices=ALL_SUITES + ("all",))
    _add_common_flags(vp)

    cp = sub.add_parser("cache", help="basis cache operations")
    cp.add_argument("action", choices=("save", "load", "info"))
    cp.add_argument("file", nargs="?", help="cache file (load/info)")
    _add_common_flags(cp)
    return parser


# --------------------------------------------------------------------------
# basis acquisition
# --------------------------------------------------------------------------

def spec_digest(spec: OscillatorSpec) -> str:
    packed = struct.pack(
        "<IIIIId", spec.n, spec.k, spec.l, spec.grid_points, spec.modes, spec.half_width
    )
    return hashlib.sha256(packed).hexdigest()[:16]


def cache_path_for(spec: OscillatorSpec, cache_dir: Path) -> Path:
    return cache_dir / f"basis-{spec_digest(spec)}.aklb"


def _specs_match(spec: OscillatorSpec, basis: SpectralBasis) -> bool:
    s = basis.spec
    return (
        (s.n, s.k, s.l, s.grid_points, s.modes) == (spec.n, spec.k, spec.l, spec.grid_points, spec.modes)
        and s.half_width == spec.half_width
    )


def obtain_basis(cfg: RunConfig, spec: OscillatorSpec, store: dict | None = None) -> SpectralBasis:
    """Solve or load the basis for ``spec``, honoring the cache directory.

    A cache file whose parameters disagree with the request is an error;
    ``--recompute`` resolves and overwrites it.
    """
    if store is not None and spec in store:
        return store[spec]
    cache_dir = cfg.cache_dir()
    basis = None
    if cache_dir is not None:
        path = cache_path_for(spec, cache_dir)
        if path.exists() and not cfg.recompute:
            basis = load_basis(path)
            if not _specs_match(spec, basis):
                raise ConfigError(
                    f"cached basis {path} does not match the requested configuration; "
                    "pass --recompute to rebuild it"
                )
        else:
            basis = solve(spec)
            cache_dir.mkdir(parents=True, exist_ok=True)
            save_basis(basis, path)
    else:
        basis = solve(spec)
    if basis.trusted == 0:
        raise ConfigError(
            "unusable configuration: no trusted modes (widen the box or refine the grid)"
        )
    if store is not None:
        store[spec] = basis
    return basis


def _fine_spec(spec: OscillatorSpec) -> OscillatorSpec:
    # 2N-1 halves the grid step exactly
    return replace(spec, grid_points=2 * spec.grid_points - 1)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def _emit(reports, cfg: RunConfig, name: str) -> int:
    out_path = Path(cfg.out) / f"{name}.json"
    written = write_report_files(reports, out_path)
    for line in summary_lines(reports):
        print(line)
    print(f"wrote {', '.join(str(p) for p in written[:2])}")
    return 0 if all(r.passed for r in reports) else 1


def cmd_spectrum(cfg: RunConfig) -> int:
    spec = cfg.spec()
    store: dict = {}
    basis = obtain_basis(cfg, spec, store)
    fine = obtain_basis(cfg, _fine_spec(spec), store)
    reports = [
        vf.verify_weyl(basis, seed=cfg.seed),
        vf.verify_growth(basis, seed=cfg.seed),
        vf.verify_supnorm(basis, fine, seed=cfg.seed),
    ]
    print(f"trusted modes: {basis.trusted} of {basis.modes} "
          f"(lambda_1={basis.eigenvalues[0]:.6g}, lambda_Jok={basis.trusted_eigenvalues()[-1]:.6g})")
    return _emit(reports, cfg, "spectrum")


def cmd_transform(cfg: RunConfig) -> int:
    basis = obtain_basis(cfg, cfg.spec())
    reports = [vf.verify_transform(basis, trials=cfg.trials, seed=cfg.seed)]
    return _emit(reports, cfg, "transform")


def _suite_reports(cfg: RunConfig, suite: str, store: dict) -> list:
    spec = cfg.spec()
    basis = obtain_basis(cfg, spec, store)

    def fine():
        return obtain_basis(cfg, _fine_spec(spec), store)

    if suite == "paley":
        return [vf.verify_paley(basis, fine(), p=cfg.p, trials=cfg.trials, seed=cfg.seed)]
    if suite == "hyp":
        pp = cfg.p / (cfg.p - 1.0)
        fb = fine()
        return [
            vf.verify_hyp(basis, fb, p=cfg.p, b=b, trials=cfg.trials, seed=cfg.seed)
            for b in (cfg.p, 0.5 * (cfg.p + pp), pp)
        ]
    if suite == "multiplier":
        return [
            vf.verify_multiplier(
                basis, fine(), p=cfg.p, q=cfg.q, power_m=cfg.m, trials=cfg.trials, seed=cfg.seed
            )
        ]
    if suite == "heat":
        return [vf.verify_heat(basis, p=cfg.p, q=cfg.q, trials=min(cfg.trials, 64), seed=cfg.seed)]
    if suite == "sobolev":
        return [
            vf.verify_sobolev(
                basis, fine(), a=cfg.m, p=cfg.p, q=cfg.q, trials=cfg.trials, seed=cfg.seed
            )
        ]
    if suite == "trace":
        return [vf.verify_trace(basis, t=cfg.t, seed=cfg.seed)]
    if suite == "modulation":
        return [
            vf.verify_modulation(
                basis, p=cfg.p, q=cfg.q, s=cfg.weight_s, r=cfg.r,
                trials=min(cfg.trials, 50), seed=cfg.seed,
            )
        ]
    raise ConfigError(f"unknown suite {suite!r}")


def cmd_verify(cfg: RunConfig, suite: str) -> int:
    store: dict = {}
    suites = ALL_SUITES if suite == "all" else (suite,)
    reports = []
    for s in suites:
        reports.extend(_suite_reports(cfg, s, store))
    return _emit(reports, cfg, f"verify_{suite}")


def cmd_cache(cfg: RunConfig, action: str, file: str | None) -> int:
    if action == "save":
        cache_dir = cfg.cache_dir()
        if cache_dir is None:
            raise ConfigError("cache save needs --cache or AKL_CACHE_DIR")
        spec = cfg.spec()
        basis = solve(spec)
        cache_dir.mkdir(parents=True, exist_ok=True)
        path = cache_path_for(spec, cache_dir)
        save_basis(basis, path)
        print(f"saved {path} (trusted {basis.trusted} of {basis.modes} modes)")
        return 0
    if file is None:
        raise ConfigError(f"cache {action} needs a file argument")
    basis = load_basis(file)
    s = basis.spec
    print(
        f"{file}: n={s.n} k={s.k} l={s.l} N={s.grid_points} J={s.modes} "
        f"J_ok={basis.trusted} L={s.half_width:g} h={basis.grid.h:.6g}"
    )
    if action == "load":
        if not _specs_match(cfg.spec(), basis):
            raise ConfigError(
                f"cached basis {file} does not match the requested configuration; "
                "pass --recompute to rebuild it"
            )
        print(f"lambda_1={basis.eigenvalues[0]:.12g}, matches requested configuration")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        with threadpool_limits(limits=1):
            if args.command == "spectrum":
                return cmd_spectrum(cfg)
            if args.command == "transform":
                return cmd_transform(cfg)
            if args.command == "verify":
                return cmd_verify(cfg, args.suite)
            if args.command == "cache":
                return cmd_cache(cfg, args.action, args.file)
        raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, BasisCacheError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
