"""Batch driver: scenario configs in, CSV rows out.

Commands
--------
bound   compute the requested analytic lower bounds per scenario
verify  bounds plus the FEM reference; flags unsound rows, exit 1 on any
sweep   Gaussian-density sweep with a log-log slope summary row
norms   standalone norm/functional values (luxemburg, kq, kphi)

The config is a flat, line-oriented ``key = value`` format with
``[scenario]`` section headers and ``#`` comments; no external config
language.  Keys before the first section set global defaults.  Recognized
keys:

    id         scenario name (default scenario-<index>)
    map        identity | perturbed_power c=<complex> k=<int>
               | polynomial coeffs=<c1,c2,...> | moebius a=<complex>
    density    constant [c=..] | gaussian n=.. | pullback_jacobian_power
               [exponent=..] | pullback_orlicz_canceling eps=..
               | samples file=<path with one value per quadrature node>
    methods    comma list: esssup, lq, quasidisc, orlicz, orlicz_quasidisc,
               gaussian_sweep (bound/verify); luxemburg, kq, kphi (norms)
    p q alpha K eps        exponent parameters
    quad_nr quad_ntheta    disk quadrature orders (default 64 x 64)
    fem_level              FEM refinement level for verify (default 5)
    b_m_eps                pinned embedding constant (default: trial estimate)
    sweep_n                comma list of Gaussian sharpness values
    young                  Young function for the luxemburg norm (norms
                           command): log_linear | log_pow:<eps> |
                           exp_square | power:<p>

Exit codes: 0 success, 1 soundness violation (verify), 2 usage/config or
parameter-range errors.  Numeric failures inside a scenario become a
row-level ``error:`` flag and do not change the exit code.

Output determinism: identical configs produce byte-identical CSV (fixed
17-significant-digit formatting, rows in config order, seeded solvers).
``#`` comment lines carry provenance (artifact version, config hash).
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from . import bounds as bnd
from . import fem_oracle
from .conformal import build_disk_quadrature, map_from_spec
from .densities import density_from_spec
from .errors import ConfigError, NeumannBoundsError, ParameterError
from .orlicz import SampledFunction, luxemburg_norm
from .youngfn import ExpSquare, LogLinear, LogPow, PowerP

BOUND_METHODS = set(bnd.METHODS)
NORM_METHODS = {"luxemburg", "kq", "kphi"}


def fmt(x):
    """Fixed 17-significant-digit formatting; mpmath values supported."""
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, complex):
        return f"{x.real:.17g}{x.imag:+.17g}j"
    try:
        return f"{float(x):.17g}"
    except (OverflowError, TypeError):
        import mpmath as mp

        return mp.nstr(mp.mpf(x), 17)


def _fmt_intermediates(inter):
    parts = []
    for key in sorted(inter):
        parts.append(f"{key}={fmt(inter[key])}")
    return "|".join(parts)


@dataclass
class Scenario:
    sid: str
    map_spec: str = "identity"
    density_spec: str = "constant"
    methods: list = field(default_factory=list)
    p: float = 1.5
    q: float = 4.0
    alpha: float = 12.0
    K: float = 1.0
    eps: float = 2.0
    quad_nr: int = 64
    quad_ntheta: int = 64
    fem_level: int = 5
    b_m_eps: float = None
    sweep_n: list = field(default_factory=lambda: [10, 100, 1000, 10000])
    young: str = "log_linear"
    line: int = 0  # config line of the section header

    def params(self):
        return bnd.ScenarioParams(p=self.p, q=self.q, alpha=self.alpha, K=self.K, eps=self.eps)

    def build(self):
        cmap = _parse_map(self.map_spec, self.line)
        quad = build_disk_quadrature(self.quad_nr, self.quad_ntheta)
        rho = _parse_density(self.density_spec, self.line, quad)
        return cmap, rho, quad


def _parse_kv_tail(tokens, line, caster=None):
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise ConfigError(f"line {line}: expected key=value, got {tok!r}")
        key, val = tok.split("=", 1)
        out[key.strip()] = val.strip() if caster is None else caster(val.strip())
    return out


def _parse_complex(text, line):
    try:
        return complex(text)
    except ValueError as exc:
        raise ConfigError(f"line {line}: bad complex literal {text!r}") from exc


def _parse_map(spec, line):
    tokens = spec.split()
    kind = tokens[0].lower()
    raw = _parse_kv_tail(tokens[1:], line)
    try:
        if kind == "identity":
            return map_from_spec("identity")
        if kind == "perturbed_power":
            return map_from_spec(
                "perturbed_power", c=_parse_complex(raw["c"], line), k=int(raw["k"])
            )
        if kind == "polynomial":
            coeffs = [_parse_complex(t, line) for t in raw["coeffs"].split(",")]
            return map_from_spec("polynomial", coeffs=coeffs)
        if kind == "moebius":
            return map_from_spec("moebius", a=_parse_complex(raw["a"], line))
    except KeyError as exc:
        raise ConfigError(f"line {line}: map {kind!r} missing parameter {exc}") from exc
    raise ConfigError(f"line {line}: unknown map kind {kind!r}")


def _parse_density(spec, line, quad):
    tokens = spec.split()
    kind = tokens[0].lower()
    raw = _parse_kv_tail(tokens[1:], line)
    try:
        if kind == "constant":
            return density_from_spec("constant", c=float(raw.get("c", 1.0)))
        if kind == "gaussian":
            return density_from_spec("gaussian", n=float(raw["n"]))
        if kind == "pullback_jacobian_power":
            return density_from_spec(
                "pullback_jacobian_power", exponent=float(raw.get("exponent", 1.0))
            )
        if kind == "pullback_orlicz_canceling":
            return density_from_spec("pullback_orlicz_canceling", eps=float(raw["eps"]))
        if kind == "samples":
            values = np.loadtxt(raw["file"], dtype=float).ravel()
            if len(values) != len(quad):
                raise ConfigError(
                    f"line {line}: samples file has {len(values)} values, "
                    f"quadrature has {len(quad)} nodes"
                )
            return density_from_spec("samples", values=values)
    except KeyError as exc:
        raise ConfigError(f"line {line}: density {kind!r} missing parameter {exc}") from exc
    raise ConfigError(f"line {line}: unknown density kind {kind!r}")


_FLOAT_KEYS = {"p", "q", "alpha", "k", "eps", "b_m_eps"}
_INT_KEYS = {"quad_nr", "quad_ntheta", "fem_level"}


def _apply_key(sc, key, value, line):
    lk = key.lower()
    if lk == "id":
        sc.sid = value
    elif lk == "map":
        sc.map_spec = value
    elif lk == "density":
        sc.density_spec = value
    elif lk == "methods":
        sc.methods = [m.strip() for m in value.split(",") if m.strip()]
    elif lk == "sweep_n":
        sc.sweep_n = [int(float(t)) for t in value.split(",")]
    elif lk == "young":
        sc.young = value.strip()
    elif lk in _FLOAT_KEYS:
        attr = "K" if lk == "k" else lk
        try:
            setattr(sc, attr, float(value))
        except ValueError as exc:
            raise ConfigError(f"line {line}: bad number for {key}: {value!r}") from exc
    elif lk in _INT_KEYS:
        try:
            setattr(sc, lk, int(value))
        except ValueError as exc:
            raise ConfigError(f"line {line}: bad integer for {key}: {value!r}") from exc
    else:
        raise ConfigError(f"line {line}: unknown key {key!r}")


def parse_config(text):
    """Parse config text into a list of scenarios (with line-numbered errors)."""
    defaults = Scenario(sid="defaults")
    scenarios = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("["):
            if stripped.lower() != "[scenario]":
                raise ConfigError(f"line {lineno}: unknown section {stripped!r}")
            current = Scenario(**{**defaults.__dict__})
            current.sid = f"scenario-{len(scenarios) + 1}"
            current.methods = list(defaults.methods)
            current.sweep_n = list(defaults.sweep_n)
            current.line = lineno
            scenarios.append(current)
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected key = value, got {stripped!r}")
        key, value = (part.strip() for part in stripped.split("=", 1))
        _apply_key(current if current is not None else defaults, key, value, lineno)
    if not scenarios:
        raise ConfigError("config defines no [scenario] sections")
    return scenarios


def _validate_scenario(sc, command):
    """Range-check everything the requested methods will need (before work)."""
    params = sc.params()
    try:
        if command == "sweep":
            params.validate_jacobian_free()
            sc.build()
            return
        if not sc.methods:
            raise ConfigError(
                f"line {sc.line}: scenario {sc.sid!r} has an empty method list"
            )
        valid = NORM_METHODS if command == "norms" else BOUND_METHODS
        for m in sc.methods:
            if m not in valid:
                raise ConfigError(
                    f"line {sc.line}: unknown method {m!r} for {command} "
                    f"(valid: {', '.join(sorted(valid))})"
                )
        if {"lq", "quasidisc", "gaussian_sweep"} & set(sc.methods):
            params.validate_pq(strict=True)
        if {"quasidisc", "gaussian_sweep"} & set(sc.methods):
            params.validate_jacobian_free()
        if "orlicz_quasidisc" in sc.methods:
            params.validate_quasidisc()
        if "kq" in sc.methods and sc.q <= 2:
            raise ParameterError(f"q must exceed 2, got {sc.q}")
    except ParameterError as exc:
        raise ConfigError(f"line {sc.line}: scenario {sc.sid!r}: {exc}") from exc
    sc.build()  # surfaces bad map/density specs now


def _young_from_name(name, line):
    name = name.strip().lower()
    if name == "log_linear":
        return LogLinear()
    if name == "exp_square":
        return ExpSquare()
    if name.startswith("log_pow:"):
        return LogPow(float(name.split(":", 1)[1]))
    if name.startswith("power:"):
        return PowerP(float(name.split(":", 1)[1]))
    raise ConfigError(f"line {line}: unknown young function {name!r}")


# ---------------------------------------------------------------------------
# per-scenario work
# ---------------------------------------------------------------------------


def _bound_reports(sc):
    """(method, BoundReport-or-error-string) pairs in method order."""
    cmap, rho, quad = sc.build()
    params = sc.params()
    out = []
    for method in sc.methods:
        try:
            if method == "esssup":
                rep = bnd.mu_lower_esssup(cmap, rho, quad)
            elif method == "lq":
                rep = bnd.mu_lower_kq(cmap, rho, sc.p, sc.q, quad)
            elif method == "quasidisc":
                rep = bnd.mu_lower_quasidisc(cmap, rho, params, quad)
            elif method == "orlicz":
                rep = bnd.mu_lower_orlicz(cmap, rho, sc.eps, sc.b_m_eps, quad)
            elif method == "orlicz_quasidisc":
                rep = bnd.mu_lower_orlicz_quasidisc(cmap, rho, params, sc.b_m_eps, quad)
            elif method == "gaussian_sweep":
                reports = bnd.gaussian_sweep(sc.sweep_n, params, cmap, quad)
                for n, rep_n in zip(sc.sweep_n, reports):
                    out.append((f"gaussian_sweep[n={n}]", rep_n))
                slope = bnd.fit_loglog_slope(sc.sweep_n, reports)
                predicted = (sc.q - 2.0) / (sc.q * params.lebesgue_exponent())
                out.append(
                    ("gaussian_sweep[slope]", {"slope": slope, "predicted": predicted})
                )
                continue
            else:  # pragma: no cover - filtered during validation
                raise ConfigError(f"unknown method {method!r}")
            out.append((method, rep))
        except NeumannBoundsError as exc:
            out.append((method, f"error:{exc}"))
    return out


def _rows_bound(sc, corrupt=1.0):
    rows = []
    for method, rep in _bound_reports(sc):
        if isinstance(rep, str):
            rows.append([sc.sid, method, "nan", "nan", "", rep])
            continue
        if isinstance(rep, dict):  # sweep slope summary
            rows.append(
                [sc.sid, method, fmt(rep["slope"]), fmt(rep["predicted"]), "", ""]
            )
            continue
        rows.append(
            [
                sc.sid,
                method,
                fmt(corrupt * rep.bound),
                fmt(rep.bound_log),
                _fmt_intermediates(rep.intermediates),
                ";".join(rep.validity_flags),
            ]
        )
    return rows


def _rows_verify(sc, tol, corrupt=1.0):
    rows = []
    unsound = False
    try:
        cmap, rho, _ = sc.build()
        mu_ref = fem_oracle.mu_fem_richardson(cmap, rho, sc.fem_level)
    except NeumannBoundsError as exc:
        for method in sc.methods:
            rows.append([sc.sid, method, "nan", "nan", "nan", "false", f"error:{exc}"])
        return rows, True
    for method, rep in _bound_reports(sc):
        if isinstance(rep, str):
            rows.append([sc.sid, method, "nan", fmt(mu_ref), "nan", "false", rep])
            unsound = True
            continue
        if isinstance(rep, dict):  # slope summaries carry no soundness claim
            continue
        bound = corrupt * rep.bound
        ratio = bound / mu_ref
        sound = ratio <= 1.0 + tol
        unsound = unsound or not sound
        rows.append(
            [
                sc.sid,
                method,
                fmt(bound),
                fmt(mu_ref),
                fmt(ratio),
                "true" if sound else "false",
                ";".join(rep.validity_flags),
            ]
        )
    return rows, unsound


def _rows_sweep(sc):
    cmap, _, quad = sc.build()
    params = sc.params()
    reports = bnd.gaussian_sweep(sc.sweep_n, params, cmap, quad)
    rows = []
    for n, rep in zip(sc.sweep_n, reports):
        rows.append(
            [
                sc.sid,
                f"n={n}",
                fmt(rep.bound),
                fmt(rep.bound_log),
                fmt(rep.intermediates["log_rho_norm_s"]),
                fmt(rep.intermediates["log_rho_norm_dominated"]),
                ";".join(rep.validity_flags),
            ]
        )
    slope = bnd.fit_loglog_slope(sc.sweep_n, reports)
    s = params.lebesgue_exponent()
    predicted = (sc.q - 2.0) / (sc.q * s)
    rows.append([sc.sid, "slope", fmt(slope), fmt(predicted), "", "", ""])
    return rows


def _rows_norms(sc):
    cmap, rho, quad = sc.build()
    rows = []
    for method in sc.methods:
        if method == "luxemburg":
            young = _young_from_name(sc.young, sc.line)
            f = SampledFunction(
                np.asarray(rho.on_disk(cmap, quad.nodes), dtype=float),
                quad.weights,
                quad.measure_id,
            )
            rows.append([sc.sid, f"luxemburg({young.name})", fmt(luxemburg_norm(f, young)), ""])
        elif method == "kq":
            rows.append([sc.sid, f"kq(q={fmt(sc.q)})", fmt(bnd.k_q(cmap, rho, sc.q, quad)), ""])
        elif method == "kphi":
            val = bnd.k_phi(cmap, rho, LogPow(sc.eps), quad)
            rows.append([sc.sid, f"kphi(eps={fmt(sc.eps)})", fmt(val), ""])
    return rows


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

_HEADERS = {
    "bound": ["scenario", "method", "bound", "bound_log", "intermediates", "flags"],
    "verify": ["scenario", "method", "bound", "mu_fem", "ratio", "sound", "flags"],
    "sweep": [
        "scenario",
        "point",
        "bound",
        "bound_log_or_predicted_slope",
        "log_rho_norm",
        "log_rho_norm_dominated",
        "flags",
    ],
    "norms": ["scenario", "quantity", "value", "details"],
}


def _emit(out_path, config_text, header, rows):
    lines = [
        f"# artifact-version: {__version__}",
        f"# config-sha256: {hashlib.sha256(config_text.encode()).hexdigest()}",
        ",".join(header),
    ]
    for row in rows:
        lines.append(",".join(row))
    payload = "\n".join(lines) + "\n"
    if out_path == "-":
        sys.stdout.write(payload)
    else:
        with open(out_path, "w") as fh:
            fh.write(payload)


def _run_parallel(scenarios, worker, jobs):
    if jobs <= 1:
        return [worker(sc) for sc in scenarios]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, scenarios))


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="neumann-bounds",
        description="analytic eigenvalue lower bounds with FEM verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("bound", "verify", "sweep", "norms"):
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True, help="scenario config path")
        cmd.add_argument("--out", default="-", help="output CSV path (default stdout)")
        cmd.add_argument("--jobs", type=int, default=1, help="parallel scenarios")
        cmd.add_argument("--fem-level", type=int, default=None, help="override FEM level")
        cmd.add_argument("--tol", type=float, default=0.02, help="soundness tolerance")
        cmd.add_argument(
            "--corrupt-bounds",
            type=float,
            default=1.0,
            help=argparse.SUPPRESS,  # detector self-test hook: multiply bounds
        )
    args = parser.parse_args(argv)

    try:
        with open(args.config) as fh:
            config_text = fh.read()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2

    try:
        scenarios = parse_config(config_text)
        if args.fem_level is not None:
            for sc in scenarios:
                sc.fem_level = args.fem_level
        for sc in scenarios:
            _validate_scenario(sc, args.command)
    except (ConfigError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    exit_code = 0
    if args.command == "bound":
        blocks = _run_parallel(scenarios, lambda sc: _rows_bound(sc, args.corrupt_bounds), args.jobs)
        rows = [row for block in blocks for row in block]
    elif args.command == "verify":
        blocks = _run_parallel(
            scenarios, lambda sc: _rows_verify(sc, args.tol, args.corrupt_bounds), args.jobs
        )
        rows = [row for block, _ in blocks for row in block]
        if any(unsound for _, unsound in blocks):
            exit_code = 1
    elif args.command == "sweep":
        blocks = _run_parallel(scenarios, _rows_sweep, args.jobs)
        rows = [row for block in blocks for row in block]
    else:
        blocks = _run_parallel(scenarios, _rows_norms, args.jobs)
        rows = [row for block in blocks for row in block]

    _emit(args.out, config_text, _HEADERS[args.command], rows)
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
