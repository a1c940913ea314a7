"""Command-line front end: ``affinedyn <command> [options]``.

Every command writes ``result.json`` (and CSV series where relevant) to the
output directory, taken from ``--out``, then ``AFFINEDYN_OUT``, then
``./affinedyn-out``.  Exit codes: 0 success, 1 a checked bound failed,
2 invalid input.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Callable, Sequence

from . import kernelspace as ks
from .acceptance import run_suite
from .dynamics import classify, spectrum, sweep_rows
from .errors import NoInteriorFixedPoint, RegimeMismatch, ZeroAtTarget
from .experiments import (
    DEFAULT_PANEL,
    DEFAULT_SEED,
    MAX_HORIZON,
    cesaro_averages,
    irregular_scan,
    lower_estimate_delta,
    make_pseudo_orbit,
    non_shadowing_witness,
    orbit_norms,
    series_tail_terms,
    shadow_contraction,
    shadow_expansion,
    spectral_radius_estimate,
    verify_norm_estimates,
)
from .kernelspace import KernelVector
from .laplace import ProfileFunction, isometry_check
from .report import dumps, spectrum_svg, write_csv, write_json
from .symbols import RE_B_TOL, AffineSymbol

ENV_OUT = "AFFINEDYN_OUT"
DEFAULT_OUT = "affinedyn-out"

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2

_NUM = r"(?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
_REAL_RE = re.compile(rf"^([+-]?{_NUM})$")
_IMAG_RE = re.compile(rf"^([+-]?{_NUM}?)i$")
_FULL_RE = re.compile(rf"^([+-]?{_NUM})([+-]{_NUM}?)i$")


class InvalidInput(ValueError):
    pass


def _imag(text: str) -> float:
    if text in ("", "+"):
        return 1.0
    if text == "-":
        return -1.0
    return float(text)


def parse_complex(text: str) -> complex:
    """Parse ``RE+IMi`` (e.g. ``1+0i``, ``-0.5i``, ``2``) into a complex number."""
    s = text.strip().replace(" ", "")
    if m := _FULL_RE.match(s):
        return complex(float(m.group(1)), _imag(m.group(2)))
    if m := _IMAG_RE.match(s):
        return complex(0.0, _imag(m.group(1)))
    if m := _REAL_RE.match(s):
        return complex(float(m.group(1)), 0.0)
    raise InvalidInput(f"cannot parse complex number {text!r}; expected the form RE+IMi, e.g. 1+0i")


@dataclass
class RunConfig:
    a: float = 1.0
    b: complex = 0j
    alpha: float = 0.0
    n: int = 60
    delta: float = 0.01
    epsilon: float = 1.0
    seed: int = DEFAULT_SEED
    out: str = DEFAULT_OUT
    w: complex = 1 + 0j
    z0: complex | None = None
    samples: int = 100
    threshold: float = 10.0
    mode: str = "perturbed"
    tol: float = 1e-6
    grid: str | None = None

    def symbol(self) -> AffineSymbol:
        return AffineSymbol(self.a, self.b)

    def to_json(self) -> dict[str, Any]:
        d = asdict(self)
        d.pop("out")
        d["b"] = [self.b.real, self.b.imag]
        d["w"] = [self.w.real, self.w.imag]
        d["z0"] = None if self.z0 is None else [self.z0.real, self.z0.imag]
        return d


_CONVERTERS: dict[str, Callable[[str], Any]] = {
    "a": float,
    "b": parse_complex,
    "alpha": float,
    "n": int,
    "delta": float,
    "epsilon": float,
    "seed": int,
    "out": str,
    "w": parse_complex,
    "z0": parse_complex,
    "samples": int,
    "threshold": float,
    "mode": str,
    "tol": float,
    "grid": str,
}


def read_config_file(path: Path) -> dict[str, Any]:
    """Plain ``key = value`` lines; ``#`` starts a comment."""
    values: dict[str, Any] = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidInput(f"{path}:{lineno}: expected key=value")
        key, value = (p.strip() for p in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CONVERTERS:
            raise InvalidInput(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _CONVERTERS[key](value)
        except ValueError as exc:
            raise InvalidInput(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return values


def validate(cfg: RunConfig) -> None:
    if not cfg.a > 0:
        raise InvalidInput(f"constraint violated: a > 0 required (got a={cfg.a})")
    if cfg.b.real < -RE_B_TOL:
        raise InvalidInput(f"constraint violated: Re(b) >= 0 required (got Re(b)={cfg.b.real})")
    if not cfg.alpha > -1:
        raise InvalidInput(f"constraint violated: alpha > -1 required (got alpha={cfg.alpha})")
    if cfg.w.real <= 0:
        raise InvalidInput(f"constraint violated: Re(w) > 0 required for the test vector (got w={cfg.w})")
    if not 1 <= cfg.n <= MAX_HORIZON:
        raise InvalidInput(f"constraint violated: 1 <= n <= {MAX_HORIZON} (got n={cfg.n})")
    if not cfg.delta > 0:
        raise InvalidInput(f"constraint violated: delta > 0 (got delta={cfg.delta})")
    if not cfg.epsilon > 0:
        raise InvalidInput(f"constraint violated: epsilon > 0 (got epsilon={cfg.epsilon})")
    if cfg.samples < 1:
        raise InvalidInput(f"constraint violated: samples >= 1 (got samples={cfg.samples})")
    if cfg.mode not in ("equal_gap", "perturbed"):
        raise InvalidInput(f"mode must be 'equal_gap' or 'perturbed' (got {cfg.mode!r})")


def build_config(args: argparse.Namespace) -> RunConfig:
    merged: dict[str, Any] = {"out": os.environ.get(ENV_OUT, DEFAULT_OUT)}
    if args.config is not None:
        merged.update(read_config_file(Path(args.config)))
    for key, conv in _CONVERTERS.items():
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = conv(value) if isinstance(value, str) and conv is not str else value
    cfg = RunConfig(**merged)
    cfg.a, cfg.alpha, cfg.delta, cfg.epsilon = float(cfg.a), float(cfg.alpha), float(cfg.delta), float(cfg.epsilon)
    cfg.b, cfg.w = complex(cfg.b), complex(cfg.w)
    validate(cfg)
    return cfg


# --- commands ------------------------------------------------------------------

Result = tuple[int, dict[str, Any], str]


def _unit_kernel(cfg: RunConfig) -> KernelVector:
    return KernelVector.kernel(cfg.w, cfg.alpha, 1.0 / ks.kernel_norm(cfg.alpha, cfg.w))


def cmd_classify(cfg: RunConfig, out: Path) -> Result:
    rep = classify(cfg.symbol(), cfg.alpha)
    return EXIT_OK, rep.to_json(), rep.table()


def cmd_spectrum(cfg: RunConfig, out: Path) -> Result:
    phi = cfg.symbol()
    desc = spectrum(phi, cfg.alpha)
    rep = classify(phi, cfg.alpha)
    (out / "spectrum.svg").write_text(spectrum_svg(desc))
    data = {
        "spectrum": desc.to_json(),
        "citation": rep.spectrum_citation,
        "hyperbolic": rep.hyperbolic.value,
        "spectral_radius": spectral_radius_estimate(phi, cfg.alpha, max(cfg.n, 10)).to_json(),
    }
    return EXIT_OK, data, f"{desc.kind}  max modulus {desc.max_modulus:.12g}  hyperbolic={rep.hyperbolic.value}"


def cmd_orbit(cfg: RunConfig, out: Path) -> Result:
    res = orbit_norms(cfg.symbol(), cfg.alpha, KernelVector.kernel(cfg.w, cfg.alpha), cfg.n)
    write_csv(out / "orbit.csv", res.csv_rows())
    data = res.to_json()
    return EXIT_OK, data, f"orbit norms for n = 0..{cfg.n} written to orbit.csv"


def cmd_estimates(cfg: RunConfig, out: Path) -> Result:
    rep = verify_norm_estimates(cfg.symbol(), cfg.alpha, cfg.samples, cfg.seed)
    data = rep.to_json()
    ok = rep.max_inequality_violation <= 1e-10 and (
        rep.max_equality_violation is None or rep.max_equality_violation < 1e-10
    )
    return (EXIT_OK if ok else EXIT_FAILED), data, (
        f"bound {rep.bound:.12g}  max ratio {rep.max_ratio:.12g}  "
        f"equality violation {rep.max_equality_violation}"
    )


def cmd_lower_estimate(cfg: RunConfig, out: Path) -> Result:
    g = _unit_kernel(cfg)
    rep = lower_estimate_delta(cfg.symbol(), cfg.alpha, g, cfg.z0, cfg.n)
    write_csv(out / "lower_estimate.csv", rep.csv_rows())
    code = EXIT_OK if rep.n0 is not None else EXIT_FAILED
    return code, rep.to_json(), f"delta {rep.delta:.17g}  n0 {rep.n0}"


def cmd_shadow(cfg: RunConfig, out: Path) -> Result:
    phi = cfg.symbol()
    x = _unit_kernel(cfg)
    if phi.a > 1.0:
        po = make_pseudo_orbit(phi, cfg.alpha, x, cfg.delta, cfg.n, cfg.mode, cfg.seed)
        rep = shadow_contraction(po)
    elif phi.a < 1.0 and phi.re_b_zero:
        c_inv = phi.a ** ((cfg.alpha + 2.0) / 2.0)
        main = cfg.delta * c_inv / (1.0 - c_inv)
        j0 = series_tail_terms(cfg.delta, c_inv, main)
        po = make_pseudo_orbit(phi, cfg.alpha, x, cfg.delta, cfg.n + j0 + 1, cfg.mode, cfg.seed)
        rep = shadow_expansion(po, horizon=cfg.n)
    else:
        raise RegimeMismatch(
            "constructive shadowing needs a > 1, or a < 1 with Re(b) = 0; "
            "run `classify` for the theorem outcome in this regime"
        )
    write_csv(out / "shadow.csv", rep.csv_rows())
    data = {"pseudo_orbit": po.to_json(), "shadow": rep.to_json()}
    ok = rep.epsilon_observed <= rep.epsilon_bound * (1.0 + 1e-6)
    return (EXIT_OK if ok else EXIT_FAILED), data, (
        f"epsilon observed {rep.epsilon_observed:.6g}  bound {rep.epsilon_bound:.6g}"
    )


def cmd_witness(cfg: RunConfig, out: Path) -> Result:
    rep = non_shadowing_witness(cfg.symbol(), cfg.alpha, cfg.delta, cfg.epsilon)
    write_csv(out / "witness.csv", rep.csv_rows())
    return EXIT_OK, rep.to_json(), f"n* = {rep.n_star}  drift slope {rep.drift_slope:.12g}"


def cmd_cesaro(cfg: RunConfig, out: Path) -> Result:
    phi = cfg.symbol()
    rep = cesaro_averages(phi, cfg.alpha, KernelVector.kernel(cfg.w, cfg.alpha), cfg.n, cfg.threshold)
    write_csv(out / "cesaro.csv", rep.csv_rows())
    if rep.bound is not None:
        ok = bool((rep.averages <= rep.bound * rep.norm_f + 1e-9).all())
        text = f"M = {rep.bound:.12g}  max average/||f|| = {rep.max_ratio:.12g}"
    else:
        ok = True
        text = f"unbounded regime; average exceeds {cfg.threshold:g} ||f|| at n = {rep.witness_n}"
    return (EXIT_OK if ok else EXIT_FAILED), rep.to_json(), text


def cmd_irregular(cfg: RunConfig, out: Path) -> Result:
    f = _unit_kernel(cfg)
    rows = irregular_scan(cfg.symbol(), cfg.alpha, [f], cfg.n)
    ok = all(r.signature_ok for r in rows)
    return (EXIT_OK if ok else EXIT_FAILED), {"rows": [r.to_json() for r in rows]}, (
        f"min {rows[0].min_norm:.6g}  max {rows[0].max_norm:.6g}  signature_ok={rows[0].signature_ok}"
    )


def cmd_laplace_check(cfg: RunConfig, out: Path) -> Result:
    f = ProfileFunction.single(cfg.alpha, 1.0, cfg.alpha + 1.0, 1.0)
    res = isometry_check(f, tol=cfg.tol)
    write_csv(out / "isometry.csv", res.csv_rows())
    data = {
        "profile": f.to_json(),
        "bergman_norm": res.bergman_norm,
        "mu_norm": res.mu_norm,
        "relative_gap": res.gap,
        "tolerance": cfg.tol,
    }
    code = EXIT_OK if res.gap < cfg.tol else EXIT_FAILED
    return code, data, f"bergman {res.bergman_norm:.15g}  mu {res.mu_norm:.15g}  gap {res.gap:.3g}"


def read_grid(path: Path) -> list[tuple[float, complex, float]]:
    """CSV with header a,b_re,b_im,alpha."""
    import csv

    params = []
    with path.open(newline="") as fh:
        for row in csv.DictReader(fh):
            try:
                params.append((float(row["a"]), complex(float(row["b_re"]), float(row["b_im"])), float(row["alpha"])))
            except (KeyError, TypeError, ValueError) as exc:
                raise InvalidInput(f"{path}: rows need numeric a,b_re,b_im,alpha ({exc})") from exc
    return params


def cmd_sweep(cfg: RunConfig, out: Path) -> Result:
    params = read_grid(Path(cfg.grid)) if cfg.grid else list(DEFAULT_PANEL)
    for a, b, alpha in params:
        validate(RunConfig(a=a, b=b, alpha=alpha))
    rows = sweep_rows(params)
    write_csv(out / "sweep.csv", rows)
    return EXIT_OK, {"rows": len(rows) - 1, "columns": rows[0]}, f"{len(rows) - 1} classifications written to sweep.csv"


COMMANDS: dict[str, tuple[Callable[[RunConfig, Path], Result], str]] = {
    "classify": (cmd_classify, "dynamical properties with theorem tags"),
    "spectrum": (cmd_spectrum, "spectrum descriptor and SVG plot"),
    "orbit": (cmd_orbit, "orbit norms ||C^n k_w|| for n <= N"),
    "estimates": (cmd_estimates, "norm identity/inequality on random kernel vectors"),
    "lower-estimate": (cmd_lower_estimate, "lower-estimate constant delta and n0"),
    "shadow": (cmd_shadow, "constructive shadow of a pseudo-orbit"),
    "witness": (cmd_witness, "non-shadowing witness at an interior fixed point"),
    "cesaro": (cmd_cesaro, "Cesaro averages of orbit norms"),
    "irregular": (cmd_irregular, "finite-horizon min/max of orbit norms"),
    "laplace-check": (cmd_laplace_check, "Bergman quadrature vs closed-form Laplace-side norm"),
    "sweep": (cmd_sweep, "classification CSV over a parameter grid (default: the built-in panel)"),
}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--a", type=float, help="dilation a > 0")
    p.add_argument("--b", type=str, help="translation b as RE+IMi with Re(b) >= 0, e.g. 1+0i")
    p.add_argument("--alpha", type=float, help="weight alpha > -1")
    p.add_argument("--n", type=int, help="horizon N")
    p.add_argument("--delta", type=float, help="pseudo-orbit step delta")
    p.add_argument("--epsilon", type=float, help="shadowing tolerance epsilon")
    p.add_argument("--seed", type=int, help="random seed")
    p.add_argument("--w", type=str, help="kernel point of the test vector (default 1+0i)")
    p.add_argument("--z0", type=str, help="base point for the lower estimate")
    p.add_argument("--samples", type=int, help="random vectors for `estimates`")
    p.add_argument("--threshold", type=float, help="Cesaro witness threshold (multiples of ||f||)")
    p.add_argument("--mode", type=str, help="pseudo-orbit mode: perturbed or equal_gap")
    p.add_argument("--tol", type=float, help="relative tolerance for `laplace-check`")
    p.add_argument("--grid", type=str, help="CSV with columns a,b_re,b_im,alpha for `sweep`")
    p.add_argument("--out", type=str, help=f"output directory (default ${ENV_OUT} or ./{DEFAULT_OUT})")
    p.add_argument("--config", type=str, help="key=value file with defaults for the options above")
    p.add_argument("--json", action="store_true", help="print result JSON instead of the summary")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="affinedyn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        _add_common(sub.add_parser(name, help=help_text))
    suite = sub.add_parser("suite", help="run the acceptance criteria")
    suite.add_argument("--quick", action="store_true", help="reduced horizons")
    suite.add_argument("--out", type=str)
    suite.add_argument("--config", type=str)
    suite.add_argument("--json", action="store_true")
    suite.add_argument("--exponent-offset", type=float, default=0.0, help=argparse.SUPPRESS)
    return parser


def _run_suite(args: argparse.Namespace) -> int:
    merged: dict[str, Any] = {"out": os.environ.get(ENV_OUT, DEFAULT_OUT)}
    if args.config is not None:
        merged.update({k: v for k, v in read_config_file(Path(args.config)).items() if k == "out"})
    if args.out is not None:
        merged["out"] = args.out
    out = Path(merged["out"])
    results = run_suite(args.quick, out, args.exponent_offset, echo=None if args.json else print)
    if args.json:
        print((out / "summary.json").read_text(), end="")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "suite":
            return _run_suite(args)
        cfg = build_config(args)
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        fn, _ = COMMANDS[args.command]
        code, data, text = fn(cfg, out)
    except (InvalidInput, RegimeMismatch, NoInteriorFixedPoint, ZeroAtTarget) as exc:
        print(f"affinedyn {args.command}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"affinedyn {args.command}: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    result = {"command": args.command, "config": cfg.to_json(), "exit_code": code, "result": data}
    write_json(out / "result.json", result)
    print(dumps(result) if args.json else text)
    return code


if __name__ == "__main__":
    sys.exit(main())
