"""Experiment front end: config parsing, CSV emission, figure reproduction.

Configs are flat INI files (sections of ``key = value`` pairs), overridable
from the command line with ``--override section.key=value``.  Outputs are
UTF-8 CSV with LF line endings and shortest round-trip float formatting, so
repeated runs of the same config are byte-identical.

Exit codes: 0 full success, 1 configuration or I/O error, 2 partial
numerical failure (flagged cells serialized as NA).
"""

from __future__ import annotations

import argparse
import configparser
import math
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .analysis import (
    EvalGrid,
    ParameterSchedule,
    convergence_run,
    interval_rate_bound,
)
from .baskakov import baskakov_beta_apply, central_moment, moments_closed
from .core import DomainError, PQPair, RegimeError, TruncationPolicy
from .functions import FunctionSpec

__all__ = ["ConfigurationError", "ExperimentConfig", "validate_config", "run_experiment", "main"]

_OUTPUT_KINDS = ("curves", "moments", "convergence", "bound-report")
_DEFAULT_N_LIST = (10, 20, 50, 100)


class ConfigurationError(Exception):
    """Invalid experiment configuration; carries human-readable violations."""

    def __init__(self, messages: Sequence[str]):
        self.messages = list(messages)
        super().__init__("; ".join(self.messages))


@dataclass(frozen=True)
class ExperimentConfig:
    schedule: ParameterSchedule
    function: FunctionSpec
    n_list: tuple[int, ...]
    grid: EvalGrid
    policy: TruncationPolicy
    outputs: tuple[str, ...]
    output_path: str
    kappa: float = 2.0
    plot_script: bool = True


def _parse_floats(text: str) -> list[float]:
    return [float(tok) for tok in text.replace(",", " ").split()]


def _parse_ints(text: str) -> list[int]:
    return [int(tok) for tok in text.replace(",", " ").split()]


def _build_config(parser: configparser.ConfigParser) -> ExperimentConfig:
    problems: list[str] = []

    # --- parameters: fixed pair or schedule ---
    schedule: Optional[ParameterSchedule] = None
    if parser.has_section("pair") and parser.has_section("schedule"):
        problems.append("give either a [pair] or a [schedule] section, not both")
    elif parser.has_section("pair"):
        try:
            p = parser.getfloat("pair", "p")
            q = parser.getfloat("pair", "q")
            schedule = ParameterSchedule.fixed(PQPair(p, q))
        except (RegimeError, ValueError) as exc:
            problems.append(
                f"[pair] violates the regime 0 < q < p <= 1 (classical corner aside): {exc}"
            )
    elif parser.has_section("schedule"):
        family = parser.get("schedule", "family", fallback="q_ratio")
        try:
            if family == "q_ratio":
                schedule = ParameterSchedule.q_ratio()
            elif family == "harmonic_decay":
                schedule = ParameterSchedule.harmonic_decay(
                    parser.getfloat("schedule", "alpha", fallback=0.0),
                    parser.getfloat("schedule", "beta"),
                )
            elif family == "fixed":
                schedule = ParameterSchedule.fixed(
                    PQPair(parser.getfloat("schedule", "p"), parser.getfloat("schedule", "q"))
                )
            else:
                problems.append(f"[schedule] unknown family {family!r}")
        except (DomainError, RegimeError, ValueError, configparser.NoOptionError) as exc:
            problems.append(f"[schedule] invalid: {exc}")
    else:
        problems.append("missing [pair] or [schedule] section")

    # --- function ---
    function: Optional[FunctionSpec] = None
    if parser.has_section("function"):
        has_coeffs = parser.has_option("function", "coefficients")
        has_name = parser.has_option("function", "named")
        growth = (
            parser.getfloat("function", "growth_bound")
            if parser.has_option("function", "growth_bound")
            else None
        )
        try:
            if has_coeffs == has_name:
                problems.append("[function] needs exactly one of 'coefficients' or 'named'")
            elif has_coeffs:
                function = FunctionSpec.polynomial(
                    _parse_floats(parser.get("function", "coefficients")),
                    growth_bound_Cf=growth,
                )
            else:
                function = FunctionSpec.named(
                    parser.get("function", "named"), growth_bound_Cf=growth
                )
        except (DomainError, ValueError) as exc:
            problems.append(f"[function] invalid: {exc}")
    else:
        problems.append("missing [function] section")

    # --- run parameters ---
    n_list: tuple[int, ...] = _DEFAULT_N_LIST
    if parser.has_option("run", "n_list"):
        try:
            n_list = tuple(_parse_ints(parser.get("run", "n_list")))
        except ValueError as exc:
            problems.append(f"[run] n_list unparseable: {exc}")
    if not n_list:
        problems.append("[run] n_list must be non-empty")
    elif any(b <= a for a, b in zip(n_list, n_list[1:])):
        problems.append(f"[run] n_list must be strictly increasing, got {list(n_list)}")

    outputs: tuple[str, ...] = ("curves",)
    if parser.has_option("run", "outputs"):
        outputs = tuple(
            tok.strip() for tok in parser.get("run", "outputs").split(",") if tok.strip()
        )
    for kind in outputs:
        if kind not in _OUTPUT_KINDS:
            problems.append(f"[run] unknown output {kind!r}; known: {_OUTPUT_KINDS}")

    kappa = 2.0
    if parser.has_option("run", "kappa"):
        try:
            kappa = parser.getfloat("run", "kappa")
        except ValueError as exc:
            problems.append(f"[run] kappa unparseable: {exc}")
    plot_script = True
    if parser.has_option("run", "plot_script"):
        try:
            plot_script = parser.getboolean("run", "plot_script")
        except ValueError as exc:
            problems.append(f"[run] plot_script unparseable: {exc}")

    # moments of order 2 (and the Beta-weighted operator itself for degree-2
    # targets) exist only for n > 2
    needs_second_order = {"moments", "convergence", "bound-report"} & set(outputs)
    if n_list and needs_second_order and min(n_list) <= 2:
        problems.append(
            f"outputs {sorted(needs_second_order)} need every n > 2 "
            f"(second-order moments are defined for n > 2), got n = {min(n_list)}"
        )

    # --- grid ---
    grid = EvalGrid(0.0, 5.0, 101)
    if parser.has_section("grid"):
        try:
            grid = EvalGrid(
                parser.getfloat("grid", "start", fallback=0.0),
                parser.getfloat("grid", "stop", fallback=5.0),
                parser.getint("grid", "points", fallback=101),
            )
        except (DomainError, ValueError) as exc:
            problems.append(f"[grid] invalid: {exc}")

    # --- policy ---
    policy = TruncationPolicy()
    if parser.has_section("policy"):
        try:
            policy = TruncationPolicy(
                rel_tol=parser.getfloat("policy", "rel_tol", fallback=1e-12),
                abs_tol=parser.getfloat("policy", "abs_tol", fallback=1e-14),
                max_terms=parser.getint("policy", "max_terms", fallback=10000),
            )
        except (DomainError, ValueError) as exc:
            problems.append(f"[policy] invalid: {exc}")

    output_path = parser.get("output", "path", fallback="out")

    if "bound-report" in outputs and function is not None:
        if function.default_growth_bound() is None:
            problems.append(
                "[function] bound-report needs a growth bound C_f "
                "(set growth_bound, or use a polynomial of degree <= 2)"
            )
    if "bound-report" in outputs and grid.stop < kappa + 1.0:
        problems.append(
            f"[grid] stop = {grid.stop} must reach kappa + 1 = {kappa + 1.0} for bound-report"
        )

    if problems:
        raise ConfigurationError(problems)
    assert schedule is not None and function is not None
    return ExperimentConfig(
        schedule=schedule,
        function=function,
        n_list=tuple(int(n) for n in n_list),
        grid=grid,
        policy=policy,
        outputs=outputs,
        output_path=output_path,
        kappa=kappa,
        plot_script=plot_script,
    )


def validate_config(path: str | Path, overrides: Sequence[str] = ()) -> ExperimentConfig:
    """Parse and validate a config file; raises ConfigurationError with the
    full list of violations (parse failures include line information)."""
    parser = configparser.ConfigParser()
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError([f"config file not found: {path}"])
    try:
        with open(path, encoding="utf-8") as handle:
            parser.read_file(handle)
    except configparser.Error as exc:
        raise ConfigurationError([f"config parse failure: {exc}"]) from exc
    for item in overrides:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigurationError(
                [f"override {item!r} must look like section.key=value"]
            )
        key_part, value = item.split("=", 1)
        section, key = (part.strip() for part in key_part.split(".", 1))
        if not parser.has_section(section):
            parser.add_section(section)
        if value.strip() == "":
            parser.remove_option(section, key)
        else:
            parser.set(section, key, value.strip())
    return _build_config(parser)


# ---------------------------------------------------------------------------
# Output writers.
# ---------------------------------------------------------------------------


def _fmt(value: float) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "NA"
    return repr(float(value))


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(",".join(header) + "\n")
        for row in rows:
            handle.write(",".join(row) + "\n")


def _curves(config: ExperimentConfig, out: Path) -> bool:
    xs = config.grid.array()
    fv = np.asarray(config.function.evaluate(xs), dtype=float)
    partial = False
    columns: list[list[str]] = []
    for n in config.n_list:
        pair = config.schedule.pair_at(n)
        col: list[str] = []
        for x in xs:
            try:
                res = baskakov_beta_apply(pair, config.function, n, float(x), config.policy)
                good = res.trusted and math.isfinite(res.value)
                col.append(_fmt(res.value) if good else "NA")
                partial = partial or not good
            except DomainError:
                col.append("NA")
                partial = True
        columns.append(col)
    header = ["x", "f"] + [f"D_n={n}" for n in config.n_list]
    rows = [
        [_fmt(x), _fmt(v)] + [columns[j][i] for j in range(len(config.n_list))]
        for i, (x, v) in enumerate(zip(xs, fv))
    ]
    _write_csv(out / "curves.csv", header, rows)
    return partial


def _moments(config: ExperimentConfig, out: Path) -> bool:
    xs = config.grid.array()
    rows: list[list[str]] = []
    for n in config.n_list:
        pair = config.schedule.pair_at(n)
        for x in xs:
            x = float(x)
            m1 = moments_closed(pair, 1, n, x)
            m2 = moments_closed(pair, 2, n, x)
            rows.append(
                [
                    str(n),
                    _fmt(x),
                    _fmt(moments_closed(pair, 0, n, x)),
                    _fmt(m1),
                    _fmt(m2),
                    _fmt(central_moment(pair, 1, n, x)),
                    _fmt(central_moment(pair, 2, n, x)),
                ]
            )
    _write_csv(out / "moments.csv", ["n", "x", "M0", "M1", "M2", "mu1", "mu2"], rows)
    return False


def _convergence(config: ExperimentConfig, out: Path) -> bool:
    rows = convergence_run(
        config.schedule, config.function, config.n_list, config.grid, config.policy
    )
    table = [
        [
            str(r.n),
            _fmt(r.p_n),
            _fmt(r.q_n),
            _fmt(r.sup_error),
            _fmt(r.weighted_error),
            _fmt(r.mu2_max),
        ]
        for r in rows
    ]
    _write_csv(
        out / "convergence.csv",
        ["n", "p_n", "q_n", "sup_error", "weighted_error", "mu2_max"],
        table,
    )
    return any(not r.ok for r in rows)


def _bound_report(config: ExperimentConfig, out: Path) -> bool:
    kappa = config.kappa
    cf = config.function.require_growth_bound()
    L = 6.0 * cf * (1.0 + kappa**2) * (1.0 + kappa + kappa**2)
    rows: list[list[str]] = []
    partial = False
    for n in config.n_list:
        pair = config.schedule.pair_at(n)
        try:
            bound = interval_rate_bound(pair, n, config.function, kappa, config.grid)
            mu2_max = max(
                central_moment(pair, 2, n, float(x))
                for x in config.grid.array()
                if x <= kappa
            )
            rows.append([str(n), _fmt(kappa), _fmt(L), _fmt(mu2_max), _fmt(bound)])
        except DomainError:
            rows.append([str(n), _fmt(kappa), _fmt(L), "NA", "NA"])
            partial = True
    _write_csv(out / "bound_report.csv", ["n", "kappa", "L", "mu2_max", "rate_bound"], rows)
    return partial


_PLOT_SCRIPT = """\
#!/usr/bin/env python3
\"\"\"Plot the operator curves emitted alongside this script.\"\"\"
import csv
from pathlib import Path

import matplotlib.pyplot as plt

rows = list(csv.DictReader(open(Path(__file__).parent / "curves.csv")))
xs = [float(r["x"]) for r in rows]
plt.figure(figsize=(8, 5))
plt.plot(xs, [float(r["f"]) for r in rows], "k-", lw=2.0, label="f")
for key in rows[0]:
    if key.startswith("D_n="):
        ys = [float(r[key]) if r[key] != "NA" else float("nan") for r in rows]
        plt.plot(xs, ys, lw=1.2, label=key)
plt.xlabel("x")
plt.legend()
plt.tight_layout()
plt.savefig(Path(__file__).parent / "curves.png", dpi=150)
"""


def run_experiment(config: ExperimentConfig, out_dir: Optional[str | Path] = None) -> int:
    """Run all requested outputs; returns the process exit code (0/1/2)."""
    out = Path(out_dir) if out_dir is not None else Path(config.output_path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create output directory {out}: {exc}", file=sys.stderr)
        return 1
    partial = False
    try:
        if "curves" in config.outputs:
            partial |= _curves(config, out)
        if "moments" in config.outputs:
            partial |= _moments(config, out)
        if "convergence" in config.outputs:
            partial |= _convergence(config, out)
        if "bound-report" in config.outputs:
            partial |= _bound_report(config, out)
        if config.plot_script and "curves" in config.outputs:
            with open(out / "plot_curves.py", "w", encoding="utf-8", newline="\n") as handle:
                handle.write(_PLOT_SCRIPT)
    except OSError as exc:
        print(f"error: writing outputs failed: {exc}", file=sys.stderr)
        return 1
    return 2 if partial else 0


# ---------------------------------------------------------------------------
# Command line interface.
# ---------------------------------------------------------------------------


def _builtin_config_path(name: str) -> Path:
    ref = resources.files("pqbaskakov") / "configs" / f"{name}.cfg"
    with resources.as_file(ref) as concrete:
        return Path(concrete)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="pqbaskakov",
        description="Evaluate (p,q)-Baskakov-Beta operators and run convergence experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run an experiment config")
    run_p.add_argument("config", help="path to the experiment config file")
    run_p.add_argument("--out", default=None, help="output directory (overrides config)")
    run_p.add_argument(
        "--override",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        help="override a config value (repeatable)",
    )

    val_p = sub.add_parser("validate", help="validate a config and echo it")
    val_p.add_argument("config")
    val_p.add_argument("--override", action="append", default=[], metavar="SECTION.KEY=VALUE")

    fig_p = sub.add_parser("figures", help="reproduce the built-in demo figures")
    fig_p.add_argument(
        "name",
        nargs="?",
        default=None,
        choices=["figure1", "figure2"],
        help="which figure to reproduce (default: both)",
    )
    fig_p.add_argument("--out", default=None, help="output directory")

    args = parser.parse_args(argv)

    if args.command in ("run", "validate"):
        try:
            config = validate_config(args.config, args.override)
        except ConfigurationError as exc:
            print("invalid configuration:", file=sys.stderr)
            for message in exc.messages:
                print(f"  - {message}", file=sys.stderr)
            return 1
        if args.command == "validate":
            print(f"config OK: {args.config}")
            print(f"  schedule      = {config.schedule}")
            print(f"  function      = {config.function}")
            print(f"  n_list        = {list(config.n_list)}")
            print(f"  grid          = [{config.grid.start}, {config.grid.stop}] "
                  f"x {config.grid.points}")
            print(f"  outputs       = {list(config.outputs)}")
            print(f"  output_path   = {config.output_path}")
            return 0
        return run_experiment(config, args.out)

    # figures
    names = [args.name] if args.name else ["figure1", "figure2"]
    code = 0
    for name in names:
        config = validate_config(_builtin_config_path(name))
        out = Path(args.out) / name if args.out else Path(config.output_path)
        status = run_experiment(config, out)
        print(f"{name}: wrote {out} (exit {status})")
        code = max(code, status)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
