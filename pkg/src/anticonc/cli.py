"""Command-line surface: profiling, lemma verification, frontier sweeps,
and the block construction, with deterministic JSON/CSV output.

Every command is a pure function of its flags plus the seed: rationals are
serialized as "num/den" strings, floats with shortest-repr JSON, CSV floats
with 12 significant digits, and timing is withheld unless requested so that
re-runs are byte-identical.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import __version__
from .errors import (
    BadParams,
    BudgetExceeded,
    CapacityExceeded,
    InvariantViolated,
    TooLarge,
    Undecidable,
)
from .frontier import (
    DEFAULT_SWEEP_BUDGET,
    SweepConfig,
    audit,
    delta_over_eps,
    delta_over_sqrt_eps,
    pareto_subset,
    sweep_points,
)
from .lemmas import (
    Verdict,
    block_construction,
    block_theory,
    check_initial_bound,
    check_sup_ratio_bound,
    max_ratio_bound,
    second_moment_identity,
    tail_check,
    theorem_check,
)
from .numerics import DEFAULT_MAX_BITS
from .subsetsum import (
    DEFAULT_DP_CAPACITY,
    DEFAULT_MITM_CAP,
    DEFAULT_NAIVE_CAP,
    concentration,
    fiber,
    levy,
    profile,
    unique_preimages,
)
from .sumsets import (
    DEFAULT_TUPLE_BUDGET,
    check_injectivity,
    density_ratio_max,
    partition_total,
)

ENV_PRECISION = "ANTICONC_PRECISION_BITS"

VERIFY_NAMES = (
    "injectivity",
    "density",
    "partition",
    "moment",
    "second-moment",
    "tail",
    "max-ratio",
    "supratio",
    "theorem",
)

CSV_HEADER = (
    "n,weights,rho_num,rho_den,range_size,"
    "epsilon,delta,delta_over_eps,delta_over_sqrt_eps"
)


@dataclass
class RunConfig:
    seed: int = 0
    precision_cap_bits: int = DEFAULT_MAX_BITS
    naive_cap: int = DEFAULT_NAIVE_CAP
    dp_cap: int = DEFAULT_DP_CAPACITY
    mitm_cap: int = DEFAULT_MITM_CAP
    enum_budget: Optional[int] = None  # None: per-operation defaults
    output_format: str = "json"

    def validate(self):
        for name in ("precision_cap_bits", "naive_cap", "dp_cap", "mitm_cap"):
            if getattr(self, name) < 1:
                raise BadParams(f"{name} must be positive")
        if self.enum_budget is not None and self.enum_budget < 1:
            raise BadParams("enum_budget must be positive")
        if self.output_format not in ("json", "csv", "text"):
            raise BadParams(f"unknown format {self.output_format!r}")


_CONFIG_KEYS = {
    "seed": int,
    "precision_bits": int,
    "naive_cap": int,
    "dp_cap": int,
    "mitm_cap": int,
    "enum_budget": int,
    "format": str,
}


def load_config_file(path: str) -> dict:
    """Read a key=value config file; unknown keys are rejected."""
    out = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise BadParams(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise BadParams(f"{path}:{lineno}: expected key=value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _CONFIG_KEYS:
            raise BadParams(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = _CONFIG_KEYS[key](value)
        except ValueError as exc:
            raise BadParams(f"{path}:{lineno}: bad value for {key}") from exc
    return out


def build_config(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        file_vals = load_config_file(args.config)
        if "seed" in file_vals:
            cfg.seed = file_vals["seed"]
        if "precision_bits" in file_vals:
            cfg.precision_cap_bits = file_vals["precision_bits"]
        if "naive_cap" in file_vals:
            cfg.naive_cap = file_vals["naive_cap"]
        if "dp_cap" in file_vals:
            cfg.dp_cap = file_vals["dp_cap"]
        if "mitm_cap" in file_vals:
            cfg.mitm_cap = file_vals["mitm_cap"]
        if "enum_budget" in file_vals:
            cfg.enum_budget = file_vals["enum_budget"]
        if "format" in file_vals:
            cfg.output_format = file_vals["format"]
    env_bits = os.environ.get(ENV_PRECISION)
    if env_bits is not None:
        try:
            cfg.precision_cap_bits = int(env_bits)
        except ValueError as exc:
            raise BadParams(f"{ENV_PRECISION} must be an integer") from exc
    for attr, flag in (
        ("seed", "seed"),
        ("precision_cap_bits", "precision_bits"),
        ("naive_cap", "naive_cap"),
        ("dp_cap", "dp_cap"),
        ("mitm_cap", "mitm_cap"),
        ("enum_budget", "enum_budget"),
        ("output_format", "format"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            setattr(cfg, attr, value)
    cfg.validate()
    return cfg


def parse_weights(text: str) -> tuple:
    """Comma-separated integers or rationals; rationals are cleared by the
    denominator lcm, which preserves the profile's coincidence pattern."""
    parts = [p.strip() for p in text.split(",")]
    if not parts or any(not p for p in parts):
        raise BadParams(f"bad weights {text!r}")
    try:
        fracs = [Fraction(p) for p in parts]
    except (ValueError, ZeroDivisionError) as exc:
        raise BadParams(f"bad weights {text!r}: {exc}") from exc
    scale = math.lcm(*(f.denominator for f in fracs))
    return tuple(int(f * scale) for f in fracs), scale


def rat(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def f12(x: float) -> str:
    return f"{x:.12g}"


def csv_rows(points) -> list:
    rows = [CSV_HEADER]
    for p in points:
        rows.append(
            ",".join(
                (
                    str(len(p.weights)),
                    ";".join(str(x) for x in p.weights),
                    str(p.rho.numerator),
                    str(p.rho.denominator),
                    str(p.range_size),
                    f12(p.epsilon),
                    f12(p.delta),
                    f12(delta_over_eps(p)),
                    f12(delta_over_sqrt_eps(p)),
                )
            )
        )
    return rows


def _flatten(prefix: str, value, lines: list):
    if isinstance(value, dict):
        for key in sorted(value):
            _flatten(f"{prefix}.{key}" if prefix else str(key), value[key], lines)
    elif isinstance(value, (list, tuple)):
        rendered = json.dumps(value)
        lines.append(f"{prefix}: {rendered}")
    else:
        lines.append(f"{prefix}: {value}")


def emit(record: dict, cfg: RunConfig, stream=None) -> None:
    stream = stream or sys.stdout
    if cfg.output_format == "text":
        lines: list = []
        _flatten("", record, lines)
        stream.write("\n".join(lines) + "\n")
    else:
        stream.write(json.dumps(record, sort_keys=True, indent=2) + "\n")


def make_record(command: str, parameters: dict, outputs: dict, cfg: RunConfig,
                timing) -> dict:
    return {
        "command": command,
        "parameters": parameters,
        "outputs": outputs,
        "seed": cfg.seed,
        "version": __version__,
        "timing": timing,
    }


def _profile_kwargs(cfg: RunConfig) -> dict:
    return {
        "naive_cap": cfg.naive_cap,
        "dp_capacity": cfg.dp_cap,
        "mitm_cap": cfg.mitm_cap,
    }


def _witness_fiber(w, cfg: RunConfig):
    rep = concentration(profile(w, **_profile_kwargs(cfg)))
    return rep, fiber(w, rep.tau, cap=cfg.naive_cap)


def cmd_profile(args, cfg: RunConfig) -> tuple:
    w, scale = parse_weights(args.weights)
    p = profile(w, args.algorithm, **_profile_kwargs(cfg))
    rep = concentration(p)
    outputs = {
        "rho": rat(rep.rho),
        "tau": rep.tau,
        "range_size": rep.range_size,
        "epsilon": rep.epsilon,
        "delta": rep.delta,
    }
    if not args.omit_profile:
        outputs["profile"] = [[s, c] for s, c in p.items()]
    if args.levy_radius is not None:
        try:
            radius = Fraction(args.levy_radius)
        except (ValueError, ZeroDivisionError) as exc:
            raise BadParams(f"bad radius {args.levy_radius!r}") from exc
        tau, prob = levy(p, radius)
        outputs["levy"] = {"radius": rat(radius), "tau": rat(tau), "prob": rat(prob)}
    parameters = {
        "weights": args.weights,
        "scaled_weights": list(w),
        "scale": scale,
        "algorithm": args.algorithm,
        "config": _config_params(cfg),
    }
    return make_record("profile", parameters, outputs, cfg, None), 0


def _config_params(cfg: RunConfig) -> dict:
    return {
        "precision_cap_bits": cfg.precision_cap_bits,
        "naive_cap": cfg.naive_cap,
        "dp_cap": cfg.dp_cap,
        "mitm_cap": cfg.mitm_cap,
        "enum_budget": cfg.enum_budget,
    }


def _require(args, *names) -> None:
    for name in names:
        if getattr(args, name) is None:
            raise BadParams(f"--{name.replace('_', '-')} is required")


def cmd_verify(args, cfg: RunConfig) -> tuple:
    name = args.name
    parameters: dict = {"name": name, "config": _config_params(cfg)}
    outputs: dict = {}
    code = 0
    sumset_budget = cfg.enum_budget or DEFAULT_TUPLE_BUDGET
    if name == "injectivity":
        _require(args, "weights", "k")
        w, _ = parse_weights(args.weights)
        A = unique_preimages(w, cap=cfg.naive_cap)
        rep, B = _witness_fiber(w, cfg)
        res = check_injectivity(A, B, args.k, budget=sumset_budget)
        parameters.update(weights=args.weights, k=args.k)
        outputs.update(
            tau=rep.tau,
            a_size=len(A),
            b_size=len(B),
            holds=res.holds,
            witness=res.witness,
        )
        code = 0 if res.holds else 1
    elif name == "density":
        _require(args, "weights", "k")
        w, _ = parse_weights(args.weights)
        if args.tau is None:
            rep, B = _witness_fiber(w, cfg)
            tau = rep.tau
        else:
            tau = args.tau
            B = fiber(w, tau, cap=cfg.naive_cap)
        if len(B) == 0:
            raise BadParams(f"fiber at tau={tau} is empty")
        ratio = density_ratio_max(B, args.k, budget=sumset_budget)
        bound = Fraction(1 << B.n, len(B)) ** args.k
        holds = ratio <= bound
        parameters.update(weights=args.weights, k=args.k, tau=tau)
        outputs.update(
            b_size=len(B), ratio=rat(ratio), bound=rat(bound), holds=holds
        )
        code = 0 if holds else 1
    elif name == "partition":
        _require(args, "weights", "k")
        w, _ = parse_weights(args.weights)
        A = unique_preimages(w, cap=cfg.naive_cap)
        if args.tau is None:
            rep, B = _witness_fiber(w, cfg)
            tau = rep.tau
        else:
            tau = args.tau
            B = fiber(w, tau, cap=cfg.naive_cap)
        if len(B) == 0:
            raise BadParams(f"fiber at tau={tau} is empty")
        total = partition_total(A, B, args.k, budget=sumset_budget)
        holds = total == 1
        parameters.update(weights=args.weights, k=args.k, tau=tau)
        outputs.update(total=rat(total), holds=holds)
        code = 0 if holds else 1
    elif name == "moment":
        _require(args, "k", "s")
        rec = check_initial_bound(
            args.k, args.s, max_bits=cfg.precision_cap_bits
        )
        parameters.update(k=args.k, s=args.s)
        outputs.update(
            lhs=rat(rec.lhs),
            rhs=str(rec.rhs),
            verdict=rec.verdict.value,
            in_hypothesis=rec.in_hypothesis,
        )
        code = 1 if rec.in_hypothesis and rec.verdict is not Verdict.HOLDS else 0
    elif name == "second-moment":
        _require(args, "k")
        rec = second_moment_identity(args.k)
        parameters.update(k=args.k)
        outputs.update(
            lhs=rat(rec.lhs), mid=rat(rec.mid), verdict=rec.verdict.value
        )
        code = 0 if rec.verdict is Verdict.HOLDS else 1
    elif name == "tail":
        _require(args, "k")
        verdict = tail_check(args.k)
        parameters.update(k=args.k)
        outputs.update(verdict=verdict.value)
        code = 0 if verdict is Verdict.HOLDS else 1
    elif name == "max-ratio":
        _require(args, "k")
        verdict = max_ratio_bound(args.k)
        parameters.update(k=args.k)
        outputs.update(verdict=verdict.value)
        code = 0 if verdict is Verdict.HOLDS else 1
    elif name == "supratio":
        _require(args, "weights", "k")
        w, _ = parse_weights(args.weights)
        A = unique_preimages(w, cap=cfg.naive_cap)
        rep = check_sup_ratio_bound(
            A,
            args.k,
            args.c,
            budget=cfg.enum_budget or 10**7,
            samples=args.samples,
            seed=cfg.seed,
        )
        parameters.update(
            weights=args.weights, k=args.k, c=args.c, samples=args.samples
        )
        outputs.update(
            n=rep.n,
            a_size=len(A),
            delta=rep.delta,
            method=rep.method,
            value=rep.value,
            std_error=rep.std_error,
            bound=rep.bound,
            margin=rep.margin,
            holds=rep.holds,
        )
        if rep.exact is not None:
            outputs["exact"] = rat(rep.exact)
        code = 0  # reported, never asserted: the constant is a free parameter
    elif name == "theorem":
        _require(args, "weights")
        w, _ = parse_weights(args.weights)
        rep = concentration(profile(w, **_profile_kwargs(cfg)))
        tc = theorem_check(rep, args.c)
        parameters.update(weights=args.weights, c=args.c)
        outputs.update(
            rho=rat(rep.rho),
            range_size=rep.range_size,
            epsilon=tc.epsilon,
            delta=tc.delta,
            bound=tc.bound,
            holds=tc.holds,
        )
        code = 0  # reported
    else:
        raise BadParams(f"unknown verify target {name!r}")
    return make_record("verify", parameters, outputs, cfg, None), code


def cmd_frontier(args, cfg: RunConfig) -> tuple:
    sweep_cfg = SweepConfig(
        n=args.n,
        max_weight=args.max_weight,
        workers=args.workers,
        output=args.output,
        budget=cfg.enum_budget or DEFAULT_SWEEP_BUDGET,
    )
    points = sweep_points(sweep_cfg)
    frontier = pareto_subset(points)
    report = audit(points, args.c)
    csv_text = "\n".join(csv_rows(points)) + "\n"
    digest = hashlib.sha256(csv_text.encode("ascii")).hexdigest()
    try:
        with open(args.output, "w", encoding="ascii", newline="\n") as fh:
            fh.write(csv_text)
    except OSError as exc:
        raise BadParams(f"cannot write {args.output}: {exc}") from exc
    plot_path = None
    if args.plot_data:
        plot_lines = ["# epsilon delta"]
        plot_lines += [f"{f12(p.epsilon)} {f12(p.delta)}" for p in points]
        try:
            with open(args.plot_data, "w", encoding="ascii", newline="\n") as fh:
                fh.write("\n".join(plot_lines) + "\n")
        except OSError as exc:
            raise BadParams(f"cannot write {args.plot_data}: {exc}") from exc
        plot_path = args.plot_data
    outputs = {
        "candidates": len(points),
        "frontier_size": len(frontier),
        "frontier_weights": [list(p.weights) for p in frontier],
        "max_delta_over_eps": report.max_delta_over_eps,
        "argmax_delta_over_eps": list(report.argmax_delta_over_eps),
        "max_delta_over_sqrt_eps": report.max_delta_over_sqrt_eps,
        "argmax_delta_over_sqrt_eps": list(report.argmax_delta_over_sqrt_eps),
        "exceeding_2eps": [list(w) for w in report.exceeding_2eps],
        "within_c": report.within_c,
        "csv_path": args.output,
        "csv_sha256": digest,
        "plot_path": plot_path,
    }
    parameters = {
        "n": args.n,
        "max_weight": args.max_weight,
        "workers": args.workers,
        "c": args.c,
        "config": _config_params(cfg),
    }
    record = make_record("frontier", parameters, outputs, cfg, None)
    if cfg.output_format == "csv":
        sys.stdout.write(csv_text)
        return None, 0
    return record, 0


def cmd_construct(args, cfg: RunConfig) -> tuple:
    params = block_construction(args.n, args.k)
    theory = block_theory(args.n, args.k)
    rep = concentration(profile(params.weights, **_profile_kwargs(cfg)))
    match = rep.rho == theory.rho and rep.range_size == theory.range_size
    halfmax = math.comb(args.k, args.k // 2)
    ratio_theory = math.log(args.k + 1) / (
        args.k * math.log(2) - math.log(halfmax)
    )
    outputs = {
        "weights": list(params.weights),
        "predicted_rho": rat(theory.rho),
        "predicted_range_size": theory.range_size,
        "measured_rho": rat(rep.rho),
        "measured_range_size": rep.range_size,
        "match": match,
        "delta_over_eps_theory": ratio_theory,
        "epsilon": rep.epsilon,
        "delta": rep.delta,
    }
    parameters = {
        "shape": "block",
        "n": args.n,
        "k": args.k,
        "config": _config_params(cfg),
    }
    return make_record("construct", parameters, outputs, cfg, None), 0 if match else 1


def _add_run_options(parser, *, suppress: bool) -> None:
    # attached to the root parser with real defaults and to every subparser
    # with SUPPRESS, so the flags work on either side of the subcommand
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--seed", type=int, default=d, help="64-bit run seed")
    parser.add_argument(
        "--precision-bits",
        type=int,
        default=d,
        help=f"interval precision cap (env {ENV_PRECISION})",
    )
    parser.add_argument("--naive-cap", type=int, default=d)
    parser.add_argument("--dp-cap", type=int, default=d)
    parser.add_argument("--mitm-cap", type=int, default=d)
    parser.add_argument("--enum-budget", type=int, default=d)
    parser.add_argument("--config", default=d, help="key=value config file")
    parser.add_argument("--format", choices=("json", "csv", "text"), default=d)
    parser.add_argument(
        "--timing",
        action="store_true",
        default=argparse.SUPPRESS if suppress else False,
        help="include elapsed time (breaks byte-identical re-runs)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anticonc",
        description=(
            "Exact subset-sum concentration and range computations, "
            "iterated sumsets, and verified binomial-moment inequalities."
        ),
    )
    _add_run_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p_profile = sub.add_parser("profile", help="exact subset-sum profile")
    p_profile.add_argument("weights", help="comma-separated weights")
    p_profile.add_argument(
        "--algorithm", choices=("auto", "naive", "dp", "mitm"), default="auto"
    )
    p_profile.add_argument("--levy-radius", default=None)
    p_profile.add_argument("--omit-profile", action="store_true")
    _add_run_options(p_profile, suppress=True)

    p_verify = sub.add_parser("verify", help="check one statement")
    p_verify.add_argument("name", choices=VERIFY_NAMES)
    p_verify.add_argument("--weights", default=None)
    p_verify.add_argument("--k", type=int, default=None)
    p_verify.add_argument("--s", type=int, default=None)
    p_verify.add_argument("--tau", type=int, default=None)
    p_verify.add_argument("--c", type=float, default=20.0)
    p_verify.add_argument("--samples", type=int, default=10**5)
    _add_run_options(p_verify, suppress=True)

    p_frontier = sub.add_parser("frontier", help="canonical sweep to CSV")
    p_frontier.add_argument("--n", type=int, required=True)
    p_frontier.add_argument("--max-weight", type=int, required=True)
    p_frontier.add_argument("--workers", type=int, default=1)
    p_frontier.add_argument("--output", default="frontier.csv")
    p_frontier.add_argument("--plot-data", default=None)
    p_frontier.add_argument("--c", type=float, default=20.0)
    _add_run_options(p_frontier, suppress=True)

    p_construct = sub.add_parser("construct", help="named constructions")
    p_construct.add_argument("shape", choices=("block",))
    p_construct.add_argument("--n", type=int, required=True)
    p_construct.add_argument("--k", type=int, required=True)
    _add_run_options(p_construct, suppress=True)
    return parser


_COMMANDS = {
    "profile": cmd_profile,
    "verify": cmd_verify,
    "frontier": cmd_frontier,
    "construct": cmd_construct,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    try:
        cfg = build_config(args)
        if cfg.output_format == "csv" and args.command != "frontier":
            raise BadParams("csv format applies to the frontier command only")
        record, code = _COMMANDS[args.command](args, cfg)
    except BadParams as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (TooLarge, CapacityExceeded, BudgetExceeded, Undecidable) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InvariantViolated as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return 1
    if record is not None:
        if args.timing:
            record["timing"] = {
                "elapsed_s": round(time.monotonic() - started, 6)
            }
        emit(record, cfg)
    return code
