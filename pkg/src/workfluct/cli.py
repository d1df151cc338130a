"""Command-line entry point: ``workfluct {run,scan-s,verify,witness}``.

Exit codes: 0 success, 2 invalid configuration or input, 3 numerical
failure (including failed verification batches). Errors print one line on
stderr of the form ``workfluct: exit=<code> error=<Type> msg=<text>``.

Every command computes all of its outputs in memory first, then writes them
through temporary files renamed into place, so a failing run leaves no
partial files behind.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import contextuality as ctx
from .core import ThermalConfig, gibbs_state, validate_density
from .errors import NumericalError, ValidationError
from .fluctuation import SUITES, allahverdyan_check, average_work_check, jarzynski_check
from .instances import random_projector, rng_for
from .pointer import PointerConfig, closed_form_pointer_mean, postselected_pointer_mean
from .serialize import (
    csv_rows,
    decode_matrix,
    distribution_to_csv,
    distribution_to_json,
    dumps,
    encode_matrix,
    protocol_from_json,
    report_to_json,
)
from .work import distribution

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class ConfigError(ValidationError):
    pass


# ------------------------------------------------------------------ config

def parse_s_values(text) -> list[float]:
    """``"0.1,1,10"`` or ``"logspace(a,b,n)"`` (``n`` geometric points from ``a`` to ``b``)."""
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    if isinstance(text, (int, float)):
        return [float(text)]
    m = re.fullmatch(r"\s*logspace\(\s*([^,]+),\s*([^,]+),\s*(\d+)\s*\)\s*", str(text))
    try:
        if m:
            a, b, n = float(m.group(1)), float(m.group(2)), int(m.group(3))
            return np.geomspace(a, b, n).tolist()
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse s values {text!r}") from exc


def load_config(args) -> dict:
    cfg: dict = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed JSON in {args.config}: line {exc.lineno}") from exc
        if not isinstance(cfg, dict):
            raise ConfigError("config must be a JSON object")
    # flags override config fields
    if args.seed is not None:
        cfg["seed"] = args.seed
    if getattr(args, "kinds", None):
        cfg["kinds"] = [k.strip() for k in args.kinds.split(",") if k.strip()]
    if getattr(args, "s", None):
        cfg["s"] = args.s
    if getattr(args, "tol", None) is not None:
        cfg["tol"] = args.tol
    if getattr(args, "instances", None) is not None:
        cfg["instances"] = args.instances
    seed = cfg.setdefault("seed", 0)
    if not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise ConfigError(f"seed must be a 64-bit unsigned integer, got {seed!r}")
    return cfg


def config_digest(cfg: dict) -> str:
    return hashlib.sha256(json.dumps(cfg, sort_keys=True).encode()).hexdigest()


def _require(cfg, key):
    if key not in cfg:
        raise ConfigError(f"config is missing '{key}'")
    return cfg[key]


def _protocol(cfg):
    return protocol_from_json(_require(cfg, "protocol"))


def _beta(cfg):
    beta = cfg.get("beta")
    state = cfg.get("state")
    if beta is None and isinstance(state, dict) and "thermal" in state:
        beta = state["thermal"]
    return None if beta is None else ThermalConfig(float(beta))


def _state(cfg, p):
    state = _require(cfg, "state")
    if isinstance(state, dict) and "thermal" in state:
        return gibbs_state(p.h_initial, ThermalConfig(float(state["thermal"])))
    if state == "thermal":
        t = _beta(cfg)
        if t is None:
            raise ConfigError("thermal state needs 'beta'")
        return gibbs_state(p.h_initial, t)
    return validate_density(decode_matrix(state))


def _witness_pair(cfg, p):
    pair = _require(cfg, "witness")
    try:
        i, j = int(pair["i"]), int(pair["j"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError("'witness' must be {\"i\": int, \"j\": int}") from exc
    if not (0 <= i < p.dim and 0 <= j < p.dim):
        raise ConfigError(f"witness pair ({i}, {j}) out of range for d={p.dim}")
    return p.initial_projector(i), p.postselection(j)


# ------------------------------------------------------------------ output

class Outputs:
    def __init__(self, cfg: dict):
        self.files: dict[str, str] = {}
        self.meta = {"config_digest": config_digest(cfg), "seed": cfg["seed"]}

    def csv(self, name: str, body: str):
        head = f"# config_digest={self.meta['config_digest']} seed={self.meta['seed']}\n"
        self.files[name] = head + body

    def json(self, name: str, obj: dict):
        self.files[name] = dumps({"meta": self.meta, **obj})

    def commit(self, out_dir: Path):
        out_dir.mkdir(parents=True, exist_ok=True)
        staged = []
        try:
            for name, text in self.files.items():
                fd, tmp = tempfile.mkstemp(dir=out_dir, prefix=f".{name}.", suffix=".tmp")
                with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                    fh.write(text)
                staged.append((tmp, out_dir / name))
            for tmp, dest in staged:
                os.replace(tmp, dest)
        finally:
            for tmp, _ in staged:
                if os.path.exists(tmp):
                    os.unlink(tmp)


# ------------------------------------------------------------------ commands

def cmd_run(cfg: dict, out: Outputs) -> int:
    p = _protocol(cfg)
    rho = _state(cfg, p)
    kinds = [k.upper() for k in cfg.get("kinds", ["tpm", "weak"])]
    s_values = parse_s_values(cfg.get("s", []))
    for kind in kinds:
        if kind == "FINITE_S":
            if not s_values:
                raise ConfigError("finite_s requested without s values")
            for s in s_values:
                d = distribution(kind, rho, p, s)
                stem = f"finite_s_s={s!r}"
                out.csv(stem + ".csv", distribution_to_csv(d))
                out.json(stem + ".json", distribution_to_json(d))
        else:
            d = distribution(kind, rho, p)
            out.csv(kind.lower() + ".csv", distribution_to_csv(d))
            out.json(kind.lower() + ".json", distribution_to_json(d))
    t = _beta(cfg)
    if t is not None:
        tolerance = float(cfg.get("tol", 1e-10))
        jar = jarzynski_check(rho, p, t, tolerance)
        ahv = allahverdyan_check(rho, p, t, tolerance)
        lhs, rhs, ok = average_work_check(rho, p, "WEAK", tolerance)
        out.json("ft_report.json", {
            "beta": t.beta,
            "jarzynski": report_to_json(jar),
            "allahverdyan": report_to_json(ahv),
            "average_work_weak": {"lhs": lhs, "rhs": rhs, "passed": ok},
        })
    return EXIT_OK


def cmd_scan_s(cfg: dict, out: Outputs, oracle: bool = True) -> int:
    p = _protocol(cfg)
    rho = _state(cfg, p)
    E, Pi = _witness_pair(cfg, p)
    s_values = parse_s_values(cfg.get("s", "logspace(0.1,1000,50)"))
    rows = []
    for s in s_values:
        rep = ctx.lemma1_report(rho, E, Pi, s)
        q, mean = closed_form_pointer_mean(rho, E, Pi, s)
        row = dict(s=float(s), p_d=rep.p_d, p_minus=rep.p_minus, gap=rep.gap,
                   condition_2c=rep.condition_2c, qj_mean_x_closed=q * mean)
        if oracle:
            g = postselected_pointer_mean(rho, E, Pi, PointerConfig.default(s))
            row["qj_mean_x_grid"] = g.q_j * g.mean_x
        rows.append(row)
    header = ["s", "p_d", "p_minus", "gap", "condition_2c", "qj_mean_x_closed"]
    if oracle:
        header.append("qj_mean_x_grid")
    out.csv("scan_s.csv", csv_rows(header, rows))
    return EXIT_OK


def cmd_verify(cfg: dict, out: Outputs) -> int:
    n = int(cfg.get("instances", 200))
    tolerance = float(cfg.get("tol", 1e-10))
    names = cfg.get("suites", list(SUITES))
    rows, summary = [], []
    for name in names:
        if name not in SUITES:
            raise ConfigError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
        batch = SUITES[name](n, cfg["seed"], tolerance)
        rows += batch
        summary.append(dict(
            suite=f"{name}-summary", index=len(batch), seed=cfg["seed"], d="", beta="",
            lhs="", rhs="",
            residual=max(abs(r["residual"]) for r in batch),
            rel_residual=max(r["rel_residual"] for r in batch),
            passed=all(r["passed"] for r in batch)))
    header = ["suite", "index", "seed", "d", "beta", "lhs", "rhs", "residual", "rel_residual", "passed"]
    out.csv("verify.csv", csv_rows(header, rows + summary))
    return EXIT_OK if all(r["passed"] for r in summary) else EXIT_NUMERIC


def _projector_pair(cfg):
    if "e" in cfg and "pi" in cfg:
        return decode_matrix(cfg["e"]), decode_matrix(cfg["pi"])
    if "random_pair" in cfg:
        spec = cfg["random_pair"]
        d = int(spec.get("d", 2))
        rng = rng_for(cfg["seed"], 4)
        return (random_projector(d, rng, int(spec.get("rank_e", 1))),
                random_projector(d, rng, int(spec.get("rank_pi", 1))))
    p = _protocol(cfg)
    return _witness_pair(cfg, p)


def cmd_witness(cfg: dict, out: Outputs) -> int:
    E, Pi = _projector_pair(cfg)
    rho, wmin = ctx.find_negative_state(E, Pi)
    result = {"witness_min": wmin, "state": encode_matrix(rho.matrix),
              "e": encode_matrix(E), "pi": encode_matrix(Pi)}
    thr = ctx.s_threshold(rho, E, Pi)
    if thr is None:
        result.update(status="no witness", s_star=None)
    else:
        result.update(
            status="witness",
            s_star=thr.s_star,
            threshold=report_to_json(thr),
            report_at_s_star=report_to_json(ctx.lemma1_report(rho, E, Pi, thr.s_star)),
            report_at_10s_star=report_to_json(ctx.lemma1_report(rho, E, Pi, 10 * thr.s_star)),
        )
    out.json("witness.json", result)
    return EXIT_OK


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="workfluct", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, config_required=True):
        sp.add_argument("--config", required=config_required, help="JSON run configuration")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--out", default="workfluct-out", help="output directory")
        sp.add_argument("--tol", type=float, default=None)

    sp = sub.add_parser("run", help="work distributions and fluctuation-theorem reports")
    common(sp)
    sp.add_argument("--kinds", help="comma list of tpm,weak,finite_s")
    sp.add_argument("--s", help="pointer spreads: 'a,b,c' or 'logspace(a,b,n)'")

    sp = sub.add_parser("scan-s", help="contextuality quantities over pointer spreads")
    common(sp)
    sp.add_argument("--s", help="pointer spreads: 'a,b,c' or 'logspace(a,b,n)'")
    sp.add_argument("--no-oracle", action="store_true", help="skip the grid simulation column")

    sp = sub.add_parser("verify", help="seeded random-instance identity suites")
    common(sp, config_required=False)
    sp.add_argument("--instances", type=int, default=None)

    sp = sub.add_parser("witness", help="most negative witness state and threshold spread")
    common(sp)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        out = Outputs(cfg)
        if args.command == "run":
            code = cmd_run(cfg, out)
        elif args.command == "scan-s":
            code = cmd_scan_s(cfg, out, oracle=not args.no_oracle)
        elif args.command == "verify":
            code = cmd_verify(cfg, out)
        else:
            code = cmd_witness(cfg, out)
        out.commit(Path(args.out))
        return code
    except (ValidationError, KeyError, TypeError) as exc:
        return _fail(EXIT_CONFIG, exc)
    except (NumericalError, np.linalg.LinAlgError, FloatingPointError) as exc:
        return _fail(EXIT_NUMERIC, exc)


def _fail(code: int, exc: Exception) -> int:
    msg = str(exc).replace("\n", " ")
    print(f"workfluct: exit={code} error={type(exc).__name__} msg={msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
