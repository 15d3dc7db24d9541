"""Command-line driver: verify | weights | sector | export.

Exit status: 0 when every report is clean, 1 when a report has violations,
2 for usage errors (bad flags, level 0, unknown algebra, bad selector).
Defaults may be supplied as a JSON object in the file named by the
TOROIDAL_CONFIG environment variable; command-line flags override it.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import asdict, dataclass, field, fields

from .action import (
    ActionError,
    ToroidalModule,
    verify_intertwiner,
    verify_toroidal_relations,
    weight_space,
)
from .affine import AffineError, AffineModule, verify_affine_relations
from .algebra import AlgebraError, load_algebra, verify_algebra
from .fock import Lattice, verify_fock_identities
from .linear import fmt_scalar, parse_scalar
from .report import Report
from .toroidal import ToroidalWeight

CONFIG_ENV = "TOROIDAL_CONFIG"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SUITES = ("algebra", "affine", "fock", "action")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    algebra: str = "sl2"
    n: int = 2
    level: str = "1"
    weight: list = field(default_factory=list)
    P: str = "0"
    depth: int = 4
    fock_depth: int = 4
    window: int = 2
    sample_depth: int = 3
    output: str | None = None
    format: str = "text"

    def validate(self) -> None:
        if self.n < 2:
            raise UsageError("--n must be >= 2")
        for name in ("depth", "fock_depth", "window", "sample_depth"):
            if getattr(self, name) < 0:
                raise UsageError(f"--{name.replace('_', '-')} must be >= 0")
        try:
            lvl = parse_scalar(str(self.level))
            parse_scalar(str(self.P))
        except (ValueError, ZeroDivisionError):
            raise UsageError("level and P must be exact rationals like 1 or 3/2") from None
        if lvl == 0:
            raise UsageError("level K must be nonzero for the toroidal action")
        if self.format not in ("text", "json"):
            raise UsageError("--format is text or json")


def load_config_defaults() -> dict:
    path = os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read config {path}: {e}") from None
    known = {f.name for f in fields(RunConfig)}
    bad = set(data) - known
    if bad:
        raise UsageError(f"unknown config keys: {sorted(bad)}")
    return data


def build_config(args) -> RunConfig:
    cfg = RunConfig(**load_config_defaults())
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            setattr(cfg, f.name, v)
    if isinstance(cfg.weight, str):
        cfg.weight = _int_list(cfg.weight, "--weight")
    cfg.validate()
    return cfg


def _int_list(s: str, what: str) -> list:
    try:
        return [parse_scalar(x) for x in s.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{what}: expected comma-separated rationals, got {s!r}") from None


def make_module(cfg: RunConfig, depth: int | None = None) -> ToroidalModule:
    try:
        table = load_algebra(cfg.algebra)
    except AlgebraError as e:
        raise UsageError(str(e)) from None
    weight = list(cfg.weight) or [0] * table.rank
    if len(weight) != table.rank:
        raise UsageError(f"--weight needs {table.rank} entries for {table.name}")
    try:
        M = AffineModule(table, tuple(weight), parse_scalar(str(cfg.level)), parse_scalar(str(cfg.P)),
                         cfg.depth if depth is None else depth)
        return ToroidalModule(M, cfg.n)
    except (AffineError, ActionError) as e:
        raise UsageError(str(e)) from None


# -- lattice and weight parsing ----------------------------------------------

_TERM = re.compile(r"^([+-]?\d*)\*?(delta|d)(\d+)$")


def parse_lattice(expr: str, n: int) -> tuple:
    """'0', 'd1', '2d1+d2', '-d1', 'delta1' -> coordinates (delta-part, d-part)."""
    lat = Lattice(n)
    r = lat.r
    coords = [0] * lat.dim
    s = expr.replace(" ", "")
    if s in ("", "0"):
        return tuple(coords)
    for tok in re.findall(r"[+-]?[^+-]+", s):
        m = _TERM.match(tok)
        if not m:
            raise UsageError(f"malformed lattice term {tok!r} in {expr!r}")
        c, kind, i = m.groups()
        c = int(c + "1") if c in ("", "+", "-") else int(c)
        i = int(i)
        if not 1 <= i <= r:
            raise UsageError(f"index {i} out of range 1..{r}")
        coords[(i - 1) + (r if kind == "d" else 0)] += c
    return tuple(coords)


def parse_selector(s: str, rank: int, n: int) -> ToroidalWeight:
    """'h=0;k=0,1;d=0,-2' with h of length rank and k, d of length n."""
    parts = {}
    for chunk in s.split(";"):
        if "=" not in chunk:
            raise UsageError(f"malformed selector chunk {chunk!r}; expected h=..;k=..;d=..")
        key, val = chunk.split("=", 1)
        key = key.strip()
        if key not in ("h", "k", "d") or key in parts:
            raise UsageError(f"malformed selector key {key!r}")
        parts[key] = tuple(_int_list(val, f"selector {key}"))
    if set(parts) != {"h", "k", "d"}:
        raise UsageError("selector needs h, k and d parts")
    if len(parts["h"]) != rank or len(parts["k"]) != n or len(parts["d"]) != n:
        raise UsageError(f"selector lengths must be h:{rank}, k:{n}, d:{n}")
    return ToroidalWeight(parts["h"], parts["k"], parts["d"])


# -- output -------------------------------------------------------------------


def emit(cfg: RunConfig, text: str, payload) -> None:
    out = json.dumps(payload, indent=2, sort_keys=True) if cfg.format == "json" else text
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)


def reports_payload(reports: list) -> dict:
    return {"ok": all(r.ok for r in reports), "reports": [r.to_dict() for r in reports]}


def reports_from_payload(payload: dict) -> list:
    return [Report.from_dict(d) for d in payload["reports"]]


# -- commands -----------------------------------------------------------------


def cmd_verify(cfg: RunConfig, suites) -> int:
    tm = make_module(cfg)
    M = tm.module
    reports = []
    if "algebra" in suites:
        reports.append(verify_algebra(M.table))
    if "affine" in suites:
        reports.append(verify_affine_relations(M, min(cfg.window + 1, 3), M.basis(cfg.depth, 1)))
    if "fock" in suites:
        reports.append(verify_fock_identities(Lattice(cfg.n), cfg.fock_depth))
    if "action" in suites:
        sample = tm.basis(cfg.sample_depth, [tm.lattice.zero()])
        reports.append(verify_toroidal_relations(tm, cfg.window, sample))
    text = "\n".join(r.summary() for r in reports)
    emit(cfg, text, reports_payload(reports))
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def weight_rows(tm: ToroidalModule, selectors, depth_cap: int, fock_cap: int) -> list:
    rows = []
    for w in selectors:
        ws = weight_space(tm, w, depth_cap, fock_cap)
        rows.append({
            "h_weight": [fmt_scalar(x) for x in w.h],
            "k_eigs": [fmt_scalar(x) for x in w.k],
            "d_eigs": [fmt_scalar(x) for x in w.d],
            "dim": ws.dim_direct,
            "dim_generating": ws.dim_generating,
            "certified": ws.certified and ws.dim_direct == ws.dim_generating,
        })
    return rows


def default_selectors(tm: ToroidalModule, depth: int) -> list:
    """Weights of every basis tensor on e^0 with total depth <= depth."""
    seen = []
    for key in tm.basis(depth, [tm.lattice.zero()], zero_modes=depth):
        w = tm.weight(key)
        if w not in seen:
            seen.append(w)
    return sorted(seen, key=lambda w: (-w.d[-1], [-x for x in w.h]))


def cmd_weights(cfg: RunConfig, selects) -> int:
    tm = make_module(cfg)
    if selects:
        sels = [parse_selector(s, tm.module.table.rank, cfg.n) for s in selects]
    else:
        sels = default_selectors(tm, min(cfg.depth, cfg.fock_depth, 2))
    rows = weight_rows(tm, sels, cfg.depth, cfg.fock_depth)
    lines = [f"{'h':>8} {'K_i':>10} {'d_i':>12} {'dim':>6}  certified"]
    for r in rows:
        lines.append(f"{','.join(r['h_weight']):>8} {','.join(r['k_eigs']):>10} "
                     f"{','.join(r['d_eigs']):>12} {r['dim']:>6}  {'yes' if r['certified'] else 'NO'}")
    emit(cfg, "\n".join(lines), rows)
    return EXIT_OK


def cmd_sector(cfg: RunConfig, lam_expr: str) -> int:
    tm = make_module(cfg)
    lam = parse_lattice(lam_expr, cfg.n)
    r = tm.lattice.r
    if any(lam[:r]):
        raise UsageError("lambda must lie in span{d_1..d_(n-1)}")
    ks = lam[r:]
    sample = tm.basis(cfg.sample_depth, tm.gammas(sector=ks))
    rep = verify_intertwiner(tm, ks, cfg.window, sample)
    emit(cfg, rep.summary(), reports_payload([rep]))
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_export(cfg: RunConfig, what: str) -> int:
    tm = make_module(cfg)
    if what == "table":
        text = tm.module.table.to_text()
        payload = {"name": tm.module.table.name, "table": text}
    else:
        sels = default_selectors(tm, min(cfg.depth, cfg.fock_depth, 2))
        rows = weight_rows(tm, sels, cfg.depth, cfg.fock_depth)
        payload = {"config": asdict(cfg), "weights": rows}
        text = json.dumps(payload, indent=2, sort_keys=True)
    emit(cfg, text, payload)
    return EXIT_OK


# -- argument parsing -----------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--algebra")
    p.add_argument("--n", type=int)
    p.add_argument("--level")
    p.add_argument("--weight", help="highest weight lambda(H(i)), comma separated")
    p.add_argument("--P", help="dbar_n eigenvalue on the highest-weight vector")
    p.add_argument("--depth", type=int, help="affine depth cap")
    p.add_argument("--fock-depth", dest="fock_depth", type=int)
    p.add_argument("--window", type=int, help="t-exponent window for sweeps")
    p.add_argument("--sample-depth", dest="sample_depth", type=int, help="total depth of sample tensors")
    p.add_argument("--output")
    p.add_argument("--format", choices=("text", "json"))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="toroidal", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    v = sub.add_parser("verify", help="run verification suites")
    _common(v)
    v.add_argument("--suites", default=",".join(SUITES))
    w = sub.add_parser("weights", help="weight-space dimensions")
    _common(w)
    w.add_argument("--select", action="append", help="h=..;k=..;d=.. (repeatable)")
    s = sub.add_parser("sector", help="sector intertwiner check for lambda")
    _common(s)
    s.add_argument("--lambda", dest="lam", default="0", help="e.g. 0, d1, 2d1, d1+d2")
    e = sub.add_parser("export", help="export the algebra table or the weight table")
    _common(e)
    e.add_argument("--what", choices=("table", "weights"), default="table")
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = build_config(args)
        if args.cmd == "verify":
            suites = [x.strip() for x in args.suites.split(",") if x.strip()]
            bad = set(suites) - set(SUITES)
            if bad:
                raise UsageError(f"unknown suites {sorted(bad)}; choose from {SUITES}")
            return cmd_verify(cfg, suites)
        if args.cmd == "weights":
            return cmd_weights(cfg, args.select)
        if args.cmd == "sector":
            return cmd_sector(cfg, args.lam)
        return cmd_export(cfg, args.what)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
