"""Command-line front end: ``distdecomp <command> ...``.

Exit codes: 0 pass/success, 1 fail, 2 refused, 3 usage or unresolvable input.
Every JSON artifact embeds the toolkit version and the full run configuration,
is written with sorted keys and no timestamps, and replaces its target
atomically.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .certify import (DEFAULT_EPS_GRID, DEFAULT_PROFILE, DEFAULT_RADIUS, FAIL, PASS, REFUSED,
                      check_consensus_estimator, check_distributed_algorithm, check_optimization_method)
from .errors import (CatalogError, DistDecompError, NotFactorableError, PreconditionError,
                     RefusedError)
from .ratpoly import RationalFunction, exact
from .stability import CIRCLE_TOL, GRID_PROFILES, STABILITY_MARGIN
from .tfmatrix import PartitionedTransferMatrix

EXIT_OK, EXIT_FAIL, EXIT_REFUSED, EXIT_USAGE = 0, 1, 2, 3
PROFILE_ENV = "DISTDECOMP_GRID_PROFILE"
KINDS = ("opt-method", "estimator", "algorithm")
_VERDICT_EXIT = {PASS: EXIT_OK, FAIL: EXIT_FAIL, REFUSED: EXIT_REFUSED}

# scenario defaults, overridable by --config and then by flags
SCENARIO_DEFAULTS = {
    "topology": "ring", "n": 5, "scale": 0.5, "seed": 0, "eps": 0.01, "T": 100_000,
    "tol": 1e-6, "objective": "quadratic", "every": 1,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    """Everything needed to reproduce a command's output."""

    command: str
    inputs: list = field(default_factory=list)
    params: dict = field(default_factory=dict)
    grids: dict = field(default_factory=dict)
    scenario: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    seed: int | None = None

    def to_json(self) -> dict:
        return asdict(self)


# -- small helpers -----------------------------------------------------------------

def _finite(obj):
    """Replace non-finite floats so the JSON stays standard."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {str(k): _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    if isinstance(obj, np.generic):
        return _finite(obj.item())
    if isinstance(obj, np.ndarray):
        return _finite(obj.tolist())
    if isinstance(obj, complex):
        return {"re": _finite(obj.real), "im": _finite(obj.imag)}
    return obj


def dumps(obj) -> str:
    return json.dumps(_finite(obj), sort_keys=True, indent=2, default=str) + "\n"


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _envelope(cfg: RunConfig, body: dict) -> dict:
    return {"toolkit": {"name": "distdecomp", "version": __version__},
            "run_config": cfg.to_json(),
            "tolerances": {"stability_margin": STABILITY_MARGIN, "circle_tol": CIRCLE_TOL},
            "result": body}


def _emit(args, cfg: RunConfig, body: dict, text: str) -> None:
    doc = dumps(_envelope(cfg, body))
    if args.out:
        write_atomic(args.out, doc)
    if args.json:
        sys.stdout.write(doc)
    else:
        print(text)


def _parse_params(items) -> dict:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise UsageError(f"parameter override {item!r} must look like name=value")
        k, v = item.split("=", 1)
        try:
            out[k.strip()] = exact(v.strip())
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise UsageError(f"bad value for {k!r}: {exc}") from None
    return out


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a JSON object")
    return cfg


# -- target resolution ---------------------------------------------------------------

@dataclass
class Target:
    name: str
    obj: object
    kind: str | None
    order: int | None = None
    entry: object = None


def _from_json_obj(obj: dict):
    if "result" in obj:  # an artifact written by this tool
        res = obj["result"]
        obj = next((res[k] for k in ("entry", "H") if k in res), res)
    if "transfer" in obj:  # a catalog entry dump
        obj = obj["transfer"]
    if "blocks" in obj:
        return PartitionedTransferMatrix.from_json(obj)
    if "num" in obj and "den" in obj:
        return RationalFunction.from_json(obj)
    raise UsageError("JSON file holds neither a transfer matrix nor a rational function")


def resolve(zoo: str | None, file: str | None, params: dict, kind: str | None = None) -> Target:
    from .zoo import catalog_get
    if bool(zoo) == bool(file):
        raise UsageError("give exactly one of --zoo NAME or --file PATH")
    if zoo:
        try:
            entry = catalog_get(zoo, params)
        except CatalogError as exc:
            raise UsageError(str(exc)) from None
        return Target(entry.name, entry.build, kind or entry.kind, entry.order, entry)
    if params:
        raise UsageError("--param only applies to catalog entries")
    try:
        with open(file, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {file}: {exc}") from None
    try:
        obj = _from_json_obj(raw)
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"malformed transfer object in {file}: {exc}") from None
    if kind is None:
        if isinstance(obj, RationalFunction):
            kind = "opt-method"
        else:
            kind = "algorithm" if getattr(obj, "symbol", "") == "H" else "estimator"
    name = getattr(obj, "label", "") or os.path.basename(file)
    return Target(name, obj, kind, raw.get("order") if isinstance(raw, dict) else None)


def _grids(args, conf: dict) -> dict:
    profile = args.profile or conf.get("profile") or os.environ.get(PROFILE_ENV) or DEFAULT_PROFILE
    if profile not in GRID_PROFILES:
        raise UsageError(f"unknown grid profile {profile!r}; choose from {', '.join(GRID_PROFILES)}")
    radius = args.radius if args.radius is not None else float(conf.get("radius", DEFAULT_RADIUS))
    if not radius > 0:
        raise UsageError("--radius must be positive")
    eps = conf.get("eps_grid")
    eps_grid = tuple(exact(str(e)) for e in eps) if eps else DEFAULT_EPS_GRID
    strict = bool(args.strict or conf.get("strict", False))
    return {"profile": profile, "radius": radius, "eps_grid": eps_grid, "strict": strict}


def _grids_json(g: dict) -> dict:
    return {"profile": g["profile"], "radius": g["radius"], "strict": g["strict"],
            "eps_grid": [str(e) for e in g["eps_grid"]]}


def certify_target(t: Target, grids: dict, order: int | None = None):
    if t.kind == "opt-method":
        if not isinstance(t.obj, RationalFunction):
            raise UsageError("an optimization method must be a scalar rational function")
        return check_optimization_method(t.obj, grids["eps_grid"], subject=t.name)
    if not isinstance(t.obj, PartitionedTransferMatrix):
        raise UsageError(f"a {t.kind} must be a partitioned transfer matrix")
    lam_kw = {"radius": grids["radius"], "profile": grids["profile"], "strict": grids["strict"]}
    if t.kind == "estimator":
        order = order or t.order
        if order is None:
            raise UsageError("estimators need --order")
        return check_consensus_estimator(t.obj, order, subject=t.name, **lam_kw)
    return check_distributed_algorithm(t.obj, grids["eps_grid"], subject=t.name, **lam_kw)


# -- commands ---------------------------------------------------------------------------

def cmd_verify(args, conf) -> int:
    t = resolve(args.zoo, args.file, _parse_params(args.param), args.kind)
    grids = _grids(args, conf)
    cert = certify_target(t, grids, args.order)
    cfg = RunConfig("verify", [t.name], {k: str(v) for k, v in _parse_params(args.param).items()},
                    _grids_json(grids), outputs={"out": args.out})
    body = {"certificate": cert.to_json(), "kind": t.kind}
    if args.order or t.order:
        body["order"] = args.order or t.order
    _emit(args, cfg, body, cert.render())
    return _VERDICT_EXIT[cert.verdict]


def _maybe_factor(G, split=None):
    """Normalized transform search first (it lands on the comparison form),
    then a direct attempt at ``split`` without any transform."""
    from .synthesis import search_factoring_transform, try_factor
    res = search_factoring_transform(G)
    if res.found and (split is None or tuple(res.factoring.split) == tuple(split)):
        return res.to_json()
    out = res.to_json()
    if split is not None:
        try:
            fac = try_factor(G, split)
            return {"status": "found", "searched": res.searched, "note": "untransformed", "F": None,
                    "factoring": fac.to_json()}
        except NotFactorableError as exc:
            out["untransformed"] = {"reason": exc.reason, "message": str(exc)}
        if res.found:
            out.update(status="inconclusive", F=None, factoring=None,
                       note=f"only split {list(res.factoring.split)} factors")
    return out


def _factor_text(fac: dict) -> list:
    lines = [f"factoring: {fac['status']}"]
    if fac.get("F"):
        F = [RationalFunction.from_json(r[i]) for i, r in enumerate(fac["F"])]
        lines.append("  F = diag(" + ", ".join(str(f) for f in F) + ")")
    if fac.get("factoring"):
        for key in ("g_con1", "g_con2"):
            lines.append(str(PartitionedTransferMatrix.from_json(fac["factoring"][key])))
    elif fac.get("note"):
        lines.append(f"  {fac['note']}")
    return lines


def cmd_decompose(args, conf) -> int:
    from .synthesis import decompose
    params = _parse_params(args.param)
    t = resolve(args.zoo, args.file, params, "algorithm")
    grids = _grids(args, conf)
    if not isinstance(t.obj, PartitionedTransferMatrix):
        raise UsageError("decompose needs a partitioned transfer matrix H")
    dec = decompose(t.obj, eps_grid=grids["eps_grid"], radius=grids["radius"], profile=grids["profile"],
                    strict=grids["strict"])
    body = {"decomposition": dec.to_json()}
    text = [f"decomposition of {t.name}", f"  G_opt = {dec.g_opt}", f"  phi = {dec.phi}  p = {dec.p}  q = {dec.q}",
            str(dec.g_con)]
    if args.factor:
        fac = _maybe_factor(dec.g_con)
        body["factoring"] = fac
        text += _factor_text(fac)
    cfg = RunConfig("decompose", [t.name], {k: str(v) for k, v in params.items()}, _grids_json(grids),
                    outputs={"out": args.out})
    _emit(args, cfg, body, "\n".join(text))
    return EXIT_OK


def cmd_compose(args, conf) -> int:
    from .synthesis import compose
    grids = _grids(args, conf)
    opt = resolve(args.opt if not args.opt_file else None, args.opt_file, {}, "opt-method")
    con = resolve(args.con if not args.con_file else None, args.con_file, {}, "estimator")
    if not isinstance(opt.obj, RationalFunction) or not isinstance(con.obj, PartitionedTransferMatrix):
        raise UsageError("compose needs a scalar G_opt and a partitioned estimator")
    H = compose(opt.obj, con.obj, label=f"{opt.name}+{con.name}")
    body = {"H": H.to_json()}
    code = EXIT_OK
    text = [str(H)]
    if args.verify:
        cert = check_distributed_algorithm(H, grids["eps_grid"], radius=grids["radius"],
                                           profile=grids["profile"], strict=grids["strict"], subject=H.label)
        body["certificate"] = cert.to_json()
        text.append(cert.render())
        code = _VERDICT_EXIT[cert.verdict]
    cfg = RunConfig("compose", [opt.name, con.name], grids=_grids_json(grids), outputs={"out": args.out})
    _emit(args, cfg, body, "\n".join(text))
    return code


def _parse_split(s: str | None):
    if s is None:
        return None
    try:
        parts = tuple(int(p) for p in s.split(","))
    except ValueError:
        raise UsageError(f"--split must look like 1,1 (got {s!r})") from None
    if len(parts) != 2 or min(parts) < 1:
        raise UsageError("--split needs two positive channel counts")
    return parts


def cmd_factor(args, conf) -> int:
    params = _parse_params(args.param)
    t = resolve(args.zoo, args.file, params, "estimator")
    if not isinstance(t.obj, PartitionedTransferMatrix):
        raise UsageError("factor needs a partitioned estimator")
    split = _parse_split(args.split)
    if split is not None and sum(split) != t.obj.m:
        raise UsageError(f"split {split} does not add up to m = {t.obj.m}")
    fac = _maybe_factor(t.obj, split)
    cfg = RunConfig("factor", [t.name], {k: str(v) for k, v in params.items()},
                    outputs={"out": args.out}, scenario={"split": list(split) if split else None})
    text = [t.name] + _factor_text(fac)
    _emit(args, cfg, {"factoring": fac}, "\n".join(text))
    return EXIT_OK if fac["status"] == "found" else EXIT_FAIL


def _scenario(args, conf) -> dict:
    sc = dict(SCENARIO_DEFAULTS)
    sc.update({k: v for k, v in conf.get("scenario", {}).items() if k in SCENARIO_DEFAULTS})
    for key in ("topology", "n", "scale", "seed", "eps", "T", "tol", "every"):
        val = getattr(args, key, None)
        if val is not None:
            sc[key] = val
    if getattr(args, "tanh", False):
        sc["objective"] = "tanh"
    sc["ramp_inputs"] = bool(getattr(args, "ramp_inputs", False))
    if sc["n"] < 2 or sc["T"] < 1 or sc["every"] < 1:
        raise UsageError("need n >= 2, T >= 1 and every >= 1")
    return sc


def _simulate(t: Target, sc: dict, H=None):
    """Run the scenario for ``t`` (or for ``H`` in its place); returns (trajectory, target value)."""
    from .netsim import (PolynomialSignals, Quadratic, Tanh, build_network, ramp_signals, simulate_consensus,
                         simulate_distributed, simulate_optimization)
    subject = H if H is not None else t.obj
    n = sc["n"]
    targets = np.arange(1, n + 1, dtype=float)
    obj_cls = Tanh if sc["objective"] == "tanh" else Quadratic
    if t.kind == "opt-method":
        tr = simulate_optimization(subject, obj_cls(sc["eps"], [3.0]), sc["T"], stop_on_convergence=True)
        return tr, 3.0
    net = build_network(sc["topology"], n, sc["scale"], seed=sc["seed"], directed=sc["topology"] == "directed_ring")
    if t.kind == "estimator":
        sig = ramp_signals(n, sc["seed"]) if sc["ramp_inputs"] else PolynomialSignals(targets[:, None])
        tr = simulate_consensus(subject, net, sig, sc["T"], stop_on_convergence=True)
        return tr, sig.mean
    tr = simulate_distributed(subject, net, obj_cls(sc["eps"], targets), sc["T"], stop_on_convergence=True,
                              record_network=False)
    return tr, float(targets.mean())


def _summary(tr, target, tol) -> dict:
    s = tr.summary(target)
    s["steady_error"] = s.pop("final_max_error")
    s["within_tol"] = bool(not tr.diverged and s["steady_error"] < tol)
    return s


def cmd_simulate(args, conf) -> int:
    params = _parse_params(args.param)
    t = resolve(args.zoo, args.file, params, args.kind)
    sc = _scenario(args, conf)
    if args.ramp_inputs and t.kind != "estimator":
        raise UsageError("--ramp-inputs applies to estimators")
    tr, target = _simulate(t, sc)
    summary = _summary(tr, target, sc["tol"])
    if args.csv:
        write_atomic(args.csv, tr.to_csv(sc["every"]))
    cfg = RunConfig("simulate", [t.name], {k: str(v) for k, v in params.items()}, scenario=sc,
                    outputs={"out": args.out, "csv": args.csv}, seed=sc["seed"])
    text = (f"{t.name} ({t.kind}): {summary['steps']} steps, "
            f"{'diverged' if tr.diverged else 'steady error %.3e' % summary['steady_error']} "
            f"(target {target:g}, tol {sc['tol']:g})")
    _emit(args, cfg, {"summary": summary, "kind": t.kind}, text)
    return EXIT_FAIL if tr.diverged else EXIT_OK


def cmd_compare(args, conf) -> int:
    from .synthesis import decompose
    params = _parse_params(args.param)
    names = args.zoo or []
    if not names:
        raise UsageError("compare needs at least one --zoo NAME")
    sc = _scenario(args, conf)
    rows, code = [], EXIT_OK
    for name in names:
        t = resolve(name, None, params, None)
        tr, target = _simulate(t, sc)
        row = {"name": t.name, "kind": t.kind, "summary": _summary(tr, target, sc["tol"])}
        if args.with_roundtrip:
            if t.kind != "algorithm":
                raise UsageError("--with-roundtrip applies to algorithms")
            H2 = decompose(t.obj, check=False).compose()
            tr2, _ = _simulate(t, sc, H=H2)
            steps = min(tr.steps, tr2.steps)
            dev = float(np.max(np.abs(tr.y[:steps] - tr2.y[:steps])))
            row["roundtrip"] = {"max_deviation": dev, "steps_compared": steps}
            if not dev < args.roundtrip_tol:
                code = EXIT_FAIL
        rows.append(row)
    cfg = RunConfig("compare", names, {k: str(v) for k, v in params.items()}, scenario=sc,
                    outputs={"out": args.out}, seed=sc["seed"])
    lines = []
    for r in rows:
        s = r["summary"]
        line = f"{r['name']:<28} {r['kind']:<11} steps={s['steps']:<7} err={s['steady_error']:.3e}"
        if "roundtrip" in r:
            line += f"  roundtrip dev={r['roundtrip']['max_deviation']:.3e}"
        lines.append(line)
    _emit(args, cfg, {"rows": rows, "roundtrip_tol": args.roundtrip_tol if args.with_roundtrip else None},
          "\n".join(lines))
    return code


def cmd_zoo(args, conf) -> int:
    from .zoo import catalog_get, catalog_names
    if args.zoo_cmd == "list":
        names = catalog_names(args.kind)
        rows = [{"name": n, "kind": catalog_get(n).kind} for n in names]
        cfg = RunConfig("zoo list", params={"kind": args.kind}, outputs={"out": args.out})
        _emit(args, cfg, {"entries": rows}, "\n".join(f"{r['name']:<28} {r['kind']}" for r in rows))
        return EXIT_OK
    params = _parse_params(args.param)
    try:
        entry = catalog_get(args.name, params)
    except CatalogError as exc:
        raise UsageError(str(exc)) from None
    cfg = RunConfig("zoo show", [entry.name], {k: str(v) for k, v in params.items()}, outputs={"out": args.out})
    text = [f"{entry.name} ({entry.kind})", f"  {entry.provenance}",
            "  params: " + ", ".join(f"{k}={v}" for k, v in entry.params.items()), str(entry.build)]
    _emit(args, cfg, {"entry": entry.to_json()}, "\n".join(text))
    return EXIT_OK


# -- parser ------------------------------------------------------------------------------

def _common(p, target=True, grids=False):
    if target:
        p.add_argument("--zoo", metavar="NAME", help="catalog entry")
        p.add_argument("--file", metavar="PATH", help="JSON transfer object")
        p.add_argument("--param", action="append", metavar="K=V", help="catalog parameter override")
    if grids:
        p.add_argument("--profile", choices=GRID_PROFILES, help=f"lambda grid (default ${PROFILE_ENV} or real)")
        p.add_argument("--radius", type=float, help="lambda radius")
        p.add_argument("--strict", action="store_true", help="literal strict-properness check")
    p.add_argument("--config", metavar="PATH", help="JSON file with grid/scenario defaults")
    p.add_argument("--out", metavar="PATH", help="write the JSON artifact here")
    p.add_argument("--json", action="store_true", help="print JSON instead of text")


def _scenario_flags(p):
    p.add_argument("--topology", help="ring, complete, star, path, random, directed_ring")
    p.add_argument("--n", type=int, help="number of agents")
    p.add_argument("--scale", type=float, help="Laplacian spectral radius")
    p.add_argument("--seed", type=int)
    p.add_argument("--eps", type=float, help="objective curvature")
    p.add_argument("--T", "-T", type=int, dest="T", help="horizon")
    p.add_argument("--tol", type=float)
    obj = p.add_mutually_exclusive_group()
    obj.add_argument("--quadratic", action="store_true", help="quadratic objectives (default)")
    obj.add_argument("--tanh", action="store_true", help="gradient eps*tanh(y - y_i*)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="distdecomp", description="Certify, decompose and simulate distributed algorithms.")
    ap.add_argument("--version", action="version", version=f"distdecomp {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify", help="certify a method, estimator or algorithm")
    _common(p, grids=True)
    p.add_argument("--kind", choices=KINDS)
    p.add_argument("--order", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("decompose", help="split H into G_opt and an estimator")
    _common(p, grids=True)
    p.add_argument("--factor", action="store_true", help="also search a factoring of the estimator")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("compose", help="build H from G_opt and an estimator")
    _common(p, target=False, grids=True)
    p.add_argument("--opt", metavar="NAME")
    p.add_argument("--opt-file", metavar="PATH")
    p.add_argument("--con", metavar="NAME")
    p.add_argument("--con-file", metavar="PATH")
    p.add_argument("--verify", action="store_true", help="certify the composed H")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("factor", help="factor a second-order estimator into two first-order ones")
    _common(p)
    p.add_argument("--split", metavar="M1,M2")
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("simulate", help="closed-loop simulation with a CSV trajectory")
    _common(p)
    p.add_argument("--kind", choices=KINDS)
    _scenario_flags(p)
    p.add_argument("--ramp-inputs", action="store_true", help="estimators: ramps with a constant mean")
    p.add_argument("--csv", metavar="PATH", help="write the trajectory as CSV")
    p.add_argument("--every", type=int, help="CSV row stride")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="aligned simulation summaries")
    _common(p, target=False)
    p.add_argument("--zoo", action="append", metavar="NAME")
    p.add_argument("--param", action="append", metavar="K=V")
    _scenario_flags(p)
    p.add_argument("--with-roundtrip", action="store_true", help="also simulate compose(decompose(H))")
    p.add_argument("--roundtrip-tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("zoo", help="browse the catalog")
    zsub = p.add_subparsers(dest="zoo_cmd", required=True, parser_class=_Parser)
    q = zsub.add_parser("list")
    q.add_argument("--kind", choices=KINDS)
    _common(q, target=False)
    q = zsub.add_parser("show")
    q.add_argument("name")
    q.add_argument("--param", action="append", metavar="K=V")
    _common(q, target=False)
    p.set_defaults(func=cmd_zoo)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        conf = _load_config(args.config)
        return args.func(args, conf)
    except UsageError as exc:
        print(f"distdecomp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RefusedError as exc:
        print(f"distdecomp: refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (PreconditionError, NotFactorableError) as exc:
        print(f"distdecomp: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except DistDecompError as exc:
        print(f"distdecomp: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
