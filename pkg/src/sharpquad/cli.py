"""Command-line front-end.

Exit codes: 0 pass, 1 suite failure, 2 usage or validation error, 3 node
solver failure, 4 inadmissible function, 5 reference integrator failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .blaschke import (
    CirclePoleConfig,
    HalfPlanePoleConfig,
    SegmentPoleConfig,
    blaschke_system,
    config_from_dict,
    joukowski,
)
from .errors import (
    BranchAmbiguity,
    ConfigError,
    NodeResidual,
    NonConvergence,
    NotAdmissible,
    PhiAtInfinityNode,
)
from .oracle import integrate_circle, integrate_real_line, integrate_segment_weighted
from .quadrature import (
    circle_integral,
    circle_l2,
    circle_l2m,
    halfplane_l2,
    segment_integral,
    segment_l2,
    spf_l2_identities,
)
from .rational import RationalFunction, SimplePartialFraction
from . import verify, worked

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_SOLVER, EXIT_ADMISSIBLE, EXIT_ORACLE = range(6)
GAP_TOL = 1e-9
MODES = ("circle-int", "circle-l2", "circle-l2m", "segment-int", "segment-l2", "line-l2", "spf")


class UsageError(Exception):
    pass


def _load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _load_config(path):
    data = _load_json(path)
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return config_from_dict(data)


def _write(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _abs2(v):
    return (v * np.conj(v)).real


# --------------------------------------------------------------------------
# nodes
# --------------------------------------------------------------------------


def _abscissae(ns) -> list[float]:
    return [float(v) for v in np.real(joukowski(ns.nodes))]


def nodes_csv(ns, segment: bool) -> str:
    lines = ["index,node_re,node_im,mu,residual" + (",x" if segment else "")]
    xs = _abscissae(ns) if segment else None
    for k, (z, mu, res) in enumerate(zip(ns.nodes, ns.weights_mu, ns.residuals)):
        z = complex(z)
        row = f"{k},{z.real:.17g},{z.imag:.17g},{mu:.17g},{res:.17g}"
        if segment:
            row += f",{xs[k]:.17g}"
        lines.append(row)
    return "\n".join(lines) + "\n"


def cmd_nodes(args) -> int:
    cfg = _load_config(args.config)
    sys_ = blaschke_system(cfg)
    ns = sys_.solve_nodes(args.s, args.phi)
    segment = isinstance(cfg, SegmentPoleConfig)
    payload = ns.to_dict()
    if segment:
        payload["x"] = _abscissae(ns)
    if args.out:
        stem = Path(args.out).with_suffix("")
        Path(f"{stem}.json").write_text(_dumps(payload))
        Path(f"{stem}.csv").write_text(nodes_csv(ns, segment))
    elif args.format == "csv":
        sys.stdout.write(nodes_csv(ns, segment))
    else:
        sys.stdout.write(_dumps(payload))
    return EXIT_OK


# --------------------------------------------------------------------------
# integrate
# --------------------------------------------------------------------------


def _expect(cfg, kind, mode):
    if not isinstance(cfg, kind):
        raise ConfigError(f"mode {mode} needs a {kind.__name__}")


def integrate(mode: str, cfg, f, s: int, phi: float, m: int = 1) -> dict:
    """Rule value, reference value and scaled gap for one mode."""
    if mode == "spf":
        ids = spf_l2_identities(f, phi)
        return {"mode": mode, "rule": ids.via_mu, "via_re": ids.via_re, "oracle": ids.norm_sq,
                "gap": max(ids.spread(), ids.mu_im_gap / abs(ids.norm_sq))}

    if mode in ("circle-int", "circle-l2", "circle-l2m"):
        _expect(cfg, CirclePoleConfig, mode)
        r = cfg.radius
        if mode == "circle-int":
            value = circle_integral(f, cfg, s, phi)
            ref = integrate_circle(f, r).value
            size = integrate_circle(lambda z: np.abs(f(z)), r).value
        else:
            mm = m if mode == "circle-l2m" else 1
            value = circle_l2m(f, cfg, s, mm, phi) if mm > 1 else circle_l2(f, cfg, s, phi)
            ref = size = integrate_circle(lambda z: _abs2(f(z)) ** mm, r).value
    elif mode in ("segment-int", "segment-l2"):
        _expect(cfg, SegmentPoleConfig, mode)
        g = (lambda x: f(x.astype(complex)))
        if mode == "segment-int":
            value = segment_integral(f, cfg, s, phi)
            ref = integrate_segment_weighted(g).value
            size = integrate_segment_weighted(lambda x: np.abs(g(x))).value
        else:
            value = segment_l2(f, cfg, s, phi)
            ref = size = integrate_segment_weighted(lambda x: _abs2(g(x))).value
    elif mode == "line-l2":
        _expect(cfg, HalfPlanePoleConfig, mode)
        value = halfplane_l2(f, cfg, s, phi)
        ref = size = integrate_real_line(lambda x: _abs2(f(x.astype(complex)))).value
    else:
        raise UsageError(f"unknown mode {mode!r}")

    # integrals that vanish by symmetry are compared on the scale of the integrand
    denom = max(abs(ref), 1e-3 * abs(size))
    out = {"mode": mode, "rule": value, "oracle": ref, "gap": float(abs(value - ref) / denom)}
    return {k: ([v.real, v.imag] if isinstance(v, complex) else v) for k, v in out.items()}


def cmd_integrate(args) -> int:
    if args.mode == "spf":
        f = SimplePartialFraction.from_dict(_load_json(args.function))
        cfg = None
    else:
        cfg = _load_config(args.config)
        f = RationalFunction.from_dict(_load_json(args.function))
    phi = args.phi
    if phi is None:
        phi = np.pi if args.mode in ("line-l2", "spf") else 0.0
    result = integrate(args.mode, cfg, f, args.s, phi, args.m)
    result.update({"s": args.s, "phi": phi, "pass": result["gap"] < GAP_TOL})
    if args.format == "csv":
        keys = ["mode", "s", "phi", "rule", "oracle", "gap", "pass"]
        vals = [json.dumps(result[k]).replace(",", ";") for k in keys]
        _write(",".join(keys) + "\n" + ",".join(vals) + "\n", args.out)
    else:
        _write(_dumps(result), args.out)
    return EXIT_OK if result["pass"] else EXIT_FAIL


# --------------------------------------------------------------------------
# verify, sweep, examples
# --------------------------------------------------------------------------


def cmd_verify(args) -> int:
    if args.suite != "all" and args.suite not in verify.SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from all, {', '.join(verify.SUITES)}")
    command = ["verify", args.suite, "--seed", str(args.seed)]
    manifest = verify.verify_manifest(args.suite, args.seed, command=command)
    text = _dumps(manifest.to_dict())
    if args.out:
        Path(args.out).write_text(text)
    failed = [r for r in manifest.rows if not r["passed"]]
    print(f"suite {args.suite}: {len(manifest.rows) - len(failed)}/{len(manifest.rows)} rows pass "
          f"({manifest.wall_time:.1f}s)", file=sys.stderr)
    for r in failed[:20]:
        print(f"  FAIL {r['suite']}/{r['key']}: gap {r['gap']:.3e} (tol {r['tol']:.1e})", file=sys.stderr)
    if not args.out:
        sys.stdout.write(text)
    return EXIT_OK if manifest.passed else EXIT_FAIL


def sweep_phi(cfg, s: int, steps: int):
    """phi grid, labelled node parameters and the monotonicity verdict."""
    sys_ = blaschke_system(cfg)
    if isinstance(cfg, HalfPlanePoleConfig):
        phis = 2 * np.pi * (np.arange(steps) + 0.5) / steps
    else:
        phis = 2 * np.pi * np.arange(steps) / steps
    # labels wrap once around the contour; unwrap before testing monotonicity
    params = np.unwrap(sys_.node_trajectories(s, phis), axis=0)
    monotone = bool(np.all(np.diff(params, axis=0) > 0))
    return phis, params, monotone


def cmd_sweep_phi(args) -> int:
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    cfg = _load_config(args.config)
    phis, params, monotone = sweep_phi(cfg, args.s, args.steps)
    sys_ = blaschke_system(cfg)
    lines = ["phi,index,param,node_re,node_im"]
    for phi, row in zip(phis, params):
        z = sys_.contour(row)
        for k, (t, zk) in enumerate(zip(row, np.atleast_1d(z))):
            zk = complex(zk)
            lines.append(f"{phi:.17g},{k},{t:.17g},{zk.real:.17g},{zk.imag:.17g}")
    _write("\n".join(lines) + "\n", args.out)
    print(f"nodes move monotonically: {monotone}", file=sys.stderr)
    return EXIT_OK if monotone else EXIT_FAIL


def examples_report(seed: int) -> list[dict]:
    rows = []
    for s, four, rule, ref in worked.segment_example(6):
        rows.append({"example": "segment-four-point", "s": s, "formula": four, "rule": rule,
                     "oracle": ref, "gap": abs(four - ref) / ref})
    rng = np.random.default_rng(seed)
    for i, (six, rule, ref) in enumerate(worked.halfplane_example(rng)):
        rows.append({"example": "line-six-point", "case": i, "formula": six, "rule": rule,
                     "oracle": ref, "gap": abs(six - ref) / ref})
    for s in range(1, 9):
        node_err, moment_err = worked.gauss_chebyshev_check(rng, s)
        rows.append({"example": "gauss-chebyshev", "s": s, "node_error": node_err,
                     "gap": moment_err})
    for r in rows:
        r["pass"] = r["gap"] < GAP_TOL and r.get("node_error", 0.0) < 1e-12
    return rows


def cmd_examples(args) -> int:
    rows = examples_report(args.seed)
    if args.format == "csv":
        keys = ["example", "s", "case", "formula", "rule", "oracle", "node_error", "gap", "pass"]
        lines = [",".join(keys)]
        for r in rows:
            lines.append(",".join("" if r.get(k) is None else
                                  (f"{r[k]:.17g}" if isinstance(r[k], float) else str(r[k]))
                                  for k in keys))
        _write("\n".join(lines) + "\n", args.out)
    else:
        _write(_dumps({"version": __version__, "seed": args.seed, "rows": rows}), args.out)
    return EXIT_OK if all(r["pass"] for r in rows) else EXIT_FAIL


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sharpquad", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config=True):
        if config:
            p.add_argument("--config", required=True, help="pole configuration JSON")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("nodes", help="solve B^s = exp(i phi) on the contour")
    common(p)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--phi", type=float, default=0.0)
    p.set_defaults(func=cmd_nodes)

    p = sub.add_parser("integrate", help="apply a rule and compare with the reference integrator")
    common(p, config=False)
    p.add_argument("--config", help="pole configuration JSON (not used by --mode spf)")
    p.add_argument("--function", required=True, help="rational function JSON")
    p.add_argument("--mode", choices=MODES, required=True)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--phi", type=float, default=None)
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("verify", help="run a verification suite and write a manifest")
    p.add_argument("suite")
    p.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep-phi", help="node trajectories as phi runs over [0, 2 pi)")
    common(p)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--steps", type=int, default=360)
    p.set_defaults(func=cmd_sweep_phi)

    p = sub.add_parser("examples", help="reproduce the worked examples")
    common(p, config=False)
    p.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    p.set_defaults(func=cmd_examples)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command == "integrate" and args.mode != "spf" and not args.config:
        print("error: --config is required for this mode", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "s", 1) is not None and getattr(args, "s", 1) < 1:
        print("error: --s must be a positive integer", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except NotAdmissible as exc:
        print(f"error: {exc}", file=sys.stderr)
        for v in exc.admissibility.violations:
            print(f"  violation: {v}", file=sys.stderr)
        return EXIT_ADMISSIBLE
    except (NodeResidual,) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except NonConvergence as exc:
        print(f"reference integrator error: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except (UsageError, ConfigError, BranchAmbiguity, PhiAtInfinityNode, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
