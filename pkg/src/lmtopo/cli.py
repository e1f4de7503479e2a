"""Command line interface: ``lmtopo <subcommand>``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .certify import certify
from .collapse import collapse_fully
from .complex import ComplexError, read_complex, serialize, write_complex
from .constants import solve_c2, solve_gamma2
from .core import puncture
from .experiments import (
    PRESETS,
    ConfigError,
    RunManifest,
    SweepConfig,
    default_workers,
    run_sweep,
)
from .homology import betti
from .oracles import cross_check
from .sampler import SampleSpec, sample


def cmd_constants(args) -> int:
    consts = [solve_gamma2(), solve_c2()]
    if args.json:
        print(json.dumps({k.name: k.to_dict() for k in consts}, indent=2))
        return 0
    for k in consts:
        lo, hi = k.bracket
        print(f"{k.name:<7} = {k.value:.12f}   root = {k.inner_root:.15f}   "
              f"residual = {k.residual:.2e}   bracket = [{lo:.15f}, {hi:.15f}]")
    return 0


def cmd_sample(args) -> int:
    spec = SampleSpec(n=args.n, p=args.p, c=args.c, seed=args.seed)
    cx = sample(spec)
    if args.out:
        write_complex(cx, args.out)
        print(f"wrote {args.out}: n={cx.n} f2={cx.f2}", file=sys.stderr)
    else:
        sys.stdout.write(serialize(cx))
    return 0


def cmd_analyze(args) -> int:
    cx = read_complex(args.file)
    core, trace = collapse_fully(cx)
    _, report = puncture(cx)
    hom_q = betti(core, "Q", torsion=args.torsion)
    hom_2 = betti(core, 2)
    cert = certify(cx, torsion=args.torsion)
    out = {
        "n": cx.n,
        "f": [cx.f0, cx.f1, cx.f2],
        "core_f2": core.f2,
        "collapse_steps": len(trace),
        "collapsible": core.f2 == 0,
        "tetra": report.to_dict(),
        "homology": {"Q": hom_q.to_dict(), "F2": hom_2.to_dict()},
        "certificate": cert.to_dict(),
    }
    if args.json:
        print(json.dumps(out, indent=2))
        return 0
    print(f"n={cx.n} f1={cx.f1} f2={cx.f2}")
    print(f"collapse: {len(trace)} steps, residue f2={core.f2}"
          f"{' (2-collapsible)' if core.f2 == 0 else ''}")
    print(f"tetrahedron boundaries: {len(report.boundaries)}, "
          f"shared-face pairs: {len(report.shared_face_pairs)}")
    print(f"betti over Q:  {hom_q.betti}" + (f"  H1 torsion: {list(hom_q.torsion_h1)}"
                                             if hom_q.torsion_h1 is not None else ""))
    print(f"betti over F2: {hom_2.betti}")
    line = f"verdict: {cert.verdict.value}"
    if cert.evidence.failed_stage:
        line += f" (stage: {cert.evidence.failed_stage})"
    if cert.evidence.upgrade:
        line += f"; upgraded to {cert.evidence.upgrade}"
    print(line)
    return 0


def _sweep_config(args) -> SweepConfig:
    if args.manifest:
        cfg = RunManifest.from_dict(json.loads(Path(args.manifest).read_text())).sweep_config()
    elif args.config:
        cfg = SweepConfig.from_json(Path(args.config).read_text())
    elif args.preset:
        cfg = PRESETS[args.preset]()
    else:
        cfg = SweepConfig()
    if args.n:
        cfg.n_values = args.n
    if args.c:
        cfg.c_values = args.c
    if args.trials is not None:
        cfg.trials = args.trials
    if args.seed is not None:
        cfg.master_seed = args.seed
    if args.torsion:
        cfg.compute_torsion = True
    if args.betti_y:
        cfg.compute_betti_Y = True
    if args.no_timing:
        cfg.record_timing = False
    cfg.workers = args.workers or default_workers()
    cfg.out_dir = args.out_dir
    return cfg.validate()


def cmd_sweep(args) -> int:
    cfg = _sweep_config(args)
    _, _, table = run_sweep(cfg)
    cols = ["n", "c", "trials", "frac_FREE", "frac_NOT_FREE_MODULO_ASPHERICITY",
            "mean_f2_core_n2", "mean_tetra", "predicted_tetra", "mean_betti2_Z_n2"]
    print(" ".join(f"{c:>12.12}" for c in cols))
    for row in table:
        cells = []
        for c in cols:
            v = row[c]
            cells.append(f"{v:>12.5g}" if isinstance(v, float) else f"{str(v):>12}")
        print(" ".join(cells))
    print(f"outputs in {cfg.out_dir}", file=sys.stderr)
    return 0


def cmd_oracle_check(args) -> int:
    rep = cross_check(iters=args.iters, n_max=args.n_max, seed=args.seed)
    for f in rep.failures:
        print("FAIL", f)
    print(f"{rep.checked} random complexes checked, {len(rep.failures)} failure(s)")
    return 0 if rep.ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lmtopo", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="solve for gamma2 and c2")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("sample", help="draw Y ~ Y(n, p)")
    p.add_argument("--n", type=int, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--p", type=float)
    g.add_argument("--c", type=float)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", help="write a .c2x file instead of stdout")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("analyze", help="collapse, tetra report, homology, certificate")
    p.add_argument("file")
    p.add_argument("--torsion", action="store_true", help="compute H_1 torsion (slow for large n)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="Monte Carlo sweep over an (n, c) grid")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--config", help="SweepConfig JSON file")
    src.add_argument("--manifest", help="rerun the sweep recorded in a manifest.json")
    src.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--n", type=int, nargs="+")
    p.add_argument("--c", type=float, nargs="+")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, help="default: $LMTOPO_WORKERS or 1")
    p.add_argument("--torsion", action="store_true")
    p.add_argument("--betti-y", action="store_true", help="also compute beta_2(Y)")
    p.add_argument("--no-timing", action="store_true", help="leave wall_ms empty")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle-check", help="cross-check against brute-force oracles")
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--iters", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle_check)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ComplexError, ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
