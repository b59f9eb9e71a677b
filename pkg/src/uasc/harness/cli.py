"""Command line entry point: ``uasc <subcommand> ...``.

Exit status is 0 only when every requested instance finished with status ok,
1 when some instance failed, 2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from ..diagnostics import compute_errors
from ..eikonal import EikonalSolverKind, characteristics_oracle, eikonal_march
from ..errors import UASCError
from ..gpe import ReferenceConfig, generate_reference
from ..initial_data import get_initial_data
from ..limits import check_resources
from ..snapshot import Snapshot, read_snapshot, write_snapshot
from ..spectral import Grid
from .config import SCHEMES, load_config, parse_number
from .plotdata import AXES, emit_plotdata
from .runner import Instance, run_single, run_sweep


def _add_run(sub):
    p = sub.add_parser("run", help="run one scheme to the final time")
    p.add_argument("--scheme", choices=SCHEMES, default="scheme2")
    p.add_argument("--eps", type=parse_number, required=True)
    p.add_argument("--tf", type=parse_number, default=0.1)
    p.add_argument("--nx", type=int, default=128)
    step = p.add_mutually_exclusive_group(required=True)
    step.add_argument("--nt", type=int, help="number of steps (h = tf / nt)")
    step.add_argument("--h", type=parse_number, help="time step; the last step is shortened if needed")
    p.add_argument("--data", default="paper")
    p.add_argument("--eikonal", default=None)
    p.add_argument("--delta-log", type=float, default=0.1)
    p.add_argument("--resume", help="snapshot to continue from (its time is the start time)")
    p.add_argument("--out", help="snapshot file for the final state")
    p.add_argument("--stride", type=int, default=0, help="record observables every STRIDE steps")
    p.add_argument("--observables", help="write the observables series to this file")


def _add_sweep(sub):
    p = sub.add_parser("sweep", help="convergence sweep to CSV")
    p.add_argument("--config", help="key = value config file")
    for key in ("scheme", "eps", "tf", "data", "eikonal", "delta_log", "nx", "nt", "nt_list",
                "h_list", "nx_list", "reference", "reference_dir", "metrics", "fit_floor",
                "output", "workers", "max_nx", "max_nt"):
        p.add_argument("--" + key.replace("_", "-"), dest=key, default=None)


def _add_reference(sub):
    p = sub.add_parser("reference", help="generate a fourth-order reference snapshot")
    p.add_argument("--kind", choices=("wkb4", "gpe"), default="wkb4")
    p.add_argument("--eps", type=parse_number, required=True)
    p.add_argument("--tf", type=parse_number, default=0.1)
    p.add_argument("--nx", type=int, default=2**8)
    p.add_argument("--nt", type=int, default=2**13)
    p.add_argument("--data", default="paper")
    p.add_argument("--out", required=True)


def _add_compare(sub):
    p = sub.add_parser("compare", help="error metrics of one snapshot against another")
    p.add_argument("candidate")
    p.add_argument("reference")
    p.add_argument("--metrics", default="rho,psi,sa")
    p.add_argument("--imag-s", action="store_true", help="include Im S in err_sa")


def _add_eikonal(sub):
    p = sub.add_parser("eikonal", help="standalone eikonal run, optionally checked against characteristics")
    p.add_argument("--solver", default="semilag1", help="semilag1 | semilag2 | lie | strang | yoshida")
    p.add_argument("--tf", type=parse_number, default=0.1)
    p.add_argument("--nt", type=int, default=64)
    p.add_argument("--nx", type=int, default=64)
    p.add_argument("--data", default="paper")
    p.add_argument("--delta-log", type=float, default=0.1)
    p.add_argument("--oracle", action="store_true", help="report the max error against characteristics")
    p.add_argument("--out", help="write x, S columns to this file")


def _add_plotdata(sub):
    p = sub.add_parser("plotdata", help="series files from a sweep CSV")
    p.add_argument("csv")
    p.add_argument("--axis", required=True, help=f"one of {', '.join(AXES)}")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--svg", action="store_true", help="also render an SVG figure (matplotlib)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uasc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for add in (_add_run, _add_sweep, _add_reference, _add_compare, _add_eikonal, _add_plotdata):
        add(sub)
    return parser


def cmd_run(args) -> int:
    start = read_snapshot(args.resume) if args.resume else None
    t0 = start.tf if start is not None else 0.0
    h = args.h if args.h is not None else (args.tf - t0) / args.nt
    inst = Instance(args.scheme, args.eps, args.tf, args.nx, h, args.data, args.eikonal, args.delta_log)
    res = run_single(inst, initial=start, stride=args.stride)
    if args.out:
        write_snapshot(args.out, res.snapshot())
    if args.observables:
        with open(args.observables, "w") as fh:
            fh.write("# t mass energy momentum\n")
            for t, ob in zip(res.times, res.observables):
                fh.write(" ".join(format(v, ".17g") for v in (t, *ob)) + "\n")
    print(json.dumps({"status": "ok", "scheme": inst.scheme, "eps": inst.eps, "tf": inst.tf,
                      "nx": inst.nx, "nt": inst.nt}))
    return 0


def cmd_sweep(args) -> int:
    overrides = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    config = load_config(args.config, overrides)
    result = run_sweep(config)
    if not config.output:
        sys.stdout.write(result.to_csv())
    return 0 if result.all_ok else 1


def cmd_reference(args) -> int:
    snap = generate_reference(args.kind, ReferenceConfig(args.eps, args.tf, args.nx, args.nt, args.data), args.out)
    print(json.dumps({"status": "ok", "kind": snap.kind, "out": args.out}))
    return 0


def cmd_compare(args) -> int:
    cand: Snapshot = read_snapshot(args.candidate)
    ref: Snapshot = read_snapshot(args.reference)
    which = tuple(m for m in args.metrics.split(",") if m)
    em = compute_errors(cand, ref, which, eps=ref.eps or None, include_imag_s=args.imag_s)
    print(json.dumps({k: v for k, v in em.as_dict().items() if v is not None}, sort_keys=True))
    return 0


def cmd_eikonal(args) -> int:
    check_resources(args.nx, args.nt)
    grid = Grid(args.nx)
    S0 = get_initial_data(args.data).S0(grid.x)
    kind = EikonalSolverKind.parse(args.solver, args.delta_log)
    S = eikonal_march(grid, S0, args.tf, args.nt, kind)
    report = {"status": "ok", "solver": args.solver, "order": kind.order, "nx": args.nx, "nt": args.nt}
    if args.oracle:
        exact = characteristics_oracle(grid, S0, args.tf)
        report["max_error"] = float(np.max(np.abs(np.real(S) - exact)))
    if args.out:
        np.savetxt(args.out, np.column_stack([grid.x, np.real(S)]), fmt="%.17g")
    print(json.dumps(report))
    return 0


def cmd_plotdata(args) -> int:
    manifest = emit_plotdata(args.csv, args.axis, args.out, svg=args.svg)
    print(manifest)
    return 0


COMMANDS = {
    "run": cmd_run,
    "sweep": cmd_sweep,
    "reference": cmd_reference,
    "compare": cmd_compare,
    "eikonal": cmd_eikonal,
    "plotdata": cmd_plotdata,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UASCError as exc:
        usage = exc.reason in ("structural", "usage")
        print(json.dumps({"status": exc.reason, "error": str(exc)}), file=sys.stderr)
        return 2 if usage else 1


if __name__ == "__main__":
    sys.exit(main())
