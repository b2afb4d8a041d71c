"""``hierleak`` command line.

Exit codes: 0 ok, 1 invariant failure, 2 parse error, 3 no convergence,
4 infeasible, 5 resource cap.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import shutil
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__, dmc, io
from .codec import CHANNEL_MODES, IDEAL_PIPE, TRIAL_HEADER, SimParams, run_experiment
from .errors import ConvergenceError, HierLeakError, InfeasibleError, ModelError, ResourceError
from .properties import r1_r2_cells, r1_r2_gaps, invariant_suites
from .region import FRONTIER_HEADER, REGIONS, frontier_rows, frontier_sweep

log = logging.getLogger("hierleak")

EXIT_OK, EXIT_INVARIANT, EXIT_PARSE, EXIT_CONVERGENCE, EXIT_INFEASIBLE, EXIT_RESOURCE = range(6)

BUNDLED = {
    "dsbs": "dsbs_0.1_0.1.json",
    "u": "aux_u.json",
    "v": "aux_v.json",
    "w": "aux_w.json",
    "constant": "aux_constant.json",
    "bsc": "bsc_0.11.json",
    "experiment": "experiment_anchor.json",
}


def bundled_dir():
    return resources.files("hierleak") / "data"


def _resolve(spec: str) -> Path:
    """A file path, or the name of a bundled file (``dsbs``, ``v``, ...)."""
    if spec in BUNDLED:
        with resources.as_file(bundled_dir() / BUNDLED[spec]) as p:
            return Path(p)
    p = Path(spec)
    if not p.exists():
        raise io.ParseError(f"{spec}: no such file or bundled name")
    return p


def parse_axis(text: str) -> list[float]:
    """``lo:hi:count`` or a comma list."""
    try:
        if ":" in text:
            lo, hi, k = text.split(":")
            k = int(k)
            if k < 1:
                raise ValueError
            return [float(x) for x in np.linspace(float(lo), float(hi), k)]
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise io.ParseError(f"bad grid axis {text!r}; use lo:hi:count or a,b,c") from None


def parse_grid(text: str) -> tuple[list[float], list[float]]:
    """``D1AXIS/D2AXIS``, e.g. ``0.05:0.2:5/0:0.1:5``."""
    parts = text.split("/")
    if len(parts) != 2:
        raise io.ParseError(f"bad grid {text!r}; expected D1AXIS/D2AXIS")
    d1, d2 = (parse_axis(p) for p in parts)
    if not d1 or not d2:
        raise io.ParseError(f"bad grid {text!r}; empty axis")
    return d1, d2


def parse_sizes(text: str | None):
    if text is None:
        return None
    try:
        sizes = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise io.ParseError(f"bad sizes {text!r}") from None
    if len(sizes) != 3:
        raise io.ParseError("sizes needs three values |U|,|V|,|W|")
    return sizes


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_manifest(path: Path, command: str, argv: list[str], config: dict, seed,
                   outputs: list[Path]) -> None:
    doc = {
        "schema_version": io.SCHEMA_VERSION,
        "command": command,
        "argv": argv,
        "config": config,
        "seed": seed,
        "version": __version__,
        "outputs": [str(p) for p in outputs] + [str(path)],
    }
    path.write_text(_dump(doc))


def _manifest_path(out: Path) -> Path:
    return out.with_name(out.stem + ".manifest.json")


# commands -------------------------------------------------------------------


def cmd_capacity(args, argv) -> int:
    ch = io.channel_from_json(io.read_json(_resolve(args.channel)))
    res = dmc.capacity(ch, tol=args.tol, max_iter=args.max_iter)
    doc = {
        "capacity": res.capacity,
        "input_dist": res.input_dist.tolist(),
        "gap": res.gap,
        "iterations": res.iterations,
    }
    print(f"capacity {res.capacity:.6f} bits/use (gap {res.gap:.2e}, {res.iterations} iterations)")
    if args.out:
        out = Path(args.out)
        out.write_text(_dump(doc))
        write_manifest(_manifest_path(out), "capacity", argv,
                       {"channel": io.channel_to_json(ch), "tol": args.tol,
                        "max_iter": args.max_iter}, None, [out])
    else:
        sys.stdout.write(_dump(doc))
    return EXIT_OK


def cmd_frontier(args, argv) -> int:
    sc = io.scenario_from_json(io.read_json(_resolve(args.scenario)))
    d1, d2 = parse_grid(args.grid)
    sizes = parse_sizes(args.sizes)
    cells = frontier_sweep(sc, d1, d2, args.region, args.budget, args.seed, sizes, args.threads)
    out = Path(args.out)
    with out.open("w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(FRONTIER_HEADER)
        wr.writerows(frontier_rows(cells))
    config = {"scenario": io.scenario_to_json(sc), "d1_grid": sorted(d1), "d2_grid": sorted(d2),
              "region": args.region, "budget": args.budget, "sizes": sizes}
    write_manifest(_manifest_path(out), "frontier", argv, config, args.seed, [out])
    n_ok = sum(c.feasible for c in cells)
    print(f"{n_ok}/{len(cells)} feasible cells written to {out}")
    if n_ok == 0:
        print("error: NO_FEASIBLE_POINT in every cell", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_simulate(args, argv) -> int:
    if args.experiment:
        path = _resolve(args.experiment)
        aux, sc, sp = io.experiment_from_json(io.read_json(path), base=path.parent)
    else:
        sc = io.scenario_from_json(io.read_json(_resolve(args.scenario or "dsbs")))
        aux = io.aux_from_json(io.read_json(_resolve(args.aux or "v")))
        sp = SimParams(n=args.n or 8)
    overrides = {k: v for k, v in (("n", args.n), ("delta", args.delta), ("seed", args.seed),
                                   ("channel_mode", args.mode)) if v is not None}
    try:
        sp = SimParams(**{**io.sim_to_json(sp), **overrides})
    except ModelError as exc:
        raise io.ParseError(str(exc)) from None
    res = run_experiment(aux, sc, sp, args.trials, oracle=args.oracle,
                         keep_rows=bool(args.trials_csv))
    out = Path(args.out)
    out.write_text(_dump(res.summary))
    outputs = [out]
    if args.trials_csv:
        tpath = Path(args.trials_csv)
        with tpath.open("w", newline="") as fh:
            wr = csv.writer(fh, lineterminator="\n")
            wr.writerow(TRIAL_HEADER)
            for row in res.rows:
                wr.writerow([*row[:4], f"{row[4]:.12g}", f"{row[5]:.12g}"])
        outputs.append(tpath)
    config = io.experiment_to_json(aux, sc, sp)
    config.update(trials=args.trials, oracle=args.oracle)
    write_manifest(_manifest_path(out), "simulate", argv, config, sp.seed, outputs)
    s = res.summary
    print(f"n={s['n']} trials={s['trials']}: d1={s['d1']:.4f} d2={s['d2']:.4f} "
          f"enc_err={s['enc_err_rate']:.3f} leakage_bound={s['leakage_bound']:.4f}")
    return EXIT_OK


def cmd_verify(args, argv) -> int:
    sc = io.scenario_from_json(io.read_json(_resolve(args.scenario)))
    suites = invariant_suites(sc, args.samples, args.seed)
    cells = r1_r2_cells(sc)
    gap = r1_r2_gaps(sc, cells, args.budget, args.seed, threads=args.threads)
    report = {name: r.to_dict() for name, r in suites.items()}
    report["r1_r2_gap"] = gap.to_dict()
    hard_ok = all(r.ok for r in suites.values())
    report["ok"] = hard_ok
    for name, r in suites.items():
        print(f"{name}: {r.checked - r.failed}/{r.checked} pass (worst {r.worst:.3g})")
    if gap.skipped:
        print(f"r1_r2_gap: skipped, {gap.skipped}")
    else:
        print(f"r1_r2_gap: {gap.checked} cells compared, largest R2 shortfall {gap.worst:.4f} bits"
              f"{'' if gap.ok else ' (above tolerance, heuristic search)'}")
    if args.out:
        out = Path(args.out)
        out.write_text(_dump(report))
        write_manifest(_manifest_path(out), "verify", argv,
                       {"scenario": io.scenario_to_json(sc), "samples": args.samples,
                        "budget": args.budget}, args.seed, [out])
    return EXIT_OK if hard_ok else EXIT_INVARIANT


def cmd_examples(args, argv) -> int:
    dest = Path(args.dest)
    dest.mkdir(parents=True, exist_ok=True)
    for name in sorted(set(BUNDLED.values())):
        with resources.as_file(bundled_dir() / name) as src:
            shutil.copyfile(src, dest / name)
    print(f"copied {len(set(BUNDLED.values()))} files to {dest}")
    return EXIT_OK


def cmd_replay(args, argv) -> int:
    doc = io.read_json(_resolve(args.manifest))
    inner = doc.get("argv")
    if not isinstance(inner, list) or not inner or inner[0] == "replay":
        raise io.ParseError(f"{args.manifest}: no replayable argv")
    return main(inner)


# parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hierleak", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("capacity", help="channel capacity by Blahut-Arimoto")
    c.add_argument("channel", help="channel JSON file or bundled name")
    c.add_argument("--tol", type=float, default=1e-9)
    c.add_argument("--max-iter", type=int, default=dmc.MAX_ITER)
    c.add_argument("--out")

    f = sub.add_parser("frontier", help="minimum-leakage frontier over a distortion grid")
    f.add_argument("--scenario", default="dsbs")
    f.add_argument("--grid", required=True, help="D1AXIS/D2AXIS, axis = lo:hi:count or a,b,c")
    f.add_argument("--region", choices=REGIONS, default="r1")
    f.add_argument("--budget", type=int, default=8)
    f.add_argument("--sizes", help="aux alphabet sizes |U|,|V|,|W|")
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--threads", type=int, default=1)
    f.add_argument("--out", required=True)

    s = sub.add_parser("simulate", help="Monte Carlo run of the layered coding scheme")
    s.add_argument("--experiment", help="experiment JSON (scenario, aux, sim)")
    s.add_argument("--scenario")
    s.add_argument("--aux")
    s.add_argument("--n", type=int)
    s.add_argument("--delta", type=float)
    s.add_argument("--mode", choices=CHANNEL_MODES)
    s.add_argument("--seed", type=int)
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--oracle", action="store_true", help="add exact leakage and secure index")
    s.add_argument("--trials-csv", help="per-trial CSV path")
    s.add_argument("--threads", type=int, default=1, help="accepted for uniformity; trials run serially")
    s.add_argument("--out", required=True)

    v = sub.add_parser("verify", help="randomized invariant suites")
    v.add_argument("--scenario", default="dsbs")
    v.add_argument("--samples", type=int, default=1000)
    v.add_argument("--budget", type=int, default=4)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--threads", type=int, default=1)
    v.add_argument("--out")

    e = sub.add_parser("examples", help="copy the bundled scenario and aux files")
    e.add_argument("dest")

    r = sub.add_parser("replay", help="rerun the command recorded in a manifest")
    r.add_argument("manifest")
    return p


HANDLERS = {
    "capacity": cmd_capacity,
    "frontier": cmd_frontier,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
    "examples": cmd_examples,
    "replay": cmd_replay,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return HANDLERS[args.command](args, argv)
    except (io.ParseError, ModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except InfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.suggestion:
            print(f"suggestion: {json.dumps(exc.suggestion, sort_keys=True)}", file=sys.stderr)
        return EXIT_RESOURCE
    except HierLeakError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
