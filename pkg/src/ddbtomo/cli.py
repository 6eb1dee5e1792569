"""Command line front end.

Subcommands mirror the library: ``partitions`` and ``bases`` dump the
measurement design, ``circuits`` and ``element`` emit synthesized
measurement programs, ``experiment`` runs reconstruction sweeps to CSV
(with a companion figure), and ``error-sweep`` fits the misalignment
power law.  JSON outputs carry a top-level "schema": 1.  Exit codes:
0 success, 2 usage or input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import circuits as qc
from . import experiments, partitions, plotting
from .bases import basis_to_dict, family
from .linalg import NumericalError


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_partitions(args) -> int:
    ps = partitions.construct_partitions(args.dim)
    if args.format == "text":
        lines = [f"d={ps.dim} partitions={len(ps.partitions)}"]
        for t, part in enumerate(ps.partitions, start=1):
            cell = " ".join(f"({j},{k})" for j, k in part.pairs)
            if part.singletons:
                cell += "  singleton " + " ".join(str(c) for c in part.singletons)
            lines.append(f"T{t}: {cell}")
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps({"schema": 1, **partitions.to_dict(ps)}, indent=2) + "\n"
    _emit(text, args.out)
    return 0


def _ket_text(ket) -> str:
    if len(ket.terms) == 1:
        return f"|{ket.terms[0][0]}>"
    (j, _), (k, uk) = ket.terms
    sign = {1: "+ ", -1: "- ", 1j: "+ i", -1j: "- i"}[uk]
    return f"(|{j}> {sign}|{k}>)/sqrt(2)"


def cmd_bases(args) -> int:
    fam = family(args.dim)
    selected = fam.bases if not args.label else (fam[args.label],)
    if args.format == "text":
        lines = []
        for b in selected:
            vecs = ", ".join(_ket_text(v) for v in b.vectors)
            lines.append(f"{b.label}: {vecs}")
        text = "\n".join(lines) + "\n"
    elif args.label:
        text = json.dumps({"schema": 1, **basis_to_dict(selected[0])}, indent=2) + "\n"
    else:
        payload = {
            "schema": 1,
            "dim": fam.dim,
            "bases": [basis_to_dict(b) for b in selected],
        }
        text = json.dumps(payload, indent=2) + "\n"
    _emit(text, args.out)
    return 0


def _all_labels(n: int) -> list[str]:
    d = 1 << n
    labels = ["B0"]
    for t in range(1, d):
        labels += [f"B{t}", f"C{t}"]
    return labels


def cmd_circuits(args) -> int:
    labels = _all_labels(args.n) if args.label in (None, "all") else [args.label]
    if args.format == "qasm" and len(labels) > 1:
        raise ValueError("qasm output needs a single --label")
    sections = []
    payload = []
    for label in labels:
        spec = qc.synth_basis_circuit(args.n, label, args.mode)
        prog = qc.measurement_gates(spec)
        if args.format == "qasm":
            sections.append(qc.emit_qasm(prog))
        elif args.format == "json":
            payload.append(qc.spec_to_dict(spec))
        else:
            head = f"# {label} layer={''.join(spec.pauli_layer)}"
            if args.counts:
                head += (
                    f" gates-expanded={qc.gate_count(prog)}"
                    f" barenco-estimate={qc.gate_count(prog, 'barenco-estimate')}"
                )
            body = qc.emit_gate_list(prog)
            sections.append(head + ("\n" + body if body else ""))
    if args.format == "json":
        text = json.dumps({"schema": 1, "n": args.n, "specs": payload}, indent=2) + "\n"
    else:
        text = "\n\n".join(sections) + "\n"
    _emit(text, args.out)
    return 0


def cmd_element(args) -> int:
    el = qc.element_circuits(args.n, args.j, args.k, args.mode)
    recipe = {
        "formula": "rho_jk = (p_phi - i*p_psi) - (1-i)/2*(rho_jj + rho_kk)",
        "p_phi": f"phi program, outcome {el.outcome_plus}",
        "p_psi": f"psi program, outcome {el.outcome_plus}",
        "rho_jj": f"diag program, outcome {el.j}",
        "rho_kk": f"diag program, outcome {el.k}",
    }
    if args.format == "json":
        payload = {
            "schema": 1,
            "n": el.n,
            "j": el.j,
            "k": el.k,
            "s": el.s,
            "shift": el.shift,
            "outcome_plus": el.outcome_plus,
            "outcome_minus": el.outcome_minus,
            "recipe": recipe,
            "diag": qc.spec_to_dict(el.diag),
            "phi": qc.spec_to_dict(el.phi),
            "psi": qc.spec_to_dict(el.psi),
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = [
            f"entry ({el.j},{el.k}) of d=2^{el.n}: first differing bit s={el.s}, "
            f"suffix shift {el.shift}",
            f"extract: {recipe['formula']}",
            f"  p_phi: outcome {el.outcome_plus} of the phi program "
            f"(outcome {el.outcome_minus} reads the minus vector)",
            f"  p_psi: outcome {el.outcome_plus} of the psi program",
            f"  rho_jj, rho_kk: outcomes {el.j}, {el.k} of the diagonal program",
        ]
        for name, spec in (("phi", el.phi), ("psi", el.psi)):
            prog = qc.measurement_gates(spec)
            lines.append(f"{name} program ({spec.label}), layer {''.join(spec.pauli_layer)}:")
            body = qc.emit_gate_list(prog)
            lines += ["  " + ln for ln in body.splitlines()] if body else ["  (no gates)"]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("config must be a JSON object")
    return cfg


def _pick(args_value, cfg: dict, key: str, default):
    if args_value is not None:
        return args_value
    return cfg.get(key, default)


def cmd_experiment(args) -> int:
    cfg = _load_config(args.config)
    dim = _pick(args.dim, cfg, "dim", None)
    if dim is None:
        raise ValueError("experiment needs --dim (or dim in the config)")
    seed = _pick(args.seed, cfg, "seed", 0)
    trials = _pick(args.trials, cfg, "trials", 20)
    states = _pick(args.states, cfg, "states", ["random"])
    methods = _pick(args.methods, cfg, "methods", ["direct"])
    rank = _pick(args.rank, cfg, "rank", None)
    levels = _pick(args.settings_levels, cfg, "settings_levels", None)
    out = _pick(args.out, cfg, "out", "experiment")

    if args.exact or cfg.get("exact"):
        shots_list = [0]
    elif args.shots is not None:
        shots_list = args.shots
    elif args.num is not None:
        shots_list = [100 * 2**k for k in args.num]
    elif "shots" in cfg:
        shots_list = cfg["shots"]
    elif "num" in cfg:
        shots_list = [100 * 2**k for k in cfg["num"]]
    else:
        shots_list = [0]

    if levels:
        ranks = _pick(args.ranks, cfg, "ranks", None) or [rank or dim]
        rows = experiments.run_settings_sweep(
            dim, ranks=ranks, trials=trials, seed=seed, levels=levels
        )
    else:
        rows = experiments.run_shots_sweep(
            dim,
            states=states,
            methods=methods,
            shots_list=shots_list,
            trials=trials,
            seed=seed,
            rank=rank,
            band_r=_pick(args.band_r, cfg, "band_r", None),
            cs_m=_pick(args.cs_m, cfg, "cs_m", None),
        )
    csv_path = f"{out}.csv"
    summary_path = f"{out}_summary.csv"
    experiments.write_csv(rows, csv_path)
    experiments.write_csv(
        experiments.summarize(rows), summary_path, experiments.SUMMARY_COLUMNS
    )
    made = [csv_path, summary_path]
    if not args.no_plot:
        png_path = f"{out}.png"
        plotting.plot_experiment_rows(rows, png_path)
        made.append(png_path)
    print(f"wrote {', '.join(made)} ({len(rows)} rows)")
    return 0


def cmd_error_sweep(args) -> int:
    if args.eps is not None:
        eps = [float(e) for e in args.eps]
    else:
        eps = list(np.geomspace(args.eps_min, args.eps_max, args.eps_points))
    seed = 0 if args.seed is None else args.seed
    rows, slope = experiments.run_error_sweep(args.dim, eps, seed=seed)
    out = args.out or "error_sweep"
    csv_path = f"{out}.csv"
    experiments.write_csv(rows, csv_path, columns=("eps", "frobenius_sq"))
    made = [csv_path]
    if not args.no_plot:
        png_path = f"{out}.png"
        plotting.plot_error_sweep(rows, slope, png_path)
        made.append(png_path)
    slope_text = "n/a" if slope is None else repr(slope)
    print(f"wrote {', '.join(made)}; fitted log-log slope: {slope_text}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ddbtomo",
        description="dense-dual-basis tomography: design, simulate, reconstruct, synthesize",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partitions", help="print the pair-partition table")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_partitions)

    p = sub.add_parser("bases", help="dump measurement basis vectors")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--label", help="one basis label such as B3 (default: all)")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bases)

    p = sub.add_parser("circuits", help="emit measurement programs for d = 2^n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--label", help="basis label or 'all' (default)")
    p.add_argument("--mode", choices=("binary", "signed"), default="binary")
    p.add_argument("--format", choices=("gatelist", "qasm", "json"), default="gatelist")
    p.add_argument("--counts", action="store_true", help="annotate gate counts")
    p.add_argument("--out")
    p.set_defaults(func=cmd_circuits)

    p = sub.add_parser("element", help="measurement programs for one matrix entry")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=("binary", "signed"), default="binary")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_element)

    p = sub.add_parser("experiment", help="reconstruction sweep to CSV (+figure)")
    p.add_argument("--config", help="JSON config; explicit flags win")
    p.add_argument("--dim", type=int)
    p.add_argument("--rank", type=int)
    p.add_argument("--ranks", type=int, nargs="+")
    p.add_argument("--states", nargs="+",
                   choices=experiments.BENCHMARK_STATES + ("random",))
    p.add_argument("--methods", nargs="+",
                   choices=("direct", "sdp", "rankr", "paulics"))
    p.add_argument("--shots", type=int, nargs="+", help="shots per basis (0 = exact)")
    p.add_argument("--num", type=int, nargs="+",
                   help="shot budgets as 100 * 2^num")
    p.add_argument("--exact", action="store_true", help="exact probabilities")
    p.add_argument("--trials", type=int)
    p.add_argument("--settings-levels", type=int, nargs="+", dest="settings_levels",
                   help="band levels for a settings sweep (0 = full family)")
    p.add_argument("--band-r", type=int, dest="band_r")
    p.add_argument("--cs-m", type=int, dest="cs_m")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output prefix (default: experiment)")
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("error-sweep", help="misalignment power-law sweep")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--eps", type=float, nargs="+")
    p.add_argument("--eps-min", type=float, default=1e-2)
    p.add_argument("--eps-max", type=float, default=1e-1)
    p.add_argument("--eps-points", type=int, default=7)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output prefix (default: error_sweep)")
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=cmd_error_sweep)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        # str(KeyError) wraps the message in repr quotes
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
