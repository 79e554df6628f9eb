"""Command-line interface.

Commands
--------
conventions  emit the normalization sheet (chart, product, Haar, modular)
             for each implemented group
verify       run the verification suites, write a JSON report, exit 0/1
analyze      transform a signal CSV into coefficients (CSV + JSON header)
synthesize   reconstruct a signal from a coefficient file
report       emit orthogonality / kernel / semi-invariance / divergence
             tables as CSV for plotting

Configuration comes from flags, optionally seeded by a JSON config file
(--config); flags win.  Reports are deterministic: fixed seeds, no
timestamps, sorted keys.  Exit codes: 0 pass, 1 check failure, 2 usage/IO
error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import configs
from .groups import (
    conventions_text,
    haar_grid,
    make_affine,
    make_exotic,
    make_exotic_quotient,
    make_polarized_wh,
    make_standard_wh,
)
from .measures import center_divergence_probe
from .states import (
    DiscretizedState,
    gaussian_state,
    load_state_csv,
    morlet_state,
    norm,
    save_grid_json,
    save_state_csv,
)
from .transforms import (
    analyze,
    duflo_moore,
    kernel,
    load_result_csv,
    orthogonality_check,
    save_result_csv,
    semi_invariance_check,
    synthesize,
)
from .verify import run_suites

ALL_GROUPS = ["wh", "affine", "exotic"]


def _fail_usage(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return 2


def _dump_json(path, payload) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _resolve_config(args) -> dict:
    """Merge an optional JSON config file under the flags (flags win)."""
    cfg = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            cfg.update(json.load(fh))
    for key, value in vars(args).items():
        # IO destinations are not analysis parameters; keeping them out makes
        # reports byte-identical regardless of where they are written
        if key in ("config", "func", "output", "outdir") or value is None:
            continue
        cfg[key] = value
    return cfg


def cmd_conventions(args) -> int:
    groups = {
        "wh": [make_polarized_wh(1), make_standard_wh(1)],
        "affine": [make_affine(1)],
        "exotic": [make_exotic(1), make_exotic_quotient(1)],
    }
    selected = ALL_GROUPS if args.group == "all" else [args.group]
    text = "\n".join(
        conventions_text(g) for name in selected for g in groups[name]
    )
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    groups = ALL_GROUPS if args.group == "all" else [args.group]
    config = _resolve_config(args)
    report = run_suites(groups, seed=args.seed, psi_kind=getattr(args, "psi", None))
    report["config"] = {k: v for k, v in sorted(config.items())}
    _dump_json(args.output, report)
    if not args.output:
        pass
    else:
        n_fail = sum(
            1 for checks in report["groups"].values() for c in checks if not c["passed"]
        )
        print(f"{report['n_checks']} checks, {n_fail} failed -> {args.output}")
    return 0 if report["all_passed"] else 1


def _analysis_setup(group: str, psi_kind: str, psi_file):
    if group == "gabor":
        setup = configs.gabor_setup()
        rep = setup.proj
        grid = setup.x_grid
        state_grid = setup.state_grid
        dm = duflo_moore("gabor")
    elif group == "affine":
        setup = configs.affine_setup()
        rep = setup.rep
        grid = setup.x_grid
        state_grid = setup.state_grid
        dm = duflo_moore("affine")
    else:
        raise ValueError(f"analysis supports gabor|affine, not {group!r}")
    if psi_kind == "gaussian":
        psi = gaussian_state(state_grid)
    elif psi_kind == "morlet":
        psi = morlet_state(state_grid)
    elif psi_kind == "file":
        if not psi_file:
            raise ValueError("--psi file requires --psi-file")
        psi = load_state_csv(psi_file, state_grid)
    else:
        raise ValueError(f"unknown analyzing vector {psi_kind!r}")
    return rep, grid, state_grid, dm, psi


def cmd_analyze(args) -> int:
    try:
        rep, grid, state_grid, dm, psi = _analysis_setup(args.group, args.psi, args.psi_file)
        phi = load_state_csv(args.input, state_grid if args.assume_grid else None)
    except (ValueError, OSError) as exc:
        return _fail_usage(str(exc))
    if phi.grid != state_grid:
        return _fail_usage(
            f"input signal grid {phi.grid.counts} does not match the configuration "
            f"grid {state_grid.counts}"
        )
    result = analyze(rep, psi, phi, grid, dm_norm=dm.norm_of(psi))
    csv_path, json_path = save_result_csv(args.output, result)
    report = {
        "command": "analyze",
        "group": args.group,
        "psi": args.psi,
        "coefficients": csv_path,
        "header": json_path,
        "energy": result.energy(),
        "signal_norm_sq": norm(phi) ** 2,
        "shell_fraction": result.meta["shell_fraction"],
        "clipped": result.meta["clipped"],
        # fully resolved configuration
        "state_grid": {
            "offsets": list(state_grid.offsets),
            "spacings": list(state_grid.spacings),
            "counts": list(state_grid.counts),
        },
        "transform_box": [list(b) for b in result.grid.box],
        "transform_resolution": list(result.grid.resolution),
        "dm_norm": result.dm_norm,
    }
    _dump_json(args.output + ".report.json", report)
    print(f"coefficients -> {csv_path}")
    return 0


def cmd_synthesize(args) -> int:
    try:
        rep, grid, state_grid, dm, psi = _analysis_setup(args.group, args.psi, args.psi_file)
        result = load_result_csv(args.coefficients, grid)
    except (ValueError, OSError) as exc:
        return _fail_usage(str(exc))
    if result.dm_norm is None:
        result.dm_norm = dm.norm_of(psi)
    state = synthesize(result, rep, psi)
    save_state_csv(args.output, state)
    save_grid_json(args.output + ".grid.json", state.grid)
    report = {"command": "synthesize", "group": args.group, "output": args.output}
    if args.reference:
        try:
            ref = load_state_csv(args.reference, state_grid)
        except (ValueError, OSError) as exc:
            return _fail_usage(str(exc))
        diff = norm(DiscretizedState(state.samples - ref.samples, state.grid))
        report["round_trip_relative_error"] = diff / max(norm(ref), 1e-300)
    _dump_json(args.output + ".report.json", report)
    print(f"signal -> {args.output}")
    return 0


def _write_table(path, header: list[str], rows) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(f"{v:.17g}" if isinstance(v, float) else str(v) for v in row) + "\n")


def cmd_report(args) -> int:
    os.makedirs(args.outdir, exist_ok=True)
    written = []

    # orthogonality tables
    rows = []
    gab = configs.gabor_setup()
    dm = duflo_moore("gabor")
    s = gab.states
    for label, (p1, p2, f1, f2) in {
        "gauss/gauss": (s["gauss"], s["gauss"], s["gauss"], s["gauss"]),
        "hermite1/gauss": (s["hermite1"], s["hermite1"], s["gauss"], s["gauss"]),
        "mix/hermite2": (s["mix"], s["mix"], s["hermite2"], s["hermite2"]),
    }.items():
        lhs, rhs, rel = orthogonality_check(gab.proj, p1, p2, f1, f2, dm, gab.x_grid)
        rows.append(["gabor", label, lhs.real, lhs.imag, rhs.real, rhs.imag, rel])
    aff = configs.affine_setup()
    dma = duflo_moore("affine")
    sa = aff.states
    for label, (p1, p2, f1, f2) in {
        "morlet/gauss_mod3": (sa["morlet"], sa["morlet"], sa["gauss_mod3"], sa["gauss_mod3"]),
        "dog2/dog4": (sa["dog2"], sa["dog4"], sa["gauss_mod"], sa["gauss_mod2"]),
    }.items():
        lhs, rhs, rel = orthogonality_check(aff.rep, p1, p2, f1, f2, dma, aff.x_grid)
        rows.append(["affine", label, lhs.real, lhs.imag, rhs.real, rhs.imag, rel])
    exo = configs.exotic_setup()
    dme = duflo_moore("exotic")
    se = exo.states
    for label, (p1, p2, f1, f2) in {
        "psi/phi": (se["psi"], se["psi"], se["phi"], se["phi"]),
        "psi2/phi2": (se["psi"], se["psi2"], se["phi"], se["phi2"]),
    }.items():
        lhs, rhs, rel = orthogonality_check(exo.proj, p1, p2, f1, f2, dme, exo.x_grid)
        rows.append(["exotic", label, lhs.real, lhs.imag, rhs.real, rhs.imag, rel])
    path = os.path.join(args.outdir, "orthogonality.csv")
    _write_table(path, ["group", "pair", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "relerr"], rows)
    written.append(path)

    # kernel table (gabor)
    rng = np.random.default_rng(args.seed)
    rows = []
    for _ in range(12):
        g1 = rng.uniform(-2, 2, 2)
        g2 = rng.uniform(-2, 2, 2)
        val = kernel(gab.proj, s["gauss"], g1, g2, 1.0)
        rows.append([g1[0], g1[1], g2[0], g2[1], val.real, val.imag])
    path = os.path.join(args.outdir, "kernel.csv")
    _write_table(path, ["p1", "q1", "p2", "q2", "re", "im"], rows)
    written.append(path)

    # semi-invariance table (affine)
    rows = []
    for a in [0.25, 0.5, 1.0, 2.0, 4.0]:
        d = semi_invariance_check(aff.rep, dma, np.array([0.0, a]), [sa["morlet"]])
        rows.append([a, float(aff.group.modular(np.array([0.0, a]))) ** 0.5, d])
    path = os.path.join(args.outdir, "semi_invariance.csv")
    _write_table(path, ["a", "delta_sqrt", "defect"], rows)
    written.append(path)

    # divergence probe table (wh)
    xm = haar_grid(gab.x_group, [(-6, 6)] * 2, [24] * 2)
    r_list = [2.0, 4.0, 8.0, 16.0]
    partials, slope, x_int = center_divergence_probe(
        gab.rep, gab.subgroup, s["gauss"], s["hermite1"], r_list, xm
    )
    rows = [[r, 2.0 * r, p] for r, p in zip(r_list, partials)]
    rows.append(["slope_fit", "", slope])
    rows.append(["x_integral", "", x_int])
    path = os.path.join(args.outdir, "divergence_probe.csv")
    _write_table(path, ["R", "k_box_measure", "partial_integral"], rows)
    written.append(path)

    # conventions sheet
    path = os.path.join(args.outdir, "conventions.txt")
    with open(path, "w") as fh:
        for g in (make_polarized_wh(1), make_standard_wh(1), make_affine(1), make_exotic(1), make_exotic_quotient(1)):
            fh.write(conventions_text(g) + "\n")
    written.append(path)

    for p in written:
        print(f"wrote {p}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groupwave",
        description="verified coherent-state and wavelet transforms from group representations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("conventions", help="emit normalization sheets")
    p.add_argument("--group", choices=ALL_GROUPS + ["all"], default="all")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_conventions)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--group", choices=ALL_GROUPS + ["all"], default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--psi", choices=["gaussian", "morlet"], default=None,
                   help="extra analyzing vector whose admissibility status is "
                        "reported (expected-negative outcomes still pass)")
    p.add_argument("--config", default=None, help="JSON config file (flags win)")
    p.add_argument("--output", default=None, help="report path (default stdout)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("analyze", help="signal CSV -> coefficient CSV")
    p.add_argument("--group", choices=["gabor", "affine"], required=True)
    p.add_argument("--psi", choices=["gaussian", "morlet", "file"], default=None)
    p.add_argument("--psi-file", default=None)
    p.add_argument("--input", required=True, help="signal CSV (index,x,re,im)")
    p.add_argument("--output", required=True, help="output path prefix")
    p.add_argument("--assume-grid", action="store_true",
                   help="read the signal onto the configuration grid")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("synthesize", help="coefficient CSV -> signal CSV")
    p.add_argument("--group", choices=["gabor", "affine"], required=True)
    p.add_argument("--psi", choices=["gaussian", "morlet", "file"], default=None)
    p.add_argument("--psi-file", default=None)
    p.add_argument("--coefficients", required=True, help="coefficient path prefix")
    p.add_argument("--output", required=True, help="signal CSV path")
    p.add_argument("--reference", default=None, help="original signal for round-trip error")
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("report", help="emit verification tables as CSV")
    p.add_argument("--outdir", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already
        return int(exc.code) if exc.code is not None else 2
    # default psi per group
    if getattr(args, "psi", None) is None and hasattr(args, "psi"):
        args.psi = {"gabor": "gaussian", "affine": "morlet"}.get(
            getattr(args, "group", ""), "gaussian"
        )
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        return _fail_usage(str(exc))


if __name__ == "__main__":
    sys.exit(main())
