"""Command-line front end: lobe diagrams, point classification, roots,
parameter reduction and simulation.

Exit codes: 0 success (and `classify` of a stable point), 1 I/O failure,
2 rejected or unsupported parameters, 3 unstable point, 4 root-counting
contour passed too close to a root.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass

from . import charroots, lobes_delayed, lobes_instant, params, simulate, svg
from .errors import ContourTooClose, TurnstabError

EXIT_OK = 0
EXIT_IO = 1
EXIT_DOMAIN = 2
EXIT_UNSTABLE = 3
EXIT_CONTOUR = 4

LOBES_HEADER = ["variant", "n", "branch", "beta", "delta", "h"]
TRAJECTORY_HEADER = ["eta", "x1", "x2", "x3", "x4", "k"]


@dataclass(frozen=True)
class Preset:
    variant: str
    xi: float
    q: float
    delta_range: tuple
    h_range: tuple
    n_max: int


#: figure-matching parameter presets with their axis windows
PRESETS = {
    "fig4": Preset("delayed", 0.2, 12.0, (0.0, 42.0), (-8.0, 21.0), 1),
    "fig6": Preset("delayed", 0.2, 0.8, (0.0, 41.0), (-4.0, 21.0), 1),
    "fig7": Preset("instant", 0.2, 0.8, (0.0, 42.0), (0.0, 10.0), 1),
    "fig8": Preset("instant", 1.62, 0.8, (0.0, 360.0), (0.0, 1.5), 3),
}


@dataclass(frozen=True)
class RunConfig:
    """Resolved settings of one CLI invocation."""

    command: str
    variant: str | None = None
    xi: float | None = None
    q: float = 0.75
    n_max: int = 1
    samples: int = 256
    point: tuple | None = None          # (delta, h)
    out: str | None = None
    svg_out: str | None = None
    params_file: str | None = None
    axes: tuple | None = None           # ((delta_lo, delta_hi), (h_lo, h_hi))
    amplitude: float = 0.0
    eta_end: float = 60.0
    step: float = 1.0 / 32.0


def _resolve(args, need_point: bool = False) -> RunConfig:
    variant, xi, q = args.variant, getattr(args, "xi", None), getattr(args, "q", None)
    n_max = getattr(args, "n_max", None)
    axes = None
    preset = getattr(args, "preset", None)
    if preset is not None:
        ps = PRESETS[preset]
        variant = variant or ps.variant
        xi = xi if xi is not None else ps.xi
        q = q if q is not None else ps.q
        n_max = n_max if n_max is not None else ps.n_max
        axes = (ps.delta_range, ps.h_range)
    if q is None:
        q = 0.75
    point = None
    if need_point:
        if getattr(args, "delta", None) is None or getattr(args, "h", None) is None:
            raise TurnstabError("this command requires --delta and --h (or a preset point)")
        point = (args.delta, args.h)
    if variant is None or xi is None:
        raise TurnstabError("provide --preset, or --variant together with --xi")
    return RunConfig(
        command=args.command,
        variant=variant,
        xi=xi,
        q=q,
        n_max=n_max if n_max is not None else 1,
        samples=getattr(args, "samples", None) or 256,
        point=point,
        out=getattr(args, "out", None),
        svg_out=getattr(args, "svg", None),
        axes=axes,
    )


def _collect_branches(cfg: RunConfig):
    sampler = (
        lobes_delayed.sample_branches_delayed
        if cfg.variant == "delayed"
        else lobes_instant.sample_branches_instant
    )
    branches = []
    for n in range(1, cfg.n_max + 1):
        branches.extend(sampler(cfg.xi, cfg.q, n, cfg.samples))
    return branches


def cmd_lobes(cfg: RunConfig) -> int:
    branches = _collect_branches(cfg)
    rows = []
    # deterministic branch numbering: order of appearance within each lobe
    counter = {}
    for br in branches:
        counter[br.n] = counter.get(br.n, 0) + 1
        for beta, delta, h in br.points:
            rows.append(
                (cfg.variant, br.n, counter[br.n], f"{beta:.17g}", f"{delta:.17g}", f"{h:.17g}")
            )
    out = cfg.out or "lobes.csv"
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(LOBES_HEADER)
        writer.writerows(rows)
    if cfg.svg_out:
        if cfg.axes is not None:
            d_range, h_range = cfg.axes
        else:
            deltas = [p[1] for br in branches for p in br.points]
            hs = [p[2] for br in branches for p in br.points]
            d_hi = min(max(deltas, default=1.0), 10.0 * (max(1.0, cfg.xi) * 40.0))
            d_range = (0.0, d_hi)
            h_range = (min(hs, default=0.0), max(hs, default=1.0))
        markup = svg.render_lobes(
            branches,
            d_range,
            h_range,
            x_label="delta",
            y_label="h1" if cfg.variant == "delayed" else "h2",
            title=f"{cfg.variant} control, xi={cfg.xi:g}, q={cfg.q:g}",
        )
        with open(cfg.svg_out, "w") as fh:
            fh.write(markup)
    return EXIT_OK


def cmd_classify(cfg: RunConfig) -> int:
    delta, h = cfg.point
    p = charroots.CharParams(cfg.variant, cfg.xi, delta, h, cfg.q)
    v = charroots.verdict(p)
    word = "stable" if v.stable else "unstable"
    print(f"{word} unstable_count={v.unstable_count} margin={v.margin:.6g}")
    return EXIT_OK if v.stable else EXIT_UNSTABLE


def cmd_roots(cfg: RunConfig) -> int:
    delta, h = cfg.point
    p = charroots.CharParams(cfg.variant, cfg.xi, delta, h, cfg.q)
    v = charroots.verdict(p)
    print(f"unstable_count={v.unstable_count}")
    if v.rightmost_root is not None:
        r = v.rightmost_root
        print(f"root={r.real:.12g}{r.imag:+.12g}j")
        if abs(r.imag) > 1e-12:
            print(f"root={r.real:.12g}{-r.imag:+.12g}j")
    return EXIT_OK


def cmd_reduce(args) -> int:
    phys = params.load_params(args.params)
    dim = params.reduce(phys)
    for name in ("xi", "delta", "h1", "h2", "k_star", "K1", "k_r", "p", "c_gain", "q"):
        print(f"{name}={getattr(dim, name):.12g}")
    return EXIT_OK


def _write_trajectory(path: str, traj: simulate.Trajectory) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRAJECTORY_HEADER)
        for eta, state, k in zip(traj.eta_grid, traj.states, traj.k_values):
            writer.writerow([f"{eta:.17g}"] + [f"{v:.17g}" for v in state] + [f"{k:.17g}"])


def cmd_simulate(args) -> int:
    step = args.step if args.step is not None else 1.0 / 32.0
    eta_end = args.eta_end if args.eta_end is not None else 60.0
    amplitude = args.amplitude if args.amplitude is not None else 0.0
    if args.params is not None:
        if args.variant is None:
            raise TurnstabError("simulate with --params also needs --variant")
        phys = params.load_params(args.params)
        c = params.spindle_gain(phys)
        stat = params.stationary_state(phys, c)
        history = simulate.perturbed_stationary_history(stat, amplitude * stat.r_star)
        traj = simulate.integrate_nonlinear_transformed(
            args.variant, phys, c, history, eta_end, step
        )
    else:
        cfg = _resolve(args, need_point=True)
        phys = params.phys_from_dimensionless(
            cfg.xi, cfg.point[0], cfg.point[1], cfg.q, cfg.variant
        )
        sys_lin = simulate.linearized_system(cfg.variant, phys)
        history = simulate.constant_history((amplitude, 0.0, 0.0, 0.0))
        traj = simulate.integrate_linear(sys_lin, history, eta_end, step)
    out = args.out or "trajectory.csv"
    _write_trajectory(out, traj)
    print(f"growth_rate={traj.growth_rate:.12g}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="turnstab",
        description="Stability lobes and verification for spindle-speed "
        "feedback control of turning processes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, point=False):
        p.add_argument("--preset", choices=sorted(PRESETS))
        p.add_argument("--variant", choices=["delayed", "instant"])
        p.add_argument("--xi", type=float)
        p.add_argument("--q", type=float)
        if point:
            p.add_argument("--delta", type=float)
            p.add_argument("--h", type=float)

    p = sub.add_parser("lobes", help="sample stability boundary branches to CSV/SVG")
    add_common(p)
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--out")
    p.add_argument("--svg")

    p = sub.add_parser("classify", help="stability verdict for one (delta, h) point")
    add_common(p, point=True)

    p = sub.add_parser("roots", help="characteristic roots nearest the imaginary axis")
    add_common(p, point=True)

    p = sub.add_parser("reduce", help="reduce a physical parameter file")
    p.add_argument("--params", required=True)

    p = sub.add_parser("simulate", help="integrate a model and write a trajectory CSV")
    add_common(p, point=True)
    p.add_argument("--params")
    p.add_argument("--amplitude", type=float)
    p.add_argument("--eta-end", dest="eta_end", type=float)
    p.add_argument("--step", type=float)
    p.add_argument("--out")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "lobes":
            return cmd_lobes(_resolve(args))
        if args.command == "classify":
            return cmd_classify(_resolve(args, need_point=True))
        if args.command == "roots":
            return cmd_roots(_resolve(args, need_point=True))
        if args.command == "reduce":
            return cmd_reduce(args)
        return cmd_simulate(args)
    except ContourTooClose as exc:
        print(
            f"error: {exc} (try perturbing delta or h by a tiny amount)",
            file=sys.stderr,
        )
        return EXIT_CONTOUR
    except TurnstabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
