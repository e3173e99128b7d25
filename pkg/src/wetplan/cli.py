"""Batch command line: cost, deploy, outage, and rfchains experiments.

Each run writes one CSV (fixed column order, LF endings, locale-independent
numbers) plus ``manifest.txt`` recording the toolkit version, the fully
resolved configuration in re-parseable ``config.<key> = value`` form, the
seed, and a SHA-256 digest per output file. Re-running the manifest's config
with the same seed reproduces the CSVs byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .ambient import AmbientMap, GaussianComponent, Rect
from .beampower import ChannelModel, sweep_rf_chains
from .channel import PathLossParams, Position2D, RicianParams
from .config import SCHEMAS, ConfigError, canonical, resolve_config
from .costs import CostParams, cents_to_dollars, sweep_devices, sweep_hardware_lifetime
from .deployment import DeploymentProblem, SolverConfig, optimize, received_power
from .harvesting import HarvesterCurve
from .outage import OutageConfig, sweep_density

__all__ = ["RunConfig", "RunManifest", "main", "run", "emit_plot_data", "verify_manifest"]

SUBCOMMANDS = ("cost", "deploy", "outage", "rfchains")


@dataclass(frozen=True)
class RunConfig:
    """One CLI invocation: a subcommand plus its inputs and output directory."""

    subcommand: str
    seed: int = 0
    config_path: str | None = None
    output_dir: str = "out"
    overrides: tuple[str, ...] = ()
    trials: int | None = None
    workers: int = 1
    plot_data: bool = False

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ConfigError(f"unknown subcommand {self.subcommand!r}; expected one of {SUBCOMMANDS}")
        if self.seed < 0 or self.seed >= 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")


@dataclass(frozen=True)
class RunManifest:
    """What a run did: version, resolved config, seed, duration, file digests."""

    version: str
    subcommand: str
    seed: int
    duration_seconds: float
    resolved: dict[str, str]
    outputs: dict[str, str]

    def to_text(self) -> str:
        lines = [
            f"toolkit_version = {self.version}",
            f"subcommand = {self.subcommand}",
            f"seed = {self.seed}",
            f"duration_seconds = {self.duration_seconds!r}",
        ]
        lines.extend(f"config.{key} = {value}" for key, value in sorted(self.resolved.items()))
        lines.extend(f"output.{name}.sha256 = {digest}" for name, digest in sorted(self.outputs.items()))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RunManifest":
        fields: dict[str, str] = {}
        resolved: dict[str, str] = {}
        outputs: dict[str, str] = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            key, _, value = line.partition(" = ")
            if key.startswith("config."):
                resolved[key[len("config."):]] = value
            elif key.startswith("output.") and key.endswith(".sha256"):
                outputs[key[len("output."):-len(".sha256")]] = value
            else:
                fields[key] = value
        return cls(
            version=fields.get("toolkit_version", ""),
            subcommand=fields.get("subcommand", ""),
            seed=int(fields.get("seed", "0")),
            duration_seconds=float(fields.get("duration_seconds", "0")),
            resolved=resolved,
            outputs=outputs,
        )


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def verify_manifest(manifest_path) -> bool:
    """Recompute the digests of the manifest's output files; True if all match."""
    path = Path(manifest_path)
    manifest = RunManifest.from_text(path.read_text())
    for name, digest in manifest.outputs.items():
        target = path.parent / name
        if not target.is_file() or _sha256(target) != digest:
            return False
    return True


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path: Path, header: list[str], rows: list[tuple]) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _pathloss_from(resolved) -> PathLossParams:
    return PathLossParams(
        exponent=resolved["pathloss.exponent"],
        fixed_loss_db=resolved["pathloss.fixed_loss_db"],
        reference_distance=resolved["pathloss.reference_distance"],
    )


def _run_cost(resolved, seed: int, workers: int):
    params = CostParams(
        devices_per_pb=resolved["devices_per_pb"],
        install_grid_pb=resolved["install_grid_pb"],
        install_green_pb=resolved["install_green_pb"],
        install_battery_pb=resolved["install_battery_pb"],
        device_install=resolved["device_install"],
        device_maintenance_fraction=resolved["device_maintenance_fraction"],
        battery_pb_annual_fraction=resolved["battery_pb_annual_fraction"],
        green_pb_replacement_fraction=resolved["green_pb_replacement_fraction"],
        green_pb_replacement_period_years=resolved["green_pb_replacement_period"],
        pb_avg_power_w=resolved["pb_avg_power_w"],
        grid_price_per_kwh=resolved["grid_price_per_kwh"],
        device_battery_life_years=resolved["device_battery_life"],
        horizon_years=resolved["horizon"],
        include_final_replacement=resolved["include_final_replacement"],
        annualize_green_replacement=resolved["annualize_green_replacement"],
    )
    if resolved["mode"] == "devices":
        breakdowns = sweep_devices(params, resolved["n_devices"])
    else:
        breakdowns = sweep_hardware_lifetime(
            params, resolved["horizons"], resolved["battery_lives"], resolved["lifetime_n_devices"]
        )
    header = [
        "scenario", "n_devices", "horizon", "battery_life",
        "device_install", "device_maintenance", "pb_install", "pb_opex", "total",
    ]
    rows = [
        (
            b.scenario,
            b.n_devices,
            b.horizon_years,
            b.battery_life_years,
            cents_to_dollars(b.device_install_cents),
            cents_to_dollars(b.device_maintenance_cents),
            cents_to_dollars(b.pb_install_cents),
            cents_to_dollars(b.pb_opex_cents),
            cents_to_dollars(b.grand_total_cents),
        )
        for b in breakdowns
    ]
    return header, rows


def _run_deploy(resolved, seed: int, workers: int):
    x_min, y_min, x_max, y_max = resolved["map.area"]
    amap = AmbientMap(
        components=tuple(
            GaussianComponent(w, Position2D(x, y), width) for w, x, y, width in resolved["map.components"]
        ),
        area=Rect(x_min, y_min, x_max, y_max),
    )
    devices = tuple(Position2D(x, y) for x, y in resolved["devices"])
    problem = DeploymentProblem(
        devices=devices,
        ambient_map=amap,
        k=resolved["k"],
        cap=resolved["cap"],
        pathloss=_pathloss_from(resolved),
    )
    solver = SolverConfig(
        n_starts=resolved["solver.n_starts"],
        greedy_grid=resolved["solver.greedy_grid"],
        nm_max_iter=resolved["solver.nm_max_iter"],
    )
    solution = optimize(problem, solver, seed=seed)
    header = ["row_type", "index", "x", "y", "tx_power_w", "received_power_w", "is_worst"]
    rows = []
    for i, (pb, tx) in enumerate(zip(solution.pb_positions, solution.per_pb_tx_power)):
        rows.append(("pb", i, pb.x, pb.y, tx, "", ""))
    for j, device in enumerate(devices):
        rows.append(
            (
                "device",
                j,
                device.x,
                device.y,
                "",
                received_power(device, solution.pb_positions, problem),
                int(j == solution.worst_device_index),
            )
        )
    return header, rows


def _run_outage(resolved, seed: int, workers: int):
    base = OutageConfig(
        density=0.0,
        disk_radius=resolved["disk_radius"],
        tx_power=resolved["tx_power"],
        pathloss=_pathloss_from(resolved),
        rician=RicianParams(resolved["rician.k_factor"]),
        target=resolved["target"],
        arch="single",
        n_antennas=resolved["n_antennas"],
        curve=HarvesterCurve(resolved["curve.breakpoints"]),
        trials=resolved["trials"],
        seed=seed,
    )
    header = ["density", "architecture", "antennas", "trials", "outage", "ci95"]
    rows = []
    for arch in resolved["archs"]:
        config = dataclasses.replace(base, arch=arch)
        for density, result in zip(resolved["densities"], sweep_density(config, resolved["densities"], workers)):
            rows.append(
                (density, arch, base.n_antennas, result.trials, result.outage_estimate, result.ci95_halfwidth)
            )
    return header, rows


def _run_rfchains(resolved, seed: int, workers: int):
    model = ChannelModel(
        pathloss=_pathloss_from(resolved),
        rician=RicianParams(resolved["rician.k_factor"]),
        disk_radius=resolved["disk_radius"],
    )
    devices = (
        [Position2D(x, y) for x, y in resolved["devices"]]
        if resolved["devices"]
        else resolved["n_devices"]
    )
    sweep = sweep_rf_chains(
        devices,
        resolved["gamma"],
        resolved["m_values"],
        model=model,
        seed=seed,
        pa_efficiency=resolved["pa_efficiency"],
        p_rf=resolved["p_rf_chain_w"],
        tol=resolved["solver.tol"],
        n_randomizations=resolved["solver.randomizations"],
    )
    header = ["m", "tx_power_w", "consumption_w", "is_optimum"]
    rows = [
        (pt.n_rf, pt.tx_power, pt.total_consumption, int(pt.n_rf == sweep.optimum_n_rf))
        for pt in sweep.points
    ]
    return header, rows


_RUNNERS = {
    "cost": _run_cost,
    "deploy": _run_deploy,
    "outage": _run_outage,
    "rfchains": _run_rfchains,
}


def _read_rows(csv_path) -> tuple[list[str], list[list[str]]]:
    with open(csv_path, newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"empty CSV: {csv_path}") from None
        rows = list(reader)
    if not rows:
        raise ValueError(f"CSV has no data rows: {csv_path}")
    return header, rows


def emit_plot_data(csv_path) -> str:
    """Render a run's CSV as gnuplot-style columnar text, one block per series."""
    header, rows = _read_rows(csv_path)
    out: list[str] = []

    def block(title: str, columns: list[str], data_rows) -> None:
        if out:
            out.append("")
            out.append("")
        out.append(f"# series: {title}")
        out.append("# columns: " + " ".join(columns))
        out.extend(" ".join(str(v) for v in row) for row in data_rows)

    col = {name: i for i, name in enumerate(header)}
    if "scenario" in col:
        varying = {r[col["n_devices"]] for r in rows}
        x_name = "n_devices" if len(varying) > 1 else "horizon"
        out.append(f"# cost sweep: x = {x_name}, y = total cost (USD)")
        scenarios = sorted({r[col["scenario"]] for r in rows})
        for scenario in scenarios:
            series = [r for r in rows if r[col["scenario"]] == scenario]
            if x_name == "n_devices":
                block(scenario, [x_name, "total"], ((r[col[x_name]], r[col["total"]]) for r in series))
            else:
                for life in sorted({r[col["battery_life"]] for r in series}, key=float):
                    sub = [r for r in series if r[col["battery_life"]] == life]
                    block(
                        f"{scenario} battery_life={life}",
                        [x_name, "total"],
                        ((r[col[x_name]], r[col["total"]]) for r in sub),
                    )
    elif "architecture" in col:
        out.append("# outage vs density: x = transmitters per m^2, y = outage probability")
        pairs = sorted({(r[col["architecture"]], r[col["antennas"]]) for r in rows})
        for arch, antennas in pairs:
            series = [r for r in rows if r[col["architecture"]] == arch and r[col["antennas"]] == antennas]
            block(
                f"{arch} antennas={antennas}",
                ["density", "outage", "ci95"],
                ((r[col["density"]], r[col["outage"]], r[col["ci95"]]) for r in series),
            )
    elif "m" in col:
        best = [r for r in rows if r[col["is_optimum"]] == "1"]
        out.append("# consumption vs RF chains: x = active chains, y = beacon consumption (W)")
        if best:
            out.append(f"# optimum at m = {best[0][col['m']]}")
        block(
            "consumption",
            ["m", "tx_power_w", "consumption_w", "is_optimum"],
            ((r[col["m"]], r[col["tx_power_w"]], r[col["consumption_w"]], r[col["is_optimum"]]) for r in rows),
        )
    elif "row_type" in col:
        out.append("# deployment: positions in meters; powers in watts")
        for kind, columns in (("pb", ["x", "y", "tx_power_w"]), ("device", ["x", "y", "received_power_w", "is_worst"])):
            series = [r for r in rows if r[col["row_type"]] == kind]
            block(kind, columns, ((tuple(r[col[c]] for c in columns)) for r in series))
    else:
        raise ValueError(f"unrecognized CSV header: {header}")
    return "\n".join(out) + "\n"


def run(rc: RunConfig) -> int:
    """Execute one run; returns the process exit status.

    On any failure every partially written output is removed.
    """
    started = time.perf_counter()
    out_dir = Path(rc.output_dir)
    created: list[Path] = []
    try:
        schema = SCHEMAS[rc.subcommand]
        overrides = list(rc.overrides)
        if rc.trials is not None:
            if rc.subcommand != "outage":
                raise ConfigError("--trials only applies to the outage subcommand")
            overrides.append(f"trials={rc.trials}")
        resolved = resolve_config(schema, rc.config_path, overrides)

        out_dir.mkdir(parents=True, exist_ok=True)
        header, rows = _RUNNERS[rc.subcommand](resolved, rc.seed, rc.workers)
        csv_path = out_dir / f"{rc.subcommand}.csv"
        write_csv(csv_path, header, rows)
        created.append(csv_path)
        if rc.plot_data:
            dat_path = out_dir / f"{rc.subcommand}.dat"
            dat_path.write_text(emit_plot_data(csv_path))
            created.append(dat_path)

        manifest = RunManifest(
            version=__version__,
            subcommand=rc.subcommand,
            seed=rc.seed,
            duration_seconds=time.perf_counter() - started,
            resolved={name: canonical(schema[name], value) for name, value in resolved.items()},
            outputs={p.name: _sha256(p) for p in created},
        )
        manifest_path = out_dir / "manifest.txt"
        manifest_path.write_text(manifest.to_text())
        return 0
    except Exception as err:  # argparse-level issues never reach here
        for path in created:
            path.unlink(missing_ok=True)
        print(f"error: {err}", file=sys.stderr)
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wetplan",
        description="Planning and simulation batches for wireless energy transfer networks",
    )
    parser.add_argument("--version", action="version", version=f"wetplan {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    helps = {
        "cost": "total-cost comparison of device powering scenarios",
        "deploy": "max-min placement of ambient-powered beacons",
        "outage": "ambient harvesting outage vs transmitter density",
        "rfchains": "beacon consumption vs number of RF chains",
    }
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--config", help="path to a key = value config file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config key (repeatable)")
        p.add_argument("--seed", type=int, default=0, help="64-bit unsigned run seed (default 0)")
        p.add_argument("--out", default="out", help="output directory (default ./out)")
        p.add_argument("--workers", type=int, default=1, help="parallel workers for sweeps (default 1)")
        p.add_argument("--plot-data", action="store_true", help="also emit gnuplot-style .dat series")
        if name == "outage":
            p.add_argument("--trials", type=int, help="Monte Carlo trials per point")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rc = RunConfig(
            subcommand=args.subcommand,
            seed=args.seed,
            config_path=args.config,
            output_dir=args.out,
            overrides=tuple(args.set),
            trials=getattr(args, "trials", None),
            workers=args.workers,
            plot_data=args.plot_data,
        )
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    return run(rc)


if __name__ == "__main__":
    sys.exit(main())
