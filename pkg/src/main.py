import argparse
from dataclasses import replace
import json
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

from collision.first_order import first_order_ttc
from collision.star import second_order_ttc
from kinematics.search_config import SearchConfig
from kinematics.vectors import Vec2, VehicleState
from metrics.evaluation import TrialRunner, TrialSpec, summarize
from scenarios.builtin import UnknownScenario, builtin
from scenarios.series import CSV_FLOAT_FORMAT, run_series
from trajectory_data.loader import load_csv
from trajectory_data.pair_analysis import PairAnalyzer

LOG_DIR_ENV = "STAR_TTC_LOG_DIR"
EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


def setup_logging(log_dir: Optional[str] = None, level: int = logging.INFO):
    handlers: List[logging.Handler] = [logging.StreamHandler()]
    log_dir = log_dir or os.environ.get(LOG_DIR_ENV)
    if log_dir:
        path = Path(log_dir)
        path.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(path / "star_ttc.log"))

    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers
    )


def _config_flags() -> argparse.ArgumentParser:
    """Overrides for every SearchConfig field except the horizon, which each command documents itself"""
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("search settings")
    group.add_argument("--phi", type=float, default=5.0, help="contact distance between centres (m)")
    group.add_argument("--contact-tol", type=float, default=1e-6, help="slack on the contact distance (m)")
    group.add_argument("--region-radius", type=float, default=None,
                       help="search-region radius around a candidate point (m, default 2*phi)")
    group.add_argument("--lateral-threshold", type=float, default=1e-3,
                       help="lateral acceleration below which motion is straight (m/s^2)")
    group.add_argument("--rel-tol", type=float, default=1e-8, help="integrator relative tolerance")
    group.add_argument("--abs-tol", type=float, default=1e-9, help="integrator absolute tolerance (m)")
    group.add_argument("--refine-tol", type=float, default=1e-9, help="event-time bisection tolerance (s)")
    group.add_argument("--max-step", type=float, default=1.0, help="longest integrator step (s)")
    group.add_argument("--min-step", type=float, default=1e-12, help="shortest integrator step (s)")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="star-ttc",
        description="First- and second-order time to collision for pairs of vehicles",
    )
    parser.add_argument("--log-dir", default=None, help=f"also write star_ttc.log here (env {LOG_DIR_ENV})")
    parser.add_argument("--verbose", action="store_true", help="log search details at DEBUG level")
    config = _config_flags()
    commands = parser.add_subparsers(dest="command", required=True)

    pair = commands.add_parser("pair", parents=[config], help="TTC of one pair of vehicle states")
    for vehicle in ("i", "j"):
        for quantity, unit in (("p", "m"), ("v", "m/s"), ("a", "m/s^2")):
            pair.add_argument(f"--{quantity}{vehicle}", type=Vec2.parse, required=True, metavar="X,Y",
                              help=f"{quantity} of vehicle {vehicle} ({unit})")
    pair.add_argument("--order", type=int, choices=(1, 2), default=2, help="TTC order")
    pair.add_argument("--horizon", type=float, default=100.0, help="search window (s)")

    scenario = commands.add_parser("scenario", parents=[config], help="TTC series of a built-in scenario")
    scenario.add_argument("--id", type=int, required=True, help="scenario number, 1 to 5")
    scenario.add_argument("--dt", type=float, default=0.1, help="series timestep (s)")
    scenario.add_argument("--duration", type=float, default=10.0, help="simulated time (s)")
    scenario.add_argument("--horizon", type=float, default=20.0, help="second-order prediction horizon (s)")
    scenario.add_argument("--clearance", action="store_true", help="append the ground-truth d - phi column")
    scenario.add_argument("--out", default=None, help="CSV output path (default: standard output)")

    evaluate = commands.add_parser("evaluate", parents=[config], help="random trials against the fixed-step oracle")
    evaluate.add_argument("--trials", type=int, default=1001, help="number of trials")
    evaluate.add_argument("--seed", type=int, default=0, help="seed of the initial-condition generator")
    evaluate.add_argument("--oracle-dt", type=float, default=1e-3, help="oracle step (s)")
    evaluate.add_argument("--horizon", type=float, default=100.0, help="search window (s)")
    evaluate.add_argument("--fast-oracle", action="store_true", help="evaluate the oracle grid in numpy chunks")
    evaluate.add_argument("--timing", action="store_true", help="include wall-time statistics")
    evaluate.add_argument("--compare-steps", default=None, metavar="DT,DT,...",
                          help="emit the step-size comparison table for these oracle steps")
    evaluate.add_argument("--out", default=None, help="output path (default: standard output)")

    dataset = commands.add_parser("dataset", parents=[config], help="TTC series of a vehicle pair from a trajectory CSV")
    dataset.add_argument("--input", required=True, help="CSV with header vehicle_id,t,x,y,vx,vy")
    dataset.add_argument("--pair", required=True, metavar="A,B", help="the two vehicle ids")
    dataset.add_argument("--critical", type=float, default=5.0, help="critical TTC (s)")
    dataset.add_argument("--horizon", type=float, default=100.0, help="search window (s)")
    dataset.add_argument("--out", default=None, help="CSV output path (default: standard output)")
    dataset.add_argument("--summary", default=None, help="write the sub-critical counts as JSON here")
    return parser


class TtcCommands:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.logger = logging.getLogger(__name__)
        self.cfg = SearchConfig(
            phi=args.phi,
            contact_tol=args.contact_tol,
            region_radius=args.region_radius,
            horizon=args.horizon,
            lateral_threshold=args.lateral_threshold,
            integrator_rel_tol=args.rel_tol,
            integrator_abs_tol=args.abs_tol,
            refine_tol=args.refine_tol,
            max_step=args.max_step,
            min_step=args.min_step,
        )

    def _emit(self, text: str, out: Optional[str]):
        if out is None:
            sys.stdout.write(text)
        else:
            Path(out).write_text(text, encoding="utf-8")
            self.logger.info(f"wrote {out}")

    def pair(self) -> int:
        a = self.args
        state_i = VehicleState(p=a.pi, v=a.vi, a=a.ai)
        state_j = VehicleState(p=a.pj, v=a.vj, a=a.aj)
        if a.order == 1:
            outcome = first_order_ttc(state_i, state_j, self.cfg.phi)
        else:
            outcome = second_order_ttc(state_i, state_j, self.cfg).outcome
        print(outcome.format())
        return EXIT_OK

    def scenario(self) -> int:
        a = self.args
        try:
            sc = builtin(a.id)
        except UnknownScenario as e:
            self.logger.error(f"{e}")
            return EXIT_USAGE
        sc = replace(sc, step=a.dt, sim_duration=a.duration, prediction_horizon=a.horizon)
        series = run_series(sc, self.cfg)
        self._emit(series.to_csv(include_clearance=a.clearance), a.out)
        return EXIT_OK

    def evaluate(self) -> int:
        a = self.args
        spec = TrialSpec(seed=a.seed, n_trials=a.trials, phi=self.cfg.phi, horizon=self.cfg.horizon)
        runner = TrialRunner(spec, vectorized_oracle=a.fast_oracle, cfg=self.cfg)
        if a.compare_steps:
            dts = [float(dt) for dt in a.compare_steps.split(",")]
            table = runner.compare_step_sizes(dts)
            if not a.timing:
                table = table[["dt", "n_finite", "mean_abs_error", "std_error"]]
            self._emit(table.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n"), a.out)
            return EXIT_OK

        stats = runner.run(a.oracle_dt)
        self._emit(json.dumps(summarize(stats, include_timing=a.timing), indent=2) + "\n", a.out)
        return EXIT_OK

    def dataset(self) -> int:
        a = self.args
        ids = [part.strip() for part in a.pair.split(",")]
        if len(ids) != 2 or not all(ids):
            self.logger.error(f"--pair expects two vehicle ids 'A,B', got {a.pair!r}")
            return EXIT_USAGE
        samples = load_csv(a.input)
        missing = [vehicle_id for vehicle_id in ids if vehicle_id not in samples]
        if missing:
            raise ValueError(f"{a.input}: no samples for vehicle(s) {', '.join(missing)}")

        analysis = PairAnalyzer(self.cfg, critical=a.critical).analyze(samples[ids[0]], samples[ids[1]])
        self._emit(analysis.series.to_csv(), a.out)
        summary = json.dumps(analysis.summary(), indent=2) + "\n"
        if a.summary:
            Path(a.summary).write_text(summary, encoding="utf-8")
        else:
            self.logger.info(f"summary: {analysis.summary()}")
        return EXIT_OK

    def run(self) -> int:
        try:
            return getattr(self, self.args.command)()
        except (OSError, ValueError, RuntimeError) as e:
            self.logger.error(f"{self.args.command} failed: {e}")
            return EXIT_FAILURE


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_dir, logging.DEBUG if args.verbose else logging.INFO)
    try:
        commands = TtcCommands(args)
    except ValueError as e:
        parser.error(str(e))
    return commands.run()


if __name__ == "__main__":
    sys.exit(main())
