"""Command-line front end.

Exit codes: 0 success, 1 a property violation was found, 2 input error,
3 invariant violation.  Rationals are printed as "p/q" strings and reals
with 9 significant digits, so output is byte-stable for fixed inputs and
seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .aligned import AlignedAllocation, AlignedProfile, NotInFamily, Theta, characterize, f_theta
from .general import DemandPair, MechanismOracle, allocate, mechanism
from .intervals import ONE, ZERO, IntervalSet, format_fraction, interval, to_fraction
from .protocol import OracleProtocolError, SubprocessOracle, serve_oracle
from .reductions import ratio_tuple
from .verify import proportional_overlap, run_ic_suite
from . import welfare

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_INVARIANT = 3


class InputError(Exception):
    """Anything wrong with what the user handed us."""


def _real(x: float) -> float:
    # round to the printed precision so JSON numbers match the CSV contract
    return float(welfare.format_real(x))


def _parse_rational(text: str, name: str) -> Fraction:
    try:
        return to_fraction(text)
    except (ValueError, TypeError) as exc:
        raise InputError(f"bad value for {name}: {exc}") from exc


def _parse_theta(text: str) -> Theta:
    try:
        return Theta(_parse_rational(text, "theta"))
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _parse_unit(text: str, name: str) -> Fraction:
    value = _parse_rational(text, name)
    if value < ZERO or value > ONE:
        raise InputError(f"{name} must lie in [0, 1], got {value}")
    return value


def _load_interval_set(path: str) -> IntervalSet:
    try:
        with open(path) as handle:
            payload = json.load(handle)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    try:
        return IntervalSet.from_json(payload)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _default_seed() -> int:
    raw = os.environ.get("CAKE_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError as exc:
        raise InputError(f"CAKE_SEED must be an integer, got {raw!r}") from exc


def _resolve_seed(args) -> int:
    return args.seed if args.seed is not None else _default_seed()


def _build_mechanism(args) -> tuple[MechanismOracle, str]:
    """Pick the mechanism a verification command should drive."""
    if getattr(args, "oracle_cmd", None):
        oracle = SubprocessOracle(args.oracle_cmd)
        return oracle, f"oracle:{args.oracle_cmd}"
    spec = args.mechanism
    if spec == "proportional":
        return proportional_overlap, "proportional"
    if spec.startswith("theta:"):
        theta = _parse_theta(spec.split(":", 1)[1])
        return mechanism(theta), f"theta:{format_fraction(theta.value)}"
    raise InputError(
        f"unknown mechanism {spec!r}; expected 'theta:<rational>' or 'proportional'"
    )


def _emit(obj: dict, stream=None) -> None:
    print(json.dumps(obj, indent=2), file=stream or sys.stdout)


# -- subcommands -----------------------------------------------------------

def cmd_allocate(args) -> int:
    theta = _parse_theta(args.theta)
    A = _load_interval_set(args.demand_a)
    B = _load_interval_set(args.demand_b)
    demands = DemandPair(A, B)  # zero-measure demand surfaces as exit 3
    alloc = allocate(theta, demands)
    ratios = ratio_tuple(A, B, alloc.C, alloc.D)
    _emit(
        {
            "C": alloc.C.to_json(),
            "D": alloc.D.to_json(),
            "alpha": format_fraction(ratios.alpha),
            "beta": format_fraction(ratios.beta),
            "gamma": format_fraction(ratios.gamma),
            "delta": format_fraction(ratios.delta),
        }
    )
    return EXIT_OK


def cmd_aligned(args) -> int:
    theta = _parse_theta(args.theta)
    profile = AlignedProfile(_parse_unit(args.a, "a"), _parse_unit(args.b, "b"))
    result = f_theta(theta, profile)
    _emit({"c": format_fraction(result.c), "d": format_fraction(result.d)})
    return EXIT_OK


def _open_out(args):
    if args.out is None:
        return sys.stdout, False
    return open(args.out, "w"), True


def cmd_sweep(args) -> int:
    theta = _parse_theta(args.theta)
    step = _parse_unit(args.grid, "grid step")
    reports = welfare.sweep(theta, step)
    stream, owned = _open_out(args)
    try:
        if args.format == "csv":
            welfare.write_welfare_csv(reports, stream)
        else:
            rows = [
                {
                    "theta": format_fraction(r.theta.value),
                    "a": format_fraction(r.profile.a),
                    "b": format_fraction(r.profile.b),
                    "sw_mech": _real(r.sw_mechanism),
                    "sw_max": _real(r.sw_max),
                    "eta": _real(r.eta),
                    "case": r.case_label.value,
                }
                for r in reports
            ]
            print(json.dumps(rows, indent=2), file=stream)
    finally:
        if owned:
            stream.close()
    return EXIT_OK


def cmd_theta_sweep(args) -> int:
    step_theta = _parse_unit(args.grid_theta, "theta grid step")
    step_ab = _parse_unit(args.grid_ab, "demand grid step")
    rows = welfare.theta_sweep(step_theta, step_ab, refine_iters=args.refine)
    stream, owned = _open_out(args)
    try:
        if args.format == "csv":
            welfare.write_theta_sweep_csv(rows, stream)
        else:
            payload = [
                {
                    "theta": format_fraction(r.theta),
                    "eta_min": _real(r.eta_min),
                    "argmin_a": format_fraction(r.argmin.a),
                    "argmin_b": format_fraction(r.argmin.b),
                    "eta_probe_wide_a": _real(r.eta_probe_wide_a),
                    "eta_probe_wide_b": _real(r.eta_probe_wide_b),
                }
                for r in rows
            ]
            print(json.dumps(payload, indent=2), file=stream)
    finally:
        if owned:
            stream.close()
    return EXIT_OK


def cmd_pot(args) -> int:
    try:
        p = float(Fraction(args.p))
        resolution = float(Fraction(args.resolution))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad numeric argument: {exc}") from exc
    try:
        tau_star, bound = welfare.minimize_pot_bound(p, resolution, args.refine)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit({"p": _real(p), "tau_star": _real(tau_star), "bound": _real(bound)})
    return EXIT_OK


def cmd_verify_ic(args) -> int:
    mech, mech_id = _build_mechanism(args)
    if args.slack is not None:
        slack = _parse_rational(args.slack, "slack")
    elif isinstance(mech, SubprocessOracle):
        # external oracles may round through floats; built-ins are exact
        slack = Fraction(1, 10**9)
    else:
        slack = ZERO
    seed = _resolve_seed(args)
    try:
        report = run_ic_suite(
            mech,
            scenarios=args.trials,
            seed=seed,
            mechanism_id=mech_id,
            stop_on_violation=args.stop_on_violation,
            slack=slack,
        )
    finally:
        if isinstance(mech, SubprocessOracle):
            mech.close()
    _emit(report.to_json())
    violated = report.worst_gain > slack or report.wasteful is not None
    return EXIT_VIOLATION if violated else EXIT_OK


class _NotAlignedResponse(Exception):
    def __init__(self, profile: AlignedProfile, C: IntervalSet, D: IntervalSet):
        super().__init__("oracle response is not an aligned allocation")
        self.profile = profile
        self.C = C
        self.D = D


def _aligned_bridge(oracle: MechanismOracle):
    """View a general-model oracle as an aligned one, demanding prefix/suffix.

    The response must itself be aligned (a prefix piece for player I, a
    suffix piece for player II); anything else cannot be a member of the
    aligned family and is reported as such.
    """

    def run(profile: AlignedProfile) -> AlignedAllocation:
        A = interval(ZERO, profile.a)
        B = interval(ONE - profile.b, ONE)
        alloc = oracle(A, B)
        c = alloc.C.measure
        d = alloc.D.measure
        if (
            c + d > ONE
            or alloc.C != interval(ZERO, c)
            or alloc.D != interval(ONE - d, ONE)
        ):
            raise _NotAlignedResponse(profile, alloc.C, alloc.D)
        return AlignedAllocation(c, d)

    return run


def _aligned_json(a: AlignedAllocation) -> dict:
    return {"c": format_fraction(a.c), "d": format_fraction(a.d)}


def cmd_characterize(args) -> int:
    step = _parse_unit(args.grid, "grid step")
    with SubprocessOracle(args.oracle_cmd) as oracle:
        try:
            # the protocol serves general-model demands, which must be nonempty
            result = characterize(_aligned_bridge(oracle), step, positive_only=True)
        except _NotAlignedResponse as exc:
            _emit(
                {
                    "not_in_family": {
                        "a": format_fraction(exc.profile.a),
                        "b": format_fraction(exc.profile.b),
                        "C": exc.C.to_json(),
                        "D": exc.D.to_json(),
                        "reason": "response is not aligned",
                    }
                }
            )
            return EXIT_VIOLATION
    if isinstance(result, Theta):
        _emit({"theta": format_fraction(result.value)})
        return EXIT_OK
    witness: NotInFamily = result
    _emit(
        {
            "not_in_family": {
                "a": format_fraction(witness.profile.a),
                "b": format_fraction(witness.profile.b),
                "got": _aligned_json(witness.got),
                "expected": _aligned_json(witness.expected),
                "reason": witness.reason,
            }
        }
    )
    return EXIT_VIOLATION


def cmd_serve_oracle(args) -> int:
    mech, _ = _build_mechanism(args)
    serve_oracle(mech, sys.stdin, sys.stdout)
    return EXIT_OK


def cmd_report(args) -> int:
    from . import report as figures

    theta = _parse_theta(args.theta)
    step = _parse_unit(args.grid, "grid step")
    step_theta = _parse_unit(args.grid_theta, "theta grid step")
    step_ab = _parse_unit(args.grid_ab, "demand grid step")
    p = float(Fraction(args.p))
    resolution = float(Fraction(args.resolution))

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    reports = list(welfare.sweep(theta, step))
    with open(out_dir / "welfare_sweep.csv", "w") as handle:
        welfare.write_welfare_csv(reports, handle)
    written.append(out_dir / "welfare_sweep.csv")
    figures.render_eta_heatmap(reports, str(out_dir / "eta_heatmap.png"))
    written.append(out_dir / "eta_heatmap.png")

    rows = welfare.theta_sweep(step_theta, step_ab, refine_iters=args.refine)
    with open(out_dir / "theta_sweep.csv", "w") as handle:
        welfare.write_theta_sweep_csv(rows, handle)
    written.append(out_dir / "theta_sweep.csv")
    figures.render_theta_curve(rows, str(out_dir / "eta_vs_theta.png"))
    written.append(out_dir / "eta_vs_theta.png")

    tau_star, bound = welfare.minimize_pot_bound(p, resolution, args.refine)
    with open(out_dir / "pot_curve.csv", "w") as handle:
        handle.write("tau,bound\n")
        for j in range(0, 991):
            tau = j / 1000.0
            handle.write(
                f"{welfare.format_real(tau)},{welfare.format_real(welfare.randomized_pot_bound(p, tau))}\n"
            )
    written.append(out_dir / "pot_curve.csv")
    figures.render_pot_curve(p, tau_star, bound, str(out_dir / "pot_bound.png"))
    written.append(out_dir / "pot_bound.png")

    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


# -- wiring ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cakecut",
        description="Truthful two-player cake cutting: mechanisms, reductions, analytics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("allocate", help="run the mechanism on two demand files")
    p.add_argument("demand_a", help="JSON interval-set file for player I")
    p.add_argument("demand_b", help="JSON interval-set file for player II")
    p.add_argument("--theta", default="1/2", help="family index (default 1/2)")
    p.set_defaults(func=cmd_allocate)

    p = sub.add_parser("aligned", help="evaluate the aligned family at (a, b)")
    p.add_argument("--theta", default="1/2")
    p.add_argument("--a", required=True, help="player I demand size")
    p.add_argument("--b", required=True, help="player II demand size")
    p.set_defaults(func=cmd_aligned)

    p = sub.add_parser("sweep", help="welfare of one member over the demand grid")
    p.add_argument("--theta", default="1/2")
    p.add_argument("--grid", default="1/100", help="demand lattice pitch")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("theta-sweep", help="worst-case efficiency across the family")
    p.add_argument("--grid-theta", default="1/20", dest="grid_theta")
    p.add_argument("--grid-ab", default="1/100", dest="grid_ab")
    p.add_argument("--refine", type=int, default=6, help="refinement rounds")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_theta_sweep)

    p = sub.add_parser("pot", help="minimize the randomized guarantee over tau")
    p.add_argument("--p", default="1/2", help="lottery weight in [0, 1/2]")
    p.add_argument("--resolution", default="1/1000")
    p.add_argument("--refine", type=int, default=6)
    p.set_defaults(func=cmd_pot)

    p = sub.add_parser("verify-ic", help="hunt for profitable misreports")
    p.add_argument("--mechanism", default="theta:1/2",
                   help="'theta:<rational>' or 'proportional'")
    p.add_argument("--oracle-cmd", default=None, dest="oracle_cmd",
                   help="drive an external oracle command instead")
    p.add_argument("--trials", type=int, default=500, help="random scenarios")
    p.add_argument("--seed", type=int, default=None,
                   help="RNG seed (default: CAKE_SEED or 0)")
    p.add_argument("--slack", default=None,
                   help="gain threshold counted as a violation "
                        "(default 0; 1/10^9 for external oracles)")
    p.add_argument("--stop-on-violation", action="store_true", dest="stop_on_violation")
    p.set_defaults(func=cmd_verify_ic)

    p = sub.add_parser("characterize", help="identify an external aligned oracle")
    p.add_argument("--oracle-cmd", required=True, dest="oracle_cmd")
    p.add_argument("--grid", default="1/100", help="profile lattice pitch")
    p.set_defaults(func=cmd_characterize)

    p = sub.add_parser("serve-oracle",
                       help="answer mechanism queries on stdin (protocol endpoint)")
    p.add_argument("--mechanism", default="theta:1/2")
    p.add_argument("--theta", default=None,
                   help="shorthand for --mechanism theta:<value>")
    p.set_defaults(func=cmd_serve_oracle)

    p = sub.add_parser("report", help="write CSV tables and figures to a directory")
    p.add_argument("--theta", default="1/2")
    p.add_argument("--grid", default="1/100")
    p.add_argument("--grid-theta", default="1/20", dest="grid_theta")
    p.add_argument("--grid-ab", default="1/100", dest="grid_ab")
    p.add_argument("--refine", type=int, default=6)
    p.add_argument("--p", default="1/2")
    p.add_argument("--resolution", default="1/1000")
    p.add_argument("--out-dir", default="report", dest="out_dir")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "theta", None) is not None and args.command == "serve-oracle":
        args.mechanism = f"theta:{args.theta}"
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OracleProtocolError as exc:
        print(f"oracle protocol error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, AssertionError) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
