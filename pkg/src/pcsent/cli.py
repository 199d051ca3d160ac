"""Command-line sweeps over |zeta| that write CSV, plus a self-check.

Subcommands::

    pcsent negativity   zeta_abs,negativity
    pcsent entropy      zeta_abs,entropy_ebits
    pcsent iterative    zeta_abs,E_S1,E_S<steps>,E_full
    pcsent gamma        zeta_abs,E_gamma_ebits,delta_E_ebits
    pcsent trace        n,gamma_sq,ratio_sq,gain_ebits,entropy_ebits (one zeta)
    pcsent verify       invariant checks; exit 0 on pass, 1 on failure

Exit codes: 0 success, 1 verification failure, 2 invalid arguments,
3 truncation or series cap exceeded.
"""

import argparse
import math
import re
import sys
from dataclasses import dataclass

import numpy as np

from pcsent import iterate, measures, oracle, states
from pcsent.errors import DegenerateNormError, DomainError, SeriesCapError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

_THETA_RE = re.compile(r"^([+-]?)(?:(\d+(?:\.\d*)?|\.\d+)\*?)?pi(?:/(\d+(?:\.\d*)?))?$")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class SweepSpec:
    zeta_min: float = 0.0
    zeta_max: float = 3.0
    points: int = 121
    m: int = 0
    theta: float = math.pi / 4
    n_steps: int = 3
    tolerance: float = 1e-14
    negativity_convention: str = "ordered"

    def validate(self, allow_single_point=False):
        if not (math.isfinite(self.zeta_min) and math.isfinite(self.zeta_max)):
            raise UsageError("zeta bounds must be finite")
        if self.zeta_min < 0:
            raise UsageError("--zeta-min must be >= 0")
        if self.zeta_min > self.zeta_max or (
            self.zeta_min == self.zeta_max and not allow_single_point
        ):
            raise UsageError("--zeta-min must be below --zeta-max")
        if self.points < 2:
            raise UsageError("--points must be >= 2")
        if self.m < 0:
            raise UsageError("--m must be >= 0")
        if self.n_steps < 1:
            raise UsageError("--steps must be >= 1")
        if not self.tolerance > 0:
            raise UsageError("--tol must be positive")
        if self.negativity_convention not in measures.CONVENTIONS:
            raise UsageError(f"--convention must be one of {measures.CONVENTIONS}")
        return self

    def grid(self):
        return np.unique(np.linspace(self.zeta_min, self.zeta_max, self.points))

    @property
    def policy(self):
        return states.TruncationPolicy.tolerance(self.tolerance)


def parse_theta(text):
    """Parse an angle in radians; accepts numbers and forms like ``pi/4``, ``-3*pi/4``."""
    s = text.strip().replace(" ", "")
    match = _THETA_RE.match(s)
    if match:
        sign, mult, div = match.groups()
        value = (float(mult) if mult else 1.0) * math.pi / (float(div) if div else 1.0)
        return -value if sign == "-" else value
    try:
        return float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse angle {text!r}") from None


def fmt(x):
    return format(float(x), ".17g")


def _rows(header, rows):
    yield header
    for row in rows:
        yield ",".join(fmt(v) for v in row)


def cmd_sweep_negativity(spec):
    return _rows(
        "zeta_abs,negativity",
        ((z, measures.negativity_closed_form(z, spec.negativity_convention)) for z in spec.grid()),
    )


def cmd_sweep_entropy(spec):
    policy = spec.policy
    return _rows(
        "zeta_abs,entropy_ebits",
        ((z, measures.pcs_entropy_closed_form(z, policy)) for z in spec.grid()),
    )


def cmd_trace_iterative(spec):
    n = spec.n_steps

    def row(z):
        steps = iterate.iterate_superposition(z, n).steps
        full, _ = iterate.converged_entropy(z, spec.tolerance)
        return z, steps[0].entropy, steps[-1].entropy, full

    return _rows(f"zeta_abs,E_S1,E_S{n},E_full", (row(z) for z in spec.grid()))


def cmd_sweep_gamma(spec, warn=None):
    warn = warn or (lambda msg: print(msg, file=sys.stderr))
    policy = spec.policy

    def row(z):
        params = states.GammaParams(z, spec.m, spec.theta)
        try:
            return z, measures.gamma_entropy_direct(params, policy), measures.entanglement_gain(params, policy)
        except DegenerateNormError as exc:
            warn(f"warning: zeta_abs={fmt(z)}: {exc}")
            return z, math.nan, math.nan

    return _rows("zeta_abs,E_gamma_ebits,delta_E_ebits", (row(z) for z in spec.grid()))


def cmd_trace(zeta, n_steps):
    return iterate.trace_to_csv(iterate.iterate_superposition(zeta, n_steps)).splitlines()


# -- verification --------------------------------------------------------------

_GAMMA_THETAS = (0.0, math.pi / 4, -math.pi / 4, math.pi / 2)
_GAMMA_MS = (0, 1, 2, 5)


def _oracle_cutoff(z, policy):
    return min(oracle.MAX_CUTOFF, max(30, states.choose_truncation(z, policy)))


def _check_normalization(z, spec):
    state = states.pair_coherent_state(z, spec.policy)
    p = states.schmidt_probabilities(state)
    if abs(p.sum() - 1.0) > 1e-12 or np.any(p < 0) or np.any(p > 1):
        yield f"zeta={fmt(z)}: probabilities sum to {fmt(p.sum())}"
    if state.tail_mass >= spec.tolerance:
        yield f"zeta={fmt(z)}: tail mass {fmt(state.tail_mass)} >= tol"


def _check_oracle_entropy(z, spec):
    cutoff = _oracle_cutoff(z, spec.policy)
    vec = oracle.lift(states.pair_coherent_state(z, states.TruncationPolicy.fixed(cutoff)))
    brute = oracle.brute_entropy(vec)
    closed = measures.pcs_entropy_closed_form(z, spec.policy)
    if abs(brute - closed) > 1e-10:
        yield f"zeta={fmt(z)}: brute {fmt(brute)} vs closed form {fmt(closed)}"
    if abs(brute - oracle.brute_entropy(vec, keep="B")) > 1e-12:
        yield f"zeta={fmt(z)}: entropies of the two modes differ"


def _check_pt_spectrum(z, spec):
    cutoff = _oracle_cutoff(z, spec.policy)
    state = states.pair_coherent_state(z, states.TruncationPolicy.fixed(cutoff))
    brute = np.sort(oracle.brute_pt_blocks(state))
    analytic = np.sort(measures.pt_spectrum(z, cutoff))
    if brute.shape != analytic.shape or np.max(np.abs(brute - analytic)) > 1e-12:
        yield f"zeta={fmt(z)}: partial-transpose spectra differ"
    if abs(analytic.sum() - 1.0) > 1e-12:
        yield f"zeta={fmt(z)}: partial-transpose trace {fmt(analytic.sum())}"
    truncated = measures.negativity_from_spectrum(analytic, "ordered")
    closed = measures.negativity_closed_form(z, "ordered")
    if abs(truncated - closed) > 1e-10 * max(1.0, closed):
        yield f"zeta={fmt(z)}: truncated negativity {fmt(truncated)} vs closed form {fmt(closed)}"


def _check_recursion(z, spec):
    n_max = 30
    trace = iterate.iterate_superposition(z, n_max)
    for step in trace.steps:
        direct = iterate.esn_closed_form(z, step.n)
        weighted = iterate.gain_decomposition(
            iterate.SuperpositionTrace(trace.zeta, trace.steps[: step.n])
        )
        if abs(step.entropy - direct) > 1e-12 or abs(weighted - direct) > 1e-12:
            yield (
                f"zeta={fmt(z)} n={step.n}: recursion {fmt(step.entropy)}, "
                f"closed form {fmt(direct)}, weighted gains {fmt(weighted)}"
            )
            return


def _check_gain_bound(z, spec):
    for step in iterate.iterate_superposition(z, 30).steps:
        if not 0.0 <= step.gain <= 1.0 or not 0.0 < step.ratio_sq <= 1.0:
            yield f"zeta={fmt(z)} n={step.n}: gain {fmt(step.gain)}, ratio {fmt(step.ratio_sq)}"


def _check_convergence(z, spec):
    value, n = iterate.converged_entropy(z, 1e-12)
    closed = measures.pcs_entropy_closed_form(z, spec.policy)
    if abs(value - closed) > 1e-10:
        yield f"zeta={fmt(z)}: converged {fmt(value)} at n={n} vs closed form {fmt(closed)}"


def _check_gamma(z, spec):
    for m in _GAMMA_MS:
        for theta in _GAMMA_THETAS:
            params = states.GammaParams(z, m, theta)
            if params.norm_sq <= states.NORM_FLOOR:
                continue
            lam = measures.gamma_spectrum(params, spec.policy)
            tag = f"zeta={fmt(z)} m={m} theta={fmt(theta)}"
            if abs(lam.sum() - 1.0) > 1e-12 or np.any(lam < 0) or np.any(lam > 1):
                yield f"{tag}: spectrum sums to {fmt(lam.sum())}"
            probs = states.schmidt_probabilities(states.number_state_superposition(params, spec.policy))
            if probs.shape != lam.shape or np.max(np.abs(probs - lam)) > 1e-12:
                yield f"{tag}: state probabilities differ from closed-form spectrum"
            direct = measures.gamma_entropy_direct(params, spec.policy)
            closed = measures.gamma_entropy_closed_form(params, spec.policy)
            if abs(direct - closed) > 1e-10 or direct < 0:
                yield f"{tag}: direct {fmt(direct)} vs closed form {fmt(closed)}"


CHECKS = (
    ("normalization", _check_normalization),
    ("oracle-entropy", _check_oracle_entropy),
    ("pt-spectrum", _check_pt_spectrum),
    ("recursion-identity", _check_recursion),
    ("gain-bound", _check_gain_bound),
    ("convergence", _check_convergence),
    ("gamma-spectrum", _check_gamma),
)


def cmd_verify(spec, out=None, err=None):
    """Run every invariant check over the sweep grid; return an exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    grid = spec.grid()
    failed = 0
    for name, check in CHECKS:
        problems = []
        for z in grid:
            try:
                problems.extend(check(float(z), spec))
            except (DomainError, SeriesCapError, OverflowError, AssertionError) as exc:
                problems.append(f"zeta={fmt(z)}: {type(exc).__name__}: {exc}")
        status = "PASS" if not problems else "FAIL"
        print(f"{status} {name} ({grid.size} points)", file=out)
        for line in problems:
            print(f"  {name}: {line}", file=err)
        failed += bool(problems)
    print(f"{len(CHECKS) - failed}/{len(CHECKS)} checks passed", file=out)
    return EXIT_OK if not failed else EXIT_FAIL


# -- entry point ---------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--zeta-min", type=float, default=SweepSpec.zeta_min)
    common.add_argument("--zeta-max", type=float, default=SweepSpec.zeta_max)
    common.add_argument("--points", type=int, default=SweepSpec.points)
    common.add_argument("--m", type=int, default=SweepSpec.m, help="number-state index")
    common.add_argument("--theta", type=parse_theta, default=SweepSpec.theta,
                        help="superposition angle in radians; 'pi/4' style accepted")
    common.add_argument("--steps", type=int, default=SweepSpec.n_steps)
    common.add_argument("--tol", type=float, default=SweepSpec.tolerance)
    common.add_argument("--convention", choices=measures.CONVENTIONS,
                        default=SweepSpec.negativity_convention)
    common.add_argument("--output", "-o", default="-", help="output file ('-' for stdout)")

    parser = argparse.ArgumentParser(prog="pcsent", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("negativity", parents=[common], help="negativity of |zeta,0>")
    sub.add_parser("entropy", parents=[common], help="entropy of |zeta,0>")
    sub.add_parser("iterative", parents=[common], help="E(S1), E(S_steps) and converged entropy")
    sub.add_parser("gamma", parents=[common], help="entropy and gain of the number-state superposition")
    trace = sub.add_parser("trace", parents=[common], help="step-by-step recursion at one zeta")
    trace.add_argument("--zeta", type=float, required=True)
    sub.add_parser("verify", parents=[common], help="run invariant and oracle checks")
    return parser


def _spec_from_args(args):
    return SweepSpec(
        zeta_min=args.zeta_min,
        zeta_max=args.zeta_max,
        points=args.points,
        m=args.m,
        theta=args.theta,
        n_steps=args.steps,
        tolerance=args.tol,
        negativity_convention=args.convention,
    )


def _write(lines, target):
    text = "".join(line + "\n" for line in lines)
    if target == "-":
        sys.stdout.write(text)
    else:
        with open(target, "w", newline="\n") as fh:
            fh.write(text)


def main(argv=None):
    args = build_parser().parse_args(argv)
    spec = _spec_from_args(args)
    try:
        spec.validate(allow_single_point=args.command in ("verify", "trace"))
        if args.command == "verify":
            return cmd_verify(spec)
        if args.command == "trace" and args.zeta < 0:
            raise UsageError("--zeta must be >= 0")
        commands = {
            "negativity": cmd_sweep_negativity,
            "entropy": cmd_sweep_entropy,
            "iterative": cmd_trace_iterative,
            "gamma": cmd_sweep_gamma,
            "trace": lambda s: cmd_trace(args.zeta, s.n_steps),
        }
        # Materialize before writing so a mid-sweep failure leaves no partial file.
        lines = list(commands[args.command](spec))
    except UsageError as exc:
        print(f"pcsent: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SeriesCapError, OverflowError) as exc:
        print(f"pcsent: error: {exc}", file=sys.stderr)
        return EXIT_CAP
    _write(lines, args.output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
