"""Command-line surface: run the verification suite, tabulate mode families,
sweep cross-sector overlaps, and evolve Jordan-block states.

Reports are deterministic: identical configuration produces byte-identical
output (fixed record order, shortest round-trip float formatting, LF line
endings, no timestamps).  Exit codes: 0 all checks pass, 1 at least one check
failed, 2 configuration/usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import checks, jordan, modes, verify, wedge
from .numerics import Grid, UnitScale

__all__ = ["RunConfig", "ConfigError", "main", "run"]

_FORMATS = ("json", "csv")

# families whose natural domain is the half-line r >= 0
_WEDGE_FAMILIES = ("wedge-psi0hat", "wedge-linear")


class ConfigError(ValueError):
    """Invalid run configuration (maps to exit code 2)."""


@dataclass(frozen=True)
class RunConfig:
    """Everything a subcommand needs, validated up front.

    Lengths and times are interpreted in physical units and reduced through
    the unit scale; with the default (1, 1, 1) scale they are already
    dimensionless.  `tol` overrides the pass bound of the residual checks.
    """

    command: str
    grid_extent: float = 4.0
    grid_step: float = 1.0 / 256.0
    cutoffs: tuple[float, ...] = (5.0, 10.0, 15.0, 20.0)
    times: tuple[float, ...] = (0.0, 1.0, 5.0)
    tol: float = 1e-7
    fmt: str = "json"
    out: str | None = None
    hbar: float = 1.0
    mass: float = 1.0
    omega: float = 1.0
    family: str | None = None
    family_a: str | None = None
    family_b: str | None = None
    levels: int = 1
    state: tuple[complex, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.fmt not in _FORMATS:
            raise ConfigError(f"format must be one of {_FORMATS}")
        if not self.tol > 0.0:
            raise ConfigError("tolerance must be positive")
        if not self.grid_step > 0.0:
            raise ConfigError("grid step must be positive")
        for name in ("hbar", "mass", "omega"):
            if not getattr(self, name) > 0.0:
                raise ConfigError(f"{name} must be positive")
        extent = self.units.q_to_dimensionless(self.grid_extent)
        step = self.units.q_to_dimensionless(self.grid_step)
        if extent < 1.0:
            raise ConfigError(f"grid extent {self.grid_extent} is below the "
                              "stencil minimum (reduced extent must be >= 1)")
        if extent / step < 7:
            raise ConfigError("grid must contain at least 15 points for the stencils")
        if len(self.cutoffs) < 4 or any(b <= a for a, b in zip(self.cutoffs, self.cutoffs[1:])):
            raise ConfigError("cutoffs must be >= 4 strictly increasing values")

    @property
    def units(self) -> UnitScale:
        return UnitScale(hbar=self.hbar, mass=self.mass, omega=self.omega)

    def echo(self) -> dict:
        raw = asdict(self)
        raw["state"] = [str(c) for c in self.state]
        raw["format"] = raw.pop("fmt")
        return raw


# ---------------------------------------------------------------------------
# family registry
# ---------------------------------------------------------------------------

def _family_by_name(name: str, config: RunConfig, dropped_constants: bool = False):
    """Resolve a CLI family name to a ModeFamily, building pairs on demand."""
    extent = config.units.q_to_dimensionless(config.grid_extent)
    step = config.units.q_to_dimensionless(config.grid_step)
    if name.startswith("psi") and name[3:].isdigit():
        return modes.standard_mode(int(name[3:]), dropped_constants=dropped_constants)
    if name.startswith("fbar") and name[4:].isdigit():
        return modes.fbar_mode(int(name[4:]))
    if name == "negenergy":
        return modes.negative_energy_family()
    if name.startswith("linear") and name[6:].isdigit():
        pair = modes.make_fg_pair(int(name[6:]), Grid.symmetric(extent, step))
        return modes.linear_mode_family(pair)
    if name == "free-eigen":
        return modes.free_zero_energy_modes()[0]
    if name == "free-linear":
        return modes.free_zero_energy_modes()[1]
    if name == "wedge-psi0hat":
        return wedge.wedge_psi0hat_family()
    if name == "wedge-linear":
        return wedge.wedge_linear_family(wedge.make_wedge_pair(extent, step))
    raise ConfigError(f"unknown family {name!r}")


# ---------------------------------------------------------------------------
# output writers
# ---------------------------------------------------------------------------

def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _emit_json(payload: dict, out: str | None):
    _emit(json.dumps(payload, indent=2) + "\n", out)


def _emit_csv(header: list[str], rows: list[list], out: str | None):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    _emit(buffer.getvalue(), out)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_verify_all(config: RunConfig) -> int:
    extent = config.units.q_to_dimensionless(config.grid_extent)
    step = config.units.q_to_dimensionless(config.grid_step)
    settings = checks.CheckSettings(grid_extent=extent, grid_step=step,
                                    cutoffs=config.cutoffs,
                                    times=tuple(config.units.t_to_dimensionless(t)
                                                for t in config.times),
                                    residual_bound=config.tol)
    records = checks.run_all_checks(settings)
    failed = [r.check_id for r in records if r.kind == "check" and not r.passed]
    if config.fmt == "json":
        payload = {
            "version": 1,
            "config_echo": config.echo(),
            "records": [{"check_id": r.check_id, "paper_anchor": r.anchor,
                         "value": r.value, "bound": r.bound, "pass": r.passed,
                         "kind": r.kind, "detail": r.detail} for r in records],
            "failed": failed,
        }
        _emit_json(payload, config.out)
    else:
        header = ["check_id", "paper_anchor", "value", "bound", "pass", "kind", "detail"]
        rows = [[r.check_id, r.anchor, r.value, r.bound, r.passed, r.kind, r.detail]
                for r in records]
        _emit_csv(header, rows, config.out)
    return 1 if failed else 0


def _tabulate_rows(config: RunConfig):
    family = _family_by_name(config.family, config)
    units = config.units
    extent = units.q_to_dimensionless(config.grid_extent)
    step = units.q_to_dimensionless(config.grid_step)
    if config.family in _WEDGE_FAMILIES:
        grid = Grid.uniform(0.0, extent, step)
    else:
        grid = Grid.symmetric(extent, step)
    rows = []
    for t_phys in config.times:
        tau = units.t_to_dimensionless(t_phys)
        for xi in grid.points:
            value = family.evaluate(float(xi), tau)
            log_amp = family.log_magnitude(float(xi), tau)
            if family.is_eigenstate:
                # sign/logmag describe the stationary profile (t-independent)
                profile = family.log_profile(float(xi))
                sign, logmag = profile.sign, profile.logmag
            else:
                sign, logmag = log_amp.sign, log_amp.logmag
            rows.append([units.q_from_dimensionless(float(xi)), t_phys,
                         float(value.real), float(value.imag),
                         int(sign), float(logmag) if sign != 0 else -math.inf])
    return rows


def _cmd_tabulate(config: RunConfig) -> int:
    rows = _tabulate_rows(config)
    header = ["q", "t", "re_psi", "im_psi", "sign", "logmag"]
    if config.fmt == "json":
        payload = {
            "version": 1,
            "config_echo": config.echo(),
            "records": [dict(zip(header, row)) for row in rows],
        }
        _emit_json(payload, config.out)
    else:
        _emit_csv(header, rows, config.out)
    return 0


def _cmd_overlap(config: RunConfig) -> int:
    # the dropped-constants normalization (psi_n -> H_n/2^n) is the convention
    # in which the documented unit-slope divergence shows up
    fam_a = _family_by_name(config.family_a, config, dropped_constants=True)
    fam_b = _family_by_name(config.family_b, config, dropped_constants=True)
    report = verify.classify_divergence(fam_a, fam_b, config.cutoffs)
    if config.fmt == "json":
        payload = {
            "version": 1,
            "config_echo": config.echo(),
            "records": [{"cutoff": c, "value": v}
                        for c, v in zip(report.cutoffs, report.values)],
            "classification": report.classification,
            "fit_slope": report.fit_slope,
            "fit_residual": report.fit_residual,
        }
        _emit_json(payload, config.out)
    else:
        header = ["cutoff", "value", "classification", "fit_slope", "fit_residual"]
        rows = [[c, v, report.classification, report.fit_slope, report.fit_residual]
                for c, v in zip(report.cutoffs, report.values)]
        _emit_csv(header, rows, config.out)
    return 0


def _cmd_evolve(config: RunConfig) -> int:
    stack = jordan.assemble(config.levels)
    state = np.asarray(config.state, dtype=complex)
    if state.size != stack.dim:
        raise ConfigError(f"state dimension {state.size} does not match "
                          f"2 x levels = {stack.dim}")
    rows = []
    header = ["t"]
    for i in range(stack.dim):
        header += [f"re_c{i}", f"im_c{i}"]
    header.append("v_norm")
    for t_phys in config.times:
        tau = config.units.t_to_dimensionless(t_phys)
        evolved = stack.evolve_state(state, tau)
        row = [t_phys]
        for c in evolved:
            row += [float(c.real), float(c.imag)]
        row.append(stack.v_norm(evolved))
        rows.append(row)
    if config.fmt == "json":
        payload = {
            "version": 1,
            "config_echo": config.echo(),
            "records": [dict(zip(header, row)) for row in rows],
        }
        _emit_json(payload, config.out)
    else:
        _emit_csv(header, rows, config.out)
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats: {exc}")


def _complex_list(text: str) -> tuple[complex, ...]:
    try:
        return tuple(complex(part.strip()) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated complex values: {exc}")


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--grid-extent", type=float, default=4.0,
                        help="half-width of the sample grid (default 4)")
    parser.add_argument("--grid-step", type=float, default=1.0 / 256.0,
                        help="grid spacing (default 1/256)")
    parser.add_argument("--cutoffs", type=_float_list, default=(5.0, 10.0, 15.0, 20.0),
                        help="comma-separated overlap cutoffs (default 5,10,15,20)")
    parser.add_argument("--times", type=_float_list, default=(0.0, 1.0, 5.0),
                        help="comma-separated time samples (default 0,1,5)")
    parser.add_argument("--tol", type=float, default=1e-7,
                        help="pass bound for residual checks (default 1e-7)")
    parser.add_argument("--format", dest="fmt", choices=_FORMATS, default="json")
    parser.add_argument("--out", default=None, help="output path (default stdout)")
    parser.add_argument("--hbar", type=float, default=1.0)
    parser.add_argument("--mass", type=float, default=1.0)
    parser.add_argument("--omega", type=float, default=1.0)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oscmodes",
        description="Verify and tabulate the oscillator's non-standard solution families.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-all", help="run every registered identity check")
    _add_common(p)

    p = sub.add_parser("tabulate", help="sample one family over a grid and times")
    p.add_argument("--family", required=True,
                   help="psiN | fbarN | negenergy | linearN | free-eigen | "
                        "free-linear | wedge-psi0hat | wedge-linear")
    _add_common(p)

    p = sub.add_parser("overlap", help="sweep the overlap of two families over cutoffs")
    p.add_argument("--family-a", required=True)
    p.add_argument("--family-b", required=True)
    _add_common(p)

    p = sub.add_parser("evolve", help="evolve a block-diagonal state")
    p.add_argument("--levels", type=int, default=1)
    p.add_argument("--state", type=_complex_list, required=True,
                   help="comma-separated components, e.g. '0,1' or '1+0j,0,0,1'")
    _add_common(p)
    return parser


_DISPATCH = {
    "verify-all": _cmd_verify_all,
    "tabulate": _cmd_tabulate,
    "overlap": _cmd_overlap,
    "evolve": _cmd_evolve,
}


def run(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    fields = {
        "command": args.command,
        "grid_extent": args.grid_extent,
        "grid_step": args.grid_step,
        "cutoffs": tuple(args.cutoffs),
        "times": tuple(args.times),
        "tol": args.tol,
        "fmt": args.fmt,
        "out": args.out,
        "hbar": args.hbar,
        "mass": args.mass,
        "omega": args.omega,
    }
    if args.command == "tabulate":
        fields["family"] = args.family
    if args.command == "overlap":
        fields["family_a"] = args.family_a
        fields["family_b"] = args.family_b
    if args.command == "evolve":
        fields["levels"] = args.levels
        fields["state"] = tuple(args.state)
    try:
        config = RunConfig(**fields)
        return _DISPATCH[args.command](config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> int:
    return run()


if __name__ == "__main__":
    sys.exit(main())
