"""Command-line front end.

Exit status: 0 on success, 1 on validation errors (bad input, bad config),
2 on numeric failures (gauge singularity, non-convergence, failed checks).
"""

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .ckm import (
    DEFAULT_PLAQUETTE,
    Plaquette,
    all_plaquettes,
    build_ckm,
    jarlskog_from_coords,
    jarlskog_invariant,
)
from .errors import (
    GaugeSingularError,
    NotRepresentableError,
    ParityError,
    SingularPivotError,
    ValidationError,
)
from .fitting import FitProblem, fit
from .flag import (
    FlagCoordinates,
    coords_from_unitary,
    gram_schmidt_unitary,
    kahler_data,
    normalization_factors,
)
from .jarlskog_det import (
    build_mass_matrix,
    closed_form_det_n2,
    closed_form_det_n3,
    commutator_det,
    det_parity_check,
    jarlskog_identity_check,
)
from .pdg import PdgAngles, coords_to_pdg, pdg_to_coords, pdg_unitary
from .selfcheck import DEFAULT_TOLERANCES as CHECK_TOLERANCES
from .selfcheck import run_self_check
from .serialize import (
    check_keys,
    complex_to_json,
    coords_from_json,
    coords_to_json,
    dumps,
    loads,
    matrix_from_json,
    matrix_to_csv,
    matrix_to_json,
    spectrum_from_json,
)

COMMANDS = (
    "build-unitary",
    "extract-coords",
    "ckm",
    "jarlskog",
    "det-commutator",
    "pdg-convert",
    "fit",
    "self-check",
)

DEFAULT_TOLERANCES = {
    "unitary_atol": 1e-8,
    "pivot_rtol": 1e-10,
    "parity_rtol": 1e-9,
    "fit_tol": 1e-12,
    "fit_starts": 8,
    "fit_max_iter": 500,
    "samples": 200,
    **{f"check_{k}": v for k, v in CHECK_TOLERANCES.items()},
}

CONFIG_KEYS = ("command", "input_path", "output_path", "seed", "n", "tolerances", "format")


class NumericFailure(Exception):
    """Raised by a command to request exit status 2 after writing its output."""

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload


@dataclass
class RunConfig:
    command: str
    input_path: str = None
    output_path: str = None
    seed: int = 0
    n: int = 3
    tolerances: dict = field(default_factory=dict)
    format: str = "json"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")
        if self.format not in ("json", "csv"):
            raise ValidationError(f"format must be 'json' or 'csv', got {self.format!r}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise ValidationError("seed must be an integer")
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 2:
            raise ValidationError("n must be an integer >= 2")
        unknown = sorted(set(self.tolerances) - set(DEFAULT_TOLERANCES))
        if unknown:
            raise ValidationError(f"unknown tolerance {unknown[0]!r}")
        merged = dict(DEFAULT_TOLERANCES)
        for key, value in self.tolerances.items():
            if isinstance(value, bool) or not isinstance(value, (int, float)) or value <= 0:
                raise ValidationError(f"tolerance {key!r} must be a positive number")
            merged[key] = value
        self.tolerances = merged

    @classmethod
    def from_file(cls, path, **overrides):
        """Strictly parse a JSON config; unknown keys are rejected."""
        doc = loads(Path(path).read_text())
        check_keys(doc, (), CONFIG_KEYS, where="config")
        doc.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**doc)


def _read_input(config, required=True):
    if config.input_path is None:
        try:
            if not required and (sys.stdin is None or sys.stdin.isatty()):
                return None
            text = sys.stdin.read()
        except OSError as exc:
            if not required:
                return None
            raise ValidationError(f"cannot read stdin: {exc}") from exc
        if not required and not text.strip():
            return None
    else:
        try:
            text = Path(config.input_path).read_text()
        except OSError as exc:
            raise ValidationError(f"cannot read input: {exc}") from exc
    return loads(text)


def _pair(doc, extra=()):
    check_keys(doc, ("left", "right"), extra, where="input")
    left = coords_from_json(doc["left"], "left")
    right = coords_from_json(doc["right"], "right")
    if left.n != right.n:
        raise ValidationError(f"left has n={left.n} but right has n={right.n}")
    return left, right


def _cmd_build_unitary(config):
    doc = _read_input(config, required=False)
    c = FlagCoordinates.zeros(config.n) if doc is None else coords_from_json(doc, "input")
    u = gram_schmidt_unitary(c)
    out = {**coords_to_json(c), "unitary": matrix_to_json(u)}
    if c.n in (3, 4):
        out["deltas"] = list(normalization_factors(c).deltas)
    if c.n == 3:
        k = kahler_data(c)
        out["kahler_potential"] = k.potential
        out["volume_density"] = k.volume_density
    return out, u


def _cmd_extract_coords(config):
    doc = _read_input(config)
    check_keys(doc, ("matrix",), where="input")
    w = matrix_from_json(doc["matrix"])
    c = coords_from_unitary(
        w,
        unitary_atol=config.tolerances["unitary_atol"],
        rtol=config.tolerances["pivot_rtol"],
    )
    return coords_to_json(c), None


def _cmd_ckm(config):
    left, right = _pair(_read_input(config))
    res = build_ckm(left, right)
    out = {
        "n": left.n,
        "v": matrix_to_json(res.v),
        "f": matrix_to_json(res.f),
        "left_scales": [float(s) for s in res.left_scales],
        "right_scales": [float(s) for s in res.right_scales],
    }
    if res.left_deltas is not None:
        out["left_deltas"] = list(res.left_deltas.deltas)
        out["right_deltas"] = list(res.right_deltas.deltas)
    return out, res.v


def _plaquette_from_json(doc):
    check_keys(doc, ("rows", "cols"), where="plaquette")
    try:
        return Plaquette(tuple(int(i) for i in doc["rows"]), tuple(int(j) for j in doc["cols"]))
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"plaquette: {exc}") from exc


def _cmd_jarlskog(config):
    doc = _read_input(config)
    left, right = _pair(doc, extra=("plaquette",))
    v = build_ckm(left, right).v
    if left.n == 3:
        p = _plaquette_from_json(doc["plaquette"]) if "plaquette" in doc else DEFAULT_PLAQUETTE
        if max(p.rows + p.cols) > 3:
            raise ValidationError(f"plaquette {p} out of range for n = 3")
        out = {
            "n": 3,
            "plaquette": {"rows": list(p.rows), "cols": list(p.cols)},
            "j": jarlskog_invariant(v, p),
            "j_from_coords": jarlskog_from_coords(left, right),
        }
    else:
        out = {
            "n": left.n,
            "plaquettes": [
                {"rows": list(p.rows), "cols": list(p.cols), "value": val}
                for p, val in all_plaquettes(v).items()
            ],
        }
    return out, None


def _cmd_det_commutator(config):
    doc = _read_input(config)
    left, right = _pair(doc, extra=("masses", "masses_prime"))
    for key in ("masses", "masses_prime"):
        if key not in doc:
            raise ValidationError(f"input: missing field {key!r}")
    s = spectrum_from_json(doc["masses"], "masses")
    sp = spectrum_from_json(doc["masses_prime"], "masses_prime")
    if len(s) != left.n or len(sp) != left.n:
        raise ValidationError(f"spectra must have {left.n} masses")
    u, up = gram_schmidt_unitary(left), gram_schmidt_unitary(right)
    m, mp = build_mass_matrix(u, s), build_mass_matrix(up, sp)
    d = commutator_det(m, mp)
    out = {
        "n": left.n,
        "det": complex_to_json(d),
        "parity": det_parity_check(m, mp, rtol=config.tolerances["parity_rtol"]).value,
    }
    v = u.conj().T @ up
    if left.n == 2:
        out["closed_form"] = complex_to_json(closed_form_det_n2(s, sp, v))
    elif left.n == 3:
        out["closed_form"] = complex_to_json(closed_form_det_n3(s, sp, v))
        j_det, j_plaq = jarlskog_identity_check(left, right, s, sp)
        out["j_from_det"] = j_det
        out["j_from_plaquette"] = j_plaq
    return out, None


def _cmd_pdg_convert(config):
    doc = _read_input(config)
    if isinstance(doc, dict) and "angles" in doc:
        check_keys(doc, ("angles",), where="input")
        angles = doc["angles"]
        check_keys(
            angles, ("theta12", "theta13", "theta23", "delta"), ("alpha", "beta"), where="angles"
        )
        try:
            a = PdgAngles(**{k: float(v) for k, v in angles.items()})
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"angles: {exc}") from exc
        u = pdg_unitary(a)
        return {**coords_to_json(pdg_to_coords(a)), "unitary": matrix_to_json(u)}, u
    c = coords_from_json(doc, "input")
    a = coords_to_pdg(c)
    return {
        "angles": {"theta12": a.theta12, "theta13": a.theta13, "theta23": a.theta23, "delta": a.delta}
    }, None


def _cmd_fit(config):
    doc = _read_input(config)
    check_keys(doc, ("n", "target_magnitudes"), ("target_j", "weights", "bound"), where="input")
    try:
        problem = FitProblem(
            n=doc["n"],
            target_magnitudes=np.array(doc["target_magnitudes"], dtype=float),
            target_j=doc.get("target_j"),
            weights=doc.get("weights"),
            bound=doc.get("bound", 10.0),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"input: {exc}") from exc
    res = fit(
        problem,
        seed=config.seed,
        n_starts=int(config.tolerances["fit_starts"]),
        max_iter=int(config.tolerances["fit_max_iter"]),
        tol=config.tolerances["fit_tol"],
    )
    v = build_ckm(res.left, res.right).v
    out = {
        "converged": res.converged,
        "consistent": res.consistent,
        "residual_norm": res.residual_norm,
        "iterations": res.iterations,
        "start_index": res.start_index,
        "left": coords_to_json(res.left),
        "right": coords_to_json(res.right),
        "per_residual": [float(r) for r in res.per_residual],
        "magnitudes": [[float(abs(z)) for z in row] for row in v],
    }
    if problem.n == 3:
        out["j"] = jarlskog_invariant(v)
    if not res.converged:
        raise NumericFailure("fit did not converge", payload=(out, v))
    return out, v


def _cmd_self_check(config):
    tolerances = {
        k[len("check_"):]: v for k, v in config.tolerances.items() if k.startswith("check_")
    }
    report = run_self_check(
        seed=config.seed, samples=int(config.tolerances["samples"]), tolerances=tolerances
    )
    if not report["all_passed"]:
        raise NumericFailure("self-check failed", payload=(report, None))
    return report, None


HANDLERS = {
    "build-unitary": _cmd_build_unitary,
    "extract-coords": _cmd_extract_coords,
    "ckm": _cmd_ckm,
    "jarlskog": _cmd_jarlskog,
    "det-commutator": _cmd_det_commutator,
    "pdg-convert": _cmd_pdg_convert,
    "fit": _cmd_fit,
    "self-check": _cmd_self_check,
}


def _emit(config, payload, stdout):
    doc, matrix = payload
    if config.format == "csv":
        if matrix is None:
            raise ValidationError(f"command {config.command!r} has no matrix for CSV output")
        text = matrix_to_csv(matrix)
    else:
        text = dumps(doc)
    if config.output_path is None:
        stdout.write(text)
    else:
        Path(config.output_path).write_text(text)


def run(config, stdout=None, stderr=None):
    """Execute one command; returns the process exit status."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        payload = HANDLERS[config.command](config)
        _emit(config, payload, stdout)
        return 0
    except NumericFailure as exc:
        if exc.payload is not None:
            try:
                _emit(config, exc.payload, stdout)
            except ValidationError:
                pass
        stderr.write(f"error: {exc}\n")
        return 2
    except (GaugeSingularError, SingularPivotError, ParityError) as exc:
        stderr.write(f"error: {exc}\n")
        return 2
    except (ValidationError, NotRepresentableError, NotImplementedError) as exc:
        stderr.write(f"error: {exc}\n")
        return 1


def _parse_tolerance(text):
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        return key.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {key!r} needs a number") from None


def build_parser():
    parser = argparse.ArgumentParser(
        prog="flagckm",
        description="Flag-manifold parametrization of quark mixing matrices.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", "-i", dest="input_path")
    parser.add_argument("--output", "-o", dest="output_path")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--n", type=int)
    parser.add_argument(
        "--tolerance", "-t", type=_parse_tolerance, action="append", default=[],
        metavar="KEY=VALUE", help="override a tolerance; repeatable",
    )
    parser.add_argument("--format", choices=("json", "csv"))
    parser.add_argument("--config", help="JSON run configuration (strict keys)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    overrides = {
        "input_path": args.input_path,
        "output_path": args.output_path,
        "seed": args.seed,
        "n": args.n,
        "format": args.format,
    }
    try:
        if args.config:
            config = RunConfig.from_file(args.config, command=args.command, **overrides)
            if args.tolerance:
                config.tolerances.update(dict(args.tolerance))
                config = RunConfig(**{**config.__dict__})
        else:
            config = RunConfig(
                command=args.command,
                tolerances=dict(args.tolerance),
                **{k: v for k, v in overrides.items() if v is not None},
            )
    except (ValidationError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
