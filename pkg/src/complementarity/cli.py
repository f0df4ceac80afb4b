"""Command-line front end.

Exit codes: 0 success, 2 input validation, 3 unmet precondition (for example
an informationally incomplete ensemble), 4 audit failure (a bound violated
beyond tolerance, which would indicate a bug).
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io as _io
import logging
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .conditional import guessing_game_trace, min_entropy_chain_audit, conditional_exclusion_audit
from .errors import AuditFailure, PreconditionError, ValidationError
from .interferometry import (
    MziConfig,
    bs1_unitary,
    fringe_visibility,
    mzi_probabilities,
    path_distinguishability,
    path_measurement,
    require_two_path,
    wave_interference_audit,
    wave_observable,
    wpdr_audit,
)
from .io import (
    dumps,
    load_ensemble,
    load_state,
    load_witness,
    read_json,
    state_to_dict,
)
from .linalg import DEFAULT_TOL, SUPPORT_RTOL, BipartiteState, RngSpec, haar_unitary
from .views import (
    ensemble_norm,
    info_gain,
    is_complementary,
    is_informationally_complete,
    reconstruct_state,
    exclusion_audit,
)
from .witness import (
    EtaScanRow,
    OptimizerConfig,
    beta_grid,
    case_pairs,
    optimize_weights,
    ppt_critical_eta,
    witness_scan,
)

log = logging.getLogger("complementarity")

EXIT_OK, EXIT_VALIDATION, EXIT_PRECONDITION, EXIT_AUDIT = 0, 2, 3, 4


@dataclass(frozen=True)
class RunConfig:
    """Settings shared by every subcommand.

    Values come from ``--config`` (a JSON object with these field names) and
    are then overridden by explicit flags.
    """

    tolerance: float = DEFAULT_TOL
    support_rtol: float = SUPPORT_RTOL
    seed: int = 0
    out: str | None = None
    format: str | None = None  # json | csv; None picks the command's default
    phi_grid: int = 64
    beta_grid: int = 65
    steps: int = 50

    def __post_init__(self):
        if not (self.tolerance > 0 and np.isfinite(self.tolerance)):
            raise ValidationError(f"tolerance must be positive, got {self.tolerance}")
        if self.format not in (None, "json", "csv"):
            raise ValidationError(f"unknown output format {self.format!r}")
        for name in ("phi_grid", "beta_grid"):
            if getattr(self, name) < 1:
                raise ValidationError(f"{name} must be at least 1")
        if self.steps < 0:
            raise ValidationError("steps must be nonnegative")

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        extra = set(data) - known
        if extra:
            raise ValidationError(f"unknown config fields: {sorted(extra)}")
        return cls(**data)

    def tolerances(self) -> dict:
        return {"tolerance": self.tolerance, "support_rtol": self.support_rtol}


def build_config(args) -> RunConfig:
    base = read_json(args.config) if args.config else {}
    if not isinstance(base, dict):
        raise ValidationError("config file must hold a JSON object")
    cfg = RunConfig.from_dict(base)
    overrides = {}
    for flag, field in (("tolerance", "tolerance"), ("seed", "seed"), ("out", "out"),
                        ("format", "format"), ("steps", "steps")):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[field] = value
    if getattr(args, "grid", None) is not None:
        overrides["beta_grid" if args.group == "witness" else "phi_grid"] = args.grid
    return dataclasses.replace(cfg, **overrides)


# --------------------------------------------------------------------------
# output


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise ValidationError(f"--{name} is required for this command")


def _json_report(cfg: RunConfig, payload: dict) -> str:
    return dumps({**payload, "seed": cfg.seed, "tolerances": cfg.tolerances()})


def _table(cfg: RunConfig, header, rows, default: str = "csv") -> str:
    fmt = cfg.format or default
    if fmt == "json":
        return _json_report(cfg, {"columns": list(header), "rows": [list(r) for r in rows]})
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def _json_only(cfg: RunConfig, payload: dict) -> str:
    if cfg.format == "csv":
        raise ValidationError("this command only emits JSON")
    return _json_report(cfg, payload)


def _emit(cfg: RunConfig, text: str):
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# commands


def _conditional_audit(e, state, tol):
    """Rank-1 projective form when it applies, the equal-trace form otherwise."""
    try:
        return conditional_exclusion_audit(e, state, tol=tol)
    except PreconditionError:
        return conditional_exclusion_audit(e, state, general=True, tol=tol)


def cmd_ier_bound(args, cfg: RunConfig) -> int:
    _require(args, "ensemble")
    e = load_ensemble(args.ensemble, cfg.tolerance)
    if not e.normalized:
        e, _ = e.renormalized()
    norm = ensemble_norm(e, cfg.tolerance)
    pairs = [[i, j] for i in range(len(e)) for j in range(i + 1, len(e))
             if is_complementary(e.measurements[i], e.measurements[j], cfg.tolerance)]
    _emit(cfg, _json_only(cfg, {
        "dim": e.dim,
        "n_measurements": len(e),
        "norm": norm,
        "exclusivity": 1.0 - norm,
        "complete": is_informationally_complete(e, cfg.tolerance),
        "complementary_pairs": pairs,
    }))
    return EXIT_OK


def cmd_ier_check(args, cfg: RunConfig) -> int:
    _require(args, "ensemble", "state")
    e = load_ensemble(args.ensemble, cfg.tolerance)
    state = load_state(args.state, cfg.tolerance)
    failures = []
    if isinstance(state, BipartiteState):
        if state.d_a != e.dim:
            raise ValidationError(f"ensemble dimension {e.dim} vs system A dimension {state.d_a}")
        if not e.normalized:
            e, _ = e.renormalized()
        audit = _conditional_audit(e, state, cfg.tolerance)
        payload = {"kind": "conditional", "lhs": audit.lhs, "bound": audit.rhs,
                   "norm": audit.norm, "pg_fidelity": audit.fidelity,
                   "form": audit.form, "slack": audit.slack}
        if audit.slack < -cfg.tolerance:
            failures.append(f"conditional exclusion slack {audit.slack:.3e}")
        if args.epsilon is not None:
            chain = min_entropy_chain_audit(e, state, args.epsilon, tol=cfg.tolerance)
            payload["min_entropy"] = {
                "epsilon": args.epsilon, "q_min": chain.q_min,
                "collision_bound": chain.collision_bound, "slack": chain.slack,
            }
            if chain.slack < -cfg.tolerance:
                failures.append(f"min-entropy chain slack {chain.slack:.3e}")
    else:
        if args.epsilon is not None:
            raise ValidationError("--epsilon needs a bipartite state (dims [d_A, d_B])")
        audit = exclusion_audit(e, state, cfg.tolerance)
        payload = {"kind": "unconditional", "lhs": audit.lhs, "lhs_view": audit.lhs_view,
                   "norm": audit.norm, "complete_info": audit.complete_info,
                   "bound": audit.bound, "slack": audit.slack,
                   "weight_factor": audit.weight_factor}
        if audit.slack < -cfg.tolerance:
            failures.append(f"exclusion slack {audit.slack:.3e}")
    _emit(cfg, _json_only(cfg, payload))
    if failures:
        raise AuditFailure("; ".join(failures))
    return EXIT_OK


def cmd_tomo_simulate(args, cfg: RunConfig) -> int:
    _require(args, "ensemble", "state")
    e = load_ensemble(args.ensemble, cfg.tolerance)
    state = load_state(args.state, cfg.tolerance)
    if isinstance(state, BipartiteState) or state.shape[0] != e.dim:
        raise ValidationError(f"state does not match ensemble dimension {e.dim}")
    shots = args.shots or 0
    if shots < 0:
        raise ValidationError("--shots must be nonnegative")
    probs = [np.clip(p, 0.0, None) / np.clip(p, 0.0, None).sum() for p in e.probabilities(state)]
    if shots:
        gen = RngSpec(cfg.seed, "tomo-simulate").generator()
        probs = [gen.multinomial(shots, p) / shots for p in probs]
    _emit(cfg, _json_only(cfg, {
        "dim": e.dim,
        "shots": shots,
        "probabilities": [[float(x) for x in p] for p in probs],
    }))
    return EXIT_OK


def cmd_tomo_reconstruct(args, cfg: RunConfig) -> int:
    _require(args, "ensemble", "input")
    e = load_ensemble(args.ensemble, cfg.tolerance)
    data = read_json(args.input)
    if "probabilities" not in data:
        raise ValidationError(f"{args.input}: missing 'probabilities'")
    shots = int(data.get("shots", 0))
    # sampled frequencies only sum to one up to rounding
    rec = reconstruct_state(e, data["probabilities"], max(cfg.tolerance, 1e-9 if shots else 0),
                            cfg.support_rtol)
    payload = {
        "raw": state_to_dict(rec.raw),
        "projected": state_to_dict(rec.projected),
        "projection_distance": float(np.linalg.norm(rec.raw - rec.projected)),
        "probability_residual": rec.probability_residual,
        "support_residual": rec.support_residual,
        "frobenius_error": None,
    }
    if args.state:
        truth = load_state(args.state, cfg.tolerance)
        if isinstance(truth, BipartiteState) or truth.shape != rec.raw.shape:
            raise ValidationError("reference state does not match the reconstruction dimension")
        payload["frobenius_error"] = float(np.linalg.norm(rec.raw - truth))
        if shots:
            log.info("shots=%d frobenius error %.3e (statistical scale %.3e)",
                     shots, payload["frobenius_error"], 1 / np.sqrt(shots))
    _emit(cfg, _json_only(cfg, payload))
    return EXIT_OK


def _witness_pairs(args, cfg: RunConfig):
    if args.case and args.ensemble:
        raise ValidationError("give either --case or --ensemble, not both")
    if args.case:
        return case_pairs(args.case)
    if args.ensemble:
        return load_witness(args.ensemble, cfg.tolerance).pairs
    raise ValidationError("--case or --ensemble is required")


def cmd_witness_scan(args, cfg: RunConfig) -> int:
    pairs = _witness_pairs(args, cfg)
    rows = witness_scan(pairs, beta_grid(cfg.beta_grid), OptimizerConfig(seed=cfg.seed))
    _emit(cfg, _table(cfg, EtaScanRow.CSV_HEADER, [r.as_tuple() for r in rows]))
    return EXIT_OK


def cmd_witness_optimize(args, cfg: RunConfig) -> int:
    pairs = _witness_pairs(args, cfg)
    opt = OptimizerConfig(seed=cfg.seed)
    header = ["beta", "eta_star", "eta_equ", "eta_opt", "converged"]
    header += [f"w_{k}" for k in range(len(pairs))]
    rows = []
    for beta in beta_grid(cfg.beta_grid):
        res = optimize_weights(pairs, beta, opt)
        rows.append([float(beta), ppt_critical_eta(beta), res.eta_equ, res.eta_opt,
                     int(res.converged)] + [float(w) for w in res.weights])
    _emit(cfg, _table(cfg, header, rows))
    return EXIT_OK


def cmd_mzi_scan(args, cfg: RunConfig) -> int:
    rho = load_state(args.state, cfg.tolerance) if args.state else np.diag([1.0, 0.0]).astype(complex)
    if isinstance(rho, BipartiteState):
        raise ValidationError("interferometer models are two-path only; got a bipartite state")
    alpha = np.pi / 4 if args.alpha is None else args.alpha
    bs2 = args.bs2 != "off"
    rho = require_two_path(rho)
    u = bs1_unitary(alpha)
    inside = u @ rho @ u.conj().T
    duality = wpdr_audit(inside)
    header = ("phi", "p_D0", "p_D1", "gain_wave", "gain_path", "visibility",
              "distinguishability", "wpdr_residual", "interference_residual")
    rows = []
    for phi in np.arange(cfg.phi_grid) * 2 * np.pi / cfg.phi_grid:
        p0, p1 = mzi_probabilities(MziConfig(alpha, phi, bs2), rho)
        rows.append((
            float(phi), p0, p1,
            info_gain(wave_observable(phi).measurement(), inside),
            info_gain(path_measurement(), inside),
            fringe_visibility(inside),
            path_distinguishability(inside),
            duality.wpdr_residual,
            wave_interference_audit(inside, phi, 0.0).residual,
        ))
    _emit(cfg, _table(cfg, header, rows))
    return EXIT_OK


def cmd_guess_game(args, cfg: RunConfig) -> int:
    _require(args, "ensemble", "state")
    e = load_ensemble(args.ensemble, cfg.tolerance)
    state = load_state(args.state, cfg.tolerance)
    if not isinstance(state, BipartiteState):
        raise ValidationError("the guessing game needs a bipartite state (dims [d_A, d_B])")
    if state.d_a != e.dim:
        raise ValidationError(f"ensemble dimension {e.dim} vs system A dimension {state.d_a}")
    if not e.normalized:
        e, _ = e.renormalized()
    gen = RngSpec(cfg.seed, "guess-game").generator()
    schedule = [(haar_unitary(state.d_a, gen), haar_unitary(state.d_b, gen))
                for _ in range(cfg.steps)]
    trace = guessing_game_trace(state, e, schedule, cfg.tolerance)
    audit = _conditional_audit(e, state, cfg.tolerance)
    n, d = audit.norm, state.d_a
    inv_l = sum(w / len(p) for w, p in zip(e.weights, e.measurements))

    def lower(fid):
        if audit.form == "rank1":
            return (1 - n) * (1 - fid)
        return 1 - n - (inv_l - n / d) * d * fid

    header = ("step", "entropy_sum", "pg_fidelity", "lower_bound")
    rows = [(step, s, fid, lower(fid)) for step, (s, fid) in enumerate(trace)]
    _emit(cfg, _table(cfg, header, rows))
    worst = min(r[1] - r[3] for r in rows)
    if worst < -cfg.tolerance:
        raise AuditFailure(f"entropy sum fell below its lower bound by {-worst:.3e}")
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON file with RunConfig fields")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--seed", type=int)
    p.add_argument("--tolerance", type=float)
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="complementarity",
        description="View operators, information exclusion audits, tomography, "
                    "interferometer scans and correlation witnesses.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    groups = parser.add_subparsers(dest="group", required=True)

    ier = groups.add_parser("ier", help="information exclusion audits").add_subparsers(
        dest="action", required=True)
    p = ier.add_parser("bound", help="norm, exclusivity and completeness of an ensemble")
    p.add_argument("--ensemble", required=True)
    _common(p)
    p.set_defaults(func=cmd_ier_bound)
    p = ier.add_parser("check", help="audit an ensemble against a state")
    p.add_argument("--ensemble", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--epsilon", type=float, help="smoothing for the min-entropy bound")
    _common(p)
    p.set_defaults(func=cmd_ier_check)

    tomo = groups.add_parser("tomo", help="linear-inversion tomography").add_subparsers(
        dest="action", required=True)
    p = tomo.add_parser("simulate", help="outcome probabilities or sampled frequencies")
    p.add_argument("--ensemble", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--shots", type=int, default=0)
    _common(p)
    p.set_defaults(func=cmd_tomo_simulate)
    p = tomo.add_parser("reconstruct", help="state estimate from a probability file")
    p.add_argument("--ensemble", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--state", help="reference state for the Frobenius error")
    _common(p)
    p.set_defaults(func=cmd_tomo_reconstruct)

    wit = groups.add_parser("witness", help="correlation witness scans").add_subparsers(
        dest="action", required=True)
    for name, func, text in (("eta-scan", cmd_witness_scan, "critical noise levels along beta"),
                             ("optimize", cmd_witness_optimize, "optimised weights along beta")):
        p = wit.add_parser(name, help=text)
        p.add_argument("--case", choices=("a", "b", "c", "d"))
        p.add_argument("--ensemble", help="witness file with measurement pairs")
        p.add_argument("--grid", type=int, help="number of beta points")
        _common(p)
        p.set_defaults(func=func)

    mzi = groups.add_parser("mzi", help="interferometer scans").add_subparsers(
        dest="action", required=True)
    p = mzi.add_parser("scan", help="detector probabilities and duality residuals vs phase")
    p.add_argument("--alpha", type=float, help="first beam splitter angle (default pi/4)")
    p.add_argument("--bs2", choices=("on", "off"), default="on")
    p.add_argument("--grid", type=int, help="number of phase points")
    p.add_argument("--state", help="input qubit state (default |0>)")
    _common(p)
    p.set_defaults(func=cmd_mzi_scan)

    game = groups.add_parser("guess-game", help="guessing game with quantum memory").add_subparsers(
        dest="action", required=True)
    p = game.add_parser("run", help="entropy sum along random local unitaries")
    p.add_argument("--state", required=True)
    p.add_argument("--ensemble", required=True)
    p.add_argument("--steps", type=int)
    _common(p)
    p.set_defaults(func=cmd_guess_game)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = build_config(args)
        return args.func(args, cfg)
    except AuditFailure as exc:
        print(f"audit failure: {exc}", file=sys.stderr)
        return EXIT_AUDIT
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (ValidationError, ValueError, KeyError, TypeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
