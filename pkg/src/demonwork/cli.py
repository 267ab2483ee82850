"""Command-line front end: witness verdicts, scans, cycle audits, simulation.

Exit codes: 0 = success (for `witness`: separability not excluded),
3 = entanglement certified, 1 = input or validation error. CSV tables
start with the schema comment line `# demonwork-csv v1`; structured
results are JSON on stdout. Output goes to --out when given.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Optional

import numpy as np

from .criteria import (
    DEFAULT_AZIMUTHAL_NODES,
    DEFAULT_CIRCLE_NODES,
    DEFAULT_POLAR_NODES,
    _circle_threshold,
    chsh_horodecki,
    chained_inequality,
    maximize_great_circle,
    ppt_separable,
    werner_xi_closed_form,
    witness_bloch_sphere,
    witness_great_circle,
    xi_bloch_sphere,
)
from .protocol_sim import ProtocolConfig, simulate
from .qcore import (
    BlochDirection,
    ClassicalMix,
    ConfigurationError,
    Dense,
    DemonworkError,
    PureSchmidt,
    StateSpec,
    Werner,
    build_state,
)
from .thermocycle import cycle_balance

CSV_VERSION = "# demonwork-csv v1"

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_ENTANGLED = 3


class StateFileError(DemonworkError):
    """State file failed schema validation; message carries the JSON path."""


def parse_angle(text) -> float:
    """Angle in radians; accepts plain numbers and the `0.2pi` shorthand."""
    if isinstance(text, (int, float)):
        return float(text)
    s = str(text).strip().lower()
    try:
        if s.endswith("pi"):
            head = s[: -2].strip()
            return (float(head) if head else 1.0) * math.pi
        return float(s)
    except ValueError:
        raise ConfigurationError(f"cannot parse angle {text!r}") from None


def _parse_angle_list(text: str) -> list[float]:
    items = [part for part in text.split(",") if part.strip()]
    if not items:
        raise ConfigurationError("empty angle list")
    return [parse_angle(part) for part in items]


def _parse_direction(text: str) -> BlochDirection:
    parts = text.split(",")
    if len(parts) != 3:
        raise ConfigurationError(f"direction must be 'x,y,z', got {text!r}")
    try:
        vec = [float(p) for p in parts]
    except ValueError:
        raise ConfigurationError(f"direction must be numeric, got {text!r}") from None
    return BlochDirection.normalized(vec)


def _expect_number(doc: dict, key: str, path: str) -> float:
    if key not in doc:
        raise StateFileError(f"{path}.{key}: required field is missing")
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise StateFileError(f"{path}.{key}: expected a number, got {value!r}")
    return float(value)


def _expect_unit_interval(doc: dict, key: str, path: str) -> float:
    value = _expect_number(doc, key, path)
    if not 0.0 <= value <= 1.0:
        raise StateFileError(f"{path}.{key}: must lie in [0, 1], got {value!r}")
    return value


def _parse_dense_matrix(raw, path: str) -> np.ndarray:
    if not isinstance(raw, list) or len(raw) != 4:
        raise StateFileError(f"{path}: expected 4 rows")
    m = np.zeros((4, 4), dtype=complex)
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != 4:
            raise StateFileError(f"{path}[{i}]: expected 4 entries")
        for j, entry in enumerate(row):
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in entry)
            ):
                raise StateFileError(f"{path}[{i}][{j}]: expected an [re, im] pair")
            m[i, j] = complex(entry[0], entry[1])
    return m


def parse_state_spec(doc) -> StateSpec:
    """Validate a state-file document and build the matching spec."""
    if not isinstance(doc, dict):
        raise StateFileError("$: state file must be a JSON object")
    family = doc.get("family")
    if family is None:
        raise StateFileError("$.family: required field is missing")
    if family == "werner":
        return Werner(p=_expect_unit_interval(doc, "p", "$"))
    if family == "pure_schmidt":
        has_alpha = "alpha" in doc
        has_sq = "alpha_sq" in doc
        if has_alpha == has_sq:
            raise StateFileError("$: provide exactly one of 'alpha' or 'alpha_sq'")
        if has_alpha:
            return PureSchmidt(alpha=_expect_unit_interval(doc, "alpha", "$"))
        return PureSchmidt(alpha=math.sqrt(_expect_unit_interval(doc, "alpha_sq", "$")))
    if family == "classical_mix":
        c0 = _expect_unit_interval(doc, "c0", "$")
        if "phi" not in doc:
            raise StateFileError("$.phi: required field is missing")
        phi = doc["phi"]
        if isinstance(phi, str):
            phi = parse_angle(phi)
        elif isinstance(phi, bool) or not isinstance(phi, (int, float)):
            raise StateFileError(f"$.phi: expected a number or angle string, got {phi!r}")
        return ClassicalMix(c0=c0, phi=float(phi))
    if family == "dense":
        if "matrix" not in doc:
            raise StateFileError("$.matrix: required field is missing")
        return Dense(matrix=_parse_dense_matrix(doc["matrix"], "$.matrix"))
    raise StateFileError(
        f"$.family: unknown family {family!r}; expected werner, pure_schmidt, "
        f"classical_mix or dense"
    )


def dump_state_spec(spec: StateSpec) -> dict:
    """Canonical state-file document; re-parsing rebuilds the identical state."""
    if isinstance(spec, Werner):
        return {"family": "werner", "p": spec.p}
    if isinstance(spec, PureSchmidt):
        return {"family": "pure_schmidt", "alpha": spec.alpha}
    if isinstance(spec, ClassicalMix):
        return {"family": "classical_mix", "c0": spec.c0, "phi": spec.phi}
    if isinstance(spec, Dense):
        m = np.asarray(spec.matrix, dtype=complex)
        return {
            "family": "dense",
            "matrix": [[[m[i, j].real, m[i, j].imag] for j in range(4)] for i in range(4)],
        }
    raise DemonworkError(f"cannot serialize spec {type(spec).__name__}")


def _load_state_spec(path: str) -> StateSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"$: not valid JSON ({exc})") from None
    return parse_state_spec(doc)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(payload: dict, out: Optional[str]) -> None:
    _emit(json.dumps(payload, indent=2) + "\n", out)


def _maybe_dump_state(args, spec: StateSpec) -> bool:
    if getattr(args, "dump_state", False):
        _emit_json(dump_state_spec(spec), args.out)
        return True
    return False


def _worker_count(requested: int) -> int:
    cap = os.environ.get("DEMONWORK_THREADS")
    workers = max(1, int(requested))
    if cap:
        try:
            workers = min(workers, max(1, int(cap)))
        except ValueError:
            raise ConfigurationError(f"DEMONWORK_THREADS must be an integer, got {cap!r}")
    return workers


def _cmd_witness(args) -> int:
    spec = _load_state_spec(args.state)
    if _maybe_dump_state(args, spec):
        return EXIT_OK
    rho = build_state(spec)
    if args.method == "gc":
        nodes = args.nodes or DEFAULT_CIRCLE_NODES
        verdict = witness_great_circle(rho, nodes=nodes)
        nodes_used = {"nodes": nodes}
    else:
        polar = args.nodes or DEFAULT_POLAR_NODES
        azimuthal = 2 * polar if args.nodes else DEFAULT_AZIMUTHAL_NODES
        verdict = witness_bloch_sphere(rho, polar, azimuthal)
        nodes_used = {"polar_nodes": polar, "azimuthal_nodes": azimuthal}
    payload = {
        "method": args.method,
        **nodes_used,
        "value": verdict.value,
        "threshold": verdict.threshold,
        "margin": verdict.margin,
        "entangled": verdict.entangled_flag,
    }
    _emit_json(payload, args.out)
    return EXIT_ENTANGLED if verdict.entangled_flag else EXIT_OK


def _csv(rows: list[list[str]], header: list[str]) -> str:
    lines = [CSV_VERSION, ",".join(header)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _cmd_figure3(args) -> int:
    phis = _parse_angle_list(args.phis)
    for phi in phis:
        if not 0.0 < phi <= math.pi + 1e-12:
            raise ConfigurationError(f"phi values must lie in (0, pi], got {phi!r}")
    if args.grid < 2:
        raise ConfigurationError("grid must have at least 2 points")
    nodes = args.nodes
    threshold = _circle_threshold(nodes)
    params = np.linspace(0.0, 1.0, args.grid)
    rows = []
    for phi in phis:
        for c0 in params:
            value = maximize_great_circle(build_state(ClassicalMix(float(c0), phi)), nodes).value
            margin = value - threshold
            rows.append(
                ["classical", _fmt(phi), _fmt(c0), _fmt(value), _fmt(threshold),
                 _fmt(margin), str(margin > 1e-6).lower()]
            )
    for alpha_sq in params:
        value = maximize_great_circle(
            build_state(PureSchmidt(math.sqrt(float(alpha_sq)))), nodes
        ).value
        margin = value - threshold
        rows.append(
            ["entangled_pure", "", _fmt(alpha_sq), _fmt(value), _fmt(threshold),
             _fmt(margin), str(margin > 1e-6).lower()]
        )
    _emit(_csv(rows, ["family", "phi", "param", "value", "threshold", "margin", "entangled"]),
          args.out)
    return EXIT_OK


def _cmd_werner_scan(args) -> int:
    start, stop, step = args.start, args.stop, args.step
    if not (0.0 <= start < stop <= 1.0) or step <= 0.0:
        raise ConfigurationError(
            f"need 0 <= from < to <= 1 and step > 0, got from={start} to={stop} step={step}"
        )
    rows = []
    count = int(round((stop - start) / step))
    ps = [min(start + k * step, 1.0) for k in range(count + 1)]
    for p in ps:
        rho = build_state(Werner(p))
        rows.append(
            [
                _fmt(p),
                _fmt(xi_bloch_sphere(rho, args.polar_nodes, args.azimuthal_nodes)),
                _fmt(werner_xi_closed_form(p)),
                _fmt(chsh_horodecki(rho)),
                str(ppt_separable(rho)).lower(),
            ]
        )
    _emit(_csv(rows, ["p", "xi_bs", "closed_form", "chsh_m", "ppt_separable"]), args.out)
    return EXIT_OK


def _cmd_cycle(args) -> int:
    spec = _load_state_spec(args.state)
    if _maybe_dump_state(args, spec):
        return EXIT_OK
    direction = _parse_direction(args.direction)
    report = cycle_balance(spec, direction)
    payload = {
        "family": report.family,
        "direction": list(direction.n),
        "extracted": report.extracted,
        "erasure_cost": report.erasure_cost,
        "compression_consumed": report.compression_consumed,
        "decompression_gained": report.decompression_gained,
        "w_inv": report.w_inv,
    }
    _emit_json(payload, args.out)
    return EXIT_OK


def _load_sim_config(args) -> ProtocolConfig:
    doc = {}
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"simulation config is not valid JSON ({exc})") from None
        if not isinstance(doc, dict):
            raise ConfigurationError("simulation config must be a JSON object")

    def bases(key: str) -> tuple:
        raw = doc.get(key, [[0.0, 0.0, 1.0]])
        if not isinstance(raw, list) or not raw:
            raise ConfigurationError(f"config {key} must be a nonempty list of 3-vectors")
        return tuple(BlochDirection.normalized(v) for v in raw)

    groups = args.groups if args.groups is not None else doc.get("groups", 10000)
    seed = args.seed if args.seed is not None else doc.get("seed", 0)
    return ProtocolConfig(
        alice_bases=bases("alice_bases"),
        bob_bases=bases("bob_bases"),
        groups=int(groups),
        seed=int(seed),
    )


def _cmd_simulate(args) -> int:
    spec = _load_state_spec(args.state)
    if _maybe_dump_state(args, spec):
        return EXIT_OK
    cfg = _load_sim_config(args)
    result = simulate(build_state(spec), cfg, workers=_worker_count(args.workers))
    _emit(result.to_json() + "\n", args.out)
    return EXIT_OK


def _cmd_chained(args) -> int:
    spec = _load_state_spec(args.state)
    if _maybe_dump_state(args, spec):
        return EXIT_OK
    angles = _parse_angle_list(args.angles)
    if len(angles) % 2 == 1:
        angles = angles + [angles[-1]]  # odd count: both parties share the last direction
    dirs = [BlochDirection(np.array([math.sin(t), 0.0, math.cos(t)])) for t in angles]
    alice = dirs[0::2]
    bob = dirs[1::2]
    report = chained_inequality(build_state(spec), alice, bob)
    payload = {
        "n": report.n,
        "angles": angles,
        "lhs": report.lhs,
        "rhs": report.rhs,
        "violated": report.violated,
    }
    _emit_json(payload, args.out)
    return EXIT_OK


def _add_state_argument(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("state", help="path to a JSON state file")
    sub.add_argument(
        "--dump-state",
        action="store_true",
        help="print the canonical state file for the parsed state and exit",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="demonwork",
        description="Decide two-qubit separability from thermodynamically extractable work.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    w = subs.add_parser("witness", help="evaluate a separability witness on a state")
    _add_state_argument(w)
    w.add_argument("--method", choices=("gc", "bs"), default="gc",
                   help="gc: maximized great-circle average; bs: Bloch-sphere average")
    w.add_argument("--nodes", type=int, default=None,
                   help="circle nodes (gc) or polar nodes with 2x azimuthal (bs)")
    w.add_argument("--out", default=None)
    w.set_defaults(func=_cmd_witness)

    f = subs.add_parser("figure3", help="work curves for classical mixtures and pure states")
    f.add_argument("--phis", default="0.2pi,0.4pi,0.6pi,0.8pi,pi",
                   help="comma-separated mixing angles in (0, pi]")
    f.add_argument("--grid", type=int, default=41, help="points per parameter grid")
    f.add_argument("--nodes", type=int, default=DEFAULT_CIRCLE_NODES)
    f.add_argument("--out", default=None)
    f.set_defaults(func=_cmd_figure3)

    ws = subs.add_parser("werner-scan", help="witness comparison along the Werner family")
    ws.add_argument("--from", dest="start", type=float, default=0.0)
    ws.add_argument("--to", dest="stop", type=float, default=1.0)
    ws.add_argument("--step", type=float, default=0.001)
    ws.add_argument("--polar-nodes", type=int, default=DEFAULT_POLAR_NODES)
    ws.add_argument("--azimuthal-nodes", type=int, default=DEFAULT_AZIMUTHAL_NODES)
    ws.add_argument("--out", default=None)
    ws.set_defaults(func=_cmd_werner_scan)

    c = subs.add_parser("cycle", help="work balance of one extract-and-restore cycle")
    _add_state_argument(c)
    c.add_argument("--direction", default="0,0,1", help="measurement direction 'x,y,z'")
    c.add_argument("--out", default=None)
    c.set_defaults(func=_cmd_cycle)

    s = subs.add_parser("simulate", help="Monte Carlo run of the grouped protocol")
    _add_state_argument(s)
    s.add_argument("--config", default=None,
                   help="JSON file with alice_bases, bob_bases, groups, seed")
    s.add_argument("--groups", type=int, default=None)
    s.add_argument("--seed", type=int, default=None, help="overrides the config seed (default 0)")
    s.add_argument("--workers", type=int, default=1,
                   help="worker threads; capped by DEMONWORK_THREADS")
    s.add_argument("--out", default=None)
    s.set_defaults(func=_cmd_simulate)

    ch = subs.add_parser("chained", help="alternating-chain inequality along x-z directions")
    _add_state_argument(ch)
    ch.add_argument("--angles", required=True,
                    help="comma-separated angles from +z; odd count repeats the last")
    ch.add_argument("--out", default=None)
    ch.set_defaults(func=_cmd_chained)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DemonworkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
