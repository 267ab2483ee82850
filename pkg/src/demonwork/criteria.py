"""Separability criteria built on averaged extractable work.

Two witnesses are provided: the great-circle average (both parties sweep a
shared measurement circle on the Bloch sphere, circle chosen to maximize
the average) and the full Bloch-sphere average. Each is compared against
the same quadrature applied to |00>, so discretization error cancels in
the margin. CHSH (Horodecki M criterion) and the exact PPT test are
included as reference witnesses, along with the chained inequalities and
the pure-component upper bound used to certify the witness on separable
mixtures.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from .qcore import (
    BlochDirection,
    ConfigurationError,
    TwoQubitState,
    build_state,
    hermitian_eigenvalues,
    partial_transpose,
    projector,
    PureSchmidt,
    random_directions,
)
from .workext import BlochForm, xi_batch

DEFAULT_CIRCLE_NODES = 1024
DEFAULT_POLAR_NODES = 128
DEFAULT_AZIMUTHAL_NODES = 256
MIN_CIRCLE_NODES = 16
MIN_POLAR_NODES = 16
MIN_AZIMUTHAL_NODES = 32

DECISION_TOL = 1e-6  # margin above threshold required to flag entanglement
CHAIN_TOL = 1e-9
PPT_FLOOR = -1e-10
CHSH_TOL = 1e-9

_GRID_POLAR = 12
_GRID_AZIMUTH = 24
_NM_TOL = 1e-7
_NM_MAX_EVALS = 500


@dataclass(frozen=True, eq=False)
class GreatCircleFrame:
    """Orthonormal pair (u, v); the circle direction at angle t is u cos t + v sin t."""

    u: BlochDirection
    v: BlochDirection

    def __post_init__(self):
        if abs(float(np.dot(self.u.n, self.v.n))) > 1e-12:
            raise ConfigurationError("frame vectors must be orthogonal")

    def normal(self) -> np.ndarray:
        return np.cross(self.u.n, self.v.n)

    def directions(self, thetas: np.ndarray) -> np.ndarray:
        """(N, 3) direction samples along the circle."""
        return np.outer(np.cos(thetas), self.u.n) + np.outer(np.sin(thetas), self.v.n)

    @classmethod
    def from_normal(cls, normal) -> "GreatCircleFrame":
        """Deterministic frame spanning the plane orthogonal to `normal`."""
        nrm = np.asarray(normal, dtype=float)
        nrm = nrm / np.linalg.norm(nrm)
        seed = np.zeros(3)
        seed[int(np.argmin(np.abs(nrm)))] = 1.0
        u = seed - np.dot(seed, nrm) * nrm
        u = u / np.linalg.norm(u)
        v = np.cross(nrm, u)
        return cls(u=BlochDirection(u), v=BlochDirection(v))


def xz_frame() -> GreatCircleFrame:
    """Circle through |0> and |+>: theta = 0 points along +z, theta = pi/2 along +x."""
    return GreatCircleFrame(
        u=BlochDirection(np.array([0.0, 0.0, 1.0])),
        v=BlochDirection(np.array([1.0, 0.0, 0.0])),
    )


@dataclass(frozen=True)
class WitnessVerdict:
    value: float
    threshold: float
    margin: float
    entangled_flag: bool


@dataclass(frozen=True, eq=False)
class SeparableDecomposition:
    """Convex mixture of pure product states, one (weight, dir_a, dir_b) per component."""

    components: tuple

    def __post_init__(self):
        comps = tuple(
            (float(w), a, b) for (w, a, b) in self.components
        )
        if not comps:
            raise ConfigurationError("decomposition needs at least one component")
        weights = np.array([w for w, _, _ in comps])
        if np.min(weights) < 0.0:
            raise ConfigurationError("weights must be nonnegative")
        if abs(weights.sum() - 1.0) > 1e-10:
            raise ConfigurationError(f"weights must sum to 1, got {weights.sum()!r}")
        object.__setattr__(self, "components", comps)


@dataclass(frozen=True)
class ChainReport:
    n: int
    lhs: float
    rhs: float
    violated: bool


@dataclass(frozen=True, eq=False)
class CircleMaxResult:
    """Best circle average found, the achieving frame(s) and optimizer status."""

    value: float
    frame: GreatCircleFrame
    converged: bool
    frame_b: Optional[GreatCircleFrame] = None


def _check_circle_nodes(nodes: int) -> None:
    if nodes < MIN_CIRCLE_NODES:
        raise ConfigurationError(f"circle quadrature needs >= {MIN_CIRCLE_NODES} nodes")


def _circle_average(
    form: BlochForm,
    frame_a: GreatCircleFrame,
    frame_b: GreatCircleFrame,
    nodes: int,
) -> float:
    thetas = 2.0 * np.pi * np.arange(nodes) / nodes
    return float(np.mean(xi_batch(form, frame_a.directions(thetas), frame_b.directions(thetas))))


def xi_circle_average(
    rho: TwoQubitState,
    frame_a: GreatCircleFrame,
    frame_b: GreatCircleFrame,
    nodes: int = DEFAULT_CIRCLE_NODES,
) -> float:
    """Periodic-trapezoid average of xi as both parties sweep their circles in step."""
    _check_circle_nodes(nodes)
    return _circle_average(BlochForm.from_state(rho), frame_a, frame_b, nodes)


def _normal_from_angles(theta: float, phi: float) -> np.ndarray:
    st = np.sin(theta)
    return np.array([st * np.cos(phi), st * np.sin(phi), np.cos(theta)])


def maximize_great_circle(
    rho: TwoQubitState,
    nodes: int = DEFAULT_CIRCLE_NODES,
    independent_frames: bool = False,
) -> CircleMaxResult:
    """Search for the measurement circle maximizing the circle-averaged work.

    The default shares one circle between both parties, parameterized by its
    unit normal (two spherical angles). A coarse grid scan (seeded with the
    x-z plane) is refined by Nelder-Mead. With independent_frames=True the
    two normals are optimized separately (four angles); the relative
    in-plane offset stays fixed by the deterministic frame convention.
    """
    _check_circle_nodes(nodes)
    form = BlochForm.from_state(rho)

    def shared_value(angles) -> float:
        frame = GreatCircleFrame.from_normal(_normal_from_angles(*angles))
        return _circle_average(form, frame, frame, nodes)

    # grid over normals on the upper hemisphere + the x-z plane seed
    candidates = [(np.pi / 2.0, np.pi / 2.0)]  # normal = +y, circle = x-z plane
    for theta in np.linspace(np.pi / 2.0 / _GRID_POLAR, np.pi / 2.0, _GRID_POLAR):
        for phi in np.linspace(0.0, 2.0 * np.pi, _GRID_AZIMUTH, endpoint=False):
            candidates.append((theta, phi))
    grid_vals = [shared_value(c) for c in candidates]
    best_idx = int(np.argmax(grid_vals))
    best_angles = np.array(candidates[best_idx])
    best_val = grid_vals[best_idx]

    if independent_frames:

        def objective(x) -> float:
            fa = GreatCircleFrame.from_normal(_normal_from_angles(x[0], x[1]))
            fb = GreatCircleFrame.from_normal(_normal_from_angles(x[2], x[3]))
            return -_circle_average(form, fa, fb, nodes)

        start = np.concatenate([best_angles, best_angles])
    else:

        def objective(x) -> float:
            return -shared_value(x)

        start = best_angles

    res = minimize(
        objective,
        start,
        method="Nelder-Mead",
        options={"xatol": _NM_TOL, "fatol": _NM_TOL, "maxfev": _NM_MAX_EVALS},
    )
    refined = -float(res.fun)
    if refined >= best_val:
        best_val = refined
        best_x = np.asarray(res.x, dtype=float)
    else:  # optimizer never beats its own start, but stay safe
        best_x = start
    if independent_frames:
        frame = GreatCircleFrame.from_normal(_normal_from_angles(best_x[0], best_x[1]))
        frame_b = GreatCircleFrame.from_normal(_normal_from_angles(best_x[2], best_x[3]))
    else:
        frame = GreatCircleFrame.from_normal(_normal_from_angles(*best_x))
        frame_b = None
    return CircleMaxResult(
        value=best_val, frame=frame, converged=bool(res.success), frame_b=frame_b
    )


def _sphere_grid(polar_nodes: int, azimuthal_nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Direction samples and weights for the product-rule sphere average.

    Gauss-Legendre in the cosine of the polar angle, periodic trapezoid in
    azimuth; weights sum to 1.
    """
    x, w = np.polynomial.legendre.leggauss(polar_nodes)
    phi = 2.0 * np.pi * np.arange(azimuthal_nodes) / azimuthal_nodes
    st = np.sqrt(np.maximum(0.0, 1.0 - x**2))
    nx = st[:, None] * np.cos(phi)[None, :]
    ny = st[:, None] * np.sin(phi)[None, :]
    nz = np.broadcast_to(x[:, None], nx.shape)
    dirs = np.stack([nx, ny, nz], axis=-1).reshape(-1, 3)
    weights = np.broadcast_to(w[:, None], nx.shape).reshape(-1) / (2.0 * azimuthal_nodes)
    return dirs, weights


def xi_bloch_sphere(
    rho: TwoQubitState,
    polar_nodes: int = DEFAULT_POLAR_NODES,
    azimuthal_nodes: int = DEFAULT_AZIMUTHAL_NODES,
) -> float:
    """Average of xi over the whole Bloch sphere, both parties along the same direction."""
    if polar_nodes < MIN_POLAR_NODES:
        raise ConfigurationError(f"sphere quadrature needs >= {MIN_POLAR_NODES} polar nodes")
    if azimuthal_nodes < MIN_AZIMUTHAL_NODES:
        raise ConfigurationError(
            f"sphere quadrature needs >= {MIN_AZIMUTHAL_NODES} azimuthal nodes"
        )
    form = BlochForm.from_state(rho)
    dirs, weights = _sphere_grid(polar_nodes, azimuthal_nodes)
    return float(np.sum(weights * xi_batch(form, dirs, dirs)))


def werner_xi_closed_form(p: float) -> float:
    """Sphere-averaged work of the singlet/identity mixture: (1-p)log2(1-p) + (1+p)log2(1+p)."""
    if not 0.0 <= p <= 1.0:
        raise ConfigurationError(f"weight must be in [0, 1], got {p!r}")
    total = (1.0 + p) * np.log2(1.0 + p)
    if p < 1.0:
        total += (1.0 - p) * np.log2(1.0 - p)
    return float(total)


def _product_ket_state() -> TwoQubitState:
    return build_state(PureSchmidt(1.0))


@functools.lru_cache(maxsize=None)
def _circle_threshold(nodes: int) -> float:
    return maximize_great_circle(_product_ket_state(), nodes=nodes).value


@functools.lru_cache(maxsize=None)
def _sphere_threshold(polar_nodes: int, azimuthal_nodes: int) -> float:
    return xi_bloch_sphere(_product_ket_state(), polar_nodes, azimuthal_nodes)


def _verdict(value: float, threshold: float) -> WitnessVerdict:
    margin = value - threshold
    return WitnessVerdict(
        value=value,
        threshold=threshold,
        margin=margin,
        entangled_flag=bool(margin > DECISION_TOL),
    )


def witness_great_circle(
    rho: TwoQubitState, nodes: int = DEFAULT_CIRCLE_NODES
) -> WitnessVerdict:
    """Entanglement verdict from the maximized circle average vs. the |00> baseline."""
    value = maximize_great_circle(rho, nodes=nodes).value
    return _verdict(value, _circle_threshold(nodes))


def witness_bloch_sphere(
    rho: TwoQubitState,
    polar_nodes: int = DEFAULT_POLAR_NODES,
    azimuthal_nodes: int = DEFAULT_AZIMUTHAL_NODES,
) -> WitnessVerdict:
    """Entanglement verdict from the sphere average vs. the |00> baseline."""
    value = xi_bloch_sphere(rho, polar_nodes, azimuthal_nodes)
    return _verdict(value, _sphere_threshold(polar_nodes, azimuthal_nodes))


def product_state(dir_a: BlochDirection, dir_b: BlochDirection) -> TwoQubitState:
    """Pure product state pointing along (dir_a, dir_b)."""
    return TwoQubitState(np.kron(projector(dir_a), projector(dir_b)))


def assemble_state(decomp: SeparableDecomposition) -> TwoQubitState:
    """Density matrix of the mixture; trace-renormalized to absorb weight roundoff."""
    m = np.zeros((4, 4), dtype=complex)
    for w, dir_a, dir_b in decomp.components:
        m += w * np.kron(projector(dir_a), projector(dir_b))
    return TwoQubitState(m / np.trace(m).real)


def pcs_bound(
    decomp: SeparableDecomposition,
    frame: GreatCircleFrame,
    nodes: int = DEFAULT_CIRCLE_NODES,
) -> float:
    """Weighted circle average when the active pure component is known each round.

    Knowing the component can only help, so this upper-bounds the circle
    average of the assembled mixture on the same frame.
    """
    _check_circle_nodes(nodes)
    total = 0.0
    for w, dir_a, dir_b in decomp.components:
        form = BlochForm.from_state(product_state(dir_a, dir_b))
        total += w * _circle_average(form, frame, frame, nodes)
    return total


def random_separable_decomposition(
    rng: np.random.Generator, max_components: int = 6
) -> SeparableDecomposition:
    """Dirichlet(1) weights over uniformly random product directions."""
    k = int(rng.integers(1, max_components + 1))
    weights = rng.dirichlet(np.ones(k))
    dirs = random_directions(2 * k, rng)
    return SeparableDecomposition(
        components=tuple((weights[i], dirs[2 * i], dirs[2 * i + 1]) for i in range(k))
    )


def chained_inequality(
    rho: TwoQubitState,
    alice_dirs: Sequence[BlochDirection],
    bob_dirs: Sequence[BlochDirection],
) -> ChainReport:
    """Alternating-chain work inequality; violation rules out a joint classical model.

    lhs = xi(A1,B1) + xi(B1,A2) + ... + xi(An,Bn) (2n - 1 terms) must not
    exceed 2(2n - 2) + xi(A1,Bn) for classically correlated states.
    """
    if len(alice_dirs) != len(bob_dirs) or not alice_dirs:
        raise ConfigurationError("direction lists must be nonempty and of equal length")
    n = len(alice_dirs)
    form = BlochForm.from_state(rho)
    pairs_a = []
    pairs_b = []
    for k in range(n):
        pairs_a.append(alice_dirs[k].n)
        pairs_b.append(bob_dirs[k].n)
        if k + 1 < n:
            pairs_a.append(alice_dirs[k + 1].n)
            pairs_b.append(bob_dirs[k].n)
    pairs_a.append(alice_dirs[0].n)
    pairs_b.append(bob_dirs[n - 1].n)
    vals = xi_batch(form, np.array(pairs_a), np.array(pairs_b))
    lhs = float(np.sum(vals[:-1]))
    rhs = 2.0 * (2.0 * n - 2.0) + float(vals[-1])
    return ChainReport(n=n, lhs=lhs, rhs=rhs, violated=bool(lhs > rhs + CHAIN_TOL))


def chsh_horodecki(rho: TwoQubitState) -> float:
    """Sum of the two largest eigenvalues of T'T; some CHSH setting is violated iff > 1."""
    t = BlochForm.from_state(rho).t
    vals = hermitian_eigenvalues(t.T @ t)
    return float(vals[0] + vals[1])


def chsh_violated(rho: TwoQubitState) -> bool:
    return chsh_horodecki(rho) > 1.0 + CHSH_TOL


def ppt_separable(rho: TwoQubitState) -> bool:
    """Exact separability for two qubits: partial transpose stays positive."""
    vals = hermitian_eigenvalues(partial_transpose(rho))
    return bool(vals[-1] >= PPT_FLOOR)
