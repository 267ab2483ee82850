"""Dense complex kernel for one- and two-qubit operators.

State constructors and validators, Bloch directions, a cyclic Jacobi
eigensolver for small Hermitian matrices, von Neumann entropy and the
partial transpose. Everything here is a pure function of immutable
inputs; arrays inside the dataclasses are frozen after validation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
EIGENVALUE_FLOOR = -1e-10  # roundoff below this means the input is bad
JACOBI_OFF_NORM = 1e-13
JACOBI_MAX_SWEEPS = 100


class DemonworkError(ValueError):
    """Base class for all validation and domain errors in this package."""


class InvalidStateError(DemonworkError):
    """Matrix, direction or probability data violates its invariants."""


class ConfigurationError(DemonworkError):
    """Bad knob value: node counts, ranges, list lengths."""


class OutOfModelError(DemonworkError):
    """Requested computation is outside the supported model family."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a

PAULI_X = _readonly(np.array([[0, 1], [1, 0]], dtype=complex))
PAULI_Y = _readonly(np.array([[0, -1j], [1j, 0]], dtype=complex))
PAULI_Z = _readonly(np.array([[1, 0], [0, -1]], dtype=complex))
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)
ID2 = _readonly(np.eye(2, dtype=complex))
ID4 = _readonly(np.eye(4, dtype=complex))


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and (
        np.max(np.abs(m - m.conj().T)) <= tol
    )


@dataclass(frozen=True, eq=False)
class BlochDirection:
    """Unit vector on the Bloch sphere; defines the rank-1 projector (I + n.sigma)/2."""

    n: np.ndarray

    def __post_init__(self):
        vec = np.array(self.n, dtype=float).reshape(-1)
        if vec.shape != (3,) or not np.all(np.isfinite(vec)):
            raise InvalidStateError("direction must be a finite 3-vector")
        if abs(np.linalg.norm(vec) - 1.0) > 1e-12:
            raise InvalidStateError(
                f"direction must have unit norm, got |n| = {np.linalg.norm(vec)!r}"
            )
        object.__setattr__(self, "n", _readonly(vec))

    @classmethod
    def normalized(cls, v: Iterable[float]) -> "BlochDirection":
        """Build from any nonzero 3-vector by rescaling to unit length."""
        vec = np.array(list(v), dtype=float)
        norm = np.linalg.norm(vec)
        if norm < 1e-12:
            raise InvalidStateError("cannot normalize a (near-)zero vector")
        return cls(vec / norm)

    def __neg__(self) -> "BlochDirection":
        return BlochDirection(-self.n)


PLUS_Z = BlochDirection(np.array([0.0, 0.0, 1.0]))
PLUS_X = BlochDirection(np.array([1.0, 0.0, 0.0]))
PLUS_Y = BlochDirection(np.array([0.0, 1.0, 0.0]))


def _jacobi_eigh(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalization of a Hermitian matrix.

    Sweeps over all off-diagonal pairs with complex plane rotations until
    the off-diagonal Frobenius norm drops below JACOBI_OFF_NORM. Returns
    (eigenvalues descending, eigenvectors as matching columns).
    """
    a = np.array(matrix, dtype=complex)
    n = a.shape[0]
    vecs = np.eye(n, dtype=complex)
    for _ in range(JACOBI_MAX_SWEEPS):
        off = a - np.diag(np.diagonal(a))
        if np.linalg.norm(off) <= JACOBI_OFF_NORM:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase = apq / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                sgn = 1.0 if tau >= 0.0 else -1.0
                t = -sgn / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot = np.eye(n, dtype=complex)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = -s * phase
                rot[q, p] = s * np.conj(phase)
                a = rot.conj().T @ a @ rot
                vecs = vecs @ rot
    else:
        raise DemonworkError("Jacobi sweeps did not converge")
    vals = np.diagonal(a).real
    order = np.argsort(-vals, kind="stable")
    return vals[order].copy(), vecs[:, order].copy()


def hermitian_eigenvalues(m: np.ndarray) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, sorted descending."""
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m):
        raise InvalidStateError("eigensolver requires a Hermitian matrix")
    vals, _ = _jacobi_eigh(m)
    return vals


def hermitian_eigensystem(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and eigenvectors (columns) of a Hermitian matrix."""
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m):
        raise InvalidStateError("eigensolver requires a Hermitian matrix")
    return _jacobi_eigh(m)


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    """4x4 density matrix: Hermitian, unit trace, positive semidefinite."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise InvalidStateError(f"state matrix must be 4x4, got {m.shape}")
        if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
            raise InvalidStateError("state matrix has non-finite entries")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise InvalidStateError("state matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > TRACE_TOL or abs(np.trace(m).imag) > TRACE_TOL:
            raise InvalidStateError(f"state trace must be 1, got {np.trace(m)!r}")
        vals, _ = _jacobi_eigh(m)
        if vals[-1] < EIGENVALUE_FLOOR:
            raise InvalidStateError(
                f"state has negative eigenvalue {vals[-1]!r}; not positive semidefinite"
            )
        object.__setattr__(self, "matrix", _readonly(m))


@dataclass(frozen=True)
class PureSchmidt:
    """Pure state a|00> + sqrt(1-a^2)|11> given the real amplitude on |00>."""

    alpha: float


@dataclass(frozen=True)
class ClassicalMix:
    """Mixture c0|00><00| + (1-c0)|ff><ff| with |f> at polar angle phi in the x-z plane."""

    c0: float
    phi: float


@dataclass(frozen=True)
class Werner:
    """Singlet fraction p of the isotropic singlet/identity mixture."""

    p: float


@dataclass(frozen=True, eq=False)
class Dense:
    """Explicit 4x4 density matrix, validated on build."""

    matrix: np.ndarray


StateSpec = Union[PureSchmidt, ClassicalMix, Werner, Dense]


def projector(n: BlochDirection) -> np.ndarray:
    """Rank-1 projector (I + n.sigma)/2 onto the +n spin direction."""
    x, y, z = n.n
    return (ID2 + x * PAULI_X + y * PAULI_Y + z * PAULI_Z) / 2.0


def _ket_phi(phi: float) -> np.ndarray:
    return np.array([np.cos(phi / 2.0), np.sin(phi / 2.0)], dtype=complex)


def build_state(spec: StateSpec) -> TwoQubitState:
    """Construct and validate a two-qubit state from a family spec."""
    if isinstance(spec, PureSchmidt):
        if not 0.0 <= spec.alpha <= 1.0:
            raise InvalidStateError(f"amplitude must be in [0, 1], got {spec.alpha!r}")
        beta = np.sqrt(max(0.0, 1.0 - spec.alpha**2))
        psi = np.array([spec.alpha, 0.0, 0.0, beta], dtype=complex)
        return TwoQubitState(np.outer(psi, psi.conj()))
    if isinstance(spec, ClassicalMix):
        if not 0.0 <= spec.c0 <= 1.0:
            raise InvalidStateError(f"mixture weight must be in [0, 1], got {spec.c0!r}")
        ket0 = np.array([1.0, 0.0], dtype=complex)
        ketf = _ket_phi(spec.phi)
        k00 = np.kron(ket0, ket0)
        kff = np.kron(ketf, ketf)
        m = spec.c0 * np.outer(k00, k00.conj()) + (1.0 - spec.c0) * np.outer(kff, kff.conj())
        return TwoQubitState(m)
    if isinstance(spec, Werner):
        if not 0.0 <= spec.p <= 1.0:
            raise InvalidStateError(f"singlet weight must be in [0, 1], got {spec.p!r}")
        singlet = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / np.sqrt(2.0)
        m = spec.p * np.outer(singlet, singlet.conj()) + (1.0 - spec.p) / 4.0 * ID4
        return TwoQubitState(m)
    if isinstance(spec, Dense):
        return TwoQubitState(spec.matrix)
    raise OutOfModelError(f"unknown state spec {type(spec).__name__}")


def von_neumann_entropy(state: TwoQubitState) -> float:
    """Entropy -Tr[rho log2 rho] in bits; eigenvalues in [-1e-10, 0) count as 0."""
    vals = hermitian_eigenvalues(state.matrix)
    if vals[-1] < EIGENVALUE_FLOOR:
        raise InvalidStateError(f"eigenvalue {vals[-1]!r} below clamp floor")
    vals = np.clip(vals, 0.0, None)
    positive = vals[vals > 0.0]
    return float(max(0.0, -np.sum(positive * np.log2(positive))))


def partial_transpose(state: TwoQubitState) -> np.ndarray:
    """Transpose on the second qubit; involutive and entry-exact."""
    blocks = state.matrix.reshape(2, 2, 2, 2)
    return blocks.transpose(0, 3, 2, 1).reshape(4, 4).copy()


def su2(axis: BlochDirection, angle: float) -> np.ndarray:
    """Single-qubit rotation exp(-i angle/2 axis.sigma)."""
    x, y, z = axis.n
    gen = x * PAULI_X + y * PAULI_Y + z * PAULI_Z
    return np.cos(angle / 2.0) * ID2 - 1j * np.sin(angle / 2.0) * gen


def bloch_rotation(axis: BlochDirection, angle: float) -> np.ndarray:
    """3x3 rotation of Bloch vectors matching su2(axis, angle) conjugation."""
    k = axis.n
    kx = np.array([[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]])
    return np.eye(3) + np.sin(angle) * kx + (1.0 - np.cos(angle)) * (kx @ kx)


def random_directions(count: int, rng: np.random.Generator) -> list[BlochDirection]:
    """Uniform directions on the sphere via normalized 3-d Gaussians."""
    out: list[BlochDirection] = []
    while len(out) < count:
        v = rng.normal(size=3)
        norm = np.linalg.norm(v)
        if norm > 1e-12:
            out.append(BlochDirection(v / norm))
    return out
