"""Measurement statistics and the extractable-work functional.

The central quantity is xi(rho, A, B) = 2 - H(A|B) - H(B|A): the work, in
bits (with k_B T ln2 = 1), that two parties can extract from two copies of
a shared two-qubit state when each measures along a fixed Bloch direction
and the outcome of one side conditions extraction on the other.

Joint outcome tables are computed two ways: a reference route that traces
projector products against the density matrix, and a vectorized route based
on the Bloch decomposition (local vectors + correlation matrix) used by the
quadrature code. Tests pin both routes to each other at 1e-12.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qcore import (
    ID2,
    PAULIS,
    BlochDirection,
    InvalidStateError,
    TwoQubitState,
    projector,
)

PROBABILITY_CLAMP = -1e-12  # entries in [-1e-12, 0) are roundoff, clamp to 0
DISTRIBUTION_SUM_TOL = 1e-10

_TINY = 1e-300  # keeps log2 quiet inside masked branches


def _clamp_probs(p: np.ndarray) -> np.ndarray:
    if np.min(p) < PROBABILITY_CLAMP:
        raise InvalidStateError(
            f"probability {np.min(p)!r} below clamp threshold {PROBABILITY_CLAMP}"
        )
    return np.maximum(p, 0.0)


def shannon_entropy(probs) -> float:
    """Shannon entropy in bits of a probability vector; 0 log 0 := 0."""
    p = _clamp_probs(np.asarray(probs, dtype=float))
    return float(-np.sum(np.where(p > 0.0, p * np.log2(np.maximum(p, _TINY)), 0.0)))


def binary_entropy(q: float) -> float:
    return shannon_entropy([q, 1.0 - q])


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """2x2 table p[a, b] of joint outcome probabilities, a = Alice, b = Bob."""

    p: np.ndarray

    def __post_init__(self):
        table = np.array(self.p, dtype=float)
        if table.shape != (2, 2):
            raise InvalidStateError(f"joint table must be 2x2, got {table.shape}")
        table = _clamp_probs(table)
        if abs(table.sum() - 1.0) > DISTRIBUTION_SUM_TOL:
            raise InvalidStateError(f"joint table must sum to 1, got {table.sum()!r}")
        table.setflags(write=False)
        object.__setattr__(self, "p", table)

    def marginal_a(self) -> np.ndarray:
        return self.p.sum(axis=1)

    def marginal_b(self) -> np.ndarray:
        return self.p.sum(axis=0)


@dataclass(frozen=True)
class EntropyBundle:
    """Joint, marginal and conditional Shannon entropies of one 2x2 table (bits)."""

    h_joint: float
    h_a: float
    h_b: float
    h_a_given_b: float
    h_b_given_a: float


def joint_distribution(
    rho: TwoQubitState, n_a: BlochDirection, n_b: BlochDirection
) -> JointDistribution:
    """Outcome table p(a,b) = Tr[(P_a x Q_b) rho] for projective measurements along n_a, n_b."""
    pa = projector(n_a)
    qb = projector(n_b)
    ops_a = (pa, ID2 - pa)
    ops_b = (qb, ID2 - qb)
    table = np.empty((2, 2))
    for a in range(2):
        for b in range(2):
            table[a, b] = np.trace(np.kron(ops_a[a], ops_b[b]) @ rho.matrix).real
    return JointDistribution(table)


def _conditional(branches: np.ndarray, weights: np.ndarray) -> float:
    # weight-zero branches contribute nothing (0 log 0 convention)
    total = 0.0
    for w, row in zip(weights, branches):
        if w > 0.0:
            total += w * shannon_entropy(row / w)
    return total


def entropy_bundle(d: JointDistribution) -> EntropyBundle:
    """All entropies of a joint table; conditionals use the per-branch form."""
    h_joint = shannon_entropy(d.p.ravel())
    pa = d.marginal_a()
    pb = d.marginal_b()
    return EntropyBundle(
        h_joint=h_joint,
        h_a=shannon_entropy(pa),
        h_b=shannon_entropy(pb),
        h_a_given_b=_conditional(d.p.T, pb),
        h_b_given_a=_conditional(d.p, pa),
    )


def xi(rho: TwoQubitState, n_a: BlochDirection, n_b: BlochDirection) -> float:
    """Extractable work 2 - H(A|B) - H(B|A) in bits for one basis pair."""
    b = entropy_bundle(joint_distribution(rho, n_a, n_b))
    return 2.0 - b.h_a_given_b - b.h_b_given_a


@dataclass(frozen=True, eq=False)
class BlochForm:
    """Local Bloch vectors and correlation matrix of a two-qubit state.

    p(a,b) along directions (m, n) is (1 + sa m.r_a + sb n.r_b + sa sb m.T n)/4
    with sa, sb = +-1; this makes batched evaluation over many directions a
    handful of array operations.
    """

    r_a: np.ndarray
    r_b: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        for name in ("r_a", "r_b", "t"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_state(cls, rho: TwoQubitState) -> "BlochForm":
        m = rho.matrix
        r_a = np.array([np.trace(np.kron(s, ID2) @ m).real for s in PAULIS])
        r_b = np.array([np.trace(np.kron(ID2, s) @ m).real for s in PAULIS])
        t = np.array(
            [[np.trace(np.kron(si, sj) @ m).real for sj in PAULIS] for si in PAULIS]
        )
        return cls(r_a=r_a, r_b=r_b, t=t)


def joint_probs_batch(form: BlochForm, dirs_a: np.ndarray, dirs_b: np.ndarray) -> np.ndarray:
    """(N, 4) array of [p00, p01, p10, p11] for N direction pairs."""
    a = dirs_a @ form.r_a
    b = dirs_b @ form.r_b
    e = np.einsum("ni,ij,nj->n", dirs_a, form.t, dirs_b)
    table = np.stack(
        [
            (1.0 + a + b + e),
            (1.0 + a - b - e),
            (1.0 - a + b - e),
            (1.0 - a - b + e),
        ],
        axis=1,
    ) / 4.0
    return _clamp_probs(table)


def _entropy_rows(p: np.ndarray) -> np.ndarray:
    return -np.sum(np.where(p > 0.0, p * np.log2(np.maximum(p, _TINY)), 0.0), axis=1)


def xi_batch(form: BlochForm, dirs_a: np.ndarray, dirs_b: np.ndarray) -> np.ndarray:
    """Vectorized xi over N direction pairs, via 2 - 2H(A,B) + H(A) + H(B)."""
    table = joint_probs_batch(form, dirs_a, dirs_b)
    h_joint = _entropy_rows(table)
    pa = table[:, 0] + table[:, 1]
    pb = table[:, 0] + table[:, 2]
    h_a = _entropy_rows(np.stack([pa, 1.0 - pa], axis=1))
    h_b = _entropy_rows(np.stack([pb, 1.0 - pb], axis=1))
    return 2.0 - 2.0 * h_joint + h_a + h_b
