"""Work bookkeeping for the full extract-and-restore cycle.

After Bob measures along n and Alice extracts work conditioned on his
outcome, the initial state is rebuilt via compression/decompression of
maximally mixed and pure registers, and Bob's measurement record is
erased. The net investment w_inv must be nonnegative for every direction;
its closed forms are H(A,B) - S(rho) for classically correlated initial
states and H(A,B) for the pure entangled family.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .qcore import (
    BlochDirection,
    ClassicalMix,
    OutOfModelError,
    PureSchmidt,
    StateSpec,
    TwoQubitState,
    build_state,
    von_neumann_entropy,
)
from .workext import entropy_bundle, joint_distribution

FAMILY_CLASSICAL = "classical"
FAMILY_ENTANGLED_PURE = "entangled_pure"


@dataclass(frozen=True)
class CycleReport:
    """Per-direction work components of one extract-and-restore cycle (bits)."""

    extracted: float
    erasure_cost: float
    compression_consumed: float
    decompression_gained: float
    w_inv: float
    family: str


def _family_of(spec: StateSpec) -> str:
    if isinstance(spec, ClassicalMix):
        return FAMILY_CLASSICAL
    if isinstance(spec, PureSchmidt):
        return FAMILY_ENTANGLED_PURE
    raise OutOfModelError(
        f"cycle balance is defined only for classical mixtures and pure Schmidt "
        f"states, not {type(spec).__name__}"
    )


def _balance(rho: TwoQubitState, family: str, entropy: float, n: BlochDirection) -> CycleReport:
    bundle = entropy_bundle(joint_distribution(rho, n, n))
    extracted = 1.0 - bundle.h_a_given_b
    erasure = bundle.h_b
    if family == FAMILY_CLASSICAL:
        compression = 1.0 - entropy / 2.0
        decompression = entropy / 2.0
    else:
        # restoring the pure entangled state costs one full bit on Alice's side
        compression = 1.0
        decompression = 0.0
    w_inv = compression - decompression + erasure - extracted
    return CycleReport(
        extracted=extracted,
        erasure_cost=erasure,
        compression_consumed=compression,
        decompression_gained=decompression,
        w_inv=w_inv,
        family=family,
    )


def cycle_balance(spec: StateSpec, n: BlochDirection) -> CycleReport:
    """Work components of the cycle with both parties measuring along n."""
    family = _family_of(spec)
    rho = build_state(spec)
    return _balance(rho, family, von_neumann_entropy(rho), n)


def second_law_scan(spec: StateSpec, directions: Iterable[BlochDirection]) -> float:
    """Minimum net work investment over a plan of measurement directions."""
    family = _family_of(spec)
    rho = build_state(spec)
    entropy = von_neumann_entropy(rho)
    best = None
    for n in directions:
        w = _balance(rho, family, entropy, n).w_inv
        if best is None or w < best:
            best = w
    if best is None:
        raise OutOfModelError("direction plan is empty")
    return best
