"""Pinned numerical tolerances shared by every module."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Tolerance ledger.

    hermitian
        max |H - H^dagger| entry accepted as Hermitian.
    trace
        allowed |tr(rho) - 1|.
    psd
        slack on the smallest eigenvalue (min eig >= -psd).
    rank
        relative singular-value threshold for numerical rank.
    verdict
        a criterion detects only when its value clears this margin.
    clamp
        tiny negative radicands within this slack are clamped to zero.
    """

    hermitian: float = 1e-10
    trace: float = 1e-10
    psd: float = 1e-10
    rank: float = 1e-10
    verdict: float = 1e-9
    clamp: float = 1e-9


DEFAULT_TOLERANCES = Tolerances()
