"""Hardware balance, arithmetic intensity, and compute-bound thresholds.

Intensity formulas assume a fused implementation that reads inputs and writes
outputs once. Attention counts only the two core matmuls (4*l^2*d FLOPs over
2*l*d*s bytes), so its intensity is 2*l/s regardless of width; the MLP moves
its weights too, giving f*l*d / ((f*d + l*(1+f)) * s).
"""

from __future__ import annotations

from dataclasses import dataclass

from .specs import DiTSpec, HardwareSpec

ATTENTION = "attention"
MLP = "mlp"
COMPUTE_BOUND = "compute_bound"
MEMORY_BOUND = "memory_bound"


@dataclass(frozen=True)
class BoundClassification:
    """Roofline regime of one operator at a given token length."""

    operator: str
    tokens: int
    intensity: float
    threshold: int
    regime: str

    def __post_init__(self) -> None:
        expected = COMPUTE_BOUND if self.tokens > self.threshold else MEMORY_BOUND
        if self.regime != expected:
            raise ValueError(f"regime {self.regime!r} inconsistent with tokens/threshold")


def balance(hw: HardwareSpec) -> float:
    """Hardware balance in FLOP/byte: peak throughput over bandwidth."""
    return hw.theta_peak / hw.bandwidth


def attn_intensity(tokens: int, scalar_bytes: int) -> float:
    """Attention-core arithmetic intensity: 2*l/s FLOP per byte."""
    if tokens < 1:
        raise ValueError("tokens must be at least 1")
    return 2 * tokens / scalar_bytes


def mlp_intensity(tokens: int, spec: DiTSpec, scalar_bytes: int) -> float:
    """Feed-forward arithmetic intensity: f*l*d / ((f*d + l*(1+f)) * s)."""
    if tokens < 1:
        raise ValueError("tokens must be at least 1")
    f = spec.mlp_expansion
    d = spec.hidden
    value = (f * tokens * d) / ((f * d + tokens * (1 + f)) * scalar_bytes)
    return float(value)


def mlp_saturation_intensity(spec: DiTSpec, scalar_bytes: int) -> float:
    """Large-token limit of the feed-forward intensity: f*d / ((1+f)*s)."""
    f = spec.mlp_expansion
    return float((f * spec.hidden) / ((1 + f) * scalar_bytes))


def thresholds(hw: HardwareSpec) -> tuple[int, int]:
    """Compute-bound token thresholds (attention, mlp).

    Attention crosses at l = s*beta/2 by inverting 2*l/s = beta. The MLP value
    uses the weight-dominated approximation l = s*beta, valid while activation
    traffic is small against weight traffic. Both derive from the balance
    rounded to an integer, mirroring how published threshold tables are built.
    """
    beta_int = round(balance(hw))
    s = hw.scalar_bytes
    return round(s * beta_int / 2), round(s * beta_int)


def mlp_threshold_exact(hw: HardwareSpec, spec: DiTSpec) -> float | None:
    """Token length solving mlp_intensity(l) = balance exactly.

    Returns None when the balance exceeds the saturation intensity, in which
    case the feed-forward block can never become compute-bound at this width.
    """
    beta = balance(hw)
    s = hw.scalar_bytes
    f = spec.mlp_expansion
    d = spec.hidden
    if mlp_saturation_intensity(spec, s) <= beta:
        return None
    numer = beta * s * float(f) * d
    denom = float(f) * d - beta * s * float(1 + f)
    return numer / denom


def classify(tokens: int, hw: HardwareSpec, spec: DiTSpec) -> list[BoundClassification]:
    """Regime of the attention and feed-forward blocks at a token length."""
    attn_thr, mlp_thr = thresholds(hw)
    s = hw.scalar_bytes
    out = []
    for operator, intensity, threshold in (
        (ATTENTION, attn_intensity(tokens, s), attn_thr),
        (MLP, mlp_intensity(tokens, spec, s), mlp_thr),
    ):
        regime = COMPUTE_BOUND if tokens > threshold else MEMORY_BOUND
        out.append(BoundClassification(operator, tokens, intensity, threshold, regime))
    return out
