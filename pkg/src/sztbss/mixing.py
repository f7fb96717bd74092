"""Convolutive (FIR) mixing of K sources through L delayed paths.

Each observation is x_i(n) = sum_j sum_l A[l][i,j] * s_j(n-l) with zero
prehistory (s(m) = 0 for m < 0). L = 1 is the instantaneous special case.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signals import MultiSignal
from .sources import STREAM_MIXER, make_rng

__all__ = ["ConvolutiveMixer", "random_mixer", "mix", "mixer_at_z"]


@dataclass(frozen=True)
class ConvolutiveMixer:
    """L path matrices of size K x K, coefficients[l][i, j] = gain of source
    j into observation i at delay l."""

    coefficients: np.ndarray

    def __post_init__(self):
        coeff = np.asarray(self.coefficients, dtype=np.float64)
        if coeff.ndim != 3 or coeff.shape[1] != coeff.shape[2]:
            raise ValueError(
                f"coefficients must have shape (L, K, K), got {coeff.shape}"
            )
        if coeff.shape[0] < 1 or coeff.shape[1] < 1:
            raise ValueError("need L >= 1 paths and K >= 1 channels")
        if not np.isfinite(coeff).all():
            raise ValueError("mixer coefficients must be finite")
        object.__setattr__(self, "coefficients", coeff)

    @property
    def n_paths(self) -> int:
        return self.coefficients.shape[0]

    @property
    def n_channels(self) -> int:
        return self.coefficients.shape[1]

    def to_dict(self) -> dict:
        return {
            "n_paths": self.n_paths,
            "n_channels": self.n_channels,
            "coefficients": self.coefficients.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ConvolutiveMixer":
        return cls(np.asarray(d["coefficients"], dtype=np.float64))


def random_mixer(k: int, l: int, seed: int) -> ConvolutiveMixer:
    """Mixer with every coefficient i.i.d. uniform on the open interval (0, 1)."""
    if k < 1 or l < 1:
        raise ValueError(f"need K >= 1 and L >= 1, got K={k}, L={l}")
    rng = make_rng(seed, STREAM_MIXER)
    coeff = rng.random((l, k, k))
    while (coeff == 0.0).any():  # keep the interval open
        zeros = coeff == 0.0
        coeff[zeros] = rng.random(int(zeros.sum()))
    return ConvolutiveMixer(coeff)


def mix(mixer: ConvolutiveMixer, sources: MultiSignal) -> MultiSignal:
    """Apply the FIR mixture; output has the same length as the input."""
    k = mixer.n_channels
    l = mixer.n_paths
    if sources.n_channels != k:
        raise ValueError(
            f"mixer expects {k} channels, sources have {sources.n_channels}"
        )
    s = sources.as_matrix()
    n = s.shape[1]
    if n < l:
        raise ValueError(f"need at least L={l} samples, got {n}")
    x = np.zeros_like(s)
    for lag in range(l):
        if lag == 0:
            x += mixer.coefficients[0] @ s
        else:
            x[:, lag:] += mixer.coefficients[lag] @ s[:, :-lag]
    return MultiSignal.from_matrix(x, sources.channels[0].sample_rate_hz)


def mixer_at_z(mixer: ConvolutiveMixer, z: float) -> np.ndarray:
    """System matrix A(z) = sum_l A[l] * z**(-l)."""
    if z == 0:
        raise ValueError("A(z) is undefined at z = 0")
    powers = float(z) ** -np.arange(mixer.n_paths, dtype=np.float64)
    return np.tensordot(powers, mixer.coefficients, axes=1)
