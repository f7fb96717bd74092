"""Sliding-window Z transform and its comb operator.

The windowed transform of a length-N signal is

    S(z, n) = sum_{m=0}^{WIN-1} s(n+m) * z^(-m),   0 <= n <= N - WIN,

with the window slid one sample at a time. Subtracting z^(-1) times the
next window telescopes all interior terms, leaving the comb identity

    S(z, n) - S(z, n+1) * z^(-1) = s(n) - s(n+WIN) * z^(-WIN).

`comb_forward` evaluates the right-hand side directly, an O(N) pass that is
algebraically identical to the windowed-transform difference (the identity
itself is kept as a test, not as the production path). The comb sequence is
what instantaneous separation runs on; `comb_inverse` then rebuilds the
time-domain signal through the recursion

    s(n+WIN) = (s(n) - S'(n)) * z^WIN.

With 0 < z < 1 the recursion is stable: an error in the first WIN samples
shrinks by a factor z^WIN every WIN steps, which is why a zero initial
block works and why `burn_in_length` can bound the transient to any
tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .signals import Signal
from .sources import STREAM_Z, make_rng

__all__ = [
    "SztParams",
    "sample_z",
    "windowed_z",
    "comb_forward",
    "comb_inverse",
    "burn_in_length",
]

# z**(-win) must stay finite in float64: win * |ln z| < ln(max double) ~ 709.
_MAX_LOG_GAIN = 690.0


@dataclass(frozen=True)
class SztParams:
    """Window length, real transform point, and slide step (fixed at 1).

    `win` must be a power of two unless `allow_any_win` is set (the math
    itself does not require it; the flag exists for experimentation).
    """

    win: int
    z: float
    step: int = 1
    allow_any_win: bool = False

    def __post_init__(self):
        if self.win < 1 or self.win != int(self.win):
            raise ValueError(f"win must be a positive integer, got {self.win}")
        object.__setattr__(self, "win", int(self.win))
        if not self.allow_any_win and self.win & (self.win - 1):
            raise ValueError(
                f"win must be a power of two (got {self.win}); "
                "pass allow_any_win=True to override"
            )
        if not 0.0 < self.z < 1.0:
            raise ValueError(f"z must lie in (0, 1), got {self.z}")
        if -self.win * math.log(self.z) >= _MAX_LOG_GAIN:
            raise ValueError(
                f"z**(-win) overflows float64 for win={self.win}, z={self.z}; "
                f"need z > {math.exp(-_MAX_LOG_GAIN / self.win):.6f}"
            )
        if self.step != 1:
            raise ValueError(f"only step = 1 is supported, got {self.step}")


def sample_z(win: int, seed: int) -> float:
    """Draw a transform point uniformly from (z_min, 0.999).

    z_min = max(0.5, exp(-45/win)) keeps z**(-win) below e^45 ~ 3.5e19, so
    comb values stay far from float64 overflow even at win = 512.
    """
    if win < 1:
        raise ValueError(f"win must be >= 1, got {win}")
    z_min = max(0.5, math.exp(-45.0 / win))
    z_max = 0.999
    rng = make_rng(seed, STREAM_Z)
    z = float(rng.uniform(z_min, z_max))
    while z <= z_min:  # keep the interval open
        z = float(rng.uniform(z_min, z_max))
    return z


def windowed_z(s: Signal, p: SztParams, n: int) -> float:
    """Evaluate S(z, n) over the window s[n : n+win] (Horner in z^(-1))."""
    a = s.samples
    if not 0 <= n <= a.size - p.win:
        raise ValueError(
            f"window start {n} out of range [0, {a.size - p.win}] "
            f"for length {a.size}, win {p.win}"
        )
    zinv = 1.0 / p.z
    acc = 0.0
    for v in a[n : n + p.win][::-1]:
        acc = acc * zinv + v
    return float(acc)


def comb_forward(s: Signal, p: SztParams) -> Signal:
    """Comb sequence S'(n) = s(n) - s(n+win) * z^(-win), n = 0 .. N-win-1."""
    a = s.samples
    if a.size <= p.win:
        raise ValueError(f"need more than win={p.win} samples, got {a.size}")
    gain = p.z ** -p.win
    return Signal(a[: a.size - p.win] - a[p.win :] * gain, s.sample_rate_hz)


def comb_inverse(sprime: Signal, p: SztParams, init) -> Signal:
    """Invert the comb: s(n+win) = (s(n) - S'(n)) * z^win, seeded by `init`.

    `init` supplies the first win output samples. The recursion is linear in
    (S', init) jointly, so any scale factor on S' (e.g. the amplitude
    indeterminacy of blind separation) passes straight through.
    """
    init = np.asarray(init, dtype=np.float64)
    if init.shape != (p.win,):
        raise ValueError(f"init must hold exactly win={p.win} values, got shape {init.shape}")
    sp = sprime.samples
    if sp.size < 1:
        raise ValueError("comb_inverse needs a non-empty comb sequence")
    zw = p.z**p.win
    out = init.tolist()
    src = sp.tolist()
    for n in range(sp.size):
        out.append((out[n] - src[n]) * zw)
    return Signal(np.asarray(out), sprime.sample_rate_hz)


def burn_in_length(p: SztParams, tol: float, n_total: int) -> int:
    """Samples to discard while the zero-init inverse transient decays.

    Smallest multiple B = k*win of the window with z**B <= tol, capped at
    n_total // 4 so short runs still keep most of their samples.
    """
    if not 0.0 < tol <= 1.0:
        raise ValueError(f"tol must lie in (0, 1], got {tol}")
    if tol == 1.0:
        k = 0
    else:
        k = max(0, math.ceil(math.log(tol) / (p.win * math.log(p.z))))
    return min(k * p.win, n_total // 4)
