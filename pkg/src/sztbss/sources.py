"""Seeded source generators (QPSK, Gauss pulse trains, WGN) and AWGN.

Every generator is deterministic: the same seed and parameters give a
bit-identical sequence on any platform. Randomness comes from numpy's
Philox counter-based bit generator keyed with [seed, stream], where the
stream tag is fixed per operation (see `make_rng`), so e.g. a QPSK draw
and a WGN draw with the same seed stay statistically unrelated.
"""

from __future__ import annotations

import numpy as np

from .signals import Signal

__all__ = [
    "make_rng",
    "gen_qpsk",
    "gen_gauss_pulse_train",
    "gauss_pulse_centers",
    "gen_wgn",
    "awgn",
    "gen_audio_like",
    "QPSK_PHASES",
]

_MAX_SEED = 2**64 - 1

# Philox stream tags, one per operation.
STREAM_GENERIC = 0
STREAM_QPSK = 1
STREAM_GPULSE = 2
STREAM_WGN = 3
STREAM_AWGN = 4
STREAM_MIXER = 5
STREAM_Z = 6
STREAM_AUDIO = 7

QPSK_PHASES = np.pi * np.array([0.25, 0.75, 1.25, 1.75])


def make_rng(seed: int, stream: int = STREAM_GENERIC) -> np.random.Generator:
    """Philox generator keyed by (seed, stream)."""
    seed = int(seed)
    if not 0 <= seed <= _MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    key = np.array([seed, stream], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def gen_qpsk(n: int, sps: int, carrier: float, seed: int) -> Signal:
    """QPSK on a real carrier: cos(2*pi*carrier*k + phase of symbol k//sps).

    Symbol phases are drawn uniformly from {pi/4, 3pi/4, 5pi/4, 7pi/4};
    rectangular (no) pulse shaping, unit amplitude. `carrier` is a
    normalized frequency in cycles per sample, 0 < carrier < 0.5.
    """
    if sps < 1:
        raise ValueError(f"sps must be >= 1, got {sps}")
    if not 0.0 < carrier < 0.5:
        raise ValueError(f"carrier must lie in (0, 0.5), got {carrier}")
    if n < sps:
        raise ValueError(f"need n >= sps, got n={n}, sps={sps}")
    rng = make_rng(seed, STREAM_QPSK)
    n_symbols = -(-n // sps)
    symbols = rng.integers(0, 4, size=n_symbols)
    phase = np.repeat(QPSK_PHASES[symbols], sps)[:n]
    k = np.arange(n)
    return Signal(np.cos(2.0 * np.pi * carrier * k + phase))


def gauss_pulse_centers(n: int, n_pulses: int, width: float, seed: int) -> np.ndarray:
    """Integer pulse centers with pairwise spacing >= ~6*width.

    Placement uses the sorted-uniform-gap construction: each pulse owns a
    6*width slot, slots are separated by sorted uniform offsets drawn from
    the leftover space, so placement always succeeds when the pulses fit.
    """
    if width <= 0:
        raise ValueError(f"width must be positive, got {width}")
    if n_pulses < 1:
        raise ValueError(f"n_pulses must be >= 1, got {n_pulses}")
    span = 6.0 * width
    free = n - n_pulses * span
    if free < 0:
        raise ValueError(
            f"pulses cannot be placed without overlap: {n_pulses} pulses of "
            f"support {span:g} samples need {n_pulses * span:g} > n = {n}"
        )
    rng = make_rng(seed, STREAM_GPULSE)
    offsets = np.sort(rng.uniform(0.0, free, size=n_pulses))
    centers = offsets + np.arange(n_pulses) * span + span / 2.0
    return np.rint(centers).astype(int)


def gen_gauss_pulse_train(
    n: int, order: int, n_pulses: int, width: float, seed: int
) -> Signal:
    """Sparse train of unit-peak Gaussian-derivative pulses.

    order 1: -t * exp((1 - t^2)/2), the first Gaussian derivative scaled to
    peak +1 (at t = -1; the value at the pulse center is 0).
    order 2: (1 - t^2) * exp(-t^2/2), peak +1 at the center.
    t = (k - c) / width for center c.
    """
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    centers = gauss_pulse_centers(n, n_pulses, width, seed)
    k = np.arange(n, dtype=np.float64)
    out = np.zeros(n)
    for c in centers:
        t = (k - c) / width
        if order == 1:
            out += -t * np.exp((1.0 - t * t) / 2.0)
        else:
            out += (1.0 - t * t) * np.exp(-t * t / 2.0)
    return Signal(out)


def gen_wgn(n: int, variance: float, seed: int) -> Signal:
    """I.i.d. zero-mean Gaussian samples with the given variance."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if variance <= 0:
        raise ValueError(f"variance must be positive, got {variance}")
    rng = make_rng(seed, STREAM_WGN)
    return Signal(rng.normal(0.0, np.sqrt(variance), size=n))


def awgn(x: Signal, snr_db: float, seed: int) -> Signal:
    """Add white Gaussian noise at the requested SNR.

    Noise variance is power(x) / 10**(snr_db/10) with power(x) the mean
    square of x, so snr_db = 0 puts noise at exactly the measured signal
    power.
    """
    a = x.samples
    if a.size == 0:
        raise ValueError("awgn needs a non-empty signal")
    power = float(np.mean(a * a))
    if power == 0.0:
        raise ValueError("awgn is undefined for a zero-power signal")
    var = power / 10.0 ** (snr_db / 10.0)
    rng = make_rng(seed, STREAM_AWGN)
    return Signal(a + rng.normal(0.0, np.sqrt(var), size=a.size), x.sample_rate_hz)


def gen_audio_like(n: int, seed: int, sample_rate_hz: float = 44100.0) -> Signal:
    """Synthetic audio-like source: band-limited noise with burst envelopes.

    Stands in for downloaded sound clips in the first experiment preset so
    nothing depends on external files. White noise is low-passed by a
    one-pole filter and amplitude-modulated by a handful of raised-cosine
    bursts over a quiet floor, giving the heavy-tailed, locally stationary
    texture of field recordings.
    """
    if n < 16:
        raise ValueError(f"n must be >= 16, got {n}")
    from scipy.signal import lfilter

    rng = make_rng(seed, STREAM_AUDIO)
    noise = rng.normal(0.0, 1.0, size=n)
    alpha = 0.96
    smooth = lfilter([1.0 - alpha], [1.0, -alpha], noise)

    envelope = np.full(n, 0.03)
    n_bursts = max(2, n // 12_000)
    starts = np.sort(rng.integers(0, n, size=n_bursts))
    for s in starts:
        length = int(rng.integers(n // 100 + 2, n // 25 + 4))
        amp = rng.uniform(0.3, 1.0)
        stop = min(n, s + length)
        window = np.hanning(length)[: stop - s]
        envelope[s:stop] = np.maximum(envelope[s:stop], amp * window)

    out = smooth * envelope
    out *= 0.95 / np.abs(out).max()
    return Signal(out, sample_rate_hz)
