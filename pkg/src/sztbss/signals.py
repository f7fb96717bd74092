"""Signal containers, waveform CSV / WAV I/O, and correlation-based scoring.

The correlation coefficient C(x, y) = cov(x, y) / sqrt(cov(x,x) * cov(y,y))
is the performance index used everywhere in this package: separation quality
is the absolute correlation between each recovered channel and its
best-matching source. Covariances use the biased (1/N) estimator; the ratio
is estimator-invariant, the choice is documented for reproducibility.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "Signal",
    "MultiSignal",
    "CorrelationReport",
    "WavFormatError",
    "load_wav",
    "write_csv",
    "read_csv",
    "correlation",
    "match_and_score",
]


class WavFormatError(ValueError):
    """A WAV file exists but cannot be decoded into samples."""


def _as_sample_array(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"samples must be one-dimensional, got shape {arr.shape}")
    if arr.size and not np.isfinite(arr).all():
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise ValueError(f"samples must be finite, found {arr[bad]!r} at index {bad}")
    return arr


@dataclass(frozen=True)
class Signal:
    """A real-valued sample sequence with an optional sample rate in Hz."""

    samples: np.ndarray
    sample_rate_hz: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "samples", _as_sample_array(self.samples))
        if self.sample_rate_hz is not None and not self.sample_rate_hz > 0:
            raise ValueError(f"sample_rate_hz must be positive, got {self.sample_rate_hz}")

    def __len__(self) -> int:
        return int(self.samples.size)


@dataclass(frozen=True)
class MultiSignal:
    """K equal-length channels treated as one multichannel record."""

    channels: tuple[Signal, ...]

    def __post_init__(self):
        chans = tuple(
            ch if isinstance(ch, Signal) else Signal(ch) for ch in self.channels
        )
        if len(chans) < 1:
            raise ValueError("MultiSignal needs at least one channel")
        n = len(chans[0])
        for i, ch in enumerate(chans):
            if len(ch) != n:
                raise ValueError(
                    f"channel lengths differ: channel 0 has {n} samples, "
                    f"channel {i} has {len(ch)}"
                )
        object.__setattr__(self, "channels", chans)

    @property
    def n_channels(self) -> int:
        return len(self.channels)

    def __len__(self) -> int:
        return len(self.channels[0])

    def as_matrix(self) -> np.ndarray:
        """Channels stacked into a (K, N) float array."""
        return np.stack([ch.samples for ch in self.channels])

    @classmethod
    def from_matrix(cls, mat, sample_rate_hz: float | None = None) -> "MultiSignal":
        mat = np.atleast_2d(np.asarray(mat, dtype=np.float64))
        return cls(tuple(Signal(row, sample_rate_hz) for row in mat))


@dataclass(frozen=True)
class CorrelationReport:
    """Correlation scoring of recovered channels against reference sources.

    corr_matrix[i, j] holds C(recovered_i, source_j). `assignment` maps each
    recovered channel to its matched source; `matched_abs_corr` lists |C| of
    the matched pair for each source, in source order.
    """

    corr_matrix: np.ndarray
    assignment: tuple[int, ...]
    matched_abs_corr: tuple[float, ...]

    def __post_init__(self):
        cm = np.asarray(self.corr_matrix, dtype=np.float64)
        object.__setattr__(self, "corr_matrix", cm)
        if np.abs(cm).max() > 1.0 + 1e-12:
            raise ValueError(f"correlation entries must lie in [-1, 1], max |C| = {np.abs(cm).max()}")
        if sorted(self.assignment) != list(range(cm.shape[0])):
            raise ValueError(f"assignment {self.assignment} is not a permutation")
        object.__setattr__(self, "assignment", tuple(int(i) for i in self.assignment))
        object.__setattr__(
            self, "matched_abs_corr", tuple(float(v) for v in self.matched_abs_corr)
        )


def load_wav(path) -> Signal:
    """Load a mono waveform from a RIFF/WAVE file.

    Supports PCM 16-bit integer (normalized by 2**15 into [-1, 1]) and IEEE
    32-bit float encodings. The first channel is taken if the file is
    multichannel.
    """
    from scipy.io import wavfile

    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"WAV file not found: {path}")
    try:
        rate, data = wavfile.read(str(path))
    except Exception as exc:
        raise WavFormatError(f"{path}: unsupported encoding/corrupt header ({exc})") from exc
    if data.ndim == 2:
        data = data[:, 0]
    if data.dtype == np.int16:
        samples = data.astype(np.float64) / 32768.0
    elif data.dtype == np.float32:
        samples = data.astype(np.float64)
    else:
        raise WavFormatError(
            f"{path}: unsupported sample format {data.dtype}; "
            "expected 16-bit PCM or 32-bit float"
        )
    return Signal(samples, sample_rate_hz=float(rate))


def write_csv(ms: MultiSignal, path) -> None:
    """Write a waveform CSV: header `n,ch0,...`, one row per sample index.

    Values carry 10 significant digits so a write/parse round trip stays
    within 1e-9.
    """
    mat = ms.as_matrix()
    header = "n," + ",".join(f"ch{i}" for i in range(ms.n_channels))
    out = np.column_stack([np.arange(len(ms), dtype=np.float64), mat.T])
    np.savetxt(
        path,
        out,
        fmt=["%d"] + ["%.9e"] * ms.n_channels,
        delimiter=",",
        header=header,
        comments="",
        newline="\n",
    )


def read_csv(path) -> MultiSignal:
    """Parse a waveform CSV written by :func:`write_csv`."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty file, expected a waveform CSV")
    cols = lines[0].split(",")
    if cols[0] != "n" or len(cols) < 2 or any(
        c != f"ch{i}" for i, c in enumerate(cols[1:])
    ):
        raise ValueError(f"{path}: bad waveform CSV header {lines[0]!r}")
    k = len(cols) - 1
    if len(lines) == 1:
        return MultiSignal.from_matrix(np.zeros((k, 0)))
    data = np.loadtxt(lines[1:], delimiter=",", ndmin=2)
    if data.shape[1] != k + 1:
        raise ValueError(
            f"{path}: rows have {data.shape[1]} columns, header promises {k + 1}"
        )
    return MultiSignal.from_matrix(data[:, 1:].T)


def _centered(x: Signal) -> np.ndarray:
    a = x.samples
    if a.size < 2:
        raise ValueError(f"correlation needs at least 2 samples, got {a.size}")
    return a - a.mean()


def _check_variance(c: np.ndarray, scale: float, label: str) -> float:
    sxx = float(c @ c)
    eps = np.finfo(np.float64).eps
    if sxx <= (eps * c.size * scale) ** 2:
        raise ValueError(
            f"{label} has zero variance; the correlation coefficient is undefined"
        )
    return sxx


def correlation(x: Signal, y: Signal) -> float:
    """Correlation coefficient cov(x,y) / sqrt(cov(x,x) * cov(y,y)).

    Raises on length mismatch and on zero-variance input, where the
    coefficient is undefined (it is never silently reported as 0).
    """
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    xc = _centered(x)
    yc = _centered(y)
    sxx = _check_variance(xc, float(np.abs(x.samples).max()), "x")
    syy = _check_variance(yc, float(np.abs(y.samples).max()), "y")
    return float((xc @ yc) / math.sqrt(sxx * syy))


def _best_assignment(abs_corr: np.ndarray) -> tuple[int, ...]:
    """Permutation recovered->source maximizing the summed |C|.

    Exhaustive for K <= 4 (exact and cheap), greedy above.
    """
    k = abs_corr.shape[0]
    if k <= 4:
        best, best_sum = None, -np.inf
        for perm in itertools.permutations(range(k)):
            s = sum(abs_corr[i, perm[i]] for i in range(k))
            if s > best_sum:
                best, best_sum = perm, s
        return tuple(best)
    assign = [-1] * k
    taken = set()
    order = np.argsort(abs_corr.max(axis=1))[::-1]
    for i in order:
        j = max(
            (j for j in range(k) if j not in taken),
            key=lambda j: abs_corr[i, j],
        )
        assign[int(i)] = j
        taken.add(j)
    return tuple(assign)


def match_and_score(
    recovered: MultiSignal, sources: MultiSignal, burn_in: int
) -> CorrelationReport:
    """Score recovered channels against sources after a burn-in prefix.

    Correlations are computed on samples with index >= burn_in, channels are
    matched by the permutation maximizing total |C| (absorbing the
    permutation and sign/scale indeterminacy of blind separation).
    """
    if recovered.n_channels != sources.n_channels:
        raise ValueError(
            f"channel count mismatch: recovered {recovered.n_channels}, "
            f"sources {sources.n_channels}"
        )
    if len(recovered) != len(sources):
        raise ValueError(
            f"length mismatch: recovered {len(recovered)}, sources {len(sources)}"
        )
    if not 0 <= burn_in < len(recovered):
        raise ValueError(f"burn_in {burn_in} out of range for length {len(recovered)}")
    k = recovered.n_channels
    rec = [Signal(ch.samples[burn_in:]) for ch in recovered.channels]
    src = [Signal(ch.samples[burn_in:]) for ch in sources.channels]
    corr = np.array([[correlation(rec[i], src[j]) for j in range(k)] for i in range(k)])
    assignment = _best_assignment(np.abs(corr))
    matched = [0.0] * k
    for i, j in enumerate(assignment):
        matched[j] = abs(corr[i, j])
    return CorrelationReport(corr, assignment, tuple(matched))
