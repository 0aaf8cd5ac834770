"""Countermeasure front-ends: constant-Q cepstral coefficients (CQCC)
and linear-frequency cepstral coefficients (LFCC), with delta appends.

Baseline dimensionalities: CQCC keeps 30 static coefficients (29 + 0th)
and LFCC 20 (19 + 0th); with deltas and delta-deltas that is 90 and 60
dimensions.

The constant-Q transform uses 96 bins per octave over 9 octaves below
the Nyquist frequency (864 geometrically spaced bins), per-bin analysis
windows inversely proportional to frequency (Q = 1/(2^(1/96) - 1)), and
a hop small enough that the shortest (highest-frequency) window
advances by at most 1/8 of its length per frame.  The CQCC pipeline
resamples each frame's log-power spectrum from the geometric bin grid
onto a uniform 864-point frequency grid with a cubic spline before the
DCT; that uniform grid is this implementation's pinned convention (see
the golden-file test).
"""

from __future__ import annotations

import hashlib
import math
import struct
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.fft import dct, ifft, next_fast_len, rfft
from scipy.interpolate import CubicSpline

from .audio import Waveform

LOG_FLOOR = 1e-10

FEATURE_MAGIC = b"RKF1"


@dataclass
class FeatureMatrix:
    """frames x dims feature table with its frame shift in seconds."""

    values: np.ndarray
    frame_shift: float

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2 or self.values.shape[0] < 1:
            raise ValueError("values must be a nonempty frames x dims matrix")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("feature values contain NaN/Inf")

    @property
    def frames(self) -> int:
        return self.values.shape[0]

    @property
    def dims(self) -> int:
        return self.values.shape[1]


@dataclass
class CqccConfig:
    f_max: float | None = None  # defaults to fs/2
    octaves: int = 9
    bins_per_octave: int = 96
    resample_period: int = 16
    n_static: int = 30

    @property
    def n_bins(self) -> int:
        return self.octaves * self.bins_per_octave


@dataclass
class LfccConfig:
    win_len: float = 0.020
    win_shift: float = 0.010
    n_fft: int = 512
    n_filters: int = 20
    n_static: int = 20


# ---------------------------------------------------------------------------
# constant-Q transform
# ---------------------------------------------------------------------------

_KERNEL_CACHE: dict = {}
_CEPSTRAL_CACHE: dict = {}


def _ladder_len(n: int, hop: int) -> int:
    """Smallest 2^k or 3*2^(k-1) >= n (both 5-smooth and hop-divisible).

    Quantizing FFT lengths to this ladder keeps the number of cached
    kernel plans small when a corpus has many distinct utterance
    lengths.
    """
    k = max(hop.bit_length(), math.ceil(math.log2(max(2, n))))
    three_quarters = 3 << (k - 2)
    return three_quarters if three_quarters >= n else 1 << k


def _cqt_geometry(fs: int, cfg: CqccConfig):
    """Bin frequencies, per-bin window lengths, and the frame hop."""
    f_max = cfg.f_max if cfg.f_max is not None else fs / 2.0
    f_min = f_max / 2.0**cfg.octaves
    freqs = f_min * 2.0 ** (np.arange(cfg.n_bins) / cfg.bins_per_octave)
    q = 1.0 / (2.0 ** (1.0 / cfg.bins_per_octave) - 1.0)
    win_lens = np.ceil(q * fs / freqs).astype(np.int64)
    hop = 1 << max(0, int(math.floor(math.log2(win_lens[-1] / 8.0))))
    return freqs, win_lens, int(hop), float(f_min), float(f_max)


def _hann_dirichlet(nu: np.ndarray, n: int) -> np.ndarray:
    """Spectrum of a centered length-n Hann window at normalized
    frequencies ``nu`` (cycles/sample), normalized to unit peak.

    For the symmetric sample grid the Dirichlet kernel
    D(nu) = sin(pi nu n) / sin(pi nu) is real, so the Hann spectrum is
    0.5 D(nu) + 0.25 D(nu - 1/n) + 0.25 D(nu + 1/n), divided by the
    window sum n/2.
    """

    def dirichlet(v):
        v = np.asarray(v, dtype=np.float64)
        s = np.sin(np.pi * v)
        out = np.where(
            np.abs(s) < 1e-12, n * np.cos(np.pi * v * n) / np.cos(np.pi * v), 0.0
        )
        safe = np.abs(s) >= 1e-12
        out = np.where(safe, np.sin(np.pi * v * n) / np.where(safe, s, 1.0), out)
        return out

    w = 0.5 * dirichlet(nu) + 0.25 * dirichlet(nu - 1.0 / n) + 0.25 * dirichlet(nu + 1.0 / n)
    return w / (n / 2.0)


def _cqt_plan(fs: int, cfg: CqccConfig, fft_len: int):
    """Per-bin spectral kernels for one FFT length, cached.

    Each CQT bin k is a Hann-windowed complex exponential at f_k whose
    spectrum occupies a narrow band around f_k; the band (trimmed at
    1e-4 of its peak) is stored as (start_bin, real coefficients).
    """
    key = (fs, cfg.f_max, cfg.octaves, cfg.bins_per_octave, fft_len)
    if key in _KERNEL_CACHE:
        return _KERNEL_CACHE[key]

    n_bins = cfg.n_bins
    freqs, win_lens, hop, f_min, f_max = _cqt_geometry(fs, cfg)
    sub_len = fft_len // hop

    df = fs / fft_len
    kernels = []
    for k in range(n_bins):
        n = int(win_lens[k])
        # generous evaluation band: +/- 12 mainlobe widths, capped so the
        # folded band cannot alias onto itself
        half_hz = min(12.0 * 2.0 * fs / n, (sub_len // 2 - 1) * df)
        lo = max(0, int(math.floor((freqs[k] - half_hz) / df)))
        hi = min(fft_len // 2, int(math.ceil((freqs[k] + half_hz) / df)))
        grid = np.arange(lo, hi + 1)
        vals = _hann_dirichlet((grid * df - freqs[k]) / fs, n)
        keep = np.abs(vals) >= 1e-4 * np.max(np.abs(vals))
        nz = np.nonzero(keep)[0]
        lo_k, hi_k = nz[0], nz[-1]
        kernels.append((int(lo + lo_k), vals[lo_k : hi_k + 1].astype(np.float64)))

    # Both the geometric-to-uniform cubic-spline resampling and the
    # truncated DCT are linear, so they collapse into one small matrix:
    # static cepstra = log-power  @  (DCT_keep @ spline).T
    cep_key = key[:4] + (cfg.n_static,)
    if cep_key not in _CEPSTRAL_CACHE:
        uniform = np.linspace(f_min, f_max, n_bins)
        basis = CubicSpline(freqs, np.eye(n_bins), axis=0, bc_type="natural")
        spline_matrix = basis(uniform)
        dct_matrix = dct(np.eye(n_bins), type=2, axis=0, norm="ortho")
        _CEPSTRAL_CACHE[cep_key] = (dct_matrix[: cfg.n_static] @ spline_matrix).T
    cepstral_matrix = _CEPSTRAL_CACHE[cep_key]

    plan = {
        "freqs": freqs,
        "hop": int(hop),
        "kernels": kernels,
        "sub_len": int(sub_len),
        "f_min": float(f_min),
        "f_max": float(f_max),
        "cepstral_matrix": cepstral_matrix,
    }
    _KERNEL_CACHE[key] = plan
    return plan


def cqt(w: Waveform, cfg: CqccConfig | None = None) -> np.ndarray:
    """Constant-Q transform: complex (frames x bins) matrix.

    Frames are centered every ``hop`` input samples starting at sample
    0; the signal is reflection-padded so even the longest low-frequency
    window is fully supported (with a warning when the utterance is
    shorter than that window).
    """
    cfg = cfg or CqccConfig()
    fs = w.sample_rate
    x = w.samples

    _, win_lens, hop, _, _ = _cqt_geometry(fs, cfg)
    longest = int(win_lens[0])
    if len(x) < longest:
        warnings.warn(
            f"utterance of {len(x)} samples is shorter than the longest "
            f"analysis window ({longest}); using reflection padding"
        )

    pad = int(math.ceil((longest // 2 + 1) / hop)) * hop
    if len(x) >= 2:
        padded = np.pad(x, pad, mode="reflect")
    else:
        padded = np.pad(x, pad, mode="edge")
    fft_len = _ladder_len(len(padded), hop)
    padded = np.pad(padded, (0, fft_len - len(padded)))

    plan = _cqt_plan(fs, cfg, fft_len)
    sub_len = plan["sub_len"]
    spec = rfft(padded)

    n_frames = len(x) // hop + 1
    first = pad // hop
    folded = np.zeros((cfg.n_bins, sub_len), dtype=np.complex64)
    for k, (lo, vals) in enumerate(plan["kernels"]):
        band = spec[lo : lo + len(vals)] * vals
        start = lo % sub_len
        n_first = min(len(band), sub_len - start)
        folded[k, start : start + n_first] = band[:n_first]
        if n_first < len(band):
            rest = band[n_first:]
            folded[k, : len(rest)] += rest
    y = ifft(folded, axis=1)
    return y[:, first : first + n_frames].T.astype(np.complex128) / hop


def cqcc(w: Waveform, cfg: CqccConfig | None = None) -> FeatureMatrix:
    """CQCC features: 3 * n_static dims (static + delta + delta-delta).

    Log power of the CQT (floored at 1e-10), cubic-spline resampled
    from the geometric bin frequencies onto a uniform 864-point grid
    spanning [f_min, f_max], orthonormal DCT-II, first ``n_static``
    coefficients kept.
    """
    cfg = cfg or CqccConfig()
    x = cqt(w, cfg)
    fs = w.sample_rate
    _, _, hop, _, _ = _cqt_geometry(fs, cfg)
    # any cached plan for this config carries the same cepstral matrix
    plan = next(
        v for k, v in _KERNEL_CACHE.items()
        if k[:4] == (fs, cfg.f_max, cfg.octaves, cfg.bins_per_octave)
    )
    log_p = np.log(np.maximum(np.abs(x) ** 2, LOG_FLOOR))
    static = log_p @ plan["cepstral_matrix"]
    return append_deltas(FeatureMatrix(static, hop / fs))


# ---------------------------------------------------------------------------
# LFCC
# ---------------------------------------------------------------------------

def _triangular_filterbank(n_filters: int, n_fft: int, fs: float) -> np.ndarray:
    """Linearly spaced 50%-overlap triangles over [0, fs/2]."""
    edges = np.linspace(0.0, fs / 2.0, n_filters + 2)
    bin_freqs = np.arange(n_fft // 2 + 1) * (fs / n_fft)
    bank = np.zeros((n_filters, len(bin_freqs)))
    for i in range(n_filters):
        left, center, right = edges[i], edges[i + 1], edges[i + 2]
        rising = (bin_freqs - left) / (center - left)
        falling = (right - bin_freqs) / (right - center)
        bank[i] = np.clip(np.minimum(rising, falling), 0.0, None)
    return bank


def lfcc(w: Waveform, cfg: LfccConfig | None = None) -> FeatureMatrix:
    """LFCC features: 3 * n_static dims (static + delta + delta-delta).

    20 ms Hamming frames at a 10 ms shift, 512-point FFT power
    spectrum, 20 linearly spaced triangular filters, log energies
    (floored at 1e-10), orthonormal DCT-II.
    """
    cfg = cfg or LfccConfig()
    fs = w.sample_rate
    frame_len = int(round(cfg.win_len * fs))
    shift = int(round(cfg.win_shift * fs))
    if len(w.samples) < frame_len:
        raise ValueError(
            f"signal of {len(w.samples)} samples is shorter than one "
            f"{frame_len}-sample frame"
        )
    n_frames = (len(w.samples) - frame_len) // shift + 1
    idx = np.arange(frame_len)[None, :] + shift * np.arange(n_frames)[:, None]
    frames = w.samples[idx] * np.hamming(frame_len)[None, :]
    power = np.abs(rfft(frames, n=cfg.n_fft, axis=1)) ** 2
    bank = _triangular_filterbank(cfg.n_filters, cfg.n_fft, fs)
    energies = power @ bank.T
    log_e = np.log(np.maximum(energies, LOG_FLOOR))
    cep = dct(log_e, type=2, axis=1, norm="ortho")
    static = cep[:, : cfg.n_static]
    return append_deltas(FeatureMatrix(static, cfg.win_shift))


def lfcc_frame_count(n_samples: int, cfg: LfccConfig | None = None, fs: int = 16000) -> int:
    """Closed-form frame count: floor((N - frame_len) / shift) + 1."""
    cfg = cfg or LfccConfig()
    frame_len = int(round(cfg.win_len * fs))
    shift = int(round(cfg.win_shift * fs))
    if n_samples < frame_len:
        return 0
    return (n_samples - frame_len) // shift + 1


# ---------------------------------------------------------------------------
# deltas
# ---------------------------------------------------------------------------

def _delta(m: np.ndarray) -> np.ndarray:
    """Two-adjacent-frame slope (x[t+1] - x[t-1]) / 2, edges replicated."""
    padded = np.vstack([m[:1], m, m[-1:]])
    return (padded[2:] - padded[:-2]) / 2.0


def append_deltas(f: FeatureMatrix) -> FeatureMatrix:
    """Append delta and delta-delta blocks: output dims = 3 x input dims."""
    if f.frames < 2:
        warnings.warn("single-frame features: deltas are zero")
    d1 = _delta(f.values)
    d2 = _delta(d1)
    return FeatureMatrix(np.hstack([f.values, d1, d2]), f.frame_shift)


# ---------------------------------------------------------------------------
# feature-file I/O
# ---------------------------------------------------------------------------

def write_features(path, f: FeatureMatrix) -> None:
    """Binary format: magic, dims u32, frames u32, float32 row-major."""
    with open(path, "wb") as fh:
        fh.write(FEATURE_MAGIC)
        fh.write(struct.pack("<II", f.dims, f.frames))
        fh.write(f.values.astype("<f4").tobytes())


def read_features(path, frame_shift: float = 0.0) -> FeatureMatrix:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != FEATURE_MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}")
        dims, frames = struct.unpack("<II", fh.read(8))
        data = np.frombuffer(fh.read(4 * dims * frames), dtype="<f4")
    return FeatureMatrix(data.reshape(frames, dims).astype(np.float64), frame_shift)


def write_features_csv(path, f: FeatureMatrix) -> None:
    np.savetxt(path, f.values, fmt="%.8g", delimiter=",")


def feature_hash(f: FeatureMatrix) -> str:
    return hashlib.sha256(f.values.astype("<f8").tobytes()).hexdigest()
