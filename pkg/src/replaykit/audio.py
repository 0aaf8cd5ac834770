"""Sampled-audio primitives: WAV I/O, resampling, and convolution.

Everything downstream (room simulation, device models, feature
extraction) moves data around as :class:`Waveform` and
:class:`ImpulseResponse` values, so the conventions pinned here are
load-bearing:

* samples are float64 in [-1, 1], mono;
* WAV files are written as 16-bit PCM little-endian, with
  round-half-away-from-zero quantization and saturation outside [-1, 1];
* reading divides 16-bit PCM by 32768 (lossless for every representable
  value, symmetric around zero);
* resampling is polyphase windowed-sinc (Kaiser, >= 60 dB stopband);
* convolution is FFT-based full convolution, length n + m - 1.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import signal as sps
from scipy.io import wavfile

from .errors import UnsupportedWavError, WavFormatError

PCM16_SCALE = 32768.0

# Stopband attenuation of the resampler's anti-alias filter, dB.
RESAMPLE_ATTEN_DB = 65.0


@dataclass
class Waveform:
    """Mono audio signal: float samples plus a sample rate in Hz."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.ndim != 1:
            raise ValueError("Waveform samples must be 1-D (mono)")
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        self.sample_rate = int(self.sample_rate)
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("Waveform samples contain NaN/Inf")

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate

    def __len__(self) -> int:
        return len(self.samples)


@dataclass
class ImpulseResponse:
    """Finite impulse response: filter taps plus a sample rate in Hz.

    A zero IR is representable (device models use all-zero nonlinear
    branches); anything with NaN/Inf or no taps at all is rejected.
    """

    taps: np.ndarray
    sample_rate: int

    def __post_init__(self):
        self.taps = np.asarray(self.taps, dtype=np.float64)
        if self.taps.ndim != 1 or len(self.taps) == 0:
            raise ValueError("ImpulseResponse taps must be a nonempty 1-D array")
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        self.sample_rate = int(self.sample_rate)
        if not np.all(np.isfinite(self.taps)):
            raise ValueError("ImpulseResponse taps contain NaN/Inf")

    @classmethod
    def zero(cls, n_taps: int, sample_rate: int) -> "ImpulseResponse":
        """The explicitly-constructed all-zero IR of length ``n_taps``."""
        return cls(np.zeros(n_taps), sample_rate)

    @classmethod
    def delta(cls, sample_rate: int, gain: float = 1.0, delay: int = 0) -> "ImpulseResponse":
        taps = np.zeros(delay + 1)
        taps[delay] = gain
        return cls(taps, sample_rate)

    @property
    def energy(self) -> float:
        return float(np.sum(self.taps**2))

    def __len__(self) -> int:
        return len(self.taps)

    def to_json(self) -> str:
        return json.dumps(
            {"sample_rate": self.sample_rate, "taps": self.taps.tolist()}
        )

    @classmethod
    def from_json(cls, text: str) -> "ImpulseResponse":
        obj = json.loads(text)
        return cls(np.asarray(obj["taps"], dtype=np.float64), int(obj["sample_rate"]))


def read_wav(path) -> Waveform:
    """Read a RIFF/WAVE file as a mono Waveform scaled to [-1, 1].

    Accepts 16-bit PCM and 32-bit float encodings.  Multi-channel files
    are reduced to channel 0 with a warning.
    """
    try:
        rate, data = wavfile.read(path)
    except FileNotFoundError:
        raise
    except Exception as exc:  # scipy raises bare ValueError on bad headers
        raise WavFormatError(f"{path}: not a readable WAV file ({exc})") from exc

    if data.ndim == 2:
        warnings.warn(f"{path}: {data.shape[1]} channels, using channel 0")
        data = data[:, 0]

    if data.dtype == np.int16:
        samples = data.astype(np.float64) / PCM16_SCALE
    elif data.dtype == np.float32:
        samples = data.astype(np.float64)
    else:
        raise UnsupportedWavError(
            f"{path}: unsupported sample encoding {data.dtype}; "
            "expected 16-bit PCM or 32-bit float"
        )
    return Waveform(samples, int(rate))


def write_wav(path, w: Waveform) -> None:
    """Write a Waveform as 16-bit PCM mono.

    Quantization is round-half-away-from-zero; values outside [-1, 1]
    saturate to the int16 limits.
    """
    x = w.samples * PCM16_SCALE
    q = np.sign(x) * np.floor(np.abs(x) + 0.5)
    q = np.clip(q, -32768, 32767).astype(np.int16)
    wavfile.write(path, w.sample_rate, q)


def _design_resample_filter(source_rate: int, target_rate: int, up: int):
    """Kaiser-window low-pass for polyphase resampling.

    The filter runs at rate ``source_rate * up``.  Passband edge sits at
    0.45 * min(rates) and the stopband starts at 0.5 * min(rates), which
    keeps ripple below 0.1 dB under 0.45 * min(rates) and attenuation
    above ~60 dB beyond the target Nyquist when downsampling.
    """
    min_rate = min(source_rate, target_rate)
    fs_up = source_rate * up
    pass_edge = 0.45 * min_rate
    stop_edge = 0.50 * min_rate
    width = (stop_edge - pass_edge) / (fs_up / 2.0)
    numtaps, beta = sps.kaiserord(RESAMPLE_ATTEN_DB, width)
    numtaps |= 1  # odd length, linear phase type I
    cutoff = (pass_edge + stop_edge) / 2.0
    return sps.firwin(numtaps, cutoff, window=("kaiser", beta), fs=fs_up)


def resample(w: Waveform, target_rate: int) -> Waveform:
    """Band-limited polyphase resampling to ``target_rate``.

    Output length is ceil(len * target / source).
    """
    if target_rate <= 0:
        raise ValueError(f"target_rate must be positive, got {target_rate}")
    if target_rate == w.sample_rate:
        return Waveform(w.samples.copy(), w.sample_rate)
    ratio = Fraction(int(target_rate), int(w.sample_rate))
    up, down = ratio.numerator, ratio.denominator
    h = _design_resample_filter(w.sample_rate, target_rate, up)
    y = sps.resample_poly(w.samples, up, down, window=h)
    return Waveform(y, int(target_rate))


def convolve(w: Waveform, ir: ImpulseResponse) -> Waveform:
    """Full linear convolution of a waveform with an IR (FFT-based).

    Output length is len(w) + len(ir) - 1.  Sample rates must match.
    """
    if w.sample_rate != ir.sample_rate:
        raise ValueError(
            f"sample-rate mismatch: waveform {w.sample_rate} Hz vs IR {ir.sample_rate} Hz"
        )
    y = sps.fftconvolve(w.samples, ir.taps, mode="full")
    return Waveform(y, w.sample_rate)


def peak_normalize_if_clipping(x: np.ndarray, headroom_db: float = 1.0) -> np.ndarray:
    """Scale down to ``-headroom_db`` dBFS only if |x| would clip."""
    peak = float(np.max(np.abs(x))) if len(x) else 0.0
    limit = 10.0 ** (-headroom_db / 20.0)
    if peak > 1.0:
        return x * (limit / peak)
    return x


def next_pow2(n: int) -> int:
    return 1 << max(0, math.ceil(math.log2(max(1, n))))
